//! Differential forms on affine space over F_p, the Cartier operator, the
//! towers `B_nΩ^i ⊆ Z_nΩ^i`, and Serre's map from Witt vectors to `B_nΩ^1`.
//!
//! Every computation here is driven by the multidegree of a monomial form:
//! `x^a dx_K` has multidegree `a + e_K`, and `d` preserves it. A closed form
//! splits into its multidegree-`≡ 0 (mod p)` part, on which the Cartier
//! operator acts by `x^(pb + (p-1)e_K) dx_K ↦ x^b dx_K`, and the rest, which is
//! exact: on a closed form of multidegree `α` with `α_m ≢ 0`, Cartan's formula
//! for the Euler field `x_m ∂_m` gives `ω = d(ι ω) / α_m`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field;
use crate::poly::{write_monomial, Monomial, Poly, PolyRing};
use crate::witt::WittVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartierError {
    #[error("form is not closed")]
    NotClosed,
    #[error("form is not exact")]
    NotExact,
    #[error("form does not lie in B_{0}")]
    NotInB(usize),
    #[error("index set {0:?} is not strictly increasing within {1} variables")]
    BadIndexSet(Vec<usize>, usize),
    #[error("degree mismatch ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("forms live over different rings")]
    RingMismatch,
    #[error("Serre's map needs a Witt vector over the form's ring")]
    WittRing,
    #[error("non-conforming residue failed the exactness check")]
    ResidueNotExact,
}

/// Strictly increasing variable indices `k_1 < ... < k_i` standing for
/// `dx_{k_1} ∧ ... ∧ dx_{k_i}`.
pub type IndexSet = Vec<usize>;

/// A differential `i`-form `Σ_K f_K dx_K` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffForm {
    ring: Arc<PolyRing>,
    degree: usize,
    terms: BTreeMap<IndexSet, Poly>,
}

impl DiffForm {
    pub fn zero(ring: &Arc<PolyRing>, degree: usize) -> Self {
        DiffForm {
            ring: ring.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn function(f: &Poly) -> Self {
        let mut form = Self::zero(f.ring(), 0);
        form.insert(Vec::new(), f.clone());
        form
    }

    /// `dx_k`.
    pub fn dx(ring: &Arc<PolyRing>, k: usize) -> Self {
        let mut form = Self::zero(ring, 1);
        form.insert(vec![k], Poly::one(ring));
        form
    }

    /// `f dx_{k_1} ∧ ... ∧ dx_{k_i}` for an arbitrary index list; repeated
    /// indices give zero and the sign of the sorting permutation is applied.
    pub fn monomial_form(f: &Poly, indices: &[usize]) -> Result<Self, CartierError> {
        let n = f.ring().nvars();
        if indices.iter().any(|&k| k >= n) {
            return Err(CartierError::BadIndexSet(indices.to_vec(), n));
        }
        let mut form = Self::zero(f.ring(), indices.len());
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            let coeff = if sign { -f } else { f.clone() };
            form.insert(sorted, coeff);
        }
        Ok(form)
    }

    pub fn from_terms(
        ring: &Arc<PolyRing>,
        degree: usize,
        terms: impl IntoIterator<Item = (IndexSet, Poly)>,
    ) -> Result<Self, CartierError> {
        let mut form = Self::zero(ring, degree);
        for (k, f) in terms {
            let valid = k.len() == degree
                && k.windows(2).all(|w| w[0] < w[1])
                && k.iter().all(|&i| i < ring.nvars());
            if !valid {
                return Err(CartierError::BadIndexSet(k, ring.nvars()));
            }
            if **f.ring() != **ring {
                return Err(CartierError::RingMismatch);
            }
            form.insert(k, f);
        }
        Ok(form)
    }

    fn insert(&mut self, k: IndexSet, f: Poly) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            Some(old) => {
                let sum = &old + &f;
                if !sum.is_zero() {
                    self.terms.insert(k, sum);
                }
            }
            None => {
                self.terms.insert(k, f);
            }
        }
    }

    fn insert_monomial(&mut self, k: IndexSet, c: u64, m: Monomial) {
        let f = Poly::monomial(&self.ring, c, m);
        self.insert(k, f);
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Poly)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: &[usize]) -> Poly {
        self.terms.get(k).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    /// For a 0-form, its function.
    pub fn as_function(&self) -> Option<Poly> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    /// Iterates over `(K, c, a)` for every monomial term `c x^a dx_K`.
    pub fn monomial_terms(&self) -> impl Iterator<Item = (&IndexSet, u64, &Monomial)> + '_ {
        self.terms
            .iter()
            .flat_map(|(k, f)| f.terms().map(move |(m, c)| (k, c, m)))
    }

    fn check(&self, other: &DiffForm) -> Result<(), CartierError> {
        if *self.ring != *other.ring {
            return Err(CartierError::RingMismatch);
        }
        if self.degree != other.degree {
            return Err(CartierError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DiffForm) -> Result<DiffForm, CartierError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.insert(k.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &DiffForm) -> Result<DiffForm, CartierError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.scale(&Poly::constant(&self.ring, -1))
    }

    /// Multiplication by a function.
    pub fn scale(&self, f: &Poly) -> DiffForm {
        let mut out = Self::zero(&self.ring, self.degree);
        for (k, g) in &self.terms {
            out.insert(k.clone(), g * f);
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm, CartierError> {
        if *self.ring != *other.ring {
            return Err(CartierError::RingMismatch);
        }
        let mut out = Self::zero(&self.ring, self.degree + other.degree);
        for (ka, fa) in &self.terms {
            for (kb, fb) in &other.terms {
                let joined: Vec<usize> = ka.iter().chain(kb).copied().collect();
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    let prod = fa * fb;
                    out.insert(sorted, if sign { -&prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> DiffForm {
        let p = self.ring.p();
        let mut out = Self::zero(&self.ring, self.degree + 1);
        for (k, c, a) in self.monomial_terms() {
            for m in 0..self.ring.nvars() {
                let e = a.exp(m);
                if e % p == 0 || k.contains(&m) {
                    continue;
                }
                let before = k.iter().filter(|&&j| j < m).count();
                let mut idx = k.clone();
                idx.insert(before, m);
                let mut coeff = field::mul(c, e % p, p);
                if before % 2 == 1 {
                    coeff = field::neg(coeff, p);
                }
                out.insert_monomial(idx, coeff, a.with_exp(m, e - 1));
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Splits into the part whose multidegree is `≡ 0 (mod p)` in every
    /// variable and the remainder.
    pub fn split_conforming(&self) -> (DiffForm, DiffForm) {
        let p = self.ring.p();
        let mut conforming = Self::zero(&self.ring, self.degree);
        let mut rest = Self::zero(&self.ring, self.degree);
        for (k, c, a) in self.monomial_terms() {
            let target = if multidegree(a, k).iter().all(|e| e % p == 0) {
                &mut conforming
            } else {
                &mut rest
            };
            target.insert_monomial(k.clone(), c, a.clone());
        }
        (conforming, rest)
    }

    /// For a closed form with no conforming part, a potential `η` with
    /// `dη = self`, built by contracting with Euler fields multidegree by
    /// multidegree. The result is checked.
    pub fn potential(&self) -> Result<DiffForm, CartierError> {
        if self.degree == 0 {
            return if self.is_zero() {
                Ok(Self::zero(&self.ring, 0))
            } else {
                Err(CartierError::NotExact)
            };
        }
        let p = self.ring.p();
        let mut eta = Self::zero(&self.ring, self.degree - 1);
        for (k, c, a) in self.monomial_terms() {
            let alpha = multidegree(a, k);
            let Some(m) = alpha.iter().position(|e| e % p != 0) else {
                return Err(CartierError::NotExact);
            };
            let Some(t) = k.iter().position(|&j| j == m) else {
                continue;
            };
            let mut coeff = field::mul(c, field::inv(alpha[m] % p, p), p);
            if t % 2 == 1 {
                coeff = field::neg(coeff, p);
            }
            let mut idx = k.clone();
            idx.remove(t);
            eta.insert_monomial(idx, coeff, a.with_exp(m, a.exp(m) + 1));
        }
        if eta.d() != *self {
            return Err(CartierError::NotExact);
        }
        Ok(eta)
    }

    /// The Cartier operator on a closed form.
    pub fn cartier(&self) -> Result<DiffForm, CartierError> {
        if !self.is_closed() {
            return Err(CartierError::NotClosed);
        }
        let (conforming, rest) = self.split_conforming();
        if !rest.is_zero() && rest.potential().is_err() {
            return Err(CartierError::ResidueNotExact);
        }
        let p = self.ring.p();
        let mut out = Self::zero(&self.ring, self.degree);
        for (k, c, a) in conforming.monomial_terms() {
            let alpha = multidegree(a, k);
            let mut exps: Vec<u64> = alpha.iter().map(|e| e / p).collect();
            for &j in k {
                exps[j] -= 1;
            }
            out.insert_monomial(k.clone(), c, Monomial::new(exps));
        }
        Ok(out)
    }

    /// A form `ω` with `C(ω) = self`: each term `c x^b dx_K` lifts to
    /// `c x^(pb + (p-1)e_K) dx_K`.
    pub fn cartier_lift(&self) -> DiffForm {
        let p = self.ring.p();
        let mut out = Self::zero(&self.ring, self.degree);
        for (k, c, b) in self.monomial_terms() {
            let mut exps: Vec<u64> = b.exps().iter().map(|e| e * p).collect();
            for &j in k {
                exps[j] += p - 1;
            }
            out.insert_monomial(k.clone(), c, Monomial::new(exps));
        }
        out
    }

    /// Membership in `Z_nΩ^i`: `C` can be applied `n` times with every
    /// intermediate form closed. On success also returns `C^n(ω)`.
    pub fn zn_membership(&self, n: usize) -> (bool, Option<DiffForm>) {
        let mut current = self.clone();
        for _ in 0..n {
            match current.cartier() {
                Ok(next) => current = next,
                Err(_) => return (false, None),
            }
        }
        (true, Some(current))
    }

    /// Membership in `B_nΩ^i = (C^n)^{-1}(0)`.
    pub fn bn_membership(&self, n: usize) -> bool {
        match self.zn_membership(n) {
            (true, Some(image)) => image.is_zero(),
            _ => false,
        }
    }
}

/// Serre's map `F_*W_nO → B_nΩ^1`,
/// `(f_0, ..., f_{n-1}) ↦ Σ_i f_i^(p^(n-1-i) - 1) df_i`.
pub fn serre_map(w: &WittVec) -> DiffForm {
    let ring = w.ring();
    let p = ring.p();
    let n = w.len();
    let mut out = DiffForm::zero(ring, 1);
    for (i, f) in w.components().iter().enumerate() {
        let e = p.pow((n - 1 - i) as u32) - 1;
        let df = DiffForm::function(f).d();
        out = out.try_add(&df.scale(&f.pow(e))).expect("same ring and degree");
    }
    out
}

/// A Witt vector `w` of length `n` with `serre_map(w) = ω`, for
/// `ω ∈ B_nΩ^1`.
pub fn serre_preimage(omega: &DiffForm, n: usize) -> Result<WittVec, CartierError> {
    if omega.degree() != 1 {
        return Err(CartierError::DegreeMismatch(omega.degree(), 1));
    }
    if n == 0 || !omega.bn_membership(n) {
        return Err(CartierError::NotInB(n));
    }
    let ring = omega.ring();
    let mut comps: Vec<Poly> = Vec::with_capacity(n);
    if n > 1 {
        let head = serre_preimage(&omega.cartier()?, n - 1)?;
        comps.extend(head.components().iter().cloned());
    }
    // ω - Σ_{i<n-1} f_i^(p^(n-1-i)-1) df_i lies in B_1 = Im d.
    let partial = {
        let mut padded = comps.clone();
        padded.push(Poly::zero(ring));
        serre_map(&WittVec::new(padded).map_err(|_| CartierError::WittRing)?)
    };
    let rest = omega.try_sub(&partial)?;
    let last = rest.potential()?.as_function().expect("potential of a 1-form");
    comps.push(last);
    WittVec::new(comps).map_err(|_| CartierError::WittRing)
}

fn multidegree(a: &Monomial, k: &[usize]) -> Vec<u64> {
    let mut alpha = a.exps().to_vec();
    for &j in k {
        alpha[j] += 1;
    }
    alpha
}

/// Sorts `indices`; returns `None` on a repeat, otherwise the sorted list and
/// whether the permutation was odd.
fn sort_with_sign(indices: &[usize]) -> Option<(IndexSet, bool)> {
    let mut v = indices.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

impl fmt::Display for DiffForm {
    /// Renders `c*x^a dx∧dy` terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let vars = self.ring.vars();
        let mut first = true;
        for (k, poly) in &self.terms {
            for (m, c) in poly.rendering_order() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                let has_mono = !m.is_one();
                if c != 1 || (!has_mono && k.is_empty()) {
                    write!(f, "{c}")?;
                    if has_mono {
                        f.write_str("*")?;
                    }
                }
                write_monomial(f, vars, m)?;
                if !k.is_empty() {
                    if has_mono || c != 1 {
                        f.write_str(" ")?;
                    }
                    for (t, &j) in k.iter().enumerate() {
                        if t > 0 {
                            f.write_str("∧")?;
                        }
                        write!(f, "d{}", vars[j])?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64) -> Arc<PolyRing> {
        PolyRing::new(p, &["x", "y"]).unwrap()
    }

    fn poly(text: &str, r: &Arc<PolyRing>) -> Poly {
        Poly::parse(text, r).unwrap()
    }

    fn one_form(r: &Arc<PolyRing>, fx: &str, fy: &str) -> DiffForm {
        DiffForm::from_terms(r, 1, [(vec![0], poly(fx, r)), (vec![1], poly(fy, r))]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let r = ring(3);
        let d = DiffForm::function(&poly("x^2*y", &r)).d();
        assert_eq!(d, one_form(&r, "2*x*y", "x^2"));
        assert_eq!(d.to_string(), "2*x*y dx + x^2 dy");
        assert!(DiffForm::function(&poly("x^3", &r)).d().is_zero());
        let ydx = one_form(&r, "y", "0");
        let expected = DiffForm::from_terms(&r, 2, [(vec![0, 1], poly("-1", &r))]).unwrap();
        assert_eq!(ydx.d(), expected);
        assert_eq!(expected.to_string(), "2 dx∧dy");
    }

    #[test]
    fn cartier_examples() {
        let r = ring(3);
        assert_eq!(one_form(&r, "x^2", "0").cartier().unwrap(), DiffForm::dx(&r, 0));
        assert!(one_form(&r, "x", "0").cartier().unwrap().is_zero());
        assert_eq!(one_form(&r, "x^5", "0").cartier().unwrap(), one_form(&r, "x", "0"));
        assert_eq!(one_form(&r, "y", "0").cartier(), Err(CartierError::NotClosed));
    }

    #[test]
    fn cartier_is_frobenius_semilinear() {
        let r = ring(3);
        let omega = one_form(&r, "x^2*y^3 + x^5", "2*x^3*y^2");
        assert!(omega.is_closed());
        let f = poly("x + 2*y^2", &r);
        let twisted = omega.scale(&f.frobenius_power(1));
        assert_eq!(twisted.cartier().unwrap(), omega.cartier().unwrap().scale(&f));
    }

    #[test]
    fn tower_membership() {
        let r = ring(3);
        let (ok, img) = one_form(&r, "x^8", "0").zn_membership(2);
        assert!(ok);
        assert_eq!(img.unwrap(), DiffForm::dx(&r, 0));
        for n in 0..4 {
            let (ok, img) = DiffForm::dx(&r, 0).zn_membership(n);
            assert!(ok);
            if n == 0 {
                assert_eq!(img.unwrap(), DiffForm::dx(&r, 0));
            }
        }
        assert_eq!(one_form(&r, "y", "0").zn_membership(1), (false, None));

        assert!(DiffForm::dx(&r, 0).bn_membership(1));
        let xp = one_form(&r, "x^2", "0");
        assert!(!xp.bn_membership(1));
        assert!(xp.bn_membership(2));
        assert!(!xp.bn_membership(0));
        assert!(DiffForm::zero(&r, 1).bn_membership(0));
    }

    #[test]
    fn serre_map_examples() {
        let r = ring(2);
        let f = poly("x*y + y^3", &r);
        let w1 = WittVec::teichmuller(&f, 1);
        assert_eq!(serre_map(&w1), DiffForm::function(&f).d());
        let w = WittVec::new(vec![poly("x", &r), poly("y^2", &r)]).unwrap();
        assert_eq!(serre_map(&w), one_form(&r, "x", "0"));
        let r3 = ring(3);
        let w3 = WittVec::new(vec![poly("x", &r3), poly("y", &r3)]).unwrap();
        assert!(serre_map(&w3.frobenius()).is_zero());
    }

    #[test]
    fn serre_preimage_recovers_form() {
        let r = ring(3);
        let w = WittVec::new(vec![poly("x*y + 1", &r), poly("x^2 + y", &r)]).unwrap();
        let omega = serre_map(&w);
        let back = serre_preimage(&omega, 2).unwrap();
        assert_eq!(serre_map(&back), omega);
        assert_eq!(serre_preimage(&one_form(&r, "x^2", "0"), 1), Err(CartierError::NotInB(1)));
    }

    #[test]
    fn potentials() {
        let r = ring(5);
        let exact = DiffForm::function(&poly("x^2*y^3 + 3*x*y", &r)).d();
        let eta = exact.potential().unwrap();
        assert_eq!(eta.d(), exact);
        assert_eq!(one_form(&r, "x^4", "0").potential(), Err(CartierError::NotExact));
    }

    #[test]
    fn wedge_signs() {
        let r = ring(3);
        let dx = DiffForm::dx(&r, 0);
        let dy = DiffForm::dx(&r, 1);
        assert_eq!(dy.wedge(&dx).unwrap(), dx.wedge(&dy).unwrap().neg());
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let f = DiffForm::monomial_form(&poly("x", &r), &[1, 0]).unwrap();
        assert_eq!(f, dx.wedge(&dy).unwrap().scale(&poly("-x", &r)));
    }
}
