//! Truncated p-typical Witt vectors over polynomial rings `F_p[x_1, ..., x_d]`.
//!
//! Sums and products are computed with the ghost map: lift components to the
//! integers, combine ghost components, and solve the ghost recursion back one
//! component at a time. Everything happens modulo `p^n` for a vector of length
//! `n`, which is enough because each component of the result only depends on
//! the ghost components modulo `p^(k+1)`, and `a ≡ b (mod p)` implies
//! `a^(p^j) ≡ b^(p^j) (mod p^(j+1))`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::poly::{Monomial, Poly, PolyRing, ZPoly};

/// Default cap on Witt vector length.
pub const DEFAULT_MAX_LENGTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("Witt vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("Witt vectors live over different rings")]
    RingMismatch,
    #[error("Witt vector length must be at least 1")]
    Empty,
    #[error("Witt vector length {0} exceeds the cap {1}")]
    TooLong(usize, usize),
    #[error("p^n = {p}^{n} does not fit the 64-bit working modulus")]
    ModulusTooLarge { p: u64, n: usize },
    #[error("restriction of a length-1 Witt vector")]
    RestrictTooShort,
    #[error("malformed Witt vector text: {0}")]
    Syntax(String),
    #[error(transparent)]
    Parse(#[from] crate::poly::ParseError),
}

/// A Witt vector `(a_0, ..., a_{n-1})` with polynomial components.
#[derive(Clone, PartialEq, Eq)]
pub struct WittVec {
    ring: Arc<PolyRing>,
    comps: Vec<Poly>,
}

/// Exact integer ghost components `w_k = Σ_{i≤k} p^i ã_i^(p^(k-i))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GhostVec {
    pub components: Vec<ZPoly>,
}

impl WittVec {
    pub fn new(components: Vec<Poly>) -> Result<Self, WittError> {
        let ring = components.first().ok_or(WittError::Empty)?.ring().clone();
        if components.iter().any(|c| **c.ring() != *ring) {
            return Err(WittError::RingMismatch);
        }
        Ok(WittVec { ring, comps: components })
    }

    pub fn zero(ring: &Arc<PolyRing>, n: usize) -> Self {
        assert!(n >= 1, "Witt vector length must be at least 1");
        WittVec {
            ring: ring.clone(),
            comps: vec![Poly::zero(ring); n],
        }
    }

    pub fn one(ring: &Arc<PolyRing>, n: usize) -> Self {
        Self::teichmuller(&Poly::one(ring), n)
    }

    /// The element `p = (0, 1, 0, ..., 0)`; zero when `n = 1`.
    pub fn p_element(ring: &Arc<PolyRing>, n: usize) -> Self {
        let mut w = Self::zero(ring, n);
        if n > 1 {
            w.comps[1] = Poly::one(ring);
        }
        w
    }

    /// Teichmüller lift `[f] = (f, 0, ..., 0)`.
    pub fn teichmuller(f: &Poly, n: usize) -> Self {
        let mut w = Self::zero(f.ring(), n);
        w.comps[0] = f.clone();
        w
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    fn p(&self) -> u64 {
        self.ring.p()
    }

    fn compatible(&self, other: &WittVec) -> Result<(), WittError> {
        if self.len() != other.len() {
            return Err(WittError::LengthMismatch(self.len(), other.len()));
        }
        if *self.ring != *other.ring {
            return Err(WittError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &WittVec) -> Result<WittVec, WittError> {
        self.compatible(other)?;
        let ctx = GhostCtx::new(self.p(), self.len())?;
        let gu = ctx.ghost(self);
        let gv = ctx.ghost(other);
        let sum: Vec<ModPoly> = gu.iter().zip(&gv).map(|(a, b)| a.add(b, ctx.modulus)).collect();
        Ok(ctx.solve(&self.ring, &sum))
    }

    pub fn neg(&self) -> Result<WittVec, WittError> {
        let ctx = GhostCtx::new(self.p(), self.len())?;
        let g: Vec<ModPoly> = ctx.ghost(self).iter().map(|a| a.neg(ctx.modulus)).collect();
        Ok(ctx.solve(&self.ring, &g))
    }

    pub fn sub(&self, other: &WittVec) -> Result<WittVec, WittError> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &WittVec) -> Result<WittVec, WittError> {
        self.compatible(other)?;
        let ctx = GhostCtx::new(self.p(), self.len())?;
        let gu = ctx.ghost(self);
        let gv = ctx.ghost(other);
        let prod: Vec<ModPoly> = gu.iter().zip(&gv).map(|(a, b)| a.mul(b, ctx.modulus)).collect();
        Ok(ctx.solve(&self.ring, &prod))
    }

    /// Frobenius: componentwise p-th power.
    pub fn frobenius(&self) -> WittVec {
        WittVec {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|c| c.frobenius_power(1)).collect(),
        }
    }

    /// Verschiebung `W_n → W_{n+1}`: `(a_0, ..., a_{n-1}) ↦ (0, a_0, ..., a_{n-1})`.
    pub fn verschiebung(&self) -> WittVec {
        let mut comps = Vec::with_capacity(self.len() + 1);
        comps.push(Poly::zero(&self.ring));
        comps.extend(self.comps.iter().cloned());
        WittVec {
            ring: self.ring.clone(),
            comps,
        }
    }

    /// Restriction `W_n → W_{n-1}`, dropping the last component.
    pub fn restriction(&self) -> Result<WittVec, WittError> {
        if self.len() < 2 {
            return Err(WittError::RestrictTooShort);
        }
        Ok(WittVec {
            ring: self.ring.clone(),
            comps: self.comps[..self.len() - 1].to_vec(),
        })
    }

    /// Pads with zero components (equivalently, views `(a_0, ..., a_{n-1})` as
    /// an element of a longer ring whose extra components vanish).
    pub fn extend_to(&self, n: usize) -> WittVec {
        let mut comps = self.comps.clone();
        comps.resize(n.max(self.len()), Poly::zero(&self.ring));
        WittVec {
            ring: self.ring.clone(),
            comps,
        }
    }

    /// Exact integer ghost components of the `[0, p)` lift.
    pub fn ghost_components(&self) -> GhostVec {
        let p = BigInt::from(self.p());
        let lifts: Vec<ZPoly> = self.comps.iter().map(Poly::lift).collect();
        let mut components = Vec::with_capacity(self.len());
        // powers[i] holds ã_i^(p^(k-i)) for the current k.
        let mut powers: Vec<ZPoly> = Vec::with_capacity(self.len());
        for (k, lift) in lifts.iter().enumerate() {
            for pw in powers.iter_mut() {
                *pw = pw.pow(self.p());
            }
            powers.push(lift.clone());
            let mut w = ZPoly::zero(&self.ring);
            let mut scale = BigInt::one();
            for pw in powers.iter().take(k + 1) {
                w = &w + &pw.scale(&scale);
                scale *= &p;
            }
            components.push(w);
        }
        GhostVec { components }
    }

    /// Parses `[f]` (Teichmüller lift, padded to length `n`) or an explicit
    /// vector `(a_0; a_1; ...)`.
    pub fn parse(text: &str, ring: &Arc<PolyRing>, n: usize) -> Result<WittVec, WittError> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if n == 0 {
                return Err(WittError::Empty);
            }
            return Ok(WittVec::teichmuller(&Poly::parse(inner, ring)?, n));
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let comps = inner
                .split(';')
                .map(|c| Poly::parse(c, ring))
                .collect::<Result<Vec<_>, _>>()?;
            return WittVec::new(comps);
        }
        Err(WittError::Syntax(format!(
            "expected `[f]` or `(a0; a1; ...)`, got `{t}`"
        )))
    }
}

impl fmt::Display for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The carry polynomial `Δ(f) = ((Σ ã_I x^I)^p - Σ (ã_I x^I)^p) / p mod p`,
/// computed over the integers from the `[0, p)` lifts of the terms. It is the
/// polynomial satisfying `[f] = f([x_1], ..., [x_n]) + VΔ(f)` in `W_2`.
pub fn delta_carry(f: &Poly) -> Poly {
    let p = f.p();
    let ring = f.ring();
    let lifted = f.lift();
    let mut total = lifted.pow(p);
    for (m, c) in f.terms() {
        let term = ZPoly::monomial(ring, BigInt::from(c), m.clone());
        total = &total - &term.pow(p);
    }
    total
        .div_exact(&BigInt::from(p))
        .expect("multinomial cross terms are divisible by p")
        .reduce()
}

/// Two-term carry `((ã + b̃)^p - ã^p - b̃^p) / p mod p`, so that
/// `[a] + [b] = [a + b] - V(carry)` in `W_2`.
pub fn pair_carry(a: &Poly, b: &Poly) -> Poly {
    let p = a.p();
    let (la, lb) = (a.lift(), b.lift());
    let total = &(&(&la + &lb).pow(p) - &la.pow(p)) - &lb.pow(p);
    total
        .div_exact(&BigInt::from(p))
        .expect("binomial cross terms are divisible by p")
        .reduce()
}

/// Working context for ghost arithmetic modulo `p^n`.
struct GhostCtx {
    p: u64,
    n: usize,
    modulus: u64,
}

impl GhostCtx {
    fn new(p: u64, n: usize) -> Result<Self, WittError> {
        if n == 0 {
            return Err(WittError::Empty);
        }
        let modulus = u32::try_from(n)
            .ok()
            .and_then(|e| p.checked_pow(e))
            .filter(|m| *m < (1 << 63))
            .ok_or(WittError::ModulusTooLarge { p, n })?;
        Ok(GhostCtx { p, n, modulus })
    }

    /// Ghost components of `w` modulo `p^n`.
    fn ghost(&self, w: &WittVec) -> Vec<ModPoly> {
        let m = self.modulus;
        let mut out = Vec::with_capacity(self.n);
        let mut powers: Vec<ModPoly> = Vec::with_capacity(self.n);
        for (k, comp) in w.comps.iter().enumerate() {
            for pw in powers.iter_mut() {
                *pw = pw.pow(self.p, m);
            }
            powers.push(ModPoly::from_poly(comp));
            let mut g = ModPoly::default();
            let mut scale = 1u64;
            for pw in powers.iter().take(k + 1) {
                g = g.add(&pw.scale(scale, m), m);
                scale = mulmod(scale, self.p, m);
            }
            out.push(g);
        }
        out
    }

    /// Inverts the ghost map: finds components `c_k ∈ F_p[x]` whose ghost
    /// vector agrees with `ghost` modulo `p^n`.
    fn solve(&self, ring: &Arc<PolyRing>, ghost: &[ModPoly]) -> WittVec {
        let m = self.modulus;
        let mut comps = Vec::with_capacity(self.n);
        let mut powers: Vec<ModPoly> = Vec::with_capacity(self.n);
        let mut pk = 1u64;
        for g in ghost {
            for pw in powers.iter_mut() {
                *pw = pw.pow(self.p, m);
            }
            // N = G_k - Σ_{i<k} p^i c_i^(p^(k-i))
            let mut numerator = g.clone();
            let mut scale = 1u64;
            for pw in &powers {
                numerator = numerator.add(&pw.scale(m - scale % m, m), m);
                scale = mulmod(scale, self.p, m);
            }
            let c = Poly::from_terms(ring, numerator.divide_and_reduce(pk, self.p).terms);
            powers.push(ModPoly::from_poly(&c));
            comps.push(c);
            pk = pk.saturating_mul(self.p);
        }
        WittVec {
            ring: ring.clone(),
            comps,
        }
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Polynomial with coefficients in `Z/m`, `m < 2^63`.
#[derive(Clone, Default, Debug)]
struct ModPoly {
    terms: BTreeMap<Monomial, u64>,
}

impl ModPoly {
    fn from_poly(f: &Poly) -> Self {
        ModPoly {
            terms: f.terms().map(|(m, c)| (m.clone(), c)).collect(),
        }
    }

    fn add(&self, other: &ModPoly, m: u64) -> ModPoly {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(k.clone()).or_insert(0);
            *e = (*e + v) % m;
            if *e == 0 {
                terms.remove(k);
            }
        }
        ModPoly { terms }
    }

    fn neg(&self, m: u64) -> ModPoly {
        ModPoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), m - v)).collect(),
        }
    }

    fn scale(&self, c: u64, m: u64) -> ModPoly {
        let c = c % m;
        if c == 0 {
            return ModPoly::default();
        }
        ModPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(k, v)| {
                    let r = mulmod(*v, c, m);
                    (r != 0).then(|| (k.clone(), r))
                })
                .collect(),
        }
    }

    fn mul(&self, other: &ModPoly, m: u64) -> ModPoly {
        let mut acc: HashMap<Monomial, u128> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        let mm = m as u128;
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let e = acc.entry(ka.mul(kb)).or_insert(0);
                *e = (*e + *va as u128 * *vb as u128) % mm;
            }
        }
        ModPoly {
            terms: acc
                .into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|(k, v)| (k, v as u64))
                .collect(),
        }
    }

    fn pow(&self, e: u64, m: u64) -> ModPoly {
        let mut result = ModPoly::default();
        result.terms.insert(
            Monomial::one(self.terms.keys().next().map(Monomial::nvars).unwrap_or(0)),
            1 % m,
        );
        if self.terms.is_empty() {
            return if e == 0 { result } else { ModPoly::default() };
        }
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, m);
            }
        }
        result
    }

    /// Divides every coefficient by `d` (which must divide it exactly) and
    /// reduces modulo `p`.
    fn divide_and_reduce(&self, d: u64, p: u64) -> ModPoly {
        ModPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(k, v)| {
                    assert!(v % d == 0, "ghost recursion: coefficient {v} not divisible by {d}");
                    let r = (v / d) % p;
                    (r != 0).then(|| (k.clone(), r))
                })
                .collect(),
        }
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

    fn witt(text: &str, r: &Arc<PolyRing>, n: usize) -> WittVec {
        WittVec::parse(text, r, n).unwrap()
    }

    #[test]
    fn one_plus_one_is_p_in_char_two() {
        let r = ring(2);
        let one = WittVec::one(&r, 2);
        assert_eq!(one.add(&one).unwrap(), WittVec::p_element(&r, 2));
        assert_eq!(one.add(&one).unwrap().to_string(), "(0; 1)");
    }

    #[test]
    fn additive_identity() {
        let r = ring(3);
        let w = witt("(x + 2*y; x*y^2; 1)", &r, 3);
        assert_eq!(w.add(&WittVec::zero(&r, 3)).unwrap(), w);
    }

    #[test]
    fn teichmuller_sum_carries() {
        let r = ring(3);
        let sum = witt("[x]", &r, 2).add(&witt("[y]", &r, 2)).unwrap();
        assert_eq!(sum, witt("(x + y; 2*x^2*y + 2*x*y^2)", &r, 2));
        assert_ne!(sum, witt("[x + y]", &r, 2));
    }

    #[test]
    fn products() {
        let r = ring(3);
        let got = witt("(x; 0)", &r, 2).mul(&witt("(0; y)", &r, 2)).unwrap();
        assert_eq!(got, witt("(0; x^3*y)", &r, 2));
        let w = witt("(x + 1; y^2; x)", &r, 3);
        assert_eq!(w.mul(&WittVec::one(&r, 3)).unwrap(), w);

        let r2 = ring(2);
        let got = witt("(x; 1)", &r2, 2).mul(&witt("(y; 1)", &r2, 2)).unwrap();
        assert_eq!(got, witt("(x*y; x^2 + y^2)", &r2, 2));
    }

    #[test]
    fn frobenius_and_verschiebung() {
        let r = ring(3);
        let w = witt("(x; y)", &r, 2);
        assert_eq!(w.frobenius(), witt("(x^3; y^3)", &r, 2));
        let p3 = WittVec::p_element(&r, 3);
        assert_eq!(p3.frobenius(), p3);
        assert!(WittVec::zero(&r, 2).frobenius().is_zero());

        let v1 = WittVec::one(&r, 1).verschiebung();
        assert_eq!(v1, WittVec::p_element(&r, 2));
        assert_eq!(w.frobenius().verschiebung(), witt("(0; x^3; y^3)", &r, 3));
        assert!(WittVec::zero(&r, 1).verschiebung().is_zero());
    }

    #[test]
    fn verschiebung_is_not_multiplicative() {
        let r = ring(2);
        let v1 = WittVec::one(&r, 2).verschiebung();
        let lhs = v1.mul(&v1).unwrap();
        let rhs = WittVec::one(&r, 2).mul(&WittVec::one(&r, 2)).unwrap().verschiebung();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn carry_polynomial() {
        let r = ring(2);
        assert_eq!(delta_carry(&poly("x + y", &r)), poly("x*y", &r));
        let r3 = ring(3);
        assert_eq!(delta_carry(&poly("x^3 + y^4", &r3)), poly("x^6*y^4 + x^3*y^8", &r3));
        let r5 = ring(5);
        assert!(delta_carry(&poly("3*x^2*y", &r5)).is_zero());
    }

    #[test]
    fn pair_carry_matches_teichmuller_addition() {
        let r = ring(5);
        let a = poly("2*x + y^2", &r);
        let b = poly("4*x*y + 1", &r);
        let lhs = WittVec::teichmuller(&a, 2).add(&WittVec::teichmuller(&b, 2)).unwrap();
        let carry = WittVec::teichmuller(&pair_carry(&a, &b), 1).verschiebung();
        let rhs = WittVec::teichmuller(&(&a + &b), 2).sub(&carry).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ghost_examples() {
        let r = ring(3);
        let g = witt("(x; y)", &r, 2).ghost_components();
        assert_eq!(g.components[1].to_string(), "x^3 + 3*y");
        let gp = WittVec::p_element(&r, 2).ghost_components();
        assert!(gp.components[0].is_zero());
        assert_eq!(gp.components[1].to_string(), "3");
        let gt = witt("[x]", &r, 2).ghost_components();
        assert_eq!(gt.components[1].to_string(), "x^3");
    }

    #[test]
    fn errors() {
        let r = ring(3);
        let a = WittVec::one(&r, 2);
        let b = WittVec::one(&r, 3);
        assert_eq!(a.add(&b), Err(WittError::LengthMismatch(2, 3)));
        let other = WittVec::one(&ring(5), 2);
        assert_eq!(a.mul(&other), Err(WittError::RingMismatch));
        assert_eq!(WittVec::one(&r, 1).restriction(), Err(WittError::RestrictTooShort));
        assert!(matches!(WittVec::parse("x", &r, 2), Err(WittError::Syntax(_))));
        let big = PolyRing::new(65521, &["x"]).unwrap();
        assert!(matches!(
            WittVec::one(&big, 5).add(&WittVec::one(&big, 5)),
            Err(WittError::ModulusTooLarge { .. })
        ));
    }
}
