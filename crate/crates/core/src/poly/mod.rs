//! Sparse multivariate polynomials over F_p and their integer lifts.

mod monomial;
mod parse;
mod zpoly;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{self, FieldError};

pub use monomial::Monomial;
pub use parse::{identifiers, ParseError, DEFAULT_EXPONENT_BOUND};
pub use zpoly::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomial rings differ ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("no substitution given for variable `{0}`")]
    MissingVariable(String),
}

/// Ring context: the characteristic and the ordered variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    p: u64,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S]) -> Result<Arc<Self>, PolyError> {
        field::check_prime(p)?;
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            if !parse::is_identifier(v) {
                return Err(PolyError::InvalidVariable(v.to_string()));
            }
            if names.iter().any(|n| n == v) {
                return Err(PolyError::DuplicateVariable(v.to_string()));
            }
            names.push(v.to_string());
        }
        Ok(Arc::new(PolyRing { p, vars: names }))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn describe(&self) -> String {
        format!("F_{}[{}]", self.p, self.vars.join(","))
    }
}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> Result<(), PolyError> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(PolyError::RingMismatch(a.describe(), b.describe()))
    }
}

/// A polynomial over F_p in canonical form: no zero coefficients, terms keyed
/// by exponent vector.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, u64>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        Self::monomial(ring, field::from_i64(c, ring.p), Monomial::one(ring.nvars()))
    }

    /// The variable at `index`.
    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, 1, Monomial::variable(ring.nvars(), index, 1))
    }

    /// The variable called `name`; panics if the ring has no such variable.
    pub fn named(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring
            .var_index(name)
            .unwrap_or_else(|| panic!("no variable `{name}` in {}", ring.describe()));
        Self::var(ring, i)
    }

    pub fn monomial(ring: &Arc<PolyRing>, c: u64, m: Monomial) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
        let mut terms = BTreeMap::new();
        let c = c % ring.p;
        if c != 0 {
            terms.insert(m, c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly
    /// unreduced) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let p = ring.p;
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
            let e = map.entry(m).or_insert(0);
            *e = field::add(*e, c % p, p);
        }
        map.retain(|_, c| *c != 0);
        Poly {
            ring: ring.clone(),
            terms: map,
        }
    }

    pub(crate) fn from_map(ring: &Arc<PolyRing>, terms: BTreeMap<Monomial, u64>) -> Self {
        debug_assert!(terms.values().all(|&c| c != 0 && c < ring.p));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn parse(text: &str, ring: &Arc<PolyRing>) -> Result<Self, ParseError> {
        parse::parse(text, ring, DEFAULT_EXPONENT_BOUND)
    }

    pub fn parse_with_bound(text: &str, ring: &Arc<PolyRing>, exponent_bound: u64) -> Result<Self, ParseError> {
        parse::parse(text, ring, exponent_bound)
    }

    /// Parses `text`, taking the ring variables to be the identifiers that
    /// occur in it, in natural sort order.
    pub fn parse_infer(text: &str, p: u64) -> Result<Self, ParseError> {
        let vars = parse::identifiers(text)?;
        let ring = PolyRing::new(p, &vars).map_err(ParseError::Ring)?;
        Self::parse(text, &ring)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, &c)| m.is_one() && c == 1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    /// Terms in the order used for text: lexicographically descending in the
    /// exponent vector, so `x^6*y^4` precedes `x^3*y^8` and `y^2` precedes `1`.
    pub fn rendering_order(&self) -> Vec<(&Monomial, u64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| b.0.exps().cmp(a.0.exps()));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Largest exponent of variable `index` over all terms.
    pub fn degree_in(&self, index: usize) -> u64 {
        self.terms.keys().map(|m| m.exp(index)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.add_unchecked(other, 1))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.add_unchecked(other, self.p() - 1))
    }

    /// `self + scale * other`.
    fn add_unchecked(&self, other: &Poly, scale: u64) -> Poly {
        let p = self.p();
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let c = field::mul(*c, scale, p);
            match terms.get_mut(m) {
                Some(e) => {
                    *e = field::add(*e, c, p);
                    if *e == 0 {
                        terms.remove(m);
                    }
                }
                None => {
                    if c != 0 {
                        terms.insert(m.clone(), c);
                    }
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    /// Product keeping only the monomials accepted by `keep`. Used to multiply
    /// modulo monomial ideals.
    fn mul_filtered(&self, other: &Poly, keep: impl Fn(&Monomial) -> bool) -> Poly {
        let p = self.p();
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let e = acc.entry(m).or_insert(0);
                *e = (*e + ca * cb) % p;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: u64) -> Poly {
        let p = self.p();
        let c = c % p;
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), field::mul(*v, c, p))).collect(),
        }
    }

    pub fn mul_monomial(&self, c: u64, m: &Monomial) -> Poly {
        let p = self.p();
        let c = c % p;
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), field::mul(*v, c, p)))
                .collect(),
        }
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, e: u64) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self^(p^k)` via exponent scaling: coefficients are fixed by Frobenius
    /// on F_p, so each exponent vector is multiplied by `p^k`.
    pub fn frobenius_power(&self, k: u32) -> Poly {
        let q = self.p().checked_pow(k).expect("exponent overflow");
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.scale(q), *c)).collect(),
        }
    }

    /// Membership in the monomial ideal `(x_1^(p^e), ..., x_n^(p^e))`: every
    /// term must be divisible by some `x_i^(p^e)`. Zero is a member.
    pub fn in_frobenius_power_ideal(&self, e: u32) -> bool {
        let q = frobenius_bound(self.p(), e);
        self.terms.keys().all(|m| in_frobenius_ideal(m, q))
    }

    /// The terms of `self` lying outside `(x_1^(p^e), ..., x_n^(p^e))`. This is
    /// the normal form modulo that ideal; it is zero iff `self` is a member.
    pub fn residue_mod_frobenius_ideal(&self, e: u32) -> Poly {
        let q = frobenius_bound(self.p(), e);
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !in_frobenius_ideal(m, q))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Product modulo `(x_1^(p^e), ..., x_n^(p^e))`, returned as a residue.
    pub fn mul_mod_frobenius_ideal(&self, other: &Poly, e: u32) -> Result<Poly, PolyError> {
        check_ring(&self.ring, &other.ring)?;
        let q = frobenius_bound(self.p(), e);
        let a = self.residue_mod_frobenius_ideal(e);
        let b = other.residue_mod_frobenius_ideal(e);
        Ok(a.mul_filtered(&b, |m| !in_frobenius_ideal(m, q)))
    }

    /// Ring homomorphism sending variable `i` to `assignment[i]`. Entries may
    /// be `None` for variables that do not occur in `self`.
    pub fn substitute(&self, assignment: &[Option<Poly>]) -> Result<Poly, PolyError> {
        assert_eq!(assignment.len(), self.ring.nvars(), "assignment arity");
        let target = assignment
            .iter()
            .flatten()
            .next()
            .map(|q| q.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        for q in assignment.iter().flatten() {
            check_ring(&target, &q.ring)?;
        }
        let mut powers: Vec<BTreeMap<u64, Poly>> = vec![BTreeMap::new(); self.ring.nvars()];
        let mut result = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&target, *c as i64);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let image = assignment[i]
                    .as_ref()
                    .ok_or_else(|| PolyError::MissingVariable(self.ring.vars[i].clone()))?;
                let pw = powers[i].entry(e).or_insert_with(|| image.pow(e));
                term = &term * &*pw;
            }
            result = &result + &term;
        }
        Ok(result)
    }

    /// Substitution by variable name.
    pub fn substitute_named(&self, assignment: &[(&str, Poly)]) -> Result<Poly, PolyError> {
        let mut slots: Vec<Option<Poly>> = vec![None; self.ring.nvars()];
        for (name, q) in assignment {
            let i = self
                .ring
                .var_index(name)
                .ok_or_else(|| PolyError::InvalidVariable(name.to_string()))?;
            slots[i] = Some(q.clone());
        }
        self.substitute(&slots)
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Poly {
        let p = self.p();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(index);
            let coeff = field::mul(*c, e % p, p);
            (coeff != 0).then(|| (m.with_exp(index, e - 1), coeff))
        });
        Poly {
            ring: self.ring.clone(),
            terms: terms.collect(),
        }
    }

    /// Re-embeds the polynomial into another ring with the same characteristic,
    /// mapping variables by name. Fails if a variable that occurs is missing.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Poly, PolyError> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        if target.p != self.ring.p {
            return Err(PolyError::RingMismatch(self.ring.describe(), target.describe()));
        }
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.vars.iter().enumerate() {
            let j = target.var_index(v);
            if j.is_none() && self.degree_in(i) > 0 {
                return Err(PolyError::MissingVariable(v.clone()));
            }
            map.push(j);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u64; target.nvars()];
            for (i, &e) in m.exps().iter().enumerate() {
                if let Some(j) = map[i] {
                    exps[j] = e;
                }
            }
            (Monomial::new(exps), *c)
        });
        Ok(Poly {
            ring: target.clone(),
            terms: terms.collect(),
        })
    }

    /// Integer lift using coefficient representatives in `[0, p)`.
    pub fn lift(&self) -> ZPoly {
        ZPoly::from_poly(self)
    }

    /// Keeps the terms satisfying `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial, u64) -> bool) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| pred(m, **c))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Applies `f` to every exponent vector; colliding images are summed.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        Poly::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (f(m), *c)))
    }
}

fn frobenius_bound(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("exponent overflow")
}

#[inline]
fn in_frobenius_ideal(m: &Monomial, q: u64) -> bool {
    m.exps().iter().any(|&a| a >= q)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.p() - 1)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Writes `x^3*y` style monomial text; nothing for the unit monomial.
pub fn write_monomial(f: &mut impl fmt::Write, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, &e) in vars.iter().zip(m.exps()) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        if e == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    /// Canonical rendering: terms in rendering order, coefficients in
    /// `[0, p)`, unit coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.rendering_order().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if c != 1 {
                    write!(f, "{c}*")?;
                }
                write_monomial(f, &self.ring.vars, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(p, vars).unwrap()
    }

    fn poly(text: &str, r: &Arc<PolyRing>) -> Poly {
        Poly::parse(text, r).unwrap()
    }

    #[test]
    fn freshman_dream_char_two() {
        let r = ring(2, &["x", "y"]);
        let s = poly("x + y", &r);
        assert_eq!(&s * &s, poly("x^2 + y^2", &r));
    }

    #[test]
    fn multiplicative_identity() {
        let r = ring(5, &["x", "y", "z"]);
        let f = poly("3*x^2*y + z - 4", &r);
        assert_eq!(&f * &Poly::one(&r), f);
    }

    #[test]
    fn difference_of_squares_mod_five() {
        let r = ring(5, &["x", "y"]);
        let prod = &poly("x + y", &r) * &poly("x - y", &r);
        assert_eq!(prod, poly("x^2 + 4*y^2", &r));
        assert_eq!(prod.to_string(), "x^2 + 4*y^2");
    }

    #[test]
    fn powers() {
        let r = ring(3, &["x", "y", "z"]);
        assert_eq!(poly("x + y", &r).pow(3), poly("x^3 + y^3", &r));
        assert!(poly("x + 2*z", &r).pow(0).is_one());
        let f = poly("z^2 + x^3 + y^4", &r);
        let expected = poly("z^4 + 2*x^3*z^2 + 2*y^4*z^2 + x^6 + 2*x^3*y^4 + y^8", &r);
        assert_eq!(f.pow(2), expected);
        assert_eq!(f.pow(9), f.frobenius_power(2));
    }

    #[test]
    fn frobenius_ideal_membership() {
        let r = ring(3, &["x", "y", "z"]);
        let f = poly("z^2 + x^3 + y^4", &r);
        assert!(f.pow(2).in_frobenius_power_ideal(1));
        assert!(Poly::zero(&r).in_frobenius_power_ideal(1));
        let r2 = ring(2, &["x", "y", "z"]);
        assert!(!poly("x*y + z^2", &r2).in_frobenius_power_ideal(1));
        let g = poly("x^9*y + y^2", &r);
        assert_eq!(g.residue_mod_frobenius_ideal(2), poly("y^2", &r));
    }

    #[test]
    fn truncated_product_matches_full_product() {
        let r = ring(3, &["x", "y"]);
        let a = poly("x^5 + 2*x*y^3 + y", &r);
        let b = poly("x^4*y + y^7 + 1", &r);
        let full = (&a * &b).residue_mod_frobenius_ideal(2);
        assert_eq!(a.mul_mod_frobenius_ideal(&b, 2).unwrap(), full);
    }

    #[test]
    fn substitution() {
        let r = ring(2, &["x", "y"]);
        let f = poly("x^2", &r);
        let got = f.substitute_named(&[("x", poly("y + 1", &r))]).unwrap();
        assert_eq!(got, poly("y^2 + 1", &r));

        let r3 = ring(3, &["x", "y"]);
        let g = poly("x*y", &r3);
        let got = g
            .substitute_named(&[("x", poly("x^2", &r3)), ("y", poly("x", &r3))])
            .unwrap();
        assert_eq!(got, poly("x^3", &r3));

        let ident = [Some(Poly::var(&r3, 0)), Some(Poly::var(&r3, 1))];
        let h = poly("2*x^4*y + y^2 + 1", &r3);
        assert_eq!(h.substitute(&ident).unwrap(), h);

        let missing = g.substitute(&[Some(Poly::var(&r3, 0)), None]);
        assert_eq!(missing, Err(PolyError::MissingVariable("y".into())));
    }

    #[test]
    fn ring_mismatch() {
        let a = poly("x", &ring(3, &["x"]));
        let b = poly("x", &ring(5, &["x"]));
        assert!(matches!(a.try_mul(&b), Err(PolyError::RingMismatch(..))));
        let c = poly("x", &ring(3, &["x", "y"]));
        assert!(a.try_add(&c).is_err());
    }

    #[test]
    fn derivative_and_homogeneity() {
        let r = ring(3, &["x", "y"]);
        let f = poly("x^2*y + x^3", &r);
        assert_eq!(f.derivative(0), poly("2*x*y", &r));
        assert!(f.is_homogeneous());
        assert!(!poly("x + y^2", &r).is_homogeneous());
    }

    #[test]
    fn embedding_by_name() {
        let small = ring(3, &["y", "x"]);
        let big = ring(3, &["x", "y", "z"]);
        let f = poly("x^2*y + 2", &small);
        assert_eq!(f.embed(&big).unwrap(), poly("x^2*y + 2", &big));
        let g = poly("z", &big);
        assert!(g.embed(&small).is_err());
    }
}
