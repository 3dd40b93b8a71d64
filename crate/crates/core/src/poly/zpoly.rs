use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{write_monomial, Monomial, Poly, PolyRing};

/// Polynomial with exact integer coefficients over the variables of a ring
/// context. The characteristic of the context is ignored except by
/// [`ZPoly::reduce`].
#[derive(Clone, PartialEq, Eq)]
pub struct ZPoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl ZPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        ZPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, BigInt::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        ZPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn monomial(ring: &Arc<PolyRing>, c: BigInt, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ZPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_poly(f: &Poly) -> Self {
        ZPoly {
            ring: f.ring.clone(),
            terms: f.terms.iter().map(|(m, c)| (m.clone(), BigInt::from(*c))).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn combine(&self, other: &ZPoly, negate: bool) -> ZPoly {
        assert_eq!(self.ring.vars, other.ring.vars, "ring mismatch in integer polynomial");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_default();
            if negate {
                *e -= c;
            } else {
                *e += c;
            }
            if e.is_zero() {
                terms.remove(m);
            }
        }
        ZPoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero(&self.ring);
        }
        ZPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> ZPoly {
        let mut result = ZPoly::one(&self.ring);
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

    /// Exact division by an integer; `None` if some coefficient is not
    /// divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<ZPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(ZPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Coefficients reduced into `[0, m)`; zero terms dropped.
    pub fn reduce_mod(&self, modulus: &BigInt) -> ZPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let r = c.mod_floor(modulus);
                (!r.is_zero()).then(|| (k.clone(), r))
            })
            .collect();
        ZPoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Reduction modulo the characteristic of the ring context.
    pub fn reduce(&self) -> Poly {
        let p = BigInt::from(self.ring.p());
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let r = c.mod_floor(&p).to_u64().expect("residue fits");
            (r != 0).then(|| (m.clone(), r))
        });
        Poly::from_map(&self.ring, terms.collect())
    }

    pub fn is_divisible_by(&self, d: &BigInt) -> bool {
        self.terms.values().all(|c| c.is_multiple_of(d))
    }

    pub fn has_negative_coefficients(&self) -> bool {
        self.terms.values().any(Signed::is_negative)
    }
}

impl<'a> Add<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &'a ZPoly) -> ZPoly {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &'a ZPoly) -> ZPoly {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &'a ZPoly) -> ZPoly {
        assert_eq!(self.ring.vars, rhs.ring.vars, "ring mismatch in integer polynomial");
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        ZPoly {
            ring: self.ring.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.exps().cmp(a.0.exps()));
        for (k, (m, c)) in ordered.into_iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.ring.vars, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
