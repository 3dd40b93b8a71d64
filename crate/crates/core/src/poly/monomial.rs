use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector of a monomial, one entry per ring variable.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// the first variable, then the second, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u64; 4]>,
    degree: u64,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn new(exps: impl IntoIterator<Item = u64>) -> Self {
        let exps: SmallVec<[u64; 4]> = exps.into_iter().collect();
        let degree = exps
            .iter()
            .try_fold(0u64, |acc, &e| acc.checked_add(e))
            .expect("exponent overflow");
        Monomial { exps, degree }
    }

    pub fn variable(nvars: usize, index: usize, exponent: u64) -> Self {
        let mut m = Self::one(nvars);
        m.exps[index] = exponent;
        m.degree = exponent;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, index: usize) -> u64 {
        self.exps[index]
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: SmallVec<[u64; 4]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            degree: self
                .degree
                .checked_add(other.degree)
                .expect("exponent overflow"),
        }
    }

    /// Multiplies every exponent by `k`.
    pub fn scale(&self, k: u64) -> Monomial {
        let exps: SmallVec<[u64; 4]> = self
            .exps
            .iter()
            .map(|e| e.checked_mul(k).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            degree: self.degree.checked_mul(k).expect("exponent overflow"),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: SmallVec<[u64; 4]> = other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Some(Monomial {
            exps,
            degree: other.degree - self.degree,
        })
    }

    /// Same exponents with entry `index` replaced.
    pub fn with_exp(&self, index: usize, exponent: u64) -> Monomial {
        let mut exps = self.exps.clone();
        exps[index] = exponent;
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex() {
        let x2 = Monomial::new([2u64, 0]);
        let xy = Monomial::new([1u64, 1]);
        let y2 = Monomial::new([0u64, 2]);
        let x = Monomial::new([1u64, 0]);
        assert!(x2 > xy && xy > y2 && y2 > x);
    }

    #[test]
    fn division() {
        let a = Monomial::new([1u64, 2]);
        let b = Monomial::new([3u64, 2]);
        assert_eq!(a.quotient_of(&b), Some(Monomial::new([2u64, 0])));
        assert_eq!(b.quotient_of(&a), None);
    }
}
