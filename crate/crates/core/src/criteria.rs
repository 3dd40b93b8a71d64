//! Decision procedures for hypersurfaces: Fedder's F-split test, the
//! height-two quasi-F-split test, and an elliptic point-count oracle.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field;
use crate::poly::Poly;
use crate::witt::delta_carry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("zero polynomial")]
    ZeroInput,
    #[error("singular curve y^2 = x^3 + {a}x + {b} over F_{p}")]
    SingularCurve { p: u64, a: u64, b: u64 },
    #[error("point-count oracle needs p >= 5, got {0}")]
    SmallPrime(u64),
    #[error("height search level must be 1 or 2, got {0}")]
    Level(u32),
}

/// Upper bound on the quasi-F-split height established by a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Height {
    One,
    Two,
    /// Above two, or not decided by the tests that were run.
    Unknown,
}

impl Height {
    pub fn as_number(self) -> Option<u32> {
        match self {
            Height::One => Some(1),
            Height::Two => Some(2),
            Height::Unknown => None,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_number() {
            Some(n) => write!(f, "{n}"),
            None => f.write_str("unknown"),
        }
    }
}

/// Labels attached to a verdict describing how far it is backed by theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// The input satisfies the hypotheses of the criterion that decided it.
    CriterionCertified,
    /// The height-two clause was evaluated on a non-homogeneous polynomial.
    NonHomogeneousCriterion,
    /// Homogeneous, but the degree differs from the number of variables.
    NonCalabiYauCriterion,
    /// `z^2 + g` is assumed irreducible without checking.
    AssumedDomain,
    /// Double cover whose singularity is not isolated; the verdict is the
    /// output of the socle computation only.
    SocleCriterionVerdict,
    /// Analysis failed; see the accompanying message.
    Error,
}

impl Flag {
    pub fn label(self) -> &'static str {
        match self {
            Flag::CriterionCertified => "criterion-certified",
            Flag::NonHomogeneousCriterion => "non-homogeneous-criterion",
            Flag::NonCalabiYauCriterion => "non-calabi-yau-criterion",
            Flag::AssumedDomain => "assumed-domain",
            Flag::SocleCriterionVerdict => "socle-criterion-verdict",
            Flag::Error => "error",
        }
    }
}

/// Residues of the tested powers modulo the Frobenius-power ideals. A nonzero
/// residue is a witness that the corresponding clause holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witnesses {
    /// `f^(p-1) mod (x_i^p)`.
    pub clause1: Poly,
    /// `f^(p^2-p-1) Δ(f) mod (x_i^(p^2))`, when evaluated.
    pub clause2: Option<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub f_split: bool,
    /// `None` when the height-two test was not run.
    pub quasi2: Option<bool>,
    pub height_le: Height,
    pub witnesses: Option<Witnesses>,
    pub flags: BTreeSet<Flag>,
}

impl Verdict {
    pub fn summary(&self) -> String {
        match (self.f_split, self.quasi2) {
            (true, _) => "F-split (height 1)".to_string(),
            (false, Some(true)) => "not F-split; 2-quasi-F-split (height 2)".to_string(),
            (false, Some(false)) => "not F-split; not 2-quasi-F-split (height > 2)".to_string(),
            (false, None) => "not F-split; height undecided".to_string(),
        }
    }
}

/// `f^e mod (x_i^(p^level))`.
fn pow_mod_ideal(f: &Poly, e: u64, level: u32) -> Poly {
    let mut result = Poly::one(f.ring()).residue_mod_frobenius_ideal(level);
    let mut base = f.residue_mod_frobenius_ideal(level);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_mod_frobenius_ideal(&base, level).expect("same ring");
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_mod_frobenius_ideal(&base, level).expect("same ring");
        }
    }
    result
}

fn clause1_residue(f: &Poly) -> Result<Poly, CriteriaError> {
    if f.is_zero() {
        return Err(CriteriaError::ZeroInput);
    }
    Ok(pow_mod_ideal(f, f.p() - 1, 1))
}

/// Fedder's criterion: `f^(p-1) ∉ (x_1^p, ..., x_n^p)`.
pub fn fedder_test(f: &Poly) -> Result<bool, CriteriaError> {
    Ok(!clause1_residue(f)?.is_zero())
}

/// `f^(p^2-p-1) Δ(f) mod (x_i^(p^2))`, using
/// `f^(p^2-p-1) = (f^(p-2))^p · f^(p-1)` so that only a small power is taken
/// before the exponent-scaling Frobenius.
fn clause2_residue(f: &Poly) -> Poly {
    let p = f.p();
    let head = pow_mod_ideal(f, p - 2, 1).frobenius_power(1);
    let tail = pow_mod_ideal(f, p - 1, 2);
    let delta = delta_carry(f);
    head.mul_mod_frobenius_ideal(&tail, 2)
        .and_then(|t| t.mul_mod_frobenius_ideal(&delta, 2))
        .expect("same ring")
}

fn hypothesis_flag(f: &Poly) -> Flag {
    if !f.is_homogeneous() {
        Flag::NonHomogeneousCriterion
    } else if f.total_degree() != Some(f.ring().nvars() as u64) {
        Flag::NonCalabiYauCriterion
    } else {
        Flag::CriterionCertified
    }
}

/// Both clauses of the height-two criterion: F-split by clause 1, otherwise
/// 2-quasi-F-split iff `f^(p^2-p-1) Δ(f) ∉ (x_i^(p^2))`.
pub fn quasi2_test(f: &Poly) -> Result<Verdict, CriteriaError> {
    height_search(f, 2)
}

/// Runs the clauses in order, stopping at the first that holds or at level
/// `max_n`.
pub fn height_search(f: &Poly, max_n: u32) -> Result<Verdict, CriteriaError> {
    if !(1..=2).contains(&max_n) {
        return Err(CriteriaError::Level(max_n));
    }
    let clause1 = clause1_residue(f)?;
    let mut flags = BTreeSet::new();
    if !clause1.is_zero() {
        // Fedder's criterion holds for every hypersurface.
        flags.insert(Flag::CriterionCertified);
        return Ok(Verdict {
            f_split: true,
            quasi2: Some(true),
            height_le: Height::One,
            witnesses: Some(Witnesses { clause1, clause2: None }),
            flags,
        });
    }
    if max_n == 1 {
        flags.insert(Flag::CriterionCertified);
        return Ok(Verdict {
            f_split: false,
            quasi2: None,
            height_le: Height::Unknown,
            witnesses: Some(Witnesses { clause1, clause2: None }),
            flags,
        });
    }
    let clause2 = clause2_residue(f);
    let quasi2 = !clause2.is_zero();
    flags.insert(hypothesis_flag(f));
    Ok(Verdict {
        f_split: false,
        quasi2: Some(quasi2),
        height_le: if quasi2 { Height::Two } else { Height::Unknown },
        witnesses: Some(Witnesses {
            clause1,
            clause2: Some(clause2),
        }),
        flags,
    })
}

/// Number of points on `y^2 = x^3 + ax + b` over F_p, including infinity.
pub fn elliptic_point_count(p: u64, a: u64, b: u64) -> Result<u64, CriteriaError> {
    if p < 5 || !field::is_prime(p) {
        return Err(CriteriaError::SmallPrime(p));
    }
    let (a, b) = (a % p, b % p);
    let disc = field::add(
        field::mul(4, field::pow(a, 3, p), p),
        field::mul(27, field::mul(b, b, p), p),
        p,
    );
    if disc == 0 {
        return Err(CriteriaError::SingularCurve { p, a, b });
    }
    let mut square_roots = vec![0u64; p as usize];
    for y in 0..p {
        square_roots[field::mul(y, y, p) as usize] += 1;
    }
    let affine: u64 = (0..p)
        .map(|x| {
            let rhs = field::add(field::add(field::pow(x, 3, p), field::mul(a, x, p), p), b, p);
            square_roots[rhs as usize]
        })
        .sum();
    Ok(affine + 1)
}

/// Whether `y^2 = x^3 + ax + b` is supersingular over F_p (`p >= 5`), by
/// exhaustive point counting: `#E(F_p) = p + 1`.
pub fn supersingular_oracle(p: u64, a: u64, b: u64) -> Result<bool, CriteriaError> {
    Ok(elliptic_point_count(p, a, b)? == p + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str, p: u64) -> Poly {
        Poly::parse_infer(text, p).unwrap()
    }

    #[test]
    fn fedder_examples() {
        assert!(!fedder_test(&f("z^2 + x^3 + y^4", 3)).unwrap());
        assert!(fedder_test(&f("x*y + z^2", 2)).unwrap());
        assert!(fedder_test(&f("x^3 + y^3 + z^3", 7)).unwrap());
        assert!(fedder_test(&f("x1*x2*x3*x4", 5)).unwrap());
        assert_eq!(fedder_test(&f("0", 3)), Err(CriteriaError::ZeroInput));
    }

    #[test]
    fn quasi2_examples() {
        let v = quasi2_test(&f("x^3 + y^3 + z^3", 5)).unwrap();
        assert!(!v.f_split);
        assert_eq!(v.quasi2, Some(true));
        assert_eq!(v.height_le, Height::Two);
        assert!(v.flags.contains(&Flag::CriterionCertified));

        let v = quasi2_test(&f("x^3 + y^3 + z^3", 7)).unwrap();
        assert!(v.f_split);
        assert_eq!(v.height_le, Height::One);

        let v = quasi2_test(&f("z^2 + x^3 + y^4", 3)).unwrap();
        assert!(v.flags.contains(&Flag::NonHomogeneousCriterion));
    }

    #[test]
    fn height_search_levels() {
        let v = height_search(&f("x^3 + y^3 + z^3", 5), 1).unwrap();
        assert_eq!(v.height_le, Height::Unknown);
        assert_eq!(v.quasi2, None);
        let v = height_search(&f("x^3 + y^3 + z^3", 7), 1).unwrap();
        assert_eq!(v.height_le, Height::One);
        assert!(v.witnesses.unwrap().clause2.is_none());
        assert_eq!(height_search(&f("x", 3), 3), Err(CriteriaError::Level(3)));
    }

    #[test]
    fn point_counts() {
        assert!(supersingular_oracle(5, 0, 1).unwrap());
        assert!(!supersingular_oracle(7, 0, 1).unwrap());
        // y^2 = x^3 + x over F_5: the right side vanishes at x = 0, 2, 3 and
        // is a non-square at x = 1, 4.
        assert_eq!(elliptic_point_count(5, 1, 0).unwrap(), 4);
        assert!(!supersingular_oracle(5, 1, 0).unwrap());
        assert_eq!(
            supersingular_oracle(5, 0, 0),
            Err(CriteriaError::SingularCurve { p: 5, a: 0, b: 0 })
        );
        assert_eq!(supersingular_oracle(3, 0, 1), Err(CriteriaError::SmallPrime(3)));
    }
}
