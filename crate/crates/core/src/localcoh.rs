//! Graded local cohomology `H^2_(x,y)` of double covers
//! `R = F_p[[x,y,z]]/(z^2 + g)` and the height-two quasi-F-split decision.
//!
//! As a `k[[x,y]]`-module `R = k[[x,y]] ⊕ k[[x,y]]·z`, so every class has a
//! unique expansion `Σ c · z^ε / (x^i y^j)` with `ε ∈ {0,1}` and `i, j ≥ 1`.
//! Frobenius sends such a basis class to `z^(pε) / (x^(pi) y^(pj))`, with
//! `z^p = z^ε' · h` where `h = (-g)^((p-1)/2)`, `ε' = 1` for odd `p` and
//! `h = g`, `ε' = 0` for `p = 2`.
//!
//! When Frobenius kills the socle `{z/(xy)}`, the image of the socle in the
//! length-two Witt local cohomology is `V(η)` for a carry class `η`, and the
//! ring is 2-quasi-F-split iff `η` is not in the image of Frobenius.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::AnalysisConfig;
use crate::criteria::{Flag, Height, Verdict};
use crate::field;
use crate::linalg::{self, Echelon, Membership, SparseVec};
use crate::poly::{Monomial, ParseError, Poly, PolyError, PolyRing};
use crate::witt::pair_carry;

/// Maximum number of times the candidate window is doubled.
pub const MAX_ESCALATIONS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalCohError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] PolyError),
    #[error("g must only involve the variables x and y, found `{0}`")]
    Variables(String),
    #[error("g must lie in the ideal (x, y) (constant term {0})")]
    ConstantTerm(u64),
    #[error("zero polynomial")]
    ZeroInput,
    #[error("Frobenius does not kill the socle; no carry class is defined")]
    SocleSurvives,
    #[error("no splitting z^p = x^p A + y^p B exists")]
    SplitNotFound,
}

/// `R = F_p[[x,y,z]]/(z^2 + g)` with `g ∈ (x,y) F_p[x,y]`.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    g: Poly,
    ring3: Arc<PolyRing>,
    /// `z^p = z^eps · h` in `R`.
    h: Poly,
    eps: u8,
}

impl DoubleCover {
    pub fn new(g: &Poly) -> Result<Self, LocalCohError> {
        let p = g.p();
        for v in g.ring().vars() {
            if v != "x" && v != "y" {
                let used = (0..g.ring().nvars())
                    .any(|i| g.ring().vars()[i] == *v && g.degree_in(i) > 0);
                if used {
                    return Err(LocalCohError::Variables(v.clone()));
                }
            }
        }
        let ring2 = PolyRing::new(p, &["x", "y"])?;
        let g = g.embed(&ring2)?;
        if g.is_zero() {
            return Err(LocalCohError::ZeroInput);
        }
        if g.constant_term() != 0 {
            return Err(LocalCohError::ConstantTerm(g.constant_term()));
        }
        let ring3 = PolyRing::new(p, &["x", "y", "z"])?;
        let (h, eps) = if p == 2 {
            (g.clone(), 0)
        } else {
            ((-&g).pow((p - 1) / 2), 1)
        };
        Ok(DoubleCover { g, ring3, h, eps })
    }

    /// Parses `g` in the variables `x, y`.
    pub fn parse(p: u64, text: &str) -> Result<Self, LocalCohError> {
        let ring2 = PolyRing::new(p, &["x", "y"])?;
        Self::new(&Poly::parse(text, &ring2)?)
    }

    pub fn p(&self) -> u64 {
        self.g.p()
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    /// Ring `F_p[x,y,z]` for numerators.
    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.ring3
    }

    /// `z^2 + g` in the ambient ring.
    pub fn equation(&self) -> Poly {
        let z = Poly::var(&self.ring3, 2);
        &(&z * &z) + &self.g.embed(&self.ring3).expect("x, y are ambient variables")
    }

    /// `(h, ε')` with `z^p = z^ε' h` in `R`.
    pub fn z_power(&self) -> (&Poly, u8) {
        (&self.h, self.eps)
    }

    /// Writes `f ∈ F_p[x,y,z]` as `f0 + z f1` modulo `z^2 + g`.
    pub fn reduce(&self, f: &Poly) -> Result<(Poly, Poly), LocalCohError> {
        let f = f.embed(&self.ring3)?;
        let ring2 = self.g.ring();
        let neg_g = -&self.g;
        let mut powers: Vec<Poly> = vec![Poly::one(ring2)];
        let mut parts = [Poly::zero(ring2), Poly::zero(ring2)];
        for (m, c) in f.terms() {
            let w = m.exp(2);
            let k = (w / 2) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * &neg_g;
                powers.push(next);
            }
            let xy = Monomial::new([m.exp(0), m.exp(1)]);
            let term = powers[k].mul_monomial(c, &xy);
            let slot = &mut parts[(w % 2) as usize];
            *slot = &*slot + &term;
        }
        let [f0, f1] = parts;
        Ok((f0, f1))
    }

    /// The class `{f / (x^a y^b)}`.
    pub fn normal_form(&self, numerator: &Poly, denom: (u64, u64)) -> Result<H2Class, LocalCohError> {
        let (f0, f1) = self.reduce(numerator)?;
        let mut out = H2Class::zero(self.p());
        out.accumulate(&f0, 0, denom, 1);
        out.accumulate(&f1, 1, denom, 1);
        Ok(out)
    }

    /// Frobenius of one basis class.
    fn frobenius_basis(&self, key: H2Key, c: u64, out: &mut H2Class) {
        let p = self.p();
        let denom = (p * key.i, p * key.j);
        if key.eps == 0 {
            out.add_term(H2Key { eps: 0, i: denom.0, j: denom.1 }, c);
        } else {
            out.accumulate(&self.h, self.eps, denom, c);
        }
    }

    pub fn frobenius_h2(&self, xi: &H2Class) -> H2Class {
        let mut out = H2Class::zero(self.p());
        for (&key, &c) in &xi.terms {
            self.frobenius_basis(key, c, &mut out);
        }
        out
    }

    /// The class `m · ξ` for `m ∈ F_p[x,y,z]`.
    pub fn multiply(&self, xi: &H2Class, m: &Poly) -> Result<H2Class, LocalCohError> {
        let m = m.embed(&self.ring3)?;
        let z = Poly::var(&self.ring3, 2);
        let mut out = H2Class::zero(self.p());
        for (&key, &c) in &xi.terms {
            let numer = if key.eps == 1 { &m * &z } else { m.clone() };
            let part = self.normal_form(&numer.scale(c), (key.i, key.j))?;
            out = out.add(&part);
        }
        Ok(out)
    }

    /// Whether the singular locus of `R` is at most the origin, decided by
    /// Nakayama: the Jacobian ideal `J` (of `g` and its partials for odd `p`,
    /// of the partials alone for `p = 2`) is primary to `(x,y)` iff
    /// `m^N ⊆ J + m^(N+1)` for some `N`. Searched up to `degree_cap`.
    pub fn is_isolated(&self, degree_cap: u64) -> bool {
        let p = self.p();
        let mut gens = vec![self.g.derivative(0), self.g.derivative(1)];
        if p != 2 {
            gens.push(self.g.clone());
        }
        gens.retain(|f| !f.is_zero());
        if gens.iter().any(|f| f.constant_term() != 0) {
            return true;
        }
        let d = self.g.total_degree().unwrap_or(0);
        let cap = degree_cap.min(d * d + 1).max(1);
        (1..=cap).any(|n| power_of_max_ideal_contained(&gens, n, p))
    }
}

/// Whether every degree-`n` monomial in `x, y` lies in the span of
/// `{μ f mod m^(n+1)}`.
fn power_of_max_ideal_contained(gens: &[Poly], n: u64, p: u64) -> bool {
    let mut ech: Echelon<(u64, u64)> = Echelon::new(p);
    for f in gens {
        let ord = f.terms().map(|(m, _)| m.degree()).min().unwrap_or(u64::MAX);
        if ord > n {
            continue;
        }
        for deg in 0..=(n - ord) {
            for a in 0..=deg {
                let mut col = SparseVec::new();
                for (m, c) in f.terms() {
                    let key = (m.exp(0) + a, m.exp(1) + deg - a);
                    if key.0 + key.1 <= n {
                        col.insert(key, c);
                    }
                }
                ech.insert(&col);
            }
        }
    }
    (0..=n).all(|a| {
        let target: SparseVec<(u64, u64)> = [((a, n - a), 1)].into_iter().collect();
        ech.membership(&target).is_member()
    })
}

/// Basis label `z^eps / (x^i y^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct H2Key {
    pub eps: u8,
    pub i: u64,
    pub j: u64,
}

/// A class in `H^2_(x,y)(R)` in the basis `z^ε / (x^i y^j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Class {
    p: u64,
    terms: BTreeMap<H2Key, u64>,
}

impl H2Class {
    pub fn zero(p: u64) -> Self {
        H2Class {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(p: u64, key: H2Key) -> Self {
        let mut out = Self::zero(p);
        out.add_term(key, 1);
        out
    }

    /// `{z/(xy)}`, which every nonzero class divides into.
    pub fn socle(p: u64) -> Self {
        Self::basis(p, H2Key { eps: 1, i: 1, j: 1 })
    }

    pub fn from_terms(p: u64, terms: impl IntoIterator<Item = (H2Key, u64)>) -> Self {
        let mut out = Self::zero(p);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
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

    pub fn terms(&self) -> impl Iterator<Item = (H2Key, u64)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, *c))
    }

    pub fn coefficient(&self, key: H2Key) -> u64 {
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn as_sparse(&self) -> &SparseVec<H2Key> {
        &self.terms
    }

    /// Largest pole order in `x` and in `y`.
    pub fn max_poles(&self) -> (u64, u64) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), k| (a.max(k.i), b.max(k.j)))
    }

    fn add_term(&mut self, key: H2Key, c: u64) {
        debug_assert!(key.i >= 1 && key.j >= 1 && key.eps <= 1);
        let single: SparseVec<H2Key> = [(key, c % self.p)].into_iter().collect();
        linalg::axpy(&mut self.terms, 1, &single, self.p);
    }

    /// Adds `scale · {z^eps f / (x^a y^b)}` for `f ∈ F_p[x,y]`.
    fn accumulate(&mut self, f: &Poly, eps: u8, (a, b): (u64, u64), scale: u64) {
        let p = self.p;
        for (m, c) in f.terms() {
            let (u, v) = (m.exp(0), m.exp(1));
            if u < a && v < b {
                let key = H2Key {
                    eps,
                    i: a - u,
                    j: b - v,
                };
                self.add_term(key, field::mul(c, scale, p));
            }
        }
    }

    pub fn add(&self, other: &H2Class) -> H2Class {
        let mut out = self.clone();
        linalg::axpy(&mut out.terms, 1, &other.terms, self.p);
        out
    }

    pub fn scale(&self, c: u64) -> H2Class {
        let mut out = Self::zero(self.p);
        linalg::axpy(&mut out.terms, c % self.p, &self.terms, self.p);
        out
    }

    pub fn neg(&self) -> H2Class {
        self.scale(self.p - 1)
    }

    pub fn sub(&self, other: &H2Class) -> H2Class {
        self.add(&other.neg())
    }
}

impl fmt::Display for H2Class {
    /// Renders `c*z/(x^i*y^j)` terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if *c != 1 {
                write!(f, "{c}*")?;
            }
            f.write_str(if k.eps == 1 { "z" } else { "1" })?;
            let pow = |v: &str, e: u64| if e == 1 { v.to_string() } else { format!("{v}^{e}") };
            write!(f, "/({}*{})", pow("x", k.i), pow("y", k.j))?;
        }
        Ok(())
    }
}

/// How the numerator `z^p = x^p A + y^p B` is split before taking the carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitStrategy {
    /// Monomials divisible by `x^p` go to `A`, the rest to `B`.
    XFirst,
    /// Monomials divisible by `y^p` go to `B`, the rest to `A`.
    YFirst,
}

/// The steps of the carry extraction.
#[derive(Debug, Clone)]
pub struct CarryComputation {
    pub strategy: SplitStrategy,
    /// `x^p A` and `y^p B` as polynomials in `x, y` (the factor `z^ε'` is
    /// implicit).
    pub x_part: Poly,
    pub y_part: Poly,
    /// `((x^p A + y^p B)^p - (x^p A)^p - (y^p B)^p) / p mod p`.
    pub carry: Poly,
    /// The carry class over `(x^(p^2), y^(p^2))`.
    pub class: H2Class,
}

/// Computes `η` with `{[z]^p / [xy]^p} = V(η)` in the Witt local cohomology.
pub fn carry_computation(cover: &DoubleCover, strategy: SplitStrategy) -> Result<CarryComputation, LocalCohError> {
    let p = cover.p();
    let socle = H2Class::socle(p);
    if !cover.frobenius_h2(&socle).is_zero() {
        return Err(LocalCohError::SocleSurvives);
    }
    let (h, eps) = cover.z_power();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (m, c) in h.terms() {
        let (xdiv, ydiv) = (m.exp(0) >= p, m.exp(1) >= p);
        let to_x = match strategy {
            SplitStrategy::XFirst => xdiv,
            SplitStrategy::YFirst => !ydiv,
        };
        if (to_x && !xdiv) || (!to_x && !ydiv) {
            return Err(LocalCohError::SplitNotFound);
        }
        if to_x { &mut xs } else { &mut ys }.push((m.clone(), c));
    }
    let x_part = Poly::from_terms(h.ring(), xs);
    let y_part = Poly::from_terms(h.ring(), ys);
    let carry = pair_carry(&x_part, &y_part);
    // z^(p ε') carry / (xy)^(p^2), with the z-power reduced in R.
    let zpow = Poly::var(cover.ambient(), 2).pow(p * eps as u64);
    let numerator = &zpow * &carry.embed(cover.ambient())?;
    let class = cover.normal_form(&numerator, (p * p, p * p))?;
    Ok(CarryComputation {
        strategy,
        x_part,
        y_part,
        carry,
        class,
    })
}

pub fn witt_carry_class(cover: &DoubleCover, strategy: SplitStrategy) -> Result<H2Class, LocalCohError> {
    Ok(carry_computation(cover, strategy)?.class)
}

/// Evidence for a membership decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageCertificate {
    /// `F(preimage) = η`.
    Preimage(H2Class),
    /// A functional vanishing on `F` of every candidate class but taking
    /// `value ≠ 0` on `η`.
    Separating { functional: H2Class, value: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageMembership {
    pub member: bool,
    /// Final candidate window: `1 ≤ i, j ≤ bound`.
    pub bound: u64,
    pub escalations: u32,
    pub certificate: ImageCertificate,
}

/// Initial candidate window: preimage classes with pole order above this
/// cannot reach the support of `η`. A term of `F(z^ε/(x^i y^j))` has `x`-pole
/// at least `pi - deg(h)`.
pub fn candidate_bound(cover: &DoubleCover, eta: &H2Class, slack: u64) -> u64 {
    let p = cover.p();
    let (a, b) = eta.max_poles();
    let reach = a.max(b).max(p * p);
    let shift = cover.z_power().0.total_degree().unwrap_or(0);
    (reach + shift + slack).div_ceil(p)
}

/// Candidate classes `z^ε / (x^i y^j)` in the window whose Frobenius image
/// has a term at `key`.
fn frobenius_sources(cover: &DoubleCover, key: H2Key, bound: u64, out: &mut Vec<H2Key>) {
    let p = cover.p();
    let in_window = |i: u64, j: u64| (1..=bound).contains(&i) && (1..=bound).contains(&j);
    if key.eps == 0 && key.i.is_multiple_of(p) && key.j.is_multiple_of(p) && in_window(key.i / p, key.j / p) {
        out.push(H2Key { eps: 0, i: key.i / p, j: key.j / p });
    }
    let (h, eps) = cover.z_power();
    if key.eps == eps {
        for (m, _) in h.terms() {
            let (a, b) = (key.i + m.exp(0), key.j + m.exp(1));
            if a % p == 0 && b % p == 0 && in_window(a / p, b / p) {
                out.push(H2Key { eps: 1, i: a / p, j: b / p });
            }
        }
    }
}

/// Decides whether `η` lies in `F(H^2(R))` by solving over the candidate
/// window, doubling it up to [`MAX_ESCALATIONS`] times while infeasible.
///
/// Only candidates connected to the support of `η` through shared terms are
/// assembled: the remaining columns have disjoint support and can neither
/// help a solution nor spoil a separating functional.
pub fn in_frobenius_image(cover: &DoubleCover, eta: &H2Class, config: &AnalysisConfig) -> ImageMembership {
    let p = cover.p();
    let mut bound = candidate_bound(cover, eta, config.candidate_slack(p));
    let mut escalations = 0;
    loop {
        let mut keys = Vec::new();
        let mut ech: Echelon<H2Key> = Echelon::new(p);
        let mut seen_rows: BTreeSet<H2Key> = eta.terms.keys().copied().collect();
        let mut seen_cols: BTreeSet<H2Key> = BTreeSet::new();
        let mut frontier: Vec<H2Key> = seen_rows.iter().copied().collect();
        let mut sources = Vec::new();
        while let Some(row) = frontier.pop() {
            sources.clear();
            frobenius_sources(cover, row, bound, &mut sources);
            for &col in &sources {
                if !seen_cols.insert(col) {
                    continue;
                }
                let image = cover.frobenius_h2(&H2Class::basis(p, col));
                frontier.extend(image.terms.keys().filter(|k| seen_rows.insert(**k)));
                ech.insert(&image.terms);
                keys.push(col);
            }
        }
        match ech.membership(&eta.terms) {
            Membership::InSpan(combo) => {
                let preimage = H2Class::from_terms(p, combo.into_iter().map(|(idx, c)| (keys[idx], c)));
                debug_assert_eq!(cover.frobenius_h2(&preimage), *eta);
                return ImageMembership {
                    member: true,
                    bound,
                    escalations,
                    certificate: ImageCertificate::Preimage(preimage),
                };
            }
            Membership::NotInSpan { functional, value } => {
                if escalations == MAX_ESCALATIONS {
                    return ImageMembership {
                        member: false,
                        bound,
                        escalations,
                        certificate: ImageCertificate::Separating {
                            functional: H2Class { p, terms: functional },
                            value,
                        },
                    };
                }
                escalations += 1;
                bound *= 2;
            }
        }
    }
}

/// Full analysis of a double cover.
#[derive(Debug, Clone)]
pub struct DoubleCoverAnalysis {
    pub verdict: Verdict,
    pub frobenius_socle: H2Class,
    pub carry: Option<CarryComputation>,
    pub membership: Option<ImageMembership>,
    pub isolated: bool,
}

/// 2-quasi-F-split decision via the socle: height one if Frobenius keeps the
/// socle alive, otherwise height two iff the carry class of the socle is not
/// a Frobenius image.
pub fn quasi2_doublecover(cover: &DoubleCover, config: &AnalysisConfig) -> Result<DoubleCoverAnalysis, LocalCohError> {
    quasi2_doublecover_with(cover, config, SplitStrategy::XFirst)
}

pub fn quasi2_doublecover_with(
    cover: &DoubleCover,
    config: &AnalysisConfig,
    strategy: SplitStrategy,
) -> Result<DoubleCoverAnalysis, LocalCohError> {
    let p = cover.p();
    let isolated = cover.is_isolated(config.truncation_degree(p));
    let mut flags: BTreeSet<Flag> = [Flag::AssumedDomain].into_iter().collect();
    flags.insert(if isolated {
        Flag::CriterionCertified
    } else {
        Flag::SocleCriterionVerdict
    });
    let frobenius_socle = cover.frobenius_h2(&H2Class::socle(p));
    if !frobenius_socle.is_zero() {
        return Ok(DoubleCoverAnalysis {
            verdict: Verdict {
                f_split: true,
                quasi2: Some(true),
                height_le: Height::One,
                witnesses: None,
                flags,
            },
            frobenius_socle,
            carry: None,
            membership: None,
            isolated,
        });
    }
    let carry = carry_computation(cover, strategy)?;
    let membership = in_frobenius_image(cover, &carry.class, config);
    let quasi2 = !membership.member;
    Ok(DoubleCoverAnalysis {
        verdict: Verdict {
            f_split: false,
            quasi2: Some(quasi2),
            height_le: if quasi2 { Height::Two } else { Height::Unknown },
            witnesses: None,
            flags,
        },
        frobenius_socle,
        carry: Some(carry),
        membership: Some(membership),
        isolated,
    })
}
