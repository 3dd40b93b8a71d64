//! Seeded generators and independent oracles for the acceptance suite.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;

use qfsplit::cartier::DiffForm;
use qfsplit::localcoh::{DoubleCover, H2Class, H2Key};
use qfsplit::poly::{Monomial, Poly, PolyRing, ZPoly};
use qfsplit::witt::{delta_carry, WittVec};

pub fn ring(p: u64, names: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(p, names).unwrap()
}

/// Random polynomial with at most `max_terms` terms of total degree at most
/// `max_degree`.
pub fn random_poly(rng: &mut StdRng, ring: &Arc<PolyRing>, max_terms: usize, max_degree: u64) -> Poly {
    let p = ring.p();
    let n = ring.nvars();
    let count = rng.gen_range(0..=max_terms);
    let terms = (0..count).map(|_| {
        let mut budget = max_degree;
        let exps: Vec<u64> = (0..n)
            .map(|_| {
                let e = rng.gen_range(0..=budget);
                budget -= e;
                e
            })
            .collect();
        (Monomial::new(exps), rng.gen_range(1..p))
    });
    Poly::from_terms(ring, terms)
}

pub fn random_witt(rng: &mut StdRng, ring: &Arc<PolyRing>, n: usize, max_terms: usize, max_degree: u64) -> WittVec {
    WittVec::new((0..n).map(|_| random_poly(rng, ring, max_terms, max_degree)).collect()).unwrap()
}

pub fn random_one_form(rng: &mut StdRng, ring: &Arc<PolyRing>, max_terms: usize, max_degree: u64) -> DiffForm {
    let terms: Vec<(Vec<usize>, Poly)> = (0..ring.nvars())
        .map(|k| (vec![k], random_poly(rng, ring, max_terms, max_degree)))
        .collect();
    DiffForm::from_terms(ring, 1, terms).unwrap()
}

/// Ghost components `w_k = Σ_{i≤k} p^i ã_i^(p^(k-i))`, computed from scratch.
pub fn ghost(w: &WittVec) -> Vec<ZPoly> {
    let p = w.ring().p();
    (0..w.len())
        .map(|k| {
            let mut total = ZPoly::zero(w.ring());
            for i in 0..=k {
                let lifted = ZPoly::from_poly(w.component(i)).pow(p.pow((k - i) as u32));
                total = &total + &lifted.scale(&BigInt::from(p).pow(i as u32));
            }
            total
        })
        .collect()
}

/// Whether `ghost(lhs) ≡ op(ghost(a), ghost(b))` in every component `k`
/// modulo `p^(k+1)`.
pub fn ghost_agrees(lhs: &WittVec, a: &WittVec, b: &WittVec, op: impl Fn(&ZPoly, &ZPoly) -> ZPoly) -> bool {
    let p = BigInt::from(lhs.ring().p());
    let (gl, ga, gb) = (ghost(lhs), ghost(a), ghost(b));
    let mut modulus = BigInt::from(1);
    (0..lhs.len()).all(|k| {
        modulus *= &p;
        gl[k].reduce_mod(&modulus) == op(&ga[k], &gb[k]).reduce_mod(&modulus)
    })
}

/// `f([x_1], ..., [x_n])` in `W_n`, term by term.
pub fn teichmuller_substitution(f: &Poly, n: usize) -> WittVec {
    let ring = f.ring();
    let mut total = WittVec::zero(ring, n);
    for (m, c) in f.terms() {
        let mut term = WittVec::teichmuller(&Poly::constant(ring, c as i64), n);
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&WittVec::teichmuller(&Poly::var(ring, i), n)).unwrap();
            }
        }
        total = total.add(&term).unwrap();
    }
    total
}

/// Fedder's criterion from its definition: some monomial of `f^(p-1)` has
/// every exponent below `p`.
pub fn fedder_oracle(f: &Poly) -> bool {
    let p = f.p();
    f.pow(p - 1).terms().any(|(m, _)| m.exps().iter().all(|&e| e < p))
}

/// Rank over F_p of a list of dense vectors: their count minus the
/// dimension of their relation space.
pub fn rank(p: u64, vectors: Vec<Vec<u64>>) -> usize {
    vectors.len() - nullspace(p, &vectors).len()
}

/// Basis of `{c : Σ c_i columns[i] = 0}` over F_p.
pub fn nullspace(p: u64, columns: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let ncols = columns.len();
    let nrows = columns.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u64>> = (0..nrows).map(|r| columns.iter().map(|c| c[r] % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..nrows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = mod_pow(m[r][col], p - 2, p);
        for v in m[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..nrows {
            if i != r && m[i][col] != 0 {
                let f = m[i][col];
                let pivot_row = m[r].clone();
                for (v, q) in m[i].iter_mut().zip(pivot_row) {
                    *v = (*v + (p - f) * q) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[row][free]) % p;
            }
            v
        })
        .collect()
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dense coordinates of sparse vectors over a shared index.
pub fn densify<K: Ord + Clone>(vectors: &[BTreeMap<K, u64>]) -> Vec<Vec<u64>> {
    let keys: BTreeSet<K> = vectors.iter().flat_map(|v| v.keys().cloned()).collect();
    vectors
        .iter()
        .map(|v| keys.iter().map(|k| v.get(k).copied().unwrap_or(0)).collect())
        .collect()
}

/// Sparse coordinates of a 1- or 2-form by (index set, monomial).
pub fn form_coords(w: &DiffForm) -> BTreeMap<(Vec<usize>, Vec<u64>), u64> {
    w.monomial_terms().map(|(k, c, m)| ((k.clone(), m.exps().to_vec()), c)).collect()
}

/// Exactness of `0 → B_1 → Z_1 → Ω^1 → 0` (the last map the Cartier
/// operator) in every multidegree of total degree at most `bound`, in the
/// variables `x, y`. Returns the first failing multidegree.
pub fn cartier_sequence_exact(p: u64, bound: u64) -> Result<(), String> {
    let r = ring(p, &["x", "y"]);
    for total in 1..=bound {
        for a0 in 0..=total {
            let alpha = [a0, total - a0];
            // Basis of Ω^1 in multidegree α: x^(α-e_k) dx_k.
            let basis: Vec<DiffForm> = (0..2)
                .filter(|&k| alpha[k] >= 1)
                .map(|k| {
                    let mut e = alpha;
                    e[k] -= 1;
                    let f = Poly::monomial(&r, 1, Monomial::new(e));
                    DiffForm::monomial_form(&f, &[k]).unwrap()
                })
                .collect();
            let d_images: Vec<_> = basis.iter().map(|w| form_coords(&w.d())).collect();
            let kernel = nullspace(p, &densify(&d_images));
            let closed: Vec<DiffForm> = kernel
                .iter()
                .map(|v| {
                    v.iter().zip(&basis).fold(DiffForm::zero(&r, 1), |acc, (&c, w)| {
                        acc.try_add(&w.scale(&Poly::constant(&r, c as i64))).unwrap()
                    })
                })
                .collect();
            let exact = DiffForm::function(&Poly::monomial(&r, 1, Monomial::new(alpha))).d();
            let dim_b = usize::from(!exact.is_zero());
            let fail = |what: &str| Err(format!("multidegree {alpha:?}: {what}"));
            let Ok(images) = closed.iter().map(DiffForm::cartier).collect::<Result<Vec<_>, _>>() else {
                return fail("Cartier undefined on a closed form");
            };
            if !exact.cartier().map(|c| c.is_zero()).unwrap_or(false) {
                return fail("C(B_1) ≠ 0");
            }
            let image_coords: Vec<_> = images.iter().map(form_coords).collect();
            let image_rank = rank(p, densify(&image_coords));
            if closed.len() != dim_b + image_rank {
                return fail("ker C ≠ B_1");
            }
            // Surjectivity onto Ω^1 in multidegree α/p.
            let target_dim = if alpha.iter().all(|e| e % p == 0) {
                alpha.iter().filter(|&&e| e >= 1).count()
            } else {
                0
            };
            if image_rank != target_dim {
                return fail("C not onto");
            }
        }
    }
    Ok(())
}

/// Weights `(w_x, w_y, w_z)` making `z^2 + g` quasi-homogeneous.
#[derive(Debug, Clone, Copy)]
pub struct Weights(pub i64, pub i64, pub i64);

impl Weights {
    fn of(self, key: H2Key) -> i64 {
        key.eps as i64 * self.2 - key.i as i64 * self.0 - key.j as i64 * self.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleHeight {
    One,
    Two,
    Unknown,
}

/// Frobenius of a basis class through the normal form of `z^(pε)` over
/// `(x^(pi), y^(pj))`.
fn frobenius_column(cover: &DoubleCover, key: H2Key) -> H2Class {
    let p = cover.p();
    let z = Poly::var(cover.ambient(), 2);
    cover.normal_form(&z.pow(p * key.eps as u64), (p * key.i, p * key.j)).unwrap()
}

fn sparse(class: &H2Class) -> BTreeMap<H2Key, u64> {
    class.terms().collect()
}

/// Height by graded linear algebra, independent of the socle-carry route.
///
/// F-split is decided by Fedder on `z^2 + g`. Otherwise the graded kernel of
/// Frobenius on the window `i, j ≤ window` is computed, and every kernel
/// element `ξ = {r / (xy)^k}` is pushed to `η(ξ) = {Δ(r^p) / (xy)^(p^2 k)}`.
/// Height two holds iff `ξ ↦ η(ξ)` is injective modulo the Frobenius image,
/// checked one weighted degree at a time (finite-dimensional pieces).
pub fn splitting_oracle(cover: &DoubleCover, w: Weights, window: u64) -> OracleHeight {
    let p = cover.p();
    if fedder_oracle(&cover.equation()) {
        return OracleHeight::One;
    }
    let amb = cover.ambient().clone();
    let z = Poly::var(&amb, 2);
    let mut by_degree: BTreeMap<i64, Vec<H2Key>> = BTreeMap::new();
    for eps in 0..2u8 {
        for i in 1..=window {
            for j in 1..=window {
                let key = H2Key { eps, i, j };
                by_degree.entry(w.of(key)).or_default().push(key);
            }
        }
    }
    for (degree, keys) in by_degree {
        let images: Vec<_> = keys.iter().map(|&k| sparse(&frobenius_column(cover, k))).collect();
        let kernel = nullspace(p, &densify(&images));
        if kernel.is_empty() {
            continue;
        }
        let etas: Vec<BTreeMap<H2Key, u64>> = kernel
            .iter()
            .map(|v| {
                let support: Vec<(H2Key, u64)> =
                    keys.iter().zip(v).filter(|(_, &c)| c != 0).map(|(&k, &c)| (k, c)).collect();
                let k = support.iter().map(|(key, _)| key.i.max(key.j)).max().unwrap();
                let r = support.iter().fold(Poly::zero(&amb), |acc, (key, c)| {
                    let m = Monomial::new([k - key.i, k - key.j, key.eps as u64]);
                    &acc + &Poly::monomial(&amb, *c, m)
                });
                let (f0, f1) = cover.reduce(&r.pow(p)).unwrap();
                let h = &f0.embed(&amb).unwrap() + &(&z * &f1.embed(&amb).unwrap());
                sparse(&cover.normal_form(&delta_carry(&h), (p * p * k, p * p * k)).unwrap())
            })
            .collect();
        // Frobenius images landing in weighted degree p^2 * degree.
        let source = p as i64 * degree;
        let mut columns = Vec::new();
        for eps in 0..2u8 {
            let top = eps as i64 * w.2 - source;
            let mut i = 1;
            while (i as i64) * w.0 < top {
                let rest = top - i as i64 * w.0;
                if rest % w.1 == 0 && rest / w.1 >= 1 {
                    let key = H2Key { eps, i, j: (rest / w.1) as u64 };
                    columns.push(sparse(&frobenius_column(cover, key)));
                }
                i += 1;
            }
        }
        let mut all = columns.clone();
        all.extend(etas.iter().cloned());
        // One shared index for both ranks.
        let dense = densify(&all);
        let base = rank(p, dense[..columns.len()].to_vec());
        if rank(p, dense) != base + etas.len() {
            return OracleHeight::Unknown;
        }
    }
    OracleHeight::Two
}
