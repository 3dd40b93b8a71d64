//! Sparse exact linear algebra over F_p.
//!
//! Vectors are sparse maps from an ordered key type to nonzero residues. The
//! central structure is [`Echelon`], an incrementally maintained, fully
//! reduced echelon basis of a span of column vectors that remembers how each
//! basis vector was assembled from the inserted columns. That bookkeeping
//! yields both preimage certificates and separating functionals.

use std::collections::BTreeMap;

use crate::field;

/// Sparse vector over F_p.
pub type SparseVec<K> = BTreeMap<K, u64>;

/// `dst += scale * src` over F_p, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, scale: u64, src: &SparseVec<K>, p: u64) {
    if scale.is_multiple_of(p) {
        return;
    }
    for (k, v) in src {
        let add = field::mul(scale, *v, p);
        match dst.get_mut(k) {
            Some(e) => {
                *e = field::add(*e, add, p);
                if *e == 0 {
                    dst.remove(k);
                }
            }
            None => {
                dst.insert(k.clone(), add);
            }
        }
    }
}

/// Evaluates the functional `lambda` on `v`.
pub fn dot<K: Ord>(lambda: &SparseVec<K>, v: &SparseVec<K>, p: u64) -> u64 {
    let (small, large) = if lambda.len() <= v.len() { (lambda, v) } else { (v, lambda) };
    small.iter().fold(0, |acc, (k, a)| match large.get(k) {
        Some(b) => field::add(acc, field::mul(*a, *b, p), p),
        None => acc,
    })
}

#[derive(Debug, Clone)]
struct Row<K> {
    vector: SparseVec<K>,
    /// Combination of inserted columns equal to `vector`.
    combo: SparseVec<usize>,
}

/// Outcome of reducing a target vector against an [`Echelon`] basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership<K> {
    /// `target = Σ coeff * column[index]`.
    InSpan(SparseVec<usize>),
    /// A functional vanishing on every inserted column but not on the target.
    NotInSpan { functional: SparseVec<K>, value: u64 },
}

impl<K> Membership<K> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::InSpan(_))
    }
}

/// Fully reduced echelon basis over F_p.
///
/// Each basis row has coefficient 1 at its pivot key and 0 at every other
/// pivot key.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    p: u64,
    rows: BTreeMap<K, Row<K>>,
    columns: usize,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(p: u64) -> Self {
        Echelon {
            p,
            rows: BTreeMap::new(),
            columns: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Reduces `v` modulo the span. Returns the residual (supported off the
    /// pivots) and the combination of columns that was subtracted.
    fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let p = self.p;
        let mut residual = v.clone();
        let mut used: SparseVec<usize> = BTreeMap::new();
        let hits: Vec<(K, u64)> = v
            .iter()
            .filter(|(k, _)| self.rows.contains_key(*k))
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        for (key, coeff) in hits {
            let row = &self.rows[&key];
            axpy(&mut residual, field::neg(coeff, p), &row.vector, p);
            axpy(&mut used, coeff, &row.combo, p);
        }
        (residual, used)
    }

    /// Adds a column; returns whether the rank grew.
    pub fn insert(&mut self, column: &SparseVec<K>) -> bool {
        let p = self.p;
        let index = self.columns;
        self.columns += 1;
        let (mut residual, used) = self.reduce(column);
        if residual.is_empty() {
            return false;
        }
        // residual = column - Σ used_j * col_j
        let mut combo = BTreeMap::new();
        combo.insert(index, 1);
        axpy(&mut combo, field::neg(1, p), &used, p);

        let (pivot, lead) = residual.iter().next().map(|(k, c)| (k.clone(), *c)).unwrap();
        let scale = field::inv(lead, p);
        for v in residual.values_mut() {
            *v = field::mul(*v, scale, p);
        }
        let combo: SparseVec<usize> = combo
            .into_iter()
            .map(|(k, v)| (k, field::mul(v, scale, p)))
            .filter(|(_, v)| *v != 0)
            .collect();

        for row in self.rows.values_mut() {
            if let Some(&c) = row.vector.get(&pivot) {
                let minus = field::neg(c, p);
                axpy(&mut row.vector, minus, &residual, p);
                axpy(&mut row.combo, minus, &combo, p);
            }
        }
        self.rows.insert(
            pivot,
            Row {
                vector: std::mem::take(&mut residual),
                combo,
            },
        );
        true
    }

    /// Decides whether `target` lies in the span of the inserted columns.
    pub fn membership(&self, target: &SparseVec<K>) -> Membership<K> {
        let p = self.p;
        let (residual, used) = self.reduce(target);
        match residual.iter().next() {
            None => Membership::InSpan(used),
            Some((key, value)) => {
                // λ(u) = u[key] - Σ_pivots row_q[key] * u[q] kills every basis row.
                let mut functional = BTreeMap::new();
                functional.insert(key.clone(), 1);
                for (q, row) in &self.rows {
                    if let Some(&c) = row.vector.get(key) {
                        functional.insert(q.clone(), field::neg(c, p));
                    }
                }
                Membership::NotInSpan {
                    functional,
                    value: *value,
                }
            }
        }
    }
}

/// Solves `Σ x_j columns[j] = target`, returning either a solution or a
/// separating functional.
pub fn solve<K: Ord + Clone>(p: u64, columns: &[SparseVec<K>], target: &SparseVec<K>) -> Membership<K> {
    let mut ech = Echelon::new(p);
    for c in columns {
        ech.insert(c);
    }
    ech.membership(target)
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(p: u64, vectors: &[SparseVec<K>]) -> usize {
    let mut ech = Echelon::new(p);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Basis of the kernel of the linear map sending basis vector `j` to
/// `images[j]`. Each kernel vector is a combination of source indices.
pub fn kernel<K: Ord + Clone>(p: u64, images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut ech = Echelon::new(p);
    let mut out = Vec::new();
    for (j, v) in images.iter().enumerate() {
        if !ech.insert(v) {
            // v is a combination of earlier columns: record v - combination.
            match ech.membership(v) {
                Membership::InSpan(used) => {
                    let mut k = BTreeMap::new();
                    k.insert(j, 1);
                    axpy(&mut k, field::neg(1, p), &used, p);
                    out.push(k);
                }
                Membership::NotInSpan { .. } => unreachable!("column was dependent"),
            }
        }
    }
    out
}
