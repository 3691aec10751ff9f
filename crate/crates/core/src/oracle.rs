//! Brute-force construction of the loop braid generators as words in the
//! braid group on `2n` strands, acting on left-nested fusion trees.
//!
//! Strands are numbered `1..=2n` over the leaves `[x, y, x, y, …]`; pair `i`
//! occupies strands `2i−1` and `2i`. Crossing tables (applied first to last):
//!
//! | generator | crossings                                  |
//! |-----------|--------------------------------------------|
//! | `s̃_j`     | `(2j,+) (2j−1,+) (2j+1,+) (2j,+)`           |
//! | `σ̃_i`     | `(2i,+) (2i−1,+) (2i+1,−) (2i,−)`           |
//!
//! A `+` crossing at `k` lets the strand ending on the right pass over.

use crate::basis::{
    enumerate_left_basis, enumerate_paired_basis, paired_leaves, BasisIndex, LeftFusionTree,
};
use crate::category::{ObjectId, RibbonCategory};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::loop_rep::{s_tilde_on_basis, sigma_tilde_on_basis};
use crate::word::GeneratorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementaryCrossing {
    /// Crosses strands `k` and `k+1` (1-based).
    pub k: usize,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl ElementaryCrossing {
    pub fn new(k: usize, sign: i8) -> Self {
        Self { k, sign }
    }
}

/// The crossing word of a generator, in order of application.
pub fn generator_crossings(kind: GeneratorKind, index: usize) -> [ElementaryCrossing; 4] {
    let c = ElementaryCrossing::new;
    let m = 2 * index;
    match kind {
        GeneratorKind::S => [c(m, 1), c(m - 1, 1), c(m + 1, 1), c(m, 1)],
        GeneratorKind::Sigma => [c(m, 1), c(m - 1, 1), c(m + 1, -1), c(m, -1)],
    }
}

/// Braiding of leaves `k`, `k+1` as a map from the left-nested basis over
/// `leaves` to the one over `leaves` with those two entries swapped.
pub fn elementary_braid_matrix(
    cat: &RibbonCategory,
    leaves: &[ObjectId],
    z: ObjectId,
    k: usize,
    sign: i8,
) -> Result<CMatrix> {
    if k == 0 || k >= leaves.len() {
        return Err(Error::IndexOutOfRange {
            kind: "crossing",
            index: k,
            max: leaves.len().saturating_sub(1),
        });
    }
    let source = enumerate_left_basis(cat, leaves, z);
    let mut swapped = leaves.to_vec();
    swapped.swap(k - 1, k);
    let target = enumerate_left_basis(cat, &swapped, z);
    crossing_between(cat, &source, &target, k, sign)
}

fn crossing_between(
    cat: &RibbonCategory,
    source: &BasisIndex<LeftFusionTree>,
    target: &BasisIndex<LeftFusionTree>,
    k: usize,
    sign: i8,
) -> Result<CMatrix> {
    let rules = cat.rules();
    let unit = cat.unit();
    let p = k - 1;
    let mut m = linalg::zeros(target.len(), source.len());
    for (col, t) in source.iter().enumerate() {
        let prev = t.before(p, unit);
        let (u, v) = (t.leaves[p], t.leaves[p + 1]);
        let (e, next) = (t.internal[p], t.internal[p + 1]);
        for f in rules.fuse(u, v) {
            let braid = if sign > 0 {
                cat.r(v, u, f)?
            } else {
                cat.r_inv(u, v, f)?
            };
            let coeff = cat.f([prev, u, v, next, e, f])? * braid;
            if coeff == ZERO {
                continue;
            }
            for e_new in rules
                .fuse(prev, v)
                .filter(|&w| rules.admissible(w, u, next))
            {
                let mut out = t.clone();
                out.leaves.swap(p, p + 1);
                out.internal[p] = e_new;
                let row = target.position(&out).ok_or_else(|| {
                    Error::DimensionMismatch(format!("crossing image {out:?} missing"))
                })?;
                m[(row, col)] += coeff * cat.fbar([prev, v, u, next, e_new, f])?;
            }
        }
    }
    Ok(m)
}

/// Rewrites every pair node `b_{i−1} ⊗ (x⊗y → a_i) → b_i` in left-nested form.
/// Entry `(left tree, paired tree)`.
pub fn paired_to_left_change(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
) -> Result<CMatrix> {
    change(cat, x, y, z, n, true)
}

/// Inverse of [`paired_to_left_change`], built from the forward F-symbols.
pub fn left_to_paired_change(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
) -> Result<CMatrix> {
    Ok(change(cat, x, y, z, n, false)?.transpose())
}

fn change(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
    to_left: bool,
) -> Result<CMatrix> {
    let unit = cat.unit();
    let paired = enumerate_paired_basis(cat, x, y, z, n);
    let left = enumerate_left_basis(cat, &paired_leaves(x, y, n), z);
    if paired.len() != left.len() {
        return Err(Error::DimensionMismatch(format!(
            "paired basis has {} trees, left basis {}",
            paired.len(),
            left.len()
        )));
    }
    let mut m = linalg::zeros(left.len(), paired.len());
    for (row, l) in left.iter().enumerate() {
        'trees: for (col, t) in paired.iter().enumerate() {
            let mut value = ONE;
            for i in 0..n {
                if l.internal[2 * i + 1] != t.b[i] {
                    continue 'trees;
                }
                let key = [t.b_at(i, unit), x, y, t.b[i], l.internal[2 * i], t.a[i]];
                value *= if to_left { cat.fbar(key)? } else { cat.f(key)? };
            }
            m[(row, col)] = value;
        }
    }
    Ok(m)
}

/// A generator rebuilt from its four crossings and conjugated into the paired basis.
pub fn oracle_generator_matrix(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
    kind: GeneratorKind,
    index: usize,
) -> Result<CMatrix> {
    if index == 0 || index >= n {
        return Err(Error::IndexOutOfRange {
            kind: match kind {
                GeneratorKind::Sigma => "sigma",
                GeneratorKind::S => "s",
            },
            index,
            max: n.saturating_sub(1),
        });
    }
    let mut leaves = paired_leaves(x, y, n);
    let mut basis = enumerate_left_basis(cat, &leaves, z);
    let mut acc = linalg::identity(basis.len());
    for crossing in generator_crossings(kind, index) {
        leaves.swap(crossing.k - 1, crossing.k);
        let next = enumerate_left_basis(cat, &leaves, z);
        acc = crossing_between(cat, &basis, &next, crossing.k, crossing.sign)? * acc;
        basis = next;
    }
    if leaves != paired_leaves(x, y, n) {
        return Err(Error::DimensionMismatch(
            "crossing word does not restore the leaf order".into(),
        ));
    }
    Ok(left_to_paired_change(cat, x, y, z, n)? * acc * paired_to_left_change(cat, x, y, z, n)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceEntry {
    pub kind: GeneratorKind,
    pub index: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub tol: f64,
    pub entries: Vec<EquivalenceEntry>,
}

impl EquivalenceReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, e| acc.max(e.residual))
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.residual <= self.tol)
    }
}

/// Compares the closed-form generators against the crossing-word oracle.
pub fn oracle_equivalence(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
    tol: f64,
) -> Result<EquivalenceReport> {
    let basis = enumerate_paired_basis(cat, x, y, z, n);
    let mut entries = Vec::new();
    for index in 1..n {
        for kind in [GeneratorKind::Sigma, GeneratorKind::S] {
            let closed = match kind {
                GeneratorKind::Sigma => sigma_tilde_on_basis(cat, x, y, &basis, index)?,
                GeneratorKind::S => s_tilde_on_basis(cat, &basis, index)?,
            };
            let oracle = oracle_generator_matrix(cat, x, y, z, n, kind, index)?;
            entries.push(EquivalenceEntry {
                kind,
                index,
                residual: linalg::max_diff(&closed, &oracle),
            });
        }
    }
    Ok(EquivalenceReport { tol, entries })
}
