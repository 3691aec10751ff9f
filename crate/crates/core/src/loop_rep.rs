//! Loop braid group representations on `Hom(z, (x⊗y)^{⊗n})`.
//!
//! `s̃_j` exchanges pairs `j` and `j+1`, pair `j` passing over pair `j+1`.
//! `σ̃_i` passes pair `i` through pair `i+1`: over its `x` strand and under its
//! `y` strand. Both are written in closed form from F- and R-symbols on the
//! paired basis; [`crate::oracle`] rebuilds them crossing by crossing.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::basis::{enumerate_paired_basis, BasisIndex, PairedFusionTree};
use crate::category::{classify_boson_fermion, ObjectId, RibbonCategory, Statistics, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::word::{GeneratorKind, Letter};

fn check_index(kind: &'static str, index: usize, n: usize) -> Result<()> {
    if index == 0 || index + 1 > n {
        return Err(Error::IndexOutOfRange {
            kind,
            index,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

fn accumulate(
    m: &mut CMatrix,
    basis: &BasisIndex<PairedFusionTree>,
    out: &PairedFusionTree,
    col: usize,
    value: Complex64,
) -> Result<()> {
    let row = basis.position(out).ok_or_else(|| {
        Error::DimensionMismatch(format!("image tree {out:?} is not in the basis"))
    })?;
    m[(row, col)] += value;
    Ok(())
}

/// `s̃_j` (1-based `j`) on the paired basis:
///
/// `(a_j, a_{j+1}, b_j) ↦ Σ_{c, b'} F(b_{j-1},a_j,a_{j+1},b_{j+1},b_j,c) R(a_{j+1},a_j,c)
///  F̄(b_{j-1},a_{j+1},a_j,b_{j+1},b',c) · (a_{j+1}, a_j, b')`.
pub fn s_tilde_matrix(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
    j: usize,
) -> Result<CMatrix> {
    check_index("s", j, n)?;
    let basis = enumerate_paired_basis(cat, x, y, z, n);
    s_tilde_on_basis(cat, &basis, j)
}

pub(crate) fn s_tilde_on_basis(
    cat: &RibbonCategory,
    basis: &BasisIndex<PairedFusionTree>,
    j: usize,
) -> Result<CMatrix> {
    let rules = cat.rules();
    let unit = cat.unit();
    let dim = basis.len();
    let mut m = linalg::zeros(dim, dim);
    for (col, t) in basis.iter().enumerate() {
        let prev = t.b_at(j - 1, unit);
        let (aj, aj1) = (t.a[j - 1], t.a[j]);
        let (bj, bj1) = (t.b[j - 1], t.b[j]);
        for c in rules.fuse(aj, aj1) {
            let coeff = cat.f([prev, aj, aj1, bj1, bj, c])? * cat.r(aj1, aj, c)?;
            if coeff == ZERO {
                continue;
            }
            for b_new in rules
                .fuse(prev, aj1)
                .filter(|&b| rules.admissible(b, aj, bj1))
            {
                let value = coeff * cat.fbar([prev, aj1, aj, bj1, b_new, c])?;
                let mut out = t.clone();
                out.a.swap(j - 1, j);
                out.b[j - 1] = b_new;
                accumulate(&mut m, basis, &out, col, value)?;
            }
        }
    }
    Ok(m)
}

/// `σ̃_i` (1-based `i`) on the paired basis. Pair `i+1` is split into its
/// `x` and `y` legs, the channel `a_i` crosses over `x` and then under `y`,
/// and the legs are fused again into a new channel `a'`:
///
/// `(a_i, a_{i+1}, b_i) ↦ Σ η · (a', a_i, b')` with
///
/// `η = F̄(b_i,x,y,b_{i+1},c,a_{i+1}) F(b_{i-1},a_i,x,c,b_i,k) R(x,a_i,k)
///      F̄(b_{i-1},x,a_i,c,b,k) F(b,a_i,y,b_{i+1},c,p) R(a_i,y,p)^{-1}
///      F̄(b,y,a_i,b_{i+1},b',p) F(b_{i-1},x,y,b',b,a')`
///
/// summed over `c, k, b, p, b', a'`. The second and fifth factors carry their
/// upper legs in tree order (`a_i` before the strand it is about to cross).
pub fn sigma_tilde_matrix(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
    i: usize,
) -> Result<CMatrix> {
    check_index("sigma", i, n)?;
    let basis = enumerate_paired_basis(cat, x, y, z, n);
    sigma_tilde_on_basis(cat, x, y, &basis, i)
}

pub(crate) fn sigma_tilde_on_basis(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    basis: &BasisIndex<PairedFusionTree>,
    i: usize,
) -> Result<CMatrix> {
    let rules = cat.rules();
    let unit = cat.unit();
    let dim = basis.len();
    let mut m = linalg::zeros(dim, dim);
    for (col, t) in basis.iter().enumerate() {
        let prev = t.b_at(i - 1, unit);
        let (ai, ai1) = (t.a[i - 1], t.a[i]);
        let (bi, bi1) = (t.b[i - 1], t.b[i]);
        // image coefficients keyed by (a', b')
        let mut image: BTreeMap<(ObjectId, ObjectId), Complex64> = BTreeMap::new();
        for c in rules.fuse(bi, x).filter(|&c| rules.admissible(c, y, bi1)) {
            let split = cat.fbar([bi, x, y, bi1, c, ai1])?;
            if split == ZERO {
                continue;
            }
            for k in rules.fuse(ai, x).filter(|&k| rules.admissible(prev, k, c)) {
                let over = split * cat.f([prev, ai, x, c, bi, k])? * cat.r(x, ai, k)?;
                for b in rules.fuse(prev, x).filter(|&b| rules.admissible(b, ai, c)) {
                    let after_over = over * cat.fbar([prev, x, ai, c, b, k])?;
                    if after_over == ZERO {
                        continue;
                    }
                    for p in rules.fuse(ai, y).filter(|&p| rules.admissible(b, p, bi1)) {
                        let under =
                            after_over * cat.f([b, ai, y, bi1, c, p])? * cat.r_inv(ai, y, p)?;
                        for b_new in rules.fuse(b, y).filter(|&v| rules.admissible(v, ai, bi1)) {
                            let back = under * cat.fbar([b, y, ai, bi1, b_new, p])?;
                            for a_new in rules
                                .fuse(x, y)
                                .filter(|&a| rules.admissible(prev, a, b_new))
                            {
                                let value = back * cat.f([prev, x, y, b_new, b, a_new])?;
                                *image.entry((a_new, b_new)).or_insert(ZERO) += value;
                            }
                        }
                    }
                }
            }
        }
        for ((a_new, b_new), value) in image {
            let mut out = t.clone();
            out.a[i - 1] = a_new;
            out.a[i] = ai;
            out.b[i - 1] = b_new;
            accumulate(&mut m, basis, &out, col, value)?;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub enum DoubleBraiding {
    Trivial,
    /// Channel `w` of `(x⊗y)^{⊗2}` on which `s̃_1²` is furthest from the identity.
    Nontrivial {
        witness: ObjectId,
        residual: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleBraidingCheck {
    pub verdict: DoubleBraiding,
    /// `(w, ‖s̃_1² − 1‖_max)` for every `w` with `Hom(w, (x⊗y)^{⊗2}) ≠ 0`.
    pub channels: Vec<(ObjectId, f64)>,
    /// Summands of `x⊗y` with their boson/fermion classification.
    pub summands: Vec<(ObjectId, Statistics)>,
    /// Whether every summand is a boson or a fermion (sufficient condition).
    pub sufficient: bool,
}

impl DoubleBraidingCheck {
    pub fn is_trivial(&self) -> bool {
        self.verdict == DoubleBraiding::Trivial
    }
}

/// Decides whether `c_{X,X}² = 1` for `X = x⊗y` by computing `s̃_1²` on every
/// channel of `X⊗X`.
pub fn check_trivial_double_braiding(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    tol: f64,
) -> Result<DoubleBraidingCheck> {
    let mut channels = Vec::new();
    let mut worst: Option<(ObjectId, f64)> = None;
    for w in cat.rules().objects() {
        let basis = enumerate_paired_basis(cat, x, y, w, 2);
        if basis.is_empty() {
            continue;
        }
        let s = s_tilde_on_basis(cat, &basis, 1)?;
        let residual = linalg::max_diff(&(&s * &s), &linalg::identity(basis.len()));
        channels.push((w, residual));
        if residual > tol && worst.is_none_or(|(_, r)| residual > r) {
            worst = Some((w, residual));
        }
    }
    let summands: Vec<_> = cat
        .rules()
        .fuse(x, y)
        .map(|z| (z, classify_boson_fermion(cat, z, tol)))
        .collect();
    let sufficient = summands.iter().all(|(_, s)| *s != Statistics::Neither);
    let verdict = match worst {
        None => DoubleBraiding::Trivial,
        Some((witness, residual)) => DoubleBraiding::Nontrivial { witness, residual },
    };
    Ok(DoubleBraidingCheck {
        verdict,
        channels,
        summands,
        sufficient,
    })
}

/// The `2(n−1)` generator matrices of an `LB_n` representation on the paired basis.
#[derive(Clone, Debug)]
pub struct LBRep {
    pub category: String,
    pub x: ObjectId,
    pub y: ObjectId,
    pub z: ObjectId,
    pub n: usize,
    pub basis: BasisIndex<PairedFusionTree>,
    /// `σ̃_1 … σ̃_{n-1}`.
    pub sigma: Vec<CMatrix>,
    /// `s̃_1 … s̃_{n-1}`.
    pub s: Vec<CMatrix>,
    sigma_inv: Vec<CMatrix>,
    s_inv: Vec<CMatrix>,
    pub double_braiding: DoubleBraidingCheck,
}

impl LBRep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `x⊗y` has trivial double braiding (checked at [`DEFAULT_TOL`]).
    pub fn symmetric(&self) -> bool {
        self.double_braiding.is_trivial()
    }

    /// Matrix of a single letter; panics on an out-of-range index.
    pub fn letter_matrix(&self, l: Letter) -> &CMatrix {
        let i = l.index - 1;
        match (l.kind, l.exponent > 0) {
            (GeneratorKind::Sigma, true) => &self.sigma[i],
            (GeneratorKind::Sigma, false) => &self.sigma_inv[i],
            (GeneratorKind::S, true) => &self.s[i],
            (GeneratorKind::S, false) if self.symmetric() => &self.s[i],
            (GeneratorKind::S, false) => &self.s_inv[i],
        }
    }

    pub fn inverse_of(&self, kind: GeneratorKind, index: usize) -> &CMatrix {
        match kind {
            GeneratorKind::Sigma => &self.sigma_inv[index - 1],
            GeneratorKind::S => &self.s_inv[index - 1],
        }
    }

    /// Matrix of a letter sequence acting left to right: the first letter acts
    /// first, so `w_1 ⋯ w_k` becomes `M(w_k) ⋯ M(w_1)`.
    pub fn product(&self, letters: &[Letter]) -> CMatrix {
        linalg::product(
            self.dim(),
            letters.iter().rev().map(|l| self.letter_matrix(*l)),
        )
    }
}

/// Builds every `σ̃_i` and `s̃_j` for `Hom(z, (x⊗y)^{⊗n})`. The double-braiding
/// verdict is recorded but not enforced.
pub fn build_lb_representation(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
) -> Result<LBRep> {
    for id in [x, y, z] {
        if id >= cat.num_objects() {
            return Err(Error::ObjectOutOfRange(id));
        }
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let basis = enumerate_paired_basis(cat, x, y, z, n);
    let mut sigma = Vec::with_capacity(n - 1);
    let mut s = Vec::with_capacity(n - 1);
    for i in 1..n {
        sigma.push(sigma_tilde_on_basis(cat, x, y, &basis, i)?);
        s.push(s_tilde_on_basis(cat, &basis, i)?);
    }
    let invert = |ms: &[CMatrix], name: &str| -> Result<Vec<CMatrix>> {
        ms.iter()
            .enumerate()
            .map(|(i, m)| {
                linalg::inverse(m).ok_or_else(|| Error::Singular(format!("{name}_{}", i + 1)))
            })
            .collect()
    };
    let sigma_inv = invert(&sigma, "sigma")?;
    let s_inv = invert(&s, "s")?;
    let double_braiding = check_trivial_double_braiding(cat, x, y, DEFAULT_TOL)?;
    Ok(LBRep {
        category: cat.name().to_string(),
        x,
        y,
        z,
        n,
        basis,
        sigma,
        s,
        sigma_inv,
        s_inv,
        double_braiding,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    B1,
    B2,
    S1,
    S2,
    S3,
    M1,
    M2,
    M3,
    Lemma1,
}

impl Relation {
    pub const ALL: [Relation; 9] = [
        Relation::B1,
        Relation::B2,
        Relation::S1,
        Relation::S2,
        Relation::S3,
        Relation::M1,
        Relation::M2,
        Relation::M3,
        Relation::Lemma1,
    ];

    /// Relations that hold for every object pair, symmetric or not.
    pub const UNCONDITIONAL: [Relation; 6] = [
        Relation::B1,
        Relation::B2,
        Relation::S1,
        Relation::S3,
        Relation::M1,
        Relation::M3,
    ];

    /// Every index instance of the relation in `LB_n`.
    pub fn instances(self, n: usize) -> Vec<Vec<usize>> {
        let gens = n.saturating_sub(1);
        let adjacent = || (1..gens).map(|i| vec![i]).collect::<Vec<_>>();
        let far_unordered = || {
            let mut out = Vec::new();
            for i in 1..=gens {
                for j in (i + 2)..=gens {
                    out.push(vec![i, j]);
                }
            }
            out
        };
        match self {
            Relation::B1 | Relation::S1 | Relation::M1 | Relation::M2 | Relation::Lemma1 => {
                adjacent()
            }
            Relation::S2 => (1..=gens).map(|j| vec![j]).collect(),
            Relation::B2 | Relation::S3 => far_unordered(),
            Relation::M3 => {
                let mut out = Vec::new();
                for i in 1..=gens {
                    for j in 1..=gens {
                        if i.abs_diff(j) > 1 {
                            out.push(vec![i, j]);
                        }
                    }
                }
                out
            }
        }
    }

    /// Both sides of the relation instance as words.
    pub fn sides(self, idx: &[usize]) -> (Vec<Letter>, Vec<Letter>) {
        use Letter as L;
        let i = idx[0];
        match self {
            Relation::B1 => (
                vec![L::sigma(i), L::sigma(i + 1), L::sigma(i)],
                vec![L::sigma(i + 1), L::sigma(i), L::sigma(i + 1)],
            ),
            Relation::B2 => (
                vec![L::sigma(i), L::sigma(idx[1])],
                vec![L::sigma(idx[1]), L::sigma(i)],
            ),
            Relation::S1 => (
                vec![L::s(i), L::s(i + 1), L::s(i)],
                vec![L::s(i + 1), L::s(i), L::s(i + 1)],
            ),
            Relation::S2 => (vec![L::s(i), L::s(i)], vec![]),
            Relation::S3 => (vec![L::s(i), L::s(idx[1])], vec![L::s(idx[1]), L::s(i)]),
            Relation::M1 => (
                vec![L::s(i), L::s(i + 1), L::sigma(i)],
                vec![L::sigma(i + 1), L::s(i), L::s(i + 1)],
            ),
            Relation::M2 => (
                vec![L::sigma(i), L::sigma(i + 1), L::s(i)],
                vec![L::s(i + 1), L::sigma(i), L::sigma(i + 1)],
            ),
            Relation::M3 => (
                vec![L::sigma(i), L::s(idx[1])],
                vec![L::s(idx[1]), L::sigma(i)],
            ),
            Relation::Lemma1 => (
                vec![L::sigma(i), L::sigma(i + 1)],
                vec![L::s(i), L::s(i + 1)],
            ),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::B1 => "B1",
            Relation::B2 => "B2",
            Relation::S1 => "S1",
            Relation::S2 => "S2",
            Relation::S3 => "S3",
            Relation::M1 => "M1",
            Relation::M2 => "M2",
            Relation::M3 => "M3",
            Relation::Lemma1 => "Lemma1",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationInstance {
    pub indices: Vec<usize>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub tol: f64,
    pub instances: BTreeMap<Relation, Vec<RelationInstance>>,
}

impl RelationReport {
    pub fn max_residual(&self, rel: Relation) -> f64 {
        self.instances
            .get(&rel)
            .map(|v| v.iter().fold(0.0_f64, |acc, r| acc.max(r.residual)))
            .unwrap_or(0.0)
    }

    pub fn relation_passed(&self, rel: Relation) -> bool {
        self.instances
            .get(&rel)
            .is_none_or(|v| v.iter().all(|r| r.residual <= self.tol))
    }

    /// Overall verdict over the loop braid relations B1–M3. The Lemma 1
    /// identity is reported alongside but is not a defining relation.
    pub fn passed(&self) -> bool {
        Relation::ALL
            .iter()
            .filter(|&&r| r != Relation::Lemma1)
            .all(|&r| self.relation_passed(r))
    }

    pub fn failing(&self) -> Vec<Relation> {
        Relation::ALL
            .iter()
            .copied()
            .filter(|&r| !self.relation_passed(r))
            .collect()
    }
}

/// Checks every instance of B1, B2, S1, S2, S3, M1, M2, M3 and the Lemma 1
/// identity as matrix equations in the entrywise max-norm.
pub fn verify_lb_relations(rep: &LBRep, tol: f64) -> RelationReport {
    let mut instances = BTreeMap::new();
    for rel in Relation::ALL {
        let list = rel
            .instances(rep.n)
            .into_iter()
            .map(|indices| {
                let (lhs, rhs) = rel.sides(&indices);
                let residual = linalg::max_diff(&rep.product(&lhs), &rep.product(&rhs));
                RelationInstance { indices, residual }
            })
            .collect();
        instances.insert(rel, list);
    }
    RelationReport { tol, instances }
}
