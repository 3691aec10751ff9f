//! Fusion-tree bases of `Hom(z, (x⊗y)^{⊗n})` (paired) and of
//! `Hom(z, w_1⊗…⊗w_m)` (left-nested), with canonical orderings.

use std::collections::HashMap;
use std::hash::Hash;

use crate::category::{ObjectId, RibbonCategory};

/// Basis vector of `Hom(z, (x⊗y)^{⊗n})`.
///
/// `a[i]` is the channel of the `i`-th pair `x⊗y` and `b[i]` the running total
/// after `i+1` pairs, so `b[0] = a[0]`, `b[n-1] = z` and
/// `N^{b[i-1], a[i]}_{b[i]} = 1`. The label before the first pair is the unit.
/// Field order makes the derived `Ord` the canonical basis order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairedFusionTree {
    pub a: Vec<ObjectId>,
    pub b: Vec<ObjectId>,
}

impl PairedFusionTree {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `b_{i}` with 1-based `i`, where `b_0` is the unit.
    pub fn b_at(&self, i: usize, unit: ObjectId) -> ObjectId {
        if i == 0 {
            unit
        } else {
            self.b[i - 1]
        }
    }

    pub fn describe(&self, cat: &RibbonCategory) -> String {
        format!("a=[{}] b=[{}]", names(cat, &self.a), names(cat, &self.b))
    }
}

/// Basis vector of `Hom(z, w_1⊗…⊗w_m)` in left-nested form.
///
/// `internal[j]` is the running total after leaf `j`: `internal[0] = leaves[0]`,
/// `internal[m-1] = z`, and `N^{internal[j-1], leaves[j]}_{internal[j]} = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftFusionTree {
    pub leaves: Vec<ObjectId>,
    pub internal: Vec<ObjectId>,
}

impl LeftFusionTree {
    /// Running total before leaf `j` (0-based); the unit for `j = 0`.
    pub fn before(&self, j: usize, unit: ObjectId) -> ObjectId {
        if j == 0 {
            unit
        } else {
            self.internal[j - 1]
        }
    }

    pub fn describe(&self, cat: &RibbonCategory) -> String {
        format!(
            "leaves=[{}] internal=[{}]",
            names(cat, &self.leaves),
            names(cat, &self.internal)
        )
    }
}

fn names(cat: &RibbonCategory, ids: &[ObjectId]) -> String {
    ids.iter()
        .map(|&i| cat.object_name(i))
        .collect::<Vec<_>>()
        .join(",")
}

/// Ordered list of trees with a reverse lookup from tree to row index.
#[derive(Clone, Debug)]
pub struct BasisIndex<T> {
    trees: Vec<T>,
    position: HashMap<T, usize>,
}

impl<T: Clone + Eq + Hash + Ord> BasisIndex<T> {
    /// Sorts `trees` into canonical order and indexes them.
    pub fn new(mut trees: Vec<T>) -> Self {
        trees.sort();
        trees.dedup();
        let position = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self { trees, position }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[T] {
        &self.trees
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.trees.iter()
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.trees.get(index)
    }

    pub fn position(&self, tree: &T) -> Option<usize> {
        self.position.get(tree).copied()
    }
}

impl<'a, T> IntoIterator for &'a BasisIndex<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.trees.iter()
    }
}

/// Leaf list `[x, y, x, y, …]` of length `2n`.
pub fn paired_leaves(x: ObjectId, y: ObjectId, n: usize) -> Vec<ObjectId> {
    (0..n).flat_map(|_| [x, y]).collect()
}

/// All paired trees of `Hom(z, (x⊗y)^{⊗n})`, canonically ordered. `n = 0`
/// gives the single empty tree when `z` is the unit.
pub fn enumerate_paired_basis(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
) -> BasisIndex<PairedFusionTree> {
    let rules = cat.rules();
    let channels: Vec<ObjectId> = rules.fuse(x, y).collect();
    let mut out = Vec::new();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);

    #[allow(clippy::too_many_arguments)]
    fn walk(
        cat: &RibbonCategory,
        channels: &[ObjectId],
        z: ObjectId,
        n: usize,
        prev: ObjectId,
        a: &mut Vec<ObjectId>,
        b: &mut Vec<ObjectId>,
        out: &mut Vec<PairedFusionTree>,
    ) {
        if a.len() == n {
            if prev == z {
                out.push(PairedFusionTree {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            return;
        }
        let rules = cat.rules();
        for &ai in channels {
            for bi in rules.fuse(prev, ai) {
                a.push(ai);
                b.push(bi);
                walk(cat, channels, z, n, bi, a, b, out);
                a.pop();
                b.pop();
            }
        }
    }

    walk(cat, &channels, z, n, rules.unit(), &mut a, &mut b, &mut out);
    BasisIndex::new(out)
}

/// All left-nested trees of `Hom(z, leaves[0]⊗…⊗leaves[m-1])`, canonically ordered.
pub fn enumerate_left_basis(
    cat: &RibbonCategory,
    leaves: &[ObjectId],
    z: ObjectId,
) -> BasisIndex<LeftFusionTree> {
    let rules = cat.rules();
    let mut out = Vec::new();
    let mut internal = Vec::with_capacity(leaves.len());

    fn walk(
        cat: &RibbonCategory,
        leaves: &[ObjectId],
        z: ObjectId,
        prev: ObjectId,
        internal: &mut Vec<ObjectId>,
        out: &mut Vec<LeftFusionTree>,
    ) {
        let j = internal.len();
        if j == leaves.len() {
            if prev == z {
                out.push(LeftFusionTree {
                    leaves: leaves.to_vec(),
                    internal: internal.clone(),
                });
            }
            return;
        }
        for e in cat.rules().fuse(prev, leaves[j]) {
            internal.push(e);
            walk(cat, leaves, z, e, internal, out);
            internal.pop();
        }
    }

    walk(cat, leaves, z, rules.unit(), &mut internal, &mut out);
    BasisIndex::new(out)
}

/// `dim Hom(z, leaves[0]⊗…⊗leaves[m-1])` from iterated fusion-matrix products.
pub fn dim_hom(cat: &RibbonCategory, leaves: &[ObjectId], z: ObjectId) -> u64 {
    let rules = cat.rules();
    let mut v = vec![0u64; rules.num_objects()];
    v[rules.unit()] = 1;
    for &w in leaves {
        let mut next = vec![0u64; rules.num_objects()];
        for (b, &count) in v.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for c in rules.fuse(b, w) {
                next[c] += count;
            }
        }
        v = next;
    }
    v[z]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{ising, tambara_yamagami, trivial, TYParams};

    const ONE: ObjectId = 0;
    const SIGMA: ObjectId = 1;
    const PSI: ObjectId = 2;

    /// Brute force over every label tuple, independent of the recursive walk.
    fn brute_paired(
        cat: &RibbonCategory,
        x: ObjectId,
        y: ObjectId,
        z: ObjectId,
        n: usize,
    ) -> Vec<PairedFusionTree> {
        let k = cat.num_objects();
        let total = k.pow(2 * n as u32);
        let rules = cat.rules();
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let mut labels = Vec::new();
            for _ in 0..2 * n {
                labels.push(c % k);
                c /= k;
            }
            let a = labels[..n].to_vec();
            let b = labels[n..].to_vec();
            let ok = a.iter().all(|&ai| rules.admissible(x, y, ai))
                && b[0] == a[0]
                && b[n - 1] == z
                && (1..n).all(|i| rules.admissible(b[i - 1], a[i], b[i]));
            if ok {
                out.push(PairedFusionTree { a, b });
            }
        }
        out.sort();
        out
    }

    #[test]
    fn ising_paired_vacuum_n2() {
        let cat = ising();
        let basis = enumerate_paired_basis(&cat, SIGMA, SIGMA, ONE, 2);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis.get(0).unwrap().a, vec![ONE, ONE]);
        assert_eq!(basis.get(1).unwrap().a, vec![PSI, PSI]);
        assert_eq!(
            basis.trees(),
            brute_paired(&cat, SIGMA, SIGMA, ONE, 2).as_slice()
        );
    }

    #[test]
    fn ising_paired_psi_n1() {
        let cat = ising();
        let basis = enumerate_paired_basis(&cat, SIGMA, SIGMA, PSI, 1);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.get(0).unwrap().a, vec![PSI]);
    }

    #[test]
    fn paired_matches_brute_force() {
        let cat = ising();
        for n in 1..=4 {
            for x in 0..3 {
                for y in 0..3 {
                    for z in 0..3 {
                        let basis = enumerate_paired_basis(&cat, x, y, z, n);
                        assert_eq!(basis.trees(), brute_paired(&cat, x, y, z, n).as_slice());
                    }
                }
            }
        }
    }

    #[test]
    fn ty_target_m_is_empty() {
        let cat = tambara_yamagami(&TYParams::standard(2)).unwrap();
        let m = 4;
        assert!(enumerate_paired_basis(&cat, m, m, m, 2).is_empty());
        assert_eq!(enumerate_paired_basis(&cat, m, m, 0, 2).len(), 4);
    }

    #[test]
    fn left_basis_examples() {
        let cat = ising();
        let four = enumerate_left_basis(&cat, &[SIGMA; 4], ONE);
        assert_eq!(four.len(), 2);
        let mids: Vec<_> = four.iter().map(|t| t.internal[1]).collect();
        assert_eq!(mids, vec![ONE, PSI]);
        assert_eq!(enumerate_left_basis(&trivial(), &[0, 0], 0).len(), 1);
        assert_eq!(enumerate_left_basis(&cat, &[SIGMA, SIGMA], PSI).len(), 1);
    }

    #[test]
    fn dim_hom_examples() {
        let cat = ising();
        assert_eq!(dim_hom(&cat, &[SIGMA; 6], ONE), 4);
        assert_eq!(dim_hom(&cat, &[SIGMA; 2], SIGMA), 0);
        let ty = tambara_yamagami(&TYParams::standard(2)).unwrap();
        for n in 1..=4 {
            assert_eq!(
                dim_hom(&ty, &paired_leaves(4, 4, n), 0),
                4u64.pow(n as u32 - 1)
            );
        }
    }

    #[test]
    fn dims_agree_across_bases() {
        let cats = [
            ising(),
            trivial(),
            tambara_yamagami(&TYParams::standard(1)).unwrap(),
            tambara_yamagami(&TYParams::standard(2)).unwrap(),
        ];
        for cat in &cats {
            let k = cat.num_objects();
            for n in 1..=3 {
                for x in 0..k {
                    for y in 0..k {
                        for z in 0..k {
                            let leaves = paired_leaves(x, y, n);
                            let d = dim_hom(cat, &leaves, z);
                            assert_eq!(enumerate_left_basis(cat, &leaves, z).len() as u64, d);
                            assert_eq!(enumerate_paired_basis(cat, x, y, z, n).len() as u64, d);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ordering_is_stable() {
        let cat = ising();
        let a = enumerate_paired_basis(&cat, SIGMA, SIGMA, ONE, 4);
        let b = enumerate_paired_basis(&cat, SIGMA, SIGMA, ONE, 4);
        assert_eq!(a.trees(), b.trees());
        for (i, t) in a.iter().enumerate() {
            assert_eq!(a.position(t), Some(i));
        }
        assert!(a.trees().windows(2).all(|w| w[0] < w[1]));
    }
}
