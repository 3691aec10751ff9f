//! Ribbon fusion category data: fusion rules, F- and R-symbols, twists, and
//! the coherence checks (pentagon, hexagon, ribbon identity) that certify them.
//!
//! Index conventions used throughout the crate:
//!
//! * `F(a,b,c,d,e,f)` relates splitting trees of `Hom(d, a⊗b⊗c)`. `e` is the
//!   left intermediate (`a⊗b → e`), `f` the right intermediate (`b⊗c → f`), and
//!   the left tree with label `e` equals `Σ_f F(a,b,c,d,e,f)` times the right
//!   tree with label `f`.
//! * `F̄(a,b,c,d,e,f)` is the inverse block with the same index layout:
//!   the right tree `f` equals `Σ_e F̄(a,b,c,d,e,f)` times the left tree `e`.
//! * `R(a,b,c)` is the coefficient picked up when the strand ending on the
//!   right passes over the other one: a vertex `c → b⊗a` becomes `R(a,b,c)`
//!   times the vertex `c → a⊗b`. The upper indices are in output order.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};

/// Default comparison tolerance for all numerical checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for `F · F̄ = 1` on individual blocks.
pub const BLOCK_TOL: f64 = 1e-12;

pub type ObjectId = usize;
pub type FKey = [ObjectId; 6];
pub type RKey = [ObjectId; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleObject {
    pub id: ObjectId,
    pub name: String,
}

/// Multiplicity-free fusion rules `N^{ab}_c ∈ {0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRules {
    num_objects: usize,
    unit: ObjectId,
    dual: Vec<ObjectId>,
    table: Vec<u8>,
}

impl FusionRules {
    /// Builds rules from a list of admissible triples. A repeated triple means a
    /// multiplicity above one and is rejected.
    pub fn from_triples(
        num_objects: usize,
        unit: ObjectId,
        dual: Vec<ObjectId>,
        triples: impl IntoIterator<Item = (ObjectId, ObjectId, ObjectId)>,
    ) -> Result<Self> {
        if num_objects == 0 {
            return Err(Error::Malformed("category has no objects".into()));
        }
        if unit >= num_objects {
            return Err(Error::ObjectOutOfRange(unit));
        }
        if dual.len() != num_objects {
            return Err(Error::Malformed(format!(
                "dual map has {} entries for {} objects",
                dual.len(),
                num_objects
            )));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= num_objects) {
            return Err(Error::ObjectOutOfRange(bad));
        }
        let mut table = vec![0u8; num_objects * num_objects * num_objects];
        for (a, b, c) in triples {
            for id in [a, b, c] {
                if id >= num_objects {
                    return Err(Error::ObjectOutOfRange(id));
                }
            }
            let slot = &mut table[(a * num_objects + b) * num_objects + c];
            if *slot >= 1 {
                return Err(Error::Multiplicity {
                    a: a.to_string(),
                    b: b.to_string(),
                    c: c.to_string(),
                    n: *slot as usize + 1,
                });
            }
            *slot = 1;
        }
        Ok(Self {
            num_objects,
            unit,
            dual,
            table,
        })
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn unit(&self) -> ObjectId {
        self.unit
    }

    pub fn dual(&self, a: ObjectId) -> ObjectId {
        self.dual[a]
    }

    #[inline]
    pub fn n(&self, a: ObjectId, b: ObjectId, c: ObjectId) -> u8 {
        self.table[(a * self.num_objects + b) * self.num_objects + c]
    }

    #[inline]
    pub fn admissible(&self, a: ObjectId, b: ObjectId, c: ObjectId) -> bool {
        self.n(a, b, c) > 0
    }

    /// Fusion channels of `a ⊗ b`, in increasing id order.
    pub fn fuse(&self, a: ObjectId, b: ObjectId) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.num_objects).filter(move |&c| self.admissible(a, b, c))
    }

    pub fn objects(&self) -> std::ops::Range<ObjectId> {
        0..self.num_objects
    }

    /// Whether `F(a,b,c,d,e,f)` is an admissible tuple.
    pub fn f_admissible(&self, k: &FKey) -> bool {
        let [a, b, c, d, e, f] = *k;
        self.admissible(a, b, e)
            && self.admissible(e, c, d)
            && self.admissible(b, c, f)
            && self.admissible(a, f, d)
    }

    /// Every admissible F tuple, in lexicographic order.
    pub fn f_tuples(&self) -> Vec<FKey> {
        let mut out = Vec::new();
        for a in self.objects() {
            for b in self.objects() {
                for c in self.objects() {
                    for d in self.objects() {
                        for e in self.fuse(a, b) {
                            if !self.admissible(e, c, d) {
                                continue;
                            }
                            for f in self.fuse(b, c) {
                                if self.admissible(a, f, d) {
                                    out.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn r_tuples(&self) -> Vec<RKey> {
        let mut out = Vec::new();
        for a in self.objects() {
            for b in self.objects() {
                for c in self.fuse(a, b) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Fusion matrix `[N^{ab}_c]_{bc}` of object `a`.
    pub fn fusion_matrix(&self, a: ObjectId) -> Vec<Vec<f64>> {
        self.objects()
            .map(|b| self.objects().map(|c| self.n(a, b, c) as f64).collect())
            .collect()
    }

    /// Copy with `N^{ab}_c` overwritten. Intended for building perturbed test data.
    pub fn with_entry(&self, a: ObjectId, b: ObjectId, c: ObjectId, n: u8) -> Self {
        let mut out = self.clone();
        out.table[(a * self.num_objects + b) * self.num_objects + c] = n;
        out
    }
}

/// Sparse table of F-symbols keyed by `(a,b,c,d,e,f)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FSymbolTable {
    entries: BTreeMap<FKey, Complex64>,
}

impl FSymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: FKey, value: Complex64) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &FKey) -> Option<Complex64> {
        self.entries.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FKey, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(FKey, Complex64)> for FSymbolTable {
    fn from_iter<T: IntoIterator<Item = (FKey, Complex64)>>(iter: T) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RSymbolTable {
    entries: BTreeMap<RKey, Complex64>,
}

impl RSymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: RKey, value: Complex64) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &RKey) -> Option<Complex64> {
        self.entries.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RKey, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(RKey, Complex64)> for RSymbolTable {
    fn from_iter<T: IntoIterator<Item = (RKey, Complex64)>>(iter: T) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Complete algebraic input: objects, fusion rules, F, R and twists.
/// Immutable once built; `F̄` is computed at construction.
#[derive(Clone, Debug)]
pub struct RibbonCategory {
    name: String,
    objects: Vec<SimpleObject>,
    rules: FusionRules,
    f: FSymbolTable,
    fbar: FSymbolTable,
    r: RSymbolTable,
    twist: Vec<Complex64>,
}

impl RibbonCategory {
    /// Assembles a category. Unit-leg F and R entries that are absent are filled
    /// with 1 (gauge convention). Invariant violations other than malformed
    /// shapes are left for [`validate_structure`] to report.
    pub fn new(
        name: impl Into<String>,
        object_names: Vec<String>,
        rules: FusionRules,
        mut f: FSymbolTable,
        mut r: RSymbolTable,
        twist: Vec<Complex64>,
    ) -> Result<Self> {
        if object_names.len() != rules.num_objects() {
            return Err(Error::Malformed(format!(
                "{} object names for {} objects",
                object_names.len(),
                rules.num_objects()
            )));
        }
        if twist.len() != rules.num_objects() {
            return Err(Error::Malformed(format!(
                "{} twists for {} objects",
                twist.len(),
                rules.num_objects()
            )));
        }
        let unit = rules.unit();
        for key in rules.f_tuples() {
            if (key[0] == unit || key[1] == unit || key[2] == unit) && f.get(&key).is_none() {
                f.insert(key, ONE);
            }
        }
        for key in rules.r_tuples() {
            if (key[0] == unit || key[1] == unit) && r.get(&key).is_none() {
                r.insert(key, ONE);
            }
        }
        let fbar = invert_f_blocks(&rules, &f);
        let objects = object_names
            .into_iter()
            .enumerate()
            .map(|(id, name)| SimpleObject { id, name })
            .collect();
        Ok(Self {
            name: name.into(),
            objects,
            rules,
            f,
            fbar,
            r,
            twist,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[SimpleObject] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn rules(&self) -> &FusionRules {
        &self.rules
    }

    pub fn unit(&self) -> ObjectId {
        self.rules.unit()
    }

    pub fn f_table(&self) -> &FSymbolTable {
        &self.f
    }

    pub fn fbar_table(&self) -> &FSymbolTable {
        &self.fbar
    }

    pub fn r_table(&self) -> &RSymbolTable {
        &self.r
    }

    pub fn twists(&self) -> &[Complex64] {
        &self.twist
    }

    pub fn twist(&self, a: ObjectId) -> Complex64 {
        self.twist[a]
    }

    pub fn object_name(&self, a: ObjectId) -> &str {
        &self.objects[a].name
    }

    /// Looks up an object by name. Exact names win; `vac` (and `1` when no
    /// object carries that name) resolve to the unit.
    pub fn object_id(&self, name: &str) -> Result<ObjectId> {
        if let Some(o) = self.objects.iter().find(|o| o.name == name) {
            return Ok(o.id);
        }
        match name {
            "vac" | "1" => Ok(self.unit()),
            _ => Err(Error::UnknownObject(name.to_string())),
        }
    }

    pub fn tuple_name(&self, ids: &[ObjectId]) -> String {
        let names: Vec<&str> = ids.iter().map(|&i| self.object_name(i)).collect();
        format!("({})", names.join(","))
    }

    /// `F(a,b,c,d,e,f)`; zero for inadmissible tuples.
    pub fn f(&self, key: FKey) -> Result<Complex64> {
        self.lookup_f(&self.f, key, "F")
    }

    /// `F̄(a,b,c,d,e,f)`; zero for inadmissible tuples.
    pub fn fbar(&self, key: FKey) -> Result<Complex64> {
        self.lookup_f(&self.fbar, key, "F-inverse")
    }

    fn lookup_f(&self, table: &FSymbolTable, key: FKey, kind: &'static str) -> Result<Complex64> {
        if !self.rules.f_admissible(&key) {
            return Ok(ZERO);
        }
        table.get(&key).ok_or_else(|| Error::MissingSymbol {
            kind,
            tuple: self.tuple_name(&key),
        })
    }

    /// `R(a,b,c)`; zero for inadmissible triples.
    pub fn r(&self, a: ObjectId, b: ObjectId, c: ObjectId) -> Result<Complex64> {
        if !self.rules.admissible(a, b, c) {
            return Ok(ZERO);
        }
        self.r.get(&[a, b, c]).ok_or_else(|| Error::MissingSymbol {
            kind: "R",
            tuple: self.tuple_name(&[a, b, c]),
        })
    }

    /// Coefficient of the inverse crossing applied to the vertex `c → a⊗b`,
    /// i.e. `1 / R(a,b,c)`; zero for inadmissible triples.
    pub fn r_inv(&self, a: ObjectId, b: ObjectId, c: ObjectId) -> Result<Complex64> {
        let v = self.r(a, b, c)?;
        if v == ZERO {
            return Ok(ZERO);
        }
        Ok(v.inv())
    }

    pub fn with_f_entry(&self, key: FKey, value: Complex64) -> Result<Self> {
        let mut f = self.f.clone();
        f.insert(key, value);
        self.rebuild(self.rules.clone(), f, self.r.clone(), self.twist.clone())
    }

    pub fn with_r_entry(&self, key: RKey, value: Complex64) -> Result<Self> {
        let mut r = self.r.clone();
        r.insert(key, value);
        self.rebuild(self.rules.clone(), self.f.clone(), r, self.twist.clone())
    }

    pub fn with_twist(&self, a: ObjectId, value: Complex64) -> Result<Self> {
        let mut twist = self.twist.clone();
        twist[a] = value;
        self.rebuild(self.rules.clone(), self.f.clone(), self.r.clone(), twist)
    }

    pub fn with_rules(&self, rules: FusionRules) -> Result<Self> {
        self.rebuild(rules, self.f.clone(), self.r.clone(), self.twist.clone())
    }

    fn rebuild(
        &self,
        rules: FusionRules,
        f: FSymbolTable,
        r: RSymbolTable,
        twist: Vec<Complex64>,
    ) -> Result<Self> {
        let names = self.objects.iter().map(|o| o.name.clone()).collect();
        Self::new(self.name.clone(), names, rules, f, r, twist)
    }
}

/// Inverts every `(a,b,c,d)` block of F. Blocks that are not square, have
/// missing entries, or are singular get no F̄ entries.
fn invert_f_blocks(rules: &FusionRules, f: &FSymbolTable) -> FSymbolTable {
    let mut fbar = FSymbolTable::new();
    for_each_f_block(rules, |a, b, c, d, lefts, rights| {
        if lefts.len() != rights.len() || lefts.is_empty() {
            return;
        }
        let dim = lefts.len();
        let mut m = linalg::zeros(dim, dim);
        for (col, &e) in lefts.iter().enumerate() {
            for (row, &g) in rights.iter().enumerate() {
                match f.get(&[a, b, c, d, e, g]) {
                    Some(v) => m[(row, col)] = v,
                    None => return,
                }
            }
        }
        if let Some(inv) = linalg::inverse(&m) {
            for (row, &e) in lefts.iter().enumerate() {
                for (col, &g) in rights.iter().enumerate() {
                    fbar.insert([a, b, c, d, e, g], inv[(row, col)]);
                }
            }
        }
    });
    fbar
}

/// Calls `visit(a,b,c,d, lefts, rights)` for every `(a,b,c,d)` with at least one
/// admissible left or right intermediate.
fn for_each_f_block(
    rules: &FusionRules,
    mut visit: impl FnMut(ObjectId, ObjectId, ObjectId, ObjectId, &[ObjectId], &[ObjectId]),
) {
    for a in rules.objects() {
        for b in rules.objects() {
            for c in rules.objects() {
                for d in rules.objects() {
                    let lefts: Vec<_> = rules
                        .fuse(a, b)
                        .filter(|&e| rules.admissible(e, c, d))
                        .collect();
                    let rights: Vec<_> = rules
                        .fuse(b, c)
                        .filter(|&g| rules.admissible(a, g, d))
                        .collect();
                    if !lefts.is_empty() || !rights.is_empty() {
                        visit(a, b, c, d, &lefts, &rights);
                    }
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Invariant {
    UniqueNames,
    UnitLaw,
    Duality,
    Associativity,
    MultiplicityFree,
    FPresence,
    FGauge,
    FInvertible,
    RPresence,
    RNonzero,
    RGauge,
    UnitTwist,
    TwistModulus,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::UniqueNames => "unique-names",
            Invariant::UnitLaw => "unit-law",
            Invariant::Duality => "duality",
            Invariant::Associativity => "associativity",
            Invariant::MultiplicityFree => "multiplicity-free",
            Invariant::FPresence => "F-presence",
            Invariant::FGauge => "F-gauge",
            Invariant::FInvertible => "F-invertible",
            Invariant::RPresence => "R-presence",
            Invariant::RNonzero => "R-nonzero",
            Invariant::RGauge => "R-gauge",
            Invariant::UnitTwist => "unit-twist",
            Invariant::TwistModulus => "twist-modulus",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub invariant: Invariant,
    /// Offending object ids, in the order natural to the invariant.
    pub tuple: Vec<ObjectId>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn of_kind(&self, invariant: Invariant) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(move |v| v.invariant == invariant)
    }
}

/// Checks every structural invariant of the category data. An empty report
/// means the data is structurally valid; coherence is checked separately.
pub fn validate_structure(cat: &RibbonCategory) -> ValidationReport {
    let mut out = Vec::new();
    let rules = cat.rules();
    let unit = rules.unit();
    let mut push = |invariant, tuple: Vec<ObjectId>, detail: String| {
        let detail = format!("{} {}", cat.tuple_name(&tuple), detail);
        out.push(Violation {
            invariant,
            tuple,
            detail,
        })
    };

    for (i, o) in cat.objects().iter().enumerate() {
        if cat.objects()[..i].iter().any(|p| p.name == o.name) {
            push(Invariant::UniqueNames, vec![o.id], "name repeated".into());
        }
    }

    for a in rules.objects() {
        for b in rules.objects() {
            for c in rules.objects() {
                if rules.n(a, b, c) > 1 {
                    push(
                        Invariant::MultiplicityFree,
                        vec![a, b, c],
                        format!("N = {}", rules.n(a, b, c)),
                    );
                }
            }
            let expect = u8::from(a == b);
            if rules.n(unit, a, b) != expect || rules.n(a, unit, b) != expect {
                push(
                    Invariant::UnitLaw,
                    vec![a, b],
                    "unit fusion is not δ".into(),
                );
            }
            let pairs_to_unit = rules.admissible(a, b, unit);
            if pairs_to_unit != (b == rules.dual(a)) {
                push(
                    Invariant::Duality,
                    vec![a, b],
                    "N^{ab}_1 disagrees with the dual map".into(),
                );
            }
        }
        if rules.dual(rules.dual(a)) != a {
            push(
                Invariant::Duality,
                vec![a],
                "dual is not an involution".into(),
            );
        }
    }

    for a in rules.objects() {
        for b in rules.objects() {
            for c in rules.objects() {
                for d in rules.objects() {
                    let left: u32 = rules
                        .objects()
                        .map(|e| rules.n(a, b, e) as u32 * rules.n(e, c, d) as u32)
                        .sum();
                    let right: u32 = rules
                        .objects()
                        .map(|f| rules.n(b, c, f) as u32 * rules.n(a, f, d) as u32)
                        .sum();
                    if left != right {
                        push(
                            Invariant::Associativity,
                            vec![a, b, c, d],
                            format!("(ab)c gives {left}, a(bc) gives {right}"),
                        );
                    }
                }
            }
        }
    }

    for (key, v) in cat.f_table().iter() {
        if !rules.f_admissible(key) {
            push(
                Invariant::FPresence,
                key.to_vec(),
                "F entry present for inadmissible tuple".into(),
            );
        } else if (key[0] == unit || key[1] == unit || key[2] == unit)
            && !linalg::approx_eq(*v, ONE, DEFAULT_TOL)
        {
            push(
                Invariant::FGauge,
                key.to_vec(),
                format!("unit-leg F entry is {v}, expected 1"),
            );
        }
    }
    for key in rules.f_tuples() {
        if cat.f_table().get(&key).is_none() {
            push(
                Invariant::FPresence,
                key.to_vec(),
                "F entry missing for admissible tuple".into(),
            );
        }
    }

    for_each_f_block(rules, |a, b, c, d, lefts, rights| {
        let tuple = vec![a, b, c, d];
        if lefts.len() != rights.len() {
            push(
                Invariant::FInvertible,
                tuple,
                format!("block is {}x{}", rights.len(), lefts.len()),
            );
            return;
        }
        let dim = lefts.len();
        let mut m = linalg::zeros(dim, dim);
        let mut minv = linalg::zeros(dim, dim);
        for (i, &e) in lefts.iter().enumerate() {
            for (j, &g) in rights.iter().enumerate() {
                let key = [a, b, c, d, e, g];
                match (cat.f_table().get(&key), cat.fbar_table().get(&key)) {
                    (Some(v), Some(w)) => {
                        m[(j, i)] = v;
                        minv[(i, j)] = w;
                    }
                    _ => {
                        push(Invariant::FInvertible, tuple, "block has no inverse".into());
                        return;
                    }
                }
            }
        }
        let resid = linalg::max_diff(&(m * minv), &linalg::identity(dim));
        if resid > BLOCK_TOL {
            push(
                Invariant::FInvertible,
                tuple,
                format!("F·F̄ deviates from identity by {resid:e}"),
            );
        }
    });

    for (key, v) in cat.r_table().iter() {
        let [a, b, c] = *key;
        if !rules.admissible(a, b, c) {
            push(
                Invariant::RPresence,
                key.to_vec(),
                "R entry present for inadmissible triple".into(),
            );
            continue;
        }
        if v.norm() <= f64::EPSILON {
            push(Invariant::RNonzero, key.to_vec(), "R entry is zero".into());
        }
        if (a == unit || b == unit) && !linalg::approx_eq(*v, ONE, DEFAULT_TOL) {
            push(
                Invariant::RGauge,
                key.to_vec(),
                format!("unit-leg R entry is {v}, expected 1"),
            );
        }
    }
    for key in rules.r_tuples() {
        if cat.r_table().get(&key).is_none() {
            push(
                Invariant::RPresence,
                key.to_vec(),
                "R entry missing for admissible triple".into(),
            );
        }
    }

    if !linalg::approx_eq(cat.twist(unit), ONE, DEFAULT_TOL) {
        push(
            Invariant::UnitTwist,
            vec![unit],
            "twist of the unit is not 1".into(),
        );
    }
    for a in rules.objects() {
        if (cat.twist(a).norm() - 1.0).abs() > DEFAULT_TOL {
            push(
                Invariant::TwistModulus,
                vec![a],
                format!("|θ| = {}", cat.twist(a).norm()),
            );
        }
    }

    ValidationReport { violations: out }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceFailure {
    /// `pentagon`, `hexagon`, `hexagon-inverse` or `ribbon`.
    pub equation: &'static str,
    pub tuple: Vec<ObjectId>,
    pub label: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceReport {
    pub instances: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub failures: Vec<CoherenceFailure>,
}

impl CoherenceReport {
    fn new(tol: f64) -> Self {
        Self {
            instances: 0,
            max_residual: 0.0,
            tol,
            failures: Vec::new(),
        }
    }

    fn record(
        &mut self,
        cat: &RibbonCategory,
        equation: &'static str,
        tuple: Vec<ObjectId>,
        residual: f64,
    ) {
        self.instances += 1;
        self.max_residual = self.max_residual.max(residual);
        if residual > self.tol || residual.is_nan() {
            self.failures.push(CoherenceFailure {
                equation,
                label: cat.tuple_name(&tuple),
                tuple,
                residual,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive pentagon check:
///
/// `F(f,c,d,e,g,l) F(a,b,l,e,f,k) = Σ_h F(a,b,c,g,f,h) F(a,h,d,e,g,k) F(b,c,d,k,h,l)`
///
/// over every fully left-nested labelling `(f,g)` and fully right-nested
/// labelling `(l,k)` of `Hom(e, a⊗b⊗c⊗d)`.
pub fn verify_pentagon(cat: &RibbonCategory, tol: f64) -> Result<CoherenceReport> {
    let rules = cat.rules();
    let mut report = CoherenceReport::new(tol);
    for a in rules.objects() {
        for b in rules.objects() {
            for c in rules.objects() {
                for d in rules.objects() {
                    for e in rules.objects() {
                        pentagon_block(cat, [a, b, c, d, e], &mut report)?;
                    }
                }
            }
        }
    }
    Ok(report)
}

fn pentagon_block(
    cat: &RibbonCategory,
    [a, b, c, d, e]: [ObjectId; 5],
    report: &mut CoherenceReport,
) -> Result<()> {
    let rules = cat.rules();
    for f in rules.fuse(a, b) {
        for g in rules.fuse(f, c) {
            if !rules.admissible(g, d, e) {
                continue;
            }
            for l in rules.fuse(c, d) {
                for k in rules.fuse(b, l) {
                    if !rules.admissible(a, k, e) {
                        continue;
                    }
                    let lhs = cat.f([f, c, d, e, g, l])? * cat.f([a, b, l, e, f, k])?;
                    let mut rhs = ZERO;
                    for h in rules.fuse(b, c) {
                        rhs += cat.f([a, b, c, g, f, h])?
                            * cat.f([a, h, d, e, g, k])?
                            * cat.f([b, c, d, k, h, l])?;
                    }
                    report.record(
                        cat,
                        "pentagon",
                        vec![a, b, c, d, e, f, g, l, k],
                        (lhs - rhs).norm(),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Exhaustive hexagon check for the braiding and its inverse, plus the
/// ribbon identity `R(a,b,c) R(b,a,c) = θ_c / (θ_a θ_b)`.
///
/// The braiding hexagon moves the leftmost leaf `a` over `b` and `c`:
///
/// `Σ_h F(a,b,c,d,e,h) R(h,a,d) F(b,c,a,d,h,g) = R(b,a,e) F(b,a,c,d,e,g) R(c,a,g)`
///
/// and the inverse hexagon moves it under them, with every `R(u,v,w)` replaced
/// by `1 / R(v,u,w)`.
pub fn verify_hexagon(cat: &RibbonCategory, tol: f64) -> Result<CoherenceReport> {
    let rules = cat.rules();
    let mut report = CoherenceReport::new(tol);
    for a in rules.objects() {
        for b in rules.objects() {
            for c in rules.objects() {
                for d in rules.objects() {
                    hexagon_block(cat, [a, b, c, d], &mut report)?;
                }
            }
        }
    }
    for [a, b, c] in rules.r_tuples() {
        let lhs = cat.r(a, b, c)? * cat.r(b, a, c)?;
        let rhs = cat.twist(c) / (cat.twist(a) * cat.twist(b));
        report.record(cat, "ribbon", vec![a, b, c], (lhs - rhs).norm());
    }
    Ok(report)
}

fn hexagon_block(
    cat: &RibbonCategory,
    [a, b, c, d]: [ObjectId; 4],
    report: &mut CoherenceReport,
) -> Result<()> {
    let rules = cat.rules();
    let over = |u, v, w| cat.r(u, v, w);
    let under = |u, v, w| cat.r_inv(v, u, w);
    for e in rules.fuse(a, b) {
        if !rules.admissible(e, c, d) {
            continue;
        }
        for g in rules.fuse(a, c) {
            if !rules.admissible(b, g, d) {
                continue;
            }
            for (equation, braid) in [
                ("hexagon", &over as &dyn Fn(_, _, _) -> Result<Complex64>),
                ("hexagon-inverse", &under),
            ] {
                let mut lhs = ZERO;
                for h in rules.fuse(b, c) {
                    lhs +=
                        cat.f([a, b, c, d, e, h])? * braid(h, a, d)? * cat.f([b, c, a, d, h, g])?;
                }
                let rhs = braid(b, a, e)? * cat.f([b, a, c, d, e, g])? * braid(c, a, g)?;
                report.record(cat, equation, vec![a, b, c, d, e, g], (lhs - rhs).norm());
            }
        }
    }
    Ok(())
}

/// Frobenius–Perron dimension of `a`: the largest real eigenvalue of
/// `[N^{ab}_c]_{bc}`, found by power iteration on `N_a + 1`.
pub fn quantum_dimension(cat: &RibbonCategory, a: ObjectId) -> f64 {
    let rules = cat.rules();
    let k = rules.num_objects();
    if a == rules.unit() {
        return 1.0;
    }
    let mut v = vec![1.0_f64; k];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let mut w = v.clone();
        for (b, wb) in w.iter_mut().enumerate() {
            *wb += rules.fuse(a, b).map(|c| v[c]).sum::<f64>();
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let next = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        v = w;
        if (next - lambda).abs() < 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda - 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Boson,
    Fermion,
    Neither,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::Neither => "neither",
        })
    }
}

/// Boson: `z ⊗ z* = 1` exactly and `θ_z = 1`; fermion: same fusion with `θ_z = -1`.
pub fn classify_boson_fermion(cat: &RibbonCategory, z: ObjectId, tol: f64) -> Statistics {
    let rules = cat.rules();
    let channels: Vec<_> = rules.fuse(z, rules.dual(z)).collect();
    if channels != [rules.unit()] {
        return Statistics::Neither;
    }
    let theta = cat.twist(z);
    if linalg::approx_eq(theta, ONE, tol) {
        Statistics::Boson
    } else if linalg::approx_eq(theta, -ONE, tol) {
        Statistics::Fermion
    } else {
        Statistics::Neither
    }
}

/// Matrix form of the F block `(a,b,c,d)`: rows are right labels, columns left labels.
pub fn f_block(
    cat: &RibbonCategory,
    a: ObjectId,
    b: ObjectId,
    c: ObjectId,
    d: ObjectId,
) -> CMatrix {
    let rules = cat.rules();
    let lefts: Vec<_> = rules
        .fuse(a, b)
        .filter(|&e| rules.admissible(e, c, d))
        .collect();
    let rights: Vec<_> = rules
        .fuse(b, c)
        .filter(|&g| rules.admissible(a, g, d))
        .collect();
    CMatrix::from_fn(rights.len(), lefts.len(), |i, j| {
        cat.f_table()
            .get(&[a, b, c, d, lefts[j], rights[i]])
            .unwrap_or(ZERO)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{ising, tambara_yamagami, trivial, TYParams};
    use nalgebra::DMatrix;

    const ONE_ID: ObjectId = 0;
    const SIGMA: ObjectId = 1;
    const PSI: ObjectId = 2;

    #[test]
    fn builtins_are_structurally_valid() {
        assert!(validate_structure(&trivial()).is_valid());
        assert!(validate_structure(&ising()).is_valid());
        for k in 1..=3 {
            let ty = tambara_yamagami(&TYParams::standard(k)).unwrap();
            assert!(validate_structure(&ty).is_valid(), "TY k={k}");
        }
    }

    #[test]
    fn dropping_a_fusion_channel_breaks_associativity() {
        let cat = ising();
        let broken_rules = cat.rules().with_entry(SIGMA, SIGMA, PSI, 0);
        let broken = cat.with_rules(broken_rules.clone()).unwrap();
        let report = validate_structure(&broken);

        // reference: (a⊗b)⊗c and a⊗(b⊗c) agree iff the left fusion matrix
        // L_a[b][d] = N^{ab}_d commutes with the right one R_c[e][d] = N^{ec}_d
        let k = broken_rules.num_objects();
        let left = |a| DMatrix::from_fn(k, k, |b, d| broken_rules.n(a, b, d) as i64);
        let right = |c| DMatrix::from_fn(k, k, |e, d| broken_rules.n(e, c, d) as i64);
        let mut expected = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let defect = left(a) * right(c) - right(c) * left(a);
                    for d in 0..k {
                        if defect[(b, d)] != 0 {
                            expected.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        let found: Vec<_> = report
            .of_kind(Invariant::Associativity)
            .map(|v| v.tuple.clone())
            .collect();
        assert!(!found.is_empty());
        assert_eq!(found, expected);
        assert!(found.contains(&vec![SIGMA, SIGMA, PSI, PSI]));
        assert!(!found.contains(&vec![SIGMA, SIGMA, SIGMA, SIGMA]));
    }

    #[test]
    fn duplicate_fusion_triple_is_rejected() {
        let err =
            FusionRules::from_triples(2, 0, vec![0, 1], vec![(0, 0, 0), (1, 1, 0), (1, 1, 0)]);
        assert!(matches!(err, Err(Error::Multiplicity { .. })));
    }

    #[test]
    fn coherence_of_builtins() {
        for cat in [
            trivial(),
            ising(),
            tambara_yamagami(&TYParams::standard(1)).unwrap(),
        ] {
            let p = verify_pentagon(&cat, DEFAULT_TOL).unwrap();
            let h = verify_hexagon(&cat, DEFAULT_TOL).unwrap();
            assert!(p.passed() && h.passed(), "{}", cat.name());
            assert!(p.instances > 0 && h.instances > 0);
        }
    }

    #[test]
    fn perturbed_f_entry_fails_pentagon() {
        let cat = ising();
        let key = [SIGMA, SIGMA, SIGMA, SIGMA, ONE_ID, ONE_ID];
        let v = cat.f(key).unwrap();
        let broken = cat.with_f_entry(key, -v).unwrap();
        let report = verify_pentagon(&broken, DEFAULT_TOL).unwrap();
        assert!(!report.passed());
        assert!(report.max_residual > 0.1);
    }

    #[test]
    fn wrong_twist_fails_ribbon_check() {
        let broken = ising().with_twist(SIGMA, ONE).unwrap();
        let report = verify_hexagon(&broken, DEFAULT_TOL).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.tuple.contains(&SIGMA)));
    }

    #[test]
    fn f_blocks_invert() {
        let cat = tambara_yamagami(&TYParams::standard(2)).unwrap();
        let rules = cat.rules();
        for a in rules.objects() {
            for b in rules.objects() {
                for c in rules.objects() {
                    for d in rules.objects() {
                        let m = f_block(&cat, a, b, c, d);
                        let lefts: Vec<_> = rules
                            .fuse(a, b)
                            .filter(|&e| rules.admissible(e, c, d))
                            .collect();
                        let rights: Vec<_> = rules
                            .fuse(b, c)
                            .filter(|&g| rules.admissible(a, g, d))
                            .collect();
                        let mbar = CMatrix::from_fn(lefts.len(), rights.len(), |i, j| {
                            cat.fbar([a, b, c, d, lefts[i], rights[j]]).unwrap()
                        });
                        let dim = lefts.len();
                        assert!(linalg::max_diff(&(&mbar * &m), &linalg::identity(dim)) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn quantum_dimensions() {
        let cat = ising();
        // reference: largest eigenvalue of the symmetric fusion matrix
        let n_sigma = DMatrix::from_fn(3, 3, |b, c| cat.rules().n(SIGMA, b, c) as f64);
        let eig = n_sigma.symmetric_eigen().eigenvalues.max();
        assert!((quantum_dimension(&cat, SIGMA) - eig).abs() < 1e-9);
        assert!((eig - 2f64.sqrt()).abs() < 1e-12);
        assert!((quantum_dimension(&cat, PSI) - 1.0).abs() < 1e-9);
        assert_eq!(quantum_dimension(&cat, ONE_ID), 1.0);

        let ty = tambara_yamagami(&TYParams::standard(2)).unwrap();
        assert!((quantum_dimension(&ty, 4) - 2.0).abs() < 1e-9);
        for a in ty.rules().objects() {
            let d = quantum_dimension(&ty, a);
            assert!((d - quantum_dimension(&ty, ty.rules().dual(a))).abs() < 1e-12);
        }
    }

    #[test]
    fn boson_fermion_classification() {
        let cat = ising();
        assert_eq!(
            classify_boson_fermion(&cat, ONE_ID, DEFAULT_TOL),
            Statistics::Boson
        );
        assert_eq!(
            classify_boson_fermion(&cat, PSI, DEFAULT_TOL),
            Statistics::Fermion
        );
        assert_eq!(
            classify_boson_fermion(&cat, SIGMA, DEFAULT_TOL),
            Statistics::Neither
        );
    }

    #[test]
    fn symbol_lookups() {
        let cat = ising();
        assert_eq!(
            cat.f([SIGMA, SIGMA, SIGMA, ONE_ID, PSI, ONE_ID]).unwrap(),
            ZERO
        );
        assert_eq!(cat.r(SIGMA, SIGMA, SIGMA).unwrap(), ZERO);
        let r = cat.r(SIGMA, SIGMA, ONE_ID).unwrap();
        assert!((cat.r_inv(SIGMA, SIGMA, ONE_ID).unwrap() * r - ONE).norm() < 1e-12);
        assert_eq!(cat.object_id("vac").unwrap(), ONE_ID);
        assert!(matches!(cat.object_id("tau"), Err(Error::UnknownObject(_))));
    }
}
