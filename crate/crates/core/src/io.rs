//! Category data files and structured (JSON) output documents.
//!
//! A category file names every object and lists fusion triples, F, R and twist
//! entries by object name. Unit-leg F and R entries may be omitted. Saving
//! writes every entry in canonical order, so `save(load(save(c)))` is
//! byte-identical to `save(c)`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::basis::{dim_hom, paired_leaves, PairedFusionTree};
use crate::category::{
    quantum_dimension, CoherenceReport, FSymbolTable, FusionRules, ObjectId, RSymbolTable,
    RibbonCategory, ValidationReport,
};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::loop_rep::{DoubleBraiding, LBRep, RelationReport};
use crate::oracle::EquivalenceReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    /// Multiplicity; only 1 is accepted.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub n: usize,
}

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub f: String,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct REntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistEntry {
    pub a: String,
    pub value: [f64; 2],
}

/// On-disk form of a [`RibbonCategory`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryData {
    pub name: String,
    pub objects: Vec<String>,
    pub unit: String,
    /// `[object, dual]` pairs, one per object.
    pub dual: Vec<[String; 2]>,
    pub fusion: Vec<FusionEntry>,
    #[serde(default)]
    pub f: Vec<FEntry>,
    #[serde(default)]
    pub r: Vec<REntry>,
    pub twist: Vec<TwistEntry>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn to_data(cat: &RibbonCategory) -> CategoryData {
    let name = |i: ObjectId| cat.object_name(i).to_string();
    let rules = cat.rules();
    let mut fusion = Vec::new();
    for a in rules.objects() {
        for b in rules.objects() {
            for c in rules.fuse(a, b) {
                fusion.push(FusionEntry {
                    a: name(a),
                    b: name(b),
                    c: name(c),
                    n: 1,
                });
            }
        }
    }
    CategoryData {
        name: cat.name().to_string(),
        objects: rules.objects().map(name).collect(),
        unit: name(cat.unit()),
        dual: rules
            .objects()
            .map(|a| [name(a), name(rules.dual(a))])
            .collect(),
        fusion,
        f: cat
            .f_table()
            .iter()
            .map(|(k, v)| FEntry {
                a: name(k[0]),
                b: name(k[1]),
                c: name(k[2]),
                d: name(k[3]),
                e: name(k[4]),
                f: name(k[5]),
                value: pair(*v),
            })
            .collect(),
        r: cat
            .r_table()
            .iter()
            .map(|(k, v)| REntry {
                a: name(k[0]),
                b: name(k[1]),
                c: name(k[2]),
                value: pair(*v),
            })
            .collect(),
        twist: rules
            .objects()
            .map(|a| TwistEntry {
                a: name(a),
                value: pair(cat.twist(a)),
            })
            .collect(),
    }
}

pub fn from_data(data: &CategoryData) -> Result<RibbonCategory> {
    let mut ids = HashMap::new();
    for (i, o) in data.objects.iter().enumerate() {
        if ids.insert(o.as_str(), i).is_some() {
            return Err(Error::DuplicateObject(o.clone()));
        }
    }
    let id = |s: &str| {
        ids.get(s)
            .copied()
            .ok_or_else(|| Error::UnknownObject(s.to_string()))
    };
    let k = data.objects.len();
    let unit = id(&data.unit)?;

    let mut dual = vec![None; k];
    for [a, b] in &data.dual {
        let slot = &mut dual[id(a)?];
        if slot.is_some() {
            return Err(Error::Malformed(format!("dual of `{a}` given twice")));
        }
        *slot = Some(id(b)?);
    }
    let dual = dual
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            d.ok_or_else(|| Error::Malformed(format!("no dual given for `{}`", data.objects[i])))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut triples = Vec::new();
    for e in &data.fusion {
        if e.n > 1 {
            return Err(Error::Multiplicity {
                a: e.a.clone(),
                b: e.b.clone(),
                c: e.c.clone(),
                n: e.n,
            });
        }
        if e.n == 1 {
            triples.push((id(&e.a)?, id(&e.b)?, id(&e.c)?));
        }
    }
    let rules = FusionRules::from_triples(k, unit, dual, triples).map_err(|err| match err {
        Error::Multiplicity { a, b, c, n } => {
            let nm = |s: &str| {
                s.parse::<usize>()
                    .map_or(s.to_string(), |i| data.objects[i].clone())
            };
            Error::Multiplicity {
                a: nm(&a),
                b: nm(&b),
                c: nm(&c),
                n,
            }
        }
        other => other,
    })?;

    let mut f = FSymbolTable::new();
    for e in &data.f {
        let key = [
            id(&e.a)?,
            id(&e.b)?,
            id(&e.c)?,
            id(&e.d)?,
            id(&e.e)?,
            id(&e.f)?,
        ];
        if f.get(&key).is_some() {
            return Err(Error::Malformed(format!("F entry {key:?} given twice")));
        }
        f.insert(key, complex(e.value));
    }
    let mut r = RSymbolTable::new();
    for e in &data.r {
        let key = [id(&e.a)?, id(&e.b)?, id(&e.c)?];
        if r.get(&key).is_some() {
            return Err(Error::Malformed(format!("R entry {key:?} given twice")));
        }
        r.insert(key, complex(e.value));
    }
    let mut twist = vec![None; k];
    for e in &data.twist {
        twist[id(&e.a)?] = Some(complex(e.value));
    }
    let twist = twist
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| Error::MissingSymbol {
                kind: "twist",
                tuple: data.objects[i].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    RibbonCategory::new(data.name.clone(), data.objects.clone(), rules, f, r, twist)
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Malformed(format!("line {}, column {}: {e}", e.line(), e.column()))
}

pub fn category_from_str(text: &str) -> Result<RibbonCategory> {
    let data: CategoryData = serde_json::from_str(text).map_err(json_error)?;
    from_data(&data)
}

pub fn category_to_string(cat: &RibbonCategory) -> String {
    let mut s = serde_json::to_string_pretty(&to_data(cat)).expect("category data serializes");
    s.push('\n');
    s
}

pub fn load_category(path: impl AsRef<Path>) -> Result<RibbonCategory> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    category_from_str(&text)
}

pub fn save_category(cat: &RibbonCategory, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, category_to_string(cat))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A float written with 17 significant digits in scientific notation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sci(pub f64);

impl Sci {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "null".to_string()
        }
    }
}

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub type MatrixRows = Vec<Vec<[Sci; 2]>>;

/// Dense rows of `[re, im]` pairs.
pub fn matrix_rows(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [Sci(m[(i, j)].re), Sci(m[(i, j)].im)])
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeDoc {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

pub fn basis_doc(cat: &RibbonCategory, trees: &[PairedFusionTree]) -> Vec<TreeDoc> {
    let names = |ids: &[ObjectId]| {
        ids.iter()
            .map(|&i| cat.object_name(i).to_string())
            .collect()
    };
    trees
        .iter()
        .map(|t| TreeDoc {
            a: names(&t.a),
            b: names(&t.b),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigDoc {
    pub category: String,
    pub x: String,
    pub y: String,
    pub z: String,
    pub n: usize,
    pub tol: Sci,
}

impl ConfigDoc {
    pub fn new(
        cat: &RibbonCategory,
        x: ObjectId,
        y: ObjectId,
        z: ObjectId,
        n: usize,
        tol: f64,
    ) -> Self {
        Self {
            category: cat.name().to_string(),
            x: cat.object_name(x).to_string(),
            y: cat.object_name(y).to_string(),
            z: cat.object_name(z).to_string(),
            n,
            tol: Sci(tol),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixDoc {
    pub generator: String,
    pub rows: MatrixRows,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceDoc {
    pub indices: Vec<usize>,
    pub residual: Sci,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationDoc {
    pub relation: String,
    pub passed: bool,
    pub max_residual: Sci,
    pub instances: Vec<InstanceDoc>,
}

pub fn relations_doc(report: &RelationReport) -> Vec<RelationDoc> {
    report
        .instances
        .iter()
        .map(|(rel, list)| RelationDoc {
            relation: rel.to_string(),
            passed: report.relation_passed(*rel),
            max_residual: Sci(report.max_residual(*rel)),
            instances: list
                .iter()
                .map(|i| InstanceDoc {
                    indices: i.indices.clone(),
                    residual: Sci(i.residual),
                })
                .collect(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleBraidingDoc {
    pub trivial: bool,
    pub witness: Option<String>,
    pub witness_residual: Option<Sci>,
    pub channels: Vec<(String, Sci)>,
    pub summands: Vec<(String, String)>,
    pub sufficient_condition: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepDocument {
    pub config: ConfigDoc,
    pub dimension: usize,
    pub basis: Vec<TreeDoc>,
    pub matrices: Vec<MatrixDoc>,
    pub relations: Vec<RelationDoc>,
    pub double_braiding: DoubleBraidingDoc,
    pub passed: bool,
}

pub fn rep_document(cat: &RibbonCategory, rep: &LBRep, report: &RelationReport) -> RepDocument {
    let db = &rep.double_braiding;
    let (witness, witness_residual) = match db.verdict {
        DoubleBraiding::Trivial => (None, None),
        DoubleBraiding::Nontrivial { witness, residual } => (
            Some(cat.object_name(witness).to_string()),
            Some(Sci(residual)),
        ),
    };
    let mut matrices = Vec::new();
    for (i, m) in rep.sigma.iter().enumerate() {
        matrices.push(MatrixDoc {
            generator: format!("x{}", i + 1),
            rows: matrix_rows(m),
        });
    }
    for (i, m) in rep.s.iter().enumerate() {
        matrices.push(MatrixDoc {
            generator: format!("s{}", i + 1),
            rows: matrix_rows(m),
        });
    }
    RepDocument {
        config: ConfigDoc::new(cat, rep.x, rep.y, rep.z, rep.n, report.tol),
        dimension: rep.dim(),
        basis: basis_doc(cat, rep.basis.trees()),
        matrices,
        relations: relations_doc(report),
        double_braiding: DoubleBraidingDoc {
            trivial: db.is_trivial(),
            witness,
            witness_residual,
            channels: db
                .channels
                .iter()
                .map(|(w, r)| (cat.object_name(*w).to_string(), Sci(*r)))
                .collect(),
            summands: db
                .summands
                .iter()
                .map(|(z, s)| (cat.object_name(*z).to_string(), s.to_string()))
                .collect(),
            sufficient_condition: db.sufficient,
        },
        passed: report.passed(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureDoc {
    pub equation: String,
    pub tuple: Vec<String>,
    pub residual: Sci,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceDoc {
    pub instances: usize,
    pub max_residual: Sci,
    pub passed: bool,
    pub failures: Vec<FailureDoc>,
}

pub fn coherence_doc(cat: &RibbonCategory, report: &CoherenceReport) -> CoherenceDoc {
    CoherenceDoc {
        instances: report.instances,
        max_residual: Sci(report.max_residual),
        passed: report.passed(),
        failures: report
            .failures
            .iter()
            .map(|f| FailureDoc {
                equation: f.equation.to_string(),
                tuple: f
                    .tuple
                    .iter()
                    .map(|&i| cat.object_name(i).to_string())
                    .collect(),
                residual: Sci(f.residual),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationDoc {
    pub invariant: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyDocument {
    pub category: String,
    pub tol: Sci,
    pub structure: Vec<ViolationDoc>,
    pub pentagon: CoherenceDoc,
    pub hexagon: CoherenceDoc,
    pub passed: bool,
}

pub fn verify_document(
    cat: &RibbonCategory,
    tol: f64,
    structure: &ValidationReport,
    pentagon: &CoherenceReport,
    hexagon: &CoherenceReport,
) -> VerifyDocument {
    VerifyDocument {
        category: cat.name().to_string(),
        tol: Sci(tol),
        structure: structure
            .violations
            .iter()
            .map(|v| ViolationDoc {
                invariant: v.invariant.to_string(),
                detail: v.detail.clone(),
            })
            .collect(),
        pentagon: coherence_doc(cat, pentagon),
        hexagon: coherence_doc(cat, hexagon),
        passed: structure.is_valid() && pentagon.passed() && hexagon.passed(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceDoc {
    pub generator: String,
    pub residual: Sci,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleDocument {
    pub config: ConfigDoc,
    pub dimension: usize,
    pub generators: Vec<EquivalenceDoc>,
    pub max_residual: Sci,
    pub passed: bool,
}

pub fn oracle_document(
    config: ConfigDoc,
    dimension: usize,
    report: &EquivalenceReport,
) -> OracleDocument {
    OracleDocument {
        config,
        dimension,
        generators: report
            .entries
            .iter()
            .map(|e| EquivalenceDoc {
                generator: format!("{}{}", e.kind.symbol(), e.index),
                residual: Sci(e.residual),
            })
            .collect(),
        max_residual: Sci(report.max_residual()),
        passed: report.passed(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalDocument {
    pub config: ConfigDoc,
    pub word: String,
    pub dimension: usize,
    pub basis: Vec<TreeDoc>,
    pub matrix: MatrixRows,
}

pub fn eval_document(
    cat: &RibbonCategory,
    rep: &LBRep,
    word: &str,
    m: &CMatrix,
    tol: f64,
) -> EvalDocument {
    EvalDocument {
        config: ConfigDoc::new(cat, rep.x, rep.y, rep.z, rep.n, tol),
        word: word.to_string(),
        dimension: rep.dim(),
        basis: basis_doc(cat, rep.basis.trees()),
        matrix: matrix_rows(m),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimEntry {
    pub n: usize,
    pub dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumDimEntry {
    pub object: String,
    pub value: Sci,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsDocument {
    pub category: String,
    pub x: String,
    pub y: String,
    pub z: String,
    pub dims: Vec<DimEntry>,
    pub quantum_dimensions: Vec<QuantumDimEntry>,
}

/// `dim Hom(z, (x⊗y)^{⊗n})` for `n = 1..=max_n` and the quantum dimension of every object.
pub fn dims_document(
    cat: &RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    max_n: usize,
) -> DimsDocument {
    DimsDocument {
        category: cat.name().to_string(),
        x: cat.object_name(x).to_string(),
        y: cat.object_name(y).to_string(),
        z: cat.object_name(z).to_string(),
        dims: (1..=max_n)
            .map(|n| DimEntry {
                n,
                dim: dim_hom(cat, &paired_leaves(x, y, n), z),
            })
            .collect(),
        quantum_dimensions: cat
            .rules()
            .objects()
            .map(|a| QuantumDimEntry {
                object: cat.object_name(a).to_string(),
                value: Sci(quantum_dimension(cat, a)),
            })
            .collect(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}
