use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use loopbraid::builtin::{self, TYParams};
use loopbraid::category::{validate_structure, verify_hexagon, verify_pentagon, CoherenceReport};
use loopbraid::io::{self, ConfigDoc};
use loopbraid::loop_rep::{
    build_lb_representation, verify_lb_relations, DoubleBraiding, LBRep, Relation,
};
use loopbraid::oracle::{oracle_equivalence, oracle_generator_matrix};
use loopbraid::word::{evaluate, parse_word};
use loopbraid::{CMatrix, Error, ObjectId, RibbonCategory, DEFAULT_TOL};

/// Loop braid group representations from ribbon fusion categories.
///
/// Words use `x<i>` for the pass-through generator σ_i and `s<j>` for the
/// exchange generator, with an optional `^-1`. Words act left to right: in
/// "x1 s2" the letter x1 acts first, so the matrix is M(s2)·M(x1).
#[derive(Parser)]
#[command(name = "loopbraid", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural invariants, pentagon and hexagon equations.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Build the representation on Hom(z, (x⊗y)^n) and check every relation.
    Rep {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a loop braid word.
    Eval {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        out: Output,
        /// Word such as "x1 s2 x1^-1"; empty is the identity.
        word: String,
    },
    /// Compare the closed-form generators against the crossing-word oracle.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        out: Output,
        /// Also print the oracle matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Hom-space dimensions for n = 1..=max-n and quantum dimensions.
    Dims {
        #[command(flatten)]
        source: Source,
        #[arg(short = 'x', default_value = "vac")]
        x: String,
        #[arg(short = 'y', default_value = "vac")]
        y: String,
        #[arg(short = 'z', default_value = "vac")]
        z: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Write a built-in category in the category file format.
    ExportBuiltin {
        #[command(flatten)]
        source: Source,
        /// Destination file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinName {
    Trivial,
    Ising,
    Ty,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "category")]
struct CategorySource {
    /// Built-in category.
    #[arg(long, value_enum)]
    builtin: Option<BuiltinName>,
    /// Category data file (JSON).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    #[command(flatten)]
    which: CategorySource,
    /// Rank k of the group (Z₂)^k for the ty built-in.
    #[arg(long, default_value_t = 1)]
    ty_k: usize,
    /// Sign of the F^{mmm} normalisation for the ty built-in.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    ty_sign: i8,
    /// Bicharacter form for the ty built-in as comma-separated row bitmasks
    /// (row i, bit j is B[i][j]); defaults to the identity form.
    #[arg(long, value_delimiter = ',')]
    ty_form: Option<Vec<u32>>,
}

#[derive(Args)]
struct Space {
    #[arg(short = 'x', default_value = "vac")]
    x: String,
    #[arg(short = 'y', default_value = "vac")]
    y: String,
    #[arg(short = 'z', default_value = "vac")]
    z: String,
    /// Number of loops.
    #[arg(short = 'n', default_value_t = 2)]
    n: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Args)]
struct Output {
    /// Residual tolerance (entrywise max-norm).
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

/// Failures that map to exit code 2 (usage or I/O) or 1 (mathematical).
enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { source, out } => verify(&load(&source)?, &out),
        Command::Rep { source, space, out } => rep(&load(&source)?, &space, &out),
        Command::Eval {
            source,
            space,
            out,
            word,
        } => eval(&load(&source)?, &space, &out, &word),
        Command::Oracle {
            source,
            space,
            out,
            matrices,
        } => oracle(&load(&source)?, &space, &out, matrices),
        Command::Dims {
            source,
            x,
            y,
            z,
            max_n,
            out,
        } => {
            let cat = load(&source)?;
            let doc = io::dims_document(
                &cat,
                cat.object_id(&x)?,
                cat.object_id(&y)?,
                cat.object_id(&z)?,
                max_n,
            );
            let text = match out.format {
                Format::Structured => io::to_json(&doc),
                Format::Human => {
                    let mut s = format!(
                        "category {}: dim Hom({}, ({}⊗{})^n)\n",
                        doc.category, doc.z, doc.x, doc.y
                    );
                    for e in &doc.dims {
                        s += &format!("  n={:<3} {}\n", e.n, e.dim);
                    }
                    s += "quantum dimensions\n";
                    for q in &doc.quantum_dimensions {
                        s += &format!("  {:<8} {:.12}\n", q.object, q.value.0);
                    }
                    s
                }
            };
            emit(out.output.as_ref(), &text)?;
            Ok(true)
        }
        Command::ExportBuiltin { source, output } => {
            if source.which.file.is_some() {
                return Err(Failure::Usage("export-builtin needs --builtin".into()));
            }
            emit(output.as_ref(), &io::category_to_string(&load(&source)?))?;
            Ok(true)
        }
    }
}

fn load(source: &Source) -> Result<RibbonCategory, Failure> {
    if let Some(path) = &source.which.file {
        return Ok(io::load_category(path)?);
    }
    match source.which.builtin {
        Some(BuiltinName::Trivial) | None => Ok(builtin::trivial()),
        Some(BuiltinName::Ising) => Ok(builtin::ising()),
        Some(BuiltinName::Ty) => {
            if !(1..=3).contains(&source.ty_k) {
                return Err(Failure::Usage(format!(
                    "--ty-k must be in 1..=3, got {}",
                    source.ty_k
                )));
            }
            let params = match &source.ty_form {
                Some(rows) => TYParams::from_form(source.ty_k, rows, source.ty_sign),
                None => TYParams {
                    sign: source.ty_sign,
                    ..TYParams::standard(source.ty_k)
                },
            };
            Ok(builtin::tambara_yamagami(&params)?)
        }
    }
}

fn check_tol(out: &Output) -> Result<(), Failure> {
    if out.tol > 0.0 && out.tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "tolerance must be positive, got {}",
            out.tol
        )))
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn resolve(cat: &RibbonCategory, space: &Space) -> Result<(ObjectId, ObjectId, ObjectId), Failure> {
    if space.n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    Ok((
        cat.object_id(&space.x)?,
        cat.object_id(&space.y)?,
        cat.object_id(&space.z)?,
    ))
}

fn build(cat: &RibbonCategory, space: &Space) -> Result<LBRep, Failure> {
    let (x, y, z) = resolve(cat, space)?;
    let rep = build_lb_representation(cat, x, y, z, space.n)?;
    if rep.dim() == 0 {
        eprintln!(
            "warning: Hom({}, ({}⊗{})^{}) is zero-dimensional; matrices are 0×0 and every check passes vacuously",
            space.z, space.x, space.y, space.n
        );
    }
    Ok(rep)
}

fn complex_text(re: f64, im: f64) -> String {
    format!("{re:+.6}{im:+.6}i")
}

fn matrix_text(m: &CMatrix, indent: &str) -> String {
    let mut s = String::new();
    if m.nrows() == 0 {
        s += indent;
        s += "(empty)\n";
    }
    for i in 0..m.nrows() {
        s += indent;
        let row: Vec<String> = (0..m.ncols())
            .map(|j| complex_text(m[(i, j)].re, m[(i, j)].im))
            .collect();
        s += &row.join("  ");
        s.push('\n');
    }
    s
}

fn basis_text(cat: &RibbonCategory, rep: &LBRep) -> String {
    let mut s = format!("basis ({} trees)\n", rep.dim());
    for (i, t) in rep.basis.iter().enumerate() {
        s += &format!("  [{i}] {}\n", t.describe(cat));
    }
    s
}

fn coherence_text(label: &str, cat: &RibbonCategory, r: &CoherenceReport) -> String {
    let mut s = format!(
        "{label}: {} ({} instances, max residual {:.3e})\n",
        if r.passed() { "pass" } else { "FAIL" },
        r.instances,
        r.max_residual
    );
    for f in r.failures.iter().take(20) {
        s += &format!(
            "  {} {} residual {:.3e}\n",
            f.equation,
            cat.tuple_name(&f.tuple),
            f.residual
        );
    }
    if r.failures.len() > 20 {
        s += &format!("  … {} more\n", r.failures.len() - 20);
    }
    s
}

fn verify(cat: &RibbonCategory, out: &Output) -> Outcome {
    check_tol(out)?;
    let structure = validate_structure(cat);
    let pentagon = verify_pentagon(cat, out.tol)?;
    let hexagon = verify_hexagon(cat, out.tol)?;
    let passed = structure.is_valid() && pentagon.passed() && hexagon.passed();
    let text = match out.format {
        Format::Structured => io::to_json(&io::verify_document(
            cat, out.tol, &structure, &pentagon, &hexagon,
        )),
        Format::Human => {
            let mut s = format!("category {} ({} objects)\n", cat.name(), cat.num_objects());
            if structure.is_valid() {
                s += "structure: pass\n";
            } else {
                s += &format!(
                    "structure: FAIL ({} violations)\n",
                    structure.violations.len()
                );
                for v in &structure.violations {
                    s += &format!("  {}: {}\n", v.invariant, v.detail);
                }
            }
            s += &coherence_text("pentagon", cat, &pentagon);
            s += &coherence_text("hexagon", cat, &hexagon);
            s += if passed {
                "result: pass\n"
            } else {
                "result: FAIL\n"
            };
            s
        }
    };
    emit(out.output.as_ref(), &text)?;
    Ok(passed)
}

fn rep(cat: &RibbonCategory, space: &Space, out: &Output) -> Outcome {
    check_tol(out)?;
    let rep = build(cat, space)?;
    let report = verify_lb_relations(&rep, out.tol);
    let text = match out.format {
        Format::Structured => io::to_json(&io::rep_document(cat, &rep, &report)),
        Format::Human => {
            let mut s = format!(
                "category {}: Hom({}, ({}⊗{})^{}) has dimension {}\n",
                cat.name(),
                space.z,
                space.x,
                space.y,
                space.n,
                rep.dim()
            );
            s += &basis_text(cat, &rep);
            for (i, m) in rep.sigma.iter().enumerate() {
                s += &format!("x{}\n{}", i + 1, matrix_text(m, "  "));
            }
            for (i, m) in rep.s.iter().enumerate() {
                s += &format!("s{}\n{}", i + 1, matrix_text(m, "  "));
            }
            s += "relations\n";
            for rel in Relation::ALL {
                let count = report.instances.get(&rel).map_or(0, Vec::len);
                s += &format!(
                    "  {:<7} {:<4} {:>3} instances, max residual {:.3e}\n",
                    rel.to_string(),
                    if report.relation_passed(rel) {
                        "pass"
                    } else {
                        "FAIL"
                    },
                    count,
                    report.max_residual(rel)
                );
            }
            let db = &rep.double_braiding;
            s += &match db.verdict {
                DoubleBraiding::Trivial => "double braiding of x⊗y: trivial\n".to_string(),
                DoubleBraiding::Nontrivial { witness, residual } => format!(
                    "double braiding of x⊗y: nontrivial (channel {}, residual {:.3e})\n",
                    cat.object_name(witness),
                    residual
                ),
            };
            let summands: Vec<String> = db
                .summands
                .iter()
                .map(|(z, st)| format!("{}={st}", cat.object_name(*z)))
                .collect();
            s += &format!(
                "summands of x⊗y: {} (all boson/fermion: {})\n",
                summands.join(", "),
                if db.sufficient { "yes" } else { "no" }
            );
            s += if report.passed() {
                "result: pass\n"
            } else {
                "result: FAIL\n"
            };
            s
        }
    };
    emit(out.output.as_ref(), &text)?;
    Ok(report.passed())
}

fn eval(cat: &RibbonCategory, space: &Space, out: &Output, word: &str) -> Outcome {
    check_tol(out)?;
    let w =
        parse_word(word).map_err(|e| Failure::Math(format!("{e}\n  {word}\n  {}", caret(&e))))?;
    let rep = build(cat, space)?;
    let m = evaluate(&rep, &w).map_err(|e| Failure::Math(e.to_string()))?;
    let text = match out.format {
        Format::Structured => {
            io::to_json(&io::eval_document(cat, &rep, &w.to_string(), &m, out.tol))
        }
        Format::Human => format!(
            "word: {}\n{}matrix ({}×{})\n{}",
            if w.is_empty() {
                "(empty)".to_string()
            } else {
                w.to_string()
            },
            basis_text(cat, &rep),
            m.nrows(),
            m.ncols(),
            matrix_text(&m, "  ")
        ),
    };
    emit(out.output.as_ref(), &text)?;
    Ok(true)
}

fn caret(e: &Error) -> String {
    match e {
        Error::Parse { offset, .. } => format!("{}^", " ".repeat(*offset)),
        _ => String::new(),
    }
}

fn oracle(cat: &RibbonCategory, space: &Space, out: &Output, matrices: bool) -> Outcome {
    check_tol(out)?;
    let (x, y, z) = resolve(cat, space)?;
    let report = oracle_equivalence(cat, x, y, z, space.n, out.tol)?;
    let dim = loopbraid::basis::enumerate_paired_basis(cat, x, y, z, space.n).len();
    let text = match out.format {
        Format::Structured => io::to_json(&io::oracle_document(
            ConfigDoc::new(cat, x, y, z, space.n, out.tol),
            dim,
            &report,
        )),
        Format::Human => {
            let mut s = format!(
                "category {}: oracle vs closed form on Hom({}, ({}⊗{})^{}), dimension {dim}\n",
                cat.name(),
                space.z,
                space.x,
                space.y,
                space.n
            );
            for e in &report.entries {
                s += &format!(
                    "  {}{}  residual {:.3e}\n",
                    e.kind.symbol(),
                    e.index,
                    e.residual
                );
                if matrices {
                    let m = oracle_generator_matrix(cat, x, y, z, space.n, e.kind, e.index)?;
                    s += &matrix_text(&m, "    ");
                }
            }
            s += if report.passed() {
                "result: pass\n"
            } else {
                "result: FAIL\n"
            };
            s
        }
    };
    emit(out.output.as_ref(), &text)?;
    Ok(report.passed())
}
