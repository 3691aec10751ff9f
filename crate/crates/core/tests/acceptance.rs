//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; the process exits nonzero if any fails.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use loopbraid::basis::{dim_hom, enumerate_paired_basis, paired_leaves};
use loopbraid::builtin::{ising, tambara_yamagami, trivial, TYParams};
use loopbraid::category::{verify_hexagon, verify_pentagon, FKey};
use loopbraid::linalg;
use loopbraid::loop_rep::{
    build_lb_representation, check_trivial_double_braiding, verify_lb_relations, LBRep, Relation,
};
use loopbraid::oracle::oracle_equivalence;
use loopbraid::word::{evaluate, GeneratorKind, Letter, LoopBraidWord};
use loopbraid::{ObjectId, RibbonCategory};

const TOL: f64 = 1e-9;
const SIGMA: ObjectId = 1;
const PSI: ObjectId = 2;

struct Config {
    cat: RibbonCategory,
    x: ObjectId,
    y: ObjectId,
    z: ObjectId,
    n: usize,
}

impl Config {
    fn label(&self) -> String {
        let name = |i| self.cat.object_name(i);
        format!(
            "{} x={} y={} z={} n={}",
            self.cat.name(),
            name(self.x),
            name(self.y),
            name(self.z),
            self.n
        )
    }

    fn rep(&self) -> LBRep {
        build_lb_representation(&self.cat, self.x, self.y, self.z, self.n)
            .expect("representation builds")
    }
}

/// Ising with x=y=σ, z∈{1,ψ}, n∈{2,3,4}; TY((Z₂)^k), k∈{1,2}, x=y=m, z each
/// group element, n∈{2,3}.
fn theorem_configs(max_n_ty: usize, ns_ising: &[usize]) -> Vec<Config> {
    let mut out = Vec::new();
    for &n in ns_ising {
        for z in [0, PSI] {
            out.push(Config {
                cat: ising(),
                x: SIGMA,
                y: SIGMA,
                z,
                n,
            });
        }
    }
    for k in 1..=2 {
        let cat = tambara_yamagami(&TYParams::standard(k)).expect("TY builds");
        let m = 1 << k;
        for n in 2..=max_n_ty {
            for g in 0..m {
                out.push(Config {
                    cat: cat.clone(),
                    x: m,
                    y: m,
                    z: g,
                    n,
                });
            }
        }
    }
    out
}

fn report(id: u32, title: &str, ok: bool, detail: String) -> bool {
    let status = if ok { "PASS" } else { "FAIL" };
    if detail.is_empty() {
        println!("criterion {id} ({title}): {status}");
    } else {
        println!("criterion {id} ({title}): {status} {detail}");
    }
    ok
}

fn criterion_1() -> bool {
    let cat = ising();
    let mut ok = true;
    let mut worst = String::new();
    for n in 1..=6 {
        for z in [0, PSI] {
            let expected = 1u64 << (n - 1);
            let by_fusion = dim_hom(&cat, &paired_leaves(SIGMA, SIGMA, n), z);
            let by_trees = enumerate_paired_basis(&cat, SIGMA, SIGMA, z, n).len() as u64;
            if by_fusion != expected || by_trees != expected {
                ok = false;
                worst = format!(
                    "n={n} z={}: {by_fusion}/{by_trees} vs {expected}",
                    cat.object_name(z)
                );
            }
        }
    }
    report(
        1,
        "dim Hom(z,(σ⊗σ)^n) = 2^(n-1), n=1..6",
        ok,
        if ok {
            "exact for z=1,psi".into()
        } else {
            worst
        },
    )
}

fn criterion_2(configs: &[Config]) -> bool {
    let mut ok = true;
    let mut max = 0.0_f64;
    let mut instances = 0;
    for c in configs {
        let r = verify_lb_relations(&c.rep(), TOL);
        for rel in Relation::ALL.iter().filter(|&&r| r != Relation::Lemma1) {
            max = max.max(r.max_residual(*rel));
            instances += r.instances[rel].len();
        }
        if !r.passed() {
            ok = false;
            println!("  {}: failing {:?}", c.label(), r.failing());
        }
    }
    report(
        2,
        "B1-M3 hold on symmetric configurations",
        ok,
        format!(
            "{} configs, {instances} instances, max residual {max:.2e}",
            configs.len()
        ),
    )
}

fn criterion_3(configs: &[Config]) -> bool {
    let mut ok = true;
    let mut max = 0.0_f64;
    for c in configs {
        let r = verify_lb_relations(&c.rep(), TOL);
        let res = r.max_residual(Relation::Lemma1);
        max = max.max(res);
        if !r.relation_passed(Relation::Lemma1) {
            ok = false;
            println!("  {}: Lemma 1 residual {res:.2e}", c.label());
        }
    }
    report(
        3,
        "σ̃_iσ̃_(i+1) = s̃_is̃_(i+1) on every configuration",
        ok,
        format!("max residual {max:.2e}"),
    )
}

fn criterion_4() -> bool {
    let cat = ising();
    let mut unconditional_ok = true;
    let mut s2_min = f64::INFINITY;
    let mut m2_min = f64::INFINITY;
    let mut unconditional_max = 0.0_f64;
    for n in [3, 4] {
        for z in cat.rules().objects() {
            let c = Config {
                cat: cat.clone(),
                x: SIGMA,
                y: 0,
                z,
                n,
            };
            let rep = c.rep();
            if rep.dim() == 0 {
                continue;
            }
            let r = verify_lb_relations(&rep, TOL);
            for rel in Relation::UNCONDITIONAL {
                unconditional_max = unconditional_max.max(r.max_residual(rel));
                unconditional_ok &= r.relation_passed(rel);
            }
            s2_min = s2_min.min(r.max_residual(Relation::S2));
            m2_min = m2_min.min(r.max_residual(Relation::M2));
        }
    }
    let nontrivial = !check_trivial_double_braiding(&cat, SIGMA, 0, TOL)
        .unwrap()
        .is_trivial();
    let s2_ok = s2_min > 0.1;
    let m2_ok = m2_min > 0.1;
    println!(
        "  B1,B2,S1,S3,M1,M3 max residual {unconditional_max:.2e} [{}]; S2 min residual {s2_min:.2e} [{}]; \
         M2 min residual {m2_min:.2e} [{}]; double braiding nontrivial [{}]",
        verdict(unconditional_ok),
        verdict(s2_ok),
        verdict(m2_ok),
        verdict(nontrivial)
    );
    // with y = 1 the pass-through generator coincides with the exchange, so M2
    // collapses to S1; it also holds for pairs where y is nontrivial
    let other = Config {
        cat: cat.clone(),
        x: SIGMA,
        y: PSI,
        z: SIGMA,
        n: 3,
    };
    let m2_other = verify_lb_relations(&other.rep(), TOL).max_residual(Relation::M2);
    println!("  informative: M2 residual for (x=sigma, y=psi) is {m2_other:.2e}");
    report(
        4,
        "negative control x=sigma, y=1",
        unconditional_ok && s2_ok && m2_ok && nontrivial,
        if m2_ok {
            String::new()
        } else {
            "(M2 holds for this pair, so residual > 0.1 is not reached)".into()
        },
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "not met"
    }
}

fn criterion_5(configs: &[Config]) -> bool {
    let mut ok = true;
    let mut max = 0.0_f64;
    let mut count = 0;
    for c in configs.iter().filter(|c| c.n <= 3) {
        let r = oracle_equivalence(&c.cat, c.x, c.y, c.z, c.n, TOL).expect("oracle runs");
        max = max.max(r.max_residual());
        count += 1;
        if !r.passed() {
            ok = false;
            println!("  {}: max residual {:.2e}", c.label(), r.max_residual());
        }
    }
    report(
        5,
        "closed forms agree with the crossing oracle",
        ok,
        format!("{count} configs, max residual {max:.2e}"),
    )
}

/// First entry whose upper legs are all non-unit, else the first entry.
fn perturbation_target(cat: &RibbonCategory) -> FKey {
    let unit = cat.unit();
    let keys: Vec<FKey> = cat.f_table().iter().map(|(k, _)| *k).collect();
    keys.iter()
        .copied()
        .find(|k| k[..3].iter().all(|&o| o != unit))
        .unwrap_or(keys[0])
}

fn criterion_6() -> bool {
    let cats = [
        trivial(),
        ising(),
        tambara_yamagami(&TYParams::standard(1)).unwrap(),
        tambara_yamagami(&TYParams::standard(2)).unwrap(),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for cat in &cats {
        let p = verify_pentagon(cat, TOL).unwrap();
        let h = verify_hexagon(cat, TOL).unwrap();
        let key = perturbation_target(cat);
        let broken = cat.with_f_entry(key, -cat.f(key).unwrap()).unwrap();
        let detected = !verify_pentagon(&broken, TOL).unwrap().passed();
        ok &= p.passed() && h.passed() && detected;
        lines.push(format!(
            "{}: pentagon {} ({:.1e}), hexagon {} ({:.1e}), perturbed F{} {}",
            cat.name(),
            verdict(p.passed()),
            p.max_residual,
            verdict(h.passed()),
            h.max_residual,
            cat.tuple_name(&key),
            if detected { "detected" } else { "missed" }
        ));
    }
    for l in lines {
        println!("  {l}");
    }
    report(
        6,
        "pentagon/hexagon coherence and perturbation detection",
        ok,
        String::new(),
    )
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> LoopBraidWord {
    let len = rng.gen_range(0..=max_len);
    LoopBraidWord::new(
        (0..len)
            .map(|_| Letter {
                kind: if rng.gen_bool(0.5) {
                    GeneratorKind::Sigma
                } else {
                    GeneratorKind::S
                },
                index: rng.gen_range(1..n),
                exponent: if rng.gen_bool(0.5) { 1 } else { -1 },
            })
            .collect(),
    )
}

fn criterion_7(configs: &[Config]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1007);
    let mut ok = true;
    let mut max_inv = 0.0_f64;
    let mut max_rel = 0.0_f64;
    let mut words = 0;
    for c in configs {
        let rep = c.rep();
        let relations: Vec<(Relation, Vec<usize>)> = Relation::ALL
            .iter()
            .filter(|&&r| r != Relation::Lemma1)
            .flat_map(|&r| r.instances(c.n).into_iter().map(move |i| (r, i)))
            .collect();
        let id = linalg::identity(rep.dim());
        for _ in 0..200 {
            words += 1;
            let w = random_word(&mut rng, c.n, 20);
            let inv = linalg::max_diff(&evaluate(&rep, &w.concat(&w.inverse())).unwrap(), &id);
            max_inv = max_inv.max(inv);

            let (rel, idx) = &relations[rng.gen_range(0..relations.len())];
            let (lhs, rhs) = rel.sides(idx);
            let cut = rng.gen_range(0..=w.len());
            let splice = |side: &[Letter]| {
                let mut letters = w.letters[..cut].to_vec();
                letters.extend_from_slice(side);
                letters.extend_from_slice(&w.letters[cut..]);
                LoopBraidWord::new(letters)
            };
            let a = evaluate(&rep, &splice(&lhs)).unwrap();
            let b = evaluate(&rep, &splice(&rhs)).unwrap();
            let res = linalg::max_diff(&a, &b);
            max_rel = max_rel.max(res);
            if inv > TOL || res > TOL {
                ok = false;
                println!(
                    "  {}: word `{w}` inverse residual {inv:.2e}, {rel} residual {res:.2e}",
                    c.label()
                );
            }
        }
    }
    report(
        7,
        "random words: w·w⁻¹ = 1 and relation rewriting invariance",
        ok,
        format!("{words} words, max residuals {max_inv:.2e} / {max_rel:.2e}"),
    )
}

fn main() -> ExitCode {
    let configs = theorem_configs(3, &[2, 3, 4]);
    let results = [
        criterion_1(),
        criterion_2(&configs),
        criterion_3(&configs),
        criterion_4(),
        criterion_5(&configs),
        criterion_6(),
        criterion_7(&configs),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
