//! Built-in categories: the trivial category, Ising, and braided
//! Tambara–Yamagami categories over `(Z₂)^k`.
//!
//! Every constructor certifies its output (structure, pentagon, hexagon and
//! ribbon identity at [`DEFAULT_TOL`]) before returning it.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::category::{
    validate_structure, verify_hexagon, verify_pentagon, FSymbolTable, FusionRules, ObjectId,
    RSymbolTable, RibbonCategory, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{phase, ONE};

pub const TRIVIAL_NAMES: [&str; 1] = ["1"];
pub const ISING_NAMES: [&str; 3] = ["1", "sigma", "psi"];

/// Largest `k` accepted for `TY((Z₂)^k)`.
pub const MAX_TY_RANK: usize = 3;

fn certify(cat: RibbonCategory) -> Result<RibbonCategory> {
    let fail = |detail: String| Error::Certification {
        name: cat.name().to_string(),
        detail,
    };
    let structure = validate_structure(&cat);
    if let Some(v) = structure.violations.first() {
        return Err(fail(format!("{}: {}", v.invariant, v.detail)));
    }
    let pentagon = verify_pentagon(&cat, DEFAULT_TOL)?;
    if let Some(f) = pentagon.failures.first() {
        return Err(fail(format!(
            "pentagon {} residual {:e}",
            f.label, f.residual
        )));
    }
    let hexagon = verify_hexagon(&cat, DEFAULT_TOL)?;
    if let Some(f) = hexagon.failures.first() {
        return Err(fail(format!(
            "{} {} residual {:e}",
            f.equation, f.label, f.residual
        )));
    }
    Ok(cat)
}

fn all_ones_f(rules: &FusionRules) -> FSymbolTable {
    rules.f_tuples().into_iter().map(|k| (k, ONE)).collect()
}

pub fn trivial() -> RibbonCategory {
    let rules =
        FusionRules::from_triples(1, 0, vec![0], [(0, 0, 0)]).expect("trivial fusion rules");
    let cat = RibbonCategory::new(
        "trivial",
        vec![TRIVIAL_NAMES[0].to_string()],
        rules,
        FSymbolTable::new(),
        RSymbolTable::new(),
        vec![ONE],
    )
    .expect("trivial category");
    certify(cat).expect("trivial category certifies")
}

/// Ising: objects `1, sigma, psi` with `σ⊗σ = 1⊕ψ`, `ψ⊗ψ = 1`, `σ⊗ψ = ψ⊗σ = σ`
/// and twists `1, e^{2πi/16}, -1`.
pub fn ising() -> RibbonCategory {
    const ONE_: ObjectId = 0;
    const S: ObjectId = 1;
    const P: ObjectId = 2;
    let triples = [
        (ONE_, ONE_, ONE_),
        (ONE_, S, S),
        (ONE_, P, P),
        (S, ONE_, S),
        (P, ONE_, P),
        (S, S, ONE_),
        (S, S, P),
        (S, P, S),
        (P, S, S),
        (P, P, ONE_),
    ];
    let rules =
        FusionRules::from_triples(3, ONE_, vec![ONE_, S, P], triples).expect("ising fusion rules");

    let mut f = all_ones_f(&rules);
    let h = FRAC_1_SQRT_2;
    for (e, g, v) in [(ONE_, ONE_, h), (ONE_, P, h), (P, ONE_, h), (P, P, -h)] {
        f.insert([S, S, S, S, e, g], Complex64::new(v, 0.0));
    }
    f.insert([P, S, P, S, S, S], -ONE);
    f.insert([S, P, S, P, S, S], -ONE);

    let mut r = RSymbolTable::new();
    r.insert([S, S, ONE_], phase(-PI / 8.0));
    r.insert([S, S, P], phase(3.0 * PI / 8.0));
    r.insert([S, P, S], Complex64::new(0.0, -1.0));
    r.insert([P, S, S], Complex64::new(0.0, -1.0));
    r.insert([P, P, ONE_], -ONE);

    let twist = vec![ONE, phase(2.0 * PI / 16.0), -ONE];
    let names = ISING_NAMES.iter().map(|s| s.to_string()).collect();
    let cat = RibbonCategory::new("ising", names, rules, f, r, twist).expect("ising category");
    certify(cat).expect("ising category certifies")
}

/// Parameters of `TY((Z₂)^k)`: a symmetric non-degenerate bicharacter with
/// values ±1 and the sign of the `F^{mmm}` normalisation `±1/√|G|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TYParams {
    pub k: usize,
    /// Row-major `|G| × |G|` table of `χ(g,h)`; group elements are bit-vectors
    /// encoded as integers.
    pub bicharacter: Vec<i8>,
    pub sign: i8,
}

impl TYParams {
    /// Dot-product pairing `χ(g,h) = (-1)^{g·h}` and sign `+1`.
    pub fn standard(k: usize) -> Self {
        let identity: Vec<u32> = (0..k).map(|i| 1 << i).collect();
        Self::from_form(k, &identity, 1)
    }

    /// Bicharacter `χ(g,h) = (-1)^{gᵀ B h}` from a binary matrix `B` whose row
    /// `i` is the bitmask `rows[i]`.
    pub fn from_form(k: usize, rows: &[u32], sign: i8) -> Self {
        let order = 1usize << k;
        let mut bicharacter = vec![0i8; order * order];
        for g in 0..order {
            for h in 0..order {
                let mut parity = 0u32;
                for (i, row) in rows.iter().enumerate().take(k) {
                    if g >> i & 1 == 1 {
                        parity ^= (row & h as u32).count_ones() & 1;
                    }
                }
                bicharacter[g * order + h] = if parity == 0 { 1 } else { -1 };
            }
        }
        Self {
            k,
            bicharacter,
            sign,
        }
    }

    pub fn order(&self) -> usize {
        1 << self.k
    }

    pub fn chi(&self, g: usize, h: usize) -> i8 {
        self.bicharacter[g * self.order() + h]
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.k == 0 || self.k > MAX_TY_RANK {
            return bad(format!("k must be in 1..={MAX_TY_RANK}, got {}", self.k));
        }
        if self.sign != 1 && self.sign != -1 {
            return bad(format!("sign must be ±1, got {}", self.sign));
        }
        let n = self.order();
        if self.bicharacter.len() != n * n {
            return bad(format!(
                "bicharacter table has {} entries, expected {}",
                self.bicharacter.len(),
                n * n
            ));
        }
        if let Some(v) = self.bicharacter.iter().find(|&&v| v != 1 && v != -1) {
            return bad(format!("bicharacter value {v} is not ±1"));
        }
        for g in 0..n {
            for h in 0..n {
                if self.chi(g, h) != self.chi(h, g) {
                    return bad(format!("bicharacter not symmetric at ({g},{h})"));
                }
                for l in 0..n {
                    if self.chi(g ^ h, l) != self.chi(g, l) * self.chi(h, l) {
                        return bad(format!("bicharacter not multiplicative at ({g},{h},{l})"));
                    }
                }
            }
            if g != 0 && (0..n).all(|h| self.chi(g, h) == 1) {
                return bad(format!(
                    "bicharacter degenerate: element {g} pairs trivially"
                ));
            }
        }
        Ok(())
    }
}

/// Name of group element `g` of `(Z₂)^k`: its `k`-bit string, most significant bit first.
pub fn group_element_name(g: usize, k: usize) -> String {
    (0..k)
        .rev()
        .map(|i| if g >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Braided `TY((Z₂)^k)`. Group elements take ids `0..2^k` (bit-vector
/// encoding, unit `0`) and `m` takes id `2^k`.
///
/// F is the Tambara–Yamagami solution for the given bicharacter and sign. The
/// braiding is found by search: candidates of the form `R(g,h) = χ(g,h)`,
/// `R(g,m) = R(m,g) = q(g)`, `R(m,m,a) = δ q(a)^{∓1}` are enumerated over
/// every quadratic refinement `q` of `χ` and both square roots `δ`, and the
/// first candidate that satisfies both hexagons and the ribbon identity wins.
pub fn tambara_yamagami(p: &TYParams) -> Result<RibbonCategory> {
    p.validate()?;
    let order = p.order();
    let m = order;
    let num = order + 1;
    let mut triples = Vec::new();
    for g in 0..order {
        for h in 0..order {
            triples.push((g, h, g ^ h));
            triples.push((m, m, g ^ h));
        }
        triples.push((g, m, m));
        triples.push((m, g, m));
    }
    triples.sort();
    triples.dedup();
    let mut dual: Vec<ObjectId> = (0..order).collect();
    dual.push(m);
    let rules = FusionRules::from_triples(num, 0, dual, triples)?;

    let chi = |g: usize, h: usize| Complex64::new(p.chi(g, h) as f64, 0.0);
    let tau = p.sign as f64 / (order as f64).sqrt();
    let mut f = FSymbolTable::new();
    for key in rules.f_tuples() {
        let [a, b, c, d, e, g] = key;
        let ms = [a, b, c].iter().filter(|&&x| x == m).count();
        let value = match ms {
            1 if b == m => chi(a, c),
            2 if a == m && c == m => chi(b, d),
            3 => Complex64::new(tau * p.chi(e, g) as f64, 0.0),
            _ => ONE,
        };
        f.insert(key, value);
    }

    let mut names: Vec<String> = (0..order).map(|g| group_element_name(g, p.k)).collect();
    names.push("m".to_string());
    let name = format!("ty{}", p.k);

    let pentagon_probe = RibbonCategory::new(
        name.clone(),
        names.clone(),
        rules.clone(),
        f.clone(),
        RSymbolTable::new(),
        vec![ONE; num],
    )?;
    let pent = verify_pentagon(&pentagon_probe, DEFAULT_TOL)?;
    if let Some(fail) = pent.failures.first() {
        return Err(Error::Certification {
            name,
            detail: format!("pentagon {} residual {:e}", fail.label, fail.residual),
        });
    }

    let mut best = f64::INFINITY;
    for candidate in braiding_candidates(p) {
        let (r, twist) = candidate.tables(p);
        let cat = RibbonCategory::new(
            name.clone(),
            names.clone(),
            rules.clone(),
            f.clone(),
            r,
            twist,
        )?;
        let hex = verify_hexagon(&cat, DEFAULT_TOL)?;
        if hex.passed() {
            return certify(cat);
        }
        best = best.min(hex.max_residual);
    }
    Err(Error::Certification {
        name,
        detail: format!(
            "no braiding candidate satisfies the hexagons (smallest max residual {best:e})"
        ),
    })
}

#[derive(Clone, Debug)]
struct BraidingCandidate {
    q: Vec<Complex64>,
    delta: Complex64,
    invert_q_in_mm: bool,
}

impl BraidingCandidate {
    fn tables(&self, p: &TYParams) -> (RSymbolTable, Vec<Complex64>) {
        let order = p.order();
        let m = order;
        let mut r = RSymbolTable::new();
        for g in 0..order {
            for h in 0..order {
                r.insert([g, h, g ^ h], Complex64::new(p.chi(g, h) as f64, 0.0));
            }
            r.insert([g, m, m], self.q[g]);
            r.insert([m, g, m], self.q[g]);
            let qa = if self.invert_q_in_mm {
                self.q[g].inv()
            } else {
                self.q[g]
            };
            r.insert([m, m, g], self.delta * qa);
        }
        // θ_a = Σ_c (d_c / d_a) R(a,a,c)
        let mut twist: Vec<Complex64> = (0..order)
            .map(|g| Complex64::new(p.chi(g, g) as f64, 0.0))
            .collect();
        let theta_m = (0..order)
            .map(|g| r.get(&[m, m, g]).unwrap())
            .sum::<Complex64>()
            / (order as f64).sqrt();
        twist.push(theta_m);
        (r, twist)
    }
}

/// Quadratic refinements `q` of `χ` (with `q(g+h) = q(g) q(h) χ(g,h)`), each
/// fixed by a choice of square root of `χ(e_i,e_i)` on the basis vectors.
fn quadratic_refinements(p: &TYParams) -> Vec<Vec<Complex64>> {
    let order = p.order();
    let mut out = Vec::new();
    for choice in 0..(1usize << p.k) {
        let mut q = vec![ONE; order];
        for g in 1..order {
            let i = g.trailing_zeros() as usize;
            let e = 1usize << i;
            let root = if p.chi(e, e) == 1 {
                ONE
            } else {
                Complex64::new(0.0, 1.0)
            };
            let root = if choice >> i & 1 == 1 { -root } else { root };
            let rest = g ^ e;
            q[g] = root * q[rest] * p.chi(e, rest) as f64;
        }
        out.push(q);
    }
    out
}

fn braiding_candidates(p: &TYParams) -> Vec<BraidingCandidate> {
    let tau = p.sign as f64 / (p.order() as f64).sqrt();
    let mut out = Vec::new();
    for q in quadratic_refinements(p) {
        for use_inverse_sum in [false, true] {
            let gauss: Complex64 = q
                .iter()
                .map(|v| if use_inverse_sum { v.inv() } else { *v })
                .sum();
            let root = (gauss * tau).sqrt();
            for delta in [root, -root] {
                for invert_q_in_mm in [true, false] {
                    out.push(BraidingCandidate {
                        q: q.clone(),
                        delta,
                        invert_q_in_mm,
                    });
                }
            }
        }
    }
    out
}

/// Resolves a built-in by name: `trivial`, `ising`, or `ty` with the given parameters.
pub fn by_name(name: &str, ty: Option<&TYParams>) -> Result<RibbonCategory> {
    match name {
        "trivial" => Ok(trivial()),
        "ising" => Ok(ising()),
        "ty" => {
            let default = TYParams::standard(1);
            tambara_yamagami(ty.unwrap_or(&default))
        }
        other => Err(Error::InvalidParameters(format!(
            "unknown built-in category `{other}` (expected trivial, ising or ty)"
        ))),
    }
}
