//! The acceptance suite: nine exact checks, each with a time budget. Shared
//! by the `reproduce-paper` command and the `acceptance` test target.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomp::{attach_curve_word, decompose_gamma, elementary_commutators};
use crate::engel::{
    certify_class3, class3_targets, configured_depth, verify_certificate, Class3Outcome,
};
use crate::error::Result;
use crate::links::{
    self, classify, family, valid_mu_table, BingStep, ConstructionExpr, FamilySpec, HClass, Seed,
    Sign,
};
use crate::magnus::{expand, reduced_expand};
use crate::milnor::{equal_mf, is_trivial_mf, milnor_class_probe};
use crate::slides::{engel_slide_property, wndl_check, DiagramState, Role, SlideMove, SlideSign};
use crate::words::{GenId, GeneratorContext, Letter, Word};
use crate::zlattice::{snf, IntMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    /// The check itself succeeded.
    pub check: bool,
    pub seconds: f64,
    pub limit_seconds: f64,
    /// `check` and finished within the limit.
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {} ({:.2}s, limit {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.limit_seconds,
            self.detail
        )
    }
}

pub const TITLES: [(&str, u64); 9] = [
    ("Milnor relator death and gamma nontriviality", 1),
    ("Milnor class probe n = 2, 3, 4", 10),
    ("class-3 certificates n = 2, 3, 4", 300),
    ("gamma decomposition n = 4 and n = 8", 60),
    ("Whitehead taxonomy", 10),
    ("family dichotomy sweep", 60),
    ("elementary Engel slide property", 60),
    ("WNDL instances", 10),
    ("randomized property suites", 120),
];

/// Runs criterion `id` (1..=9).
pub fn run_criterion(id: u8) -> CriterionResult {
    let (title, limit) = TITLES[id as usize - 1];
    let start = Instant::now();
    let outcome = match id {
        1 => relators(),
        2 => class_probe(),
        3 => class3(),
        4 => decomposition(),
        5 => taxonomy(),
        6 => families(),
        7 => slide_property(),
        8 => wndl(),
        9 => properties(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (check, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let within = elapsed <= Duration::from_secs(limit);
    CriterionResult {
        id,
        title,
        check,
        seconds: elapsed.as_secs_f64(),
        limit_seconds: limit as f64,
        passed: check && within,
        detail: if within {
            detail
        } else {
            format!("{detail}; over time limit")
        },
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=9).map(run_criterion).collect()
}

pub fn random_word(rng: &mut ChaCha8Rng, gens: GenId, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(1..=gens), rng.gen_bool(0.5))))
}

fn relators() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut dead = 0;
    for i in 1..=4 {
        let m = Word::gen(i);
        for _ in 0..50 {
            let y = random_word(&mut rng, 4, 8);
            dead +=
                usize::from(reduced_expand(&Word::commutator(&m, &m.conjugate(&y)), 4).is_one());
        }
    }
    let g = Word::commutator(
        &Word::commutator(&Word::gen(1), &Word::gen(2)),
        &Word::commutator(&Word::gen(3), &Word::gen(4)),
    );
    let coef = reduced_expand(&g, 4).coefficient(&[1, 2, 3, 4]);
    Ok((
        dead == 200 && coef.is_one(),
        format!("{dead}/200 relators trivial; X1X2X3X4 coefficient {coef}"),
    ))
}

fn class_probe() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let r = milnor_class_probe(n, 500, 2)?;
        ok &= r.passed();
        parts.push(format!(
            "n={n}: witness {}, {} longer cases trivial",
            r.witness_coefficient,
            r.cases.iter().filter(|c| c.trivial).count()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn class3() -> Result<(bool, String)> {
    let depth = configured_depth()?;
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let (outcome, stats) = certify_class3(n, depth)?;
        match outcome {
            Class3Outcome::Certified(certs) => {
                let mut good = certs.len() == class3_targets(n).len();
                for c in &certs {
                    good &= c.verified && verify_certificate(&c.target, &c.factors)?;
                }
                ok &= good;
                parts.push(format!(
                    "n={n}: {} certificates{}",
                    certs.len(),
                    if good { " re-verified" } else { " FAILED" }
                ));
            }
            Class3Outcome::InsufficientDepth(missing) => {
                ok = false;
                parts.push(format!(
                    "n={n}: {} targets unreachable at depth {}",
                    missing.len(),
                    stats.depth
                ));
            }
        }
    }
    Ok((ok, format!("depth {depth}; {}", parts.join("; "))))
}

fn decomposition() -> Result<(bool, String)> {
    let g = Word::commutator(
        &Word::commutator(&Word::gen(1), &Word::gen(2)),
        &Word::commutator(&Word::gen(3), &Word::gen(4)),
    );
    let c4 = decompose_gamma(&g, 4)?;
    let round =
        equal_mf(&g, &c4.product().mul(&c4.correction), 4) && is_trivial_mf(&c4.correction, 4);
    let ok4 = c4.verify()? && round && c4.correction_trivial_in_mf;
    let (g8, n8) = attach_curve_word(&[2, 1, 1, 1, 1])?;
    let c8 = decompose_gamma(&g8, n8)?;
    let ok8 = c8.verify()? && c8.correction_trivial_in_mf;
    Ok((
        ok4 && ok8,
        format!("n=4: {} factors, verified {ok4}; profile (2;1,1,1,1) n={n8}: {} factors, verified {ok8}", c4.factors.len(), c8.factors.len()),
    ))
}

fn taxonomy() -> Result<(bool, String)> {
    let cases = [
        ("wh(+)", HClass::TrivialPlus),
        ("par(wh(+),1)", HClass::TrivialNotPlus),
        ("par(par(wh(+),1),3)", HClass::Essential),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (text, want) in cases {
        let got = classify(&links::build(text)?)?.class;
        ok &= got == want;
        parts.push(format!("{text} -> {got}"));
    }
    Ok((ok, parts.join("; ")))
}

/// The ten family members of the sweep.
pub fn family_sweep() -> Vec<FamilySpec> {
    let st = |component, ramification| BingStep {
        component,
        ramification,
    };
    let spec = |seed, steps: Vec<BingStep>| FamilySpec {
        seed,
        steps,
        signs: vec![Sign::Plus, Sign::Minus],
        whitehead_ramification: 1,
    };
    vec![
        spec(Seed::Wh, vec![st(1, 1)]),
        spec(Seed::Wh, vec![st(1, 1), st(3, 1)]),
        spec(Seed::Wh, vec![st(1, 2), st(5, 2)]),
        spec(Seed::Wh, vec![st(2, 2), st(1, 2)]),
        spec(Seed::Wh, vec![st(1, 3), st(7, 2)]),
        spec(Seed::Wh, vec![st(1, 2), st(5, 3)]),
        spec(Seed::Hopf, vec![st(1, 1)]),
        spec(Seed::Hopf, vec![st(2, 1)]),
        spec(Seed::Hopf, vec![st(1, 2)]),
        spec(Seed::Hopf, vec![st(1, 1), st(3, 1)]),
    ]
}

fn families() -> Result<(bool, String)> {
    let mut ok = true;
    let mut counts = [0usize; 3];
    for spec in family_sweep() {
        let m = family(&spec)?;
        let class = classify(&m.underlying)?.class;
        let ramified = spec.steps.iter().any(|s| s.ramification > 1);
        let want = match spec.seed {
            Seed::Hopf => Some(HClass::Essential),
            Seed::Wh if spec.multiplicity() >= 2 => Some(HClass::Essential),
            Seed::Wh if !ramified => Some(HClass::TrivialPlus),
            Seed::Wh => None,
        };
        ok &= want.is_none_or(|w| w == class);
        let k = m.doubled.len();
        for i in 1..=k {
            for j in 1..=k {
                ok &= i == j || m.doubled.linking_number(i, j)? == 0;
            }
        }
        counts[class as usize] += 1;
    }
    let bing_wh = classify(&links::build("bing(bing(wh(+),1),3)")?)?.class;
    ok &= bing_wh == HClass::TrivialPlus;
    Ok((ok, format!("Bing(Wh) -> {bing_wh}; sweep: {} essential, {} trivial-not-plus, {} trivial-plus; all linking numbers 0", counts[0], counts[1], counts[2])))
}

fn slide_property() -> Result<(bool, String)> {
    let mut ok = true;
    for text in ["[x, y*z, y*z, w]", "[y*z, x, y*z, w]"] {
        ok &= engel_slide_property(&DiagramState::engel_from_text(text)?)?.holds;
    }
    let names = GeneratorContext::numbered("m", 4);
    let all = elementary_commutators(4)?;
    let mut held = 0;
    for ec in &all {
        held +=
            usize::from(engel_slide_property(&DiagramState::engel(ec, &names, "gamma")?)?.holds);
    }
    ok &= held == all.len();
    Ok((
        ok,
        format!(
            "both patterns; {held}/{} elementary states split",
            all.len()
        ),
    ))
}

fn wndl() -> Result<(bool, String)> {
    let names = GeneratorContext::numbered("m", 4);
    let (mut instances, mut repeated, mut exact) = (0, 0, true);
    for ec in elementary_commutators(4)? {
        let st = DiagramState::engel(&ec, &names, "gamma")?;
        let (b, c) = ec.product_generators();
        for g in ec.generators() {
            let d = st.delete_dotted(names.name(g))?;
            let gamma = &d.gamma().expect("engel state has gamma").word;
            let check = wndl_check(gamma, d.curves.len());
            let in_pair = g == b || g == c;
            repeated += usize::from(in_pair);
            instances += usize::from(in_pair && check.is_instance());
            exact &= check.is_instance() == in_pair;
        }
    }
    Ok((instances == repeated && exact, format!("{instances}/{repeated} repeated-slot deletions are instances; single-slot deletions never are: {exact}")))
}

fn properties() -> Result<(bool, String)> {
    let (m, mf) = magnus_laws(1000, 11);
    let (l, lf) = mu_bar_laws(200, 12)?;
    let (s, sf) = snf_minor_oracle(500, 13);
    let (r, rf) = slide_reversibility(200, 14)?;
    let fails = mf + lf + sf + rf;
    Ok((fails == 0, format!("magnus {m} cases/{mf} fail; mu-bar {l} links/{lf} fail; snf {s} matrices/{sf} fail; slides {r} states/{rf} fail")))
}

/// `e(uv) = e(u)e(v)` and `e(u⁻¹) = e(u)⁻¹` at degree 4 over 3 generators.
pub fn magnus_laws(cases: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0;
    for _ in 0..cases {
        let u = random_word(&mut rng, 3, 10);
        let v = random_word(&mut rng, 3, 10);
        let (eu, ev) = (expand(&u, 4), expand(&v, 4));
        let hom = eu
            .mul(&ev)
            .map(|p| p == expand(&u.mul(&v), 4))
            .unwrap_or(false);
        let inv = eu
            .inverse()
            .map(|i| i == expand(&u.inverse(), 4))
            .unwrap_or(false);
        fails += usize::from(!(hom && inv));
    }
    (cases, fails)
}

/// A random link expression with at most `max_components` components.
pub fn random_link_expr(rng: &mut ChaCha8Rng, max_components: usize) -> ConstructionExpr {
    let mut k;
    let mut e = match rng.gen_range(0..4) {
        0 => {
            k = 2;
            ConstructionExpr::Hopf
        }
        1 => {
            k = 2;
            ConstructionExpr::Whd(
                Box::new(ConstructionExpr::Hopf),
                2,
                if rng.gen_bool(0.5) {
                    Sign::Plus
                } else {
                    Sign::Minus
                },
            )
        }
        2 => {
            k = rng.gen_range(2..=3);
            ConstructionExpr::Unlink(k)
        }
        _ => {
            k = 3;
            ConstructionExpr::Bing(Box::new(ConstructionExpr::Hopf), 1)
        }
    };
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(1..=k);
        let sign = if rng.gen_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (next, grow) = match rng.gen_range(0..4) {
            0 => (ConstructionExpr::Bing(Box::new(e.clone()), i), 1),
            1 => (ConstructionExpr::Par(Box::new(e.clone()), i), 1),
            2 => (ConstructionExpr::Whd(Box::new(e.clone()), i, sign), 0),
            _ => (ConstructionExpr::Ram(Box::new(e.clone()), i, 2), 1),
        };
        if k + grow <= max_components {
            e = next;
            k += grow;
        }
    }
    e
}

/// Conjugation invariance of valid `μ̄` and sublink consistency.
pub fn mu_bar_laws(links: usize, seed: u64) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0;
    for _ in 0..links {
        let link = random_link_expr(&mut rng, 5).build()?;
        let k = link.len();
        let table = valid_mu_table(&link, 3);
        let mut conj = link.clone();
        let j = rng.gen_range(0..k);
        let y = random_word(&mut rng, k as GenId, 6);
        conj.components[j].longitude = conj.components[j].longitude.conjugate(&y);
        let mut ok = valid_mu_table(&conj, 3) == table;
        let del = rng.gen_range(1..=k);
        let sub = link.delete_component(del)?;
        let renum = |i: usize| if i > del { i - 1 } else { i };
        for (idx, v) in links::all_mu_values(&link, 3) {
            if !idx.contains(&del) {
                let mapped: Vec<usize> = idx.iter().map(|&i| renum(i)).collect();
                ok &= links::mu_bar(&sub, &mapped)?.value == v;
            }
        }
        fails += usize::from(!ok);
    }
    Ok((links, fails))
}

fn minor_gcd(a: &IntMatrix, k: usize) -> Result<BigInt> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|b| m & (1 << b) != 0).collect())
            .collect()
    }
    let mut g = BigInt::zero();
    for rows in subsets(a.rows(), k) {
        for cols in subsets(a.cols(), k) {
            let m = IntMatrix::from_rows(
                k,
                rows.iter()
                    .map(|&r| cols.iter().map(|&c| a[(r, c)].clone()).collect())
                    .collect(),
            )?;
            g = g.gcd(&m.det()?);
        }
    }
    Ok(g)
}

/// `d1⋯dk` equals the gcd of the `k × k` minors, and `U·A·V = D` with
/// unimodular `U`, `V`.
pub fn snf_minor_oracle(cases: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0;
    for _ in 0..cases {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-6..=6)))
                    .collect()
            })
            .collect();
        let a = IntMatrix::from_rows(n, rows).expect("shape");
        let ok = (|| -> Result<bool> {
            let s = snf(&a);
            let mut good = s.u.mul(&a)?.mul(&s.v)? == s.d
                && s.u.det()?.abs().is_one()
                && s.v.det()?.abs().is_one();
            let d: Vec<BigInt> = (0..m.min(n)).map(|i| s.d[(i, i)].clone()).collect();
            let mut prod = BigInt::one();
            for k in 1..=m.min(n) {
                prod *= &d[k - 1];
                good &= minor_gcd(&a, k)? == prod.abs();
                good &= !d[k - 1].is_negative();
                if k >= 2 && !d[k - 2].is_zero() {
                    good &= (&d[k - 1] % &d[k - 2]).is_zero();
                }
            }
            Ok(good)
        })()
        .unwrap_or(false);
        fails += usize::from(!ok);
    }
    (cases, fails)
}

/// A slide followed by its reverse restores the state; meridian count and
/// dotted set are preserved.
pub fn slide_reversibility(states: usize, seed: u64) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0;
    for _ in 0..states {
        let k = rng.gen_range(2..=5);
        let mut st = DiagramState::new();
        for c in 1..=k {
            st.add_curve(&format!("c{c}"), Word::identity(), 0, Role::EngelComponent)?;
        }
        for c in &mut st.curves {
            c.word = random_word(&mut rng, k as GenId, 8);
        }
        for c in 1..=k {
            if rng.gen_bool(0.5) {
                st.mark_dotted(&format!("c{c}"))?;
            }
        }
        let a = rng.gen_range(1..=k);
        let b = (a + rng.gen_range(1..k) - 1) % k + 1;
        let mv = SlideMove {
            slid: format!("c{a}"),
            over: format!("c{b}"),
            band: random_word(&mut rng, k as GenId, 4),
            sign: if rng.gen_bool(0.5) {
                SlideSign::Plus
            } else {
                SlideSign::Minus
            },
        };
        let after = st.slide(&mv)?;
        let back = after.slide(&mv.reverse(&st)?)?;
        let ok = back == st && after.curves.len() == st.curves.len() && after.dotted == st.dotted;
        fails += usize::from(!ok);
    }
    Ok((states, fails))
}
