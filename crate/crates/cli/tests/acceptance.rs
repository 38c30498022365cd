//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use cactus_barrier::run;
use cactus_core::barrier::{
    verify_instance, verify_join_decomposition, JoinComponent, Verification, VerifyOptions,
};
use cactus_core::exactalg::{rank, rank_mod_p, rat, random_in_span, DEFAULT_PRIME};
use cactus_core::rankmethods::{builtin_methods, estimate_k, lower_bound, MethodSpec, RankMethod};
use cactus_core::schemes::{random_family, random_scheme, scheme_span, span_of_limit_vs_limit_of_spans, FiniteScheme, PieceMix};
use cactus_core::seed::{rng, trial_seed};
use cactus_core::varieties::VarietyParam;
use cactus_core::Rational;
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

const VARIETIES: [&str; 5] = [
    "segre:2x2x2",
    "segre:3x3x3",
    "veronese:2,3",
    "veronese:3,3",
    "segre-veronese:(1,2)x(2,1)",
];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn param(s: &str) -> VarietyParam {
    s.parse().expect("variety spec")
}

fn methods(p: &VarietyParam) -> Vec<RankMethod> {
    builtin_methods(p).iter().map(|m| m.build(p).expect("builtin")).collect()
}

fn exact(factorization: bool) -> VerifyOptions {
    VerifyOptions {
        verification: Verification::Exact,
        bound: 10,
        factorization,
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["cactus-barrier"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf8"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

/// Instances shared by the barrier and factorization criteria.
struct Instance {
    variety: String,
    method: String,
    k: usize,
    degree: usize,
    rank: usize,
    factor_dim: usize,
    pass: bool,
}

fn barrier_instances() -> Result<Vec<Instance>, String> {
    let mut jobs = Vec::new();
    for (vi, v) in VARIETIES.iter().enumerate() {
        let p = param(v);
        for (mi, m) in methods(&p).into_iter().enumerate() {
            for t in 0..100u64 {
                jobs.push((vi, mi, p.clone(), m.clone(), t));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(vi, mi, p, m, t)| {
            let s = trial_seed(trial_seed(1000 + vi as u64, mi as u64), t);
            let mut g = rng(s);
            let r = g.gen_range(1..=8);
            let scheme = random_scheme(&p, r, PieceMix::MIXED, 5, &mut g).map_err(|e| e.to_string())?;
            let rep = verify_instance(&p, &scheme, &m, &exact(true), trial_seed(s, 1)).map_err(|e| e.to_string())?;
            Ok(Instance {
                variety: p.to_string(),
                method: m.name.clone(),
                k: m.k,
                degree: rep.degree,
                rank: rep.rank,
                factor_dim: rep.factor_dim.expect("requested"),
                pass: rep.pass && rep.field == "Q",
            })
        })
        .collect()
}

fn criterion_1(inst: &[Instance]) -> Outcome {
    let fails: Vec<_> = inst.iter().filter(|i| !i.pass || i.rank > i.k * i.degree).collect();
    let combos: std::collections::BTreeSet<_> = inst.iter().map(|i| (&i.variety, &i.method)).collect();
    let degrees: std::collections::BTreeSet<_> = inst.iter().map(|i| i.degree).collect();
    outcome(
        fails.is_empty() && degrees.len() == 8,
        format!(
            "{} instances over {} (variety, method) pairs, degrees {:?}, {} failures",
            inst.len(),
            combos.len(),
            degrees,
            fails.len()
        ),
    )
}

fn criterion_2(inst: &[Instance]) -> Outcome {
    let fails = inst.iter().filter(|i| i.factor_dim > i.k * i.degree).count();
    let tightest = inst.iter().map(|i| i.k * i.degree - i.factor_dim.min(i.k * i.degree)).min().unwrap_or(0);
    outcome(
        fails == 0,
        format!("{} instances, {fails} with dim B' > k r, tightest slack {tightest}", inst.len()),
    )
}

fn ceiling_json(v: &str) -> Value {
    let (code, out) = cli(&["ceiling", "--variety", v, "--format", "json"]);
    assert_eq!(code, 0, "ceiling {v}");
    serde_json::from_str(out.trim()).expect("json")
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let as_usize = |v: &Value| v["value"].as_u64().map(|x| x as usize);
    for m in 2..=5usize {
        let r = ceiling_json(&format!("segre:{m}x{m}x{m}"));
        let fill = (m * m * m).div_ceil(3 * m - 2);
        if as_usize(&r["cactus_ceiling"]) != Some(6 * m - 4)
            || as_usize(&r["grassmann_ceiling"]) != Some(3 * m - 1)
            || as_usize(&r["secant_fill_in"]) != Some(fill)
        {
            bad.push(format!("m={m}: {r}"));
        }
    }
    for (a, b, c) in [(2usize, 3usize, 4usize), (2, 2, 3), (3, 4, 5), (2, 5, 7), (4, 4, 6)] {
        let r = ceiling_json(&format!("segre:{a}x{b}x{c}"));
        let fill = (a * b * c).div_ceil(a + b + c - 2);
        if as_usize(&r["cactus_ceiling"]) != Some(2 * (a + b + c - 2))
            || as_usize(&r["secant_fill_in"]) != Some(fill)
            || !r["grassmann_ceiling"].is_null()
        {
            bad.push(format!("{a}x{b}x{c}: {r}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "g = 6m-4 and g2 = 3m-1 for m = 2..5, g = 2(a+b+c-2) on five asymmetric triples, fill-in exact".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 3..=5usize {
        let p = VarietyParam::veronese(n, 3).expect("veronese");
        let mut g = rng(trial_seed(4000, n as u64));
        let f: Vec<Rational> = (0..p.dim_w()).map(|_| rat(g.gen_range(-20..=20))).collect();
        let best = methods(&p).iter().map(|m| lower_bound(m, &f).expect("bound")).max().unwrap_or(0);
        let (_, out) = cli(&["ceiling", "--variety", &format!("veronese:{n},3"), "--format", "json"]);
        let report: Value = serde_json::from_str(out.trim()).expect("json");
        let fill = report["secant_fill_in"]["value"].as_u64().expect("fill-in") as usize;
        let oracle_fill = binom(n + 3, 3).div_ceil(n + 1);
        ok &= best == n + 1 && fill == oracle_fill && best < fill;
        parts.push(format!("n={n}: catalecticant {best} < fill-in {fill}"));
    }
    outcome(ok, parts.join(", "))
}

fn criterion_5() -> Outcome {
    let expect = [
        ("collinear.json", 2, 3),
        ("tangent.json", 2, 2),
        ("constant.json", 2, 2),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, a, b) in expect {
        let (code, out) = cli(&["limit", "--family", &fixture(name), "--format", "json"]);
        let v: Value = serde_json::from_str(out.trim()).unwrap_or(Value::Null);
        let got = (v["dim_span_limit"].as_u64(), v["dim_limit_spans"].as_u64());
        ok &= code == 0 && got == (Some(a), Some(b)) && v["inclusion_holds"] == Value::Bool(true);
        parts.push(format!("{name} {}/{}", got.0.unwrap_or(0), got.1.unwrap_or(0)));
    }
    let random: Vec<Result<bool, String>> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let v = VARIETIES[t as usize % VARIETIES.len()];
            let p = param(v);
            let mut g = rng(trial_seed(5000, t));
            let deg = g.gen_range(1..=6);
            let (fam, limit) = random_family(&p, deg, 3, &mut g).map_err(|e| e.to_string())?;
            let rep = span_of_limit_vs_limit_of_spans(&p, &fam, &limit).map_err(|e| e.to_string())?;
            Ok(rep.inclusion_holds)
        })
        .collect();
    let errors = random.iter().filter(|r| r.is_err()).count();
    let failures = random.iter().filter(|r| matches!(r, Ok(false))).count();
    ok &= errors == 0 && failures == 0;
    parts.push(format!("100 random families: {failures} inclusion failures, {errors} errors"));
    outcome(ok, parts.join(", "))
}

fn criterion_6() -> Outcome {
    let results: Vec<Result<(bool, usize, usize), String>> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let v = if t % 2 == 0 { "segre:2x2x2" } else { "segre:3x3x3" };
            let p = param(v);
            let mut g = rng(trial_seed(6000, t));
            let all = methods(&p);
            let mut m = all[g.gen_range(0..all.len())].clone();
            let left = JoinComponent::new(p.clone());
            let right = if t % 4 == 3 {
                JoinComponent::random_copy(p.clone(), 2, &mut g)
            } else {
                left.clone()
            };
            if right != left {
                let kz = right.estimate_k(&m.map, 200, 5, trial_seed(t, 7)).map_err(|e| e.to_string())?;
                m.k = m.k.max(kz);
            }
            let r = g.gen_range(0..=8usize);
            // q = 0 and q = r edges every tenth instance each
            let q = match t % 10 {
                0 => 0,
                5 => r,
                _ => g.gen_range(0..=r),
            };
            let draw = |deg: usize, g: &mut rand_chacha::ChaCha8Rng| {
                if deg == 0 {
                    Ok(FiniteScheme::empty())
                } else {
                    random_scheme(&p, deg, PieceMix::MIXED, 5, g)
                }
            };
            let (r1, r2) = loop {
                let r1 = draw(q, &mut g).map_err(|e| e.to_string())?;
                let r2 = draw(r - q, &mut g).map_err(|e| e.to_string())?;
                if right != left || r1.union(&r2).is_ok() {
                    break (r1, r2);
                }
            };
            let rep = verify_join_decomposition(&left, &right, &r1, &r2, &m, &exact(false), trial_seed(t, 1))
                .map_err(|e| e.to_string())?;
            let ok = rep.report.pass && rep.report.bound == rep.summed_bounds() && rep.report.field == "Q";
            Ok((ok, rep.left_degree, rep.right_degree))
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let ok_results: Vec<_> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let failures = ok_results.iter().filter(|r| !r.0).count();
    let left_empty = ok_results.iter().filter(|r| r.1 == 0).count();
    let right_empty = ok_results.iter().filter(|r| r.2 == 0).count();
    outcome(
        errors == 0 && failures == 0 && left_empty > 0 && right_empty > 0,
        format!(
            "100 instances, {failures} failures, {errors} errors, {left_empty} with empty R1, {right_empty} with empty R2"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for v in VARIETIES {
        let p = param(v);
        for m in methods(&p) {
            let seen = estimate_k(&m.map, &p, 200, 10, 7000).expect("estimate");
            checked += 1;
            if seen != m.k {
                problems.push(format!("{v} {}: max rank {seen}, k {}", m.name, m.k));
            }
            for t in 0..100u64 {
                let mut g = rng(trial_seed(7100, t));
                let f: Vec<Rational> = (0..p.dim_w()).map(|_| rat(g.gen_range(-9..=9))).collect();
                let h: Vec<Rational> = (0..p.dim_w()).map(|_| rat(g.gen_range(-9..=9))).collect();
                let (a, b) = (rat(g.gen_range(1..=7)), rat(-g.gen_range(1..=7)));
                let combo: Vec<Rational> = f.iter().zip(&h).map(|(x, y)| &a * x + &b * y).collect();
                let lhs = m.map.evaluate(&combo).expect("eval");
                let rhs = m.map.evaluate(&f).expect("eval").scale(&a).add(&m.map.evaluate(&h).expect("eval").scale(&b)).expect("shape");
                let scaled: Vec<Rational> = f.iter().map(|x| x * &a).collect();
                if lhs != rhs || rank(&m.map.evaluate(&scaled).expect("eval")) != rank(&m.map.evaluate(&f).expect("eval")) {
                    problems.push(format!("{v} {}: linearity or scaling at fixture {t}", m.name));
                    break;
                }
            }
        }
    }
    for shape in [[3usize, 3, 3], [4, 4, 4], [2, 3, 4]] {
        let p = VarietyParam::segre(&shape).expect("segre");
        let flat = MethodSpec::Flattening { row_modes: vec![0], col_modes: vec![1, 2] }.build(&p).expect("flattening");
        let min = *shape.iter().min().expect("nonempty");
        for r in 1..=min {
            let mut f = vec![rat(0); p.dim_w()];
            for i in 0..r {
                f[(i * shape[1] + i) * shape[2] + i] = rat(1);
            }
            let got = rank(&flat.map.evaluate(&f).expect("eval"));
            if got != r {
                problems.push(format!("diagonal {shape:?} r={r}: flattening rank {got}"));
            }
        }
    }
    let p = param("segre:3x3x3");
    let kz = MethodSpec::Koszul { p: 1 }.build(&p).expect("koszul");
    for t in 0..50u64 {
        let x = p.random_point(10, &mut rng(trial_seed(7200, t)));
        let got = rank(&kz.map.evaluate(&x).expect("eval"));
        if got != 2 {
            problems.push(format!("rank-one Koszul rank {got}"));
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{checked} methods attain k exactly on 200 points, linear and scale invariant on 100 fixtures, diagonal flattenings and rank-one Koszul correct")
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_8() -> Outcome {
    let rows: Vec<Result<(bool, bool, bool), String>> = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let v = VARIETIES[t as usize % VARIETIES.len()];
            let p = param(v);
            let all = methods(&p);
            let mut g = rng(trial_seed(8000, t));
            let m = &all[g.gen_range(0..all.len())];
            let deg = g.gen_range(1..=8);
            let scheme = random_scheme(&p, deg, PieceMix::MIXED, 5, &mut g).map_err(|e| e.to_string())?;
            let span = scheme_span(&p, &scheme).map_err(|e| e.to_string())?;
            let f = random_in_span(&span, 1000, &mut g).map_err(|e| e.to_string())?;
            let mat = m.map.evaluate(&f).map_err(|e| e.to_string())?;
            let rq = rank(&mat);
            let rp = rank_mod_p(&mat, DEFAULT_PRIME).map_err(|e| e.to_string())?;
            let disagree = rp != rq;
            let toward_q = rp <= rq;
            let holds = rq <= m.k * deg;
            Ok((disagree, toward_q, holds))
        })
        .collect();
    let errors = rows.iter().filter(|r| r.is_err()).count();
    let ok_rows: Vec<_> = rows.iter().filter_map(|r| r.as_ref().ok()).collect();
    let disagree = ok_rows.iter().filter(|r| r.0).count();
    let wrong_direction = ok_rows.iter().filter(|r| !r.1).count();
    let violated = ok_rows.iter().filter(|r| !r.2).count();
    outcome(
        errors == 0 && disagree * 100 < ok_rows.len() && wrong_direction == 0 && violated == 0,
        format!(
            "{} instances at p = {DEFAULT_PRIME}: {disagree} disagreements, {wrong_direction} above the rational rank, {violated} violations, {errors} errors",
            ok_rows.len()
        ),
    )
}

fn main() {
    let start = Instant::now();
    let instances = barrier_instances();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    match &instances {
        Ok(inst) => {
            results.push((1, "barrier suite", criterion_1(inst)));
            results.push((2, "factorization suite", criterion_2(inst)));
        }
        Err(e) => {
            results.push((1, "barrier suite", outcome(false, format!("error: {e}"))));
            results.push((2, "factorization suite", outcome(false, format!("error: {e}"))));
        }
    }
    results.push((3, "ceiling constants", criterion_3()));
    results.push((4, "barrier gap", criterion_4()));
    results.push((5, "limit principle", criterion_5()));
    results.push((6, "join suite", criterion_6()));
    results.push((7, "method sanity", criterion_7()));
    results.push((8, "exactness cross-check", criterion_8()));
    let mut all_ok = true;
    for (n, name, o) in &results {
        all_ok &= o.ok;
        println!("criterion {n} ({name}): {}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if !all_ok {
        std::process::exit(1);
    }
}
