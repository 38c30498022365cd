use std::path::PathBuf;
use std::process::Command;

use cactus_barrier::run;
use cactus_barrier::tensor::Tensor;
use cactus_core::exactalg::frac;
use proptest::prelude::*;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["cactus-barrier"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn bound_on_diagonal_tensor() {
    let t = fixture("diagonal3.json");
    let (code, out, _) = cli(&["bound", "--tensor", &t, "--method", "flattening:split=1|23"]);
    assert_eq!(code, 0);
    assert!(out.contains("border rank >= ceil(3/1) = 3"), "{out}");
    assert!(out.contains("cactus ceiling g = 14; this method cannot certify border rank > g"));

    let (code, out, _) = cli(&["bound", "--tensor", &t, "--method", "koszul:p=1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((v["rank"].as_u64(), v["k"].as_u64(), v["bound"].as_u64()), (Some(6), Some(2), Some(3)));

    let (code, out, _) = cli(&["bound", "--tensor", &t, "--method", "flattening:split=2|13", "--field", "p:7"]);
    assert_eq!(code, 0);
    assert!(out.contains("rank: 3 over F_7"), "{out}");
}

#[test]
fn bound_rejects_mismatches() {
    let t = fixture("diagonal3.json");
    for args in [
        vec!["bound", "--tensor", &t, "--method", "catalecticant:i=1"],
        vec!["bound", "--tensor", &t, "--method", "flattening:split=1|2"],
        vec!["bound", "--tensor", &t, "--method", "flattening:split=1|23", "--variety", "segre:2x2x2"],
        vec!["bound", "--tensor", &t, "--method", "flattening:split=1|23", "--field", "p:4"],
        vec!["bound", "--tensor", "/nonexistent.json", "--method", "koszul:p=1"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = cli(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn symmetric_bound() {
    let dir = tempfile::tempdir().unwrap();
    // x^3 + y^3 + z^3 has first catalecticant rank 3
    let t = write_temp(
        &dir,
        "cubic.json",
        r#"{"format":"symmetric","vars":3,"degree":3,"terms":[
            {"monomial":[3,0,0],"coeff":"1"},{"monomial":[0,3,0],"coeff":"1"},{"monomial":[0,0,3],"coeff":"1"}]}"#,
    );
    let (code, out, _) = cli(&["bound", "--tensor", &t, "--method", "catalecticant:i=1"]);
    assert_eq!(code, 0);
    assert!(out.contains("variety: veronese:2,3") && out.contains("= 3"), "{out}");
    assert!(!out.contains("cactus ceiling g ="));
}

#[test]
fn custom_method_has_empirical_k() {
    let dir = tempfile::tempdir().unwrap();
    // M(F) is F itself as a 2x2 matrix
    let mut entries = Vec::new();
    for w in 0..4 {
        entries.push(format!(r#"{{"idx":[{w},{},{}],"value":"1"}}"#, w / 2, w % 2));
    }
    let map = write_temp(
        &dir,
        "map.json",
        &format!(r#"{{"format":"sparse","shape":[4,2,2],"entries":[{}]}}"#, entries.join(",")),
    );
    let method = format!("custom:file={map}");
    let (code, out, _) = cli(&["estimate-k", "--variety", "segre:2x2", "--method", &method]);
    assert_eq!(code, 0);
    assert!(out.contains("k=1, empirical (lower estimate)"), "{out}");
    let t = write_temp(&dir, "id.json", r#"{"format":"dense","shape":[2,2],"entries":[["1","0"],["0","1"]]}"#);
    let (code, out, _) = cli(&["bound", "--tensor", &t, "--method", &method, "--format", "json"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""bound":2"#) && out.contains(r#""k_source":"empirical""#), "{out}");
}

#[test]
fn verify_campaigns() {
    let base = ["verify", "--variety", "segre:2x2x2", "--method", "flattening:split=1|23"];
    let (code, out, _) = cli(&[&base[..], &["--scheme", "random:deg=3", "--trials", "50"]].concat());
    assert_eq!(code, 0);
    assert!(out.contains("50/50 passed, 0 failed"), "{out}");
    assert_eq!(out.lines().count(), 51);

    let (code, out, _) = cli(&[&base[..], &["--scheme", "random:deg=3", "--trials", "0"]].concat());
    assert_eq!(code, 0);
    assert!(out.contains("0/0 passed"));

    let (code, out, _) = cli(&[&base[..], &["--scheme", "random:deg=12,mix=reduced", "--trials", "3", "--field", "q"]].concat());
    assert_eq!(code, 0);
    assert!(out.contains("3/3 passed"), "{out}");

    let inline = r#"{"pieces":[{"type":"curvilinear","base":["0","0","0"],"coeffs":[["1","2","-1"]],"length":3}]}"#;
    let (code, out, _) = cli(&[&base[..], &["--scheme", inline, "--trials", "4", "--factor", "--field", "q"]].concat());
    assert_eq!(code, 0);
    assert!(out.contains("factor_dim=") && out.contains("4/4 passed"), "{out}");

    let (code, _, _) = cli(&[&base[..], &["--scheme", "random:deg=x"]].concat());
    assert_eq!(code, 2);
    let (code, _, _) = cli(&[&base[..], &["--scheme", r#"{"pieces":[{"type":"reduced","point":["1"]}]}"#]].concat());
    assert_eq!(code, 2);
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify", "--variety", "veronese:2,3", "--method", "catalecticant:i=1", "--scheme", "random:deg=5",
        "--trials", "20", "--seed", "42", "--format", "json",
    ];
    let (_, a, _) = cli(&args);
    let (_, b, _) = cli(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a, b);
    let (_, c, _) = cli(&[&args[..8], &["--trials", "20", "--seed", "43", "--format", "json"]].concat());
    assert_ne!(a, c);
    let last: serde_json::Value = serde_json::from_str(a.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["passed"].as_u64(), Some(20));
}

#[test]
fn binary_reads_seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_cactus-barrier");
    let args = [
        "verify", "--variety", "segre:2x2x2", "--method", "koszul:p=1", "--scheme", "random:deg=2", "--trials", "5",
        "--format", "json",
    ];
    let with_env = Command::new(bin).args(args).env("CACTUS_BARRIER_SEED", "9").output().unwrap();
    let with_flag = Command::new(bin).args(args).args(["--seed", "9"]).env_remove("CACTUS_BARRIER_SEED").output().unwrap();
    assert_eq!(with_env.status.code(), Some(0));
    assert_eq!(with_env.stdout, with_flag.stdout);
    let bad = Command::new(bin).args(["ceiling"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn ceiling_and_limit_commands() {
    let (code, out, _) = cli(&["ceiling", "--variety", "segre:3x3x3"]);
    assert_eq!(code, 0);
    assert!(out.contains("cactus ceiling g = 14") && out.contains("g2 = 8") && out.contains("fill-in >= 4"));
    let (_, out, _) = cli(&["limit", "--family", &fixture("collinear.json")]);
    assert_eq!(out.trim(), "dim span(limit)=2 ≤ dim lim(spans)=3: inclusion holds (strict)");
    let (_, out, _) = cli(&["limit", "--family", &fixture("tangent.json")]);
    assert!(out.contains("(equal)"));
    let dir = tempfile::tempdir().unwrap();
    let broken = write_temp(&dir, "f.json", r#"{"variety":"veronese:1,1","basis":[[["1"],["0","1"]],[["0","1"],["0","0","1"]]],"limit":{"pieces":[]}}"#);
    let (code, _, err) = cli(&["limit", "--family", &broken]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

fn rational() -> impl Strategy<Value = cactus_core::Rational> {
    (-50i64..=50, 1i64..=9).prop_map(|(n, d)| frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn general_tensors_round_trip(shape in prop::collection::vec(1usize..=3, 1..=3), seed in prop::collection::vec(rational(), 27)) {
        let n: usize = shape.iter().product();
        let t = Tensor::general(shape, seed[..n].to_vec()).unwrap();
        prop_assert_eq!(&Tensor::parse(&t.to_dense_json().unwrap().to_string()).unwrap(), &t);
        prop_assert_eq!(&Tensor::parse(&t.to_sparse_json().unwrap().to_string()).unwrap(), &t);
    }

    #[test]
    fn symmetric_tensors_round_trip(vars in 1usize..=3, degree in 1usize..=3, seed in prop::collection::vec(rational(), 10)) {
        let n = cactus_core::varieties::binomial(vars + degree - 1, degree);
        let t = Tensor::symmetric(vars, degree, seed[..n].to_vec()).unwrap();
        prop_assert_eq!(&Tensor::parse(&t.to_json().to_string()).unwrap(), &t);
    }
}
