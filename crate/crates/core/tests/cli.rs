use std::path::{Path, PathBuf};

use stabhom::cli::run;
use stabhom::report::Record;

fn ex(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(rel).display().to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["stabhom"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(out: &str) -> Vec<Record> {
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn dims(recs: &[Record], theory: &str) -> Vec<(i64, String)> {
    recs.iter()
        .filter_map(|r| match r {
            Record::Value { theory: t, degree: Some(d), value, .. } if t == theory => Some((*d, value.to_string())),
            _ => None,
        })
        .collect()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stabhom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn tor_over_dual_numbers() {
    let (code, out, _) = call(&["tor", "--alg", &ex("dual2.alg"), "--left", &ex("dual2/k.mod"), "--right", &ex("dual2/k.mod"), "--range", "0..8", "--machine"]);
    assert_eq!(code, 0);
    let recs = records(&out);
    let tor = dims(&recs, "Tor");
    assert_eq!(tor.len(), 9);
    assert!(tor.iter().all(|(_, v)| v == "1"));
    match &recs[0] {
        Record::Header { command, params } => {
            assert_eq!(command, "tor");
            assert_eq!(params["range"], "0..8");
            assert_eq!(params["pd_bound"], "6");
            assert_eq!(params["search_bound"], "3");
            assert_eq!(params["ext_bound"], "3");
        }
        r => panic!("first record {r:?}"),
    }
    assert!(matches!(recs.last(), Some(Record::Summary { exit_code: 0, fail: 0, .. })));
}

#[test]
fn negative_ranges_parse_both_ways() {
    let (alg, e) = (ex("intro.alg"), ex("intro/E.mod"));
    let base = ["stor", "--alg", alg.as_str(), "--right", e.as_str(), "--left", e.as_str()];
    for range in [&["--range", "-3..3"][..], &["--range=-3..3"][..]] {
        let args: Vec<&str> = base.iter().chain(range).copied().collect();
        let (code, out, err) = call(&args);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("Stor_-3 = 0  [VanishById]"), "{out}");
    }
}

#[test]
fn not_computable_exits_two_with_certificates() {
    let (code, out, _) = call(&["stor", "--alg", &ex("intro.alg"), "--right", &ex("intro/k.mod"), "--left", &ex("intro/k.mod"), "--range", "0..0", "--machine"]);
    assert_eq!(code, 2);
    let recs = records(&out);
    let Record::Value { certificates, value, .. } = &recs[1] else { panic!("{:?}", recs[1]) };
    assert!(value.to_string().starts_with("NotComputable"));
    assert_eq!(certificates.len(), 3);
}

#[test]
fn parse_errors_carry_line_numbers_and_exit_three() {
    let bad = scratch("bad.alg", "p=2 dim=2\nmul 0 0 = 0:1\nmul 0 1 = banana\n");
    let (code, _, err) = call(&["classify", "--alg", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("bad.alg"), "{err}");
}

#[test]
fn module_over_wrong_algebra_is_an_input_error() {
    let (code, _, err) = call(&["pd", "--alg", &ex("gf5.alg"), "--left", &ex("dual2/k.mod")]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn missing_arguments_and_bad_flags() {
    assert_eq!(call(&["tor", "--alg", &ex("dual2.alg")]).0, 3);
    assert_eq!(call(&["tor", "--range", "5..1"]).0, 3);
    assert_eq!(call(&["verify", "no_such_tag", "--corpus", &ex("ship.corpus")]).0, 3);
    assert_eq!(call(&["frobnicate"]).0, 3);
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["--version"]).0, 0);
}

#[test]
fn btor_local_on_non_local_algebra_is_rejected() {
    let (code, _, err) = call(&["btor-local", "--alg", &ex("upper.alg"), "--left", &ex("upper/S1.mod")]);
    assert_eq!(code, 3);
    assert!(err.contains("precondition"), "{err}");
}

#[test]
fn btor_local_reports_infinite_for_the_intro_ring() {
    let (code, out, _) = call(&["btor-local", "--alg", &ex("intro.alg"), "--left", &ex("intro/k.mod"), "--range", "0..1", "--machine"]);
    assert_eq!(code, 0);
    assert!(dims(&records(&out), "bTor").iter().all(|(_, v)| v == "Infinite"));
}

#[test]
fn certificates_and_classification() {
    let (_, out, _) = call(&["pd", "--alg", &ex("upper.alg"), "--left", &ex("upper/S2.mod"), "--machine"]);
    assert!(out.contains("\"certificate\":{\"Finite\":1}"), "{out}");
    let (_, out, _) = call(&["gdim", "--alg", &ex("intro.alg"), "--left", &ex("intro/E.mod"), "--machine"]);
    assert!(out.contains("\"certificate\":{\"AtLeast\":4}"), "{out}");
    let (code, out, _) = call(&["classify", "--alg", &ex("dual2.alg")]);
    assert_eq!(code, 0);
    assert!(out.contains("self-injective: true"), "{out}");
}

#[test]
fn ext_and_sext_use_the_target() {
    let args = |cmd: &'static str| {
        vec![cmd.to_string(), "--alg".into(), ex("trunc3.alg"), "--left".into(), ex("trunc3/k.mod"), "--target".into(), ex("trunc3/k.mod"), "--range".into(), "0..3".into(), "--machine".into()]
    };
    for cmd in ["ext", "sext"] {
        let a = args(cmd);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let (code, out, err) = call(&a);
        assert_eq!(code, 0, "{err}");
        let theory = if cmd == "ext" { "Ext" } else { "Sext" };
        assert!(dims(&records(&out), theory).iter().all(|(_, v)| v == "1"), "{out}");
    }
    assert_eq!(call(&["ext", "--alg", &ex("trunc3.alg"), "--left", &ex("trunc3/k.mod")]).0, 3);
}

#[test]
fn complete_resolution_dump_roundtrips() {
    let dump = std::env::temp_dir().join(format!("stabhom-dump-{}.txt", std::process::id()));
    let (code, out, _) = call(&["complete-res", "--alg", &ex("trunc3.alg"), "--left", &ex("trunc3/k.mod"), "--window", "-3..3", "--dump-complex", dump.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&dump).unwrap();
    let x = stabhom::complex::WindowComplex::parse_dump(&text).unwrap();
    x.verify().unwrap();
    assert_eq!((x.lo(), x.hi()), (-3, 3));
    assert!(x.is_acyclic_on_window().unwrap());
}

#[test]
fn balance_and_duality_checks() {
    let (code, _, err) = call(&["balance", "--alg", &ex("upper.alg"), "--right", &ex("upper/E.mod"), "--left", &ex("upper/S1.mod")]);
    assert_eq!(code, 3, "a left module is not a right module: {err}");
    let a = stabhom::io::read_algebra(Path::new(&ex("upper.alg"))).unwrap();
    let s2 = stabhom::io::read_module(Path::new(&ex("upper/S2.mod")), &a).unwrap();
    let right = scratch("DS2.mod", &stabhom::io::module_to_text(&s2.dual()));
    let (code, out, err) = call(&["balance", "--alg", &ex("upper.alg"), "--right", right.to_str().unwrap(), "--left", &ex("upper/S1.mod"), "--machine"]);
    assert_eq!(code, 0, "{err}{out}");
    assert_eq!(records(&out).iter().filter(|r| matches!(r, Record::Check { .. })).count(), 7);
    let (code, out, err) = call(&["duality", "--alg", &ex("dual2.alg"), "--left", &ex("dual2/k.mod"), "--target", &ex("dual2/R_k.mod")]);
    assert_eq!(code, 0, "{err}{out}");
}

#[test]
fn verify_all_is_green_and_stable_across_thread_counts() {
    let (code, out, _) = call(&["verify", "all", "--corpus", &ex("ship.corpus"), "--machine", "--jobs", "2"]);
    assert_eq!(code, 0);
    let recs = records(&out);
    assert!(recs.iter().any(|r| matches!(r, Record::Instance { tag, .. } if tag == "thm_gorenstein")));
    assert!(!recs.iter().any(|r| matches!(r, Record::Instance { verdict: stabhom::stable::Verdict::Fail, .. })));
    let (_, single, _) = call(&["verify", "all", "--corpus", &ex("ship.corpus"), "--machine", "--jobs", "1"]);
    let tail = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(tail(&out), tail(&single));
}

#[test]
fn resolve_reports_ranks_and_exactness() {
    let (code, out, _) = call(&["resolve", "--alg", &ex("trunc3.alg"), "--left", &ex("trunc3/k.mod"), "--range", "0..4", "--machine"]);
    assert_eq!(code, 0);
    let ranks = dims(&records(&out), "rank P");
    assert_eq!(ranks, (0..=4).map(|d| (d, "1".to_string())).collect::<Vec<_>>());
}
