//! End-to-end acceptance criteria, one PASS/FAIL line each.
//!
//! Tolerances are pinned: every dimension comparison is exact, criterion 1 must
//! finish in under 5 s and criterion 3 in under 60 s.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use stabhom::algebra::Algebra;
use stabhom::cli;
use stabhom::complex::{Boundedness, WindowComplex};
use stabhom::detect::{verify_theorem, Corpus, TheoremTag};
use stabhom::gorenstein::gdim_certificate;
use stabhom::io::{read_algebra, read_module};
use stabhom::module::FdModule;
use stabhom::resolution::{syzygy, DimCertificate};
use stabhom::sample::Sampler;
use stabhom::stable::{BtorValue, Strategy, Verdict, Workbench};
use stabhom::standard::{assoc_iso, swap_iso, theta_evaluation};

const CRITERION_1_LIMIT: Duration = Duration::from_secs(5);
const CRITERION_3_LIMIT: Duration = Duration::from_secs(60);
const BALANCE_PAIRS: usize = 30;
const APPENDIX_TRIPLES: usize = 50;

type Outcome = std::result::Result<(), String>;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn corpus() -> Corpus {
    Corpus::load(&examples().join("ship.corpus")).expect("shipped corpus loads")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Rank of a matrix by hand elimination mod p, independent of the library's echelon code.
fn oracle_rank(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let p = p as u64;
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|&i| (i * m[rank][c]) % p == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] % p != 0 {
                let f = m[r][c] * inv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn matrix_rows(m: &stabhom::linalg::FpMatrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = read_algebra(&examples().join("dual2.alg")).map_err(|e| e.to_string())?;
    let k = read_module(&examples().join("dual2/k.mod"), &a).map_err(|e| e.to_string())?;
    // Hand resolution: A <-x- A <-x- A <- ... of k. Exactness in each middle degree
    // is rank(x) + rank(x) = dim A; tensoring with k turns every x into x acting on k.
    let x_on_a = matrix_rows(FdModule::regular(&a).action(1));
    let x_on_k = matrix_rows(k.action(1));
    let ra = oracle_rank(&x_on_a, 2);
    ensure(ra + ra == a.dim(), || format!("hand resolution not exact: rank(x) = {ra}"))?;
    let rk = oracle_rank(&x_on_k, 2);
    let oracle = |i: i64| if i == 0 { k.dim() - rk } else { k.dim() - rk - rk };
    let wb = Workbench::default();
    for i in 0..=8 {
        let t = wb.tor(&k, &k, i).map_err(|e| e.to_string())?;
        ensure(t == oracle(i) && t == 1, || format!("Tor_{i}(k,k) = {t}, oracle {}", oracle(i)))?;
    }
    for i in -4..=4 {
        let s = wb.stor(&k, &k, i).map_err(|e| e.to_string())?.dimension();
        let t = wb.ttor(&k, &k, i).map_err(|e| e.to_string())?;
        let e = wb.sext(&k, &k, i).map_err(|e| e.to_string())?;
        ensure(s == Some(1) && t == 1 && e == 1, || format!("degree {i}: Stor {s:?}, Ttor {t}, Sext {e}"))?;
    }
    let took = start.elapsed();
    ensure(took < CRITERION_1_LIMIT, || format!("took {took:?}"))
}

fn criterion_2() -> Outcome {
    let a = read_algebra(&examples().join("intro.alg")).map_err(|e| e.to_string())?;
    let e = read_module(&examples().join("intro/E.mod"), &a).map_err(|e| e.to_string())?;
    ensure(e == FdModule::regular(&a).dual(), || "E.mod is not D(R)".into())?;
    let wb = Workbench::default();
    for i in 2..=5 {
        let t = wb.tor(&e, &e, i).map_err(|e| e.to_string())?;
        ensure(t != 0, || format!("Tor_{i}(E,E) = 0"))?;
    }
    for i in -3..=3 {
        let s = wb.stor(&e, &e, i).map_err(|e| e.to_string())?;
        ensure(s.dimension() == Some(0) && s.strategy() == Some(Strategy::VanishById), || format!("Stor_{i}(E,E) = {s:?}"))?;
    }
    let table = wb.exact_sequence_consistency(&e, &e, -3, 5).map_err(|e| e.to_string())?;
    for row in &table.rows {
        ensure(row.verdict == Verdict::Pass && row.btor == Some(BtorValue::Finite(row.tor)), || {
            format!("degree {}: Tor {} vs bTor {:?} ({:?})", row.degree, row.tor, row.btor, row.verdict)
        })?;
    }
    let g = gdim_certificate(&e, 6, 3).dim();
    ensure(g == DimCertificate::AtLeast(7), || format!("gdim certificate {g:?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let c = corpus();
    let wb = Workbench::default();
    let mut evaluated = 0;
    for tag in TheoremTag::ALL {
        let r = verify_theorem(tag, &c, &wb, -3, 3).map_err(|e| e.to_string())?;
        for i in &r.instances {
            match &i.verdict {
                Verdict::Pass => evaluated += 1,
                Verdict::Fail => return Err(format!("{tag} [{}] {}: {}", i.ring, i.subject, i.detail)),
                Verdict::Skipped(reason) => ensure(reason.starts_with("not computable"), || {
                    format!("{tag} [{}] {} skipped without a NotComputable reason: {reason}", i.ring, i.subject)
                })?,
            }
        }
    }
    ensure(evaluated > 0, || "no evaluable instances".into())?;
    let took = start.elapsed();
    ensure(took < CRITERION_3_LIMIT, || format!("took {took:?}"))
}

fn criterion_4() -> Outcome {
    let a = read_algebra(&examples().join("trunc3.alg")).map_err(|e| e.to_string())?;
    let wb = Workbench::default();
    let mut s = Sampler::new(404);
    let mut pairs = 0;
    let mut tries = 0;
    while pairs < BALANCE_PAIRS {
        tries += 1;
        ensure(tries < 10 * BALANCE_PAIRS, || format!("only {pairs} pairs with double certificates"))?;
        let m = s.module(&a, 2);
        let n = s.module(&a, 2);
        if !(wb.gdim(&m).dim().is_finite() && wb.gdim(&n).dim().is_finite()) {
            continue;
        }
        let bal = wb.balancedness_check(&m, &n, -3, 3).map_err(|e| e.to_string())?;
        ensure(bal.rows.len() == 7 && bal.rows.iter().all(|r| r.verdict == Verdict::Pass), || format!("balance fails on pair {pairs}: {:?}", bal.rows))?;
        let dual = wb.duality_check(&m, &n, -3, 3).map_err(|e| e.to_string())?;
        ensure(dual.rows.len() == 7 && dual.rows.iter().all(|r| r.verdict == Verdict::Pass), || format!("duality fails on pair {pairs}: {:?}", dual.rows))?;
        pairs += 1;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let a = Algebra::truncated_polynomial(3, 3).map_err(|e| e.to_string())?;
    let e = FdModule::regular(&a).dual();
    let mut s = Sampler::new(55);
    for t in 0..APPENDIX_TRIPLES {
        let free = t % 2 == 0;
        let x = s.bounded_complex(&a, 2 + t % 2, 2, free);
        let y = s.module(&a, 2);
        let z = if free { s.module(&a, 2) } else { e.clone() };
        let th = theta_evaluation(&x, &y, &z).map_err(|e| e.to_string())?;
        ensure(th.is_iso, || format!("θ is not an isomorphism on triple {t}"))?;
    }
    let b = Algebra::truncated_polynomial(2, 2).map_err(|e| e.to_string())?;
    for t in 0..APPENDIX_TRIPLES {
        let x = s.bounded_complex(&b, 2, 2, false);
        let y = s.bounded_complex(&b, 1 + t % 2, 2, false);
        let z = s.bounded_complex(&b, 2, 1, false);
        for (name, f) in [("assoc", assoc_iso(&x, &y, &z)), ("swap", swap_iso(&x, &y, &z))] {
            let f = f.map_err(|e| e.to_string())?;
            let (src, tgt) = (f.morphism.source(), f.morphism.target());
            let dims_agree = (src.lo()..=src.hi()).all(|d| src.term_dim(d).ok() == tgt.term_dim(d).ok());
            ensure(f.is_iso && dims_agree, || format!("{name} fails on triple {t}"))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let c = corpus();
    let wb = Workbench::default();
    let mut s = Sampler::new(66);
    for ring in &c.rings {
        let a = &ring.algebra;
        for _ in 0..4 {
            let x = s.bounded_complex(a, 3, 2, false);
            x.verify().map_err(|e| format!("[{}] random complex: {e}", ring.name))?;
        }
        let partners = ring.partners();
        for (name, m) in ring.modules.iter().chain(partners.iter()) {
            let res = wb.resolver(m).resolution(5);
            res.complex.verify().map_err(|e| format!("[{}] {name}: ∂∂ ≠ 0: {e}", ring.name))?;
            ensure(res.exact, || format!("[{}] {name}: resolution not exact", ring.name))?;
            if wb.gdim(m).dim().is_finite() {
                let t = wb.complete(m, -3, 3).map_err(|e| e.to_string())?;
                t.complex().verify().map_err(|e| format!("[{}] {name}: {e}", ring.name))?;
                let v = t.verification();
                ensure(v.passed(), || format!("[{}] {name}: complete resolution {v:?}", ring.name))?;
            }
        }
        for (rn, r) in &partners {
            let omega = syzygy(r, 1);
            let g = wb.gdim(r).dim().finite();
            for (nn, n) in &ring.modules {
                let ctx = || format!("[{}] {rn}, {nn}", ring.name);
                for i in 1..=3 {
                    let high = wb.tor(r, n, i + 1).map_err(|e| e.to_string())?;
                    let low = wb.tor(&omega, n, i).map_err(|e| e.to_string())?;
                    ensure(high == low, || format!("{}: Tor_{} = {high}, Tor_{i}(Ω) = {low}", ctx(), i + 1))?;
                }
                if let Some(g) = g {
                    for i in g as i64 + 1..=g as i64 + 3 {
                        let st = wb.stor(r, n, i).map_err(|e| e.to_string())?.dimension();
                        let t = wb.tor(r, n, i).map_err(|e| e.to_string())?;
                        ensure(st == Some(t), || format!("{}: Stor_{i} = {st:?}, Tor_{i} = {t}", ctx()))?;
                    }
                }
            }
        }
        for (mn, m) in &ring.modules {
            let omega = syzygy(m, 1);
            for (nn, n) in &ring.modules {
                for i in 1..=3 {
                    let high = wb.ext(m, n, i + 1).map_err(|e| e.to_string())?;
                    let low = wb.ext(&omega, n, i).map_err(|e| e.to_string())?;
                    ensure(high == low, || format!("[{}] Ext^{}({mn}, {nn}) = {high}, Ext^{i}(Ω) = {low}", ring.name, i + 1))?;
                }
            }
        }
    }
    // A window complex with no bound claims nothing outside its degrees.
    let k = FdModule::top_of_regular(&c.rings[0].algebra).map_err(|e| e.to_string())?;
    let w = WindowComplex::new(&c.rings[0].algebra, 0, vec![k], vec![], Boundedness::WindowOnly).map_err(|e| e.to_string())?;
    ensure(!w.is_known(1), || "window complex claims degree 1".into())
}

fn machine_report(args: &[&str]) -> std::result::Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(args.iter().copied(), &mut out, &mut err);
    ensure(code == 0, || format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)))?;
    Ok(out)
}

fn criterion_7() -> Outcome {
    let corpus = examples().join("ship.corpus");
    let corpus = corpus.to_str().unwrap();
    let one = machine_report(&["stabhom", "verify", "all", "--corpus", corpus, "--machine", "--jobs", "1"])?;
    let again = machine_report(&["stabhom", "verify", "all", "--corpus", corpus, "--machine", "--jobs", "1"])?;
    ensure(one == again, || "verify reports differ between runs".into())?;
    // The header echoes --jobs; every record after it must not depend on the thread count.
    let many = machine_report(&["stabhom", "verify", "all", "--corpus", corpus, "--machine", "--jobs", "4"])?;
    let body = |r: &[u8]| r.splitn(2, |&b| b == b'\n').nth(1).map(<[u8]>::to_vec);
    ensure(body(&one) == body(&many), || "verify records depend on the thread count".into())?;
    let alg = examples().join("trunc3.alg");
    let m = examples().join("trunc3/Q2.mod");
    let (alg, m) = (alg.to_str().unwrap(), m.to_str().unwrap());
    let args = ["stabhom", "stor", "--alg", alg, "--right", m, "--left", m, "--range", "-4..4", "--machine"];
    let first = machine_report(&args)?;
    let second = machine_report(&args)?;
    ensure(first == second, || "stor reports differ between runs".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("dual numbers baseline", criterion_1),
        ("intro example", criterion_2),
        ("theorem verifier on the shipped corpus", criterion_3),
        ("balancedness and duality on random pairs", criterion_4),
        ("evaluation, associativity and swap", criterion_5),
        ("structural invariants", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2?})", i + 1, start.elapsed()),
            Err(e) => {
                println!("criterion {}: FAIL  {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
