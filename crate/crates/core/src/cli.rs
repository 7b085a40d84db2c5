//! The `stabhom` command line.
//!
//! Tensor-type commands (`tor`, `stor`, `ttor`, `balance`) take the first
//! argument from `--right`, a module over the opposite algebra, and the second
//! from `--left`. Single-module and Hom-type commands take their first argument
//! from `--left` (or `--right`) and the second from `--target`, over the same
//! algebra as the first.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::algebra::Algebra;
use crate::detect::{classify, verify_theorem, Corpus, TheoremTag};
use crate::error::{Error, Result};
use crate::io::{read_algebra, read_module};
use crate::module::FdModule;
use crate::report::{Record, Report, Value, EXIT_FAIL, EXIT_INPUT, EXIT_OK};
use crate::stable::{Bounds, Verdict, Workbench};

#[derive(Parser, Debug)]
#[command(name = "stabhom", version, about = "Absolute, Tate and stable homology over finite-dimensional algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Algebra file.
    #[arg(long, global = true)]
    pub alg: Option<PathBuf>,
    /// Module over the algebra.
    #[arg(long, global = true)]
    pub left: Option<PathBuf>,
    /// Module over the opposite algebra.
    #[arg(long, global = true)]
    pub right: Option<PathBuf>,
    /// Second argument of Hom-type commands.
    #[arg(long, global = true)]
    pub target: Option<PathBuf>,
    /// Degrees `a..b`, inclusive.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: Option<(i64, i64)>,
    /// Window `a..b` for complete resolutions.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_range)]
    pub window: Option<(i64, i64)>,
    /// Ext degrees checked for total reflexivity.
    #[arg(long, global = true, default_value_t = 3)]
    pub ext_bound: usize,
    /// Largest syzygy tried as a G-dimension witness.
    #[arg(long, global = true, default_value_t = 3)]
    pub search_bound: usize,
    /// Longest resolution searched for finite projective or injective dimension.
    #[arg(long, global = true, default_value_t = 6)]
    pub pd_bound: usize,
    /// Emit line-delimited JSON records.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the computed complex to this file.
    #[arg(long, global = true)]
    pub dump_complex: Option<PathBuf>,
    /// Corpus manifest for `verify`.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Validate the algebra and module files.
    Check,
    /// Projective resolution of a module.
    Resolve,
    Tor,
    Ext,
    Pd,
    Id,
    Gdim,
    /// Complete resolution of a module of finite G-dimension.
    CompleteRes,
    Stor,
    Ttor,
    Sext,
    /// bTor of the residue field against a module over a local algebra.
    BtorLocal,
    Balance,
    Duality,
    /// Check a theorem (or `all`) on a corpus.
    Verify { tag: String },
    /// Ring-level flags and certificates.
    Classify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Resolve => "resolve",
            Command::Tor => "tor",
            Command::Ext => "ext",
            Command::Pd => "pd",
            Command::Id => "id",
            Command::Gdim => "gdim",
            Command::CompleteRes => "complete-res",
            Command::Stor => "stor",
            Command::Ttor => "ttor",
            Command::Sext => "sext",
            Command::BtorLocal => "btor-local",
            Command::Balance => "balance",
            Command::Duality => "duality",
            Command::Verify { .. } => "verify",
            Command::Classify => "classify",
        }
    }
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, found `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// Runs one invocation, writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let work = || execute(&cli);
    let result = match cli.opts.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::Precondition(format!("thread pool: {e}"))),
        },
        None => work(),
    };
    match result {
        Ok(report) => {
            let text = if cli.opts.machine { report.machine() } else { report.human() };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(Error::ConstructionInvariant(e)) => {
            let _ = writeln!(err, "internal error: {e}");
            EXIT_FAIL
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

struct Inputs {
    algebra: Algebra,
    left: Option<FdModule>,
    right: Option<FdModule>,
}

fn with_path(path: &std::path::Path, e: Error) -> Error {
    match e {
        Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", path.display()) },
        e => e,
    }
}

fn load(opts: &Options) -> Result<Inputs> {
    let alg_path = opts.alg.as_ref().ok_or_else(|| Error::Precondition("--alg is required".into()))?;
    let algebra = read_algebra(alg_path).map_err(|e| with_path(alg_path, e))?;
    let left = opts.left.as_ref().map(|p| read_module(p, &algebra).map_err(|e| with_path(p, e))).transpose()?;
    let op = algebra.opposite();
    let right = opts.right.as_ref().map(|p| read_module(p, &op).map_err(|e| with_path(p, e))).transpose()?;
    Ok(Inputs { algebra, left, right })
}

impl Inputs {
    fn need_left(&self) -> Result<&FdModule> {
        self.left.as_ref().ok_or_else(|| Error::Precondition("--left is required".into()))
    }

    fn need_right(&self) -> Result<&FdModule> {
        self.right.as_ref().ok_or_else(|| Error::Precondition("--right is required".into()))
    }

    /// The single module of a one-argument or Hom-type command.
    fn first(&self) -> Result<&FdModule> {
        self.left.as_ref().or(self.right.as_ref()).ok_or_else(|| Error::Precondition("--left or --right is required".into()))
    }

    fn target(&self, opts: &Options) -> Result<FdModule> {
        let first = self.first()?;
        let p = opts.target.as_ref().ok_or_else(|| Error::Precondition("--target is required".into()))?;
        read_module(p, first.algebra()).map_err(|e| with_path(p, e))
    }
}

fn params(cli: &Cli) -> BTreeMap<String, String> {
    let o = &cli.opts;
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    put("alg", path(&o.alg));
    put("left", path(&o.left));
    put("right", path(&o.right));
    put("target", path(&o.target));
    put("corpus", path(&o.corpus));
    put("range", o.range.map(|(a, b)| format!("{a}..{b}")));
    put("window", o.window.map(|(a, b)| format!("{a}..{b}")));
    put("ext_bound", Some(o.ext_bound.to_string()));
    put("search_bound", Some(o.search_bound.to_string()));
    put("pd_bound", Some(o.pd_bound.to_string()));
    put("jobs", o.jobs.map(|j| j.to_string()));
    if let Command::Verify { tag } = &cli.command {
        put("tag", Some(tag.clone()));
    }
    m
}

/// Turns bounded-search outcomes into report entries and passes real errors on.
fn soft<T>(rep: &mut Report, theory: &str, degree: Option<i64>, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotComputable(reason)) => {
            rep.not_computable(theory, degree, reason);
            Ok(None)
        }
        Err(e @ Error::WindowInsufficient { .. }) => {
            rep.not_computable(theory, degree, e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn dump(opts: &Options, text: String) -> Result<()> {
    if let Some(p) = &opts.dump_complex {
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Report> {
    let o = &cli.opts;
    let bounds = Bounds { pd: o.pd_bound, search: o.search_bound, ext: o.ext_bound };
    let wb = Workbench::new(bounds);
    let mut rep = Report::new(cli.command.name(), params(cli));
    let stable_range = o.range.unwrap_or((-3, 3));
    let plain_range = o.range.unwrap_or((0, o.pd_bound as i64));
    if let Command::Verify { tag } = &cli.command {
        let path = o.corpus.as_ref().ok_or_else(|| Error::Precondition("--corpus is required".into()))?;
        let corpus = Corpus::load(path)?;
        let tags: Vec<TheoremTag> = if tag == "all" { TheoremTag::ALL.to_vec() } else { vec![tag.parse()?] };
        let (lo, hi) = stable_range;
        for t in tags {
            let r = verify_theorem(t, &corpus, &wb, lo, hi)?;
            for i in r.instances {
                rep.push(Record::Instance { tag: t.to_string(), ring: i.ring, subject: i.subject, verdict: i.verdict, detail: i.detail });
            }
        }
        let evaluable = rep.records().iter().any(|r| matches!(r, Record::Instance { verdict: Verdict::Pass | Verdict::Fail, .. }));
        if !evaluable {
            rep.mark_not_computable();
        }
        return Ok(rep);
    }
    let inputs = load(o)?;
    match &cli.command {
        Command::Check => {
            let a = &inputs.algebra;
            rep.push(Record::Note {
                text: format!(
                    "algebra: p={} dim={} commutative={} radical={:?}",
                    a.modulus(),
                    a.dim(),
                    a.is_commutative(),
                    a.radical_source()
                ),
            });
            for (side, m) in [("left", &inputs.left), ("right", &inputs.right)] {
                if let Some(m) = m {
                    m.verify()?;
                    rep.value(&format!("dim {side}"), None, Value::Dimension { dimension: m.dim() });
                    rep.push(Record::Note {
                        text: format!("{side}: projective={} injective={}", m.is_projective(), m.is_injective()),
                    });
                }
            }
        }
        Command::Resolve => {
            let m = inputs.first()?;
            let (lo, hi) = plain_range;
            let res = wb.resolver(m).resolution(hi.max(0) as usize);
            for d in lo.max(0)..=hi.min(res.complex.hi()) {
                let t = res.complex.term(d)?;
                let rank = t.free_rank().unwrap_or(0);
                rep.value("rank P", Some(d), Value::Dimension { dimension: rank });
            }
            let verdict = if res.exact { Verdict::Pass } else { Verdict::Fail };
            rep.push(Record::Check { check: "exact".into(), degree: hi, left: None, right: None, verdict });
            rep.value("pd", None, Value::Certificate { certificate: wb.pd(m) });
            dump(o, res.complex.dump())?;
        }
        Command::Tor => {
            let (m, n) = (inputs.need_right()?, inputs.need_left()?);
            for i in plain_range.0..=plain_range.1 {
                let d = wb.tor(m, n, i)?;
                rep.value("Tor", Some(i), Value::Dimension { dimension: d });
            }
        }
        Command::Ext => {
            let (m, n) = (inputs.first()?, inputs.target(o)?);
            for i in plain_range.0..=plain_range.1 {
                let d = wb.ext(m, &n, i)?;
                rep.value("Ext", Some(i), Value::Dimension { dimension: d });
            }
        }
        Command::Pd => {
            let certificate = wb.pd(inputs.first()?);
            rep.value("pd", None, Value::Certificate { certificate });
        }
        Command::Id => {
            let certificate = wb.id(inputs.first()?);
            rep.value("id", None, Value::Certificate { certificate });
        }
        Command::Gdim => {
            let g = wb.gdim(inputs.first()?);
            rep.value("gdim", None, Value::Certificate { certificate: g.dim() });
        }
        Command::CompleteRes => {
            let m = inputs.first()?;
            let (lo, hi) = o.window.unwrap_or((-4, 4));
            if let Some(t) = soft(&mut rep, "T", None, wb.complete(m, lo, hi))? {
                for d in lo..=hi {
                    let dim = if t.complex().is_known(d) { t.complex().term_dim(d)? } else { 0 };
                    rep.value("dim T", Some(d), Value::Dimension { dimension: dim });
                }
                let v = t.verification();
                for (check, ok) in [
                    ("acyclic", v.acyclic),
                    ("hom_dual_acyclic", v.hom_dual_acyclic),
                    ("injective_tensor_acyclic", v.injective_tensor_acyclic),
                ] {
                    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
                    rep.push(Record::Check { check: check.into(), degree: lo, left: None, right: None, verdict });
                }
                rep.push(Record::Note { text: format!("coincides with the projective resolution from degree {}", t.coincidence()) });
                dump(o, t.complex().dump())?;
            }
        }
        Command::Stor => {
            let (m, n) = (inputs.need_right()?, inputs.need_left()?);
            for i in stable_range.0..=stable_range.1 {
                let s = wb.stor(m, n, i)?;
                rep.stor("Stor", &s);
            }
        }
        Command::Ttor => {
            let (m, n) = (inputs.need_right()?, inputs.need_left()?);
            for i in stable_range.0..=stable_range.1 {
                if let Some(d) = soft(&mut rep, "Ttor", Some(i), wb.ttor(m, n, i))? {
                    rep.value("Ttor", Some(i), Value::Dimension { dimension: d });
                }
            }
        }
        Command::Sext => {
            let (m, n) = (inputs.first()?, inputs.target(o)?);
            for i in stable_range.0..=stable_range.1 {
                if let Some(d) = soft(&mut rep, "Sext", Some(i), wb.sext(m, &n, i))? {
                    rep.value("Sext", Some(i), Value::Dimension { dimension: d });
                }
            }
        }
        Command::BtorLocal => {
            let n = inputs.need_left()?;
            for i in stable_range.0..=stable_range.1 {
                if let Some(b) = soft(&mut rep, "bTor", Some(i), wb.btor_local(n, i, o.pd_bound))? {
                    rep.value("bTor", Some(i), b.into());
                }
            }
        }
        Command::Balance | Command::Duality => {
            let (lo, hi) = stable_range;
            let r = if matches!(cli.command, Command::Balance) {
                wb.balancedness_check(inputs.need_right()?, inputs.need_left()?, lo, hi)
            } else {
                wb.duality_check(inputs.first()?, &inputs.target(o)?, lo, hi)
            };
            if let Some(r) = soft(&mut rep, cli.command.name(), None, r)? {
                for row in r.rows {
                    rep.push(Record::Check { check: r.check.clone(), degree: row.degree, left: row.left, right: row.right, verdict: row.verdict });
                }
            }
        }
        Command::Classify => {
            let report = classify(&inputs.algebra, o.pd_bound);
            rep.push(Record::Ring { report });
        }
        Command::Verify { .. } => unreachable!("handled above"),
    }
    Ok(rep)
}
