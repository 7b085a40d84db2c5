//! Ring-level classification and instance-wise verification of the vanishing,
//! balancedness and duality statements on a corpus of modules.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::io::{read_algebra, read_module};
use crate::module::FdModule;
use crate::resolution::{ext_with, DimCertificate};
use crate::stable::{residue_field, BtorValue, StorAnswer, StorValue, Strategy, Verdict, Workbench};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    True,
    False,
    Unknown,
}

impl From<Option<bool>> for Flag {
    fn from(b: Option<bool>) -> Self {
        match b {
            Some(true) => Flag::True,
            Some(false) => Flag::False,
            None => Flag::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReport {
    pub modulus: u32,
    pub dim: usize,
    pub commutative: bool,
    pub local: Flag,
    /// `dim A/J` when the radical is known.
    pub residue_dim: Option<usize>,
    pub radical_dim: Option<usize>,
    pub self_injective: bool,
    /// Injective dimension of `A` as a left module.
    pub id_left: DimCertificate,
    /// Injective dimension of `A` as a right module.
    pub id_right: DimCertificate,
    pub iwanaga_gorenstein: Flag,
    pub regular_artinian: Flag,
    pub bound: usize,
}

pub fn classify(a: &Algebra, bound: usize) -> RingReport {
    let wb = Workbench::default();
    let r = FdModule::regular(a);
    let ro = FdModule::regular(&a.opposite());
    let id_left = wb.resolver(&r.dual()).pd_certificate(bound);
    let id_right = wb.resolver(&ro.dual()).pd_certificate(bound);
    let radical_dim = a.radical().map(|j| j.dim());
    let iwanaga_gorenstein = if id_left.is_finite() && id_right.is_finite() { Flag::True } else { Flag::Unknown };
    let regular_artinian = match radical_dim {
        Some(0) => Flag::from(Some(a.is_commutative())),
        Some(_) => Flag::False,
        None => Flag::Unknown,
    };
    RingReport {
        modulus: a.modulus(),
        dim: a.dim(),
        commutative: a.is_commutative(),
        local: a.is_local().into(),
        residue_dim: radical_dim.map(|j| a.dim() - j),
        radical_dim,
        self_injective: r.is_injective(),
        id_left,
        id_right,
        iwanaga_gorenstein,
        regular_artinian,
        bound,
    }
}

/// `Ext^i(k, N)` on `[0, window]` over a commutative local algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthProfile {
    pub depth: Option<usize>,
    pub profile: Vec<usize>,
    /// Injective dimension from an injective resolution, independent of the profile.
    pub id: DimCertificate,
}

pub fn depth_and_id_via_ext(wb: &Workbench, n: &FdModule, window: usize) -> Result<DepthProfile> {
    let k = residue_field(n.algebra())?;
    let pk = wb.resolver(&k);
    let profile: Vec<usize> = (0..=window as i64).map(|i| ext_with(&pk, n, i)).collect::<Result<_>>()?;
    let depth = profile.iter().position(|&e| e > 0);
    if !n.is_zero() && depth != Some(0) {
        return Err(Error::ConstructionInvariant("a nonzero module over an artinian local algebra has depth 0".into()));
    }
    let id = wb.resolver(&n.dual()).pd_certificate(window);
    if let DimCertificate::Finite(t) = id {
        if profile[t] == 0 || profile[t + 1..].iter().any(|&e| e > 0) {
            return Err(Error::ConstructionInvariant(format!("Ext(k, N) profile {profile:?} disagrees with id = {t}")));
        }
    }
    Ok(DepthProfile { depth, profile, id })
}

/// A ring with its named test modules.
#[derive(Clone, Debug)]
pub struct CorpusRing {
    pub name: String,
    pub algebra: Algebra,
    pub modules: Vec<(String, FdModule)>,
}

impl CorpusRing {
    /// Second arguments for `Stor(m, -)`: modules over the opposite algebra.
    pub fn partners(&self) -> Vec<(String, FdModule)> {
        if self.algebra.is_commutative() {
            return self.modules.clone();
        }
        self.modules.iter().map(|(s, m)| (format!("D({s})"), m.dual())).collect()
    }

    fn regular_partner(&self) -> FdModule {
        FdModule::regular(&self.algebra.opposite())
    }
}

/// Rings and modules listed in a manifest.
///
/// ```text
/// ring dual2 dual2.alg
/// module k dual2/k.mod
/// ```
///
/// `module` lines belong to the last `ring`; paths are relative to the manifest.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub rings: Vec<CorpusRing>,
}

impl Corpus {
    pub fn load(path: &Path) -> Result<Corpus> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        let mut rings: Vec<CorpusRing> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["ring", name, file] => {
                    let algebra = read_algebra(&base.join(file)).map_err(|e| err(format!("{file}: {e}")))?;
                    rings.push(CorpusRing { name: name.to_string(), algebra, modules: Vec::new() });
                }
                ["module", name, file] => {
                    let ring = rings.last_mut().ok_or_else(|| err("module before any ring".into()))?;
                    let m = read_module(&base.join(file), &ring.algebra).map_err(|e| err(format!("{file}: {e}")))?;
                    ring.modules.push((name.to_string(), m));
                }
                _ => return Err(err(format!("expected `ring <name> <file>` or `module <name> <file>`, found `{line}`"))),
            }
        }
        Ok(Corpus { rings })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremTag {
    Finitepd,
    ArtinPd,
    ArtinId,
    StorBalanced,
    ArtBalance,
    VanishingGdim,
    Gor1,
    GprojGflatFg,
    StableDuality,
    FinitenessInjDims,
    ThmGorenstein,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 11] = [
        TheoremTag::Finitepd,
        TheoremTag::ArtinPd,
        TheoremTag::ArtinId,
        TheoremTag::StorBalanced,
        TheoremTag::ArtBalance,
        TheoremTag::VanishingGdim,
        TheoremTag::Gor1,
        TheoremTag::GprojGflatFg,
        TheoremTag::StableDuality,
        TheoremTag::FinitenessInjDims,
        TheoremTag::ThmGorenstein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremTag::Finitepd => "finitepd",
            TheoremTag::ArtinPd => "artin_pd",
            TheoremTag::ArtinId => "artin_id",
            TheoremTag::StorBalanced => "stor_balanced",
            TheoremTag::ArtBalance => "art_balance",
            TheoremTag::VanishingGdim => "vanishing_gdim",
            TheoremTag::Gor1 => "gor1",
            TheoremTag::GprojGflatFg => "gproj_gflat_fg",
            TheoremTag::StableDuality => "stable_duality",
            TheoremTag::FinitenessInjDims => "finiteness_inj_dims",
            TheoremTag::ThmGorenstein => "thm_gorenstein",
        }
    }
}

impl std::fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| Error::UnknownTag(s.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceVerdict {
    pub ring: String,
    pub subject: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub tag: TheoremTag,
    pub lo: i64,
    pub hi: i64,
    pub instances: Vec<InstanceVerdict>,
}

impl TheoremReport {
    pub fn count(&self, f: impl Fn(&Verdict) -> bool) -> usize {
        self.instances.iter().filter(|i| f(&i.verdict)).count()
    }

    pub fn failures(&self) -> usize {
        self.count(Verdict::is_fail)
    }

    pub fn passes(&self) -> usize {
        self.count(|v| *v == Verdict::Pass)
    }

    pub fn skipped(&self) -> impl Iterator<Item = &InstanceVerdict> {
        self.instances.iter().filter(|i| matches!(i.verdict, Verdict::Skipped(_)))
    }
}

/// Outcome of one instance while it is being evaluated.
enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn not_computable(what: &str, s: &StorAnswer) -> Outcome {
    match &s.value {
        StorValue::NotComputable { reason } => Outcome::Skip(format!("not computable: {what}: {reason}")),
        StorValue::Computed { .. } => unreachable!("only called on NotComputable answers"),
    }
}

/// `Stor_i(m, n)` from a complete resolution of `m`, when `m` has one.
fn tate_stor(wb: &Workbench, m: &FdModule, n: &FdModule, i: i64) -> Result<Option<usize>> {
    if !wb.gdim(m).dim().is_finite() {
        return Ok(None);
    }
    wb.ttor(m, n, i).map(Some)
}

/// Checks `Stor_i(m, n) = 0` on `[lo, hi]` for every `n`, preferring the Tate route.
fn vanishes_on(wb: &Workbench, m: &FdModule, ns: &[(String, FdModule)], lo: i64, hi: i64) -> Result<Option<String>> {
    for (name, n) in ns {
        for i in lo..=hi {
            let d = match tate_stor(wb, m, n, i)? {
                Some(d) => d,
                None => wb.stor(m, n, i)?.dimension().unwrap_or(0),
            };
            if d != 0 {
                return Ok(Some(format!("Stor_{i}(-, {name}) = {d}")));
            }
        }
    }
    Ok(None)
}

/// Runs the check for one theorem over every applicable corpus instance.
pub fn verify_theorem(tag: TheoremTag, corpus: &Corpus, wb: &Workbench, lo: i64, hi: i64) -> Result<TheoremReport> {
    type Job<'a> = (&'a CorpusRing, String, Box<dyn Fn() -> Result<Outcome> + Send + Sync + 'a>);
    let mut jobs: Vec<Job> = Vec::new();
    for ring in &corpus.rings {
        let commutative = ring.algebra.is_commutative();
        let local = residue_field(&ring.algebra).is_ok();
        let gorenstein = || {
            let r = FdModule::regular(&ring.algebra);
            wb.id(&r).is_finite() && wb.id(&FdModule::regular(&ring.algebra.opposite())).is_finite()
        };
        match tag {
            TheoremTag::Finitepd | TheoremTag::ArtinPd => {
                for (name, m) in &ring.modules {
                    let partners = ring.partners();
                    jobs.push((ring, name.clone(), Box::new(move || finite_pd_instance(wb, m, &partners, tag, lo, hi))));
                }
            }
            TheoremTag::ArtinId => {
                for (name, n) in &ring.modules {
                    let firsts: Vec<(String, FdModule)> = if commutative {
                        ring.modules.clone()
                    } else {
                        ring.modules.iter().map(|(s, m)| (format!("D({s})"), m.dual())).collect()
                    };
                    jobs.push((ring, name.clone(), Box::new(move || artin_id_instance(wb, n, &firsts, lo, hi))));
                }
            }
            TheoremTag::StorBalanced | TheoremTag::GprojGflatFg => {
                for (mn, m) in &ring.modules {
                    for (nn, n) in ring.partners() {
                        let subject = format!("{mn}, {nn}");
                        jobs.push((ring, subject, Box::new(move || pair_instance(wb, tag, m, &n, lo, hi))));
                    }
                }
            }
            TheoremTag::StableDuality => {
                for (mn, m) in &ring.modules {
                    for (nn, n) in &ring.modules {
                        let subject = format!("{mn}, {nn}");
                        jobs.push((ring, subject, Box::new(move || duality_instance(wb, m, n, lo, hi))));
                    }
                }
            }
            TheoremTag::ArtBalance => {
                jobs.push((ring, "ring".into(), Box::new(move || art_balance_instance(wb, ring, gorenstein(), lo, hi))));
            }
            TheoremTag::VanishingGdim if commutative => {
                for (name, m) in &ring.modules {
                    jobs.push((ring, name.clone(), Box::new(move || vanishing_gdim_instance(wb, ring, m, lo, hi))));
                }
            }
            TheoremTag::Gor1 if commutative => {
                if gorenstein() {
                    for (name, m) in &ring.modules {
                        let r = vec![("R".to_string(), ring.regular_partner())];
                        jobs.push((ring, name.clone(), Box::new(move || gorenstein_module_instance(wb, m, &r, lo, hi))));
                    }
                } else {
                    jobs.push((ring, "ring".into(), Box::new(move || gor1_ring_instance(wb, ring, lo))));
                }
            }
            TheoremTag::FinitenessInjDims if commutative && local => {
                for (name, n) in &ring.modules {
                    jobs.push((ring, name.clone(), Box::new(move || btor_local_instance(wb, n, lo, hi))));
                }
            }
            TheoremTag::ThmGorenstein if commutative && local => {
                jobs.push((ring, "ring".into(), Box::new(move || thm_gorenstein_instance(wb, ring, gorenstein(), lo, hi))));
            }
            _ => {}
        }
    }
    let instances = jobs
        .par_iter()
        .map(|(ring, subject, job)| {
            let (verdict, detail) = match job()? {
                Outcome::Pass(d) => (Verdict::Pass, d),
                Outcome::Fail(d) => (Verdict::Fail, d),
                Outcome::Skip(d) => (Verdict::Skipped(d.clone()), d),
            };
            Ok(InstanceVerdict { ring: ring.name.clone(), subject: subject.clone(), verdict, detail })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoremReport { tag, lo, hi, instances })
}

/// `pd m < ∞ ⇔ Stor_0(m, D m) = 0`, and finite pd forces `Stor(m, -) = 0`.
fn finite_pd_instance(wb: &Workbench, m: &FdModule, partners: &[(String, FdModule)], tag: TheoremTag, lo: i64, hi: i64) -> Result<Outcome> {
    let dm = m.dual();
    let pd = wb.pd(m);
    if pd.is_finite() {
        let mut targets = vec![("D(m)".to_string(), dm.clone())];
        if tag == TheoremTag::Finitepd {
            targets.extend(partners.iter().cloned());
        }
        let (a, b) = if tag == TheoremTag::Finitepd { (lo, hi) } else { (0, 0) };
        return Ok(match vanishes_on(wb, m, &targets, a, b)? {
            None => Outcome::Pass(format!("pd = {pd}, Stor vanishes")),
            Some(w) => Outcome::Fail(format!("pd = {pd} but {w}")),
        });
    }
    let s0 = wb.stor(m, &dm, 0)?;
    match s0.dimension() {
        None => Ok(not_computable("Stor_0(m, D m)", &s0)),
        Some(0) => Ok(Outcome::Fail(format!("Stor_0(m, D m) = 0 but pd = {pd}"))),
        Some(d) if tag == TheoremTag::ArtinPd => {
            // No i ≥ 0 kills Stor_i(m, -) on the corpus either.
            for i in 0..=hi.max(0) {
                let mut hit = false;
                for (_, n) in partners.iter().chain(std::iter::once(&("D(m)".to_string(), dm.clone()))) {
                    if wb.stor(m, n, i)?.dimension().is_some_and(|x| x > 0) {
                        hit = true;
                        break;
                    }
                }
                if !hit {
                    return Ok(Outcome::Skip(format!("not computable: no corpus witness for Stor_{i}(m, -) ≠ 0")));
                }
            }
            Ok(Outcome::Pass(format!("pd = {pd}, Stor_0(m, D m) = {d}, Stor_i(m, -) ≠ 0 for 0 ≤ i ≤ {}", hi.max(0))))
        }
        Some(d) => Ok(Outcome::Pass(format!("pd = {pd}, Stor_0(m, D m) = {d}"))),
    }
}

/// `id n < ∞ ⇔ Stor_0(D n, n) = 0`, and finite id forces `Stor(-, n) = 0`.
fn artin_id_instance(wb: &Workbench, n: &FdModule, firsts: &[(String, FdModule)], lo: i64, hi: i64) -> Result<Outcome> {
    let dn = n.dual();
    let id = wb.id(n);
    if id.is_finite() {
        for (name, m) in firsts.iter().chain(std::iter::once(&("D(n)".to_string(), dn.clone()))) {
            for i in lo..=hi {
                if let Some(d) = tate_stor(wb, m, n, i)? {
                    if d != 0 {
                        return Ok(Outcome::Fail(format!("id = {id} but Stor_{i}({name}, n) = {d}")));
                    }
                }
            }
        }
        return Ok(Outcome::Pass(format!("id = {id}, Stor(-, n) vanishes")));
    }
    let s0 = wb.stor(&dn, n, 0)?;
    Ok(match s0.dimension() {
        None => not_computable("Stor_0(D n, n)", &s0),
        Some(0) => Outcome::Fail(format!("Stor_0(D n, n) = 0 but id = {id}")),
        Some(d) => Outcome::Pass(format!("id = {id}, Stor_0(D n, n) = {d}")),
    })
}

fn pair_instance(wb: &Workbench, tag: TheoremTag, m: &FdModule, n: &FdModule, lo: i64, hi: i64) -> Result<Outcome> {
    if tag == TheoremTag::StorBalanced {
        return Ok(match wb.balancedness_check(m, n, lo, hi) {
            Ok(r) if r.passed() => Outcome::Pass("Stor_i(m, n) = Stor°_i(n, m) on the range".into()),
            Ok(r) => Outcome::Fail(format!("{:?}", r.rows.iter().find(|x| x.verdict.is_fail()))),
            Err(Error::NotComputable(e)) => Outcome::Skip(format!("not computable: {e}")),
            Err(e) => return Err(e),
        });
    }
    // Ttor from m's complete resolution against Stor computed without it.
    let g = wb.gdim(m);
    if !g.dim().is_finite() {
        return Ok(Outcome::Skip(format!("not computable: gdim(m) = {}", g.dim())));
    }
    for i in lo..=hi {
        let ttor = wb.ttor(m, n, i)?;
        let s = wb.stor(m, n, i)?;
        let other = match s.strategy() {
            Some(Strategy::VanishByPd | Strategy::VanishById) => s,
            _ => wb.stor_opposite(m, n, i)?,
        };
        match other.dimension() {
            None => return Ok(not_computable("Stor without the complete resolution of m", &other)),
            Some(d) if d != ttor => return Ok(Outcome::Fail(format!("degree {i}: Ttor = {ttor}, Stor = {d}"))),
            Some(_) => {}
        }
    }
    Ok(Outcome::Pass("Stor_i(m, n) = Ttor_i(m, n) on the range".into()))
}

fn duality_instance(wb: &Workbench, m: &FdModule, n: &FdModule, lo: i64, hi: i64) -> Result<Outcome> {
    Ok(match wb.duality_check(m, n, lo, hi) {
        Ok(r) if r.passed() => Outcome::Pass("Stor_i(m, D n) = Sext^i(m, n) on the range".into()),
        Ok(r) => Outcome::Fail(format!("{:?}", r.rows.iter().find(|x| x.verdict.is_fail()))),
        Err(Error::NotComputable(e)) => Outcome::Skip(format!("not computable: {e}")),
        Err(e) => return Err(e),
    })
}

fn art_balance_instance(wb: &Workbench, ring: &CorpusRing, gorenstein: bool, lo: i64, hi: i64) -> Result<Outcome> {
    if !gorenstein {
        return Ok(Outcome::Skip(
            "not computable: without an Iwanaga-Gorenstein certificate balancedness needs Stor on uncertified pairs".into(),
        ));
    }
    for (mn, m) in &ring.modules {
        for (nn, n) in ring.partners() {
            match wb.balancedness_check(m, &n, lo, hi) {
                Ok(r) if r.passed() => {}
                Ok(_) => return Ok(Outcome::Fail(format!("({mn}, {nn}) is not balanced"))),
                Err(Error::NotComputable(e)) => {
                    return Ok(Outcome::Fail(format!("({mn}, {nn}) lacks G-dimension certificates over an Iwanaga-Gorenstein ring: {e}")))
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Outcome::Pass("Iwanaga-Gorenstein and every corpus pair is balanced".into()))
}

fn vanishing_gdim_instance(wb: &Workbench, ring: &CorpusRing, m: &FdModule, lo: i64, hi: i64) -> Result<Outcome> {
    let r = ring.regular_partner();
    let g = wb.gdim(m).dim();
    if g.is_finite() {
        let mut targets = vec![("R".to_string(), r)];
        targets.extend(ring.partners().into_iter().filter(|(_, n)| wb.pd(n).is_finite()));
        return Ok(match vanishes_on(wb, m, &targets, lo, hi)? {
            None => Outcome::Pass(format!("gdim = {g}, Stor(m, N) = 0 for R and every N of finite pd")),
            Some(w) => Outcome::Fail(format!("gdim = {g} but {w}")),
        });
    }
    let mut zeros = true;
    for i in lo..=hi {
        let s = wb.stor(m, &r, i)?;
        match s.dimension() {
            None => return Ok(not_computable("Stor(m, R)", &s)),
            Some(0) => {}
            Some(_) => zeros = false,
        }
    }
    Ok(if zeros {
        Outcome::Fail(format!("Stor(m, R) = 0 on the range but gdim = {g}"))
    } else {
        Outcome::Pass(format!("gdim = {g} and Stor(m, R) ≠ 0"))
    })
}

fn gorenstein_module_instance(wb: &Workbench, m: &FdModule, r: &[(String, FdModule)], lo: i64, hi: i64) -> Result<Outcome> {
    let g = wb.gdim(m).dim();
    if !g.is_finite() {
        return Ok(Outcome::Fail(format!("Gorenstein ring but gdim = {g}")));
    }
    Ok(match vanishes_on(wb, m, r, lo, hi)? {
        None => Outcome::Pass("Stor(m, R) = 0 on the range".into()),
        Some(w) => Outcome::Fail(w),
    })
}

fn gor1_ring_instance(wb: &Workbench, ring: &CorpusRing, lo: i64) -> Result<Outcome> {
    let r = ring.regular_partner();
    let mut reasons = Vec::new();
    for (name, m) in &ring.modules {
        for i in lo.min(-1)..0 {
            let s = wb.stor(m, &r, i)?;
            match &s.value {
                StorValue::Computed { dimension, .. } if *dimension > 0 => {
                    return Ok(Outcome::Pass(format!("not Gorenstein: Stor_{i}({name}, R) = {dimension}")));
                }
                StorValue::NotComputable { reason } => {
                    reasons.push(format!("{name}: {reason}"));
                    break;
                }
                _ => {}
            }
        }
    }
    Ok(Outcome::Skip(format!("not computable: no Gorenstein certificate and no computable witness; {}", reasons.join(" | "))))
}

/// The product formula for `bTor_i(k, n)` against bounded totalization where available.
fn btor_local_instance(wb: &Workbench, n: &FdModule, lo: i64, hi: i64) -> Result<Outcome> {
    let k = residue_field(n.algebra())?;
    let window = wb.bounds().pd;
    let mut checked = 0;
    let mut unchecked = Vec::new();
    for i in lo..=hi {
        let formula = match wb.btor_local(n, i, window) {
            Ok(v) => v,
            Err(Error::WindowInsufficient { .. }) => {
                unchecked.push(i);
                continue;
            }
            Err(e) => return Err(e),
        };
        match wb.btor_bounded(&k, n, i)? {
            Some(d) if BtorValue::Finite(d) == formula => checked += 1,
            Some(d) => return Ok(Outcome::Fail(format!("degree {i}: formula {formula}, totalization {d}"))),
            None => unchecked.push(i),
        }
    }
    if checked == 0 {
        return Ok(Outcome::Skip(format!(
            "not computable: pd(k) and id(n) are not finite within bound {window}, so bTor has no independent route"
        )));
    }
    Ok(Outcome::Pass(format!("{checked} degrees agree; unchecked degrees {unchecked:?}")))
}

fn thm_gorenstein_instance(wb: &Workbench, ring: &CorpusRing, gorenstein: bool, lo: i64, hi: i64) -> Result<Outcome> {
    let k = residue_field(&ring.algebra)?;
    let r = ring.regular_partner();
    let report = classify(&ring.algebra, wb.bounds().pd);
    if !gorenstein {
        if report.iwanaga_gorenstein == Flag::True {
            return Ok(Outcome::Fail("classifier and engine disagree on the Gorenstein certificate".into()));
        }
        let s = wb.stor(&k, &r, 0)?;
        return Ok(match s.dimension() {
            None => not_computable("Stor_0(k, R)", &s),
            Some(d) => Outcome::Fail(format!("Stor_0(k, R) = {d} is finite but no Gorenstein certificate")),
        });
    }
    if report.iwanaga_gorenstein != Flag::True {
        return Ok(Outcome::Fail("classifier and engine disagree on the Gorenstein certificate".into()));
    }
    let s = wb.stor(&k, &r, 0)?;
    let Some(d) = s.dimension() else {
        return Ok(Outcome::Fail("Gorenstein but Stor_0(k, R) is not computable".into()));
    };
    let targets = vec![("R".to_string(), r)];
    for (name, m) in &ring.modules {
        if let Some(w) = vanishes_on(wb, m, &targets, lo, hi)? {
            return Ok(Outcome::Fail(format!("Gorenstein but {w} for {name}")));
        }
    }
    Ok(Outcome::Pass(format!("Gorenstein, Stor_0(k, R) = {d}, Stor(-, R) = 0 on the corpus")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let f = classify(&Algebra::field(5).unwrap(), 4);
        assert_eq!(f.regular_artinian, Flag::True);
        assert_eq!((f.id_left, f.id_right), (DimCertificate::Finite(0), DimCertificate::Finite(0)));
        let d = classify(&Algebra::truncated_polynomial(2, 2).unwrap(), 4);
        assert_eq!(d.local, Flag::True);
        assert!(d.self_injective);
        assert_eq!(d.iwanaga_gorenstein, Flag::True);
        let b = classify(&Algebra::square_zero(2, 2).unwrap(), 4);
        assert_eq!(b.local, Flag::True);
        assert!(!b.self_injective);
        assert_eq!(b.id_left, DimCertificate::AtLeast(5));
        assert_eq!(b.iwanaga_gorenstein, Flag::Unknown);
        let u = classify(&Algebra::upper_triangular(2).unwrap(), 4);
        assert_eq!(u.local, Flag::False);
        assert_eq!(u.id_left, DimCertificate::Finite(1));
    }

    #[test]
    fn depth_profiles() {
        let wb = Workbench::default();
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        let p = depth_and_id_via_ext(&wb, &k, 4).unwrap();
        assert_eq!(p.depth, Some(0));
        let r = depth_and_id_via_ext(&wb, &FdModule::regular(&a), 4).unwrap();
        assert_eq!(r.profile, vec![1, 0, 0, 0, 0]);
        assert_eq!(r.id, DimCertificate::Finite(0));
        let b = Algebra::square_zero(2, 2).unwrap();
        let rb = depth_and_id_via_ext(&wb, &FdModule::regular(&b), 4).unwrap();
        assert!(rb.profile.iter().all(|&e| e > 0));
    }

    #[test]
    fn tags_roundtrip() {
        for t in TheoremTag::ALL {
            assert_eq!(t.name().parse::<TheoremTag>().unwrap(), t);
        }
        assert!(matches!("nope".parse::<TheoremTag>(), Err(Error::UnknownTag(_))));
    }
}
