//! Stable homology: `Stor` through certificate-dispatched strategies, restricted
//! `bTor`, and the balancedness, duality and exact-sequence checks.
//!
//! `Stor` is never read off a totalization. It is either forced to vanish by a
//! finite projective or injective dimension, or computed as the homology of
//! `T ⊗ N` for a complete resolution `T` of the first argument.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::tensor_complex;
use crate::error::{Error, Result};
use crate::gorenstein::{complete_resolution_with, gdim_certificate_with, CompleteResolution, GdimCertificate};
use crate::module::FdModule;
use crate::resolution::{dual_of_projective, ext_with, tor_with, DimCertificate, ProjectiveResolver};

/// Search bounds shared by every computation of a workbench.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Longest resolution searched for a finite projective or injective dimension.
    pub pd: usize,
    /// Largest syzygy index tried as a totally reflexive witness.
    pub search: usize,
    /// Ext degrees checked for total reflexivity.
    pub ext: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { pd: 6, search: 3, ext: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    VanishByPd,
    VanishById,
    TateResolution,
    OppositeBalance,
}

/// A certificate consulted while answering a query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    /// `pd(m)`, `id(n)`, `gdim(m)` or `gdim(n)`.
    pub subject: String,
    pub certificate: DimCertificate,
    pub bound: usize,
}

impl std::fmt::Display for CertificateRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {} (bound {})", self.subject, self.certificate, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StorValue {
    Computed { dimension: usize, strategy: Strategy },
    NotComputable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorAnswer {
    pub degree: i64,
    pub value: StorValue,
    pub certificates: Vec<CertificateRecord>,
}

impl StorAnswer {
    pub fn dimension(&self) -> Option<usize> {
        match self.value {
            StorValue::Computed { dimension, .. } => Some(dimension),
            StorValue::NotComputable { .. } => None,
        }
    }

    pub fn strategy(&self) -> Option<Strategy> {
        match self.value {
            StorValue::Computed { strategy, .. } => Some(strategy),
            StorValue::NotComputable { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dimension", rename_all = "snake_case")]
pub enum BtorValue {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for BtorValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BtorValue::Finite(n) => write!(f, "{n}"),
            BtorValue::Infinite => write!(f, "Infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }

    fn compare(left: usize, right: usize) -> Verdict {
        if left == right {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One degree of a two-sided comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub degree: i64,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub rows: Vec<DegreeCheck>,
    pub certificates: Vec<CertificateRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.verdict.is_fail())
    }
}

/// One degree of the `Stor → Tor → bTor → Stor` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub degree: i64,
    pub tor: usize,
    pub stor: StorAnswer,
    pub btor: Option<BtorValue>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub lo: i64,
    pub hi: i64,
    pub rows: Vec<TableRow>,
}

impl HomologyTable {
    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.verdict.is_fail())
    }
}

/// Caches resolutions and certificates per module so that repeated queries share work.
pub struct Workbench {
    bounds: Bounds,
    resolvers: Mutex<HashMap<FdModule, Arc<ProjectiveResolver>>>,
    gdims: Mutex<HashMap<FdModule, GdimCertificate>>,
    completes: Mutex<HashMap<FdModule, CompleteResolution>>,
}

impl Default for Workbench {
    fn default() -> Self {
        Workbench::new(Bounds::default())
    }
}

fn check_pair(m: &FdModule, n: &FdModule) -> Result<()> {
    if *m.algebra() != n.algebra().opposite() {
        return Err(Error::AlgebraMismatch("the first argument must be a module over the opposite of the second's algebra".into()));
    }
    Ok(())
}

impl Workbench {
    pub fn new(bounds: Bounds) -> Self {
        Workbench { bounds, resolvers: Mutex::default(), gdims: Mutex::default(), completes: Mutex::default() }
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn resolver(&self, m: &FdModule) -> Arc<ProjectiveResolver> {
        let mut cache = self.resolvers.lock().expect("resolver cache");
        cache.entry(m.clone()).or_insert_with(|| Arc::new(ProjectiveResolver::new(m))).clone()
    }

    pub fn pd(&self, m: &FdModule) -> DimCertificate {
        self.resolver(m).pd_certificate(self.bounds.pd)
    }

    pub fn id(&self, n: &FdModule) -> DimCertificate {
        self.pd(&n.dual())
    }

    pub fn gdim(&self, m: &FdModule) -> GdimCertificate {
        if let Some(c) = self.gdims.lock().expect("gdim cache").get(m) {
            return c.clone();
        }
        let c = gdim_certificate_with(&self.resolver(m), self.bounds.search, self.bounds.ext);
        self.gdims.lock().expect("gdim cache").insert(m.clone(), c.clone());
        c
    }

    /// A complete resolution of `m` covering at least `[lo, hi]`.
    pub fn complete(&self, m: &FdModule, lo: i64, hi: i64) -> Result<CompleteResolution> {
        if let Some(t) = self.completes.lock().expect("complete cache").get(m) {
            if t.complex().lo() <= lo && hi <= t.complex().hi() {
                return Ok(t.clone());
            }
        }
        let cert = self.gdim(m);
        let t = complete_resolution_with(self.resolver(m), &cert, lo, hi)?;
        let mut cache = self.completes.lock().expect("complete cache");
        let keep = cache.get(m).is_none_or(|old| old.complex().hi() - old.complex().lo() < hi - lo);
        if keep {
            cache.insert(m.clone(), t.clone());
        }
        Ok(t)
    }

    fn record(&self, subject: &str, certificate: DimCertificate, bound: usize) -> CertificateRecord {
        CertificateRecord { subject: subject.into(), certificate, bound }
    }

    fn gdim_record(&self, subject: &str, m: &FdModule) -> (GdimCertificate, CertificateRecord) {
        let g = self.gdim(m);
        let r = self.record(subject, g.dim(), self.bounds.search);
        (g, r)
    }

    pub fn tor(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<usize> {
        check_pair(m, n)?;
        tor_with(&self.resolver(m), n, i)
    }

    pub fn ext(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<usize> {
        if m.algebra() != n.algebra() {
            return Err(Error::AlgebraMismatch("Ext needs modules over the same algebra".into()));
        }
        ext_with(&self.resolver(m), n, i)
    }

    /// `H_i(T ⊗ N)` for a complete resolution `T` of `m`; `m` needs a finite G-dimension.
    pub fn ttor(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<usize> {
        check_pair(m, n)?;
        self.complete(m, i - 1, i + 1)?.tate_homology(n, i)
    }

    /// `H^i(Hom(T, N))` for a complete resolution `T` of `m`.
    pub fn sext(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<usize> {
        if m.algebra() != n.algebra() {
            return Err(Error::AlgebraMismatch("stable cohomology needs modules over the same algebra".into()));
        }
        self.complete(m, i - 1, i + 1)?.stable_cohomology(n, i)
    }

    /// `Stor_i(m, n)` for `m` over `A°` and `n` over `A`.
    pub fn stor(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<StorAnswer> {
        check_pair(m, n)?;
        let mut certificates = Vec::new();
        let done = |dimension, strategy, certificates| StorAnswer { degree: i, value: StorValue::Computed { dimension, strategy }, certificates };
        let pd = self.pd(m);
        certificates.push(self.record("pd(m)", pd, self.bounds.pd));
        if pd.is_finite() {
            return Ok(done(0, Strategy::VanishByPd, certificates));
        }
        let id = self.id(n);
        certificates.push(self.record("id(n)", id, self.bounds.pd));
        if id.is_finite() {
            return Ok(done(0, Strategy::VanishById, certificates));
        }
        let (g, r) = self.gdim_record("gdim(m)", m);
        certificates.push(r);
        if g.dim().is_finite() {
            let dim = self.complete(m, i - 1, i + 1)?.tate_homology(n, i)?;
            return Ok(done(dim, Strategy::TateResolution, certificates));
        }
        let reason = certificates.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        Ok(StorAnswer { degree: i, value: StorValue::NotComputable { reason }, certificates })
    }

    /// `Stor_i(m, n)` computed as `Stor_i` over the opposite algebra of `(n, m)`.
    ///
    /// Only sound when both arguments have finite G-dimension; otherwise the
    /// answer is `NotComputable`.
    pub fn stor_opposite(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<StorAnswer> {
        check_pair(m, n)?;
        let (gm, rm) = self.gdim_record("gdim(m)", m);
        let (gn, rn) = self.gdim_record("gdim(n)", n);
        let certificates = vec![rm, rn];
        if !(gm.dim().is_finite() && gn.dim().is_finite()) {
            let reason = certificates.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            return Ok(StorAnswer { degree: i, value: StorValue::NotComputable { reason }, certificates });
        }
        let dimension = self.complete(n, i - 1, i + 1)?.tate_homology(m, i)?;
        Ok(StorAnswer { degree: i, value: StorValue::Computed { dimension, strategy: Strategy::OppositeBalance }, certificates })
    }

    /// `bTor_i(m, n)` when one side has a finite certificate, so that the
    /// product totalization is a finite sum in every degree.
    pub fn btor_bounded(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<Option<usize>> {
        check_pair(m, n)?;
        let injective = |len: usize| dual_of_projective(&self.resolver(&n.dual()), n, len).complex;
        if let Some(e) = self.id(n).finite() {
            let top = (i + 1 + e as i64).max(0);
            let p = self.resolver(m).window(0, top)?;
            return Ok(Some(tensor_complex(&p, &injective(e))?.homology_dim(i)?));
        }
        if let Some(d) = self.pd(m).finite() {
            let p = self.resolver(m).complex(d);
            let len = (d as i64 - i + 1).max(0) as usize;
            return Ok(Some(tensor_complex(&p, &injective(len))?.homology_dim(i)?));
        }
        Ok(None)
    }

    /// `bTor_i(k, n)` over a commutative local algebra with residue field `k = GF(p)`:
    /// `Σ_j dim Ext^j(k, A) · dim Ext^{j-i}(k, n)`.
    ///
    /// Returns `Infinite` when neither `A` nor `n` has finite injective dimension
    /// within the window and the factor at the window edge is nonzero.
    pub fn btor_local(&self, n: &FdModule, i: i64, window: usize) -> Result<BtorValue> {
        let a = n.algebra();
        let k = residue_field(a)?;
        let r = FdModule::regular(a);
        let pk = self.resolver(&k);
        let e = |x: &FdModule, j: i64| ext_with(&pk, x, j);
        let jmin = i.max(0);
        let upper = match (self.resolver(&r.dual()).pd_certificate(window).finite(), self.id_within(n, window).finite()) {
            (Some(d), _) => d as i64,
            (None, Some(f)) => i + f as i64,
            (None, None) => {
                // The last factor with both Ext degrees inside the window.
                let w = window as i64 + i.min(0);
                if w >= jmin && e(&r, w)? * e(n, w - i)? > 0 {
                    return Ok(BtorValue::Infinite);
                }
                return Err(Error::WindowInsufficient { degree: i, lo: 0, hi: window as i64 });
            }
        };
        let mut total = 0;
        for j in jmin..=upper {
            let er = e(&r, j)?;
            if er > 0 {
                total += er * e(n, j - i)?;
            }
        }
        Ok(BtorValue::Finite(total))
    }

    fn id_within(&self, n: &FdModule, bound: usize) -> DimCertificate {
        self.resolver(&n.dual()).pd_certificate(bound)
    }

    /// `bTor_i(m, n)` by bounded totalization, or by the local formula when `m` is the residue field.
    pub fn btor(&self, m: &FdModule, n: &FdModule, i: i64) -> Result<BtorValue> {
        if let Some(d) = self.btor_bounded(m, n, i)? {
            return Ok(BtorValue::Finite(d));
        }
        if m.dim() == 1 && residue_field(n.algebra()).is_ok() {
            return self.btor_local(n, i, self.bounds.pd);
        }
        Err(Error::NotComputable(format!(
            "bTor needs pd(m) or id(n) finite within bound {}, or m the residue field of a local algebra",
            self.bounds.pd
        )))
    }

    fn double_certificates(&self, m: &FdModule, n: &FdModule) -> Result<Vec<CertificateRecord>> {
        let (gm, rm) = self.gdim_record("gdim(m)", m);
        let (gn, rn) = self.gdim_record("gdim(n)", n);
        if !(gm.dim().is_finite() && gn.dim().is_finite()) {
            return Err(Error::NotComputable(format!("{rm}; {rn}")));
        }
        Ok(vec![rm, rn])
    }

    /// `dim Stor_i(m, n) = dim Stor°_i(n, m)` on `[lo, hi]`, both from complete resolutions.
    pub fn balancedness_check(&self, m: &FdModule, n: &FdModule, lo: i64, hi: i64) -> Result<CheckReport> {
        check_pair(m, n)?;
        let certificates = self.double_certificates(m, n)?;
        self.complete(m, lo - 1, hi + 1)?;
        self.complete(n, lo - 1, hi + 1)?;
        let rows = self.per_degree(lo, hi, |i| {
            let left = self.complete(m, i - 1, i + 1)?.tate_homology(n, i)?;
            let right = self.complete(n, i - 1, i + 1)?.tate_homology(m, i)?;
            Ok((left, right))
        })?;
        Ok(CheckReport { check: "balance".into(), rows, certificates })
    }

    /// `dim Stor_i(m, D n′) = dim Sext^i(m, n′)` on `[lo, hi]`.
    pub fn duality_check(&self, m: &FdModule, n_prime: &FdModule, lo: i64, hi: i64) -> Result<CheckReport> {
        if m.algebra() != n_prime.algebra() {
            return Err(Error::AlgebraMismatch("duality needs both modules over the same algebra".into()));
        }
        let (g, r) = self.gdim_record("gdim(m)", m);
        if !g.dim().is_finite() {
            return Err(Error::NotComputable(r.to_string()));
        }
        let dn = n_prime.dual();
        let t = self.complete(m, lo - 1, hi + 1)?;
        let rows = self.per_degree(lo, hi, |i| {
            let stor = self.stor(m, &dn, i)?.dimension().ok_or_else(|| Error::NotComputable("Stor side".into()))?;
            Ok((stor, t.stable_cohomology(n_prime, i)?))
        })?;
        Ok(CheckReport { check: "duality".into(), rows, certificates: vec![r] })
    }

    /// `Ttor_i(m, n)` from the complete resolution of `m` against `Stor_i` computed from that of `n`.
    pub fn stor_vs_ttor_check(&self, m: &FdModule, n: &FdModule, lo: i64, hi: i64) -> Result<CheckReport> {
        check_pair(m, n)?;
        let certificates = self.double_certificates(m, n)?;
        self.complete(m, lo - 1, hi + 1)?;
        self.complete(n, lo - 1, hi + 1)?;
        let rows = self.per_degree(lo, hi, |i| {
            let ttor = self.ttor(m, n, i)?;
            let stor = self.stor_opposite(m, n, i)?.dimension().ok_or_else(|| Error::NotComputable("opposite side".into()))?;
            Ok((ttor, stor))
        })?;
        Ok(CheckReport { check: "stor_vs_ttor".into(), rows, certificates })
    }

    fn per_degree(&self, lo: i64, hi: i64, f: impl Fn(i64) -> Result<(usize, usize)> + Sync) -> Result<Vec<DegreeCheck>> {
        (lo..=hi)
            .into_par_iter()
            .map(|i| {
                let (l, r) = f(i)?;
                Ok(DegreeCheck { degree: i, left: Some(l), right: Some(r), verdict: Verdict::compare(l, r) })
            })
            .collect()
    }

    /// Rank conditions forced by the exact sequence `Stor_i → Tor_i → bTor_i → Stor_{i-1}`.
    ///
    /// Where `Stor` vanishes in both adjacent degrees the check is `Tor_i = bTor_i`.
    pub fn exact_sequence_consistency(&self, m: &FdModule, n: &FdModule, lo: i64, hi: i64) -> Result<HomologyTable> {
        check_pair(m, n)?;
        let rows = (lo..=hi)
            .into_par_iter()
            .map(|i| {
                let tor = self.tor(m, n, i)?;
                let stor = self.stor(m, n, i)?;
                let prev = self.stor(m, n, i - 1)?;
                let btor = match self.btor(m, n, i) {
                    Ok(b) => Some(b),
                    Err(Error::NotComputable(_) | Error::WindowInsufficient { .. } | Error::Precondition(_)) => None,
                    Err(e) => return Err(e),
                };
                let verdict = match (stor.dimension(), prev.dimension(), btor) {
                    (Some(s), Some(s1), Some(b)) => sequence_verdict(tor, s, s1, b),
                    (None, _, _) | (_, None, _) => Verdict::Skipped("Stor is not computable".into()),
                    (_, _, None) => Verdict::Skipped("bTor is not computable".into()),
                };
                Ok(TableRow { degree: i, tor, stor, btor, verdict })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologyTable { lo, hi, rows })
    }

    /// `sup{i : Tor_i(m, E) ≠ 0}` for `E = D(A)`, with `A` the algebra `m` is over.
    ///
    /// `Finite` needs a certificate that the scan is complete: a finite projective
    /// dimension of `m` or a finite flat dimension of `E`. Otherwise the last
    /// nonvanishing degree found is only a lower bound.
    pub fn copure_flat_dimension(&self, m: &FdModule) -> Result<DimCertificate> {
        let e = FdModule::regular(m.algebra()).dual();
        let stop = [self.pd(m).finite(), self.pd(&e).finite()].into_iter().flatten().min();
        let scan = stop.unwrap_or(self.bounds.pd);
        let pm = self.resolver(m);
        let mut last = 0;
        for i in 0..=scan {
            if tor_with(&pm, &e, i as i64)? > 0 {
                last = i;
            }
        }
        Ok(match stop {
            Some(_) => DimCertificate::Finite(last),
            None => DimCertificate::AtLeast(last),
        })
    }
}

fn sequence_verdict(tor: usize, stor: usize, stor_prev: usize, btor: BtorValue) -> Verdict {
    let ok = match btor {
        BtorValue::Infinite => false,
        BtorValue::Finite(b) if stor == 0 && stor_prev == 0 => tor == b,
        BtorValue::Finite(b) => tor <= stor + b && b <= tor + stor_prev,
    };
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// The residue field of a commutative local algebra whose residue field is the prime field.
pub fn residue_field(a: &crate::algebra::Algebra) -> Result<FdModule> {
    if !a.is_commutative() {
        return Err(Error::Precondition("local formulas need a commutative algebra".into()));
    }
    if a.is_local() != Some(true) {
        return Err(Error::Precondition("the algebra is not certified local".into()));
    }
    let k = FdModule::top_of_regular(a)?;
    if k.dim() != 1 {
        return Err(Error::Precondition("the residue field is larger than the prime field".into()));
    }
    Ok(k)
}
