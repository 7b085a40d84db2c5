//! Total reflexivity, G-dimension, complete resolutions, Tate homology and stable cohomology.
//!
//! Everything is relative to the algebra `B` of the module being resolved. For
//! `G = Ω_n M` totally reflexive, the complete resolution is `P_j` in degrees
//! `j ≥ n` and `Hom(Q_k, B°)` in degree `n - 1 - k`, where `Q → G*` is a
//! projective resolution over `B°`. The two halves meet through
//! `P_n → G → G** → Q_0*`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{hom_complex, tensor_complex, Boundedness, WindowComplex};
use crate::error::{Error, Result};
use crate::hom::{hom_space, regular_dual, HomSpace};
use crate::linalg::FpMatrix;
use crate::module::FdModule;
use crate::resolution::{ext_with, DimCertificate, ProjectiveResolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "failure", content = "degree")]
pub enum ReflexivityFailure {
    /// `Ext^i(G, B) ≠ 0`.
    Ext(usize),
    /// `Ext^i(G*, B°) ≠ 0`.
    DualExt(usize),
    /// `G → G**` is not bijective.
    Biduality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexivityReport {
    pub ext_bound: usize,
    pub failure: Option<ReflexivityFailure>,
}

impl ReflexivityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// The biduality map `G → G**`, `x ↦ (φ ↦ φ(x))`, with the spaces it is expressed in.
pub fn biduality(g: &FdModule) -> (FpMatrix, HomSpace, HomSpace) {
    let (gs, h1) = regular_dual(g);
    let (_, h2) = regular_dual(&gs);
    let p = g.modulus();
    let d = g.algebra().dim();
    let cols: Vec<Vec<u32>> = (0..g.dim())
        .map(|c| {
            let ex: Vec<Vec<u32>> = h1.basis().iter().map(|phi| phi.column(c)).collect();
            h2.coordinates_unchecked(&FpMatrix::from_columns(p, d, &ex))
        })
        .collect();
    (FpMatrix::from_columns(p, h2.dim(), &cols), h1, h2)
}

pub fn is_totally_reflexive(g: &FdModule, ext_bound: usize) -> ReflexivityReport {
    reflexivity_of_syzygy(&ProjectiveResolver::new(g), 0, ext_bound)
}

/// Total reflexivity of `Ω_n M`, reading `Ext^i(Ω_n M, B) = Ext^{n+i}(M, B)` off the resolution of `M`.
fn reflexivity_of_syzygy(pm: &ProjectiveResolver, n: usize, ext_bound: usize) -> ReflexivityReport {
    let fail = |f| ReflexivityReport { ext_bound, failure: Some(f) };
    let g = pm.syzygy(n);
    if g.is_projective() {
        return ReflexivityReport { ext_bound, failure: None };
    }
    let b = FdModule::regular(g.algebra());
    for i in 1..=ext_bound {
        if ext_with(pm, &b, (n + i) as i64).expect("window grown on demand") != 0 {
            return fail(ReflexivityFailure::Ext(i));
        }
    }
    let (gs, _) = regular_dual(&g);
    let bo = FdModule::regular(gs.algebra());
    let pgs = ProjectiveResolver::new(&gs);
    for i in 1..=ext_bound {
        if ext_with(&pgs, &bo, i as i64).expect("window grown on demand") != 0 {
            return fail(ReflexivityFailure::DualExt(i));
        }
    }
    let (ev, _, _) = biduality(&g);
    if ev.rows() != ev.cols() || ev.rank() != ev.cols() {
        return fail(ReflexivityFailure::Biduality);
    }
    ReflexivityReport { ext_bound, failure: None }
}

#[derive(Clone, Debug)]
pub enum GdimCertificate {
    /// `Ω_n M` is totally reflexive.
    Finite { n: usize, witness: FdModule, report: ReflexivityReport },
    AtLeast(usize),
}

impl GdimCertificate {
    pub fn dim(&self) -> DimCertificate {
        match self {
            GdimCertificate::Finite { n, .. } => DimCertificate::Finite(*n),
            GdimCertificate::AtLeast(b) => DimCertificate::AtLeast(*b),
        }
    }
}

pub fn gdim_certificate_with(pm: &ProjectiveResolver, search_bound: usize, ext_bound: usize) -> GdimCertificate {
    for n in 0..=search_bound {
        let report = reflexivity_of_syzygy(pm, n, ext_bound);
        if report.passed() {
            return GdimCertificate::Finite { n, witness: pm.syzygy(n), report };
        }
    }
    GdimCertificate::AtLeast(search_bound + 1)
}

pub fn gdim_certificate(m: &FdModule, search_bound: usize, ext_bound: usize) -> GdimCertificate {
    gdim_certificate_with(&ProjectiveResolver::new(m), search_bound, ext_bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalAcyclicity {
    pub lo: i64,
    pub hi: i64,
    pub acyclic: bool,
    pub hom_dual_acyclic: bool,
    pub injective_tensor_acyclic: bool,
}

impl TotalAcyclicity {
    pub fn passed(&self) -> bool {
        self.acyclic && self.hom_dual_acyclic && self.injective_tensor_acyclic
    }
}

/// A complete resolution of `M` materialized on a window.
#[derive(Clone, Debug)]
pub struct CompleteResolution {
    module: FdModule,
    coincidence: usize,
    complex: WindowComplex,
    verification: TotalAcyclicity,
    p: Arc<ProjectiveResolver>,
    q: Option<Arc<ProjectiveResolver>>,
}

impl CompleteResolution {
    pub fn module(&self) -> &FdModule {
        &self.module
    }

    /// `n` with `T_j = P_j` for `j ≥ n`.
    pub fn coincidence(&self) -> usize {
        self.coincidence
    }

    pub fn complex(&self) -> &WindowComplex {
        &self.complex
    }

    pub fn verification(&self) -> TotalAcyclicity {
        self.verification
    }

    /// The same complete resolution on a larger window.
    pub fn widen(&self, lo: i64, hi: i64) -> Result<CompleteResolution> {
        build(&self.module, self.coincidence, self.p.clone(), self.q.clone(), lo.min(self.complex.lo()), hi.max(self.complex.hi()))
    }

    fn check_window(&self, i: i64) -> Result<()> {
        if self.complex.tag() == Boundedness::Bounded {
            return Ok(());
        }
        if i - 1 < self.complex.lo() || i + 1 > self.complex.hi() {
            return Err(Error::WindowInsufficient { degree: i, lo: self.complex.lo(), hi: self.complex.hi() });
        }
        Ok(())
    }

    /// `dim H_i(T ⊗ N)` for `N` over the opposite algebra.
    pub fn tate_homology(&self, n: &FdModule, i: i64) -> Result<usize> {
        self.check_window(i)?;
        let t = self.local_window(i)?;
        tensor_complex(&t, &WindowComplex::concentrated(n, 0))?.homology_dim(i)
    }

    /// `dim H_{-i}(Hom(T, N))` for `N` over the same algebra.
    pub fn stable_cohomology(&self, n: &FdModule, i: i64) -> Result<usize> {
        self.check_window(i)?;
        let t = self.local_window(i)?;
        hom_complex(&t, &WindowComplex::concentrated(n, 0))?.homology_dim(-i)
    }

    fn local_window(&self, i: i64) -> Result<WindowComplex> {
        if self.complex.tag() == Boundedness::Bounded {
            return Ok(self.complex.clone());
        }
        self.complex.restrict(i - 1, i + 1)
    }
}

/// Splices the resolution of `M` with the dual of a resolution of `G*` and verifies the result.
pub fn complete_resolution(m: &FdModule, cert: &GdimCertificate, lo: i64, hi: i64) -> Result<CompleteResolution> {
    complete_resolution_with(Arc::new(ProjectiveResolver::new(m)), cert, lo, hi)
}

pub fn complete_resolution_with(p: Arc<ProjectiveResolver>, cert: &GdimCertificate, lo: i64, hi: i64) -> Result<CompleteResolution> {
    let GdimCertificate::Finite { n, witness, .. } = cert else {
        return Err(Error::NotComputable("a complete resolution needs a finite G-dimension certificate".into()));
    };
    if lo > hi {
        return Err(Error::Dimension(format!("empty window [{lo}, {hi}]")));
    }
    let q = if witness.is_projective() { None } else { Some(Arc::new(ProjectiveResolver::new(&regular_dual(witness).0))) };
    build(&p.module().clone(), *n, p, q, lo, hi)
}

fn build(
    m: &FdModule,
    n: usize,
    p: Arc<ProjectiveResolver>,
    q: Option<Arc<ProjectiveResolver>>,
    lo: i64,
    hi: i64,
) -> Result<CompleteResolution> {
    let alg = m.algebra().clone();
    let Some(q) = q else {
        // A projective syzygy: the complete resolution is contractible, take it to be zero.
        let complex = WindowComplex::zero(&alg);
        let verification = TotalAcyclicity { lo, hi, acyclic: true, hom_dual_acyclic: true, injective_tensor_acyclic: true };
        return Ok(CompleteResolution { module: m.clone(), coincidence: n, complex, verification, p, q: None });
    };
    let ni = n as i64;
    let pm = m.modulus();
    let g = p.syzygy(n);
    let (_, h1) = regular_dual(&g);
    let bo = FdModule::regular(&alg.opposite());
    // Hom(Q_k, B°) for the negative side.
    let depth = (ni - 1 - lo).max(0) as usize;
    let qc = q.complex(depth + 1);
    let qdual: Vec<HomSpace> = (0..=depth as i64 + 1)
        .map(|k| hom_space(&qc.term(k).unwrap_or_else(|_| FdModule::zero(qc.algebra())), &bo))
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for d in lo..=hi {
        let term = if d >= ni {
            p.term(d as usize)
        } else {
            let k = (ni - 1 - d) as usize;
            qdual[k].regular_dual_module()
        };
        terms.push(term);
        if d == lo {
            continue;
        }
        let dm = if d > ni {
            p.complex(d as usize).diff(d)?
        } else if d == ni {
            splice(&p, &q, &h1, &qdual[0], n)?
        } else {
            // Q_k* → Q_{k+1}*, φ ↦ φ ∘ ∂_{k+1}.
            let k = (ni - d) as usize;
            let dq = qc.diff(k as i64)?;
            qdual[k - 1].induced(&dq, &FpMatrix::identity(pm, bo.dim()), &qdual[k])
        };
        diffs.push(dm);
    }
    let complex = WindowComplex::new(&alg, lo, terms, diffs, Boundedness::WindowOnly)
        .map_err(|e| Error::ConstructionInvariant(format!("spliced complex is invalid: {e}")))?;
    let verification = verify(&complex)?;
    if !verification.passed() {
        return Err(Error::ConstructionInvariant(format!("complete resolution fails verification: {verification:?}")));
    }
    Ok(CompleteResolution { module: m.clone(), coincidence: n, complex, verification, p, q: Some(q) })
}

/// `P_n → G → G** → Q_0*`: `y ↦ (ev(π y)) ∘ ε`.
fn splice(p: &ProjectiveResolver, q: &ProjectiveResolver, h1: &HomSpace, q0dual: &HomSpace, n: usize) -> Result<FpMatrix> {
    let pm = p.module().modulus();
    let pi = p.cover(n);
    let eps = q.augmentation();
    let d = p.module().algebra().dim();
    let cols: Vec<Vec<u32>> = (0..pi.source().dim())
        .map(|c| {
            let x = pi.matrix().column(c);
            let ex: Vec<Vec<u32>> = h1.basis().iter().map(|phi| phi.mul_vec(&x)).collect();
            let ev = FpMatrix::from_columns(pm, d, &ex);
            q0dual.coordinates_unchecked(&ev.mul_unchecked(eps.matrix()))
        })
        .collect();
    Ok(FpMatrix::from_columns(pm, q0dual.dim(), &cols))
}

fn verify(t: &WindowComplex) -> Result<TotalAcyclicity> {
    let b = FdModule::regular(t.algebra());
    let e = b.dual();
    let acyclic = t.is_acyclic_on_window()?;
    let hom_dual_acyclic = hom_complex(t, &WindowComplex::concentrated(&b, 0))?.is_acyclic_on_window()?;
    let injective_tensor_acyclic = tensor_complex(t, &WindowComplex::concentrated(&e, 0))?.is_acyclic_on_window()?;
    Ok(TotalAcyclicity { lo: t.lo(), hi: t.hi(), acyclic, hom_dual_acyclic, injective_tensor_acyclic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    #[test]
    fn reflexivity_examples() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        assert!(is_totally_reflexive(&FdModule::free(&a, 2), 3).passed());
        assert!(is_totally_reflexive(&k, 6).passed());
        let b = Algebra::square_zero(2, 2).unwrap();
        let kb = FdModule::top_of_regular(&b).unwrap();
        assert_eq!(is_totally_reflexive(&kb, 3).failure, Some(ReflexivityFailure::Ext(1)));
    }

    #[test]
    fn gdim_examples() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        assert_eq!(gdim_certificate(&k, 3, 3).dim(), DimCertificate::Finite(0));
        let b = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&b).dual();
        assert_eq!(gdim_certificate(&e, 6, 2).dim(), DimCertificate::AtLeast(7));
    }

    #[test]
    fn complete_resolution_of_k_over_dual_numbers() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        let cert = gdim_certificate(&k, 2, 2);
        let t = complete_resolution(&k, &cert, -4, 4).unwrap();
        assert!(t.verification().passed());
        for d in -4..=4 {
            assert_eq!(t.complex().term_dim(d).unwrap(), 2);
        }
        for d in -3..=4 {
            assert_eq!(t.complex().diff(d).unwrap().rank(), 1);
        }
        let ko = FdModule::top_of_regular(&a.opposite()).unwrap();
        for i in -3..=3 {
            assert_eq!(t.tate_homology(&ko, i).unwrap(), 1);
            assert_eq!(t.stable_cohomology(&k, i).unwrap(), 1);
        }
        assert!(matches!(t.tate_homology(&ko, 4), Err(Error::WindowInsufficient { .. })));
    }

    #[test]
    fn complete_resolution_over_cubic_truncation() {
        let a = Algebra::truncated_polynomial(3, 3).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        let cert = gdim_certificate(&k, 2, 2);
        let t = complete_resolution(&k, &cert, -4, 4).unwrap();
        let ranks: Vec<usize> = (-3..=4).map(|d| t.complex().diff(d).unwrap().rank()).collect();
        for w in ranks.windows(2) {
            assert_eq!(w[0] + w[1], 3);
            assert_ne!(w[0], w[1]);
        }
        for i in -3..=3 {
            assert_eq!(t.tate_homology(&k, i).unwrap(), 1);
        }
    }

    #[test]
    fn projective_module_gives_zero_complex() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let r = FdModule::regular(&a);
        let cert = gdim_certificate(&r, 2, 2);
        let t = complete_resolution(&r, &cert, -3, 3).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        assert_eq!(t.tate_homology(&k, 0).unwrap(), 0);
        assert_eq!(t.stable_cohomology(&r, 0).unwrap(), 0);
    }

    #[test]
    fn noncommutative_complete_resolution() {
        let u = Algebra::upper_triangular(2).unwrap();
        let s = FdModule::top_of_regular(&u).unwrap();
        let cert = gdim_certificate(&s, 3, 3);
        // Finite global dimension: G-dimension equals projective dimension.
        assert_eq!(cert.dim(), DimCertificate::Finite(1));
    }
}
