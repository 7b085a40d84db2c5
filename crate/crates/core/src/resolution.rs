//! Projective and injective resolutions, syzygies, Tor, Ext and dimension certificates.
//!
//! A projective resolution is built from iterated covers, `Ω_0 = M`,
//! `P_j → Ω_j → 0` and `Ω_{j+1} = ker(P_j → Ω_j)`. Growth stops as soon as a
//! syzygy is projective; that syzygy is then the last term. Injective
//! resolutions are duals of projective resolutions over the opposite algebra.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::complex::{hom_complex, tensor_complex, Boundedness, WindowComplex};
use crate::error::Result;
use crate::linalg::FpMatrix;
use crate::module::{FdModule, ModuleMap};

/// Outcome of a bounded search for a homological dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DimCertificate {
    /// The dimension is exactly `n`.
    Finite(usize),
    /// The dimension is at least `b`; nothing is claimed beyond the search bound.
    AtLeast(usize),
}

impl DimCertificate {
    pub fn is_finite(&self) -> bool {
        matches!(self, DimCertificate::Finite(_))
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            DimCertificate::Finite(n) => Some(*n),
            DimCertificate::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for DimCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimCertificate::Finite(n) => write!(f, "Finite({n})"),
            DimCertificate::AtLeast(b) => write!(f, "AtLeast({b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionKind {
    Projective,
    Injective,
}

/// A resolution truncated to a window.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub kind: ResolutionKind,
    pub module: FdModule,
    /// Projective: degrees `[0, len]`; injective: degrees `[-len, 0]`.
    pub complex: WindowComplex,
    /// `P_0 → M`, or `N → I_0`.
    pub augmentation: ModuleMap,
    /// Whether the augmented complex is exact on the window.
    pub exact: bool,
}

#[derive(Default)]
struct State {
    terms: Vec<FdModule>,
    covers: Vec<ModuleMap>,
    syzygies: Vec<FdModule>,
    inclusions: Vec<ModuleMap>,
    terminated: bool,
}

/// A projective resolution grown on demand.
pub struct ProjectiveResolver {
    module: FdModule,
    state: Mutex<State>,
}

impl std::fmt::Debug for ProjectiveResolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProjectiveResolver").field("module_dim", &self.module.dim()).finish()
    }
}

impl ProjectiveResolver {
    pub fn new(m: &FdModule) -> Self {
        let state = State { syzygies: vec![m.clone()], ..State::default() };
        ProjectiveResolver { module: m.clone(), state: Mutex::new(state) }
    }

    pub fn module(&self) -> &FdModule {
        &self.module
    }

    fn grow(&self, len: usize) -> std::sync::MutexGuard<'_, State> {
        let mut s = self.state.lock().expect("resolver lock");
        while s.terms.len() <= len && !s.terminated {
            let j = s.terms.len();
            let omega = s.syzygies[j].clone();
            if omega.is_projective() {
                s.covers.push(ModuleMap::identity(&omega));
                s.terms.push(omega.clone());
                let zero = FdModule::zero(omega.algebra());
                s.inclusions.push(ModuleMap::zero(&zero, &omega));
                s.syzygies.push(zero);
                s.terminated = true;
            } else {
                let pi = omega.cover();
                let iota = pi.kernel();
                s.terms.push(pi.source().clone());
                s.syzygies.push(iota.source().clone());
                s.covers.push(pi);
                s.inclusions.push(iota);
            }
        }
        s
    }

    /// Index of the last nonzero term if the resolution is finite and already reached within `len`.
    pub fn length_within(&self, len: usize) -> Option<usize> {
        let s = self.grow(len);
        s.terminated.then(|| s.terms.len() - 1)
    }

    /// `Ω_j`, zero past the end of a finite resolution.
    pub fn syzygy(&self, j: usize) -> FdModule {
        let s = self.grow(j.saturating_sub(1));
        if j < s.syzygies.len() {
            s.syzygies[j].clone()
        } else {
            FdModule::zero(self.module.algebra())
        }
    }

    /// `P_j`, zero past the end of a finite resolution.
    pub fn term(&self, j: usize) -> FdModule {
        let s = self.grow(j);
        if j < s.terms.len() {
            s.terms[j].clone()
        } else {
            FdModule::zero(self.module.algebra())
        }
    }

    /// The inclusion `Ω_{j+1} → P_j`.
    pub fn syzygy_inclusion(&self, j: usize) -> Option<ModuleMap> {
        let s = self.grow(j);
        s.inclusions.get(j).cloned()
    }

    /// `π_j: P_j → Ω_j`.
    pub fn cover(&self, j: usize) -> ModuleMap {
        let s = self.grow(j);
        match s.covers.get(j) {
            Some(c) => c.clone(),
            None => ModuleMap::zero(&FdModule::zero(self.module.algebra()), &FdModule::zero(self.module.algebra())),
        }
    }

    pub fn augmentation(&self) -> ModuleMap {
        self.grow(0).covers[0].clone()
    }

    /// `P` on degrees `[0, len]`, or on its full support if shorter.
    pub fn complex(&self, len: usize) -> WindowComplex {
        let s = self.grow(len);
        let top = if s.terminated { (s.terms.len() - 1).min(len) } else { len };
        let terms: Vec<FdModule> = s.terms[..=top].to_vec();
        let diffs: Vec<FpMatrix> = (1..=top)
            .map(|j| s.inclusions[j - 1].matrix().mul_unchecked(s.covers[j].matrix()))
            .collect();
        let tag = if s.terminated && top == s.terms.len() - 1 { Boundedness::Bounded } else { Boundedness::BoundedBelowAt(0) };
        let a = self.module.algebra().clone();
        WindowComplex::unchecked(a, 0, terms, diffs, tag)
    }

    /// `P` on degrees `[lo, hi]` only, keeping the lower bound when `lo ≤ 0`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<WindowComplex> {
        let full = self.complex(hi.max(0) as usize);
        let lo = lo.max(0).min(full.hi());
        let hi = hi.max(lo).min(full.hi());
        if full.tag() == Boundedness::Bounded {
            return Ok(full);
        }
        full.restrict(lo, hi)
    }

    pub fn resolution(&self, len: usize) -> Resolution {
        let complex = self.complex(len);
        let augmentation = self.augmentation();
        let exact = projective_exactness(&complex, &augmentation);
        Resolution { kind: ResolutionKind::Projective, module: self.module.clone(), complex, augmentation, exact }
    }

    /// `Finite(j)` for the least `j ≤ bound` with `Ω_j` projective, else `AtLeast(bound + 1)`.
    pub fn pd_certificate(&self, bound: usize) -> DimCertificate {
        match self.length_within(bound) {
            Some(j) if j <= bound => DimCertificate::Finite(j),
            _ => DimCertificate::AtLeast(bound + 1),
        }
    }
}

fn projective_exactness(x: &WindowComplex, eps: &ModuleMap) -> bool {
    let m = eps.target().dim();
    if eps.rank() != m {
        return false;
    }
    let d1 = x.diff(1).ok();
    let rank1 = d1.as_ref().map_or(0, FpMatrix::rank);
    if let Some(d1) = &d1 {
        if !eps.matrix().mul_unchecked(d1).is_zero() {
            return false;
        }
    }
    if eps.source().dim() - m != rank1 && (x.hi() >= 1 || x.tag() == Boundedness::Bounded) {
        return false;
    }
    let (_, hi) = x.certified_degrees();
    (1..=hi).all(|j| x.homology_dim(j) == Ok(0))
}

pub fn projective_resolution(m: &FdModule, len: usize) -> Resolution {
    ProjectiveResolver::new(m).resolution(len)
}

/// `D` of a projective resolution of `D(N)` over the opposite algebra.
pub fn injective_resolution(n: &FdModule, len: usize) -> Resolution {
    let q = ProjectiveResolver::new(&n.dual());
    dual_of_projective(&q, n, len)
}

pub(crate) fn dual_of_projective(q: &ProjectiveResolver, n: &FdModule, len: usize) -> Resolution {
    let qc = q.complex(len);
    let complex = dual_complex(&qc);
    let eps = q.augmentation().dual();
    let augmentation = ModuleMap::unchecked(n.clone(), eps.target().clone(), eps.into_matrix());
    let exact = projective_exactness(&qc, &q.augmentation());
    Resolution { kind: ResolutionKind::Injective, module: n.clone(), complex, augmentation, exact }
}

/// `D(X)` with `D(X)_{-n} = D(X_n)`.
pub fn dual_complex(x: &WindowComplex) -> WindowComplex {
    let a = x.algebra().opposite();
    let terms: Vec<FdModule> = (x.lo()..=x.hi()).rev().map(|d| x.terms()[(d - x.lo()) as usize].dual()).collect();
    // D(X)_{-n+1} → D(X)_{-n} is the transpose of ∂_n.
    let diffs: Vec<FpMatrix> = (x.lo() + 1..=x.hi()).rev().map(|d| x.diff(d).expect("inside window").transpose()).collect();
    let tag = match x.tag() {
        Boundedness::BoundedBelowAt(b) => Boundedness::BoundedAboveAt(-b),
        Boundedness::BoundedAboveAt(b) => Boundedness::BoundedBelowAt(-b),
        t => t,
    };
    WindowComplex::unchecked(a, -x.hi(), terms, diffs, tag)
}

pub fn syzygy(m: &FdModule, j: usize) -> FdModule {
    ProjectiveResolver::new(m).syzygy(j)
}

/// `Ω^j N = D(Ω_j D(N))`.
pub fn cosyzygy(n: &FdModule, j: usize) -> FdModule {
    let s = ProjectiveResolver::new(&n.dual()).syzygy(j);
    FdModule::from_parts(n.algebra().clone(), s.dim(), s.actions().iter().map(FpMatrix::transpose).collect(), None)
}

/// `dim Tor_i(M, N)` from a resolution of `M`; `M` over `A°`, `N` over `A`.
pub fn tor_with(pm: &ProjectiveResolver, n: &FdModule, i: i64) -> Result<usize> {
    if i < 0 {
        return Ok(0);
    }
    let p = pm.window(i - 1, i + 1)?;
    tensor_complex(&p, &WindowComplex::concentrated(n, 0))?.homology_dim(i)
}

/// `dim Tor_i(M, N)` from a resolution of `N`.
pub fn tor_with_right(m: &FdModule, pn: &ProjectiveResolver, i: i64) -> Result<usize> {
    if i < 0 {
        return Ok(0);
    }
    let p = pn.window(i - 1, i + 1)?;
    tensor_complex(&WindowComplex::concentrated(m, 0), &p)?.homology_dim(i)
}

/// `dim Ext^i(M, N)` from a resolution of `M`.
pub fn ext_with(pm: &ProjectiveResolver, n: &FdModule, i: i64) -> Result<usize> {
    if i < 0 {
        return Ok(0);
    }
    let p = pm.window(i - 1, i + 1)?;
    hom_complex(&p, &WindowComplex::concentrated(n, 0))?.homology_dim(-i)
}

pub fn tor(m: &FdModule, n: &FdModule, i: i64) -> Result<usize> {
    crate::tensor::tensor(m, n)?;
    tor_with(&ProjectiveResolver::new(m), n, i)
}

pub fn ext(m: &FdModule, n: &FdModule, i: i64) -> Result<usize> {
    crate::hom::hom_space(m, n)?;
    ext_with(&ProjectiveResolver::new(m), n, i)
}

pub fn pd_certificate(m: &FdModule, bound: usize) -> DimCertificate {
    ProjectiveResolver::new(m).pd_certificate(bound)
}

/// `id N = pd D(N)` over the opposite algebra.
pub fn id_certificate(n: &FdModule, bound: usize) -> DimCertificate {
    pd_certificate(&n.dual(), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    fn dual_numbers() -> Algebra {
        Algebra::truncated_polynomial(2, 2).unwrap()
    }

    #[test]
    fn free_module_has_length_zero() {
        let a = dual_numbers();
        let r = projective_resolution(&FdModule::free(&a, 2), 5);
        assert_eq!(r.complex.hi(), 0);
        assert_eq!(r.complex.tag(), Boundedness::Bounded);
        assert!(r.exact);
    }

    #[test]
    fn residue_field_over_dual_numbers() {
        let a = dual_numbers();
        let k = FdModule::top_of_regular(&a).unwrap();
        let r = projective_resolution(&k, 6);
        assert!(r.exact);
        for j in 0..=6 {
            assert_eq!(r.complex.term_dim(j).unwrap(), 2);
        }
        for j in 1..=6 {
            assert_eq!(r.complex.diff(j).unwrap().rank(), 1);
        }
    }

    #[test]
    fn residue_field_of_intro_ring_doubles() {
        let a = Algebra::square_zero(2, 2).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        let res = ProjectiveResolver::new(&k);
        assert_eq!(res.syzygy(1).dim(), 2);
        assert_eq!(res.syzygy(2).dim(), 4);
        assert_eq!(res.syzygy(3).dim(), 8);
        assert!(res.resolution(4).exact);
    }

    #[test]
    fn injective_resolutions() {
        let a = dual_numbers();
        let k = FdModule::top_of_regular(&a).unwrap();
        let i = injective_resolution(&k, 4);
        assert!(i.exact);
        assert_eq!(i.complex.lo(), -4);
        for d in -4..=0 {
            assert_eq!(i.complex.term_dim(d).unwrap(), 2);
            assert!(i.complex.term(d).unwrap().is_injective());
        }
        let b = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&b).dual();
        let ie = injective_resolution(&e, 3);
        assert_eq!(ie.complex.lo(), 0);
        assert_eq!(ie.complex.hi(), 0);
    }

    #[test]
    fn syzygy_examples() {
        let a = dual_numbers();
        let k = FdModule::top_of_regular(&a).unwrap();
        assert_eq!(syzygy(&k, 0), k);
        let o = syzygy(&k, 1);
        assert_eq!(o.dim(), 1);
        let b = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&b).dual();
        let o = syzygy(&e, 1);
        assert_eq!(o.dim(), 3);
        for act in o.actions().iter().skip(1) {
            assert!(act.is_zero());
        }
        assert_eq!(cosyzygy(&k, 1).dim(), 1);
    }

    #[test]
    fn tor_and_ext_examples() {
        let a = dual_numbers();
        let k = FdModule::top_of_regular(&a).unwrap();
        for i in 0..=8 {
            assert_eq!(tor(&k, &k, i).unwrap(), 1);
        }
        assert_eq!(tor(&FdModule::regular(&a), &k, 1).unwrap(), 0);
        assert_eq!(ext(&k, &FdModule::regular(&a), 0).unwrap(), 1);
        assert_eq!(ext(&k, &FdModule::regular(&a), 1).unwrap(), 0);
        assert_eq!(ext(&k, &k, 3).unwrap(), 1);
        let b = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&b).dual();
        for i in 2..=5 {
            assert!(tor(&e, &e, i).unwrap() > 0);
        }
    }

    #[test]
    fn dimension_certificates() {
        let a = dual_numbers();
        let k = FdModule::top_of_regular(&a).unwrap();
        assert_eq!(pd_certificate(&FdModule::free(&a, 3), 4), DimCertificate::Finite(0));
        assert_eq!(pd_certificate(&k, 10), DimCertificate::AtLeast(11));
        let b = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&b).dual();
        assert_eq!(id_certificate(&e, 3), DimCertificate::Finite(0));
        let u = Algebra::upper_triangular(2).unwrap();
        let s = FdModule::top_of_regular(&u).unwrap();
        // Simple modules over the path algebra of A2 have pd ≤ 1.
        assert!(pd_certificate(&s, 3).finite().unwrap() <= 1);
    }
}
