//! Finite-dimensional left modules given by action matrices, and module maps.
//!
//! A right module over `A` is a left module over `A.opposite()` whose action
//! matrices are right multiplications. The free module `A^r` has basis
//! `(a, j) ↦ b_j e_a` at coordinate `a * dim A + j`.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::algebra::{linear_combination, Algebra};
use crate::error::{Error, Result};
use crate::hom::hom_space;
use crate::linalg::{quotient_map, FpMatrix, Subspace};

#[derive(Clone)]
pub struct FdModule {
    inner: Arc<ModuleData>,
}

struct ModuleData {
    algebra: Algebra,
    dim: usize,
    actions: Vec<FpMatrix>,
    free_rank: Option<usize>,
    fingerprint: u64,
    presentation: OnceLock<Arc<Presentation>>,
    projective: OnceLock<bool>,
}

/// A surjection `A^r → M` onto a module together with its kernel.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// Images of the free generators.
    pub generators: Vec<Vec<u32>>,
    /// Matrix of the surjection, `dim M × r·dim A`.
    pub cover: FpMatrix,
    /// Kernel of the surjection inside `A^r`.
    pub kernel: Subspace,
    /// A linear right inverse of `cover`, `r·dim A × dim M`.
    pub lift: FpMatrix,
}

impl PartialEq for FdModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.fingerprint == other.inner.fingerprint
                && self.inner.dim == other.inner.dim
                && self.inner.algebra == other.inner.algebra
                && self.inner.actions == other.inner.actions)
    }
}

impl Eq for FdModule {}

impl Hash for FdModule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.fingerprint.hash(state);
    }
}

impl fmt::Debug for FdModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FdModule(dim {} over {:?}", self.dim(), self.algebra())?;
        if let Some(r) = self.free_rank() {
            write!(f, ", free of rank {r}")?;
        }
        write!(f, ")")
    }
}

impl FdModule {
    /// Validates shapes, the representation law and the unit action.
    pub fn new(algebra: &Algebra, actions: Vec<FpMatrix>) -> Result<Self> {
        let d = algebra.dim();
        if actions.len() != d {
            return Err(Error::InvalidModule(format!("{} action matrices for an algebra of dimension {d}", actions.len())));
        }
        let m = actions.first().map_or(0, FpMatrix::rows);
        for (i, a) in actions.iter().enumerate() {
            if a.modulus() != algebra.modulus() {
                return Err(Error::ModulusMismatch { left: algebra.modulus(), right: a.modulus() });
            }
            if a.shape() != (m, m) {
                return Err(Error::InvalidModule(format!("action {i} is {}x{}, expected {m}x{m}", a.rows(), a.cols())));
            }
        }
        let module = FdModule::from_parts(algebra.clone(), m, actions, None);
        module.verify()?;
        Ok(module)
    }

    pub(crate) fn from_parts(algebra: Algebra, dim: usize, actions: Vec<FpMatrix>, free_rank: Option<usize>) -> Self {
        let mut h = DefaultHasher::new();
        algebra.fingerprint().hash(&mut h);
        dim.hash(&mut h);
        for a in &actions {
            a.data().hash(&mut h);
        }
        FdModule {
            inner: Arc::new(ModuleData {
                algebra,
                dim,
                actions,
                free_rank,
                fingerprint: h.finish(),
                presentation: OnceLock::new(),
                projective: OnceLock::new(),
            }),
        }
    }

    /// Re-checks `ρ(b_i)ρ(b_j) = Σ_k c[i][j][k] ρ(b_k)` and `ρ(1) = id`.
    pub fn verify(&self) -> Result<()> {
        let a = self.algebra();
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.action(i).mul_unchecked(self.action(j));
                let rhs = self.action_of(&a.basis_product(i, j));
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!("representation law fails for b{i}·b{j}")));
                }
            }
        }
        if !self.action_of(a.unit()).is_identity() {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.inner.algebra
    }

    pub fn modulus(&self) -> u32 {
        self.inner.algebra.modulus()
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn is_zero(&self) -> bool {
        self.inner.dim == 0
    }

    /// Rank when this module was built as a standard free module.
    pub fn free_rank(&self) -> Option<usize> {
        self.inner.free_rank
    }

    pub fn action(&self, i: usize) -> &FpMatrix {
        &self.inner.actions[i]
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.inner.actions
    }

    /// Matrix by which an algebra element (in coordinates) acts.
    pub fn action_of(&self, a: &[u32]) -> FpMatrix {
        linear_combination(self.modulus(), self.dim(), self.dim(), &self.inner.actions, a)
    }

    pub fn zero(algebra: &Algebra) -> Self {
        let p = algebra.modulus();
        FdModule::from_parts(algebra.clone(), 0, vec![FpMatrix::zeros(p, 0, 0); algebra.dim()], Some(0))
    }

    pub fn regular(algebra: &Algebra) -> Self {
        FdModule::free(algebra, 1)
    }

    /// `A^r` with block-diagonal left multiplication.
    pub fn free(algebra: &Algebra, rank: usize) -> Self {
        let p = algebra.modulus();
        let d = algebra.dim();
        let actions = (0..d)
            .map(|i| {
                let l = algebra.left_mult(i);
                let blocks: Vec<&FpMatrix> = vec![l; rank];
                FpMatrix::block_diag(p, &blocks)
            })
            .collect();
        FdModule::from_parts(algebra.clone(), rank * d, actions, Some(rank))
    }

    /// `Hom_k(M, k)`, a module over the opposite algebra with transposed actions.
    pub fn dual(&self) -> FdModule {
        let actions = self.actions().iter().map(FpMatrix::transpose).collect();
        FdModule::from_parts(self.algebra().opposite(), self.dim(), actions, None)
    }

    /// A module of the same shape over another (structurally equal) algebra.
    #[cfg(test)]
    pub(crate) fn with_algebra(&self, algebra: &Algebra) -> FdModule {
        FdModule::from_parts(algebra.clone(), self.dim(), self.actions().to_vec(), self.free_rank())
    }

    pub fn direct_sum(summands: &[&FdModule]) -> Result<FdModule> {
        let Some(first) = summands.first() else {
            return Err(Error::InvalidModule("direct sum of no modules".into()));
        };
        let a = first.algebra();
        for s in summands {
            if s.algebra() != a {
                return Err(Error::AlgebraMismatch("direct sum of modules over different algebras".into()));
            }
        }
        Ok(FdModule::direct_sum_unchecked(a, summands))
    }

    pub(crate) fn direct_sum_unchecked(a: &Algebra, summands: &[&FdModule]) -> FdModule {
        let p = a.modulus();
        let actions = (0..a.dim())
            .map(|i| {
                let blocks: Vec<&FpMatrix> = summands.iter().map(|s| s.action(i)).collect();
                FpMatrix::block_diag(p, &blocks)
            })
            .collect();
        let dim = summands.iter().map(|s| s.dim()).sum();
        let free_rank = summands.iter().map(|s| s.free_rank()).sum::<Option<usize>>();
        FdModule::from_parts(a.clone(), dim, actions, free_rank)
    }

    /// `M^r`.
    pub fn power(&self, r: usize) -> FdModule {
        let parts: Vec<&FdModule> = vec![self; r];
        if r == 0 {
            return FdModule::zero(self.algebra());
        }
        FdModule::direct_sum_unchecked(self.algebra(), &parts)
    }

    /// Submodule spanned by the smallest invariant subspace containing `vectors`.
    pub fn generated_by(&self, vectors: &[Vec<u32>]) -> Subspace {
        let p = self.modulus();
        if vectors.is_empty() {
            return Subspace::zero(p, self.dim());
        }
        let cols = FpMatrix::from_columns(p, self.dim(), vectors);
        let mut images = Vec::with_capacity(vectors.len() * self.algebra().dim());
        for a in self.actions() {
            let img = a.mul_unchecked(&cols);
            images.extend((0..img.cols()).map(|c| img.column(c)));
        }
        Subspace::from_vectors(p, self.dim(), &images)
    }

    /// `J·M` for the radical `J`, if the radical is known.
    pub fn radical_submodule(&self) -> Option<Subspace> {
        let rad = self.algebra().radical()?;
        let p = self.modulus();
        let mut images = Vec::new();
        for s in 0..rad.dim() {
            let act = self.action_of(rad.vector(s));
            for c in 0..self.dim() {
                images.push(act.column(c));
            }
        }
        Some(Subspace::from_vectors(p, self.dim(), &images))
    }

    pub fn is_invariant(&self, sub: &Subspace) -> bool {
        (0..sub.dim()).all(|s| self.actions().iter().all(|a| sub.contains(&a.mul_vec(sub.vector(s)))))
    }

    /// The submodule on an invariant subspace, with its inclusion.
    pub fn submodule(&self, sub: &Subspace) -> Result<ModuleMap> {
        if sub.ambient() != self.dim() {
            return Err(Error::Dimension(format!("subspace of dimension {} in a module of dimension {}", sub.ambient(), self.dim())));
        }
        if !self.is_invariant(sub) {
            return Err(Error::InvalidModule("subspace is not invariant under the action".into()));
        }
        Ok(self.submodule_unchecked(sub))
    }

    pub(crate) fn submodule_unchecked(&self, sub: &Subspace) -> ModuleMap {
        let k = sub.dim();
        let actions = self
            .actions()
            .iter()
            .map(|a| {
                // Images lie in the subspace, so their coordinates are the pivot entries.
                let img = a.mul_unchecked(&sub.basis().transpose());
                debug_assert!((0..k).all(|c| sub.contains(&img.column(c))));
                img.select_rows(sub.pivots())
            })
            .collect();
        let m = FdModule::from_parts(self.algebra().clone(), k, actions, None);
        ModuleMap::unchecked(m, self.clone(), sub.basis().transpose())
    }

    /// The quotient by an invariant subspace, with its projection.
    pub fn quotient(&self, sub: &Subspace) -> Result<ModuleMap> {
        if sub.ambient() != self.dim() {
            return Err(Error::Dimension(format!("subspace of dimension {} in a module of dimension {}", sub.ambient(), self.dim())));
        }
        if !self.is_invariant(sub) {
            return Err(Error::InvalidModule("subspace is not invariant under the action".into()));
        }
        Ok(self.quotient_unchecked(sub))
    }

    pub(crate) fn quotient_unchecked(&self, sub: &Subspace) -> ModuleMap {
        let q = quotient_map(self.dim(), sub).expect("subspace of this module");
        let actions = self
            .actions()
            .iter()
            .map(|a| q.projection.mul_unchecked(&a.select_columns(&q.complement)))
            .collect();
        let m = FdModule::from_parts(self.algebra().clone(), q.dim(), actions, None);
        ModuleMap::unchecked(self.clone(), m, q.projection)
    }

    /// `A / J` as a left module, e.g. the residue field of a local algebra.
    pub fn top_of_regular(algebra: &Algebra) -> Result<FdModule> {
        let rad = algebra
            .radical()
            .ok_or_else(|| Error::Precondition("the radical of this algebra is unavailable".into()))?;
        Ok(FdModule::regular(algebra).quotient_unchecked(rad).target().clone())
    }

    /// Generators: a basis of a complement of `J·M` when the radical is
    /// known (a minimal set), otherwise chosen greedily among basis vectors.
    pub fn generators(&self) -> Vec<Vec<u32>> {
        self.presentation().generators.clone()
    }

    pub fn presentation(&self) -> Arc<Presentation> {
        self.inner.presentation.get_or_init(|| Arc::new(self.compute_presentation())).clone()
    }

    fn compute_presentation(&self) -> Presentation {
        let p = self.modulus();
        let m = self.dim();
        let d = self.algebra().dim();
        let unit = |c: usize| {
            let mut v = vec![0; m];
            v[c] = 1;
            v
        };
        let generators: Vec<Vec<u32>> = if let Some(r) = self.free_rank() {
            (0..r)
                .map(|a| {
                    let mut v = vec![0; m];
                    v[a * d..(a + 1) * d].copy_from_slice(self.algebra().unit());
                    v
                })
                .collect()
        } else if let Some(rad) = self.radical_submodule() {
            let mut is_pivot = vec![false; m];
            for &c in rad.pivots() {
                is_pivot[c] = true;
            }
            (0..m).filter(|&c| !is_pivot[c]).map(unit).collect()
        } else {
            let mut gens: Vec<Vec<u32>> = Vec::new();
            let mut span = Subspace::zero(p, m);
            for c in 0..m {
                if span.dim() == m {
                    break;
                }
                let e = unit(c);
                if span.contains(&e) {
                    continue;
                }
                gens.push(e);
                span = self.generated_by(&gens);
            }
            gens
        };
        let mut cols = Vec::with_capacity(generators.len() * d);
        for g in &generators {
            for a in self.actions() {
                cols.push(a.mul_vec(g));
            }
        }
        let cover = FpMatrix::from_columns(p, m, &cols);
        let kernel = cover.kernel_basis();
        let lift = cover
            .solve_right(&FpMatrix::identity(p, m))
            .expect("same modulus")
            .expect("generators span the module");
        Presentation { generators, cover, kernel, lift }
    }

    /// The free cover `A^r → M` from [`FdModule::generators`].
    pub fn cover(&self) -> ModuleMap {
        let pres = self.presentation();
        let free = FdModule::free(self.algebra(), pres.generators.len());
        ModuleMap::unchecked(free, self.clone(), pres.cover.clone())
    }

    pub fn is_projective(&self) -> bool {
        *self.inner.projective.get_or_init(|| self.compute_is_projective())
    }

    fn compute_is_projective(&self) -> bool {
        if self.free_rank().is_some() || self.is_zero() {
            return true;
        }
        let a = self.algebra();
        let pres = self.presentation();
        let d = a.dim();
        let r = pres.generators.len();
        let free = FdModule::free(a, r);
        if let Some(rad) = a.radical() {
            // The kernel K of a cover F → M is a summand iff K ∩ JF = JK.
            let p = self.modulus();
            let mut jf = Vec::with_capacity(r * rad.dim());
            for b in 0..r {
                for s in 0..rad.dim() {
                    let mut v = vec![0; r * d];
                    v[b * d..(b + 1) * d].copy_from_slice(rad.vector(s));
                    jf.push(v);
                }
            }
            let jf = Subspace::from_vectors(p, r * d, &jf);
            let k = &pres.kernel;
            let mut jk = Vec::new();
            for s in 0..rad.dim() {
                let act = free.action_of(rad.vector(s));
                for t in 0..k.dim() {
                    jk.push(act.mul_vec(k.vector(t)));
                }
            }
            let jk = Subspace::from_vectors(p, r * d, &jk);
            let meet = k.intersection(&jf).expect("same ambient");
            return meet.dim() == jk.dim();
        }
        // No radical: look for a module section of the cover.
        let hom = hom_space(self, &free).expect("same algebra");
        let p = self.modulus();
        let m = self.dim();
        let mut cols = Vec::with_capacity(hom.dim());
        for s in hom.basis() {
            cols.push(pres.cover.mul_unchecked(s).data().to_vec());
        }
        let system = FpMatrix::from_columns(p, m * m, &cols);
        let target = FpMatrix::from_flat(p, m * m, 1, FpMatrix::identity(p, m).data().to_vec());
        system.solve_right(&target).expect("same modulus").is_some()
    }

    pub fn is_injective(&self) -> bool {
        self.dual().is_projective()
    }

    pub fn is_free(&self) -> bool {
        self.free_rank().is_some()
    }
}

/// A linear map between modules over the same algebra that commutes with the actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: FdModule,
    target: FdModule,
    matrix: FpMatrix,
}

impl ModuleMap {
    pub fn new(source: &FdModule, target: &FdModule, matrix: FpMatrix) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch("map between modules over different algebras".into()));
        }
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if matrix.modulus() != source.modulus() {
            return Err(Error::ModulusMismatch { left: source.modulus(), right: matrix.modulus() });
        }
        let map = ModuleMap::unchecked(source.clone(), target.clone(), matrix);
        map.verify()?;
        Ok(map)
    }

    pub(crate) fn unchecked(source: FdModule, target: FdModule, matrix: FpMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.dim(), source.dim()));
        ModuleMap { source, target, matrix }
    }

    pub fn verify(&self) -> Result<()> {
        for (i, (s, t)) in self.source.actions().iter().zip(self.target.actions()).enumerate() {
            if self.matrix.mul_unchecked(s) != t.mul_unchecked(&self.matrix) {
                return Err(Error::InvalidMap(format!("does not commute with the action of b{i}")));
            }
        }
        Ok(())
    }

    pub fn identity(m: &FdModule) -> Self {
        ModuleMap::unchecked(m.clone(), m.clone(), FpMatrix::identity(m.modulus(), m.dim()))
    }

    pub fn zero(source: &FdModule, target: &FdModule) -> Self {
        ModuleMap::unchecked(source.clone(), target.clone(), FpMatrix::zeros(source.modulus(), target.dim(), source.dim()))
    }

    pub fn source(&self) -> &FdModule {
        &self.source
    }

    pub fn target(&self) -> &FdModule {
        &self.target
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> FpMatrix {
        self.matrix
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.target != self.source {
            return Err(Error::InvalidMap("composition of maps with mismatched modules".into()));
        }
        Ok(ModuleMap::unchecked(other.source.clone(), self.target.clone(), self.matrix.mul_unchecked(&other.matrix)))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Inclusion of the kernel.
    pub fn kernel(&self) -> ModuleMap {
        self.source.submodule_unchecked(&self.matrix.kernel_basis())
    }

    /// Inclusion of the image.
    pub fn image(&self) -> ModuleMap {
        self.target.submodule_unchecked(&self.matrix.image_basis())
    }

    /// Projection onto the cokernel.
    pub fn cokernel(&self) -> ModuleMap {
        self.target.quotient_unchecked(&self.matrix.image_basis())
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.matrix.rank() == self.source.dim()
    }

    /// `Hom_k(f, k)`, a map between the dual modules in the opposite direction.
    pub fn dual(&self) -> ModuleMap {
        ModuleMap::unchecked(self.target.dual(), self.source.dual(), self.matrix.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers() -> Algebra {
        Algebra::truncated_polynomial(2, 2).unwrap()
    }

    #[test]
    fn free_module_satisfies_representation_law() {
        for a in [dual_numbers(), Algebra::upper_triangular(2).unwrap(), Algebra::square_zero(2, 2).unwrap()] {
            FdModule::free(&a, 3).verify().unwrap();
            FdModule::free(&a.opposite(), 2).verify().unwrap();
            FdModule::free(&a, 2).dual().verify().unwrap();
        }
    }

    #[test]
    fn rejects_non_representation() {
        let a = dual_numbers();
        // x acting as the identity violates x² = 0.
        let err = FdModule::new(&a, vec![FpMatrix::identity(2, 1), FpMatrix::identity(2, 1)]);
        assert!(err.is_err());
    }

    #[test]
    fn cokernel_of_multiplication_by_x_is_k() {
        let a = dual_numbers();
        let r = FdModule::regular(&a);
        let x = ModuleMap::new(&r, &r, a.left_mult(1).clone()).unwrap();
        let coker = x.cokernel();
        assert_eq!(coker.target().dim(), 1);
        assert!(coker.target().action(1).is_zero());
        assert_eq!(x.kernel().source().dim(), 1);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let a = Algebra::square_zero(2, 2).unwrap();
        let r = FdModule::free(&a, 2);
        assert_eq!(ModuleMap::identity(&r).kernel().source().dim(), 0);
    }

    #[test]
    fn dual_of_dual_is_identity() {
        let a = Algebra::upper_triangular(2).unwrap();
        let m = FdModule::regular(&a);
        assert_eq!(m.dual().dual(), m.with_algebra(&a));
        assert_eq!(m.dual().algebra(), &a.opposite());
    }

    #[test]
    fn projectivity() {
        let a = dual_numbers();
        let k = FdModule::top_of_regular(&a).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(!k.is_projective());
        assert!(FdModule::free(&a, 2).is_projective());
        assert!(FdModule::regular(&a).dual().is_projective());

        let r = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&r).dual();
        assert!(e.is_injective());
        assert!(!e.is_projective());
        assert!(FdModule::top_of_regular(&r).unwrap().generators().len() == 1);
    }

    #[test]
    fn projective_non_free_over_upper_triangular() {
        let a = Algebra::upper_triangular(2).unwrap();
        let reg = FdModule::regular(&a);
        // A e11 = span{e11}: a simple projective left ideal.
        let ideal = Subspace::from_vectors(2, 3, &[vec![1, 0, 0]]);
        let p1 = reg.submodule(&ideal).unwrap().source().clone();
        assert!(p1.is_projective());
        let top = FdModule::top_of_regular(&a).unwrap();
        assert_eq!(top.dim(), 2);
        assert!(!top.is_projective());
    }

    #[test]
    fn section_test_agrees_with_radical_test() {
        // The same algebra without a supplied radical over GF(2) falls back to the section search.
        let a = Algebra::upper_triangular(2).unwrap();
        let d = a.dim();
        let mut mul = Vec::new();
        for i in 0..d {
            for j in 0..d {
                mul.extend(a.basis_product(i, j));
            }
        }
        let bare = Algebra::new(2, 3, mul, a.unit().to_vec(), None).unwrap();
        assert!(bare.radical().is_none());
        for (with, without) in [(&a, &bare)] {
            let reg = FdModule::regular(with);
            for vecs in [vec![vec![1, 0, 0]], vec![vec![0, 1, 0]], vec![vec![0, 1, 0], vec![0, 0, 1]]] {
                let sub = Subspace::from_vectors(2, 3, &vecs);
                if !reg.is_invariant(&sub) {
                    continue;
                }
                let q1 = reg.quotient(&sub).unwrap().target().clone();
                let q2 = q1.with_algebra(without);
                let s1 = reg.submodule(&sub).unwrap().source().clone();
                let s2 = s1.with_algebra(without);
                assert_eq!(q1.is_projective(), q2.is_projective());
                assert_eq!(s1.is_projective(), s2.is_projective());
            }
        }
    }
}
