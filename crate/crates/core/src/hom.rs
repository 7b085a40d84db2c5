//! Spaces of module homomorphisms.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};
use crate::module::{FdModule, ModuleMap};

/// `Hom_A(M, N)` with a basis of matrices.
///
/// A homomorphism is determined by the images of the generators of `M`;
/// coordinates are taken in the space of admissible image tuples.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: FdModule,
    target: FdModule,
    generators: Vec<Vec<u32>>,
    /// Coordinates of each element of `M` on the free cover, `r·d × dim M`.
    lift: FpMatrix,
    admissible: Subspace,
    basis: OnceLock<Vec<FpMatrix>>,
}

pub fn hom_space(m: &FdModule, n: &FdModule) -> Result<HomSpace> {
    if m.algebra() != n.algebra() {
        return Err(Error::AlgebraMismatch("hom between modules over different algebras".into()));
    }
    let p = m.modulus();
    let a = m.algebra();
    let d = a.dim();
    let nd = n.dim();
    let pres = m.presentation();
    let r = pres.generators.len();
    // φ(k) = Σ_a ρ_N(k_a) v_a must vanish for every kernel vector k.
    let admissible = if pres.kernel.dim() == 0 {
        Subspace::full(p, r * nd)
    } else {
        let mut eqs = FpMatrix::zeros(p, pres.kernel.dim() * nd, r * nd);
        for t in 0..pres.kernel.dim() {
            let k = pres.kernel.vector(t);
            for b in 0..r {
                let block = n.action_of(&k[b * d..(b + 1) * d]);
                eqs.paste(t * nd, b * nd, &block);
            }
        }
        eqs.kernel_basis()
    };
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        generators: pres.generators.clone(),
        lift: pres.lift.clone(),
        admissible,
        basis: OnceLock::new(),
    })
}

/// The map `A^r → N` sending the a-th free generator to `v_a`.
fn extend_from_generators(n: &FdModule, d: usize, r: usize, v: &[u32]) -> FpMatrix {
    let nd = n.dim();
    let mut cols = Vec::with_capacity(r * d);
    for b in 0..r {
        let va = &v[b * nd..(b + 1) * nd];
        for j in 0..d {
            cols.push(n.action(j).mul_vec(va));
        }
    }
    FpMatrix::from_columns(n.modulus(), nd, &cols)
}

impl HomSpace {
    pub fn source(&self) -> &FdModule {
        &self.source
    }

    pub fn target(&self) -> &FdModule {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.admissible.dim()
    }

    pub fn basis(&self) -> &[FpMatrix] {
        self.basis.get_or_init(|| (0..self.dim()).map(|s| self.from_images(self.admissible.vector(s))).collect())
    }

    pub fn basis_map(&self, s: usize) -> ModuleMap {
        ModuleMap::unchecked(self.source.clone(), self.target.clone(), self.basis()[s].clone())
    }

    fn from_images(&self, v: &[u32]) -> FpMatrix {
        let d = self.source.algebra().dim();
        extend_from_generators(&self.target, d, self.generators.len(), v).mul_unchecked(&self.lift)
    }

    /// Images of the generators of the source, concatenated.
    fn generator_images(&self, f: &FpMatrix) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.generators.len() * self.target.dim());
        for g in &self.generators {
            v.extend(f.mul_vec(g));
        }
        v
    }

    /// Coordinates of a homomorphism; `None` if `f` is not in the space.
    pub fn coordinates(&self, f: &FpMatrix) -> Option<Vec<u32>> {
        let c = self.admissible.coordinates(&self.generator_images(f))?;
        (self.combine(&c) == *f).then_some(c)
    }

    /// Coordinates of a matrix already known to be a homomorphism.
    pub(crate) fn coordinates_unchecked(&self, f: &FpMatrix) -> Vec<u32> {
        let v = self.generator_images(f);
        self.admissible.pivots().iter().map(|&c| v[c]).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> FpMatrix {
        self.from_images(&self.admissible.combine(coeffs))
    }

    /// Matrix of `φ ↦ g ∘ φ ∘ f` from this space to `to`, for `f: M' → M` and `g: N → N'`.
    ///
    /// Works on generator images: the image of the b-th generator of `M'` is
    /// `g Σ_a ρ_N(z_{b,a}) v_a` where `z_b` lifts `f(g'_b)` to the free cover of `M`.
    pub fn induced(&self, f: &FpMatrix, g: &FpMatrix, to: &HomSpace) -> FpMatrix {
        let p = self.source.modulus();
        let d = self.source.algebra().dim();
        let (r, n, n2) = (self.generators.len(), self.target.dim(), to.target.dim());
        let gens = FpMatrix::from_columns(p, f.cols(), &to.generators);
        let z = self.lift.mul_unchecked(&f.mul_unchecked(&gens));
        let pivots = to.admissible.pivots();
        let mut out = FpMatrix::zeros(p, pivots.len(), r * n);
        let mut start = 0;
        while start < pivots.len() {
            let b = pivots[start] / n2;
            let mut end = start;
            while end < pivots.len() && pivots[end] / n2 == b {
                end += 1;
            }
            let rows: Vec<usize> = pivots[start..end].iter().map(|&c| c % n2).collect();
            let g_rows = g.select_rows(&rows);
            let zb = z.column(b);
            for a in 0..r {
                let slice = &zb[a * d..(a + 1) * d];
                if slice.iter().all(|&x| x == 0) {
                    continue;
                }
                let block = g_rows.mul_unchecked(&self.target.action_of(slice));
                out.paste(start, a * n, &block);
            }
            start = end;
        }
        if self.admissible.dim() == r * n {
            out
        } else {
            out.mul_unchecked(&self.admissible.basis().transpose())
        }
    }

    /// `Hom_A(M, N)` as an `A`-module by `(a·φ)(x) = a φ(x)`; `A` must be commutative.
    pub fn module_structure(&self) -> Result<FdModule> {
        let a = self.source.algebra();
        if !a.is_commutative() {
            return Err(Error::Precondition("Hom is a module only over a commutative algebra".into()));
        }
        let id = FpMatrix::identity(a.modulus(), self.source.dim());
        let actions = (0..a.dim()).map(|g| self.induced(&id, self.target.action(g), self)).collect();
        Ok(FdModule::from_parts(a.clone(), self.dim(), actions, None))
    }

    /// `Hom_A(M, A)` as a module over the opposite algebra, `(φ·b)(x) = φ(x) b`.
    pub fn regular_dual_module(&self) -> FdModule {
        let a = self.target.algebra();
        debug_assert_eq!(self.target.free_rank(), Some(1));
        let p = a.modulus();
        let r = self.generators.len();
        let d = a.dim();
        let op = a.opposite();
        let full = self.admissible.dim() == r * d;
        let actions = (0..d)
            .map(|i| {
                let blocks: Vec<&FpMatrix> = vec![a.right_mult(i); r];
                let big = FpMatrix::block_diag(p, &blocks);
                if full {
                    return big;
                }
                let k = self.admissible.dim();
                let cols: Vec<Vec<u32>> = (0..k)
                    .map(|s| {
                        let image = big.mul_vec(self.admissible.vector(s));
                        self.admissible.pivots().iter().map(|&c| image[c]).collect()
                    })
                    .collect();
                FpMatrix::from_columns(p, k, &cols)
            })
            .collect();
        // Coordinates of a homomorphism out of A^r are the images of the units, so
        // the dual of a standard free module is again standard free.
        let free = (full && self.source.free_rank() == Some(r)).then_some(r);
        FdModule::from_parts(op, self.admissible.dim(), actions, free)
    }
}

/// `M* = Hom_A(M, A)` over the opposite algebra, with the space it was built from.
pub fn regular_dual(m: &FdModule) -> (FdModule, HomSpace) {
    let hom = hom_space(m, &FdModule::regular(m.algebra())).expect("same algebra");
    (hom.regular_dual_module(), hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    #[test]
    fn hom_examples_over_dual_numbers() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let k = FdModule::top_of_regular(&a).unwrap();
        let r = FdModule::regular(&a);
        assert_eq!(hom_space(&k, &k).unwrap().dim(), 1);
        assert_eq!(hom_space(&r, &k).unwrap().dim(), 1);
        assert_eq!(hom_space(&k, &r).unwrap().dim(), 1);
        assert_eq!(hom_space(&r, &r).unwrap().dim(), 2);
    }

    #[test]
    fn hom_from_free_has_target_dimension() {
        let a = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&a).dual();
        let f = FdModule::free(&a, 2);
        assert_eq!(hom_space(&f, &e).unwrap().dim(), 2 * e.dim());
    }

    #[test]
    fn basis_maps_commute_and_coordinates_roundtrip() {
        let a = Algebra::square_zero(2, 2).unwrap();
        let r = FdModule::regular(&a);
        let e = r.dual();
        let k = FdModule::top_of_regular(&a).unwrap();
        for (m, n) in [(&e, &r), (&k, &r), (&e, &e), (&r, &k)] {
            let h = hom_space(m, n).unwrap();
            for s in 0..h.dim() {
                h.basis_map(s).verify().unwrap();
                let mut unit = vec![0; h.dim()];
                unit[s] = 1;
                assert_eq!(h.coordinates(&h.basis()[s]), Some(unit));
            }
        }
    }

    #[test]
    fn regular_dual_of_free_is_free() {
        let a = Algebra::upper_triangular(2).unwrap();
        let (d, _) = regular_dual(&FdModule::free(&a, 2));
        assert_eq!(d.free_rank(), Some(2));
        assert_eq!(d, FdModule::free(&a.opposite(), 2));
        d.verify().unwrap();
    }

    #[test]
    fn regular_dual_module_is_a_module() {
        let a = Algebra::square_zero(2, 2).unwrap();
        let e = FdModule::regular(&a).dual();
        let (d, h) = regular_dual(&e);
        d.verify().unwrap();
        assert_eq!(d.dim(), h.dim());
    }
}
