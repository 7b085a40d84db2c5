//! Evaluation, associativity and swap morphisms between composites of `⊗` and Hom.
//!
//! All three need Hom and tensor products of modules to be modules again, so
//! they are defined over commutative algebras, where every module is a
//! symmetric bimodule.

use crate::complex::{hom_total, sign, tensor_total, vector_space, ComplexMorphism, Component, WindowComplex};
use crate::error::{Error, Result};
use crate::hom::{hom_space, HomSpace};
use crate::linalg::FpMatrix;
use crate::module::FdModule;
use crate::tensor::TensorProduct;

/// A morphism of complexes together with whether it is bijective on the window.
#[derive(Clone, Debug)]
pub struct StandardMap {
    pub morphism: ComplexMorphism,
    pub is_iso: bool,
}

fn require_commutative(x: &WindowComplex) -> Result<()> {
    if !x.algebra().is_commutative() {
        return Err(Error::Precondition("standard morphisms are implemented over commutative algebras".into()));
    }
    Ok(())
}

fn finish(source: WindowComplex, target: WindowComplex, lo: i64, maps: Vec<FpMatrix>) -> Result<StandardMap> {
    let morphism = ComplexMorphism::new(&source, &target, lo, maps)
        .map_err(|e| Error::ConstructionInvariant(format!("standard morphism is not a chain map: {e}")))?;
    let is_iso = morphism.is_iso_on_window();
    Ok(StandardMap { morphism, is_iso })
}

fn scatter(out: &mut [u32], offset: usize, v: &[u32], c: u32, p: u32) {
    for (o, &x) in out[offset..offset + v.len()].iter_mut().zip(v) {
        *o = ((*o as u64 + c as u64 * x as u64) % p as u64) as u32;
    }
}

/// `θ: X ⊗ Hom(Y, Z) → Hom(Hom(X, Y), Z)`, `θ(x ⊗ ψ)(φ) = (-1)^n ψ φ(x)` for `x` in degree `n`.
pub fn theta_evaluation(x: &WindowComplex, y: &FdModule, z: &FdModule) -> Result<StandardMap> {
    require_commutative(x)?;
    if y.algebra() != x.algebra() || z.algebra() != x.algebra() {
        return Err(Error::AlgebraMismatch("θ needs all arguments over the same algebra".into()));
    }
    let p = x.algebra().modulus();
    let hyz = hom_space(y, z)?;
    let hmod = hyz.module_structure()?;
    let lhs = tensor_total(x, &WindowComplex::concentrated(&hmod, 0), false)?;
    let (lo, hi) = (x.lo(), x.hi());
    let w: Vec<HomSpace> = (lo..=hi).map(|n| hom_space(&x.term(n)?, y)).collect::<Result<_>>()?;
    let wm: Vec<FdModule> = w.iter().map(HomSpace::module_structure).collect::<Result<_>>()?;
    let r: Vec<HomSpace> = wm.iter().map(|m| hom_space(m, z)).collect::<Result<_>>()?;
    let idy = FpMatrix::identity(p, y.dim());
    let idz = FpMatrix::identity(p, z.dim());
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let k = (n - lo) as usize;
            // φ' ↦ φ' ∘ ∂_n, then Φ ↦ -Φ ∘ (that).
            let g = w[k - 1].induced(&x.diff(n)?, &idy, &w[k]);
            Ok(r[k].induced(&g, &idz, &r[k - 1]).neg())
        })
        .collect::<Result<Vec<_>>>()?;
    let field = lhs.complex.algebra().clone();
    let terms = r.iter().map(|h| vector_space(&field, h.dim())).collect();
    let rhs = WindowComplex::new(&field, lo, terms, diffs, x.tag())?;
    let maps = (lo..=hi)
        .map(|n| {
            let k = (n - lo) as usize;
            let src_dim = lhs.complex.term_dim(n).unwrap_or(0);
            let cols: Vec<Vec<u32>> = match lhs.degree(n).first() {
                None => vec![],
                Some(c) => (0..c.space.dim())
                    .map(|t| {
                        let (xv, psi) = c.space.lift(t);
                        let psi = hyz.combine(&psi);
                        let cols: Vec<Vec<u32>> = w[k].basis().iter().map(|phi| psi.mul_vec(&phi.mul_vec(&xv))).collect();
                        let m = FpMatrix::from_columns(p, z.dim(), &cols);
                        let v = r[k].coordinates_unchecked(&m);
                        if sign(n) {
                            v.iter().map(|&e| crate::linalg::neg_mod(e, p)).collect()
                        } else {
                            v
                        }
                    })
                    .collect(),
            };
            debug_assert_eq!(cols.len(), src_dim);
            FpMatrix::from_columns(p, r[k].dim(), &cols)
        })
        .collect();
    finish(lhs.complex, rhs, lo, maps)
}

fn require_bounded(xs: &[&WindowComplex]) -> Result<()> {
    for x in xs {
        require_commutative(x)?;
        if x.tag() != crate::complex::Boundedness::Bounded {
            return Err(Error::Precondition("associativity and swap are materialized for bounded complexes".into()));
        }
    }
    Ok(())
}

/// `(X ⊗ Y) ⊗ Z → X ⊗ (Y ⊗ Z)`, `(x ⊗ y) ⊗ z ↦ x ⊗ (y ⊗ z)`.
pub fn assoc_iso(x: &WindowComplex, y: &WindowComplex, z: &WindowComplex) -> Result<StandardMap> {
    require_bounded(&[x, y, z])?;
    let p = x.algebra().modulus();
    let xy = tensor_total(x, y, true)?;
    let left = tensor_total(&xy.complex, z, false)?;
    let yz = tensor_total(y, z, true)?;
    let right = tensor_total(x, &yz.complex, false)?;
    let (lo, hi) = (left.complex.lo(), left.complex.hi());
    let maps = (lo..=hi)
        .map(|n| {
            let tdim = right.complex.term_dim(n)?;
            let mut cols = Vec::new();
            for c in left.degree(n) {
                let m = c.i;
                for t in 0..c.space.dim() {
                    let (u, zv) = c.space.lift(t);
                    let mut col = vec![0u32; tdim];
                    for d in xy.degree(m) {
                        for (q, &uc) in u[d.offset..d.offset + d.space.dim()].iter().enumerate() {
                            if uc == 0 {
                                continue;
                            }
                            let (xv, yv) = d.space.lift(q);
                            let i = d.i;
                            push_assoc(yz.degree(n - i), right.degree(n), i, m - i, &xv, &yv, &zv, uc, p, &mut col);
                        }
                    }
                    cols.push(col);
                }
            }
            Ok(FpMatrix::from_columns(p, tdim, &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    finish(left.complex, right.complex, lo, maps)
}

#[allow(clippy::too_many_arguments)]
fn push_assoc(
    yz_comps: &[Component<TensorProduct>],
    right: &[Component<TensorProduct>],
    i: i64,
    j: i64,
    xv: &[u32],
    yv: &[u32],
    zv: &[u32],
    coeff: u32,
    p: u32,
    col: &mut [u32],
) {
    let Some(e) = yz_comps.iter().find(|e| e.i == j) else { return };
    let Some(target) = right.iter().find(|r| r.i == i) else { return };
    let deg = target.space.right().dim();
    let mut w = vec![0u32; deg];
    scatter(&mut w, e.offset, &e.space.project_pure(yv, zv), 1, p);
    let v = target.space.project_pure(xv, &w);
    scatter(col, target.offset, &v, coeff, p);
}

/// `Hom(X, Hom(Z, Y)) → Hom(Z, Hom(X, Y))`, `φ ↦ (z ↦ (x ↦ (-1)^{|x||z|} φ(x)(z)))`.
pub fn swap_iso(x: &WindowComplex, y: &WindowComplex, z: &WindowComplex) -> Result<StandardMap> {
    require_bounded(&[x, y, z])?;
    let p = x.algebra().modulus();
    let zy = hom_total(z, y, true)?;
    let left = hom_total(x, &zy.complex, false)?;
    let xy = hom_total(x, y, true)?;
    let right = hom_total(z, &xy.complex, false)?;
    let (lo, hi) = (left.complex.lo(), left.complex.hi());
    let maps = (lo..=hi)
        .map(|n| {
            let tdim = right.complex.term_dim(n)?;
            let mut cols = Vec::new();
            for c in left.degree(n) {
                let i = c.i;
                let m = i + n;
                let xi = x.term(i)?;
                for phi in c.space.basis() {
                    let mut col = vec![0u32; tdim];
                    for e in zy.degree(m) {
                        let k = e.i;
                        let Some(target) = right.degree(n).iter().find(|r| r.i == k) else { continue };
                        let q = k + m - i;
                        let Some(xc) = xy.degree(q).iter().find(|r| r.i == i) else { continue };
                        let zk = e.space.source();
                        let qdim = xy.complex.term_dim(q)?;
                        let block = phi.submatrix(e.offset, 0, e.space.dim(), xi.dim());
                        let neg = sign(i * k);
                        let zcols: Vec<Vec<u32>> = (0..zk.dim())
                            .map(|zc| {
                                let xcols: Vec<Vec<u32>> = (0..xi.dim())
                                    .map(|r| e.space.combine(&block.column(r)).column(zc))
                                    .collect();
                                let mxy = FpMatrix::from_columns(p, xc.space.target().dim(), &xcols);
                                let mut v = vec![0u32; qdim];
                                scatter(&mut v, xc.offset, &xc.space.coordinates_unchecked(&mxy), if neg { p - 1 } else { 1 }, p);
                                v
                            })
                            .collect();
                        let mz = FpMatrix::from_columns(p, qdim, &zcols);
                        scatter(&mut col, target.offset, &target.space.coordinates_unchecked(&mz), 1, p);
                    }
                    cols.push(col);
                }
            }
            Ok(FpMatrix::from_columns(p, tdim, &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    finish(left.complex, right.complex, lo, maps)
}
