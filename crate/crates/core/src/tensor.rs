//! Tensor products `M ⊗_A N` of a right module and a left module.
//!
//! Every basis element of the product is the image of a single pure tensor,
//! which makes induced maps a matter of pushing that tensor forward.

use crate::error::{Error, Result};
use crate::linalg::{quotient_map, FpMatrix, Quotient, Subspace};
use crate::module::FdModule;

#[derive(Clone, Debug)]
enum Shape {
    /// `A^r ⊗ N ≅ N^r`.
    FreeLeft { rank: usize },
    /// `M ⊗ A^s ≅ M^s`.
    FreeRight { rank: usize },
    /// `(M ⊗_k N) / relations`.
    Quotient(Quotient),
}

#[derive(Clone, Debug)]
pub struct TensorProduct {
    left: FdModule,
    right: FdModule,
    shape: Shape,
    dim: usize,
}

/// `M ⊗_A N` for `M` over `A°` and `N` over `A`.
pub fn tensor(m: &FdModule, n: &FdModule) -> Result<TensorProduct> {
    if *m.algebra() != n.algebra().opposite() {
        return Err(Error::AlgebraMismatch(
            "the left factor must be a module over the opposite of the right factor's algebra".into(),
        ));
    }
    Ok(tensor_unchecked(m, n))
}

pub(crate) fn tensor_unchecked(m: &FdModule, n: &FdModule) -> TensorProduct {
    let (shape, dim) = if let Some(r) = m.free_rank() {
        (Shape::FreeLeft { rank: r }, r * n.dim())
    } else if let Some(s) = n.free_rank() {
        (Shape::FreeRight { rank: s }, s * m.dim())
    } else {
        let q = relation_quotient(m, n);
        let d = q.dim();
        (Shape::Quotient(q), d)
    };
    TensorProduct { left: m.clone(), right: n.clone(), shape, dim }
}

fn relation_quotient(m: &FdModule, n: &FdModule) -> Quotient {
    let p = m.modulus();
    let total = m.dim() * n.dim();
    let a = n.algebra();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    // Relations for algebra generators suffice: x·ab ⊗ y ≡ x·a ⊗ by ≡ x ⊗ aby.
    for &g in a.generating_indices() {
        let rel = m
            .action(g)
            .kron(&FpMatrix::identity(p, n.dim()))
            .sub(&FpMatrix::identity(p, m.dim()).kron(n.action(g)))
            .expect("same shape");
        let t = rel.transpose();
        for r in 0..t.rows() {
            let row = t.row(r);
            if row.iter().any(|&v| v != 0) {
                rows.push(row.to_vec());
            }
        }
    }
    let sub = Subspace::from_vectors(p, total, &rows);
    quotient_map(total, &sub).expect("relations live in M ⊗ N")
}

impl TensorProduct {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &FdModule {
        &self.left
    }

    pub fn right(&self) -> &FdModule {
        &self.right
    }

    /// Class of `x ⊗ y`.
    pub fn project_pure(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let p = self.left.modulus();
        match &self.shape {
            Shape::FreeLeft { rank } => {
                let d = self.right.algebra().dim();
                let mut out = Vec::with_capacity(self.dim);
                for a in 0..*rank {
                    let xa = &x[a * d..(a + 1) * d];
                    out.extend(self.right.action_of(xa).mul_vec(y));
                }
                out
            }
            Shape::FreeRight { rank } => {
                let d = self.right.algebra().dim();
                let mut out = Vec::with_capacity(self.dim);
                for b in 0..*rank {
                    let yb = &y[b * d..(b + 1) * d];
                    out.extend(self.left.action_of(yb).mul_vec(x));
                }
                out
            }
            Shape::Quotient(q) => {
                let ny = y.len();
                let mut v = vec![0u32; x.len() * ny];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        if yj != 0 {
                            v[i * ny + j] = crate::linalg::mul_mod(xi, yj, p);
                        }
                    }
                }
                q.projection.mul_vec(&v)
            }
        }
    }

    /// A pure tensor `x ⊗ y` whose class is basis vector `t`.
    pub fn lift(&self, t: usize) -> (Vec<u32>, Vec<u32>) {
        let (mdim, ndim) = (self.left.dim(), self.right.dim());
        let d = self.right.algebra().dim();
        let e = |len: usize, i: usize| {
            let mut v = vec![0u32; len];
            v[i] = 1;
            v
        };
        let unit_in_block = |len: usize, block: usize| {
            let mut v = vec![0u32; len];
            v[block * d..(block + 1) * d].copy_from_slice(self.right.algebra().unit());
            v
        };
        match &self.shape {
            Shape::FreeLeft { .. } => (unit_in_block(mdim, t / ndim), e(ndim, t % ndim)),
            Shape::FreeRight { .. } => (e(mdim, t % mdim), unit_in_block(ndim, t / mdim)),
            Shape::Quotient(q) => {
                let c = q.complement[t];
                (e(mdim, c / ndim), e(ndim, c % ndim))
            }
        }
    }

    /// Matrix of `f ⊗ g: self → to` for `f: M → M'` and `g: N → N'`.
    pub fn induced(&self, f: &FpMatrix, g: &FpMatrix, to: &TensorProduct) -> FpMatrix {
        let p = self.left.modulus();
        let cols: Vec<Vec<u32>> = (0..self.dim)
            .map(|t| {
                let (x, y) = self.lift(t);
                to.project_pure(&f.mul_vec(&x), &g.mul_vec(&y))
            })
            .collect();
        FpMatrix::from_columns(p, to.dim(), &cols)
    }

    /// Matrix of the canonical surjection `M ⊗_k N → M ⊗_A N`.
    pub fn projection_matrix(&self) -> FpMatrix {
        let p = self.left.modulus();
        let (mdim, ndim) = (self.left.dim(), self.right.dim());
        let mut cols = Vec::with_capacity(mdim * ndim);
        for i in 0..mdim {
            let mut x = vec![0; mdim];
            x[i] = 1;
            for j in 0..ndim {
                let mut y = vec![0; ndim];
                y[j] = 1;
                cols.push(self.project_pure(&x, &y));
            }
        }
        FpMatrix::from_columns(p, self.dim, &cols)
    }
}
