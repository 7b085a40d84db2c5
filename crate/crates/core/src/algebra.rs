//! Finite-dimensional associative algebras over GF(p) given by structure constants.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{add_mod, check_modulus, quotient_map, FpMatrix, Subspace};

/// How the Jacobson radical was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadicalSource {
    Supplied,
    /// Kernel of an iterated Frobenius map; commutative algebras only.
    Frobenius,
    /// Kernel of the trace form; requires p > dim.
    TraceForm,
    Unavailable,
}

/// An associative unital algebra `b_i · b_j = Σ_k c[i][j][k] b_k`.
///
/// Cheap to clone. Equality compares the multiplication table and unit only.
#[derive(Clone)]
pub struct Algebra {
    inner: Arc<AlgebraData>,
}

struct AlgebraData {
    p: u32,
    dim: usize,
    mul: Vec<u32>,
    unit: Vec<u32>,
    supplied_radical: Option<Subspace>,
    commutative: bool,
    fingerprint: u64,
    left: Vec<FpMatrix>,
    right: Vec<FpMatrix>,
    opposite: OnceLock<Algebra>,
    radical: OnceLock<(Option<Subspace>, RadicalSource)>,
    generators: OnceLock<Vec<usize>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.fingerprint == other.inner.fingerprint
                && self.inner.p == other.inner.p
                && self.inner.dim == other.inner.dim
                && self.inner.mul == other.inner.mul
                && self.inner.unit == other.inner.unit)
    }
}

impl Eq for Algebra {}

impl Hash for Algebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.fingerprint.hash(state);
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(GF({}), dim {})", self.inner.p, self.inner.dim)
    }
}

impl Algebra {
    /// Validates associativity, the unit laws and (if given) the radical.
    ///
    /// `mul` is indexed `(i * dim + j) * dim + k`.
    pub fn new(p: u32, dim: usize, mul: Vec<u32>, unit: Vec<u32>, radical: Option<Subspace>) -> Result<Self> {
        check_modulus(p)?;
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if mul.len() != dim * dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                mul.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::InvalidAlgebra(format!("unit has {} coordinates, expected {dim}", unit.len())));
        }
        let mul: Vec<u32> = mul.into_iter().map(|c| c % p).collect();
        let unit: Vec<u32> = unit.into_iter().map(|c| c % p).collect();
        let a = Algebra::assemble(p, dim, mul, unit, None);
        a.check_associative()?;
        a.check_unit()?;
        match radical {
            Some(r) => {
                a.check_radical(&r)?;
                let AlgebraData { p, dim, mul, unit, .. } = Arc::try_unwrap(a.inner).ok().expect("fresh algebra");
                Ok(Algebra::assemble(p, dim, mul, unit, Some(r)))
            }
            None => Ok(a),
        }
    }

    fn assemble(p: u32, dim: usize, mul: Vec<u32>, unit: Vec<u32>, supplied_radical: Option<Subspace>) -> Self {
        let d = dim;
        let at = |i: usize, j: usize, k: usize| mul[(i * d + j) * d + k];
        let left = (0..d).map(|i| FpMatrix::from_fn(p, d, d, |k, j| at(i, j, k))).collect();
        let right = (0..d).map(|i| FpMatrix::from_fn(p, d, d, |k, j| at(j, i, k))).collect();
        let commutative = (0..d).all(|i| (0..d).all(|j| (0..d).all(|k| at(i, j, k) == at(j, i, k))));
        let mut h = DefaultHasher::new();
        (p, d, &mul, &unit).hash(&mut h);
        Algebra {
            inner: Arc::new(AlgebraData {
                p,
                dim,
                mul,
                unit,
                supplied_radical,
                commutative,
                fingerprint: h.finish(),
                left,
                right,
                opposite: OnceLock::new(),
                radical: OnceLock::new(),
                generators: OnceLock::new(),
            }),
        }
    }

    /// Builds an algebra from a closure giving `b_i · b_j` in coordinates.
    pub fn from_products(
        p: u32,
        dim: usize,
        unit: Vec<u32>,
        radical: Option<Subspace>,
        product: impl Fn(usize, usize) -> Vec<u32>,
    ) -> Result<Self> {
        let mut mul = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = product(i, j);
                debug_assert_eq!(v.len(), dim);
                mul.extend(v);
            }
        }
        Algebra::new(p, dim, mul, unit, radical)
    }

    fn check_associative(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                // L_i L_j = L_{b_i b_j}
                let lhs = self.left_mult(i).mul_unchecked(self.left_mult(j));
                let rhs = self.left_mult_of(&self.basis_product(i, j));
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!("associativity fails for b{i}·b{j}")));
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        let d = self.dim();
        if !self.left_mult_of(self.unit()).is_identity() || !self.right_mult_of(self.unit()).is_identity() {
            return Err(Error::InvalidAlgebra(format!(
                "unit {:?} is not a two-sided identity in dimension {d}",
                self.unit()
            )));
        }
        Ok(())
    }

    fn check_radical(&self, r: &Subspace) -> Result<()> {
        if r.ambient() != self.dim() || r.modulus() != self.modulus() {
            return Err(Error::InvalidAlgebra("radical basis has the wrong shape".into()));
        }
        for s in 0..r.dim() {
            let v = r.vector(s);
            for i in 0..self.dim() {
                let e = self.basis_vector(i);
                if !r.contains(&self.multiply(&e, v)) || !r.contains(&self.multiply(v, &e)) {
                    return Err(Error::InvalidAlgebra("radical is not a two-sided ideal".into()));
                }
            }
        }
        let mut power = r.clone();
        for _ in 0..=self.dim() {
            if power.dim() == 0 {
                return Ok(());
            }
            let mut products = Vec::new();
            for s in 0..r.dim() {
                for t in 0..power.dim() {
                    products.push(self.multiply(r.vector(s), power.vector(t)));
                }
            }
            power = Subspace::from_vectors(self.modulus(), self.dim(), &products);
        }
        Err(Error::InvalidAlgebra("radical is not nilpotent".into()))
    }

    pub fn modulus(&self) -> u32 {
        self.inner.p
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn unit(&self) -> &[u32] {
        &self.inner.unit
    }

    pub fn is_commutative(&self) -> bool {
        self.inner.commutative
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u32 {
        let d = self.dim();
        self.inner.mul[(i * d + j) * d + k]
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.inner.fingerprint
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<u32> {
        let d = self.dim();
        self.inner.mul[(i * d + j) * d..(i * d + j + 1) * d].to_vec()
    }

    /// Product of two elements given in coordinates.
    pub fn multiply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.left_mult_of(a).mul_vec(b)
    }

    /// Matrix of `x ↦ b_i x` on the regular module.
    pub fn left_mult(&self, i: usize) -> &FpMatrix {
        &self.inner.left[i]
    }

    /// Matrix of `x ↦ x b_i`.
    pub fn right_mult(&self, i: usize) -> &FpMatrix {
        &self.inner.right[i]
    }

    pub fn left_mult_of(&self, a: &[u32]) -> FpMatrix {
        combine(self.modulus(), self.dim(), &self.inner.left, a)
    }

    pub fn right_mult_of(&self, a: &[u32]) -> FpMatrix {
        combine(self.modulus(), self.dim(), &self.inner.right, a)
    }

    pub fn power(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = self.unit().to_vec();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Opposite algebra. Commutative algebras are their own opposite.
    pub fn opposite(&self) -> Algebra {
        if self.is_commutative() {
            return self.clone();
        }
        self.inner
            .opposite
            .get_or_init(|| {
                let d = self.dim();
                let mut mul = vec![0; d * d * d];
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            mul[(i * d + j) * d + k] = self.structure_constant(j, i, k);
                        }
                    }
                }
                let data = &self.inner;
                Algebra::assemble(data.p, d, mul, data.unit.clone(), data.supplied_radical.clone())
            })
            .clone()
    }

    /// Basis indices that together with the unit generate the algebra, chosen greedily.
    pub fn generating_indices(&self) -> &[usize] {
        self.inner.generators.get_or_init(|| {
            let p = self.modulus();
            let d = self.dim();
            let mut chosen: Vec<usize> = Vec::new();
            let mut span = Subspace::from_vectors(p, d, &[self.unit().to_vec()]);
            for i in 0..d {
                if span.dim() == d {
                    break;
                }
                if span.contains(&self.basis_vector(i)) {
                    continue;
                }
                chosen.push(i);
                span = self.closure(&chosen);
            }
            chosen
        })
    }

    /// Subalgebra generated by the unit and the given basis elements.
    fn closure(&self, gens: &[usize]) -> Subspace {
        let p = self.modulus();
        let d = self.dim();
        let mut span = Subspace::from_vectors(p, d, &[self.unit().to_vec()]);
        loop {
            let mut vectors: Vec<Vec<u32>> = (0..span.dim()).map(|s| span.vector(s).to_vec()).collect();
            for s in 0..span.dim() {
                for &g in gens {
                    vectors.push(self.left_mult(g).mul_vec(span.vector(s)));
                }
            }
            let next = Subspace::from_vectors(p, d, &vectors);
            if next.dim() == span.dim() {
                return next;
            }
            span = next;
        }
    }

    /// The Jacobson radical, if it can be determined.
    pub fn radical(&self) -> Option<&Subspace> {
        self.radical_with_source().0.as_ref()
    }

    pub fn radical_source(&self) -> RadicalSource {
        self.radical_with_source().1
    }

    fn radical_with_source(&self) -> &(Option<Subspace>, RadicalSource) {
        self.inner.radical.get_or_init(|| {
            if let Some(r) = &self.inner.supplied_radical {
                return (Some(r.clone()), RadicalSource::Supplied);
            }
            if self.is_commutative() {
                return (Some(self.frobenius_radical()), RadicalSource::Frobenius);
            }
            if self.modulus() as usize > self.dim() {
                return (Some(self.trace_form_radical()), RadicalSource::TraceForm);
            }
            (None, RadicalSource::Unavailable)
        })
    }

    pub(crate) fn supplied_radical(&self) -> Option<&Subspace> {
        self.inner.supplied_radical.as_ref()
    }

    /// Matrix of the Frobenius `a ↦ a^p`; linear only when the algebra is commutative.
    fn frobenius_matrix(&self) -> FpMatrix {
        let p = self.modulus();
        let cols: Vec<Vec<u32>> = (0..self.dim()).map(|i| self.power(&self.basis_vector(i), p as u64)).collect();
        FpMatrix::from_columns(p, self.dim(), &cols)
    }

    fn frobenius_radical(&self) -> Subspace {
        // Nilpotent elements of a d-dimensional algebra satisfy a^d = 0.
        let f = self.frobenius_matrix();
        let mut fe = f.clone();
        let mut pe = self.modulus() as usize;
        while pe < self.dim() {
            fe = f.mul_unchecked(&fe);
            pe *= self.modulus() as usize;
        }
        fe.kernel_basis()
    }

    fn trace_form_radical(&self) -> Subspace {
        let d = self.dim();
        let p = self.modulus();
        let gram = FpMatrix::from_fn(p, d, d, |i, j| {
            let prod = self.left_mult(i).mul_unchecked(self.left_mult(j));
            (0..d).fold(0, |acc, t| add_mod(acc, prod.get(t, t), p))
        });
        gram.kernel_basis()
    }

    /// Quotient algebra by a two-sided ideal; basis indexed by the non-pivot coordinates of `ideal`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Algebra> {
        let q = quotient_map(self.dim(), ideal)?;
        let qd = q.dim();
        if qd == 0 {
            return Err(Error::InvalidAlgebra("quotient by the whole algebra".into()));
        }
        let lifts: Vec<Vec<u32>> = q.complement.iter().map(|&c| self.basis_vector(c)).collect();
        let unit = q.project(self.unit());
        Algebra::from_products(self.modulus(), qd, unit, None, |s, t| {
            q.project(&self.multiply(&lifts[s], &lifts[t]))
        })
    }

    /// Dimension of `{a : a^p = a}`; for a commutative algebra this counts its local factors.
    pub fn frobenius_fixed_dim(&self) -> Option<usize> {
        if !self.is_commutative() {
            return None;
        }
        let f = self.frobenius_matrix();
        let id = FpMatrix::identity(self.modulus(), self.dim());
        Some(f.sub(&id).expect("same shape").kernel_basis().dim())
    }

    /// Whether the algebra is local; `None` when this cannot be decided without a radical.
    pub fn is_local(&self) -> Option<bool> {
        if self.is_commutative() {
            return self.frobenius_fixed_dim().map(|n| n == 1);
        }
        let rad = self.radical()?;
        let top = self.quotient(rad).ok()?;
        // Finite division rings are commutative.
        if !top.is_commutative() {
            return Some(false);
        }
        top.frobenius_fixed_dim().map(|n| n == 1)
    }

    /// The ground field GF(p) as a one-dimensional algebra.
    pub fn field(p: u32) -> Result<Algebra> {
        Algebra::new(p, 1, vec![1], vec![1], Some(Subspace::zero(p, 1)))
    }

    /// GF(p)[x]/(x^n) with basis 1, x, ..., x^{n-1}.
    pub fn truncated_polynomial(p: u32, n: usize) -> Result<Algebra> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("truncation degree must be positive".into()));
        }
        let radical = Subspace::from_vectors(
            p,
            n,
            &(1..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect::<Vec<_>>(),
        );
        let mut unit = vec![0; n];
        unit[0] = 1;
        Algebra::from_products(p, n, unit, Some(radical), |i, j| {
            let mut v = vec![0; n];
            if i + j < n {
                v[i + j] = 1;
            }
            v
        })
    }

    /// GF(p)[x_1, ..., x_r]/(x_1, ..., x_r)^2 with basis 1, x_1, ..., x_r.
    pub fn square_zero(p: u32, r: usize) -> Result<Algebra> {
        let d = r + 1;
        let radical = Subspace::from_vectors(
            p,
            d,
            &(1..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect::<Vec<_>>(),
        );
        let mut unit = vec![0; d];
        unit[0] = 1;
        Algebra::from_products(p, d, unit, Some(radical), |i, j| {
            let mut v = vec![0; d];
            match (i, j) {
                (0, j) => v[j] = 1,
                (i, 0) => v[i] = 1,
                _ => {}
            }
            v
        })
    }

    /// Upper triangular 2×2 matrices with basis e11, e12, e22.
    pub fn upper_triangular(p: u32) -> Result<Algebra> {
        let radical = Subspace::from_vectors(p, 3, &[vec![0, 1, 0]]);
        // (row, col) of each basis element
        let pos = [(0, 0), (0, 1), (1, 1)];
        Algebra::from_products(p, 3, vec![1, 0, 1], Some(radical), |i, j| {
            let mut v = vec![0; 3];
            let (a, b) = pos[i];
            let (c, e) = pos[j];
            if b == c {
                let k = pos.iter().position(|&x| x == (a, e)).expect("upper triangular");
                v[k] = 1;
            }
            v
        })
    }
}

fn combine(p: u32, d: usize, mats: &[FpMatrix], a: &[u32]) -> FpMatrix {
    let mut out = FpMatrix::zeros(p, d, d);
    for (m, &c) in mats.iter().zip(a) {
        if c != 0 {
            out.add_scaled(m, c);
        }
    }
    out
}

/// `Σ_i a_i M_i` for a family of equally shaped matrices.
pub(crate) fn linear_combination(p: u32, rows: usize, cols: usize, mats: &[FpMatrix], a: &[u32]) -> FpMatrix {
    let mut out = FpMatrix::zeros(p, rows, cols);
    for (m, &c) in mats.iter().zip(a) {
        if c != 0 {
            out.add_scaled(m, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_algebras_validate() {
        for a in [
            Algebra::field(5).unwrap(),
            Algebra::truncated_polynomial(2, 2).unwrap(),
            Algebra::truncated_polynomial(3, 3).unwrap(),
            Algebra::square_zero(2, 2).unwrap(),
            Algebra::upper_triangular(2).unwrap(),
        ] {
            assert!(a.check_associative().is_ok());
            assert!(a.radical().is_some());
        }
    }

    #[test]
    fn opposite_of_commutative_is_identical() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        assert_eq!(a.opposite(), a);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(a.opposite().structure_constant(i, j, k), a.structure_constant(i, j, k));
                }
            }
        }
    }

    #[test]
    fn opposite_of_upper_triangular_is_lower_triangular() {
        let a = Algebra::upper_triangular(2).unwrap();
        let o = a.opposite();
        assert_ne!(o, a);
        // In the opposite, e12 * e11 = e11 e12 = e12 and e11 * e12 = e12 e11 = 0.
        assert_eq!(o.basis_product(1, 0), vec![0, 1, 0]);
        assert_eq!(o.basis_product(0, 1), vec![0, 0, 0]);
        assert_eq!(o.basis_product(2, 1), vec![0, 1, 0]);
        assert_eq!(o.opposite(), a);
    }

    #[test]
    fn rejects_non_associative_table() {
        // b1 b1 = b1 but with unit b0 and b1 b1 = b0 + b1 and a broken entry
        let mut mul = vec![0; 8];
        let set = |m: &mut Vec<u32>, i: usize, j: usize, k: usize, v: u32| m[(i * 2 + j) * 2 + k] = v;
        set(&mut mul, 0, 0, 0, 1);
        set(&mut mul, 0, 1, 1, 1);
        set(&mut mul, 1, 0, 1, 1);
        set(&mut mul, 1, 1, 0, 1);
        assert!(Algebra::new(3, 2, mul.clone(), vec![1, 0], None).is_ok());
        set(&mut mul, 1, 0, 0, 1);
        assert!(Algebra::new(3, 2, mul, vec![1, 0], None).is_err());
    }

    #[test]
    fn rejects_bad_unit_and_bad_radical() {
        assert!(Algebra::new(2, 1, vec![1], vec![0], None).is_err());
        let bad = Subspace::full(2, 2);
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let err = Algebra::new(2, 2, a.inner.mul.clone(), vec![1, 0], Some(bad));
        assert!(err.is_err());
    }

    #[test]
    fn radicals_agree_across_methods() {
        let a = Algebra::truncated_polynomial(3, 3).unwrap();
        assert_eq!(a.frobenius_radical(), *a.radical().unwrap());
        // p = 5 > dim = 3: trace form applies too.
        let b = Algebra::truncated_polynomial(5, 3).unwrap();
        assert_eq!(b.trace_form_radical(), b.frobenius_radical());
        let c = Algebra::square_zero(2, 2).unwrap();
        assert_eq!(c.frobenius_radical().dim(), 2);
    }

    #[test]
    fn locality() {
        assert_eq!(Algebra::square_zero(2, 2).unwrap().is_local(), Some(true));
        assert_eq!(Algebra::field(5).unwrap().is_local(), Some(true));
        assert_eq!(Algebra::upper_triangular(2).unwrap().is_local(), Some(false));
        // GF(2) x GF(2)
        let split = Algebra::from_products(2, 2, vec![1, 1], None, |i, j| {
            let mut v = vec![0, 0];
            if i == j {
                v[i] = 1;
            }
            v
        })
        .unwrap();
        assert_eq!(split.is_local(), Some(false));
        assert_eq!(split.radical().unwrap().dim(), 0);
    }

    #[test]
    fn generators_are_minimal_for_named_algebras() {
        assert_eq!(Algebra::truncated_polynomial(3, 3).unwrap().generating_indices(), &[1]);
        assert_eq!(Algebra::square_zero(2, 2).unwrap().generating_indices(), &[1, 2]);
        assert_eq!(Algebra::field(7).unwrap().generating_indices(), &[] as &[usize]);
    }
}
