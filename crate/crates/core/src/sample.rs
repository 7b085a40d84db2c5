//! Seeded random modules, maps and complexes for property tests and corpus generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::complex::{Boundedness, WindowComplex};
use crate::hom::hom_space;
use crate::linalg::{FpMatrix, Subspace};
use crate::module::{FdModule, ModuleMap};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn vector(&mut self, p: u32, len: usize) -> Vec<u32> {
        (0..len).map(|_| self.rng.gen_range(0..p)).collect()
    }

    /// `A^r / (relations)` with `1 ≤ r ≤ max_rank` and up to `max_relations` random relations.
    pub fn quotient_of_free(&mut self, a: &Algebra, max_rank: usize, max_relations: usize) -> FdModule {
        let r = 1 + self.below(max_rank.max(1));
        let f = FdModule::free(a, r);
        let k = self.below(max_relations + 1);
        let rels: Vec<Vec<u32>> = (0..k).map(|_| self.vector(a.modulus(), f.dim())).collect();
        let sub = f.generated_by(&rels);
        f.quotient_unchecked(&sub).target().clone()
    }

    /// A random module: a cyclic-ish quotient of a free module, its dual over the
    /// opposite pulled back when the algebra is commutative, or a submodule of a free module.
    pub fn module(&mut self, a: &Algebra, max_rank: usize) -> FdModule {
        loop {
            let m = match self.below(3) {
                0 => self.quotient_of_free(a, max_rank, 2),
                1 if a.is_commutative() => self.quotient_of_free(a, max_rank, 2).dual(),
                _ => {
                    let r = 1 + self.below(max_rank.max(1));
                    let f = FdModule::free(a, r);
                    let gens: Vec<Vec<u32>> = (0..1 + self.below(2)).map(|_| self.vector(a.modulus(), f.dim())).collect();
                    let sub = f.generated_by(&gens);
                    f.submodule_unchecked(&sub).source().clone()
                }
            };
            if !m.is_zero() {
                return m;
            }
        }
    }

    /// A uniformly random element of `Hom(m, n)`.
    pub fn map(&mut self, m: &FdModule, n: &FdModule) -> ModuleMap {
        let h = hom_space(m, n).expect("same algebra");
        let c = self.vector(m.modulus(), h.dim());
        ModuleMap::unchecked(m.clone(), n.clone(), h.combine(&c))
    }

    /// A bounded complex on `[0, len-1]` with random terms and random differentials.
    pub fn bounded_complex(&mut self, a: &Algebra, len: usize, max_rank: usize, free_terms: bool) -> WindowComplex {
        let p = a.modulus();
        let mut terms = Vec::with_capacity(len);
        let mut diffs: Vec<FpMatrix> = Vec::new();
        let first = if free_terms { FdModule::free(a, 1 + self.below(max_rank)) } else { self.module(a, max_rank) };
        terms.push(first);
        for k in 1..len {
            let prev = &terms[k - 1];
            // ∂_k must land in ker ∂_{k-1}.
            let target_sub = match diffs.last() {
                None => Subspace::full(p, prev.dim()),
                Some(d) => d.kernel_basis(),
            };
            let kernel = prev.submodule_unchecked(&target_sub);
            let t = if free_terms { FdModule::free(a, 1 + self.below(max_rank)) } else { self.module(a, max_rank) };
            let f = self.map(&t, kernel.source());
            diffs.push(kernel.matrix().mul_unchecked(f.matrix()));
            terms.push(t);
        }
        // Stored with ∂ lowering degree: index 0 is degree 0.
        WindowComplex::new(a, 0, terms, diffs, Boundedness::Bounded).expect("random complex is valid")
    }
}
