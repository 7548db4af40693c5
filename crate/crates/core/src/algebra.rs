//! Commutants and generated *-algebras of finite matrix families.

use crate::error::{Error, Result};
use crate::matrix::{ensure_shape, identity, kron, nullspace_scaled, RankPolicy};
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::{orthonormalize, MatrixSubspace};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet<T: Real> {
    ambient_dim: usize,
    gens: Vec<ComplexMatrix<T>>,
}

impl<T: Real> GeneratorSet<T> {
    pub fn new(gens: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptyGenerators)?;
        let n = crate::matrix::ensure_square(first)?;
        for g in &gens {
            ensure_shape(g, n, n)?;
        }
        Ok(Self { ambient_dim: n, gens })
    }

    pub fn from_subspace(s: &MatrixSubspace<T>) -> Result<Self> {
        Self::new(s.basis().to_vec())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn gens(&self) -> &[ComplexMatrix<T>] {
        &self.gens
    }

    /// Adds `1` to the family.
    pub fn with_identity(mut self) -> Self {
        self.gens.push(identity(self.ambient_dim));
        self
    }

    pub fn commutant(&self, policy: RankPolicy<T>) -> MatrixSubspace<T> {
        commutant(self, policy)
    }
}

/// `{x : xG = Gx and xG* = G*x for all G}`, solved as one joint nullspace.
pub fn commutant<T: Real>(g: &GeneratorSet<T>, policy: RankPolicy<T>) -> MatrixSubspace<T> {
    let n = g.ambient_dim;
    let nn = n * n;
    let id = identity::<T>(n);
    let mut stacked = ComplexMatrix::zeros(2 * g.gens.len() * nn, nn);
    let mut scale = T::zero();
    for (i, gen) in g.gens.iter().enumerate() {
        scale = scale.max(gen.norm());
        for (j, op) in [gen.clone(), gen.adjoint()].iter().enumerate() {
            // vec(Gx − xG) = (1 ⊗ G − Gᵀ ⊗ 1) vec(x)
            let ad = kron(&id, op) - kron(&op.transpose(), &id);
            stacked.view_mut(((2 * i + j) * nn, 0), (nn, nn)).copy_from(&ad);
        }
    }
    let null = nullspace_scaled(&stacked, policy, scale * T::lit(2.0));
    MatrixSubspace::from_orthonormal_vectors(n, &null)
}

/// Smallest subspace containing the generators and their adjoints that is
/// closed under products. The identity is only included if it is generated.
///
/// Repeated products amplify rounding when the generated algebra has a
/// clustered spectrum (the powers of one element become nearly dependent), so
/// prefer commutants for anything beyond small, well-separated families.
pub fn algebra_closure<T: Real>(g: &GeneratorSet<T>, tol: T) -> Result<MatrixSubspace<T>> {
    let n = g.ambient_dim;
    let cap = n * n;
    let mut seeds: Vec<ComplexMatrix<T>> = g.gens.clone();
    seeds.extend(g.gens.iter().map(|x| x.adjoint()));
    let mut current = orthonormalize(n, &seeds, tol)?;
    loop {
        let basis = current.basis();
        let mut candidates = basis.to_vec();
        for a in basis {
            for b in basis {
                candidates.push(a * b);
            }
        }
        let next = orthonormalize(n, &candidates, tol)?;
        if next.dim() > cap {
            return Err(Error::ClosureOverflow(cap));
        }
        if next.dim() == current.dim() {
            return Ok(next);
        }
        current = next;
    }
}

/// Commutant of everything in `s` (as a generator family).
pub fn commutant_of_subspace<T: Real>(s: &MatrixSubspace<T>, policy: RankPolicy<T>) -> MatrixSubspace<T> {
    match GeneratorSet::from_subspace(s) {
        Ok(g) => commutant(&g, policy),
        Err(_) => MatrixSubspace::full(s.ambient_dim()),
    }
}
