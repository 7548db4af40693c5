//! Complex-linear subspaces of `M_n`, carried by a Hilbert-Schmidt
//! orthonormal basis.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{ensure_shape, hs_inner, identity, projector, vectorize, unvectorize};
use crate::scalar::{ComplexMatrix, ComplexVector, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSubspace<T: Real> {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix<T>>,
}

impl<T: Real> MatrixSubspace<T> {
    /// Wraps a basis the caller knows to be orthonormal.
    pub(crate) fn from_orthonormal(ambient_dim: usize, basis: Vec<ComplexMatrix<T>>) -> Self {
        Self { ambient_dim, basis }
    }

    /// Subspace spanned by orthonormal vectors of length `n²`.
    pub(crate) fn from_orthonormal_vectors(ambient_dim: usize, vs: &[ComplexVector<T>]) -> Self {
        let basis = vs.iter().map(|v| unvectorize(v, ambient_dim)).collect();
        Self { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_orthonormal(ambient_dim, Vec::new())
    }

    /// All of `M_n`, spanned by the matrix units.
    pub fn full(ambient_dim: usize) -> Self {
        Self::from_orthonormal(ambient_dim, crate::matrix::matrix_units(ambient_dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix<T>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<ComplexMatrix<T>> {
        self.basis
    }

    /// `n² × n²` orthogonal projector onto the vectorized subspace.
    pub fn projector(&self) -> ComplexMatrix<T> {
        let vs: Vec<_> = self.basis.iter().map(vectorize).collect();
        projector(self.ambient_dim * self.ambient_dim, &vs)
    }

    /// Hilbert-Schmidt orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        ensure_shape(x, self.ambient_dim, self.ambient_dim)?;
        let mut out = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            out += b * hs_inner(b, x)?;
        }
        Ok(out)
    }

    /// `‖x − Π(x)‖_F`.
    pub fn distance_to(&self, x: &ComplexMatrix<T>) -> Result<T> {
        Ok((x - self.project(x)?).norm())
    }

    /// Membership test: `‖x − Π(x)‖_F < tol · max(1, ‖x‖_F)`.
    pub fn contains(&self, x: &ComplexMatrix<T>, tol: T) -> Result<bool> {
        Ok(self.distance_to(x)? < tol * T::one().max(x.norm()))
    }

    /// Largest entry of `|G − 1|` for the basis Gram matrix.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for (p, a) in self.basis.iter().enumerate() {
            for (q, b) in self.basis.iter().enumerate() {
                let g: crate::Complex<T> = a.iter().zip(b.iter()).fold(crate::Complex::zero(), |acc, (x, y)| acc + x.conj() * y);
                let target = if p == q { T::one() } else { T::zero() };
                worst = worst.max(crate::scalar::modulus(g - crate::Complex::from(target)));
            }
        }
        worst
    }

    /// Whether the subspace contains `1` and is closed under adjoint and product.
    pub fn is_unital_star_algebra(&self, tol: T) -> bool {
        let n = self.ambient_dim;
        let check = |x: &ComplexMatrix<T>| self.contains(x, tol).unwrap_or(false);
        if !check(&identity(n)) {
            return false;
        }
        self.basis.iter().all(|b| check(&b.adjoint()))
            && self
                .basis
                .iter()
                .all(|a| self.basis.iter().all(|b| check(&(a * b))))
    }
}

/// Modified Gram-Schmidt (two passes) over `vs`. A vector whose residual
/// after projection is below `tol · max_input_norm` is dropped.
pub fn orthonormalize<T: Real>(
    ambient_dim: usize,
    vs: &[ComplexMatrix<T>],
    tol: T,
) -> Result<MatrixSubspace<T>> {
    for v in vs {
        ensure_shape(v, ambient_dim, ambient_dim)?;
    }
    let max_norm = vs.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let cut = tol * max_norm;
    let mut basis: Vec<ComplexVector<T>> = Vec::new();
    for v in vs {
        let mut r = vectorize(v);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&r);
                r.axpy(-c, b, crate::Complex::from(T::one()));
            }
        }
        let norm = r.norm();
        if norm > cut && norm > T::zero() {
            basis.push(r.unscale(norm));
        }
    }
    Ok(MatrixSubspace::from_orthonormal_vectors(ambient_dim, &basis))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceComparison<T> {
    pub equal: bool,
    pub s1_in_s2: bool,
    pub s2_in_s1: bool,
    /// `‖Π₁ − Π₂‖_F`.
    pub distance: T,
    /// `‖(1 − Π₂) Π₁‖_F`.
    pub residual_12: T,
    /// `‖(1 − Π₁) Π₂‖_F`.
    pub residual_21: T,
}

pub fn compare_subspaces<T: Real>(
    s1: &MatrixSubspace<T>,
    s2: &MatrixSubspace<T>,
    tol: T,
) -> Result<SubspaceComparison<T>> {
    if s1.ambient_dim != s2.ambient_dim {
        return Err(Error::Shape {
            expected: (s1.ambient_dim, s1.ambient_dim),
            found: (s2.ambient_dim, s2.ambient_dim),
        });
    }
    let p1 = s1.projector();
    let p2 = s2.projector();
    let id = identity::<T>(p1.nrows());
    let residual_12 = ((&id - &p2) * &p1).norm();
    let residual_21 = ((&id - &p1) * &p2).norm();
    let s1_in_s2 = residual_12 < tol;
    let s2_in_s1 = residual_21 < tol;
    Ok(SubspaceComparison {
        equal: s1_in_s2 && s2_in_s1,
        s1_in_s2,
        s2_in_s1,
        distance: (p1 - p2).norm(),
        residual_12,
        residual_21,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::{ComplexMatrix64 as M, C64};

    fn span(ms: &[M]) -> MatrixSubspace<f64> {
        orthonormalize(2, ms, 1e-12).unwrap()
    }

    #[test]
    fn orthonormalize_examples() {
        let one = identity::<f64>(2);
        assert_eq!(span(&[one.clone(), &one * C64::new(2.0, 0.0)]).dim(), 1);
        let paulis = span(&[one.clone(), pauli::x(), pauli::y(), pauli::z()]);
        assert_eq!(paulis.dim(), 4);
        assert!(paulis.orthonormality_defect() < 1e-15);
        let nearly = pauli::x::<f64>() + pauli::y::<f64>() * C64::new(1e-16, 0.0);
        assert_eq!(span(&[pauli::x(), nearly]).dim(), 1);
        assert_eq!(orthonormalize::<f64>(2, &[], 1e-12).unwrap().dim(), 0);
    }

    #[test]
    fn compare_examples() {
        let one = identity::<f64>(2);
        let c = compare_subspaces(&span(std::slice::from_ref(&one)), &span(&[one.clone(), pauli::z()]), 1e-8).unwrap();
        assert!(c.s1_in_s2 && !c.s2_in_s1 && !c.equal);

        let c = compare_subspaces(&span(&[pauli::x()]), &span(&[pauli::x()]), 1e-8).unwrap();
        assert!(c.equal);
        assert!(c.distance < 1e-15);

        // diag = span{E00, E11} and span{1, X}: E00 = (1+Z)/2 projects to 1/2 ∉ diag-residual 0,
        // and X has zero overlap with the diagonal, so neither contains the other.
        let diag = span(&[crate::matrix::matrix_unit(2, 0, 0), crate::matrix::matrix_unit(2, 1, 1)]);
        let c = compare_subspaces(&diag, &span(&[one, pauli::x()]), 1e-8).unwrap();
        assert!(!c.s1_in_s2 && !c.s2_in_s1);
        // ‖(1−Π₂)Π₁‖² = Σ over the diag basis of squared residuals = ½ + ½.
        assert!((c.residual_12 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compare_rejects_ambient_mismatch() {
        let a = MatrixSubspace::<f64>::full(2);
        let b = MatrixSubspace::<f64>::full(3);
        assert!(compare_subspaces(&a, &b, 1e-8).is_err());
    }

    #[test]
    fn contains_examples() {
        let diag = span(&[crate::matrix::matrix_unit(2, 0, 0), crate::matrix::matrix_unit(2, 1, 1)]);
        assert!(diag.contains(&pauli::z(), 1e-10).unwrap());
        assert!(!diag.contains(&pauli::x(), 1e-10).unwrap());
        let ix = span(&[identity(2), pauli::x()]);
        let x = pauli::x::<f64>() + identity::<f64>(2) * C64::new(3.0, 0.0);
        assert!(ix.contains(&x, 1e-10).unwrap());
    }

    #[test]
    fn projector_is_hermitian_idempotent() {
        let s = span(&[identity(2), pauli::x(), pauli::y() + pauli::z()]);
        let p = s.projector();
        assert!((&p * &p - &p).norm() < 1e-10);
        assert!((&p - p.adjoint()).norm() < 1e-10);
    }

    #[test]
    fn full_space_is_a_star_algebra() {
        assert!(MatrixSubspace::<f64>::full(3).is_unital_star_algebra(1e-10));
        assert!(!span(&[pauli::x()]).is_unital_star_algebra(1e-10));
    }
}
