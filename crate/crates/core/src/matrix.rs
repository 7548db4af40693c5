//! Dense complex matrix helpers: Hilbert-Schmidt geometry, hermitian
//! decompositions, and SVD-based nullspaces and ranges.
//!
//! Matrices are vectorized column-major (`vec(x)[k + n*l] = x[(k, l)]`), which
//! is nalgebra's storage order, so `vec(a x b) = (bᵀ ⊗ a) vec(x)`.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Complex, ComplexMatrix, ComplexVector, Real};

/// Singular-value cut for rank decisions.
///
/// A singular value `σ` counts as zero when
/// `σ <= rel_tol · max(σ_max, scale) · max(rows, cols)`. The `scale` is a
/// caller-supplied size of the operator family being solved; it keeps a
/// matrix that is pure rounding noise from being read as full rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankPolicy<T> {
    pub rel_tol: T,
}

impl<T: Real> RankPolicy<T> {
    pub fn new(rel_tol: T) -> Self {
        Self { rel_tol }
    }

    pub fn threshold(&self, sigma_max: T, scale: T, rows: usize, cols: usize) -> T {
        let size = T::from_usize(rows.max(cols)).unwrap_or_else(T::one);
        self.rel_tol * sigma_max.max(scale) * size
    }
}

impl<T: Real> Default for RankPolicy<T> {
    fn default() -> Self {
        Self::new(T::lit(T::RANK_RTOL))
    }
}

pub(crate) fn ensure_square<T: Real>(x: &ComplexMatrix<T>) -> Result<usize> {
    if x.nrows() != x.ncols() {
        return Err(Error::NotSquare(x.nrows(), x.ncols()));
    }
    Ok(x.nrows())
}

pub(crate) fn ensure_shape<T: Real>(x: &ComplexMatrix<T>, rows: usize, cols: usize) -> Result<()> {
    if x.shape() != (rows, cols) {
        return Err(Error::Shape {
            expected: (rows, cols),
            found: x.shape(),
        });
    }
    Ok(())
}

pub fn is_finite<T: Real>(x: &ComplexMatrix<T>) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn identity<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(n, n)
}

/// Matrix unit `E_{kl}` (a single one at row `k`, column `l`).
pub fn matrix_unit<T: Real>(n: usize, k: usize, l: usize) -> ComplexMatrix<T> {
    let mut e = ComplexMatrix::zeros(n, n);
    e[(k, l)] = Complex::one();
    e
}

/// All `n²` matrix units, ordered to match column-major vectorization.
pub fn matrix_units<T: Real>(n: usize) -> Vec<ComplexMatrix<T>> {
    (0..n)
        .flat_map(|l| (0..n).map(move |k| (k, l)))
        .map(|(k, l)| matrix_unit(n, k, l))
        .collect()
}

pub fn frobenius<T: Real>(x: &ComplexMatrix<T>) -> T {
    x.norm()
}

pub fn vectorize<T: Real>(x: &ComplexMatrix<T>) -> ComplexVector<T> {
    ComplexVector::from_column_slice(x.as_slice())
}

pub fn unvectorize<T: Real>(v: &ComplexVector<T>, n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_column_slice(n, n, v.as_slice())
}

pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kronecker(b)
}

pub fn trace<T: Real>(x: &ComplexMatrix<T>) -> Complex<T> {
    x.diagonal().iter().fold(Complex::zero(), |acc, z| acc + z)
}

/// Hilbert-Schmidt inner product `Tr(a* b)`.
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<Complex<T>> {
    ensure_square(a)?;
    ensure_shape(b, a.nrows(), a.ncols())?;
    Ok(a.iter()
        .zip(b.iter())
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y))
}

/// Splits `x` into hermitian `x₁, x₂` with `x = x₁ + i·x₂`.
pub fn hermitian_parts<T: Real>(
    x: &ComplexMatrix<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    ensure_square(x)?;
    let adj = x.adjoint();
    let half = T::lit(0.5);
    let re = (x + &adj).map(|z| z * half);
    // (x - x*)/(2i) = -i (x - x*)/2
    let im = (x - &adj).map(|z| Complex::new(z.im, -z.re) * half);
    Ok((re, im))
}

/// Frobenius norm of `x - x*`.
pub fn hermiticity_defect<T: Real>(x: &ComplexMatrix<T>) -> T {
    (x - x.adjoint()).norm()
}

/// Eigenvalues of the hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> DVector<T> {
    let h = symmetrize(a);
    let mut ev: Vec<T> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    DVector::from_vec(ev)
}

pub(crate) fn symmetrize<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let half = T::lit(0.5);
    (a + a.adjoint()).map(|z| z * half)
}

/// Positive semidefiniteness of a hermitian matrix:
/// `λ_min ≥ -tol · max(1, λ_max)`.
pub fn is_psd<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    let n = ensure_square(a)?;
    if n == 0 {
        return Ok(true);
    }
    let defect = hermiticity_defect(a);
    if defect > tol * T::one().max(a.norm()) {
        return Err(Error::NotHermitian(defect.as_f64()));
    }
    let ev = hermitian_eigenvalues(a);
    Ok(ev[0] >= -tol * T::one().max(ev[n - 1]))
}

/// Applies `f` to the spectrum of the hermitian part of `a`.
pub fn hermitian_function<T: Real>(a: &ComplexMatrix<T>, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
    let eig = symmetrize(a).symmetric_eigen();
    let vals = eig.eigenvalues.map(|l| Complex::from(f(l)));
    let u = &eig.eigenvectors;
    let out = u * ComplexMatrix::from_diagonal(&vals) * u.adjoint();
    symmetrize(&out)
}

/// Square root of a positive semidefinite matrix; negative rounding
/// eigenvalues are clamped to zero.
pub fn psd_sqrt<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    hermitian_function(a, |l| l.max(T::zero()).sqrt())
}

/// Orthonormal basis of `{v : m v = 0}`.
pub fn nullspace<T: Real>(m: &ComplexMatrix<T>, policy: RankPolicy<T>) -> Vec<ComplexVector<T>> {
    nullspace_scaled(m, policy, T::zero())
}

/// [`nullspace`] with an explicit magnitude floor for the rank cut.
pub fn nullspace_scaled<T: Real>(
    m: &ComplexMatrix<T>,
    policy: RankPolicy<T>,
    scale: T,
) -> Vec<ComplexVector<T>> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        return (0..cols)
            .map(|j| ComplexVector::from_fn(cols, |i, _| if i == j { Complex::one() } else { Complex::zero() }))
            .collect();
    }
    // Pad wide inputs so the SVD returns a complete right basis.
    let square;
    let work = if rows < cols {
        let mut padded = ComplexMatrix::zeros(cols, cols);
        padded.rows_mut(0, rows).copy_from(m);
        square = padded;
        &square
    } else {
        m
    };
    let svd = work.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(T::zero(), T::max);
    let tau = policy.threshold(sigma_max, scale, rows, cols);
    sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tau)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space<T: Real>(m: &ComplexMatrix<T>, policy: RankPolicy<T>) -> Vec<ComplexVector<T>> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(T::zero(), T::max);
    let tau = policy.threshold(sigma_max, T::zero(), rows, cols);
    sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tau)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Orthogonal projector `Σ v v*` onto the span of orthonormal `vs`.
pub fn projector<T: Real>(dim: usize, vs: &[ComplexVector<T>]) -> ComplexMatrix<T> {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for v in vs {
        p += v * v.adjoint();
    }
    p
}

/// Real matrix viewed as complex.
pub fn complexify<T: Real>(m: &DMatrix<T>) -> ComplexMatrix<T> {
    m.map(Complex::from)
}

/// The Pauli matrices and other small fixtures.
pub mod pauli {
    use super::*;

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
        Complex::new(T::lit(re), T::lit(im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ComplexMatrix64 as M, C64};

    fn real(rows: usize, cols: usize, data: &[f64]) -> M {
        M::from_row_slice(rows, cols, &data.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn hs_inner_examples() {
        let one = identity::<f64>(2);
        assert_eq!(hs_inner(&one, &one).unwrap(), C64::new(2.0, 0.0));
        assert_eq!(hs_inner(&pauli::x::<f64>(), &pauli::z()).unwrap(), C64::new(0.0, 0.0));
        let a = real(2, 2, &[1., 0., 0., 2.]);
        let b = real(2, 2, &[3., 0., 0., 4.]);
        assert_eq!(hs_inner(&a, &b).unwrap(), C64::new(11.0, 0.0));
    }

    #[test]
    fn hs_inner_is_conjugate_linear_in_first_slot() {
        let y = pauli::y::<f64>();
        let iy = y.map(|z| z * C64::i());
        let v = hs_inner(&iy, &y).unwrap();
        assert!((v - C64::new(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn hs_inner_rejects_shape_mismatch() {
        let err = hs_inner(&identity::<f64>(2), &identity(3)).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
        assert!(matches!(hs_inner(&M::zeros(2, 3), &M::zeros(2, 3)), Err(Error::NotSquare(2, 3))));
    }

    #[test]
    fn hermitian_parts_examples() {
        let (a, b) = hermitian_parts(&identity::<f64>(2)).unwrap();
        assert_eq!(a, identity(2));
        assert_eq!(b, M::zeros(2, 2));

        let iz = pauli::z::<f64>().map(|z| z * C64::i());
        let (a, b) = hermitian_parts(&iz).unwrap();
        assert_eq!(a, M::zeros(2, 2));
        assert_eq!(b, pauli::z());

        // x₁ = (x + x*)/2 = X/2 and x₂ = (x - x*)/(2i) = Y/2, worked entrywise.
        let raising = real(2, 2, &[0., 1., 0., 0.]);
        let (a, b) = hermitian_parts(&raising).unwrap();
        assert!((a - pauli::x::<f64>() * C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((b - pauli::y::<f64>() * C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_parts_rejects_rectangular() {
        assert!(hermitian_parts(&M::zeros(2, 3)).is_err());
    }

    #[test]
    fn is_psd_examples() {
        assert!(is_psd(&M::zeros(2, 2), 1e-12).unwrap());
        assert!(!is_psd(&real(2, 2, &[1., 0., 0., -1.]), 1e-12).unwrap());
        assert!(is_psd(&real(2, 2, &[2., 1., 1., 2.]), 1e-12).unwrap());
        assert!(matches!(
            is_psd(&real(2, 2, &[0., 1., 0., 0.]), 1e-12),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&identity::<f64>(3), RankPolicy::default()).is_empty());

        let zero = nullspace(&M::zeros(2, 2), RankPolicy::default());
        assert_eq!(zero.len(), 2);
        assert!((zero[0].dotc(&zero[1])).norm() < 1e-15);

        let ones = real(2, 2, &[1., 1., 1., 1.]);
        let ns = nullspace(&ones, RankPolicy::default());
        assert_eq!(ns.len(), 1);
        let expected = real(2, 1, &[1., -1.]).column(0).into_owned() / C64::new(2f64.sqrt(), 0.0);
        assert!((ns[0].dotc(&expected).norm() - 1.0).abs() < 1e-14);
        assert!((&ones * &ns[0]).norm() < 1e-14);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = real(1, 3, &[1., 2., 3.]);
        let ns = nullspace(&m, RankPolicy::default());
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).norm() < 1e-14);
        }
    }

    #[test]
    fn column_space_rank() {
        let m = real(3, 2, &[1., 2., 2., 4., 3., 6.]);
        assert_eq!(column_space(&m, RankPolicy::default()).len(), 1);
        assert_eq!(column_space(&identity::<f64>(4), RankPolicy::default()).len(), 4);
    }

    #[test]
    fn vectorization_matches_kron_identity() {
        // vec(a x b) = (bᵀ ⊗ a) vec(x)
        let a = pauli::y::<f64>();
        let b = real(2, 2, &[1., 2., 3., 4.]);
        let x = real(2, 2, &[0., 5., -1., 2.]);
        let lhs = vectorize(&(&a * &x * &b));
        let rhs = kron(&b.transpose(), &a) * vectorize(&x);
        assert!((lhs - rhs).norm() < 1e-13);
        assert_eq!(unvectorize(&vectorize(&x), 2), x);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = real(2, 2, &[2., 1., 1., 2.]);
        let s = psd_sqrt(&a);
        assert!((&s * &s - a).norm() < 1e-14);
    }
}
