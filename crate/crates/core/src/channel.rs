//! Heisenberg-picture Kraus channels `φ(x) = Σ A_i* x A_i`.
//!
//! Dilation layout: `V` is the `(n·m) × n` stack `[A_1; …; A_m]`, so block
//! `i` belongs to environment basis vector `e_i`. In this layout the abstract
//! `x ⊗ 1_K` is the block-diagonal `1_m ⊗ x` and `1_H ⊗ P` is `P ⊗ 1_n`
//! (Kronecker order environment-major). [`StinespringDilation::lift`] and
//! [`lift_environment`] hide that.

use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{
    column_space, ensure_shape, ensure_square, frobenius, hermitian_eigenvalues, hs_inner,
    identity, is_finite, kron, matrix_unit, matrix_units, projector, vectorize, RankPolicy,
};
use crate::scalar::{modulus, Complex, ComplexMatrix, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    dim: usize,
    kraus: Vec<ComplexMatrix<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelFlags<T> {
    pub unital: bool,
    pub trace_preserving: bool,
    /// `‖Σ A_i* A_i − 1‖_F`
    pub unital_residual: T,
    /// `‖Σ A_i A_i* − 1‖_F`
    pub trace_residual: T,
}

impl<T> ChannelFlags<T> {
    pub fn is_valid(&self) -> bool {
        self.unital && self.trace_preserving
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StinespringDilation<T: Real> {
    pub n: usize,
    pub m: usize,
    pub v: ComplexMatrix<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeProjector<T: Real> {
    /// Projector onto `span{(x ⊗ 1) V u}` in `H ⊗ 𝔥_m`.
    pub p_tilde: ComplexMatrix<T>,
    /// Environment projector `P` with `P̃ = 1 ⊗ P`.
    pub p_env: ComplexMatrix<T>,
    pub factorization_residual: T,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausReduction<T: Real> {
    pub reduced: KrausChannel<T>,
    /// `m × l` isometry `v` with `B_j = Σ_i v_{ij} A_i`.
    pub mixing: ComplexMatrix<T>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKraus)?;
        let dim = ensure_square(first)?;
        for a in &kraus {
            ensure_shape(a, dim, dim)?;
            if !is_finite(a) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            dim: n,
            kraus: vec![identity(n)],
        }
    }

    /// `φ(x) = U* x U`.
    pub fn unitary(u: ComplexMatrix<T>) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn into_kraus(self) -> Vec<ComplexMatrix<T>> {
        self.kraus
    }

    pub fn validate(&self, tol: T) -> ChannelFlags<T> {
        let n = self.dim;
        let mut heis = ComplexMatrix::zeros(n, n);
        let mut schr = ComplexMatrix::zeros(n, n);
        for a in &self.kraus {
            heis += a.adjoint() * a;
            schr += a * a.adjoint();
        }
        let unital_residual = frobenius(&(heis - identity::<T>(n)));
        let trace_residual = frobenius(&(schr - identity::<T>(n)));
        ChannelFlags {
            unital: unital_residual < tol,
            trace_preserving: trace_residual < tol,
            unital_residual,
            trace_residual,
        }
    }

    /// Like [`validate`](Self::validate) but fails unless the channel is
    /// unital and trace preserving.
    pub fn require_valid(&self, tol: T) -> Result<ChannelFlags<T>> {
        let flags = self.validate(tol);
        if !flags.unital {
            return Err(Error::NotUnital(flags.unital_residual.as_f64()));
        }
        if !flags.trace_preserving {
            return Err(Error::NotTracePreserving(flags.trace_residual.as_f64()));
        }
        Ok(flags)
    }

    pub fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        ensure_shape(x, self.dim, self.dim)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.kraus {
            out += a.adjoint() * x * a;
        }
        out
    }

    /// Dissipation `D(x) = φ(x*x) − φ(x)*φ(x)`, positive semidefinite for a
    /// unital channel.
    pub fn dissipation(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        ensure_shape(x, self.dim, self.dim)?;
        let fx = self.apply_unchecked(x);
        Ok(self.apply_unchecked(&(x.adjoint() * x)) - fx.adjoint() * fx)
    }

    /// `n² × n²` matrix of `φ` acting on column-major vectorized matrices.
    pub fn transfer_matrix(&self) -> ComplexMatrix<T> {
        let n = self.dim;
        let mut t = ComplexMatrix::zeros(n * n, n * n);
        for (col, e) in matrix_units::<T>(n).iter().enumerate() {
            t.set_column(col, &vectorize(&self.apply_unchecked(e)));
        }
        t
    }

    pub fn stinespring(&self) -> StinespringDilation<T> {
        let (n, m) = (self.dim, self.kraus.len());
        let mut v = ComplexMatrix::zeros(n * m, n);
        for (i, a) in self.kraus.iter().enumerate() {
            v.view_mut((i * n, 0), (n, n)).copy_from(a);
        }
        StinespringDilation { n, m, v }
    }

    /// `Σ_{ij} A_i A_j* ⊗ |e_i⟩⟨e_j|`, assembled term by term.
    pub fn product_blocks(&self) -> ComplexMatrix<T> {
        let (n, m) = (self.dim, self.kraus.len());
        let mut out = ComplexMatrix::zeros(n * m, n * m);
        for (i, a) in self.kraus.iter().enumerate() {
            for (j, b) in self.kraus.iter().enumerate() {
                out += kron(&matrix_unit(m, i, j), &(a * b.adjoint()));
            }
        }
        out
    }

    /// Projector onto `span{(E_kl ⊗ 1) V e_s}` and its environment factor.
    ///
    /// Fails with [`Error::Factorization`] if `P̃` is not `1 ⊗ P` to within
    /// `tol`, which would mean a bug rather than a property of the channel.
    pub fn range_projector(&self, policy: RankPolicy<T>, tol: T) -> Result<RangeProjector<T>> {
        let dil = self.stinespring();
        let (n, m) = (dil.n, dil.m);
        let mut spanning = ComplexMatrix::zeros(n * m, n * n * n);
        let mut col = 0;
        for e in matrix_units::<T>(n) {
            let image = dil.lift(&e) * &dil.v;
            for s in 0..n {
                spanning.set_column(col, &image.column(s));
                col += 1;
            }
        }
        let p_tilde = projector(n * m, &column_space(&spanning, policy));
        let scale = Complex::from(T::one() / T::from_usize(n).unwrap_or_else(T::one));
        let p_env = ComplexMatrix::from_fn(m, m, |i, j| {
            crate::matrix::trace(&p_tilde.view((i * n, j * n), (n, n)).into_owned()) * scale
        });
        let factorization_residual = frobenius(&(&p_tilde - lift_environment(&p_env, n)));
        if !(factorization_residual < tol) {
            return Err(Error::Factorization(factorization_residual.as_f64()));
        }
        let half = T::lit(0.5);
        let rank = hermitian_eigenvalues(&p_env).iter().filter(|&&l| l > half).count();
        Ok(RangeProjector {
            p_tilde,
            p_env,
            factorization_residual,
            rank,
        })
    }

    /// Gram matrix `G_{ik} = Tr(A_i* A_k)` of the Kraus operators.
    pub fn kraus_gram(&self) -> ComplexMatrix<T> {
        let m = self.kraus.len();
        ComplexMatrix::from_fn(m, m, |i, k| {
            hs_inner(&self.kraus[i], &self.kraus[k]).expect("Kraus operators share a shape")
        })
    }

    /// Re-expresses the channel with `l = dim span{A_i}` linearly
    /// independent operators `B_j = Σ_i v_{ij} A_i`.
    ///
    /// The columns of `v` are the Gram eigenvectors with nonzero eigenvalue,
    /// ordered by decreasing eigenvalue, each rotated so its largest entry is
    /// real and positive. An already independent list is returned unchanged.
    pub fn reduce_kraus(&self, policy: RankPolicy<T>) -> KrausReduction<T> {
        let m = self.kraus.len();
        let eig = crate::matrix::symmetrize(&self.kraus_gram()).symmetric_eigen();
        let lambda_max = eig.eigenvalues.iter().copied().fold(T::zero(), T::max);
        let tau = policy.threshold(lambda_max, T::zero(), m, m);
        let mut keep: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > tau).collect();
        if keep.len() == m {
            return KrausReduction {
                reduced: self.clone(),
                mixing: identity(m),
            };
        }
        keep.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .partial_cmp(&eig.eigenvalues[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut mixing = ComplexMatrix::zeros(m, keep.len());
        for (j, &idx) in keep.iter().enumerate() {
            let mut col = eig.eigenvectors.column(idx).into_owned();
            let pivot = col
                .iter()
                .copied()
                .max_by(|a, b| modulus(*a).partial_cmp(&modulus(*b)).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or_else(Complex::one);
            if modulus(pivot) > T::zero() {
                let phase = pivot.conj().unscale(modulus(pivot));
                col *= phase;
            }
            mixing.set_column(j, &col);
        }
        let reduced = self.mix(&mixing);
        KrausReduction { reduced, mixing }
    }

    /// Kraus list `A'_p = Σ_i w_{pi} A_i` for an `m' × m` isometry `w`.
    pub fn equivalent_rep(&self, w: &ComplexMatrix<T>, tol: T) -> Result<Self> {
        let m = self.kraus.len();
        if w.ncols() != m {
            return Err(Error::Shape {
                expected: (w.nrows(), m),
                found: w.shape(),
            });
        }
        let defect = frobenius(&(w.adjoint() * w - identity::<T>(m)));
        if !(defect < tol) {
            return Err(Error::NotIsometry(defect.as_f64()));
        }
        let kraus = (0..w.nrows())
            .map(|p| self.combine(|i| w[(p, i)]))
            .collect();
        Ok(Self { dim: self.dim, kraus })
    }

    /// Columns of `mixing` as coefficient vectors: `B_j = Σ_i mixing_{ij} A_i`.
    fn mix(&self, mixing: &ComplexMatrix<T>) -> Self {
        let kraus = (0..mixing.ncols())
            .map(|j| self.combine(|i| mixing[(i, j)]))
            .collect();
        Self { dim: self.dim, kraus }
    }

    fn combine(&self, coeff: impl Fn(usize) -> Complex<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (i, a) in self.kraus.iter().enumerate() {
            out += a * coeff(i);
        }
        out
    }

    /// Largest `‖φ(E_kl) − ψ(E_kl)‖_F` over the matrix units.
    pub fn action_distance(&self, other: &Self) -> Result<T> {
        if other.dim != self.dim {
            return Err(Error::Shape {
                expected: (self.dim, self.dim),
                found: (other.dim, other.dim),
            });
        }
        Ok(matrix_units::<T>(self.dim)
            .iter()
            .map(|e| frobenius(&(self.apply_unchecked(e) - other.apply_unchecked(e))))
            .fold(T::zero(), T::max))
    }
}

impl<T: Real> StinespringDilation<T> {
    /// `x ⊗ 1_K` in the stacked layout: `m` copies of `x` on the diagonal.
    pub fn lift(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        kron(&identity(self.m), x)
    }

    /// `V* (x ⊗ 1) V`.
    pub fn compress(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        ensure_shape(x, self.n, self.n)?;
        Ok(self.v.adjoint() * self.lift(x) * &self.v)
    }

    pub fn v_star_v(&self) -> ComplexMatrix<T> {
        self.v.adjoint() * &self.v
    }

    pub fn v_v_star(&self) -> ComplexMatrix<T> {
        &self.v * self.v.adjoint()
    }

    /// Block `i` of `V`, i.e. `(1 ⊗ ⟨e_i|) V`.
    pub fn block(&self, i: usize) -> ComplexMatrix<T> {
        self.v.view((i * self.n, 0), (self.n, self.n)).into_owned()
    }
}

/// `1_H ⊗ p` in the stacked layout, for an environment operator `p`.
pub fn lift_environment<T: Real>(p: &ComplexMatrix<T>, n: usize) -> ComplexMatrix<T> {
    kron(p, &identity(n))
}
