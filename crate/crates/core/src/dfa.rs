//! Decoherence-free subalgebra `N_φ`, fixed points `M_φ`, and the inclusion
//! chain `𝒜′ ⊆ M_φ ⊆ N_φ = ℬ′`, where `𝒜` and `ℬ` are the *-algebras
//! generated by `{A_i}` and `{A_i A_j*}`.

use nalgebra::DMatrix;

use crate::algebra::{commutant, GeneratorSet};
use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{
    hermiticity_defect, identity, is_psd, matrix_unit, nullspace_scaled, trace, RankPolicy,
};
use crate::random::{random_matrix, rng_from_seed};
use crate::scalar::{Complex, ComplexMatrix, Real};
use crate::subspace::{compare_subspaces, orthonormalize, MatrixSubspace};

/// The `m²` products `A_i A_j*`, duplicates kept.
pub fn generator_products<T: Real>(ch: &KrausChannel<T>) -> GeneratorSet<T> {
    let kraus = ch.kraus();
    let products = kraus
        .iter()
        .flat_map(|a| kraus.iter().map(move |b| a * b.adjoint()))
        .collect();
    GeneratorSet::new(products).expect("a channel has at least one Kraus operator")
}

/// `N_φ = {A_i A_j*}′`. Only unitality is needed for this to be the
/// decoherence-free algebra; trace preservation is not checked here.
pub fn decoherence_free_algebra<T: Real>(ch: &KrausChannel<T>, policy: RankPolicy<T>) -> MatrixSubspace<T> {
    commutant(&generator_products(ch), policy)
}

/// Orthonormal hermitian basis of `M_n`: `E_kk`, `(E_kl + E_lk)/√2` and
/// `i(E_kl − E_lk)/√2` for `k < l`.
pub fn hermitian_basis<T: Real>(n: usize) -> Vec<ComplexMatrix<T>> {
    let r = Complex::from(T::lit(std::f64::consts::FRAC_1_SQRT_2));
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        out.push(matrix_unit(n, k, k));
        for l in (k + 1)..n {
            let (ekl, elk) = (matrix_unit::<T>(n, k, l), matrix_unit::<T>(n, l, k));
            out.push((&ekl + &elk) * r);
            out.push((ekl - elk) * (Complex::<T>::i() * r));
        }
    }
    out
}

/// The real quadratic form `q(x) = Tr D(x)` on hermitian `x`, written in
/// [`hermitian_basis`] coordinates:
/// `Q_ab = Tr[φ(h_a ∘ h_b) − φ(h_a) ∘ φ(h_b)]` with `a ∘ b = (ab + ba)/2`.
pub fn dissipation_form<T: Real>(ch: &KrausChannel<T>) -> DMatrix<T> {
    let n = ch.dim();
    let basis = hermitian_basis::<T>(n);
    let images: Vec<_> = basis.iter().map(|h| ch.apply_unchecked(h)).collect();
    let half = Complex::from(T::lit(0.5));
    let d = basis.len();
    let mut q = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let jordan = (&basis[a] * &basis[b] + &basis[b] * &basis[a]) * half;
            let image_jordan = (&images[a] * &images[b] + &images[b] * &images[a]) * half;
            let value = (trace(&ch.apply_unchecked(&jordan)) - trace(&image_jordan)).re;
            q[(a, b)] = value;
            q[(b, a)] = value;
        }
    }
    q
}

/// `N_φ` straight from its definition.
///
/// `Tr D(x)` vanishes exactly when the PSD matrix `D(x)` does, so the
/// hermitian `x` with `φ(x²) = φ(x)²` form the kernel of [`dissipation_form`].
/// Returns the complex span of that kernel.
pub fn dfa_oracle<T: Real>(ch: &KrausChannel<T>, policy: RankPolicy<T>) -> Result<MatrixSubspace<T>> {
    let n = ch.dim();
    let q = dissipation_form(ch);
    let eig = q.clone().symmetric_eigen();
    let lo = eig.eigenvalues.iter().copied().fold(T::max_value().unwrap_or_else(T::one), T::min);
    let hi = eig.eigenvalues.iter().copied().fold(T::zero(), T::max);
    if lo < -T::lit(T::PSD_TOL) * T::one().max(hi) {
        return Err(Error::IndefiniteForm {
            min: lo.as_f64(),
            max: hi.as_f64(),
        });
    }
    let size = T::from_usize(n).unwrap_or_else(T::one);
    let tau = policy.threshold(hi, size, q.nrows(), q.ncols());
    let basis = hermitian_basis::<T>(n);
    let kernel: Vec<ComplexMatrix<T>> = (0..q.nrows())
        .filter(|&i| eig.eigenvalues[i].abs() <= tau)
        .map(|i| {
            let c = eig.eigenvectors.column(i);
            basis
                .iter()
                .zip(c.iter())
                .fold(ComplexMatrix::zeros(n, n), |acc, (h, &w)| acc + h * Complex::from(w))
        })
        .collect();
    // The kernel vectors are real-orthonormal and the basis is HS-orthonormal,
    // so this pass only normalizes away rounding.
    orthonormalize(n, &kernel, T::lit(1e-6))
}

/// `M_φ = {x : φ(x) = x}`.
pub fn fixed_point_algebra<T: Real>(ch: &KrausChannel<T>, policy: RankPolicy<T>) -> MatrixSubspace<T> {
    let n = ch.dim();
    let generator = ch.transfer_matrix() - identity::<T>(n * n);
    let null = nullspace_scaled(&generator, policy, T::one());
    MatrixSubspace::from_orthonormal_vectors(n, &null)
}

/// Largest `‖φ(ba) − φ(b)φ(a)‖_F` or `‖φ(ab) − φ(a)φ(b)‖_F` over every basis
/// element `a` of `nphi` and `trials` random unit-norm `b`.
pub fn choi_multiplicativity_check<T: Real>(
    ch: &KrausChannel<T>,
    nphi: &MatrixSubspace<T>,
    trials: usize,
    seed: u64,
) -> T {
    let mut rng = rng_from_seed(seed);
    let bs: Vec<ComplexMatrix<T>> = (0..trials).map(|_| random_matrix(ch.dim(), &mut rng)).collect();
    let mut worst = T::zero();
    for a in nphi.basis() {
        let fa = ch.apply_unchecked(a);
        for b in &bs {
            let fb = ch.apply_unchecked(b);
            let left = (ch.apply_unchecked(&(b * a)) - &fb * &fa).norm();
            let right = (ch.apply_unchecked(&(a * b)) - &fa * &fb).norm();
            worst = worst.max(left).max(right);
        }
    }
    worst
}

/// Hermitian within `1e-10` and `λ_min ≥ −1e-10 · max(1, λ_max)`.
pub fn is_positive_operator<T: Real>(a: &ComplexMatrix<T>) -> bool {
    let tol = T::lit(1e-10).max(T::default_epsilon() * T::lit(100.0));
    hermiticity_defect(a) <= tol * T::one().max(a.norm()) && is_psd(a, tol).unwrap_or(false)
}

/// The four algebras compared by [`inclusion_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSubspaces<T: Real> {
    /// `𝒜′`, commutant of the Kraus operators.
    pub a_comm: MatrixSubspace<T>,
    /// `M_φ`
    pub fixed: MatrixSubspace<T>,
    /// `N_φ` as `{A_i A_j*}′`.
    pub dfa: MatrixSubspace<T>,
    /// `ℬ′`, computed as `{B_i B_j*}′` from the reduced Kraus family.
    pub b_comm: MatrixSubspace<T>,
    /// `N_φ` from its definition.
    pub oracle: MatrixSubspace<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport<T: Real> {
    pub dim_a_comm: usize,
    pub dim_fixed: usize,
    pub dim_dfa: usize,
    pub dim_b_comm: usize,
    /// `𝒜′ ⊆ M_φ ⊆ N_φ = ℬ′`.
    pub chain_ok: bool,
    /// `‖Π(N_φ) − Π(oracle)‖_F`.
    pub oracle_distance: T,
    /// Every Kraus operator is a positive operator.
    pub luders_applicable: bool,
    /// When applicable: `𝒜′ = M_φ = N_φ = ℬ′`.
    pub luders_ok: Option<bool>,
    /// Named inclusion residuals and distances.
    pub residuals: Vec<(&'static str, T)>,
    pub subspaces: ReportSubspaces<T>,
}

impl<T: Real> AlgebraReport<T> {
    pub fn residual(&self, name: &str) -> Option<T> {
        self.residuals.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

/// Computes `𝒜′`, `M_φ`, `N_φ`, `ℬ′` and the oracle and checks the chain.
///
/// Refuses channels that are not both unital and trace preserving (within
/// `tol`), since `M_φ ⊆ N_φ` relies on trace preservation. `tol` is also the
/// threshold for every subspace inclusion.
pub fn inclusion_report<T: Real>(ch: &KrausChannel<T>, policy: RankPolicy<T>, tol: T) -> Result<AlgebraReport<T>> {
    ch.require_valid(tol)?;
    let a_comm = commutant(&GeneratorSet::new(ch.kraus().to_vec())?, policy);
    let fixed = fixed_point_algebra(ch, policy);
    let dfa = decoherence_free_algebra(ch, policy);
    // ℬ is also generated by the products of the reduced operators B_j, so
    // this reaches ℬ′ without reusing the family behind `dfa`.
    let b_comm = decoherence_free_algebra(&ch.reduce_kraus(policy).reduced, policy);
    let oracle = dfa_oracle(ch, policy)?;

    let a_fixed = compare_subspaces(&a_comm, &fixed, tol)?;
    let fixed_dfa = compare_subspaces(&fixed, &dfa, tol)?;
    let dfa_b = compare_subspaces(&dfa, &b_comm, tol)?;
    let dfa_oracle_cmp = compare_subspaces(&dfa, &oracle, tol)?;
    let fixed_oracle = compare_subspaces(&fixed, &oracle, tol)?;

    let chain_ok = a_fixed.s1_in_s2 && fixed_dfa.s1_in_s2 && dfa_b.equal;
    let luders_applicable = ch.kraus().iter().all(is_positive_operator);
    let mut residuals = vec![
        ("a_comm_in_fixed", a_fixed.residual_12),
        ("fixed_in_dfa", fixed_dfa.residual_12),
        ("fixed_in_oracle", fixed_oracle.residual_12),
        ("dfa_vs_b_comm", dfa_b.distance),
        ("dfa_vs_oracle", dfa_oracle_cmp.distance),
        ("dfa_star_algebra_defect", star_algebra_defect(&dfa)),
    ];
    let luders_ok = if luders_applicable {
        let spaces = [&a_comm, &fixed, &dfa, &b_comm];
        let mut worst = T::zero();
        let mut all_equal = true;
        for (i, s) in spaces.iter().enumerate() {
            for t in &spaces[i + 1..] {
                let c = compare_subspaces(s, t, tol)?;
                worst = worst.max(c.distance);
                all_equal &= c.equal;
            }
        }
        residuals.push(("luders_max_distance", worst));
        Some(all_equal)
    } else {
        None
    };

    Ok(AlgebraReport {
        dim_a_comm: a_comm.dim(),
        dim_fixed: fixed.dim(),
        dim_dfa: dfa.dim(),
        dim_b_comm: b_comm.dim(),
        chain_ok,
        oracle_distance: dfa_oracle_cmp.distance,
        luders_applicable,
        luders_ok,
        residuals,
        subspaces: ReportSubspaces {
            a_comm,
            fixed,
            dfa,
            b_comm,
            oracle,
        },
    })
}

/// Largest distance from `1`, `b*` or `b c` (basis elements) back into `s`.
pub fn star_algebra_defect<T: Real>(s: &MatrixSubspace<T>) -> T {
    let n = s.ambient_dim();
    let dist = |x: &ComplexMatrix<T>| s.distance_to(x).unwrap_or_else(|_| T::max_value().unwrap_or_else(T::one));
    let mut worst = dist(&identity(n));
    for b in s.basis() {
        worst = worst.max(dist(&b.adjoint()));
        for c in s.basis() {
            worst = worst.max(dist(&(b * c)));
        }
    }
    worst
}
