//! Seeded random channel ensembles.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{hermitian_function, psd_sqrt, symmetrize};
use crate::scalar::{modulus, Complex, ComplexMatrix, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    /// `A_i = √p_i U_i` with Haar unitaries.
    MixedUnitary,
    /// `A_i = √E_i` for a random POVM.
    Luders,
    /// A mixed-unitary channel spread over `2k` linearly dependent operators.
    Padded,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [ChannelKind::MixedUnitary, ChannelKind::Luders, ChannelKind::Padded];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::MixedUnitary => "mixed_unitary",
            ChannelKind::Luders => "luders",
            ChannelKind::Padded => "padded",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed_unitary" | "mixed-unitary" => Ok(ChannelKind::MixedUnitary),
            "luders" => Ok(ChannelKind::Luders),
            "padded" => Ok(ChannelKind::Padded),
            other => Err(Error::InvalidParameter(format!("unknown channel kind `{other}`"))),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Matrix of i.i.d. standard complex Gaussians (`E|z|² = 1`).
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: T = normal(rng);
        let im: T = normal(rng);
        Complex::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let qr = ginibre::<T, R>(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = modulus(d);
        if norm > T::zero() {
            let phase = d.unscale(norm);
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// First `cols` columns of a Haar unitary of size `rows`.
pub fn random_isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix<T>> {
    if cols > rows {
        return Err(Error::InvalidParameter(format!("no {rows}x{cols} isometry exists")));
    }
    Ok(haar_unitary::<T, R>(rows, rng).columns(0, cols).into_owned())
}

/// Uniform point of the probability simplex with `k` entries.
fn random_probabilities<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

fn mixed_unitary<T: Real, R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<ComplexMatrix<T>> {
    let p = random_probabilities(k, rng);
    p.into_iter()
        .map(|pi| haar_unitary::<T, R>(n, rng) * Complex::from(T::lit(pi.sqrt())))
        .collect()
}

/// `E_i = S^{-1/2} W_i W_i* S^{-1/2}` with `S = Σ W_i W_i*`; returns `√E_i`.
fn luders<T: Real, R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<ComplexMatrix<T>> {
    let weights: Vec<ComplexMatrix<T>> = (0..k)
        .map(|_| {
            let w = ginibre::<T, R>(n, n, rng);
            &w * w.adjoint()
        })
        .collect();
    let total = weights.iter().fold(ComplexMatrix::zeros(n, n), |acc, w| acc + w);
    let effects = normalize_effects(&weights, &total);
    // The first pass loses accuracy in proportion to cond(S); the second sum
    // is close to 1, so renormalizing against it restores Σ E_i = 1.
    let resum = effects.iter().fold(ComplexMatrix::zeros(n, n), |acc, e| acc + e);
    normalize_effects(&effects, &resum).iter().map(psd_sqrt).collect()
}

fn normalize_effects<T: Real>(weights: &[ComplexMatrix<T>], total: &ComplexMatrix<T>) -> Vec<ComplexMatrix<T>> {
    let inv_sqrt = hermitian_function(total, |l| T::one() / l.sqrt());
    weights
        .iter()
        .map(|w| symmetrize(&(&inv_sqrt * w * &inv_sqrt)))
        .collect()
}

/// Draws a unital, trace-preserving channel of the given kind.
///
/// `k` is the number of independent Kraus directions; `Padded` returns `2k`
/// operators spanning at most `k` dimensions.
pub fn random_channel<T: Real>(kind: ChannelKind, n: usize, k: usize, seed: u64) -> Result<KrausChannel<T>> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!("need n >= 1 and k >= 1, got n={n}, k={k}")));
    }
    let mut rng = rng_from_seed(seed);
    let kraus = match kind {
        ChannelKind::MixedUnitary => mixed_unitary(n, k, &mut rng),
        ChannelKind::Luders => luders(n, k, &mut rng),
        ChannelKind::Padded => {
            let base = KrausChannel::new(mixed_unitary::<T, _>(n, k, &mut rng))?;
            let w = random_isometry::<T, _>(2 * k, k, &mut rng)?;
            return base.equivalent_rep(&w, T::lit(1e-6).max(T::default_epsilon() * T::lit(1e3)));
        }
    };
    KrausChannel::new(kraus)
}

/// A matrix with i.i.d. complex Gaussian entries, scaled to unit Frobenius norm.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    let norm = g.norm();
    g.unscale(norm)
}

/// Random hermitian matrix of unit Frobenius norm.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let h = symmetrize(&ginibre::<T, R>(n, n, rng));
    let norm = h.norm();
    h.unscale(norm)
}
