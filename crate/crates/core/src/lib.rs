//! Decoherence-free subalgebras of unital completely positive maps.
//!
//! A channel is given in Heisenberg-picture Kraus form `φ(x) = Σ A_i* x A_i`
//! on `n × n` complex matrices. The decoherence-free subalgebra
//! `N_φ = {x : φ(x_h²) = φ(x_h)² for both hermitian parts x_h}` equals the
//! commutant of the family `{A_i A_j*}`; [`dfa::decoherence_free_algebra`]
//! computes it that way and [`dfa::dfa_oracle`] computes it from the
//! definition, so the two can be cross-checked.
//!
//! Everything is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`). The `*64` aliases below are what most callers want.

pub mod algebra;
pub mod channel;
pub mod dfa;
mod error;
pub mod matrix;
pub mod random;
mod scalar;
pub mod subspace;

pub use algebra::GeneratorSet;
pub use channel::{ChannelFlags, KrausChannel, KrausReduction, RangeProjector, StinespringDilation};
pub use dfa::AlgebraReport;
pub use error::{Error, Result};
pub use matrix::RankPolicy;
pub use random::ChannelKind;
pub use scalar::{Complex, ComplexMatrix, ComplexVector, Real};
pub use subspace::{MatrixSubspace, SubspaceComparison};

pub type C64 = Complex<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type KrausChannel64 = KrausChannel<f64>;
pub type MatrixSubspace64 = MatrixSubspace<f64>;
pub type AlgebraReport64 = AlgebraReport<f64>;

pub type C32 = Complex<f32>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type KrausChannel32 = KrausChannel<f32>;
pub type MatrixSubspace32 = MatrixSubspace<f32>;
