use nalgebra::{DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

pub type Complex<T> = num_complex::Complex<T>;
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;
pub type ComplexVector<T> = DVector<Complex<T>>;

/// Real scalar the whole crate is generic over.
///
/// The associated constants are the precision-dependent defaults; the `f64`
/// values are the ones the test suites are calibrated against.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Default relative singular-value cut for rank decisions.
    const RANK_RTOL: f64;
    /// Slack allowed below zero when deciding positive semidefiniteness.
    const PSD_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const RANK_RTOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
}

impl Real for f64 {
    const RANK_RTOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-9;
}

/// `|z|`, without requiring `num_traits::Float` on the component type.
pub(crate) fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}
