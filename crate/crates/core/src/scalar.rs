//! Scalar abstraction shared by every solver in the crate.
//!
//! The closed-form parts of the model (affine reduction, thresholds, the
//! social quadratic, plateau intervals) only need field arithmetic and an
//! ordering, so they are written against [`Scalar`] and run unchanged on
//! `f32`, `f64` and exact rationals. Anything that needs trigonometry or an
//! iterative search asks for [`Real`] instead.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field element usable by the closed-form solvers.
pub trait Scalar:
    Copy
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Rounding unit of the representation; zero for exact types.
    fn epsilon() -> Self;

    /// `false` for NaN and infinities. Exact types are always finite.
    fn is_finite_value(&self) -> bool;

    /// Converts an `f64` literal. Panics only for non-finite input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| panic!("cannot represent {x}"))
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| panic!("cannot represent {n}"))
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Comparison tolerance: `base` widened to a few ulps for low-precision types.
    fn tolerance(base: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(8.0);
        let base = Self::lit(base);
        if floor > base {
            floor
        } else {
            base
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn clamp_to(self, lo: Self, hi: Self) -> Self {
        self.max_of(lo).min_of(hi)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

/// Floating-point scalar: adds trigonometry and iterative-search support.
pub trait Real: Scalar + Float + FloatConst {}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn epsilon() -> Self {
                <$t>::EPSILON
            }

            fn is_finite_value(&self) -> bool {
                <$t>::is_finite(*self)
            }
        }

        impl Real for $t {}
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

macro_rules! impl_ratio_scalar {
    ($i:ty) => {
        impl Scalar for Ratio<$i> {
            fn epsilon() -> Self {
                Ratio::from_integer(0)
            }

            fn is_finite_value(&self) -> bool {
                true
            }
        }
    };
}

impl_ratio_scalar!(i64);
impl_ratio_scalar!(i128);
