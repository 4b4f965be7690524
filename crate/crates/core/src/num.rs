//! Scalar abstraction for probability arithmetic.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A field-like scalar that can hold walk probabilities.
///
/// Implemented for `f32`, `f64` and exact rationals
/// ([`ExactProb`](crate::ExactProb)). Anything satisfying the bounds gets it
/// for free.
pub trait Probability: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    /// `num / den` in this scalar type.
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_usize(num).expect("representable numerator")
            / Self::from_usize(den).expect("representable denominator")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Probability for T where T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {}
