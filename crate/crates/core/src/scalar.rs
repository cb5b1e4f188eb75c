//! Exact scalar abstraction shared by every module.
//!
//! All planning decisions (separation, containment, sigma classification,
//! LP optimality) are discrete, so the kernel is written against an ordered
//! field with exact arithmetic. `BigRational` is the default instantiation;
//! fixed-width ratios such as `Ratio<i64>` also satisfy the bound for small
//! inputs but may overflow on long LP runs.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact ordered field.
pub trait Scalar:
    Clone + Ord + Hash + Signed + Num + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits scalar")
    }

    fn frac(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    fn half() -> Self {
        Self::frac(1, 2)
    }

    fn two() -> Self {
        Self::int(2)
    }

    /// Lossy conversion, used only for rendering.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone
        + Ord
        + Hash
        + Signed
        + Num
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

pub fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}
