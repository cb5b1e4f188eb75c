//! Coordinated motion planning for axis-aligned rectangular robots under the
//! L1 metric, with exact rational arithmetic throughout.
//!
//! The kernel is generic over [`Scalar`]; the aliases at the crate root fix
//! the scalar to [`num_rational::BigRational`].

pub mod error;
pub mod exposure;
pub mod feas2;
pub mod geom;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod orderings;
pub mod planner2;
pub mod plannerk;
pub mod render;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type Point = geom::Point<Rational>;
pub type Segment = geom::Segment<Rational>;
pub type PolygonalDomain = geom::PolygonalDomain<Rational>;
pub type ConvexPolygon = geom::ConvexPolygon<Rational>;
pub type Trapezoid = geom::Trapezoid<Rational>;
pub type Decomposition = geom::Decomposition<Rational>;
pub type RobotShape = model::RobotShape<Rational>;
pub type Configuration = model::Configuration<Rational>;
pub type Trajectory = model::Trajectory<Rational>;
pub type Schedule = model::Schedule<Rational>;

/// Parses `"p/q"`, `"n"` or a finite decimal such as `"-2.75"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    use num_bigint::BigInt;
    use std::str::FromStr;
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num = BigInt::from_str(&digits).map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Formats a rational as `"p/q"`, or `"n"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
