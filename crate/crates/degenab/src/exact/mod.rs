//! Exact arithmetic: rationals, cyclotomic numbers, univariate polynomials
//! over the cyclotomic field, and finite q-Laurent sums.

mod cyclotomic;
mod factor;
mod qlaurent;
mod unipoly;
mod zfactor;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycNum};
pub use factor::{factor_in_cyclotomic, roots_in_cyclotomic, sqrt_in_cyclotomic};
pub use qlaurent::{LeadingPart, QLaurent, QLaurentError, Term};
pub use unipoly::KPoly;
pub use zfactor::factor_rational_poly;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number; the carrier of q-adic valuations.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"-3/4"` or `"5"` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}
