//! Exact rational scalars and their interchange format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational, the ground scalar of every
/// combinatorial computation in this crate.
pub type Rat = BigRational;

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a decimal-free rational string: `"p"` or `"p/q"` with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational string".into());
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(format!("`{s}` is not a decimal-free rational"));
    }
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| format!("bad numerator `{p}`"))?;
            let q: BigInt = q.parse().map_err(|_| format!("bad denominator `{q}`"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Formats a rational in the interchange form: `"p"` when integral, else `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64, for handing exact data to the spectral routines.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // to_f64 on Ratio<BigInt> only fails on overflow; saturate.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
