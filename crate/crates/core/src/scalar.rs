//! Scalar abstraction and helpers for the exact rational type.

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{Rat, C64};

/// Field-like scalar the polynomial layer is generic over.
///
/// Division must be exact for the algebraic routines (gcd, squarefree
/// decomposition, place splitting) to mean anything; those are only ever used
/// at [`Rat`]. The floating implementations exist for evaluation.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Coeff for Rat {
    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
}

impl Coeff for C64 {
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

pub fn rat_i64(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (ASCII decimal, optional leading minus).
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |part: &str| -> Result<BigInt> {
        part.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("invalid rational literal: {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(num)?, d))
        }
    }
}

/// Nearest f64 for a rational; fine for the numeric layer's purposes.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Extremely large entries: fall back to a quotient of approximations.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
