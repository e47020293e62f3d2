//! Numeric abstraction shared by every scoring routine.
//!
//! Counting-based quantities (ROC, AUROC, sensitivity/specificity, the
//! threshold drift integral and the closed-form bias integral) only need an
//! ordered field, so they are written against [`Scalar`] and also run on
//! exact rationals. Anything involving `sqrt` or the normal CDF needs
//! [`Real`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field element usable as a model score.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + Send + Sync + 'static
{
    /// Parse a decimal literal such as `0.35`, `-1e-3` or `7`.
    ///
    /// Returns `None` for anything that is not a finite decimal number.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// True unless the value is NaN or infinite.
    fn is_finite_value(&self) -> bool;

    /// Lossy conversion used for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

/// A floating-point [`Scalar`].
pub trait Real: Scalar + Float {}

impl Scalar for f64 {
    fn parse_decimal(text: &str) -> Option<Self> {
        text.trim().parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn parse_decimal(text: &str) -> Option<Self> {
        text.trim().parse::<f32>().ok().filter(|v| v.is_finite())
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Real for f64 {}
impl Real for f32 {}

impl Scalar for BigRational {
    fn parse_decimal(text: &str) -> Option<Self> {
        parse_exact_decimal(text.trim())
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

const MAX_DECIMAL_SCALE: u32 = 4096;

/// Exact parse of `[+-]digits[.digits][(e|E)[+-]digits]`.
fn parse_exact_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, unsigned) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match unsigned.split_once('.') {
        Some((i, f)) => (i, f),
        None => (unsigned, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    if scale.unsigned_abs() > MAX_DECIMAL_SCALE {
        return None;
    }
    let ten = BigInt::from(10);
    let magnitude = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Some(if negative { -magnitude } else { magnitude })
}

/// Total order on finite scalars.
///
/// Panics on incomparable values; cohorts reject non-finite scores at
/// construction so this cannot trigger on validated data.
pub(crate) fn cmp_scalar<F: Scalar>(a: &F, b: &F) -> Ordering {
    a.partial_cmp(b).expect("scores are finite and totally ordered")
}

pub(crate) fn sort_scalars<F: Scalar>(values: &mut [F]) {
    values.sort_by(cmp_scalar);
}

#[cfg(test)]
pub(crate) fn clamp<F: Scalar>(value: F, lo: &F, hi: &F) -> F {
    if value < *lo {
        lo.clone()
    } else if value > *hi {
        hi.clone()
    } else {
        value
    }
}
