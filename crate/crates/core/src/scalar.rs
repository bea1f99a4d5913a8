//! Scalar abstractions.
//!
//! Probability tensors and information terms are generic over [`Probability`]
//! (`f32`/`f64`); linear systems, elimination, LP and polytopes are generic
//! over any ordered [`Field`], with [`Rational`] as the exact instance used
//! everywhere a result must be a proof rather than an estimate.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// An ordered field. Exact for [`Rational`], approximate for floats.
pub trait Field: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Positive factor that brings a row with these coefficients to its
    /// canonical scale. For rationals: the smallest multiple making every
    /// coefficient a coprime integer. For floats: unit max-norm.
    fn row_factor(coefs: &[Self]) -> Self;

    /// Magnitude below which a pivot or reduced cost counts as zero.
    fn tolerance() -> Self;
}

impl Field for Rational {
    fn row_factor(coefs: &[Self]) -> Self {
        let mut den = BigInt::one();
        for c in coefs.iter().filter(|c| !c.is_zero()) {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in coefs.iter().filter(|c| !c.is_zero()) {
            let k = (c.clone() * Rational::from_integer(den.clone())).to_integer();
            g = g.gcd(&k);
        }
        if g.is_zero() {
            Rational::one()
        } else {
            Rational::new(den, g)
        }
    }

    fn tolerance() -> Self {
        Rational::zero()
    }
}

macro_rules! float_field {
    ($t:ty, $tol:expr) => {
        impl Field for $t {
            fn row_factor(coefs: &[Self]) -> Self {
                let m = coefs.iter().fold(0.0 as $t, |a, c| a.max(c.abs()));
                if m > 0.0 {
                    1.0 / m
                } else {
                    1.0
                }
            }

            fn tolerance() -> Self {
                $tol
            }
        }
    };
}
float_field!(f32, 1e-5);
float_field!(f64, 1e-10);

/// Floating-point type used for probabilities and information values.
pub trait Probability: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {
    /// Tolerance for "row sums to one" checks at this precision.
    fn normalization_tol() -> Self {
        let floor = Self::from_f64(1e-12).unwrap();
        let rel = Self::epsilon() * Self::from_f64(64.0).unwrap();
        if rel > floor {
            rel
        } else {
            floor
        }
    }
}

impl Probability for f32 {}
impl Probability for f64 {}

/// Binary exponent of the snapping grid.
pub const SNAP_BITS: u32 = 48;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-k` as an exact rational.
pub fn pow2_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Round `x` to the nearest multiple of `2^-48`. Negative inputs clamp to zero.
pub fn snap(x: f64) -> Rational {
    if x.is_nan() || x <= 0.0 {
        return Rational::zero();
    }
    let scaled = (x * (1u64 << SNAP_BITS) as f64).round();
    let num = BigInt::from_f64(scaled).unwrap_or_else(BigInt::zero);
    Rational::new(num, BigInt::one() << SNAP_BITS as usize)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parse `"3"`, `"-3/4"` or a plain decimal like `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = Rational::new(num, den);
    Some(if neg { -r } else { r })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn rational_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// JSON value for a rational: an integer when integral, a `"p/q"` string otherwise.
pub fn rational_json(x: &Rational) -> serde_json::Value {
    if x.is_integer() {
        if let Some(i) = x.numer().to_i64() {
            return serde_json::Value::from(i);
        }
    }
    serde_json::Value::String(rational_string(x))
}

/// Inverse of [`rational_json`]; also accepts JSON numbers with a fractional part.
pub fn rational_from_json(v: &serde_json::Value) -> Option<Rational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(int(i))
            } else {
                parse_rational(&n.to_string())
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        _ => None,
    }
}

/// Exact decimal rendering with `sig` significant digits (round half away
/// from zero), trailing zeros trimmed, never in exponent notation.
pub fn decimal_sig(x: &Rational, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = Rational::from_integer(BigInt::from(10));
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = 0;
    let mut p = Rational::one();
    while p > a {
        p /= ten.clone();
        e -= 1;
    }
    while p.clone() * ten.clone() <= a {
        p *= ten.clone();
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = scale_pow10(&a, shift);
    let mut digits = round_half_up(&scaled);
    let limit = num_traits::pow(BigInt::from(10), sig);
    let mut shift = shift;
    if digits >= limit {
        digits /= BigInt::from(10);
        shift -= 1;
    }
    let mut s = digits.to_string();
    if shift > 0 {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        let cut = s.len() - shift;
        s = format!("{}.{}", &s[..cut], &s[cut..]);
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    } else {
        s.push_str(&"0".repeat((-shift) as usize));
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

fn scale_pow10(x: &Rational, k: i64) -> Rational {
    let p = Rational::from_integer(num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize));
    if k >= 0 {
        x * p
    } else {
        x / p
    }
}

fn round_half_up(x: &Rational) -> BigInt {
    // x >= 0
    let (q, r) = x.numer().div_rem(x.denom());
    if r.clone() * BigInt::from(2) >= *x.denom() {
        q + BigInt::one()
    } else {
        q
    }
}
