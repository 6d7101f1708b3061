//! Scalar abstraction for configuration weights.
//!
//! Partition-function machinery runs either in exact rational arithmetic
//! (mandatory once the interaction strength reaches sizes like 2^76, where
//! floats overflow) or in floating point for speed. The [`Weight`] trait
//! captures the operations both modes need; [`WeightValue`] is the
//! exact-or-log result type returned by evaluators.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{NumAssign, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convenient alias for the exact scalar used throughout the crate.
pub type Rational = BigRational;

/// Scalar type a weight computation can be instantiated with.
///
/// Implemented for `f32`, `f64` (fast, approximate) and [`BigRational`]
/// (exact). Generic code such as the Glauber transition matrix is written
/// once against this trait and aliased at the crate root for the concrete
/// types.
pub trait Weight: Clone + PartialOrd + NumAssign {
    fn from_u64(v: u64) -> Self;

    /// Inject an exact rational (e.g. the interaction strength mu).
    fn from_ratio(r: &BigRational) -> Self;

    /// Lossy conversion for diagnostics and float-mode consumers.
    fn to_f64_approx(&self) -> f64;

    /// `self^e` for possibly negative exponents; `self` must be nonzero
    /// when `e < 0`.
    fn int_pow(&self, e: i32) -> Self {
        let mut base = self.clone();
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        if e < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Weight for f64 {
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }
    fn to_f64_approx(&self) -> f64 {
        *self
    }
}

impl Weight for f32 {
    fn from_u64(v: u64) -> Self {
        v as f32
    }
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r) as f32
    }
    fn to_f64_approx(&self) -> f64 {
        f64::from(*self)
    }
}

impl Weight for BigRational {
    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64_approx(&self) -> f64 {
        ratio_to_f64(self)
    }
}

/// Exact-or-logarithmic value of a (positive) weight sum.
///
/// Exact mode is available whenever mu is rational; log mode stores the
/// natural logarithm and stays finite for arbitrarily large sums.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightValue {
    Exact(BigRational),
    Log(f64),
}

impl WeightValue {
    pub fn exact(r: BigRational) -> Self {
        WeightValue::Exact(r)
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            WeightValue::Exact(r) => Some(r),
            WeightValue::Log(_) => None,
        }
    }

    /// Natural logarithm of the value. Exact values must be positive.
    pub fn ln(&self) -> f64 {
        match self {
            WeightValue::Exact(r) => ln_ratio(r),
            WeightValue::Log(l) => *l,
        }
    }

    /// Best-effort float; overflows to `inf` for huge exact values.
    pub fn to_f64(&self) -> f64 {
        match self {
            WeightValue::Exact(r) => ratio_to_f64(r),
            WeightValue::Log(l) => l.exp(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum WeightValueRepr {
    Exact { num: String, den: String },
    Log { ln: f64 },
}

impl Serialize for WeightValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            WeightValue::Exact(r) => WeightValueRepr::Exact {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            },
            WeightValue::Log(l) => WeightValueRepr::Log { ln: *l },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        match WeightValueRepr::deserialize(d)? {
            WeightValueRepr::Exact { num, den } => {
                let n: BigInt = num.parse().map_err(DeError::custom)?;
                let q: BigInt = den.parse().map_err(DeError::custom)?;
                if q.is_zero() {
                    return Err(DeError::custom("zero denominator"));
                }
                Ok(WeightValue::Exact(BigRational::new(n, q)))
            }
            WeightValueRepr::Log { ln } => Ok(WeightValue::Log(ln)),
        }
    }
}

/// Interaction strength, exact or real.
#[derive(Clone, Debug)]
pub enum MuSpec {
    Exact(BigRational),
    Real(f64),
}

impl MuSpec {
    pub fn is_positive(&self) -> bool {
        match self {
            MuSpec::Exact(r) => r.is_positive(),
            MuSpec::Real(x) => *x > 0.0,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            MuSpec::Exact(r) => ln_ratio(r),
            MuSpec::Real(x) => x.ln(),
        }
    }
}

/// Parse an exact positive rational from one of the accepted forms:
/// `"16"`, `"2^76"`, `"3/2"`, `"1.25"`.
///
/// Powers are expanded exactly in big-integer arithmetic so values like
/// 2^3067 never pass through floating point.
pub fn parse_mu(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse {
        what: "mu",
        input: s.to_string(),
    };
    let value = if let Some((base, exp)) = s.split_once('^') {
        let base: BigUint = base.trim().parse().map_err(|_| err())?;
        let exp: u32 = exp.trim().parse().map_err(|_| err())?;
        BigRational::from_integer(BigInt::from(base.pow(exp)))
    } else if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        BigRational::new(n, d)
    } else if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        BigRational::new(n, d)
    } else {
        let n: BigInt = s.parse().map_err(|_| err())?;
        BigRational::from_integer(n)
    };
    if !value.is_positive() {
        return Err(Error::NonPositiveMu(s.to_string()));
    }
    Ok(value)
}

/// Serde helper: big naturals as decimal strings.
pub fn serialize_biguint<S: serde::Serializer>(
    x: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Canonical display of a rational for artifact files ("p" or "p/q").
pub fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// --- double-double helpers for accurate logarithms of big values ---

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    pub(crate) fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn add(self, other: Dd) -> Dd {
        let s = self.hi + other.hi;
        let v = s - self.hi;
        let e = (self.hi - (s - v)) + (other.hi - v);
        let lo = e + self.lo + other.lo;
        let hi = s + lo;
        Dd { hi, lo: lo - (hi - s) }
    }

    pub(crate) fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    /// Multiply by a small exactly-representable integer factor.
    pub(crate) fn mul_int(self, k: i64) -> Dd {
        let kf = k as f64;
        let p = self.hi * kf;
        let e = self.hi.mul_add(kf, -p);
        let lo = e + self.lo * kf;
        let hi = p + lo;
        Dd { hi, lo: lo - (hi - p) }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// ln 2 to double-double precision (hi is the f64 constant, lo the
/// residual of the true value below it).
const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};

/// Natural logarithm of a positive big integer, accurate to ~1 ulp of the
/// mantissa contribution even when the argument has thousands of bits.
pub(crate) fn ln_biguint_dd(x: &BigUint) -> Dd {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 53 {
        return Dd::from_f64((x.to_u64().unwrap() as f64).ln());
    }
    // Normalize to exactly 106 mantissa bits; the power of two moved in or
    // out is accounted for by an exact multiple of ln 2.
    if bits >= 106 {
        let shift = bits - 106;
        ln_mantissa_106((x >> shift).to_u128().unwrap()).add(LN2.mul_int(shift as i64))
    } else {
        let shift = 106 - bits;
        ln_mantissa_106((x << shift).to_u128().unwrap()).sub(LN2.mul_int(shift as i64))
    }
}

/// ln of a 106-bit integer split as hi * 2^53 + lo with both halves exact
/// in f64: ln(hi 2^53) + lo / (hi 2^53) to well below double precision.
fn ln_mantissa_106(m: u128) -> Dd {
    let hi = (m >> 53) as f64 * 9007199254740992.0; // 2^53
    let lo = (m & ((1u128 << 53) - 1)) as f64;
    Dd::from_f64(hi.ln()).add(Dd::from_f64(lo / hi))
}

/// Natural logarithm of a big natural number (public convenience).
pub fn ln_biguint(x: &BigUint) -> f64 {
    ln_biguint_dd(x).to_f64()
}

/// Natural logarithm of a positive rational.
pub fn ln_ratio(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln of non-positive rational");
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    ln_biguint_dd(n).sub(ln_biguint_dd(d)).to_f64()
}

pub(crate) fn ln_ratio_dd(r: &BigRational) -> Dd {
    assert!(r.is_positive(), "ln of non-positive rational");
    ln_biguint_dd(r.numer().magnitude()).sub(ln_biguint_dd(r.denom().magnitude()))
}

/// Float approximation of a rational that stays finite (via logs) far
/// beyond the f64 overflow range of the numerator or denominator alone.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let Some(v) = r.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    let sign = match r.numer().sign() {
        Sign::Minus => -1.0,
        _ => 1.0,
    };
    let magnitude = BigRational::new(r.numer().abs(), r.denom().clone());
    sign * ln_ratio(&magnitude).exp()
}
