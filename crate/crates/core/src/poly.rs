//! Exact integer polynomials in the interaction strength mu.
//!
//! The canonical representation of a partition function here is the vector
//! of big-integer counts `N_k` with `Z(mu) = sum_k N_k mu^k`: one
//! enumeration serves every mu, and inequalities can be checked
//! coefficient-wise for all mu >= 1 instead of at sampled values.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{ln_biguint_dd, Dd, MuSpec, Weight};

/// Counts of configurations bucketed by an integer statistic (cut size,
/// independent-set size, ...): coefficient `k` is the number of
/// configurations with statistic `k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CountPolynomial {
    coeffs: Vec<BigUint>,
}

impl CountPolynomial {
    /// Trailing zero coefficients are trimmed so equal polynomials compare
    /// equal regardless of how they were produced.
    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CountPolynomial { coeffs }
    }

    pub fn from_u64_counts(counts: &[u64]) -> Self {
        Self::from_coeffs(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn from_u128_counts(counts: &[u128]) -> Self {
        Self::from_coeffs(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Largest k with a nonzero coefficient, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Sum of all coefficients; for configuration counts this is the total
    /// number of configurations (2^n for spin models).
    pub fn total_mass(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add_assign(&mut self, other: &CountPolynomial) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigUint::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Evaluate at an exact rational mu via Horner's rule.
    pub fn eval_exact(&self, mu: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * mu + BigRational::from_integer(BigInt::from(c.clone()));
        }
        acc
    }

    /// Evaluate at a natural-number mu, staying in unsigned big integers.
    pub fn eval_biguint(&self, mu: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * mu + c;
        }
        acc
    }

    /// Generic evaluation for any weight scalar (f32/f64/BigRational).
    pub fn eval_weight<T: Weight>(&self, mu: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            // Big counts may exceed u64; route through a rational.
            let c = BigRational::from_integer(BigInt::from(c.clone()));
            acc = acc * mu.clone() + T::from_ratio(&c);
        }
        acc
    }

    /// Natural log of the value at mu, by log-sum-exp over the nonzero
    /// terms. The exponents `ln N_k + k ln mu` are accumulated in
    /// double-double precision so the result is accurate to well below
    /// 2^-40 relative error even for mu near 2^3067.
    pub fn eval_log(&self, mu: &MuSpec) -> f64 {
        let ln_mu = match mu {
            MuSpec::Exact(r) => crate::scalar::ln_ratio_dd(r),
            MuSpec::Real(x) => Dd::from_f64(x.ln()),
        };
        let mut terms: Vec<Dd> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(ln_biguint_dd(c).add(ln_mu.mul_int(k as i64)));
        }
        if terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let max = terms
            .iter()
            .copied()
            .reduce(|a, b| if a.to_f64() >= b.to_f64() { a } else { b })
            .unwrap();
        let sum: f64 = terms.iter().map(|t| t.sub(max).to_f64().exp()).sum();
        max.to_f64() + sum.ln()
    }

    /// Compact one-line decimal rendering, e.g. `[2,2]`. Valid JSON (the
    /// grammar allows arbitrary-precision numbers) and human-readable.
    pub fn display_compact(&self) -> String {
        let inner: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", inner.join(","))
    }
}

// Artifact files carry coefficients as decimal strings so that consumers
// without big-number JSON support can still parse them; plain JSON numbers
// are accepted on input.
impl Serialize for CountPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for CountPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CountPolynomial;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a sequence of non-negative integers or decimal strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                #[derive(Deserialize)]
                #[serde(untagged)]
                enum Item {
                    Num(u64),
                    Str(String),
                }
                let mut coeffs = Vec::new();
                while let Some(item) = seq.next_element::<Item>()? {
                    let c = match item {
                        Item::Num(v) => BigUint::from(v),
                        Item::Str(s) => s
                            .parse::<BigUint>()
                            .map_err(|e| de::Error::custom(format!("bad coefficient: {e}")))?,
                    };
                    coeffs.push(c);
                }
                Ok(CountPolynomial { coeffs })
            }
        }
        d.deserialize_seq(V)
    }
}

/// `2^e` as a big natural number.
pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}
