//! Decoding cuts from the Gibbs distribution on a gadget reduction, and
//! the partition-function distinguisher that turns a factor-2 estimate of
//! Z into a max-cut decision.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadget::{build_reduction, GadgetKind, ReductionOutput};
use crate::graph::Graph;
use crate::maxcut::maxcut_exact;
use crate::poly::CountPolynomial;
use crate::rng::rng_stream;
use crate::scalar::ratio_to_f64;
use crate::spin::{cut_size, SpinConfig};
use crate::zsigma::all_fiber_polynomials;

/// Default near-optimality ratio for the decoder: a decoded cut counts as
/// a success when cut > ratio * maxcut.
pub const DEFAULT_SUCCESS_RATIO: (u64, u64) = (997, 1000);

#[derive(Clone, Debug, Serialize)]
pub struct DecodeSweepPoint {
    pub mu: String,
    /// exact success probability as a fraction string
    pub probability: String,
    pub probability_f64: f64,
    pub meets_three_quarters: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeReport {
    pub instance_hash: String,
    pub max_cut: usize,
    /// success ratio (num, den), success means den*cut > num*maxcut
    pub success_ratio: (u64, u64),
    pub mu: String,
    pub exact_success_probability: String,
    pub exact_success_probability_f64: f64,
    pub empirical_frequency: Option<f64>,
    /// binomial standard error at the exact probability
    pub empirical_sigma: Option<f64>,
    pub samples: usize,
    pub sweep: Vec<DecodeSweepPoint>,
    /// minimal integer mu with success probability >= 3/4
    pub minimal_mu: Option<String>,
}

/// Exact decoder success machinery over one reduction instance.
pub struct Decoder {
    out: ReductionOutput,
    fiber_polys: Vec<CountPolynomial>,
    /// base configurations counted as decoding successes
    success: Vec<bool>,
    max_cut: usize,
}

impl Decoder {
    pub fn new(base: &Graph, ratio: (u64, u64)) -> Result<Self> {
        let out = build_reduction(base, GadgetKind::H)?;
        let fiber_polys = all_fiber_polynomials(&out)?;
        let max_cut = maxcut_exact(base)?.cut_size;
        let n = base.n();
        let success: Vec<bool> = (0..1u64 << n)
            .map(|bits| {
                let c = cut_size(base, &SpinConfig::from_bits(bits, n)).unwrap();
                (ratio.1 as u128) * (c as u128) > (ratio.0 as u128) * (max_cut as u128)
            })
            .collect();
        Ok(Decoder {
            out,
            fiber_polys,
            success,
            max_cut,
        })
    }

    pub fn reduction(&self) -> &ReductionOutput {
        &self.out
    }

    pub fn max_cut(&self) -> usize {
        self.max_cut
    }

    /// Exact probability that a Gibbs sample of the reduction projects to
    /// a near-optimal cut: sum of successful fiber weights over Z.
    pub fn success_probability(&self, mu: &BigRational) -> Result<BigRational> {
        if !mu.is_positive() {
            return Err(Error::NonPositiveMu(mu.to_string()));
        }
        let mut won = BigRational::zero();
        let mut total = BigRational::zero();
        for (poly, &ok) in self.fiber_polys.iter().zip(&self.success) {
            let z = poly.eval_exact(mu);
            if ok {
                won += &z;
            }
            total += z;
        }
        Ok(won / total)
    }

    /// Sample base configurations with probability Z_sigma / Z (the
    /// marginal of the Gibbs distribution under the projection), exactly,
    /// via cumulative scaled-integer weights.
    pub fn sample_base_configs(
        &self,
        mu: &BigRational,
        samples: usize,
        seed: u64,
    ) -> Result<Vec<SpinConfig>> {
        use num_bigint::RandBigInt;
        let n = self.out.base.n();
        let p = mu.numer().magnitude();
        let q = mu.denom().magnitude();
        let degree_cap = self
            .fiber_polys
            .iter()
            .filter_map(|poly| poly.degree())
            .max()
            .unwrap_or(0);
        // scale all weights by q^degree_cap to land in naturals
        let mut cumulative: Vec<BigUint> = Vec::with_capacity(1 << n);
        let mut running = BigUint::zero();
        for poly in &self.fiber_polys {
            let mut w = BigUint::zero();
            for (d, c) in poly.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    w += c * p.pow(d as u32) * q.pow((degree_cap - d) as u32);
                }
            }
            running += w;
            cumulative.push(running.clone());
        }
        let total = running;
        let mut rng = rng_stream(seed, 3, 1);
        Ok((0..samples)
            .map(|_| {
                let target = rng.gen_biguint_below(&total);
                let idx = cumulative.partition_point(|c| c <= &target);
                SpinConfig::from_bits(idx as u64, n)
            })
            .collect())
    }

    pub fn is_success(&self, sigma: &SpinConfig) -> bool {
        self.success[sigma.to_bits() as usize]
    }
}

/// Full decoder experiment: exact success probability at `mu`, a
/// Monte-Carlo cross-check, a doubling sweep, and the minimal integer mu
/// reaching probability 3/4.
pub fn decode_experiment(
    base: &Graph,
    mu: &BigRational,
    samples: usize,
    seed: u64,
    ratio: (u64, u64),
) -> Result<DecodeReport> {
    let decoder = Decoder::new(base, ratio)?;
    let exact = decoder.success_probability(mu)?;
    let exact_f64 = ratio_to_f64(&exact);

    let (empirical, sigma) = if samples > 0 {
        let draws = decoder.sample_base_configs(mu, samples, seed)?;
        let wins = draws.iter().filter(|s| decoder.is_success(s)).count();
        let freq = wins as f64 / samples as f64;
        let se = (exact_f64 * (1.0 - exact_f64) / samples as f64).sqrt();
        (Some(freq), Some(se))
    } else {
        (None, None)
    };

    // doubling sweep until the 3/4 mark, then binary search for the
    // minimal integer mu
    let three_quarters = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut sweep = Vec::new();
    let mut hit_exponent = None;
    for k in 0..=128u32 {
        let mu_k = BigRational::from_integer(BigInt::from(BigUint::one() << k));
        let prob = decoder.success_probability(&mu_k)?;
        let meets = prob >= three_quarters;
        sweep.push(DecodeSweepPoint {
            mu: format!("2^{k}"),
            probability: format!("{}/{}", prob.numer(), prob.denom()),
            probability_f64: ratio_to_f64(&prob),
            meets_three_quarters: meets,
        });
        if meets {
            hit_exponent = Some(k);
            break;
        }
    }
    let minimal_mu = match hit_exponent {
        None => None,
        Some(0) => Some(BigUint::one()),
        Some(k) => {
            let mut lo = BigUint::one() << (k - 1); // fails here
            let mut hi = BigUint::one() << k; // holds here
            while &lo + BigUint::one() < hi {
                let mid: BigUint = (&lo + &hi) >> 1;
                let prob = decoder
                    .success_probability(&BigRational::from_integer(BigInt::from(mid.clone())))?;
                if prob >= three_quarters {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(hi)
        }
    };

    Ok(DecodeReport {
        instance_hash: base.stable_hash(),
        max_cut: decoder.max_cut(),
        success_ratio: ratio,
        mu: crate::scalar::ratio_string(mu),
        exact_success_probability: format!("{}/{}", exact.numer(), exact.denom()),
        exact_success_probability_f64: exact_f64,
        empirical_frequency: empirical,
        empirical_sigma: sigma,
        samples,
        sweep,
        minimal_mu: minimal_mu.map(|m| m.to_string()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    MaxcutExceeds,
    MaxcutAtMost,
}

/// Decide whether maxcut(base) > c from a factor-2 estimate of the
/// partition function of the H reduction at interaction mu.
///
/// Soundness needs the instance-level separation mu >= 2^(9n+2): then a
/// true maxcut above c forces any factor-2 estimate above the threshold
/// mu^(18n+c+1)/2, while maxcut <= c keeps it at or below.
pub fn distinguisher(
    base: &Graph,
    mu: &BigRational,
    c: usize,
    z_estimate: &BigRational,
) -> Result<Verdict> {
    let n = base.n();
    let min_mu = BigRational::from_integer(BigInt::from(BigUint::one() << (9 * n + 2)));
    if mu < &min_mu {
        return Err(Error::SeparationFailed {
            min_mu: format!("2^{}", 9 * n + 2),
        });
    }
    let threshold = crate::scalar::Weight::int_pow(mu, (18 * n + c + 1) as i32)
        / BigRational::from_integer(BigInt::from(2));
    Ok(if z_estimate > &threshold {
        Verdict::MaxcutExceeds
    } else {
        Verdict::MaxcutAtMost
    })
}

/// Exact Z(reduction, mu) for use as the oracle input of the
/// distinguisher.
pub fn exact_z_oracle(base: &Graph, mu: &BigRational) -> Result<BigRational> {
    let out = build_reduction(base, GadgetKind::H)?;
    Ok(crate::zsigma::total_partition_polynomial(&out)?.eval_exact(mu))
}
