//! Spin configurations, cuts, and exact Ising partition functions.

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::CountPolynomial;
use crate::rng::rng_stream;
use crate::scalar::{MuSpec, WeightValue};

/// Default exhaustive-enumeration cap: 2^26 states stays sub-minute.
pub const DEFAULT_ENUM_CAP: usize = 26;

/// Assignment of +1/-1 spins to the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::BadParameter("spins must be +1 or -1".into()));
        }
        Ok(SpinConfig { spins })
    }

    pub fn all_plus(n: usize) -> Self {
        SpinConfig { spins: vec![1; n] }
    }

    pub fn all_minus(n: usize) -> Self {
        SpinConfig { spins: vec![-1; n] }
    }

    /// Bit `v` set means vertex `v` carries spin +1.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        SpinConfig {
            spins: (0..n)
                .map(|v| if bits >> v & 1 == 1 { 1 } else { -1 })
                .collect(),
        }
    }

    /// Parse a `+`/`-` string such as `"++--"`.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::Parse {
                    what: "spin string",
                    input: s.to_string(),
                }),
            })
            .collect::<Result<Vec<i8>>>()
            .map(|spins| SpinConfig { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn get(&self, v: u32) -> i8 {
        self.spins[v as usize]
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn set(&mut self, v: u32, s: i8) {
        debug_assert!(s == 1 || s == -1);
        self.spins[v as usize] = s;
    }

    pub fn flip(&mut self, v: u32) {
        self.spins[v as usize] = -self.spins[v as usize];
    }

    pub fn negated(&self) -> Self {
        SpinConfig {
            spins: self.spins.iter().map(|&s| -s).collect(),
        }
    }

    pub fn plus_count(&self) -> usize {
        self.spins.iter().filter(|&&s| s == 1).count()
    }

    pub fn to_bits(&self) -> u64 {
        assert!(self.spins.len() <= 64);
        self.spins
            .iter()
            .enumerate()
            .fold(0u64, |b, (i, &s)| if s == 1 { b | (1 << i) } else { b })
    }
}

impl std::fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.spins {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// The bichromatic edges of `sigma` together with their count.
pub fn cut_edges(g: &Graph, sigma: &SpinConfig) -> Result<(Vec<(u32, u32)>, usize)> {
    if sigma.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            got: sigma.len(),
        });
    }
    let edges: Vec<(u32, u32)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| sigma.get(u) != sigma.get(v))
        .collect();
    let size = edges.len();
    Ok((edges, size))
}

pub fn cut_size(g: &Graph, sigma: &SpinConfig) -> Result<usize> {
    cut_edges(g, sigma).map(|(_, s)| s)
}

/// Visit every spin configuration of `g` once, in Gray-code order, with the
/// cut size maintained incrementally. The callback receives (bits, cut).
pub(crate) fn for_each_config(
    g: &Graph,
    cap: usize,
    mut f: impl FnMut(u64, usize),
) -> Result<()> {
    let n = g.n();
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    assert!(n < 64, "enumeration requires n < 64");
    let mut bits = 0u64; // all minus
    let mut cut = 0usize;
    f(bits, cut);
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros();
        let spin_bit = bits >> v & 1;
        let mut same = 0usize;
        for &w in g.neighbors(v) {
            if bits >> w & 1 == spin_bit {
                same += 1;
            }
        }
        // flipping v turns same-spin edges into cut edges and vice versa
        cut = cut + same - (g.degree(v) - same);
        bits ^= 1 << v;
        f(bits, cut);
    }
    Ok(())
}

/// Exact cut polynomial by exhaustive enumeration: coefficient `k` counts
/// the configurations with cut size `k`.
pub fn cut_polynomial(g: &Graph) -> Result<CountPolynomial> {
    cut_polynomial_with_cap(g, DEFAULT_ENUM_CAP)
}

pub fn cut_polynomial_with_cap(g: &Graph, cap: usize) -> Result<CountPolynomial> {
    let mut counts = vec![0u64; g.m() + 1];
    for_each_config(g, cap, |_, cut| counts[cut] += 1)?;
    Ok(CountPolynomial::from_u64_counts(&counts))
}

/// Evaluate a partition polynomial: exact rational for rational mu,
/// log-sum-exp otherwise.
pub fn partition_eval(p: &CountPolynomial, mu: &MuSpec) -> Result<WeightValue> {
    if !mu.is_positive() {
        return Err(Error::NonPositiveMu(format!("{mu:?}")));
    }
    Ok(match mu {
        MuSpec::Exact(r) => WeightValue::Exact(p.eval_exact(r)),
        MuSpec::Real(_) => WeightValue::Log(p.eval_log(mu)),
    })
}

/// wt(sigma) = mu^{|cut sigma|} as an exact rational.
pub fn config_weight(g: &Graph, mu: &BigRational, sigma: &SpinConfig) -> Result<BigRational> {
    let cut = cut_size(g, sigma)?;
    Ok(crate::scalar::Weight::int_pow(mu, cut as i32))
}

/// Gibbs probability wt(sigma)/Z in exact rational arithmetic.
pub fn gibbs_probability(g: &Graph, mu: &BigRational, sigma: &SpinConfig) -> Result<BigRational> {
    if !mu.is_positive() {
        return Err(Error::NonPositiveMu(mu.to_string()));
    }
    let z = cut_polynomial(g)?.eval_exact(mu);
    Ok(config_weight(g, mu, sigma)? / z)
}

/// Inverse-CDF sampler over the exactly enumerated Gibbs distribution.
///
/// Weights are scaled to integers (mu = p/q contributes p^cut q^(m-cut)),
/// so draws are exact: a uniform big integer below the total mass selects a
/// configuration by binary search on the cumulative table.
pub struct GibbsSampler {
    n: usize,
    // (bits of config, cumulative scaled weight up to and including it)
    cumulative: Vec<(u64, BigUint)>,
    total: BigUint,
}

impl GibbsSampler {
    pub fn build(g: &Graph, mu: &BigRational) -> Result<Self> {
        Self::build_with_cap(g, mu, 20)
    }

    pub fn build_with_cap(g: &Graph, mu: &BigRational, cap: usize) -> Result<Self> {
        if !mu.is_positive() {
            return Err(Error::NonPositiveMu(mu.to_string()));
        }
        let m = g.m();
        let p = mu.numer().magnitude().clone();
        let q = mu.denom().magnitude().clone();
        // power tables keep the enumeration loop to one multiply
        let mut p_pow = vec![BigUint::one(); m + 1];
        let mut q_pow = vec![BigUint::one(); m + 1];
        for k in 1..=m {
            p_pow[k] = &p_pow[k - 1] * &p;
            q_pow[k] = &q_pow[k - 1] * &q;
        }
        let mut cumulative = Vec::with_capacity(1usize << g.n());
        let mut running = BigUint::zero();
        for_each_config(g, cap, |bits, cut| {
            running += &p_pow[cut] * &q_pow[m - cut];
            cumulative.push((bits, running.clone()));
        })?;
        let total = running;
        Ok(GibbsSampler {
            n: g.n(),
            cumulative,
            total,
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> SpinConfig {
        let target = rng.gen_biguint_below(&self.total);
        // first index whose cumulative weight exceeds the target
        let mut lo = 0usize;
        let mut hi = self.cumulative.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.cumulative[mid].1 <= target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        SpinConfig::from_bits(self.cumulative[lo].0, self.n)
    }
}

/// One exact Gibbs draw, deterministic in the seed.
pub fn exact_gibbs_sample(g: &Graph, mu: &BigRational, seed: u64) -> Result<SpinConfig> {
    let sampler = GibbsSampler::build(g, mu)?;
    let mut rng = rng_stream(seed, 3, 0);
    Ok(sampler.sample(&mut rng))
}
