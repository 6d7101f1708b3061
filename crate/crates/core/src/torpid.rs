//! The slow-mixing bottleneck on gadget reductions of bipartite expanders:
//! balance classes, the equatorial cut bound, exact class partition sums,
//! and empirical phase-escape measurements.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain_analysis::{BottleneckMethod, ConductanceReport};
use crate::error::{Error, Result};
use crate::expander::{adjacency_second_eigenvalue, certify_magnifier};
use crate::gadget::{build_reduction, GadgetKind, ReductionOutput};
use crate::generate::{random_bipartite_cubic, random_cubic, search_seeds};
use crate::glauber::{ChainState, GlauberChain};
use crate::graph::{line_graph, Graph, Multigraph};
use crate::poly::CountPolynomial;
use crate::scalar::WeightValue;
use crate::spin::{cut_size, SpinConfig};
use crate::zsigma::fiber_polynomial;

/// Balance class of a configuration on a bipartite graph: plus-count on
/// the left side versus the right side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OmegaClass {
    Equal,
    Plus,
    Minus,
}

/// Classify by comparing plus-counts over the recorded bipartition.
pub fn omega_classify(g: &Graph, sigma: &SpinConfig) -> Result<OmegaClass> {
    let [left, right] = g.bipartition().ok_or(Error::MissingBipartition)?;
    if sigma.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            got: sigma.len(),
        });
    }
    let plus = |side: &[u32]| side.iter().filter(|&&v| sigma.get(v) == 1).count();
    let (pl, pr) = (plus(left), plus(right));
    Ok(match pl.cmp(&pr) {
        std::cmp::Ordering::Equal => OmegaClass::Equal,
        std::cmp::Ordering::Greater => OmegaClass::Plus,
        std::cmp::Ordering::Less => OmegaClass::Minus,
    })
}

/// The cut bound forced on balanced configurations of a certified
/// 1/8-magnifier: |cut sigma| <= m - n/4 with n the side size and m = 3n.
/// Reported in quarter units so everything stays integral.
#[derive(Clone, Debug, Serialize)]
pub struct EquatorialReport {
    pub cut: usize,
    /// 4m - n, the bound times four
    pub bound_times_four: i64,
    /// (m - n/4 - cut) * 4 >= 0 when the bound holds
    pub slack_times_four: i64,
    pub holds: bool,
}

pub fn equatorial_cut_bound(g: &Graph, sigma: &SpinConfig) -> Result<EquatorialReport> {
    let [left, right] = g.bipartition().ok_or(Error::MissingBipartition)?;
    if left.len() != right.len() {
        return Err(Error::Precondition(
            "equatorial bound needs equal side sizes".into(),
        ));
    }
    if omega_classify(g, sigma)? != OmegaClass::Equal {
        return Err(Error::Precondition(
            "configuration is not balanced (not in the equal class)".into(),
        ));
    }
    let n = left.len() as i64;
    let m = g.m() as i64;
    let cut = cut_size(g, sigma)? as i64;
    let bound_times_four = 4 * m - n;
    let slack_times_four = bound_times_four - 4 * cut;
    Ok(EquatorialReport {
        cut: cut as usize,
        bound_times_four,
        slack_times_four,
        holds: slack_times_four >= 0,
    })
}

/// Exact per-class sums of the fiber weights over a gadget reduction of a
/// bipartite cubic base, as polynomials in mu, plus the verdicts of the
/// displayed bound chain.
#[derive(Clone, Debug)]
pub struct BottleneckSums {
    pub n_per_side: usize,
    /// polynomials for (Equal, Plus, Minus)
    pub class_polys: [CountPolynomial; 3],
    pub class_sizes: [usize; 3],
    /// mass(E_equal) <= 2^(18 n) and deg(E_equal) <= 36n + m - n/4
    pub equal_class_dominance: bool,
    /// E_plus and E_minus each contain the monomial mu^(36n + m)
    pub unbalanced_peak_present: bool,
    /// 2^n E_equal(mu) <= E_plus(mu) + E_minus(mu) at mu = 2^76, exactly
    pub final_inequality_at_2pow76: bool,
    /// smallest integer mu at which the final inequality holds
    pub minimal_mu: Option<BigUint>,
}

/// Build the reduction (H gadgets) of a bipartite cubic base and sum the
/// exact fiber polynomials per balance class.
pub fn bottleneck_sums(base: &Graph) -> Result<BottleneckSums> {
    let out = build_reduction(base, GadgetKind::H)?;
    bottleneck_sums_of(&out)
}

pub fn bottleneck_sums_of(out: &ReductionOutput) -> Result<BottleneckSums> {
    let base = &out.base;
    let [left, right] = base.bipartition().ok_or(Error::MissingBipartition)?;
    if left.len() != right.len() {
        return Err(Error::Precondition("sides must have equal size".into()));
    }
    let n_side = left.len();
    let nb = base.n();
    let m = base.m();

    let mut class_polys = [
        CountPolynomial::default(),
        CountPolynomial::default(),
        CountPolynomial::default(),
    ];
    let mut class_sizes = [0usize; 3];
    for bits in 0..1u64 << nb {
        let sigma = SpinConfig::from_bits(bits, nb);
        let class = omega_classify(base, &sigma)?;
        let idx = class_index(class);
        class_polys[idx].add_assign(&fiber_polynomial(out, &sigma)?);
        class_sizes[idx] += 1;
    }

    // the balanced class never reaches the degree or mass of the
    // unbalanced classes; both checks hold coefficient-wise for mu >= 1
    let equal_mass_ok = class_polys[0].total_mass() <= (BigUint::one() << (18 * n_side));
    let equal_deg_ok = match class_polys[0].degree() {
        None => true,
        // 4 deg <= 4 (36 n_side + m) - n_side
        Some(d) => 4 * d as i64 <= 4 * (36 * n_side as i64 + m as i64) - n_side as i64,
    };
    let peak = 36 * n_side + m;
    let unbalanced_peak_present =
        !class_polys[1].coeff(peak).is_zero() && !class_polys[2].coeff(peak).is_zero();

    let mu76 = BigUint::one() << 76;
    let final_inequality_at_2pow76 = final_inequality_holds(&class_polys, n_side, &mu76);
    let minimal_mu = search_minimal_mu(&class_polys, n_side, 76);

    Ok(BottleneckSums {
        n_per_side: n_side,
        class_polys,
        class_sizes,
        equal_class_dominance: equal_mass_ok && equal_deg_ok,
        unbalanced_peak_present,
        final_inequality_at_2pow76,
        minimal_mu,
    })
}

fn class_index(class: OmegaClass) -> usize {
    match class {
        OmegaClass::Equal => 0,
        OmegaClass::Plus => 1,
        OmegaClass::Minus => 2,
    }
}

fn final_inequality_holds(polys: &[CountPolynomial; 3], n_side: usize, mu: &BigUint) -> bool {
    let equal = polys[0].eval_biguint(mu) << n_side;
    let unbalanced = polys[1].eval_biguint(mu) + polys[2].eval_biguint(mu);
    equal <= unbalanced
}

/// Minimal integer mu with the 2^-n inequality, by doubling then binary
/// search (the ratio is eventually monotone because the unbalanced classes
/// carry strictly higher degree).
fn search_minimal_mu(
    polys: &[CountPolynomial; 3],
    n_side: usize,
    max_exponent: u32,
) -> Option<BigUint> {
    let mut hi_exp = 1u32;
    while !final_inequality_holds(polys, n_side, &(BigUint::one() << hi_exp)) {
        hi_exp += 1;
        if hi_exp > max_exponent {
            return None;
        }
    }
    let mut lo = if hi_exp == 1 {
        BigUint::one()
    } else {
        BigUint::one() << (hi_exp - 1)
    };
    let mut hi = BigUint::one() << hi_exp;
    // invariant: fails at lo (or lo = 1), holds at hi
    while &lo + BigUint::one() < hi {
        let mid = (&lo + &hi) >> 1;
        if final_inequality_holds(polys, n_side, &mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Conductance-style report over the balance classes: A is the fiber of
/// the plus class, the blocking set M is the fiber of the balanced class,
/// and every single-site path from A's fiber to the minus fiber crosses M.
pub fn omega_conductance(sums: &BottleneckSums, mu: &BigUint) -> ConductanceReport {
    let e = sums.class_polys[0].eval_biguint(mu);
    let p = sums.class_polys[1].eval_biguint(mu);
    let mi = sums.class_polys[2].eval_biguint(mu);
    let z = BigInt::from(&e + &p + &mi);
    let set = BigRational::new(BigInt::from(p.clone()), z.clone());
    let blocking = BigRational::new(BigInt::from(e), z);
    let ratio = &blocking / &set;
    ConductanceReport {
        set_weight: WeightValue::Exact(set),
        boundary_weight: WeightValue::Exact(blocking),
        ratio: WeightValue::Exact(ratio),
        method: BottleneckMethod::BlockingMass,
        description: format!(
            "A = fiber of the plus class, M = fiber of the balanced class, \
             n_per_side = {}",
            sums.n_per_side
        ),
    }
}

// --- empirical escape-time experiment ---

#[derive(Clone, Debug)]
pub struct EscapeConfig {
    /// side sizes of the bipartite cubic bases
    pub sizes: Vec<usize>,
    pub mu: BigRational,
    pub replicates: usize,
    pub step_cap: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EscapeRow {
    pub size: usize,
    pub replicate: usize,
    pub hit_time: u64,
    pub censored: bool,
}

/// Lower quartile / median / upper quartile of the hit times at one size.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quartiles {
    pub q1: u64,
    pub median: u64,
    pub q3: u64,
}

#[derive(Clone, Debug)]
pub struct EscapeOutcome {
    /// per size: the generator seed whose graph certified as a magnifier
    pub base_seeds: Vec<(usize, u64)>,
    pub rows: Vec<EscapeRow>,
    /// matched-size line-graph control: time to relax from all-plus to
    /// balanced magnetization
    pub control_rows: Vec<EscapeRow>,
    pub medians: Vec<(usize, u64)>,
    pub control_medians: Vec<(usize, u64)>,
    pub quartiles: Vec<(usize, Quartiles)>,
    pub control_quartiles: Vec<(usize, Quartiles)>,
}

/// Find a certified 1/8-magnifier bipartite cubic base for the given side
/// size, searching consecutive generator seeds. A spectral pre-filter
/// skips hopeless candidates once the brute-force certification gets
/// expensive.
pub fn certified_magnifier_base(size: usize, start_seed: u64) -> Result<(u64, Graph)> {
    let c = Ratio::new(1u64, 8u64);
    search_seeds(
        start_seed,
        1000,
        |s| random_bipartite_cubic(size, s),
        |g| {
            if g.n() > 20 && adjacency_second_eigenvalue(g) > 2.9 {
                return false;
            }
            certify_magnifier(g, c).map(|cert| cert.is_c_magnifier).unwrap_or(false)
        },
    )
}

/// First hitting time of the minus balance class for the projected chain,
/// starting at the perfect lift of the all-plus-left configuration.
/// Majorities are maintained incrementally, so each step stays O(degree).
pub fn escape_time(
    out: &ReductionOutput,
    chain: &GlauberChain,
    seed: u64,
    chain_id: u32,
    step_cap: u64,
) -> Result<(u64, bool)> {
    let base = &out.base;
    let [left, right] = base.bipartition().ok_or(Error::MissingBipartition)?;
    let n_base = base.n();
    let block = out.layout.kind.vertices_per_gadget() as u32;

    // start: plus on the left side, minus on the right
    let mut sigma0 = SpinConfig::all_minus(n_base);
    for &v in left {
        sigma0.set(v, 1);
    }
    let start = crate::gadget::perfect_lift(&out.layout, &sigma0)?;

    let mut is_left = vec![false; n_base];
    for &v in left {
        is_left[v as usize] = true;
    }
    let mut plus_terminals: Vec<u8> = (0..n_base)
        .map(|v| {
            out.layout.terminals[v]
                .iter()
                .filter(|&&t| start.get(t) == 1)
                .count() as u8
        })
        .collect();
    let mut pl = left
        .iter()
        .filter(|&&v| plus_terminals[v as usize] >= 2)
        .count() as i64;
    let mut pr = right
        .iter()
        .filter(|&&v| plus_terminals[v as usize] >= 2)
        .count() as i64;

    let mut state = ChainState::new(start, seed, chain_id);
    let mut t = 0u64;
    while t < step_cap {
        if let Some(v) = chain.step(&mut state) {
            let local = v % block;
            if local < 3 {
                let gadget = (v / block) as usize;
                let was_plus_majority = plus_terminals[gadget] >= 2;
                if state.config.get(v) == 1 {
                    plus_terminals[gadget] += 1;
                } else {
                    plus_terminals[gadget] -= 1;
                }
                let now_plus_majority = plus_terminals[gadget] >= 2;
                if was_plus_majority != now_plus_majority {
                    let delta = if now_plus_majority { 1 } else { -1 };
                    if is_left[gadget] {
                        pl += delta;
                    } else {
                        pr += delta;
                    }
                }
            }
        }
        t += 1;
        if pl < pr {
            return Ok((t, false));
        }
    }
    Ok((step_cap, true))
}

/// Control proxy on an interaction-matched line graph: from all-plus,
/// first time the plus-count drops to half the vertices.
pub fn relaxation_proxy_time(
    g: &Graph,
    chain: &GlauberChain,
    seed: u64,
    chain_id: u32,
    step_cap: u64,
) -> (u64, bool) {
    let n = g.n();
    let mut state = ChainState::new(SpinConfig::all_plus(n), seed, chain_id);
    let mut plus = n as i64;
    let target = (n / 2) as i64;
    let mut t = 0u64;
    while t < step_cap {
        if let Some(v) = chain.step(&mut state) {
            plus += i64::from(state.config.get(v));
        }
        t += 1;
        if plus <= target {
            return (t, false);
        }
    }
    (step_cap, true)
}

/// Run the escape experiment over the configured sizes, with a
/// line-graph control per size. Replicates fan out over `workers`
/// threads; each owns its own RNG stream and rows are merged in
/// (size, replicate) order, so results do not depend on the worker count.
pub fn escape_time_experiment(cfg: &EscapeConfig, workers: usize) -> Result<EscapeOutcome> {
    if !num_traits::Signed::is_positive(&cfg.mu) {
        return Err(Error::NonPositiveMu(cfg.mu.to_string()));
    }
    if cfg.replicates == 0 || cfg.step_cap == 0 || cfg.sizes.is_empty() {
        return Err(Error::BadParameter(
            "escape experiment needs sizes, replicates >= 1 and a positive step cap".into(),
        ));
    }
    let mut base_seeds = Vec::new();
    let mut instances = Vec::new();
    for (size_idx, &size) in cfg.sizes.iter().enumerate() {
        let (base_seed, base) =
            certified_magnifier_base(size, cfg.seed.wrapping_add(1000 * size as u64))?;
        base_seeds.push((size, base_seed));
        let out = build_reduction(&base, GadgetKind::H)?;
        // control: line graph with the same vertex count 18 * size
        let (_, cubic) = search_seeds(
            cfg.seed.wrapping_add(5000 * size as u64),
            1000,
            |s| random_cubic(12 * size, s),
            |_| true,
        )?;
        let control = line_graph(&Multigraph::from(&cubic));
        instances.push((size_idx, size, out, control));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::BadParameter(format!("thread pool: {e}")))?;

    let mut rows = Vec::new();
    let mut control_rows = Vec::new();
    for (size_idx, size, out, control) in &instances {
        let chain = GlauberChain::new(&out.graph, &cfg.mu)?;
        let control_chain = GlauberChain::new(control, &cfg.mu)?;
        let (mut size_rows, mut size_control_rows) = pool.install(|| {
            let escape: Vec<EscapeRow> = (0..cfg.replicates)
                .into_par_iter()
                .map(|r| {
                    let chain_id = ((*size_idx as u32) << 16) | r as u32;
                    let (hit_time, censored) =
                        escape_time(out, &chain, cfg.seed, chain_id, cfg.step_cap)
                            .expect("escape chain run");
                    EscapeRow {
                        size: *size,
                        replicate: r,
                        hit_time,
                        censored,
                    }
                })
                .collect();
            let controls: Vec<EscapeRow> = (0..cfg.replicates)
                .into_par_iter()
                .map(|r| {
                    let chain_id = 0x8000_0000 | ((*size_idx as u32) << 16) | r as u32;
                    let (hit_time, censored) =
                        relaxation_proxy_time(control, &control_chain, cfg.seed, chain_id, cfg.step_cap);
                    EscapeRow {
                        size: *size,
                        replicate: r,
                        hit_time,
                        censored,
                    }
                })
                .collect();
            (escape, controls)
        });
        rows.append(&mut size_rows);
        control_rows.append(&mut size_control_rows);
    }
    rows.sort_by_key(|r| (r.size, r.replicate));
    control_rows.sort_by_key(|r| (r.size, r.replicate));

    let quartiles = per_size_quartiles(&cfg.sizes, &rows);
    let control_quartiles = per_size_quartiles(&cfg.sizes, &control_rows);
    Ok(EscapeOutcome {
        base_seeds,
        rows,
        control_rows,
        medians: quartiles.iter().map(|&(s, q)| (s, q.median)).collect(),
        control_medians: control_quartiles
            .iter()
            .map(|&(s, q)| (s, q.median))
            .collect(),
        quartiles,
        control_quartiles,
    })
}

fn per_size_quartiles(sizes: &[usize], rows: &[EscapeRow]) -> Vec<(usize, Quartiles)> {
    sizes
        .iter()
        .map(|&s| {
            let mut values: Vec<u64> = rows
                .iter()
                .filter(|r| r.size == s)
                .map(|r| r.hit_time)
                .collect();
            values.sort_unstable();
            (
                s,
                Quartiles {
                    q1: median_sorted(&values[..values.len().div_ceil(2)]),
                    median: median_sorted(&values),
                    q3: median_sorted(&values[values.len() / 2..]),
                },
            )
        })
        .collect()
}

/// Median of a sorted slice (mean of the middle pair for even lengths).
pub fn median_sorted(values: &[u64]) -> u64 {
    assert!(!values.is_empty());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2
    }
}

/// One-sided sign test: p-value for the hypothesis that paired second
/// values exceed first values, P[Bin(n, 1/2) >= wins] with ties dropped.
pub fn sign_test_p_greater(pairs: &[(u64, u64)]) -> f64 {
    let mut n = 0u32;
    let mut wins = 0u32;
    for &(a, b) in pairs {
        if a == b {
            continue;
        }
        n += 1;
        if b > a {
            wins += 1;
        }
    }
    if n == 0 {
        return 1.0;
    }
    let mut tail = 0f64;
    let mut binom = 1f64; // C(n, 0)
    let mut coeffs = vec![0f64; n as usize + 1];
    for k in 0..=n {
        coeffs[k as usize] = binom;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    for k in wins..=n {
        tail += coeffs[k as usize];
    }
    tail / 2f64.powi(n as i32)
}
