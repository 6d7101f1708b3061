//! Single-site heat-bath (Glauber) dynamics.
//!
//! One step: pick a uniform vertex, propose flipping it, accept with
//! probability mu^D / (1 + mu^D) where D is the local cut change. The
//! acceptance probabilities are resolved once, exactly, into 64-bit
//! thresholds (floor of p * 2^64), so each step is a single integer
//! comparison and the realized probability is within 2^-64 of the exact
//! one even for mu = 2^76 and beyond, instead of collapsing to 1.0 in
//! floating point. A tie (D = 0) accepts with probability exactly 1/2.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::rng_stream;
use crate::spin::{cut_size, SpinConfig};

/// Chain state: configuration, time, and the generator that drives it.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub config: SpinConfig,
    pub time: u64,
    rng: ChaCha8Rng,
}

impl ChainState {
    /// `chain_id` selects an independent RNG stream for the given seed.
    pub fn new(config: SpinConfig, seed: u64, chain_id: u32) -> Self {
        ChainState {
            config,
            time: 0,
            rng: rng_stream(seed, 1, chain_id),
        }
    }
}

/// Precomputed sampler for one (graph, mu) pair.
pub struct GlauberChain<'g> {
    graph: &'g Graph,
    max_deg: usize,
    /// accept iff u64 draw < thresholds[delta + max_deg]
    thresholds: Vec<u64>,
}

impl<'g> GlauberChain<'g> {
    pub fn new(graph: &'g Graph, mu: &BigRational) -> Result<Self> {
        if !mu.is_positive() {
            return Err(Error::NonPositiveMu(mu.to_string()));
        }
        if graph.n() == 0 {
            return Err(Error::BadParameter("empty graph has no chain".into()));
        }
        let max_deg = graph.max_degree();
        let a = mu.numer().magnitude();
        let b = mu.denom().magnitude();
        let mut thresholds = Vec::with_capacity(2 * max_deg + 1);
        for delta in -(max_deg as i64)..=(max_deg as i64) {
            let (num, den) = acceptance_ratio(a, b, delta);
            // floor(2^64 * num / den) < 2^64 because num < den strictly
            let t = (num << 64u32) / den;
            thresholds.push(t.to_u64().expect("threshold fits in u64"));
        }
        Ok(GlauberChain {
            graph,
            max_deg,
            thresholds,
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    /// Exact acceptance probability mu^delta / (1 + mu^delta) for a local
    /// cut change of `delta` (reference value, not the 2^-64-granular
    /// simulation threshold).
    pub fn acceptance_probability(&self, mu: &BigRational, delta: i64) -> BigRational {
        let (num, den) = acceptance_ratio(mu.numer().magnitude(), mu.denom().magnitude(), delta);
        BigRational::new(num.into(), den.into())
    }

    /// Local cut change if `v` were flipped, from v's neighborhood only.
    pub fn flip_delta(&self, config: &SpinConfig, v: u32) -> i64 {
        let s = config.get(v);
        let same = self
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&w| config.get(w) == s)
            .count() as i64;
        2 * same - self.graph.degree(v) as i64
    }

    /// Advance one step; returns the flipped vertex if the proposal was
    /// accepted. Exactly one uniform vertex draw and one u64 draw are
    /// consumed, so trajectories are bit-reproducible.
    pub fn step(&self, state: &mut ChainState) -> Option<u32> {
        let v = state.rng.gen_range(0..self.graph.n() as u32);
        let delta = self.flip_delta(&state.config, v);
        let u: u64 = state.rng.gen();
        state.time += 1;
        if u < self.thresholds[(delta + self.max_deg as i64) as usize] {
            state.config.flip(v);
            Some(v)
        } else {
            None
        }
    }
}

/// (num, den) of mu^delta / (1 + mu^delta) for mu = a/b.
fn acceptance_ratio(a: &BigUint, b: &BigUint, delta: i64) -> (BigUint, BigUint) {
    let d = delta.unsigned_abs() as u32;
    let (ad, bd) = (a.pow(d), b.pow(d));
    if delta >= 0 {
        (ad.clone(), ad + bd)
    } else {
        (bd.clone(), ad + bd)
    }
}

/// Single-step convenience matching the one-shot operation shape; for
/// long runs build a [`GlauberChain`] once.
pub fn glauber_step(g: &Graph, mu: &BigRational, state: &mut ChainState) -> Result<Option<u32>> {
    Ok(GlauberChain::new(g, mu)?.step(state))
}

/// Observables a chain run can record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observable {
    CutSize,
    PlusCount,
    /// Plus-count restricted to one bipartition side (0 = left, 1 = right).
    PlusInSide(usize),
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::CutSize => "cut".into(),
            Observable::PlusCount => "plus".into(),
            Observable::PlusInSide(0) => "plus_left".into(),
            Observable::PlusInSide(_) => "plus_right".into(),
        }
    }
}

/// Parse an observable name (`cut`, `plus`, `plus:left`, `plus:right`).
pub fn parse_observable(g: &Graph, s: &str) -> Result<Observable> {
    match s {
        "cut" => Ok(Observable::CutSize),
        "plus" => Ok(Observable::PlusCount),
        "plus:left" | "plus:right" => {
            if g.bipartition().is_none() {
                return Err(Error::MissingBipartition);
            }
            Ok(Observable::PlusInSide(usize::from(s == "plus:right")))
        }
        other => Err(Error::UnknownObservable(other.to_string())),
    }
}

/// Named events whose first hitting time a run can record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitEvent {
    PlusAtMost(i64),
    PlusAtLeast(i64),
    CutAtMost(i64),
    CutAtLeast(i64),
}

impl HitEvent {
    pub fn name(&self) -> String {
        match self {
            HitEvent::PlusAtMost(k) => format!("plus<={k}"),
            HitEvent::PlusAtLeast(k) => format!("plus>={k}"),
            HitEvent::CutAtMost(k) => format!("cut<={k}"),
            HitEvent::CutAtLeast(k) => format!("cut>={k}"),
        }
    }

    fn holds(&self, cut: i64, plus: i64) -> bool {
        match self {
            HitEvent::PlusAtMost(k) => plus <= *k,
            HitEvent::PlusAtLeast(k) => plus >= *k,
            HitEvent::CutAtMost(k) => cut <= *k,
            HitEvent::CutAtLeast(k) => cut >= *k,
        }
    }
}

/// Parse an event name such as `plus<=3` or `cut>=9`.
pub fn parse_event(s: &str) -> Result<HitEvent> {
    let err = || Error::UnknownObservable(s.to_string());
    for (op, leq_ctor, geq_ctor) in [
        ("plus", HitEvent::PlusAtMost as fn(i64) -> HitEvent, HitEvent::PlusAtLeast as fn(i64) -> HitEvent),
        ("cut", HitEvent::CutAtMost as fn(i64) -> HitEvent, HitEvent::CutAtLeast as fn(i64) -> HitEvent),
    ] {
        if let Some(rest) = s.strip_prefix(op) {
            if let Some(k) = rest.strip_prefix("<=") {
                return k.trim().parse().map(leq_ctor).map_err(|_| err());
            }
            if let Some(k) = rest.strip_prefix(">=") {
                return k.trim().parse().map(geq_ctor).map_err(|_| err());
            }
        }
    }
    Err(err())
}

/// Recorded trajectory statistics.
#[derive(Clone, Debug)]
pub struct ChainRun {
    /// times at which observables were sampled (stride-spaced, starts at 0)
    pub times: Vec<u64>,
    /// one series per requested observable, parallel to `times`
    pub series: Vec<(String, Vec<i64>)>,
    /// first hitting time per requested event (None = never hit)
    pub hits: Vec<(String, Option<u64>)>,
    pub final_config: SpinConfig,
    pub steps: u64,
}

impl ChainRun {
    /// CSV rendering: header `t,<obs>...`, one row per recorded time.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for (name, _) in &self.series {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            out.push_str(&t.to_string());
            for (_, values) in &self.series {
                out.push(',');
                out.push_str(&values[i].to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Run metadata for a trajectory artifact: seed, exact mu, graph hash.
pub fn run_metadata(g: &Graph, mu: &BigRational, seed: u64, steps: u64, stride: u64)
    -> serde_json::Value
{
    serde_json::json!({
        "seed": seed,
        "mu": crate::scalar::ratio_string(mu),
        "graph_hash": g.stable_hash(),
        "steps": steps,
        "stride": stride,
    })
}

/// Run the chain for `steps` steps from `start`, recording the requested
/// observables every `stride` steps. Deterministic in (graph, mu, seed).
pub fn run_chain(
    g: &Graph,
    mu: &BigRational,
    start: &SpinConfig,
    steps: u64,
    seed: u64,
    observables: &[Observable],
    stride: u64,
) -> Result<ChainRun> {
    run_chain_with_events(g, mu, start, steps, seed, observables, &[], stride)
}

/// [`run_chain`] that additionally records first hitting times of the
/// given events (checked after every step, and at time 0).
#[allow(clippy::too_many_arguments)]
pub fn run_chain_with_events(
    g: &Graph,
    mu: &BigRational,
    start: &SpinConfig,
    steps: u64,
    seed: u64,
    observables: &[Observable],
    events: &[HitEvent],
    stride: u64,
) -> Result<ChainRun> {
    if start.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            got: start.len(),
        });
    }
    let stride = stride.max(1);
    let chain = GlauberChain::new(g, mu)?;
    let mut state = ChainState::new(start.clone(), seed, 0);

    // incrementally tracked quantities
    let mut cut = cut_size(g, start)? as i64;
    let mut plus = start.plus_count() as i64;
    let side_of: Option<Vec<u8>> = g.bipartition().map(|[l, _]| {
        let mut side = vec![1u8; g.n()];
        for &v in l {
            side[v as usize] = 0;
        }
        side
    });
    let mut plus_side = [0i64; 2];
    if let Some(side) = &side_of {
        for v in 0..g.n() {
            if start.get(v as u32) == 1 {
                plus_side[side[v] as usize] += 1;
            }
        }
    }
    for o in observables {
        if matches!(o, Observable::PlusInSide(_)) && side_of.is_none() {
            return Err(Error::MissingBipartition);
        }
    }

    let mut times = Vec::new();
    let mut series: Vec<(String, Vec<i64>)> =
        observables.iter().map(|o| (o.name(), Vec::new())).collect();
    let record = |t: u64, cut: i64, plus: i64, plus_side: &[i64; 2],
                      series: &mut Vec<(String, Vec<i64>)>, times: &mut Vec<u64>| {
        times.push(t);
        for (obs, (_, values)) in observables.iter().zip(series.iter_mut()) {
            values.push(match obs {
                Observable::CutSize => cut,
                Observable::PlusCount => plus,
                Observable::PlusInSide(side) => plus_side[*side],
            });
        }
    };

    let mut hit_times: Vec<Option<u64>> = vec![None; events.len()];
    let check_hits = |t: u64, cut: i64, plus: i64, hit_times: &mut Vec<Option<u64>>| {
        for (event, hit) in events.iter().zip(hit_times.iter_mut()) {
            if hit.is_none() && event.holds(cut, plus) {
                *hit = Some(t);
            }
        }
    };

    record(0, cut, plus, &plus_side, &mut series, &mut times);
    check_hits(0, cut, plus, &mut hit_times);
    for t in 1..=steps {
        if let Some(v) = chain.step(&mut state) {
            // maintain counters from the flip
            let s_new = state.config.get(v);
            let mut same_after = 0i64;
            for &w in g.neighbors(v) {
                if state.config.get(w) == s_new {
                    same_after += 1;
                }
            }
            let deg = g.degree(v) as i64;
            // edges to now-same neighbors were cut before the flip
            cut += (deg - same_after) - same_after;
            plus += i64::from(s_new);
            if let Some(side) = &side_of {
                plus_side[side[v as usize] as usize] += i64::from(s_new);
            }
        }
        check_hits(t, cut, plus, &mut hit_times);
        if t % stride == 0 {
            record(t, cut, plus, &plus_side, &mut series, &mut times);
        }
    }

    Ok(ChainRun {
        times,
        series,
        hits: events
            .iter()
            .map(|e| e.name())
            .zip(hit_times)
            .collect(),
        final_config: state.config,
        steps,
    })
}
