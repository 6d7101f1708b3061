//! Random generation of cubic and bipartite cubic graphs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

/// Retry budget for rejection sampling before giving up explicitly.
pub const GENERATION_RETRY_LIMIT: usize = 10_000;

/// Random connected cubic (3-regular) graph on `n` vertices via the
/// pairing model: shuffle 3n stubs, pair them up, reject on loops,
/// parallel edges or disconnection. Uniform conditioned on simplicity.
pub fn random_cubic(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadParameter(format!(
            "cubic graphs need even n >= 4, got {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| [v, v, v]).collect();
    for _ in 0..GENERATION_RETRY_LIMIT {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(3 * n / 2);
        let mut ok = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                ok = false;
                break;
            }
            edges.push((u.min(v), u.max(v)));
        }
        if !ok {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryLimit {
        what: "random cubic generation",
        limit: GENERATION_RETRY_LIMIT,
    })
}

/// Random simple 3-regular bipartite graph with `n_per_side` vertices per
/// side, as the union of three uniform perfect matchings, rejecting any
/// collision. Sides are recorded as the graph's bipartition: left =
/// 0..n_per_side, right = n_per_side..2*n_per_side.
pub fn random_bipartite_cubic(n_per_side: usize, seed: u64) -> Result<Graph> {
    if n_per_side < 3 {
        return Err(Error::BadParameter(format!(
            "three disjoint perfect matchings need n_per_side >= 3, got {n_per_side}"
        )));
    }
    let n = n_per_side;
    let mut rng = rng_from_seed(seed);
    'attempt: for _ in 0..GENERATION_RETRY_LIMIT {
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(3 * n);
        let mut seen = std::collections::HashSet::with_capacity(3 * n);
        for _ in 0..3 {
            let mut perm: Vec<u32> = (0..n as u32).collect();
            perm.shuffle(&mut rng);
            for (l, &r) in perm.iter().enumerate() {
                let e = (l as u32, n as u32 + r);
                if !seen.insert(e) {
                    continue 'attempt;
                }
                edges.push(e);
            }
        }
        let g = Graph::from_edges(2 * n, &edges)?
            .with_bipartition((0..n as u32).collect(), (n as u32..2 * n as u32).collect())?;
        return Ok(g);
    }
    Err(Error::RetryLimit {
        what: "random bipartite cubic generation",
        limit: GENERATION_RETRY_LIMIT,
    })
}

/// Search consecutive seeds for a generated graph satisfying `pred`.
/// Returns the first (seed, graph) hit; used to pin certified instances in
/// experiments.
pub fn search_seeds<F>(
    start_seed: u64,
    max_tries: usize,
    mut generate: impl FnMut(u64) -> Result<Graph>,
    mut pred: F,
) -> Result<(u64, Graph)>
where
    F: FnMut(&Graph) -> bool,
{
    for k in 0..max_tries {
        let seed = start_seed.wrapping_add(k as u64);
        if let Ok(g) = generate(seed) {
            if pred(&g) {
                return Ok((seed, g));
            }
        }
    }
    Err(Error::RetryLimit {
        what: "seed search",
        limit: max_tries,
    })
}

/// Uniform random spin configuration as a +-1 vector.
pub fn random_spins(n: usize, rng: &mut impl Rng) -> Vec<i8> {
    (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
}
