//! Exact small-instance analysis of the Glauber chain: transition matrix,
//! stationarity, spectral gap, mixing time, and bottleneck ratios.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{ratio_to_f64, Weight, WeightValue};
use crate::spin::{for_each_config, SpinConfig};

/// Vertex-count cap for building the explicit 2^n-state matrix.
pub const TRANSITION_CAP: usize = 14;
/// Vertex-count cap for the exact mixing-time iteration (all starts).
pub const MIXING_CAP: usize = 12;
/// Vertex-count cap for dense eigen-solves.
pub const EIGEN_CAP: usize = 12;
/// Vertex-count cap for exact bottleneck enumeration.
pub const BOTTLENECK_CAP: usize = 16;

/// Sparse single-site transition matrix over all 2^n spin configurations:
/// state `x` moves to `x ^ (1 << v)` with probability `flip[x][v]`, and
/// stays put with the remaining mass. Generic over the weight scalar so
/// the same construction runs exactly (BigRational) or fast (f64).
pub struct TransitionMatrix<T> {
    n: usize,
    flip: Vec<Vec<T>>,
    diag: Vec<T>,
    /// cut size per state, kept for stationary-weight computations
    cuts: Vec<u8>,
}

impl<T: Weight> TransitionMatrix<T> {
    pub fn dimension(&self) -> usize {
        1usize << self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn flip_probability(&self, state: u64, v: u32) -> T {
        self.flip[state as usize][v as usize].clone()
    }

    pub fn stay_probability(&self, state: u64) -> T {
        self.diag[state as usize].clone()
    }

    pub fn cut_of_state(&self, state: u64) -> usize {
        self.cuts[state as usize] as usize
    }

    /// Row sums, which must be exactly one in rational mode.
    pub fn row_sum(&self, state: u64) -> T {
        let mut s = self.diag[state as usize].clone();
        for p in &self.flip[state as usize] {
            s += p.clone();
        }
        s
    }

    /// Dense representation for eigen-solvers.
    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let dim = self.dimension();
        let mut m = DMatrix::zeros(dim, dim);
        for x in 0..dim {
            m[(x, x)] = self.diag[x].to_f64_approx();
            for v in 0..self.n {
                m[(x, x ^ (1 << v))] = self.flip[x][v].to_f64_approx();
            }
        }
        m
    }
}

/// Build the explicit transition matrix of Glauber dynamics on (g, mu).
pub fn transition_matrix<T: Weight>(g: &Graph, mu: &BigRational) -> Result<TransitionMatrix<T>> {
    if g.n() > TRANSITION_CAP {
        return Err(Error::StateSpaceCap {
            what: "transition matrix",
            n: g.n(),
            cap: TRANSITION_CAP,
        });
    }
    if !mu.is_positive() {
        return Err(Error::NonPositiveMu(mu.to_string()));
    }
    if g.n() == 0 {
        return Err(Error::BadParameter("empty graph".into()));
    }
    let n = g.n();
    let dim = 1usize << n;
    let max_deg = g.max_degree() as i64;
    // acceptance probability per local cut change, converted to T once
    let inv_n = T::one() / T::from_u64(n as u64);
    let accept: Vec<T> = (-max_deg..=max_deg)
        .map(|delta| {
            let a = mu.numer().magnitude();
            let b = mu.denom().magnitude();
            let d = delta.unsigned_abs() as u32;
            let (ad, bd) = (a.pow(d), b.pow(d));
            let (num, den) = if delta >= 0 {
                (ad.clone(), &ad + &bd)
            } else {
                (bd.clone(), &ad + &bd)
            };
            T::from_ratio(&BigRational::new(num.into(), den.into())) * inv_n.clone()
        })
        .collect();

    let mut cuts = vec![0u8; dim];
    for_each_config(g, TRANSITION_CAP, |bits, cut| {
        cuts[bits as usize] = cut as u8;
    })?;

    let mut flip = Vec::with_capacity(dim);
    let mut diag = Vec::with_capacity(dim);
    for x in 0..dim as u64 {
        let mut row = Vec::with_capacity(n);
        let mut stay = T::one();
        for v in 0..n as u32 {
            let delta = cuts[(x ^ (1 << v)) as usize] as i64 - cuts[x as usize] as i64;
            let p = accept[(delta + max_deg) as usize].clone();
            stay -= p.clone();
            row.push(p);
        }
        flip.push(row);
        diag.push(stay);
    }
    Ok(TransitionMatrix {
        n,
        flip,
        diag,
        cuts,
    })
}

/// Exact detailed-balance check: wt(x) P(x,y) = wt(y) P(y,x) for every
/// adjacent pair, in rational arithmetic.
pub fn detailed_balance_exact(
    t: &TransitionMatrix<BigRational>,
    mu: &BigRational,
) -> bool {
    let dim = t.dimension();
    for x in 0..dim as u64 {
        for v in 0..t.n as u32 {
            let y = x ^ (1u64 << v);
            if y < x {
                continue;
            }
            let wx = mu.int_pow(t.cut_of_state(x) as i32);
            let wy = mu.int_pow(t.cut_of_state(y) as i32);
            if wx * t.flip_probability(x, v) != wy * t.flip_probability(y, v) {
                return false;
            }
        }
    }
    true
}

/// Exact Gibbs stationary vector (probabilities per state index).
pub fn gibbs_vector(g: &Graph, mu: &BigRational) -> Result<Vec<BigRational>> {
    let dim = 1usize << g.n();
    let mut weights = vec![BigRational::zero(); dim];
    let mut z = BigRational::zero();
    for_each_config(g, TRANSITION_CAP, |bits, cut| {
        let w = mu.int_pow(cut as i32);
        z += &w;
        weights[bits as usize] = w;
    })?;
    Ok(weights.into_iter().map(|w| w / &z).collect())
}

/// Stationary distribution recovered from the top eigenvector of the
/// symmetrized matrix — an eigen-solver route independent of the Gibbs
/// formula, for cross-checking.
pub fn stationary_from_eigen<T: Weight>(t: &TransitionMatrix<T>, g: &Graph, mu: &BigRational)
    -> Result<Vec<f64>>
{
    if t.n > EIGEN_CAP {
        return Err(Error::StateSpaceCap {
            what: "dense eigen-solve",
            n: t.n,
            cap: EIGEN_CAP,
        });
    }
    let pi: Vec<f64> = gibbs_vector(g, mu)?.iter().map(ratio_to_f64).collect();
    let s = symmetrized(t, &pi);
    let eigen = SymmetricEigen::new(s);
    // top eigenvector u corresponds to eigenvalue 1; pi = sqrt(pi) .* u
    let mut top = 0;
    for i in 0..eigen.eigenvalues.len() {
        if eigen.eigenvalues[i] > eigen.eigenvalues[top] {
            top = i;
        }
    }
    let u = eigen.eigenvectors.column(top);
    let mut stat: Vec<f64> = (0..t.dimension()).map(|x| pi[x].sqrt() * u[x]).collect();
    let total: f64 = stat.iter().sum();
    for v in &mut stat {
        *v /= total;
    }
    Ok(stat)
}

fn symmetrized<T: Weight>(t: &TransitionMatrix<T>, pi: &[f64]) -> DMatrix<f64> {
    let dim = t.dimension();
    let mut s = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        s[(x, x)] = t.diag[x].to_f64_approx();
        for v in 0..t.n {
            let y = x ^ (1 << v);
            s[(x, y)] = t.flip[x][v].to_f64_approx() * (pi[x] / pi[y]).sqrt();
        }
    }
    // enforce exact symmetry against rounding
    for x in 0..dim {
        for y in (x + 1)..dim {
            let avg = 0.5 * (s[(x, y)] + s[(y, x)]);
            s[(x, y)] = avg;
            s[(y, x)] = avg;
        }
    }
    s
}

/// Spectral gap 1 - lambda_2 (second-largest eigenvalue) of the chain.
pub fn spectral_gap<T: Weight>(t: &TransitionMatrix<T>, g: &Graph, mu: &BigRational) -> Result<f64> {
    if t.n > EIGEN_CAP {
        return Err(Error::StateSpaceCap {
            what: "dense eigen-solve",
            n: t.n,
            cap: EIGEN_CAP,
        });
    }
    let pi: Vec<f64> = gibbs_vector(g, mu)?.iter().map(ratio_to_f64).collect();
    let eigen = SymmetricEigen::new(symmetrized(t, &pi));
    let mut evs: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(1.0 - evs[1])
}

/// Smallest t such that max over starting states of TV(law of X_t, pi) is
/// at most `threshold`. All 2^n starts are iterated, halved by the global
/// spin-flip symmetry (sigma and -sigma have identical TV profiles).
pub fn mixing_time_exact<T: Weight>(
    t: &TransitionMatrix<T>,
    g: &Graph,
    mu: &BigRational,
    threshold: f64,
) -> Result<u64> {
    if t.n > MIXING_CAP {
        return Err(Error::StateSpaceCap {
            what: "exact mixing time",
            n: t.n,
            cap: MIXING_CAP,
        });
    }
    let dim = t.dimension();
    let pi: Vec<f64> = gibbs_vector(g, mu)?.iter().map(ratio_to_f64).collect();
    let diag: Vec<f64> = t.diag.iter().map(|p| p.to_f64_approx()).collect();
    let flips: Vec<Vec<f64>> = t
        .flip
        .iter()
        .map(|row| row.iter().map(|p| p.to_f64_approx()).collect())
        .collect();

    // representative starts: fix vertex 0 to minus; the flipped start has
    // the same distance profile by symmetry
    let starts: Vec<usize> = (0..dim).filter(|x| x & 1 == 0).collect();
    let mut worst_time = 0u64;
    const MAX_STEPS: u64 = 10_000_000;
    for &start in &starts {
        let mut dist = vec![0.0f64; dim];
        dist[start] = 1.0;
        let mut time = 0u64;
        loop {
            let tv = 0.5
                * dist
                    .iter()
                    .zip(&pi)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>();
            if tv <= threshold {
                break;
            }
            // one step: next[y] = sum_x dist[x] P(x, y)
            let mut next = vec![0.0f64; dim];
            for x in 0..dim {
                let dx = dist[x];
                if dx == 0.0 {
                    continue;
                }
                next[x] += dx * diag[x];
                for v in 0..t.n {
                    next[x ^ (1 << v)] += dx * flips[x][v];
                }
            }
            dist = next;
            time += 1;
            if time > MAX_STEPS {
                return Err(Error::Precondition(format!(
                    "mixing time exceeds {MAX_STEPS} steps"
                )));
            }
        }
        worst_time = worst_time.max(time);
    }
    Ok(worst_time)
}

/// What the boundary weight of a [`ConductanceReport`] measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BottleneckMethod {
    /// Exact stationary flow out of A: Q(A, A^c).
    ExactFlow,
    /// Mass of a blocking set every escape path must cross; an upper bound
    /// on the flow for single-site dynamics.
    BlockingMass,
}

/// Exact bottleneck statistics for a set A of configurations.
#[derive(Clone, Debug)]
pub struct ConductanceReport {
    pub set_weight: WeightValue,
    pub boundary_weight: WeightValue,
    pub ratio: WeightValue,
    pub method: BottleneckMethod,
    pub description: String,
}

impl ConductanceReport {
    /// Standard conductance lower bound on mixing time: 1 / (4 ratio).
    pub fn mixing_time_lower_bound(&self) -> WeightValue {
        match &self.ratio {
            WeightValue::Exact(r) => {
                WeightValue::Exact(BigRational::one() / (r * BigRational::from_integer(4.into())))
            }
            WeightValue::Log(l) => WeightValue::Log(-l - 4f64.ln()),
        }
    }
}

/// Exact conductance of a configuration set A under Glauber dynamics on
/// (g, mu), by full enumeration: pi(A) and the stationary flow out of A.
pub fn bottleneck_ratio(
    g: &Graph,
    mu: &BigRational,
    in_a: impl Fn(&SpinConfig) -> bool,
    description: &str,
) -> Result<ConductanceReport> {
    if g.n() > BOTTLENECK_CAP {
        return Err(Error::StateSpaceCap {
            what: "bottleneck enumeration",
            n: g.n(),
            cap: BOTTLENECK_CAP,
        });
    }
    if !mu.is_positive() {
        return Err(Error::NonPositiveMu(mu.to_string()));
    }
    let n = g.n();
    let dim = 1usize << n;
    let mut cuts = vec![0u8; dim];
    let mut member = vec![false; dim];
    for_each_config(g, BOTTLENECK_CAP, |bits, cut| {
        cuts[bits as usize] = cut as u8;
        member[bits as usize] = in_a(&SpinConfig::from_bits(bits, n));
    })?;
    if !member.iter().any(|&m| m) {
        return Err(Error::BadParameter("the set A is empty".into()));
    }

    let max_deg = g.max_degree() as i64;
    let inv_n = BigRational::new(BigUint::one().into(), BigUint::from(n).into());
    let accept: Vec<BigRational> = (-max_deg..=max_deg)
        .map(|delta| {
            let a = mu.numer().magnitude();
            let b = mu.denom().magnitude();
            let d = delta.unsigned_abs() as u32;
            let (ad, bd) = (a.pow(d), b.pow(d));
            let (num, den) = if delta >= 0 {
                (ad.clone(), &ad + &bd)
            } else {
                (bd.clone(), &ad + &bd)
            };
            BigRational::new(num.into(), den.into()) * &inv_n
        })
        .collect();

    let mut z = BigRational::zero();
    let mut mass_a = BigRational::zero();
    let mut flow = BigRational::zero();
    for x in 0..dim as u64 {
        let wx = mu.int_pow(cuts[x as usize] as i32);
        z += &wx;
        if !member[x as usize] {
            continue;
        }
        mass_a += &wx;
        for v in 0..n as u32 {
            let y = x ^ (1u64 << v);
            if member[y as usize] {
                continue;
            }
            let delta = cuts[y as usize] as i64 - cuts[x as usize] as i64;
            flow += &wx * &accept[(delta + max_deg) as usize];
        }
    }
    let set_weight = &mass_a / &z;
    let boundary_weight = &flow / &z;
    let ratio = &boundary_weight / &set_weight;
    Ok(ConductanceReport {
        set_weight: WeightValue::Exact(set_weight),
        boundary_weight: WeightValue::Exact(boundary_weight),
        ratio: WeightValue::Exact(ratio),
        method: BottleneckMethod::ExactFlow,
        description: description.to_string(),
    })
}

/// Exact Gibbs vector converted to floats, for comparisons against
/// eigen-solves and empirical histograms.
pub fn gibbs_vector_f64(g: &Graph, mu: &BigRational) -> Result<Vec<f64>> {
    Ok(gibbs_vector(g, mu)?.iter().map(ratio_to_f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_mu;
    use num_bigint::BigInt;

    #[test]
    fn single_vertex_matrix_is_all_halves() {
        let g = Graph::empty(1);
        let mu = parse_mu("5").unwrap();
        let t: TransitionMatrix<BigRational> = transition_matrix(&g, &mu).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for x in 0..2u64 {
            assert_eq!(t.flip_probability(x, 0), half);
            assert_eq!(t.stay_probability(x), half);
        }
    }

    #[test]
    fn rows_sum_to_one_exactly() {
        let g = Graph::cycle(5);
        let mu = parse_mu("7/3").unwrap();
        let t: TransitionMatrix<BigRational> = transition_matrix(&g, &mu).unwrap();
        for x in 0..t.dimension() as u64 {
            assert_eq!(t.row_sum(x), BigRational::one());
        }
    }

    #[test]
    fn row_sums_near_one_in_f32_mode() {
        let g = Graph::cycle(4);
        let mu = parse_mu("3").unwrap();
        let t: TransitionMatrix<f32> = transition_matrix(&g, &mu).unwrap();
        for x in 0..t.dimension() as u64 {
            assert!((t.row_sum(x) - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn detailed_balance_holds_exactly() {
        for (g, mu) in [
            (Graph::complete(2), "3"),
            (Graph::path(3), "2"),
            (Graph::cycle(5), "7/3"),
            (crate::generate::random_cubic(8, 5).unwrap(), "2^20"),
        ] {
            let mu = parse_mu(mu).unwrap();
            let t: TransitionMatrix<BigRational> = transition_matrix(&g, &mu).unwrap();
            assert!(detailed_balance_exact(&t, &mu));
        }
    }

    #[test]
    fn k2_at_mu_one_is_doubly_stochastic() {
        let g = Graph::complete(2);
        let mu = parse_mu("1").unwrap();
        let t: TransitionMatrix<BigRational> = transition_matrix(&g, &mu).unwrap();
        // column sums = 1 as well (uniform stationary)
        for y in 0..4u64 {
            let mut col = t.stay_probability(y);
            for v in 0..2u32 {
                col += t.flip_probability(y ^ (1 << v), v);
            }
            assert_eq!(col, BigRational::one());
        }
    }

    #[test]
    fn stationary_eigen_matches_gibbs_on_p3() {
        let g = Graph::path(3);
        let mu = parse_mu("2").unwrap();
        let t: TransitionMatrix<BigRational> = transition_matrix(&g, &mu).unwrap();
        let from_eigen = stationary_from_eigen(&t, &g, &mu).unwrap();
        let exact = gibbs_vector_f64(&g, &mu).unwrap();
        for (a, b) in from_eigen.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn spectral_gap_examples() {
        let mu = parse_mu("1").unwrap();
        let single = Graph::empty(1);
        let t: TransitionMatrix<f64> = transition_matrix(&single, &mu).unwrap();
        let gap = spectral_gap(&t, &single, &mu).unwrap();
        assert!((gap - 1.0).abs() < 1e-10);

        // two isolated vertices: eigenvalues 1, 1/2, 1/2, 0
        let two = Graph::empty(2);
        let t: TransitionMatrix<f64> = transition_matrix(&two, &mu).unwrap();
        let gap = spectral_gap(&t, &two, &mu).unwrap();
        assert!((gap - 0.5).abs() < 1e-10, "gap = {gap}");
    }

    #[test]
    fn p3_spectral_gap_regression() {
        let g = Graph::path(3);
        let mu = parse_mu("2").unwrap();
        let t: TransitionMatrix<f64> = transition_matrix(&g, &mu).unwrap();
        let gap = spectral_gap(&t, &g, &mu).unwrap();
        assert!(gap > 0.0);
        // frozen baseline, cross-checked against an external dense solver
        assert!((gap - 0.1842621348333472).abs() < 1e-8, "gap = {gap}");
    }

    #[test]
    fn mixing_time_single_vertex_is_one() {
        let g = Graph::empty(1);
        let mu = parse_mu("3").unwrap();
        let t: TransitionMatrix<f64> = transition_matrix(&g, &mu).unwrap();
        assert_eq!(mixing_time_exact(&t, &g, &mu, 0.25).unwrap(), 1);
    }

    #[test]
    fn mixing_time_matches_direct_iteration_on_empty_pair() {
        let g = Graph::empty(2);
        let mu = parse_mu("2").unwrap();
        let t: TransitionMatrix<f64> = transition_matrix(&g, &mu).unwrap();
        let got = mixing_time_exact(&t, &g, &mu, 0.25).unwrap();

        // independent oracle: dense 4x4 product chain evolved from the
        // worst start
        let p = 0.25f64;
        let mut dist = [1.0, 0.0, 0.0, 0.0];
        let mut oracle = 0u64;
        loop {
            let tv: f64 = 0.5 * dist.iter().map(|d| (d - 0.25).abs()).sum::<f64>();
            if tv <= 0.25 {
                break;
            }
            let mut next = [0.0f64; 4];
            for x in 0..4usize {
                next[x] += dist[x] * 0.5;
                next[x ^ 1] += dist[x] * p;
                next[x ^ 2] += dist[x] * p;
            }
            dist = next;
            oracle += 1;
        }
        assert_eq!(got, oracle);
    }

    #[test]
    fn stronger_interaction_mixes_slower_on_k2() {
        let g = Graph::complete(2);
        let t1: TransitionMatrix<f64> =
            transition_matrix(&g, &parse_mu("1").unwrap()).unwrap();
        let t100: TransitionMatrix<f64> =
            transition_matrix(&g, &parse_mu("100").unwrap()).unwrap();
        let m1 = mixing_time_exact(&t1, &g, &parse_mu("1").unwrap(), 0.25).unwrap();
        let m100 = mixing_time_exact(&t100, &g, &parse_mu("100").unwrap(), 0.25).unwrap();
        assert!(m100 > m1, "mu=100: {m100}, mu=1: {m1}");
    }

    #[test]
    fn bottleneck_on_k2_all_plus_state() {
        let g = Graph::complete(2);
        let mu = parse_mu("1").unwrap();
        let report = bottleneck_ratio(
            &g,
            &mu,
            |c| c.get(0) == 1 && c.get(1) == 1,
            "A = {++} on K2",
        )
        .unwrap();
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        assert_eq!(report.set_weight.as_exact().unwrap(), &quarter);
        // flow out: pi(++) * (P(flip 0) + P(flip 1)) = 1/4 * (1/4 + 1/4)
        let eighth = BigRational::new(BigInt::from(1), BigInt::from(8));
        assert_eq!(report.boundary_weight.as_exact().unwrap(), &eighth);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(report.ratio.as_exact().unwrap(), &half);
        assert_eq!(
            report.mixing_time_lower_bound().as_exact().unwrap(),
            &half
        );
    }

    #[test]
    fn bottleneck_consistent_with_gap_on_isolated_pair() {
        // A = {v0 = +}: flow = 1/8, pi(A) = 1/2, ratio = 1/4 = gap/2
        let g = Graph::empty(2);
        let mu = parse_mu("9").unwrap();
        let report = bottleneck_ratio(&g, &mu, |c| c.get(0) == 1, "v0 plus").unwrap();
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        assert_eq!(report.ratio.as_exact().unwrap(), &quarter);
        let t: TransitionMatrix<f64> = transition_matrix(&g, &mu).unwrap();
        let gap = spectral_gap(&t, &g, &mu).unwrap();
        assert!((gap - 0.5).abs() < 1e-10);
    }
}
