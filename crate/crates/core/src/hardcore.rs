//! Hard-core (independent set) partition function.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::CountPolynomial;
use crate::scalar::{MuSpec, WeightValue};
use crate::spin::DEFAULT_ENUM_CAP;

/// Independence polynomial: coefficient `k` counts the independent sets of
/// size `k`. Computed by branching on a highest-degree vertex, with the
/// edgeless remainder resolved as a binomial row.
pub fn hardcore_polynomial(g: &Graph) -> Result<CountPolynomial> {
    hardcore_polynomial_with_cap(g, DEFAULT_ENUM_CAP)
}

pub fn hardcore_polynomial_with_cap(g: &Graph, cap: usize) -> Result<CountPolynomial> {
    if g.n() > cap {
        return Err(Error::EnumerationCap { n: g.n(), cap });
    }
    let adj = g.adjacency_masks()?;
    let full = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let counts = branch(&adj, full);
    Ok(CountPolynomial::from_u64_counts(&counts))
}

fn branch(adj: &[u64], mask: u64) -> Vec<u64> {
    // highest-degree vertex within the remaining mask
    let mut best: Option<(u32, u32)> = None;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let deg = (adj[v as usize] & mask).count_ones();
        if deg > 0 && best.is_none_or(|(_, d)| deg > d) {
            best = Some((v, deg));
        }
    }
    match best {
        None => {
            // edgeless: every subset is independent
            let k = mask.count_ones() as usize;
            binomial_row(k)
        }
        Some((v, _)) => {
            let without = branch(adj, mask & !(1 << v));
            let with = branch(adj, mask & !(1 << v) & !adj[v as usize]);
            let mut out = vec![0u64; without.len().max(with.len() + 1)];
            for (i, c) in without.iter().enumerate() {
                out[i] += c;
            }
            for (i, c) in with.iter().enumerate() {
                out[i + 1] += c;
            }
            out
        }
    }
}

fn binomial_row(k: usize) -> Vec<u64> {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=k {
        row[i] = row[i - 1] * (k - i + 1) as u64 / i as u64;
    }
    row
}

/// Evaluate the hard-core partition function at fugacity `lambda`, also
/// returning the exact coefficient vector.
pub fn hardcore_partition(g: &Graph, lambda: &MuSpec) -> Result<(WeightValue, CountPolynomial)> {
    let poly = hardcore_polynomial(g)?;
    let value = crate::spin::partition_eval(&poly, lambda)?;
    Ok((value, poly))
}
