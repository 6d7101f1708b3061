//! Exhaustive vertex-expansion (magnifier) certification.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Subset-enumeration cap: 2^28 sets is a few seconds of popcounts.
pub const MAGNIFIER_CAP: usize = 28;

/// Exact certificate: the worst vertex subset U with |U| <= n/2 by the
/// ratio |N(U) \ U| / |U|, and the verdict for a queried constant c.
#[derive(Clone, Debug, Serialize)]
pub struct MagnifierCertificate {
    /// queried expansion constant
    #[serde(serialize_with = "serialize_ratio")]
    pub c: Ratio<u64>,
    pub worst_set: Vec<u32>,
    pub worst_boundary: usize,
    /// |N(U) \ U| / |U| of the worst set
    #[serde(serialize_with = "serialize_ratio")]
    pub worst_ratio: Ratio<u64>,
    pub is_c_magnifier: bool,
}

fn serialize_ratio<S: serde::Serializer>(
    r: &Ratio<u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Brute-force verdict over all subsets U with 1 <= |U| <= n/2.
pub fn certify_magnifier(g: &Graph, c: Ratio<u64>) -> Result<MagnifierCertificate> {
    let n = g.n();
    if n > MAGNIFIER_CAP {
        return Err(Error::StateSpaceCap {
            what: "magnifier certification",
            n,
            cap: MAGNIFIER_CAP,
        });
    }
    if n == 0 {
        return Err(Error::BadParameter("empty graph".into()));
    }
    let adj = g.adjacency_masks()?;
    let max_size = n / 2;
    if max_size == 0 {
        return Err(Error::BadParameter(
            "graph too small for a nonempty subset of size <= n/2".into(),
        ));
    }

    struct Search<'a> {
        adj: &'a [u64],
        n: usize,
        max_size: usize,
        best_boundary: u64,
        best_size: u64,
        best_mask: u64,
    }
    impl Search<'_> {
        fn consider(&mut self, mask: u64, nbhd: u64, size: u64) {
            let boundary = (nbhd & !mask).count_ones() as u64;
            // minimize boundary/size by cross-multiplication
            if boundary * self.best_size < self.best_boundary * size {
                self.best_boundary = boundary;
                self.best_size = size;
                self.best_mask = mask;
            }
        }
        fn recurse(&mut self, pos: usize, mask: u64, nbhd: u64, size: usize) {
            if pos == self.n || size == self.max_size {
                return;
            }
            let with = mask | (1u64 << pos);
            let with_nbhd = nbhd | self.adj[pos];
            self.consider(with, with_nbhd, size as u64 + 1);
            self.recurse(pos + 1, with, with_nbhd, size + 1);
            self.recurse(pos + 1, mask, nbhd, size);
        }
    }

    let mut search = Search {
        adj: &adj,
        n,
        max_size,
        best_boundary: u64::MAX / (n as u64 + 1),
        best_size: 1,
        best_mask: 0,
    };
    search.recurse(0, 0, 0, 0);

    let worst_set: Vec<u32> = (0..n as u32)
        .filter(|&v| search.best_mask >> v & 1 == 1)
        .collect();
    // recomputation guard on the reported set
    let mut nbhd = 0u64;
    for &v in &worst_set {
        nbhd |= adj[v as usize];
    }
    let boundary = (nbhd & !search.best_mask).count_ones() as usize;
    assert_eq!(boundary as u64, search.best_boundary);

    let worst_ratio = Ratio::new(boundary as u64, worst_set.len() as u64);
    Ok(MagnifierCertificate {
        c,
        worst_boundary: boundary,
        is_c_magnifier: worst_ratio >= c,
        worst_set,
        worst_ratio,
    })
}

/// Second-largest adjacency eigenvalue. For a d-regular graph a small gap
/// d - lambda_2 signals poor expansion; used only as a pre-filter to skip
/// hopeless candidates before the exhaustive certification.
pub fn adjacency_second_eigenvalue(g: &Graph) -> f64 {
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u as usize, v as usize)] = 1.0;
        a[(v as usize, u as usize)] = 1.0;
    }
    let eigen = SymmetricEigen::new(a);
    let mut evs: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    evs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    evs[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_bipartite_cubic;
    use rand::seq::SliceRandom;

    fn one_eighth() -> Ratio<u64> {
        Ratio::new(1, 8)
    }

    #[test]
    fn k33_is_an_eighth_magnifier() {
        let cert = certify_magnifier(&Graph::complete_bipartite(3, 3), one_eighth()).unwrap();
        assert!(cert.is_c_magnifier);
        // any U with |U| <= 3 sees the whole opposite side of its largest
        // part; the worst ratio is 3/3 = 1
        assert!(cert.worst_ratio >= Ratio::new(1, 1));
    }

    #[test]
    fn disjoint_triangles_fail() {
        let two_triangles = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let cert = certify_magnifier(&two_triangles, one_eighth()).unwrap();
        assert!(!cert.is_c_magnifier);
        assert_eq!(cert.worst_boundary, 0);
        assert_eq!(cert.worst_set.len(), 3);
    }

    #[test]
    fn worst_set_ratio_recomputes() {
        let g = random_bipartite_cubic(4, 11).unwrap();
        let cert = certify_magnifier(&g, one_eighth()).unwrap();
        let mut nbhd: Vec<u32> = Vec::new();
        for &v in &cert.worst_set {
            for &w in g.neighbors(v) {
                if !cert.worst_set.contains(&w) && !nbhd.contains(&w) {
                    nbhd.push(w);
                }
            }
        }
        assert_eq!(nbhd.len(), cert.worst_boundary);
        assert_eq!(
            cert.worst_ratio,
            Ratio::new(nbhd.len() as u64, cert.worst_set.len() as u64)
        );
    }

    #[test]
    fn verdict_is_relabeling_invariant() {
        let g = random_bipartite_cubic(4, 3).unwrap();
        let cert = certify_magnifier(&g, one_eighth()).unwrap();

        let mut rng = crate::rng::rng_from_seed(5);
        let mut perm: Vec<u32> = (0..g.n() as u32).collect();
        perm.shuffle(&mut rng);
        let edges: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        let relabeled = Graph::from_edges(g.n(), &edges).unwrap();
        let cert2 = certify_magnifier(&relabeled, one_eighth()).unwrap();
        assert_eq!(cert.is_c_magnifier, cert2.is_c_magnifier);
        assert_eq!(cert.worst_ratio, cert2.worst_ratio);
    }

    #[test]
    fn spectral_prefilter_orders_good_and_bad_expanders() {
        let good = Graph::complete_bipartite(3, 3);
        let bad = Graph::complete(3).disjoint_union(&Graph::complete(3));
        // both are 3-regular-ish; the disconnected one has lambda_2 = d
        assert!(adjacency_second_eigenvalue(&bad) > adjacency_second_eigenvalue(&good));
        assert!((adjacency_second_eigenvalue(&bad) - 2.0).abs() < 1e-9);
    }
}
