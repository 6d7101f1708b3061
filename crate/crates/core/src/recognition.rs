//! Graph-class checks: claw-free, quasi-line, and Krausz clique covers.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Multigraph};

/// An induced K_{1,3}: a center with three pairwise non-adjacent neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClawWitness {
    pub center: u32,
    pub leaves: [u32; 3],
}

/// True iff no vertex has three pairwise non-adjacent neighbors; on
/// failure returns an induced claw.
pub fn is_claw_free(g: &Graph) -> (bool, Option<ClawWitness>) {
    for v in 0..g.n() as u32 {
        let nb = g.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            for (j, &b) in nb.iter().enumerate().skip(i + 1) {
                if g.has_edge(a, b) {
                    continue;
                }
                for &c in nb.iter().skip(j + 1) {
                    if !g.has_edge(a, c) && !g.has_edge(b, c) {
                        return (
                            false,
                            Some(ClawWitness {
                                center: v,
                                leaves: [a, b, c],
                            }),
                        );
                    }
                }
            }
        }
    }
    (true, None)
}

/// True iff every vertex's neighborhood splits into two cliques, which
/// holds exactly when the complement of the induced neighborhood graph is
/// bipartite. On failure returns a violating vertex.
pub fn is_quasi_line(g: &Graph) -> (bool, Option<u32>) {
    for v in 0..g.n() as u32 {
        if !neighborhood_complement_bipartite(g, v) {
            return (false, Some(v));
        }
    }
    (true, None)
}

fn neighborhood_complement_bipartite(g: &Graph, v: u32) -> bool {
    let nb = g.neighbors(v);
    let k = nb.len();
    // 2-color the complement: non-adjacent neighbors must take different
    // sides, i.e. each side induces a clique in g.
    let mut color = vec![-1i8; k];
    for start in 0..k {
        if color[start] != -1 {
            continue;
        }
        color[start] = 0;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for j in 0..k {
                if i == j || g.has_edge(nb[i], nb[j]) {
                    continue;
                }
                if color[j] == -1 {
                    color[j] = 1 - color[i];
                    queue.push(j);
                } else if color[j] == color[i] {
                    return false;
                }
            }
        }
    }
    true
}

/// Edge clique cover certifying line-graph-of-multigraph structure: every
/// edge inside some clique, every clique complete, every vertex in at most
/// two cliques.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrauszCover {
    pub cliques: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KrauszViolation {
    /// Clique `index` misses the edge between two of its members.
    NotAClique { index: usize, missing: (u32, u32) },
    UncoveredEdge(u32, u32),
    VertexInTooManyCliques { vertex: u32, cliques: Vec<usize> },
    VertexOutOfRange { index: usize, vertex: u32 },
}

/// Validate a claimed Krausz cover against `g`; all violations are
/// enumerated.
pub fn validate_krausz_cover(g: &Graph, cover: &KrauszCover) -> (bool, Vec<KrauszViolation>) {
    let mut violations = Vec::new();
    for (index, clique) in cover.cliques.iter().enumerate() {
        for &v in clique {
            if v as usize >= g.n() {
                violations.push(KrauszViolation::VertexOutOfRange { index, vertex: v });
            }
        }
        for (i, &a) in clique.iter().enumerate() {
            for &b in clique.iter().skip(i + 1) {
                if a != b && (a as usize) < g.n() && (b as usize) < g.n() && !g.has_edge(a, b) {
                    violations.push(KrauszViolation::NotAClique {
                        index,
                        missing: (a, b),
                    });
                }
            }
        }
    }
    'edges: for (u, v) in g.edges() {
        for clique in &cover.cliques {
            if clique.contains(&u) && clique.contains(&v) {
                continue 'edges;
            }
        }
        violations.push(KrauszViolation::UncoveredEdge(u, v));
    }
    for v in 0..g.n() as u32 {
        let containing: Vec<usize> = cover
            .cliques
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&v))
            .map(|(i, _)| i)
            .collect();
        if containing.len() > 2 {
            violations.push(KrauszViolation::VertexInTooManyCliques {
                vertex: v,
                cliques: containing,
            });
        }
    }
    (violations.is_empty(), violations)
}

/// The canonical cover of a line graph: one clique per vertex of the base
/// multigraph, holding the edges incident to it.
pub fn canonical_line_cover(h: &Multigraph) -> KrauszCover {
    let mut cliques = vec![Vec::new(); h.n()];
    for (i, &(a, b)) in h.edges().iter().enumerate() {
        cliques[a as usize].push(i as u32);
        cliques[b as usize].push(i as u32);
    }
    cliques.retain(|c| !c.is_empty());
    KrauszCover { cliques }
}

/// Whether all clique pairs intersect in at most one vertex (the extra
/// condition separating line graphs of simple graphs from line graphs of
/// multigraphs).
pub fn cliques_pairwise_intersect_at_most_one(cover: &KrauszCover) -> bool {
    for (i, a) in cover.cliques.iter().enumerate() {
        for b in cover.cliques.iter().skip(i + 1) {
            let common = a.iter().filter(|v| b.contains(v)).count();
            if common > 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::line_graph;

    #[test]
    fn claw_is_not_claw_free() {
        let (ok, witness) = is_claw_free(&Graph::star(3));
        assert!(!ok);
        let w = witness.unwrap();
        assert_eq!(w.center, 0);
        assert_eq!(w.leaves, [1, 2, 3]);
    }

    #[test]
    fn triangle_is_claw_free() {
        assert!(is_claw_free(&Graph::complete(3)).0);
    }

    #[test]
    fn claw_is_not_quasi_line() {
        let (ok, witness) = is_quasi_line(&Graph::star(3));
        assert!(!ok);
        assert_eq!(witness, Some(0));
    }

    #[test]
    fn five_cycle_is_quasi_line() {
        assert!(is_quasi_line(&Graph::cycle(5)).0);
    }

    #[test]
    fn petersen_contains_claws() {
        // girth 5, degree 3: any vertex is a claw center
        assert!(!is_claw_free(&Graph::petersen()).0);
    }

    #[test]
    fn triangle_cover_validates() {
        let g = Graph::complete(3);
        let cover = KrauszCover {
            cliques: vec![vec![0, 1, 2]],
        };
        let (ok, violations) = validate_krausz_cover(&g, &cover);
        assert!(ok, "{violations:?}");
    }

    #[test]
    fn star_cover_puts_center_in_three_cliques() {
        let g = Graph::star(3);
        let cover = KrauszCover {
            cliques: vec![vec![0, 1], vec![0, 2], vec![0, 3]],
        };
        let (ok, violations) = validate_krausz_cover(&g, &cover);
        assert!(!ok);
        assert!(violations
            .iter()
            .any(|v| matches!(v, KrauszViolation::VertexInTooManyCliques { vertex: 0, .. })));
    }

    #[test]
    fn canonical_cover_of_line_graph_validates() {
        let h = Multigraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let g = line_graph(&h);
        let cover = canonical_line_cover(&h);
        let (ok, violations) = validate_krausz_cover(&g, &cover);
        assert!(ok, "{violations:?}");
        // parallel edges make two cliques share two vertices
        assert!(!cliques_pairwise_intersect_at_most_one(&cover));
    }

    #[test]
    fn simple_base_gives_linear_cover() {
        let h = Multigraph::from(&Graph::petersen());
        let cover = canonical_line_cover(&h);
        let g = line_graph(&h);
        assert!(validate_krausz_cover(&g, &cover).0);
        assert!(cliques_pairwise_intersect_at_most_one(&cover));
    }
}
