//! Per-vertex gadget reductions from cubic graphs.
//!
//! Each base vertex v becomes a gadget: kind H is two overlapping
//! 6-cliques on T_v ∪ A_v and A_v ∪ B_v (9 vertices, 27 internal edges,
//! unique maximum internal cut 18 at the two "perfect" states); kind J is
//! a complete bipartite K_{3,3} between T_v and A_v (6 vertices, 9
//! internal edges, maximum 9). Each base edge e = {u, v} becomes one
//! external edge joining the terminals t_u^e and t_v^e. Spins of the base
//! graph are recovered from a gadget configuration by majority vote over
//! its three terminals.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::recognition::KrauszCover;
use crate::spin::SpinConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    H,
    J,
}

impl GadgetKind {
    pub fn vertices_per_gadget(self) -> usize {
        match self {
            GadgetKind::H => 9,
            GadgetKind::J => 6,
        }
    }

    pub fn internal_edges_per_gadget(self) -> usize {
        match self {
            GadgetKind::H => 27,
            GadgetKind::J => 9,
        }
    }

    /// Internal cut attained by a perfect configuration.
    pub fn perfect_internal_cut(self) -> usize {
        match self {
            GadgetKind::H => 18,
            GadgetKind::J => 9,
        }
    }

    /// Internal spins marginalized per terminal triple: A and B for H,
    /// just A for J.
    pub fn completions_per_triple(self) -> usize {
        match self {
            GadgetKind::H => 64,
            GadgetKind::J => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::H => "H",
            GadgetKind::J => "J",
        }
    }
}

/// Index bookkeeping for a gadget reduction.
///
/// Gadget v occupies a contiguous block: terminals first (rank r terminal
/// of v is the one attached to v's r-th incident edge, edges sorted by
/// neighbor index), then A, then B (H only).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetLayout {
    pub kind: GadgetKind,
    /// terminals[v][r] = vertex of the reduction graph
    pub terminals: Vec<[u32; 3]>,
    pub a_sets: Vec<[u32; 3]>,
    pub b_sets: Option<Vec<[u32; 3]>>,
    /// per base edge, in base edge order: (t_u^e, t_v^e)
    pub external: Vec<(u32, u32)>,
}

impl GadgetLayout {
    pub fn gadget_count(&self) -> usize {
        self.terminals.len()
    }
}

/// A reduction instance: the constructed graph, its layout, the canonical
/// Krausz cover (H kind only; the J gadget is triangle-free and admits
/// none), and the cubic base.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub graph: Graph,
    pub layout: GadgetLayout,
    pub krausz: Option<KrauszCover>,
    pub base: Graph,
}

fn require_cubic(base: &Graph) -> Result<()> {
    for v in 0..base.n() as u32 {
        if base.degree(v) != 3 {
            return Err(Error::NonCubicBase {
                vertex: v,
                degree: base.degree(v),
            });
        }
    }
    if base.n() == 0 {
        return Err(Error::BadParameter("empty base graph".into()));
    }
    Ok(())
}

/// Standalone H gadget (9 vertices: 0-2 terminals, 3-5 A, 6-8 B), with
/// role labels.
pub fn h_gadget_graph() -> Graph {
    gadget_graph(GadgetKind::H)
}

/// Standalone J gadget (6 vertices: 0-2 terminals, 3-5 A).
pub fn j_gadget_graph() -> Graph {
    gadget_graph(GadgetKind::J)
}

fn gadget_graph(kind: GadgetKind) -> Graph {
    let mut edges = Vec::new();
    match kind {
        GadgetKind::H => {
            add_clique(&mut edges, &[0, 1, 2, 3, 4, 5]);
            add_clique(&mut edges, &[3, 4, 5, 6, 7, 8]);
        }
        GadgetKind::J => {
            for t in 0..3u32 {
                for a in 3..6u32 {
                    edges.push((t, a));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let labels: Vec<String> = (0..kind.vertices_per_gadget() as u32)
        .map(|i| role_label(kind, i))
        .collect();
    Graph::from_edges(kind.vertices_per_gadget(), &edges)
        .unwrap()
        .with_labels(labels)
        .unwrap()
}

fn role_label(kind: GadgetKind, local: u32) -> String {
    let _ = kind;
    match local {
        0..=2 => format!("T{local}"),
        3..=5 => format!("A{}", local - 3),
        _ => format!("B{}", local - 6),
    }
}

fn add_clique(edges: &mut Vec<(u32, u32)>, vs: &[u32]) {
    for (i, &a) in vs.iter().enumerate() {
        for &b in vs.iter().skip(i + 1) {
            edges.push((a.min(b), a.max(b)));
        }
    }
}

/// Build the gadget reduction of a cubic base graph, verifying the
/// structural invariants (vertex/edge counts, degree bound) on the way
/// out.
pub fn build_reduction(base: &Graph, kind: GadgetKind) -> Result<ReductionOutput> {
    require_cubic(base)?;
    let n = base.n();
    let block = kind.vertices_per_gadget();
    let total = n * block;

    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut terminals = Vec::with_capacity(n);
    let mut a_sets = Vec::with_capacity(n);
    let mut b_sets = if kind == GadgetKind::H {
        Some(Vec::with_capacity(n))
    } else {
        None
    };
    let mut labels = vec![String::new(); total];

    for v in 0..n {
        let offset = (v * block) as u32;
        let t = [offset, offset + 1, offset + 2];
        let a = [offset + 3, offset + 4, offset + 5];
        terminals.push(t);
        a_sets.push(a);
        match kind {
            GadgetKind::H => {
                let b = [offset + 6, offset + 7, offset + 8];
                b_sets.as_mut().unwrap().push(b);
                let mut ta: Vec<u32> = t.to_vec();
                ta.extend_from_slice(&a);
                add_clique(&mut edges, &ta);
                let mut ab: Vec<u32> = a.to_vec();
                ab.extend_from_slice(&b);
                add_clique(&mut edges, &ab);
                for (i, &x) in b.iter().enumerate() {
                    labels[x as usize] = format!("B({v},{i})");
                }
            }
            GadgetKind::J => {
                for &ti in &t {
                    for &ai in &a {
                        edges.push((ti, ai));
                    }
                }
            }
        }
        for (r, &x) in t.iter().enumerate() {
            let neighbor = base.neighbors(v as u32)[r];
            labels[x as usize] = format!("T({v},{neighbor})");
        }
        for (i, &x) in a.iter().enumerate() {
            labels[x as usize] = format!("A({v},{i})");
        }
    }

    // external edges: terminal rank = rank of the edge among the sorted
    // incident edges of its endpoint
    let base_edges = base.edges();
    let mut external = Vec::with_capacity(base_edges.len());
    for &(u, v) in &base_edges {
        let rank_u = base.neighbors(u).binary_search(&v).unwrap();
        let rank_v = base.neighbors(v).binary_search(&u).unwrap();
        let tu = terminals[u as usize][rank_u];
        let tv = terminals[v as usize][rank_v];
        edges.push((tu.min(tv), tu.max(tv)));
        external.push((tu, tv));
    }

    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_edges(total, &edges)?.with_labels(labels)?;

    // structural invariants, checked at build time
    let expected_edges = n * kind.internal_edges_per_gadget() + base_edges.len();
    if graph.m() != expected_edges {
        return Err(Error::InvalidGraph(format!(
            "reduction produced {} edges, expected {expected_edges}",
            graph.m()
        )));
    }
    let degree_bound = match kind {
        GadgetKind::H => 8,
        GadgetKind::J => 6,
    };
    if graph.max_degree() > degree_bound {
        return Err(Error::InvalidGraph(format!(
            "reduction degree {} exceeds bound {degree_bound}",
            graph.max_degree()
        )));
    }

    let krausz = (kind == GadgetKind::H).then(|| {
        let mut cliques = Vec::with_capacity(2 * n + external.len());
        for v in 0..n {
            let t = terminals[v];
            let a = a_sets[v];
            let b = b_sets.as_ref().unwrap()[v];
            cliques.push(vec![t[0], t[1], t[2], a[0], a[1], a[2]]);
            cliques.push(vec![a[0], a[1], a[2], b[0], b[1], b[2]]);
        }
        for &(x, y) in &external {
            cliques.push(vec![x, y]);
        }
        KrauszCover { cliques }
    });

    Ok(ReductionOutput {
        graph,
        layout: GadgetLayout {
            kind,
            terminals,
            a_sets,
            b_sets,
            external,
        },
        krausz,
        base: base.clone(),
    })
}

/// Majority projection: base spin of v = majority of its three terminal
/// spins (three is odd, so there is never a tie).
pub fn majority_projection(layout: &GadgetLayout, sigma_star: &SpinConfig) -> SpinConfig {
    let spins = layout
        .terminals
        .iter()
        .map(|t| {
            let plus = t.iter().filter(|&&x| sigma_star.get(x) == 1).count();
            if plus >= 2 {
                1
            } else {
                -1
            }
        })
        .collect();
    SpinConfig::new(spins).expect("majority spins are valid")
}

/// The unique maximum-weight lift of a base configuration: per gadget,
/// terminals and B take the base spin, A takes its negation. Its weight is
/// mu^(perfect_cut * n + c) where c is the base cut size.
pub fn perfect_lift(layout: &GadgetLayout, sigma: &SpinConfig) -> Result<SpinConfig> {
    if sigma.len() != layout.gadget_count() {
        return Err(Error::SizeMismatch {
            expected: layout.gadget_count(),
            got: sigma.len(),
        });
    }
    let block = layout.kind.vertices_per_gadget();
    let mut spins = vec![0i8; layout.gadget_count() * block];
    for v in 0..layout.gadget_count() {
        let s = sigma.get(v as u32);
        for &t in &layout.terminals[v] {
            spins[t as usize] = s;
        }
        for &a in &layout.a_sets[v] {
            spins[a as usize] = -s;
        }
        if let Some(b_sets) = &layout.b_sets {
            for &b in &b_sets[v] {
                spins[b as usize] = s;
            }
        }
    }
    SpinConfig::new(spins)
}

/// Exhaustive audit of a single gadget's internal cut sizes.
#[derive(Clone, Debug, Serialize)]
pub struct InternalCutAudit {
    pub kind: GadgetKind,
    pub config_count: usize,
    pub max_cut: usize,
    /// configurations attaining the maximum (as spin bitmasks)
    pub argmax: Vec<u16>,
    pub second_best: usize,
    /// histogram of internal cut sizes
    pub histogram: Vec<u64>,
}

/// Enumerate all 2^9 (H) or 2^6 (J) single-gadget configurations.
pub fn internal_cut_audit(kind: GadgetKind) -> InternalCutAudit {
    let g = gadget_graph(kind);
    let edges = g.edges();
    let n = g.n();
    let mut histogram = vec![0u64; g.m() + 1];
    let mut max_cut = 0usize;
    let mut argmax: Vec<u16> = Vec::new();
    for bits in 0u32..(1 << n) {
        let cut = edges
            .iter()
            .filter(|&&(u, v)| (bits >> u & 1) != (bits >> v & 1))
            .count();
        histogram[cut] += 1;
        if cut > max_cut {
            max_cut = cut;
            argmax.clear();
        }
        if cut == max_cut {
            argmax.push(bits as u16);
        }
    }
    let second_best = histogram[..max_cut]
        .iter()
        .rposition(|&c| c > 0)
        .unwrap_or(0);
    InternalCutAudit {
        kind,
        config_count: 1 << n,
        max_cut,
        argmax,
        second_best,
        histogram,
    }
}

/// Marginalized internal-completion tables: `w(k)[d]` counts the internal
/// (A, and B for H) assignments with internal cut `d`, for any fixed
/// terminal triple carrying `k` plus spins. Gadgets are symmetric under
/// terminal permutations, so only the count k matters.
#[derive(Clone, Debug)]
pub struct GadgetTables {
    pub kind: GadgetKind,
    pub by_plus_count: [Vec<u64>; 4],
}

pub fn gadget_tables(kind: GadgetKind) -> GadgetTables {
    let g = gadget_graph(kind);
    let edges = g.edges();
    let internal_n = kind.vertices_per_gadget() - 3;
    let mut by_plus_count: [Vec<u64>; 4] = Default::default();
    for (k, table) in by_plus_count.iter_mut().enumerate() {
        let terminal_bits = (1u32 << k) - 1; // lowest k terminals are plus
        let mut hist = vec![0u64; kind.perfect_internal_cut() + 1];
        for internal in 0u32..(1 << internal_n) {
            let bits = terminal_bits | (internal << 3);
            let cut = edges
                .iter()
                .filter(|&&(u, v)| (bits >> u & 1) != (bits >> v & 1))
                .count();
            hist[cut] += 1;
        }
        *table = hist;
    }
    GadgetTables {
        kind,
        by_plus_count,
    }
}

/// Per-gadget count of configurations whose terminal majority matches a
/// required sign, and the resulting fiber size over an n-vertex base.
#[derive(Clone, Debug, Serialize)]
pub struct FiberCount {
    pub kind: GadgetKind,
    /// configurations of one gadget with the required terminal majority
    pub per_gadget: u64,
    pub gadget_count: usize,
    /// per_gadget^n as the structural fiber size |phi^-1(sigma)|
    #[serde(serialize_with = "crate::scalar::serialize_biguint")]
    pub total: BigUint,
}

/// |phi^-1(sigma)| by per-gadget enumeration; independent of sigma because
/// the gadget is sign-symmetric.
pub fn fiber_count(layout: &GadgetLayout) -> FiberCount {
    let kind = layout.kind;
    let g = gadget_graph(kind);
    let n_local = g.n();
    let mut per_gadget = 0u64;
    for bits in 0u32..(1 << n_local) {
        let plus_terminals = (bits & 0b111).count_ones();
        if plus_terminals >= 2 {
            per_gadget += 1;
        }
    }
    let total = BigUint::from(per_gadget).pow(layout.gadget_count() as u32);
    FiberCount {
        kind,
        per_gadget,
        gadget_count: layout.gadget_count(),
        total,
    }
}
