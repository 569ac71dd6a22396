//! Kurosh rank from the component structure of a core complex.
//!
//! The complex retracts onto a bipartite graph Γ: one node per factor
//! component, one edge per vertex (joining the vertex's A-component node to
//! its B-component node). The subgroup decomposes as a free product of one
//! conjugated factor subgroup per component with nontrivial stabilizer and a
//! free group of rank equal to the first Betti number of Γ. The Kurosh rank
//! is the number of those nontrivial factors plus that Betti number.

use crate::complex::CoreComplex;
use crate::group::{Factor, Subgroup};

/// One node of Γ per factor component of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaNode {
    pub tag: Factor,
    pub component: usize,
    pub nontrivial: bool,
}

/// The bipartite component graph Γ. Edges are indexed by core vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    nodes: Vec<GammaNode>,
    /// Edge `v` joins `(a_node(v), b_node(v))`, as indices into `nodes`.
    edges: Vec<(usize, usize)>,
}

impl GammaGraph {
    pub fn nodes(&self) -> &[GammaNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of connected components; the complex being connected forces 1.
    fn component_count(&self) -> usize {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }
}

/// Kurosh rank data: `krank = graph_rank + #nontrivial vertex groups`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuroshData {
    /// First Betti number of Γ: the rank of the free part.
    pub graph_rank: usize,
    /// Stabilizers of the flagged components, A-components first, each in
    /// ascending component order.
    pub nontrivial_vertex_groups: Vec<(Factor, Subgroup)>,
    pub krank: usize,
}

/// Build Γ: A-component nodes first (in component order), then B-component
/// nodes; one edge per vertex.
pub fn gamma_graph(c: &CoreComplex) -> GammaGraph {
    let a_count = c.components(Factor::A).len();
    let mut nodes = Vec::new();
    for tag in [Factor::A, Factor::B] {
        for (i, comp) in c.components(tag).iter().enumerate() {
            nodes.push(GammaNode {
                tag,
                component: i,
                nontrivial: !comp.stabilizer().is_trivial(),
            });
        }
    }
    let edges = (0..c.vertex_count())
        .map(|v| {
            (
                c.component_id(Factor::A, v),
                a_count + c.component_id(Factor::B, v),
            )
        })
        .collect();
    GammaGraph { nodes, edges }
}

/// Kurosh rank of the subgroup the complex represents.
pub fn kurosh_rank(c: &CoreComplex) -> KuroshData {
    let gamma = gamma_graph(c);
    assert_eq!(
        gamma.component_count(),
        1,
        "core complexes are connected, so Γ must be too"
    );
    let graph_rank = gamma.edges().len() + 1 - gamma.nodes().len();
    let nontrivial_vertex_groups: Vec<(Factor, Subgroup)> = [Factor::A, Factor::B]
        .into_iter()
        .flat_map(|tag| {
            c.components(tag)
                .iter()
                .filter(|comp| !comp.stabilizer().is_trivial())
                .map(move |comp| (tag, comp.stabilizer().clone()))
        })
        .collect();
    let krank = graph_rank + nontrivial_vertex_groups.len();
    KuroshData {
        graph_rank,
        nontrivial_vertex_groups,
        krank,
    }
}
