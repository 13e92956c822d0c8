//! GF(2) homology of a colored lattice: face boundaries, cocycles, homology
//! signatures, shortest noncontractible cycles, code distance, and the
//! loop-supported logical operators.

use crate::bits::{self, BitVec};
use crate::lattice::{Color, ColoredLattice, Schedule};
use crate::pauli::PauliOperator;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("edge set is not a cycle: vertex {0} has odd degree")]
    NotACycle(usize),
    #[error("edge vector has length {got}, lattice has {expected} edges")]
    Length { got: usize, expected: usize },
    #[error(
        "homology rank mismatch: cycle rank {cycle_rank} - boundary rank {boundary_rank} != {expected}"
    )]
    RankMismatch {
        cycle_rank: usize,
        boundary_rank: usize,
        expected: usize,
    },
    #[error("weight vector has length {got}, lattice has {expected} edges")]
    Weights { got: usize, expected: usize },
}

/// Cycle/cocycle structure of the tiled surface.
///
/// `cocycles[i] · cycles[j] = δ_ij`, so the homology class of a cycle is read
/// off by pairing it with every cocycle.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub cycle_space_rank: usize,
    pub boundary_rank: usize,
    pub h1_dim: usize,
    pub cocycles: Vec<BitVec>,
    /// Cycle representatives dual to `cocycles`.
    pub cycles: Vec<BitVec>,
    /// Per edge, the set of cocycles containing it (length `h1_dim`).
    edge_signature: Vec<BitVec>,
}

impl HomologyBasis {
    #[inline]
    pub fn edge_signature(&self, e: usize) -> &BitVec {
        &self.edge_signature[e]
    }

    /// Number of logical qubits, `h1_dim`, equal to twice the genus.
    pub fn num_logical_qubits(&self) -> usize {
        self.h1_dim
    }
}

/// Face-by-edge boundary matrix: row `f` is the indicator of face `f`'s
/// boundary edges.
pub fn boundary_space(lattice: &ColoredLattice) -> Vec<BitVec> {
    lattice
        .faces()
        .iter()
        .map(|f| BitVec::from_indices(lattice.num_edges(), f.boundary_edges.iter().copied()))
        .collect()
}

/// Builds a cocycle basis with a tree-cotree decomposition: a breadth-first
/// spanning tree of the graph, a breadth-first spanning tree of the dual
/// graph on the remaining edges, and one cocycle per leftover edge.
pub fn cocycle_basis(lattice: &ColoredLattice) -> Result<HomologyBasis, HomologyError> {
    let n = lattice.num_qubits();
    let ne = lattice.num_edges();
    let nf = lattice.num_faces();

    // primal BFS tree
    let mut in_tree = vec![false; ne];
    let mut parent_edge = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        let mut incident: Vec<usize> = Color::ALL.iter().map(|&c| lattice.edge_at(x, c)).collect();
        incident.sort_unstable();
        for e in incident {
            let y = lattice.edge(e).other(x);
            if !seen[y] {
                seen[y] = true;
                in_tree[e] = true;
                parent_edge[y] = e;
                queue.push_back(y);
            }
        }
    }

    // dual BFS tree over faces, crossing only non-tree edges
    let mut face_edges: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for e in 0..ne {
        if !in_tree[e] {
            for f in lattice.faces_of_edge(e) {
                face_edges[f].push(e);
            }
        }
    }
    let mut in_cotree = vec![false; ne];
    let mut face_parent = vec![usize::MAX; nf];
    let mut face_seen = vec![false; nf];
    let mut queue = VecDeque::from([0usize]);
    face_seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for &e in &face_edges[f] {
            let [a, b] = lattice.faces_of_edge(e);
            let g = if a == f { b } else { a };
            if !face_seen[g] {
                face_seen[g] = true;
                in_cotree[e] = true;
                face_parent[g] = e;
                queue.push_back(g);
            }
        }
    }

    let leftover: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();

    let boundary = boundary_space(lattice);
    let boundary_rank = bits::rank(&boundary);
    let cycle_space_rank = ne + 1 - n;
    let h1_dim = cycle_space_rank - boundary_rank;
    let expected = (2 - lattice.euler_characteristic()) as usize;
    if h1_dim != expected || leftover.len() != expected {
        return Err(HomologyError::RankMismatch {
            cycle_rank: cycle_space_rank,
            boundary_rank,
            expected,
        });
    }

    let mut cocycles = Vec::with_capacity(h1_dim);
    let mut cycles = Vec::with_capacity(h1_dim);
    for &l in &leftover {
        // dual cycle: l plus the dual-tree path between its two faces
        let mut co = BitVec::zeros(ne);
        co.flip(l);
        let [fa, fb] = lattice.faces_of_edge(l);
        for start in [fa, fb] {
            let mut f = start;
            while face_parent[f] != usize::MAX {
                let e = face_parent[f];
                co.flip(e);
                let [a, b] = lattice.faces_of_edge(e);
                f = if a == f { b } else { a };
            }
        }
        cocycles.push(co);

        // primal fundamental cycle of l
        let mut cyc = BitVec::zeros(ne);
        cyc.flip(l);
        let edge = lattice.edge(l);
        for start in [edge.u, edge.v] {
            let mut x = start;
            while parent_edge[x] != usize::MAX {
                let e = parent_edge[x];
                cyc.flip(e);
                x = lattice.edge(e).other(x);
            }
        }
        cycles.push(cyc);
    }

    let mut edge_signature = vec![BitVec::zeros(h1_dim); ne];
    for (j, co) in cocycles.iter().enumerate() {
        for e in co.iter_ones() {
            edge_signature[e].set(j, true);
        }
    }

    Ok(HomologyBasis {
        cycle_space_rank,
        boundary_rank,
        h1_dim,
        cocycles,
        cycles,
        edge_signature,
    })
}

/// Checks that every vertex meets the edge set an even number of times.
pub fn check_cycle(lattice: &ColoredLattice, cycle: &BitVec) -> Result<(), HomologyError> {
    if cycle.len() != lattice.num_edges() {
        return Err(HomologyError::Length {
            got: cycle.len(),
            expected: lattice.num_edges(),
        });
    }
    for v in 0..lattice.num_qubits() {
        let deg = Color::ALL
            .iter()
            .filter(|&&c| cycle.get(lattice.edge_at(v, c)))
            .count();
        if deg % 2 == 1 {
            return Err(HomologyError::NotACycle(v));
        }
    }
    Ok(())
}

/// Homology signature: bit `j` is the parity of `|cycle ∩ cocycle_j|`.
pub fn homology_class(
    lattice: &ColoredLattice,
    cycle: &BitVec,
    basis: &HomologyBasis,
) -> Result<BitVec, HomologyError> {
    check_cycle(lattice, cycle)?;
    Ok(signature_unchecked(cycle, basis))
}

fn signature_unchecked(cycle: &BitVec, basis: &HomologyBasis) -> BitVec {
    let mut sig = BitVec::zeros(basis.h1_dim);
    for e in cycle.iter_ones() {
        sig.xor_assign(&basis.edge_signature[e]);
    }
    sig
}

/// An edge set and its total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCycle {
    pub edges: BitVec,
    pub weight: u64,
}

fn check_weights(lattice: &ColoredLattice, weights: &[u32]) -> Result<(), HomologyError> {
    if weights.len() != lattice.num_edges() {
        return Err(HomologyError::Weights {
            got: weights.len(),
            expected: lattice.num_edges(),
        });
    }
    Ok(())
}

/// Graph whose edges are a subset of the lattice edges: either the lattice
/// itself or a dual graph on faces.
struct SearchGraph {
    num_nodes: usize,
    /// `(neighbor, lattice edge)` per node.
    adj: Vec<Vec<(usize, usize)>>,
    /// Node endpoints of each lattice edge, if the edge is present.
    ends: Vec<Option<(usize, usize)>>,
}

impl SearchGraph {
    fn primal(lattice: &ColoredLattice) -> Self {
        let n = lattice.num_qubits();
        let mut adj = vec![Vec::with_capacity(3); n];
        let mut ends = Vec::with_capacity(lattice.num_edges());
        for (e, edge) in lattice.edges().iter().enumerate() {
            adj[edge.u].push((edge.v, e));
            adj[edge.v].push((edge.u, e));
            ends.push(Some((edge.u, edge.v)));
        }
        SearchGraph {
            num_nodes: n,
            adj,
            ends,
        }
    }

    /// Faces as nodes, joined across the edges of `color`. Every such edge
    /// separates a face of each of the two other colors.
    fn dual(lattice: &ColoredLattice, color: Color) -> Self {
        let nf = lattice.num_faces();
        let mut adj = vec![Vec::new(); nf];
        let mut ends = vec![None; lattice.num_edges()];
        for e in lattice.edges_of_color(color) {
            let [a, b] = lattice.faces_of_edge(e);
            adj[a].push((b, e));
            adj[b].push((a, e));
            ends[e] = Some((a, b));
        }
        SearchGraph {
            num_nodes: nf,
            adj,
            ends,
        }
    }

    /// Single-source shortest paths; parent is `(node, edge)`. Uses a 0-1
    /// deque when every weight is 0 or 1, Dijkstra otherwise.
    fn shortest_paths(
        &self,
        source: usize,
        weights: &[u32],
        binary: bool,
        flips: Option<&BitVec>,
    ) -> (Vec<u64>, Vec<(usize, usize)>) {
        // with `flips`, nodes are doubled and crossing a flip edge swaps sheets
        let sheets = if flips.is_some() { 2 } else { 1 };
        let total = self.num_nodes * sheets;
        let mut dist = vec![u64::MAX; total];
        let mut parent = vec![(usize::MAX, usize::MAX); total];
        dist[source] = 0;
        let step = |node: usize| {
            let (x, sheet) = (node % self.num_nodes, node / self.num_nodes);
            self.adj[x].iter().map(move |&(y, e)| {
                let s = match flips {
                    Some(f) => sheet ^ f.get(e) as usize,
                    None => 0,
                };
                (s * self.num_nodes + y, e, weights[e])
            })
        };
        if binary {
            let mut deque = VecDeque::from([source]);
            let mut done = vec![false; total];
            while let Some(x) = deque.pop_front() {
                if std::mem::replace(&mut done[x], true) {
                    continue;
                }
                for (y, e, w) in step(x) {
                    let nd = dist[x] + w as u64;
                    if nd < dist[y] {
                        dist[y] = nd;
                        parent[y] = (x, e);
                        if w == 0 {
                            deque.push_front(y);
                        } else {
                            deque.push_back(y);
                        }
                    }
                }
            }
        } else {
            let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
            while let Some(Reverse((d, x))) = heap.pop() {
                if d > dist[x] {
                    continue;
                }
                for (y, e, w) in step(x) {
                    let nd = d + w as u64;
                    if nd < dist[y] {
                        dist[y] = nd;
                        parent[y] = (x, e);
                        heap.push(Reverse((nd, y)));
                    }
                }
            }
        }
        (dist, parent)
    }

    /// Minimum-weight closed edge set with nonzero signature, where an edge
    /// set's signature is the XOR of its edges' signatures.
    ///
    /// For every root a shortest-path tree is grown; each non-tree edge closes
    /// a fundamental cycle whose signature is the XOR of the two tree-path
    /// signatures and the edge's own. A minimum nontrivial cycle through the
    /// root always appears among these, so the minimum over all roots is
    /// exact. Ties keep the first root and edge in index order.
    fn min_nontrivial(
        &self,
        sigs: &[BitVec],
        weights: &[u32],
        roots: Option<&[usize]>,
    ) -> Option<WeightedCycle> {
        let n = self.num_nodes;
        let binary = weights.iter().all(|&w| w <= 1);
        let words = sigs.first().map_or(1, |s| s.words().len().max(1));
        let sig = |e: usize, k: usize| sigs[e].words().get(k).copied().unwrap_or(0);

        let mut best: Option<(u64, usize, Vec<(usize, usize)>)> = None;
        let mut vsig = vec![0u64; n * words];
        let mut done = vec![false; n];
        let mut stack = Vec::new();
        let all: Vec<usize>;
        let roots = match roots {
            Some(r) => r,
            None => {
                all = (0..n).collect();
                &all
            }
        };
        for &root in roots {
            let (dist, parent) = self.shortest_paths(root, weights, binary, None);
            // parents may sit at equal distance through zero-weight edges, so
            // signatures are filled by walking parent chains
            done.fill(false);
            done[root] = true;
            vsig[root * words..(root + 1) * words].fill(0);
            for v in 0..n {
                if dist[v] == u64::MAX {
                    continue;
                }
                let mut x = v;
                while !done[x] {
                    stack.push(x);
                    x = parent[x].0;
                }
                while let Some(y) = stack.pop() {
                    let (p, e) = parent[y];
                    for k in 0..words {
                        vsig[y * words + k] = vsig[p * words + k] ^ sig(e, k);
                    }
                    done[y] = true;
                }
            }
            for (e, ends) in self.ends.iter().enumerate() {
                let Some((u, v)) = *ends else { continue };
                if dist[u] == u64::MAX || parent[v].1 == e || parent[u].1 == e {
                    continue;
                }
                let candidate = dist[u] + dist[v] + weights[e] as u64;
                if best.as_ref().is_some_and(|b| candidate >= b.0) {
                    continue;
                }
                let nontrivial =
                    (0..words).any(|k| vsig[u * words + k] ^ vsig[v * words + k] ^ sig(e, k) != 0);
                if nontrivial {
                    best = Some((candidate, e, parent.clone()));
                }
            }
        }

        let (_, closing, parent) = best?;
        let mut edges = BitVec::zeros(self.ends.len());
        edges.flip(closing);
        let (a, b) = self.ends[closing].unwrap();
        for start in [a, b] {
            let mut x = start;
            while parent[x].0 != usize::MAX {
                edges.flip(parent[x].1);
                x = parent[x].0;
            }
        }
        let weight = edges.iter_ones().map(|e| weights[e] as u64).sum();
        Some(WeightedCycle { edges, weight })
    }

    /// The same minimum computed on double covers: for each flip set, the
    /// shortest path from a node to its copy on the other sheet is the
    /// shortest closed walk meeting that set an odd number of times. Only
    /// nodes touching the flip set are used as sources since every such walk
    /// crosses it.
    fn min_nontrivial_double_cover(&self, flip_sets: &[BitVec], weights: &[u32]) -> Option<u64> {
        let binary = weights.iter().all(|&w| w <= 1);
        let mut best = None;
        for flips in flip_sets {
            let mut sources: Vec<usize> = flips
                .iter_ones()
                .filter_map(|e| self.ends[e])
                .flat_map(|(a, b)| [a, b])
                .collect();
            sources.sort_unstable();
            sources.dedup();
            for s in sources {
                let (dist, _) = self.shortest_paths(s, weights, binary, Some(flips));
                let d = dist[self.num_nodes + s];
                if d != u64::MAX {
                    best = Some(best.map_or(d, |b: u64| b.min(d)));
                }
            }
        }
        best
    }
}

/// Per edge, the basis cycles through it (the pairing used for cocycles).
fn cycle_membership(lattice: &ColoredLattice, basis: &HomologyBasis) -> Vec<BitVec> {
    let mut out = vec![BitVec::zeros(basis.h1_dim); lattice.num_edges()];
    for (j, c) in basis.cycles.iter().enumerate() {
        for e in c.iter_ones() {
            out[e].set(j, true);
        }
    }
    out
}

/// Minimum-weight homologically nontrivial cycle.
pub fn shortest_noncontractible_cycle(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    weights: &[u32],
) -> Result<WeightedCycle, HomologyError> {
    check_weights(lattice, weights)?;
    let found = SearchGraph::primal(lattice)
        .min_nontrivial(&basis.edge_signature, weights, None)
        .expect("a closed surface of positive genus has noncontractible cycles");
    debug_assert!(!signature_unchecked(&found.edges, basis).is_zero());
    Ok(found)
}

/// Same minimum as [`shortest_noncontractible_cycle`], computed on the double
/// cover of each cocycle.
pub fn shortest_noncontractible_cycle_double_cover(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    weights: &[u32],
) -> Result<u64, HomologyError> {
    check_weights(lattice, weights)?;
    Ok(SearchGraph::primal(lattice)
        .min_nontrivial_double_cover(&basis.cocycles, weights)
        .expect("a closed surface of positive genus has noncontractible cycles"))
}

/// Fewest `color` edges forming a nontrivial cocycle that is a closed path
/// of the faces of the other two colors, crossing only `color` edges.
/// The returned edge set is the crossed edges.
pub fn shortest_nontrivial_cocycle(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    color: Color,
) -> WeightedCycle {
    let weights = vec![1u32; lattice.num_edges()];
    SearchGraph::dual(lattice, color)
        .min_nontrivial(&cycle_membership(lattice, basis), &weights, None)
        .expect("each color's edges carry a nontrivial cocycle")
}

/// Same minimum as [`shortest_nontrivial_cocycle`], on double covers of the
/// dual graph.
pub fn shortest_nontrivial_cocycle_double_cover(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    color: Color,
) -> u64 {
    let weights = vec![1u32; lattice.num_edges()];
    SearchGraph::dual(lattice, color)
        .min_nontrivial_double_cover(&basis.cycles, &weights)
        .expect("each color's edges carry a nontrivial cocycle")
}

/// Edge weights that count only edges of one color.
pub fn color_indicator_weights(lattice: &ColoredLattice, color: Color) -> Vec<u32> {
    lattice
        .edges()
        .iter()
        .map(|e| (e.color == color) as u32)
        .collect()
}

/// Lightest logicals right after a round of `color` checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundDistance {
    pub color: Color,
    /// Fewest `color` edges on a noncontractible cycle. The upcoming Pauli on
    /// both ends of each is a logical of weight `2 * loop_edges`.
    pub loop_edges: u64,
    /// Fewest `color` edges in a nontrivial cocycle. The recent Pauli on one
    /// end of each is a logical of weight `cut_edges`.
    pub cut_edges: u64,
}

impl RoundDistance {
    pub fn weight(&self) -> u64 {
        (2 * self.loop_edges).min(self.cut_edges)
    }
}

/// Minimum logical weight after each of the three round colors.
///
/// After a round of `color` checks, the stabilizer group is those checks
/// plus the plaquettes. Modulo the checks, each `color` edge behaves as one
/// qubit: the recent Pauli on one end has weight 1, and the other two Paulis
/// on both ends have weight 2. Faces of `color` act as vertex checks and the
/// other faces as plaquette checks of a surface code on the graph whose
/// nodes are `color` faces and whose edges are `color` edges. Its lightest
/// logicals are cycles of that graph (weight 2 per edge) or cocycles
/// (weight 1 per edge).
pub fn round_distances(lattice: &ColoredLattice, basis: &HomologyBasis) -> [RoundDistance; 3] {
    round_distances_inner(lattice, basis, None)
}

/// [`round_distances`] restricted to search roots. Exact when `vertex_roots`
/// meets every orbit of some color-preserving automorphism group, for example
/// one vertex per fiber of a regular cover.
pub fn round_distances_with_roots(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    vertex_roots: &[usize],
) -> [RoundDistance; 3] {
    round_distances_inner(lattice, basis, Some(vertex_roots))
}

fn round_distances_inner(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    vertex_roots: Option<&[usize]>,
) -> [RoundDistance; 3] {
    let primal = SearchGraph::primal(lattice);
    let membership = cycle_membership(lattice, basis);
    let unit = vec![1u32; lattice.num_edges()];
    let face_roots: Option<Vec<usize>> = vertex_roots.map(|roots| {
        let mut f: Vec<usize> = roots
            .iter()
            .flat_map(|&v| Color::ALL.map(|c| lattice.face_at(v, c)))
            .collect();
        f.sort_unstable();
        f.dedup();
        f
    });
    Color::ALL.map(|color| {
        let w = color_indicator_weights(lattice, color);
        let loop_edges = primal
            .min_nontrivial(&basis.edge_signature, &w, vertex_roots)
            .expect("a closed surface of positive genus has noncontractible cycles")
            .weight;
        let cut_edges = SearchGraph::dual(lattice, color)
            .min_nontrivial(&membership, &unit, face_roots.as_deref())
            .expect("each color's edges carry a nontrivial cocycle")
            .weight;
        RoundDistance {
            color,
            loop_edges,
            cut_edges,
        }
    })
}

/// Code distance: the lowest logical weight over all rounds.
pub fn code_distance(lattice: &ColoredLattice, basis: &HomologyBasis) -> usize {
    round_distances(lattice, basis)
        .iter()
        .map(RoundDistance::weight)
        .min()
        .unwrap() as usize
}

/// Type-one and type-two logical operators on one noncontractible cycle,
/// valid right after `round`'s measurements.
#[derive(Clone, Debug)]
pub struct LoopOperatorPair {
    pub cycle: BitVec,
    /// Most recent round's Pauli on the endpoints of upcoming-color loop edges.
    pub type_one: PauliOperator,
    /// Upcoming round's Pauli on the endpoints of most-recent-color loop edges.
    pub type_two: PauliOperator,
    /// `round mod 6`; the expressions repeat with this period.
    pub phase_round: u8,
}

/// `pauli` on both endpoints of every `color` edge of `cycle`.
pub fn paulis_on_colored_edges(
    lattice: &ColoredLattice,
    cycle: &BitVec,
    color: Color,
    pauli_color: Color,
) -> PauliOperator {
    let mut op = PauliOperator::identity(lattice.num_qubits());
    for e in cycle.iter_ones() {
        let edge = lattice.edge(e);
        if edge.color == color {
            op.set(edge.u, pauli_color.pauli());
            op.set(edge.v, pauli_color.pauli());
        }
    }
    op
}

/// Loop operator of a cycle: the product of the checks along it. On each loop
/// vertex this is the Pauli of the vertex's off-loop edge.
pub fn loop_operator(lattice: &ColoredLattice, cycle: &BitVec) -> PauliOperator {
    let mut op = PauliOperator::identity(lattice.num_qubits());
    for e in cycle.iter_ones() {
        op.mul_assign_up_to_phase(&lattice.check_operator(e).expect("edge in range"));
    }
    op
}

pub fn loop_operator_pair(
    lattice: &ColoredLattice,
    cycle: &BitVec,
    round: i64,
) -> LoopOperatorPair {
    let recent = Schedule::round_color(round);
    let upcoming = Schedule::round_color(round + 1);
    LoopOperatorPair {
        cycle: cycle.clone(),
        type_one: paulis_on_colored_edges(lattice, cycle, upcoming, recent),
        type_two: paulis_on_colored_edges(lattice, cycle, recent, upcoming),
        phase_round: round.rem_euclid(6) as u8,
    }
}

/// For each basis class, the type-one and type-two operators after `round`:
/// `2 · h1_dim` operators in total, ordered class by class.
pub fn logical_representatives(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    round: i64,
) -> Vec<LoopOperatorPair> {
    basis
        .cycles
        .iter()
        .map(|c| loop_operator_pair(lattice, c, round))
        .collect()
}

/// Expression after `round` of tracked logical `index` (`2j` or `2j + 1` for
/// class `j`). Tracked logical `2j` is type one after even rounds and type two
/// after odd rounds; `2j + 1` is the opposite. Advancing one round multiplies
/// by the checks measured along the loop, which swaps the two types.
pub fn tracked_logical(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    index: usize,
    round: i64,
) -> PauliOperator {
    let pair = loop_operator_pair(lattice, &basis.cycles[index / 2], round);
    let even_round = round.rem_euclid(2) == 0;
    if index.is_multiple_of(2) == even_round {
        pair.type_one
    } else {
        pair.type_two
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::h16;

    /// All elements of the cycle space, by enumerating subsets of a cycle
    /// basis built from BFS fundamental cycles. Only feasible for tiny
    /// lattices.
    fn all_cycle_space_elements(l: &ColoredLattice) -> Vec<BitVec> {
        let basis = bits::nullspace(
            &(0..l.num_qubits())
                .map(|v| {
                    BitVec::from_indices(l.num_edges(), Color::ALL.iter().map(|&c| l.edge_at(v, c)))
                })
                .collect::<Vec<_>>(),
            l.num_edges(),
        );
        let k = basis.len();
        assert!(k <= 20);
        (0u32..(1 << k))
            .map(|mask| {
                let mut v = BitVec::zeros(l.num_edges());
                for (i, b) in basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(b);
                    }
                }
                v
            })
            .collect()
    }

    #[test]
    fn h16_boundary_matrix() {
        let l = h16();
        let b = boundary_space(&l);
        assert_eq!(b.len(), 6);
        assert_eq!(b[0].len(), 24);
        let mut sum = BitVec::zeros(24);
        for r in &b {
            sum.xor_assign(r);
        }
        assert!(sum.is_zero());
        assert_eq!(bits::rank(&b), 5);
    }

    #[test]
    fn h16_cocycles() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        assert_eq!(h.cycle_space_rank, 9);
        assert_eq!(h.boundary_rank, 5);
        assert_eq!(h.h1_dim, 4);
        for co in &h.cocycles {
            for f in boundary_space(&l) {
                assert!(!co.dot(&f));
            }
        }
        for (i, co) in h.cocycles.iter().enumerate() {
            for (j, cy) in h.cycles.iter().enumerate() {
                assert_eq!(co.dot(cy), i == j);
            }
        }
    }

    #[test]
    fn face_boundaries_are_trivial_and_signatures_linear() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let b = boundary_space(&l);
        for f in &b {
            assert!(homology_class(&l, f, &h).unwrap().is_zero());
        }
        let s0 = homology_class(&l, &h.cycles[0], &h).unwrap();
        let s1 = homology_class(&l, &h.cycles[1], &h).unwrap();
        let sum = h.cycles[0].xor(&h.cycles[1]);
        assert_eq!(homology_class(&l, &sum, &h).unwrap(), s0.xor(&s1));
    }

    #[test]
    fn non_cycle_is_rejected() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let single = BitVec::from_indices(24, [0]);
        assert!(matches!(
            homology_class(&l, &single, &h),
            Err(HomologyError::NotACycle(_))
        ));
    }

    #[test]
    fn shortest_cycle_matches_brute_force_on_h16() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let elements = all_cycle_space_elements(&l);
        assert_eq!(elements.len(), 512);
        let mut weight_sets = vec![vec![1u32; 24], vec![0u32; 24]];
        for c in Color::ALL {
            weight_sets.push(color_indicator_weights(&l, c));
        }
        for w in &weight_sets {
            let brute = elements
                .iter()
                .filter(|c| !signature_unchecked(c, &h).is_zero())
                .map(|c| c.iter_ones().map(|e| w[e] as u64).sum::<u64>())
                .min()
                .unwrap();
            let fast = shortest_noncontractible_cycle(&l, &h, w).unwrap();
            assert_eq!(fast.weight, brute);
            assert!(!homology_class(&l, &fast.edges, &h).unwrap().is_zero());
            assert_eq!(
                shortest_noncontractible_cycle_double_cover(&l, &h, w).unwrap(),
                brute
            );
        }
    }

    #[test]
    fn zero_weights_give_zero() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let w = vec![0u32; 24];
        assert_eq!(
            shortest_noncontractible_cycle(&l, &h, &w).unwrap().weight,
            0
        );
    }

    #[test]
    fn h16_loop_and_cut_minima_match_enumeration() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let rd = round_distances(&l, &h);
        for (c, r) in Color::ALL.iter().zip(&rd) {
            // every subset of the color's edges, kept when it is closed in
            // the face graph and pairs oddly with some basis cycle
            let own: Vec<usize> = l.edges_of_color(*c).collect();
            let mut brute = u64::MAX;
            for mask in 1u32..(1 << own.len()) {
                let set = BitVec::from_indices(
                    l.num_edges(),
                    own.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &e)| e),
                );
                let closed = l
                    .faces()
                    .iter()
                    .all(|f| f.boundary_edges.iter().filter(|&&e| set.get(e)).count() % 2 == 0);
                if closed && h.cycles.iter().any(|cy| cy.dot(&set)) {
                    brute = brute.min(set.count_ones() as u64);
                }
            }
            assert_eq!(r.cut_edges, brute, "{c}");
            assert_eq!(shortest_nontrivial_cocycle_double_cover(&l, &h, *c), brute);
            assert_eq!(r.loop_edges, 2);
        }
        assert_eq!(code_distance(&l, &h), 2);
    }

    #[test]
    fn general_weights_use_dijkstra() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let w: Vec<u32> = (0..24).map(|e| (e % 3 + 1) as u32).collect();
        let a = shortest_noncontractible_cycle(&l, &h, &w).unwrap().weight;
        let b = shortest_noncontractible_cycle_double_cover(&l, &h, &w).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn logicals_commute_with_plaquettes_and_adjacent_rounds() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        let plaquettes: Vec<_> = (0..l.num_faces())
            .map(|f| l.plaquette_operator(f).unwrap())
            .collect();
        for round in 0..6i64 {
            let reps = logical_representatives(&l, &h, round);
            assert_eq!(reps.len() * 2, 8);
            let recent = Schedule::round_color(round);
            let upcoming = Schedule::round_color(round + 1);
            for pair in &reps {
                let loop_op = loop_operator(&l, &pair.cycle);
                let mut prod = pair.type_one.clone();
                prod.mul_assign_up_to_phase(&pair.type_two);
                assert_eq!(prod.with_sign(false), loop_op);
                for op in [&pair.type_one, &pair.type_two] {
                    for p in &plaquettes {
                        assert!(op.commutes(p).unwrap());
                    }
                    for c in [recent, upcoming] {
                        for e in l.edges_of_color(c) {
                            assert!(op.commutes(&l.check_operator(e).unwrap()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn round_zero_type_one_is_x_on_blue_edges() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        for pair in logical_representatives(&l, &h, 0) {
            for q in pair.type_one.support() {
                assert_eq!(pair.type_one.get(q), crate::pauli::Pauli::X);
                assert!(pair.cycle.get(l.edge_at(q, Color::Blue)));
            }
        }
    }

    #[test]
    fn tracked_logicals_follow_the_update_rule_with_period_six() {
        let l = h16();
        let h = cocycle_basis(&l).unwrap();
        for idx in 0..2 * h.h1_dim {
            for round in -1..12i64 {
                let cur = tracked_logical(&l, &h, idx, round);
                let mut next = cur.clone();
                let color = Schedule::round_color(round + 1);
                for e in h.cycles[idx / 2].iter_ones() {
                    if l.edge(e).color == color {
                        next.mul_assign_up_to_phase(&l.check_operator(e).unwrap());
                    }
                }
                assert_eq!(next, tracked_logical(&l, &h, idx, round + 1));
                assert_eq!(cur, tracked_logical(&l, &h, idx, round + 6));
            }
        }
    }
}
