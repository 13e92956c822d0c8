//! Regenerates the lattice files under `data/lattices`.
//!
//! Octagonal lattices are regular covers of the 16-vertex genus-2 lattice.
//! A cover is given by group-valued voltages on the edges with trivial
//! product around every face; voltages on a spanning tree are the identity,
//! four free edges get random group elements, and the remaining edges are
//! solved face by face along a dual spanning tree. Among the covers reaching
//! the target distance, the one with the most color-permuting automorphisms
//! (first in seeded order) is kept.
//!
//! Honeycomb lattices are the hexagonal tori {6,3}_(b,c), colored by the
//! backtracking search.
//!
//! Usage: `cargo run --release --example gen_lattices -- [out_dir]`

use floquet_core::homology::{cocycle_basis, round_distances_with_roots};
use floquet_core::lattice::{find_coloring, ColoringOutcome, UncoloredGraph};
use floquet_core::lattice::{Color, ColoredLattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;

/// Finite group as a multiplication table.
struct Group {
    name: String,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl Group {
    fn from_elements<T: Clone + Eq + std::hash::Hash>(
        name: &str,
        elements: Vec<T>,
        op: impl Fn(&T, &T) -> T,
    ) -> Group {
        let index: HashMap<T, usize> = elements.iter().cloned().zip(0..).collect();
        let mul: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&op(a, b)]).collect())
            .collect();
        let identity = (0..elements.len())
            .find(|&e| (0..elements.len()).all(|x| mul[e][x] == x))
            .expect("group has an identity");
        let inv = (0..elements.len())
            .map(|a| {
                (0..elements.len())
                    .find(|&b| mul[a][b] == identity)
                    .unwrap()
            })
            .collect();
        Group {
            name: name.to_string(),
            mul,
            inv,
        }
    }

    fn order(&self) -> usize {
        self.inv.len()
    }

    fn identity(&self) -> usize {
        (0..self.order()).find(|&e| self.mul[e][e] == e).unwrap()
    }

    fn abelian(moduli: &[usize]) -> Group {
        let mut elements = vec![vec![]];
        for &m in moduli {
            elements = elements
                .into_iter()
                .flat_map(|v: Vec<usize>| {
                    (0..m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        let name = moduli
            .iter()
            .map(|m| format!("Z{m}"))
            .collect::<Vec<_>>()
            .join("x");
        let mods = moduli.to_vec();
        Group::from_elements(&name, elements, move |a, b| {
            a.iter()
                .zip(b)
                .zip(&mods)
                .map(|((x, y), m)| (x + y) % m)
                .collect()
        })
    }
}

fn base_lattice() -> ColoredLattice {
    let mut edges = Vec::new();
    for i in 0..8 {
        let (outer, inner) = if i % 2 == 0 {
            (Color::Green, Color::Red)
        } else {
            (Color::Red, Color::Green)
        };
        edges.push((i, (i + 1) % 8, outer));
        edges.push((i, 8 + i, Color::Blue));
        edges.push((8 + i, 8 + (i + 3) % 8, inner));
    }
    ColoredLattice::new(16, 8, edges).unwrap()
}

/// Spanning tree, dual spanning tree and leftover edges of the base.
struct TreeCotree {
    in_tree: Vec<bool>,
    /// Faces in dual-BFS order with the cotree edge to their parent.
    face_order: Vec<(usize, Option<usize>)>,
    free: Vec<usize>,
}

fn tree_cotree(base: &ColoredLattice) -> TreeCotree {
    let ne = base.num_edges();
    let mut in_tree = vec![false; ne];
    let mut seen = vec![false; base.num_qubits()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for c in Color::ALL {
            let e = base.edge_at(x, c);
            let y = base.edge(e).other(x);
            if !seen[y] {
                seen[y] = true;
                in_tree[e] = true;
                queue.push_back(y);
            }
        }
    }
    let mut in_cotree = vec![false; ne];
    let mut face_seen = vec![false; base.num_faces()];
    let mut face_order = vec![(0, None)];
    face_seen[0] = true;
    let mut i = 0;
    while i < face_order.len() {
        let f = face_order[i].0;
        for &e in &base.face(f).boundary_edges {
            if in_tree[e] {
                continue;
            }
            let [a, b] = base.faces_of_edge(e);
            let g = if a == f { b } else { a };
            if !face_seen[g] {
                face_seen[g] = true;
                in_cotree[e] = true;
                face_order.push((g, Some(e)));
            }
        }
        i += 1;
    }
    let free = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    TreeCotree {
        in_tree,
        face_order,
        free,
    }
}

/// Voltage group acting on the sheets of a cover from the right.
trait Voltages {
    type Elem: Clone + PartialEq;
    fn name(&self) -> String;
    fn sheets(&self) -> usize;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn act(&self, sheet: usize, a: &Self::Elem) -> usize;
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}

impl Voltages for Group {
    type Elem = usize;
    fn name(&self) -> String {
        self.name.clone()
    }
    fn sheets(&self) -> usize {
        self.order()
    }
    fn identity(&self) -> usize {
        Group::identity(self)
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul[*a][*b]
    }
    fn inv(&self, a: &usize) -> usize {
        self.inv[*a]
    }
    fn act(&self, sheet: usize, a: &usize) -> usize {
        self.mul[sheet][*a]
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.order())
    }
}

/// Oriented voltage for traversing edge `e` from vertex `x`.
fn step_voltage<G: Voltages>(
    base: &ColoredLattice,
    group: &G,
    volt: &[G::Elem],
    e: usize,
    x: usize,
) -> G::Elem {
    if base.edge(e).u == x {
        volt[e].clone()
    } else {
        group.inv(&volt[e])
    }
}

/// Completes voltages from the free edges. Returns `None` when the root
/// face's relation fails (only possible for nonabelian groups).
fn solve_voltages<G: Voltages>(
    base: &ColoredLattice,
    tc: &TreeCotree,
    group: &G,
    free_values: &[G::Elem],
) -> Option<Vec<G::Elem>> {
    let id = group.identity();
    let mut volt = vec![id.clone(); base.num_edges()];
    for (&e, g) in tc.free.iter().zip(free_values) {
        volt[e] = g.clone();
    }
    for &(f, parent) in tc.face_order.iter().rev() {
        let face = base.face(f);
        let len = face.boundary_edges.len();
        match parent {
            None => {
                let mut prod = id.clone();
                for i in 0..len {
                    let g =
                        step_voltage(base, group, &volt, face.boundary_edges[i], face.vertices[i]);
                    prod = group.mul(&prod, &g);
                }
                if prod != id {
                    return None;
                }
            }
            Some(p) => {
                // rotate the boundary walk so that p is traversed last
                let k = face.boundary_edges.iter().position(|&e| e == p).unwrap();
                let mut before = id.clone();
                for j in 1..len {
                    let i = (k + j) % len;
                    let g =
                        step_voltage(base, group, &volt, face.boundary_edges[i], face.vertices[i]);
                    before = group.mul(&before, &g);
                }
                // before · h = 1
                let h = group.inv(&before);
                volt[p] = if base.edge(p).u == face.vertices[k] {
                    h
                } else {
                    group.inv(&h)
                };
            }
        }
    }
    let _ = &tc.in_tree;
    Some(volt)
}

/// Vertex `(v, q)` of the cover is numbered `q * n_base + v`.
fn build_cover<G: Voltages>(
    base: &ColoredLattice,
    group: &G,
    volt: &[G::Elem],
) -> Option<ColoredLattice> {
    let nb = base.num_qubits();
    let m = group.sheets();
    let mut edges = Vec::with_capacity(base.num_edges() * m);
    for (e, edge) in base.edges().iter().enumerate() {
        for q in 0..m {
            let r = group.act(q, &volt[e]);
            edges.push((q * nb + edge.u, r * nb + edge.v, edge.color));
        }
    }
    ColoredLattice::new(nb * m, base.girth(), edges).ok()
}

fn search_cover<G: Voltages>(
    base: &ColoredLattice,
    tc: &TreeCotree,
    groups: &[G],
    target: u64,
    tries: usize,
    seed: u64,
) -> Option<ColoredLattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots: Vec<usize> = (0..base.num_qubits()).collect();
    let mut best_seen = 0;
    let mut best: Option<(usize, ColoredLattice)> = None;
    for t in 0..tries {
        let group = &groups[t % groups.len()];
        let free: Vec<G::Elem> = (0..tc.free.len()).map(|_| group.random(&mut rng)).collect();
        let Some(volt) = solve_voltages(base, tc, group, &free) else {
            continue;
        };
        let Some(cover) = build_cover(base, group, &volt) else {
            continue;
        };
        let basis = cocycle_basis(&cover).expect("cover is a closed surface");
        // deck transformations are transitive, so roots in sheet 0 suffice
        let rd = round_distances_with_roots(&cover, &basis, &roots);
        let d = rd.iter().map(|r| r.weight()).min().unwrap();
        if d > best_seen {
            best_seen = d;
            eprintln!(
                "  n={} try {t} group {} d={d} ({:?})",
                cover.num_qubits(),
                group.name(),
                rd.iter()
                    .map(|r| (r.loop_edges, r.cut_edges))
                    .collect::<Vec<_>>()
            );
        }
        if d >= target {
            let sym = symmetry_count(&cover);
            if best.as_ref().is_none_or(|(s, _)| sym > *s) {
                eprintln!("  try {t} group {} d={d} symmetries {sym}", group.name());
                let full = sym == 6 * cover.num_qubits();
                best = Some((sym, cover));
                if full {
                    break;
                }
            }
        }
    }
    best.map(|(_, l)| l)
}

/// Number of automorphisms of the edge-colored graph that permute colors
/// globally; at most `6n`, reached by the most symmetric lattices.
fn symmetry_count(l: &ColoredLattice) -> usize {
    let n = l.num_qubits();
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let nb = |v: usize, c: usize| l.edge(l.edge_at(v, Color::from_index(c))).other(v);
    let mut count = 0;
    for w in 0..n {
        'perm: for sigma in perms {
            let mut image = vec![usize::MAX; n];
            let mut used = vec![false; n];
            image[0] = w;
            used[w] = true;
            let mut queue = VecDeque::from([0]);
            while let Some(u) = queue.pop_front() {
                for c in 0..3 {
                    let (x, y) = (nb(u, c), nb(image[u], sigma[c]));
                    if image[x] == usize::MAX {
                        if used[y] {
                            continue 'perm;
                        }
                        image[x] = y;
                        used[y] = true;
                        queue.push_back(x);
                    } else if image[x] != y {
                        continue 'perm;
                    }
                }
            }
            count += 1;
        }
    }
    count
}

/// Hexagonal torus {6,3}_(b,c) with `2(b² + bc + c²)` vertices.
fn honeycomb_torus(b: i64, c: i64) -> UncoloredGraph {
    // sites A(i,j) and B(i,j); identify points differing by
    // v1 = (b, c) and v2 = (-c, b + c) in the triangular basis
    let (v1, v2) = ((b, c), (-c, b + c));
    let det = v1.0 * v2.1 - v1.1 * v2.0;
    let reduce = |p: (i64, i64)| -> (i64, i64) {
        let s = (p.0 * v2.1 - p.1 * v2.0).div_euclid(det);
        let t = (v1.0 * p.1 - v1.1 * p.0).div_euclid(det);
        (p.0 - s * v1.0 - t * v2.0, p.1 - s * v1.1 - t * v2.1)
    };
    let mut index = HashMap::new();
    let mut cells = Vec::new();
    let span = 2 * (b.abs() + c.abs()) + 2;
    for i in -span..=span {
        for j in -span..=span {
            let r = reduce((i, j));
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(r) {
                e.insert(cells.len());
                cells.push(r);
            }
        }
    }
    assert_eq!(cells.len() as i64, det);
    let mut edges = Vec::new();
    for (k, &(i, j)) in cells.iter().enumerate() {
        let a = 2 * k;
        for nb in [(i, j), (i - 1, j), (i, j - 1)] {
            edges.push((a, 2 * index[&reduce(nb)] + 1));
        }
    }
    UncoloredGraph {
        n: 2 * cells.len(),
        edges,
    }
}

fn write(dir: &std::path::Path, name: &str, lattice: &ColoredLattice) {
    let basis = cocycle_basis(lattice).unwrap();
    let roots: Vec<usize> = (0..lattice.num_qubits()).collect();
    let d = round_distances_with_roots(lattice, &basis, &roots)
        .iter()
        .map(|r| r.weight())
        .min()
        .unwrap();
    let path = dir.join(format!("{name}.lat"));
    std::fs::write(&path, lattice.to_text()).unwrap();
    eprintln!(
        "wrote {} (n={}, k={}, d={d})",
        path.display(),
        lattice.num_qubits(),
        basis.h1_dim
    );
}

fn main() {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "data/lattices".into()),
    );
    std::fs::create_dir_all(&dir).unwrap();

    let base = base_lattice();
    write(&dir, "H16", &base);
    let tc = tree_cotree(&base);

    let plans: Vec<(&str, Vec<Group>, u64, usize)> = vec![
        (
            "H64",
            vec![Group::abelian(&[4]), Group::abelian(&[2, 2])],
            4,
            2_000,
        ),
        (
            "H144",
            vec![Group::abelian(&[9]), Group::abelian(&[3, 3])],
            6,
            20_000,
        ),
        (
            "H400",
            vec![Group::abelian(&[25]), Group::abelian(&[5, 5])],
            8,
            200_000,
        ),
    ];
    let only: Vec<String> = std::env::args().skip(2).collect();
    for (name, groups, target, tries) in plans {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        eprintln!("searching {name} (target d={target})");
        match search_cover(&base, &tc, &groups, target, tries, 0x5eed) {
            Some(l) => write(&dir, name, &l),
            None => eprintln!("  no cover reached d={target}"),
        }
    }
    for (b, c) in [(3, 0), (2, 2), (4, 1), (3, 3), (6, 0), (5, 2), (4, 4)] {
        let graph = honeycomb_torus(b, c);
        let name = format!("HC{}", graph.n);
        if !only.is_empty() && !only.contains(&name) {
            continue;
        }
        match find_coloring(&graph, 6, 10_000_000) {
            Ok(ColoringOutcome::Colored(l)) => write(&dir, &name, &l),
            other => eprintln!("{name}: no coloring ({other:?})"),
        }
    }
}
