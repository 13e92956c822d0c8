//! Edge-3-colored trivalent lattices, their faces, and the measurement
//! schedule.
//!
//! A lattice is given by its colored edges; faces are not part of the input.
//! For each color `c` the edges of the other two colors form a 2-regular
//! subgraph whose cycles are exactly the faces of color `c`.

mod coloring;

pub use coloring::{find_coloring, ColoringOutcome, UncoloredGraph};

use crate::pauli::{Pauli, PauliOperator};
use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    Degree { vertex: usize, degree: usize },
    #[error("vertex {vertex} has more than one {color} edge")]
    ImproperColoring { vertex: usize, color: Color },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("{color} face through vertex {vertex} has length {length}, expected {expected}")]
    FaceLength {
        color: Color,
        vertex: usize,
        length: usize,
        expected: usize,
    },
    #[error("graph is disconnected ({reached} of {n} vertices reachable from 0)")]
    Disconnected { reached: usize, n: usize },
    #[error("unsupported girth {0}: only even face lengths >= 4 are valid")]
    Girth(usize),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("unknown face {0}")]
    UnknownFace(usize),
    #[error("input is not trivalent: vertex {vertex} has degree {degree}")]
    NotTrivalent { vertex: usize, degree: usize },
    #[error("coloring search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

/// Edge (and face) color. Green edges are XX checks, blue YY, red ZZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Green = 0,
    Blue = 1,
    Red = 2,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Green, Color::Blue, Color::Red];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Color {
        Color::ALL[i % 3]
    }

    /// Pauli measured by checks of this color (and carried by its plaquettes).
    #[inline]
    pub fn pauli(self) -> Pauli {
        match self {
            Color::Green => Pauli::X,
            Color::Blue => Pauli::Y,
            Color::Red => Pauli::Z,
        }
    }

    pub fn from_pauli(p: Pauli) -> Option<Color> {
        match p {
            Pauli::X => Some(Color::Green),
            Pauli::Y => Some(Color::Blue),
            Pauli::Z => Some(Color::Red),
            Pauli::I => None,
        }
    }

    /// The two colors different from `self`, in increasing order.
    #[inline]
    pub fn others(self) -> [Color; 2] {
        match self {
            Color::Green => [Color::Blue, Color::Red],
            Color::Blue => [Color::Green, Color::Red],
            Color::Red => [Color::Green, Color::Blue],
        }
    }

    #[inline]
    pub fn third(a: Color, b: Color) -> Color {
        debug_assert_ne!(a, b);
        Color::from_index(3 - a.index() - b.index())
    }

    #[inline]
    pub fn next(self) -> Color {
        Color::from_index(self.index() + 1)
    }

    #[inline]
    pub fn prev(self) -> Color {
        Color::from_index(self.index() + 2)
    }

    pub fn letter(self) -> char {
        match self {
            Color::Green => 'g',
            Color::Blue => 'b',
            Color::Red => 'r',
        }
    }

    pub fn from_letter(c: &str) -> Option<Color> {
        match c {
            "g" => Some(Color::Green),
            "b" => Some(Color::Blue),
            "r" => Some(Color::Red),
            _ => None,
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Color::Green => "green",
            Color::Blue => "blue",
            Color::Red => "red",
        })
    }
}

/// Round-robin measurement schedule: green, blue, red, green, ...
#[derive(Clone, Copy, Debug, Default)]
pub struct Schedule;

impl Schedule {
    pub const PERIOD: i64 = 3;

    /// Color measured at round `r`. Negative rounds continue the pattern
    /// backwards, so round -1 is red.
    #[inline]
    pub fn round_color(r: i64) -> Color {
        Color::from_index(r.rem_euclid(3) as usize)
    }
}

/// Canonical edge: `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: Color,
}

impl Edge {
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub color: Color,
    /// Cyclically ordered vertices.
    pub vertices: Vec<usize>,
    /// Boundary edge ids; `boundary_edges[i]` joins `vertices[i]` and
    /// `vertices[i + 1]`.
    pub boundary_edges: Vec<usize>,
}

/// Validated edge-3-colored trivalent lattice on a closed surface.
#[derive(Clone, Debug)]
pub struct ColoredLattice {
    n: usize,
    girth: usize,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    /// `vertex_edge[v][c]` is the id of the color-`c` edge at `v`.
    vertex_edge: Vec<[usize; 3]>,
    /// `vertex_face[v][c]` is the id of the color-`c` face containing `v`.
    vertex_face: Vec<[usize; 3]>,
    /// The two faces whose boundary contains the edge.
    edge_faces: Vec<[usize; 2]>,
}

impl ColoredLattice {
    /// Builds and validates a lattice from colored edges.
    pub fn new(
        n: usize,
        girth: usize,
        raw_edges: impl IntoIterator<Item = (usize, usize, Color)>,
    ) -> Result<Self, LatticeError> {
        if girth < 4 || girth % 2 == 1 {
            return Err(LatticeError::Girth(girth));
        }
        let mut edges: Vec<Edge> = raw_edges
            .into_iter()
            .map(|(a, b, color)| Edge {
                u: a.min(b),
                v: a.max(b),
                color,
            })
            .collect();
        edges.sort_by_key(|e| (e.u, e.v, e.color));
        let mut seen = HashSet::new();
        for e in &edges {
            if e.u == e.v || e.v >= n {
                return Err(LatticeError::Parse {
                    line: 0,
                    msg: format!("invalid edge ({}, {}) for n = {n}", e.u, e.v),
                });
            }
            if !seen.insert((e.u, e.v)) {
                return Err(LatticeError::DuplicateEdge(e.u, e.v));
            }
        }

        let mut degree = vec![0usize; n];
        let mut vertex_edge = vec![[usize::MAX; 3]; n];
        for (id, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                degree[x] += 1;
                let slot = &mut vertex_edge[x][e.color.index()];
                if *slot != usize::MAX {
                    return Err(LatticeError::ImproperColoring {
                        vertex: x,
                        color: e.color,
                    });
                }
                *slot = id;
            }
        }
        if let Some((vertex, &d)) = degree.iter().enumerate().find(|(_, &d)| d != 3) {
            return Err(LatticeError::Degree { vertex, degree: d });
        }

        let reached = reachable_count(n, &edges);
        if reached != n {
            return Err(LatticeError::Disconnected { reached, n });
        }

        let mut lattice = ColoredLattice {
            n,
            girth,
            edges,
            faces: Vec::new(),
            vertex_edge,
            vertex_face: vec![[usize::MAX; 3]; n],
            edge_faces: Vec::new(),
        };
        lattice.derive_faces()?;
        Ok(lattice)
    }

    fn derive_faces(&mut self) -> Result<(), LatticeError> {
        let mut faces = Vec::new();
        for color in Color::ALL {
            let [a, b] = color.others();
            let mut visited = vec![false; self.n];
            for start in 0..self.n {
                if visited[start] {
                    continue;
                }
                let mut vertices = Vec::new();
                let mut boundary = Vec::new();
                let mut x = start;
                let mut step_color = a;
                loop {
                    visited[x] = true;
                    vertices.push(x);
                    let eid = self.vertex_edge[x][step_color.index()];
                    boundary.push(eid);
                    x = self.edges[eid].other(x);
                    step_color = if step_color == a { b } else { a };
                    if x == start || vertices.len() > self.n {
                        break;
                    }
                }
                if vertices.len() != self.girth {
                    return Err(LatticeError::FaceLength {
                        color,
                        vertex: start,
                        length: vertices.len(),
                        expected: self.girth,
                    });
                }
                let id = faces.len();
                for &v in &vertices {
                    self.vertex_face[v][color.index()] = id;
                }
                faces.push(Face {
                    id,
                    color,
                    vertices,
                    boundary_edges: boundary,
                });
            }
        }
        let mut edge_faces = vec![[usize::MAX; 2]; self.edges.len()];
        for f in &faces {
            for &e in &f.boundary_edges {
                let slot = if edge_faces[e][0] == usize::MAX { 0 } else { 1 };
                edge_faces[e][slot] = f.id;
            }
        }
        self.faces = faces;
        self.edge_faces = edge_faces;
        Ok(())
    }

    /// Parses the line-oriented lattice format.
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| LatticeError::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            match toks[0] {
                "n" => {
                    if header.is_some() {
                        return Err(bad("duplicate header"));
                    }
                    if toks.len() != 4 || toks[2] != "girth" {
                        return Err(bad("expected `n <count> girth <6|8>`"));
                    }
                    let n = toks[1].parse().map_err(|_| bad("bad vertex count"))?;
                    let g = toks[3].parse().map_err(|_| bad("bad girth"))?;
                    header = Some((n, g));
                }
                "e" => {
                    if header.is_none() {
                        return Err(bad("edge before header"));
                    }
                    if toks.len() != 4 {
                        return Err(bad("expected `e <u> <v> <g|b|r>`"));
                    }
                    let u = toks[1].parse().map_err(|_| bad("bad vertex index"))?;
                    let v = toks[2].parse().map_err(|_| bad("bad vertex index"))?;
                    let c = Color::from_letter(toks[3]).ok_or_else(|| bad("bad color"))?;
                    edges.push((u, v, c));
                }
                other => return Err(bad(&format!("unknown record `{other}`"))),
            }
        }
        let (n, girth) = header.ok_or(LatticeError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        for &(u, v, _) in &edges {
            if u >= n || v >= n {
                return Err(LatticeError::Parse {
                    line: 0,
                    msg: format!("edge ({u}, {v}) out of range for n = {n}"),
                });
            }
        }
        ColoredLattice::new(n, girth, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LatticeError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LatticeError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        ColoredLattice::parse(&text)
    }

    /// Serializes in the canonical format: header, then edges sorted by
    /// `(u, v)`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n {} girth {}", self.n, self.girth).unwrap();
        for e in &self.edges {
            writeln!(s, "e {} {} {}", e.u, e.v, e.color.letter()).unwrap();
        }
        s
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn girth(&self) -> usize {
        self.girth
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    #[inline]
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    #[inline]
    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    #[inline]
    pub fn edge_at(&self, v: usize, color: Color) -> usize {
        self.vertex_edge[v][color.index()]
    }

    #[inline]
    pub fn face_at(&self, v: usize, color: Color) -> usize {
        self.vertex_face[v][color.index()]
    }

    /// The two faces whose boundary contains edge `e`.
    #[inline]
    pub fn faces_of_edge(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.n {
            return None;
        }
        self.vertex_edge[a]
            .iter()
            .copied()
            .find(|&e| self.edges[e].other(a) == b)
    }

    pub fn edges_of_color(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].color == color)
    }

    pub fn faces_of_color(&self, color: Color) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(move |f| f.color == color)
    }

    /// Euler characteristic `V - E + F` of the tiled surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.n as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Genus `g` with `V - E + F = 2 - 2g`.
    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// Weight-2 check measured on edge `e`.
    pub fn check_operator(&self, e: usize) -> Result<PauliOperator, LatticeError> {
        let edge = self.edges.get(e).ok_or(LatticeError::UnknownEdge(e))?;
        Ok(PauliOperator::uniform(
            self.n,
            edge.color.pauli(),
            [edge.u, edge.v],
        ))
    }

    /// Plaquette of face `f`: the product of its boundary checks, which is the
    /// face color's Pauli on every face vertex. Sign normalized to +1.
    pub fn plaquette_operator(&self, f: usize) -> Result<PauliOperator, LatticeError> {
        let face = self.faces.get(f).ok_or(LatticeError::UnknownFace(f))?;
        let mut prod = PauliOperator::identity(self.n);
        for &e in &face.boundary_edges {
            prod.mul_assign_up_to_phase(&self.check_operator(e)?);
        }
        debug_assert_eq!(
            prod,
            PauliOperator::uniform(self.n, face.color.pauli(), face.vertices.iter().copied())
        );
        Ok(prod.with_sign(false))
    }
}

fn reachable_count(n: usize, edges: &[Edge]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count
}
