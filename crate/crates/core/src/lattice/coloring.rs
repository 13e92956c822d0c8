//! Backtracking search for an edge 3-coloring whose bicolored cycles all have
//! a prescribed length.

use super::{Color, ColoredLattice, LatticeError};
use std::collections::VecDeque;

/// Trivalent graph without colors.
#[derive(Clone, Debug)]
pub struct UncoloredGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub enum ColoringOutcome {
    Colored(Box<ColoredLattice>),
    /// The search space was exhausted without finding a valid coloring.
    Uncolorable,
}

impl UncoloredGraph {
    /// Parses the lattice format; an optional color column is ignored.
    /// Returns the graph and the declared face length.
    pub fn parse(text: &str) -> Result<(Self, usize), LatticeError> {
        let mut header = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| LatticeError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            match toks[0] {
                "n" if toks.len() == 4 && toks[2] == "girth" => {
                    let n = toks[1].parse().map_err(|_| bad("bad vertex count"))?;
                    let g = toks[3].parse().map_err(|_| bad("bad girth"))?;
                    header = Some((n, g));
                }
                "e" if toks.len() == 3 || toks.len() == 4 => {
                    let u: usize = toks[1].parse().map_err(|_| bad("bad vertex index"))?;
                    let v: usize = toks[2].parse().map_err(|_| bad("bad vertex index"))?;
                    edges.push((u, v));
                }
                _ => return Err(bad("expected `n <count> girth <g>` or `e <u> <v>`")),
            }
        }
        let (n, girth) = header.ok_or(LatticeError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        Ok((UncoloredGraph { n, edges }, girth))
    }

    fn adjacency(&self) -> Result<Vec<[usize; 3]>, LatticeError> {
        let mut adj = vec![Vec::with_capacity(3); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if u >= self.n || v >= self.n || u == v {
                return Err(LatticeError::Parse {
                    line: 0,
                    msg: format!("invalid edge ({u}, {v})"),
                });
            }
            adj[u].push(id);
            adj[v].push(id);
        }
        adj.into_iter()
            .enumerate()
            .map(|(vertex, list)| {
                <[usize; 3]>::try_from(list.as_slice()).map_err(|_| LatticeError::NotTrivalent {
                    vertex,
                    degree: list.len(),
                })
            })
            .collect()
    }
}

const NONE: u8 = u8::MAX;

struct Search<'a> {
    graph: &'a UncoloredGraph,
    adj: Vec<[usize; 3]>,
    girth: usize,
    color: Vec<u8>,
    order: Vec<usize>,
    trail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    #[inline]
    fn other(&self, e: usize, x: usize) -> usize {
        let (u, v) = self.graph.edges[e];
        if u == x {
            v
        } else {
            u
        }
    }

    #[inline]
    fn edge_with_color(&self, x: usize, c: u8) -> Option<usize> {
        self.adj[x].iter().copied().find(|&e| self.color[e] == c)
    }

    fn free_colors(&self, e: usize) -> [bool; 3] {
        let (u, v) = self.graph.edges[e];
        let mut ok = [true; 3];
        for x in [u, v] {
            for &f in &self.adj[x] {
                if f != e && self.color[f] != NONE {
                    ok[self.color[f] as usize] = false;
                }
            }
        }
        ok
    }

    /// Length check of the alternating `(c, d)` path through edge `e`.
    fn bicolored_ok(&self, e: usize, c: u8, d: u8) -> bool {
        let (u, v) = self.graph.edges[e];
        let mut length = 1;
        // walk from v away from e, expecting d next, then c, ...
        let mut x = v;
        let mut want = d;
        loop {
            match self.edge_with_color(x, want) {
                None => break,
                Some(f) => {
                    length += 1;
                    x = self.other(f, x);
                    want = if want == c { d } else { c };
                    if x == u {
                        return length == self.girth;
                    }
                    if length >= self.girth {
                        return false;
                    }
                }
            }
        }
        // open at v's side; extend from u
        let mut x = u;
        let mut want = d;
        loop {
            match self.edge_with_color(x, want) {
                None => break,
                Some(f) => {
                    length += 1;
                    x = self.other(f, x);
                    want = if want == c { d } else { c };
                    if length >= self.girth {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, e: usize, c: u8) -> bool {
        self.color[e] = c;
        self.trail.push(e);
        for d in 0..3u8 {
            if d != c && !self.bicolored_ok(e, c, d) {
                return false;
            }
        }
        // a vertex with two colored edges forces the third
        let (u, v) = self.graph.edges[e];
        for x in [u, v] {
            let uncolored: Vec<usize> = self.adj[x]
                .iter()
                .copied()
                .filter(|&f| self.color[f] == NONE)
                .collect();
            if uncolored.len() == 1 {
                let f = uncolored[0];
                let free = self.free_colors(f);
                let Some(k) = (0..3).find(|&k| free[k]) else {
                    return false;
                };
                if free.iter().filter(|&&b| b).count() == 1 && !self.assign(f, k as u8) {
                    return false;
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().unwrap();
            self.color[e] = NONE;
        }
    }

    fn solve(&mut self, pos: usize) -> Result<bool, LatticeError> {
        let Some(offset) = self.order[pos..]
            .iter()
            .position(|&e| self.color[e] == NONE)
        else {
            return Ok(true);
        };
        let pos = pos + offset;
        let e = self.order[pos];
        let free = self.free_colors(e);
        for c in 0..3u8 {
            if !free[c as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(LatticeError::BudgetExceeded(self.budget));
            }
            let mark = self.trail.len();
            if self.assign(e, c) && self.solve(pos + 1)? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }
}

/// Searches for a proper edge 3-coloring whose bicolored cycles all have
/// length `girth`. Edges are visited in breadth-first order from vertex 0 and
/// the three edges at vertex 0 are pinned to green, blue, red, so the first
/// solution found is deterministic.
pub fn find_coloring(
    graph: &UncoloredGraph,
    girth: usize,
    node_budget: u64,
) -> Result<ColoringOutcome, LatticeError> {
    if girth < 4 || girth % 2 == 1 {
        return Err(LatticeError::Girth(girth));
    }
    let adj = graph.adjacency()?;
    if graph.n == 0 {
        return Ok(ColoringOutcome::Uncolorable);
    }
    let mut order = Vec::with_capacity(graph.edges.len());
    let mut seen_edge = vec![false; graph.edges.len()];
    let mut seen_vertex = vec![false; graph.n];
    let mut queue = VecDeque::from([0usize]);
    seen_vertex[0] = true;
    while let Some(x) = queue.pop_front() {
        let mut incident = adj[x];
        incident.sort_unstable();
        for e in incident {
            if !seen_edge[e] {
                seen_edge[e] = true;
                order.push(e);
            }
            let (u, v) = graph.edges[e];
            let y = if u == x { v } else { u };
            if !seen_vertex[y] {
                seen_vertex[y] = true;
                queue.push_back(y);
            }
        }
    }
    if order.len() != graph.edges.len() {
        return Err(LatticeError::Disconnected {
            reached: seen_vertex.iter().filter(|&&b| b).count(),
            n: graph.n,
        });
    }

    let mut search = Search {
        graph,
        adj,
        girth,
        color: vec![NONE; graph.edges.len()],
        order,
        trail: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    let mut first = search.adj[0];
    first.sort_unstable();
    let mut ok = true;
    for (c, &e) in first.iter().enumerate() {
        if search.color[e] == NONE {
            ok &= search.assign(e, c as u8);
        } else {
            ok &= search.color[e] == c as u8;
        }
    }
    if !ok || !search.solve(0)? {
        return Ok(ColoringOutcome::Uncolorable);
    }
    let colored = graph
        .edges
        .iter()
        .zip(&search.color)
        .map(|(&(u, v), &c)| (u, v, Color::from_index(c as usize)));
    let lattice = ColoredLattice::new(graph.n, girth, colored)?;
    Ok(ColoringOutcome::Colored(Box::new(lattice)))
}
