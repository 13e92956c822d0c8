//! Minimum-weight perfect matching decoder over the simple-edge graph of a
//! detector model.

pub mod blossom;

use crate::bits::BitVec;
use crate::dem::{DetectorModel, BOUNDARY};
use crate::montecarlo::{Sampler, Shot, ShotBatch};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("model has no detectors")]
    EmptyModel,
    #[error("detection events cannot be paired")]
    Unmatchable,
    #[error("batch has {got} observables, model has {expected}")]
    Mismatch { got: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Weighting {
    /// Every simple edge costs one.
    Unit,
    /// Edge cost proportional to `ln((1 - q) / q)`, with `q` the combined
    /// probability of all mechanisms decomposing through the edge.
    LogLikelihood,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecoderConfig {
    /// Candidate partners per event; `usize::MAX` means all.
    pub k_nearest: usize,
    pub weighting: Weighting,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            k_nearest: 30,
            weighting: Weighting::Unit,
        }
    }
}

/// Where a detection event was matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    Event(u32),
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    pub event: u32,
    pub partner: Partner,
    /// Simple-edge ids along the connecting path.
    pub path: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub pairs: Vec<MatchedPair>,
    pub weight: i64,
    pub correction: BitVec,
}

impl MatchResult {
    /// Any observable left flipped by error plus correction.
    pub fn failure_any(&self, truth: &BitVec) -> bool {
        self.correction != *truth
    }

    /// Observable 0 left flipped.
    pub fn failure_specific(&self, truth: &BitVec) -> bool {
        self.correction.get(0) != truth.get(0)
    }
}

/// Adjacency of the simple-edge graph; the boundary is node
/// `num_detectors` and is only ever a path endpoint.
pub struct Decoder<'m> {
    model: &'m DetectorModel,
    config: DecoderConfig,
    adj: Vec<Vec<(u32, u32, u32)>>,
    has_boundary: bool,
    /// Row-major distances from each detector to every node, when small
    /// enough to precompute.
    table: Option<Vec<u32>>,
}

const SCALE: f64 = 100.0;
const ZERO_PROB_COST: u32 = 100_000;
const UNREACHABLE: u64 = u64::MAX;

/// Largest detector count for which all distances are precomputed.
pub const TABLE_LIMIT: usize = 6000;

/// Reusable single-source search state.
struct Scratch {
    dist: Vec<u64>,
    pred: Vec<(u32, u32)>,
    touched: Vec<u32>,
    heap: BinaryHeap<Reverse<(u64, u32)>>,
}

impl Scratch {
    fn new(nodes: usize) -> Self {
        Scratch {
            dist: vec![UNREACHABLE; nodes],
            pred: vec![(0, 0); nodes],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &u in &self.touched {
            self.dist[u as usize] = UNREACHABLE;
        }
        self.touched.clear();
        self.heap.clear();
    }
}

impl<'m> Decoder<'m> {
    pub fn new(model: &'m DetectorModel, config: DecoderConfig) -> Result<Self, DecodeError> {
        let nd = model.num_detectors();
        if nd == 0 {
            return Err(DecodeError::EmptyModel);
        }
        let node = |x: u32| if x == BOUNDARY { nd as u32 } else { x };
        let mut adj = vec![Vec::new(); nd + 1];
        let mut has_boundary = false;
        for (i, e) in model.edges.iter().enumerate() {
            if e.a == BOUNDARY {
                continue;
            }
            let cost = match config.weighting {
                Weighting::Unit => 1,
                Weighting::LogLikelihood if e.decomposed_probability <= 0.0 => ZERO_PROB_COST,
                Weighting::LogLikelihood => {
                    let q = e.decomposed_probability;
                    ((((1.0 - q) / q).ln() * SCALE).round() as u32).max(1)
                }
            };
            let (a, b) = (node(e.a), node(e.b));
            has_boundary |= e.b == BOUNDARY;
            adj[a as usize].push((b, i as u32, cost));
            adj[b as usize].push((a, i as u32, cost));
        }
        let mut decoder = Decoder {
            model,
            config,
            adj,
            has_boundary,
            table: None,
        };
        if nd <= TABLE_LIMIT {
            let width = nd + 1;
            let rows: Vec<Vec<u32>> = (0..nd as u32)
                .into_par_iter()
                .map_init(
                    || Scratch::new(width),
                    |scratch, src| {
                        decoder.run(scratch, src, &|_| false, usize::MAX);
                        let row = scratch
                            .dist
                            .iter()
                            .map(|&d| d.min(u32::MAX as u64) as u32)
                            .collect();
                        scratch.reset();
                        row
                    },
                )
                .collect();
            decoder.table = Some(rows.concat());
        }
        Ok(decoder)
    }

    pub fn model(&self) -> &DetectorModel {
        self.model
    }

    pub fn config(&self) -> DecoderConfig {
        self.config
    }

    fn boundary_node(&self) -> u32 {
        self.model.num_detectors() as u32
    }

    fn width(&self) -> usize {
        self.model.num_detectors() + 1
    }

    /// Dijkstra from `source` with the boundary as a sink, stopping once
    /// `want` targets (and the boundary, if the graph has one) are settled.
    /// Returns the settled targets in order with their distances.
    fn run(
        &self,
        s: &mut Scratch,
        source: u32,
        is_target: &dyn Fn(u32) -> bool,
        want: usize,
    ) -> Vec<(u32, u64)> {
        let bnode = self.boundary_node();
        let mut found = Vec::new();
        let mut boundary_done = !self.has_boundary;
        s.dist[source as usize] = 0;
        s.touched.push(source);
        s.heap.push(Reverse((0, source)));
        while let Some(Reverse((d, u))) = s.heap.pop() {
            if s.dist[u as usize] < d {
                continue;
            }
            if u == bnode {
                boundary_done = true;
                if found.len() >= want {
                    break;
                }
                continue;
            }
            if u != source && is_target(u) {
                found.push((u, d));
                if found.len() >= want && boundary_done {
                    break;
                }
            }
            for &(v, e, w) in &self.adj[u as usize] {
                let nd = d + w as u64;
                if nd < s.dist[v as usize] {
                    if s.dist[v as usize] == UNREACHABLE {
                        s.touched.push(v);
                    }
                    s.dist[v as usize] = nd;
                    s.pred[v as usize] = (u, e);
                    s.heap.push(Reverse((nd, v)));
                }
            }
        }
        found
    }

    /// Shortest-path length between detector `a` and node `b` (a detector
    /// or the boundary node), if connected.
    pub fn distance(&self, a: u32, b: u32) -> Option<u64> {
        match &self.table {
            Some(t) => {
                let d = t[a as usize * self.width() + b as usize];
                (d != u32::MAX).then_some(d as u64)
            }
            None => {
                let mut s = Scratch::new(self.width());
                self.run(&mut s, a, &|x| x == b, 1);
                let d = s.dist[b as usize];
                (d != UNREACHABLE).then_some(d)
            }
        }
    }

    /// Edge path from detector `from` to node `to`.
    fn path(&self, s: &mut Scratch, from: u32, to: u32) -> Vec<u32> {
        let mut out = Vec::new();
        match &self.table {
            Some(t) => {
                let w = self.width();
                let bnode = self.boundary_node();
                let mut cur = from;
                while cur != to {
                    let left = t[cur as usize * w + to as usize] as u64;
                    let &(v, e, _) = self.adj[cur as usize]
                        .iter()
                        .find(|&&(v, _, c)| {
                            if v == to {
                                c as u64 == left
                            } else {
                                v != bnode
                                    && c as u64 + t[v as usize * w + to as usize] as u64 == left
                            }
                        })
                        .expect("distance table is consistent");
                    out.push(e);
                    cur = v;
                }
            }
            None => {
                self.run(s, from, &|x| x == to, 1);
                let mut cur = to;
                while cur != from {
                    let (p, e) = s.pred[cur as usize];
                    out.push(e);
                    cur = p;
                }
                s.reset();
                out.reverse();
            }
        }
        out
    }

    /// Candidate partners of each event: up to `k` nearest other events and
    /// the boundary distance.
    #[allow(clippy::type_complexity)]
    fn candidates(
        &self,
        s: &mut Scratch,
        events: &[u32],
        k: usize,
    ) -> (Vec<Vec<(usize, u64)>>, Vec<Option<u64>>) {
        let n = events.len();
        let bnode = self.boundary_node();
        let mut near = Vec::with_capacity(n);
        let mut to_boundary = Vec::with_capacity(n);
        match &self.table {
            Some(t) => {
                let w = self.width();
                for &a in events {
                    let row = &t[a as usize * w..(a as usize + 1) * w];
                    let mut c: Vec<(u64, usize)> = events
                        .iter()
                        .enumerate()
                        .filter(|&(_, &b)| b != a && row[b as usize] != u32::MAX)
                        .map(|(j, &b)| (row[b as usize] as u64, j))
                        .collect();
                    if c.len() > k {
                        c.select_nth_unstable(k - 1);
                        c.truncate(k);
                    }
                    near.push(c.into_iter().map(|(d, j)| (j, d)).collect());
                    let bd = row[bnode as usize];
                    to_boundary.push((bd != u32::MAX).then_some(bd as u64));
                }
            }
            None => {
                let index: HashMap<u32, usize> =
                    events.iter().enumerate().map(|(i, &d)| (d, i)).collect();
                for &a in events {
                    let found = self.run(s, a, &|x| index.contains_key(&x), k);
                    near.push(found.into_iter().map(|(t, d)| (index[&t], d)).collect());
                    let bd = s.dist[bnode as usize];
                    to_boundary.push((bd != UNREACHABLE).then_some(bd));
                    s.reset();
                }
            }
        }
        (near, to_boundary)
    }

    /// Decodes one set of detection events (sorted, distinct).
    pub fn decode(&self, events: &[u32]) -> Result<MatchResult, DecodeError> {
        let n = events.len();
        let mut correction = BitVec::zeros(self.model.num_observables);
        if n == 0 {
            return Ok(MatchResult {
                pairs: Vec::new(),
                weight: 0,
                correction,
            });
        }
        let mut s = Scratch::new(if self.table.is_some() {
            0
        } else {
            self.width()
        });
        let mut k = self.config.k_nearest.min(n - 1).max(1);
        loop {
            let (near, to_boundary) = self.candidates(&mut s, events, k);
            let mut graph: HashMap<(usize, usize), i64> = HashMap::new();
            for (i, list) in near.iter().enumerate() {
                for &(j, d) in list {
                    graph.insert((i.min(j), i.max(j)), d as i64);
                }
            }
            let mut edges: Vec<(usize, usize, i64)> =
                graph.iter().map(|(&(i, j), &w)| (i, j, w)).collect();
            let use_boundary = to_boundary.iter().any(|b| b.is_some());
            let total = if use_boundary { 2 * n } else { n };
            if use_boundary {
                for (i, b) in to_boundary.iter().enumerate() {
                    if let Some(w) = b {
                        edges.push((i, n + i, *w as i64));
                    }
                }
                for &(i, j) in graph.keys() {
                    if to_boundary[i].is_some() && to_boundary[j].is_some() {
                        edges.push((n + i, n + j, 0));
                    }
                }
            }
            edges.sort_unstable();
            match blossom::min_weight_perfect_matching(total, &edges) {
                Some(mate) => {
                    let mut pairs = Vec::new();
                    let mut weight = 0;
                    for i in 0..n {
                        let j = mate[i];
                        if j < i {
                            continue;
                        }
                        let (partner, target) = if j >= n {
                            weight += to_boundary[i].unwrap() as i64;
                            (Partner::Boundary, self.boundary_node())
                        } else {
                            weight += graph[&(i, j)];
                            (Partner::Event(events[j]), events[j])
                        };
                        let path = self.path(&mut s, events[i], target);
                        for &e in &path {
                            correction.xor_assign(&self.model.edges[e as usize].observables);
                        }
                        pairs.push(MatchedPair {
                            event: events[i],
                            partner,
                            path,
                        });
                    }
                    return Ok(MatchResult {
                        pairs,
                        weight,
                        correction,
                    });
                }
                None if k >= n - 1 => return Err(DecodeError::Unmatchable),
                None => k = (2 * k).min(n - 1),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureCounts {
    pub shots: u64,
    pub fails_any: u64,
    pub fails_one: u64,
}

impl FailureCounts {
    fn add(self, o: FailureCounts) -> FailureCounts {
        FailureCounts {
            shots: self.shots + o.shots,
            fails_any: self.fails_any + o.fails_any,
            fails_one: self.fails_one + o.fails_one,
        }
    }

    fn record(&mut self, any: bool, one: bool) {
        self.shots += 1;
        self.fails_any += any as u64;
        self.fails_one += one as u64;
    }
}

/// Per-shot verdicts of a decoded batch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchOutcome {
    pub counts: FailureCounts,
    pub failures_any: Vec<bool>,
    pub failures_one: Vec<bool>,
}

fn verdict(decoder: &Decoder, shot: &Shot) -> Result<(bool, bool), DecodeError> {
    let r = decoder.decode(&shot.events)?;
    Ok((
        r.failure_any(&shot.observables),
        r.failure_specific(&shot.observables),
    ))
}

/// Decodes every shot of a batch in parallel.
pub fn batch_decode(decoder: &Decoder, batch: &ShotBatch) -> Result<BatchOutcome, DecodeError> {
    if let Some(s) = batch.shots.first() {
        if s.observables.len() != decoder.model.num_observables {
            return Err(DecodeError::Mismatch {
                got: s.observables.len(),
                expected: decoder.model.num_observables,
            });
        }
    }
    let verdicts: Vec<(bool, bool)> = batch
        .shots
        .par_iter()
        .map(|s| verdict(decoder, s))
        .collect::<Result<_, _>>()?;
    let mut counts = FailureCounts::default();
    for &(a, o) in &verdicts {
        counts.record(a, o);
    }
    Ok(BatchOutcome {
        counts,
        failures_any: verdicts.iter().map(|v| v.0).collect(),
        failures_one: verdicts.iter().map(|v| v.1).collect(),
    })
}

/// Samples and decodes `shots` shots without storing them. Shot `i` uses the
/// same random stream as in [`crate::montecarlo::sample`].
pub fn sample_and_decode(
    decoder: &Decoder,
    shots: u64,
    seed: u64,
) -> Result<FailureCounts, DecodeError> {
    let sampler = Sampler::new(decoder.model);
    (0..shots)
        .into_par_iter()
        .map(|i| {
            let shot = sampler.shot(decoder.model, seed, i);
            let mut c = FailureCounts::default();
            if !shot.events.is_empty() || !shot.observables.is_zero() {
                let (a, o) = verdict(decoder, &shot)?;
                c.record(a, o);
            } else {
                c.record(false, false);
            }
            Ok(c)
        })
        .try_reduce(FailureCounts::default, |a, b| Ok(a.add(b)))
}
