//! Detector error model: detectors (plaquette re-inferences), elementary error
//! mechanisms with their detector and observable flips, and the reduction of
//! every mechanism to simple (two-detector) error edges.
//!
//! The experiment starts from the noiseless steady state after a red round
//! `-1`, with known plaquette and red check values. Rounds `0..R` are noisy: Pauli errors may occur in each interval between
//! round `t` and `t + 1` for `t < R`, and each check measured in round
//! `t < R` may report a flipped outcome. A number of noiseless closing rounds
//! follow so that late errors are still seen by later re-inferences; with
//! fewer closing rounds some detectors fall outside the window and the
//! affected edges end on a virtual time boundary instead.

use crate::bits::BitVec;
use crate::homology::{self, HomologyBasis};
use crate::lattice::{Color, ColoredLattice, Schedule};
use crate::pauli::Pauli;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Closing rounds needed so no mechanism or decomposition piece loses a
/// detector at the end of the window.
pub const FULL_CLOSURE: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DemError {
    #[error("need at least one noisy round")]
    Rounds,
    #[error("probability {0} outside [0, 1)")]
    Probability(f64),
    #[error("mechanism {0}: decomposition does not reproduce its detectors and observables")]
    Decomposition(usize),
    #[error(transparent)]
    Homology(#[from] homology::HomologyError),
}

/// Plaquette re-inference of `face` at `round`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Detector {
    pub face: usize,
    pub round: usize,
    pub color: Color,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MechanismKind {
    /// Pauli on `qubit` between round `after` and the next round. `after`
    /// may be -1 for decomposition pieces before the first round.
    Pauli {
        qubit: usize,
        pauli: Pauli,
        after: i64,
    },
    /// Flipped outcome of check `edge` measured in `round`.
    Measurement { edge: usize, round: usize },
}

impl std::fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            MechanismKind::Pauli {
                qubit,
                pauli,
                after,
            } => {
                write!(f, "{}@q{qubit}({after},{})", pauli.symbol(), after + 1)
            }
            MechanismKind::Measurement { edge, round } => write!(f, "M@e{edge}(r{round})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ErrorMechanism {
    pub kind: MechanismKind,
    pub probability: f64,
    /// Sorted detector ids.
    pub detectors: Vec<u32>,
    pub observables: BitVec,
}

impl ErrorMechanism {
    /// Simple Paulis flip two detectors; compound Paulis and measurement
    /// errors flip four (fewer only at the window edges).
    pub fn is_simple(&self) -> bool {
        match self.kind {
            MechanismKind::Pauli { pauli, after, .. } => is_simple_pauli(pauli, after),
            MechanismKind::Measurement { .. } => false,
        }
    }
}

/// Whether `pauli` is simple in the interval after round `after`: it then
/// commutes with the checks just measured or with the next ones.
pub fn is_simple_pauli(pauli: Pauli, after: i64) -> bool {
    pauli == Schedule::round_color(after).pauli()
        || pauli == Schedule::round_color(after + 1).pauli()
}

/// Endpoint of a simple edge: a detector or the time boundary.
pub const BOUNDARY: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SimpleEdge {
    /// `a <= b`; `b` (or both) may be [`BOUNDARY`].
    pub a: u32,
    pub b: u32,
    /// Combined probability of the simple mechanisms on this edge (zero for
    /// edges that only appear in decompositions).
    pub probability: f64,
    /// Combined probability of every mechanism whose decomposition uses
    /// this edge.
    pub decomposed_probability: f64,
    pub observables: BitVec,
    /// The Pauli representative used to define the edge.
    pub representative: MechanismKind,
}

#[derive(Clone, Debug)]
pub struct DetectorModel {
    pub num_qubits: usize,
    pub noisy_rounds: usize,
    pub closing_rounds: usize,
    pub p: f64,
    pub num_observables: usize,
    pub detectors: Vec<Detector>,
    pub mechanisms: Vec<ErrorMechanism>,
    pub edges: Vec<SimpleEdge>,
    /// Per mechanism, the simple edges whose XOR reproduces it.
    pub decompositions: Vec<Vec<u32>>,
    detector_index: Vec<u32>,
    num_faces: usize,
}

/// Observable bookkeeping shared by all mechanisms.
struct ObservableFrame {
    num_observables: usize,
    /// `[phase][qubit]`: observables whose expression after a round with
    /// that phase (round mod 6) acts on the qubit, and how.
    on_qubit: Vec<Vec<Vec<(u32, Pauli)>>>,
    /// Per edge, the basis classes whose loop contains it.
    classes_on_edge: Vec<Vec<u32>>,
}

impl ObservableFrame {
    fn new(lattice: &ColoredLattice, basis: &HomologyBasis) -> Self {
        let num_observables = 2 * basis.h1_dim;
        let mut on_qubit = vec![vec![Vec::new(); lattice.num_qubits()]; 6];
        for (phase, table) in on_qubit.iter_mut().enumerate() {
            for o in 0..num_observables {
                let op = homology::tracked_logical(lattice, basis, o, phase as i64);
                for q in op.support() {
                    table[q].push((o as u32, op.get(q)));
                }
            }
        }
        let mut classes_on_edge = vec![Vec::new(); lattice.num_edges()];
        for (j, c) in basis.cycles.iter().enumerate() {
            for e in c.iter_ones() {
                classes_on_edge[e].push(j as u32);
            }
        }
        ObservableFrame {
            num_observables,
            on_qubit,
            classes_on_edge,
        }
    }

    fn flips(&self, kind: MechanismKind) -> BitVec {
        let mut out = BitVec::zeros(self.num_observables);
        match kind {
            MechanismKind::Pauli {
                qubit,
                pauli,
                after,
            } => {
                let phase = after.rem_euclid(6) as usize;
                for &(o, lp) in &self.on_qubit[phase][qubit] {
                    if !lp.commutes_with(pauli) {
                        out.flip(o as usize);
                    }
                }
            }
            MechanismKind::Measurement { edge, .. } => {
                for &j in &self.classes_on_edge[edge] {
                    out.flip(2 * j as usize);
                    out.flip(2 * j as usize + 1);
                }
            }
        }
        out
    }
}

/// First round at which faces of `color` are inferred. The experiment
/// starts from the noiseless steady state of a red round `-1` whose outcomes
/// are known, so blue faces are already inferred at round 0.
fn first_inference(color: Color) -> usize {
    match color {
        Color::Blue => 0,
        Color::Red => 1,
        Color::Green => 2,
    }
}

impl DetectorModel {
    /// Total rounds measured, noisy and closing.
    pub fn total_rounds(&self) -> usize {
        self.noisy_rounds + self.closing_rounds
    }

    pub fn num_detectors(&self) -> usize {
        self.detectors.len()
    }

    /// Detector id of `(face, round)`, if that is an inference inside the
    /// window.
    pub fn detector_id(&self, face: usize, round: usize) -> Option<u32> {
        if round >= self.total_rounds() {
            return None;
        }
        let id = self.detector_index[round * self.num_faces + face];
        (id != BOUNDARY).then_some(id)
    }

    /// Detector and observable flips of an arbitrary Pauli or measurement
    /// fault, noisy window or not.
    fn effect(
        &self,
        lattice: &ColoredLattice,
        frame: &ObservableFrame,
        kind: MechanismKind,
    ) -> (Vec<u32>, BitVec) {
        let total = self.total_rounds() as i64;
        let mut dets = Vec::new();
        // s(f, t): parity of flipped outcomes used in face f's inference at t
        let mut scan = |faces: &[usize], flipped: &dyn Fn(usize, i64) -> bool, lo: i64, hi: i64| {
            for &f in faces {
                let face = lattice.face(f);
                let first = first_inference(face.color) as i64;
                let value = |t: i64| -> bool {
                    if t < first || t >= total {
                        return false;
                    }
                    face.boundary_edges.iter().fold(false, |acc, &e| {
                        let c = lattice.edge(e).color;
                        let when = if Schedule::round_color(t) == c {
                            t
                        } else {
                            t - 1
                        };
                        acc ^ flipped(e, when)
                    })
                };
                let mut t = first;
                while t < lo {
                    t += 3;
                }
                while t <= hi && t < total {
                    if value(t) ^ value(t - 3) {
                        dets.push(self.detector_index[t as usize * self.num_faces + f]);
                    }
                    t += 3;
                }
            }
        };
        match kind {
            MechanismKind::Pauli {
                qubit,
                pauli,
                after,
            } => {
                let faces: Vec<usize> = Color::ALL
                    .iter()
                    .map(|&c| lattice.face_at(qubit, c))
                    .collect();
                let flipped = |e: usize, t: i64| -> bool {
                    let edge = lattice.edge(e);
                    t > after
                        && (edge.u == qubit || edge.v == qubit)
                        && Schedule::round_color(t) == edge.color
                        && !edge.color.pauli().commutes_with(pauli)
                };
                scan(&faces, &flipped, after, after + 8);
            }
            MechanismKind::Measurement { edge, round } => {
                let faces = lattice.faces_of_edge(edge);
                let flipped = |e: usize, t: i64| e == edge && t == round as i64;
                scan(&faces, &flipped, round as i64, round as i64 + 4);
            }
        }
        dets.sort_unstable();
        (dets, frame.flips(kind))
    }

    /// Observable flips of the edges along a set of edge ids.
    pub fn edges_observables(&self, edges: &[u32]) -> BitVec {
        let mut out = BitVec::zeros(self.num_observables);
        for &e in edges {
            out.xor_assign(&self.edges[e as usize].observables);
        }
        out
    }

    /// Text dump: `D <id> <face> <round>` per detector, `E <id> <a> <b>
    /// <prob> <obs-hex>` per simple edge (`B` for the boundary), and
    /// `X <mechanism> <edge>...` per decomposition.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "# n {} rounds {} closing {} p {} observables {}",
            self.num_qubits, self.noisy_rounds, self.closing_rounds, self.p, self.num_observables
        )
        .unwrap();
        for (i, d) in self.detectors.iter().enumerate() {
            writeln!(s, "D {i} {} {}", d.face, d.round).unwrap();
        }
        let end = |x: u32| {
            if x == BOUNDARY {
                "B".to_string()
            } else {
                x.to_string()
            }
        };
        for (i, e) in self.edges.iter().enumerate() {
            writeln!(
                s,
                "E {i} {} {} {:.6e} {}",
                end(e.a),
                end(e.b),
                e.probability,
                e.observables.to_hex()
            )
            .unwrap();
        }
        for (m, dec) in self.decompositions.iter().enumerate() {
            write!(s, "X {m}").unwrap();
            for e in dec {
                write!(s, " {e}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Simple pieces equivalent to a mechanism: itself if simple; the two simple
/// Paulis of the same interval if compound; for a measurement error on a
/// check measured at `t`, three Paulis on its lower endpoint: the previous
/// round's Pauli before `t`, the check's Pauli after `t`, and the next
/// round's Pauli one interval later.
pub fn decomposition_pieces(lattice: &ColoredLattice, kind: MechanismKind) -> Vec<MechanismKind> {
    match kind {
        MechanismKind::Pauli {
            qubit,
            pauli,
            after,
        } => {
            if is_simple_pauli(pauli, after) {
                vec![kind]
            } else {
                [
                    Schedule::round_color(after),
                    Schedule::round_color(after + 1),
                ]
                .iter()
                .map(|c| MechanismKind::Pauli {
                    qubit,
                    pauli: c.pauli(),
                    after,
                })
                .collect()
            }
        }
        MechanismKind::Measurement { edge, round } => {
            let q = lattice.edge(edge).u;
            let t = round as i64;
            [t - 1, t, t + 1]
                .iter()
                .map(|&after| MechanismKind::Pauli {
                    qubit: q,
                    pauli: Schedule::round_color(after).pauli(),
                    after,
                })
                .collect()
        }
    }
}

fn merge_probability(q1: f64, q2: f64) -> f64 {
    q1 * (1.0 - q2) + q2 * (1.0 - q1)
}

/// Builds the model with [`FULL_CLOSURE`] closing rounds.
pub fn build_detector_model(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    rounds: usize,
    p: f64,
) -> Result<DetectorModel, DemError> {
    build_detector_model_with_closure(lattice, basis, rounds, p, FULL_CLOSURE)
}

pub fn build_detector_model_with_closure(
    lattice: &ColoredLattice,
    basis: &HomologyBasis,
    rounds: usize,
    p: f64,
    closing_rounds: usize,
) -> Result<DetectorModel, DemError> {
    if rounds < 1 {
        return Err(DemError::Rounds);
    }
    if !(0.0..1.0).contains(&p) {
        return Err(DemError::Probability(p));
    }
    let total = rounds + closing_rounds;
    let nf = lattice.num_faces();
    let mut detectors = Vec::new();
    let mut detector_index = vec![BOUNDARY; total * nf];
    for t in 0..total {
        let color = if t == 0 {
            Color::Blue
        } else {
            crate::code::inferred_face_color(t as i64).unwrap()
        };
        for f in lattice.faces_of_color(color) {
            detector_index[t * nf + f.id] = detectors.len() as u32;
            detectors.push(Detector {
                face: f.id,
                round: t,
                color,
            });
        }
    }
    let frame = ObservableFrame::new(lattice, basis);
    let mut model = DetectorModel {
        num_qubits: lattice.num_qubits(),
        noisy_rounds: rounds,
        closing_rounds,
        p,
        num_observables: frame.num_observables,
        detectors,
        mechanisms: Vec::new(),
        edges: Vec::new(),
        decompositions: Vec::new(),
        detector_index,
        num_faces: nf,
    };

    let mut kinds =
        Vec::with_capacity(rounds * (3 * lattice.num_qubits() + lattice.num_edges() / 3));
    for t in 0..rounds {
        for e in lattice.edges_of_color(Schedule::round_color(t as i64)) {
            kinds.push((MechanismKind::Measurement { edge: e, round: t }, p));
        }
        for q in 0..lattice.num_qubits() {
            for pauli in [Pauli::X, Pauli::Y, Pauli::Z] {
                kinds.push((
                    MechanismKind::Pauli {
                        qubit: q,
                        pauli,
                        after: t as i64,
                    },
                    p / 3.0,
                ));
            }
        }
    }

    let mut edge_of: HashMap<(u32, u32, BitVec), u32> = HashMap::new();
    let mut add_edge =
        |model: &mut DetectorModel, kind: MechanismKind, dets: &[u32], obs: &BitVec| -> u32 {
            let (a, b) = match *dets {
                [] => (BOUNDARY, BOUNDARY),
                [a] => (a, BOUNDARY),
                [a, b] => (a, b),
                _ => unreachable!("simple pieces flip at most two detectors"),
            };
            *edge_of.entry((a, b, obs.clone())).or_insert_with(|| {
                model.edges.push(SimpleEdge {
                    a,
                    b,
                    probability: 0.0,
                    decomposed_probability: 0.0,
                    observables: obs.clone(),
                    representative: kind,
                });
                (model.edges.len() - 1) as u32
            })
        };

    for (id, (kind, prob)) in kinds.into_iter().enumerate() {
        let (dets, obs) = model.effect(lattice, &frame, kind);
        let mut dec = Vec::new();
        let mut check_d: Vec<u32> = Vec::new();
        let mut check_o = BitVec::zeros(frame.num_observables);
        for piece in decomposition_pieces(lattice, kind) {
            let (pd, po) = model.effect(lattice, &frame, piece);
            let e = add_edge(&mut model, piece, &pd, &po);
            let edge = &mut model.edges[e as usize];
            edge.decomposed_probability = merge_probability(edge.decomposed_probability, prob);
            if piece == kind {
                edge.probability = merge_probability(edge.probability, prob);
            }
            dec.push(e);
            for d in pd {
                match check_d.iter().position(|&x| x == d) {
                    Some(i) => {
                        check_d.swap_remove(i);
                    }
                    None => check_d.push(d),
                }
            }
            check_o.xor_assign(&po);
        }
        check_d.sort_unstable();
        if check_d != dets || check_o != obs {
            return Err(DemError::Decomposition(id));
        }
        model.mechanisms.push(ErrorMechanism {
            kind,
            probability: prob,
            detectors: dets,
            observables: obs,
        });
        model.decompositions.push(dec);
    }
    Ok(model)
}
