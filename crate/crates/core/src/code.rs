//! Floquet code semantics: error-free evolution of the instantaneous
//! stabilizer group and code-parameter reporting.

use crate::bits::{self, BitVec, EchelonBasis};
use crate::homology::{self, HomologyError};
use crate::lattice::{Color, ColoredLattice, LatticeError, Schedule};
use crate::pauli::PauliOperator;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("round {round}: outcome vector has length {got}, expected {expected}")]
    OutcomeLength {
        round: usize,
        got: usize,
        expected: usize,
    },
    #[error("round {round}: face {face} re-inferred with a different value")]
    InconsistentOutcome { round: usize, face: usize },
    #[error("parameter identity violated: {0}")]
    Parameters(String),
}

/// `[[n, k, d]]` together with the genus and encoding rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub g: usize,
    pub rate: f64,
}

impl std::fmt::Display for CodeParameters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{}, {}, {}]]", self.n, self.k, self.d)
    }
}

/// Stabilizer group right after a measurement round: that round's checks and
/// every plaquette inferred so far, each with a sign (`true` for -1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantaneousStabilizerGroup {
    pub round: usize,
    pub checks: Vec<(usize, bool)>,
    pub plaquettes: Vec<(usize, bool)>,
}

impl InstantaneousStabilizerGroup {
    pub fn generators(&self, lattice: &ColoredLattice) -> Vec<PauliOperator> {
        let checks = self
            .checks
            .iter()
            .map(|&(e, neg)| lattice.check_operator(e).unwrap().with_sign(neg));
        let plaquettes = self
            .plaquettes
            .iter()
            .map(|&(f, neg)| lattice.plaquette_operator(f).unwrap().with_sign(neg));
        checks.chain(plaquettes).collect()
    }

    /// Rank over GF(2) of the generators, ignoring signs.
    pub fn rank(&self, lattice: &ColoredLattice) -> usize {
        let rows: Vec<BitVec> = self
            .generators(lattice)
            .iter()
            .map(|g| g.symplectic())
            .collect();
        bits::rank(&rows)
    }

    /// Generator set with signs dropped, for comparing rounds.
    pub fn unsigned(&self) -> (Vec<usize>, Vec<usize>) {
        let mut c: Vec<usize> = self.checks.iter().map(|x| x.0).collect();
        let mut p: Vec<usize> = self.plaquettes.iter().map(|x| x.0).collect();
        c.sort_unstable();
        p.sort_unstable();
        (c, p)
    }
}

/// Sign relating a face's plaquette operator to its boundary checks:
/// `(Π checks of one color)(Π checks of the other) = (-1)^s · plaquette`.
pub fn plaquette_sign(lattice: &ColoredLattice, face: usize) -> bool {
    let f = lattice.face(face);
    let [a, b] = f.color.others();
    let mut acc = PauliOperator::identity(lattice.num_qubits());
    let mut phase = 0u8;
    for color in [a, b] {
        for &e in &f.boundary_edges {
            if lattice.edge(e).color == color {
                let (p, k) = acc
                    .multiply_with_phase(&lattice.check_operator(e).unwrap())
                    .unwrap();
                acc = p;
                phase = (phase + k) % 4;
            }
        }
    }
    debug_assert_eq!(phase % 2, 0);
    debug_assert_eq!(acc, lattice.plaquette_operator(face).unwrap());
    phase == 2
}

/// Color of the faces inferred at the end of `round`, if any. The faces of
/// the color absent from the last two rounds become known.
pub fn inferred_face_color(round: i64) -> Option<Color> {
    (round >= 1).then(|| {
        Color::third(
            Schedule::round_color(round),
            Schedule::round_color(round - 1),
        )
    })
}

/// Replays error-free measurement rounds from the maximally mixed state.
/// `outcomes[r][e]` is the outcome of check `e` in round `r` (`true` for -1);
/// entries for checks not measured in that round are ignored.
pub fn evolve_isg(
    lattice: &ColoredLattice,
    outcomes: &[Vec<bool>],
) -> Result<InstantaneousStabilizerGroup, CodeError> {
    let ne = lattice.num_edges();
    let signs: Vec<bool> = (0..lattice.num_faces())
        .map(|f| plaquette_sign(lattice, f))
        .collect();
    let mut plaquettes: Vec<Option<bool>> = vec![None; lattice.num_faces()];
    for (r, out) in outcomes.iter().enumerate() {
        if out.len() != ne {
            return Err(CodeError::OutcomeLength {
                round: r,
                got: out.len(),
                expected: ne,
            });
        }
        let Some(color) = inferred_face_color(r as i64) else {
            continue;
        };
        for f in lattice.faces_of_color(color) {
            let mut value = signs[f.id];
            for &e in &f.boundary_edges {
                let t = if lattice.edge(e).color == Schedule::round_color(r as i64) {
                    r
                } else {
                    r - 1
                };
                value ^= outcomes[t][e];
            }
            match plaquettes[f.id] {
                Some(old) if old != value => {
                    return Err(CodeError::InconsistentOutcome {
                        round: r,
                        face: f.id,
                    })
                }
                _ => plaquettes[f.id] = Some(value),
            }
        }
    }
    let round = outcomes.len().saturating_sub(1);
    let checks = if outcomes.is_empty() {
        Vec::new()
    } else {
        lattice
            .edges_of_color(Schedule::round_color(round as i64))
            .map(|e| (e, outcomes[round][e]))
            .collect()
    };
    Ok(InstantaneousStabilizerGroup {
        round,
        checks,
        plaquettes: plaquettes
            .iter()
            .enumerate()
            .filter_map(|(f, v)| v.map(|v| (f, v)))
            .collect(),
    })
}

/// `[[n, k, d]]` and genus, checked against the counting identities: genus
/// `n/16 + 1` for octagons and 1 for hexagons, `k = 2g`.
pub fn report_parameters(lattice: &ColoredLattice) -> Result<CodeParameters, CodeError> {
    let basis = homology::cocycle_basis(lattice)?;
    let n = lattice.num_qubits();
    let g = lattice.genus();
    let k = basis.h1_dim;
    if k != 2 * g {
        return Err(CodeError::Parameters(format!("k = {k} but genus = {g}")));
    }
    match lattice.girth() {
        8 if !n.is_multiple_of(16) || g != n / 16 + 1 => {
            return Err(CodeError::Parameters(format!(
                "genus {g} != n/16 + 1 for n = {n}"
            )))
        }
        6 if g != 1 => {
            return Err(CodeError::Parameters(format!(
                "hexagonal lattice has genus {g}"
            )))
        }
        _ => {}
    }
    let d = homology::code_distance(lattice, &basis);
    if d < 2 || d % 2 == 1 {
        return Err(CodeError::Parameters(format!(
            "distance {d} is not even and positive"
        )));
    }
    Ok(CodeParameters {
        n,
        k,
        d,
        g,
        rate: k as f64 / n as f64,
    })
}

/// Steady-state generators (mod signs) after a round of `color`.
fn steady_state_rows(lattice: &ColoredLattice, color: Color) -> Vec<BitVec> {
    let rounds = 3 + color.index() + 1;
    let outcomes = vec![vec![false; lattice.num_edges()]; rounds];
    let isg = evolve_isg(lattice, &outcomes).expect("all-+1 outcomes are consistent");
    isg.generators(lattice)
        .iter()
        .map(|g| g.symplectic())
        .collect()
}

/// Minimum weight of a Pauli that commutes with the stabilizer group after
/// some round but is not in it, found by enumerating the whole normalizer.
/// Returns `None` if the normalizer has more than `max_dim` generators.
pub fn exhaustive_distance(lattice: &ColoredLattice, max_dim: usize) -> Option<usize> {
    let n = lattice.num_qubits();
    let mut best = usize::MAX;
    for color in Color::ALL {
        let rows = steady_state_rows(lattice, color);
        // p commutes with g iff p · swap(g) = 0 in the symplectic form
        let swapped: Vec<BitVec> = rows
            .iter()
            .map(|g| {
                let mut s = BitVec::zeros(2 * n);
                for i in g.iter_ones() {
                    s.set(if i < n { i + n } else { i - n }, true);
                }
                s
            })
            .collect();
        let normalizer = bits::nullspace(&swapped, 2 * n);
        if normalizer.len() > max_dim {
            return None;
        }
        let mut ech = EchelonBasis::new(2 * n);
        let mut stab = Vec::new();
        for r in &rows {
            if ech.insert(r) {
                stab.push(r.clone());
            }
        }
        let mut logical = Vec::new();
        for v in &normalizer {
            if ech.insert(v) {
                logical.push(v.clone());
            }
        }
        let basis: Vec<&BitVec> = stab.iter().chain(&logical).collect();
        let split = stab.len();
        let mut cur = BitVec::zeros(2 * n);
        let mut logical_part = 0u64;
        for step in 1u64..(1u64 << basis.len()) {
            let bit = step.trailing_zeros() as usize;
            cur.xor_assign(basis[bit]);
            if bit >= split {
                logical_part ^= 1 << (bit - split);
            }
            if logical_part == 0 {
                continue;
            }
            let w = (0..n).filter(|&q| cur.get(q) || cur.get(q + n)).count();
            best = best.min(w);
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::h16;
    use rand::{Rng, SeedableRng};

    fn ones(l: &ColoredLattice, rounds: usize) -> Vec<Vec<bool>> {
        vec![vec![false; l.num_edges()]; rounds]
    }

    #[test]
    fn first_round_is_the_green_checks() {
        let l = h16();
        let isg = evolve_isg(&l, &ones(&l, 1)).unwrap();
        let gens = isg.generators(&l);
        assert_eq!(gens.len(), 8);
        for g in gens {
            assert_eq!(g.weight(), 2);
            for q in g.support() {
                assert_eq!(g.get(q), crate::pauli::Pauli::X);
            }
        }
    }

    #[test]
    fn steady_state_rank_is_n_minus_k() {
        let l = h16();
        for rounds in 4..10 {
            let isg = evolve_isg(&l, &ones(&l, rounds)).unwrap();
            assert_eq!(isg.rank(&l), 12, "rounds = {rounds}");
            assert_eq!(isg.generators(&l).len(), 8 + 6);
        }
        assert_eq!(evolve_isg(&l, &ones(&l, 2)).unwrap().plaquettes.len(), 2);
    }

    #[test]
    fn period_three_mod_signs() {
        let l = h16();
        let a = evolve_isg(&l, &ones(&l, 4)).unwrap();
        let b = evolve_isg(&l, &ones(&l, 7)).unwrap();
        assert_eq!(a.unsigned(), b.unsigned());
    }

    #[test]
    fn generators_commute_every_round() {
        let l = h16();
        for rounds in 1..10 {
            let gens = evolve_isg(&l, &ones(&l, rounds)).unwrap().generators(&l);
            for a in &gens {
                for b in &gens {
                    assert!(a.commutes(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn plaquettes_persist() {
        let l = h16();
        let mut prev: Vec<usize> = Vec::new();
        for rounds in 1..10 {
            let cur = evolve_isg(&l, &ones(&l, rounds)).unwrap().unsigned().1;
            assert!(prev.iter().all(|f| cur.contains(f)));
            prev = cur;
        }
    }

    #[test]
    fn random_first_outcomes_then_consistent_reinference() {
        // arbitrary outcomes in rounds 0..3, later rounds chosen to agree
        let l = h16();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut out: Vec<Vec<bool>> = (0..4)
            .map(|_| (0..24).map(|_| rng.gen()).collect())
            .collect();
        let isg = evolve_isg(&l, &out).unwrap();
        assert_eq!(isg.plaquettes.len(), 6);
        // round 4 re-infers red faces: copying round 1's blue outcomes and
        // matching round 3's green to round 0 keeps every value
        let mut r4 = out[1].clone();
        for e in l.edges_of_color(Color::Green) {
            r4[e] = out[3][e];
        }
        let mut alt = out.clone();
        alt[3] = out[0].clone();
        alt.push(r4.clone());
        assert!(evolve_isg(&l, &alt).is_ok());
        // flipping one blue outcome breaks the red face through it
        let blue = l.edges_of_color(Color::Blue).next().unwrap();
        r4[blue] ^= true;
        alt[4] = r4;
        assert!(matches!(
            evolve_isg(&l, &alt),
            Err(CodeError::InconsistentOutcome { round: 4, .. })
        ));
        out.truncate(1);
        assert_eq!(evolve_isg(&l, &out).unwrap().plaquettes.len(), 0);
    }

    #[test]
    fn logicals_commute_with_isg_and_are_independent() {
        let l = h16();
        let basis = homology::cocycle_basis(&l).unwrap();
        for rounds in 4..10 {
            let isg = evolve_isg(&l, &ones(&l, rounds)).unwrap();
            let gens = isg.generators(&l);
            let mut ech = EchelonBasis::new(32);
            for g in &gens {
                ech.insert(&g.symplectic());
            }
            let r = rounds as i64 - 1;
            let mut all = ech.clone();
            for pair in homology::logical_representatives(&l, &basis, r) {
                for op in [&pair.type_one, &pair.type_two] {
                    for g in &gens {
                        assert!(op.commutes(g).unwrap());
                    }
                    assert!(!ech.contains(&op.symplectic()));
                    assert!(all.insert(&op.symplectic()));
                }
            }
            assert_eq!(all.rank(), 12 + 8);
        }
    }

    #[test]
    fn h16_parameters() {
        let p = report_parameters(&h16()).unwrap();
        assert_eq!((p.n, p.k, p.d, p.g), (16, 4, 2, 2));
        assert!(p.rate > 0.125);
        assert_eq!(p.to_string(), "[[16, 4, 2]]");
    }

    #[test]
    fn h16_exhaustive_distance_matches() {
        let l = h16();
        assert_eq!(exhaustive_distance(&l, 24), Some(2));
        assert_eq!(exhaustive_distance(&l, 10), None);
    }
}
