//! Sampling of error configurations from a detector model.
//!
//! Each shot draws from its own ChaCha stream keyed by `(seed, shot)`, so a
//! shot's outcome does not depend on how shots are split across threads.
//! Mechanisms are grouped by probability and fired by geometric skipping.

use crate::bits::BitVec;
use crate::dem::DetectorModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("unknown mechanism id {0}")]
    UnknownMechanism(usize),
    #[error("need at least one shot")]
    NoShots,
}

/// One shot: sorted detection events and the true observable flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shot {
    pub events: Vec<u32>,
    pub observables: BitVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotBatch {
    pub seed: u64,
    pub shots: Vec<Shot>,
}

impl ShotBatch {
    pub fn len(&self) -> usize {
        self.shots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shots.is_empty()
    }

    /// `S <shot> D:<ids> O:<hex>` per shot, ids comma separated.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, shot) in self.shots.iter().enumerate() {
            let ids: Vec<String> = shot.events.iter().map(|d| d.to_string()).collect();
            writeln!(
                s,
                "S {i} D:{} O:{}",
                ids.join(","),
                shot.observables.to_hex()
            )
            .unwrap();
        }
        s
    }
}

/// Precomputed probability classes of a model.
#[derive(Clone, Debug)]
pub struct Sampler {
    classes: Vec<(Geometric, Vec<u32>)>,
    num_observables: usize,
}

impl Sampler {
    pub fn new(model: &DetectorModel) -> Self {
        let mut by_prob: Vec<(f64, Vec<u32>)> = Vec::new();
        for (i, m) in model.mechanisms.iter().enumerate() {
            if m.probability <= 0.0 {
                continue;
            }
            match by_prob.iter_mut().find(|(p, _)| *p == m.probability) {
                Some((_, ids)) => ids.push(i as u32),
                None => by_prob.push((m.probability, vec![i as u32])),
            }
        }
        let classes = by_prob
            .into_iter()
            .map(|(p, ids)| (Geometric::new(p).expect("probability in (0, 1)"), ids))
            .collect();
        Sampler {
            classes,
            num_observables: model.num_observables,
        }
    }

    fn rng(seed: u64, shot: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shot);
        rng
    }

    /// Mechanism ids fired in shot `shot`, ascending within each
    /// probability class.
    pub fn fired(&self, seed: u64, shot: u64) -> Vec<u32> {
        let mut rng = Self::rng(seed, shot);
        let mut out = Vec::new();
        for (geo, ids) in &self.classes {
            let mut pos = geo.sample(&mut rng);
            while pos < ids.len() as u64 {
                out.push(ids[pos as usize]);
                pos = pos.saturating_add(1).saturating_add(geo.sample(&mut rng));
            }
        }
        out
    }

    pub fn shot(&self, model: &DetectorModel, seed: u64, shot: u64) -> Shot {
        accumulate(
            model,
            self.num_observables,
            self.fired(seed, shot).iter().map(|&m| m as usize),
        )
    }
}

/// XOR of the detector sets and observable flips of the given mechanisms.
fn accumulate(
    model: &DetectorModel,
    num_observables: usize,
    mechanisms: impl Iterator<Item = usize>,
) -> Shot {
    let mut events = Vec::new();
    let mut observables = BitVec::zeros(num_observables);
    for m in mechanisms {
        let mech = &model.mechanisms[m];
        events.extend_from_slice(&mech.detectors);
        observables.xor_assign(&mech.observables);
    }
    events.sort_unstable();
    let mut out = Vec::with_capacity(events.len());
    for d in events {
        if out.last() == Some(&d) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    Shot {
        events: out,
        observables,
    }
}

/// Samples `shots` shots in parallel; the result depends only on the model
/// and the seed.
pub fn sample(model: &DetectorModel, shots: usize, seed: u64) -> Result<ShotBatch, SampleError> {
    if shots == 0 {
        return Err(SampleError::NoShots);
    }
    let sampler = Sampler::new(model);
    let shots = (0..shots as u64)
        .into_par_iter()
        .map(|i| sampler.shot(model, seed, i))
        .collect();
    Ok(ShotBatch { seed, shots })
}

/// A single shot in which exactly the listed mechanisms fire.
pub fn inject(model: &DetectorModel, mechanisms: &[usize]) -> Result<ShotBatch, SampleError> {
    if let Some(&bad) = mechanisms.iter().find(|&&m| m >= model.mechanisms.len()) {
        return Err(SampleError::UnknownMechanism(bad));
    }
    let shot = accumulate(model, model.num_observables, mechanisms.iter().copied());
    Ok(ShotBatch {
        seed: 0,
        shots: vec![shot],
    })
}
