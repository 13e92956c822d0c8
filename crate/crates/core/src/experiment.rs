//! Error-rate sweeps, threshold crossings and the comparison against copies
//! of honeycomb codes.

use crate::code::{report_parameters, CodeError, CodeParameters};
use crate::decoder::{sample_and_decode, DecodeError, Decoder, DecoderConfig, FailureCounts};
use crate::dem::{build_detector_model, DemError};
use crate::homology::{cocycle_basis, HomologyBasis, HomologyError};
use crate::lattice::{ColoredLattice, LatticeError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use std::path::Path;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Dem(#[from] DemError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("physical error rate {0} outside (0, 0.5]")]
    Rate(f64),
    #[error("need at least one shot")]
    NoShots,
    #[error("need at least two codes of distinct distances")]
    TooFewCodes,
    #[error("{hyperbolic} has k = {k}, not a multiple of {honeycomb}'s k = {k_hc}")]
    Copies {
        hyperbolic: String,
        honeycomb: String,
        k: usize,
        k_hc: usize,
    },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

/// A lattice with its code parameters and homology basis.
#[derive(Clone, Debug)]
pub struct Code {
    pub name: String,
    pub lattice: ColoredLattice,
    pub basis: HomologyBasis,
    pub params: CodeParameters,
}

impl Code {
    pub fn new(name: impl Into<String>, lattice: ColoredLattice) -> Result<Code, ExperimentError> {
        let params = report_parameters(&lattice)?;
        let basis = cocycle_basis(&lattice)?;
        Ok(Code {
            name: name.into(),
            lattice,
            basis,
            params,
        })
    }

    /// Loads a lattice file; the code is named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Code, ExperimentError> {
        let path = path.as_ref();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Code::new(name, ColoredLattice::load(path)?)
    }

    /// Three rounds per unit of distance.
    pub fn default_rounds(&self) -> usize {
        3 * self.params.d
    }
}

/// Shot budget, seed and decoder settings shared by all experiments.
#[derive(Clone, Debug, Serialize)]
pub struct RunSettings {
    pub shots: u64,
    pub seed: u64,
    /// Overrides `3d` rounds when set.
    pub rounds: Option<usize>,
    pub decoder: DecoderConfig,
    /// Cap on the total number of shots of one experiment.
    pub max_total_shots: Option<u64>,
    /// Wall-clock cap, checked between sweep points.
    pub time_limit: Option<Duration>,
}

impl RunSettings {
    pub fn new(shots: u64, seed: u64) -> Self {
        RunSettings {
            shots,
            seed,
            rounds: None,
            decoder: DecoderConfig::default(),
            max_total_shots: None,
            time_limit: None,
        }
    }

    fn check_budget(&self, points: usize) -> Result<(), ExperimentError> {
        if self.shots == 0 {
            return Err(ExperimentError::NoShots);
        }
        if let Some(cap) = self.max_total_shots {
            let total = self.shots.saturating_mul(points as u64);
            if total > cap {
                return Err(ExperimentError::ResourceCap(format!(
                    "{total} shots requested, cap is {cap}"
                )));
            }
        }
        Ok(())
    }
}

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let phat = k / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0.0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if k == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// One physical error rate of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub code: String,
    pub p: f64,
    pub shots: u64,
    pub fails_any: u64,
    pub fails_one: u64,
    pub rate_any: f64,
    pub rate_one: f64,
    pub ci_any: (f64, f64),
    pub ci_one: (f64, f64),
    pub rounds: usize,
    pub seed: u64,
}

impl SweepRow {
    fn from_counts(code: &str, p: f64, c: FailureCounts, rounds: usize, seed: u64) -> SweepRow {
        SweepRow {
            code: code.to_string(),
            p,
            shots: c.shots,
            fails_any: c.fails_any,
            fails_one: c.fails_one,
            rate_any: c.fails_any as f64 / c.shots as f64,
            rate_one: c.fails_one as f64 / c.shots as f64,
            ci_any: wilson_interval(c.fails_any, c.shots),
            ci_one: wilson_interval(c.fails_one, c.shots),
            rounds,
            seed,
        }
    }

    pub fn rate(&self, kind: RateKind) -> f64 {
        match kind {
            RateKind::Any => self.rate_any,
            RateKind::One => self.rate_one,
        }
    }

    pub fn fails(&self, kind: RateKind) -> u64 {
        match kind {
            RateKind::Any => self.fails_any,
            RateKind::One => self.fails_one,
        }
    }

    pub fn interval(&self, kind: RateKind) -> (f64, f64) {
        match kind {
            RateKind::Any => self.ci_any,
            RateKind::One => self.ci_one,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub code: String,
    pub params: CodeParameters,
    pub rounds: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

/// Logical failure counts of `code` at one error rate over `rounds` rounds.
pub fn run_point(
    code: &Code,
    p: f64,
    rounds: usize,
    settings: &RunSettings,
) -> Result<SweepRow, ExperimentError> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(ExperimentError::Rate(p));
    }
    if settings.shots == 0 {
        return Err(ExperimentError::NoShots);
    }
    let model = build_detector_model(&code.lattice, &code.basis, rounds, p)?;
    let decoder = Decoder::new(&model, settings.decoder)?;
    let counts = sample_and_decode(&decoder, settings.shots, settings.seed)?;
    Ok(SweepRow::from_counts(
        &code.name,
        p,
        counts,
        rounds,
        settings.seed,
    ))
}

fn run_rows(
    code: &Code,
    p_values: &[f64],
    rounds: usize,
    settings: &RunSettings,
    start: Instant,
) -> Result<Vec<SweepRow>, ExperimentError> {
    if let Some(&p) = p_values.iter().find(|&&p| !(p > 0.0 && p <= 0.5)) {
        return Err(ExperimentError::Rate(p));
    }
    let mut rows = Vec::with_capacity(p_values.len());
    for &p in p_values {
        if let Some(limit) = settings.time_limit {
            if start.elapsed() > limit {
                return Err(ExperimentError::ResourceCap(format!(
                    "time limit of {limit:?} reached"
                )));
            }
        }
        rows.push(run_point(code, p, rounds, settings)?);
    }
    Ok(rows)
}

/// Both logical error rates of `code` at every `p`, each point sampled with
/// the same seed.
pub fn sweep(
    code: &Code,
    p_values: &[f64],
    settings: &RunSettings,
) -> Result<SweepResult, ExperimentError> {
    settings.check_budget(p_values.len())?;
    let rounds = settings.rounds.unwrap_or_else(|| code.default_rounds());
    let rows = run_rows(code, p_values, rounds, settings, Instant::now())?;
    Ok(SweepResult {
        code: code.name.clone(),
        params: code.params,
        rounds,
        seed: settings.seed,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RateKind {
    /// Any of the `2k` observables flipped.
    Any,
    /// Observable 0 flipped.
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CrossingStatus {
    Found,
    NoCrossing,
}

/// Crossing of the curves of two codes, the larger one being better below it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub smaller: String,
    pub larger: String,
    pub kind: RateKind,
    pub status: CrossingStatus,
    pub estimate: Option<f64>,
    /// 2.5% and 97.5% quantiles over bootstrap resamples with a crossing.
    pub interval: Option<(f64, f64)>,
    /// Fraction of resamples that showed a crossing.
    pub resampled_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub sweeps: Vec<SweepResult>,
    pub crossings: Vec<Crossing>,
    /// Mean of the pairwise specific-logical crossings.
    pub p0_one: Option<f64>,
    /// Mean of the pairwise any-logical crossings.
    pub p0_all: Option<f64>,
}

/// First point where `ln(larger) - ln(smaller)` turns from negative to
/// non-negative, interpolated linearly in `ln p`. Zero counts are floored at
/// half a failure.
pub fn log_linear_crossing(
    p: &[f64],
    smaller: &[(u64, u64)],
    larger: &[(u64, u64)],
) -> Option<f64> {
    let lr = |(k, n): (u64, u64)| ((k as f64).max(0.5) / n as f64).ln();
    let diff: Vec<f64> = smaller
        .iter()
        .zip(larger)
        .map(|(&s, &l)| lr(l) - lr(s))
        .collect();
    (1..p.len()).find_map(|i| {
        let (a, b) = (diff[i - 1], diff[i]);
        if a < 0.0 && b >= 0.0 {
            let (x0, x1) = (p[i - 1].ln(), p[i].ln());
            Some((x0 + (x1 - x0) * a / (a - b)).exp())
        } else {
            None
        }
    })
}

fn crossing(small: &SweepResult, large: &SweepResult, kind: RateKind, seed: u64) -> Crossing {
    let p: Vec<f64> = small.rows.iter().map(|r| r.p).collect();
    let counts = |s: &SweepResult| -> Vec<(u64, u64)> {
        s.rows.iter().map(|r| (r.fails(kind), r.shots)).collect()
    };
    let (cs, cl) = (counts(small), counts(large));
    let estimate = log_linear_crossing(&p, &cs, &cl);
    // resampling each point's failure count is the bootstrap of its shots
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let resample = |c: &[(u64, u64)], rng: &mut ChaCha8Rng| -> Vec<(u64, u64)> {
        c.iter()
            .map(|&(k, n)| {
                let q = k as f64 / n as f64;
                (Binomial::new(n, q).expect("rate in [0, 1]").sample(rng), n)
            })
            .collect()
    };
    let mut found: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .filter_map(|_| {
            let (s, l) = (resample(&cs, &mut rng), resample(&cl, &mut rng));
            log_linear_crossing(&p, &s, &l)
        })
        .collect();
    found.sort_by(f64::total_cmp);
    let quantile = |q: f64| found[((found.len() - 1) as f64 * q).round() as usize];
    let interval = (!found.is_empty()).then(|| (quantile(0.025), quantile(0.975)));
    Crossing {
        smaller: small.code.clone(),
        larger: large.code.clone(),
        kind,
        status: if estimate.is_some() {
            CrossingStatus::Found
        } else {
            CrossingStatus::NoCrossing
        },
        estimate,
        interval,
        resampled_fraction: found.len() as f64 / BOOTSTRAP_RESAMPLES as f64,
    }
}

/// Sweeps every code over `p_grid` and locates the crossings between codes
/// of consecutive distances.
pub fn estimate_threshold(
    codes: &[Code],
    p_grid: &[f64],
    settings: &RunSettings,
) -> Result<ThresholdReport, ExperimentError> {
    let mut order: Vec<&Code> = codes.iter().collect();
    order.sort_by_key(|c| (c.params.d, c.params.n));
    order.dedup_by_key(|c| c.params.d);
    if order.len() < 2 || p_grid.len() < 2 {
        return Err(ExperimentError::TooFewCodes);
    }
    let mut grid = p_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    settings.check_budget(grid.len() * order.len())?;
    let start = Instant::now();
    let mut sweeps = Vec::with_capacity(order.len());
    for code in &order {
        let rounds = settings.rounds.unwrap_or_else(|| code.default_rounds());
        sweeps.push(SweepResult {
            code: code.name.clone(),
            params: code.params,
            rounds,
            seed: settings.seed,
            rows: run_rows(code, &grid, rounds, settings, start)?,
        });
    }
    let mut crossings = Vec::new();
    for kind in [RateKind::One, RateKind::Any] {
        for (i, w) in sweeps.windows(2).enumerate() {
            let seed = settings.seed ^ ((i as u64) << 32) ^ (kind as u64);
            crossings.push(crossing(&w[0], &w[1], kind, seed));
        }
    }
    let mean = |kind: RateKind| {
        let v: Vec<f64> = crossings
            .iter()
            .filter(|c| c.kind == kind)
            .filter_map(|c| c.estimate)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    };
    Ok(ThresholdReport {
        p0_one: mean(RateKind::One),
        p0_all: mean(RateKind::Any),
        sweeps,
        crossings,
    })
}

/// Probability that at least one of `copies` independent copies fails.
pub fn combined_rate(single: f64, copies: usize) -> f64 {
    1.0 - (1.0 - single).powi(copies as i32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub hyperbolic: String,
    pub honeycomb: String,
    pub p: f64,
    pub copies: usize,
    pub rounds: usize,
    pub hyperbolic_qubits: usize,
    pub honeycomb_qubits: usize,
    pub hyperbolic_rate: f64,
    pub hyperbolic_ci: (f64, f64),
    pub single_rate: f64,
    pub combined_rate: f64,
    pub combined_ci: (f64, f64),
    pub shots: u64,
    pub seed: u64,
}

/// Any-logical rate of `hyperbolic` against `m` independent copies of each
/// honeycomb code, `m` matching the number of logical qubits. Both sides run
/// for the hyperbolic code's number of rounds.
pub fn compare_honeycomb(
    hyperbolic: &Code,
    honeycombs: &[Code],
    p_values: &[f64],
    settings: &RunSettings,
) -> Result<Vec<ComparisonRow>, ExperimentError> {
    let k = hyperbolic.params.k;
    let mut copies = Vec::with_capacity(honeycombs.len());
    for hc in honeycombs {
        let k_hc = hc.params.k;
        if k_hc == 0 || !k.is_multiple_of(k_hc) {
            return Err(ExperimentError::Copies {
                hyperbolic: hyperbolic.name.clone(),
                honeycomb: hc.name.clone(),
                k,
                k_hc,
            });
        }
        copies.push(k / k_hc);
    }
    settings.check_budget(p_values.len() * (honeycombs.len() + 1))?;
    let rounds = settings
        .rounds
        .unwrap_or_else(|| hyperbolic.default_rounds());
    let start = Instant::now();
    let hyper_rows = run_rows(hyperbolic, p_values, rounds, settings, start)?;
    let mut out = Vec::new();
    for (hc, &m) in honeycombs.iter().zip(&copies) {
        let rows = run_rows(hc, p_values, rounds, settings, start)?;
        for (h, r) in hyper_rows.iter().zip(rows) {
            out.push(ComparisonRow {
                hyperbolic: hyperbolic.name.clone(),
                honeycomb: hc.name.clone(),
                p: h.p,
                copies: m,
                rounds,
                hyperbolic_qubits: hyperbolic.params.n,
                honeycomb_qubits: m * hc.params.n,
                hyperbolic_rate: h.rate_any,
                hyperbolic_ci: h.ci_any,
                single_rate: r.rate_any,
                combined_rate: combined_rate(r.rate_any, m),
                combined_ci: (combined_rate(r.ci_any.0, m), combined_rate(r.ci_any.1, m)),
                shots: r.shots,
                seed: settings.seed,
            });
        }
    }
    Ok(out)
}

/// CSV with `code,p,shots,fails_any,fails_one,rate_any,rate_one,ci_lo,ci_hi,R,seed`;
/// the interval is that of the any-logical rate. `header` lines are
/// prefixed with `# `.
pub fn sweep_csv(header: &str, rows: &[SweepRow]) -> String {
    let mut out = comment_block(header);
    out.push_str("code,p,shots,fails_any,fails_one,rate_any,rate_one,ci_lo,ci_hi,R,seed\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:e},{},{},{},{:e},{:e},{:e},{:e},{},{}\n",
            r.code,
            r.p,
            r.shots,
            r.fails_any,
            r.fails_one,
            r.rate_any,
            r.rate_one,
            r.ci_any.0,
            r.ci_any.1,
            r.rounds,
            r.seed
        ));
    }
    out
}

pub fn comparison_csv(header: &str, rows: &[ComparisonRow]) -> String {
    let mut out = comment_block(header);
    out.push_str(
        "hyperbolic,honeycomb,p,copies,R,hyperbolic_qubits,honeycomb_qubits,\
         hyperbolic_rate,hyperbolic_ci_lo,hyperbolic_ci_hi,single_rate,combined_rate,combined_ci_lo,combined_ci_hi,shots,seed\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{:e},{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}\n",
            r.hyperbolic,
            r.honeycomb,
            r.p,
            r.copies,
            r.rounds,
            r.hyperbolic_qubits,
            r.honeycomb_qubits,
            r.hyperbolic_rate,
            r.hyperbolic_ci.0,
            r.hyperbolic_ci.1,
            r.single_rate,
            r.combined_rate,
            r.combined_ci.0,
            r.combined_ci.1,
            r.shots,
            r.seed
        ));
    }
    out
}

pub fn crossings_csv(header: &str, report: &ThresholdReport) -> String {
    let mut out = comment_block(header);
    out.push_str("smaller,larger,kind,status,estimate,ci_lo,ci_hi,resampled_fraction\n");
    let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
    for c in &report.crossings {
        let status = match c.status {
            CrossingStatus::Found => "FOUND",
            CrossingStatus::NoCrossing => "NO_CROSSING",
        };
        out.push_str(&format!(
            "{},{},{:?},{status},{},{},{},{}\n",
            c.smaller,
            c.larger,
            c.kind,
            opt(c.estimate),
            opt(c.interval.map(|i| i.0)),
            opt(c.interval.map(|i| i.1)),
            c.resampled_fraction
        ));
    }
    out
}

fn comment_block(header: &str) -> String {
    header.lines().map(|l| format!("# {l}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{data_lattice, h16};
    use proptest::prelude::*;

    fn code(name: &str) -> Code {
        Code::new(name, data_lattice(name)).unwrap()
    }

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036994).abs() < 1e-5, "{hi}");
        let (lo, hi) = wilson_interval(50, 100);
        assert!(
            (lo - 0.403832).abs() < 1e-5 && (hi - 0.596168).abs() < 1e-5,
            "{lo} {hi}"
        );
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
    }

    #[test]
    fn h16_saturates_at_one_half() {
        let c = Code::new("H16", h16()).unwrap();
        let s = sweep(&c, &[0.1], &RunSettings::new(4000, 3)).unwrap();
        let r = &s.rows[0];
        assert_eq!(r.rounds, 6);
        let sigma = (0.25f64 / 4000.0).sqrt();
        assert!((r.rate_one - 0.5).abs() < 3.0 * sigma, "{}", r.rate_one);
        assert!(r.rate_one <= r.rate_any);
    }

    #[test]
    fn sweep_is_deterministic() {
        let c = Code::new("H16", h16()).unwrap();
        let set = RunSettings::new(500, 9);
        let a = sweep(&c, &[0.01, 0.02], &set).unwrap();
        let b = sweep(&c, &[0.01, 0.02], &set).unwrap();
        assert_eq!(sweep_csv("x", &a.rows), sweep_csv("x", &b.rows));
        for r in &a.rows {
            assert!(r.fails_one <= r.fails_any);
        }
    }

    #[test]
    fn invalid_sweeps() {
        let c = Code::new("H16", h16()).unwrap();
        assert!(matches!(
            sweep(&c, &[0.6], &RunSettings::new(10, 1)),
            Err(ExperimentError::Rate(_))
        ));
        assert!(matches!(
            sweep(&c, &[0.0], &RunSettings::new(10, 1)),
            Err(ExperimentError::Rate(_))
        ));
        assert!(matches!(
            sweep(&c, &[0.1], &RunSettings::new(0, 1)),
            Err(ExperimentError::NoShots)
        ));
        let mut capped = RunSettings::new(100, 1);
        capped.max_total_shots = Some(150);
        assert!(matches!(
            sweep(&c, &[0.1, 0.2], &capped),
            Err(ExperimentError::ResourceCap(_))
        ));
        assert!(matches!(
            estimate_threshold(&[c.clone(), c], &[0.1, 0.2], &RunSettings::new(10, 1)),
            Err(ExperimentError::TooFewCodes)
        ));
    }

    #[test]
    fn crossing_of_synthetic_curves() {
        // rates p^2 * 100 and p^3 * 1e4 cross at p = 0.01
        let p = [0.002, 0.005, 0.02, 0.05];
        let n = 1_000_000_000u64;
        let counts = |f: &dyn Fn(f64) -> f64| {
            p.iter()
                .map(|&x| ((f(x) * n as f64).round() as u64, n))
                .collect::<Vec<_>>()
        };
        let small = counts(&|x| 100.0 * x * x);
        let large = counts(&|x| 1e4 * x * x * x);
        let c = log_linear_crossing(&p, &small, &large).unwrap();
        assert!((c - 0.01).abs() < 1e-6, "{c}");
        assert_eq!(log_linear_crossing(&p, &large, &small), None);
    }

    #[test]
    fn separated_curves_report_no_crossing() {
        let mk = |name: &str, rates: &[f64]| SweepResult {
            code: name.into(),
            params: CodeParameters {
                n: 16,
                k: 4,
                d: 2,
                g: 2,
                rate: 0.25,
            },
            rounds: 6,
            seed: 0,
            rows: rates
                .iter()
                .zip([1e-3, 2e-3, 4e-3])
                .map(|(&r, p)| {
                    let fails = (r * 10_000.0) as u64;
                    SweepRow::from_counts(
                        name,
                        p,
                        FailureCounts {
                            shots: 10_000,
                            fails_any: fails,
                            fails_one: fails,
                        },
                        6,
                        0,
                    )
                })
                .collect(),
        };
        let a = mk("A", &[0.01, 0.02, 0.04]);
        let b = mk("B", &[0.2, 0.3, 0.4]);
        let c = crossing(&a, &b, RateKind::Any, 1);
        assert_eq!(c.status, CrossingStatus::NoCrossing);
        assert_eq!(c.estimate, None);
        let csv = crossings_csv(
            "",
            &ThresholdReport {
                sweeps: vec![],
                crossings: vec![c],
                p0_one: None,
                p0_all: None,
            },
        );
        assert!(csv.contains("NO_CROSSING"));
    }

    #[test]
    fn bootstrap_interval_brackets_estimate() {
        let p = [1e-3, 2e-3, 4e-3, 8e-3];
        let mk = |name: &str, rates: [f64; 4]| SweepResult {
            code: name.into(),
            params: CodeParameters {
                n: 16,
                k: 4,
                d: 2,
                g: 2,
                rate: 0.25,
            },
            rounds: 6,
            seed: 0,
            rows: rates
                .iter()
                .zip(p)
                .map(|(&r, p)| {
                    let fails = (r * 100_000.0) as u64;
                    SweepRow::from_counts(
                        name,
                        p,
                        FailureCounts {
                            shots: 100_000,
                            fails_any: fails,
                            fails_one: fails,
                        },
                        6,
                        0,
                    )
                })
                .collect(),
        };
        let a = mk("A", [0.01, 0.02, 0.04, 0.08]);
        let b = mk("B", [0.002, 0.008, 0.032, 0.128]);
        let c = crossing(&a, &b, RateKind::One, 4);
        let est = c.estimate.unwrap();
        assert!((est - 5e-3).abs() < 1e-4, "{est}");
        let (lo, hi) = c.interval.unwrap();
        assert!(lo <= est && est <= hi, "{lo} {est} {hi}");
        assert!(c.resampled_fraction > 0.9);
    }

    #[test]
    fn comparison_with_itself_is_identical() {
        let c = code("HC18");
        let rows =
            compare_honeycomb(&c, std::slice::from_ref(&c), &[0.02], &RunSettings::new(2000, 5)).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.copies, 1);
        assert_eq!(r.hyperbolic_rate, r.combined_rate);
        assert_eq!(r.hyperbolic_qubits, r.honeycomb_qubits);
    }

    #[test]
    fn comparison_copies_match_logical_count() {
        let h = code("H144");
        let hc = code("HC18");
        let rows = compare_honeycomb(&h, &[hc], &[0.05], &RunSettings::new(50, 5)).unwrap();
        assert_eq!(rows[0].copies, 10);
        assert_eq!(rows[0].honeycomb_qubits, 180);
        assert_eq!(rows[0].rounds, 18);
        let h16 = Code::new("H16", h16()).unwrap();
        let h64 = code("H64");
        assert!(matches!(
            compare_honeycomb(&h16, &[h64], &[0.05], &RunSettings::new(10, 1)),
            Err(ExperimentError::Copies { .. })
        ));
    }

    proptest! {
        #[test]
        fn combined_rate_is_monotone(p1 in 0.0f64..1.0, dp in 0.0f64..0.5, m in 1usize..200) {
            let p2 = (p1 + dp).min(1.0);
            prop_assert!(combined_rate(p1, m) <= combined_rate(p2, m) + 1e-15);
            prop_assert!(combined_rate(p1, m) <= combined_rate(p1, m + 1) + 1e-15);
            prop_assert!((combined_rate(p1, 1) - p1).abs() < 1e-12);
        }

        #[test]
        fn wilson_interval_contains_estimate(n in 1u64..100_000, frac in 0.0f64..=1.0) {
            let k = ((n as f64) * frac).floor() as u64;
            let (lo, hi) = wilson_interval(k, n);
            let phat = k as f64 / n as f64;
            prop_assert!(0.0 <= lo && lo <= phat + 1e-12 && phat <= hi + 1e-12 && hi <= 1.0);
        }
    }
}
