//! Seeded, reproducible run-by-run simulation of the classical question game
//! and of quantum outcome sampling.
//!
//! Randomness contract: every run draws from its own ChaCha substream,
//! selected by the run index on a master key derived from the seed. Results
//! are therefore bit-identical regardless of execution order or worker count,
//! and per-class tallies merge by addition. Draw order within a run is fixed:
//! students draw (class, member, θ_A, θ_B); quantum runs draw (θ_A, θ_B,
//! outcome).

use crate::error::{Error, Result};
use crate::quantum::{
    outcome_probability, AnalyzerSetting, FactsTriple, MeasurementProtocol, OutcomePair,
    TwoPhotonState,
};
use crate::strategies::{MixturePoint, StrategyClass};
use crate::sweep::{simplex_grid, GridSpec};
use crate::Response;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One stored experiment run: the two questions and the two answers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub theta_a_deg: f64,
    pub theta_b_deg: f64,
    pub r_a: Response,
    pub r_b: Response,
}

/// Number of runs, master seed and the measurement protocol of a simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub runs: u64,
    pub seed: u64,
    pub protocol: MeasurementProtocol,
}

impl SimConfig {
    pub fn new(runs: u64, seed: u64) -> Self {
        Self { runs, seed, protocol: MeasurementProtocol::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("at least one run is required".into()));
        }
        Ok(())
    }
}

/// Agreement tally for one offset class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetClassTally {
    pub offset_deg: f64,
    pub runs: u64,
    pub agreements: u64,
}

impl OffsetClassTally {
    /// Empirical agreement frequency; `None` when the class received no runs.
    pub fn empirical(&self) -> Option<f64> {
        (self.runs > 0).then(|| self.agreements as f64 / self.runs as f64)
    }

    /// Binomial standard error `sqrt(f̂(1−f̂)/N_k)`.
    pub fn std_error(&self) -> Option<f64> {
        self.empirical().map(|f| (f * (1.0 - f) / self.runs as f64).sqrt())
    }
}

/// Per-offset-class tallies of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub seed: u64,
    pub total_runs: u64,
    pub classes: Vec<OffsetClassTally>,
}

impl SimReport {
    fn new(seed: u64, protocol: &MeasurementProtocol) -> Self {
        Self {
            seed,
            total_runs: 0,
            classes: protocol
                .classes()
                .iter()
                .map(|c| OffsetClassTally { offset_deg: c.offset_deg, runs: 0, agreements: 0 })
                .collect(),
        }
    }

    fn tally(&mut self, class: usize, agreed: bool) {
        self.total_runs += 1;
        self.classes[class].runs += 1;
        if agreed {
            self.classes[class].agreements += 1;
        }
    }

    /// Empirical facts, one entry per offset class in ascending offset order.
    pub fn empirical_facts(&self) -> Vec<Option<f64>> {
        self.classes.iter().map(OffsetClassTally::empirical).collect()
    }
}

fn substream(master: &ChaCha8Rng, run: u64) -> ChaCha8Rng {
    let mut rng = master.clone();
    rng.set_stream(run);
    rng
}

fn draw_categorical(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

fn simulate_students_inner(
    mixture: &MixturePoint,
    config: &SimConfig,
    mut log: Option<&mut Vec<RunRecord>>,
) -> Result<SimReport> {
    config.validate()?;
    let protocol = &config.protocol;
    let angles = protocol.angles();
    if angles.len() != 3 {
        return Err(Error::InvalidConfig(format!(
            "student strategies answer exactly 3 questions, protocol has {} angles",
            angles.len()
        )));
    }

    let weights = mixture.weights();
    let members = [
        StrategyClass::Alpha.members(),
        StrategyClass::Beta.members(),
        StrategyClass::Gamma.members(),
        StrategyClass::Delta.members(),
    ];

    let master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = SimReport::new(config.seed, protocol);
    for run in 0..config.runs {
        let mut rng = substream(&master, run);
        let class = draw_categorical(&mut rng, &weights);
        let member = rng.gen_range(0..2usize);
        let qa = rng.gen_range(0..angles.len());
        let qb = rng.gen_range(0..angles.len());
        let strategy = members[class][member];
        let r_a = strategy.answer_at(qa);
        let r_b = strategy.answer_at(qb);
        report.tally(protocol.class_of_pair(qa, qb), r_a == r_b);
        if let Some(records) = log.as_deref_mut() {
            records.push(RunRecord {
                theta_a_deg: angles[qa],
                theta_b_deg: angles[qb],
                r_a,
                r_b,
            });
        }
    }
    Ok(report)
}

/// Simulates the question game: each run draws a strategy class from the
/// mixture, one of its two member strategies uniformly, and an independent
/// uniformly random question for each player; both answer with the shared
/// strategy.
pub fn simulate_students(mixture: &MixturePoint, config: &SimConfig) -> Result<SimReport> {
    simulate_students_inner(mixture, config, None)
}

/// [`simulate_students`] plus the full run log.
pub fn simulate_students_logged(
    mixture: &MixturePoint,
    config: &SimConfig,
) -> Result<(SimReport, Vec<RunRecord>)> {
    let mut records = Vec::with_capacity(config.runs as usize);
    let report = simulate_students_inner(mixture, config, Some(&mut records))?;
    Ok((report, records))
}

fn outcome_distributions(
    state: &TwoPhotonState,
    protocol: &MeasurementProtocol,
) -> Result<Vec<Vec<[f64; 4]>>> {
    let angles = protocol.angles();
    let mut table = vec![vec![[0.0f64; 4]; angles.len()]; angles.len()];
    for (i, &ts) in angles.iter().enumerate() {
        for (j, &ti) in angles.iter().enumerate() {
            for (o, &outcome) in OutcomePair::ALL.iter().enumerate() {
                table[i][j][o] = outcome_probability(
                    state,
                    AnalyzerSetting::linear(ts),
                    AnalyzerSetting::linear(ti),
                    outcome,
                )?;
            }
        }
    }
    Ok(table)
}

fn simulate_quantum_inner(
    state: &TwoPhotonState,
    config: &SimConfig,
    mut log: Option<&mut Vec<RunRecord>>,
) -> Result<SimReport> {
    config.validate()?;
    let protocol = &config.protocol;
    let angles = protocol.angles();
    let distributions = outcome_distributions(state, protocol)?;

    let master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = SimReport::new(config.seed, protocol);
    for run in 0..config.runs {
        let mut rng = substream(&master, run);
        let qa = rng.gen_range(0..angles.len());
        let qb = rng.gen_range(0..angles.len());
        let outcome = OutcomePair::ALL[draw_categorical(&mut rng, &distributions[qa][qb])];
        report.tally(protocol.class_of_pair(qa, qb), outcome.is_coincidence());
        if let Some(records) = log.as_deref_mut() {
            records.push(RunRecord {
                theta_a_deg: angles[qa],
                theta_b_deg: angles[qb],
                r_a: outcome.signal,
                r_b: outcome.idler,
            });
        }
    }
    Ok(report)
}

/// Samples the quantum experiment: uniform independent analyzer settings per
/// run, then one of the four joint outcomes from its Born-rule distribution.
pub fn simulate_quantum(state: &TwoPhotonState, config: &SimConfig) -> Result<SimReport> {
    simulate_quantum_inner(state, config, None)
}

/// [`simulate_quantum`] plus the full run log.
pub fn simulate_quantum_logged(
    state: &TwoPhotonState,
    config: &SimConfig,
) -> Result<(SimReport, Vec<RunRecord>)> {
    let mut records = Vec::with_capacity(config.runs as usize);
    let report = simulate_quantum_inner(state, config, Some(&mut records))?;
    Ok((report, records))
}

/// Simulation verdict for one grid mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct PointVerdict {
    pub mixture: MixturePoint,
    pub report: SimReport,
    /// Whether both empirical facts matched the targets within the tolerance.
    pub matches: bool,
}

/// Aggregate verdict of the grid-wide search.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureReport {
    pub target_f2: f64,
    pub target_f3: f64,
    pub tolerance_sigmas: f64,
    pub points: Vec<PointVerdict>,
}

impl ProcedureReport {
    pub fn matching(&self) -> impl Iterator<Item = &PointVerdict> {
        self.points.iter().filter(|v| v.matches)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Runs the simulated game at every grid mixture and reports which mixtures
/// reproduce the target facts `(F2, F3)` within `tolerance_sigmas` standard
/// errors on both facts simultaneously. Each grid point runs on its own seed
/// derived from the master seed and the point index.
pub fn search_grid_for_facts(
    grid: GridSpec,
    config: &SimConfig,
    targets: FactsTriple,
    tolerance_sigmas: f64,
) -> Result<ProcedureReport> {
    config.validate()?;
    let mut points = Vec::new();
    for (index, mixture) in simplex_grid(grid)?.enumerate() {
        let point_config = SimConfig {
            seed: splitmix64(config.seed ^ index as u64),
            ..config.clone()
        };
        let report = simulate_students(&mixture, &point_config)?;
        let matches = facts_match(&report, targets.f2, targets.f3, tolerance_sigmas);
        points.push(PointVerdict { mixture, report, matches });
    }
    Ok(ProcedureReport {
        target_f2: targets.f2,
        target_f3: targets.f3,
        tolerance_sigmas,
        points,
    })
}

fn facts_match(report: &SimReport, f2: f64, f3: f64, sigmas: f64) -> bool {
    if report.classes.len() != 3 {
        return false;
    }
    for (class, target) in [(&report.classes[1], f2), (&report.classes[2], f3)] {
        match (class.empirical(), class.std_error()) {
            (Some(fhat), Some(se)) => {
                if (fhat - target).abs() > sigmas * se {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}
