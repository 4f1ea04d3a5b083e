//! Monte-Carlo learning experiments.
//!
//! Trial `t` of a run with base seed `s` uses seed `s + t`. Its target
//! thresholds and random unknown set come from stream 0 of that seed, its
//! training configurations from stream 1 and its evaluation configurations
//! from stream 2. Every cell of a sweep reuses the same streams, so cells
//! differ only in the parameter being varied, and a training set of size `q`
//! is always the first `q` pairs of any larger one. A generated network
//! comes from stream 3 of the base seed.

use std::io::Write;
use std::sync::Arc;

use rand::seq::index::sample;
use rayon::prelude::*;

use msyds::learner::{
    estimate_pmac_error, estimate_true_error, make_training_set, pac_learn, random_system,
    sample_size_pac, sample_size_pmac, BernoulliDistribution,
};
use msyds::rng::{substream, SeededRng};
use msyds::{LearningProblem, MasterKind, MultilayerNetwork, Result, ThresholdSystem, TrainingSet};

pub const CSV_VERSION: &str = "# msyds-csv v1";

const TARGET_STREAM: u64 = 0;
const TRAIN_STREAM: u64 = 1;
const EVAL_STREAM: u64 = 2;
const GRAPH_STREAM: u64 = 3;

/// Which vertices have thresholds to be learned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownSpec {
    All,
    Fixed(Vec<usize>),
    /// A fresh uniformly random set of this size in every trial.
    Random(usize),
}

impl UnknownSpec {
    pub fn sigma(&self, n: usize) -> usize {
        match self {
            UnknownSpec::All => n,
            UnknownSpec::Fixed(vs) => vs.len(),
            UnknownSpec::Random(s) => *s,
        }
    }
}

/// The network and master function shared by all trials, plus the target
/// thresholds when they are fixed rather than drawn per trial.
#[derive(Debug, Clone)]
pub struct Setting {
    pub net: Arc<MultilayerNetwork>,
    pub master: MasterKind,
    pub thresholds: Option<Vec<u32>>,
}

/// Everything produced by one learning trial.
#[derive(Debug, Clone)]
pub struct TrialRun {
    pub target: ThresholdSystem,
    pub problem: LearningProblem,
    pub training: TrainingSet,
    pub learned: ThresholdSystem,
    pub loss: f64,
}

impl Setting {
    /// Target system and learning problem of the trial with this seed.
    pub fn problem(&self, seed: u64, unknown: &UnknownSpec) -> Result<(ThresholdSystem, LearningProblem)> {
        let mut rng = substream(seed, TARGET_STREAM);
        let target = match &self.thresholds {
            Some(t) => ThresholdSystem::new(self.net.clone(), self.master, t.clone())?,
            None => random_system(self.net.clone(), self.master, &mut rng),
        };
        let n = self.net.n();
        let vs: Vec<usize> = match unknown {
            UnknownSpec::All => (0..n).collect(),
            UnknownSpec::Fixed(vs) => vs.clone(),
            UnknownSpec::Random(s) => {
                if *s > n {
                    return Err(msyds::Error::InvalidArgument(format!(
                        "cannot pick {s} unknown vertices out of {n}"
                    )));
                }
                let mut vs = sample(&mut rng, n, *s).into_vec();
                vs.sort_unstable();
                vs
            }
        };
        let problem = LearningProblem::from_target(&target, &vs)?;
        Ok((target, problem))
    }

    pub fn training(&self, target: &ThresholdSystem, seed: u64, p: f64, q: usize) -> Result<TrainingSet> {
        let dist = BernoulliDistribution::new(p)?;
        Ok(make_training_set(target, &dist, q, &mut substream(seed, TRAIN_STREAM)))
    }

    /// One full trial: draw, learn from `q` examples, estimate the true error.
    pub fn run_trial(&self, unknown: &UnknownSpec, seed: u64, p: f64, q: usize, eval_samples: usize) -> Result<TrialRun> {
        let (target, problem) = self.problem(seed, unknown)?;
        let training = self.training(&target, seed, p, q)?;
        let learned = pac_learn(&problem, &training)?;
        let dist = BernoulliDistribution::new(p)?;
        let loss = estimate_true_error(&learned, &target, &dist, eval_samples, &mut eval_rng(seed))?;
        Ok(TrialRun {
            target,
            problem,
            training,
            learned,
            loss,
        })
    }
}

pub fn eval_rng(seed: u64) -> SeededRng {
    substream(seed, EVAL_STREAM)
}

pub fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add(trial as u64)
}

/// The grid of a sweep. Cells are ordered by unknown spec, then `p`, then training size.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub unknown: Vec<UnknownSpec>,
    pub ps: Vec<f64>,
    pub train_sizes: Vec<usize>,
    pub trials: usize,
    pub eval_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub sigma: usize,
    pub p: f64,
    pub train_size: usize,
    /// Indexed by trial.
    pub losses: Vec<f64>,
}

impl Cell {
    pub fn mean(&self) -> f64 {
        self.losses.iter().sum::<f64>() / self.losses.len() as f64
    }

    /// Sample standard deviation; 0 for a single trial.
    pub fn stdev(&self) -> f64 {
        let m = self.losses.len();
        if m < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self.losses.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (m - 1) as f64).sqrt()
    }
}

/// Losses of one trial for every cell, in cell order.
fn sweep_trial(setting: &Setting, plan: &SweepPlan, trial: usize) -> Result<Vec<f64>> {
    let seed = trial_seed(plan.seed, trial);
    let largest = plan.train_sizes.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for unknown in &plan.unknown {
        let (target, problem) = setting.problem(seed, unknown)?;
        for &p in &plan.ps {
            let dist = BernoulliDistribution::new(p)?;
            let all = setting.training(&target, seed, p, largest)?;
            for &q in &plan.train_sizes {
                let h = pac_learn(&problem, &all.prefix(q))?;
                out.push(estimate_true_error(&h, &target, &dist, plan.eval_samples, &mut eval_rng(seed))?);
            }
        }
    }
    Ok(out)
}

/// Runs every trial (in parallel on the current rayon pool) and groups the losses by cell.
pub fn sweep(setting: &Setting, plan: &SweepPlan) -> Result<Vec<Cell>> {
    if plan.trials == 0 {
        return Err(msyds::Error::InvalidArgument("need at least one trial".into()));
    }
    let per_trial: Vec<Vec<f64>> = (0..plan.trials)
        .into_par_iter()
        .map(|t| sweep_trial(setting, plan, t))
        .collect::<Result<_>>()?;
    let n = setting.net.n();
    let mut cells = Vec::new();
    for unknown in &plan.unknown {
        for &p in &plan.ps {
            for &train_size in &plan.train_sizes {
                cells.push(Cell {
                    sigma: unknown.sigma(n),
                    p,
                    train_size,
                    losses: Vec::with_capacity(plan.trials),
                });
            }
        }
    }
    for losses in per_trial {
        for (cell, loss) in cells.iter_mut().zip(losses) {
            cell.losses.push(loss);
        }
    }
    Ok(cells)
}

/// One `trial` row per trial and one `mean` row per cell.
pub fn write_sweep_csv<W: Write>(mut w: W, cells: &[Cell], base_seed: u64, k: usize) -> std::io::Result<()> {
    writeln!(w, "{CSV_VERSION}")?;
    writeln!(w, "kind,trial,seed,p,train_size,sigma,k,loss,stdev")?;
    for cell in cells {
        for (t, loss) in cell.losses.iter().enumerate() {
            writeln!(
                w,
                "trial,{t},{},{},{},{},{k},{loss},",
                trial_seed(base_seed, t),
                cell.p,
                cell.train_size,
                cell.sigma
            )?;
        }
        writeln!(
            w,
            "mean,,{base_seed},{},{},{},{k},{},{}",
            cell.p,
            cell.train_size,
            cell.sigma,
            cell.mean(),
            cell.stdev()
        )?;
    }
    Ok(())
}

/// Which guarantee a validation run checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Guarantee {
    Pac,
    Pmac { beta: f64 },
}

#[derive(Debug, Clone)]
pub struct ValidationPlan {
    pub guarantee: Guarantee,
    pub eps: f64,
    pub delta: f64,
    pub p: f64,
    pub trials: usize,
    pub eval_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub guarantee: Guarantee,
    pub sigma: usize,
    pub k: usize,
    pub q: u64,
    /// Per trial: true error (PAC) or the fraction of samples with at least `β·σ` mispredicted unknown vertices (PMAC).
    pub losses: Vec<f64>,
    pub eps: f64,
    pub delta: f64,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.losses.iter().filter(|&&l| l >= self.eps).count()
    }

    pub fn failure_fraction(&self) -> f64 {
        self.failures() as f64 / self.losses.len() as f64
    }

    /// Three binomial standard deviations at the nominal failure rate.
    pub fn slack(&self) -> f64 {
        3.0 * (self.delta * (1.0 - self.delta) / self.losses.len() as f64).sqrt()
    }

    pub fn passed(&self) -> bool {
        self.failure_fraction() <= self.delta + self.slack()
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        match self.guarantee {
            Guarantee::Pac => writeln!(w, "guarantee=pac")?,
            Guarantee::Pmac { beta } => {
                writeln!(w, "guarantee=pmac")?;
                writeln!(w, "beta={beta}")?;
            }
        }
        writeln!(w, "sigma={}", self.sigma)?;
        writeln!(w, "k={}", self.k)?;
        writeln!(w, "eps={}", self.eps)?;
        writeln!(w, "delta={}", self.delta)?;
        writeln!(w, "q={}", self.q)?;
        writeln!(w, "trials={}", self.losses.len())?;
        writeln!(w, "failures={}", self.failures())?;
        writeln!(w, "failure_fraction={}", self.failure_fraction())?;
        writeln!(w, "slack={}", self.slack())?;
        writeln!(w, "verdict={}", if self.passed() { "pass" } else { "fail" })
    }

    pub fn write_csv<W: Write>(&self, mut w: W, base_seed: u64) -> std::io::Result<()> {
        writeln!(w, "{CSV_VERSION}")?;
        writeln!(w, "trial,seed,q,loss,failed")?;
        for (t, loss) in self.losses.iter().enumerate() {
            writeln!(
                w,
                "{t},{},{},{loss},{}",
                trial_seed(base_seed, t),
                self.q,
                (*loss >= self.eps) as u8
            )?;
        }
        Ok(())
    }
}

/// Runs `trials` learning trials at the guarantee's sample size and records each trial's loss.
pub fn validate(setting: &Setting, unknown: &UnknownSpec, plan: &ValidationPlan) -> Result<ValidationReport> {
    if plan.trials == 0 {
        return Err(msyds::Error::InvalidArgument("need at least one trial".into()));
    }
    let n = setting.net.n();
    let k = setting.net.k();
    let sigma = unknown.sigma(n);
    let q = match plan.guarantee {
        Guarantee::Pac => sample_size_pac(plan.eps, plan.delta, sigma, k)?,
        Guarantee::Pmac { beta } => sample_size_pmac(plan.eps, plan.delta, beta, sigma, k)?,
    };
    let losses = (0..plan.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(plan.seed, t);
            match plan.guarantee {
                Guarantee::Pac => Ok(setting.run_trial(unknown, seed, plan.p, q as usize, plan.eval_samples)?.loss),
                Guarantee::Pmac { beta } => {
                    let (target, problem) = setting.problem(seed, unknown)?;
                    let training = setting.training(&target, seed, plan.p, q as usize)?;
                    let h = pac_learn(&problem, &training)?;
                    let dist = BernoulliDistribution::new(plan.p)?;
                    estimate_pmac_error(
                        &h,
                        &target,
                        problem.unknown(),
                        &dist,
                        beta,
                        plan.eval_samples,
                        &mut eval_rng(seed),
                    )
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ValidationReport {
        guarantee: plan.guarantee,
        sigma,
        k,
        q,
        losses,
        eps: plan.eps,
        delta: plan.delta,
    })
}

/// Generator for graph sampling when no graph file is given.
pub fn graph_rng(seed: u64) -> SeededRng {
    substream(seed, GRAPH_STREAM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use msyds::graph::generate_multi_gnp;
    use msyds::learner::empirical_risk;
    use msyds::rng::seeded;

    fn setting() -> Setting {
        let net = Arc::new(generate_multi_gnp(40, 2, 0.1, &mut seeded(3)).unwrap());
        Setting {
            net,
            master: MasterKind::Or,
            thresholds: None,
        }
    }

    #[test]
    fn sweep_cells_rederive_from_recorded_seeds() {
        let s = setting();
        let plan = SweepPlan {
            unknown: vec![UnknownSpec::All, UnknownSpec::Random(10)],
            ps: vec![0.2, 0.7],
            train_sizes: vec![5, 40],
            trials: 3,
            eval_samples: 300,
            seed: 11,
        };
        let cells = sweep(&s, &plan).unwrap();
        assert_eq!(cells.len(), 8);
        for cell in &cells {
            let spec = if cell.sigma == 40 { UnknownSpec::All } else { UnknownSpec::Random(10) };
            for (t, &loss) in cell.losses.iter().enumerate() {
                let run = s.run_trial(&spec, trial_seed(11, t), cell.p, cell.train_size, 300).unwrap();
                assert_eq!(run.loss, loss);
                assert_eq!(empirical_risk(&run.learned, &run.training), 0);
            }
        }
    }

    #[test]
    fn random_unknown_sets_have_requested_size() {
        let s = setting();
        let (_, problem) = s.problem(4, &UnknownSpec::Random(7)).unwrap();
        assert_eq!(problem.sigma(), 7);
        assert!(s.problem(4, &UnknownSpec::Random(41)).is_err());
        // The target does not depend on the unknown spec.
        let (a, _) = s.problem(4, &UnknownSpec::All).unwrap();
        let (b, _) = s.problem(4, &UnknownSpec::Random(3)).unwrap();
        assert_eq!(a.table(), b.table());
    }

    #[test]
    fn csv_layout() {
        let cells = vec![Cell {
            sigma: 5,
            p: 0.5,
            train_size: 10,
            losses: vec![0.25, 0.75],
        }];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &cells, 100, 2).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let expected = "# msyds-csv v1\n\
            kind,trial,seed,p,train_size,sigma,k,loss,stdev\n\
            trial,0,100,0.5,10,5,2,0.25,\n\
            trial,1,101,0.5,10,5,2,0.75,\n\
            mean,,100,0.5,10,5,2,0.5,0.3535533905932738\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn validation_slack_and_verdict() {
        let report = ValidationReport {
            guarantee: Guarantee::Pac,
            sigma: 1,
            k: 1,
            q: 1,
            losses: vec![0.5; 4].into_iter().chain(vec![0.0; 96]).collect(),
            eps: 0.2,
            delta: 0.01,
        };
        assert_eq!(report.failures(), 4);
        assert!((report.slack() - 3.0 * (0.01f64 * 0.99 / 100.0).sqrt()).abs() < 1e-15);
        assert!(!report.passed());
    }
}
