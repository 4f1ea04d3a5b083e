use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{CommandFactory, FromArgMatches};
use rand::seq::index::sample;

use msyds::dynamics::load_threshold_table;
use msyds::graph::{edge_prob_for_avg_degree, generate_multi_gnp, load_edge_list};
use msyds::learner::{
    empirical_risk, estimate_true_error, load_training_set, pac_learn, sample_size_generic,
    sample_size_pac, sample_size_pmac, BernoulliDistribution, ConfigSampler,
};
use msyds::ndim::{
    dfs_canonical_set, is_canonical, load_candidate, pnn_certificate, q_set_check,
    shatter_witness, shatterable_from_qset, verify_witness, OracleLimits, QSet, ShatterCandidate,
};
use msyds::rng::substream;
use msyds::{Configuration, LearningProblem, MultilayerNetwork};

use crate::args::*;
use crate::config;
use crate::error::{in_file, CliError, CliResult};
use crate::experiment::{
    eval_rng, graph_rng, sweep, validate, write_sweep_csv, Guarantee, Setting, SweepPlan,
    UnknownSpec, ValidationPlan, CSV_VERSION,
};

/// Parses `argv` (program name first), applies any config file and runs the
/// subcommand. Primary output goes to `out` unless a file is named.
pub fn run(argv: Vec<OsString>, out: &mut dyn Write) -> CliResult<()> {
    let cmd = Cli::command();
    // Required flags may come from the config file, so the first pass only locates it.
    let lenient = cmd.clone().mut_subcommands(|s| s.mut_args(|a| a.required(false)));
    let matches = match lenient.try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            write!(out, "{}", e.render())?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    let argv = config::merge(&cmd, &matches, argv)?;
    let matches = cmd
        .try_get_matches_from(&argv)
        .map_err(|e| CliError::Usage(e.render().to_string()))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Gen(a) => gen(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Learn(a) => learn(a, out),
        Command::Sweep(a) => run_sweep(a, out),
        Command::ValidatePac(a) => run_validate(a, false, out),
        Command::ValidatePmac(a) => run_validate(a, true, out),
        Command::Ndim(a) => ndim(a, out),
        Command::Bounds(a) => bounds(a, out),
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Runs `f` on the named file, or on `out` when there is none.
fn emit(path: Option<&PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush()?;
        }
        None => f(out)?,
    }
    Ok(())
}

fn gnp_prob(n: usize, p: Option<f64>, avg_deg: Option<f64>) -> CliResult<f64> {
    match (p, avg_deg) {
        (Some(p), _) => Ok(p),
        (None, Some(d)) => Ok(edge_prob_for_avg_degree(n, d)?),
        (None, None) => Err(CliError::Usage("give an edge probability or --avg-deg".into())),
    }
}

fn load_network(g: &GraphArgs, seed: u64) -> CliResult<Arc<MultilayerNetwork>> {
    if let Some(path) = &g.graph {
        let net = load_edge_list(open(path)?).map_err(|e| in_file(path.display(), e))?;
        return Ok(Arc::new(net));
    }
    let (Some(n), Some(k)) = (g.n, g.k) else {
        return Err(CliError::Usage("give --graph, or --n and --k for a generated network".into()));
    };
    let p = gnp_prob(n, g.edge_prob, g.avg_deg)?;
    let net = generate_multi_gnp(n, k, p, &mut graph_rng(g.graph_seed.unwrap_or(seed)))?;
    Ok(Arc::new(net))
}

fn load_table(path: &Path, net: &MultilayerNetwork) -> CliResult<Vec<u32>> {
    load_threshold_table(open(path)?, net).map_err(|e| in_file(path.display(), e))
}

fn setting(s: &SystemArgs) -> CliResult<Setting> {
    let net = load_network(&s.graph, s.seed)?;
    let thresholds = s.thresholds.as_deref().map(|p| load_table(p, &net)).transpose()?;
    Ok(Setting {
        net,
        master: s.master.into(),
        thresholds,
    })
}

/// `all`, `random:SIGMA`, or a file of vertex ids (`#` starts a comment).
fn parse_unknown(spec: &str, n: usize) -> CliResult<UnknownSpec> {
    if spec == "all" {
        return Ok(UnknownSpec::All);
    }
    if let Some(s) = spec.strip_prefix("random:") {
        let sigma: usize = s
            .parse()
            .map_err(|_| CliError::Usage(format!("bad unknown-set size {s:?}")))?;
        if sigma > n {
            return Err(CliError::Usage(format!("cannot pick {sigma} unknown vertices out of {n}")));
        }
        return Ok(UnknownSpec::Random(sigma));
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError::Data(format!("{spec}: {e}")))?;
    let mut vs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        for tok in content.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| CliError::Data(format!("{spec}:{}: bad vertex {tok:?}", i + 1)))?;
            if v >= n {
                return Err(CliError::Data(format!("{spec}:{}: vertex {v} out of range (n = {n})", i + 1)));
            }
            vs.push(v);
        }
    }
    vs.sort_unstable();
    vs.dedup();
    Ok(UnknownSpec::Fixed(vs))
}

fn resolve_unknown(spec: &UnknownSpec, n: usize, seed: u64) -> Vec<usize> {
    match spec {
        UnknownSpec::All => (0..n).collect(),
        UnknownSpec::Fixed(vs) => vs.clone(),
        UnknownSpec::Random(s) => {
            let mut vs = sample(&mut substream(seed, 0), n, *s).into_vec();
            vs.sort_unstable();
            vs
        }
    }
}

fn thread_pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

fn gen(a: GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = gnp_prob(a.n, a.p, a.avg_deg)?;
    let net = generate_multi_gnp(a.n, a.k, p, &mut graph_rng(a.seed))?;
    emit(a.out.as_ref(), out, |w| net.write_edge_list(w))
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    let s = setting(&a.system)?;
    let (target, _) = s.problem(a.system.seed, &UnknownSpec::All)?;
    let n = s.net.n();
    let c0 = match &a.init {
        Some(bits) => {
            let c: Configuration = bits
                .parse()
                .map_err(|e| CliError::Usage(format!("--init: {e}")))?;
            if c.len() != n {
                return Err(CliError::Usage(format!("--init has {} bits, network has {n} vertices", c.len())));
            }
            c
        }
        None => BernoulliDistribution::new(a.p)?.sample(n, &mut substream(a.system.seed, 1)),
    };
    let states = target.trajectory(&c0, a.steps);
    emit(a.out.as_ref(), out, |w| {
        for c in &states {
            writeln!(w, "{c}")?;
        }
        Ok(())
    })
}

fn learn(a: LearnArgs, out: &mut dyn Write) -> CliResult<()> {
    let s = setting(&a.system)?;
    let seed = a.system.seed;
    let spec = parse_unknown(&a.unknown, s.net.n())?;
    let (target, problem) = s.problem(seed, &spec)?;
    let (learned, loss) = match &a.training {
        Some(path) => {
            if s.thresholds.is_none() && spec != UnknownSpec::All {
                return Err(CliError::Usage(
                    "--thresholds is needed for the known vertices of a training file".into(),
                ));
            }
            let training = load_training_set(open(path)?, Some(s.net.n())).map_err(|e| in_file(path.display(), e))?;
            let h = pac_learn(&problem, &training)?;
            eprintln!("empirical_risk={}", empirical_risk(&h, &training));
            (h, None)
        }
        None => {
            let training = s.training(&target, seed, a.p, a.train_size)?;
            let h = pac_learn(&problem, &training)?;
            eprintln!("empirical_risk={}", empirical_risk(&h, &training));
            let dist = BernoulliDistribution::new(a.p)?;
            let loss = estimate_true_error(&h, &target, &dist, a.eval_samples, &mut eval_rng(seed))?;
            (h, Some(loss))
        }
    };
    if let Some(loss) = loss {
        eprintln!("loss={loss}");
    }
    emit(a.out.as_ref(), out, |w| learned.write_thresholds(w))
}

fn run_sweep(a: SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let s = setting(&a.system)?;
    let n = s.net.n();
    let unknown = if a.unknown.is_empty() {
        vec![UnknownSpec::All]
    } else {
        a.unknown.iter().map(|u| parse_unknown(u, n)).collect::<CliResult<_>>()?
    };
    if a.train_size.is_empty() {
        return Err(CliError::Usage("give at least one --train-size".into()));
    }
    let plan = SweepPlan {
        unknown,
        ps: if a.p.is_empty() { vec![0.5] } else { a.p },
        train_sizes: a.train_size,
        trials: a.trials,
        eval_samples: a.eval_samples,
        seed: a.system.seed,
    };
    let cells = thread_pool(a.jobs)?.install(|| sweep(&s, &plan))?;
    emit(a.csv.as_ref(), out, |w| write_sweep_csv(w, &cells, plan.seed, s.net.k()))
}

fn run_validate(a: ValidateArgs, pmac: bool, out: &mut dyn Write) -> CliResult<()> {
    let guarantee = match (pmac, a.beta) {
        (true, Some(beta)) => Guarantee::Pmac { beta },
        (true, None) => return Err(CliError::Usage("validate-pmac needs --beta".into())),
        (false, None) => Guarantee::Pac,
        (false, Some(_)) => return Err(CliError::Usage("--beta applies to validate-pmac only".into())),
    };
    let s = setting(&a.system)?;
    let spec = parse_unknown(&a.unknown, s.net.n())?;
    let plan = ValidationPlan {
        guarantee,
        eps: a.eps,
        delta: a.delta,
        p: a.p,
        trials: a.trials,
        eval_samples: a.eval_samples,
        seed: a.system.seed,
    };
    let report = thread_pool(a.jobs)?.install(|| validate(&s, &spec, &plan))?;
    report.write_text(&mut *out)?;
    if let Guarantee::Pmac { beta } = guarantee {
        let q_pac = sample_size_pac(a.eps, a.delta, report.sigma, report.k)?;
        writeln!(out, "q_pac={q_pac}")?;
        writeln!(out, "q_times_sigma_beta={}", report.q as f64 * report.sigma as f64 * beta)?;
    }
    if let Some(path) = &a.csv {
        let mut w = create(path)?;
        report.write_csv(&mut w, plan.seed)?;
        w.flush()?;
    }
    Ok(())
}

fn ndim(a: NdimArgs, out: &mut dyn Write) -> CliResult<()> {
    let net = load_network(&a.graph, a.seed)?;
    let (n, k) = (net.n(), net.k());
    let unknown = resolve_unknown(&parse_unknown(&a.unknown, n)?, n, a.seed);
    let start = Instant::now();
    let (value, certified) = match a.method {
        Method::Dfs => {
            let layer = match (a.layer, k) {
                (Some(l), _) => l,
                (None, 1) => 0,
                (None, _) => return Err(CliError::Usage("dfs on a multilayer network needs --layer".into())),
            };
            let single = net.restrict_to_layer(layer)?;
            let r = dfs_canonical_set(&single, &unknown)?;
            let ok = is_canonical(&single, &r, &unknown)?.is_some();
            if let Some(p) = &a.cert {
                let mut w = create(p)?;
                ShatterCandidate::new(r.clone(), None)?.write(&mut w)?;
                w.flush()?;
            }
            (r.len(), ok)
        }
        Method::Pnn => {
            let pairs = pnn_certificate(&net, &unknown)?;
            let ok = q_set_check(&net, &unknown, &pairs);
            if let Some(p) = &a.cert {
                let mut w = create(p)?;
                for pair in &pairs {
                    writeln!(w, "{pair}")?;
                }
                w.flush()?;
            }
            (pairs.len(), ok)
        }
        Method::Oracle => {
            let table = match &a.thresholds {
                Some(p) => load_table(p, &net)?,
                None if unknown.len() == n => vec![0; n * k],
                None => return Err(CliError::Usage("oracle needs --thresholds unless every vertex is unknown".into())),
            };
            let problem = LearningProblem::new(net.clone(), a.master.into(), &unknown, &table)?;
            let r = match &a.candidate {
                Some(p) => load_candidate(open(p)?)
                    .map_err(|e| in_file(p.display(), e))?
                    .entries()
                    .to_vec(),
                None => {
                    let q = QSet::new(&net, &unknown, pnn_certificate(&net, &unknown)?)?;
                    shatterable_from_qset(&problem, &q)?.entries().to_vec()
                }
            };
            let limits = OracleLimits {
                max_entries: a.max_entries,
                max_vertices: a.max_vertices,
            };
            match shatter_witness(&problem, &r, limits)? {
                Some(w) => {
                    let ok = verify_witness(&problem, &w, limits)?;
                    if let Some(p) = &a.cert {
                        let mut f = create(p)?;
                        w.write(&mut f)?;
                        f.flush()?;
                    }
                    (r.len(), ok)
                }
                None => (0, false),
            }
        }
    };
    eprintln!("elapsed_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    let method = match a.method {
        Method::Dfs => "dfs",
        Method::Pnn => "pnn",
        Method::Oracle => "oracle",
    };
    emit(a.csv.as_ref(), out, |w| {
        writeln!(w, "{CSV_VERSION}")?;
        writeln!(w, "method,n,k,sigma,value,certified")?;
        writeln!(w, "{method},{n},{k},{},{value},{certified}", unknown.len())
    })
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "pac={}", sample_size_pac(a.eps, a.delta, a.sigma, a.k)?)?;
    if let Some(beta) = a.beta {
        writeln!(out, "pmac={}", sample_size_pmac(a.eps, a.delta, beta, a.sigma, a.k)?)?;
    }
    if let Some(davg) = a.davg {
        writeln!(out, "generic={}", sample_size_generic(a.eps, a.delta, a.sigma, a.k, davg)?)?;
    }
    Ok(())
}
