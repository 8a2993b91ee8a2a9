use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mkmesh::harness::{
    execute_plan, run_convergence, run_pde, write_spectrum, ExperimentKind, ExperimentPlan, PdeConfig, PdeOutcome,
    PdeRecord, PdeSystem,
};
use mkmesh::nodeset::{generate_nodes, read_nodes, write_nodes, Domain, NodeSet};
use mkmesh::respower::{
    combine, default_km, mk_combination, ray_curve, write_combination, write_curves, KmRule, Quadrature,
};
use mkmesh::solver::{
    assemble, spectrum, summarize, AdCase, OperatorSource, SolverOptions, TimestepRule, SPECTRUM_BUDGET,
};
use mkmesh::weights::{
    read_weights, scheme_stencils, scheme_weight_set, write_weights, KernelSlot, OperatorKind, Scheme,
};

#[derive(Parser)]
#[command(
    name = "mkmesh",
    version,
    about = "Multi-kernel meshless operators on scattered nodes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scattered node set
    GenNodes(GenNodes),
    /// Resolving-power ray curves of one weight set
    Respower(Respower),
    /// Per-node kernel blend coefficients
    Optimize(Optimize),
    /// Poisson problem on a periodic square or the unit disc
    SolvePoisson(SolvePoisson),
    /// Advection-diffusion of travelling waves
    SolveAd(SolveAd),
    /// Viscous Burgers with a sine initial condition
    SolveBurgers(SolveBurgers),
    /// Full spectrum of a global operator
    Eigen(Eigen),
    /// Error against the test function over several spacings
    Convergence(ConvergenceArgs),
    /// Execute a plan file
    Run(Run),
}

#[derive(Args)]
struct GenNodes {
    /// unit-square, square:L, centred:LX,LY or disc:R
    #[arg(long, default_value = "unit-square")]
    domain: String,
    #[arg(long)]
    spacing: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Sph,
    RbfFd,
    Labfm,
}

#[derive(Args, Clone)]
struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Labfm)]
    method: MethodArg,
    /// consistency order (RBF-FD, LABFM)
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// SPH smoothing length over spacing
    #[arg(long, default_value_t = 1.3)]
    h_over_s: f64,
    /// RBF-FD stencil size
    #[arg(long)]
    neighbours: Option<usize>,
    /// k_M as a fraction of the Nyquist wavenumber
    #[arg(long, conflicts_with = "km_abs")]
    km: Option<f64>,
    /// k_M as an absolute wavenumber
    #[arg(long)]
    km_abs: Option<f64>,
}

impl SchemeArgs {
    fn scheme(&self) -> Result<Scheme> {
        let s = match self.method {
            MethodArg::Sph => Scheme::sph(self.h_over_s),
            MethodArg::Labfm => Scheme::labfm(self.m),
            MethodArg::RbfFd => match self.neighbours {
                Some(n) => Scheme::rbffd(self.m, n),
                None => Scheme::rbffd_default(self.m)?,
            },
        };
        s.validate()?;
        Ok(s)
    }

    fn k_m(&self) -> Option<KmRule> {
        match (self.km, self.km_abs) {
            (Some(f), _) => Some(KmRule::Nyquist(f)),
            (_, Some(k)) => Some(KmRule::Absolute(k)),
            _ => None,
        }
    }

    fn k_m_or_default(&self, scheme: Scheme) -> KmRule {
        self.k_m().unwrap_or_else(|| default_km(scheme.method()))
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    Ddx,
    Ddy,
    Laplacian,
}

impl From<OperatorArg> for OperatorKind {
    fn from(o: OperatorArg) -> Self {
        match o {
            OperatorArg::Ddx => OperatorKind::Ddx,
            OperatorArg::Ddy => OperatorKind::Ddy,
            OperatorArg::Laplacian => OperatorKind::Laplacian,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Sk1,
    Sk2,
    Mk,
}

impl From<SourceArg> for OperatorSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Sk1 => OperatorSource::SkPrimary,
            SourceArg::Sk2 => OperatorSource::SkSecondary,
            SourceArg::Mk => OperatorSource::Mk,
        }
    }
}

#[derive(Args)]
struct Respower {
    /// node file
    #[arg(long)]
    nodes: PathBuf,
    /// weight dump to analyse instead of computing weights
    #[arg(long)]
    weights: Option<PathBuf>,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = OperatorArg::Ddx)]
    operator: OperatorArg,
    #[arg(long, value_enum, default_value_t = SourceArg::Sk1)]
    source: SourceArg,
    /// ray slopes k_y/k_x; a leading minus flips the sign of k_y
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,2")]
    slopes: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// also dump the analysed weights
    #[arg(long)]
    weights_out: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Optimize {
    #[arg(long)]
    nodes: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = OperatorArg::Ddx)]
    operator: OperatorArg,
    /// dump the combined weights
    #[arg(long)]
    weights_out: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    spacing: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PoissonDomain {
    Periodic,
    Disc,
}

#[derive(Args)]
struct SolvePoisson {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = PoissonDomain::Periodic)]
    domain: PoissonDomain,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// dense direct solve up to this many nodes
    #[arg(long, default_value_t = 0)]
    dense_limit: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    InverseRe,
    ViscousScaled,
}

#[derive(Args, Clone)]
struct TransientArgs {
    #[arg(long)]
    re: f64,
    #[arg(long)]
    end_time: f64,
    /// apply the hyperviscosity filter after each step
    #[arg(long)]
    filter: bool,
    #[arg(long, value_enum, default_value_t = RuleArg::ViscousScaled)]
    rule: RuleArg,
    /// record the error every this many steps
    #[arg(long, default_value_t = 1)]
    record_every: usize,
}

#[derive(Args)]
struct SolveAd {
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    transient: TransientArgs,
    /// 1: waves along x on the unit square, 2: along the diagonal of [0,√2]²
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    case: u8,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0")]
    advection: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    modes: usize,
}

#[derive(Args)]
struct SolveBurgers {
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    transient: TransientArgs,
    /// terms of the exact series
    #[arg(long, default_value_t = 40)]
    terms: usize,
}

#[derive(Args)]
struct Eigen {
    /// node file; generated from --spacing and --seed when absent
    #[arg(long)]
    nodes: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0 / 21.0)]
    spacing: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = OperatorArg::Ddx)]
    operator: OperatorArg,
    #[arg(long, value_enum, default_value_t = SourceArg::Sk1)]
    source: SourceArg,
    #[arg(long, default_value_t = SPECTRUM_BUDGET)]
    budget: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125")]
    spacings: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
    /// output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Run {
    /// TOML plan file
    #[arg(long)]
    plan: PathBuf,
    /// output directory; overrides the plan's own
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_domain(s: &str) -> Result<Domain> {
    let nums = |rest: &str| -> Result<Vec<f64>> {
        rest.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad number {t:?} in domain {s:?}"))
            })
            .collect()
    };
    let d = match s.split_once(':') {
        None if s == "unit-square" => Domain::unit_square(),
        Some(("square", r)) => match nums(r)?[..] {
            [l] => Domain::periodic_square(l),
            _ => bail!("square takes one length"),
        },
        Some(("centred", r)) => match nums(r)?[..] {
            [lx, ly] => Domain::centred_periodic(lx, ly),
            _ => bail!("centred takes LX,LY"),
        },
        Some(("disc", r)) => match nums(r)?[..] {
            [radius] => Domain::disc(radius),
            _ => bail!("disc takes one radius"),
        },
        _ => bail!("unknown domain {s:?}; expected unit-square, square:L, centred:LX,LY or disc:R"),
    };
    d.validate()?;
    Ok(d)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_nodes(path: &Path) -> Result<NodeSet> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(read_nodes(BufReader::new(f))?)
}

fn emit(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> mkmesh::Result<()>) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn gen_nodes(a: GenNodes) -> Result<()> {
    let nodes = generate_nodes(parse_domain(&a.domain)?, a.spacing, a.seed)?;
    emit(&a.out, |w| write_nodes(&nodes, w))?;
    eprintln!("{} nodes written to {}", nodes.len(), a.out.display());
    Ok(())
}

fn source_weight_set(
    nodes: &NodeSet,
    args: &SchemeArgs,
    op: OperatorKind,
    source: OperatorSource,
) -> Result<mkmesh::weights::WeightSet> {
    let scheme = args.scheme()?;
    let st = scheme_stencils(nodes, scheme)?;
    let ws = mkmesh::solver::source_weights(
        nodes,
        &st,
        source,
        &[op],
        args.k_m_or_default(scheme),
        Quadrature::default(),
    )?;
    Ok(ws.into_iter().next().expect("one operator requested"))
}

fn respower(a: Respower) -> Result<()> {
    let nodes = load_nodes(&a.nodes)?;
    let ws = match &a.weights {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            read_weights(BufReader::new(f), &nodes)?
        }
        None => source_weight_set(&nodes, &a.scheme, a.operator.into(), a.source.into())?,
    };
    let curves = a
        .slopes
        .iter()
        .map(|&l| ray_curve(&nodes, &ws, l.abs(), l.is_sign_negative(), a.samples))
        .collect::<mkmesh::Result<Vec<_>>>()?;
    emit(&a.out, |w| write_curves(&curves, w))?;
    if let Some(p) = &a.weights_out {
        emit(p, |w| write_weights(&ws, w))?;
    }
    Ok(())
}

fn optimize(a: Optimize) -> Result<()> {
    let nodes = load_nodes(&a.nodes)?;
    let scheme = a.scheme.scheme()?;
    let st = scheme_stencils(&nodes, scheme)?;
    let op: OperatorKind = a.operator.into();
    let w_hat = scheme_weight_set(&nodes, &st, KernelSlot::Primary, op)?;
    let w_bar = scheme_weight_set(&nodes, &st, KernelSlot::Secondary, op)?;
    let k_m = a.scheme.k_m_or_default(scheme).resolve(nodes.nyquist());
    let comb = mk_combination(&w_hat, &w_bar, k_m, Quadrature::default())?;
    emit(&a.out, |w| write_combination(&comb, w))?;
    if let Some(p) = &a.weights_out {
        let ws = combine(&w_hat, &w_bar, &comb.c_hat())?;
        emit(p, |w| write_weights(&ws, w))?;
    }
    let mean = comb.optima.iter().map(|o| o.c_hat).sum::<f64>() / comb.optima.len().max(1) as f64;
    eprintln!("k_M = {k_m:.4}, mean c_hat = {mean:.4}");
    Ok(())
}

fn rule(r: RuleArg) -> TimestepRule {
    match r {
        RuleArg::InverseRe => TimestepRule::InverseRe,
        RuleArg::ViscousScaled => TimestepRule::ViscousScaled,
    }
}

fn pde_config(system: PdeSystem, t: Option<&TransientArgs>) -> PdeConfig {
    let mut c = PdeConfig::new(system);
    if let Some(t) = t {
        c.re = t.re;
        c.end_time = t.end_time;
        c.filter = t.filter;
        c.rule = rule(t.rule);
        c.record_every = t.record_every;
    }
    c
}

fn solve(run: &RunArgs, config: PdeConfig, solver: SolverOptions) -> Result<()> {
    config.validate()?;
    let scheme = run.scheme.scheme()?;
    let k_m = run.scheme.k_m_or_default(scheme);
    let nodes = generate_nodes(config.domain(), run.spacing, run.seed)?;
    let go = |src| run_pde(&nodes, scheme, &config, src, k_m, Quadrature::default(), &solver);
    let record = PdeRecord {
        config: config.clone(),
        scheme,
        spacing: run.spacing,
        seed: run.seed,
        nodes: nodes.len(),
        positions: nodes.positions.clone(),
        sk: go(OperatorSource::SkPrimary)?,
        mk: go(OperatorSource::Mk)?,
    };
    fs::create_dir_all(&run.out)?;
    emit(&run.out.join("errors.csv"), |w| record.write_series(w))?;
    for src in [OperatorSource::SkPrimary, OperatorSource::Mk] {
        emit(&run.out.join(format!("field_{}.csv", src.name())), |w| {
            record.write_field(src, w)
        })?;
    }
    for (name, o) in [("sk1", &record.sk), ("mk", &record.mk)] {
        match o {
            PdeOutcome::Steady { l2, iterations, .. } => eprintln!("{name}: l2 = {l2:.4e} ({iterations} iterations)"),
            PdeOutcome::Transient(ts) => match ts.diverged_at {
                Some(t) => eprintln!("{name}: diverged at t = {t:.4}"),
                None => eprintln!(
                    "{name}: final l2 = {:.4e} (dt = {:.3e})",
                    ts.l2.last().copied().unwrap_or(f64::NAN),
                    ts.dt
                ),
            },
            PdeOutcome::Failed(e) => eprintln!("{name}: failed: {e}"),
        }
    }
    Ok(())
}

fn eigen(a: Eigen) -> Result<()> {
    let nodes = match &a.nodes {
        Some(p) => load_nodes(p)?,
        None => generate_nodes(Domain::unit_square(), a.spacing, a.seed)?,
    };
    let ws = source_weight_set(&nodes, &a.scheme, a.operator.into(), a.source.into())?;
    let eig = spectrum(&assemble(&nodes, &ws)?, a.budget)?;
    emit(&a.out, |w| write_spectrum(&eig, w))?;
    let s = summarize(&eig);
    eprintln!(
        "{} eigenvalues, max Re = {:.4e}, radius = {:.4e}",
        eig.len(),
        s.max_real,
        s.radius
    );
    Ok(())
}

fn convergence(a: ConvergenceArgs) -> Result<()> {
    let scheme = a.scheme.scheme()?;
    let mut plan = ExperimentPlan::new(ExperimentKind::Convergence, vec![scheme], a.spacings);
    plan.seeds = a.seeds;
    plan.k_m = a.scheme.k_m();
    let result = run_convergence(&plan)?;
    fs::create_dir_all(&a.out)?;
    emit(&a.out.join("convergence.csv"), |w| result.write_cells(w))?;
    emit(&a.out.join("convergence_slopes.csv"), |w| result.write_slopes(w))?;
    for f in &result.slopes {
        eprintln!(
            "{} {:?} {}: slope {:.3}",
            f.scheme.label(),
            f.quantity,
            f.source.name(),
            f.slope
        );
    }
    Ok(())
}

fn run(a: Run) -> Result<()> {
    let text = fs::read_to_string(&a.plan).with_context(|| format!("cannot read {}", a.plan.display()))?;
    let plan = ExperimentPlan::parse(&text)?;
    let dir = a
        .out
        .or_else(|| plan.output.clone())
        .unwrap_or_else(|| PathBuf::from("mkmesh-out"));
    let manifest = execute_plan(&plan, &dir)?;
    eprintln!(
        "{} artifacts in {} (plan {})",
        manifest.artifacts.len(),
        dir.display(),
        &manifest.config_hash[..12]
    );
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenNodes(a) => gen_nodes(a),
        Command::Respower(a) => respower(a),
        Command::Optimize(a) => optimize(a),
        Command::SolvePoisson(a) => {
            let system = match a.domain {
                PoissonDomain::Periodic => PdeSystem::PoissonPeriodic,
                PoissonDomain::Disc => PdeSystem::PoissonDisc,
            };
            let opts = SolverOptions {
                tolerance: a.tolerance,
                dense_limit: a.dense_limit,
                ..SolverOptions::default()
            };
            solve(&a.run, pde_config(system, None), opts)
        }
        Command::SolveAd(a) => {
            let mut c = pde_config(PdeSystem::AdvectionDiffusion, Some(&a.transient));
            c.case = if a.case == 1 { AdCase::Axis } else { AdCase::Diagonal };
            c.modes = a.modes;
            c.advection = match a.advection[..] {
                [x, y] => [x, y],
                _ => bail!("--advection takes two components"),
            };
            solve(&a.run, c, SolverOptions::default())
        }
        Command::SolveBurgers(a) => {
            let mut c = pde_config(PdeSystem::Burgers, Some(&a.transient));
            c.terms = a.terms;
            solve(&a.run, c, SolverOptions::default())
        }
        Command::Eigen(a) => eigen(a),
        Command::Convergence(a) => convergence(a),
        Command::Run(a) => run(a),
    }
}
