//! Two-phase experiment protocol. The deployment is chosen once from the
//! line-of-sight channel; reflection and power are then re-optimized at
//! that position for every fading realization.

use std::time::Instant;

use rayon::prelude::*;

use irsplan_core::ao::{ao_from_start, user_ordering, AoConfig, AoProblem, SolutionBundle};
use irsplan_core::channel::ChannelRealization;
use irsplan_core::geometry::{NetworkGeometry, Point3};
use irsplan_core::linalg::CVector;
use irsplan_core::polyblock::{exhaustive_driver, polyblock_maximize, CandidateBound, MoInstance};
use irsplan_core::rates::{DecodingOrder, Scheme};
use irsplan_core::rng::realization_seed;

use crate::config::{ConfigError, ExperimentConfig, Solver, SweepParam};
use crate::output::ResultRecord;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver error: {0}")]
    Solver(#[from] irsplan_core::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<ResultRecord>,
    /// Deployment chosen in the first phase.
    pub deployment: Point3,
    /// Records, plus the selected deployment run, that hit an iteration cap.
    pub nonconverged: usize,
}

struct Setup {
    cfg: ExperimentConfig,
    geometry: NetworkGeometry,
    model: irsplan_core::channel::ChannelModel,
    scheme: Scheme,
}

impl Setup {
    fn new(cfg: &ExperimentConfig) -> Result<Self, ExperimentError> {
        cfg.validate()?;
        Ok(Self {
            cfg: cfg.clone(),
            geometry: cfg.network()?,
            model: cfg.channel_model()?,
            scheme: cfg.experiment.scheme.into(),
        })
    }

    fn problem<'a>(&'a self, channel: &'a ChannelRealization) -> AoProblem<'a> {
        AoProblem {
            geometry: &self.geometry,
            channel,
            weights: &self.cfg.experiment.weights,
            p_max: self.cfg.p_max(),
            sigma2: self.cfg.sigma2(),
        }
    }

    fn realization(&self, index: usize) -> ChannelRealization {
        let seed = realization_seed(self.cfg.experiment.seed, index as u64);
        ChannelRealization::draw(self.model, self.geometry.num_users(), seed)
    }

    fn order_at(&self, s: Point3) -> DecodingOrder {
        self.cfg
            .ao_config(0)
            .order
            .unwrap_or_else(|| user_ordering(&self.cfg.experiment.weights, s, &self.geometry.users))
    }

    fn rows_at(&self, channel: &ChannelRealization, s: Point3) -> irsplan_core::Result<Vec<CVector>> {
        Ok(channel.cascaded(&self.geometry, s)?.rows())
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, ExperimentError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?)
}

/// Best of all starts; ties go to the lower start index.
fn best_of_starts(setup: &Setup, channel: &ChannelRealization, cfg: &AoConfig) -> irsplan_core::Result<Vec<SolutionBundle>> {
    cfg.validate()?;
    let prob = setup.problem(channel);
    (0..cfg.starts.len())
        .into_par_iter()
        .map(|n| ao_from_start(&prob, setup.scheme, cfg, n))
        .collect()
}

fn pick_best(runs: &[SolutionBundle]) -> &SolutionBundle {
    let mut best = &runs[0];
    for r in &runs[1..] {
        if r.wsr > best.wsr {
            best = r;
        }
    }
    best
}

/// First phase: IRS position from the line-of-sight channel.
pub fn deploy(cfg: &ExperimentConfig) -> Result<(Point3, usize), ExperimentError> {
    let setup = Setup::new(cfg)?;
    let p = pool(cfg.experiment.workers)?;
    p.install(|| deploy_with(&setup))
}

fn deploy_with(setup: &Setup) -> Result<(Point3, usize), ExperimentError> {
    let los = ChannelRealization::los(setup.model);
    match setup.cfg.experiment.solver {
        Solver::Ao | Solver::MoBound => {
            let runs = best_of_starts(setup, &los, &setup.cfg.ao_config(setup.cfg.experiment.seed))?;
            let best = pick_best(&runs);
            Ok((best.s, usize::from(!best.converged)))
        }
        Solver::Exhaustive => {
            let best = exhaustive_candidates(setup, &los)?.0;
            Ok((best.position, 0))
        }
    }
}

fn exhaustive_candidates(
    setup: &Setup,
    channel: &ChannelRealization,
) -> Result<(CandidateBound, Vec<CandidateBound>), ExperimentError> {
    let positions = setup.geometry.region.x_grid(setup.cfg.mo.grid_step);
    let res = exhaustive_driver(
        &positions,
        setup.scheme,
        &setup.cfg.experiment.weights,
        setup.cfg.p_max(),
        setup.cfg.sigma2(),
        |s| setup.rows_at(channel, s),
        &setup.cfg.polyblock_options(),
    )?;
    Ok((res.best, res.candidates))
}

fn reflections_of(bundle: &SolutionBundle) -> Vec<Vec<[f64; 2]>> {
    bundle
        .reflections
        .iter()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn record_from_bundle(setup: &Setup, index: usize, b: &SolutionBundle, wall_ms: f64) -> ResultRecord {
    ResultRecord {
        scheme: setup.scheme.name().into(),
        solver: setup.cfg.experiment.solver.name().into(),
        m: setup.cfg.channel.elements,
        p_max_dbm: setup.cfg.experiment.p_max_dbm,
        realization: index,
        wsr: b.wsr,
        rates: b.rates.clone(),
        s: b.s.to_array(),
        iterations: b.iterations,
        wall_ms,
        power: b.power.clone(),
        order: b.order.sequence(),
        reflections: reflections_of(b),
        converged: b.converged,
        upper_bound: None,
    }
}

/// Outer-approximation bound at `s`. NOMA enumerates every order when
/// `all_orders` is set.
fn bound_record(
    setup: &Setup,
    channel: &ChannelRealization,
    s: Point3,
    index: usize,
    all_orders: bool,
) -> irsplan_core::Result<ResultRecord> {
    let k = setup.geometry.num_users();
    let rows = setup.rows_at(channel, s)?;
    let orders = match setup.scheme {
        Scheme::Noma if all_orders => DecodingOrder::all(k),
        _ => vec![setup.order_at(s)],
    };
    let mut best: Option<(irsplan_core::polyblock::PolyblockResult, DecodingOrder)> = None;
    for order in orders {
        let inst = MoInstance::new(
            rows.clone(),
            setup.cfg.experiment.weights.clone(),
            setup.cfg.p_max(),
            setup.cfg.sigma2(),
            setup.scheme,
            order.clone(),
        )?;
        let r = polyblock_maximize(&inst, &setup.cfg.polyblock_options())?;
        if best.as_ref().map_or(true, |(b, _)| r.upper_bound > b.upper_bound) {
            best = Some((r, order));
        }
    }
    let (r, order) = best.expect("at least one order");
    let share = if setup.scheme == Scheme::Fdma { k as f64 } else { 1.0 };
    Ok(ResultRecord {
        scheme: setup.scheme.name().into(),
        solver: setup.cfg.experiment.solver.name().into(),
        m: setup.cfg.channel.elements,
        p_max_dbm: setup.cfg.experiment.p_max_dbm,
        realization: index,
        wsr: r.upper_bound,
        rates: r.gamma_star.iter().map(|g| g.log2() / share).collect(),
        s: s.to_array(),
        iterations: r.iterations,
        wall_ms: 0.0,
        power: r.witness.as_ref().map(|w| w.power.clone()).unwrap_or_default(),
        order: order.sequence(),
        reflections: Vec::new(),
        converged: r.converged,
        upper_bound: Some(r.upper_bound),
    })
}

fn online_record(setup: &Setup, s: Point3, index: usize) -> irsplan_core::Result<ResultRecord> {
    let start = Instant::now();
    let channel = setup.realization(index);
    let seed = realization_seed(setup.cfg.experiment.seed, index as u64);
    let fixed = AoConfig {
        starts: vec![s],
        delta: 0.0,
        ..setup.cfg.ao_config(seed)
    };
    let mut rec = match (setup.cfg.experiment.solver, setup.scheme) {
        (Solver::Ao, _) | (_, Scheme::Tdma) => {
            let b = ao_from_start(&setup.problem(&channel), setup.scheme, &fixed, 0)?;
            record_from_bundle(setup, index, &b, 0.0)
        }
        (solver, _) => bound_record(setup, &channel, s, index, solver == Solver::Exhaustive)?,
    };
    if setup.cfg.experiment.timing {
        rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    Ok(rec)
}

/// Runs both phases. Realizations are independent and run on the
/// configured number of workers; records come back in realization order.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let setup = Setup::new(cfg)?;
    let p = pool(cfg.experiment.workers)?;
    p.install(|| {
        let (s, mut nonconverged) = deploy_with(&setup)?;
        let records = (0..cfg.experiment.realizations)
            .into_par_iter()
            .map(|r| online_record(&setup, s, r))
            .collect::<irsplan_core::Result<Vec<_>>>()?;
        nonconverged += records.iter().filter(|r| !r.converged).count();
        Ok(RunOutput {
            records,
            deployment: s,
            nonconverged,
        })
    })
}

/// One run per sweep value, concatenated in sweep order.
pub fn sweep(cfg: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<RunOutput, ExperimentError> {
    if values.is_empty() {
        return Err(ConfigError::Invalid {
            field: "sweep.values".into(),
            message: "empty sweep".into(),
        }
        .into());
    }
    let mut out = RunOutput {
        records: Vec::new(),
        deployment: Point3::new(f64::NAN, f64::NAN, f64::NAN),
        nonconverged: 0,
    };
    for &v in values {
        let r = run(&cfg.with_param(param, v)?)?;
        out.records.extend(r.records);
        out.deployment = r.deployment;
        out.nonconverged += r.nonconverged;
    }
    Ok(out)
}

/// Outer-approximation bounds over the candidate grid on the line-of-sight
/// channel, best first.
pub fn bound(cfg: &ExperimentConfig) -> Result<Vec<CandidateBound>, ExperimentError> {
    let setup = Setup::new(cfg)?;
    let los = ChannelRealization::los(setup.model);
    let (best, mut all) = exhaustive_candidates(&setup, &los)?;
    all.retain(|c| c != &best);
    all.insert(0, best);
    Ok(all)
}

/// Mean weighted sum rate of a set of records.
pub fn mean_wsr(records: &[ResultRecord]) -> f64 {
    records.iter().map(|r| r.wsr).sum::<f64>() / records.len().max(1) as f64
}
