//! Alternating optimization of power, reflection and deployment.
//!
//! Each outer iteration runs a power update, a reflection update and a
//! local deployment update. A step is kept only if the true weighted sum
//! rate, recomputed from scratch, does not drop, so every trace is
//! non-decreasing. Internally channels are scaled by `sqrt(P / sigma^2)`,
//! which makes the noise power and the power budget both one.

pub mod deployment;
pub mod power;
pub mod reflection;

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;
use rand_core::RngCore;

use crate::channel::ChannelRealization;
use crate::convex::BarrierOptions;
use crate::error::{Error, Result};
use crate::geometry::{NetworkGeometry, Point3};
use crate::linalg::{row_gain, CVector};
use crate::rates::{
    channel_order_holds, fdma_rates_from_gains, noma_rates_from_gains, tdma_closed_form, validate_noma, wsr,
    DecodingOrder, Scheme,
};
use crate::rng::sub_rng;
use crate::srocr::SrocrOptions;
#[allow(unused_imports)]
use num_traits::Float;

pub use deployment::{deployment_step, DeploymentInput, DeploymentStep, OrderPair, RateTerm};
pub use power::{power_step_fdma, power_step_noma, tails};
pub use reflection::{reflection_step_fdma, reflection_step_noma, ReflectionStep};

/// Tolerance of the decoding-order checks on intermediate iterates.
pub const ORDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AoConfig {
    /// Radius of the local deployment region in meters.
    pub delta: f64,
    /// Largest allowed `delta / y_s`.
    pub eps_max: f64,
    pub starts: Vec<Point3>,
    /// Stop once the fractional increase of an outer iteration is below this.
    pub xi: f64,
    pub max_iters: usize,
    pub srocr: SrocrOptions,
    pub barrier: BarrierOptions,
    /// Gaussian randomization draws when rank-one tightening stalls.
    pub samples: usize,
    pub seed: u64,
    /// Decoding order to use instead of the heuristic.
    pub order: Option<DecodingOrder>,
    /// Keep the initial reflection fixed.
    pub freeze_reflection: bool,
}

impl Default for AoConfig {
    fn default() -> Self {
        Self {
            delta: 0.05,
            eps_max: 0.01,
            starts: (0..4).map(|n| Point3::new(30.0 + 5.0 * n as f64, 5.0, 5.0)).collect(),
            xi: 1e-3,
            max_iters: 50,
            srocr: SrocrOptions::default(),
            barrier: BarrierOptions::default(),
            samples: 1000,
            seed: 0,
            order: None,
            freeze_reflection: false,
        }
    }
}

impl AoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts.is_empty() {
            return Err(Error::InvalidInput("at least one start is required".into()));
        }
        if !(self.delta >= 0.0) || !(self.xi >= 0.0) || self.max_iters == 0 {
            return Err(Error::InvalidInput(format!(
                "delta {} and xi {} must be non-negative and max_iters positive",
                self.delta, self.xi
            )));
        }
        for s in &self.starts {
            if self.delta > self.eps_max * s.y.abs() * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "delta {} exceeds eps_max * y_s = {} at start {:?}",
                    self.delta,
                    self.eps_max * s.y.abs(),
                    s
                )));
            }
        }
        Ok(())
    }
}

/// A single optimization problem: IRS geometry, one channel realization,
/// rate weights and linear power budget and noise power.
#[derive(Debug, Clone, Copy)]
pub struct AoProblem<'a> {
    pub geometry: &'a NetworkGeometry,
    pub channel: &'a ChannelRealization,
    pub weights: &'a [f64],
    pub p_max: f64,
    pub sigma2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBundle {
    pub scheme: Scheme,
    pub s: Point3,
    /// One reflection, or one per slot for TDMA.
    pub reflections: Vec<CVector>,
    /// Transmit power per user in watts.
    pub power: Vec<f64>,
    pub order: DecodingOrder,
    pub rates: Vec<f64>,
    pub wsr: f64,
    /// Weighted sum rate after initialization and after each outer iteration.
    pub trace: Vec<f64>,
    /// IRS position after initialization and after each outer iteration.
    pub path: Vec<Point3>,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the start this solution came from.
    pub start: usize,
}

/// Decoding order from rate weights: a user with a larger weight is
/// decoded later. Equal weights fall back to distance from `s0`, nearer
/// users being decoded later, then to the user index.
pub fn user_ordering(weights: &[f64], s0: Point3, users: &[Point3]) -> DecodingOrder {
    let mut seq: Vec<usize> = (0..weights.len()).collect();
    seq.sort_by(|&a, &b| {
        weights[a]
            .total_cmp(&weights[b])
            .then_with(|| s0.distance(users[b]).total_cmp(&s0.distance(users[a])))
    });
    DecodingOrder::from_sequence(&seq).expect("sorted indices form a permutation")
}

/// Draws uniform phases until the channel ordering holds, up to 1000 draws.
/// Returns the draw with the smallest violation if none satisfies it.
pub fn random_feasible_reflection<R: RngCore>(
    rows: &[CVector],
    order: Option<&DecodingOrder>,
    rng: &mut R,
) -> CVector {
    let m = rows.first().map_or(0, |q| q.len());
    let mut best: Option<(f64, CVector)> = None;
    for _ in 0..1000 {
        let v = CVector::from_fn(m, |_, _| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            Complex64::from_polar(1.0, TAU * u)
        });
        let Some(order) = order else { return v };
        let c: Vec<f64> = rows.iter().map(|q| row_gain(q, &v)).collect();
        if channel_order_holds(&c, order, ORDER_TOL) {
            return v;
        }
        let seq = order.sequence();
        let violation: f64 = seq.windows(2).map(|w| (c[w[0]] - c[w[1]]).max(0.0)).sum();
        if best.as_ref().map_or(true, |(b, _)| violation < *b) {
            best = Some((violation, v));
        }
    }
    best.map(|(_, v)| v).unwrap_or_else(|| CVector::zeros(m))
}

/// Rates and weighted sum rate of a state in scaled units. An infeasible
/// NOMA state has value minus infinity.
pub fn evaluate(
    scheme: Scheme,
    rows: &[CVector],
    reflections: &[CVector],
    power: &[f64],
    order: &DecodingOrder,
    weights: &[f64],
) -> (Vec<f64>, f64) {
    match scheme {
        Scheme::Noma => {
            let c: Vec<f64> = rows.iter().map(|q| row_gain(q, &reflections[0])).collect();
            let r = noma_rates_from_gains(&c, power, order, 1.0);
            let val = if validate_noma(&c, power, order, ORDER_TOL).is_ok() {
                wsr(weights, &r)
            } else {
                f64::NEG_INFINITY
            };
            (r, val)
        }
        Scheme::Fdma => {
            let c: Vec<f64> = rows.iter().map(|q| row_gain(q, &reflections[0])).collect();
            let r = fdma_rates_from_gains(&c, power, 1.0);
            let val = wsr(weights, &r);
            (r, val)
        }
        Scheme::Tdma => {
            let kf = rows.len() as f64;
            let r: Vec<f64> = rows
                .iter()
                .zip(reflections.iter())
                .map(|(q, v)| (1.0 + row_gain(q, v)).log2() / kf)
                .collect();
            let val = wsr(weights, &r);
            (r, val)
        }
    }
}

struct State {
    s: Point3,
    rows: Vec<CVector>,
    /// Rows without path loss at `s`, same scaling otherwise.
    unit_rows: Vec<CVector>,
    reflections: Vec<CVector>,
    power: Vec<f64>,
    value: f64,
}

fn rows_at(prob: &AoProblem, s: Point3) -> Result<(Vec<CVector>, Vec<CVector>)> {
    let ch = prob.channel.cascaded(prob.geometry, s)?;
    let scale = prob.p_max / prob.sigma2;
    let unit = ch
        .normalized
        .iter()
        .map(|q| q * Complex64::new(scale.sqrt(), 0.0))
        .collect();
    Ok((ch.scaled_rows(scale), unit))
}

fn tdma_reflections(rows: &[CVector]) -> Vec<CVector> {
    rows.iter().map(|q| tdma_closed_form(q).0).collect()
}

/// Runs the alternating optimization from one start.
pub fn ao_from_start(prob: &AoProblem, scheme: Scheme, cfg: &AoConfig, start: usize) -> Result<SolutionBundle> {
    let geo = prob.geometry;
    let k = geo.num_users();
    if prob.weights.len() != k {
        return Err(Error::DimensionMismatch(format!("{} weights for {} users", prob.weights.len(), k)));
    }
    if !(prob.p_max > 0.0) || !(prob.sigma2 > 0.0) {
        return Err(Error::InvalidInput("power budget and noise power must be positive".into()));
    }
    let s0 = *cfg
        .starts
        .get(start)
        .ok_or_else(|| Error::InvalidInput(format!("start {start} out of range")))?;
    let s0 = geo.region.clamp(s0);
    let weights = prob.weights;
    let order = cfg.order.clone().unwrap_or_else(|| user_ordering(weights, s0, &geo.users));
    if order.len() != k {
        return Err(Error::DimensionMismatch(format!("order of {} users for {} users", order.len(), k)));
    }
    let mut rng = sub_rng(cfg.seed, start as u64);
    let (rows, unit_rows) = rows_at(prob, s0)?;
    let (reflections, power) = match scheme {
        Scheme::Tdma => (tdma_reflections(&rows), alloc::vec![1.0; k]),
        Scheme::Noma => (
            alloc::vec![random_feasible_reflection(&rows, Some(&order), &mut rng)],
            alloc::vec![1.0 / k as f64; k],
        ),
        Scheme::Fdma => (
            alloc::vec![random_feasible_reflection(&rows, None, &mut rng)],
            alloc::vec![1.0 / k as f64; k],
        ),
    };
    let value = evaluate(scheme, &rows, &reflections, &power, &order, weights).1;
    let mut st = State {
        s: s0,
        rows,
        unit_rows,
        reflections,
        power,
        value,
    };
    let mut trace = alloc::vec![st.value];
    let mut path = alloc::vec![st.s];
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.max_iters {
        iterations += 1;
        let before = st.value;
        let s_before = st.s;
        if scheme != Scheme::Tdma {
            power_update(&mut st, scheme, &order, weights, cfg);
            if !cfg.freeze_reflection {
                reflection_update(&mut st, scheme, &order, weights, cfg, &mut rng);
            }
        }
        deployment_update(&mut st, prob, scheme, &order, cfg, &mut rng)?;
        trace.push(st.value);
        path.push(st.s);
        let gain = st.value - before;
        // a Delta-limited move changes the rate by little even far from a
        // stationary point, so the position must have settled as well
        let settled = st.s.distance(s_before) < 0.5 * cfg.delta || cfg.delta == 0.0;
        if settled && before.is_finite() && gain <= cfg.xi * before.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    let (rates, value) = evaluate(scheme, &st.rows, &st.reflections, &st.power, &order, weights);
    Ok(SolutionBundle {
        scheme,
        s: st.s,
        reflections: st.reflections,
        power: st.power.iter().map(|p| p * prob.p_max).collect(),
        order,
        rates,
        wsr: value,
        trace,
        path,
        iterations,
        converged,
        start,
    })
}

fn power_update(st: &mut State, scheme: Scheme, order: &DecodingOrder, weights: &[f64], cfg: &AoConfig) {
    let c: Vec<f64> = st.rows.iter().map(|q| row_gain(q, &st.reflections[0])).collect();
    let proposal = match scheme {
        Scheme::Noma => power_step_noma(&c, order, weights, &st.power, &cfg.barrier),
        _ => power_step_fdma(&c, weights, &cfg.barrier),
    };
    if let Ok(p) = proposal {
        let val = evaluate(scheme, &st.rows, &st.reflections, &p, order, weights).1;
        if val >= st.value {
            st.power = p;
            st.value = val;
        }
    }
}

fn reflection_update<R: RngCore>(
    st: &mut State,
    scheme: Scheme,
    order: &DecodingOrder,
    weights: &[f64],
    cfg: &AoConfig,
    rng: &mut R,
) {
    let v_prev = &st.reflections[0];
    let step = match scheme {
        Scheme::Noma => {
            reflection_step_noma(&st.rows, &st.power, order, weights, v_prev, &cfg.srocr, cfg.samples, rng)
        }
        _ => reflection_step_fdma(&st.rows, &st.power, weights, v_prev.len(), &cfg.srocr, cfg.samples, rng),
    };
    if let Ok(step) = step {
        let refl = alloc::vec![step.v];
        let val = evaluate(scheme, &st.rows, &refl, &st.power, order, weights).1;
        if val >= st.value {
            st.reflections = refl;
            st.value = val;
        }
    }
}

fn deployment_update<R: RngCore>(
    st: &mut State,
    prob: &AoProblem,
    scheme: Scheme,
    order: &DecodingOrder,
    cfg: &AoConfig,
    rng: &mut R,
) -> Result<()> {
    if cfg.delta <= 0.0 {
        return Ok(());
    }
    let k = st.rows.len();
    let kf = k as f64;
    let w = prob.weights;
    let mut rates = Vec::with_capacity(k);
    let mut ordering = Vec::new();
    match scheme {
        Scheme::Noma => {
            let c: Vec<f64> = st.rows.iter().map(|q| row_gain(q, &st.reflections[0])).collect();
            for u in 0..k {
                let i = crate::rates::noma_interference(&st.power, order, u);
                rates.push(RateTerm {
                    weight: w[u],
                    a: c[u] * st.power[u],
                    b: c[u] * i,
                });
            }
            let cbar: Vec<f64> = st.unit_rows.iter().map(|q| row_gain(q, &st.reflections[0])).collect();
            for pair in order.sequence().windows(2) {
                let (weak, strong) = (pair[0], pair[1]);
                ordering.push(OrderPair {
                    weak,
                    strong,
                    ratio: cbar[weak] / cbar[strong],
                });
            }
        }
        Scheme::Fdma => {
            for u in 0..k {
                let c = row_gain(&st.rows[u], &st.reflections[0]);
                rates.push(RateTerm {
                    weight: w[u] / kf,
                    a: kf * c * st.power[u],
                    b: 0.0,
                });
            }
        }
        Scheme::Tdma => {
            for u in 0..k {
                rates.push(RateTerm {
                    weight: w[u] / kf,
                    a: row_gain(&st.rows[u], &st.reflections[u]),
                    b: 0.0,
                });
            }
        }
    }
    let input = DeploymentInput {
        geometry: prob.geometry,
        path_loss: prob.channel.model.path_loss,
        s_prev: st.s,
        delta: cfg.delta,
        rates,
        ordering,
    };
    let Ok(Some(step)) = deployment_step(&input, &cfg.barrier) else {
        return Ok(());
    };
    let Ok((rows, unit_rows)) = rows_at(prob, step.s) else {
        return Ok(());
    };
    let mut moved = State {
        s: step.s,
        reflections: if scheme == Scheme::Tdma {
            tdma_reflections(&rows)
        } else {
            st.reflections.clone()
        },
        rows,
        unit_rows,
        power: st.power.clone(),
        value: f64::NEG_INFINITY,
    };
    moved.value = evaluate(scheme, &moved.rows, &moved.reflections, &moved.power, order, w).1;
    if moved.value < st.value && scheme != Scheme::Tdma && !cfg.freeze_reflection {
        // the frozen gains were too optimistic; redesign the reflection at
        // the new point before giving up on the move
        reflection_update(&mut moved, scheme, order, w, cfg, rng);
    }
    if moved.value >= st.value {
        *st = moved;
    }
    Ok(())
}

/// Runs every start and returns the best solution.
pub fn ao_run(prob: &AoProblem, scheme: Scheme, cfg: &AoConfig) -> Result<SolutionBundle> {
    cfg.validate()?;
    let mut best: Option<SolutionBundle> = None;
    for n in 0..cfg.starts.len() {
        let sol = ao_from_start(prob, scheme, cfg, n)?;
        if best.as_ref().map_or(true, |b| sol.wsr > b.wsr) {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one start"))
}

pub fn ao_noma(prob: &AoProblem, cfg: &AoConfig) -> Result<SolutionBundle> {
    ao_run(prob, Scheme::Noma, cfg)
}

pub fn ao_fdma(prob: &AoProblem, cfg: &AoConfig) -> Result<SolutionBundle> {
    ao_run(prob, Scheme::Fdma, cfg)
}

pub fn ao_tdma(prob: &AoProblem, cfg: &AoConfig) -> Result<SolutionBundle> {
    ao_run(prob, Scheme::Tdma, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ArrayShape, ChannelModel};
    use crate::geometry::{PathLossModel, Region};

    fn geometry(k: usize) -> NetworkGeometry {
        NetworkGeometry::new(
            Point3::new(0.0, 0.0, 5.0),
            (0..k).map(|i| Point3::new(30.0 + 5.0 * i as f64, 0.0, 1.5)).collect(),
            Region::new(Point3::new(30.0, 5.0, 5.0), Point3::new(45.0, 5.0, 5.0)).unwrap(),
        )
        .unwrap()
    }

    fn model(m: usize, los: bool) -> ChannelModel {
        ChannelModel {
            array: ArrayShape::new(m, if m % 2 == 0 { 2 } else { 1 }, 0.5).unwrap(),
            path_loss: PathLossModel::new(1e-3, 2.2, 2.2),
            rician_ai: 2.0,
            rician_iu: 2.0,
            los_only: los,
        }
    }

    fn problem<'a>(geo: &'a NetworkGeometry, ch: &'a ChannelRealization, w: &'a [f64]) -> AoProblem<'a> {
        AoProblem {
            geometry: geo,
            channel: ch,
            weights: w,
            p_max: 1.0,
            sigma2: 1e-12,
        }
    }

    fn cfg(starts: Vec<Point3>, delta: f64) -> AoConfig {
        AoConfig {
            delta,
            starts,
            samples: 200,
            ..AoConfig::default()
        }
    }

    #[test]
    fn ordering_follows_weights_then_distance() {
        let users: Vec<Point3> = (0..4).map(|i| Point3::new(30.0 + 5.0 * i as f64, 0.0, 1.5)).collect();
        let s0 = Point3::new(35.0, 5.0, 5.0);
        assert_eq!(user_ordering(&[0.1, 0.2, 0.3, 0.4], s0, &users), DecodingOrder::identity(4));
        let two = [Point3::new(40.0, 0.0, 0.0), Point3::new(38.0, 0.0, 0.0)];
        let o = user_ordering(&[0.5, 0.5], Point3::new(35.0, 0.0, 0.0), &two);
        assert!(o.rank(1) > o.rank(0));
        let same = [Point3::new(0.0, 1.0, 0.0), Point3::new(0.0, -1.0, 0.0)];
        assert_eq!(user_ordering(&[1.0, 1.0], Point3::new(0.0, 0.0, 0.0), &same), DecodingOrder::identity(2));
    }

    #[test]
    fn tdma_at_fixed_position_is_closed_form() {
        let geo = geometry(2);
        let ch = ChannelRealization::draw(model(4, false), 2, 3);
        let w = [0.4, 0.6];
        let s = Point3::new(37.0, 5.0, 5.0);
        let sol = ao_tdma(&problem(&geo, &ch, &w), &cfg(alloc::vec![s], 0.0)).unwrap();
        let rows = ch.cascaded(&geo, s).unwrap().rows();
        let expect = crate::polyblock::tdma_optimum(&rows, &w, 1.0, 1e-12);
        assert!((sol.wsr - expect).abs() < 1e-12 * expect.max(1.0));
        assert_eq!(sol.s, s);
    }

    #[test]
    fn single_user_reaches_alignment() {
        let geo = geometry(1);
        let ch = ChannelRealization::draw(model(4, false), 1, 8);
        let s = Point3::new(33.0, 5.0, 5.0);
        let rows = ch.cascaded(&geo, s).unwrap().scaled_rows(1e12);
        let target = (1.0 + tdma_closed_form(&rows[0]).1).log2();
        for scheme in [Scheme::Noma, Scheme::Fdma] {
            let sol = ao_run(&problem(&geo, &ch, &[1.0]), scheme, &cfg(alloc::vec![s], 0.0)).unwrap();
            assert!(sol.iterations <= 2, "{scheme:?} took {}", sol.iterations);
            assert!((sol.wsr - target).abs() < 1e-3 * target, "{} vs {}", sol.wsr, target);
        }
    }

    #[test]
    fn traces_are_monotone_and_moves_bounded() {
        let geo = geometry(2);
        let w = [0.3, 0.7];
        let delta = 0.05;
        for (seed, scheme) in [(1, Scheme::Noma), (2, Scheme::Fdma), (3, Scheme::Tdma)] {
            let ch = ChannelRealization::draw(model(4, seed == 3), 2, seed);
            let c = cfg(alloc::vec![Point3::new(36.0, 5.0, 5.0)], delta);
            let sol = ao_run(&problem(&geo, &ch, &w), scheme, &c).unwrap();
            assert!(sol.trace.windows(2).all(|t| t[1] >= t[0] - 1e-12), "{scheme:?} {:?}", sol.trace);
            assert!(sol.wsr.is_finite());
            for p in sol.path.windows(2) {
                assert!(p[1].distance(p[0]) <= delta * (1.0 + 1e-9));
                assert!(geo.region.contains(p[1], 1e-12));
            }
            if scheme == Scheme::Noma {
                let rows = ch.cascaded(&geo, sol.s).unwrap().rows();
                let g = crate::rates::gains(&rows, &sol.reflections[0]);
                assert!(validate_noma(&g, &sol.power, &sol.order, ORDER_TOL).is_ok());
            }
        }
    }

    #[test]
    fn frozen_reflection_only_updates_power() {
        let geo = geometry(2);
        let ch = ChannelRealization::draw(model(4, false), 2, 11);
        let mut c = cfg(alloc::vec![Point3::new(40.0, 5.0, 5.0)], 0.0);
        c.freeze_reflection = true;
        let sol = ao_noma(&problem(&geo, &ch, &[0.5, 0.5]), &c).unwrap();
        let v0 = {
            let rows = rows_at(&problem(&geo, &ch, &[0.5, 0.5]), sol.s).unwrap().0;
            let order = user_ordering(&[0.5, 0.5], sol.s, &geo.users);
            random_feasible_reflection(&rows, Some(&order), &mut sub_rng(c.seed, 0))
        };
        assert_eq!(sol.reflections[0], v0);
        assert!(sol.trace.windows(2).all(|t| t[1] >= t[0]));
    }

    #[test]
    fn identical_users_share_fdma_power() {
        let geo = NetworkGeometry::new(
            Point3::new(0.0, 0.0, 5.0),
            alloc::vec![Point3::new(35.0, 0.0, 1.5); 2],
            Region::new(Point3::new(30.0, 5.0, 5.0), Point3::new(45.0, 5.0, 5.0)).unwrap(),
        )
        .unwrap();
        let ch = ChannelRealization::los(model(4, true));
        let sol = ao_fdma(&problem(&geo, &ch, &[0.5, 0.5]), &cfg(alloc::vec![Point3::new(35.0, 5.0, 5.0)], 0.0)).unwrap();
        assert!((sol.power[0] - sol.power[1]).abs() < 1e-6);
    }

    #[test]
    fn frozen_gains_stay_close_within_the_local_region() {
        let geo = geometry(2);
        let ch = ChannelRealization::draw(model(8, false), 2, 21);
        let prob = problem(&geo, &ch, &[0.5, 0.5]);
        let sol = ao_noma(&prob, &cfg(alloc::vec![Point3::new(38.0, 5.0, 5.0)], 0.05)).unwrap();
        let v = &sol.reflections[0];
        for p in sol.path.windows(2) {
            let a = rows_at(&prob, p[0]).unwrap().1;
            let b = rows_at(&prob, p[1]).unwrap().1;
            for (qa, qb) in a.iter().zip(b.iter()) {
                let (ga, gb) = (row_gain(qa, v), row_gain(qb, v));
                assert!((ga - gb).abs() <= 0.05 * ga, "{ga} {gb}");
            }
        }
    }

    #[test]
    fn config_rejects_wide_regions() {
        let c = AoConfig {
            delta: 0.1,
            ..AoConfig::default()
        };
        assert!(c.validate().is_err());
        assert!(AoConfig::default().validate().is_ok());
    }
}
