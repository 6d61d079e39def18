//! Globally bounded weighted sum rate by polyblock outer approximation of
//! the SINR region, with feasibility of a target decided by a minimum-power
//! relaxation over the lifted reflection matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::convex::{affine, solve_lifted, term, BarrierOptions, Form, LiftedProblem, Status, Term};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::linalg::{row_form, CMatrix, CVector, RMatrix};
use crate::rates::{DecodingOrder, Scheme};
#[allow(unused_imports)]
use num_traits::Float;

/// One rate-region instance at a fixed IRS position.
#[derive(Debug, Clone, PartialEq)]
pub struct MoInstance {
    /// Cascaded rows including path loss.
    pub rows: Vec<CVector>,
    pub weights: Vec<f64>,
    pub p_max: f64,
    pub sigma2: f64,
    /// `Noma` or `Fdma`.
    pub scheme: Scheme,
    /// Decoding order, ignored for FDMA.
    pub order: DecodingOrder,
}

impl MoInstance {
    pub fn new(
        rows: Vec<CVector>,
        weights: Vec<f64>,
        p_max: f64,
        sigma2: f64,
        scheme: Scheme,
        order: DecodingOrder,
    ) -> Result<Self> {
        let k = rows.len();
        if weights.len() != k || order.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "{k} rows, {} weights, order of {}",
                weights.len(),
                order.len()
            )));
        }
        if scheme == Scheme::Tdma {
            return Err(Error::InvalidInput(
                "TDMA has a closed-form optimum and needs no outer approximation".into(),
            ));
        }
        Ok(Self {
            rows,
            weights,
            p_max,
            sigma2,
            scheme,
            order,
        })
    }

    pub fn num_users(&self) -> usize {
        self.rows.len()
    }

    /// Weighted sum rate of the SINR-plus-one vector `gamma`.
    pub fn utility(&self, gamma: &[f64]) -> f64 {
        let scale = match self.scheme {
            Scheme::Fdma => 1.0 / self.num_users() as f64,
            _ => 1.0,
        };
        self.weights
            .iter()
            .zip(gamma.iter())
            .map(|(w, g)| scale * w * g.log2())
            .sum()
    }

    fn normalized_rows(&self) -> Vec<CVector> {
        let s = (self.p_max / self.sigma2).sqrt();
        self.rows.iter().map(|q| q * Complex64::new(s, 0.0)).collect()
    }
}

/// Upper corner of the initial box: every user alone with full power and
/// perfectly aligned phases.
pub fn init_vertex(inst: &MoInstance) -> Vec<f64> {
    let k = match inst.scheme {
        Scheme::Fdma => inst.num_users() as f64,
        _ => 1.0,
    };
    inst.rows
        .iter()
        .map(|q| {
            let l1: f64 = q.iter().map(|z| z.norm()).sum();
            1.0 + k * inst.p_max * l1 * l1 / inst.sigma2
        })
        .collect()
}

/// Outcome of a minimum-power solve for a target `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinPower {
    pub status: Status,
    /// Per-user power in watts.
    pub power: Vec<f64>,
    /// Lifted reflection matrix.
    pub v: CMatrix,
    /// Total power relative to the budget.
    pub load: f64,
}

impl MinPower {
    pub fn feasible(&self) -> bool {
        matches!(self.status, Status::TargetReached)
            || (matches!(self.status, Status::Optimal | Status::MaxIterations) && self.load <= 1.0)
    }
}

/// Minimizes the total power needed to reach `gamma` (SINR plus one per
/// user). With `decide_only` the solve stops as soon as the budget is
/// provably met or missed.
pub fn min_power(inst: &MoInstance, gamma: &[f64], decide_only: bool, barrier: &BarrierOptions) -> Result<MinPower> {
    let k = inst.num_users();
    if gamma.len() != k {
        return Err(Error::DimensionMismatch("target length".into()));
    }
    let qn = inst.normalized_rows();
    let m = qn[0].len();
    let mut lp = LiftedProblem::new(m, k);
    lp.diag_one = true;
    for q in &qn {
        lp.add_form(Form::RankOne(row_form(q)));
    }
    let pidx: Vec<usize> = (0..k).map(|i| lp.aux(i)).collect();
    let mut cons: Vec<Term> = Vec::new();
    let kf = k as f64;
    let seq = inst.order.sequence();
    for u in 0..k {
        let a = (gamma[u] - 1.0).max(0.0);
        let pu = pidx[u];
        let tu = u;
        let interferers: Vec<usize> = match inst.scheme {
            Scheme::Noma => (0..k)
                .filter(|&i| inst.order.rank(i) > inst.order.rank(u))
                .map(|i| pidx[i])
                .collect(),
            _ => Vec::new(),
        };
        let div = if inst.scheme == Scheme::Fdma { kf } else { 1.0 };
        // p_u - a * sum(p_i) - a / (div * t_u) >= 0
        cons.push(term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let t = z[tu];
            if !(t > 0.0) {
                return None;
            }
            let mut val = z[pu] - a / (div * t);
            g[pu] += 1.0;
            for &i in &interferers {
                val -= a * z[i];
                g[i] -= a;
            }
            g[tu] += a / (div * t * t);
            h[(tu, tu)] -= 2.0 * a / (div * t * t * t);
            Some(val)
        }));
    }
    if inst.scheme == Scheme::Noma {
        let scale: f64 = qn.iter().map(|q| q.norm_squared()).sum::<f64>() / kf;
        for w in seq.windows(2) {
            let (weak, strong) = (w[0], w[1]);
            // power ordering, stronger user gets less
            cons.push(affine(vec![(pidx[weak], 1.0), (pidx[strong], -1.0)], 0.0));
            // channel ordering, skipped when the two rows coincide
            let diff = (&qn[strong] - &qn[weak]).norm();
            if diff > 1e-12 * qn[strong].norm().max(qn[weak].norm()) {
                cons.push(affine(vec![(strong, 1.0 / scale), (weak, -1.0 / scale)], 0.0));
            }
        }
        let strongest = seq[k - 1];
        cons.push(affine(vec![(pidx[strongest], 1.0)], 0.0));
    } else {
        for &p in &pidx {
            cons.push(affine(vec![(p, 1.0)], 0.0));
        }
    }
    lp.constraints = cons;
    lp.objective = Some(affine(pidx.iter().map(|&p| (p, -1.0)).collect(), 0.0));
    lp.x0 = vec![1.0 / kf; k];
    let mut opts = *barrier;
    if decide_only {
        opts.target = Some(-1.0);
    }
    let sol = solve_lifted(&lp, &opts)?;
    let load: f64 = sol.x.iter().sum();
    Ok(MinPower {
        status: sol.status,
        power: sol.x.iter().map(|p| p.max(0.0) * inst.p_max).collect(),
        v: sol.v,
        load,
    })
}

pub fn is_feasible(inst: &MoInstance, gamma: &[f64], barrier: &BarrierOptions) -> Result<bool> {
    Ok(min_power(inst, gamma, true, barrier)?.feasible())
}

/// Bracket of the scaling `alpha` for which `alpha * z` meets the region
/// boundary: `alpha_min * z` is feasible, `alpha_max * z` is not (or
/// `alpha_max = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub point: Vec<f64>,
}

/// Bisection for the boundary point on the segment from the origin to `z`.
/// The search starts from `1 / max z`, where every target is trivially met.
pub fn project_bisection(inst: &MoInstance, z: &[f64], eps: f64, barrier: &BarrierOptions) -> Result<Projection> {
    let zmax = z.iter().copied().fold(1.0, f64::max);
    let mut lo = 1.0 / zmax;
    let mut hi = 1.0;
    let scaled = |a: f64| -> Vec<f64> { z.iter().map(|v| a * v).collect() };
    if is_feasible(inst, z, barrier)? {
        lo = 1.0;
    } else {
        while hi - lo >= eps {
            let mid = 0.5 * (lo + hi);
            if is_feasible(inst, &scaled(mid), barrier)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    Ok(Projection {
        alpha_min: lo,
        alpha_max: hi,
        point: scaled(lo),
    })
}

/// Feasible operating point for a reachable target.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub gamma: Vec<f64>,
    pub power: Vec<f64>,
    /// Noise-to-gain ratios `sigma^2 / c_k` of the lifted solution.
    pub lambda: Vec<f64>,
    pub v: CMatrix,
}

pub fn witness(inst: &MoInstance, gamma: &[f64], barrier: &BarrierOptions) -> Result<Witness> {
    let mp = min_power(inst, gamma, false, barrier)?;
    if matches!(mp.status, Status::Infeasible) || mp.load > 1.0 + 1e-6 {
        return Err(Error::Infeasible(format!("target needs {:.6} of the budget", mp.load)));
    }
    let lambda = inst
        .rows
        .iter()
        .map(|q| {
            let c = crate::linalg::quad_form(&mp.v, &row_form(q));
            inst.sigma2 / c
        })
        .collect();
    Ok(Witness {
        gamma: gamma.to_vec(),
        power: mp.power,
        lambda,
        v: mp.v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyblockOptions {
    pub eps: f64,
    pub bisection_eps: f64,
    pub max_iters: usize,
    /// Pick the vertex maximizing the weighted objective (otherwise the
    /// unweighted sum of log rates).
    pub weighted_selection: bool,
    pub barrier: BarrierOptions,
}

impl Default for PolyblockOptions {
    fn default() -> Self {
        Self {
            eps: 1e-2,
            bisection_eps: 1e-4,
            max_iters: 500,
            weighted_selection: true,
            barrier: BarrierOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyblockResult {
    /// Upper bound on the weighted sum rate.
    pub upper_bound: f64,
    /// Best feasible weighted sum rate found.
    pub lower_value: f64,
    /// Best feasible SINR-plus-one vector.
    pub gamma_star: Vec<f64>,
    pub witness: Option<Witness>,
    pub iterations: usize,
    pub converged: bool,
    /// `(upper, lower)` after each iteration.
    pub trace: Vec<(f64, f64)>,
}

struct Vertex {
    z: Vec<f64>,
    score: f64,
}

pub fn polyblock_maximize(inst: &MoInstance, opts: &PolyblockOptions) -> Result<PolyblockResult> {
    let k = inst.num_users();
    let score = |z: &[f64]| -> f64 {
        if opts.weighted_selection {
            inst.utility(z)
        } else {
            z.iter().map(|g| g.log2()).sum()
        }
    };
    let z0 = init_vertex(inst);
    let mut verts = vec![Vertex {
        score: score(&z0),
        z: z0,
    }];
    let mut best_gamma = vec![1.0; k];
    let mut best_value = 0.0;
    let mut upper = f64::INFINITY;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iters && !verts.is_empty() {
        iterations += 1;
        let (bi, _) = verts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.score.total_cmp(&b.1.score))
            .expect("non-empty");
        let z = verts.swap_remove(bi).z;
        // the bound is the best weighted value over all remaining vertices
        // together with the one being refined
        upper = verts
            .iter()
            .map(|v| inst.utility(&v.z))
            .fold(inst.utility(&z), f64::max);
        let proj = project_bisection(inst, &z, opts.bisection_eps, &opts.barrier)?;
        let val = inst.utility(&proj.point);
        if val > best_value {
            best_value = val;
            best_gamma = proj.point.clone();
        }
        trace.push((upper, best_value));
        if upper - best_value <= opts.eps {
            converged = true;
            break;
        }
        if proj.alpha_min >= 1.0 {
            // z itself is feasible; nothing above it remains to cut
            continue;
        }
        let cut: Vec<f64> = z.iter().map(|v| proj.alpha_max * v).collect();
        for i in 0..k {
            if cut[i] < 1.0 {
                continue;
            }
            let mut nz = z.clone();
            nz[i] = cut[i];
            if nz.iter().all(|&v| v >= 1.0) {
                verts.push(Vertex {
                    score: score(&nz),
                    z: nz,
                });
            }
        }
        prune_dominated(&mut verts);
    }
    let witness = if best_value > 0.0 {
        witness(inst, &best_gamma, &opts.barrier).ok()
    } else {
        None
    };
    Ok(PolyblockResult {
        upper_bound: upper,
        lower_value: best_value,
        gamma_star: best_gamma,
        witness,
        iterations,
        converged,
        trace,
    })
}

fn prune_dominated(verts: &mut Vec<Vertex>) {
    let n = verts.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        if !keep[i] {
            continue;
        }
        for j in 0..n {
            if i == j || !keep[j] {
                continue;
            }
            let dominated = verts[i]
                .z
                .iter()
                .zip(verts[j].z.iter())
                .all(|(a, b)| a <= b);
            if dominated {
                keep[i] = false;
                break;
            }
        }
    }
    let mut idx = 0;
    verts.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
}

/// Weighted sum rate bound (exact for TDMA) at one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateBound {
    pub position: Point3,
    pub order: Option<DecodingOrder>,
    pub bound: f64,
    pub achieved: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveResult {
    pub best: CandidateBound,
    pub candidates: Vec<CandidateBound>,
}

/// Optimal TDMA weighted sum rate at fixed rows.
pub fn tdma_optimum(rows: &[CVector], weights: &[f64], p_max: f64, sigma2: f64) -> f64 {
    let k = rows.len() as f64;
    rows.iter()
        .zip(weights.iter())
        .map(|(q, w)| {
            let l1: f64 = q.iter().map(|z| z.norm()).sum();
            w / k * (1.0 + p_max * l1 * l1 / sigma2).log2()
        })
        .sum()
}

/// Evaluates every candidate position and (for NOMA) every decoding order;
/// returns the candidate with the largest bound.
pub fn exhaustive_driver<F>(
    positions: &[Point3],
    scheme: Scheme,
    weights: &[f64],
    p_max: f64,
    sigma2: f64,
    mut rows_at: F,
    opts: &PolyblockOptions,
) -> Result<ExhaustiveResult>
where
    F: FnMut(Point3) -> Result<Vec<CVector>>,
{
    if positions.is_empty() {
        return Err(Error::InvalidInput("no candidate positions".into()));
    }
    let k = weights.len();
    let orders = match scheme {
        Scheme::Noma => DecodingOrder::all(k),
        _ => vec![DecodingOrder::identity(k)],
    };
    let mut candidates = Vec::new();
    for &s in positions {
        let rows = rows_at(s)?;
        match scheme {
            Scheme::Tdma => {
                let b = tdma_optimum(&rows, weights, p_max, sigma2);
                candidates.push(CandidateBound {
                    position: s,
                    order: None,
                    bound: b,
                    achieved: b,
                });
            }
            _ => {
                for order in &orders {
                    let inst = MoInstance::new(rows.clone(), weights.to_vec(), p_max, sigma2, scheme, order.clone())?;
                    let r = polyblock_maximize(&inst, opts)?;
                    candidates.push(CandidateBound {
                        position: s,
                        order: (scheme == Scheme::Noma).then(|| order.clone()),
                        bound: r.upper_bound,
                        achieved: r.lower_value,
                    });
                }
            }
        }
    }
    let best = candidates
        .iter()
        .max_by(|a, b| a.bound.total_cmp(&b.bound))
        .cloned()
        .expect("non-empty");
    Ok(ExhaustiveResult { best, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::row_gain;
    use crate::rates::{noma_rates_from_gains, validate_noma, wsr, fdma_rates_from_gains};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn row(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| Complex64::new(a, b)))
    }

    #[test]
    fn scalar_channel_matches_power_grid() {
        // one element: the lifted matrix is fixed and only power remains
        let rows = vec![row(&[(0.5, 0.0)]), row(&[(0.0, 1.5)])];
        let w = vec![0.3, 0.7];
        let order = DecodingOrder::from_sequence(&[0, 1]).unwrap();
        let inst = MoInstance::new(rows, w.clone(), 1.0, 0.01, Scheme::Noma, order.clone()).unwrap();
        let res = polyblock_maximize(&inst, &PolyblockOptions::default()).unwrap();
        let c = [25.0, 225.0];
        let mut grid = 0.0f64;
        for i in 0..=200_000 {
            let p1 = 0.5 + 0.5 * i as f64 / 200_000.0;
            let p = [p1, 1.0 - p1];
            grid = grid.max(wsr(&w, &noma_rates_from_gains(&c, &p, &order, 1.0)));
        }
        assert!(res.converged);
        assert!(res.upper_bound >= grid - 1e-6, "{} < {}", res.upper_bound, grid);
        assert!(res.lower_value <= grid + 1e-6);
        assert!(res.upper_bound - res.lower_value <= 1e-2);
    }

    #[test]
    fn bisection_brackets_the_boundary() {
        let rows = vec![row(&[(0.3, 0.1), (0.2, -0.4)]), row(&[(0.6, 0.2), (-0.5, 0.3)])];
        let order = DecodingOrder::identity(2);
        let inst = MoInstance::new(rows, vec![0.5, 0.5], 1.0, 0.01, Scheme::Noma, order).unwrap();
        let z = init_vertex(&inst);
        let b = BarrierOptions::default();
        let p = project_bisection(&inst, &z, 1e-4, &b).unwrap();
        assert!(p.alpha_max - p.alpha_min < 1e-4);
        assert!(is_feasible(&inst, &p.point, &b).unwrap());
        let hi: Vec<f64> = z.iter().map(|v| v * p.alpha_max).collect();
        assert!(!is_feasible(&inst, &hi, &b).unwrap());
        let w = witness(&inst, &p.point, &b).unwrap();
        let total: f64 = w.power.iter().sum();
        assert!(total <= 1.0 + 1e-6);
    }

    fn random_unit(m: usize, rng: &mut ChaCha8Rng) -> CVector {
        CVector::from_fn(m, |_, _| {
            let th = (rng.next_u64() as f64 / u64::MAX as f64) * core::f64::consts::TAU;
            Complex64::from_polar(1.0, th)
        })
    }

    #[test]
    fn bound_dominates_random_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<CVector> = (0..2)
            .map(|_| CVector::from_fn(3, |_, _| crate::channel::complex_gaussian(&mut rng) * 0.1))
            .collect();
        let w = vec![0.4, 0.6];
        let order = DecodingOrder::identity(2);
        for scheme in [Scheme::Noma, Scheme::Fdma] {
            let inst = MoInstance::new(rows.clone(), w.clone(), 1.0, 0.01, scheme, order.clone()).unwrap();
            let res = polyblock_maximize(&inst, &PolyblockOptions::default()).unwrap();
            assert!(res.converged);
            let mut best = 0.0f64;
            for _ in 0..3000 {
                let v = random_unit(3, &mut rng);
                let c: Vec<f64> = rows.iter().map(|q| row_gain(q, &v)).collect();
                let f = (rng.next_u64() as f64) / u64::MAX as f64;
                let p = [f, 1.0 - f];
                let val = match scheme {
                    Scheme::Noma => {
                        if validate_noma(&c, &p, &order, 0.0).is_err() {
                            continue;
                        }
                        wsr(&w, &noma_rates_from_gains(&c, &p, &order, 0.01))
                    }
                    _ => wsr(&w, &fdma_rates_from_gains(&c, &p, 0.01)),
                };
                best = best.max(val);
            }
            assert!(res.upper_bound >= best - 1e-9, "{scheme:?}: {} < {best} {:?} z0 {:?}", res.upper_bound, res.trace, init_vertex(&inst));
        }
    }

    #[test]
    fn single_user_reaches_aligned_gain() {
        let q = row(&[(0.3, 0.4), (-0.1, 0.2), (0.6, -0.8)]);
        let l1: f64 = q.iter().map(|z| z.norm()).sum();
        let inst = MoInstance::new(vec![q], vec![1.0], 2.0, 0.5, Scheme::Noma, DecodingOrder::identity(1)).unwrap();
        let res = polyblock_maximize(&inst, &PolyblockOptions::default()).unwrap();
        let exact = (1.0 + 2.0 * l1 * l1 / 0.5).log2();
        assert!(res.upper_bound >= exact - 1e-3 && res.upper_bound <= exact + 1e-12);
        assert!(exact - res.lower_value < 1e-2);
    }
}
