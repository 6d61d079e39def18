//! Local-region deployment update with frozen small-scale gains.
//!
//! Distances enter through `phi = ||s - b||^a_ai` and `upsilon_k =
//! ||s - u_k||^a_iu`, both normalized by their values at the current point,
//! and the inverse path loss `tau_k >= phi upsilon_k` is convexified by a
//! difference-of-squares bound that is tight at the current point.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::convex::{affine, solve_smooth, term, BarrierOptions, SmoothProblem, Status, Term};
use crate::error::Result;
use crate::geometry::{NetworkGeometry, PathLossModel, Point3};
use crate::linalg::RMatrix;
#[allow(unused_imports)]
use num_traits::Float;

/// Rate of one user as a function of the normalized inverse path loss:
/// `weight * log2(1 + a / (b + tau))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTerm {
    pub weight: f64,
    pub a: f64,
    pub b: f64,
}

impl RateTerm {
    pub fn value(&self, tau: f64) -> f64 {
        self.weight * (1.0 + self.a / (self.b + tau)).log2()
    }

    /// Derivative in `tau`.
    pub fn slope(&self, tau: f64) -> f64 {
        -self.weight * self.a / ((self.b + tau) * (self.a + self.b + tau) * LN_2)
    }
}

/// Decoding-order requirement `L_strong c_strong >= L_weak c_weak` with
/// `ratio = c_weak / c_strong` of the path-loss-free gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderPair {
    pub weak: usize,
    pub strong: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentInput<'a> {
    pub geometry: &'a NetworkGeometry,
    pub path_loss: PathLossModel,
    pub s_prev: Point3,
    pub delta: f64,
    pub rates: Vec<RateTerm>,
    pub ordering: Vec<OrderPair>,
}

/// Outcome of a deployment update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentStep {
    pub s: Point3,
    /// Value of the convexified objective at the new point.
    pub model_value: f64,
}

/// `(||x||^2)^(e/2)` with gradient and Hessian.
fn power_norm(d: &[f64], e: f64) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let r2: f64 = d.iter().map(|x| x * x).sum();
    let a = 0.5 * e;
    let n = d.len();
    let val = r2.powf(a);
    let g1 = 2.0 * a * r2.powf(a - 1.0);
    let g2 = if r2 > 0.0 { 4.0 * a * (a - 1.0) * r2.powf(a - 2.0) } else { 0.0 };
    let grad = d.iter().map(|x| g1 * x).collect();
    let hess = (0..n)
        .map(|i| (0..n).map(|j| g2 * d[i] * d[j] + if i == j { g1 } else { 0.0 }).collect())
        .collect();
    (val, grad, hess)
}

/// Solves the convexified local problem. Returns `None` when the region is
/// pinned, when the linearized ordering cannot be met, or when the solver
/// gives up; the caller then keeps `s_prev`.
pub fn deployment_step(input: &DeploymentInput, barrier: &BarrierOptions) -> Result<Option<DeploymentStep>> {
    let geo = input.geometry;
    let region = geo.region;
    let axes = region.free_axes();
    let nf = axes.len();
    let k = geo.num_users();
    if input.delta <= 0.0 || nf == 0 {
        return Ok(None);
    }
    let s0 = input.s_prev;
    let (a_ai, a_iu) = (input.path_loss.alpha_ai, input.path_loss.alpha_iu);
    let phi_l = s0.distance(geo.ap).powf(a_ai);
    let ups_l: Vec<f64> = geo.users.iter().map(|u| s0.distance(*u).powf(a_iu)).collect();
    if !(phi_l > 0.0) || ups_l.iter().any(|u| !(*u > 0.0)) {
        return Ok(None);
    }
    // variable layout: free coordinates, phi, upsilon_k, tau_k
    let i_phi = nf;
    let i_ups = |u: usize| nf + 1 + u;
    let i_tau = |u: usize| nf + 1 + k + u;
    let n = nf + 1 + 2 * k;
    let point = move |z: &[f64]| -> Point3 {
        let mut p = s0;
        for (i, &ax) in axes.iter().enumerate() {
            p = p.with_axis(ax, z[i]);
        }
        p
    };
    let axes_c = region.free_axes();
    let diff = move |z: &[f64], o: Point3| -> Vec<f64> { axes_c.iter().enumerate().map(|(i, &ax)| z[i] - o.axis(ax)).collect() };
    // pinned coordinates add a constant offset to each distance
    let pinned_sq = |o: Point3| -> f64 {
        (0..3)
            .filter(|ax| !region.free_axes().contains(ax))
            .map(|ax| (s0.axis(ax) - o.axis(ax)).powi(2))
            .sum()
    };

    let slopes: Vec<f64> = input.rates.iter().map(|r| r.slope(1.0)).collect();
    let objective = affine((0..k).map(|u| (i_tau(u), slopes[u])).collect(), 0.0);

    let mut cons: Vec<Term> = Vec::new();
    // distance epigraphs
    let mut anchors: Vec<(usize, Point3, f64, f64)> = alloc::vec![(i_phi, geo.ap, a_ai, phi_l)];
    for u in 0..k {
        anchors.push((i_ups(u), geo.users[u], a_iu, ups_l[u]));
    }
    for (iv, anchor, e, norm) in anchors {
        let diff = diff.clone();
        let off = pinned_sq(anchor);
        cons.push(term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let mut d = diff(z, anchor);
            // fold the pinned offset into an extra fixed coordinate
            d.push(off.sqrt());
            let (val, grad, hess) = power_norm(&d, e);
            g[iv] += 1.0;
            for i in 0..nf {
                g[i] -= grad[i] / norm;
                for j in 0..nf {
                    h[(i, j)] -= hess[i][j] / norm;
                }
            }
            Some(z[iv] - val / norm)
        }));
    }
    // tau_k >= upper bound of phi * upsilon_k, tight at (1, 1)
    for u in 0..k {
        let (ip, iu, it) = (i_phi, i_ups(u), i_tau(u));
        cons.push(term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let (p, q) = (z[ip], z[iu]);
            let s = p + q;
            g[it] += 1.0;
            g[ip] -= s - 1.0;
            g[iu] -= s - 1.0;
            for &(a, b) in &[(ip, ip), (ip, iu), (iu, ip), (iu, iu)] {
                h[(a, b)] -= 1.0;
            }
            Some(z[it] - (0.5 * s * s - p - q + 1.0))
        }));
    }
    // linearized decoding order
    let mut infeasible_order = false;
    for pair in &input.ordering {
        let (uw, us) = (geo.users[pair.weak], geo.users[pair.strong]);
        if !(pair.ratio.is_finite()) || pair.ratio < 0.0 {
            infeasible_order = true;
            break;
        }
        let r = pair.ratio.powf(2.0 / a_iu);
        let dw0: Vec<f64> = (0..3).map(|ax| s0.axis(ax) - uw.axis(ax)).collect();
        let dw2: f64 = dw0.iter().map(|x| x * x).sum();
        let lin: Vec<f64> = region.free_axes().iter().map(|&ax| 2.0 * dw0[ax]).collect();
        let s0f: Vec<f64> = region.free_axes().iter().map(|&ax| s0.axis(ax)).collect();
        let diff = diff.clone();
        let off = pinned_sq(us);
        cons.push(term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let ds = diff(z, us);
            let ds2: f64 = ds.iter().map(|x| x * x).sum::<f64>() + off;
            let mut val = dw2 - r * ds2;
            for i in 0..nf {
                val += lin[i] * (z[i] - s0f[i]);
                g[i] += (lin[i] - 2.0 * r * ds[i]) / dw2;
                h[(i, i)] -= 2.0 * r / dw2;
            }
            Some(val / dw2)
        }));
    }
    if infeasible_order {
        return Ok(None);
    }
    // local ball and box
    let d2 = input.delta * input.delta;
    let s0f: Vec<f64> = region.free_axes().iter().map(|&ax| s0.axis(ax)).collect();
    {
        let s0f = s0f.clone();
        cons.push(term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let mut val = d2;
            for i in 0..nf {
                let d = z[i] - s0f[i];
                val -= d * d;
                g[i] -= 2.0 * d / d2;
                h[(i, i)] -= 2.0 / d2;
            }
            Some(val / d2)
        }));
    }
    for (i, &ax) in region.free_axes().iter().enumerate() {
        let (lo, hi) = (region.lower.axis(ax), region.upper.axis(ax));
        let scale = 1.0 / input.delta;
        cons.push(affine(alloc::vec![(i, scale)], -lo * scale));
        cons.push(affine(alloc::vec![(i, -scale)], hi * scale));
    }

    let mut x0 = s0f.clone();
    x0.push(1.001);
    x0.extend(core::iter::repeat(1.001).take(k));
    x0.extend(core::iter::repeat(1.003).take(k));
    let sol = match solve_smooth(
        SmoothProblem {
            n,
            objective,
            constraints: cons,
            x0,
        },
        barrier,
    ) {
        Ok(s) => s,
        Err(_) => return Ok(None),
    };
    if matches!(sol.status, Status::Infeasible) {
        return Ok(None);
    }
    let s = region.clamp(point(&sol.x));
    let model_value = (0..k)
        .map(|u| input.rates[u].value(1.0) + slopes[u] * (sol.x[i_tau(u)] - 1.0))
        .sum();
    Ok(Some(DeploymentStep { s, model_value }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Region;

    fn line_geometry(users: Vec<Point3>) -> NetworkGeometry {
        NetworkGeometry::new(
            Point3::new(0.0, 0.0, 5.0),
            users,
            Region::new(Point3::new(30.0, 5.0, 5.0), Point3::new(45.0, 5.0, 5.0)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_radius_keeps_position() {
        let geo = line_geometry(alloc::vec![Point3::new(30.0, 0.0, 1.5)]);
        let input = DeploymentInput {
            geometry: &geo,
            path_loss: PathLossModel::new(1e-3, 2.2, 2.2),
            s_prev: Point3::new(35.0, 5.0, 5.0),
            delta: 0.0,
            rates: alloc::vec![RateTerm { weight: 1.0, a: 10.0, b: 0.0 }],
            ordering: Vec::new(),
        };
        assert!(deployment_step(&input, &BarrierOptions::default()).unwrap().is_none());
    }

    #[test]
    fn single_user_moves_toward_best_path_loss() {
        let geo = line_geometry(alloc::vec![Point3::new(40.0, 0.0, 1.5)]);
        let pl = PathLossModel::new(1e-3, 2.2, 2.2);
        let delta = 0.5;
        let mut s = Point3::new(36.0, 5.0, 5.0);
        for _ in 0..3 {
            let input = DeploymentInput {
                geometry: &geo,
                path_loss: pl,
                s_prev: s,
                delta,
                rates: alloc::vec![RateTerm { weight: 1.0, a: 50.0, b: 0.0 }],
                ordering: Vec::new(),
            };
            let step = deployment_step(&input, &BarrierOptions::default()).unwrap().unwrap();
            assert!((step.s.x - s.x).abs() <= delta + 1e-9);
            // line search of the product of distances within the ball
            let cost = |x: f64| {
                let p = Point3::new(x, 5.0, 5.0);
                p.distance(geo.ap).powf(2.2) * p.distance(geo.users[0]).powf(2.2)
            };
            let mut best = (f64::INFINITY, s.x);
            for i in 0..=1000 {
                let x = (s.x - delta + 2.0 * delta * i as f64 / 1000.0).clamp(30.0, 45.0);
                if cost(x) < best.0 {
                    best = (cost(x), x);
                }
            }
            assert!((step.s.x - best.1).abs() < 2e-2 * delta, "{} vs {}", step.s.x, best.1);
            s = step.s;
        }
    }
}
