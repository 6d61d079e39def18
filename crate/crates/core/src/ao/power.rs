//! Power allocation for fixed reflection and position, in units where the
//! noise power is one and the budget is one.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::convex::{affine, solve_smooth, term, BarrierOptions, SmoothProblem, Status};
use crate::error::{Error, Result};
use crate::linalg::RMatrix;
use crate::rates::DecodingOrder;
#[allow(unused_imports)]
use num_traits::Float;

/// Cumulative tails `beta_j = sum of p over positions >= j`, indexed by
/// decoding position.
pub fn tails(power: &[f64], order: &DecodingOrder) -> Vec<f64> {
    let seq = order.sequence();
    let mut beta = alloc::vec![0.0; seq.len() + 1];
    for j in (0..seq.len()).rev() {
        beta[j] = beta[j + 1] + power[seq[j]];
    }
    beta
}

fn powers_from_tails(beta: &[f64], order: &DecodingOrder) -> Vec<f64> {
    let seq = order.sequence();
    let mut p = alloc::vec![0.0; seq.len()];
    for j in 0..seq.len() {
        let next = if j + 1 < seq.len() { beta[j + 1] } else { 0.0 };
        p[seq[j]] = (beta[j] - next).max(0.0);
    }
    p
}

/// Maximizes the concave minorant of the NOMA weighted sum rate in the
/// tails, linearized at `prev`. `gains` are `|q_k v|^2 P / sigma^2` and
/// powers are fractions of the budget.
pub fn power_step_noma(
    gains: &[f64],
    order: &DecodingOrder,
    weights: &[f64],
    prev: &[f64],
    barrier: &BarrierOptions,
) -> Result<Vec<f64>> {
    let k = gains.len();
    let seq = order.sequence();
    let beta_l = tails(prev, order);
    // per position: own weight and gain, and the linearization slope that
    // the previous position puts on this tail
    let c: Vec<f64> = seq.iter().map(|&u| gains[u]).collect();
    let w: Vec<f64> = seq.iter().map(|&u| weights[u]).collect();
    let slope: Vec<f64> = (0..k)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                w[j - 1] * c[j - 1] / (1.0 + c[j - 1] * beta_l[j])
            }
        })
        .collect();
    let objective = term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
        let mut val = 0.0;
        for j in 0..k {
            let arg = 1.0 + c[j] * z[j];
            if !(arg > 0.0) {
                return None;
            }
            val += w[j] * arg.ln() - slope[j] * z[j];
            g[j] += (w[j] * c[j] / arg - slope[j]) / LN_2;
            h[(j, j)] -= w[j] * c[j] * c[j] / (arg * arg * LN_2);
        }
        Some(val / LN_2)
    });
    let mut cons = alloc::vec![affine(alloc::vec![(0, -1.0)], 1.0)];
    for j in 0..k {
        // p_j >= p_{j+1}, i.e. beta_j - 2 beta_{j+1} + beta_{j+2} >= 0
        if j + 1 < k {
            let mut coef = alloc::vec![(j, 1.0), (j + 1, -2.0)];
            if j + 2 < k {
                coef.push((j + 2, 1.0));
            }
            cons.push(affine(coef, 0.0));
        }
    }
    cons.push(affine(alloc::vec![(k - 1, 1.0)], 0.0));
    let sol = solve_smooth(
        SmoothProblem {
            n: k,
            objective,
            constraints: cons,
            x0: beta_l[..k].to_vec(),
        },
        barrier,
    )?;
    if sol.status == Status::Infeasible {
        return Err(Error::Infeasible("power ordering polytope is empty".into()));
    }
    Ok(powers_from_tails(&sol.x, order))
}

/// Maximizes `sum w_k / K log2(1 + K c_k p_k)` over the unit simplex.
pub fn power_step_fdma(gains: &[f64], weights: &[f64], barrier: &BarrierOptions) -> Result<Vec<f64>> {
    let k = gains.len();
    let kf = k as f64;
    let c = gains.to_vec();
    let w = weights.to_vec();
    let objective = term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
        let mut val = 0.0;
        for j in 0..k {
            let arg = 1.0 + kf * c[j] * z[j];
            if !(arg > 0.0) {
                return None;
            }
            val += w[j] * arg.ln();
            g[j] += w[j] * c[j] / (arg * LN_2);
            h[(j, j)] -= w[j] * kf * c[j] * c[j] / (arg * arg * LN_2);
        }
        Some(val / (kf * LN_2))
    });
    let mut cons: Vec<_> = (0..k).map(|j| affine(alloc::vec![(j, 1.0)], 0.0)).collect();
    cons.push(affine((0..k).map(|j| (j, -1.0)).collect(), 1.0));
    let sol = solve_smooth(
        SmoothProblem {
            n: k,
            objective,
            constraints: cons,
            x0: alloc::vec![0.5 / kf; k],
        },
        barrier,
    )?;
    Ok(sol.x.iter().map(|p| p.max(0.0)).collect())
}
