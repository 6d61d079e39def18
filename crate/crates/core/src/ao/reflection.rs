//! Reflection design for fixed power and position through the lifted
//! matrix and sequential rank-one tightening.

use alloc::vec::Vec;
use core::f64::consts::LN_2;
use rand_core::RngCore;

use crate::convex::{affine, term, Form, LiftedProblem, Term};
use crate::error::Result;
use crate::linalg::{row_form, row_gain, CVector, RMatrix};
use crate::rates::{fdma_rates_from_gains, noma_rates_from_gains, validate_noma, wsr, DecodingOrder};
use crate::srocr::{gaussian_randomization, srocr_solve, SrocrOptions};

use super::power::tails;
#[allow(unused_imports)]
use num_traits::Float;

/// Outcome of a reflection step.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionStep {
    pub v: CVector,
    /// True weighted sum rate of `v`.
    pub wsr: f64,
    pub srocr_converged: bool,
    pub randomized: bool,
}

fn noma_value(rows: &[CVector], power: &[f64], order: &DecodingOrder, weights: &[f64], v: &CVector) -> f64 {
    let c: Vec<f64> = rows.iter().map(|q| row_gain(q, v)).collect();
    if validate_noma(&c, power, order, 1e-9).is_err() {
        return f64::NEG_INFINITY;
    }
    wsr(weights, &noma_rates_from_gains(&c, power, order, 1.0))
}

fn fdma_value(rows: &[CVector], power: &[f64], weights: &[f64], v: &CVector) -> f64 {
    let c: Vec<f64> = rows.iter().map(|q| row_gain(q, v)).collect();
    wsr(weights, &fdma_rates_from_gains(&c, power, 1.0))
}

/// NOMA reflection step. `rows` are normalized so that the noise power is
/// one at unit power, `power` is in fractions of the budget.
pub fn reflection_step_noma<R: RngCore>(
    rows: &[CVector],
    power: &[f64],
    order: &DecodingOrder,
    weights: &[f64],
    v_prev: &CVector,
    opts: &SrocrOptions,
    samples: usize,
    rng: &mut R,
) -> Result<ReflectionStep> {
    let k = rows.len();
    let m = v_prev.len();
    let seq = order.sequence();
    let beta = tails(power, order);
    let t_prev: Vec<f64> = rows.iter().map(|q| row_gain(q, v_prev)).collect();
    let scale: f64 = rows.iter().map(|q| q.norm_squared()).sum::<f64>() / k as f64;
    let forms: Vec<CVector> = rows.iter().map(row_form).collect();
    // per user: tail at own position, tail above, slope of the linearized
    // interference term
    let mut own = alloc::vec![0.0; k];
    let mut above = alloc::vec![0.0; k];
    for (j, &u) in seq.iter().enumerate() {
        own[u] = beta[j];
        above[u] = beta[j + 1];
    }
    let slope: Vec<f64> = (0..k).map(|u| above[u] / (1.0 + above[u] * t_prev[u])).collect();
    let w = weights.to_vec();
    let pairs: Vec<(usize, usize)> = seq
        .windows(2)
        .map(|p| (p[0], p[1]))
        .filter(|&(a, b)| (&rows[b] - &rows[a]).norm() > 1e-12 * rows[a].norm().max(rows[b].norm()))
        .collect();

    let build = |lp: &mut LiftedProblem<'_>| {
        let idx: Vec<usize> = forms.iter().map(|f| lp.add_form(Form::RankOne(f.clone()))).collect();
        let (own, slope, w, idx2) = (own.clone(), slope.clone(), w.clone(), idx.clone());
        let objective: Term = term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let mut val = 0.0;
            for u in 0..own.len() {
                let t = z[idx2[u]];
                let arg = 1.0 + own[u] * t;
                if !(arg > 0.0) {
                    return None;
                }
                val += w[u] * (arg.ln() - slope[u] * t);
                g[idx2[u]] += w[u] * (own[u] / arg - slope[u]) / LN_2;
                h[(idx2[u], idx2[u])] -= w[u] * own[u] * own[u] / (arg * arg * LN_2);
            }
            Some(val / LN_2)
        });
        lp.objective = Some(objective);
        for &(weak, strong) in &pairs {
            lp.constraints.push(affine(alloc::vec![(idx[strong], 1.0 / scale), (idx[weak], -1.0 / scale)], 0.0));
        }
    };
    let res = srocr_solve(m, 0, build, opts)?;
    let eval = |v: &CVector| noma_value(rows, power, order, weights, v);
    Ok(finish(res, eval, samples, rng))
}

/// FDMA reflection step, same units as the NOMA step.
pub fn reflection_step_fdma<R: RngCore>(
    rows: &[CVector],
    power: &[f64],
    weights: &[f64],
    dim: usize,
    opts: &SrocrOptions,
    samples: usize,
    rng: &mut R,
) -> Result<ReflectionStep> {
    let k = rows.len();
    let kf = k as f64;
    let forms: Vec<CVector> = rows.iter().map(row_form).collect();
    let build = |lp: &mut LiftedProblem<'_>| {
        let idx: Vec<usize> = forms.iter().map(|f| lp.add_form(Form::RankOne(f.clone()))).collect();
        let a: Vec<f64> = power.iter().map(|p| kf * p).collect();
        let w = weights.to_vec();
        lp.objective = Some(term(move |z: &[f64], g: &mut [f64], h: &mut RMatrix| {
            let mut val = 0.0;
            for u in 0..a.len() {
                let arg = 1.0 + a[u] * z[idx[u]];
                if !(arg > 0.0) {
                    return None;
                }
                val += w[u] * arg.ln();
                g[idx[u]] += w[u] * a[u] / (arg * kf * LN_2);
                h[(idx[u], idx[u])] -= w[u] * a[u] * a[u] / (arg * arg * kf * LN_2);
            }
            Some(val / (kf * LN_2))
        }));
    };
    let res = srocr_solve(dim, 0, build, opts)?;
    let eval = |v: &CVector| fdma_value(rows, power, weights, v);
    Ok(finish(res, eval, samples, rng))
}

fn finish<R: RngCore, F: Fn(&CVector) -> f64>(
    res: crate::srocr::SrocrResult,
    eval: F,
    samples: usize,
    rng: &mut R,
) -> ReflectionStep {
    let mut best = ReflectionStep {
        wsr: eval(&res.v),
        v: res.v.clone(),
        srocr_converged: res.converged,
        randomized: false,
    };
    if !res.converged || !best.wsr.is_finite() {
        let (v, val) = gaussian_randomization(&res.v_lifted, samples, &eval, rng);
        if val > best.wsr {
            best.v = v;
            best.wsr = val;
            best.randomized = true;
        }
    }
    best
}
