//! Operator-splitting solver for the linear SDP class. Slower and less
//! accurate than the barrier method, but built from entirely different
//! pieces (affine projection and eigenvalue clipping), which makes it a
//! useful cross-check.

use alloc::vec::Vec;
use num_complex::Complex64;

use super::barrier::Status;
use super::sdp::{sdp_violation, SdpProblem, SdpSolution, Sense, SolverReport};
use crate::error::{Error, Result};
use crate::linalg::{inner, psd_project, CMatrix, RMatrix};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmOptions {
    pub rho: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self {
            rho: 1.0,
            tol: 1e-8,
            max_iters: 50_000,
        }
    }
}

struct Row {
    a: CMatrix,
    /// Slack coefficient and slack index, if any.
    slack: Option<(f64, usize)>,
    rhs: f64,
}

pub fn solve_sdp_admm(p: &SdpProblem, opts: &AdmmOptions) -> Result<SdpSolution> {
    let n = p.dim;
    let mut rows: Vec<Row> = Vec::new();
    let mut n_slack = 0;
    for c in &p.constraints {
        let slack = match c.sense {
            Sense::Eq => None,
            Sense::Ge => Some((-1.0, n_slack)),
            Sense::Le => Some((1.0, n_slack)),
        };
        if slack.is_some() {
            n_slack += 1;
        }
        rows.push(Row {
            a: c.a.clone(),
            slack,
            rhs: c.b,
        });
    }
    if p.diag_one {
        for m in 0..n {
            let mut e = CMatrix::zeros(n, n);
            e[(m, m)] = Complex64::new(1.0, 0.0);
            rows.push(Row {
                a: e,
                slack: None,
                rhs: 1.0,
            });
        }
    }
    let nr = rows.len();
    let mut gram = RMatrix::zeros(nr, nr);
    for i in 0..nr {
        for j in 0..nr {
            let mut g = inner(&rows[i].a, &rows[j].a);
            if let (Some((ci, si)), Some((cj, sj))) = (rows[i].slack, rows[j].slack) {
                if si == sj {
                    g += ci * cj;
                }
            }
            gram[(i, j)] = g;
        }
    }
    let lu = gram.lu();
    if nr > 0 && !lu.is_invertible() {
        return Err(Error::InvalidInput("linearly dependent constraints".into()));
    }
    let c = p.objective.clone().unwrap_or_else(|| CMatrix::zeros(n, n));

    let project_affine = |x0: &CMatrix, s0: &[f64]| -> (CMatrix, Vec<f64>) {
        if nr == 0 {
            return (x0.clone(), s0.to_vec());
        }
        let mut res = RMatrix::zeros(nr, 1);
        for (i, row) in rows.iter().enumerate() {
            let mut v = inner(&row.a, x0) - row.rhs;
            if let Some((ci, si)) = row.slack {
                v += ci * s0[si];
            }
            res[(i, 0)] = v;
        }
        let y = lu.solve(&res).expect("invertible gram");
        let mut x = x0.clone();
        let mut s = s0.to_vec();
        for (i, row) in rows.iter().enumerate() {
            x -= &row.a * Complex64::new(y[(i, 0)], 0.0);
            if let Some((ci, si)) = row.slack {
                s[si] -= ci * y[(i, 0)];
            }
        }
        (x, s)
    };

    let mut rho = opts.rho;
    let mut y = CMatrix::identity(n, n);
    let mut r = alloc::vec![0.0; n_slack];
    let mut u = CMatrix::zeros(n, n);
    let mut us = alloc::vec![0.0; n_slack];
    let mut iters = 0;
    let mut status = Status::MaxIterations;
    let mut dual = f64::INFINITY;
    while iters < opts.max_iters {
        iters += 1;
        let x0 = &y - &u + &c * Complex64::new(1.0 / rho, 0.0);
        let s0: Vec<f64> = r.iter().zip(us.iter()).map(|(a, b)| a - b).collect();
        let (x, s) = project_affine(&x0, &s0);
        let y_prev = y.clone();
        y = psd_project(&(&x + &u));
        let r_prev = r.clone();
        for j in 0..n_slack {
            r[j] = (s[j] + us[j]).max(0.0);
        }
        u += &x - &y;
        for j in 0..n_slack {
            us[j] += s[j] - r[j];
        }
        let primal = ((&x - &y).norm_squared()
            + s.iter().zip(r.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
        .sqrt();
        dual = rho
            * ((&y - &y_prev).norm_squared()
                + r.iter().zip(r_prev.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            .sqrt();
        let scale = 1.0 + y.norm();
        if primal <= opts.tol * scale && dual <= opts.tol * scale {
            status = Status::Optimal;
            break;
        }
        if primal > 10.0 * dual {
            rho *= 2.0;
            u /= Complex64::new(2.0, 0.0);
            us.iter_mut().for_each(|z| *z /= 2.0);
        } else if dual > 10.0 * primal {
            rho /= 2.0;
            u *= Complex64::new(2.0, 0.0);
            us.iter_mut().for_each(|z| *z *= 2.0);
        }
    }
    let objective = inner(&c, &y);
    Ok(SdpSolution {
        report: SolverReport {
            status,
            iterations: iters,
            primal_residual: sdp_violation(p, &y),
            dual_residual: dual,
        },
        objective,
        v: y,
    })
}
