//! Linear SDPs over Hermitian matrices and smooth problems without a
//! matrix variable, both routed through the barrier engine.

use alloc::vec::Vec;

use super::barrier::{affine, solve_lifted, BarrierOptions, Form, LiftedProblem, Solution, Status, Term};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

/// `Re Tr(A V) (sense) b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceConstraint {
    pub a: CMatrix,
    pub sense: Sense,
    pub b: f64,
}

/// Maximize `Re Tr(C V)` (or find any feasible `V` when `objective` is
/// absent) over Hermitian `V >= 0` with trace constraints and optionally a
/// unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub dim: usize,
    pub objective: Option<CMatrix>,
    pub constraints: Vec<TraceConstraint>,
    pub diag_one: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverReport {
    pub status: Status,
    pub iterations: usize,
    /// Largest violation of the equalities and inequalities.
    pub primal_residual: f64,
    /// Bound on the objective suboptimality.
    pub dual_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub v: CMatrix,
    pub objective: f64,
    pub report: SolverReport,
}

/// Interior-point solution of a linear SDP.
pub fn solve_sdp(p: &SdpProblem, opts: &BarrierOptions) -> Result<SdpSolution> {
    let n = p.dim;
    for c in &p.constraints {
        if c.a.nrows() != n || c.a.ncols() != n {
            return Err(Error::DimensionMismatch("constraint matrix size".into()));
        }
    }
    let mut lp = LiftedProblem::new(n, 0);
    lp.diag_one = p.diag_one;
    if let Some(c) = &p.objective {
        let i = lp.add_form(Form::Dense(c.clone()));
        lp.objective = Some(affine(alloc::vec![(i, 1.0)], 0.0));
    }
    let mut cons: Vec<Term> = Vec::new();
    for c in &p.constraints {
        match c.sense {
            Sense::Eq => lp.equalities.push((Form::Dense(c.a.clone()), c.b)),
            Sense::Ge | Sense::Le => {
                let scale = 1.0 / c.a.norm().max(c.b.abs()).max(1e-300);
                let i = lp.add_form(Form::Dense(c.a.clone()));
                let sgn = if c.sense == Sense::Ge { 1.0 } else { -1.0 };
                cons.push(affine(alloc::vec![(i, sgn * scale)], -sgn * scale * c.b));
            }
        }
    }
    lp.constraints = cons;
    let sol = solve_lifted(&lp, opts)?;
    let objective = match &p.objective {
        Some(c) => crate::linalg::inner(c, &sol.v),
        None => 0.0,
    };
    let primal_residual = sdp_violation(p, &sol.v);
    Ok(SdpSolution {
        objective,
        report: SolverReport {
            status: sol.status,
            iterations: sol.newton_steps,
            primal_residual,
            dual_residual: sol.gap,
        },
        v: sol.v,
    })
}

/// Largest violation of the constraints of `p`, including negative
/// eigenvalues.
pub fn sdp_violation(p: &SdpProblem, v: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for c in &p.constraints {
        let t = crate::linalg::inner(&c.a, v);
        let viol = match c.sense {
            Sense::Ge => c.b - t,
            Sense::Le => t - c.b,
            Sense::Eq => (t - c.b).abs(),
        };
        worst = worst.max(viol);
    }
    if p.diag_one {
        for m in 0..p.dim {
            worst = worst.max((v[(m, m)].re - 1.0).abs());
        }
    }
    if p.dim > 0 {
        let (vals, _) = hermitian_eig(v);
        worst = worst.max(-vals[vals.len() - 1]);
    }
    worst
}

/// Maximize a concave function of `x` subject to concave `g_i(x) > 0`.
pub struct SmoothProblem<'a> {
    pub n: usize,
    pub objective: Term<'a>,
    pub constraints: Vec<Term<'a>>,
    pub x0: Vec<f64>,
}

pub fn solve_smooth(p: SmoothProblem, opts: &BarrierOptions) -> Result<Solution> {
    let mut lp = LiftedProblem::new(0, p.n);
    lp.objective = Some(p.objective);
    lp.constraints = p.constraints;
    lp.x0 = p.x0;
    solve_lifted(&lp, opts)
}
