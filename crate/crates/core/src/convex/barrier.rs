//! Primal log-barrier interior-point method.
//!
//! The matrix variable `V` only enters through real linear forms
//! `t_l = Re Tr(A_l V)`, so the Newton system is reduced by a Schur
//! complement to a small dense system in the form multipliers, the equality
//! multipliers and the auxiliary step. Each Newton step costs a handful of
//! `M x M` products.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitize, quad_form, CMatrix, CVector, RMatrix};
#[allow(unused_imports)]
use num_traits::Float;

/// Twice differentiable function of `z = (t, x)`.
///
/// `eval` writes the gradient and Hessian into zeroed buffers and returns
/// the value, or `None` outside the open domain.
pub trait Smooth {
    fn eval(&self, z: &[f64], grad: &mut [f64], hess: &mut RMatrix) -> Option<f64>;
}

pub type Term<'a> = Box<dyn Smooth + 'a>;

/// `offset + sum coef_i z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub coef: Vec<(usize, f64)>,
    pub offset: f64,
}

impl Smooth for Affine {
    fn eval(&self, z: &[f64], grad: &mut [f64], _hess: &mut RMatrix) -> Option<f64> {
        let mut v = self.offset;
        for &(i, c) in &self.coef {
            v += c * z[i];
            grad[i] += c;
        }
        Some(v)
    }
}

/// Closure-backed term.
pub struct FnTerm<F>(pub F);

impl<F> Smooth for FnTerm<F>
where
    F: Fn(&[f64], &mut [f64], &mut RMatrix) -> Option<f64>,
{
    fn eval(&self, z: &[f64], grad: &mut [f64], hess: &mut RMatrix) -> Option<f64> {
        (self.0)(z, grad, hess)
    }
}

pub fn affine<'a>(coef: Vec<(usize, f64)>, offset: f64) -> Term<'a> {
    Box::new(Affine { coef, offset })
}

pub fn term<'a, F>(f: F) -> Term<'a>
where
    F: Fn(&[f64], &mut [f64], &mut RMatrix) -> Option<f64> + 'a,
{
    Box::new(FnTerm(f))
}

/// Hermitian coefficient matrix of a linear form `Re Tr(A V)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    Dense(CMatrix),
    /// `A = w w^H`.
    RankOne(CVector),
}

impl Form {
    pub fn apply(&self, v: &CMatrix) -> f64 {
        match self {
            Form::Dense(a) => crate::linalg::inner(a, v),
            Form::RankOne(w) => quad_form(v, w),
        }
    }

    /// `V A V`.
    fn sandwich(&self, v: &CMatrix) -> CMatrix {
        match self {
            Form::Dense(a) => v * a * v,
            Form::RankOne(w) => {
                let vw = v * w;
                &vw * vw.adjoint()
            }
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Form::Dense(a) => a.clone(),
            Form::RankOne(w) => w * w.adjoint(),
        }
    }
}

/// Maximize a concave objective of `z = (t(V), x)` subject to concave
/// constraints `g_i(z) > 0`, linear equalities on `V`, optionally
/// `diag(V) = 1`, and `V` Hermitian positive definite.
///
/// With `dim = 0` there is no matrix variable and `z = x`.
pub struct LiftedProblem<'a> {
    pub dim: usize,
    pub diag_one: bool,
    pub forms: Vec<Form>,
    pub equalities: Vec<(Form, f64)>,
    pub n_aux: usize,
    /// `None` asks only for a strictly feasible point.
    pub objective: Option<Term<'a>>,
    pub constraints: Vec<Term<'a>>,
    /// Initial auxiliary point; must lie in every term's domain.
    pub x0: Vec<f64>,
    /// Initial matrix, identity when absent.
    pub v0: Option<CMatrix>,
}

impl<'a> LiftedProblem<'a> {
    pub fn new(dim: usize, n_aux: usize) -> Self {
        Self {
            dim,
            diag_one: false,
            forms: Vec::new(),
            equalities: Vec::new(),
            n_aux,
            objective: None,
            constraints: Vec::new(),
            x0: vec![0.0; n_aux],
            v0: None,
        }
    }

    /// Adds a form and returns its index in `z`.
    pub fn add_form(&mut self, f: Form) -> usize {
        self.forms.push(f);
        self.forms.len() - 1
    }

    /// Index of auxiliary variable `i` in `z`.
    pub fn aux(&self, i: usize) -> usize {
        self.forms.len() + i
    }

    fn barrier_parameter(&self) -> f64 {
        (self.constraints.len() + self.dim) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierOptions {
    /// Stop when the duality gap bound falls below
    /// `gap_tol * max(1, |objective|)`.
    pub gap_tol: f64,
    /// Barrier weight growth per outer iteration.
    pub mu: f64,
    pub t0: f64,
    pub max_newton: usize,
    /// Centering stops when half the squared Newton decrement is below this.
    pub newton_tol: f64,
    /// Stop as soon as the objective provably reaches or misses this value.
    pub target: Option<f64>,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            mu: 20.0,
            t0: 1.0,
            max_newton: 1500,
            newton_tol: 1e-10,
            target: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    /// A feasible point with objective at least the target was found.
    TargetReached,
    /// The optimum is certified below the target.
    TargetUnreachable,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: Status,
    pub v: CMatrix,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub objective: f64,
    /// Bound on the distance to the optimum.
    pub gap: f64,
    pub equality_residual: f64,
    pub newton_steps: usize,
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        !matches!(self.status, Status::Infeasible)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    PhaseOne,
    PhaseTwo,
}

struct Engine<'p, 'a> {
    p: &'p LiftedProblem<'a>,
    mode: Mode,
    nz: usize,
    r: usize,
}

struct Eval {
    value: f64,
    grad: Vec<f64>,
    hess: RMatrix,
    objective: f64,
}

struct Direction {
    dv: CMatrix,
    dx: Vec<f64>,
    dec2: f64,
}

impl<'p, 'a> Engine<'p, 'a> {
    fn new(p: &'p LiftedProblem<'a>, mode: Mode) -> Self {
        let r = p.forms.len();
        let extra = usize::from(mode == Mode::PhaseOne);
        Self {
            p,
            mode,
            nz: r + p.n_aux + extra,
            r,
        }
    }

    fn forms_at(&self, v: &CMatrix) -> Vec<f64> {
        self.p.forms.iter().map(|f| f.apply(v)).collect()
    }

    /// Barrier function without the log-det part.
    fn eval(&self, t: &[f64], x: &[f64], tau: f64) -> Option<Eval> {
        let nz = self.nz;
        let ni = self.r + self.p.n_aux;
        let mut z = Vec::with_capacity(nz);
        z.extend_from_slice(t);
        z.extend_from_slice(x);
        let mut grad = vec![0.0; nz];
        let mut hess = RMatrix::zeros(nz, nz);
        let mut gi = vec![0.0; ni];
        let mut hi = RMatrix::zeros(ni, ni);
        let mut value = 0.0;
        let objective;
        let sigma = if self.mode == Mode::PhaseOne { z[ni] } else { 0.0 };

        match self.mode {
            Mode::PhaseOne => {
                // sigma < 1 keeps the problem bounded when the
                // constraints alone do not
                if !(sigma < 1.0) {
                    return None;
                }
                objective = sigma;
                value -= tau * sigma + (1.0 - sigma).ln();
                grad[ni] += 1.0 / (1.0 - sigma) - tau;
                hess[(ni, ni)] += 1.0 / ((1.0 - sigma) * (1.0 - sigma));
            }
            Mode::PhaseTwo => {
                objective = match &self.p.objective {
                    Some(obj) => {
                        let f = obj.eval(&z[..ni], &mut gi, &mut hi)?;
                        if !f.is_finite() {
                            return None;
                        }
                        value -= tau * f;
                        for i in 0..ni {
                            grad[i] -= tau * gi[i];
                            for j in 0..ni {
                                hess[(i, j)] -= tau * hi[(i, j)];
                            }
                        }
                        f
                    }
                    None => 0.0,
                };
            }
        }

        for c in &self.p.constraints {
            gi.iter_mut().for_each(|g| *g = 0.0);
            hi.fill(0.0);
            let mut g = c.eval(&z[..ni], &mut gi, &mut hi)?;
            if self.mode == Mode::PhaseOne {
                g -= sigma;
            }
            if !(g > 0.0) || !g.is_finite() {
                return None;
            }
            value -= g.ln();
            let inv = 1.0 / g;
            for i in 0..ni {
                grad[i] -= gi[i] * inv;
            }
            let mut full_grad = gi.clone();
            if self.mode == Mode::PhaseOne {
                grad[ni] += inv;
                full_grad.push(-1.0);
            }
            for i in 0..nz {
                for j in 0..nz {
                    hess[(i, j)] += full_grad[i] * full_grad[j] * inv * inv;
                }
            }
            for i in 0..ni {
                for j in 0..ni {
                    hess[(i, j)] -= hi[(i, j)] * inv;
                }
            }
        }
        Some(Eval {
            value,
            grad,
            hess,
            objective,
        })
    }

    fn log_det(v: &CMatrix) -> Option<f64> {
        crate::linalg::hermitian_log_det(v)
    }

    /// Full barrier value, `None` outside the domain.
    fn merit(&self, v: &CMatrix, x: &[f64], tau: f64) -> Option<(f64, Eval)> {
        let ld = if self.p.dim > 0 { Self::log_det(v)? } else { 0.0 };
        let t = self.forms_at(v);
        let e = self.eval(&t, x, tau)?;
        Some((e.value - ld, e))
    }

    fn equality_state(&self, v: &CMatrix) -> (Vec<f64>, Vec<f64>) {
        let mut cur = Vec::new();
        let mut target = Vec::new();
        if self.p.diag_one {
            for m in 0..self.p.dim {
                cur.push(v[(m, m)].re);
                target.push(1.0);
            }
        }
        for (f, e) in &self.p.equalities {
            cur.push(f.apply(v));
            target.push(*e);
        }
        (cur, target)
    }

    fn direction(&self, v: &CMatrix, e: &Eval) -> Option<Direction> {
        let r = self.r;
        let nx = self.nz - r;
        let g = &e.grad;
        let h = &e.hess;
        if self.p.dim == 0 {
            let rhs = RMatrix::from_fn(nx, 1, |i, _| -g[i]);
            let sol = solve_linear(h.clone(), rhs)?;
            let dx: Vec<f64> = (0..nx).map(|i| sol[(i, 0)]).collect();
            let dec2 = -(0..nx).map(|i| g[i] * dx[i]).sum::<f64>();
            return Some(Direction {
                dv: CMatrix::zeros(0, 0),
                dx,
                dec2,
            });
        }

        let dim = self.p.dim;
        let t = self.forms_at(v);
        let w: Vec<CMatrix> = self.p.forms.iter().map(|f| f.sandwich(v)).collect();

        // equality sandwiches: diag entries use columns of V
        let n_diag = if self.p.diag_one { dim } else { 0 };
        let n_gen = self.p.equalities.len();
        let neq = n_diag + n_gen;
        let u_gen: Vec<CMatrix> = self.p.equalities.iter().map(|(f, _)| f.sandwich(v)).collect();
        let (e_cur, e_tgt) = self.equality_state(v);

        let mut pm = RMatrix::zeros(r, r);
        for l in 0..r {
            for k in 0..r {
                pm[(l, k)] = match &self.p.forms[l] {
                    Form::Dense(a) => crate::linalg::inner(a, &w[k]),
                    Form::RankOne(wl) => quad_form(&w[k], wl),
                };
            }
        }
        let mut cm = RMatrix::zeros(r, neq);
        for l in 0..r {
            for m in 0..n_diag {
                cm[(l, m)] = w[l][(m, m)].re;
            }
            for j in 0..n_gen {
                cm[(l, n_diag + j)] = self.p.forms[l].apply(&u_gen[j]);
            }
        }
        let mut dm = RMatrix::zeros(neq, neq);
        for i in 0..n_diag {
            for j in 0..n_diag {
                dm[(i, j)] = v[(i, j)].norm_sqr();
            }
            for j in 0..n_gen {
                let val = u_gen[j][(i, i)].re;
                dm[(i, n_diag + j)] = val;
                dm[(n_diag + j, i)] = val;
            }
        }
        for i in 0..n_gen {
            for j in 0..n_gen {
                dm[(n_diag + i, n_diag + j)] = self.p.equalities[i].0.apply(&u_gen[j]);
            }
        }

        let htt = h.view((0, 0), (r, r));
        let htx = h.view((0, r), (r, nx));
        let hxt = h.view((r, 0), (nx, r));
        let hxx = h.view((r, r), (nx, nx));
        let n = r + neq + nx;
        let mut a = RMatrix::zeros(n, n);
        let mut rhs = RMatrix::zeros(n, 1);
        let htt_p = htt * &pm;
        let htt_c = htt * &cm;
        let hxt_p = hxt * &pm;
        let hxt_c = hxt * &cm;
        let tv = nalgebra::DVector::from_column_slice(&t);
        let htt_t = htt * &tv;
        let hxt_t = hxt * &tv;
        for i in 0..r {
            for k in 0..r {
                a[(i, k)] = htt_p[(i, k)] + if i == k { 1.0 } else { 0.0 };
            }
            for j in 0..neq {
                a[(i, r + j)] = htt_c[(i, j)];
            }
            for j in 0..nx {
                a[(i, r + neq + j)] = -htx[(i, j)];
            }
            rhs[(i, 0)] = g[i] + htt_t[i];
        }
        for j in 0..neq {
            for l in 0..r {
                a[(r + j, l)] = cm[(l, j)];
            }
            for i in 0..neq {
                a[(r + j, r + i)] = dm[(j, i)];
            }
            rhs[(r + j, 0)] = 2.0 * e_cur[j] - e_tgt[j];
        }
        for i in 0..nx {
            for k in 0..r {
                a[(r + neq + i, k)] = hxt_p[(i, k)];
            }
            for j in 0..neq {
                a[(r + neq + i, r + j)] = hxt_c[(i, j)];
            }
            for j in 0..nx {
                a[(r + neq + i, r + neq + j)] = -hxx[(i, j)];
            }
            rhs[(r + neq + i, 0)] = g[r + i] + hxt_t[i];
        }
        let sol = solve_linear(a, rhs)?;
        let b: Vec<f64> = (0..r).map(|i| sol[(i, 0)]).collect();
        let nu: Vec<f64> = (0..neq).map(|i| sol[(r + i, 0)]).collect();
        let dx: Vec<f64> = (0..nx).map(|i| sol[(r + neq + i, 0)]).collect();

        let mut dv = v.clone();
        for l in 0..r {
            dv -= &w[l] * Complex64::new(b[l], 0.0);
        }
        for m in 0..n_diag {
            let col = v.column(m);
            dv -= (col * col.adjoint()) * Complex64::new(nu[m], 0.0);
        }
        for j in 0..n_gen {
            dv -= &u_gen[j] * Complex64::new(nu[n_diag + j], 0.0);
        }
        hermitize(&mut dv);
        if n_diag > 0 {
            for m in 0..dim {
                // exact feasibility of the diagonal is preserved
                let want = e_tgt[m] - e_cur[m];
                dv[(m, m)] = Complex64::new(want, 0.0);
            }
        }

        let mut tp = vec![0.0; r];
        for l in 0..r {
            let mut s = t[l];
            for k in 0..r {
                s -= pm[(l, k)] * b[k];
            }
            for j in 0..neq {
                s -= cm[(l, j)] * nu[j];
            }
            tp[l] = s;
        }
        // decrement as the Hessian quadratic form; the equivalent
        // gradient expression cancels badly once the multipliers grow
        let l = crate::linalg::hermitian_cholesky(v)?;
        let y = l.solve_lower_triangular(&dv)?;
        let xm = l.solve_lower_triangular(&y.adjoint())?;
        let mut zeta = tp.clone();
        zeta.extend_from_slice(&dx);
        let zv = nalgebra::DVector::from_vec(zeta);
        let dec2 = xm.norm_squared() + zv.dot(&(h * &zv));
        Some(Direction { dv, dx, dec2 })
    }
}

/// Equality residual below which the iterate counts as feasible.
const EQ_TOL: f64 = 1e-9;

const MAX_CENTERING_STEPS: usize = 100;

fn solve_linear(a: RMatrix, rhs: RMatrix) -> Option<RMatrix> {
    let n = a.nrows();
    let mut lu = a.clone().lu();
    if !lu.is_invertible() {
        // tiny Tikhonov shift for singular but consistent systems
        let scale = a.amax().max(1.0) * 1e-12;
        lu = (a.clone() + RMatrix::identity(n, n) * scale).lu();
    }
    let mut sol = lu.solve(&rhs)?;
    // two rounds of iterative refinement against the unshifted matrix
    for _ in 0..2 {
        let res = &rhs - &a * &sol;
        sol += lu.solve(&res)?;
    }
    if sol.iter().all(|z| z.is_finite()) {
        Some(sol)
    } else {
        None
    }
}

struct State {
    v: CMatrix,
    x: Vec<f64>,
    steps: usize,
}

enum CenterExit {
    Centered,
    /// A phase-one point with every constraint strictly positive.
    Feasible,
    TargetReached,
    Stalled,
    Budget,
}

fn center(
    eng: &Engine,
    st: &mut State,
    tau: f64,
    opts: &BarrierOptions,
) -> Result<CenterExit> {
    let first = st.steps;
    let mut short_steps = 0;
    loop {
        if st.steps >= opts.max_newton {
            return Ok(CenterExit::Budget);
        }
        if st.steps - first >= MAX_CENTERING_STEPS {
            return Ok(CenterExit::Stalled);
        }
        let (f0, e) = eng
            .merit(&st.v, &st.x, tau)
            .ok_or_else(|| Error::Solver("iterate left the barrier domain".into()))?;
        if eng.mode == Mode::PhaseOne && eq_residual(eng, &st.v) < EQ_TOL {
            let t = eng.forms_at(&st.v);
            let n = eng.p.n_aux;
            if *st.x.last().unwrap() > 0.0
                || constraint_min(eng, &t, &st.x[..n]).is_some_and(|g| g > 0.0)
            {
                return Ok(CenterExit::Feasible);
            }
        }
        if eng.mode == Mode::PhaseTwo {
            if let Some(tg) = opts.target {
                if e.objective >= tg && eq_residual(eng, &st.v) < EQ_TOL {
                    return Ok(CenterExit::TargetReached);
                }
            }
        }
        let d = match eng.direction(&st.v, &e) {
            Some(d) => d,
            None => return Ok(CenterExit::Stalled),
        };
        let res = eq_residual(eng, &st.v);
        // the decrement cannot resolve below the rounding of the merit value
        let floor = 16.0 * f64::EPSILON * f0.abs();
        if res < EQ_TOL && d.dec2 * 0.5 <= opts.newton_tol.max(floor) {
            return Ok(CenterExit::Centered);
        }
        let mut s = 1.0;
        let mut accepted = false;
        while s > 1e-14 {
            let mut v = &st.v + &d.dv * Complex64::new(s, 0.0);
            hermitize(&mut v);
            let x: Vec<f64> = st.x.iter().zip(d.dx.iter()).map(|(a, b)| a + s * b).collect();
            if let Some((f1, _)) = eng.merit(&v, &x, tau) {
                let armijo = res > EQ_TOL || f1 <= f0 - 0.01 * s * d.dec2.max(0.0) + 4.0 * f64::EPSILON * f0.abs();
                if armijo {
                    st.v = v;
                    st.x = x;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        st.steps += 1;
        if accepted && s < 0.05 {
            short_steps += 1;
            if short_steps >= 3 {
                return Ok(CenterExit::Stalled);
            }
        } else {
            short_steps = 0;
        }
        if !accepted {
            return Ok(if d.dec2 < 1e-6 {
                CenterExit::Centered
            } else {
                CenterExit::Stalled
            });
        }
        if eng.p.diag_one {
            for m in 0..eng.p.dim {
                st.v[(m, m)] = Complex64::new(1.0, 0.0);
            }
        }
    }
}

fn eq_residual(eng: &Engine, v: &CMatrix) -> f64 {
    let (cur, tgt) = eng.equality_state(v);
    cur.iter().zip(tgt.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Runs phase one (if needed) and the barrier method.
pub fn solve_lifted(p: &LiftedProblem, opts: &BarrierOptions) -> Result<Solution> {
    if p.x0.len() != p.n_aux {
        return Err(Error::DimensionMismatch("x0 length differs from n_aux".into()));
    }
    let mut v = match &p.v0 {
        Some(v0) => v0.clone(),
        None => CMatrix::identity(p.dim, p.dim),
    };
    if v.nrows() != p.dim {
        return Err(Error::DimensionMismatch("v0 has the wrong size".into()));
    }
    if p.diag_one {
        for m in 0..p.dim {
            v[(m, m)] = Complex64::new(1.0, 0.0);
        }
    }
    if p.dim > 0 && Engine::log_det(&v).is_none() {
        return Err(Error::InvalidInput("initial matrix is not positive definite".into()));
    }
    let mut steps = 0;
    let mut x = p.x0.clone();

    let two = Engine::new(p, Mode::PhaseTwo);
    let needs_phase_one = two.merit(&v, &x, 1.0).is_none();
    if needs_phase_one {
        let one = Engine::new(p, Mode::PhaseOne);
        let t = one.forms_at(&v);
        // smallest constraint value at the start, ignoring sigma
        let probe = Engine::new(p, Mode::PhaseTwo);
        let min_g = constraint_min(&probe, &t, &x)
            .ok_or_else(|| Error::InvalidInput("start outside a constraint domain".into()))?;
        let mut xs = x.clone();
        xs.push(min_g - 1.0);
        let mut st = State { v, x: xs, steps };
        let m = (p.constraints.len() + p.dim + 1) as f64;
        let mut tau = opts.t0;
        let found = loop {
            match center(&one, &mut st, tau, opts)? {
                CenterExit::Feasible => break true,
                CenterExit::Budget => break false,
                CenterExit::Stalled | CenterExit::Centered | CenterExit::TargetReached => {
                    let sigma = *st.x.last().unwrap();
                    if sigma + m / tau < 0.0 || m / tau <= opts.gap_tol {
                        break false;
                    }
                    tau *= opts.mu;
                }
            }
        };
        steps = st.steps;
        st.x.pop();
        if !found {
            let t = two.forms_at(&st.v);
            return Ok(Solution {
                status: Status::Infeasible,
                t,
                v: st.v,
                x: st.x,
                objective: f64::NAN,
                gap: f64::INFINITY,
                equality_residual: 0.0,
                newton_steps: steps,
            });
        }
        v = st.v;
        x = st.x;
        if two.merit(&v, &x, 1.0).is_none() {
            return Err(Error::Solver("objective undefined at the phase-one point".into()));
        }
    }

    let finish = |st: State, status: Status, gap: f64| -> Solution {
        let t = two.forms_at(&st.v);
        let objective = match &p.objective {
            Some(_) => two.eval(&t, &st.x, 1.0).map(|e| e.objective).unwrap_or(f64::NAN),
            None => 0.0,
        };
        let equality_residual = eq_residual(&two, &st.v);
        Solution {
            status,
            t,
            v: st.v,
            x: st.x,
            objective,
            gap,
            equality_residual,
            newton_steps: st.steps,
        }
    };

    let mut st = State { v, x, steps };
    if p.objective.is_none() {
        if eq_residual(&two, &st.v) > EQ_TOL {
            center(&two, &mut st, 1.0, opts)?;
        }
        return Ok(finish(st, Status::Optimal, 0.0));
    }
    let m = p.barrier_parameter();
    let mut tau = opts.t0;
    loop {
        let exit = center(&two, &mut st, tau, opts)?;
        let gap = m / tau;
        match exit {
            CenterExit::TargetReached => return Ok(finish(st, Status::TargetReached, gap)),
            CenterExit::Budget => return Ok(finish(st, Status::MaxIterations, gap)),
            CenterExit::Feasible => unreachable!(),
            CenterExit::Centered | CenterExit::Stalled => {
                let t = two.forms_at(&st.v);
                let obj = two.eval(&t, &st.x, 1.0).map(|e| e.objective).unwrap_or(f64::NAN);
                if let Some(tg) = opts.target {
                    if obj + 1.01 * gap < tg {
                        return Ok(finish(st, Status::TargetUnreachable, gap));
                    }
                }
                // a stall means the direction is no longer accurate enough
                // to follow the central path; the gap bound still holds
                // approximately at this point
                if gap <= opts.gap_tol * obj.abs().max(1.0) || matches!(exit, CenterExit::Stalled) {
                    return Ok(finish(st, Status::Optimal, gap));
                }
                tau *= opts.mu;
            }
        }
    }
}

fn constraint_min(eng: &Engine, t: &[f64], x: &[f64]) -> Option<f64> {
    let ni = eng.r + eng.p.n_aux;
    let mut z = Vec::with_capacity(ni);
    z.extend_from_slice(t);
    z.extend_from_slice(x);
    let mut gi = vec![0.0; ni];
    let mut hi = RMatrix::zeros(ni, ni);
    let mut m = f64::INFINITY;
    for c in &eng.p.constraints {
        gi.iter_mut().for_each(|g| *g = 0.0);
        hi.fill(0.0);
        let g = c.eval(&z, &mut gi, &mut hi)?;
        if !g.is_finite() {
            return None;
        }
        m = m.min(g);
    }
    Some(if m.is_finite() { m } else { 0.0 })
}
