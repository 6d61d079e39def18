//! Rank-one recovery for lifted reflection designs: sequential tightening
//! of the largest-eigenvalue-to-trace ratio, principal-eigenvector
//! extraction and Gaussian randomization.

use alloc::vec::Vec;
use num_complex::Complex64;
use rand_core::RngCore;

use crate::channel::complex_gaussian;
use crate::convex::{affine, solve_lifted, BarrierOptions, Form, LiftedProblem, Status};
use crate::error::{Error, Result};
use crate::linalg::{fix_global_phase, hermitian_eig, outer, unit_modulus, CMatrix, CVector};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrocrOptions {
    pub delta0: f64,
    /// Objective change threshold.
    pub eps1: f64,
    /// Required closeness of the ratio parameter to one.
    pub eps2: f64,
    /// The run gives up once the step falls below this.
    pub delta_min: f64,
    pub max_iters: usize,
    pub barrier: BarrierOptions,
}

impl Default for SrocrOptions {
    fn default() -> Self {
        Self {
            delta0: 0.1,
            eps1: 1e-3,
            eps2: 1e-3,
            delta_min: 1e-6,
            max_iters: 200,
            barrier: BarrierOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrocrResult {
    pub v_lifted: CMatrix,
    /// Unit-modulus vector from the principal eigenvector, first entry real.
    pub v: CVector,
    pub objective: f64,
    /// `lambda_max / Tr` of the returned matrix.
    pub ratio: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Ratio parameter of every accepted solve.
    pub omegas: Vec<f64>,
}

/// Largest-eigenvalue-to-trace ratio.
pub fn eig_ratio(v: &CMatrix) -> f64 {
    let (vals, _) = hermitian_eig(v);
    let tr: f64 = (0..v.nrows()).map(|m| v[(m, m)].re).sum();
    if tr > 0.0 {
        vals[0] / tr
    } else {
        0.0
    }
}

/// Unit-modulus vector with the phases of the principal eigenvector.
pub fn principal_phases(v: &CMatrix) -> CVector {
    let (_, vecs) = hermitian_eig(v);
    fix_global_phase(&unit_modulus(&vecs.column(0).into_owned()))
}

/// Rank-one factor of a numerically rank-one `v`.
pub fn extract_rank_one(v: &CMatrix) -> Result<CVector> {
    let (vals, vecs) = hermitian_eig(v);
    if vals.is_empty() || vals[0] <= 0.0 {
        return Err(Error::NotRankOne { ratio: f64::INFINITY });
    }
    let ratio = if vals.len() > 1 { vals[1].max(0.0) / vals[0] } else { 0.0 };
    if ratio > 1e-6 {
        return Err(Error::NotRankOne { ratio });
    }
    let u = vecs.column(0).into_owned() * Complex64::new(vals[0].sqrt(), 0.0);
    Ok(fix_global_phase(&unit_modulus(&u)))
}

/// Draws `n` vectors with covariance `v`, projects each onto the unit
/// modulus set and keeps the best under `eval`.
pub fn gaussian_randomization<R, F>(v: &CMatrix, n: usize, mut eval: F, rng: &mut R) -> (CVector, f64)
where
    R: RngCore,
    F: FnMut(&CVector) -> f64,
{
    let m = v.nrows();
    let (vals, vecs) = hermitian_eig(v);
    let mut factor = vecs.clone();
    for (j, l) in vals.iter().enumerate() {
        let s = Complex64::new(l.max(0.0).sqrt(), 0.0);
        for i in 0..m {
            factor[(i, j)] *= s;
        }
    }
    let mut best = (CVector::from_element(m, crate::linalg::ONE), f64::NEG_INFINITY);
    for _ in 0..n.max(1) {
        let z = CVector::from_fn(m, |_, _| complex_gaussian(rng));
        let cand = fix_global_phase(&unit_modulus(&(&factor * z)));
        let val = eval(&cand);
        if val > best.1 {
            best = (cand, val);
        }
    }
    best
}

/// Solves a lifted reflection problem with a progressively enforced rank-one
/// constraint `u^H V u >= omega Tr(V)`, `u` being the principal eigenvector
/// of the previous accepted iterate.
///
/// `build` fills a fresh problem each round; form 0 is reserved for the
/// rank constraint and must not be referenced by the builder.
pub fn srocr_solve<'a, F>(dim: usize, n_aux: usize, build: F, opts: &SrocrOptions) -> Result<SrocrResult>
where
    F: Fn(&mut LiftedProblem<'a>),
{
    let trace_norm = dim as f64;
    let identity = CMatrix::identity(dim, dim);
    let solve = |omega: f64, u: &CVector, start: Option<&CMatrix>| -> Result<Option<(CMatrix, f64)>> {
        let mut lp = LiftedProblem::new(dim, n_aux);
        lp.diag_one = true;
        let mut a = outer(u);
        a -= &identity * Complex64::new(omega, 0.0);
        lp.add_form(Form::Dense(a));
        build(&mut lp);
        lp.v0 = start.map(|s| s * Complex64::new(0.9, 0.0) + &identity * Complex64::new(0.1, 0.0));
        if omega > 0.0 {
            lp.constraints.push(affine(alloc::vec![(0, 1.0 / trace_norm)], 0.0));
        }
        let sol = solve_lifted(&lp, &opts.barrier)?;
        Ok(match sol.status {
            Status::Infeasible => None,
            _ => Some((sol.v, sol.objective)),
        })
    };

    let e1 = CVector::from_fn(dim, |i, _| if i == 0 { crate::linalg::ONE } else { crate::linalg::ZERO });
    let (mut v_cur, mut obj_cur) = solve(0.0, &e1, None)?
        .ok_or_else(|| Error::Infeasible("relaxed reflection problem has no feasible point".into()))?;
    let mut omegas = alloc::vec![0.0];
    let mut delta = opts.delta0;
    let mut ratio = eig_ratio(&v_cur);
    let mut omega = (ratio + delta).min(1.0);
    let mut last_accepted_omega = 0.0;
    let mut converged = ratio >= 1.0 - opts.eps2;
    let mut iterations = 1;
    while !converged && iterations < opts.max_iters {
        iterations += 1;
        let (_, vecs) = hermitian_eig(&v_cur);
        let u = vecs.column(0).into_owned();
        // a solver failure deep in the tightening counts as an infeasible step
        match solve(omega, &u, Some(&v_cur)).unwrap_or(None) {
            Some((v, obj)) => {
                let change = (obj - obj_cur).abs();
                v_cur = v;
                obj_cur = obj;
                last_accepted_omega = omega;
                omegas.push(omega);
                delta = opts.delta0;
                ratio = eig_ratio(&v_cur);
                if change <= opts.eps1 && 1.0 - last_accepted_omega <= opts.eps2 {
                    converged = true;
                    break;
                }
            }
            None => {
                delta *= 0.5;
                if delta < opts.delta_min {
                    break;
                }
            }
        }
        omega = (ratio + delta).min(1.0);
    }
    if ratio >= 1.0 - opts.eps2 && last_accepted_omega == 0.0 {
        // the relaxation itself was already rank one
        converged = true;
    }
    Ok(SrocrResult {
        v: principal_phases(&v_cur),
        v_lifted: v_cur,
        objective: obj_cur,
        ratio,
        converged,
        iterations,
        omegas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{affine, Form};
    use crate::linalg::{row_form, row_gain};
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn rand_row(m: usize, rng: &mut ChaCha8Rng) -> CVector {
        CVector::from_fn(m, |_, _| complex_gaussian(rng))
    }

    #[test]
    fn rank_one_input_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = unit_modulus(&rand_row(4, &mut rng));
        let got = extract_rank_one(&outer(&v)).unwrap();
        let want = fix_global_phase(&v);
        assert!((got - want).norm() < 1e-9);
        assert!(matches!(
            extract_rank_one(&CMatrix::identity(2, 2)),
            Err(Error::NotRankOne { .. })
        ));
    }

    #[test]
    fn tiny_perturbation_still_passes_rank_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = unit_modulus(&rand_row(3, &mut rng));
        let w = rand_row(3, &mut rng);
        let mut big = outer(&v);
        big += outer(&w) * Complex64::new(1e-8 / w.norm_squared(), 0.0);
        let got = extract_rank_one(&big).unwrap();
        let rebuilt = outer(&got);
        assert!((rebuilt - big).iter().all(|z| z.norm() < 1e-4));
    }

    #[test]
    fn two_element_gain_matches_aligned_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let q = rand_row(2, &mut rng);
            let w = row_form(&q);
            let res = srocr_solve(
                2,
                0,
                |lp| {
                    let i = lp.add_form(Form::RankOne(w.clone()));
                    lp.objective = Some(affine(alloc::vec![(i, 1.0)], 0.0));
                },
                &SrocrOptions::default(),
            )
            .unwrap();
            let l1: f64 = q.iter().map(|z| z.norm()).sum();
            assert!(res.converged);
            assert!((row_gain(&q, &res.v) - l1 * l1).abs() < 1e-4 * l1 * l1);
            assert!(res.ratio >= 1.0 - 1e-3);
        }
    }

    #[test]
    fn sum_of_two_gains_forces_tightening() {
        // two orthogonal directions make the relaxation rank two
        let m = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let qa = rand_row(m, &mut rng);
        let qb = rand_row(m, &mut rng);
        let (wa, wb) = (row_form(&qa), row_form(&qb));
        let res = srocr_solve(
            m,
            0,
            |lp| {
                let a = lp.add_form(Form::RankOne(wa.clone()));
                let b = lp.add_form(Form::RankOne(wb.clone()));
                lp.objective = Some(affine(alloc::vec![(a, 1.0), (b, 1.0)], 0.0));
            },
            &SrocrOptions::default(),
        )
        .unwrap();
        assert!(res.ratio >= 1.0 - 1e-3, "ratio {}", res.ratio);
        for pair in res.omegas.windows(2) {
            assert!(pair[1] >= pair[0]);
        }
        let achieved = row_gain(&qa, &res.v) + row_gain(&qb, &res.v);
        // best-of-grid for comparison
        let mut grid = 0.0f64;
        let n = 64;
        for i in 0..n {
            for j in 0..n {
                let t1 = core::f64::consts::TAU * i as f64 / n as f64;
                let t2 = core::f64::consts::TAU * j as f64 / n as f64;
                let v = CVector::from_vec(alloc::vec![
                    crate::linalg::ONE,
                    Complex64::from_polar(1.0, t1),
                    Complex64::from_polar(1.0, t2)
                ]);
                grid = grid.max(row_gain(&qa, &v) + row_gain(&qb, &v));
            }
        }
        assert!(achieved >= 0.95 * grid, "{achieved} vs {grid}");
    }

    #[test]
    fn randomization_respects_relaxation_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let q = rand_row(2, &mut rng);
        let a = rand_row(2, &mut rng);
        let mut v = outer(&unit_modulus(&a)) * Complex64::new(0.6, 0.0);
        v += CMatrix::identity(2, 2) * Complex64::new(0.4, 0.0);
        let (best, val) = gaussian_randomization(&v, 1000, |x| row_gain(&q, x), &mut rng);
        assert!((val - row_gain(&q, &best)).abs() < 1e-12);
        let l1: f64 = q.iter().map(|z| z.norm()).sum();
        assert!(val <= l1 * l1 + 1e-9);
        // 256 x 256 grid over the second phase, the first is fixed by rotation
        let mut grid = 0.0f64;
        for i in 0..256 {
            let t = core::f64::consts::TAU * i as f64 / 256.0;
            let x = CVector::from_vec(alloc::vec![crate::linalg::ONE, Complex64::from_polar(1.0, t)]);
            grid = grid.max(row_gain(&q, &x));
        }
        assert!(val >= 0.98 * grid);
    }

    #[test]
    fn single_sample_is_returned() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut calls = 0;
        let (v, _) = gaussian_randomization(&CMatrix::identity(3, 3), 1, |_| {
            calls += 1;
            0.0
        }, &mut rng);
        assert_eq!(calls, 1);
        assert!(v.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }
}
