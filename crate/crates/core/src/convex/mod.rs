//! Convex solvers: a barrier interior-point engine for concave programs over
//! a Hermitian PSD matrix and auxiliary reals, a linear SDP front end, a
//! smooth front end and an operator-splitting SDP solver.

mod admm;
mod barrier;
mod sdp;

pub use crate::linalg::{largest_eigpair, psd_project};
pub use admm::{solve_sdp_admm, AdmmOptions};
pub use barrier::{
    affine, solve_lifted, term, Affine, BarrierOptions, FnTerm, Form, LiftedProblem, Smooth,
    Solution, Status, Term,
};
pub use sdp::{
    sdp_violation, solve_sdp, solve_smooth, Sense, SdpProblem, SdpSolution, SmoothProblem,
    SolverReport, TraceConstraint,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, outer, CMatrix, CVector};
    use alloc::vec;
    use alloc::vec::Vec;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn random_row(m: usize, rng: &mut ChaCha8Rng) -> CVector {
        CVector::from_fn(m, |_, _| crate::channel::complex_gaussian(rng))
    }

    #[test]
    fn two_element_relaxation_hits_l1_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let q = random_row(2, &mut rng);
            let w = q.map(|z| z.conj());
            let p = SdpProblem {
                dim: 2,
                objective: Some(outer(&w)),
                constraints: vec![],
                diag_one: true,
            };
            let s = solve_sdp(&p, &BarrierOptions::default()).unwrap();
            let l1: f64 = q.iter().map(|z| z.norm()).sum();
            assert_eq!(s.report.status, Status::Optimal);
            assert!((s.objective - l1 * l1).abs() < 1e-6, "{} vs {}", s.objective, l1 * l1);
        }
    }

    #[test]
    fn barrier_and_splitting_agree_on_random_sdps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [3usize, 4] {
            let q = random_row(m, &mut rng);
            let a1 = random_row(m, &mut rng);
            let c = outer(&q.map(|z| z.conj()));
            let a = outer(&a1);
            let cap = 0.5 * crate::linalg::inner(&a, &CMatrix::identity(m, m));
            let p = SdpProblem {
                dim: m,
                objective: Some(c),
                constraints: vec![TraceConstraint {
                    a,
                    sense: Sense::Le,
                    b: cap,
                }],
                diag_one: true,
            };
            let ipm = solve_sdp(&p, &BarrierOptions::default()).unwrap();
            let split = solve_sdp_admm(&p, &AdmmOptions::default()).unwrap();
            assert_eq!(ipm.report.status, Status::Optimal);
            assert!(ipm.report.primal_residual < 1e-8);
            assert_relative_eq!(ipm.objective, split.objective, max_relative = 1e-4);
        }
    }

    #[test]
    fn infeasible_sdp_is_detected() {
        let m = 3;
        let p = SdpProblem {
            dim: m,
            objective: None,
            constraints: vec![TraceConstraint {
                a: CMatrix::identity(m, m),
                sense: Sense::Ge,
                b: 3.5,
            }],
            diag_one: true,
        };
        let s = solve_sdp(&p, &BarrierOptions::default()).unwrap();
        assert_eq!(s.report.status, Status::Infeasible);
    }

    #[test]
    fn equality_constraints_hold_after_infeasible_start() {
        let m = 3;
        let mut e = CMatrix::zeros(m, m);
        e[(0, 1)] = Complex64::new(0.5, 0.0);
        e[(1, 0)] = Complex64::new(0.5, 0.0);
        let mut c = CMatrix::zeros(m, m);
        c[(1, 2)] = Complex64::new(0.0, 1.0);
        c[(2, 1)] = Complex64::new(0.0, -1.0);
        let p = SdpProblem {
            dim: m,
            objective: Some(c),
            constraints: vec![TraceConstraint {
                a: e,
                sense: Sense::Eq,
                b: 0.6,
            }],
            diag_one: true,
        };
        let s = solve_sdp(&p, &BarrierOptions::default()).unwrap();
        assert_eq!(s.report.status, Status::Optimal, "{:?} {}", s.report, s.v);
        assert!(s.report.primal_residual < 1e-8);
        assert_relative_eq!(s.v[(0, 1)].re, 0.6, epsilon = 1e-8);
        let split = solve_sdp_admm(&p, &AdmmOptions::default()).unwrap();
        assert_relative_eq!(s.objective, split.objective, epsilon = 1e-4);
    }

    #[test]
    fn smooth_water_filling() {
        let (a, b) = (3.0, 0.5);
        let obj = term(move |z: &[f64], g: &mut [f64], h: &mut crate::linalg::RMatrix| {
            let (u, v) = (1.0 + a * z[0], 1.0 + b * z[1]);
            if u <= 0.0 || v <= 0.0 {
                return None;
            }
            g[0] = a / u;
            g[1] = b / v;
            h[(0, 0)] = -a * a / (u * u);
            h[(1, 1)] = -b * b / (v * v);
            Some(u.ln() + v.ln())
        });
        let p = SmoothProblem {
            n: 2,
            objective: obj,
            constraints: vec![
                affine(vec![(0, 1.0)], 0.0),
                affine(vec![(1, 1.0)], 0.0),
                affine(vec![(0, -1.0), (1, -1.0)], 1.0),
            ],
            x0: vec![0.1, 0.1],
        };
        let s = solve_smooth(p, &BarrierOptions::default()).unwrap();
        // water level: 1/a + x0 = 1/b + x1 would need x1 < 0, so x = (1, 0)
        assert_relative_eq!(s.x[0], 1.0, epsilon = 1e-7);
        assert!(s.x[1].abs() < 1e-7);
        let _ = Vec::<f64>::new();
    }

    #[test]
    fn result_is_psd_with_unit_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = random_row(5, &mut rng);
        let p = SdpProblem {
            dim: 5,
            objective: Some(outer(&q)),
            constraints: vec![],
            diag_one: true,
        };
        let s = solve_sdp(&p, &BarrierOptions::default()).unwrap();
        let (vals, _) = hermitian_eig(&s.v);
        assert!(vals[4] > -1e-9);
        for i in 0..5 {
            assert!((s.v[(i, i)].re - 1.0).abs() < 1e-12);
        }
    }
}
