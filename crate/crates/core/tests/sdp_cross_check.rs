//! Barrier and splitting solvers on the same random SDPs.

use irsplan_core::channel::complex_gaussian;
use irsplan_core::convex::{solve_sdp, solve_sdp_admm, AdmmOptions, BarrierOptions, SdpProblem, Sense, Status, TraceConstraint};
use irsplan_core::linalg::{outer, CMatrix, CVector};
use irsplan_core::rng::sub_rng;

fn gram(rows: &[CVector]) -> CMatrix {
    rows.iter().fold(CMatrix::zeros(rows[0].len(), rows[0].len()), |acc, q| {
        acc + outer(&q.map(|z| z.conj()))
    })
}

fn random_rows(m: usize, n: usize, seed: u64) -> Vec<CVector> {
    let mut rng = sub_rng(seed, 1);
    (0..n)
        .map(|_| CVector::from_fn(m, |_, _| complex_gaussian(&mut rng)))
        .collect()
}

#[test]
fn unconstrained_diag_one_agrees() {
    for seed in 0..8 {
        let rows = random_rows(3 + (seed as usize % 2), 2, seed);
        let c = gram(&rows);
        let p = SdpProblem {
            dim: c.nrows(),
            objective: Some(c),
            constraints: vec![],
            diag_one: true,
        };
        let ipm = solve_sdp(&p, &BarrierOptions::default()).unwrap();
        let admm = solve_sdp_admm(&p, &AdmmOptions::default()).unwrap();
        assert_eq!(ipm.report.status, Status::Optimal);
        let rel = (ipm.objective - admm.objective).abs() / ipm.objective.abs();
        assert!(rel < 1e-4, "seed {seed}: ipm {} admm {}", ipm.objective, admm.objective);
    }
}

#[test]
fn trace_constrained_agrees() {
    for seed in 0..6 {
        let rows = random_rows(3, 2, 100 + seed);
        let c = outer(&rows[0].map(|z| z.conj()));
        let g = outer(&rows[1].map(|z| z.conj()));
        // ask for at least half of the best achievable second gain
        let l1: f64 = rows[1].iter().map(|z| z.norm()).sum();
        let p = SdpProblem {
            dim: 3,
            objective: Some(c),
            constraints: vec![TraceConstraint {
                a: g,
                sense: Sense::Ge,
                b: 0.5 * l1 * l1,
            }],
            diag_one: true,
        };
        let ipm = solve_sdp(&p, &BarrierOptions::default()).unwrap();
        let admm = solve_sdp_admm(&p, &AdmmOptions::default()).unwrap();
        assert_eq!(ipm.report.status, Status::Optimal);
        assert!(ipm.report.primal_residual < 1e-8);
        let rel = (ipm.objective - admm.objective).abs() / ipm.objective.abs();
        assert!(rel < 1e-4, "seed {seed}: ipm {} admm {}", ipm.objective, admm.objective);
    }
}
