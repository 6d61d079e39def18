use irsplan_core::ao::{tails, user_ordering};
use irsplan_core::channel::{array_response, ArrayShape};
use irsplan_core::geometry::{PathLossModel, Point3};
use irsplan_core::linalg::{fix_global_phase, row_gain, CVector};
use irsplan_core::rates::{
    fdma_rates_from_gains, noma_rates_from_gains, tdma_closed_form, DecodingOrder,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(m: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), m)
        .prop_map(|v| CVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| Complex64::new(a, b))))
}

fn phases(m: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec(0.0f64..core::f64::consts::TAU, m)
        .prop_map(|v| CVector::from_iterator(v.len(), v.into_iter().map(|t| Complex64::from_polar(1.0, t))))
}

proptest! {
    #[test]
    fn array_response_has_unit_modulus(elev in -1.6f64..1.6, azim in 0.0f64..3.2, mh in 1usize..5, mv in 1usize..5) {
        let shape = ArrayShape::new(mh * mv, mh, 0.5).unwrap();
        let a = array_response(&shape, elev, azim);
        prop_assert_eq!(a.len(), mh * mv);
        for z in a.iter() {
            prop_assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn path_loss_decreases_with_distance(d1 in 1.0f64..100.0, d2 in 1.0f64..100.0, extra in 0.01f64..10.0, alpha in 2.0f64..4.0) {
        let pl = PathLossModel::new(1e-3, alpha, alpha);
        prop_assert!(pl.cascaded(d1 + extra, d2) < pl.cascaded(d1, d2));
        prop_assert!(pl.cascaded(d1, d2 + extra) < pl.cascaded(d1, d2));
    }

    #[test]
    fn closed_form_dominates_any_phase_vector(q in complex_vec(4), v in phases(4)) {
        let (_, best) = tdma_closed_form(&q);
        prop_assert!(row_gain(&q, &v) <= best * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn global_phase_does_not_change_gains(q in complex_vec(5), v in phases(5)) {
        let g = row_gain(&q, &v);
        let f = fix_global_phase(&v);
        prop_assert!((row_gain(&q, &f) - g).abs() <= 1e-9 * g.max(1.0));
        prop_assert!(f[0].im.abs() < 1e-12 && f[0].re > 0.0);
    }

    #[test]
    fn equal_gain_noma_sum_rate_telescopes(c in 0.01f64..100.0, p in prop::collection::vec(0.01f64..1.0, 1..5)) {
        let k = p.len();
        let r = noma_rates_from_gains(&vec![c; k], &p, &DecodingOrder::identity(k), 1.0);
        let total: f64 = p.iter().sum();
        let sum: f64 = r.iter().sum();
        prop_assert!((sum - (1.0 + c * total).log2()).abs() < 1e-10);
        prop_assert!(r.iter().all(|x| *x >= 0.0));
    }

    #[test]
    fn fdma_rates_are_shares_of_single_user_rates(g in prop::collection::vec(0.0f64..50.0, 1..5)) {
        let k = g.len();
        let p = vec![1.0 / k as f64; k];
        let r = fdma_rates_from_gains(&g, &p, 1.0);
        for (ri, gi) in r.iter().zip(g.iter()) {
            prop_assert!((ri * k as f64 - (1.0 + gi).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn tails_sum_to_budget(p in prop::collection::vec(0.0f64..1.0, 1..6), seed in 0u64..1000) {
        let k = p.len();
        let mut seq: Vec<usize> = (0..k).collect();
        seq.rotate_left((seed as usize) % k);
        let order = DecodingOrder::from_sequence(&seq).unwrap();
        let beta = tails(&p, &order);
        prop_assert_eq!(beta.len(), k + 1);
        prop_assert!((beta[0] - p.iter().sum::<f64>()).abs() < 1e-12);
        prop_assert_eq!(beta[k], 0.0);
        prop_assert!(beta.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn heuristic_order_respects_weights(w in prop::collection::vec(0.0f64..1.0, 1..6), x in prop::collection::vec(25.0f64..50.0, 6)) {
        let users: Vec<Point3> = w.iter().enumerate().map(|(i, _)| Point3::new(x[i], 0.0, 1.5)).collect();
        let s0 = Point3::new(35.0, 5.0, 5.0);
        let order = user_ordering(&w, s0, &users);
        for a in 0..w.len() {
            for b in 0..w.len() {
                if w[a] < w[b] {
                    prop_assert!(order.rank(a) < order.rank(b));
                }
            }
        }
    }
}
