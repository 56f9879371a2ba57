use proptest::prelude::*;

use qrotor::fitting::{
    quality_sigma, reduce_branches, synthesize_branches, Band, Level, LevelDataset,
};
use qrotor::qnum::{q_number, q_number_base_q2};
use qrotor::series::{ito_exact_expansion, suq2_exact_expansion};
use qrotor::spectra::{energy, ModelKind, ModelParams};
use qrotor::DeformationParameter;

proptest! {
    #[test]
    fn q_numbers_symmetric_under_inversion(tau in 1e-3f64..1.0, x in -10.0f64..10.0) {
        let p = DeformationParameter::real(tau).unwrap();
        let a = q_number(x, &p).unwrap();
        let b = q_number(x, &p.inverse().unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn q_number_recurrence(tau in 1e-3f64..0.8, x in -6.0f64..6.0) {
        // [x+1] = [2][x] - [x-1]
        let p = DeformationParameter::real(tau).unwrap();
        let [a, b, c, two] = [x + 1.0, x, x - 1.0, 2.0].map(|v| q_number(v, &p).unwrap());
        prop_assert!((a - (two * b - c)).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn base_q2_doubles_tau(tau in 1e-3f64..0.5, x in 0.0f64..8.0) {
        let p = DeformationParameter::real(tau).unwrap();
        let p2 = DeformationParameter::real(2.0 * tau).unwrap();
        let a = q_number_base_q2(x, &p).unwrap();
        let b = q_number(x, &p2).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn round_trip_any_model(
        kind in prop::sample::select(ModelKind::ALL.to_vec()),
        a in 5.0f64..40.0,
        shape in 1e-4f64..5e-3,
        nu0 in 15000.0f64..20000.0,
    ) {
        let params = match kind {
            ModelKind::III => ModelParams::expansion(a, -shape * 1e-1),
            ModelKind::IV => ModelParams::holmberg_lipas(a / shape * 2.0, shape),
            _ => ModelParams::deformed(a, shape),
        };
        let lines = synthesize_branches(nu0, |l| energy(kind, &params, l), |l| energy(kind, &params, l), 16).unwrap();
        for band in [Band::V0, Band::V1] {
            let d = reduce_branches(&lines, band).unwrap();
            prop_assert_eq!(d.ells(), vec![2, 4, 6, 8, 10, 12, 14, 16]);
            for lvl in &d.levels {
                let e = energy(kind, &params, lvl.ell).unwrap();
                prop_assert!((lvl.energy - e).abs() <= 1e-10 * e.max(1.0));
            }
        }
    }

    #[test]
    fn sigma_is_homogeneous(res in prop::collection::vec(-1.0f64..1.0, 1..10), s in 0.1f64..10.0) {
        let levels: Vec<Level> = (0..res.len()).map(|i| Level { ell: 2 * i as u32 + 2, energy: 100.0 * (i + 1) as f64 }).collect();
        let data = LevelDataset::new("b", levels).unwrap();
        let th: Vec<f64> = data.levels.iter().zip(&res).map(|(l, r)| l.energy - r).collect();
        let sigma = quality_sigma(&data, &th).unwrap();
        let scaled = data.scaled(s);
        let th_s: Vec<f64> = th.iter().map(|e| e * s).collect();
        let sigma_s = quality_sigma(&scaled, &th_s).unwrap();
        prop_assert!(sigma >= 0.0);
        prop_assert!((sigma_s - s * sigma).abs() <= 1e-9 * sigma.max(1e-12) * s);
    }

    #[test]
    fn series_match_closed_forms(tau in 1e-3f64..0.02, ell in 0u32..=18) {
        let l = f64::from(ell);
        let s = suq2_exact_expansion(tau, 40).unwrap().evaluate(1.0, l).unwrap();
        let c = energy(ModelKind::I, &ModelParams::deformed(1.0, tau), ell).unwrap();
        prop_assert!((s - c).abs() <= 1e-8 * c.max(1e-300));
        let s = ito_exact_expansion(tau, 40).unwrap().evaluate(1.0, l).unwrap();
        let c = energy(ModelKind::II, &ModelParams::deformed(1.0, tau), ell).unwrap();
        prop_assert!((s - c).abs() <= 1e-8 * c.max(1e-300));
    }
}
