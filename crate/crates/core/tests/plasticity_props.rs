mod common;

use common::*;
use hencky::constitutive::LogStrainInvariants;
use hencky::plasticity::{return_map, trial_state, PlasticState};
use hencky::{MaterialParams, Tensor3, ToleranceSet};
use proptest::prelude::*;

fn params() -> MaterialParams {
    MaterialParams::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn plastic_steps_are_incompressible_and_consistent(f in gl_plus(0.3)) {
        let (p, tol) = (params(), ToleranceSet::default());
        let r = return_map(&f, &PlasticState::default(), &p, &tol).unwrap();
        prop_assert!((r.state.fp.det() - 1.0).abs() <= 1e-12);
        prop_assert!(r.dissipation >= 0.0);
        if r.delta_gamma > 0.0 {
            prop_assert!(r.f_final.abs() <= 1e-10 * p.sigma_y * p.sigma_y);
            prop_assert!(r.converged && r.monotone_consistency);
        } else {
            prop_assert_eq!(r.state.fp, Tensor3::identity());
        }
    }

    #[test]
    fn elastic_trial_leaves_state_untouched(f in gl_plus(1e-3)) {
        let p = params();
        let fp = hencky::tensor::mat_exp(&Tensor3::from_rows([[0.0, 0.02, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).sym().dev().to_tensor());
        let state = PlasticState::new(fp, 0.1);
        let g = f * fp;
        let trial = trial_state(&g, &state, &p).unwrap();
        prop_assume!(trial.f < 0.0);
        let r = return_map(&g, &state, &p, &ToleranceSet::default()).unwrap();
        prop_assert_eq!(r.state, state);
        prop_assert_eq!(r.delta_gamma, 0.0);
    }

    #[test]
    fn return_map_is_objective(f in gl_plus(0.2), q in rotation()) {
        let (p, tol) = (params(), ToleranceSet::default());
        let a = return_map(&f, &PlasticState::default(), &p, &tol).unwrap();
        let b = return_map(&(q * f), &PlasticState::default(), &p, &tol).unwrap();
        prop_assert!((a.state.fp - b.state.fp).norm() <= 1e-9);
        let rotated = q * a.stresses.tau.to_tensor() * q.transpose();
        prop_assert!((b.stresses.tau.to_tensor() - rotated).norm() <= 1e-9 * a.stresses.tau.norm().max(1.0));
    }

    #[test]
    fn isotropic_return_is_radial_in_log_strain(f in gl_plus(0.2)) {
        let (p, tol) = (params(), ToleranceSet::default());
        let state = PlasticState::default();
        let trial = trial_state(&f, &state, &p).unwrap();
        let r = return_map(&f, &state, &p, &tol).unwrap();
        prop_assume!(r.delta_gamma > 0.0);
        let log_trial = hencky::constitutive::Kinematics::new(&trial.fe).unwrap().log_v;
        let log_new = hencky::constitutive::Kinematics::new(&r.fe).unwrap().log_v;
        // same volumetric part, deviator scaled towards zero along the same direction
        prop_assert!((log_trial.trace() - log_new.trace()).abs() <= 1e-12);
        let (dt, dn) = (log_trial.dev(), log_new.dev());
        let cos = dt.inner(&dn) / (dt.norm() * dn.norm());
        prop_assert!((cos - 1.0).abs() <= 1e-10, "cos = {}", cos);
        prop_assert!(dn.norm() < dt.norm());
        let inv = LogStrainInvariants::of(&r.fe).unwrap();
        prop_assert!((inv.dev_sq.sqrt() - dn.norm()).abs() <= 1e-10);
    }
}

#[test]
fn repeated_plastic_loading_accumulates_multiplier() {
    let (p, tol) = (params(), ToleranceSet::default());
    let mut state = PlasticState::default();
    let mut last = 0.0;
    for i in 1..=20 {
        let f = Tensor3::from_rows([[1.0, 0.002 * i as f64, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let r = return_map(&f, &state, &p, &tol).unwrap();
        state = r.state;
        assert!(state.gamma_acc >= last);
        last = state.gamma_acc;
    }
    assert!(last > 0.0);
}
