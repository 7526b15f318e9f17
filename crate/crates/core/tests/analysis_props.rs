mod common;

use common::*;
use hencky::analysis::estimates::{lemma2_general_ratio, lemma2_ratio, unloading_ellipticity};
use hencky::analysis::hessian::{rank_one_d2_exact, EnergyPart};
use hencky::analysis::rank_one::{rank_one_d2, scan_rank_one, scan_rank_one_exact, ScanSpec};
use hencky::analysis::sampling::Region;
use hencky::constitutive::{energy_eh, energy_svk, MaterialParams};
use hencky::{Tensor2, Tensor3};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_form_matches_second_differences(f in gl_plus(0.4), xi in unit3(), eta in unit3()) {
        let p = MaterialParams::default();
        let exact = rank_one_d2_exact(&f, &xi, &eta, &p, EnergyPart::Full).unwrap();
        let fd = rank_one_d2(|g: &Tensor3| hencky::constitutive::energy_eh_excess(g, &p), &f, &xi, &eta, 1e-4).unwrap();
        prop_assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(1.0), "{} vs {}", exact, fd);
    }

    #[test]
    fn second_derivative_is_frame_invariant(f in gl_plus(0.6), q in rotation(), xi in unit3(), eta in unit3()) {
        let p = MaterialParams::default();
        let a = rank_one_d2_exact(&f, &xi, &eta, &p, EnergyPart::Full).unwrap();
        let b = rank_one_d2_exact(&(q * f), &q.mul_vec(&xi), &eta, &p, EnergyPart::Full).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn symmetric_ratio_is_bounded_below(f in gl_plus(1.5), s in symmetric(1.0)) {
        prop_assume!(s.norm() > 1e-6);
        let r = lemma2_ratio(&f, &s).unwrap();
        let m = to_na(&f);
        let oracle = (m.transpose() * to_na(s.as_tensor()) * m.transpose().try_inverse().unwrap()).norm_squared() / to_na(s.as_tensor()).norm_squared();
        prop_assert!((r - oracle).abs() <= 1e-9 * oracle);
        prop_assert!(r >= 0.5 - 1e-12);
    }

    #[test]
    fn unloading_identity_for_unimodular_fp(f in gl_plus(0.3), a in matrix3(0.3), xi in unit3(), eta in unit3()) {
        let p = MaterialParams::default();
        let fp = hencky::tensor::mat_exp(&a.dev());
        let (lhs, rhs) = unloading_ellipticity(|x: &Tensor3| hencky::constitutive::energy_eh_excess(x, &p), &f, &fp, &xi, &eta, 1e-3).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-5 * lhs.abs().max(rhs.abs()).max(1.0));
    }
}

#[test]
fn non_symmetric_ratio_depends_on_fe() {
    let fe = Tensor3::from_diagonal([30.0, 1.0 / 30.0, 1.0]);
    let mut s = Tensor3::zero();
    s[(1, 0)] = 1.0;
    let r = lemma2_general_ratio(&fe, &s).unwrap();
    assert!(r < 0.5, "{r}");
    assert!((lemma2_general_ratio(&Tensor3::identity(), &s).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn svk_loses_ellipticity_in_uniaxial_compression() {
    let p = MaterialParams::default();
    let f = Tensor3::from_diagonal([0.5, 1.0, 1.0]);
    let w = |g: &Tensor3| energy_svk(g, &p).unwrap_or(f64::INFINITY);
    let mut min = f64::INFINITY;
    for i in 0..=40 {
        for j in 0..=40 {
            let (a, b) = (std::f64::consts::PI * i as f64 / 40.0, std::f64::consts::PI * j as f64 / 40.0);
            let xi = [a.cos(), a.sin(), 0.0];
            let eta = [b.cos(), b.sin(), 0.0];
            min = min.min(rank_one_d2(w, &f, &xi, &eta, 1e-4).unwrap());
        }
    }
    assert!(min < 0.0, "{min}");
}

#[test]
fn planar_energy_is_elliptic_at_identity() {
    let p = MaterialParams { n: 2, ..MaterialParams::default() };
    for i in 0..36 {
        for j in 0..36 {
            let (a, b) = (i as f64 * 0.1745, j as f64 * 0.1745);
            let (xi, eta) = ([a.cos(), a.sin()], [b.cos(), b.sin()]);
            assert!(rank_one_d2(|g: &Tensor2| energy_eh(g, &p), &Tensor2::identity(), &xi, &eta, 1e-4).unwrap() > 0.0);
        }
    }
}

fn spec(seed: u64) -> ScanSpec {
    ScanSpec { region: Region::DevBand { dev_sq_min: 0.0, dev_sq_max: 2.0, vol: 0.3 }, n_states: 20, n_dirs: 5, seed, fd_step: 1e-4, tolerance: 2.5e-4 }
}

#[test]
fn scans_are_deterministic_across_thread_counts() {
    let p = MaterialParams::default();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| scan_rank_one(|f: &Tensor3| energy_eh(f, &p), &spec(9)));
    let b = four.install(|| scan_rank_one(|f: &Tensor3| energy_eh(f, &p), &spec(9)));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.samples, 100);
    let c = scan_rank_one(|f: &Tensor3| energy_eh(f, &p), &spec(10));
    assert_ne!(a.min_d2, c.min_d2);
}

#[test]
fn scan_minimum_is_invariant_under_rotating_every_state() {
    // 100 probes: d2(QF, Q xi, eta) = d2(F, xi, eta) probe by probe
    let p = MaterialParams::default();
    let q = hencky::tensor::mat_exp(&Tensor3::from_rows([[0.0, -0.7, 0.2], [0.7, 0.0, -1.1], [-0.2, 1.1, 0.0]]));
    let s = spec(3);
    let base = scan_rank_one_exact::<3>(&p, EnergyPart::Full, &s);
    let probe = base.min_probe.unwrap();
    let rotated = rank_one_d2_exact(&(q * probe.f), &q.mul_vec(&probe.xi), &probe.eta, &p, EnergyPart::Full).unwrap();
    assert!((rotated - probe.d2).abs() <= 1e-9 * probe.d2.abs().max(1.0));
    let fd = scan_rank_one(|f: &Tensor3| energy_eh(f, &p), &s);
    let fd_rot = scan_rank_one(|f: &Tensor3| energy_eh(&(q * *f), &p), &s);
    assert!((fd.min_d2.unwrap() - fd_rot.min_d2.unwrap()).abs() <= 1e-4 * fd.min_d2.unwrap().abs().max(1.0));
    assert_eq!(base.samples, 100);
}
