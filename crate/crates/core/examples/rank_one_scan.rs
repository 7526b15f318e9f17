//! Rank-one convexity scans: the planar energy with k = 1/4, k_hat = 1/8,
//! and the three-dimensional distortional energy inside and far outside the
//! cone `|dev log U|^2 < 27`.
//!
//! Run with `cargo run --release --example rank_one_scan`.

use hencky::analysis::hessian::EnergyPart;
use hencky::analysis::rank_one::{scan_rank_one, scan_rank_one_exact, ScanSpec};
use hencky::analysis::sampling::Region;
use hencky::constitutive::{energy_eh, MaterialParams};
use hencky::Tensor2;

fn main() {
    let p2 = MaterialParams { n: 2, ..MaterialParams::default() };
    let spec = ScanSpec {
        region: Region::StretchExponents { bound: 2.0 },
        n_states: 1000,
        n_dirs: 10,
        seed: 1,
        fd_step: 1e-4,
        tolerance: 1e-6 * (p2.mu + p2.kappa),
    };
    let fd = scan_rank_one(|f: &Tensor2| energy_eh(f, &p2), &spec);
    let exact = scan_rank_one_exact::<2>(&p2, EnergyPart::Full, &spec);
    println!("2D, log stretches in [-2, 2]: min d2 = {:?} (finite differences), {:?} (closed form)", fd.min_d2, exact.min_d2);

    for (k, lo, hi) in [(3.0 / 16.0, 0.0, 26.0), (0.5, 0.0, 26.0), (0.25, 100.0, 150.0)] {
        let p = MaterialParams::default().with_exponents(k, 0.125);
        let spec = ScanSpec {
            region: Region::DevBand { dev_sq_min: lo, dev_sq_max: hi, vol: 0.0 },
            n_states: 1000,
            n_dirs: 50,
            seed: 1,
            fd_step: 1e-4,
            tolerance: 1e-6 * (p.mu + p.kappa),
        };
        let r = scan_rank_one_exact::<3>(&p, EnergyPart::Distortional, &spec);
        println!("3D, k = {k}, |dev log U|^2 in [{lo}, {hi}]: min d2 = {:.6e}, witness: {}", r.min_d2.unwrap(), r.witness.is_some());
    }
}
