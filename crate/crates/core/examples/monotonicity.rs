//! True-stress-true-strain monotonicity inside the elastic domain and the
//! inclusion of the Sigma_e domain in the tau domain and the ellipticity cone.
//!
//! Run with `cargo run --release --example monotonicity`.

use hencky::analysis::estimates::{
    domain_inclusion_check, sample_elastic_states, sample_monotonicity_pairs, sigma_y_for_extent, tsts_monotonicity,
};
use hencky::constitutive::MaterialParams;

fn main() {
    let base = MaterialParams::default();
    let p = base.with_sigma_y(sigma_y_for_extent(&base, 0.1));
    println!("sigma_y = {:.6} (domain extent |dev log V| = 0.1)", p.sigma_y);

    let pairs = sample_monotonicity_pairs::<3>(10_000, 0.1, 0.1, &p, 3);
    let r = tsts_monotonicity(&pairs, &p);
    println!("monotonicity: {} pairs, min <sigma1 - sigma2, log B1 - log B2> = {:?}", r.evaluated, r.min_product);

    let states = sample_elastic_states(10_000, 0.2, 0.2, 4);
    let r = domain_inclusion_check(&states, &p).unwrap();
    println!(
        "inclusion: {} of {} states in the Sigma_e domain, tau violations {}, cone violations {}, max norm mismatch {:.2e}",
        r.in_sigma_domain, r.samples, r.tau_violations, r.cone_violations, r.max_norm_mismatch
    );
}
