//! The parent quantum many-body system: commuting difference operators
//! with R-matrix-valued coefficients. Verifies [D̃₁, D̃₋₁] = 0 and
//! [D̃±1, D̃_N] = 0 pointwise at generic coordinates, the P^tot invariance
//! that generates the operators from a single seed, and the higher charges.
//!
//! Run:
//!   cargo run --release --example qmbs_commutators

use ellspin::chain::ChainParams;
use ellspin::qmbs::{
    build_d1, build_dminus1, build_dn, build_higher, commutator_residual, exponential_wave,
    ptot_invariance_residual, QmbsParams,
};
use ellspin::C64;
use ndarray::Array1;

fn main() {
    for n in [2usize, 3, 4] {
        let chain = ChainParams::new(n, 0.7, C64::new(0.0, 0.4), C64::new(1.3, 0.0)).unwrap();
        let params = QmbsParams::new(chain, 1.0, C64::new(0.0, 0.1)).unwrap();
        let d1 = build_d1(&params);
        let dm1 = build_dminus1(&params);
        let dn = build_dn(&params);
        let xs: Vec<C64> = (0..n)
            .map(|k| C64::new(0.8 * (k as f64 + 1.0) + 0.1 * (k as f64).sin(), 0.05 * k as f64))
            .collect();
        println!("N = {n} at a generic point:");
        println!(
            "  [D1, D-1] = {:.3e}   [D1, DN] = {:.3e}   [D-1, DN] = {:.3e}",
            commutator_residual(&d1, &dm1, &xs).unwrap(),
            commutator_residual(&d1, &dn, &xs).unwrap(),
            commutator_residual(&dm1, &dn, &xs).unwrap(),
        );

        let f = exponential_wave(
            (0..n).map(|k| C64::new(0.3 - 0.1 * k as f64, 0.07 * k as f64)).collect(),
            Array1::from_vec((0..1 << n).map(|k| C64::new(1.0 + k as f64, 0.5)).collect()),
        );
        let worst = (1..n)
            .map(|i| ptot_invariance_residual(&d1, i, &params, &f, &xs).unwrap())
            .fold(0.0, f64::max);
        println!("  P^tot invariance of D1: {worst:.3e}");

        if n >= 3 {
            let h2 = build_higher(2, 1, &params).unwrap();
            let worst = (1..n)
                .map(|i| ptot_invariance_residual(&h2, i, &params, &f, &xs).unwrap())
                .fold(0.0, f64::max);
            println!(
                "  higher charge r=2: {} terms, P^tot invariance {worst:.3e}",
                h2.n_terms()
            );
        }
    }
}
