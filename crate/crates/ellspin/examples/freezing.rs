//! Freezing: the classical Ruijsenaars–Schneider equilibria (one on the
//! real axis, one along the imaginary axis) and the linearisation of the
//! difference operators at the lattice positions, which reproduces
//! A* times the chiral spin-chain hamiltonians.
//!
//! Run:
//!   cargo run --example freezing

use ellspin::chain::ChainParams;
use ellspin::qmbs::{
    classical_a_coeff, equilibrium_1, equilibrium_2, equilibrium_residual, freeze_check,
    Chirality, QmbsParams,
};
use ellspin::elliptic::GeneralTheta;
use ellspin::C64;

fn main() {
    let n = 4;
    let chain = ChainParams::new(n, 0.7, C64::new(0.0, 0.4), C64::new(1.3, 0.0)).unwrap();
    let params = QmbsParams::new(chain, 1.0, C64::new(0.0, 0.1)).unwrap();

    let cfg1 = equilibrium_1(&params).unwrap();
    println!("equilibrium 1 (real axis): x_j = j/N, p = 0, tau = omega/N");
    println!("  A* = {:.12}", cfg1.a_star);
    println!(
        "  stationarity residual = {:.3e}",
        equilibrium_residual(&cfg1, params.epsilon).unwrap()
    );
    let g1 = GeneralTheta::new(cfg1.tau).unwrap();
    for j in 1..=n {
        let a = classical_a_coeff(j, &cfg1.positions, cfg1.eta_eff, &g1).unwrap();
        println!("  A_{j}(x*) = {a:.12}");
    }

    let cfg2 = equilibrium_2(&params).unwrap();
    println!("\nequilibrium 2 (imaginary axis): x_j = -j/omega, graded momenta");
    println!("  A* = {:.12}", cfg2.a_star);
    println!(
        "  stationarity residual = {:.3e}",
        equilibrium_residual(&cfg2, params.epsilon).unwrap()
    );

    // a perturbed configuration is visibly non-stationary
    let mut bad = cfg2.clone();
    bad.positions[0] += 0.01;
    println!(
        "  perturbed x_1 by 0.01     -> residual {:.3e}",
        equilibrium_residual(&bad, params.epsilon).unwrap()
    );

    println!("\nfreezing the difference operators at x*_k = k:");
    for (label, chir) in [("left", Chirality::Left), ("right", Chirality::Right)] {
        let rep = freeze_check(chir, &params).unwrap();
        println!(
            "  {label:>5}: gate spread {:.3e}, |dD/(ih theta(eta)) - A* H| / |A* H| = {:.3e}",
            rep.gate_spread, rep.deviation
        );
        println!(
            "         A* = {:.10}, Frobenius fit = {:.10}",
            rep.a_star, rep.fitted_constant
        );
    }
}
