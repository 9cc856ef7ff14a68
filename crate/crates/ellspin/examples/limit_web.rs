//! Walk the degeneration web of the deformed chain: down to Inozemtsev as
//! the anisotropy closes, across to the deformed Haldane–Shastry chain at
//! kappa = 0, into the short-range twisted XXZ chain as kappa grows, and
//! through the intermediate chain that refines the isotropic limit.
//! All limits are compared spectrally (conjugations cancel in spectra).
//!
//! Run:
//!   cargo run --release --example limit_web

use ellspin::chain::{
    h_deformed_hs, h_haldane_shastry, h_inozemtsev, h_intermediate, h_left, h_xxx,
    spectral_distance, spectral_spread, spectrum, ChainParams, XxzChain,
};
use ellspin::C64;

fn main() {
    let n = 4;
    let kappa = 0.7;

    // 1. eta -> 0 at a = -100i: the isotropic Inozemtsev chain
    let a = C64::new(0.0, -100.0);
    let ino = spectrum(
        &h_inozemtsev(&ChainParams::new(n, kappa, C64::new(1e-3, 0.0), a).unwrap()).unwrap(),
        None,
    )
    .unwrap();
    println!("eta -> 0 (Inozemtsev limit):");
    for eta in [1e-2, 1e-3, 1e-4] {
        let params = ChainParams::new(n, kappa, C64::new(eta, 0.0), a).unwrap();
        let eigs = spectrum(&h_left(&params).unwrap(), None).unwrap();
        println!("  eta = {eta:>7.0e}: spectral distance {:.4e}", spectral_distance(&eigs, &ino));
    }

    // 2. kappa = 0: the deformed Haldane-Shastry chain, and eta -> 0 on top
    let trig = ChainParams::new(n, 0.0, C64::new(0.3, 0.0), C64::new(0.0, -200.0)).unwrap();
    let hl = h_left(&trig).unwrap();
    let dhs = h_deformed_hs(&trig).unwrap();
    println!(
        "\nkappa = 0: |H^L - H^dHS| / scale = {:.4e} (matrix identity)",
        hl.max_abs_diff(&dhs) / dhs.max_abs()
    );
    let tiny = ChainParams::new(n, 0.0, C64::new(1e-4, 0.0), C64::new(0.0, -200.0)).unwrap();
    let hs = spectrum(&h_haldane_shastry(&tiny).unwrap(), None).unwrap();
    let eigs = spectrum(&h_left(&tiny).unwrap(), None).unwrap();
    println!(
        "kappa = 0, eta -> 0: distance to Haldane-Shastry = {:.4e}",
        spectral_distance(&eigs, &hs) / spectral_spread(&hs)
    );

    // 3. kappa -> infinity with eta = -i pi gamma / kappa: the twisted XXZ chain
    let gamma = 0.23;
    let ax = C64::new(0.37, 0.0);
    let xxz = XxzChain::new(gamma, ax, n).unwrap();
    let reference = spectrum(&xxz.h, None).unwrap();
    println!("\nkappa -> infinity (short-range limit, rescaled by sinh^2 k / k^2):");
    for kap in [2.0, 4.0, 8.0] {
        let eta = C64::new(0.0, -std::f64::consts::PI * gamma / kap);
        let params = ChainParams::new(n, kap, eta, ax).unwrap();
        let scale = C64::new(kap.sinh().powi(2) / (kap * kap), 0.0);
        let eigs = spectrum(&h_left(&params).unwrap().scaled(scale), None).unwrap();
        println!(
            "  kappa = {kap}: spectral distance {:.4e}",
            spectral_distance(&eigs, &reference)
        );
    }

    // 4. gamma -> 0: the periodic Heisenberg XXX chain
    let xxx = spectrum(&h_xxx(n), None).unwrap();
    println!("\ngamma -> 0 of the short-range chain (vs periodic XXX):");
    for gam in [1e-4, 1e-5, 1e-6] {
        let x = XxzChain::new(gam, C64::new(0.0, -1.0e4), n).unwrap();
        let eigs = spectrum(&x.h, None).unwrap();
        println!(
            "  gamma = {gam:>7.0e}: spectral distance {:.4e}",
            spectral_distance(&eigs, &xxx) / spectral_spread(&xxx)
        );
    }

    // 5. the intermediate chain: a = a'/eta with eta -> 0, then a' -> 0
    let a_prime = C64::new(0.55, 0.2);
    let base = ChainParams::new(n, kappa, C64::new(1e-3, 0.0), a_prime / 1e-3).unwrap();
    let inter = spectrum(&h_intermediate(a_prime, &base).unwrap(), None).unwrap();
    println!("\na = a'/eta, eta -> 0 (intermediate chain at a' = {a_prime:.2}):");
    for eta in [1e-2, 1e-3, 1e-4] {
        let params = ChainParams::new(n, kappa, C64::new(eta, 0.0), a_prime / eta).unwrap();
        let eigs = spectrum(&h_left(&params).unwrap(), None).unwrap();
        println!("  eta = {eta:>7.0e}: spectral distance {:.4e}", spectral_distance(&eigs, &inter));
    }
    let params = ChainParams::new(n, kappa, C64::new(0.0, 0.4), C64::new(1.3, 0.0)).unwrap();
    let ino_m = h_inozemtsev(&params).unwrap();
    let close = h_intermediate(C64::new(1e-5, 0.0), &params).unwrap();
    println!(
        "a' -> 0: |H(a') - H^Ino| / scale = {:.4e}",
        close.max_abs_diff(&ino_m) / ino_m.max_abs()
    );
}
