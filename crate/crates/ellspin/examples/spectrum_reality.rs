//! The chiral hamiltonians are not hermitian, yet their spectrum is real
//! when the anisotropy is imaginary and the dynamical parameter real. This
//! example scans that regime, prints the largest imaginary part relative
//! to the spectral spread, and shows the commuting structure.
//!
//! Run:
//!   cargo run --release --example spectrum_reality

use ellspin::chain::{
    h_left, h_right, s_z, spectral_spread, spectrum, translation_g, ChainParams,
};
use ellspin::C64;

fn main() {
    let n = 5;
    for &(kappa, eta_im, a) in &[(0.7, 0.4, 1.3), (0.5, 0.3, 0.8), (1.0, 0.45, 1.6)] {
        let params = ChainParams::new(n, kappa, C64::new(0.0, eta_im), C64::new(a, 0.0)).unwrap();
        let hl = h_left(&params).unwrap();
        let hr = h_right(&params).unwrap();
        let eigs = spectrum(&hl, None).unwrap();
        let spread = spectral_spread(&eigs);
        let worst = eigs.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
        println!(
            "N={n} kappa={kappa} eta={eta_im}i a={a}: max |Im| / spread = {:.3e}",
            worst / spread
        );
        println!(
            "  [H^L,H^R] = {:.3e}   [H^L,S^z] = {:.3e}   [H^L,G] = {:.3e}",
            hl.commutator_rel(&hr),
            hl.commutator_rel(&s_z(n)),
            hl.commutator_rel(&translation_g(&params).unwrap())
        );
        let ground = eigs.first().unwrap();
        println!("  lowest five levels:");
        for e in eigs.iter().take(5) {
            println!("    {:+.10}  (gap {:+.6})", e.re, e.re - ground.re);
        }
    }

    // sector-resolved spectrum: the one-magnon block
    let params = ChainParams::new(n, 0.7, C64::new(0.0, 0.4), C64::new(1.3, 0.0)).unwrap();
    let hl = h_left(&params).unwrap();
    println!("\nS^z = N/2 - 1 sector of H^L (dimension {n}):");
    for e in spectrum(&hl, Some(1)).unwrap() {
        println!("  {:+.10}", e.re);
    }
}
