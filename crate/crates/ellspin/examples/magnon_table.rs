//! The N deformed magnons: S^z = N/2 − 1 eigenvectors of the normalised
//! translation G′ with quantised momentum p = 2πn/N, and their L- and
//! R-energies. The magnon Rayleigh values exhaust the one-magnon sector
//! spectrum of either chiral hamiltonian.
//!
//! Run:
//!   cargo run --example magnon_table

use ellspin::chain::{
    g_normalized, h_left, h_right, magnon_states, rayleigh, spectrum, ChainParams,
};
use ellspin::C64;

fn main() {
    let n = 6;
    let params = ChainParams::new(n, 0.7, C64::new(0.0, 0.4), C64::new(1.3, 0.0)).unwrap();
    let gp = g_normalized(&params).unwrap();
    let hl = h_left(&params).unwrap();
    let hr = h_right(&params).unwrap();

    println!("deformed magnons at N={n}, kappa=0.7, eta=0.4i, a=1.3");
    println!("{:>3} {:>24} {:>18} {:>18}", "n", "G' eigenvalue", "E_L", "E_R");
    for m in magnon_states(&params).unwrap() {
        let g = rayleigh(&gp, &m.vector);
        let el = rayleigh(&hl, &m.vector);
        let er = rayleigh(&hr, &m.vector);
        println!(
            "{:>3} {:>11.6}{:+.6}i {:>18.12} {:>18.12}",
            m.momentum_index, g.re, g.im, el.re, er.re
        );
    }

    let mut sector = spectrum(&hl, Some(1)).unwrap();
    sector.sort_by(|a, b| a.re.total_cmp(&b.re));
    println!("\none-magnon sector of H^L for comparison:");
    for e in sector {
        println!("  {:+.12}", e.re);
    }
}
