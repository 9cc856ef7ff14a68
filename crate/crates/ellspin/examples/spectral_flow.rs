//! Spectral flow of the deformed chain as the interaction range is tuned:
//! kappa = 0 is the (trigonometric) deformed Haldane–Shastry regime, large
//! kappa approaches the short-range XXZ chain after the sinh²κ/κ² rescale.
//!
//! Run:
//!   cargo run --release --example spectral_flow

use ellspin::chain::{h_left, spectrum, ChainParams};
use ellspin::C64;

fn main() {
    let n = 4;
    let eta_im = 0.4;
    let a = C64::new(1.3, 0.0);
    println!("low end of the H^L spectrum vs kappa (N={n}, eta={eta_im}i, a=1.3):");
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "kappa", "E_0", "E_1", "E_2", "E_3");
    for k in 0..=8 {
        let kappa = 0.5 * k as f64;
        let params = ChainParams::new(n, kappa, C64::new(0.0, eta_im), a).unwrap();
        let eigs = spectrum(&h_left(&params).unwrap(), None).unwrap();
        println!(
            "{:>6.2} {:>14.8} {:>14.8} {:>14.8} {:>14.8}",
            kappa, eigs[0].re, eigs[1].re, eigs[2].re, eigs[3].re
        );
    }
    println!("\n(the same data is available as a JSON artifact through");
    println!(" `ellspin sweep --model deformed-L --param kappa --from 0 --to 4 --steps 9`)");
}
