//! Evaluate the building-block special functions: the odd theta function
//! with quasiperiods N and iπ/κ, its logarithmic derivative ρ, the pair
//! potential V, and the general ϑ(x|τ) connected to θ by a modular
//! transformation.
//!
//! Run:
//!   cargo run --example theta_functions

use ellspin::elliptic::{
    potential_v, rho, theta, theta_deriv, vartheta, EllipticParams, GeneralTheta,
};
use ellspin::C64;

fn main() {
    let kappa = 0.7;
    let n = 5.0;
    let p = EllipticParams::new(kappa, n).unwrap();

    println!("theta with kappa = {kappa}, N = {n}  (nome p = {:.4e})", p.nome());
    println!("  theta'(0) = {}", theta_deriv(C64::new(0.0, 0.0), &p).unwrap());
    for &re in &[0.5, 1.3, 2.4] {
        let x = C64::new(re, 0.3);
        println!(
            "  x = {x:.3}:  theta = {:+.12e}  rho = {:+.12e}",
            theta(x, &p).unwrap(),
            rho(x, &p).unwrap()
        );
    }

    // double quasiperiodicity: theta(x + i pi/kappa) = -theta(x),
    // theta(x + N) = -e^{kappa(2x+N)} theta(x)
    let x = C64::new(0.83, -0.41);
    let v = theta(x, &p).unwrap();
    let imag = theta(x + C64::new(0.0, std::f64::consts::PI / kappa), &p).unwrap();
    let real = theta(x + n, &p).unwrap();
    let mult = -(kappa * (2.0 * x + n)).exp();
    println!("\nquasiperiodicity at x = {x:.3}:");
    println!("  |theta(x + i pi/k) + theta(x)|        = {:.3e}", (imag + v).norm());
    println!("  |theta(x + N) + e^(k(2x+N)) theta(x)| = {:.3e}", (real - mult * v).norm());

    // the pair potential is even and doubly periodic
    let eta = C64::new(0.0, 0.4);
    let vx = potential_v(x, eta, &p).unwrap();
    println!("\npotential V at eta = {eta:.2}:");
    println!("  V(x)       = {vx:+.12e}");
    println!("  V(-x)      = {:+.12e}", potential_v(-x, eta, &p).unwrap());
    println!("  V(x + N)   = {:+.12e}", potential_v(x + n, eta, &p).unwrap());

    // modular bridge to the general theta function
    let omega = C64::new(0.0, std::f64::consts::PI / kappa);
    let g = GeneralTheta::new(-n / omega).unwrap();
    let bridge = omega * vartheta(x / omega, &g).unwrap();
    println!("\nmodular bridge theta(x) = w vartheta(x/w | -N/w):");
    println!("  theta(x)  = {v:+.12e}");
    println!("  bridge    = {bridge:+.12e}");
    println!("  rel. diff = {:.3e}", (v - bridge).norm() / v.norm());

    // the trigonometric branch is exact, not a truncation
    let trig = EllipticParams::new(0.0, n).unwrap();
    let t = theta(C64::new(1.3, 0.0), &trig).unwrap();
    let closed = n / std::f64::consts::PI * (std::f64::consts::PI * 1.3 / n).sin();
    println!("\nkappa = 0 branch: theta(1.3) = {t:.12}  (closed form {closed:.12})");
}
