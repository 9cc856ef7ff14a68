//! The dynamical R-matrix and deformed exchange on two spins: unitarity,
//! the dynamical Yang–Baxter equation, the closed-form cross-check of the
//! exchange, and the trigonometric / short-range degenerations.
//!
//! Run:
//!   cargo run --example rmatrix_identities

use ellspin::elliptic::EllipticParams;
use ellspin::rmatrix::{
    dybe_residual, e_heis, e_tri, exchange_e, exchange_e_closed, r_check, DynArgs, RMatrix4,
};
use ellspin::C64;

fn main() {
    let ell = EllipticParams::new(0.7, 5.0).unwrap();
    let args = DynArgs {
        x: C64::new(0.52, 0.13),
        a: C64::new(1.3, 0.0),
        eta: C64::new(0.0, 0.4),
    };

    let r = r_check(&args, &ell).unwrap();
    println!("R(x,a) central block at x = {:.3}:", args.x);
    println!("  [{:+.6}  {:+.6}]", r.0[1][1], r.0[1][2]);
    println!("  [{:+.6}  {:+.6}]", r.0[2][1], r.0[2][2]);

    let back = r_check(&DynArgs { x: -args.x, ..args }, &ell).unwrap();
    println!(
        "\nunitarity |R(x,a) R(-x,a) - 1|            = {:.3e}",
        r.matmul(&back).max_abs_diff(&RMatrix4::identity())
    );

    let dybe = dybe_residual(
        C64::new(0.31, 0.11),
        C64::new(-0.22, 0.05),
        C64::new(0.4, -0.13),
        args.a,
        args.eta,
        &ell,
    )
    .unwrap();
    println!("dynamical Yang-Baxter residual (3 spins)  = {dybe:.3e}");

    let prod = exchange_e(&args, &ell).unwrap();
    let closed = exchange_e_closed(&args, &ell).unwrap();
    println!(
        "exchange: product form vs alpha/beta form  = {:.3e}",
        prod.max_abs_diff(&closed)
    );

    // trigonometric degeneration: E(x,a) -> E^tri, x-independent
    let eta = C64::new(0.3, 0.0);
    let trig_ell = EllipticParams::new(1e-5, 5.0).unwrap();
    let deep = DynArgs {
        x: C64::new(0.7, 0.0),
        a: C64::new(0.0, -30.0) / eta,
        eta,
    };
    let e = exchange_e(&deep, &trig_ell).unwrap();
    println!(
        "\ntrig limit |E(x,a) - E^tri|               = {:.3e}",
        e.max_abs_diff(&e_tri(eta, 5.0))
    );

    // short-range exchange satisfies the Temperley-Lieb idempotency
    let gamma = 0.23;
    let eh = e_heis(C64::new(0.45, 0.0), gamma).unwrap();
    let two_cos = C64::new(2.0 * (std::f64::consts::PI * gamma).cos(), 0.0);
    println!(
        "short-range |E^H E^H - 2cos(pi gamma) E^H| = {:.3e}",
        eh.matmul(&eh).max_abs_diff(&eh.scale(two_cos))
    );
}
