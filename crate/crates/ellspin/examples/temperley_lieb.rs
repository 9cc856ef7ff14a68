//! The short-range limit is a dynamical twisted XXZ chain whose local
//! terms e_i represent the Temperley–Lieb algebra, extended to the affine
//! algebra by the normalised translation u. This example prints all the
//! defining relations' residuals.
//!
//! Run:
//!   cargo run --example temperley_lieb

use ellspin::chain::XxzChain;
use ellspin::C64;

fn main() {
    let n = 5;
    let gamma = 0.23;
    let a = C64::new(0.37, 0.0);
    let x = XxzChain::new(gamma, a, n).unwrap();
    let two_cos = C64::new(2.0 * (std::f64::consts::PI * gamma).cos(), 0.0);

    println!("XXZ chain at N={n}, gamma={gamma}, a={a}");
    println!(
        "boundary term: two braid-translation forms differ by {:.3e}",
        x.boundary_forms_residual().unwrap()
    );

    println!("\nTemperley-Lieb relations (indices mod N, e_0 = boundary):");
    for i in 0..n {
        let e = x.e_op(i);
        let en = x.e_op((i + 1) % n);
        println!(
            "  e_{i}^2 - 2cos(pi gamma) e_{i} : {:.3e}    e_{i} e_{} e_{i} - e_{i} : {:.3e}",
            e.dot(e).max_abs_diff(&e.scaled(two_cos)),
            (i + 1) % n,
            e.dot(en).dot(e).max_abs_diff(e),
        );
    }

    let u = x.u_op();
    let u_inv = u.inv().unwrap();
    println!("\naffine extension by the translation u:");
    for i in 1..=n {
        println!(
            "  u e_{i} u^-1 - e_{} : {:.3e}",
            i - 1,
            u.dot(x.e_op(i)).dot(&u_inv).max_abs_diff(x.e_op(i - 1))
        );
    }
    let un = u.pow(n);
    let central = (0..n)
        .map(|i| un.commutator_rel(x.e_op(i)))
        .fold(0.0, f64::max);
    println!("  u^N central: worst commutator {central:.3e}");
    let mut w = u.dot(u);
    for i in 1..n {
        w = w.dot(x.e_op(i));
    }
    println!(
        "  u^2 e_1 ... e_(N-1) - e_(N-1) : {:.3e}",
        w.max_abs_diff(x.e_op(n - 1))
    );
}
