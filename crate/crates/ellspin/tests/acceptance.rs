//! Acceptance gate: one test per criterion, each printing a pass/fail line
//! with the worst measured residual against its pinned tolerance.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use ellspin::chain::{
    self, h_inozemtsev, h_intermediate, h_left, h_right, h_xxx, s_left,
    s_right, s_z, spectral_distance, spectral_spread, spectrum, translation_g, twist_total,
    ChainParams, SpinOperator, XxzChain,
};
use ellspin::elliptic::{theta, vartheta, EllipticParams, GeneralTheta};
use ellspin::qmbs::{
    apply, build_d1, build_dminus1, build_dn, build_higher, commutator_residual, compose,
    equilibrium_1, equilibrium_2, equilibrium_residual, exponential_wave, freeze_check,
    ptot_invariance_residual, Chirality, QmbsParams,
};
use ellspin::rmatrix::{
    dybe_residual, exchange_e, exchange_e_closed, r_check, r_check_deriv, DynArgs, RMatrix4,
};
use ellspin::C64;
use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, what: &str, residual: f64, tolerance: f64) {
    let verdict = if residual <= tolerance { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {verdict} — {what}: residual {residual:.3e} vs tolerance {tolerance:.1e}");
    assert!(
        residual <= tolerance,
        "criterion {criterion} failed: {what}: {residual:.3e} > {tolerance:.1e}"
    );
}

/// Independent classical θ₁ q-series oracle with the ϑ′(0|τ)=1 convention.
fn vartheta_series(x: C64, tau: C64) -> C64 {
    let pi = std::f64::consts::PI;
    let q = (C64::new(0.0, pi) * tau).exp();
    let z = pi * x;
    let (mut num, mut den) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for n in 0..64u32 {
        let qp = q.powf((n as f64 + 0.5).powi(2));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let m = 2.0 * n as f64 + 1.0;
        num += 2.0 * sign * qp * (m * z).sin();
        den += 2.0 * sign * qp * m;
        if qp.norm() < 1e-300 {
            break;
        }
    }
    num / (pi * den)
}

fn theta_series(x: C64, kappa: f64, period: f64) -> C64 {
    let omega = C64::new(0.0, std::f64::consts::PI / kappa);
    omega * vartheta_series(x / omega, -period / omega)
}

fn draw_params(rng: &mut ChaCha8Rng, n: usize) -> ChainParams {
    loop {
        let kappa = rng.random_range(0.4..0.9);
        let eta = C64::new(rng.random_range(-0.1..0.1), rng.random_range(0.25..0.45));
        let a = C64::new(rng.random_range(-0.3..0.3), rng.random_range(1.0..1.6));
        if let Ok(p) = ChainParams::new(n, kappa, eta, a) {
            return p;
        }
    }
}

#[test]
fn criterion_1_special_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    // q-series oracle on 1000 random points split between theta and vartheta
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let kappa = rng.random_range(0.35..1.4);
        let period = rng.random_range(3.0..8.0);
        let p = EllipticParams::new(kappa, period).unwrap();
        let x = C64::new(
            rng.random_range(-period..period),
            rng.random_range(-std::f64::consts::PI / kappa..std::f64::consts::PI / kappa),
        );
        let ours = theta(x, &p).unwrap();
        let oracle = theta_series(x, kappa, period);
        worst = worst.max((ours - oracle).norm() / oracle.norm().max(1e-30));
    }
    for _ in 0..500 {
        let tau = C64::new(rng.random_range(-0.4..0.4), rng.random_range(0.25..0.9));
        let g = GeneralTheta::new(tau).unwrap();
        let x = C64::new(rng.random_range(-1.0..1.0), rng.random_range(0.0..tau.im));
        let ours = vartheta(x, &g).unwrap();
        let oracle = vartheta_series(x, tau);
        worst = worst.max((ours - oracle).norm() / oracle.norm().max(1e-30));
    }
    report("1a", "theta/vartheta vs independent q-series oracle", worst, 1e-12);

    // addition formula and double quasiperiodicity
    let mut worst_add: f64 = 0.0;
    let mut worst_qp: f64 = 0.0;
    for _ in 0..100 {
        let kappa = rng.random_range(0.35..1.4);
        let period = rng.random_range(3.0..8.0);
        let p = EllipticParams::new(kappa, period).unwrap();
        let c = |rng: &mut ChaCha8Rng| {
            C64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0))
        };
        let (x, y, z, w) = (c(&mut rng), c(&mut rng), c(&mut rng), c(&mut rng));
        let t = |u: C64| theta(u, &p).unwrap();
        let lhs = t(x + y) * t(x - y) * t(z + w) * t(z - w);
        let rhs = t(x + z) * t(x - z) * t(y + w) * t(y - w)
            - t(x + w) * t(x - w) * t(y + z) * t(y - z);
        worst_add = worst_add.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0));
        let v = t(x);
        let imag = t(x + C64::new(0.0, std::f64::consts::PI / kappa));
        worst_qp = worst_qp.max((imag + v).norm() / (1.0 + v.norm()));
        let real = t(x + period);
        let mult = -(kappa * (2.0 * x + period)).exp();
        worst_qp = worst_qp.max((real - mult * v).norm() / (1.0 + (mult * v).norm()));
    }
    report("1b", "addition formula", worst_add, 1e-11);
    report("1c", "double quasiperiodicity multipliers", worst_qp, 1e-11);

    // modular bridge
    let mut worst_bridge: f64 = 0.0;
    for _ in 0..100 {
        let kappa = rng.random_range(0.35..1.4);
        let period = rng.random_range(3.0..8.0);
        let p = EllipticParams::new(kappa, period).unwrap();
        let omega = C64::new(0.0, std::f64::consts::PI / kappa);
        let g = GeneralTheta::new(-period / omega).unwrap();
        let x = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.5..1.5));
        let lhs = theta(x, &p).unwrap();
        let rhs = omega * vartheta(x / omega, &g).unwrap();
        worst_bridge = worst_bridge.max((lhs - rhs).norm() / lhs.norm().max(1e-30));
    }
    report("1d", "modular bridge theta(x) = w vartheta(x/w | -N/w)", worst_bridge, 1e-10);
}

#[test]
fn criterion_2_rmatrix_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_init: f64 = 0.0;
    let mut worst_unit: f64 = 0.0;
    let mut worst_dybe: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    let mut worst_deriv: f64 = 0.0;
    for k in 0..100 {
        let params = draw_params(&mut rng, 5);
        let ell = if k % 3 == 2 {
            EllipticParams::new(0.0, 5.0).unwrap()
        } else {
            params.elliptic()
        };
        let x = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-0.4..0.4));
        let args = DynArgs {
            x,
            a: params.a,
            eta: params.eta,
        };
        worst_init = worst_init.max(
            r_check(&DynArgs { x: C64::new(0.0, 0.0), ..args }, &ell)
                .unwrap()
                .max_abs_diff(&RMatrix4::identity()),
        );
        let prod = r_check(&args, &ell)
            .unwrap()
            .matmul(&r_check(&DynArgs { x: -x, ..args }, &ell).unwrap());
        worst_unit = worst_unit.max(prod.max_abs_diff(&RMatrix4::identity()));
        let x1 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-0.4..0.4));
        let x2 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-0.4..0.4));
        worst_dybe =
            worst_dybe.max(dybe_residual(x, x1, x2, params.a, params.eta, &ell).unwrap());
        worst_cross = worst_cross.max(
            exchange_e(&args, &ell)
                .unwrap()
                .max_abs_diff(&exchange_e_closed(&args, &ell).unwrap()),
        );
        let h = 1e-6;
        let fd = r_check(&DynArgs { x: x + h, ..args }, &ell)
            .unwrap()
            .sub(&r_check(&DynArgs { x: x - h, ..args }, &ell).unwrap())
            .scale(C64::new(1.0 / (2.0 * h), 0.0));
        worst_deriv = worst_deriv.max(fd.max_abs_diff(&r_check_deriv(&args, &ell).unwrap()));
    }
    report("2a", "initial condition R(0,a) = 1", worst_init, 1e-13);
    report("2b", "unitarity R(x,a)R(-x,a) = 1", worst_unit, 1e-12);
    report("2c", "dynamical Yang-Baxter residual (100 draws)", worst_dybe, 1e-11);
    report("2d", "exchange product vs closed form (100 draws)", worst_cross, 1e-10);
    report("2e", "analytic derivative vs finite differences", worst_deriv, 1e-7);
}

#[test]
fn criterion_3_chain_integrability() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst_comm: f64 = 0.0;
    let mut worst_twist: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    for n in 2..=6usize {
        for _ in 0..10 {
            let params = draw_params(&mut rng, n);
            let hl = h_left(&params).unwrap();
            let hr = h_right(&params).unwrap();
            let g = translation_g(&params).unwrap();
            let sz = s_z(n);
            worst_comm = worst_comm
                .max(hl.commutator_rel(&hr))
                .max(hl.commutator_rel(&sz))
                .max(hr.commutator_rel(&sz))
                .max(hl.commutator_rel(&g))
                .max(hr.commutator_rel(&g));
            let t = twist_total(&params);
            worst_twist = worst_twist.max(g.pow(n).max_abs_diff(&t) / t.max_abs());
            let gp = chain::g_normalized(&params).unwrap();
            worst_twist =
                worst_twist.max(gp.pow(n).max_abs_diff(&SpinOperator::identity(n)));
            if n >= 3 {
                let g_inv = g.inv().unwrap();
                let lhs = s_left(1, n, &params).unwrap();
                let rhs = g.dot(&s_left(1, 2, &params).unwrap()).dot(&g_inv);
                worst_boundary =
                    worst_boundary.max(lhs.max_abs_diff(&rhs) / lhs.max_abs());
                let lhs_r = s_right(1, n, &params).unwrap();
                let rhs_r = g_inv.dot(&s_right(n - 1, n, &params).unwrap()).dot(&g);
                worst_boundary =
                    worst_boundary.max(lhs_r.max_abs_diff(&rhs_r) / lhs_r.max_abs());
            }
        }
    }
    report(
        "3a",
        "[H^L,H^R], [H,S^z], [H,G] relative Frobenius (N=2..6, 10 draws each)",
        worst_comm,
        1e-10,
    );
    report("3b", "G^N = K_1..K_N and G'^N = 1", worst_twist, 1e-11);
    report("3c", "boundary interaction through G (both chiralities)", worst_boundary, 1e-11);
}

#[test]
fn criterion_4_spectrum_reality() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst: f64 = 0.0;
    for n in 2..=6usize {
        for _ in 0..3 {
            let kappa = rng.random_range(0.4..0.9);
            let eta = C64::new(0.0, rng.random_range(0.25..0.5));
            let a = C64::new(rng.random_range(0.6..1.8), 0.0);
            let Ok(params) = ChainParams::new(n, kappa, eta, a) else {
                continue;
            };
            for h in [h_left(&params).unwrap(), h_right(&params).unwrap()] {
                let eigs = spectrum(&h, None).unwrap();
                let spread = spectral_spread(&eigs).max(1e-300);
                let imag = eigs.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
                worst = worst.max(imag / spread);
            }
        }
    }
    report(
        "4",
        "spectrum real for eta imaginary, a real (max |Im| / spread)",
        worst,
        1e-8,
    );
}

#[test]
fn criterion_5_limit_web() {
    // (i) eta -> 0 at a = -100i: Inozemtsev spectra with O(eta) error
    let n = 4;
    let kappa = 0.7;
    let a = C64::new(0.0, -100.0);
    let ref_params = ChainParams::new(n, kappa, C64::new(1e-3, 0.0), a).unwrap();
    let ino = spectrum(&h_inozemtsev(&ref_params).unwrap(), None).unwrap();
    let mut errs = Vec::new();
    for eta in [1e-3, 1e-4] {
        let params = ChainParams::new(n, kappa, C64::new(eta, 0.0), a).unwrap();
        let eigs = spectrum(&h_left(&params).unwrap(), None).unwrap();
        errs.push(spectral_distance(&eigs, &ino));
    }
    let ratio = errs[0] / errs[1];
    report(
        "5i",
        &format!("Inozemtsev limit error ratio {ratio:.2} in [5,20]"),
        (5.0 / ratio).max(ratio / 20.0),
        1.0,
    );

    // (ii) kappa = 0 equals the deformed HS construction
    let trig = ChainParams::new(4, 0.0, C64::new(0.3, 0.0), C64::new(0.0, -200.0)).unwrap();
    let hl = h_left(&trig).unwrap();
    let dhs = chain::h_deformed_hs(&trig).unwrap();
    report(
        "5ii",
        "kappa = 0 branch equals the trigonometric deformed HS matrix",
        hl.max_abs_diff(&dhs) / dhs.max_abs(),
        1e-10,
    );

    // (iii) kappa in {4,8}: rescaled h_left -> H^XXZ, residual dropping >= 10x
    let gamma = 0.23;
    let ax = C64::new(0.37, 0.0);
    let xxz = XxzChain::new(gamma, ax, 4).unwrap();
    let reference = spectrum(&xxz.h, None).unwrap();
    let mut resid = Vec::new();
    for kap in [4.0, 8.0] {
        let eta = C64::new(0.0, -std::f64::consts::PI * gamma / kap);
        let params = ChainParams::new(4, kap, eta, ax).unwrap();
        let scale = C64::new(kap.sinh().powi(2) / (kap * kap), 0.0);
        let eigs = spectrum(&h_left(&params).unwrap().scaled(scale), None).unwrap();
        resid.push(spectral_distance(&eigs, &reference));
    }
    report(
        "5iii",
        &format!(
            "short-range rescaling: residual {:.2e} -> {:.2e} (>= 10x drop)",
            resid[0], resid[1]
        ),
        10.0 * resid[1] / resid[0],
        1.0,
    );

    // (iv) a = a'/eta, eta -> 0: intermediate-chain spectra with O(eta) error
    let a_prime = C64::new(0.55, 0.2);
    let base = ChainParams::new(4, kappa, C64::new(1e-3, 0.0), a_prime / 1e-3).unwrap();
    let inter = spectrum(&h_intermediate(a_prime, &base).unwrap(), None).unwrap();
    for (label, left) in [("5iv-L", true), ("5iv-R", false)] {
        let mut errs = Vec::new();
        for eta in [1e-3, 1e-4] {
            let params = ChainParams::new(4, kappa, C64::new(eta, 0.0), a_prime / eta).unwrap();
            let h = if left {
                h_left(&params).unwrap()
            } else {
                h_right(&params).unwrap()
            };
            errs.push(spectral_distance(&spectrum(&h, None).unwrap(), &inter));
        }
        let ratio = errs[0] / errs[1];
        report(
            label,
            &format!("intermediate-chain limit error ratio {ratio:.2} in [5,20]"),
            (5.0 / ratio).max(ratio / 20.0),
            1.0,
        );
    }

    // (v) a' -> 0 recovers the Inozemtsev chain
    let params = ChainParams::new(4, kappa, C64::new(0.0, 0.4), C64::new(1.3, 0.0)).unwrap();
    let ino_m = h_inozemtsev(&params).unwrap();
    let close = h_intermediate(C64::new(1e-5, 0.0), &params).unwrap();
    report(
        "5v",
        "intermediate chain at a' = 1e-5 vs Inozemtsev (matrix)",
        close.max_abs_diff(&ino_m) / ino_m.max_abs(),
        1e-4,
    );

    // (vi) XXZ with gamma -> 0, a = -1e4 i: Heisenberg XXX spectra
    let x = XxzChain::new(1e-6, C64::new(0.0, -1.0e4), 4).unwrap();
    let eigs = spectrum(&x.h, None).unwrap();
    let xxx = spectrum(&h_xxx(4), None).unwrap();
    report(
        "5vi",
        "short-range chain at gamma -> 0 vs periodic XXX spectra",
        spectral_distance(&eigs, &xxx) / spectral_spread(&xxx),
        1e-2,
    );
}

#[test]
fn criterion_6_temperley_lieb() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst: f64 = 0.0;
    for n in 3..=6usize {
        for _ in 0..5 {
            let (gamma, a) = loop {
                let gamma = rng.random_range(0.15..0.3);
                let a = C64::new(rng.random_range(0.3..0.7), rng.random_range(0.8..1.4));
                let reach = n as i64 - 1;
                if (-reach..=reach)
                    .all(|s| (std::f64::consts::PI * gamma * (a - s as f64)).sin().norm() > 0.1)
                {
                    break (gamma, a);
                }
            };
            let x = XxzChain::new(gamma, a, n).unwrap();
            let two_cos = C64::new(2.0 * (std::f64::consts::PI * gamma).cos(), 0.0);
            for i in 0..n {
                let e = x.e_op(i);
                worst = worst.max(e.dot(e).max_abs_diff(&e.scaled(two_cos)));
                let en = x.e_op((i + 1) % n);
                worst = worst.max(e.dot(en).dot(e).max_abs_diff(e));
                worst = worst.max(en.dot(e).dot(en).max_abs_diff(en));
            }
            let u = x.u_op();
            let u_inv = u.inv().unwrap();
            for i in 1..=n {
                worst = worst.max(u.dot(x.e_op(i)).dot(&u_inv).max_abs_diff(x.e_op(i - 1)));
            }
            let un = u.pow(n);
            for i in 0..n {
                worst = worst.max(un.commutator_rel(x.e_op(i)));
            }
            let mut w = u.dot(u);
            for i in 1..n {
                w = w.dot(x.e_op(i));
            }
            worst = worst.max(w.max_abs_diff(x.e_op(n - 1)));
        }
    }
    report(
        "6",
        "Temperley-Lieb and affine TL relations (20 draws, N=3..6)",
        worst,
        1e-11,
    );
}

#[test]
fn criterion_7_qmbs_commutativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst_comm: f64 = 0.0;
    let mut worst_dn: f64 = 0.0;
    let mut worst_ptot: f64 = 0.0;
    let generic = |rng: &mut ChaCha8Rng, n: usize| -> Vec<C64> {
        (0..n)
            .map(|k| {
                C64::new(
                    0.8 * (k as f64 + 1.0) + rng.random_range(-0.2..0.2),
                    rng.random_range(-0.3..0.3),
                )
            })
            .collect()
    };
    for (n, points) in [(2usize, 20usize), (3, 20), (4, 3)] {
        let params = QmbsParams::new(draw_params(&mut rng, n), 1.0, C64::new(0.0, 0.1)).unwrap();
        let d1 = build_d1(&params);
        let dm1 = build_dminus1(&params);
        let dn = build_dn(&params);
        for _ in 0..points {
            let xs = generic(&mut rng, n);
            worst_comm = worst_comm.max(commutator_residual(&d1, &dm1, &xs).unwrap());
        }
        let xs = generic(&mut rng, n);
        worst_dn = worst_dn
            .max(commutator_residual(&d1, &dn, &xs).unwrap())
            .max(commutator_residual(&dm1, &dn, &xs).unwrap());
        // P^tot invariance of D_{+-1} and of the generated higher charges
        let f = exponential_wave(
            (0..n)
                .map(|_| C64::new(rng.random_range(-0.4..0.4), rng.random_range(-0.2..0.2)))
                .collect(),
            Array1::from_vec(
                (0..1 << n)
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            ),
        );
        let mut ops = vec![d1, dm1];
        if n <= 4 {
            for r in 2..n {
                ops.push(build_higher(r, 1, &params).unwrap());
                ops.push(build_higher(r, -1, &params).unwrap());
            }
        }
        for d in &ops {
            for i in 1..n {
                worst_ptot =
                    worst_ptot.max(ptot_invariance_residual(d, i, &params, &f, &xs).unwrap());
            }
        }
    }
    report(
        "7a",
        "[D1, D-1] coefficient residual (20 pts N=2,3; 3 pts N=4)",
        worst_comm,
        1e-9,
    );
    report("7b", "[D±1, D_N] coefficient residual", worst_dn, 1e-12);
    report(
        "7c",
        "P^tot invariance of D±1 and generated higher charges",
        worst_ptot,
        1e-10,
    );
}

#[test]
fn criterion_7_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(717);
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        let params = QmbsParams::new(draw_params(&mut rng, n), 1.0, C64::new(0.0, 0.1)).unwrap();
        let d1 = build_d1(&params);
        let dm1 = build_dminus1(&params);
        let ab = compose(&d1, &dm1);
        let f = exponential_wave(
            (0..n)
                .map(|_| C64::new(rng.random_range(-0.4..0.4), rng.random_range(-0.2..0.2)))
                .collect(),
            Array1::from_vec(
                (0..1 << n)
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            ),
        );
        let xs: Vec<C64> = (0..n)
            .map(|k| C64::new(0.8 * (k as f64 + 1.0), rng.random_range(-0.2..0.2)))
            .collect();
        let nested = apply(&d1, &|ys: &[C64]| apply(&dm1, &f, ys), &xs).unwrap();
        let direct = apply(&ab, &f, &xs).unwrap();
        let scale = nested.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let dev = nested
            .iter()
            .zip(direct.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(dev / scale.max(1e-300));
    }
    report(
        "7d",
        "normal-form composition agrees with nested application",
        worst,
        1e-12,
    );
}

#[test]
fn criterion_8_freezing() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst_eq: f64 = 0.0;
    let mut worst_astar: f64 = 0.0;
    let mut worst_gate: f64 = 0.0;
    let mut worst_dev: f64 = 0.0;
    for n in 2..=4usize {
        let params = QmbsParams::new(draw_params(&mut rng, n), 1.0, C64::new(0.0, 0.1)).unwrap();
        let cfg1 = equilibrium_1(&params).unwrap();
        let cfg2 = equilibrium_2(&params).unwrap();
        worst_eq = worst_eq
            .max(equilibrium_residual(&cfg1, params.epsilon).unwrap())
            .max(equilibrium_residual(&cfg2, params.epsilon).unwrap());
        for chir in [Chirality::Left, Chirality::Right] {
            let rep = freeze_check(chir, &params).unwrap();
            worst_gate = worst_gate.max(rep.gate_spread);
            worst_dev = worst_dev.max(rep.deviation);
            if chir == Chirality::Left {
                // the common velocity reproduces the printed closed form
                worst_astar = worst_astar
                    .max((rep.a_star - cfg2.a_star).norm() / cfg2.a_star.norm());
            }
        }
    }
    report(
        "8a",
        "both printed equilibria satisfy the stationarity conditions",
        worst_eq,
        1e-10,
    );
    report("8b", "computed A* matches the printed closed form", worst_astar, 1e-10);
    report("8c", "momentum-weight gate w_j A_j(x*) j-independent", worst_gate, 1e-10);
    report(
        "8d",
        "frozen linearisation reproduces A* H^{L,R} (N=2..4)",
        worst_dev,
        1e-7,
    );
}
