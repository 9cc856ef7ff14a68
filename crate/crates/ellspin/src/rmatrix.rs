//! The 4×4 dynamical R-matrix on two spins, the deformed nearest-neighbour
//! exchange built from it, and the degenerate families reached in the
//! trigonometric, short-range, and isotropic limits.
//!
//! Basis order is (↑↑, ↑↓, ↓↑, ↓↓) with ↑ ≡ +1, so every matrix here can be
//! compared entry by entry with its printed form. All of them conserve
//! spin-z: only the corners and the central 2×2 block are ever populated
//! (the ice rule).

use num_complex::Complex64 as C64;

use crate::elliptic::{f_ratio, potential_v, rho, theta_eval, EllipticParams};
use crate::error::{Error, Result};

pub const INVARIANTS: &[&str] = &[
    "r_initial_condition",
    "r_unitarity",
    "r_ice_rule",
    "r_deriv_fd",
    "exchange_cross_check",
    "exchange_isotropic_limit",
    "dybe",
    "e_tri_idempotent",
    "e_heis_tl_seed",
];

/// A 4×4 complex matrix in the two-spin basis (↑↑, ↑↓, ↓↑, ↓↓).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix4(pub [[C64; 4]; 4]);

impl RMatrix4 {
    pub fn zero() -> Self {
        RMatrix4([[C64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Ice-rule matrix from corner values and the central block
    /// [[b11, b12], [b21, b22]].
    pub fn from_blocks(c11: C64, b: [[C64; 2]; 2], c44: C64) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = c11;
        m.0[1][1] = b[0][0];
        m.0[1][2] = b[0][1];
        m.0[2][1] = b[1][0];
        m.0[2][2] = b[1][1];
        m.0[3][3] = c44;
        m
    }

    pub fn matmul(&self, rhs: &RMatrix4) -> RMatrix4 {
        let mut out = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> RMatrix4 {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &RMatrix4) -> RMatrix4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &RMatrix4) -> f64 {
        self.sub(rhs).max_abs()
    }

    /// True when every entry outside the ice-rule pattern is exactly zero.
    pub fn respects_ice_rule(&self) -> bool {
        const ALLOWED: [(usize, usize); 6] = [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3)];
        self.0.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| ALLOWED.contains(&(i, j)) || *v == C64::new(0.0, 0.0))
        })
    }
}

/// The plain two-spin permutation matrix P.
pub fn permutation() -> RMatrix4 {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    RMatrix4::from_blocks(one, [[zero, one], [one, zero]], one)
}

/// Arguments of the dynamical R-matrix: spectral argument x, dynamical
/// parameter a, anisotropy η. Entries have poles at ηa on the theta zero
/// lattice Nk + iπl/κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynArgs {
    pub x: C64,
    pub a: C64,
    pub eta: C64,
}

/// Felder's dynamical R-matrix in braid form,
///
/// ```text
///            ( 1                                    )
/// Ř(x,a)  =  (    f(η,x,ηa)    f(x,η,ηa)            )
///            (    f(x,η,−ηa)   f(η,x,−ηa)           )
///            (                                   1  )
/// ```
///
/// with f(x,y,z) = θ(x)θ(y+z)/(θ(x+y)θ(z)).
pub fn r_check(args: &DynArgs, p: &EllipticParams) -> Result<RMatrix4> {
    let DynArgs { x, a, eta } = *args;
    let z = eta * a;
    let one = C64::new(1.0, 0.0);
    Ok(RMatrix4::from_blocks(
        one,
        [
            [f_ratio(eta, x, z, p)?, f_ratio(x, eta, z, p)?],
            [f_ratio(x, eta, -z, p)?, f_ratio(eta, x, -z, p)?],
        ],
        one,
    ))
}

/// Analytic ∂ₓ Ř(x,a): each f-entry differentiates to f times a difference
/// of prepotentials, f(η,x,z) ↦ f·(ρ(x+z) − ρ(η+x)) and
/// f(x,η,z) ↦ f·(ρ(x) − ρ(x+η)).
pub fn r_check_deriv(args: &DynArgs, p: &EllipticParams) -> Result<RMatrix4> {
    let DynArgs { x, a, eta } = *args;
    let z = eta * a;
    let zero = C64::new(0.0, 0.0);
    let d_fexz =
        |z: C64| -> Result<C64> { Ok(f_ratio(eta, x, z, p)? * (rho(x + z, p)? - rho(eta + x, p)?)) };
    let d_fxez =
        |z: C64| -> Result<C64> { Ok(f_ratio(x, eta, z, p)? * (rho(x, p)? - rho(x + eta, p)?)) };
    Ok(RMatrix4::from_blocks(
        zero,
        [[d_fexz(z)?, d_fxez(z)?], [d_fxez(-z)?, d_fexz(-z)?]],
        zero,
    ))
}

/// Deformed exchange E(x,a) = Ř(−x,a)·Ř′(x,a) / (θ(η)V(x)), the normalised
/// logarithmic derivative of the R-matrix. Product form.
pub fn exchange_e(args: &DynArgs, p: &EllipticParams) -> Result<RMatrix4> {
    let norm = exchange_norm(args, p)?;
    let back = r_check(
        &DynArgs {
            x: -args.x,
            ..*args
        },
        p,
    )?;
    let deriv = r_check_deriv(args, p)?;
    Ok(back.matmul(&deriv).scale(1.0 / norm))
}

fn exchange_norm(args: &DynArgs, p: &EllipticParams) -> Result<C64> {
    let th_eta =
        theta_eval(args.eta, p)?.nonzero("exchange normalisation theta(eta)", args.eta)?;
    let v = potential_v(args.x, args.eta, p)?;
    if v.norm() < 1e-13 {
        return Err(Error::DegenerateNormalization { arg: args.x });
    }
    Ok(th_eta * v)
}

/// α(x,z) = f(η,x,z)f(η,−x,z)(ρ(x+z)−ρ(x)) − (ρ(x+η)−ρ(x)).
fn alpha(x: C64, z: C64, eta: C64, p: &EllipticParams) -> Result<C64> {
    Ok(
        f_ratio(eta, x, z, p)? * f_ratio(eta, -x, z, p)? * (rho(x + z, p)? - rho(x, p)?)
            - (rho(x + eta, p)? - rho(x, p)?),
    )
}

/// β(x,z) = f(x,η,z)f(η,−x,z)(ρ(x)−ρ(x−z)).
fn beta(x: C64, z: C64, eta: C64, p: &EllipticParams) -> Result<C64> {
    Ok(f_ratio(x, eta, z, p)? * f_ratio(eta, -x, z, p)? * (rho(x, p)? - rho(x - z, p)?))
}

/// The same exchange through its closed-form coefficients: central block
/// [[α(x,ηa), β(x,ηa)], [β(x,−ηa), α(x,−ηa)]] over θ(η)V(x), corners zero.
/// Independent algebraic route, kept as a cross-check of [`exchange_e`].
pub fn exchange_e_closed(args: &DynArgs, p: &EllipticParams) -> Result<RMatrix4> {
    let DynArgs { x, a, eta } = *args;
    let z = eta * a;
    let norm = exchange_norm(args, p)?;
    let zero = C64::new(0.0, 0.0);
    Ok(RMatrix4::from_blocks(
        zero,
        [
            [alpha(x, z, eta, p)?, beta(x, z, eta, p)?],
            [beta(x, -z, eta, p)?, alpha(x, -z, eta, p)?],
        ],
        zero,
    )
    .scale(1.0 / norm))
}

/// Trigonometric exchange reached for κ→0, ηa→−i∞: central block
/// [[q^{−1}, −q], [−q^{−1}, q]] with q = e^{iπη/N}, corners zero.
pub fn e_tri(eta: C64, n: f64) -> RMatrix4 {
    let q = (C64::new(0.0, std::f64::consts::PI) * eta / n).exp();
    let zero = C64::new(0.0, 0.0);
    RMatrix4::from_blocks(zero, [[1.0 / q, -q], [-1.0 / q, q]], zero)
}

/// Ř^tri(x) = 1 − sin(πx/N)/sin(π(x+η)/N) · E^tri.
pub fn r_tri(x: C64, eta: C64, n: f64) -> Result<RMatrix4> {
    let pi_n = std::f64::consts::PI / n;
    let denom = (pi_n * (x + eta)).sin();
    if denom.norm() < 1e-13 {
        return Err(Error::Pole {
            context: "trigonometric R-matrix".into(),
            arg: x + eta,
        });
    }
    let coeff = (pi_n * x).sin() / denom;
    Ok(RMatrix4::identity().sub(&e_tri(eta, n).scale(coeff)))
}

/// Short-range exchange E^H(a) with entries sin[πγ(a∓1)]/sin(πγa).
pub fn e_heis(a: C64, gamma: f64) -> Result<RMatrix4> {
    let pg = std::f64::consts::PI * gamma;
    let denom = (pg * a).sin();
    if denom.norm() < 1e-13 {
        return Err(Error::Pole {
            context: "short-range exchange sin(pi gamma a)".into(),
            arg: a,
        });
    }
    let minus = (pg * (a - 1.0)).sin() / denom;
    let plus = (pg * (a + 1.0)).sin() / denom;
    let zero = C64::new(0.0, 0.0);
    Ok(RMatrix4::from_blocks(
        zero,
        [[minus, -plus], [-minus, plus]],
        zero,
    ))
}

/// Ř^H(a) = 1 − e^{−iπγ} E^H(a).
pub fn r_heis(a: C64, gamma: f64) -> Result<RMatrix4> {
    let phase = C64::new(0.0, -std::f64::consts::PI * gamma).exp();
    Ok(RMatrix4::identity().sub(&e_heis(a, gamma)?.scale(phase)))
}

// --- three-spin embeddings for the dynamical Yang-Baxter residual ---

fn emb12(r: &RMatrix4) -> [[C64; 8]; 8] {
    let mut m = [[C64::new(0.0, 0.0); 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            for s in 0..2 {
                m[2 * i + s][2 * j + s] = r.0[i][j];
            }
        }
    }
    m
}

fn emb23(up: &RMatrix4, down: &RMatrix4) -> [[C64; 8]; 8] {
    let mut m = [[C64::new(0.0, 0.0); 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = up.0[i][j];
            m[4 + i][4 + j] = down.0[i][j];
        }
    }
    m
}

fn matmul8(a: &[[C64; 8]; 8], b: &[[C64; 8]; 8]) -> [[C64; 8]; 8] {
    let mut out = [[C64::new(0.0, 0.0); 8]; 8];
    for i in 0..8 {
        for k in 0..8 {
            let v = a[i][k];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..8 {
                out[i][j] += v * b[k][j];
            }
        }
    }
    out
}

/// Residual of the braid-form dynamical Yang–Baxter equation on three
/// spins, with the dynamical shift of the middle factor realised by σ^z of
/// the first spin:
///
/// ```text
/// Ř₁₂(x₁−x₂,a) Ř₂₃(x−x₂,a−σ₁ᶻ) Ř₁₂(x−x₁,a)
///   = Ř₂₃(x−x₁,a−σ₁ᶻ) Ř₁₂(x−x₂,a) Ř₂₃(x₁−x₂,a−σ₁ᶻ).
/// ```
///
/// Returns the max-norm of LHS − RHS.
pub fn dybe_residual(
    x: C64,
    x1: C64,
    x2: C64,
    a: C64,
    eta: C64,
    p: &EllipticParams,
) -> Result<f64> {
    let r12 =
        |u: C64| -> Result<[[C64; 8]; 8]> { Ok(emb12(&r_check(&DynArgs { x: u, a, eta }, p)?)) };
    let r23 = |u: C64| -> Result<[[C64; 8]; 8]> {
        let up = r_check(
            &DynArgs {
                x: u,
                a: a - 1.0,
                eta,
            },
            p,
        )?;
        let down = r_check(
            &DynArgs {
                x: u,
                a: a + 1.0,
                eta,
            },
            p,
        )?;
        Ok(emb23(&up, &down))
    };
    let lhs = matmul8(&matmul8(&r12(x1 - x2)?, &r23(x - x2)?), &r12(x - x1)?);
    let rhs = matmul8(&matmul8(&r23(x - x1)?, &r12(x - x2)?), &r23(x1 - x2)?);
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            worst = worst.max((lhs[i][j] - rhs[i][j]).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> EllipticParams {
        EllipticParams::new(0.7, 5.0).unwrap()
    }

    fn args(x: C64) -> DynArgs {
        DynArgs {
            x,
            a: C64::new(1.3, 0.0),
            eta: C64::new(0.0, 0.4),
        }
    }

    #[test]
    fn initial_condition_is_identity() {
        let p = params();
        let r = r_check(&args(C64::new(0.0, 0.0)), &p).unwrap();
        assert!(r.max_abs_diff(&RMatrix4::identity()) < 1e-13);
    }

    #[test]
    fn unitarity() {
        let p = params();
        let x = C64::new(0.37, 0.21);
        let r = r_check(&args(x), &p).unwrap();
        let rb = r_check(&args(-x), &p).unwrap();
        assert!(r.matmul(&rb).max_abs_diff(&RMatrix4::identity()) < 1e-13);
    }

    #[test]
    fn ice_rule_by_construction() {
        let p = params();
        for m in [
            r_check(&args(C64::new(0.4, -0.2)), &p).unwrap(),
            r_check_deriv(&args(C64::new(0.4, -0.2)), &p).unwrap(),
            exchange_e(&args(C64::new(0.4, -0.2)), &p).unwrap(),
            e_tri(C64::new(0.3, 0.0), 5.0),
            e_heis(C64::new(0.45, 0.0), 0.23).unwrap(),
        ] {
            assert!(m.respects_ice_rule());
        }
    }

    #[test]
    fn entry_22_is_the_f_ratio() {
        let p = params();
        let a = args(C64::new(0.52, 0.13));
        let r = r_check(&a, &p).unwrap();
        let direct = f_ratio(a.eta, a.x, a.eta * a.a, &p).unwrap();
        assert!((r.0[1][1] - direct).norm() < 1e-14);
    }

    #[test]
    fn derivative_against_finite_differences() {
        let p = params();
        let x = C64::new(0.37, 0.21);
        let h = 1e-6;
        let fp = r_check(&args(x + h), &p).unwrap();
        let fm = r_check(&args(x - h), &p).unwrap();
        let fd = fp.sub(&fm).scale(C64::new(1.0 / (2.0 * h), 0.0));
        let an = r_check_deriv(&args(x), &p).unwrap();
        assert!(fd.max_abs_diff(&an) < 1e-7);
        assert_eq!(an.0[0][0], C64::new(0.0, 0.0));
        assert_eq!(an.0[3][3], C64::new(0.0, 0.0));
    }

    #[test]
    fn exchange_product_vs_closed_form() {
        let p = params();
        for &(re, im) in &[(0.37, 0.21), (-1.1, 0.4), (2.3, -0.6)] {
            let a = args(C64::new(re, im));
            let prod = exchange_e(&a, &p).unwrap();
            let closed = exchange_e_closed(&a, &p).unwrap();
            assert!(
                prod.max_abs_diff(&closed) < 1e-12,
                "x = {re}+{im}i: {:.3e}",
                prod.max_abs_diff(&closed)
            );
            assert_eq!(prod.0[0][0], C64::new(0.0, 0.0));
            assert_eq!(prod.0[3][3], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn exchange_isotropic_limit_is_one_minus_p() {
        // eta -> 0 at large imaginary a; the residual is set by eta*a and
        // 1/a, and shrinks further as eta decreases
        let p = params();
        let one_minus_p = RMatrix4::identity().sub(&permutation());
        let dev = |eta: f64| {
            let a = DynArgs {
                x: C64::new(0.7, 0.0),
                a: C64::new(0.0, -1.0e4),
                eta: C64::new(eta, 0.0),
            };
            exchange_e(&a, &p).unwrap().max_abs_diff(&one_minus_p)
        };
        let d4 = dev(1e-4);
        let d6 = dev(1e-6);
        assert!(d4 < 5e-3, "{d4:.3e}");
        assert!(d6 < 1e-3, "{d6:.3e}");
        assert!(d6 < d4);
    }

    #[test]
    fn dybe_holds_elliptic_and_trig() {
        for kappa in [0.7, 0.0] {
            let p = EllipticParams::new(kappa, 5.0).unwrap();
            let r = dybe_residual(
                C64::new(0.31, 0.11),
                C64::new(-0.22, 0.05),
                C64::new(0.4, -0.13),
                C64::new(1.3, 0.0),
                C64::new(0.0, 0.4),
                &p,
            )
            .unwrap();
            assert!(r < 1e-12, "kappa={kappa}: residual {r:.3e}");
        }
    }

    #[test]
    fn dybe_degenerate_arguments() {
        let p = params();
        let x1 = C64::new(0.4, -0.1);
        let r = dybe_residual(
            C64::new(0.31, 0.11),
            x1,
            x1,
            C64::new(1.3, 0.0),
            C64::new(0.0, 0.4),
            &p,
        )
        .unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn e_tri_matches_printed_matrix_and_squares() {
        let eta = C64::new(0.3, 0.0);
        let n = 5.0;
        let q = (C64::new(0.0, std::f64::consts::PI) * eta / n).exp();
        let e = e_tri(eta, n);
        assert_eq!(e.0[1][1], 1.0 / q);
        assert_eq!(e.0[1][2], -q);
        // (E^tri)^2 = (q + 1/q) E^tri, the Temperley-Lieb idempotency seed
        let sq = e.matmul(&e);
        assert!(sq.max_abs_diff(&e.scale(q + 1.0 / q)) < 1e-14);
    }

    #[test]
    fn r_tri_initial_condition() {
        let r = r_tri(C64::new(0.0, 0.0), C64::new(0.3, 0.0), 5.0).unwrap();
        assert!(r.max_abs_diff(&RMatrix4::identity()) < 1e-15);
    }

    #[test]
    fn e_heis_entries_and_tl_seed() {
        let gamma = 0.23;
        let a = C64::new(0.45, 0.0);
        let e = e_heis(a, gamma).unwrap();
        let pg = std::f64::consts::PI * gamma;
        let want = (pg * (a - 1.0)).sin() / (pg * a).sin();
        assert!((e.0[1][1] - want).norm() < 1e-15);
        // (E^H)^2 = 2 cos(pi gamma) E^H
        let sq = e.matmul(&e);
        assert!(sq.max_abs_diff(&e.scale(C64::new(2.0 * pg.cos(), 0.0))) < 1e-13);
    }

    #[test]
    fn e_heis_isotropic_limit() {
        let e = e_heis(C64::new(0.0, -1.0e4), 1e-5).unwrap();
        let one_minus_p = RMatrix4::identity().sub(&permutation());
        assert!(e.max_abs_diff(&one_minus_p) < 1e-3);
    }

    #[test]
    fn e_heis_pole() {
        assert!(matches!(
            e_heis(C64::new(0.0, 0.0), 0.23),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn exchange_trigonometric_limit() {
        // kappa -> 0 with eta a -> -i infinity: E becomes the x-independent
        // E^tri. The deviation scales like (2/N) kappa Im(eta a), so the
        // dynamical parameter must sit in the window where the
        // trigonometric decay e^{-2 pi Im(eta a)/N} is already done but the
        // iπ/κ quasi-period has not wrapped.
        let n = 5.0;
        let eta = C64::new(0.3, 0.0);
        let et = e_tri(eta, n);
        let dev = |kappa: f64, t: f64| {
            let ell = EllipticParams::new(kappa, n).unwrap();
            let a = C64::new(0.0, -t) / eta;
            exchange_e(
                &DynArgs {
                    x: C64::new(0.7, 0.0),
                    a,
                    eta,
                },
                &ell,
            )
            .unwrap()
            .max_abs_diff(&et)
        };
        assert!(dev(1e-5, 30.0) < 1e-4, "{:.3e}", dev(1e-5, 30.0));
        let ratio = dev(1e-3, 100.0) / dev(1e-4, 100.0);
        assert!((5.0..20.0).contains(&ratio), "ratio {ratio:.2}");
        // and x-independence in the limit, at the same (2/N) kappa Im(eta a)
        // correction scale
        let ell = EllipticParams::new(1e-5, n).unwrap();
        let a = C64::new(0.0, -30.0) / eta;
        let e1 = exchange_e(&DynArgs { x: C64::new(0.7, 0.0), a, eta }, &ell).unwrap();
        let e2 = exchange_e(&DynArgs { x: C64::new(1.9, 0.0), a, eta }, &ell).unwrap();
        let d = e1.max_abs_diff(&e2);
        assert!(d < 5.0 * (2.0 / n) * 1e-5 * 30.0, "{d:.3e}");
    }
}
