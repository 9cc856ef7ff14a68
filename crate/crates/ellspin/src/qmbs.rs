//! The dynamical elliptic spin-Ruijsenaars system: commuting difference
//! operators with matrix-valued coefficients, the P^tot symmetrisation that
//! generates them from a single seed coefficient, the classical
//! Ruijsenaars–Schneider equilibria, and the freezing linearisation that
//! recovers the spin-chain hamiltonians.
//!
//! A difference operator is kept in normal form: every term is a
//! coefficient function C_m(x) (a 2^N×2^N matrix for each x ∈ C^N) followed
//! by a pure shift, acting as f(x) ↦ C_m(x)·f(x − c·m) with step c = iħε
//! and m ∈ Z^N. Coefficients are closures over the parameters; identities
//! are certified pointwise at generic points rather than symbolically.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::chain::{h_left, h_right, perm_p, ChainParams, SpinOperator};
use crate::elliptic::{theta_eval, vartheta, vartheta_eval, vartheta_log_deriv, GeneralTheta};
use crate::error::{Error, Result};

pub const INVARIANTS: &[&str] = &[
    "qmbs_comm_d1_dm1",
    "qmbs_comm_d_dn",
    "qmbs_normal_form",
    "ptot_invariance",
    "ptot_involution",
    "equilibrium_1",
    "equilibrium_2",
    "freeze_gate",
    "freeze_check_l",
    "freeze_check_r",
    "freeze_isotropic_reduction",
];

/// Chain parameters extended by the difference-operator scale: the shift
/// step is c = iħε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmbsParams {
    pub chain: ChainParams,
    pub hbar: f64,
    pub epsilon: C64,
}

impl QmbsParams {
    pub fn new(chain: ChainParams, hbar: f64, epsilon: C64) -> Result<Self> {
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidParams("hbar must be > 0".into()));
        }
        if epsilon == C64::new(0.0, 0.0) {
            return Err(Error::InvalidParams(
                "epsilon must be nonzero for difference-operator use".into(),
            ));
        }
        Ok(Self {
            chain,
            hbar,
            epsilon,
        })
    }

    /// Coordinate decrement of the shift operator Γ.
    pub fn step(&self) -> C64 {
        C64::new(0.0, 1.0) * self.hbar * self.epsilon
    }
}

/// Matrix-valued coefficient function of x ∈ C^N.
pub type Coeff = Arc<dyn Fn(&[C64]) -> Result<Array2<C64>> + Send + Sync>;

/// A difference operator in normal form (shifts pushed to the right).
#[derive(Clone)]
pub struct DiffOp {
    pub n: usize,
    /// Shift step c; compositions require equal steps.
    pub step: C64,
    terms: BTreeMap<Vec<i32>, Coeff>,
}

impl DiffOp {
    pub fn empty(n: usize, step: C64) -> Self {
        Self {
            n,
            step,
            terms: BTreeMap::new(),
        }
    }

    /// Add a term; coefficients on an existing shift vector accumulate.
    pub fn add_term(&mut self, shift: Vec<i32>, coeff: Coeff) {
        assert_eq!(shift.len(), self.n);
        match self.terms.remove(&shift) {
            None => {
                self.terms.insert(shift, coeff);
            }
            Some(prev) => {
                let summed: Coeff = Arc::new(move |x: &[C64]| Ok(prev(x)? + coeff(x)?));
                self.terms.insert(shift, summed);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, shift: &[i32]) -> Option<&Coeff> {
        self.terms.get(shift)
    }

    fn shifted(x: &[C64], m: &[i32], c: C64) -> Vec<C64> {
        x.iter()
            .zip(m.iter())
            .map(|(xi, mi)| xi - c * *mi as f64)
            .collect()
    }
}

/// Ruijsenaars coefficient A_i(x) = ∏_{j≠i} θ(x_i−x_j+η)/θ(x_i−x_j)
/// (1-based i) in the chain theta convention.
pub fn a_coefficient(i: usize, xs: &[C64], params: &ChainParams) -> Result<C64> {
    let ell = params.elliptic();
    let mut v = C64::new(1.0, 0.0);
    for (j, xj) in xs.iter().enumerate() {
        if j + 1 == i {
            continue;
        }
        let d = xs[i - 1] - xj;
        let num = theta_eval(d + params.eta, &ell)?.value;
        let den = theta_eval(d, &ell)?.nonzero("Ruijsenaars coefficient", d)?;
        v *= num / den;
    }
    Ok(v)
}

/// First conserved charge, in normal form:
/// D̃₁ = Σ_i A_i(x) P_{i−1,i}(x_i−x_{i−1})⋯P₁₂(x_i−x₁) ·
/// P₁₂(x₁−x_i+iħε)⋯P_{i−1,i}(x_{i−1}−x_i+iħε) · Γ_i.
pub fn build_d1(params: &QmbsParams) -> DiffOp {
    let n = params.chain.n;
    let c = params.step();
    let mut op = DiffOp::empty(n, c);
    for i in 1..=n {
        let chain = params.chain;
        let coeff: Coeff = Arc::new(move |xs: &[C64]| {
            let mut m = SpinOperator::identity(chain.n);
            for k in (1..i).rev() {
                m = m.dot(&perm_p(k, xs[i - 1] - xs[k - 1], &chain)?);
            }
            for k in 1..i {
                m = m.dot(&perm_p(k, xs[k - 1] - xs[i - 1] + c, &chain)?);
            }
            let a = a_coefficient(i, xs, &chain)?;
            Ok(m.scaled(a).mat)
        });
        let mut shift = vec![0i32; n];
        shift[i - 1] = 1;
        op.add_term(shift, coeff);
    }
    op
}

/// Antichiral partner D̃₋₁ = Σ_i A_i(−x) P_{i,i+1}(x_{i+1}−x_i)⋯
/// P_{N−1,N}(x_N−x_i) · P_{N−1,N}(x_i+iħε−x_N)⋯P_{i,i+1}(x_i+iħε−x_{i+1}) · Γ_i^{−1}.
pub fn build_dminus1(params: &QmbsParams) -> DiffOp {
    let n = params.chain.n;
    let c = params.step();
    let mut op = DiffOp::empty(n, c);
    for i in 1..=n {
        let chain = params.chain;
        let coeff: Coeff = Arc::new(move |xs: &[C64]| {
            let neg: Vec<C64> = xs.iter().map(|x| -x).collect();
            let a = a_coefficient(i, &neg, &chain)?;
            let mut m = SpinOperator::identity(chain.n);
            for k in i..chain.n {
                m = m.dot(&perm_p(k, xs[k] - xs[i - 1], &chain)?);
            }
            for k in (i..chain.n).rev() {
                m = m.dot(&perm_p(k, xs[i - 1] + c - xs[k], &chain)?);
            }
            Ok(m.scaled(a).mat)
        });
        let mut shift = vec![0i32; n];
        shift[i - 1] = -1;
        op.add_term(shift, coeff);
    }
    op
}

/// Total shift operator D̃_N = Γ₁⋯Γ_N: one term, identity coefficient.
pub fn build_dn(params: &QmbsParams) -> DiffOp {
    let n = params.chain.n;
    let mut op = DiffOp::empty(n, params.step());
    let dim = 1 << n;
    op.add_term(
        vec![1i32; n],
        Arc::new(move |_xs: &[C64]| Ok(Array2::eye(dim))),
    );
    op
}

/// Higher charge D̃_{±r}: starts from the seed coefficient
/// A_{1…r}(x) = ∏_{i≤r} ∏_{j>r} θ(x_i−x_j+η)/θ(x_i−x_j) on the shift
/// (1,…,1,0,…,0) (mirrored seed for sign −1) and generates every r-subset
/// term by iterated P^tot conjugation; the result is invariant under all
/// P^tot_{i,i+1}. Materialised eagerly, N ≤ 6.
pub fn build_higher(r: usize, sign: i32, params: &QmbsParams) -> Result<DiffOp> {
    let n = params.chain.n;
    if r == 0 || r > n {
        return Err(Error::InvalidParams(format!(
            "higher charge order r = {r} out of range 1..={n}"
        )));
    }
    if n > 6 {
        return Err(Error::InvalidParams(
            "higher charges are materialised eagerly for N <= 6 only".into(),
        ));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParams("sign must be +1 or -1".into()));
    }
    let c = params.step();
    let chain = params.chain;

    let seed_mask: u32 = if sign == 1 {
        (1u32 << r) - 1
    } else {
        ((1u32 << r) - 1) << (n - r)
    };
    let seed_coeff: Coeff = {
        let dim = 1usize << n;
        Arc::new(move |xs: &[C64]| {
            let ell = chain.elliptic();
            let mut v = C64::new(1.0, 0.0);
            for i in 0..chain.n {
                if seed_mask & (1 << i) == 0 {
                    continue;
                }
                for j in 0..chain.n {
                    if seed_mask & (1 << j) != 0 {
                        continue;
                    }
                    let d = if sign == 1 {
                        xs[i] - xs[j]
                    } else {
                        xs[j] - xs[i]
                    };
                    let num = theta_eval(d + chain.eta, &ell)?.value;
                    let den = theta_eval(d, &ell)?.nonzero("higher-charge seed", d)?;
                    v *= num / den;
                }
            }
            Ok(Array2::eye(dim) * v)
        })
    };

    let shift_of = |mask: u32| -> Vec<i32> {
        (0..n)
            .map(|k| if mask & (1 << k) != 0 { sign } else { 0 })
            .collect()
    };

    let mut known: BTreeMap<u32, Coeff> = BTreeMap::new();
    known.insert(seed_mask, seed_coeff);
    let mut queue = VecDeque::from([seed_mask]);
    while let Some(mask) = queue.pop_front() {
        let parent = known[&mask].clone();
        for k in 1..n {
            // swap of sites k, k+1 exchanges bits k-1 and k of the mask
            let bit_a = 1u32 << (k - 1);
            let bit_b = 1u32 << k;
            if (mask & bit_a != 0) == (mask & bit_b != 0) {
                continue;
            }
            let swapped = mask ^ bit_a ^ bit_b;
            if known.contains_key(&swapped) {
                continue;
            }
            let child_shift = shift_of(swapped);
            let delta = (child_shift[k - 1] - child_shift[k]) as f64;
            let parent_coeff = parent.clone();
            let child: Coeff = Arc::new(move |xs: &[C64]| {
                let mut ys = xs.to_vec();
                ys.swap(k - 1, k);
                let left = perm_p(k, xs[k] - xs[k - 1], &chain)?;
                let right = perm_p(k, xs[k - 1] - xs[k] - c * delta, &chain)?;
                let mid = parent_coeff(&ys)?;
                Ok(left.mat.dot(&mid).dot(&right.mat))
            });
            known.insert(swapped, child.clone());
            queue.push_back(swapped);
        }
    }

    let mut op = DiffOp::empty(n, c);
    for (mask, coeff) in known {
        op.add_term(shift_of(mask), coeff);
    }
    Ok(op)
}

/// Composition: (C_m Γ^m)(C′_{m′} Γ^{m′}) = C_m(x)·C′_{m′}(x − c·m)·Γ^{m+m′}.
pub fn compose(a: &DiffOp, b: &DiffOp) -> DiffOp {
    assert_eq!(a.n, b.n);
    assert_eq!(a.step, b.step);
    let c = a.step;
    let mut out = DiffOp::empty(a.n, c);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let m: Vec<i32> = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
            let (ca, cb, ma) = (ca.clone(), cb.clone(), ma.clone());
            let coeff: Coeff = Arc::new(move |xs: &[C64]| {
                let ys = DiffOp::shifted(xs, &ma, c);
                Ok(ca(xs)?.dot(&cb(&ys)?))
            });
            out.add_term(m, coeff);
        }
    }
    out
}

/// Evaluate every coefficient of AB − BA at the point `x`; returns the
/// largest matrix deviation relative to the largest coefficient magnitude.
pub fn commutator_residual(a: &DiffOp, b: &DiffOp, x: &[C64]) -> Result<f64> {
    let ab = compose(a, b);
    let ba = compose(b, a);
    let mut keys: Vec<Vec<i32>> = ab.terms.keys().cloned().collect();
    for k in ba.terms.keys() {
        if !keys.contains(k) {
            keys.push(k.clone());
        }
    }
    let dim = 1usize << a.n;
    let zero = Array2::<C64>::zeros((dim, dim));
    let mut scale: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for k in &keys {
        let va = match ab.terms.get(k) {
            Some(c) => c(x)?,
            None => zero.clone(),
        };
        let vb = match ba.terms.get(k) {
            Some(c) => c(x)?,
            None => zero.clone(),
        };
        let na = va.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let nb = vb.iter().map(|v| v.norm()).fold(0.0, f64::max);
        scale = scale.max(na).max(nb);
        let d = (&va - &vb).iter().map(|v| v.norm()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(worst / scale)
}

/// Apply the operator to a wave function: Σ_m C_m(x)·f(x − c·m).
pub fn apply(
    d: &DiffOp,
    f: &dyn Fn(&[C64]) -> Result<Array1<C64>>,
    x: &[C64],
) -> Result<Array1<C64>> {
    let dim = 1usize << d.n;
    let mut out = Array1::zeros(dim);
    for (m, coeff) in d.terms() {
        let ys = DiffOp::shifted(x, m, d.step);
        out = out + coeff(x)?.dot(&f(&ys)?);
    }
    Ok(out)
}

/// The deformed total permutation P^tot_{i,i+1} as a wave-function
/// transformer: (P^tot F)(x) = P_{i,i+1}(x_{i+1}−x_i)·F(s_{i,i+1} x).
pub fn ptot_apply(
    i: usize,
    params: &ChainParams,
    f: &dyn Fn(&[C64]) -> Result<Array1<C64>>,
    x: &[C64],
) -> Result<Array1<C64>> {
    let mut ys = x.to_vec();
    ys.swap(i - 1, i);
    let p = perm_p(i, x[i] - x[i - 1], params)?;
    Ok(p.apply(&f(&ys)?))
}

/// Relative deviation of apply(D, f, x) from the conjugated application
/// (P^tot_{i,i+1} D P^tot_{i,i+1} f)(x).
pub fn ptot_invariance_residual(
    d: &DiffOp,
    i: usize,
    params: &QmbsParams,
    f: &dyn Fn(&[C64]) -> Result<Array1<C64>>,
    x: &[C64],
) -> Result<f64> {
    let chain = params.chain;
    let lhs = apply(d, f, x)?;
    let inner = |ys: &[C64]| ptot_apply(i, &chain, f, ys);
    let mid = |ys: &[C64]| apply(d, &inner, ys);
    let rhs = ptot_apply(i, &chain, &mid, x)?;
    let scale = lhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let dev = lhs
        .iter()
        .zip(rhs.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(dev / scale.max(1e-300))
}

// --- classical Ruijsenaars-Schneider system -------------------------------

/// Positions, momenta, lattice parameter and common velocity constant of a
/// frozen classical configuration. `eta_eff` is the anisotropy entering
/// the coefficients in the ϑ(·|τ) convention of this configuration.
#[derive(Debug, Clone)]
pub struct EquilibriumConfig {
    pub positions: Vec<C64>,
    pub momenta: Vec<C64>,
    pub tau: C64,
    pub eta_eff: C64,
    pub a_star: C64,
}

/// A_i(x; η|τ) in the general theta convention (1-based i).
pub fn classical_a_coeff(i: usize, xs: &[C64], eta: C64, g: &GeneralTheta) -> Result<C64> {
    let mut v = C64::new(1.0, 0.0);
    for (j, xj) in xs.iter().enumerate() {
        if j + 1 == i {
            continue;
        }
        let d = xs[i - 1] - xj;
        let num = vartheta(d + eta, g)?;
        let den = vartheta_eval(d, g)?.nonzero("classical coefficient", d)?;
        v *= num / den;
    }
    Ok(v)
}

fn d_a_coeff(i: usize, j: usize, xs: &[C64], eta: C64, g: &GeneralTheta) -> Result<C64> {
    // ∂_{x_j} A_i, analytic through the log derivative of vartheta
    let a = classical_a_coeff(i, xs, eta, g)?;
    if i == j {
        let mut s = C64::new(0.0, 0.0);
        for (k, xk) in xs.iter().enumerate() {
            if k + 1 == i {
                continue;
            }
            let d = xs[i - 1] - xk;
            s += vartheta_log_deriv(d + eta, g)? - vartheta_log_deriv(d, g)?;
        }
        Ok(a * s)
    } else {
        let d = xs[i - 1] - xs[j - 1];
        Ok(-a * (vartheta_log_deriv(d + eta, g)? - vartheta_log_deriv(d, g)?))
    }
}

/// Velocities ε·e^{εp_j}·A_j(x; η|τ) of the classical flow.
pub fn classical_velocities(
    xs: &[C64],
    ps: &[C64],
    eta: C64,
    g: &GeneralTheta,
    epsilon: C64,
) -> Result<Vec<C64>> {
    (1..=xs.len())
        .map(|j| Ok(epsilon * (epsilon * ps[j - 1]).exp() * classical_a_coeff(j, xs, eta, g)?))
        .collect()
}

/// Forces −Σ_i e^{εp_i} ∂_{x_j}A_i(x; η|τ).
pub fn classical_forces(
    xs: &[C64],
    ps: &[C64],
    eta: C64,
    g: &GeneralTheta,
    epsilon: C64,
) -> Result<Vec<C64>> {
    let n = xs.len();
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let mut f = C64::new(0.0, 0.0);
        for i in 1..=n {
            f -= (epsilon * ps[i - 1]).exp() * d_a_coeff(i, j, xs, eta, g)?;
        }
        out.push(f);
    }
    Ok(out)
}

/// max_j (|velocity_j − ε·A*| + |force_j|).
pub fn equilibrium_residual(cfg: &EquilibriumConfig, epsilon: C64) -> Result<f64> {
    let g = GeneralTheta::new(cfg.tau)?;
    let v = classical_velocities(&cfg.positions, &cfg.momenta, cfg.eta_eff, &g, epsilon)?;
    let f = classical_forces(&cfg.positions, &cfg.momenta, cfg.eta_eff, &g, epsilon)?;
    Ok(v.iter()
        .zip(f.iter())
        .map(|(vj, fj)| (vj - epsilon * cfg.a_star).norm() + fj.norm())
        .fold(0.0, f64::max))
}

fn omega(kappa: f64) -> Result<C64> {
    if kappa <= 0.0 {
        return Err(Error::InvalidParams(
            "classical equilibria need kappa > 0".into(),
        ));
    }
    Ok(C64::new(0.0, std::f64::consts::PI / kappa))
}

/// Real-axis equilibrium: x*_j = j/N, p* = 0, τ = ω/N,
/// A* = ϑ(η|ω)/(N·ϑ(η/N | ω/N)), with ω = iπ/κ.
pub fn equilibrium_1(params: &QmbsParams) -> Result<EquilibriumConfig> {
    let n = params.chain.n;
    let eta = params.chain.eta;
    let om = omega(params.chain.kappa)?;
    let nf = n as f64;
    let tau = om / nf;
    let g_om = GeneralTheta::new(om)?;
    let g_tau = GeneralTheta::new(tau)?;
    let a_star = vartheta(eta, &g_om)? / (nf * vartheta(eta / nf, &g_tau)?);
    Ok(EquilibriumConfig {
        positions: (1..=n).map(|j| C64::new(j as f64 / nf, 0.0)).collect(),
        momenta: vec![C64::new(0.0, 0.0); n],
        tau,
        eta_eff: eta / nf,
        a_star,
    })
}

/// Imaginary-axis equilibrium: x*_j = −j/ω, p*_j = iπη(N−2j+1)/(ωε),
/// τ = −N/ω, A* = ϑ(η/ω | −1/ω)/ϑ(η/ω | −N/ω); the configuration whose
/// freezing produces the chain with the periodised-sinh theta.
pub fn equilibrium_2(params: &QmbsParams) -> Result<EquilibriumConfig> {
    let n = params.chain.n;
    let eta = params.chain.eta;
    let om = omega(params.chain.kappa)?;
    let nf = n as f64;
    let i_pi = C64::new(0.0, std::f64::consts::PI);
    let g1 = GeneralTheta::new(-1.0 / om)?;
    let gn = GeneralTheta::new(-nf / om)?;
    let a_star = vartheta(eta / om, &g1)? / vartheta(eta / om, &gn)?;
    Ok(EquilibriumConfig {
        positions: (1..=n).map(|j| -(j as f64) / om).collect(),
        momenta: (1..=n)
            .map(|j| i_pi * eta * (nf - 2.0 * j as f64 + 1.0) / (om * params.epsilon))
            .collect(),
        tau: -nf / om,
        eta_eff: -eta / om,
        a_star,
    })
}

// --- freezing --------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Left,
    Right,
}

/// Diagnostics of a freezing run.
#[derive(Debug, Clone)]
pub struct FreezeReport {
    /// Relative deviation of δD̃/(iħθ(η)) from A*·H.
    pub deviation: f64,
    /// Relative spread of the weighted coefficients w_j A_j(±x*).
    pub gate_spread: f64,
    /// Common value A* = w_j A_j(±x*).
    pub a_star: C64,
    /// Frobenius best-fit scalar of δD̃/(iħθ(η)) against H, reported next
    /// to A* as a consistency diagnostic.
    pub fitted_constant: C64,
}

const FREEZE_GATE_TOL: f64 = 1e-10;
const FREEZE_FD_STEP: f64 = 1e-5;

/// Evaluate the ε-linearisation of D̃_{±1} at the lattice positions
/// x*_k = k with the equilibrium-2 momentum weights
/// w_j = e^{±κη(N−2j+1)}, divide by iħθ(η) and compare with A*·H^{L,R}.
/// The j-independence of w_j A_j(±x*) is verified first and reported as a
/// gate failure otherwise, never silently normalised away.
pub fn freeze_check(chirality: Chirality, params: &QmbsParams) -> Result<FreezeReport> {
    let chain = params.chain;
    let n = chain.n;
    let nf = n as f64;
    let hbar = params.hbar;
    let xs: Vec<C64> = (1..=n).map(|k| C64::new(k as f64, 0.0)).collect();
    let neg: Vec<C64> = xs.iter().map(|x| -x).collect();

    // momentum weights: e^{±εp*_j} = e^{±κη(N−2j+1)} from equilibrium 2
    let mut weighted = Vec::with_capacity(n);
    for j in 1..=n {
        let expo = chain.kappa * chain.eta * (nf - 2.0 * j as f64 + 1.0);
        let (w, a) = match chirality {
            Chirality::Left => (expo.exp(), a_coefficient(j, &xs, &chain)?),
            Chirality::Right => ((-expo).exp(), a_coefficient(j, &neg, &chain)?),
        };
        weighted.push(w * a);
    }
    let a_star = weighted[0];
    let gate_spread = weighted
        .iter()
        .map(|v| (v - a_star).norm())
        .fold(0.0, f64::max)
        / a_star.norm();
    if gate_spread > FREEZE_GATE_TOL {
        return Err(Error::Gate {
            spread: gate_spread,
            tolerance: FREEZE_GATE_TOL,
        });
    }

    // weighted sum of the spin coefficient chains of Γ_j^{±1}, at real ε
    let u_sum = |eps: f64| -> Result<SpinOperator> {
        let c = C64::new(0.0, hbar * eps);
        let mut total = SpinOperator::zeros(n);
        for j in 1..=n {
            let mut m = SpinOperator::identity(n);
            match chirality {
                Chirality::Left => {
                    for k in (1..j).rev() {
                        m = m.dot(&perm_p(k, xs[j - 1] - xs[k - 1], &chain)?);
                    }
                    for k in 1..j {
                        m = m.dot(&perm_p(k, xs[k - 1] - xs[j - 1] + c, &chain)?);
                    }
                }
                Chirality::Right => {
                    for k in j..n {
                        m = m.dot(&perm_p(k, xs[k] - xs[j - 1], &chain)?);
                    }
                    for k in (j..n).rev() {
                        m = m.dot(&perm_p(k, xs[j - 1] + c - xs[k], &chain)?);
                    }
                }
            }
            total = total.add(&m.scaled(weighted[j - 1]));
        }
        Ok(total)
    };

    let h = FREEZE_FD_STEP;
    let delta = u_sum(h)?
        .sub(&u_sum(-h)?)
        .scaled(C64::new(1.0 / (2.0 * h), 0.0));

    let ell = chain.elliptic();
    let th_eta = theta_eval(chain.eta, &ell)?.nonzero("freezing theta(eta)", chain.eta)?;
    let lhs = delta.scaled(1.0 / (C64::new(0.0, hbar) * th_eta));

    let href = match chirality {
        Chirality::Left => h_left(&chain)?,
        Chirality::Right => h_right(&chain)?,
    };
    let rhs = href.scaled(a_star);
    let deviation = lhs.max_abs_diff(&rhs) / rhs.max_abs();

    let mut num = C64::new(0.0, 0.0);
    let mut den = C64::new(0.0, 0.0);
    for (a, b) in href.mat.iter().zip(lhs.mat.iter()) {
        num += a.conj() * b;
        den += a.conj() * a;
    }
    Ok(FreezeReport {
        deviation,
        gate_spread,
        a_star,
        fitted_constant: num / den,
    })
}

/// Exponential test function f(x) = e^{λ·x} v for the invariance and
/// normal-form checks.
pub fn exponential_wave(
    lambda: Vec<C64>,
    v: Array1<C64>,
) -> impl Fn(&[C64]) -> Result<Array1<C64>> {
    move |xs: &[C64]| {
        let phase: C64 = lambda.iter().zip(xs.iter()).map(|(l, x)| l * x).sum();
        Ok(v.mapv(|e| e * phase.exp()))
    }
}
