//! Dense N-site spin-chain operators: deformed permutations and exchanges,
//! the chiral long-range interactions S^L/S^R, the hamiltonians H^L/H^R,
//! the twisted translation operator and its magnons, and the four limit
//! chains (Inozemtsev, Haldane–Shastry, intermediate, short-range XXZ).
//!
//! Basis convention: configuration (s₁,…,s_N) with s = ↑ ≡ +1 or ↓ ≡ −1 has
//! index Σ_k (1−s_k)/2 · 2^{N−k}, i.e. site 1 is the most significant bit
//! and ↓ is bit 1. Index 0 is the reference state |↑…↑⟩.
//!
//! Embedded two-site gates are applied through their ice-rule block
//! structure in O(4^N) per product rather than by dense matrix
//! multiplication, so operator assembly stays cheap up to the N = 12 cap.

use std::collections::BTreeMap;

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse};
use num_complex::Complex64 as C64;

use crate::elliptic::{potential_v, rho_deriv, theta_eval, EllipticParams};
use crate::error::{Error, Result};
use crate::rmatrix::{
    e_heis, e_tri, exchange_e, r_check, r_heis, r_tri, DynArgs, RMatrix4,
};

pub const INVARIANTS: &[&str] = &[
    "perm_unitarity",
    "perm_braid",
    "exchange_embed_closed_form",
    "comm_hl_hr",
    "comm_h_sz",
    "comm_h_g",
    "g_power_is_twist",
    "g_normalized_power",
    "chirality_boundary",
    "spectrum_reality",
    "magnon_momenta",
    "su2_symmetry_isotropic",
    "sector_spectrum_consistency",
    "tl_relations",
    "affine_tl",
    "xxz_boundary_forms",
    // the degeneration web, tested spectrally
    "limit_inozemtsev",
    "limit_deformed_hs",
    "limit_hs",
    "limit_xxz",
    "limit_xxx",
    "limit_intermediate",
    "limit_intermediate_inozemtsev",
    "intermediate_reality",
    "magnon_inozemtsev_limit",
];

/// Dense-operator site cap (4096-dimensional space).
pub const MAX_SITES: usize = 12;

/// Parameter record of the deformed chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// Number of sites, 2 ≤ N ≤ 12.
    pub n: usize,
    /// Interaction-range parameter κ ≥ 0 (κ = 0: trigonometric branch).
    pub kappa: f64,
    /// Anisotropy η.
    pub eta: C64,
    /// Dynamical parameter a.
    pub a: C64,
    /// Numerical tolerance handed to the special functions.
    pub tolerance: f64,
}

impl ChainParams {
    pub fn new(n: usize, kappa: f64, eta: C64, a: C64) -> Result<Self> {
        let p = Self {
            n,
            kappa,
            eta,
            a,
            tolerance: 1e-14,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn elliptic(&self) -> EllipticParams {
        EllipticParams {
            kappa: self.kappa,
            period: self.n as f64,
            tolerance: self.tolerance,
            max_terms: 500_000,
        }
    }

    /// Checks N ≥ 2, the size cap, and that 2η and every realisable η(a−s)
    /// stay off the theta zero lattice Nk + iπl/κ.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "chain needs at least 2 sites, got {}",
                self.n
            )));
        }
        if self.n > MAX_SITES {
            return Err(Error::SizeCap(self.n));
        }
        let ell = self.elliptic();
        ell.validate()?;
        theta_eval(2.0 * self.eta, &ell)?.nonzero("chain invariant theta(2 eta)", 2.0 * self.eta)?;
        let reach = self.n as i64 - 1;
        for s in -reach..=reach {
            let z = self.eta * (self.a - s as f64);
            theta_eval(z, &ell)?.nonzero("chain invariant theta(eta (a - s))", z)?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

/// A dense operator on the 2^N-dimensional spin space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    pub n_sites: usize,
    pub mat: Array2<C64>,
}

impl SpinOperator {
    pub fn new(n_sites: usize, mat: Array2<C64>) -> Self {
        assert_eq!(mat.nrows(), 1 << n_sites);
        assert_eq!(mat.ncols(), 1 << n_sites);
        Self { n_sites, mat }
    }

    pub fn identity(n_sites: usize) -> Self {
        Self::new(n_sites, Array2::eye(1 << n_sites))
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self::new(n_sites, Array2::zeros((1 << n_sites, 1 << n_sites)))
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn dot(&self, rhs: &SpinOperator) -> SpinOperator {
        Self::new(self.n_sites, self.mat.dot(&rhs.mat))
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.mat.dot(v)
    }

    pub fn add(&self, rhs: &SpinOperator) -> SpinOperator {
        Self::new(self.n_sites, &self.mat + &rhs.mat)
    }

    pub fn sub(&self, rhs: &SpinOperator) -> SpinOperator {
        Self::new(self.n_sites, &self.mat - &rhs.mat)
    }

    pub fn scaled(&self, s: C64) -> SpinOperator {
        Self::new(self.n_sites, self.mat.mapv(|v| v * s))
    }

    pub fn inv(&self) -> Result<SpinOperator> {
        let m = self
            .mat
            .inv()
            .map_err(|e| Error::Eig(format!("inversion failed: {e}")))?;
        Ok(Self::new(self.n_sites, m))
    }

    pub fn pow(&self, k: usize) -> SpinOperator {
        let mut out = Self::identity(self.n_sites);
        for _ in 0..k {
            out = out.dot(self);
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &SpinOperator) -> f64 {
        (&self.mat - &rhs.mat)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// ‖AB − BA‖_F / (‖A‖_F ‖B‖_F).
    pub fn commutator_rel(&self, rhs: &SpinOperator) -> f64 {
        let ab = self.mat.dot(&rhs.mat);
        let ba = rhs.mat.dot(&self.mat);
        let num = (&ab - &ba).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        num / (self.frobenius() * rhs.frobenius())
    }
}

/// Spin (±1) of 1-based `site` in basis state `b`.
pub fn spin_at(b: usize, site: usize, n: usize) -> i64 {
    1 - 2 * ((b >> (n - site)) & 1) as i64
}

/// Total magnetisation Σ_k σ^z_k of basis state `b`.
pub fn magnetisation(b: usize, n: usize) -> i64 {
    n as i64 - 2 * (b & ((1 << n) - 1)).count_ones() as i64
}

/// S^z = Σ σ^z/2 as a diagonal operator.
pub fn s_z(n: usize) -> SpinOperator {
    let dim = 1 << n;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        m[[b, b]] = C64::new(magnetisation(b, n) as f64 / 2.0, 0.0);
    }
    SpinOperator::new(n, m)
}

/// Σ σ^x and Σ σ^y, for the isotropic symmetry checks.
pub fn total_sigma_x(n: usize) -> SpinOperator {
    let dim = 1 << n;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        for site in 1..=n {
            m[[b ^ (1 << (n - site)), b]] += C64::new(1.0, 0.0);
        }
    }
    SpinOperator::new(n, m)
}

pub fn total_sigma_y(n: usize) -> SpinOperator {
    let dim = 1 << n;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        for site in 1..=n {
            // sigma^y |up> = i|down>, sigma^y |down> = -i|up>
            let bit = (b >> (n - site)) & 1;
            let phase = if bit == 0 {
                C64::new(0.0, 1.0)
            } else {
                C64::new(0.0, -1.0)
            };
            m[[b ^ (1 << (n - site)), b]] += phase;
        }
    }
    SpinOperator::new(n, m)
}

/// Indices of the S^z sector with `k_down` down spins (dimension C(N,k)).
pub fn sector_indices(n: usize, k_down: usize) -> Vec<usize> {
    (0..1usize << n)
        .filter(|b| b.count_ones() as usize == k_down)
        .collect()
}

/// Plain permutation of sites i and j (any distance).
pub fn permutation_op(n: usize, i: usize, j: usize) -> SpinOperator {
    let dim = 1 << n;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        let bi = (b >> (n - i)) & 1;
        let bj = (b >> (n - j)) & 1;
        let mut r = b & !(1 << (n - i)) & !(1 << (n - j));
        r |= bj << (n - i);
        r |= bi << (n - j);
        m[[r, b]] = C64::new(1.0, 0.0);
    }
    SpinOperator::new(n, m)
}

// --- embedded two-site gates -------------------------------------------

/// A 4×4 gate at sites (i, i+1) whose matrix depends on the spin sum to its
/// left through the dynamical shift a − (σ^z₁+…+σ^z_{i−1}).
struct DynGate {
    n: usize,
    site: usize,
    blocks: BTreeMap<i64, RMatrix4>,
}

impl DynGate {
    fn new(
        n: usize,
        site: usize,
        a: C64,
        family: &mut dyn FnMut(C64) -> Result<RMatrix4>,
    ) -> Result<Self> {
        assert!(site >= 1 && site < n, "gate site {site} out of range");
        let mut blocks = BTreeMap::new();
        let left = site as i64 - 1;
        let mut s = -left;
        while s <= left {
            blocks.insert(s, family(a - s as f64)?);
            s += 2;
        }
        Ok(Self { n, site, blocks })
    }

    fn block_for(&self, b: usize) -> &RMatrix4 {
        let mut s = 0i64;
        for k in 1..self.site {
            s += spin_at(b, k, self.n);
        }
        &self.blocks[&s]
    }

    fn pair_bits(&self, b: usize) -> usize {
        let hi = (b >> (self.n - self.site)) & 1;
        let lo = (b >> (self.n - self.site - 1)) & 1;
        2 * hi + lo
    }

    fn with_pair(&self, b: usize, pair: usize) -> usize {
        let mut r = b;
        let mask_hi = 1 << (self.n - self.site);
        let mask_lo = 1 << (self.n - self.site - 1);
        r &= !(mask_hi | mask_lo);
        if pair & 2 != 0 {
            r |= mask_hi;
        }
        if pair & 1 != 0 {
            r |= mask_lo;
        }
        r
    }

    /// gate · m
    fn mul_left(&self, m: &Array2<C64>) -> Array2<C64> {
        let dim = 1 << self.n;
        let mut out = Array2::zeros((dim, dim));
        for c in 0..dim {
            let block = self.block_for(c);
            let pc = self.pair_bits(c);
            for pr in 0..4 {
                let v = block.0[pr][pc];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                let r = self.with_pair(c, pr);
                let src = m.row(c);
                let mut dst = out.row_mut(r);
                dst.zip_mut_with(&src, |d, s| *d += v * s);
            }
        }
        out
    }

    /// m · gate
    fn mul_right(&self, m: &Array2<C64>) -> Array2<C64> {
        let dim = 1 << self.n;
        let mut out = Array2::zeros((dim, dim));
        for c in 0..dim {
            let block = self.block_for(c);
            let pc = self.pair_bits(c);
            for pr in 0..4 {
                let v = block.0[pr][pc];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                let r = self.with_pair(c, pr);
                // out[:, c] += m[:, r] * v
                let src = m.column(r);
                let mut dst = out.column_mut(c);
                dst.zip_mut_with(&src, |d, s| *d += v * s);
            }
        }
        out
    }

    fn materialize(&self) -> Array2<C64> {
        self.mul_left(&Array2::eye(1 << self.n))
    }
}

/// Embed a dynamical 4×4 family at sites (i, i+1): each configuration of
/// sites 1..i−1 with spin sum s receives the block family(a − s).
pub fn embed_dynamical(
    family: &dyn Fn(C64) -> Result<RMatrix4>,
    i: usize,
    params: &ChainParams,
) -> Result<SpinOperator> {
    let mut f = |a| family(a);
    let gate = DynGate::new(params.n, i, params.a, &mut f)?;
    Ok(SpinOperator::new(params.n, gate.materialize()))
}

fn perm_gate(i: usize, x: C64, params: &ChainParams) -> Result<DynGate> {
    let ell = params.elliptic();
    let eta = params.eta;
    DynGate::new(params.n, i, params.a, &mut |a| {
        r_check(&DynArgs { x, a, eta }, &ell)
    })
}

fn exch_gate(i: usize, x: C64, params: &ChainParams) -> Result<DynGate> {
    let ell = params.elliptic();
    let eta = params.eta;
    DynGate::new(params.n, i, params.a, &mut |a| {
        exchange_e(&DynArgs { x, a, eta }, &ell)
    })
}

/// Deformed permutation P_{i,i+1}(x).
pub fn perm_p(i: usize, x: C64, params: &ChainParams) -> Result<SpinOperator> {
    Ok(SpinOperator::new(
        params.n,
        perm_gate(i, x, params)?.materialize(),
    ))
}

/// Deformed exchange E_{i,i+1}(x).
pub fn exch_e(i: usize, x: C64, params: &ChainParams) -> Result<SpinOperator> {
    Ok(SpinOperator::new(
        params.n,
        exch_gate(i, x, params)?.materialize(),
    ))
}

#[derive(Debug, Clone, Copy)]
enum Word {
    P { site: usize, x: f64 },
    E { site: usize, x: f64 },
}

fn word_left(i: usize, j: usize) -> Vec<Word> {
    let mut w = Vec::new();
    for k in (i + 1..j).rev() {
        w.push(Word::P {
            site: k,
            x: (j - k) as f64,
        });
    }
    w.push(Word::E {
        site: i,
        x: i as f64 - j as f64,
    });
    for k in i + 1..j {
        w.push(Word::P {
            site: k,
            x: k as f64 - j as f64,
        });
    }
    w
}

fn word_right(i: usize, j: usize) -> Vec<Word> {
    let mut w = Vec::new();
    for k in i..j - 1 {
        w.push(Word::P {
            site: k,
            x: (k - i + 1) as f64,
        });
    }
    w.push(Word::E {
        site: j - 1,
        x: i as f64 - j as f64,
    });
    for k in (i..j - 1).rev() {
        w.push(Word::P {
            site: k,
            x: i as f64 - k as f64 - 1.0,
        });
    }
    w
}

fn build_word(word: &[Word], params: &ChainParams) -> Result<SpinOperator> {
    let mut m = Array2::eye(1 << params.n);
    for g in word {
        let gate = match *g {
            Word::P { site, x } => perm_gate(site, C64::new(x, 0.0), params)?,
            Word::E { site, x } => exch_gate(site, C64::new(x, 0.0), params)?,
        };
        m = gate.mul_right(&m);
    }
    Ok(SpinOperator::new(params.n, m))
}

/// Left-chiral long-range interaction
/// S^L_{[i,j]} = P_{j−1,j}(1)⋯P_{i+1,i+2}(j−i−1) E_{i,i+1}(i−j)
/// P_{i+1,i+2}(i−j+1)⋯P_{j−1,j}(−1), at the fixed inhomogeneities x*_k = k.
pub fn s_left(i: usize, j: usize, params: &ChainParams) -> Result<SpinOperator> {
    assert!(1 <= i && i < j && j <= params.n);
    build_word(&word_left(i, j), params)
}

/// Right-chiral partner S^R_{[i,j]} = P_{i,i+1}(1)⋯P_{j−2,j−1}(j−i−1)
/// E_{j−1,j}(i−j) P_{j−2,j−1}(i−j+1)⋯P_{i,i+1}(−1).
pub fn s_right(i: usize, j: usize, params: &ChainParams) -> Result<SpinOperator> {
    assert!(1 <= i && i < j && j <= params.n);
    build_word(&word_right(i, j), params)
}

fn h_chiral(params: &ChainParams, left: bool) -> Result<SpinOperator> {
    let ell = params.elliptic();
    let mut h = SpinOperator::zeros(params.n);
    for i in 1..=params.n {
        for j in i + 1..=params.n {
            let v = potential_v(C64::new(i as f64 - j as f64, 0.0), params.eta, &ell)?;
            let s = if left {
                s_left(i, j, params)?
            } else {
                s_right(i, j, params)?
            };
            h = h.add(&s.scaled(v));
        }
    }
    Ok(h)
}

/// H^L = Σ_{i<j} V(i−j) S^L_{[i,j]}.
pub fn h_left(params: &ChainParams) -> Result<SpinOperator> {
    h_chiral(params, true)
}

/// H^R = Σ_{i<j} V(i−j) S^R_{[i,j]}.
pub fn h_right(params: &ChainParams) -> Result<SpinOperator> {
    h_chiral(params, false)
}

// --- translation, twist, magnons ----------------------------------------

/// The diagonal twist K_N = e^{−κη[a−(σ^z₁+…+σ^z_{N−1})]σ^z_N}.
fn twist_site_n(params: &ChainParams) -> Array1<C64> {
    let n = params.n;
    let dim = 1 << n;
    let mut d = Array1::zeros(dim);
    for b in 0..dim {
        let s_n = spin_at(b, n, n) as f64;
        let left = (magnetisation(b, n) - spin_at(b, n, n)) as f64;
        d[b] = (-params.kappa * params.eta * (params.a - left) * s_n).exp();
    }
    d
}

/// Deformed translation G = K_N · P_{N−1,N}(1−N) ⋯ P₁₂(−1).
pub fn translation_g(params: &ChainParams) -> Result<SpinOperator> {
    let n = params.n;
    let d = twist_site_n(params);
    let mut m = Array2::zeros((1 << n, 1 << n));
    for b in 0..1 << n {
        m[[b, b]] = d[b];
    }
    for k in (1..n).rev() {
        let gate = perm_gate(k, C64::new(-(k as f64), 0.0), params)?;
        m = gate.mul_right(&m);
    }
    Ok(SpinOperator::new(n, m))
}

/// The central element K₁⋯K_N = G^N: diagonal, a function of the total
/// magnetisation m alone, exp(−κη(a·m − m²/2 − N²/2 + N)).
pub fn twist_total(params: &ChainParams) -> SpinOperator {
    let n = params.n;
    let dim = 1 << n;
    let mut mat = Array2::zeros((dim, dim));
    for b in 0..dim {
        let m = magnetisation(b, n) as f64;
        let nn = n as f64;
        let expo =
            -params.kappa * params.eta * (params.a * m - m * m / 2.0 - nn * nn / 2.0 + nn);
        mat[[b, b]] = expo.exp();
    }
    SpinOperator::new(n, mat)
}

/// Rescaled shift operator G′ = (K₁⋯K_N)^{−1/N} G, principal branch of the
/// root per diagonal entry; obeys G′^N = 1.
pub fn g_normalized(params: &ChainParams) -> Result<SpinOperator> {
    let g = translation_g(params)?;
    let t = twist_total(params);
    let n = params.n as f64;
    let mut m = g.mat.clone();
    for (b, mut row) in m.rows_mut().into_iter().enumerate() {
        let root = (-t.mat[[b, b]].ln() / n).exp();
        row.map_inplace(|v| *v *= root);
    }
    Ok(SpinOperator::new(params.n, m))
}

/// A magnon: S^z = N/2 − 1 eigenvector of G′ with momentum 2πn/N.
#[derive(Debug, Clone)]
pub struct MagnonState {
    pub momentum_index: usize,
    pub vector: Array1<C64>,
}

/// The N deformed magnons Σ_j e^{ipj} G′^{1−j} |↓↑…↑⟩, p = 2πn/N.
pub fn magnon_states(params: &ChainParams) -> Result<Vec<MagnonState>> {
    let n = params.n;
    let dim = 1 << n;
    let gp = g_normalized(params)?;
    let gp_inv = gp.inv()?;
    let mut base = Array1::zeros(dim);
    base[1 << (n - 1)] = C64::new(1.0, 0.0); // down spin at site 1
    let mut translates = Vec::with_capacity(n);
    let mut u = base;
    for _ in 0..n {
        translates.push(u.clone());
        u = gp_inv.apply(&u);
    }
    let mut out = Vec::with_capacity(n);
    for idx in 0..n {
        let p = 2.0 * std::f64::consts::PI * idx as f64 / n as f64;
        let mut v: Array1<C64> = Array1::zeros(dim);
        for (jm1, t) in translates.iter().enumerate() {
            let phase = (C64::new(0.0, p) * (jm1 as f64 + 1.0)).exp();
            v = v + t.mapv(|x| x * phase);
        }
        out.push(MagnonState {
            momentum_index: idx,
            vector: v,
        });
    }
    Ok(out)
}

/// Rayleigh value ⟨v|A|v⟩/⟨v|v⟩.
pub fn rayleigh(op: &SpinOperator, v: &Array1<C64>) -> C64 {
    let av = op.apply(v);
    let num: C64 = v.iter().zip(av.iter()).map(|(a, b)| a.conj() * b).sum();
    let den: C64 = v.iter().map(|a| a.conj() * a).sum();
    num / den
}

// --- isotropic and limit chains -----------------------------------------

fn h_isotropic(n: usize, pot: &dyn Fn(f64) -> Result<C64>) -> Result<SpinOperator> {
    let dim = 1 << n;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for i in 1..=n {
        for j in i + 1..=n {
            let v = pot(i as f64 - j as f64)?;
            for b in 0..dim {
                if spin_at(b, i, n) != spin_at(b, j, n) {
                    m[[b, b]] += v;
                    let c = b ^ (1 << (n - i)) ^ (1 << (n - j));
                    m[[c, b]] -= v;
                }
            }
        }
    }
    Ok(SpinOperator::new(n, m))
}

/// Isotropic Inozemtsev chain Σ_{i<j} V̄(i−j)(1−P_{ij}) with V̄ = −ρ′.
pub fn h_inozemtsev(params: &ChainParams) -> Result<SpinOperator> {
    let ell = params.elliptic();
    h_isotropic(params.n, &|x| Ok(-rho_deriv(C64::new(x, 0.0), &ell)?))
}

/// Haldane–Shastry chain: V̄(x) = (π/N)² / sin²(πx/N), the κ = 0 case.
pub fn h_haldane_shastry(params: &ChainParams) -> Result<SpinOperator> {
    let n = params.n as f64;
    h_isotropic(params.n, &|x| {
        let s = (std::f64::consts::PI * x / n).sin();
        Ok(C64::new((std::f64::consts::PI / n).powi(2) / (s * s), 0.0))
    })
}

/// Periodic Heisenberg XXX chain Σ_i (1 − P_{i,i+1}), wrapped at the edge.
pub fn h_xxx(n: usize) -> SpinOperator {
    let mut h = SpinOperator::zeros(n);
    let id = SpinOperator::identity(n);
    for i in 1..=n {
        let j = if i == n { 1 } else { i + 1 };
        let (lo, hi) = (i.min(j), i.max(j));
        h = h.add(&id.sub(&permutation_op(n, lo, hi)));
    }
    h
}

/// Intermediate chain: the η→0 limit at a = a′/η,
///
/// ```text
/// H(a′) = ½ Σ_{i<j} [ φ′(i−j,a′) σ⁺_iσ⁻_j/2 + φ′(i−j,−a′) σ⁻_iσ⁺_j/2
///                     + V̄(i−j)(1 − σ^z_iσ^z_j) ],   σ± = σ^x ± iσ^y,
/// ```
///
/// not dynamical: a′ receives no shifts. Spectrum real for a′ ∈ iR.
pub fn h_intermediate(a_prime: C64, params: &ChainParams) -> Result<SpinOperator> {
    let ell = params.elliptic();
    theta_eval(a_prime, &ell)?.nonzero("intermediate chain theta(a')", a_prime)?;
    let n = params.n;
    let dim = 1 << n;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for i in 1..=n {
        for j in i + 1..=n {
            let x = C64::new(i as f64 - j as f64, 0.0);
            let vbar = -rho_deriv(x, &ell)?;
            let hop_pm = crate::elliptic::phi_d1(x, a_prime, &ell)?;
            let hop_mp = crate::elliptic::phi_d1(x, -a_prime, &ell)?;
            for b in 0..dim {
                let si = spin_at(b, i, n);
                let sj = spin_at(b, j, n);
                m[[b, b]] += 0.5 * vbar * (1.0 - (si * sj) as f64);
                if si != sj {
                    let c = b ^ (1 << (n - i)) ^ (1 << (n - j));
                    // sigma+_i sigma-_j moves a down spin from i to j;
                    // with sigma± = sigma^x ± i sigma^y the matrix element is 4
                    let hop = if si < sj { hop_pm } else { hop_mp };
                    m[[c, b]] += 0.5 * hop * 4.0 / 2.0;
                }
            }
        }
    }
    Ok(SpinOperator::new(n, m))
}

/// Deformed Haldane–Shastry chain built directly from the trigonometric
/// closed forms Ř^tri / E^tri (the κ→0, ηa→−i∞ degeneration).
pub fn h_deformed_hs(params: &ChainParams) -> Result<SpinOperator> {
    let n = params.n;
    let nf = n as f64;
    let eta = params.eta;
    let pi_n = std::f64::consts::PI / nf;
    let vtri = |x: f64| -> C64 {
        pi_n * pi_n / ((pi_n * (x + eta)).sin() * (pi_n * (x - eta)).sin())
    };
    // Non-dynamical gates: same 4x4 at every left configuration.
    let embed_const = |mat: RMatrix4, site: usize, m: &Array2<C64>| -> Array2<C64> {
        let mut f = |_a| Ok(mat);
        // a value is irrelevant for a constant family
        let gate = DynGate::new(n, site, C64::new(0.0, 0.0), &mut f).expect("const gate");
        gate.mul_right(m)
    };
    let mut h = SpinOperator::zeros(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let mut m = Array2::eye(1 << n);
            for k in (i + 1..j).rev() {
                m = embed_const(r_tri(C64::new((j - k) as f64, 0.0), eta, nf)?, k, &m);
            }
            m = embed_const(e_tri(eta, nf), i, &m);
            for k in i + 1..j {
                m = embed_const(
                    r_tri(C64::new(k as f64 - j as f64, 0.0), eta, nf)?,
                    k,
                    &m,
                );
            }
            let v = vtri(i as f64 - j as f64);
            h = h.add(&SpinOperator::new(n, m).scaled(v));
        }
    }
    Ok(h)
}

/// The short-range (κ→∞) chain H^XXZ = Σ_{i<N} e_i + e₀ with
/// e_i = E^H embedded dynamically and e₀ the braid-translated boundary
/// term, together with its translation G^H and affine generator u.
pub struct XxzChain {
    pub n: usize,
    pub gamma: f64,
    pub a: C64,
    /// e_1 .. e_{N-1}
    bulk: Vec<SpinOperator>,
    e0: SpinOperator,
    g_h: SpinOperator,
    u: SpinOperator,
    pub h: SpinOperator,
}

impl XxzChain {
    pub fn new(gamma: f64, a: C64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams("XXZ chain needs N >= 2".into()));
        }
        if n > MAX_SITES {
            return Err(Error::SizeCap(n));
        }
        let reach = n as i64 - 1;
        for s in -reach..=reach {
            let arg = std::f64::consts::PI * gamma * (a - s as f64);
            if arg.sin().norm() < 1e-13 {
                return Err(Error::Pole {
                    context: "XXZ chain sin(pi gamma (a - s))".into(),
                    arg: a - s as f64,
                });
            }
        }
        let mut bulk = Vec::with_capacity(n - 1);
        for i in 1..n {
            let mut fam = |aa| e_heis(aa, gamma);
            let gate = DynGate::new(n, i, a, &mut fam)?;
            bulk.push(SpinOperator::new(n, gate.materialize()));
        }
        // G^H = K^H_N P^H_{N-1,N} ... P^H_{12}, twist e^{i pi gamma a sigma^z}
        let dim = 1 << n;
        let mut gm = Array2::zeros((dim, dim));
        for b in 0..dim {
            let s_n = spin_at(b, n, n) as f64;
            let left = (magnetisation(b, n) - spin_at(b, n, n)) as f64;
            gm[[b, b]] =
                (C64::new(0.0, std::f64::consts::PI * gamma) * (a - left) * s_n).exp();
        }
        for k in (1..n).rev() {
            let mut fam = |aa| r_heis(aa, gamma);
            let gate = DynGate::new(n, k, a, &mut fam)?;
            gm = gate.mul_right(&gm);
        }
        let g_h = SpinOperator::new(n, gm);
        let g_inv = g_h.inv()?;
        let e0 = g_h.dot(&bulk[0]).dot(&g_inv);

        // u = lambda G^H with lambda^2 fixed by u^2 e_1...e_{N-1} = e_{N-1}
        let mut w = g_h.dot(&g_h);
        for e in &bulk {
            w = w.dot(e);
        }
        let last = &bulk[n - 2];
        let (mut bi, mut bj, mut best) = (0, 0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                let v = last.mat[[i, j]].norm();
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        let lambda_sq = last.mat[[bi, bj]] / w.mat[[bi, bj]];
        let lambda = lambda_sq.sqrt();
        let u = g_h.scaled(lambda);

        let mut h = e0.clone();
        for e in &bulk {
            h = h.add(e);
        }
        Ok(Self {
            n,
            gamma,
            a,
            bulk,
            e0,
            g_h,
            u,
            h,
        })
    }

    /// Temperley–Lieb generator e_i; index 0 (≡ N) is the boundary term.
    pub fn e_op(&self, i: usize) -> &SpinOperator {
        let i = i % self.n;
        if i == 0 {
            &self.e0
        } else {
            &self.bulk[i - 1]
        }
    }

    /// The normalised affine translation u ∝ G^H.
    pub fn u_op(&self) -> &SpinOperator {
        &self.u
    }

    pub fn g_op(&self) -> &SpinOperator {
        &self.g_h
    }

    /// Max-norm difference of the two boundary forms
    /// G e₁ G^{−1} and G^{−1} e_{N−1} G.
    pub fn boundary_forms_residual(&self) -> Result<f64> {
        let g_inv = self.g_h.inv()?;
        let other = g_inv.dot(&self.bulk[self.n - 2]).dot(&self.g_h);
        Ok(self.e0.max_abs_diff(&other))
    }
}

// --- spectra --------------------------------------------------------------

/// Eigenvalues sorted by (Re, Im); these operators are not hermitian, so a
/// general complex eigensolver is used.
pub fn eigenvalues(mat: &Array2<C64>) -> Result<Vec<C64>> {
    let (vals, _) = mat
        .eig()
        .map_err(|e| Error::Eig(format!("complex eigensolve failed: {e}")))?;
    let mut v: Vec<C64> = vals.to_vec();
    sort_eigs(&mut v);
    Ok(v)
}

pub fn sort_eigs(v: &mut [C64]) {
    v.sort_by(|a, b| {
        a.re.total_cmp(&b.re)
            .then_with(|| a.im.total_cmp(&b.im))
    });
}

/// Maximum pairwise distance of sorted spectra (they must agree in length).
pub fn spectral_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn spectral_spread(v: &[C64]) -> f64 {
    let mut s: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            s = s.max((v[i] - v[j]).norm());
        }
    }
    s
}

/// Spectrum of the full operator, or of one S^z sector block
/// (`sector` = number of down spins). Requesting a sector for an operator
/// that does not commute with S^z is a contract error. Beyond N = 8 a full
/// spectrum is assembled from the sector blocks when the operator
/// conserves S^z, which keeps the dense eigensolve at binomial size.
pub fn spectrum(op: &SpinOperator, sector: Option<usize>) -> Result<Vec<C64>> {
    match sector {
        None => {
            if op.n_sites > 8 && op.commutator_rel(&s_z(op.n_sites)) <= 1e-10 {
                let mut all = Vec::with_capacity(op.dim());
                for k in 0..=op.n_sites {
                    all.extend(spectrum(op, Some(k))?);
                }
                sort_eigs(&mut all);
                return Ok(all);
            }
            eigenvalues(&op.mat)
        }
        Some(k) => {
            if k > op.n_sites {
                return Err(Error::InvalidParams(format!(
                    "sector {k} exceeds site count {}",
                    op.n_sites
                )));
            }
            let sz = s_z(op.n_sites);
            let resid = op.commutator_rel(&sz);
            if resid > 1e-10 {
                return Err(Error::SectorContract(resid));
            }
            let idx = sector_indices(op.n_sites, k);
            let m = idx.len();
            let mut block = Array2::zeros((m, m));
            for (r, &br) in idx.iter().enumerate() {
                for (c, &bc) in idx.iter().enumerate() {
                    block[[r, c]] = op.mat[[br, bc]];
                }
            }
            eigenvalues(&block)
        }
    }
}
