use std::f64::consts::E;

use super::errors::NormPair;
use super::oracle::SpectrumSummary;
use crate::error::{Error, Result};

/// `x / √(1 + x²)` without overflow.
fn damped(x: f64) -> f64 {
    if x.is_infinite() {
        1.0
    } else {
        x / 1f64.hypot(x)
    }
}

/// `1 / √(1 + x²)` without overflow.
fn inv_root(x: f64) -> f64 {
    1.0 / 1f64.hypot(x)
}

fn powi(x: f64, e: usize) -> f64 {
    x.powi(e as i32)
}

fn scaled_pair(s: &SpectrumSummary, factor: f64) -> NormPair {
    NormPair {
        spectral: factor * s.sigma_perp_spectral,
        frobenius: factor * s.sigma_perp_frobenius,
    }
}

/// Bounds that hold for every run, given the realized coupling
/// `c = ‖Φ̂₂ Φ̂₁†‖₂`. Per-index vectors have `k` entries, index `i − 1`
/// holding the bound for `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterministicBounds {
    pub q: usize,
    pub coupling: f64,
    /// Upper bound `σ_i` on `σ_i(R₁₁)`, `σ_i(L)` and `σ_i(L₁₁)`.
    pub sigma_upper: Vec<f64>,
    /// `σ_i / √(1 + δ_i^{4q+4} c²)`
    pub sigma_lower: Vec<f64>,
    /// Shared by `‖R₂₂‖`, `‖L₂₂‖` and `‖A − Q[QᵀA]_k‖`.
    pub tail_q: NormPair,
    /// Bound on `‖A − [AP]_k Pᵀ‖`.
    pub tail_p: NormPair,
    pub sin_theta: Vec<f64>,
    pub sin_phi: Vec<f64>,
    pub cos_theta: Vec<f64>,
    pub tan_theta: Vec<f64>,
    pub cos_phi: Vec<f64>,
    pub tan_phi: Vec<f64>,
    /// `‖sin ∠(range Q, range U_k)‖` in both norms.
    pub dist_q: NormPair,
    /// `‖sin ∠(range P, range V_k)‖` in both norms.
    pub dist_p: NormPair,
    /// `sin ∠(range Q, u_i)`
    pub vec_q: Vec<f64>,
    /// `sin ∠(range P, v_i)`
    pub vec_p: Vec<f64>,
}

pub fn deterministic_bounds(s: &SpectrumSummary, c: f64, q: usize) -> Result<DeterministicBounds> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::Validation(format!("coupling must be finite and nonnegative, got {c}")));
    }
    let k = s.k;
    let sigma_k = s.sigma[k - 1];
    let dk = s.delta[k - 1];
    let g = s.gamma;

    let per_index = |f: &dyn Fn(usize, f64) -> f64| -> Vec<f64> {
        s.delta.iter().enumerate().map(|(i, &d)| f(i, d)).collect()
    };

    let factor_q = 1.0 + powi(dk, 2 * q + 1) * c / (1.0 + powi(g, 4 * q + 4) * c * c);
    let factor_p = 1.0 + powi(dk, 2 * q) * c / (1.0 + powi(g, 4 * q + 2) * c * c);
    let dist = |e_delta: usize, e_gamma: usize| -> NormPair {
        let scale = powi(dk, e_delta) * c / (sigma_k * 1f64.hypot(powi(g, e_gamma / 2) * c));
        scaled_pair(s, scale)
    };

    Ok(DeterministicBounds {
        q,
        coupling: c,
        sigma_upper: s.sigma[..k].to_vec(),
        sigma_lower: per_index(&|i, d| s.sigma[i] * inv_root(powi(d, 2 * q + 2) * c)),
        tail_q: scaled_pair(s, factor_q),
        tail_p: scaled_pair(s, factor_p),
        sin_theta: per_index(&|_, d| damped(powi(d, 2 * q + 2) * c)),
        sin_phi: per_index(&|_, d| damped(powi(d, 2 * q + 1) * c)),
        cos_theta: per_index(&|_, d| inv_root(powi(d, 2 * q + 2) * c)),
        tan_theta: per_index(&|_, d| powi(d, 2 * q + 2) * c),
        cos_phi: per_index(&|_, d| inv_root(powi(d, 2 * q + 1) * c)),
        tan_phi: per_index(&|_, d| powi(d, 2 * q + 1) * c),
        dist_q: dist(2 * q + 1, 4 * q + 4),
        dist_p: dist(2 * q, 4 * q + 2),
        vec_q: per_index(&|_, d| powi(d, 2 * q + 2) * c * inv_root(powi(g, 2 * q + 2) * c)),
        vec_p: per_index(&|_, d| powi(d, 2 * q + 1) * c * inv_root(powi(g, 2 * q + 1) * c)),
    })
}

/// Bounds on the expected values over the Gaussian sketch.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedBounds {
    pub q: usize,
    pub omega1: f64,
    pub omega2: f64,
    pub omega: f64,
    pub c_const: f64,
    /// `σ_i / √(1 + δ_i^{4q+4} ω²)` on `E σ_i(R₁₁)`.
    pub sigma_r11_lower: Vec<f64>,
    /// `(1 + C δ_k^{2q+1}) ‖Σ_⊥‖` on `E‖R₂₂‖` and `E‖A − QQᵀA‖`.
    pub tail_q: NormPair,
    /// `(1 + C δ_k^{2q}) ‖Σ_⊥‖` on `E‖A − APPᵀ‖`.
    pub tail_p: NormPair,
    pub sin_theta: Vec<f64>,
    pub sin_phi: Vec<f64>,
    pub dist_q: NormPair,
    pub dist_p: NormPair,
    pub vec_q: Vec<f64>,
    pub vec_p: Vec<f64>,
}

/// Expected-value bounds for an `m`-row input split at `k` with
/// oversampling `p ≥ 2`.
pub fn expected_bounds(m: usize, k: usize, p: usize, q: usize, s: &SpectrumSummary) -> Result<ExpectedBounds> {
    if p < 2 {
        return Err(Error::Domain(format!("oversampling p = {p} < 2 leaves C undefined")));
    }
    if k == 0 || k != s.k || k > m {
        return Err(Error::Validation(format!(
            "k = {k} must be positive, at most m = {m}, and match the spectrum summary (k = {})",
            s.k
        )));
    }
    let (mf, kf, pf) = (m as f64, k as f64, p as f64);
    let omega1 = (mf - kf).sqrt() + (kf + pf).sqrt() + 7.0;
    let omega2 = 4.0 * E * (kf + pf).sqrt() / (pf + 1.0);
    let omega = omega1 * omega2;
    let c_const = (kf / (pf - 1.0)).sqrt() + E * ((mf - kf) * (pf + kf)).sqrt() / pf;

    let sigma_k = s.sigma[k - 1];
    let dk = s.delta[k - 1];
    let g = s.gamma;
    let per_index = |f: &dyn Fn(usize, f64) -> f64| -> Vec<f64> {
        s.delta.iter().enumerate().map(|(i, &d)| f(i, d)).collect()
    };
    let dist = |e: usize| -> NormPair {
        let x = powi(dk, e) * omega;
        scaled_pair(s, x / (sigma_k * 1f64.hypot(x * dk)))
    };

    Ok(ExpectedBounds {
        q,
        omega1,
        omega2,
        omega,
        c_const,
        sigma_r11_lower: per_index(&|i, d| s.sigma[i] * inv_root(powi(d, 2 * q + 2) * omega)),
        tail_q: scaled_pair(s, 1.0 + c_const * powi(dk, 2 * q + 1)),
        tail_p: scaled_pair(s, 1.0 + c_const * powi(dk, 2 * q)),
        sin_theta: per_index(&|_, d| damped(powi(d, 2 * q + 2) * omega)),
        sin_phi: per_index(&|_, d| damped(powi(d, 2 * q + 1) * omega)),
        dist_q: dist(2 * q + 1),
        dist_p: dist(2 * q),
        vec_q: per_index(&|_, d| powi(d, 2 * q + 2) * omega * inv_root(powi(g, 2 * q + 2) * omega)),
        vec_p: per_index(&|_, d| powi(d, 2 * q + 1) * omega * inv_root(powi(g, 2 * q + 1) * omega)),
    })
}
