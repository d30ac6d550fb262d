//! Randomized baselines sharing RU-QLP's first step.
//!
//! Every method starts from the same `P̄ = pi_orth(A, Φ, q)`. R-SVD then takes
//! the SVD of `W = A P̄`. CoR-UTV and RP-TSOD are two-sided: with
//! `Q̄ = orth(W)` they factor the `d × d` core `D = Q̄ᵀ A P̄` by column-pivoted
//! QR (giving an upper triangular middle factor) or by pivoted QLP (lower
//! triangular). These follow the generic three-step template; they are not
//! line-by-line ports of the original publications.

use std::fmt;
use std::str::FromStr;

use super::config::SketchConfig;
use super::gaussian::seeded_gaussian;
use super::operator::MatrixOperator;
use super::power::pi_orth_with;
use super::qlp::{pivoted_qlp, ru_qlp, QlpFactors};
use crate::error::{Error, Result};
use crate::matcore::{orth_householder, qr_pivoted, svd, DenseMatrix, SvdFactors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    RuQlp,
    Rsvd,
    CorUtv,
    RpTsod,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::RuQlp, Method::Rsvd, Method::CorUtv, Method::RpTsod];

    pub fn name(self) -> &'static str {
        match self {
            Method::RuQlp => "ruqlp",
            Method::Rsvd => "rsvd",
            Method::CorUtv => "cor_utv",
            Method::RpTsod => "rp_tsod",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown method {s:?}; expected one of ruqlp, rsvd, cor_utv, rp_tsod"
                ))
            })
    }
}

/// `A ≈ U T Vᵀ` with `T` upper triangular.
#[derive(Clone, Debug)]
pub struct UtvFactors {
    pub u: DenseMatrix,
    pub t: DenseMatrix,
    pub v: DenseMatrix,
}

/// Output of any of the four randomized methods.
#[derive(Clone, Debug)]
pub enum LowRankFactors {
    Svd(SvdFactors),
    Utv(UtvFactors),
    Qlp(QlpFactors),
}

impl LowRankFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        match self {
            LowRankFactors::Svd(f) => f.reconstruct(),
            LowRankFactors::Utv(f) => f.u.matmul(&f.t).matmul_t(&f.v),
            LowRankFactors::Qlp(f) => f.reconstruct(),
        }
    }

    /// Singular-value estimates, sorted non-increasing: the singular values
    /// themselves, or the magnitudes of the middle factor's diagonal.
    pub fn singular_value_estimates(&self) -> Vec<f64> {
        let mut s: Vec<f64> = match self {
            LowRankFactors::Svd(f) => f.sigma.clone(),
            LowRankFactors::Utv(f) => f.t.diag().iter().map(|x| x.abs()).collect(),
            LowRankFactors::Qlp(f) => f.l_values(),
        };
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn left_basis(&self) -> &DenseMatrix {
        match self {
            LowRankFactors::Svd(f) => &f.u,
            LowRankFactors::Utv(f) => &f.u,
            LowRankFactors::Qlp(f) => &f.q_mat,
        }
    }

    pub fn right_basis(&self) -> &DenseMatrix {
        match self {
            LowRankFactors::Svd(f) => &f.v,
            LowRankFactors::Utv(f) => &f.v,
            LowRankFactors::Qlp(f) => &f.p_mat,
        }
    }
}

/// Runs one of the baselines (`rsvd`, `cor_utv`, `rp_tsod`).
pub fn randomized_baseline<O: MatrixOperator + ?Sized>(
    a: &O,
    method: Method,
    config: &SketchConfig,
) -> Result<LowRankFactors> {
    let (m, n) = (a.nrows(), a.ncols());
    config.validate_for(m, n)?;
    let phi = seeded_gaussian(m, config.d(), config.seed);
    let p_bar = pi_orth_with(a, &phi, config.q, config.ortho_interval, config.orth)?;
    let w = a.apply(&p_bar);

    match method {
        Method::RuQlp => Err(Error::Config(
            "ruqlp is not a baseline; call ru_qlp or factorize".into(),
        )),
        Method::Rsvd => {
            let f = svd(&w)?;
            Ok(LowRankFactors::Svd(SvdFactors {
                u: f.u,
                sigma: f.sigma,
                v: p_bar.matmul(&f.v),
            }))
        }
        Method::CorUtv => {
            let q_bar = orth_householder(&w)?;
            let core = q_bar.t_matmul(&w);
            let f = qr_pivoted(&core)?;
            let perm = f.perm.as_deref().expect("pivoted");
            Ok(LowRankFactors::Utv(UtvFactors {
                u: q_bar.matmul(&f.q),
                t: f.r,
                v: p_bar.permute_cols(perm),
            }))
        }
        Method::RpTsod => {
            let q_bar = orth_householder(&w)?;
            let core = q_bar.t_matmul(&w);
            let f = pivoted_qlp(&core)?;
            Ok(LowRankFactors::Qlp(QlpFactors {
                q_mat: q_bar.matmul(&f.q_mat),
                l_mat: f.l_mat,
                p_mat: p_bar.matmul(&f.p_mat),
                r_mat: f.r_mat,
                p_bar: Some(p_bar),
                config: Some(*config),
                phi: Some(phi),
            }))
        }
    }
}

/// Any of the four methods behind one entry point.
pub fn factorize<O: MatrixOperator + ?Sized>(
    a: &O,
    method: Method,
    config: &SketchConfig,
) -> Result<LowRankFactors> {
    match method {
        Method::RuQlp => ru_qlp(a, config).map(LowRankFactors::Qlp),
        _ => randomized_baseline(a, method, config),
    }
}
