use std::fmt;
use std::io::{self, Write};

use super::bounds::{deterministic_bounds, DeterministicBounds, ExpectedBounds};
use super::errors::{empirical_errors_with, EmpiricalErrors, NormPair};
use super::oracle::{partition_sketch_with, SpectralOracle};
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;
use crate::randfact::QlpFactors;

/// Roundoff allowance: a row passes when it misses its bound by at most
/// `BOUND_SLACK · max(1, |bound|)`.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormTag {
    Spectral,
    Frobenius,
    PerIndex,
}

impl NormTag {
    pub fn as_str(self) -> &'static str {
        match self {
            NormTag::Spectral => "spectral",
            NormTag::Frobenius => "frobenius",
            NormTag::PerIndex => "per-index",
        }
    }

    fn of(frobenius: bool) -> Self {
        if frobenius {
            NormTag::Frobenius
        } else {
            NormTag::Spectral
        }
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// observed ≤ bound
    Upper,
    /// observed ≥ bound
    Lower,
}

/// One observed quantity paired with its bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub quantity: String,
    /// 1-based index, `None` for aggregate quantities.
    pub index: Option<usize>,
    pub norm: NormTag,
    pub observed: f64,
    pub bound: f64,
    pub kind: BoundKind,
    pub satisfied: bool,
    pub theorem: &'static str,
}

impl BoundRow {
    pub fn new(
        theorem: &'static str,
        quantity: &str,
        index: Option<usize>,
        norm: NormTag,
        kind: BoundKind,
        observed: f64,
        bound: f64,
    ) -> Self {
        let slack = BOUND_SLACK * bound.abs().max(1.0);
        let satisfied = match kind {
            BoundKind::Upper => observed <= bound + slack,
            BoundKind::Lower => observed >= bound - slack,
        };
        BoundRow {
            quantity: quantity.to_string(),
            index,
            norm,
            observed,
            bound,
            kind,
            satisfied,
            theorem,
        }
    }
}

/// Rows produced by checking one run (or one batch of runs).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "quantity,index,norm,observed,bound,satisfied,theorem";

    pub fn push(&mut self, row: BoundRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: BoundReport) {
        self.rows.extend(other.rows);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| !r.satisfied)
    }

    pub fn write_csv<W: Write>(&self, mut w: W, header: bool) -> io::Result<()> {
        if header {
            writeln!(w, "{}", Self::CSV_HEADER)?;
        }
        for r in &self.rows {
            let index = r.index.map_or_else(|| "all".to_string(), |i| i.to_string());
            writeln!(
                w,
                "{},{},{},{:e},{:e},{},{}",
                r.quantity, index, r.norm, r.observed, r.bound, r.satisfied, r.theorem
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, true).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    fn per_index(
        &mut self,
        theorem: &'static str,
        quantity: &str,
        kind: BoundKind,
        observed: &[f64],
        bound: &[f64],
    ) {
        for (i, (&o, &b)) in observed.iter().zip(bound).enumerate() {
            self.push(BoundRow::new(theorem, quantity, Some(i + 1), NormTag::PerIndex, kind, o, b));
        }
    }

    fn both_norms(&mut self, theorem: &'static str, quantity: &str, kind: BoundKind, observed: NormPair, bound: NormPair) {
        for fro in [false, true] {
            self.push(BoundRow::new(
                theorem,
                quantity,
                None,
                NormTag::of(fro),
                kind,
                observed.get(fro),
                bound.get(fro),
            ));
        }
    }
}

pub const RANK_REVEALING_R: &str = "rank-revealing-r";
pub const RANK_REVEALING_L: &str = "rank-revealing-l";
pub const ANGLE_SINE: &str = "angle-sine";
pub const ANGLE_COS_TAN: &str = "angle-cos-tan";
pub const SUBSPACE_DISTANCE: &str = "subspace-distance";
pub const SINGULAR_VECTOR_ANGLE: &str = "singular-vector-angle";
pub const LOW_RANK_ERROR: &str = "low-rank-error";

/// Checks every deterministic bound for one RU-QLP run. The split index
/// is the `k` the factors were computed with.
pub fn verify_run(a: &DenseMatrix, f: &QlpFactors) -> Result<BoundReport> {
    let k = f
        .config
        .ok_or_else(|| Error::Validation("factors carry no sketch configuration".into()))?
        .k;
    verify_run_with(&SpectralOracle::new(a)?, a, f, k)
}

/// As [`verify_run`] with a precomputed oracle and explicit split `k`.
pub fn verify_run_with(oracle: &SpectralOracle, a: &DenseMatrix, f: &QlpFactors, k: usize) -> Result<BoundReport> {
    let (config, phi) = match (&f.config, &f.phi) {
        (Some(c), Some(p)) => (c, p),
        _ => return Err(Error::Validation("factors carry no retained sketch".into())),
    };
    let part = partition_sketch_with(oracle, phi, k)?;
    let summary = oracle.summary(k)?;
    let db = deterministic_bounds(&summary, part.coupling, config.q)?;
    let obs = empirical_errors_with(oracle, a, f, k)?;
    Ok(deterministic_report(&obs, &db))
}

/// Pairs already-computed observations with their deterministic bounds.
pub fn deterministic_report(obs: &EmpiricalErrors, db: &DeterministicBounds) -> BoundReport {
    use BoundKind::{Lower, Upper};
    let mut r = BoundReport::default();

    r.per_index(RANK_REVEALING_R, "sigma_r11", Upper, &obs.sigma_r11, &db.sigma_upper);
    r.per_index(RANK_REVEALING_R, "sigma_r11", Lower, &obs.sigma_r11, &db.sigma_lower);
    r.both_norms(RANK_REVEALING_R, "r22", Upper, obs.r22, db.tail_q);

    r.per_index(RANK_REVEALING_L, "sigma_l", Upper, &obs.sigma_l, &db.sigma_upper);
    r.per_index(RANK_REVEALING_L, "sigma_l11_vs_sigma_l", Upper, &obs.sigma_l11, &obs.sigma_l);
    r.per_index(RANK_REVEALING_L, "sigma_l11", Lower, &obs.sigma_l11, &db.sigma_lower);
    r.both_norms(RANK_REVEALING_L, "l22", Upper, obs.l22, db.tail_q);

    r.per_index(ANGLE_SINE, "sin_theta", Upper, &obs.theta.sines, &db.sin_theta);
    r.per_index(ANGLE_SINE, "sin_phi", Upper, &obs.phi.sines, &db.sin_phi);

    r.per_index(ANGLE_COS_TAN, "cos_theta", Lower, &obs.theta.cosines, &db.cos_theta);
    r.per_index(ANGLE_COS_TAN, "tan_theta", Upper, &obs.theta.tangents(), &db.tan_theta);
    r.per_index(ANGLE_COS_TAN, "cos_phi", Lower, &obs.phi.cosines, &db.cos_phi);
    r.per_index(ANGLE_COS_TAN, "tan_phi", Upper, &obs.phi.tangents(), &db.tan_phi);

    let dist = |a: &super::angles::PrincipalAngles| NormPair {
        spectral: a.max_sine(),
        frobenius: a.frobenius_sine(),
    };
    r.both_norms(SUBSPACE_DISTANCE, "dist_q_uk", Upper, dist(&obs.theta), db.dist_q);
    r.both_norms(SUBSPACE_DISTANCE, "dist_p_vk", Upper, dist(&obs.phi), db.dist_p);

    r.per_index(SINGULAR_VECTOR_ANGLE, "sin_q_ui", Upper, &obs.sin_q_u, &db.vec_q);
    r.per_index(SINGULAR_VECTOR_ANGLE, "sin_p_vi", Upper, &obs.sin_p_v, &db.vec_p);

    r.both_norms(LOW_RANK_ERROR, "err_qqta_vs_truncated", Upper, obs.err_q, obs.err_q_k);
    r.both_norms(LOW_RANK_ERROR, "err_q_truncated", Upper, obs.err_q_k, db.tail_q);
    r.both_norms(LOW_RANK_ERROR, "err_appt_vs_truncated", Upper, obs.err_p, obs.err_p_k);
    r.both_norms(LOW_RANK_ERROR, "err_p_truncated", Upper, obs.err_p_k, db.tail_p);
    r
}

fn mean_of(runs: &[EmpiricalErrors], f: impl Fn(&EmpiricalErrors) -> f64) -> f64 {
    runs.iter().map(f).sum::<f64>() / runs.len() as f64
}

fn mean_pair(runs: &[EmpiricalErrors], f: impl Fn(&EmpiricalErrors) -> NormPair) -> NormPair {
    NormPair {
        spectral: mean_of(runs, |e| f(e).spectral),
        frobenius: mean_of(runs, |e| f(e).frobenius),
    }
}

fn mean_vec(runs: &[EmpiricalErrors], len: usize, f: impl Fn(&EmpiricalErrors) -> &[f64]) -> Vec<f64> {
    (0..len).map(|i| mean_of(runs, |e| f(e)[i])).collect()
}

/// Compares sample means over independent sketches (same matrix, same `q`)
/// with the expected-value bounds.
pub fn expected_report(runs: &[EmpiricalErrors], eb: &ExpectedBounds) -> Result<BoundReport> {
    use BoundKind::{Lower, Upper};
    let k = eb.sigma_r11_lower.len();
    if runs.is_empty() || runs.iter().any(|e| e.k != k) {
        return Err(Error::Validation(format!("need at least one run, all split at k = {k}")));
    }
    let mut r = BoundReport::default();
    r.per_index(
        "expected-rank-revealing",
        "mean_sigma_r11",
        Lower,
        &mean_vec(runs, k, |e| &e.sigma_r11),
        &eb.sigma_r11_lower,
    );
    r.both_norms("expected-rank-revealing", "mean_r22", Upper, mean_pair(runs, |e| e.r22), eb.tail_q);
    r.per_index("expected-angle-sine", "mean_sin_theta", Upper, &mean_vec(runs, k, |e| &e.theta.sines), &eb.sin_theta);
    r.per_index("expected-angle-sine", "mean_sin_phi", Upper, &mean_vec(runs, k, |e| &e.phi.sines), &eb.sin_phi);
    let dist = |a: &super::angles::PrincipalAngles| NormPair {
        spectral: a.max_sine(),
        frobenius: a.frobenius_sine(),
    };
    r.both_norms("expected-subspace-distance", "mean_dist_q_uk", Upper, mean_pair(runs, |e| dist(&e.theta)), eb.dist_q);
    r.both_norms("expected-subspace-distance", "mean_dist_p_vk", Upper, mean_pair(runs, |e| dist(&e.phi)), eb.dist_p);
    r.per_index("expected-singular-vector-angle", "mean_sin_q_ui", Upper, &mean_vec(runs, k, |e| &e.sin_q_u), &eb.vec_q);
    r.per_index("expected-singular-vector-angle", "mean_sin_p_vi", Upper, &mean_vec(runs, k, |e| &e.sin_p_v), &eb.vec_p);
    r.both_norms("expected-low-rank-error", "mean_err_qqta", Upper, mean_pair(runs, |e| e.err_q), eb.tail_q);
    r.both_norms("expected-low-rank-error", "mean_err_appt", Upper, mean_pair(runs, |e| e.err_p), eb.tail_p);
    Ok(r)
}
