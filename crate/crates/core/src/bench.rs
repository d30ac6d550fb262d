//! Wall-clock comparison of the randomized methods.
//!
//! Trial `t` of every method factors the same matrix (generator seed
//! `seed + t`) with the same sketch seed, so timings differ only by
//! algorithm. One untimed warm-up precedes the trials of each
//! (family, n, q, method) cell. Only the factorization call is timed.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;
use crate::matgen::MatrixSpec;
use crate::randfact::{factorize, Method, SketchConfig};

/// Matrix family template; the size and seed are filled in per run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BenchFamily {
    Dense,
    Sparse { density: f64 },
    LowRankNoise { k: usize, mu: f64 },
    PolyDecay { k: usize, z: f64 },
}

impl BenchFamily {
    pub fn spec(&self, n: usize, seed: u64) -> MatrixSpec {
        match *self {
            BenchFamily::Dense => MatrixSpec::GaussianDense { n, seed },
            BenchFamily::Sparse { density } => MatrixSpec::GaussianSparse { n, density, seed },
            BenchFamily::LowRankNoise { k, mu } => MatrixSpec::LowRankNoise { n, k, mu, seed },
            BenchFamily::PolyDecay { k, z } => MatrixSpec::PolyDecay { n, k, z, seed },
        }
    }

    pub fn name(&self) -> &'static str {
        self.spec(1, 0).family()
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub families: Vec<BenchFamily>,
    pub sizes: Vec<usize>,
    /// `d = round(d_ratio · n)`.
    pub d_ratio: f64,
    pub q_values: Vec<usize>,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub seed: u64,
}

/// Timings for one (method, family, n, q) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub method: Method,
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub q: usize,
    pub seconds: Vec<f64>,
    pub median_s: f64,
    pub mean_s: f64,
    /// `other median / own median` for every other method in the run.
    pub speedup_vs: BTreeMap<Method, f64>,
    /// `‖A − Â‖_F / ‖A‖_F` per trial.
    pub rel_errors: Vec<f64>,
    /// Every trial's error was within 10× of the best method's.
    pub accuracy_parity: bool,
    pub threads: usize,
    pub failure: Option<String>,
}

impl BenchRecord {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

pub const PARITY_FACTOR: f64 = 10.0;

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    if v.len() % 2 == 1 {
        v[h]
    } else {
        0.5 * (v[h - 1] + v[h])
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sketch_for(n: usize, d_ratio: f64, q: usize, seed: u64) -> Result<SketchConfig> {
    let d = (d_ratio * n as f64).round() as usize;
    if d < 2 || d > n {
        return Err(Error::Config(format!("d = round({d_ratio} * {n}) = {d} must lie in 2..={n}")));
    }
    let k = d / 2;
    Ok(SketchConfig::new(k, d - k, q, seed))
}

/// Runs every (family, n, q, method) cell. A method that fails in any trial
/// yields a record carrying the error; the run continues.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if cfg.methods.is_empty() {
        return Ok(Vec::new());
    }
    for &n in &cfg.sizes {
        sketch_for(n, cfg.d_ratio, 0, 0)?;
    }

    let mut records = Vec::new();
    for family in &cfg.families {
        for &n in &cfg.sizes {
            let d = sketch_for(n, cfg.d_ratio, 0, 0)?.d();
            let mut cells: Vec<BenchRecord> = Vec::new();
            for &q in &cfg.q_values {
                for &method in &cfg.methods {
                    cells.push(BenchRecord {
                        method,
                        family: family.name().to_string(),
                        n,
                        d,
                        q,
                        seconds: Vec::new(),
                        median_s: f64::NAN,
                        mean_s: f64::NAN,
                        speedup_vs: BTreeMap::new(),
                        rel_errors: Vec::new(),
                        accuracy_parity: true,
                        threads: 1,
                        failure: None,
                    });
                }
            }

            for t in 0..cfg.trials {
                let trial_seed = cfg.seed.wrapping_add(t as u64);
                let a = family.spec(n, trial_seed).generate()?;
                let norm = a.frobenius_norm();
                for (qi, &q) in cfg.q_values.iter().enumerate() {
                    let sketch = sketch_for(n, cfg.d_ratio, q, trial_seed)?;
                    let row = &mut cells[qi * cfg.methods.len()..(qi + 1) * cfg.methods.len()];
                    let mut errs = vec![f64::NAN; row.len()];
                    for (mi, rec) in row.iter_mut().enumerate() {
                        if rec.failed() {
                            continue;
                        }
                        if t == 0 {
                            // Warm-up, untimed.
                            if let Err(e) = factorize(&a, rec.method, &sketch) {
                                rec.failure = Some(e.to_string());
                                continue;
                            }
                        }
                        match time_once(&a, rec.method, &sketch) {
                            Ok((secs, approx)) => {
                                rec.seconds.push(secs);
                                errs[mi] = approx.sub(&a).frobenius_norm() / norm;
                                rec.rel_errors.push(errs[mi]);
                            }
                            Err(e) => rec.failure = Some(e.to_string()),
                        }
                    }
                    let best = errs.iter().copied().filter(|e| e.is_finite()).fold(f64::INFINITY, f64::min);
                    for (rec, e) in row.iter_mut().zip(&errs) {
                        if e.is_finite() && *e > PARITY_FACTOR * best && *e > 1e-13 {
                            rec.accuracy_parity = false;
                        }
                    }
                }
            }

            for rec in cells.iter_mut().filter(|r| !r.failed()) {
                rec.median_s = median(&rec.seconds);
                rec.mean_s = mean(&rec.seconds);
            }
            compute_speedups(&mut cells);
            records.extend(cells);
        }
    }
    Ok(records)
}

fn time_once(a: &DenseMatrix, method: Method, sketch: &SketchConfig) -> Result<(f64, DenseMatrix)> {
    let start = Instant::now();
    let f = factorize(a, method, sketch)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((secs, f.reconstruct()))
}

/// Fills `speedup_vs` within each (family, n, q) group from the medians.
pub fn compute_speedups(records: &mut [BenchRecord]) {
    let medians: Vec<(String, usize, usize, Method, f64)> = records
        .iter()
        .filter(|r| !r.failed() && r.median_s.is_finite() && r.median_s > 0.0)
        .map(|r| (r.family.clone(), r.n, r.q, r.method, r.median_s))
        .collect();
    for rec in records.iter_mut() {
        rec.speedup_vs.clear();
        if rec.failed() || rec.median_s.is_nan() || rec.median_s <= 0.0 {
            continue;
        }
        for (fam, n, q, m, med) in &medians {
            if *fam == rec.family && *n == rec.n && *q == rec.q && *m != rec.method {
                rec.speedup_vs.insert(*m, med / rec.median_s);
            }
        }
    }
}

pub const TRIALS_HEADER: &str = "method,family,n,d,q,trial,seconds";
pub const AGGREGATE_HEADER: &str =
    "method,family,n,d,q,median_s,mean_s,speedup_vs_rsvd,speedup_vs_corutv,speedup_vs_rptsod";

pub fn write_trials_csv<W: Write>(mut w: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(w, "{TRIALS_HEADER}")?;
    for r in records {
        for (t, s) in r.seconds.iter().enumerate() {
            writeln!(w, "{},{},{},{},{},{},{:.9}", r.method, r.family, r.n, r.d, r.q, t, s)?;
        }
    }
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(mut w: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(w, "{AGGREGATE_HEADER}")?;
    for r in records {
        let ratio = |m: Method| {
            if m == r.method {
                if r.failed() { String::new() } else { "1".to_string() }
            } else {
                r.speedup_vs.get(&m).map_or_else(String::new, |x| format!("{x:.6}"))
            }
        };
        let fmt = |x: f64| if x.is_finite() { format!("{x:.9}") } else { String::new() };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.method,
            r.family,
            r.n,
            r.d,
            r.q,
            fmt(r.median_s),
            fmt(r.mean_s),
            ratio(Method::Rsvd),
            ratio(Method::CorUtv),
            ratio(Method::RpTsod)
        )?;
    }
    Ok(())
}
