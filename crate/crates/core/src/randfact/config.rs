use crate::error::{Error, Result};

/// How the power iteration turns a sketch into an orthonormal basis.
///
/// Both methods always return `d` columns: an exactly rank-deficient sketch
/// is completed to an orthonormal set rather than truncated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OrthMethod {
    /// The final basis is the full set of left singular vectors of the last
    /// iterate, ordered by singular value, so its leading `k` columns span
    /// the dominant part of the sketch. Intermediate steps use Householder
    /// QR since only their span matters.
    #[default]
    Svd,
    /// Thin Householder QR throughout. Cheaper, but the leading `k` columns
    /// span the first `k` sketch columns rather than the dominant ones.
    Householder,
}

/// Parameters of one randomized factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SketchConfig {
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub ortho_interval: usize,
    pub seed: u64,
    pub orth: OrthMethod,
}

impl SketchConfig {
    pub fn new(k: usize, p: usize, q: usize, seed: u64) -> Self {
        SketchConfig {
            k,
            p,
            q,
            ortho_interval: 1,
            seed,
            orth: OrthMethod::Svd,
        }
    }

    pub fn with_ortho_interval(mut self, interval: usize) -> Self {
        self.ortho_interval = interval;
        self
    }

    pub fn with_orth(mut self, orth: OrthMethod) -> Self {
        self.orth = orth;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Sample count `d = k + p`.
    pub fn d(&self) -> usize {
        self.k + self.p
    }

    /// Checks the configuration against an `m × n` input.
    ///
    /// `d` may not exceed `min(m, n)`: the thin factors would otherwise
    /// have fewer than `d` columns.
    pub fn validate_for(&self, m: usize, n: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        if self.ortho_interval == 0 {
            return Err(Error::Config("ortho_interval must be at least 1".into()));
        }
        let d = self.d();
        if d > m.min(n) {
            return Err(Error::Config(format!(
                "sample count d = k + p = {d} exceeds min(m, n) = {} for a {m}x{n} input",
                m.min(n)
            )));
        }
        Ok(())
    }
}
