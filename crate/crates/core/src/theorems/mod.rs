//! Randomized and exhaustive verification harnesses.
//!
//! Every suite is deterministic: trial `i` draws from a ChaCha stream keyed by
//! `(seed, i)`, so reports do not depend on thread scheduling.

mod bounds;
mod even;
mod scan;
mod sector;

pub use bounds::{
    bound_theorem1, bound_theorem1_ball, bound_theorem4, bound_theorem4_ball, strip_constants,
    StripConstants,
};
pub use even::{check_even_instance, even_strip_poly, verify_theorem4, EvenStripPoly, Theorem4Report};
pub use scan::{
    quartic_cos_jet, scan_jensen_grid, scan_theorem2, GridCell, JensenSource, ScanResult, Theorem2Report,
    Theorem2Row, EMPIRICAL_CAVEAT,
};
pub use sector::{
    random_hyperbolic, random_sector_poly, verify_corollary, verify_corollary_known,
    verify_corollary_suite, verify_gauss_lucas, verify_sector_squaring, verify_theorem3,
    CorollaryReport, SectorPoly,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::{rat, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Ball,
}

/// Shared settings of the randomized suites.
///
/// Sector parameters are carried as the exact square `δ^2`, so that
/// `δ = 2^(-1/2)` stays rational.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive degree range of the first polynomial.
    pub deg_p: (usize, usize),
    /// Inclusive degree range of the second polynomial, where one is used.
    pub deg_q: (usize, usize),
    #[serde(with = "rat_str")]
    pub delta_sq: Rat,
    pub prec: u32,
    pub mode: Mode,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0,
            trials: 100,
            deg_p: (1, 6),
            deg_q: (1, 4),
            delta_sq: rat(1, 4),
            prec: 128,
            mode: Mode::Exact,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.deg_p.0 > self.deg_p.1 || self.deg_q.0 > self.deg_q.1 {
            return bad("empty degree range");
        }
        if self.delta_sq <= rat(0, 1) || self.delta_sq > rat(1, 1) {
            return bad("delta must lie in (0, 1]");
        }
        if self.prec < 64 {
            return bad("precision below 64 bits");
        }
        Ok(())
    }
}

/// A failing trial with enough data to replay it by hand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
    /// Coefficients, constant term first, as exact fractions.
    pub p: Vec<String>,
    pub q: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub indeterminate: usize,
    /// Trials whose statement holds vacuously (for example a zero composition).
    pub vacuous: usize,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, trials: usize) -> Self {
        SuiteReport {
            suite: suite.into(),
            seed,
            trials,
            passed: 0,
            indeterminate: 0,
            vacuous: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Pass => self.passed += 1,
            Outcome::Vacuous => {
                self.passed += 1;
                self.vacuous += 1
            }
            Outcome::Indeterminate => self.indeterminate += 1,
            Outcome::Fail(c) => self.counterexamples.push(c),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty() && self.indeterminate == 0
    }
}

enum Outcome {
    Pass,
    Vacuous,
    Indeterminate,
    Fail(Counterexample),
}

pub(crate) fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) fn coeff_strings(p: &crate::poly::Poly<Rat>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// Order-preserving map over `0..n`, parallel when the feature is on.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) mod rat_str {
    use crate::numeric::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trial_streams_are_independent_of_order() {
        let a: Vec<u64> = (0..8).map(|i| trial_rng(7, i).gen()).collect();
        let b: Vec<u64> = (0..8).rev().map(|i| trial_rng(7, i).gen()).collect::<Vec<_>>().into_iter().rev().collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        assert_ne!(trial_rng(7, 0).gen::<u64>(), trial_rng(8, 0).gen::<u64>());
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::default().validate().is_ok());
        let mut c = TrialConfig { trials: 0, ..Default::default() };
        assert!(c.validate().is_err());
        c.trials = 1;
        c.delta_sq = rat(5, 4);
        assert!(c.validate().is_err());
    }
}
