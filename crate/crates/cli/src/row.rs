//! The result-row schema shared by `simulate`, `sweep`, and `theory`.

use rlnc_broadcast::analysis::{
    expected_completion_blocks, expected_completion_full, gaussian_completion_file,
    gaussian_completion_opt, AnalysisError, DEFAULT_TAIL_TOL,
};
use rlnc_broadcast::engine::{ExperimentStats, Policy};

use crate::format::{opt_sig6, sig6};

/// CSV header; every row is self-describing.
pub const RESULT_HEADER: &str = "n,f,k,p,policy,trials,seed,mean_sim,std_sim,ci95_low,ci95_high,\
     theory_negbin,theory_gauss,theory_opt_negbin,theory_opt_gauss,rel_err_gauss_vs_negbin";

/// Theoretical completion-time columns. Fields are absent when the
/// configuration falls outside a formula's domain (heterogeneous channels,
/// windows below the admissibility bound).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TheoryColumns {
    /// Block decomposition of the exact tail series.
    pub negbin: Option<f64>,
    /// Gaussian block estimate.
    pub gauss: Option<f64>,
    /// Exact tail series with the window spanning the file.
    pub opt_negbin: Option<f64>,
    /// Gaussian whole-file estimate.
    pub opt_gauss: Option<f64>,
    /// `|gauss - negbin| / negbin`.
    pub rel_err_gauss_vs_negbin: Option<f64>,
}

impl TheoryColumns {
    /// Fills every column the configuration admits; out-of-domain columns
    /// stay empty. `prob` is the symmetric connectivity, when there is one.
    pub fn lenient(file_size: u64, window: u64, receivers: u32, prob: Option<f64>) -> Self {
        let Some(p) = prob else {
            return Self::default();
        };
        let negbin = expected_completion_blocks(file_size, window, receivers, p).ok();
        let gauss = gaussian_completion_file(file_size, window, receivers, p).ok();
        let opt_negbin = if p == 1.0 {
            Some(file_size as f64)
        } else {
            expected_completion_full(file_size, receivers, p, DEFAULT_TAIL_TOL).ok()
        };
        let opt_gauss = gaussian_completion_opt(file_size, receivers, p).ok();
        let rel_err = match (negbin, gauss) {
            (Some(nb), Some(ga)) => Some((ga - nb).abs() / nb),
            _ => None,
        };
        Self {
            negbin,
            gauss,
            opt_negbin,
            opt_gauss,
            rel_err_gauss_vs_negbin: rel_err,
        }
    }

    /// Like [`TheoryColumns::lenient`] but every column must be computable.
    pub fn strict(
        file_size: u64,
        window: u64,
        receivers: u32,
        prob: f64,
    ) -> Result<Self, AnalysisError> {
        let negbin = expected_completion_blocks(file_size, window, receivers, prob)?;
        let gauss = gaussian_completion_file(file_size, window, receivers, prob)?;
        let opt_negbin = if prob == 1.0 {
            file_size as f64
        } else {
            expected_completion_full(file_size, receivers, prob, DEFAULT_TAIL_TOL)?
        };
        let opt_gauss = gaussian_completion_opt(file_size, receivers, prob)?;
        Ok(Self {
            negbin: Some(negbin),
            gauss: Some(gauss),
            opt_negbin: Some(opt_negbin),
            opt_gauss: Some(opt_gauss),
            rel_err_gauss_vs_negbin: Some((gauss - negbin).abs() / negbin),
        })
    }

    /// `|opt_gauss - opt_negbin| / opt_negbin`, when both are present.
    pub fn rel_err_opt(&self) -> Option<f64> {
        match (self.opt_negbin, self.opt_gauss) {
            (Some(nb), Some(ga)) => Some((ga - nb).abs() / nb),
            _ => None,
        }
    }
}

/// One output row: configuration, simulation summary, theory columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub receivers: u32,
    pub file_size: u64,
    pub window: u64,
    /// One entry for a symmetric channel, one per receiver otherwise.
    pub probs: Vec<f64>,
    pub policy: Option<Policy>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub sim: Option<ExperimentStats>,
    pub theory: TheoryColumns,
}

impl ResultRow {
    /// Symmetric connectivity value, when there is one.
    pub fn uniform_prob(&self) -> Option<f64> {
        (self.probs.len() == 1).then(|| self.probs[0])
    }

    pub fn csv_line(&self) -> String {
        debug_assert!(
            [
                self.theory.negbin,
                self.theory.gauss,
                self.theory.opt_negbin,
                self.theory.opt_gauss,
                self.theory.rel_err_gauss_vs_negbin,
                self.sim.map(|s| s.mean),
            ]
            .iter()
            .flatten()
            .all(|v| v.is_finite()),
            "present row values must be finite"
        );
        let probs = self
            .probs
            .iter()
            .map(|p| sig6(*p))
            .collect::<Vec<_>>()
            .join(";");
        let (mean, std, lo, hi) = match &self.sim {
            Some(s) => (
                sig6(s.mean),
                sig6(s.std_dev),
                sig6(s.ci95_low),
                sig6(s.ci95_high),
            ),
            None => Default::default(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.receivers,
            self.file_size,
            self.window,
            probs,
            self.policy.map(Policy::label).unwrap_or_default(),
            self.trials.map(|t| t.to_string()).unwrap_or_default(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            mean,
            std,
            lo,
            hi,
            opt_sig6(self.theory.negbin),
            opt_sig6(self.theory.gauss),
            opt_sig6(self.theory.opt_negbin),
            opt_sig6(self.theory.opt_gauss),
            opt_sig6(self.theory.rel_err_gauss_vs_negbin),
        )
    }
}
