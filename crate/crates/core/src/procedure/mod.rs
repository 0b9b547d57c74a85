// SPDX-License-Identifier: Apache-2.0

//! The local naive random coloring procedure with activation and
//! equalizing coin flips, the savings random variables, Monte Carlo
//! estimation, and the sample-check-greedy coloring pipeline.

mod estimate;
mod pipeline;
mod sampler;
mod savings;

pub use estimate::{
    estimate_keep_rates, mc_estimate, save_inequality_check, KeepRates, SaveInequalityReport, SavingsEstimate,
    Statistic, Variable,
};
pub use pipeline::{pipeline_color, PipelineOutcome};
pub use sampler::{keep_probability, trial_rng, PartialColoring, Sampler, TrialOutcome};
pub use savings::{Priority, SavingsContext, SavingsSample, VertexSavings};

use crate::correspondence::CorrespondenceError;
use crate::fraction::{to_f64, Fraction};
use crate::lists::ListError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProcedureError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("keep probability {keep} of vertex {vertex} with color {color} is below the constant {constant}")]
    KeepBelowConstant { vertex: usize, color: u32, keep: f64, constant: f64 },
    #[error("color {color} is not in the list of vertex {vertex}")]
    ColorNotInList { vertex: usize, color: u32 },
    #[error("vertex {vertex} has {size} colors, fewer than (1 − ε)·d(v) = {needed}")]
    ListTooShort { vertex: usize, size: usize, needed: Fraction },
    /// The greedy pass cannot fail once every uncolored vertex passed the
    /// count check; reaching this means the implementation is wrong.
    #[error("internal failure: greedy extension blocked at vertex {0} after the count check passed")]
    GreedyFailedAfterCheck(usize),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error(transparent)]
    Lists(#[from] ListError),
}

/// Parameters of the procedure and of the savings targets.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcedureParams {
    pub eps: Fraction,
    pub sigma: Fraction,
    pub alpha: Fraction,
    pub beta: Fraction,
    pub rho: f64,
    pub xi1: Fraction,
    pub xi2: Fraction,
    /// Exponent of `ln Δ` in the savings target.
    pub gap_exp: u32,
    /// Exponent of `ln Δ` in the concentration window.
    pub conc_exp: u32,
}

/// `1 − e^{−1}·α/(1 + α)`.
pub fn default_rho(alpha: Fraction) -> f64 {
    let a = to_f64(alpha);
    1.0 - (-1.0f64).exp() * a / (1.0 + a)
}

impl Default for ProcedureParams {
    fn default() -> Self {
        let alpha = Fraction::new(1, 50);
        ProcedureParams {
            eps: Fraction::new(1, 330),
            sigma: Fraction::from_integer(0),
            alpha,
            beta: Fraction::new(1, 50),
            rho: default_rho(alpha),
            xi1: Fraction::new(1, 100),
            xi2: Fraction::new(1, 100),
            gap_exp: 10,
            conc_exp: 9,
        }
    }
}

impl ProcedureParams {
    pub fn validate(&self) -> Result<(), ProcedureError> {
        let zero = Fraction::from_integer(0);
        let one = Fraction::from_integer(1);
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(ProcedureError::Parameter(what.to_string()))
            }
        };
        check(zero <= self.eps && self.eps < one, "eps must lie in [0, 1)")?;
        check(zero <= self.sigma && self.sigma < one, "sigma must lie in [0, 1)")?;
        check(self.alpha > zero && self.beta > zero, "alpha and beta must be positive")?;
        check((0.0..=1.0).contains(&self.rho), "rho must lie in [0, 1]")?;
        check(self.xi1 > zero && self.xi2 > zero, "xi1 and xi2 must be positive")
    }

    pub fn keep_constant(&self) -> f64 {
        keep_constant(self.eps, self.rho).expect("validated parameters")
    }

    /// `⌈1000 / (1 − ε)²⌉`.
    pub fn min_degree_floor(&self) -> u64 {
        min_degree_floor(self.eps)
    }
}

/// `0.999·ρ·e^{−ρ/(1−ε)}`.
pub fn keep_constant(eps: Fraction, rho: f64) -> Result<f64, ProcedureError> {
    if !(Fraction::from_integer(0) <= eps && eps < Fraction::from_integer(1)) {
        return Err(ProcedureError::Parameter(format!("eps must lie in [0, 1), got {eps}")));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(ProcedureError::Parameter(format!("rho must lie in [0, 1], got {rho}")));
    }
    Ok(0.999 * rho * (-rho / (1.0 - to_f64(eps))).exp())
}

/// `⌈1000 / (1 − ε)²⌉`, exactly.
pub fn min_degree_floor(eps: Fraction) -> u64 {
    let one_minus = Fraction::from_integer(1) - eps;
    (Fraction::from_integer(1000) / (one_minus * one_minus)).ceil().to_integer() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keep_constant_values() {
        assert_eq!(keep_constant(Fraction::new(1, 330), 0.0).unwrap(), 0.0);
        let k = keep_constant(Fraction::from_integer(0), 1.0).unwrap();
        assert!((k - 0.999 / std::f64::consts::E).abs() < 1e-15);
        assert!((k - 0.367512).abs() < 1e-6);
        let p = ProcedureParams::default();
        assert!((p.rho - 0.992_786_677_6).abs() < 1e-9);
        // Frozen from direct evaluation: 0.999·ρ·exp(−330ρ/329).
        assert!((p.keep_constant() - 0.366_394_656_2).abs() < 1e-9);
        assert!(keep_constant(Fraction::from_integer(1), 0.5).is_err());
        assert!(keep_constant(Fraction::from_integer(0), 1.5).is_err());
    }

    #[test]
    fn degree_floor() {
        assert_eq!(min_degree_floor(Fraction::from_integer(0)), 1000);
        assert_eq!(min_degree_floor(Fraction::new(1, 2)), 4000);
        assert_eq!(min_degree_floor(Fraction::new(1, 330)), 1007);
    }
}
