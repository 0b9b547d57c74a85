// SPDX-License-Identifier: Apache-2.0

//! Closed-form evaluators for the quantitative inequalities used by the
//! coloring argument, and empirical concentration checks.
//!
//! Logarithms are natural throughout.

use crate::fraction::{to_f64, Fraction};
use crate::procedure::keep_constant;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Fewest samples accepted by [`delta_concentration_test`].
pub const MIN_CONCENTRATION_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
}

/// One evaluated inequality `lhs ≥ rhs` (or `lhs < rhs` where noted) with
/// the inputs and intermediates that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub context: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(name: &str, lhs: f64, rhs: f64, holds: bool, context: &[(&str, f64)]) -> Self {
        BoundReport {
            name: name.to_string(),
            lhs,
            rhs,
            holds,
            context: context.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

fn domain(ok: bool, what: &str) -> Result<(), BoundsError> {
    if ok {
        Ok(())
    } else {
        Err(BoundsError::Domain(what.to_string()))
    }
}

/// Lower bound on the expected aberrance at `σ = 0`.
pub fn aberrance_lower_bound(k: f64, alpha: f64, beta: f64, gap: f64, d: f64, n_lord: f64, n_weak: f64) -> f64 {
    let weak = if beta * gap == 0.0 { 0.0 } else { beta * gap / (d + beta * gap) * n_weak };
    k * (alpha / (1.0 + alpha) * n_lord + weak)
}

/// Lower bound on `E[Pairs − Trips]`, the smaller of the two evaluations at
/// `e1` (complement edges among egalitarian neighbors) and `e2 = C(d, 2)`.
pub fn pairs_trips_lower_bound(k: f64, alpha: f64, list_size: f64, e1: f64, e2: f64) -> f64 {
    let term =
        |e: f64| k * e / list_size * (k / ((1.0 + alpha) * (1.0 + alpha)) - (2.0 * e).sqrt() / (3.0 * list_size));
    term(e1).min(term(e2))
}

/// Guaranteed number of non-edges among the egalitarian neighbors of a
/// vertex in a critical graph.
pub fn structure_rhs(eps: f64, alpha: f64, beta: f64, gap: f64, d: f64, n_notegal: f64, n_weak: f64) -> f64 {
    let w = eps / (2.0 * (1.0 - eps));
    (0.25 - w * (4.0 + beta + 2.0 * alpha)) * gap * d
        - (0.5 - w * (1.0 + beta)) * d * n_notegal
        - (0.25 - w * (2.0 + beta)) * gap * n_weak
}

/// The first sparsity coefficient, before clamping at zero.
pub fn sparsity_1(alpha: f64, beta: f64, eps: f64, k: f64) -> f64 {
    let w = eps / (2.0 * (1.0 - eps));
    0.25 - w * (4.0 + beta + 2.0 * alpha) - 1.01 * eps * (1.0 + alpha) / (alpha * k) * (0.5 - w * (1.0 + beta))
}

/// Checks that the per-`Gap` expected savings coefficient reaches `1.01ε`.
///
/// A negative first sparsity is clamped to 0: a count of non-edges cannot
/// be negative, and the clamped side then forces the minimum to 0.
pub fn savings_gap_certificate(
    alpha: Fraction,
    beta: Fraction,
    eps: Fraction,
    rho: f64,
) -> Result<BoundReport, BoundsError> {
    domain(alpha > Fraction::from_integer(0) && beta > Fraction::from_integer(0), "alpha and beta must be positive")?;
    let k = keep_constant(eps, rho).map_err(|e| BoundsError::Domain(e.to_string()))?;
    let (a, b, e) = (to_f64(alpha), to_f64(beta), to_f64(eps));
    let raw = sparsity_1(a, b, e, k);
    let s1 = raw.max(0.0);
    let s2 = 0.5;
    let coefficient = |s: f64| k * (k / ((1.0 + a) * (1.0 + a)) - (2.0 * s).sqrt() / (3.0 * (1.0 - e))) * s;
    let (c1, c2) = (coefficient(s1), coefficient(s2));
    let lhs = c1.min(c2);
    let rhs = 1.01 * e;
    Ok(BoundReport::new(
        "savings_gap_certificate",
        lhs,
        rhs,
        lhs >= rhs,
        &[
            ("alpha", a),
            ("beta", b),
            ("eps", e),
            ("rho", rho),
            ("k", k),
            ("sparsity_1", raw),
            ("sparsity_2", s2),
            ("coefficient_1", c1),
            ("coefficient_2", c2),
        ],
    ))
}

/// A tail bound together with the smallest deviation it applies to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub bound: f64,
    pub threshold: f64,
    /// `t` strictly exceeds the threshold.
    pub applicable: bool,
}

fn exp_term(t: f64, scale: f64) -> f64 {
    // scale is the full denominator; 0/0 and t/0 are read as limits.
    if scale == 0.0 {
        if t > 0.0 {
            0.0
        } else {
            1.0
        }
    } else {
        (-t * t / scale).exp()
    }
}

/// Concentration about the mean for an `(r, chg)`-certifiable variable with
/// exceptional set of probability `p_exc`.
pub fn talagrand_tail(t: f64, r: f64, chg: f64, expect: f64, p_exc: f64, sup_x: f64) -> Result<TailBound, BoundsError> {
    domain(r >= 0.0 && chg >= 0.0, "r and chg must be nonnegative")?;
    domain(expect >= 0.0 && (0.0..=1.0).contains(&p_exc), "expectation must be nonnegative and p_exc a probability")?;
    let threshold = 96.0 * chg * (r * expect).sqrt() + 128.0 * r * chg * chg + 8.0 * p_exc * sup_x;
    let bound = 4.0 * exp_term(t, 8.0 * chg * chg * r * (4.0 * expect + t)) + 4.0 * p_exc;
    Ok(TailBound { bound, threshold, applicable: t > threshold })
}

/// Concentration about a median; no threshold on `t`.
pub fn talagrand_median_tail(t: f64, r: f64, chg: f64, med: f64, p_exc: f64) -> Result<f64, BoundsError> {
    domain(r >= 0.0 && chg >= 0.0, "r and chg must be nonnegative")?;
    domain(med >= 0.0 && (0.0..=1.0).contains(&p_exc), "median must be nonnegative and p_exc a probability")?;
    Ok(4.0 * exp_term(t, 4.0 * chg * chg * r * (med + t)) + 4.0 * p_exc)
}

/// Upper bound on `|E[X] − Med(X)|` for an `(r, chg)`-certifiable `X`.
pub fn expectation_median_gap(r: f64, chg: f64, expect: f64, sup_x: f64, p_exc: f64) -> f64 {
    48.0 * chg * (r * expect).sqrt() + 64.0 * r * chg * chg + 4.0 * sup_x * p_exc
}

/// Natural log of the exceptional-outcome probability bound.
pub fn exceptional_prob_log_bound(max_degree: f64, sigma: f64, eps: f64) -> Result<f64, BoundsError> {
    domain(max_degree >= 2.0, "max degree must be at least 2")?;
    domain(sigma < 1.0 && eps < 1.0, "sigma and eps must be below 1")?;
    let l = max_degree.ln();
    Ok(4.0 * l + l * (1.0 - ((1.0 - sigma) * (1.0 - eps) * l).ln()))
}

/// `Δ⁴·(e / ((1 − σ)(1 − ε) ln Δ))^{ln Δ}`, evaluated in the log domain.
pub fn exceptional_prob_bound(max_degree: f64, sigma: f64, eps: f64) -> Result<f64, BoundsError> {
    exceptional_prob_log_bound(max_degree, sigma, eps).map(f64::exp)
}

/// Lower bound on `t²/(4E[X] + t)` when `t = max{γ·E[X]^{5/6}, ln^{p}Δ}`.
pub fn deviation_ratio_bound(max_degree: f64, gamma: f64, conc_exp: u32) -> Result<f64, BoundsError> {
    domain(max_degree > 1.0 && gamma > 0.0, "need max degree above 1 and positive gamma")?;
    let l = max_degree.ln();
    Ok(l.powf(4.0 * conc_exp as f64 / 5.0) / (1.0 + 4.0 / gamma.powf(1.2)))
}

/// Evaluates both sides of [`deviation_ratio_bound`] for a given mean.
pub fn deviation_ratio_check(
    expect: f64,
    max_degree: f64,
    gamma: f64,
    conc_exp: u32,
) -> Result<BoundReport, BoundsError> {
    domain(expect >= 0.0, "expectation must be nonnegative")?;
    let rhs = deviation_ratio_bound(max_degree, gamma, conc_exp)?;
    let t = (gamma * expect.powf(5.0 / 6.0)).max(max_degree.ln().powi(conc_exp as i32));
    let lhs = t * t / (4.0 * expect + t);
    // Relative slack for rounding when both sides coincide.
    Ok(BoundReport::new(
        "deviation_ratio",
        lhs,
        rhs,
        lhs >= rhs * (1.0 - 1e-12),
        &[("expect", expect), ("max_degree", max_degree), ("gamma", gamma), ("t", t)],
    ))
}

/// Empirical frequency of deviations of at least `2·max{m^{5/6}, ln^{p}Δ}`
/// from the sample mean `m`, against `Δ^{−4}/16`.
pub fn delta_concentration_test(samples: &[f64], max_degree: f64, conc_exp: u32) -> Result<BoundReport, BoundsError> {
    if samples.len() < MIN_CONCENTRATION_SAMPLES {
        return Err(BoundsError::TooFewSamples { got: samples.len(), need: MIN_CONCENTRATION_SAMPLES });
    }
    domain(max_degree > 1.0, "max degree must exceed 1")?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let window = 2.0 * mean.max(0.0).powf(5.0 / 6.0).max(max_degree.ln().powi(conc_exp as i32));
    let exceed = samples.iter().filter(|&&x| (x - mean).abs() >= window).count();
    let freq = exceed as f64 / n;
    let target = max_degree.powi(-4) / 16.0;
    Ok(BoundReport::new(
        "delta_concentration",
        freq,
        target,
        freq < target,
        &[("mean", mean), ("window", window), ("exceedances", exceed as f64), ("samples", n)],
    ))
}

/// Edge lower bound for `k`-critical graphs on `n` vertices.
pub fn ky_bound(k: u64, n: u64) -> Result<u64, BoundsError> {
    domain(k >= 4 && n >= k, "need k >= 4 and n >= k")?;
    let num = (k + 1) * (k - 2) * n - k * (k - 3);
    Ok(num.div_ceil(2 * (k - 1)))
}

/// With `ε = α²/1350`, checks `1 + ε ≥ 1/factor` exactly.
pub fn minor_constants_check(alpha: Fraction, factor: Fraction) -> Result<BoundReport, BoundsError> {
    let zero = Fraction::from_integer(0);
    domain(alpha > zero && alpha < Fraction::new(1, 2), "alpha must lie in (0, 1/2)")?;
    domain(factor > zero, "factor must be positive")?;
    let eps = alpha * alpha / Fraction::from_integer(1350);
    let one = Fraction::from_integer(1);
    let needed = one / factor - one;
    Ok(BoundReport::new(
        "minor_constants",
        to_f64(one + eps),
        to_f64(one / factor),
        eps >= needed,
        &[("alpha", to_f64(alpha)), ("factor", to_f64(factor)), ("eps", to_f64(eps)), ("needed_eps", to_f64(needed))],
    ))
}

/// Largest possible triangle count of a graph with `edges` edges.
pub fn rivin_bound(edges: u64) -> f64 {
    (2.0 * edges as f64).powf(1.5) / 6.0
}
