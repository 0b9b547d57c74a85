// SPDX-License-Identifier: Apache-2.0

use super::sampler::{trial_rng, Sampler};
use super::savings::{Priority, SavingsContext};
use super::{ProcedureError, ProcedureParams};
use crate::correspondence::{
    greedy_lm_color, identity_correspondence, is_lm_coloring, make_total, residual, GreedyLmOutcome,
};
use crate::fraction::{int, Fraction};
use crate::graph::Graph;
use crate::lists::{Coloring, ListAssignment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineOutcome {
    Colored {
        coloring: Coloring,
        rounds: u32,
    },
    /// Every round had some uncolored vertex failing the count check.
    Exhausted {
        violations_per_round: Vec<usize>,
    },
}

/// Sample, check `Save_{L′}(v) ≤ Unact(v)` on every uncolored vertex, and
/// extend greedily once a sample passes. Failed rounds resample from
/// scratch on the next stream of `seed`.
pub fn pipeline_color(
    g: &Graph,
    lists: &ListAssignment,
    params: &ProcedureParams,
    max_rounds: u32,
    seed: u64,
) -> Result<PipelineOutcome, ProcedureError> {
    params.validate()?;
    lists.check_for(g)?;
    let keep_frac = Fraction::from_integer(1) - params.eps;
    for v in 0..g.n() {
        let needed = keep_frac * int(g.neighbors(v).len());
        if int(lists.size(v)) < needed {
            return Err(ProcedureError::ListTooShort { vertex: v, size: lists.size(v), needed });
        }
    }
    let identity = identity_correspondence(g, lists)?;
    let ca = make_total(g, &identity)?;
    let sampler = Sampler::equalized(g, &ca, params)?;
    let priority = Priority::ListSize;
    let ctx = SavingsContext::new(g, &ca, params.sigma, &priority);
    let order = priority.descending(&ca);
    let mut violations_per_round = Vec::new();
    let mut scratch = Vec::new();
    for round in 0..max_rounds {
        let pc = sampler.sample(&mut trial_rng(seed, round as u64));
        let u_set = pc.uncolored_vertices();
        let violations = u_set
            .iter()
            .filter(|&&v| ctx.residual_save(&pc, v, &mut scratch) > ctx.vertex(&pc, v, &mut scratch).unact as i64)
            .count();
        if violations > 0 {
            violations_per_round.push(violations);
            continue;
        }
        let guesses = pc.guesses();
        let res = residual(g, &ca, &guesses, &u_set)?;
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in res.vertices.iter().enumerate() {
            local[v] = i;
        }
        let residual_order: Vec<usize> = order.iter().map(|&v| local[v]).filter(|&i| i != usize::MAX).collect();
        let partial = match greedy_lm_color(&res.graph, &res.assignment, &residual_order) {
            GreedyLmOutcome::Colored(c) => c,
            GreedyLmOutcome::Blocked { vertex, .. } => {
                return Err(ProcedureError::GreedyFailedAfterCheck(res.vertices[vertex]))
            }
        };
        let coloring = res.splice(&guesses, &pc.uncolored, &partial);
        assert!(
            is_lm_coloring(g, &ca, &coloring) && coloring.is_proper_l_coloring(g, lists),
            "pipeline produced an improper coloring"
        );
        return Ok(PipelineOutcome::Colored { coloring, rounds: round + 1 });
    }
    Ok(PipelineOutcome::Exhausted { violations_per_round })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn generous() -> ProcedureParams {
        ProcedureParams { eps: Fraction::new(1, 3), rho: 0.5, ..Default::default() }
    }

    #[test]
    fn large_lists_succeed_first_round() {
        for seed in 0..20 {
            let g = generators::gnp(14, 0.4, seed);
            let sizes: Vec<usize> = (0..g.n()).map(|v| g.neighbors(v).len() + 1).collect();
            let lists = ListAssignment::from_sizes(&sizes);
            match pipeline_color(&g, &lists, &generous(), 1, seed).unwrap() {
                PipelineOutcome::Colored { coloring, rounds } => {
                    assert_eq!(rounds, 1);
                    assert!(coloring.is_total() && coloring.is_proper_l_coloring(&g, &lists));
                }
                other => panic!("expected success, got {other:?}"),
            }
        }
    }

    #[test]
    fn five_cycle_with_three_lists() {
        let g = generators::cycle(5);
        let lists = ListAssignment::new(vec![vec![1, 2, 3]; 5]).unwrap();
        let PipelineOutcome::Colored { coloring, .. } = pipeline_color(&g, &lists, &generous(), 20, 7).unwrap() else {
            panic!("C5 with 3-lists should be colored");
        };
        assert!(coloring.is_proper_l_coloring(&g, &lists));
    }

    #[test]
    fn short_lists_are_rejected() {
        let g = generators::complete(5);
        let lists = ListAssignment::uniform(5, 2);
        assert!(matches!(
            pipeline_color(&g, &lists, &generous(), 5, 0),
            Err(ProcedureError::ListTooShort { vertex: 0, size: 2, .. })
        ));
    }

    #[test]
    fn exhaustion_is_reported() {
        // K4 with 3-lists is not colorable, so the check can never pass.
        let g = generators::complete(4);
        let lists = ListAssignment::uniform(4, 3);
        let out = pipeline_color(&g, &lists, &generous(), 6, 1).unwrap();
        let PipelineOutcome::Exhausted { violations_per_round } = out else { panic!("K4 is not 3-colorable") };
        assert_eq!(violations_per_round.len(), 6);
        assert!(violations_per_round.iter().all(|&v| v > 0));
    }
}
