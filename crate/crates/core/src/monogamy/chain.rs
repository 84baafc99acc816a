//! Multipartite chain: peel `B_1, B_2, …` off `A|B_1…B_{N-1}` one level at a
//! time, applying the tripartite weight equality at each level, and collect
//! the resulting lower bound on `E_{A|B_1…B_{N-1}}`.
//!
//! Level `i` looks at the marginal on `A B_i … B_{N-1}` split as
//! `A | B_i | B_{i+1}…B_{N-1}`. When `E_{AB_i} ≥ E_{A|B_{i+1}…}` the level
//! is `Geq` and the weight multiplies the remainder; otherwise it is `Leq` and
//! the weight multiplies the pair term.

use serde::Serialize;

use super::weight::{monogamy_weight, Weight, DEFAULT_TOL};
use crate::error::{MonolabError, Result};
use crate::measures::{measure_eval_routed, Bipartition, MeasureId, Route, StateRef};
use crate::states::PureState;

/// `e_total ≥ bound_rhs - CHAIN_TOL` counts as the bound holding.
pub const CHAIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LevelOrdering {
    Geq,
    Leq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLevel {
    /// 1-based.
    pub level: usize,
    /// `E_{A|B_i…B_{N-1}}`
    pub e_level: f64,
    /// `E_{AB_i}`
    pub e_pair: f64,
    /// `E_{A|B_{i+1}…B_{N-1}}`
    pub e_rest: f64,
    /// Stored weight; 0 for degenerate levels.
    pub mu: f64,
    /// The smaller of `e_pair`, `e_rest` vanished.
    pub degenerate: bool,
    pub ordering: LevelOrdering,
    /// Route used for `e_level`.
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub measure: MeasureId,
    pub parties: usize,
    pub levels: Vec<ChainLevel>,
    /// `Γ_k = μ_1 ⋯ μ_k` over the stored weights.
    pub gamma: Vec<f64>,
    pub bound_rhs: f64,
    pub e_total: f64,
    /// `E_{AB_i}` for `i = 1..N-1`.
    pub pair_values: Vec<f64>,
    /// Number of leading `Geq` levels.
    pub pivot_m: usize,
    /// Orderings are all `Geq` followed by all `Leq`.
    pub split_ordering: bool,
    /// First level whose value could not be evaluated, when every pair value
    /// from there on vanishes and the chain was cut short.
    pub truncated_at: Option<usize>,
    pub holds: bool,
}

/// Runs the chain on an `N ≥ 3` party pure state with party 0 as `A`.
pub fn chain_bound(psi: &PureState, measure: MeasureId) -> Result<ChainReport> {
    let n = psi.party_count();
    if n < 3 {
        return Err(MonolabError::InvalidSubsystems(format!(
            "chain needs at least 3 parties, got {n}"
        )));
    }
    let pair_cut = Bipartition::single(0, 2)?;
    let pair_values = (1..n)
        .map(|b| {
            let rho = psi.reduced(&[0, b])?;
            measure_eval_routed(measure, StateRef::Mixed(&rho), &pair_cut)
                .map(|(v, _)| v)
                .map_err(|e| level_error(b, e))
        })
        .collect::<Result<Vec<f64>>>()?;

    // E_{A|B_i…B_{N-1}}, parties 0 and i..n of the global state
    let level_value = |i: usize| -> Result<(f64, Route)> {
        let cut = Bipartition::single(0, n - i + 1)?;
        if i == 1 {
            return measure_eval_routed(measure, StateRef::Pure(psi), &cut);
        }
        let keep: Vec<usize> = std::iter::once(0).chain(i..n).collect();
        let rho = psi.reduced(&keep)?;
        measure_eval_routed(measure, StateRef::Mixed(&rho), &cut)
    };

    let (e_total, first_route) = level_value(1).map_err(|e| level_error(1, e))?;
    let mut levels = Vec::new();
    let mut bound = 0.0;
    let mut coeff = 1.0;
    let mut truncated_at = None;
    let mut current = (e_total, first_route);
    for i in 1..=n - 2 {
        let e_pair = pair_values[i - 1];
        let (e_rest, next_route) = if i + 1 == n - 1 {
            (pair_values[n - 2], Route::PureSpectrum)
        } else {
            match level_value(i + 1) {
                Ok(v) => v,
                Err(_) if pair_values[i - 1..].iter().all(|&p| p <= DEFAULT_TOL) => {
                    // everything still to be added is zero
                    truncated_at = Some(i + 1);
                    bound += coeff * e_pair;
                    coeff = 0.0;
                    break;
                }
                Err(e) => return Err(level_error(i + 1, e)),
            }
        };
        let report = monogamy_weight(current.0, e_pair, e_rest).map_err(|e| level_error(i, e))?;
        let (mu, degenerate) = match report.mu {
            Weight::Finite(m) => (m, false),
            Weight::Trivial => (0.0, true),
        };
        let ordering = if e_pair >= e_rest {
            LevelOrdering::Geq
        } else {
            LevelOrdering::Leq
        };
        match ordering {
            LevelOrdering::Geq => {
                bound += coeff * e_pair;
                coeff *= mu;
            }
            LevelOrdering::Leq => bound += coeff * mu * e_pair,
        }
        levels.push(ChainLevel {
            level: i,
            e_level: current.0,
            e_pair,
            e_rest,
            mu,
            degenerate,
            ordering,
            route: current.1,
        });
        current = (e_rest, next_route);
    }
    if truncated_at.is_none() {
        bound += coeff * pair_values[n - 2];
    }

    let gamma = levels
        .iter()
        .scan(1.0, |g, l| {
            *g *= l.mu;
            Some(*g)
        })
        .collect();
    let pivot_m = levels
        .iter()
        .take_while(|l| l.ordering == LevelOrdering::Geq)
        .count();
    let split_ordering = levels[pivot_m..]
        .iter()
        .all(|l| l.ordering == LevelOrdering::Leq);
    Ok(ChainReport {
        measure,
        parties: n,
        levels,
        gamma,
        bound_rhs: bound,
        e_total,
        pair_values,
        pivot_m,
        split_ordering,
        truncated_at,
        holds: e_total >= bound - CHAIN_TOL,
    })
}

fn level_error(level: usize, e: MonolabError) -> MonolabError {
    match e {
        MonolabError::NotComputable(msg) => {
            MonolabError::NotComputable(format!("level {level}: {msg}"))
        }
        other => other,
    }
}
