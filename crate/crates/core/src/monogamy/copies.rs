//! Minimal number of tensor copies after which `E(ρ^{⊗m}_{A|BC}) ≥
//! E(ρ^{⊗m}_{AB}) + E(ρ^{⊗m}_{AC})` holds, under three models.

use serde::{Serialize, Serializer};

use crate::error::{MonolabError, Result};
use crate::measures::{negativity_mixed, negativity_pure, Bipartition};
use crate::states::{tensor_power, PureState};

/// Default search limit for the ratio and formula models.
pub const DEFAULT_COPY_CAP: usize = 64;

/// `L^m + M^m` is compared against `1 + RATIO_TOL`.
const RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CopyModel {
    /// `L^m + M^m ≤ 1` on the single-copy ratios.
    RatioLm,
    /// Closed-form W-state copy concurrences.
    PaperWFormula,
    /// Exact negativity of the tensor power.
    OracleNegativity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopyMin {
    Found(usize),
    NotFound { m_cap: usize },
}

impl CopyMin {
    pub fn found(self) -> Option<usize> {
        match self {
            CopyMin::Found(m) => Some(m),
            CopyMin::NotFound { .. } => None,
        }
    }
}

impl Serialize for CopyMin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CopyMin::Found(m) => s.serialize_u64(*m as u64),
            CopyMin::NotFound { m_cap } => s.serialize_str(&format!("not found <= {m_cap}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopyStep {
    pub m: usize,
    pub lhs: f64,
    pub rhs_sum: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CopyReport {
    pub model: CopyModel,
    pub m_min: CopyMin,
    pub per_m: Vec<CopyStep>,
    /// Set when the search stopped at the dimension cap rather than `m_cap`.
    pub cap_reached: bool,
}

fn search(
    model: CopyModel,
    m_cap: usize,
    mut step: impl FnMut(usize) -> Result<Option<CopyStep>>,
) -> Result<CopyReport> {
    let mut per_m = Vec::new();
    for m in 1..=m_cap {
        let Some(s) = step(m)? else {
            return Ok(CopyReport {
                model,
                m_min: CopyMin::NotFound { m_cap: m - 1 },
                per_m,
                cap_reached: true,
            });
        };
        per_m.push(s);
        if s.holds {
            return Ok(CopyReport {
                model,
                m_min: CopyMin::Found(m),
                per_m,
                cap_reached: false,
            });
        }
    }
    Ok(CopyReport {
        model,
        m_min: CopyMin::NotFound { m_cap },
        per_m,
        cap_reached: false,
    })
}

fn check_cap(m_cap: usize) -> Result<()> {
    if m_cap == 0 {
        return Err(MonolabError::InvalidInput("m_cap must be >= 1".into()));
    }
    Ok(())
}

/// Smallest `m` with `L^m + M^m ≤ 1`; `lhs` is 1 and `rhs_sum` is `L^m + M^m`.
pub fn copies_min_ratio(l: f64, m_ratio: f64, m_cap: usize) -> Result<CopyReport> {
    check_cap(m_cap)?;
    for x in [l, m_ratio] {
        if !(0.0..=1.0).contains(&x) {
            return Err(MonolabError::InvalidInput(format!(
                "ratio {x} outside [0, 1]"
            )));
        }
    }
    search(CopyModel::RatioLm, m_cap, |m| {
        let rhs_sum = l.powi(m as i32) + m_ratio.powi(m as i32);
        Ok(Some(CopyStep {
            m,
            lhs: 1.0,
            rhs_sum,
            holds: rhs_sum <= 1.0 + RATIO_TOL,
        }))
    })
}

/// `(C(W^{⊗m}_{A|BC}), C(ρ_AB^{⊗m}))` as `½[(1+4√2/3)^m − 1]` and
/// `½[(1+4/3)^m − 1]`.
pub fn copies_w_formula(m: usize) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(MonolabError::InvalidInput("copy count must be >= 1".into()));
    }
    let m = m as i32;
    let global = 0.5 * ((1.0 + 4.0 * 2f64.sqrt() / 3.0).powi(m) - 1.0);
    let pair = 0.5 * ((1.0 + 4.0 / 3.0f64).powi(m) - 1.0);
    Ok((global, pair))
}

pub fn copies_min_w_formula(m_cap: usize) -> Result<CopyReport> {
    check_cap(m_cap)?;
    search(CopyModel::PaperWFormula, m_cap, |m| {
        let (global, pair) = copies_w_formula(m)?;
        Ok(Some(CopyStep {
            m,
            lhs: global,
            rhs_sum: 2.0 * pair,
            holds: global >= 2.0 * pair,
        }))
    })
}

/// Negativity of `ψ^{⊗m}` across `cut`, with every party collecting its `m`
/// copies.
pub fn oracle_power_negativity(
    psi: &PureState,
    cut: &Bipartition,
    m: usize,
    dim_cap: usize,
) -> Result<f64> {
    negativity_pure(&tensor_power(psi, m, dim_cap)?, cut)
}

/// Negativity model on a three-party pure state: `N(ψ^{⊗m}_{A|BC})` against
/// `N(ρ_AB^{⊗m}) + N(ρ_AC^{⊗m})`, with `A = focus`. Stops with
/// `cap_reached` when the next power exceeds `dim_cap`.
pub fn copies_min_oracle(
    psi: &PureState,
    focus: usize,
    dim_cap: usize,
    m_cap: usize,
) -> Result<CopyReport> {
    check_cap(m_cap)?;
    if psi.party_count() != 3 {
        return Err(MonolabError::InvalidSubsystems(format!(
            "copy oracle needs a 3-party state, got {} parties",
            psi.party_count()
        )));
    }
    let cut = Bipartition::single(focus, 3)?;
    let others: Vec<usize> = cut.right().to_vec();
    let pair_cut = Bipartition::single(0, 2)?;
    search(CopyModel::OracleNegativity, m_cap, |m| {
        let power = match tensor_power(psi, m, dim_cap) {
            Ok(p) => p,
            Err(MonolabError::DimensionCap { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        // pair operators are (d_A d_X)^m square; check them against the cap too
        let pair_dims = others
            .iter()
            .map(|&o| power.party_dim(focus) * power.party_dim(o))
            .max()
            .unwrap_or(0);
        if pair_dims > dim_cap {
            return Ok(None);
        }
        let lhs = negativity_pure(&power, &cut)?;
        let mut rhs_sum = 0.0;
        for &o in &others {
            rhs_sum += negativity_mixed(&power.reduced(&[focus, o])?, &pair_cut)?;
        }
        Ok(Some(CopyStep {
            m,
            lhs,
            rhs_sum,
            holds: lhs >= rhs_sum - super::DEFAULT_TOL,
        }))
    })
}
