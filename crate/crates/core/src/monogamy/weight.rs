//! Monogamy weight `μ` in `E_{A|BC} = μ·E_small + E_large`, the region map,
//! CKW-type checks for `E^α`, and the α threshold.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{MonolabError, Result};
use crate::measures::MeasureId;
use crate::states::SchmidtParams;

/// Zero/equality tolerance for all monogamy-weight decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Slack at or above `-CKW_TOL` counts as the inequality holding.
pub const CKW_TOL: f64 = 1e-9;

/// `μ` itself, or the sentinel for a triple whose smaller pair value vanishes
/// (every `μ` reproduces `E_{A|BC}` up to that point, the weight is vacuous).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Finite(f64),
    Trivial,
}

impl Weight {
    pub fn finite(self) -> Option<f64> {
        match self {
            Weight::Finite(v) => Some(v),
            Weight::Trivial => None,
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Weight::Finite(v) => s.serialize_f64(*v),
            Weight::Trivial => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(v) => write!(f, "{v}"),
            Weight::Trivial => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    /// `μ ≥ 1`: the plain CKW inequality holds.
    Blue,
    /// `1/2 ≤ μ < 1`
    Orange,
    /// `1/3 ≤ μ < 1/2`
    Yellow,
    /// `0 < μ < 1/3`
    White,
    /// `μ = 0`: `E_{A|BC}` equals the larger pair value, smaller one nonzero.
    BoundaryNonmonogamous,
    /// Smaller pair value is zero.
    DegenerateTrivial,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Blue => "BLUE",
            Region::Orange => "ORANGE",
            Region::Yellow => "YELLOW",
            Region::White => "WHITE",
            Region::BoundaryNonmonogamous => "BOUNDARY_NONMONOGAMOUS",
            Region::DegenerateTrivial => "DEGENERATE_TRIVIAL",
        })
    }
}

/// Infimum α with `x₁^α + x₂^α ≤ 1`, or why there is none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMin {
    Finite(f64),
    /// A ratio reached 1, so no finite power separates the pair values.
    Unbounded,
    /// `E_{A|BC}` vanished and the ratios are undefined.
    Undefined,
}

impl AlphaMin {
    pub fn finite(self) -> Option<f64> {
        match self {
            AlphaMin::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Smallest integer power at or above the threshold.
    pub fn smallest_integer(self) -> Option<u64> {
        self.finite().map(smallest_integer_alpha)
    }
}

impl Serialize for AlphaMin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaMin::Finite(v) => s.serialize_f64(*v),
            AlphaMin::Unbounded => s.serialize_str("unbounded"),
            AlphaMin::Undefined => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub e_total: f64,
    pub e_ab: f64,
    pub e_ac: f64,
    pub mu: Weight,
    pub region: Region,
    pub alpha_min: AlphaMin,
    /// `k = E_{A|BC}/(1+μ)`: the point `(k, k)` on the trade-off line.
    pub k_tradeoff: Option<f64>,
}

impl MonogamyReport {
    /// `μ·min + max`, the right-hand side of the defining equality.
    pub fn reconstruct(&self) -> Option<f64> {
        let mu = self.mu.finite()?;
        Some(mu * self.e_ab.min(self.e_ac) + self.e_ab.max(self.e_ac))
    }
}

pub fn monogamy_weight(e_total: f64, e_ab: f64, e_ac: f64) -> Result<MonogamyReport> {
    monogamy_weight_with_tol(e_total, e_ab, e_ac, DEFAULT_TOL)
}

/// Solves `E_{A|BC} = μ·min(E_AB, E_AC) + max(E_AB, E_AC)` for `μ`.
pub fn monogamy_weight_with_tol(
    e_total: f64,
    e_ab: f64,
    e_ac: f64,
    tol: f64,
) -> Result<MonogamyReport> {
    for (name, v) in [("E_A|BC", e_total), ("E_AB", e_ab), ("E_AC", e_ac)] {
        if !v.is_finite() || v < 0.0 {
            return Err(MonolabError::NotEntanglementTriple(format!(
                "{name} = {v} is not a nonnegative number"
            )));
        }
    }
    let small = e_ab.min(e_ac);
    let large = e_ab.max(e_ac);
    if e_total < large - tol {
        return Err(MonolabError::NotEntanglementTriple(format!(
            "E_A|BC = {e_total} is below the larger pair value {large}"
        )));
    }
    let (mu, region) = if small <= tol {
        (Weight::Trivial, Region::DegenerateTrivial)
    } else if e_total <= large + tol {
        (Weight::Finite(0.0), Region::BoundaryNonmonogamous)
    } else {
        let mu = (e_total - large) / small;
        (
            Weight::Finite(mu),
            classify_region(snap_to_threshold(mu, tol))?,
        )
    };
    let alpha_min = if e_total > tol {
        alpha_threshold((small / e_total).min(1.0), (large / e_total).min(1.0))?
    } else {
        AlphaMin::Undefined
    };
    let k_tradeoff = mu.finite().map(|m| k_tradeoff(e_total, m));
    Ok(MonogamyReport {
        e_total,
        e_ab,
        e_ac,
        mu,
        region,
        alpha_min,
        k_tradeoff,
    })
}

fn snap_to_threshold(mu: f64, tol: f64) -> f64 {
    [1.0 / 3.0, 0.5, 1.0]
        .into_iter()
        .find(|t| (mu - t).abs() <= tol)
        .unwrap_or(mu)
}

/// Region of the `(E_AB, E_AC)` square for a weight `μ`; each band is closed
/// on the left.
pub fn classify_region(mu: f64) -> Result<Region> {
    if mu.is_nan() || mu < 0.0 {
        return Err(MonolabError::InvalidInput(format!(
            "negative monogamy weight {mu}"
        )));
    }
    Ok(if mu >= 1.0 {
        Region::Blue
    } else if mu >= 0.5 {
        Region::Orange
    } else if mu >= 1.0 / 3.0 {
        Region::Yellow
    } else if mu > 0.0 {
        Region::White
    } else {
        Region::BoundaryNonmonogamous
    })
}

pub fn classify_weight(mu: Weight) -> Result<Region> {
    match mu {
        Weight::Finite(m) => classify_region(m),
        Weight::Trivial => Ok(Region::DegenerateTrivial),
    }
}

/// `k` with `(E_{A|BC} - k)/k = μ`.
pub fn k_tradeoff(e_total: f64, mu: f64) -> f64 {
    e_total / (1.0 + mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CkwCheck {
    pub holds: bool,
    /// `E_{A|BC}^α - E_AB^α - E_AC^α`
    pub slack: f64,
}

pub fn ckw_check(e_total: f64, e_ab: f64, e_ac: f64, alpha: f64) -> CkwCheck {
    let slack = e_total.powf(alpha) - e_ab.powf(alpha) - e_ac.powf(alpha);
    CkwCheck {
        holds: slack >= -CKW_TOL,
        slack,
    }
}

/// Infimum `γ ≥ 0` with `x₁^γ + x₂^γ ≤ 1` (taking `0^γ = 0`), by bracket
/// doubling and bisection to `1e-10`.
pub fn alpha_threshold(x1: f64, x2: f64) -> Result<AlphaMin> {
    for x in [x1, x2] {
        if !(0.0..=1.0).contains(&x) {
            return Err(MonolabError::InvalidInput(format!(
                "ratio {x} outside [0, 1]"
            )));
        }
    }
    if x1 >= 1.0 || x2 >= 1.0 {
        return Ok(AlphaMin::Unbounded);
    }
    // with at most one positive ratio every γ > 0 already works
    if x1 == 0.0 || x2 == 0.0 {
        return Ok(AlphaMin::Finite(0.0));
    }
    let g = |gamma: f64| x1.powf(gamma) + x2.powf(gamma);
    let mut hi = 1.0;
    while g(hi) > 1.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Ok(AlphaMin::Unbounded);
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(AlphaMin::Finite(hi))
}

/// `⌈γ⌉`, absorbing bisection error just above an integer.
pub fn smallest_integer_alpha(gamma: f64) -> u64 {
    (gamma - 1e-9).ceil().max(0.0) as u64
}

fn canonical_ratios(p: &SchmidtParams) -> Result<(f64, f64)> {
    if !p.is_canonical() {
        return Err(MonolabError::InvalidInput(
            "closed-form weights need lambda2 >= lambda3 >= lambda4".into(),
        ));
    }
    let [_, _, l2, l3, l4] = p.lambda();
    if l3 <= 0.0 {
        return Err(MonolabError::WeightUndefined);
    }
    Ok((l2 / l3, l4 / l3))
}

/// Tangle weight of the Schmidt family: `1 + (λ₄/λ₃)²`.
pub fn weight_tau_schmidt(p: &SchmidtParams) -> Result<f64> {
    let (_, y) = canonical_ratios(p)?;
    Ok(1.0 + y * y)
}

/// Concurrence weight of the Schmidt family: `√(1 + x² + y²) - x` with
/// `x = λ₂/λ₃`, `y = λ₄/λ₃`.
pub fn weight_c_schmidt(p: &SchmidtParams) -> Result<f64> {
    let (x, y) = canonical_ratios(p)?;
    Ok(concurrence_weight_from_ratios(x, y))
}

pub(crate) fn concurrence_weight_from_ratios(x: f64, y: f64) -> f64 {
    // rationalized form of √(1+x²+y²) - x, stable for large x
    (1.0 + y * y) / ((1.0 + x * x + y * y).sqrt() + x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonogamyOrdering {
    /// The first measure has the higher monogamy score.
    FirstHigher,
    SecondHigher,
    Equivalent,
}

/// Orders two measures by their monogamy weights (higher `μ` ranks higher).
pub fn compare_measures(
    a: (MeasureId, Weight),
    b: (MeasureId, Weight),
) -> Result<MonogamyOrdering> {
    let (Some(mu_a), Some(mu_b)) = (a.1.finite(), b.1.finite()) else {
        return Err(MonolabError::Incomparable(format!(
            "{} has weight {}, {} has weight {}",
            a.0, a.1, b.0, b.1
        )));
    };
    Ok(match mu_a.total_cmp(&mu_b) {
        Ordering::Greater => MonogamyOrdering::FirstHigher,
        Ordering::Less => MonogamyOrdering::SecondHigher,
        Ordering::Equal => MonogamyOrdering::Equivalent,
    })
}
