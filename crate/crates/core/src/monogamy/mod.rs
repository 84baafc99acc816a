//! Monogamy-weight analysis of tripartite (and chained multipartite) states.

mod chain;
mod copies;
mod weight;

pub use chain::{chain_bound, ChainLevel, ChainReport, LevelOrdering, CHAIN_TOL};
pub use copies::{
    copies_min_oracle, copies_min_ratio, copies_min_w_formula, copies_w_formula,
    oracle_power_negativity, CopyMin, CopyModel, CopyReport, CopyStep, DEFAULT_COPY_CAP,
};
pub use weight::{
    alpha_threshold, ckw_check, classify_region, classify_weight, compare_measures, k_tradeoff,
    monogamy_weight, monogamy_weight_with_tol, smallest_integer_alpha, weight_c_schmidt,
    weight_tau_schmidt, AlphaMin, CkwCheck, MonogamyOrdering, MonogamyReport, Region, Weight,
    CKW_TOL, DEFAULT_TOL,
};

use serde::Serialize;

use crate::error::{MonolabError, Result};
use crate::measures::{measure_eval_routed, Bipartition, MeasureId, Route, StateRef};
use crate::states::PureState;

/// `(E_{A|BC}, E_AB, E_AC)` of a three-party pure state, with the evaluation
/// route of each entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triple {
    pub e_total: f64,
    pub e_ab: f64,
    pub e_ac: f64,
    pub routes: [Route; 3],
}

impl Triple {
    pub fn report(&self) -> Result<MonogamyReport> {
        monogamy_weight(self.e_total, self.e_ab, self.e_ac)
    }
}

fn require_three(psi: &PureState) -> Result<()> {
    if psi.party_count() != 3 {
        return Err(MonolabError::InvalidSubsystems(format!(
            "expected a 3-party state, got {} parties",
            psi.party_count()
        )));
    }
    Ok(())
}

/// `E_{A|BC}` of a three-party pure state.
pub fn global_value(psi: &PureState, m: MeasureId) -> Result<(f64, Route)> {
    require_three(psi)?;
    measure_eval_routed(m, StateRef::Pure(psi), &Bipartition::single(0, 3)?)
}

/// `E` of the reduced state on parties `{0, other}`.
pub fn pair_value(psi: &PureState, m: MeasureId, other: usize) -> Result<(f64, Route)> {
    let rho = psi.reduced(&[0, other])?;
    measure_eval_routed(m, StateRef::Mixed(&rho), &Bipartition::single(0, 2)?)
}

pub fn measure_triple(psi: &PureState, m: MeasureId) -> Result<Triple> {
    let (e_total, r0) = global_value(psi, m)?;
    let (e_ab, r1) = pair_value(psi, m, 1)?;
    let (e_ac, r2) = pair_value(psi, m, 2)?;
    Ok(Triple {
        e_total,
        e_ab,
        e_ac,
        routes: [r0, r1, r2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureKind;
    use crate::states::{named_state, schmidt_state, NamedState, SchmidtParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn w3_concurrence_weight() {
        let w = named_state(&NamedState::W3).unwrap();
        let t = measure_triple(&w, MeasureId::base(MeasureKind::Concurrence)).unwrap();
        assert_eq!(
            t.routes,
            [Route::PureSpectrum, Route::Wootters, Route::Wootters]
        );
        let r = t.report().unwrap();
        assert!((r.mu.finite().unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-9);
        assert_eq!(r.region, Region::Yellow);
    }

    #[test]
    fn qutrit_pair_tangle_not_computable() {
        let q = named_state(&NamedState::QutritAntisym).unwrap();
        let m = MeasureId::base(MeasureKind::Tangle);
        assert!((global_value(&q, m).unwrap().0 - 4.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            pair_value(&q, m, 1),
            Err(MonolabError::NotComputable(_))
        ));
    }

    #[test]
    fn closed_forms_match_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = SchmidtParams::random(&mut rng, true);
            let psi = schmidt_state(&p);
            let tau = measure_triple(&psi, MeasureId::base(MeasureKind::Tangle)).unwrap();
            let c = measure_triple(&psi, MeasureId::base(MeasureKind::Concurrence)).unwrap();
            let mu_t = tau.report().unwrap().mu.finite().unwrap();
            let mu_c = c.report().unwrap().mu.finite().unwrap();
            assert!((mu_t - weight_tau_schmidt(&p).unwrap()).abs() < 1e-8);
            assert!((mu_c - weight_c_schmidt(&p).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_wrong_party_count() {
        let w4 = named_state(&NamedState::W(4)).unwrap();
        assert!(measure_triple(&w4, MeasureId::base(MeasureKind::Tangle)).is_err());
    }
}
