//! Bipartite entanglement measures: tangle, concurrence and negativity.
//!
//! Pure inputs are handled through the spectrum of a reduced state. Mixed
//! inputs go through Wootters' closed form (two qubits), the partial
//! transpose (negativity, any dimension), or are rejected. The numerical
//! convex roof lives in [`roof`] and is used as an independent check.

pub mod roof;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MonolabError, Result};
use crate::linalg::{self, clip_small, ComplexMatrix};
use crate::states::{DensityMatrix, PureState};

pub use roof::{convex_roof, RoofOptions, RoofResult};

/// Largest eigenvalue at or above `1 - PURE_TOL` marks a mixed input as pure.
pub const PURE_TOL: f64 = 1e-10;

/// Negativities in `[-NEG_CLIP, 0)` are reported as exactly zero.
pub const NEG_CLIP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MeasureKind {
    Tangle,
    Concurrence,
    Negativity,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Tangle => "TANGLE",
            MeasureKind::Concurrence => "CONCURRENCE",
            MeasureKind::Negativity => "NEGATIVITY",
        })
    }
}

impl FromStr for MeasureKind {
    type Err = MonolabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tangle" | "tau" => Ok(MeasureKind::Tangle),
            "concurrence" | "c" => Ok(MeasureKind::Concurrence),
            "negativity" | "n" => Ok(MeasureKind::Negativity),
            other => Err(MonolabError::Parse(format!("unknown measure `{other}`"))),
        }
    }
}

/// A base measure raised to a positive power `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureId {
    pub kind: MeasureKind,
    pub alpha: f64,
}

impl MeasureId {
    pub fn new(kind: MeasureKind, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(MonolabError::InvalidInput(format!(
                "measure power must be positive, got {alpha}"
            )));
        }
        Ok(Self { kind, alpha })
    }

    pub fn base(kind: MeasureKind) -> Self {
        Self { kind, alpha: 1.0 }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha == 1.0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}^{}", self.kind, self.alpha)
        }
    }
}

/// Split of parties `0..n` into a nonempty left set and its nonempty complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: &[usize], parties: usize) -> Result<Self> {
        let mut l = left.to_vec();
        l.sort_unstable();
        l.dedup();
        if l.len() != left.len() {
            return Err(MonolabError::InvalidSubsystems(format!(
                "duplicate party in cut {left:?}"
            )));
        }
        if l.is_empty() || l.len() >= parties {
            return Err(MonolabError::InvalidSubsystems(format!(
                "cut {left:?} must be a proper nonempty subset of {parties} parties"
            )));
        }
        if let Some(&p) = l.iter().find(|&&p| p >= parties) {
            return Err(MonolabError::InvalidSubsystems(format!(
                "party {p} out of range for {parties} parties"
            )));
        }
        let right = (0..parties).filter(|p| !l.contains(p)).collect();
        Ok(Self { left: l, right })
    }

    /// `{party} | rest`.
    pub fn single(party: usize, parties: usize) -> Result<Self> {
        Self::new(&[party], parties)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn parties(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl StateRef<'_> {
    fn party_count(&self) -> usize {
        match self {
            StateRef::Pure(p) => p.party_count(),
            StateRef::Mixed(r) => r.party_count(),
        }
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    PureSpectrum,
    Wootters,
    EffectivelyPure,
    PartialTranspose,
}

fn check_cut(parties: usize, cut: &Bipartition) -> Result<()> {
    if cut.parties() != parties {
        return Err(MonolabError::InvalidSubsystems(format!(
            "cut over {} parties applied to a {parties}-party state",
            cut.parties()
        )));
    }
    Ok(())
}

/// Reduced state on whichever side of the cut has the smaller dimension.
fn smaller_side(psi: &PureState, cut: &Bipartition) -> Result<ComplexMatrix> {
    check_cut(psi.party_count(), cut)?;
    let dim = |side: &[usize]| side.iter().map(|&p| psi.party_dim(p)).product::<usize>();
    let side = if dim(cut.left()) <= dim(cut.right()) {
        cut.left()
    } else {
        cut.right()
    };
    Ok(psi.reduced(side)?.matrix().clone())
}

/// `τ = 2(1 - Tr ρ_A²)`.
pub fn tangle_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    let rho = smaller_side(psi, cut)?;
    let purity: f64 = rho.as_slice().iter().map(|z| z.norm_sqr()).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0))
}

pub fn concurrence_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    Ok(tangle_pure(psi, cut)?.sqrt())
}

/// Pure-state negativity from the Schmidt spectrum: `(Σ √p_i)² - 1`, which
/// equals `‖(|ψ⟩⟨ψ|)^{T_B}‖₁ - 1`.
pub fn negativity_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    let rho = smaller_side(psi, cut)?;
    let root_sum: f64 = linalg::hermitian_eigenvalues(&rho)?
        .into_iter()
        .map(|p| clip_small(p).max(0.0).sqrt())
        .sum();
    Ok(clip_negativity(root_sum * root_sum - 1.0))
}

/// `‖ρ^{T_B}‖₁ - 1` with the transpose taken on the right side of the cut.
pub fn negativity_mixed(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    check_cut(rho.party_count(), cut)?;
    let pt = linalg::partial_transpose(rho.matrix(), rho.dims(), cut.right())?;
    Ok(clip_negativity(linalg::trace_norm(&pt)? - 1.0))
}

fn clip_negativity(n: f64) -> f64 {
    if (-NEG_CLIP..0.0).contains(&n) {
        0.0
    } else {
        n.max(0.0)
    }
}

pub fn negativity(state: StateRef<'_>, cut: &Bipartition) -> Result<f64> {
    match state {
        StateRef::Pure(psi) => negativity_pure(psi, cut),
        StateRef::Mixed(rho) => negativity_mixed(rho, cut),
    }
}

fn sigma_y_sigma_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = linalg::hermitian_eigh(m)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (v, u) in vals.iter().zip(&vecs) {
        let s = clip_small(*v).max(0.0).sqrt();
        if s > 0.0 {
            out = out.add(&ComplexMatrix::outer(u).scale(s))?;
        }
    }
    Ok(out)
}

fn hermitian_part(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(m.add(&m.adjoint())?.scale(0.5))
}

/// Wootters' closed form `max(0, λ₁ - λ₂ - λ₃ - λ₄)`, where `λ_i²` are the
/// eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`. They are obtained from the
/// Hermitian similar matrix `√ρ ρ̃ √ρ`.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(MonolabError::TwoQubitOnly(rho.dims().as_slice().to_vec()));
    }
    let m = rho.matrix();
    let yy = sigma_y_sigma_y();
    let tilde = yy.matmul(&m.conj())?.matmul(&yy)?;
    let root = psd_sqrt(m)?;
    let r = hermitian_part(&root.matmul(&tilde)?.matmul(&root)?)?;
    let lambdas: Vec<f64> = linalg::hermitian_eigenvalues(&r)?
        .into_iter()
        .map(|e| clip_small(e).max(0.0).sqrt())
        .collect();
    Ok((lambdas[0] - lambdas[1..].iter().sum::<f64>()).max(0.0))
}

pub fn tangle_mixed_2q(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence_wootters(rho)?;
    Ok(c * c)
}

/// Dominant eigenvector when the input is pure to within [`PURE_TOL`].
fn effectively_pure(rho: &DensityMatrix) -> Result<Option<PureState>> {
    let (vals, mut vecs) = linalg::hermitian_eigh(rho.matrix())?;
    if vals[0] < 1.0 - PURE_TOL {
        return Ok(None);
    }
    let top = vecs.swap_remove(0);
    Ok(Some(PureState::from_unnormalized(top, rho.dims().clone())?))
}

fn pure_value(kind: MeasureKind, psi: &PureState, cut: &Bipartition) -> Result<f64> {
    match kind {
        MeasureKind::Tangle => tangle_pure(psi, cut),
        MeasureKind::Concurrence => concurrence_pure(psi, cut),
        MeasureKind::Negativity => negativity_pure(psi, cut),
    }
}

/// Evaluates `E^α` on the given cut and reports the path taken.
pub fn measure_eval_routed(
    m: MeasureId,
    state: StateRef<'_>,
    cut: &Bipartition,
) -> Result<(f64, Route)> {
    check_cut(state.party_count(), cut)?;
    let (value, route) = match (m.kind, state) {
        (kind, StateRef::Pure(psi)) => (pure_value(kind, psi, cut)?, Route::PureSpectrum),
        (MeasureKind::Negativity, StateRef::Mixed(rho)) => {
            (negativity_mixed(rho, cut)?, Route::PartialTranspose)
        }
        (kind, StateRef::Mixed(rho)) => {
            if rho.dims().as_slice() == [2, 2] {
                let c = concurrence_wootters(rho)?;
                let v = if kind == MeasureKind::Tangle {
                    c * c
                } else {
                    c
                };
                (v, Route::Wootters)
            } else if let Some(psi) = effectively_pure(rho)? {
                (pure_value(kind, &psi, cut)?, Route::EffectivelyPure)
            } else {
                return Err(MonolabError::NotComputable(format!(
                    "{kind} of a mixed state with dims {:?}",
                    rho.dims().as_slice()
                )));
            }
        }
    };
    Ok((value.powf(m.alpha), route))
}

pub fn measure_eval(m: MeasureId, state: StateRef<'_>, cut: &Bipartition) -> Result<f64> {
    measure_eval_routed(m, state, cut).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Dims, DEFAULT_DIM_CAP};
    use crate::states::{haar_random_pure, named_state, tensor_power, NamedState};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![re(s), re(0.0), re(0.0), re(s)], Dims::qubits(2)).unwrap()
    }

    fn a_cut(n: usize) -> Bipartition {
        Bipartition::single(0, n).unwrap()
    }

    #[test]
    fn tangle_cases() {
        let product = PureState::basis(Dims::qubits(2), &[0, 1]).unwrap();
        assert_eq!(tangle_pure(&product, &a_cut(2)).unwrap(), 0.0);
        assert!((tangle_pure(&bell(), &a_cut(2)).unwrap() - 1.0).abs() < 1e-15);
        let w = named_state(&NamedState::W3).unwrap();
        assert!((tangle_pure(&w, &a_cut(3)).unwrap() - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn concurrence_cases() {
        assert!((concurrence_pure(&bell(), &a_cut(2)).unwrap() - 1.0).abs() < 1e-15);
        let w = named_state(&NamedState::W3).unwrap();
        assert!((concurrence_pure(&w, &a_cut(3)).unwrap() - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
        let q = named_state(&NamedState::QutritAntisym).unwrap();
        assert!((concurrence_pure(&q, &a_cut(3)).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn wootters_cases() {
        let mixed =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(0.25), Dims::qubits(2)).unwrap();
        assert_eq!(concurrence_wootters(&mixed).unwrap(), 0.0);
        let b = bell().density().unwrap();
        assert!((concurrence_wootters(&b).unwrap() - 1.0).abs() < 1e-12);
        let w = named_state(&NamedState::W3).unwrap();
        let rab = w.reduced(&[0, 1]).unwrap();
        assert!((concurrence_wootters(&rab).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((tangle_mixed_2q(&rab).unwrap() - 4.0 / 9.0).abs() < 1e-12);
        let q = named_state(&NamedState::QutritAntisym).unwrap();
        assert!(matches!(
            concurrence_wootters(&q.reduced(&[0, 1]).unwrap()),
            Err(MonolabError::TwoQubitOnly(_))
        ));
    }

    #[test]
    fn negativity_cases() {
        let product = PureState::basis(Dims::qubits(3), &[1, 0, 1]).unwrap();
        assert_eq!(negativity_pure(&product, &a_cut(3)).unwrap(), 0.0);
        assert_eq!(
            negativity_mixed(&product.density().unwrap(), &a_cut(3)).unwrap(),
            0.0
        );
        let bb = tensor_power(&bell(), 2, DEFAULT_DIM_CAP).unwrap();
        assert!((negativity_pure(&bb, &a_cut(2)).unwrap() - 3.0).abs() < 1e-12);
        assert!((negativity_mixed(&bb.density().unwrap(), &a_cut(2)).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn negativity_routes_agree() {
        for seed in 0..20 {
            let psi = haar_random_pure(&Dims::new(vec![2, 3, 2]).unwrap(), seed, DEFAULT_DIM_CAP)
                .unwrap();
            for left in [vec![0], vec![1], vec![0, 2]] {
                let cut = Bipartition::new(&left, 3).unwrap();
                let a = negativity_pure(&psi, &cut).unwrap();
                let b = negativity_mixed(&psi.density().unwrap(), &cut).unwrap();
                assert!((a - b).abs() < 1e-10, "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dispatch_rules() {
        let q = named_state(&NamedState::QutritAntisym).unwrap();
        let rab = q.reduced(&[0, 1]).unwrap();
        let cut = a_cut(2);
        let c = MeasureId::base(MeasureKind::Concurrence);
        assert!(matches!(
            measure_eval(c, StateRef::Mixed(&rab), &cut),
            Err(MonolabError::NotComputable(_))
        ));
        assert!(measure_eval(
            MeasureId::base(MeasureKind::Negativity),
            StateRef::Mixed(&rab),
            &cut
        )
        .is_ok());

        // a pure state presented as a density matrix takes the effectively-pure path
        let rho = q.density().unwrap();
        let (v, route) = measure_eval_routed(c, StateRef::Mixed(&rho), &a_cut(3)).unwrap();
        assert_eq!(route, Route::EffectivelyPure);
        assert!((v - 2.0 / 3f64.sqrt()).abs() < 1e-10);

        let c5 = MeasureId::new(MeasureKind::Concurrence, 5.0).unwrap();
        let v5 = measure_eval(c5, StateRef::Pure(&q), &a_cut(3)).unwrap();
        assert!((v5 - (2.0 / 3f64.sqrt()).powi(5)).abs() < 1e-12);
        assert!((v5 - 2.0528).abs() < 1e-4);
        assert!(MeasureId::new(MeasureKind::Tangle, 0.0).is_err());
    }

    #[test]
    fn cut_must_match_state() {
        assert!(tangle_pure(&bell(), &a_cut(3)).is_err());
        assert!(Bipartition::new(&[0, 1], 2).is_err());
        assert!(Bipartition::new(&[], 2).is_err());
        assert!(Bipartition::new(&[3], 3).is_err());
        assert!(Bipartition::new(&[0, 0], 3).is_err());
        let cut = Bipartition::new(&[2, 0], 4).unwrap();
        assert_eq!(cut.left(), &[0, 2]);
        assert_eq!(cut.right(), &[1, 3]);
    }

    #[test]
    fn measure_names() {
        assert_eq!(
            "Concurrence".parse::<MeasureKind>().unwrap(),
            MeasureKind::Concurrence
        );
        assert!("entropy".parse::<MeasureKind>().is_err());
    }
}
