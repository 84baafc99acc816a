//! Pure states, density matrices and the constructors used throughout the
//! crate: the five-amplitude three-qubit Schmidt family, named states,
//! Haar-random states and tensor powers.
//!
//! A [`PureState`] carries *physical* subsystem dimensions plus a grouping of
//! those subsystems into logical *parties*. Freshly built states have one
//! subsystem per party; [`tensor_power`] keeps the party count fixed and
//! assigns every copy of party `p` to the same group, so cuts written in terms
//! of parties address the collective `A₁…A_m | rest` bipartition directly.

mod spec;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{MonolabError, Result};
use crate::linalg::{self, ComplexMatrix, Dims, DEFAULT_DIM_CAP, HERMITIAN_TOL};

pub use spec::{parse_label, NamedState, StateSpec};

/// Normalization tolerance for states and Schmidt parameters.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: Dims,
    parties: Vec<Vec<usize>>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: Dims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(MonolabError::Shape(format!(
                "{} amplitudes for dims {:?}",
                amplitudes.len(),
                dims.as_slice()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(MonolabError::NotNormalized { norm_sq });
        }
        let parties = (0..dims.len()).map(|i| vec![i]).collect();
        Ok(Self {
            amplitudes,
            dims,
            parties,
        })
    }

    /// Normalizes `amplitudes` first; fails only for a zero or non-finite vector.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>, dims: Dims) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(MonolabError::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes, dims)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Physical subsystem dimensions.
    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    /// Physical subsystems belonging to each logical party.
    pub fn parties(&self) -> &[Vec<usize>] {
        &self.parties
    }

    pub fn party_count(&self) -> usize {
        self.parties.len()
    }

    pub fn party_dim(&self, party: usize) -> usize {
        self.parties[party]
            .iter()
            .map(|&s| self.dims.as_slice()[s])
            .product()
    }

    pub fn party_dims(&self) -> Vec<usize> {
        (0..self.party_count()).map(|p| self.party_dim(p)).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    fn physical_subsystems(&self, parties: &[usize]) -> Result<Vec<usize>> {
        let n = self.party_count();
        let mut out = Vec::new();
        for (k, &p) in parties.iter().enumerate() {
            if p >= n {
                return Err(MonolabError::InvalidSubsystems(format!(
                    "party {p} out of range for {n} parties"
                )));
            }
            if parties[..k].contains(&p) {
                return Err(MonolabError::InvalidSubsystems(format!(
                    "party {p} listed twice"
                )));
            }
            out.extend_from_slice(&self.parties[p]);
        }
        if out.is_empty() {
            return Err(MonolabError::InvalidSubsystems("empty selection".into()));
        }
        Ok(out)
    }

    /// Reduced state on the listed parties, factors in the listed order.
    pub fn reduced(&self, parties: &[usize]) -> Result<DensityMatrix> {
        let physical = self.physical_subsystems(parties)?;
        let matrix = linalg::reduce_pure(&self.amplitudes, &self.dims, &physical)?;
        let dims = Dims::new(parties.iter().map(|&p| self.party_dim(p)).collect())?;
        Ok(DensityMatrix { matrix, dims })
    }

    /// `|ψ⟩⟨ψ|` with one factor per party.
    pub fn density(&self) -> Result<DensityMatrix> {
        let all: Vec<usize> = (0..self.party_count()).collect();
        self.reduced(&all)
    }

    /// `self ⊗ other`, with `other`'s parties appended after `self`'s.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        self.tensor_capped(other, DEFAULT_DIM_CAP)
    }

    pub fn tensor_capped(&self, other: &PureState, cap: usize) -> Result<PureState> {
        let mut dims = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        let dims = Dims::new(dims)?;
        dims.check_cap(cap)?;
        let shift = self.dims.len();
        let mut parties = self.parties.clone();
        parties.extend(
            other
                .parties
                .iter()
                .map(|g| g.iter().map(|&s| s + shift).collect()),
        );
        Ok(PureState {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
            dims,
            parties,
        })
    }

    /// Basis product state with the given digit per party.
    pub fn basis(dims: Dims, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(dims.as_slice()).any(|(d, n)| d >= n) {
            return Err(MonolabError::InvalidInput(format!(
                "basis digits {digits:?} do not fit dims {:?}",
                dims.as_slice()
            )));
        }
        let idx = digits
            .iter()
            .zip(dims.strides())
            .map(|(d, s)| d * s)
            .sum::<usize>();
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.total()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::new(amps, dims)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator with one tensor
/// factor per party.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Dims,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        if !matrix.is_square() {
            return Err(MonolabError::NotAnOperator {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if matrix.rows() != dims.total() {
            return Err(MonolabError::Shape(format!(
                "dims {:?} do not match a {}x{} operator",
                dims.as_slice(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(MonolabError::InvalidDensity(format!(
                "hermiticity defect {defect:.3e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(MonolabError::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = linalg::hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -HERMITIAN_TOL {
            return Err(MonolabError::InvalidDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix, dims })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduced state on the listed parties, factors in the listed order.
    pub fn reduced(&self, parties: &[usize]) -> Result<DensityMatrix> {
        let matrix = linalg::reduce_ordered(&self.matrix, &self.dims, parties)?;
        let dims = Dims::new(self.dims.select(parties))?;
        Ok(Self { matrix, dims })
    }
}

/// Amplitudes `λ₀..λ₄` and phase `φ` of
/// `λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtParams {
    lambda: [f64; 5],
    phi: f64,
}

impl SchmidtParams {
    pub fn new(lambda: [f64; 5], phi: f64) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite() || *l < 0.0) || !phi.is_finite() {
            return Err(MonolabError::InvalidInput(format!(
                "Schmidt amplitudes must be finite and nonnegative: {lambda:?}, phi {phi}"
            )));
        }
        let norm_sq: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(MonolabError::NotNormalized { norm_sq });
        }
        Ok(Self { lambda, phi })
    }

    pub fn lambda(&self) -> [f64; 5] {
        self.lambda
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `λ₂ ≥ λ₃ ≥ λ₄`, the ordering the closed-form weights assume.
    pub fn is_canonical(&self) -> bool {
        self.lambda[2] >= self.lambda[3] && self.lambda[3] >= self.lambda[4]
    }

    /// Uniform on the simplex of squared amplitudes, `φ` uniform on `[0, 2π)`.
    /// With `canonical`, the tail `λ₂, λ₃, λ₄` is sorted descending.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, canonical: bool) -> Self {
        let mut weights = [0.0f64; 5];
        for w in &mut weights {
            let e: f64 = Exp1.sample(rng);
            *w = e;
        }
        let total: f64 = weights.iter().sum();
        let mut lambda = weights.map(|w| (w / total).sqrt());
        if canonical {
            lambda[2..].sort_by(|a, b| b.total_cmp(a));
        }
        let phi = rng.random::<f64>() * TAU;
        Self { lambda, phi }
    }

    /// Same as [`random`](Self::random) with `λ₄` forced to zero (W-type slice).
    pub fn random_w_type<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut weights = [0.0f64; 4];
        for w in &mut weights {
            let e: f64 = Exp1.sample(rng);
            *w = e;
        }
        let total: f64 = weights.iter().sum();
        let l = weights.map(|w| (w / total).sqrt());
        let (hi, lo) = if l[2] >= l[3] {
            (l[2], l[3])
        } else {
            (l[3], l[2])
        };
        let phi = rng.random::<f64>() * TAU;
        Self {
            lambda: [l[0], l[1], hi, lo, 0.0],
            phi,
        }
    }
}

pub fn schmidt_state(p: &SchmidtParams) -> PureState {
    let [l0, l1, l2, l3, l4] = p.lambda;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b000] = Complex64::new(l0, 0.0);
    amps[0b100] = Complex64::from_polar(l1, p.phi);
    amps[0b101] = Complex64::new(l2, 0.0);
    amps[0b110] = Complex64::new(l3, 0.0);
    amps[0b111] = Complex64::new(l4, 0.0);
    PureState {
        amplitudes: amps,
        dims: Dims::qubits(3),
        parties: vec![vec![0], vec![1], vec![2]],
    }
}

pub fn named_state(label: &NamedState) -> Result<PureState> {
    named_state_capped(label, DEFAULT_DIM_CAP)
}

pub fn named_state_capped(label: &NamedState, cap: usize) -> Result<PureState> {
    let re = |x: f64| Complex64::new(x, 0.0);
    match label {
        NamedState::W3 => named_state_capped(&NamedState::W(3), cap),
        NamedState::Ghz3 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            named_state_capped(
                &NamedState::GhzClass {
                    n: 3,
                    weights: vec![s, s],
                },
                cap,
            )
        }
        NamedState::QutritAntisym => {
            let a = 1.0 / 6f64.sqrt();
            let mut amps = vec![re(0.0); 27];
            // levels 1..3 relabelled to 0..2
            for (digits, sign) in [
                ([0, 1, 2], 1.0),
                ([0, 2, 1], -1.0),
                ([1, 2, 0], 1.0),
                ([1, 0, 2], -1.0),
                ([2, 0, 1], 1.0),
                ([2, 1, 0], -1.0),
            ] {
                amps[digits[0] * 9 + digits[1] * 3 + digits[2]] = re(sign * a);
            }
            PureState::new(amps, Dims::new(vec![3, 3, 3])?)
        }
        NamedState::W(n) => {
            let n = *n;
            if n < 2 {
                return Err(MonolabError::InvalidInput(format!("W({n}) needs n >= 2")));
            }
            let dims = qubit_dims_capped(n, cap)?;
            let a = 1.0 / (n as f64).sqrt();
            let mut amps = vec![re(0.0); dims.total()];
            for k in 0..n {
                amps[1 << k] = re(a);
            }
            PureState::new(amps, dims)
        }
        NamedState::Product(n) => {
            let dims = qubit_dims_capped(*n, cap)?;
            PureState::basis(dims, &vec![0; *n])
        }
        NamedState::GhzClass { n, weights } => {
            let n = *n;
            if n < 2 {
                return Err(MonolabError::InvalidInput(format!(
                    "GHZ_CLASS needs n >= 2, got {n}"
                )));
            }
            if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(MonolabError::InvalidInput(
                    "GHZ_CLASS weights must be finite and nonnegative".into(),
                ));
            }
            let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
            if (norm_sq - 1.0).abs() > NORM_TOL {
                return Err(MonolabError::NotNormalized { norm_sq });
            }
            let d = weights.len().max(2);
            let total = d.checked_pow(n as u32).filter(|&t| t <= cap).ok_or(
                MonolabError::DimensionCap {
                    requested: d.saturating_pow(n.min(u32::MAX as usize) as u32),
                    cap,
                },
            )?;
            let dims = Dims::new(vec![d; n])?;
            // |i i … i⟩ sits at i·(d^{n-1} + … + 1)
            let repunit = (total - 1) / (d - 1);
            let mut amps = vec![re(0.0); total];
            for (i, &w) in weights.iter().enumerate() {
                amps[i * repunit] = re(w);
            }
            PureState::new(amps, dims)
        }
    }
}

fn qubit_dims_capped(n: usize, cap: usize) -> Result<Dims> {
    if n >= usize::BITS as usize || (1usize << n) > cap {
        return Err(MonolabError::DimensionCap {
            requested: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            cap,
        });
    }
    Dims::new(vec![2; n])
}

/// Complex-Gaussian vector, normalized; deterministic in `seed`.
pub fn haar_random_pure(dims: &Dims, seed: u64, cap: usize) -> Result<PureState> {
    dims.check_cap(cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_with_rng(dims, &mut rng)
}

pub fn haar_with_rng<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Result<PureState> {
    let amps: Vec<Complex64> = (0..dims.total())
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    PureState::from_unnormalized(amps, dims.clone())
}

/// `s^{⊗m}`. Physical subsystems are laid out copy by copy; party `p` of the
/// result groups the `m` copies of the original party `p`.
pub fn tensor_power(s: &PureState, m: usize, cap: usize) -> Result<PureState> {
    if m == 0 {
        return Err(MonolabError::InvalidInput("copy count must be >= 1".into()));
    }
    let base = s.dims.total();
    let total = u32::try_from(m)
        .ok()
        .and_then(|m32| base.checked_pow(m32))
        .filter(|&t| t <= cap)
        .ok_or(MonolabError::DimensionCap {
            requested: u32::try_from(m)
                .map(|m32| base.saturating_pow(m32))
                .unwrap_or(usize::MAX),
            cap,
        })?;
    let mut amps = s.amplitudes.clone();
    for _ in 1..m {
        amps = linalg::kron_vec(&amps, &s.amplitudes);
    }
    debug_assert_eq!(amps.len(), total);
    let n_phys = s.dims.len();
    let dims = Dims::new(
        std::iter::repeat_n(s.dims.as_slice(), m)
            .flatten()
            .copied()
            .collect(),
    )?;
    let parties = s
        .parties
        .iter()
        .map(|group| {
            (0..m)
                .flat_map(|copy| group.iter().map(move |&sub| copy * n_phys + sub))
                .collect()
        })
        .collect();
    Ok(PureState {
        amplitudes: amps,
        dims,
        parties,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;

    #[test]
    fn schmidt_ghz_and_product() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = schmidt_state(&SchmidtParams::new([s, 0.0, 0.0, 0.0, s], 0.0).unwrap());
        let named = named_state(&NamedState::Ghz3).unwrap();
        for (a, b) in ghz.amplitudes().iter().zip(named.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let product = schmidt_state(&SchmidtParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 1.0).unwrap());
        assert_eq!(product.amplitudes()[0], Complex64::new(1.0, 0.0));
        let ra = product.reduced(&[0]).unwrap();
        assert!((ra.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn schmidt_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = SchmidtParams::random(&mut rng, true);
        let psi = schmidt_state(&p);
        for (i, a) in psi.amplitudes().iter().enumerate() {
            if ![0, 4, 5, 6, 7].contains(&i) {
                assert_eq!(*a, Complex64::new(0.0, 0.0));
            }
        }
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_w_representative_spectrum() {
        let p = SchmidtParams::new(
            [
                (2.0f64 / 3.0).sqrt(),
                0.0,
                1.0 / 6f64.sqrt(),
                1.0 / 6f64.sqrt(),
                0.0,
            ],
            0.0,
        )
        .unwrap();
        let ra = schmidt_state(&p).reduced(&[0]).unwrap();
        let ev = hermitian_eigenvalues(ra.matrix()).unwrap();
        assert!((ev[0] - 2.0 / 3.0).abs() < 1e-14 && (ev[1] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn schmidt_rejects_unnormalized() {
        assert!(matches!(
            SchmidtParams::new([0.5, 0.5, 0.0, 0.0, 0.0], 0.0),
            Err(MonolabError::NotNormalized { .. })
        ));
        assert!(SchmidtParams::new([1.0, -0.0, 0.0, 0.0, -1e-3], 0.0).is_err());
    }

    #[test]
    fn random_schmidt_is_canonical_and_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = SchmidtParams::random(&mut rng, true);
            assert!(p.is_canonical());
            assert!(SchmidtParams::new(p.lambda(), p.phi()).is_ok());
            let w = SchmidtParams::random_w_type(&mut rng);
            assert!(w.is_canonical() && w.lambda()[4] == 0.0);
        }
    }

    #[test]
    fn w3_amplitudes() {
        let w = named_state(&NamedState::W3).unwrap();
        let a = 1.0 / 3f64.sqrt();
        for (i, z) in w.amplitudes().iter().enumerate() {
            let expected = if [0b100, 0b010, 0b001].contains(&i) {
                a
            } else {
                0.0
            };
            assert_eq!(z.re, expected);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn qutrit_antisym_signs() {
        let q = named_state(&NamedState::QutritAntisym).unwrap();
        let amps = q.amplitudes();
        let a = 1.0 / 6f64.sqrt();
        let idx = |x: usize, y: usize, z: usize| x * 9 + y * 3 + z;
        assert_eq!(amps[idx(0, 1, 2)].re, a);
        assert_eq!(amps[idx(0, 2, 1)].re, -a);
        assert_eq!(amps[idx(1, 2, 0)].re, a);
        assert_eq!(amps[idx(1, 0, 2)].re, -a);
        assert_eq!(amps[idx(2, 0, 1)].re, a);
        assert_eq!(amps[idx(2, 1, 0)].re, -a);
        assert_eq!(amps.iter().filter(|z| z.norm() > 0.0).count(), 6);
        // antisymmetric under swapping any two parties
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    assert_eq!(amps[idx(x, y, z)], -amps[idx(y, x, z)]);
                    assert_eq!(amps[idx(x, y, z)], -amps[idx(x, z, y)]);
                }
            }
        }
    }

    #[test]
    fn ghz_class_four_party() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = named_state(&NamedState::GhzClass {
            n: 4,
            weights: vec![s, s],
        })
        .unwrap();
        assert_eq!(g.amplitudes().len(), 16);
        assert!((g.amplitudes()[0].re - s).abs() < 1e-16);
        assert!((g.amplitudes()[15].re - s).abs() < 1e-16);
        let three = named_state(&NamedState::GhzClass {
            n: 3,
            weights: vec![0.6, 0.0, 0.8],
        })
        .unwrap();
        assert_eq!(three.dims().as_slice(), &[3, 3, 3]);
        assert_eq!(three.amplitudes()[26].re, 0.8);
        assert!(matches!(
            named_state(&NamedState::GhzClass {
                n: 4,
                weights: vec![1.0, 1.0]
            }),
            Err(MonolabError::NotNormalized { .. })
        ));
    }

    #[test]
    fn haar_is_deterministic_and_capped() {
        let dims = Dims::qubits(3);
        let a = haar_random_pure(&dims, 42, DEFAULT_DIM_CAP).unwrap();
        let b = haar_random_pure(&dims, 42, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(a, b);
        let c = haar_random_pure(&dims, 43, DEFAULT_DIM_CAP).unwrap();
        assert_ne!(a, c);
        assert!(haar_random_pure(&Dims::qubits(5), 0, 16).is_err());
    }

    #[test]
    fn tensor_power_basics() {
        let w = named_state(&NamedState::W3).unwrap();
        assert_eq!(tensor_power(&w, 1, DEFAULT_DIM_CAP).unwrap(), w);
        let w2 = tensor_power(&w, 2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(w2.amplitudes().len(), 64);
        assert!((w2.norm_sqr() - 1.0).abs() < 1e-14);
        assert_eq!(w2.parties(), &[vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert_eq!(w2.party_dims(), vec![4, 4, 4]);
        assert!(matches!(
            tensor_power(&w, 6, DEFAULT_DIM_CAP),
            Err(MonolabError::DimensionCap {
                requested: 262144,
                ..
            })
        ));
        assert!(tensor_power(&w, 0, DEFAULT_DIM_CAP).is_err());
        assert!(tensor_power(&w, usize::MAX, DEFAULT_DIM_CAP).is_err());
    }

    #[test]
    fn tensor_power_marginal_matches_single_copy() {
        let psi = haar_random_pure(&Dims::new(vec![2, 3, 2]).unwrap(), 5, DEFAULT_DIM_CAP).unwrap();
        let single = psi.reduced(&[0, 2]).unwrap();
        let p3 = tensor_power(&psi, 3, DEFAULT_DIM_CAP).unwrap();
        // copy 1's parties A, C: physical subsystems 3 and 5
        let m = linalg::reduce_pure(p3.amplitudes(), p3.dims(), &[3, 5]).unwrap();
        assert!(m.max_abs_diff(single.matrix()) < 1e-12);
    }

    #[test]
    fn density_matrix_validation() {
        let ok = DensityMatrix::new(ComplexMatrix::identity(4).scale(0.25), Dims::qubits(2));
        assert!(ok.is_ok());
        let bad_trace = DensityMatrix::new(ComplexMatrix::identity(4), Dims::qubits(2));
        assert!(bad_trace.is_err());
        let not_psd = DensityMatrix::new(
            ComplexMatrix::from_real_diagonal(&[1.5, -0.5]),
            Dims::qubits(1),
        );
        assert!(not_psd.is_err());
    }

    #[test]
    fn reduction_of_density_matches_pure_reduction() {
        let psi = haar_random_pure(&Dims::qubits(4), 77, DEFAULT_DIM_CAP).unwrap();
        let full = psi.density().unwrap();
        let via_full = full.reduced(&[2, 0]).unwrap();
        let direct = psi.reduced(&[2, 0]).unwrap();
        assert!(via_full.matrix().max_abs_diff(direct.matrix()) < 1e-14);
    }
}
