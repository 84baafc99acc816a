//! Dense complex linear algebra for small composite systems.
//!
//! Matrices are stored row-major. Subsystem indices follow the usual
//! tensor-product convention: the first subsystem is the most significant
//! digit of a basis index, so `|abc⟩` sits at `a·d_b·d_c + b·d_c + c`.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{MonolabError, Result};

/// Largest Hilbert-space dimension any single operator or state may have.
pub const DEFAULT_DIM_CAP: usize = 1 << 16;

/// Absolute tolerance used for every Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues smaller than this in magnitude are treated as exact zeros.
pub const EIGEN_CLIP: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(MonolabError::Shape(format!("empty {rows}x{cols} matrix")));
        }
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(MonolabError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The projector-like outer product `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(MonolabError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MonolabError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise difference `|a_ij - b_ij|`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |a_ij - conj(a_ji)|`, or infinity for a non-square matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MonolabError::NotAnOperator {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_hermitian(&self) -> Result<()> {
        self.require_square()?;
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(MonolabError::NotHermitian { defect });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Ordered subsystem dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(MonolabError::InvalidInput("empty dimension list".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(MonolabError::InvalidInput(format!(
                "subsystem dimension {d} < 2"
            )));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(MonolabError::DimensionCap {
                requested: usize::MAX,
                cap: DEFAULT_DIM_CAP,
            })?;
        Ok(Self(dims))
    }

    pub fn qubits(n: usize) -> Self {
        Self(vec![2; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Row-major strides: the last subsystem varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for i in (0..self.0.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.0[i + 1];
        }
        strides
    }

    pub fn check_cap(&self, cap: usize) -> Result<()> {
        let total = self.total();
        if total > cap {
            return Err(MonolabError::DimensionCap {
                requested: total,
                cap,
            });
        }
        Ok(())
    }

    /// Subsystems not in `subset`, ascending.
    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.0.len()).filter(|i| !subset.contains(i)).collect()
    }

    /// Dimensions of the listed subsystems, in the listed order.
    pub fn select(&self, subset: &[usize]) -> Vec<usize> {
        subset.iter().map(|&i| self.0[i]).collect()
    }

    fn validate_subset(&self, subset: &[usize], allow_empty: bool) -> Result<()> {
        if subset.is_empty() && !allow_empty {
            return Err(MonolabError::InvalidSubsystems("empty selection".into()));
        }
        for (k, &s) in subset.iter().enumerate() {
            if s >= self.0.len() {
                return Err(MonolabError::InvalidSubsystems(format!(
                    "subsystem {s} out of range for {} subsystems",
                    self.0.len()
                )));
            }
            if subset[..k].contains(&s) {
                return Err(MonolabError::InvalidSubsystems(format!(
                    "subsystem {s} listed twice"
                )));
            }
        }
        Ok(())
    }
}

/// Offsets into the full index space for every joint configuration of
/// `subset`, enumerated with the first listed subsystem most significant.
pub(crate) fn subsystem_offsets(dims: &Dims, subset: &[usize]) -> Vec<usize> {
    let strides = dims.strides();
    let mut offsets = vec![0usize];
    for &s in subset {
        let d = dims.0[s];
        let stride = strides[s];
        offsets = offsets
            .iter()
            .flat_map(|&o| (0..d).map(move |digit| o + digit * stride))
            .collect();
    }
    offsets
}

fn check_operator_dims(rho: &ComplexMatrix, dims: &Dims) -> Result<()> {
    rho.require_square()?;
    if dims.total() != rho.rows() {
        return Err(MonolabError::Shape(format!(
            "dims {:?} do not match a {}x{} operator",
            dims.as_slice(),
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_capped(a, b, DEFAULT_DIM_CAP)
}

/// Kronecker product, refusing results whose row or column count exceeds `cap`.
pub fn kron_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r <= cap && c <= cap => (r, c),
        (r, c) => {
            return Err(MonolabError::DimensionCap {
                requested: r.unwrap_or(usize::MAX).max(c.unwrap_or(usize::MAX)),
                cap,
            })
        }
    };
    let mut data = Vec::with_capacity(rows * cols);
    for ar in 0..a.rows {
        for br in 0..b.rows {
            for ac in 0..a.cols {
                let x = a[(ar, ac)];
                data.extend(b.data[br * b.cols..(br + 1) * b.cols].iter().map(|y| x * y));
            }
        }
    }
    Ok(ComplexMatrix { rows, cols, data })
}

/// Kronecker product of two state vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Reduced operator on the subsystems in `keep`, output ordered ascending.
pub fn partial_trace(rho: &ComplexMatrix, dims: &Dims, keep: &[usize]) -> Result<ComplexMatrix> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    reduce_ordered(rho, dims, &sorted)
}

/// Like [`partial_trace`] but the output factors follow the order of `keep`.
pub fn reduce_ordered(rho: &ComplexMatrix, dims: &Dims, keep: &[usize]) -> Result<ComplexMatrix> {
    check_operator_dims(rho, dims)?;
    dims.validate_subset(keep, false)?;
    let traced = dims.complement(keep);
    let keep_off = subsystem_offsets(dims, keep);
    let trace_off = subsystem_offsets(dims, &traced);
    let n = keep_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, &ka) in keep_off.iter().enumerate() {
        for (b, &kb) in keep_off.iter().enumerate() {
            out[(a, b)] = trace_off.iter().map(|&t| rho[(ka + t, kb + t)]).sum();
        }
    }
    Ok(out)
}

/// Reduced density operator of the pure state `psi` on `keep` (in the given
/// order), computed as `M M†` with `M` the (kept × traced) reshaping of `psi`.
pub fn reduce_pure(psi: &[Complex64], dims: &Dims, keep: &[usize]) -> Result<ComplexMatrix> {
    if psi.len() != dims.total() {
        return Err(MonolabError::Shape(format!(
            "{} amplitudes for dims {:?}",
            psi.len(),
            dims.as_slice()
        )));
    }
    dims.validate_subset(keep, false)?;
    let traced = dims.complement(keep);
    let keep_off = subsystem_offsets(dims, keep);
    let trace_off = subsystem_offsets(dims, &traced);
    let (n, t) = (keep_off.len(), trace_off.len());
    let mut m = vec![ZERO; n * t];
    for (a, &ka) in keep_off.iter().enumerate() {
        for (j, &tj) in trace_off.iter().enumerate() {
            m[a * t + j] = psi[ka + tj];
        }
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..n {
        let row_a = &m[a * t..(a + 1) * t];
        for b in a..n {
            let row_b = &m[b * t..(b + 1) * t];
            let v: Complex64 = row_a.iter().zip(row_b).map(|(x, y)| x * y.conj()).sum();
            out[(a, b)] = v;
            out[(b, a)] = v.conj();
        }
    }
    Ok(out)
}

/// Transpose on the listed subsystems. The map only permutes entries, so
/// applying it twice returns the input bit for bit.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &Dims,
    subsystems: &[usize],
) -> Result<ComplexMatrix> {
    check_operator_dims(rho, dims)?;
    dims.validate_subset(subsystems, true)?;
    let strides = dims.strides();
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (mut r2, mut c2) = (r, c);
            for &s in subsystems {
                let (d, st) = (dims.0[s], strides[s]);
                let dr = (r / st) % d;
                let dc = (c / st) % d;
                r2 = r2 - dr * st + dc * st;
                c2 = c2 - dc * st + dr * st;
            }
            out[(r2, c2)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// Zero out round-off-sized eigenvalues before any square root is taken.
pub fn clip_small(x: f64) -> f64 {
    if x.abs() < EIGEN_CLIP {
        0.0
    } else {
        x
    }
}

/// Eigenvalues (descending) and matching unit eigenvectors of a Hermitian matrix.
pub fn hermitian_eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    m.require_hermitian()?;
    let n = m.rows();
    let mat = DMatrix::from_row_slice(n, n, m.as_slice());
    let eig = SymmetricEigen::new(mat);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Ok((values, vectors))
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.require_hermitian()?;
    let n = m.rows();
    let mat = DMatrix::from_row_slice(n, n, m.as_slice());
    let mut values: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .into_iter()
        .map(|x| clip_small(x).abs())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_projector() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s), c(0.0), c(0.0), c(s)])
    }

    fn w_state() -> Vec<Complex64> {
        let a = 1.0 / 3f64.sqrt();
        let mut v = vec![c(0.0); 8];
        for i in [4, 2, 1] {
            v[i] = c(a);
        }
        v
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));

        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let k = kron(&p0, &p1).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_rectangular() {
        let a = ComplexMatrix::from_fn(2, 3, |r, c| Complex64::new((r * 3 + c + 1) as f64, 0.5));
        let b = ComplexMatrix::from_fn(3, 2, |r, c| Complex64::new(-((r * 2 + c) as f64), 1.0));
        let k = kron(&a, &b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k[(0, 0)], a[(0, 0)] * b[(0, 0)]);
        // (i1*3 + i2, j1*2 + j2) = a[i1,j1] b[i2,j2]
        for (i1, i2, j1, j2) in [(1, 2, 2, 1), (0, 1, 1, 0), (1, 0, 0, 1)] {
            assert_eq!(k[(i1 * 3 + i2, j1 * 2 + j2)], a[(i1, j1)] * b[(i2, j2)]);
        }
    }

    #[test]
    fn kron_cap() {
        let big = ComplexMatrix::identity(300);
        let err = kron(&big, &big).unwrap_err();
        assert!(matches!(
            err,
            MonolabError::DimensionCap {
                requested: 90000,
                ..
            }
        ));
        assert!(kron_capped(&ComplexMatrix::identity(4), &ComplexMatrix::identity(4), 8).is_err());
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell_projector();
        let dims = Dims::qubits(2);
        let ra = partial_trace(&rho, &dims, &[0]).unwrap();
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(ra.max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn product_marginal_factorizes() {
        let rho = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.7),
            (1, 1) => c(0.3),
            (0, 1) => Complex64::new(0.1, 0.2),
            _ => Complex64::new(0.1, -0.2),
        });
        let sigma = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c(1.0 / 3.0)
            } else {
                Complex64::new(0.0, 0.05 * (j as f64 - i as f64))
            }
        });
        let joint = kron(&rho, &sigma).unwrap();
        let dims = Dims::new(vec![2, 3]).unwrap();
        let back = partial_trace(&joint, &dims, &[0]).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-15);
        let back_b = partial_trace(&joint, &dims, &[1]).unwrap();
        assert!(back_b.max_abs_diff(&sigma) < 1e-15);
    }

    #[test]
    fn w_marginal_spectrum() {
        let psi = w_state();
        let dims = Dims::qubits(3);
        let full = ComplexMatrix::outer(&psi);
        let ra = partial_trace(&full, &dims, &[0]).unwrap();
        let ev = hermitian_eigenvalues(&ra).unwrap();
        assert!((ev[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((ev[1] - 1.0 / 3.0).abs() < 1e-14);
        let via_pure = reduce_pure(&psi, &dims, &[0]).unwrap();
        assert!(via_pure.max_abs_diff(&ra) < 1e-15);
    }

    #[test]
    fn reduce_ordered_permutes_factors() {
        let psi = w_state();
        let dims = Dims::qubits(3);
        let full = ComplexMatrix::outer(&psi);
        let ab = reduce_ordered(&full, &dims, &[0, 1]).unwrap();
        let ba = reduce_ordered(&full, &dims, &[1, 0]).unwrap();
        // swapping the two factors conjugates by SWAP
        let swap = [0usize, 2, 1, 3];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(ab[(swap[r], swap[c])], ba[(r, c)]);
            }
        }
    }

    #[test]
    fn invalid_subsystem_selection() {
        let rho = bell_projector();
        let dims = Dims::qubits(2);
        assert!(matches!(
            partial_trace(&rho, &dims, &[]),
            Err(MonolabError::InvalidSubsystems(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &dims, &[2]),
            Err(MonolabError::InvalidSubsystems(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &dims, &[0, 0]),
            Err(MonolabError::InvalidSubsystems(_))
        ));
    }

    #[test]
    fn partial_transpose_of_product() {
        let rho = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.6),
            (1, 1) => c(0.4),
            (0, 1) => Complex64::new(0.2, 0.1),
            _ => Complex64::new(0.2, -0.1),
        });
        let sigma = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.5),
            (1, 1) => c(0.5),
            (0, 1) => Complex64::new(0.0, 0.3),
            _ => Complex64::new(0.0, -0.3),
        });
        let joint = kron(&rho, &sigma).unwrap();
        let pt = partial_transpose(&joint, &Dims::qubits(2), &[1]).unwrap();
        let expected = kron(&rho, &sigma.transpose()).unwrap();
        assert!(pt.max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn partial_transpose_is_involution() {
        let m = ComplexMatrix::from_fn(12, 12, |r, c| {
            Complex64::new((r * 7 + c) as f64 * 0.1, (r as f64) - (c as f64))
        });
        let dims = Dims::new(vec![2, 3, 2]).unwrap();
        for subset in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let once = partial_transpose(&m, &dims, &subset).unwrap();
            let twice = partial_transpose(&once, &dims, &subset).unwrap();
            assert_eq!(twice, m);
        }
    }

    #[test]
    fn partial_transpose_rejects_rectangular() {
        let m = ComplexMatrix::zeros(2, 4);
        assert!(matches!(
            partial_transpose(&m, &Dims::qubits(1), &[0]),
            Err(MonolabError::NotAnOperator { .. })
        ));
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let pt = partial_transpose(&bell_projector(), &Dims::qubits(2), &[1]).unwrap();
        let ev = hermitian_eigenvalues(&pt).unwrap();
        assert!((ev[3] + 0.5).abs() < 1e-14);
        for &v in &ev[..3] {
            assert!((v - 0.5).abs() < 1e-14);
        }
        assert!((trace_norm(&pt).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_cases() {
        assert!(
            (trace_norm(&ComplexMatrix::from_real_diagonal(&[3.0, -4.0])).unwrap() - 7.0).abs()
                < 1e-15
        );
        assert!((trace_norm(&bell_projector()).unwrap() - 1.0).abs() < 1e-14);
        let not_herm = ComplexMatrix::from_fn(2, 2, |i, j| if i < j { c(1.0) } else { c(0.0) });
        assert!(matches!(
            trace_norm(&not_herm),
            Err(MonolabError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigenvalue_cases() {
        let third = ComplexMatrix::identity(3).scale(1.0 / 3.0);
        for v in hermitian_eigenvalues(&third).unwrap() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(
            hermitian_eigenvalues(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0])).unwrap(),
            vec![1.0, 0.0]
        );
    }

    #[test]
    fn eigh_reconstructs() {
        let n = 9;
        let a = ComplexMatrix::from_fn(n, n, |r, c| {
            Complex64::new(
                ((r * 31 + c * 17) % 11) as f64 - 5.0,
                ((r * 13 + c * 7) % 5) as f64 - 2.0,
            )
        });
        let h = a.add(&a.adjoint()).unwrap();
        let (vals, vecs) = hermitian_eigh(&h).unwrap();
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let mut rebuilt = ComplexMatrix::zeros(n, n);
        for (v, u) in vals.iter().zip(&vecs) {
            rebuilt = rebuilt.add(&ComplexMatrix::outer(u).scale(*v)).unwrap();
        }
        let resid = rebuilt.sub(&h).unwrap().frobenius_norm() / h.frobenius_norm();
        assert!(resid < 1e-9, "residual {resid}");
    }

    #[test]
    fn dims_validation() {
        assert!(Dims::new(vec![2, 1]).is_err());
        assert!(Dims::new(vec![]).is_err());
        assert_eq!(Dims::new(vec![2, 3, 4]).unwrap().strides(), vec![12, 4, 1]);
        assert!(Dims::qubits(17).check_cap(DEFAULT_DIM_CAP).is_err());
        assert!(Dims::qubits(16).check_cap(DEFAULT_DIM_CAP).is_ok());
    }
}
