//! Numerical convex roof: minimize `Σ p_i E(ψ_i)` over pure-state
//! decompositions of a density matrix.
//!
//! Every decomposition of length `k ≥ rank` is `w_i = Σ_j U_ij √λ_j |e_j⟩`
//! for a `k × rank` isometry `U` (Hughston–Jozsa–Wootters). `U` is
//! parametrized by an unconstrained complex `k × rank` matrix whose columns are
//! Gram–Schmidt orthonormalized, so every parameter vector is feasible and the
//! reconstruction `Σ w_i w_i† = ρ` holds by construction.
//!
//! The search is a multi-start Nelder–Mead: restart 0 begins at the
//! eigendecomposition, the others at seeded random isometries. Each restart
//! owns its RNG and simplex; inside a restart the simplex is rebuilt around the
//! incumbent whenever it collapses, until the evaluation budget is spent.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{MonolabError, Result};
use crate::linalg::{self, clip_small, ComplexMatrix};

/// Largest operator dimension accepted by [`convex_roof`].
pub const MAX_ROOF_DIM: usize = 16;

const INFEASIBLE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct RoofOptions {
    /// Decomposition length; `None` means twice the rank.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Objective evaluations allowed per restart.
    pub max_evals: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 8,
            max_evals: 2000,
            tol: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoofResult {
    /// Best average found; an upper bound on the true convex roof.
    pub value: f64,
    /// `(p_i, ψ_i)` pairs with `Σ p_i |ψ_i⟩⟨ψ_i| = ρ`.
    pub decomposition: Vec<(f64, Vec<Complex64>)>,
    /// Average measure of the eigendecomposition.
    pub eigen_average: f64,
    /// No restart met the simplex tolerance before its budget ran out.
    pub budget_exhausted: bool,
    pub evaluations: usize,
}

struct Problem<'a, F> {
    /// Subnormalized eigenvectors `√λ_j |e_j⟩`.
    vectors: Vec<Vec<Complex64>>,
    k: usize,
    measure: &'a F,
}

impl<F> Problem<'_, F>
where
    F: Fn(&[Complex64]) -> f64,
{
    fn rank(&self) -> usize {
        self.vectors.len()
    }

    fn param_len(&self) -> usize {
        2 * self.k * self.rank()
    }

    fn identity_params(&self) -> Vec<f64> {
        let r = self.rank();
        let mut x = vec![0.0; self.param_len()];
        for j in 0..r {
            x[2 * (j * r + j)] = 1.0;
        }
        x
    }

    /// Columns of the parameter matrix, orthonormalized; `None` if rank-deficient.
    fn isometry(&self, x: &[f64]) -> Option<Vec<Vec<Complex64>>> {
        let (k, r) = (self.k, self.rank());
        let mut cols: Vec<Vec<Complex64>> = (0..r)
            .map(|j| {
                (0..k)
                    .map(|i| Complex64::new(x[2 * (i * r + j)], x[2 * (i * r + j) + 1]))
                    .collect()
            })
            .collect();
        for j in 0..r {
            for prev in 0..j {
                let proj: Complex64 = cols[prev]
                    .iter()
                    .zip(&cols[j])
                    .map(|(p, c)| p.conj() * c)
                    .sum();
                let (head, tail) = cols.split_at_mut(j);
                for (c, p) in tail[0].iter_mut().zip(&head[prev]) {
                    *c -= proj * p;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm.is_nan() || norm <= 1e-10 {
                return None;
            }
            for c in &mut cols[j] {
                *c /= norm;
            }
        }
        Some(cols)
    }

    fn decomposition(&self, x: &[f64]) -> Option<Vec<(f64, Vec<Complex64>)>> {
        let cols = self.isometry(x)?;
        let dim = self.vectors[0].len();
        let mut out = Vec::with_capacity(self.k);
        for i in 0..self.k {
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            for (col, v) in cols.iter().zip(&self.vectors) {
                let u = col[i];
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi += u * vi;
                }
            }
            let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
            if p > 1e-15 {
                let s = p.sqrt();
                for z in &mut w {
                    *z /= s;
                }
                out.push((p, w));
            }
        }
        Some(out)
    }

    fn objective(&self, x: &[f64]) -> f64 {
        match self.decomposition(x) {
            Some(dec) => dec.iter().map(|(p, psi)| p * (self.measure)(psi)).sum(),
            None => INFEASIBLE,
        }
    }
}

struct Outcome {
    x: Vec<f64>,
    f: f64,
    evals: usize,
    converged: bool,
}

/// Nelder–Mead with standard coefficients, rebuilding the simplex around the
/// incumbent each time it converges until `max_evals` is spent.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: Vec<f64>,
    step: f64,
    max_evals: usize,
    tol: f64,
) -> Outcome {
    let n = x0.len();
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut best_x = x0.clone();
    let mut best_f = eval(&x0, &mut evals);
    let mut converged = false;
    let mut step = step;

    while evals + n < max_evals {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        let start_f = best_f;
        let mut round_converged = false;
        while evals < max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 <= tol {
                round_converged = true;
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|d| simplex[..n].iter().map(|(x, _)| x[d]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = along(1.0);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(2.0);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[n].1 {
                    let xc = along(0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(-0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let x_best = simplex[0].0.clone();
                    for (x, fx) in simplex.iter_mut().skip(1) {
                        for (xi, bi) in x.iter_mut().zip(&x_best) {
                            *xi = bi + 0.5 * (*xi - bi);
                        }
                        *fx = eval(x, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_f {
            best_f = simplex[0].1;
            best_x = simplex[0].0.clone();
        }
        if round_converged {
            converged = true;
            if start_f - best_f <= tol {
                // a fresh simplex found nothing new: shrink the probe scale
                step *= 0.25;
                if step < 1e-6 {
                    break;
                }
            }
        }
    }
    Outcome {
        x: best_x,
        f: best_f,
        evals,
        converged,
    }
}

/// Convex roof of `pure_measure` over decompositions of `rho` (dimension at
/// most [`MAX_ROOF_DIM`]). `pure_measure` receives normalized vectors.
pub fn convex_roof<F>(
    rho: &ComplexMatrix,
    pure_measure: F,
    opts: &RoofOptions,
) -> Result<RoofResult>
where
    F: Fn(&[Complex64]) -> f64,
{
    if !rho.is_square() {
        return Err(MonolabError::NotAnOperator {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    if rho.rows() > MAX_ROOF_DIM {
        return Err(MonolabError::DimensionCap {
            requested: rho.rows(),
            cap: MAX_ROOF_DIM,
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(MonolabError::InvalidDensity(format!("trace {tr}")));
    }
    let (vals, vecs) = linalg::hermitian_eigh(rho)?;
    if vals.last().is_some_and(|&v| v < -1e-10) {
        return Err(MonolabError::InvalidDensity(
            "not positive semidefinite".into(),
        ));
    }
    let support: Vec<(f64, Vec<Complex64>)> = vals
        .into_iter()
        .zip(vecs)
        .map(|(v, u)| (clip_small(v).max(0.0), u))
        .filter(|(v, _)| *v > 0.0)
        .collect();
    let eigen_average: f64 = support.iter().map(|(p, u)| p * pure_measure(u)).sum();
    let eigen_dec: Vec<(f64, Vec<Complex64>)> = support.clone();

    if support.len() == 1 {
        return Ok(RoofResult {
            value: eigen_average,
            decomposition: eigen_dec,
            eigen_average,
            budget_exhausted: false,
            evaluations: 1,
        });
    }

    let rank = support.len();
    let k = opts.ensemble_size.unwrap_or(2 * rank).max(rank);
    let problem = Problem {
        vectors: support
            .iter()
            .map(|(p, u)| u.iter().map(|z| z * p.sqrt()).collect())
            .collect(),
        k,
        measure: &pure_measure,
    };
    let objective = |x: &[f64]| problem.objective(x);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluations = 0;
    let mut any_converged = false;
    for restart in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(
            opts.seed
                .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(restart as u64 + 1)),
        );
        let (x0, step) = if restart == 0 {
            (problem.identity_params(), 0.5)
        } else {
            let x: Vec<f64> = (0..problem.param_len())
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            (x, 0.5)
        };
        let out = nelder_mead(&objective, x0, step, opts.max_evals, opts.tol);
        evaluations += out.evals;
        any_converged |= out.converged;
        if best.as_ref().is_none_or(|(f, _)| out.f < *f) {
            best = Some((out.f, out.x));
        }
    }

    let (best_f, best_x) = best.expect("at least one restart");
    let (value, decomposition) = match problem.decomposition(&best_x) {
        Some(dec) if best_f <= eigen_average => (best_f, dec),
        _ => (eigen_average, eigen_dec),
    };
    Ok(RoofResult {
        value,
        decomposition,
        eigen_average,
        budget_exhausted: !any_converged,
        evaluations,
    })
}
