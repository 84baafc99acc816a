//! Reproduction suite. Each group computes its observations once; rows are
//! then judged against their (possibly overridden) tolerances.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use monolab::measures::{
    concurrence_wootters, convex_roof, negativity_pure, Bipartition, MeasureKind, RoofOptions,
};
use monolab::monogamy::{
    chain_bound, copies_min_ratio, copies_min_w_formula, copies_w_formula, global_value,
    measure_triple, monogamy_weight, oracle_power_negativity, weight_c_schmidt, weight_tau_schmidt,
    CopyMin,
};
use monolab::states::{haar_with_rng, named_state, schmidt_state, NamedState, SchmidtParams};
use monolab::{ComplexMatrix, DensityMatrix, Dims, MeasureId, MonolabError, DEFAULT_DIM_CAP};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{ReportFormat, VerifyArgs};
use crate::commands::{emit, sample_rng, to_json};
use crate::error::{CliError, CliResult};

pub const GROUPS: [&str; 7] = [
    "weights",
    "closed-form",
    "qutrit",
    "ckw",
    "copies",
    "roof",
    "chain",
];

pub const TANGLE_SAMPLES: usize = 10_000;
pub const CLOSED_FORM_SAMPLES: usize = 1000;
pub const CKW_SAMPLES: usize = 1000;
pub const ROOF_SAMPLES: usize = 200;
pub const CHAIN_SAMPLES: usize = 200;

// stream namespaces so ensembles never share samples
const SALT_TANGLE: u64 = 0x7a6e_0001;
const SALT_SLICE: u64 = 0x7a6e_0002;
const SALT_CLOSED: u64 = 0x7a6e_0003;
const SALT_CKW: u64 = 0x7a6e_0004;
const SALT_ROOF: u64 = 0x7a6e_0005;
const SALT_CHAIN: u64 = 0x7a6e_0006;
const SALT_ORACLE: u64 = 0x7a6e_0007;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// `|observed - expected| ≤ tol`
    Close {
        observed: f64,
        expected: f64,
    },
    /// `observed ≥ bound - tol`
    AtLeast {
        observed: f64,
        bound: f64,
    },
    /// `observed ≤ bound + tol`
    AtMost {
        observed: f64,
        bound: f64,
    },
    Exact {
        observed: String,
        expected: String,
    },
    /// Reported, never judged.
    Info {
        observed: String,
        note: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub id: &'static str,
    pub group: &'static str,
    pub description: &'static str,
    pub tolerance: Option<f64>,
    #[serde(flatten)]
    pub check: Check,
    pub status: Status,
}

impl Row {
    fn judge(&mut self) {
        let tol = self.tolerance.unwrap_or(0.0);
        self.status = match &self.check {
            Check::Close { observed, expected } => pass((observed - expected).abs() <= tol),
            Check::AtLeast { observed, bound } => pass(*observed >= bound - tol),
            Check::AtMost { observed, bound } => pass(*observed <= bound + tol),
            Check::Exact { observed, expected } => pass(observed == expected),
            Check::Info { .. } => Status::Info,
        };
    }

    fn observed(&self) -> String {
        match &self.check {
            Check::Close { observed, .. }
            | Check::AtLeast { observed, .. }
            | Check::AtMost { observed, .. } => observed.to_string(),
            Check::Exact { observed, .. } | Check::Info { observed, .. } => observed.clone(),
        }
    }

    fn expected(&self) -> String {
        match &self.check {
            Check::Close { expected, .. } => expected.to_string(),
            Check::AtLeast { bound, .. } => format!(">= {bound}"),
            Check::AtMost { bound, .. } => format!("<= {bound}"),
            Check::Exact { expected, .. } => expected.clone(),
            Check::Info { note, .. } => note.clone(),
        }
    }
}

fn pass(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn row(
    id: &'static str,
    group: &'static str,
    description: &'static str,
    tolerance: Option<f64>,
    check: Check,
) -> Row {
    Row {
        id,
        group,
        description,
        tolerance,
        check,
        status: Status::Info,
    }
}

fn exact(observed: impl ToString, expected: impl ToString) -> Check {
    Check::Exact {
        observed: observed.to_string(),
        expected: expected.to_string(),
    }
}

type Res<T> = Result<T, MonolabError>;

fn base(kind: MeasureKind) -> MeasureId {
    MeasureId::base(kind)
}

fn schmidt_sample(seed: u64, salt: u64, i: usize, canonical: bool) -> SchmidtParams {
    SchmidtParams::random(&mut sample_rng(seed ^ salt, i as u64), canonical)
}

fn weights(seed: u64) -> Res<Vec<Row>> {
    let g = "weights";
    let w = named_state(&NamedState::W3)?;
    let r = measure_triple(&w, base(MeasureKind::Concurrence))?.report()?;
    let mu_c = r.mu.finite().unwrap_or(f64::NAN);

    let tangle_mu = |p: &SchmidtParams| -> Res<Option<f64>> {
        let t = measure_triple(&schmidt_state(p), base(MeasureKind::Tangle))?;
        Ok(t.report()?.mu.finite())
    };
    let min_mu = (0..TANGLE_SAMPLES)
        .into_par_iter()
        .map(|i| tangle_mu(&schmidt_sample(seed, SALT_TANGLE, i, true)))
        .collect::<Res<Vec<_>>>()?
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let slice_dev = (0..CLOSED_FORM_SAMPLES)
        .into_par_iter()
        .map(|i| {
            tangle_mu(&SchmidtParams::random_w_type(&mut sample_rng(
                seed ^ SALT_SLICE,
                i as u64,
            )))
        })
        .collect::<Res<Vec<_>>>()?
        .into_iter()
        .flatten()
        .map(|mu| (mu - 1.0).abs())
        .fold(0.0, f64::max);

    Ok(vec![
        row(
            "w3-mu-concurrence",
            g,
            "W3 concurrence weight mu_C = sqrt2 - 1",
            Some(1e-9),
            Check::Close {
                observed: mu_c,
                expected: 2f64.sqrt() - 1.0,
            },
        ),
        row(
            "w3-region",
            g,
            "W3 concurrence region",
            None,
            exact(r.region, "YELLOW"),
        ),
        row(
            "tangle-weight-min",
            g,
            "min mu_tau over 10^4 canonical Schmidt states",
            Some(1e-6),
            Check::AtLeast {
                observed: min_mu,
                bound: 1.0,
            },
        ),
        row(
            "tangle-w-slice",
            g,
            "max |mu_tau - 1| on the lambda4 = 0 slice",
            Some(1e-8),
            Check::AtMost {
                observed: slice_dev,
                bound: 0.0,
            },
        ),
    ])
}

fn closed_form(seed: u64) -> Res<Vec<Row>> {
    let g = "closed-form";
    let diffs = (0..CLOSED_FORM_SAMPLES)
        .into_par_iter()
        .map(|i| -> Res<(f64, f64)> {
            let p = schmidt_sample(seed, SALT_CLOSED, i, true);
            let psi = schmidt_state(&p);
            let tau = measure_triple(&psi, base(MeasureKind::Tangle))?.report()?;
            let c = measure_triple(&psi, base(MeasureKind::Concurrence))?.report()?;
            let d = |mu: Option<f64>, closed: Res<f64>| match (mu, closed) {
                (Some(m), Ok(v)) => (m - v).abs(),
                // λ3 = 0 has no closed form and a vanishing pair value
                _ => 0.0,
            };
            Ok((
                d(tau.mu.finite(), weight_tau_schmidt(&p)),
                d(c.mu.finite(), weight_c_schmidt(&p)),
            ))
        })
        .collect::<Res<Vec<_>>>()?;
    let max_t = diffs.iter().map(|d| d.0).fold(0.0, f64::max);
    let max_c = diffs.iter().map(|d| d.1).fold(0.0, f64::max);
    Ok(vec![
        row(
            "closed-form-tangle",
            g,
            "max |mu_tau pipeline - (1 + (l4/l3)^2)| over 1000 states",
            Some(1e-8),
            Check::AtMost {
                observed: max_t,
                bound: 0.0,
            },
        ),
        row(
            "closed-form-concurrence",
            g,
            "max |mu_C pipeline - f(l2/l3, l4/l3)| over 1000 states",
            Some(1e-8),
            Check::AtMost {
                observed: max_c,
                bound: 0.0,
            },
        ),
    ])
}

fn qutrit() -> Res<Vec<Row>> {
    let g = "qutrit";
    let q = named_state(&NamedState::QutritAntisym)?;
    let (c_total, _) = global_value(&q, base(MeasureKind::Concurrence))?;
    let (t_total, _) = global_value(&q, base(MeasureKind::Tangle))?;
    let rc = monogamy_weight(c_total, 1.0, 1.0)?;
    let rt = monogamy_weight(t_total, 1.0, 1.0)?;
    let alpha = rc
        .alpha_min
        .smallest_integer()
        .map_or_else(|| "none".to_string(), |a| a.to_string());
    Ok(vec![
        row("qutrit-concurrence-total", g, "C_A|BC from rho_A = I/3 equals 2/sqrt3", Some(1e-10),
            Check::Close { observed: c_total, expected: 2.0 / 3f64.sqrt() }),
        row("qutrit-alpha", g, "smallest integer alpha, concurrence, pair values 1,1 quoted", None,
            exact(alpha, 5)),
        row("qutrit-tangle-mu", g, "mu_tau with tau_A|BC = 4/3, pair values 1,1 quoted", Some(1e-9),
            Check::Close { observed: rt.mu.finite().unwrap_or(f64::NAN), expected: 1.0 / 3.0 }),
        row("qutrit-quoted-4/3", g, "quoted C_A|BC = 4/3 is the tangle value; mu = 1/3 and alpha = 5 hold for different measures", None,
            Check::Info {
                observed: format!("C = {c_total}, tau = {t_total}, mu_C = {}", rc.mu),
                note: "measure-inconsistent joint statement".into(),
            }),
    ])
}

fn ckw(seed: u64) -> Res<Vec<Row>> {
    let dims = Dims::qubits(3);
    let min_slack = (0..CKW_SAMPLES)
        .into_par_iter()
        .map(|i| -> Res<f64> {
            let psi = haar_with_rng(&dims, &mut sample_rng(seed ^ SALT_CKW, i as u64))?;
            let t = measure_triple(&psi, base(MeasureKind::Tangle))?;
            Ok(monolab::monogamy::ckw_check(t.e_total, t.e_ab, t.e_ac, 1.0).slack)
        })
        .collect::<Res<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(vec![row(
        "ckw-tangle-haar",
        "ckw",
        "min tau_A|BC - tau_AB - tau_AC over 1000 Haar 3-qubit states",
        Some(1e-8),
        Check::AtLeast {
            observed: min_slack,
            bound: 0.0,
        },
    )])
}

fn copies(seed: u64) -> Res<Vec<Row>> {
    let g = "copies";
    let formula = copies_min_w_formula(monolab::monogamy::DEFAULT_COPY_CAP)?;
    let (g1, p1) = copies_w_formula(1)?;
    let (g3, p3) = copies_w_formula(3)?;
    let r = 0.5f64.sqrt();
    let ratio = copies_min_ratio(r, r, monolab::monogamy::DEFAULT_COPY_CAP)?;

    // pure bipartite states, N(ψ^{⊗m}) against (1+N)^m - 1
    let mut worst: f64 = 0.0;
    for (i, dims) in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2], vec![2, 3]]
        .into_iter()
        .enumerate()
    {
        let psi = haar_with_rng(
            &Dims::new(dims)?,
            &mut sample_rng(seed ^ SALT_ORACLE, i as u64),
        )?;
        let cut = Bipartition::single(0, 2)?;
        let n = negativity_pure(&psi, &cut)?;
        for m in 1..=3 {
            let got = oracle_power_negativity(&psi, &cut, m, DEFAULT_DIM_CAP)?;
            worst = worst.max((got - ((1.0 + n).powi(m as i32) - 1.0)).abs());
        }
    }
    let w = named_state(&NamedState::W3)?;
    let oracle = monolab::monogamy::copies_min_oracle(&w, 0, DEFAULT_DIM_CAP, 4)?;
    let show = |m: CopyMin| m.found().map_or_else(|| "none".into(), |v| v.to_string());
    Ok(vec![
        row(
            "w-formula-m-min",
            g,
            "W3 copy formula: first m with C_global >= 2 C_pair",
            None,
            exact(show(formula.m_min), 4),
        ),
        row(
            "w-formula-m3-fails",
            g,
            "W3 copy formula at m = 3 satisfies C_global >= 2 C_pair",
            None,
            exact(g3 >= 2.0 * p3, false),
        ),
        row(
            "w-formula-m1-global",
            g,
            "W3 copy formula at m = 1, global value",
            Some(1e-12),
            Check::Close {
                observed: g1,
                expected: 2.0 * 2f64.sqrt() / 3.0,
            },
        ),
        row(
            "w-formula-m1-pair",
            g,
            "W3 copy formula at m = 1, pair value",
            Some(1e-12),
            Check::Close {
                observed: p1,
                expected: 2.0 / 3.0,
            },
        ),
        row(
            "w-ratio-m-min",
            g,
            "ratio model, L = M = 1/sqrt2",
            None,
            exact(show(ratio.m_min), 2),
        ),
        row(
            "oracle-multiplicativity",
            g,
            "max |N(psi^m) - ((1+N)^m - 1)|, pure bipartite, m <= 3",
            Some(1e-8),
            Check::AtMost {
                observed: worst,
                bound: 0.0,
            },
        ),
        row(
            "copy-models-w3",
            g,
            "W3 minimal copies: ratio, formula, negativity oracle",
            None,
            Check::Info {
                observed: format!(
                    "ratio {}, formula {}, oracle {}",
                    show(ratio.m_min),
                    show(formula.m_min),
                    show(oracle.m_min)
                ),
                note: "models disagree; reported side by side".into(),
            },
        ),
    ])
}

/// `p|a⟩⟨a| + (1-p)|b⟩⟨b|` from Haar two-qubit vectors; every tenth is pure.
pub fn rank2_mixture(seed: u64, i: usize) -> Res<ComplexMatrix> {
    let mut rng = sample_rng(seed ^ SALT_ROOF, i as u64);
    let dims = Dims::qubits(2);
    let a = haar_with_rng(&dims, &mut rng)?;
    let b = haar_with_rng(&dims, &mut rng)?;
    let p: f64 = if i.is_multiple_of(10) {
        1.0
    } else {
        rng.random()
    };
    ComplexMatrix::outer(a.amplitudes())
        .scale(p)
        .add(&ComplexMatrix::outer(b.amplitudes()).scale(1.0 - p))
}

fn pure_concurrence(v: &[Complex64]) -> f64 {
    2.0 * (v[0] * v[3] - v[1] * v[2]).norm()
}

/// `convex_roof(concurrence) - concurrence_wootters` over the rank-2 ensemble.
pub fn roof_gaps(seed: u64, samples: usize) -> Res<Vec<f64>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let rho = rank2_mixture(seed, i)?;
            let opts = RoofOptions {
                seed: seed.wrapping_add(i as u64),
                ..RoofOptions::default()
            };
            let roof = convex_roof(&rho, pure_concurrence, &opts)?;
            let w = concurrence_wootters(&DensityMatrix::new(rho, Dims::qubits(2))?)?;
            Ok(roof.value - w)
        })
        .collect()
}

fn roof(seed: u64) -> Res<Vec<Row>> {
    let g = "roof";
    let gaps = roof_gaps(seed, ROOF_SAMPLES)?;
    let lo = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        row(
            "roof-lower",
            g,
            "min convex roof - Wootters over 200 rank-2 states",
            Some(1e-6),
            Check::AtLeast {
                observed: lo,
                bound: 0.0,
            },
        ),
        row(
            "roof-upper",
            g,
            "max convex roof - Wootters over 200 rank-2 states",
            Some(1e-3),
            Check::AtMost {
                observed: hi,
                bound: 0.0,
            },
        ),
    ])
}

fn chain(seed: u64) -> Res<Vec<Row>> {
    let g = "chain";
    let dims = Dims::qubits(4);
    let stats = (0..CHAIN_SAMPLES)
        .into_par_iter()
        .map(|i| -> Res<(f64, f64, usize)> {
            let psi = haar_with_rng(&dims, &mut sample_rng(seed ^ SALT_CHAIN, i as u64))?;
            let r = chain_bound(&psi, base(MeasureKind::Negativity))?;
            let mut gamma_err: f64 = 0.0;
            let mut prod = 1.0;
            for (l, g) in r.levels.iter().zip(&r.gamma) {
                prod *= l.mu;
                gamma_err = gamma_err.max((g - prod).abs());
            }
            Ok((r.e_total - r.bound_rhs, gamma_err, r.levels.len()))
        })
        .collect::<Res<Vec<_>>>()?;
    let min_gap = stats.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let gamma_err = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    let all_levels = stats.iter().all(|s| s.2 == 2);
    Ok(vec![
        row(
            "chain-haar4-negativity",
            g,
            "min e_total - bound over 200 Haar 4-qubit states, negativity",
            Some(1e-8),
            Check::AtLeast {
                observed: min_gap,
                bound: 0.0,
            },
        ),
        row(
            "chain-gamma-products",
            g,
            "max |Gamma_k - product of stored mu_i|",
            Some(0.0),
            Check::AtMost {
                observed: gamma_err,
                bound: 0.0,
            },
        ),
        row(
            "chain-levels-recorded",
            g,
            "every state records N - 2 = 2 levels",
            None,
            exact(all_levels, true),
        ),
    ])
}

fn run_group(group: &str, seed: u64) -> Res<Vec<Row>> {
    match group {
        "weights" => weights(seed),
        "closed-form" => closed_form(seed),
        "qutrit" => qutrit(),
        "ckw" => ckw(seed),
        "copies" => copies(seed),
        "roof" => roof(seed),
        "chain" => chain(seed),
        other => unreachable!("unknown group {other}"),
    }
}

fn parse_overrides(items: &[String]) -> CliResult<BTreeMap<String, f64>> {
    items
        .iter()
        .map(|s| {
            let (id, v) = s.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("--override-tol expects ROW=VALUE, got `{s}`"))
            })?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad tolerance `{v}` for `{id}`")))?;
            Ok((id.trim().to_string(), v))
        })
        .collect()
}

/// Runs the selected groups and judges every row.
pub fn run_rows(filter: Option<&str>, overrides: &[String], seed: u64) -> CliResult<Vec<Row>> {
    let groups: Vec<&str> = match filter {
        Some(f) if GROUPS.contains(&f) => vec![f],
        Some(f) => {
            return Err(CliError::Usage(format!(
                "unknown group `{f}`; expected one of {}",
                GROUPS.join(", ")
            )))
        }
        None => GROUPS.to_vec(),
    };
    let mut overrides = parse_overrides(overrides)?;
    let mut rows = Vec::new();
    for g in groups {
        rows.extend(run_group(g, seed)?);
    }
    for r in &mut rows {
        if let Some(t) = overrides.remove(r.id) {
            r.tolerance = Some(t);
        }
        r.judge();
    }
    if let Some(id) = overrides.keys().next() {
        return Err(CliError::Usage(format!(
            "--override-tol names no selected row: `{id}`"
        )));
    }
    Ok(rows)
}

pub fn render_text(rows: &[Row]) -> String {
    let mut out = String::new();
    for r in rows {
        let tol = r
            .tolerance
            .map_or_else(|| "-".to_string(), |t| format!("{t:e}"));
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        let _ = writeln!(
            out,
            "{status} {}/{} observed={} expected={} tol={} # {}",
            r.group,
            r.id,
            r.observed(),
            r.expected(),
            tol,
            r.description
        );
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "summary: {} pass, {} fail, {} info",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Info)
    );
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    seed: u64,
    rows: &'a [Row],
    failed: usize,
}

pub fn run_verify(a: &VerifyArgs) -> CliResult<()> {
    let rows = run_rows(a.filter.as_deref(), &a.override_tol, a.seed)?;
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    let text = match a.format {
        ReportFormat::Text => render_text(&rows),
        ReportFormat::Json => to_json(&JsonReport {
            seed: a.seed,
            rows: &rows,
            failed,
        }),
    };
    emit(a.output.output.as_deref(), &text)?;
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed });
    }
    Ok(())
}
