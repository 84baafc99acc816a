use std::fs;
use std::io::Write;
use std::path::Path;

use monolab::measures::Route;
use monolab::monogamy::{
    chain_bound, copies_min_oracle, copies_min_ratio, copies_min_w_formula, global_value,
    measure_triple, monogamy_weight, CopyReport, MonogamyReport, Weight,
};
use monolab::states::{haar_with_rng, NamedState, SchmidtParams};
use monolab::{Dims, MeasureId, PureState, StateSpec, DEFAULT_DIM_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{AnalyzeArgs, ChainArgs, CopiesArgs, MeasureArgs, SweepArgs, SweepKind};
use crate::error::{CliError, CliResult};

pub const DIM_CAP_ENV: &str = "MONOLAB_DIM_CAP";

pub const SCHMIDT_HEADER: [&str; 14] = [
    "lambda0",
    "lambda1",
    "lambda2",
    "lambda3",
    "lambda4",
    "phi",
    "e_total",
    "e_ab",
    "e_ac",
    "x1",
    "x2",
    "mu",
    "region",
    "alpha_min",
];

pub const HAAR_HEADER: [&str; 9] = [
    "index",
    "e_total",
    "e_ab",
    "e_ac",
    "x1",
    "x2",
    "mu",
    "region",
    "alpha_min",
];

pub fn dim_cap() -> CliResult<usize> {
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{DIM_CAP_ENV} must be a positive integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

pub fn load_state(arg: &str) -> CliResult<StateSpec> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.into(),
            source,
        })?,
        None => arg.to_string(),
    };
    Ok(StateSpec::parse_shorthand(&text)?)
}

pub fn measure_id(m: &MeasureArgs) -> CliResult<MeasureId> {
    Ok(MeasureId::new(m.measure, m.alpha)?)
}

pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn pair_override(values: &Option<Vec<f64>>) -> CliResult<Option<(f64, f64)>> {
    match values.as_deref() {
        None => Ok(None),
        Some([ab, ac]) if ab.is_finite() && ac.is_finite() && *ab >= 0.0 && *ac >= 0.0 => {
            Ok(Some((*ab, *ac)))
        }
        Some(v) => Err(CliError::Usage(format!(
            "--pair-override needs two nonnegative numbers, got {v:?}"
        ))),
    }
}

/// Where a reported value came from: an evaluation route, or `override`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Source {
    Computed(Route),
    Quoted(Quoted),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quoted {
    Override,
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub e_total: Source,
    pub e_ab: Source,
    pub e_ac: Source,
}

#[derive(Debug, Serialize)]
pub struct TripleValues {
    pub e_total: f64,
    pub e_ab: f64,
    pub e_ac: f64,
    pub provenance: Provenance,
}

fn triple_with_override(
    psi: &PureState,
    m: MeasureId,
    pairs: Option<(f64, f64)>,
) -> CliResult<TripleValues> {
    Ok(match pairs {
        Some((e_ab, e_ac)) => {
            let (e_total, route) = global_value(psi, m)?;
            TripleValues {
                e_total,
                e_ab,
                e_ac,
                provenance: Provenance {
                    e_total: Source::Computed(route),
                    e_ab: Source::Quoted(Quoted::Override),
                    e_ac: Source::Quoted(Quoted::Override),
                },
            }
        }
        None => {
            let t = measure_triple(psi, m)?;
            TripleValues {
                e_total: t.e_total,
                e_ab: t.e_ab,
                e_ac: t.e_ac,
                provenance: Provenance {
                    e_total: Source::Computed(t.routes[0]),
                    e_ab: Source::Computed(t.routes[1]),
                    e_ac: Source::Computed(t.routes[2]),
                },
            }
        }
    })
}

#[derive(Debug, Serialize)]
pub struct AnalyzeOutput {
    pub command: &'static str,
    pub state: StateSpec,
    pub measure: MeasureId,
    #[serde(flatten)]
    pub report: MonogamyReport,
    pub alpha_min_integer: Option<u64>,
    pub provenance: Provenance,
}

pub fn analyze(
    spec: &StateSpec,
    m: MeasureId,
    pairs: Option<(f64, f64)>,
    cap: usize,
) -> CliResult<AnalyzeOutput> {
    let psi = spec.resolve(cap)?;
    let t = triple_with_override(&psi, m, pairs)?;
    let report = monogamy_weight(t.e_total, t.e_ab, t.e_ac)?;
    Ok(AnalyzeOutput {
        command: "analyze",
        state: spec.clone(),
        measure: m,
        alpha_min_integer: report.alpha_min.smallest_integer(),
        report,
        provenance: t.provenance,
    })
}

pub fn run_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    let out = analyze(
        &load_state(&a.state.state)?,
        measure_id(&a.measure)?,
        pair_override(&a.pair_override)?,
        dim_cap()?,
    )?;
    emit(a.output.output.as_deref(), &to_json(&out))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn report_columns(r: &MonogamyReport) -> Vec<String> {
    let ratio = |x: f64| (r.e_total > monolab::monogamy::DEFAULT_TOL).then(|| x / r.e_total);
    let mu = match r.mu {
        Weight::Finite(v) => v.to_string(),
        Weight::Trivial => "inf".into(),
    };
    let alpha = match r.alpha_min {
        monolab::monogamy::AlphaMin::Finite(v) => v.to_string(),
        monolab::monogamy::AlphaMin::Unbounded => "unbounded".into(),
        monolab::monogamy::AlphaMin::Undefined => String::new(),
    };
    vec![
        r.e_total.to_string(),
        r.e_ab.to_string(),
        r.e_ac.to_string(),
        opt(ratio(r.e_ab)),
        opt(ratio(r.e_ac)),
        mu,
        r.region.to_string(),
        alpha,
    ]
}

/// Squared amplitudes on the simplex lattice with step `1/resolution`, in
/// lexicographic order of the lattice coordinates.
pub fn schmidt_grid(
    resolution: usize,
    phi: f64,
    canonical: bool,
    w_slice: bool,
) -> CliResult<Vec<SchmidtParams>> {
    let mut out = Vec::new();
    if resolution == 0 {
        return Ok(out);
    }
    let r = resolution;
    for k0 in 0..=r {
        for k1 in 0..=r - k0 {
            for k2 in 0..=r - k0 - k1 {
                for k3 in 0..=r - k0 - k1 - k2 {
                    let k4 = r - k0 - k1 - k2 - k3;
                    if w_slice && k4 != 0 {
                        continue;
                    }
                    if canonical && !(k2 >= k3 && k3 >= k4) {
                        continue;
                    }
                    let lambda = [k0, k1, k2, k3, k4].map(|k| (k as f64 / r as f64).sqrt());
                    out.push(SchmidtParams::new(lambda, phi)?);
                }
            }
        }
    }
    Ok(out)
}

fn write_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_csv(a: &SweepArgs) -> CliResult<String> {
    let m = measure_id(&a.measure)?;
    match a.kind {
        SweepKind::Schmidt => {
            let grid = schmidt_grid(a.resolution, a.phi, a.canonical, a.w_slice)?;
            let rows = grid
                .par_iter()
                .map(|p| {
                    let psi = monolab::states::schmidt_state(p);
                    let r = measure_triple(&psi, m)?.report()?;
                    let mut row: Vec<String> = p.lambda().iter().map(|l| l.to_string()).collect();
                    row.push(p.phi().to_string());
                    row.extend(report_columns(&r));
                    Ok(row)
                })
                .collect::<CliResult<Vec<_>>>()?;
            write_csv(&SCHMIDT_HEADER, &rows)
        }
        SweepKind::Haar => {
            let dims = parse_dims(&a.dims)?;
            dims.check_cap(dim_cap()?)?;
            let rows = (0..a.samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = sample_rng(a.seed, i as u64);
                    let psi = haar_with_rng(&dims, &mut rng)?;
                    let r = measure_triple(&psi, m)?.report()?;
                    let mut row = vec![i.to_string()];
                    row.extend(report_columns(&r));
                    Ok(row)
                })
                .collect::<CliResult<Vec<_>>>()?;
            write_csv(&HAAR_HEADER, &rows)
        }
    }
}

/// Independent stream per sample index, so results do not depend on the
/// order in which worker threads pick samples up.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn parse_dims(s: &str) -> CliResult<Dims> {
    let dims = s
        .split(['x', 'X'])
        .map(|d| {
            d.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad dimension `{d}` in `{s}`")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Dims::new(dims)?)
}

pub fn run_sweep(a: &SweepArgs) -> CliResult<()> {
    emit(a.output.output.as_deref(), &sweep_csv(a)?)
}

#[derive(Debug, Serialize)]
pub struct RatioModel {
    pub l: f64,
    pub m: f64,
    #[serde(flatten)]
    pub report: CopyReport,
}

#[derive(Debug, Serialize)]
pub struct CopiesOutput {
    pub command: &'static str,
    pub state: StateSpec,
    pub measure: MeasureId,
    pub ratio_lm: RatioModel,
    /// Present only for the W3 state.
    pub paper_w_formula: Option<CopyReport>,
    pub oracle_negativity: CopyReport,
    pub provenance: Provenance,
}

fn clamp_ratio(x: f64) -> f64 {
    // round-off can put a saturated ratio a hair above 1
    if x > 1.0 && x <= 1.0 + monolab::monogamy::DEFAULT_TOL {
        1.0
    } else {
        x
    }
}

pub fn copies(
    spec: &StateSpec,
    m: MeasureId,
    pairs: Option<(f64, f64)>,
    m_cap: usize,
    oracle_m_cap: usize,
    cap: usize,
) -> CliResult<CopiesOutput> {
    let psi = spec.resolve(cap)?;
    let t = triple_with_override(&psi, m, pairs)?;
    let (l, mr) = if t.e_total > monolab::monogamy::DEFAULT_TOL {
        (
            clamp_ratio(t.e_ab / t.e_total),
            clamp_ratio(t.e_ac / t.e_total),
        )
    } else {
        (0.0, 0.0)
    };
    let ratio = copies_min_ratio(l, mr, m_cap)?;
    let paper_w_formula = match spec.named() {
        Some(NamedState::W3) => Some(copies_min_w_formula(m_cap)?),
        _ => None,
    };
    let oracle = copies_min_oracle(&psi, 0, cap, oracle_m_cap)?;
    Ok(CopiesOutput {
        command: "copies",
        state: spec.clone(),
        measure: m,
        ratio_lm: RatioModel {
            l,
            m: mr,
            report: ratio,
        },
        paper_w_formula,
        oracle_negativity: oracle,
        provenance: t.provenance,
    })
}

pub fn run_copies(a: &CopiesArgs) -> CliResult<()> {
    let out = copies(
        &load_state(&a.state.state)?,
        measure_id(&a.measure)?,
        pair_override(&a.pair_override)?,
        a.m_cap,
        a.oracle_m_cap,
        dim_cap()?,
    )?;
    emit(a.output.output.as_deref(), &to_json(&out))
}

#[derive(Debug, Serialize)]
pub struct ChainOutput {
    pub command: &'static str,
    pub state: StateSpec,
    #[serde(flatten)]
    pub report: monolab::monogamy::ChainReport,
}

pub fn run_chain(a: &ChainArgs) -> CliResult<()> {
    let spec = load_state(&a.state.state)?;
    let psi = spec.resolve(dim_cap()?)?;
    let report = chain_bound(&psi, measure_id(&a.measure)?)?;
    let out = ChainOutput {
        command: "chain",
        state: spec,
        report,
    };
    emit(a.output.output.as_deref(), &to_json(&out))
}
