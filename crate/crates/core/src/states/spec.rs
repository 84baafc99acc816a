//! State specifications: the JSON schema and the compact `--state` syntax.
//!
//! JSON form (tagged by `kind`):
//!
//! ```text
//! {"kind":"schmidt","lambda":[l0,l1,l2,l3,l4],"phi":0.0}
//! {"kind":"named","label":"W3"}
//! {"kind":"haar","dims":[2,2,2],"seed":7}
//! {"kind":"tensor_power","base":{...},"m":2}
//! {"kind":"explicit","dims":[2,2],"amplitudes":[[re,im],...]}
//! ```
//!
//! Shorthand form: `named:W3`, `schmidt:l0,l1,l2,l3,l4[,phi]`,
//! `haar:2x2x2:SEED`, `power:M:<shorthand>`, or an inline JSON object.
//! Numeric fields of the shorthand and the `GHZ_CLASS` weights accept
//! `sqrt(x)` so that normalized amplitudes can be written exactly.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    haar_random_pure, named_state_capped, schmidt_state, tensor_power, PureState, SchmidtParams,
};
use crate::error::{MonolabError, Result};
use crate::linalg::Dims;

const MAX_NESTING: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    W3,
    Ghz3,
    QutritAntisym,
    /// `(|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n`
    W(usize),
    /// `|0…0⟩` on `n` qubits.
    Product(usize),
    /// `Σ_i λ_i |i⟩^{⊗n}` with local dimension `max(#weights, 2)`.
    GhzClass {
        n: usize,
        weights: Vec<f64>,
    },
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedState::W3 => write!(f, "W3"),
            NamedState::Ghz3 => write!(f, "GHZ3"),
            NamedState::QutritAntisym => write!(f, "QUTRIT_ANTISYM"),
            NamedState::W(n) => write!(f, "W({n})"),
            NamedState::Product(n) => write!(f, "PRODUCT({n})"),
            NamedState::GhzClass { n, weights } => {
                write!(f, "GHZ_CLASS({n};")?;
                for (i, w) in weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for NamedState {
    type Err = MonolabError;

    fn from_str(s: &str) -> Result<Self> {
        parse_label(s)
    }
}

/// Parses a named-state label such as `W3`, `W(4)` or `GHZ_CLASS(4;sqrt(0.5),sqrt(0.5))`.
pub fn parse_label(label: &str) -> Result<NamedState> {
    let trimmed = label.trim();
    let upper = trimmed.to_ascii_uppercase();
    match upper.as_str() {
        "W3" => return Ok(NamedState::W3),
        "GHZ3" => return Ok(NamedState::Ghz3),
        "QUTRIT_ANTISYM" => return Ok(NamedState::QutritAntisym),
        _ => {}
    }
    let unknown = || MonolabError::UnknownLabel(trimmed.to_string());
    let open = upper.find('(').ok_or_else(unknown)?;
    if !upper.ends_with(')') {
        return Err(unknown());
    }
    let head = &upper[..open];
    let body = &upper[open + 1..upper.len() - 1];
    match head {
        "W" => Ok(NamedState::W(parse_count(body)?)),
        "PRODUCT" => Ok(NamedState::Product(parse_count(body)?)),
        "GHZ_CLASS" => {
            let (n, weights) = body.split_once(';').ok_or_else(|| {
                MonolabError::Parse(format!("GHZ_CLASS expects `n;w1,w2,...`, got `{body}`"))
            })?;
            let n = parse_count(n)?;
            let weights = weights
                .split(',')
                .map(parse_real)
                .collect::<Result<Vec<_>>>()?;
            Ok(NamedState::GhzClass { n, weights })
        }
        _ => Err(unknown()),
    }
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|e| MonolabError::Parse(format!("bad count `{s}`: {e}")))
}

/// A real literal, `sqrt(x)`, or `-sqrt(x)`.
pub(crate) fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) if rest.trim_start().to_ascii_lowercase().starts_with("sqrt") => {
            (-1.0, rest.trim_start())
        }
        _ => (1.0, t),
    };
    let lower = t.to_ascii_lowercase();
    let value = if let Some(inner) = lower
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let x: f64 = inner
            .trim()
            .parse()
            .map_err(|e| MonolabError::Parse(format!("bad number `{inner}`: {e}")))?;
        if x < 0.0 {
            return Err(MonolabError::Parse(format!("sqrt of negative `{inner}`")));
        }
        x.sqrt()
    } else {
        t.parse::<f64>()
            .map_err(|e| MonolabError::Parse(format!("bad number `{t}`: {e}")))?
    };
    if !value.is_finite() {
        return Err(MonolabError::Parse(format!("non-finite number `{s}`")));
    }
    Ok(sign * value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Schmidt {
        lambda: Vec<f64>,
        #[serde(default)]
        phi: f64,
    },
    Named {
        label: String,
    },
    Haar {
        dims: Vec<usize>,
        seed: u64,
    },
    TensorPower {
        base: Box<StateSpec>,
        m: usize,
    },
    Explicit {
        dims: Vec<usize>,
        amplitudes: Vec<[f64; 2]>,
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MonolabError::Parse(format!("state JSON: {e}")))
    }

    /// Parses the shorthand accepted by `--state`.
    pub fn parse_shorthand(text: &str) -> Result<Self> {
        Self::parse_nested(text, 0)
    }

    fn parse_nested(text: &str, depth: usize) -> Result<Self> {
        if depth > MAX_NESTING {
            return Err(MonolabError::Parse("state spec nested too deeply".into()));
        }
        let t = text.trim();
        if t.starts_with('{') {
            return Self::from_json(t);
        }
        let (kind, rest) = t
            .split_once(':')
            .ok_or_else(|| MonolabError::Parse(format!("expected `kind:...`, got `{t}`")))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "named" => {
                // validate eagerly so parse errors surface here
                parse_label(rest)?;
                Ok(StateSpec::Named {
                    label: rest.trim().to_string(),
                })
            }
            "schmidt" => {
                let values = rest
                    .split(',')
                    .map(parse_real)
                    .collect::<Result<Vec<_>>>()?;
                match values.len() {
                    5 => Ok(StateSpec::Schmidt {
                        lambda: values,
                        phi: 0.0,
                    }),
                    6 => Ok(StateSpec::Schmidt {
                        lambda: values[..5].to_vec(),
                        phi: values[5],
                    }),
                    n => Err(MonolabError::Parse(format!(
                        "schmidt expects 5 amplitudes and an optional phase, got {n} values"
                    ))),
                }
            }
            "haar" => {
                let (dims, seed) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| MonolabError::Parse("haar expects `DIMS:SEED`".into()))?;
                let dims = dims
                    .split(['x', 'X'])
                    .map(parse_count)
                    .collect::<Result<Vec<_>>>()?;
                let seed = seed
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| MonolabError::Parse(format!("bad seed `{seed}`: {e}")))?;
                Ok(StateSpec::Haar { dims, seed })
            }
            "power" => {
                let (m, inner) = rest
                    .split_once(':')
                    .ok_or_else(|| MonolabError::Parse("power expects `M:<state>`".into()))?;
                Ok(StateSpec::TensorPower {
                    base: Box::new(Self::parse_nested(inner, depth + 1)?),
                    m: parse_count(m)?,
                })
            }
            "json" => Self::from_json(rest),
            other => Err(MonolabError::Parse(format!("unknown state kind `{other}`"))),
        }
    }

    /// The named state this spec refers to, if it is a `named` spec.
    pub fn named(&self) -> Option<NamedState> {
        match self {
            StateSpec::Named { label } => parse_label(label).ok(),
            _ => None,
        }
    }

    pub fn resolve(&self, cap: usize) -> Result<PureState> {
        match self {
            StateSpec::Schmidt { lambda, phi } => {
                let lambda: [f64; 5] = lambda.as_slice().try_into().map_err(|_| {
                    MonolabError::InvalidInput(format!(
                        "schmidt needs exactly 5 amplitudes, got {}",
                        lambda.len()
                    ))
                })?;
                Ok(schmidt_state(&SchmidtParams::new(lambda, *phi)?))
            }
            StateSpec::Named { label } => named_state_capped(&parse_label(label)?, cap),
            StateSpec::Haar { dims, seed } => {
                haar_random_pure(&Dims::new(dims.clone())?, *seed, cap)
            }
            StateSpec::TensorPower { base, m } => tensor_power(&base.resolve(cap)?, *m, cap),
            StateSpec::Explicit { dims, amplitudes } => {
                let dims = Dims::new(dims.clone())?;
                dims.check_cap(cap)?;
                let amps = amplitudes
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                PureState::new(amps, dims)
            }
        }
    }
}
