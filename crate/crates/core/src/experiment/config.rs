//! Experiment configuration, read from TOML.
//!
//! ```toml
//! kind = "fidelity-vs-time"
//! j = 20
//! lambdas = [0.5, 2.5, 3.0, 7.0]
//! steps = 200
//!
//! [state]
//! type = "coherent"
//! theta = 2.04
//! phi = 2.42
//! ```

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest spin accepted; `d^2 - 1` parameters grow quickly.
pub const MAX_J: f64 = 50.0;
pub const DEFAULT_LAMBDAS: [f64; 5] = [0.5, 2.0, 2.5, 3.0, 7.0];
pub const DEFAULT_NOISE_SPREAD: f64 = 0.05;
pub const DEFAULT_REALIZATIONS: usize = 20;
pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_ENSEMBLE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    FidelityVsTime,
    FidelityVsChaos,
    FisherVsTime,
    OrderedBasis,
    AlignmentVsTime,
    HusimiVsTime,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::FidelityVsTime,
        ExperimentKind::FidelityVsChaos,
        ExperimentKind::FisherVsTime,
        ExperimentKind::OrderedBasis,
        ExperimentKind::AlignmentVsTime,
        ExperimentKind::HusimiVsTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::FidelityVsTime => "fidelity-vs-time",
            ExperimentKind::FidelityVsChaos => "fidelity-vs-chaos",
            ExperimentKind::FisherVsTime => "fisher-vs-time",
            ExperimentKind::OrderedBasis => "ordered-basis",
            ExperimentKind::AlignmentVsTime => "alignment-vs-time",
            ExperimentKind::HusimiVsTime => "husimi-vs-time",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                Error::Config(format!("kind: unknown value {s:?}, expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    /// Spin coherent state at `(theta, phi)`.
    Coherent { theta: f64, phi: f64 },
    /// `count` Haar-random pure states.
    Random { count: usize },
}

impl StateSpec {
    pub fn members(&self) -> usize {
        match self {
            StateSpec::Coherent { .. } => 1,
            StateSpec::Random { count } => *count,
        }
    }
}

/// A validated experiment description with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub j: f64,
    pub alpha: f64,
    pub lambdas: Vec<f64>,
    pub steps: usize,
    pub state: StateSpec,
    pub noise_spread: f64,
    /// Noise realizations per state.
    pub realizations: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Kicks at which estimates are computed; every kick when absent.
    /// `fidelity-vs-chaos` reports only the last of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_kicks: Option<Vec<usize>>,
}

const TOP_KEYS: [&str; 11] = [
    "kind",
    "j",
    "alpha",
    "lambdas",
    "steps",
    "state",
    "noise_spread",
    "realizations",
    "epsilon",
    "seed",
    "eval_kicks",
];

impl ExperimentConfig {
    /// Kicks at which to report, in increasing order.
    pub fn report_kicks(&self) -> Vec<usize> {
        match &self.eval_kicks {
            Some(k) => k.clone(),
            None => match self.kind {
                ExperimentKind::FidelityVsTime => (1..=self.steps).collect(),
                ExperimentKind::FidelityVsChaos => vec![self.steps],
                _ => (0..=self.steps).collect(),
            },
        }
    }

    /// Serializes to TOML; [`parse_config`] reads it back unchanged.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        let twice = 2.0 * self.j;
        if !(self.j > 0.0 && self.j <= MAX_J && twice == twice.round()) {
            return bad("j", format!("{} must be a positive multiple of 1/2 up to {MAX_J}", self.j));
        }
        if !self.alpha.is_finite() {
            return bad("alpha", format!("{} must be finite", self.alpha));
        }
        if self.lambdas.is_empty() {
            return bad("lambdas", "must not be empty".into());
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return bad("lambdas", format!("{l} must be finite and >= 0"));
        }
        if !(self.noise_spread.is_finite() && self.noise_spread >= 0.0) {
            return bad("noise_spread", format!("{} must be finite and >= 0", self.noise_spread));
        }
        if self.realizations == 0 {
            return bad("realizations", "must be at least 1".into());
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon", format!("{} must be finite and > 0", self.epsilon));
        }
        match self.state {
            StateSpec::Coherent { theta, phi } => {
                if !(theta.is_finite() && phi.is_finite()) {
                    return bad("state", "theta and phi must be finite".into());
                }
            }
            StateSpec::Random { count } => {
                if count == 0 {
                    return bad("state.count", "must be at least 1".into());
                }
            }
        }
        if self.seed > i64::MAX as u64 {
            return bad("seed", format!("{} exceeds {}", self.seed, i64::MAX));
        }
        if let Some(kicks) = &self.eval_kicks {
            if self.kind == ExperimentKind::OrderedBasis {
                return bad("eval_kicks", "not used by ordered-basis, which measures every basis element".into());
            }
            if kicks.is_empty() {
                return bad("eval_kicks", "must not be empty".into());
            }
            if kicks.windows(2).any(|w| w[0] >= w[1]) {
                return bad("eval_kicks", "must be strictly increasing".into());
            }
            if let Some(&k) = kicks.iter().find(|&&k| k > self.steps) {
                return bad("eval_kicks", format!("kick {k} exceeds steps = {}", self.steps));
            }
        }
        Ok(())
    }
}

fn default_steps(j: f64) -> usize {
    if j <= 10.0 {
        150
    } else {
        200
    }
}

fn field<T: for<'de> Deserialize<'de>>(table: &toml::Table, key: &str) -> Result<Option<T>> {
    table
        .get(key)
        .map(|v| {
            v.clone()
                .try_into()
                .map_err(|e: toml::de::Error| Error::Config(format!("{key}: {}", e.message())))
        })
        .transpose()
}

fn non_negative(table: &toml::Table, key: &str) -> Result<Option<usize>> {
    match field::<i64>(table, key)? {
        Some(v) if v < 0 => Err(Error::Config(format!("{key}: {v} must be >= 0"))),
        v => Ok(v.map(|v| v as usize)),
    }
}

/// Parses and validates a TOML config, filling defaults.
///
/// Errors list every unknown key and name the offending field.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(format!("parse error: {e}")))?;

    let mut unknown: Vec<String> = table
        .keys()
        .filter(|k| !TOP_KEYS.contains(&k.as_str()))
        .cloned()
        .collect();
    if let Some(toml::Value::Table(state)) = table.get("state") {
        let allowed: &[&str] = match state.get("type").and_then(|t| t.as_str()) {
            Some("coherent") => &["type", "theta", "phi"],
            Some("random") => &["type", "count"],
            _ => &["type", "theta", "phi", "count"],
        };
        unknown.extend(
            state
                .keys()
                .filter(|k| !allowed.contains(&k.as_str()))
                .map(|k| format!("state.{k}")),
        );
    }
    if !unknown.is_empty() {
        return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
    }

    let kind: ExperimentKind = field::<String>(&table, "kind")?
        .ok_or_else(|| Error::Config("kind: missing".into()))?
        .parse()?;
    let j: f64 = field(&table, "j")?.ok_or_else(|| Error::Config("j: missing".into()))?;
    let state = match (table.contains_key("state"), kind) {
        // these kinds never look at the state
        (false, ExperimentKind::FisherVsTime | ExperimentKind::HusimiVsTime) => StateSpec::Random {
            count: DEFAULT_ENSEMBLE,
        },
        _ => parse_state(&table)?,
    };
    let cfg = ExperimentConfig {
        kind,
        j,
        alpha: field(&table, "alpha")?.unwrap_or(FRAC_PI_2),
        lambdas: field(&table, "lambdas")?.unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec()),
        steps: non_negative(&table, "steps")?.unwrap_or_else(|| default_steps(j)),
        state,
        noise_spread: field(&table, "noise_spread")?.unwrap_or(DEFAULT_NOISE_SPREAD),
        realizations: non_negative(&table, "realizations")?.unwrap_or(DEFAULT_REALIZATIONS),
        epsilon: field(&table, "epsilon")?.unwrap_or(DEFAULT_EPSILON),
        seed: match field::<i64>(&table, "seed")? {
            Some(s) if s < 0 => return Err(Error::Config(format!("seed: {s} must be >= 0"))),
            Some(s) => s as u64,
            None => 0,
        },
        eval_kicks: match field::<Vec<i64>>(&table, "eval_kicks")? {
            Some(k) if k.iter().any(|&x| x < 0) => {
                return Err(Error::Config("eval_kicks: entries must be >= 0".into()))
            }
            k => k.map(|k| k.into_iter().map(|x| x as usize).collect()),
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_state(table: &toml::Table) -> Result<StateSpec> {
    let state = match table.get("state") {
        Some(toml::Value::Table(t)) => t,
        Some(_) => return Err(Error::Config("state: must be a table".into())),
        None => return Err(Error::Config("state: missing".into())),
    };
    match field::<String>(state, "type")?.as_deref() {
        Some("coherent") => {
            let theta = field(state, "theta")?.ok_or_else(|| Error::Config("state.theta: missing".into()))?;
            let phi = field(state, "phi")?.ok_or_else(|| Error::Config("state.phi: missing".into()))?;
            Ok(StateSpec::Coherent { theta, phi })
        }
        Some("random") => Ok(StateSpec::Random {
            count: non_negative(state, "count")?.unwrap_or(DEFAULT_ENSEMBLE),
        }),
        Some(other) => Err(Error::Config(format!(
            "state.type: unknown value {other:?}, expected coherent or random"
        ))),
        None => Err(Error::Config("state.type: missing".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
kind = "fidelity-vs-time"
j = 20
lambdas = [0.5]
steps = 100
state = { type = "coherent", theta = 2.04, phi = 2.42 }
"#;

    fn config_error(text: &str) -> String {
        match parse_config(text) {
            Err(Error::Config(msg)) => msg,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::FidelityVsTime);
        assert_eq!(cfg.alpha, FRAC_PI_2);
        assert_eq!(cfg.epsilon, 1e-3);
        assert_eq!(cfg.noise_spread, 0.05);
        assert_eq!(cfg.realizations, 20);
        assert_eq!(cfg.state, StateSpec::Coherent { theta: 2.04, phi: 2.42 });
        assert_eq!(cfg.eval_kicks, None);
        assert_eq!(cfg.report_kicks().len(), 100);
    }

    #[test]
    fn negative_j_names_the_field() {
        let msg = config_error(&MINIMAL.replace("j = 20", "j = -1"));
        assert!(msg.starts_with("j:"), "{msg}");
        let msg = config_error(&MINIMAL.replace("j = 20", "j = 2.25"));
        assert!(msg.starts_with("j:"), "{msg}");
    }

    #[test]
    fn range_errors_name_fields() {
        for (from, to, name) in [
            ("steps = 100", "steps = -3", "steps"),
            ("lambdas = [0.5]", "lambdas = [-0.5]", "lambdas"),
            ("lambdas = [0.5]", "lambdas = []", "lambdas"),
            ("j = 20", "j = 20\nepsilon = 0.0", "epsilon"),
            ("j = 20", "j = 20\nnoise_spread = -1.0", "noise_spread"),
            ("j = 20", "j = 20\nrealizations = 0", "realizations"),
            ("j = 20", "j = 20\neval_kicks = [5, 3]", "eval_kicks"),
            ("j = 20", "j = 20\neval_kicks = [500]", "eval_kicks"),
        ] {
            let msg = config_error(&MINIMAL.replace(from, to));
            assert!(msg.starts_with(name), "{name}: {msg}");
        }
    }

    #[test]
    fn duplicate_key_is_a_parse_error() {
        let msg = config_error(&format!("{MINIMAL}\nj = 10\n"));
        assert!(msg.starts_with("parse error"), "{msg}");
    }

    #[test]
    fn all_unknown_keys_are_listed() {
        let text = MINIMAL.replace(
            "state = { type = \"coherent\", theta = 2.04, phi = 2.42 }",
            "bogus = 1\nextra = \"x\"\nstate = { type = \"coherent\", theta = 2.04, phi = 2.42, psi = 0 }",
        );
        let msg = config_error(&text);
        for key in ["bogus", "extra", "state.psi"] {
            assert!(msg.contains(key), "{msg}");
        }
    }

    #[test]
    fn bad_kind_and_state() {
        assert!(config_error(&MINIMAL.replace("fidelity-vs-time", "speed")).starts_with("kind"));
        let random = MINIMAL.replace(
            "{ type = \"coherent\", theta = 2.04, phi = 2.42 }",
            "{ type = \"random\" }",
        );
        assert_eq!(parse_config(&random).unwrap().state, StateSpec::Random { count: 50 });
        assert!(config_error(&MINIMAL.replace(", phi = 2.42", "")).starts_with("state.phi"));
    }

    #[test]
    fn state_is_optional_only_where_unused() {
        let text = MINIMAL.replace("state = { type = \"coherent\", theta = 2.04, phi = 2.42 }\n", "");
        assert!(config_error(&text).starts_with("state"));
        for kind in ["fisher-vs-time", "husimi-vs-time"] {
            assert!(parse_config(&text.replace("fidelity-vs-time", kind)).is_ok(), "{kind}");
        }
    }

    #[test]
    fn default_steps_depend_on_spin() {
        let text = MINIMAL.replace("steps = 100\n", "");
        assert_eq!(parse_config(&text).unwrap().steps, 200);
        assert_eq!(parse_config(&text.replace("j = 20", "j = 10")).unwrap().steps, 150);
    }

    #[test]
    fn round_trip_is_lossless() {
        let mut cfg = parse_config(MINIMAL).unwrap();
        cfg.lambdas = vec![0.1 + 0.2, std::f64::consts::PI, 7.0];
        cfg.seed = u32::MAX as u64 + 7;
        cfg.eval_kicks = Some(vec![1, 50, 100]);
        let back = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        let random = ExperimentConfig {
            state: StateSpec::Random { count: 3 },
            eval_kicks: None,
            ..cfg
        };
        assert_eq!(parse_config(&random.to_toml()).unwrap(), random);
    }
}
