//! Line-oriented experiment configuration.
//!
//! ```text
//! # comments start with '#'
//! family = mollified        # top-level keys belong to [experiment]
//! base = three_steps
//! jmax = 8
//!
//! [integrands]
//! use = area, ygrowth-2
//! expr.quartic = sqrt(1 + A^2) + y^4
//!
//! [columns]
//! p = 2
//! k = 3
//!
//! [quadrature]
//! tolerance = 1e-9
//!
//! [output]
//! dir = out
//! ```

use std::path::PathBuf;

use bvlift::convergence::FAMILY_NAMES;
use bvlift::integrand::registry;
use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown name `{name}`")]
    UnknownName { line: usize, name: String },
}

#[derive(Debug, Clone)]
pub enum IntegrandSpec {
    Registry(String),
    Expression { name: String, expr: Expr },
}

impl IntegrandSpec {
    pub fn name(&self) -> &str {
        match self {
            IntegrandSpec::Registry(n) => n,
            IntegrandSpec::Expression { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: String,
    /// Generator-suite function used as the base of mollified families.
    pub base: Option<String>,
    pub dimension: u32,
    pub jmax: Option<u64>,
    /// Run the embedding experiment; by default only for radial families.
    pub embedding: Option<bool>,
    pub seed: u64,
    pub integrands: Vec<IntegrandSpec>,
    pub p: f64,
    pub k: Option<f64>,
    pub graph: bool,
    pub sup: bool,
    pub lifting: bool,
    /// Add a pairing-gap column over a random test-function dictionary.
    pub pairing: bool,
    pub tolerance: f64,
    pub cantor_depth: u32,
    pub theta_order: usize,
    pub budget: usize,
    pub out_dir: PathBuf,
    pub stem: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: "oscillation".into(),
            base: None,
            dimension: 2,
            jmax: None,
            embedding: None,
            seed: 0,
            integrands: vec![IntegrandSpec::Registry("area".into())],
            p: 2.0,
            k: None,
            graph: true,
            sup: true,
            lifting: true,
            pairing: false,
            tolerance: 1e-9,
            cantor_depth: 24,
            theta_order: 32,
            budget: 100_000,
            out_dir: PathBuf::from("."),
            stem: None,
        }
    }
}

impl ExperimentConfig {
    pub fn is_radial(&self) -> bool {
        self.family.starts_with("radial_")
    }

    pub fn stem(&self) -> String {
        self.stem.clone().unwrap_or_else(|| self.family.replace('_', "-"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    Experiment,
    Integrands,
    Columns,
    Quadrature,
    Output,
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

/// Suite names accepted for `base`.
pub fn base_names() -> Vec<&'static str> {
    bvlift::generators::suite().into_iter().map(|(n, _)| n).collect()
}

fn valid_family(name: &str) -> Option<String> {
    let key = name.replace('-', "_");
    FAMILY_NAMES.contains(&key.as_str()).then_some(key)
}

/// Parse and validate a configuration. Every problem is reported, each with its line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, Vec<ConfigError>> {
    let mut cfg = ExperimentConfig::default();
    let mut errors = Vec::new();
    let mut section = Section::Experiment;
    let mut integrands: Option<Vec<IntegrandSpec>> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let perr = |message: String| ConfigError::Parse { line, message };
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                errors.push(perr(format!("malformed section header `{content}`")));
                continue;
            };
            section = match name.trim() {
                "experiment" => Section::Experiment,
                "integrands" => Section::Integrands,
                "columns" => Section::Columns,
                "quadrature" => Section::Quadrature,
                "output" => Section::Output,
                other => {
                    errors.push(perr(format!("unknown section `{other}`")));
                    continue;
                }
            };
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(perr(format!("expected `key = value`, found `{content}`")));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            errors.push(perr(format!("missing value for `{key}`")));
            continue;
        }
        macro_rules! number {
            ($t:ty) => {
                match value.parse::<$t>() {
                    Ok(v) => v,
                    Err(_) => {
                        errors.push(perr(format!("`{key}` expects a number, found `{value}`")));
                        continue;
                    }
                }
            };
        }
        macro_rules! boolean {
            () => {
                match parse_bool(value) {
                    Some(v) => v,
                    None => {
                        errors.push(perr(format!("`{key}` expects true or false, found `{value}`")));
                        continue;
                    }
                }
            };
        }
        match (section, key) {
            (Section::Experiment, "family") => match valid_family(value) {
                Some(f) => cfg.family = f,
                None => errors.push(ConfigError::UnknownName { line, name: value.into() }),
            },
            (Section::Experiment, "base") => {
                if base_names().contains(&value) {
                    cfg.base = Some(value.into());
                } else {
                    errors.push(ConfigError::UnknownName { line, name: value.into() });
                }
            }
            (Section::Experiment, "dimension") => {
                let d = number!(u32);
                if d < 1 {
                    errors.push(perr("dimension must be at least 1".into()));
                }
                cfg.dimension = d;
            }
            (Section::Experiment, "jmax") => {
                let j = number!(u64);
                if j < 1 {
                    errors.push(perr("jmax must be at least 1".into()));
                }
                cfg.jmax = Some(j);
            }
            (Section::Experiment, "embedding") => cfg.embedding = Some(boolean!()),
            (Section::Experiment, "seed") => cfg.seed = number!(u64),
            (Section::Integrands, "use") => {
                let list = integrands.get_or_insert_with(Vec::new);
                for name in value.split(',').map(str::trim) {
                    if registry(name).is_ok() {
                        list.push(IntegrandSpec::Registry(name.into()));
                    } else {
                        errors.push(ConfigError::UnknownName { line, name: name.into() });
                    }
                }
            }
            (Section::Integrands, k) if k.starts_with("expr.") => {
                let name = &k[5..];
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    errors.push(perr(format!("invalid expression name `{name}`")));
                    continue;
                }
                match Expr::parse(value) {
                    Ok(expr) => integrands
                        .get_or_insert_with(Vec::new)
                        .push(IntegrandSpec::Expression { name: name.into(), expr }),
                    Err(e) => errors.push(perr(format!("expression `{name}`: {e}"))),
                }
            }
            (Section::Columns, "graph") => cfg.graph = boolean!(),
            (Section::Columns, "sup") => cfg.sup = boolean!(),
            (Section::Columns, "lifting") => cfg.lifting = boolean!(),
            (Section::Columns, "pairing") => cfg.pairing = boolean!(),
            (Section::Columns, "p") => {
                let p = number!(f64);
                if p.is_nan() || p < 1.0 {
                    errors.push(perr(format!("p must be at least 1, found {p}")));
                }
                cfg.p = p;
            }
            (Section::Columns, "k") => {
                let k = number!(f64);
                if !(k >= 0.0 && k.is_finite()) {
                    errors.push(perr(format!("k must be a nonnegative number, found {k}")));
                }
                cfg.k = Some(k);
            }
            (Section::Quadrature, "tolerance") => {
                let t = number!(f64);
                if !(t > 0.0 && t.is_finite()) {
                    errors.push(perr(format!("tolerance must be positive, found {t}")));
                }
                cfg.tolerance = t;
            }
            (Section::Quadrature, "cantor_depth") => {
                let d = number!(u32);
                if !(1..=60).contains(&d) {
                    errors.push(perr(format!("cantor_depth must lie in 1..=60, found {d}")));
                }
                cfg.cantor_depth = d;
            }
            (Section::Quadrature, "theta_order") => {
                let n = number!(usize);
                if n < 2 {
                    errors.push(perr(format!("theta_order must be at least 2, found {n}")));
                }
                cfg.theta_order = n;
            }
            (Section::Quadrature, "budget") => {
                let n = number!(usize);
                if n == 0 {
                    errors.push(perr("budget must be positive".into()));
                }
                cfg.budget = n;
            }
            (Section::Output, "dir") => cfg.out_dir = PathBuf::from(value),
            (Section::Output, "stem") => {
                if value.contains(['/', '\\']) {
                    errors.push(perr("stem must be a plain file name".into()));
                }
                cfg.stem = Some(value.into());
            }
            (_, other) => errors.push(perr(format!("unknown key `{other}` in this section"))),
        }
    }
    if let Some(list) = integrands {
        cfg.integrands = list;
    }
    if cfg.is_radial() && cfg.dimension < 2 {
        errors.push(ConfigError::Parse {
            line: 0,
            message: "radial families need dimension >= 2".into(),
        });
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(errors)
    }
}
