//! Turning an [`ExperimentConfig`] into tables.

use bvlift::bvfun::BVFunction1D;
use bvlift::convergence::{
    embedding_experiment, geometric_range, make_family, run_experiment, EmbeddingTable,
    FamilyParams, ReportConfig, SequenceFamily,
};
use bvlift::integrand::{registry, Integrand};
use bvlift::lifting::{lifting_convergence_report, TestFunction};
use bvlift::vector::norm;
use bvlift::{generators, QuadratureSpec};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, IntegrandSpec};
use crate::output::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", join_lines(.0))]
    Config(Vec<ConfigError>),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Eval(#[from] bvlift::Error),
    #[error("{} cell(s) could not be evaluated:\n{}", .0.len(), .0.join("\n"))]
    Incomplete(Vec<String>),
}

fn join_lines(errors: &[ConfigError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

/// Number of test functions in the pairing dictionary.
const DICTIONARY_SIZE: usize = 12;

pub fn quadrature(cfg: &ExperimentConfig) -> QuadratureSpec {
    QuadratureSpec {
        theta_order: cfg.theta_order,
        ac_tolerance: cfg.tolerance,
        cantor_depth: cfg.cantor_depth,
        subdivision_budget: cfg.budget,
        ..QuadratureSpec::default()
    }
}

fn base_function(name: &str) -> Option<BVFunction1D> {
    generators::suite().into_iter().find(|(n, _)| *n == name).map(|(_, u)| u)
}

pub fn build_family(cfg: &ExperimentConfig) -> Result<SequenceFamily, CliError> {
    let index_range = cfg.jmax.map(|j| match cfg.family.as_str() {
        "mollified" | "radial_mollified" => (1..=j).collect(),
        _ => geometric_range(j),
    });
    let params = FamilyParams {
        base: cfg.base.as_deref().and_then(base_function),
        dimension: cfg.dimension,
        index_range,
        quadrature: quadrature(cfg),
    };
    Ok(make_family(&cfg.family, &params)?)
}

fn integrand(spec: &IntegrandSpec) -> Result<Integrand, CliError> {
    match spec {
        IntegrandSpec::Registry(name) => Ok(registry(name)?),
        IntegrandSpec::Expression { name, expr } => {
            let expr = expr.clone();
            Ok(Integrand::new(name.clone(), move |x, y: &[f64], a: &[f64]| {
                expr.eval(x, norm(y), norm(a))
            }))
        }
    }
}

/// Sampled range of the first component, including jump traces.
pub fn value_range(u: &BVFunction1D) -> (f64, f64) {
    let dom = u.domain();
    let samples = (0..=400).map(|i| u.value(dom.a + dom.length() * i as f64 / 400.0)[0]);
    let traces = u.jumps().iter().flat_map(|j| [j.left[0], j.right[0]]);
    samples.chain(traces).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Convergence table for `cfg`. Cell failures are returned next to the table.
pub fn convergence_table(
    cfg: &ExperimentConfig,
    family: &SequenceFamily,
) -> Result<(Table, Vec<String>), CliError> {
    let q = quadrature(cfg);
    let report_cfg = ReportConfig {
        p: cfg.p,
        k: cfg.k,
        integrands: cfg.integrands.iter().map(integrand).collect::<Result<_, _>>()?,
        graph: cfg.graph,
        sup: cfg.sup,
        lifting: cfg.lifting,
        quadrature: q,
    };
    let report = run_experiment(family, &report_cfg)?;
    let failures = report
        .failures
        .iter()
        .map(|f| {
            let at = f.index.map_or("limit".to_string(), |j| format!("j={j}"));
            format!("{at} {}: {}", f.column, f.message)
        })
        .collect();
    let mut table = Table {
        columns: report.columns.clone(),
        rows: report.rows.iter().map(|r| (r.index, r.values.clone())).collect(),
        limit: Some(report.limit.clone()),
    };
    if cfg.pairing {
        let limit = family.limit();
        let (lo, hi) = value_range(limit);
        let pad = 0.25 * (hi - lo).max(1.0);
        let dictionary = TestFunction::random_bumps(
            DICTIONARY_SIZE,
            limit.domain(),
            lo - pad,
            hi + pad,
            limit.dim(),
            cfg.seed,
        );
        let members = family
            .index_range()
            .iter()
            .map(|&j| Ok((j, family.member(j)?)))
            .collect::<bvlift::Result<Vec<_>>>()?;
        let rows = lifting_convergence_report(&members, limit, &dictionary, &q)?;
        table.push_column("lifting_pairing_gap", rows.iter().map(|r| r.pairing_gap).collect(), 0.0);
    }
    Ok((table, failures))
}

pub fn embedding_table(t: &EmbeddingTable) -> Table {
    Table {
        columns: ["strict_dist", "lp_dist", "sup_dist"].map(String::from).into(),
        rows: t.rows.iter().map(|r| (r.index, vec![r.strict_dist, r.lp_dist, r.sup_dist])).collect(),
        limit: None,
    }
}

pub fn embedding(cfg: &ExperimentConfig, family: &SequenceFamily) -> Result<Table, CliError> {
    let d = if cfg.is_radial() { cfg.dimension } else { 1 };
    Ok(embedding_table(&embedding_experiment(family, d, &quadrature(cfg))?))
}

/// Output of one `run`: named tables in write order.
pub struct RunOutput {
    pub tables: Vec<(String, Table)>,
    pub failures: Vec<String>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let family = build_family(cfg)?;
    let (table, failures) = convergence_table(cfg, &family)?;
    let stem = cfg.stem();
    let mut tables = vec![(stem.clone(), table)];
    if cfg.embedding.unwrap_or(cfg.is_radial()) {
        tables.push((format!("{stem}_embedding"), embedding(cfg, &family)?));
    }
    Ok(RunOutput { tables, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn shifted_jump_table_is_exact() {
        let cfg = parse_config(
            "family = shifted_jump\njmax = 8\n[integrands]\nuse = ex55\n[columns]\nlifting = false\n",
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        assert!(out.failures.is_empty());
        let (stem, t) = &out.tables[0];
        assert_eq!(stem, "shifted-jump");
        assert_eq!(t.rows.iter().map(|r| r.0).collect::<Vec<_>>(), [1, 2, 4, 8]);
        assert!(t.column("F_direct_ex55").unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn expression_integrand_matches_registry() {
        let text = "jmax = 4\n[integrands]\nuse = area\nexpr.mine = sqrt(1 + A^2)\n\
                    [columns]\nlifting = false\nsup = false\n";
        let cfg = parse_config(text).unwrap();
        let out = run(&cfg).unwrap();
        let t = &out.tables[0].1;
        let a = t.column("F_direct_area").unwrap();
        let b = t.column("F_direct_mine").unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn pairing_column_is_seeded() {
        let text = "family = jump_smoothing\njmax = 4\nseed = 5\n[columns]\npairing = true\n\
                    lifting = false\ngraph = false\n";
        let cfg = parse_config(text).unwrap();
        let a = run(&cfg).unwrap().tables.remove(0).1;
        let b = run(&cfg).unwrap().tables.remove(0).1;
        assert_eq!(a, b);
        assert!(a.column("lifting_pairing_gap").unwrap().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn radial_runs_add_an_embedding_table() {
        let cfg = parse_config("family = radial_steepening\njmax = 16\n[integrands]\nuse = abs\n")
            .unwrap();
        let out = run(&cfg).unwrap();
        assert_eq!(out.tables.len(), 2);
        assert_eq!(out.tables[1].0, "radial-steepening_embedding");
    }
}
