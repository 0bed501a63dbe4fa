use super::family::SequenceFamily;
use crate::bvfun::{lp_distance_with, sup_distance, BVFunction1D};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::functional::{area_functional_with, evaluate_f, evaluate_f_graph};
use crate::integrand::Integrand;
use crate::lifting::{build_lifting, tail_gradient_mass};
use crate::quadrature::QuadratureSpec;

/// Which columns [`run_experiment`] fills.
#[derive(Debug, Clone)]
pub struct ReportConfig {
    /// Exponent of the `lp_dist` column.
    pub p: f64,
    /// Level of the `tail_mass` column; no column when `None`.
    pub k: Option<f64>,
    pub integrands: Vec<Integrand>,
    /// Add an `F_graph` column next to every `F_direct` column.
    pub graph: bool,
    pub sup: bool,
    pub lifting: bool,
    pub quadrature: QuadratureSpec,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            p: 2.0,
            k: None,
            integrands: Vec::new(),
            graph: true,
            sup: true,
            lifting: true,
            quadrature: QuadratureSpec::default(),
        }
    }
}

impl ReportConfig {
    /// Column names in table order, without the leading index column.
    pub fn columns(&self) -> Vec<String> {
        let mut c: Vec<String> =
            ["strict_dist", "area_strict_dist", "l1_dist", "lp_dist"].map(String::from).into();
        if self.sup {
            c.push("sup_dist".into());
        }
        for f in &self.integrands {
            c.push(format!("F_direct_{}", f.name()));
            if self.graph {
                c.push(format!("F_graph_{}", f.name()));
            }
        }
        if self.lifting {
            c.push("lifting_mass_gap".into());
        }
        if self.k.is_some() {
            c.push("tail_mass".into());
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub index: u64,
    pub values: Vec<f64>,
}

/// A cell that could not be evaluated. Its value in the table is NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    /// `None` for the limit row.
    pub index: Option<u64>,
    pub column: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub family: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
    /// The same quantities evaluated at the limit (distances are 0 there).
    pub limit: Vec<f64>,
    pub failures: Vec<CellFailure>,
}

impl ConvergenceReport {
    fn position(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column over all rows.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.position(name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn limit_value(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.limit[i])
    }

    /// Value at the final index.
    pub fn last(&self, name: &str) -> Option<f64> {
        let i = self.position(name)?;
        self.rows.last().map(|r| r.values[i])
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Reference {
    tv: Result<f64>,
    area: Result<f64>,
    f_direct: Vec<Result<f64>>,
    lifting_mass: Result<f64>,
}

/// Records a cell, turning errors and non-finite values into NaN plus a failure.
struct Recorder<'a> {
    columns: &'a [String],
    index: Option<u64>,
    values: Vec<f64>,
    failures: Vec<CellFailure>,
}

impl Recorder<'_> {
    fn push(&mut self, r: Result<f64>) {
        let column = self.columns[self.values.len()].clone();
        match r {
            Ok(v) if v.is_finite() => self.values.push(v),
            Ok(v) => {
                self.failures.push(CellFailure {
                    index: self.index,
                    column,
                    message: format!("non-finite value {v}"),
                });
                self.values.push(f64::NAN);
            }
            Err(e) => {
                self.failures.push(CellFailure { index: self.index, column, message: e.to_string() });
                self.values.push(f64::NAN);
            }
        }
    }
}

fn gap(a: &Result<f64>, b: &Result<f64>) -> Result<f64> {
    match (a, b) {
        (Ok(a), Ok(b)) => Ok((a - b).abs()),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    }
}

fn lifting_mass(u: &BVFunction1D, q: &QuadratureSpec) -> Result<f64> {
    Ok(build_lifting(u, q)?.total_mass())
}

fn reference(family: &SequenceFamily, cfg: &ReportConfig, q: &QuadratureSpec) -> Reference {
    let u = family.limit();
    Reference {
        tv: u.total_variation_with(q),
        area: area_functional_with(u, q),
        f_direct: cfg.integrands.iter().map(|f| evaluate_f(f, u, q).map(|v| v.total)).collect(),
        lifting_mass: if cfg.lifting { lifting_mass(u, q) } else { Ok(0.0) },
    }
}

fn limit_row(
    family: &SequenceFamily,
    cfg: &ReportConfig,
    columns: &[String],
    r: &Reference,
    q: &QuadratureSpec,
) -> (Vec<f64>, Vec<CellFailure>) {
    let u = family.limit();
    let mut rec = Recorder { columns, index: None, values: Vec::new(), failures: Vec::new() };
    for _ in 0..4 {
        rec.push(Ok(0.0));
    }
    if cfg.sup {
        rec.push(Ok(0.0));
    }
    for (f, direct) in cfg.integrands.iter().zip(&r.f_direct) {
        rec.push(direct.clone());
        if cfg.graph {
            rec.push(evaluate_f_graph(f, u, q).map(|v| v.total));
        }
    }
    if cfg.lifting {
        rec.push(gap(&r.lifting_mass, &r.lifting_mass));
    }
    if let Some(k) = cfg.k {
        rec.push(tail_gradient_mass(u, k, q));
    }
    (rec.values, rec.failures)
}

fn member_row(
    family: &SequenceFamily,
    cfg: &ReportConfig,
    columns: &[String],
    r: &Reference,
    j: u64,
    q: &QuadratureSpec,
) -> (Vec<f64>, Vec<CellFailure>) {
    let mut rec = Recorder { columns, index: Some(j), values: Vec::new(), failures: Vec::new() };
    let u = match family.member(j) {
        Ok(u) => u,
        Err(e) => {
            for c in columns {
                rec.failures.push(CellFailure {
                    index: Some(j),
                    column: c.clone(),
                    message: e.to_string(),
                });
                rec.values.push(f64::NAN);
            }
            return (rec.values, rec.failures);
        }
    };
    let limit = family.limit();
    let l1 = lp_distance_with(&u, limit, 1.0, q);
    let tv = u.total_variation_with(q);
    let area = area_functional_with(&u, q);
    let plus = |a: &Result<f64>, b: Result<f64>| -> Result<f64> {
        match (a, b) {
            (Ok(a), Ok(b)) => Ok(a + b),
            (Err(e), _) => Err(e.clone()),
            (_, Err(e)) => Err(e),
        }
    };
    rec.push(plus(&l1, gap(&tv, &r.tv)));
    rec.push(plus(&l1, gap(&area, &r.area)));
    rec.push(l1.clone());
    rec.push(lp_distance_with(&u, limit, cfg.p, q));
    if cfg.sup {
        rec.push(sup_distance(&u, limit));
    }
    for f in &cfg.integrands {
        rec.push(evaluate_f(f, &u, q).map(|v| v.total));
        if cfg.graph {
            rec.push(evaluate_f_graph(f, &u, q).map(|v| v.total));
        }
    }
    if cfg.lifting {
        rec.push(gap(&lifting_mass(&u, q), &r.lifting_mass));
    }
    if let Some(k) = cfg.k {
        rec.push(tail_gradient_mass(&u, k, q));
    }
    (rec.values, rec.failures)
}

/// Tabulate distances to the limit and functional values over the family's index
/// range. Rows are computed in parallel when the quadrature's execution mode allows;
/// their order and values do not depend on the mode.
///
/// Failing cells are reported in [`ConvergenceReport::failures`] and hold NaN; the
/// only hard error is an invalid configuration.
pub fn run_experiment(family: &SequenceFamily, cfg: &ReportConfig) -> Result<ConvergenceReport> {
    cfg.quadrature.validate()?;
    if !(cfg.p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must be at least 1, got {}", cfg.p)));
    }
    let outer = cfg.quadrature.execution;
    let inner = cfg.quadrature.with_execution(Execution::Sequential);
    let columns = cfg.columns();
    let reference = reference(family, cfg, &inner);
    let (limit, mut failures) = limit_row(family, cfg, &columns, &reference, &inner);
    let computed = exec::map(outer, family.index_range(), |&j| {
        member_row(family, cfg, &columns, &reference, j, &inner)
    });
    let mut rows = Vec::with_capacity(computed.len());
    for (&j, (values, fails)) in family.index_range().iter().zip(computed) {
        rows.push(ReportRow { index: j, values });
        failures.extend(fails);
    }
    Ok(ConvergenceReport { family: family.name().to_string(), columns, rows, limit, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::{make_family, FamilyParams};
    use crate::integrand::registry;

    fn cfg(names: &[&str]) -> ReportConfig {
        ReportConfig {
            integrands: names.iter().map(|n| registry(n).unwrap()).collect(),
            ..ReportConfig::default()
        }
    }

    #[test]
    fn shifted_jump_with_ex55() {
        let fam = make_family("shifted_jump", &FamilyParams::default()).unwrap();
        let report = run_experiment(&fam, &cfg(&["ex55"])).unwrap();
        assert!(report.is_complete(), "{:?}", report.failures);
        for v in report.column("F_direct_ex55").unwrap() {
            assert_eq!(v, 0.0);
        }
        assert_eq!(report.limit_value("F_direct_ex55"), Some(1.0));
    }

    #[test]
    fn oscillation_with_abs_is_constant() {
        let fam = make_family("oscillation", &FamilyParams::default())
            .unwrap()
            .with_index_range(vec![1, 2, 4, 8]);
        let report = run_experiment(&fam, &cfg(&["abs"])).unwrap();
        for v in report.column("F_direct_abs").unwrap() {
            assert!((v - 1.0).abs() < 1e-9);
        }
        assert!(report.column("lifting_mass_gap").unwrap().iter().all(|g| *g < 1e-9));
    }

    #[test]
    fn columns_follow_configuration() {
        let c = ReportConfig { k: Some(3.0), graph: false, sup: false, ..cfg(&["area"]) };
        assert_eq!(
            c.columns(),
            vec![
                "strict_dist",
                "area_strict_dist",
                "l1_dist",
                "lp_dist",
                "F_direct_area",
                "lifting_mass_gap",
                "tail_mass"
            ]
        );
    }

    #[test]
    fn rows_are_mode_independent() {
        let fam = make_family("jump_smoothing", &FamilyParams::default())
            .unwrap()
            .with_index_range(vec![1, 2, 4]);
        let mut c = cfg(&["area", "nonconvex"]);
        let par = run_experiment(&fam, &c).unwrap();
        c.quadrature = c.quadrature.with_execution(Execution::Sequential);
        let seq = run_experiment(&fam, &c).unwrap();
        assert_eq!(par.rows, seq.rows);
    }

    #[test]
    fn failures_are_recorded_not_raised() {
        // no recession for an integrand that is not 1-homogeneous at infinity
        let bad = Integrand::new("wild", |_, _, a: &[f64]| {
            let n = crate::vector::norm(a);
            n * (1.0 + n).ln().sin()
        });
        let fam = make_family("shifted_jump", &FamilyParams::default())
            .unwrap()
            .with_index_range(vec![2]);
        let c = ReportConfig { integrands: vec![bad], ..ReportConfig::default() };
        let report = run_experiment(&fam, &c).unwrap();
        assert!(!report.is_complete());
        assert!(report.column("F_direct_wild").unwrap()[0].is_nan());
        assert!(report.column("l1_dist").unwrap()[0].is_finite());
    }
}
