use super::{smooth_step, Integrand};
use crate::error::{Error, Result};
use crate::vector::norm;

/// Fixed registry names (the `ygrowth-<p>` family is parametric).
pub fn registry_names() -> &'static [&'static str] {
    &["abs", "area", "nonconvex", "ygrowth-2", "ex55"]
}

/// Registry entries whose recession function exists on the whole domain.
pub fn smooth_registry_names() -> &'static [&'static str] {
    &["abs", "area", "nonconvex", "ygrowth-2"]
}

/// The cut-off `h(A) = 1 - S(|A| - 1)`: 1 on `|A| <= 1`, 0 on `|A| >= 2`.
fn ex55_h(a: f64) -> f64 {
    1.0 - smooth_step(a.abs() - 1.0)
}

fn ex55_g(x: f64, a: f64) -> f64 {
    let n = a.abs();
    if n == 0.0 {
        return 0.0;
    }
    let s = if x <= -1.0 / n {
        0.0
    } else if x < 0.0 {
        n * (x + 1.0 / n)
    } else {
        1.0
    };
    n * s
}

/// Look up a built-in integrand by name.
pub fn registry(name: &str) -> Result<Integrand> {
    match name {
        "abs" => Ok(Integrand::new("abs", |_, _, a: &[f64]| norm(a))
            .with_recession(|_, _, a: &[f64]| norm(a))
            .with_growth(1.0, 1.0)),
        "area" => Ok(Integrand::new("area", |_, _, a: &[f64]| {
            let n = norm(a);
            (1.0 + n * n).sqrt()
        })
        .with_recession(|_, _, a: &[f64]| norm(a))
        .with_growth(1.0, 1.0)),
        "nonconvex" => Ok(Integrand::new("nonconvex", |_, _, a: &[f64]| {
            let n = norm(a);
            (1.0 + n * n).sqrt() + (-n * n).exp()
        })
        .with_recession(|_, _, a: &[f64]| norm(a))
        .with_growth(2.0, 1.0)),
        "ex55" => Ok(Integrand::new("ex55", |x, _, a: &[f64]| {
            let n = norm(a);
            (1.0 - ex55_h(n)) * ex55_g(x, n)
        })
        .with_recession(|x, _, a: &[f64]| if x >= 0.0 { norm(a) } else { 0.0 })
        .with_growth(1.0, 1.0)
        .with_exceptional_set(vec![0.0])),
        _ => {
            if let Some(p) = name.strip_prefix("ygrowth-") {
                let p: f64 = p.parse().map_err(|_| Error::UnknownName(name.to_string()))?;
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "ygrowth exponent must lie in [1, inf), got {p}"
                    )));
                }
                return Ok(Integrand::new(name, move |_, y: &[f64], a: &[f64]| {
                    norm(y).powf(p) + norm(a)
                })
                .with_recession(|_, _, a: &[f64]| norm(a))
                .with_growth(1.0, p));
            }
            Err(Error::UnknownName(name.to_string()))
        }
    }
}
