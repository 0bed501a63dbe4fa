//! Acceptance criteria. Each test prints one `PASS` / `FAIL` line and then asserts.

use bvlift::bvfun::{sup_distance, total_variation, BVFunction1D};
use bvlift::convergence::{
    area_strict_distance, embedding_experiment, make_family, strict_distance, FamilyParams,
    SequenceFamily,
};
use bvlift::functional::{area_functional, evaluate_f, evaluate_f_graph};
use bvlift::generators;
use bvlift::integrand::{
    estimate_recession, registry, smooth_registry_names, Integrand, RecessionSchedule,
};
use bvlift::lifting::{build_lifting, tail_gradient_mass, TestFunction, Q};
use bvlift::vector::norm;
use bvlift::{Error, QuadratureSpec};
use std::io::Write;

/// Period average `(1/2π) ∫₀^{2π} √(1 + (1 + sin s)²) ds`, computed independently
/// with 10⁴-node composite Gauss–Legendre in extended precision (mpmath).
const L_STAR: f64 = 1.513_179_576_643_773_3;

/// Writes straight to stderr so the line survives the test harness's output capture.
fn report(id: u32, ok: bool, detail: String) {
    let line = format!("{} criterion {id}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed: {detail}");
}

fn family(name: &str) -> SequenceFamily {
    make_family(name, &FamilyParams::default()).unwrap()
}

fn mollified(base: BVFunction1D) -> SequenceFamily {
    make_family("mollified", &FamilyParams { base: Some(base), ..FamilyParams::default() })
        .unwrap()
}

/// The four limits whose mollifications witness functional continuity.
fn mollified_limits() -> Vec<(&'static str, BVFunction1D)> {
    vec![
        ("jump", generators::jump_at_point_three()),
        ("three_steps", generators::three_steps()),
        ("quadratic_with_jump", generators::quadratic_with_jump()),
        ("sine_with_jump", generators::sine_with_jump()),
    ]
}

/// Nonincreasing up to the quadrature tolerance.
fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] + 1e-9)
}

/// Range of all traces and sampled values of the first component.
fn value_range(u: &BVFunction1D) -> (f64, f64) {
    let dom = u.domain();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut take = |v: f64| {
        lo = lo.min(v);
        hi = hi.max(v);
    };
    for i in 0..=400 {
        let x = dom.a + dom.length() * i as f64 / 400.0;
        take(u.value(x)[0]);
    }
    for j in u.jumps() {
        take(j.left[0]);
        take(j.right[0]);
    }
    (lo, hi)
}

fn sup_abs(u: &BVFunction1D) -> f64 {
    let dom = u.domain();
    let mut s: f64 = 0.0;
    for i in 0..=2000 {
        s = s.max(norm(&u.value(dom.a + dom.length() * i as f64 / 2000.0)));
    }
    for j in u.jumps() {
        s = s.max(norm(&j.left)).max(norm(&j.right));
    }
    s
}

#[test]
fn criterion_1_oscillation_is_strict_but_not_area_strict() {
    let fam = family("oscillation");
    let mut worst_tv: f64 = 0.0;
    for j in 1..=64 {
        let u = fam.member(j).unwrap();
        worst_tv = worst_tv.max((total_variation(&u).unwrap() - 1.0).abs());
    }
    let u64_ = fam.member(64).unwrap();
    let strict = strict_distance(&u64_, fam.limit()).unwrap();
    let area = area_functional(&u64_).unwrap();
    let limit_area = area_functional(fam.limit()).unwrap();
    let ok = worst_tv <= 1e-9
        && strict < 1e-2
        && (area - L_STAR).abs() <= 1e-3
        && (limit_area - 2f64.sqrt()).abs() <= 1e-12
        && L_STAR - limit_area > 0.09;
    report(
        1,
        ok,
        format!(
            "max |TV(u_j) - 1| = {worst_tv:.2e}, strict(u_64, x) = {strict:.3e}, \
             area(u_64) = {area:.9}, L* - area(x) = {:.6}",
            L_STAR - limit_area
        ),
    );
}

#[test]
fn criterion_2_shifted_jump_is_exact() {
    let fam = family("shifted_jump");
    let f = registry("ex55").unwrap();
    let q = QuadratureSpec::default();
    let mut members = Vec::new();
    for j in 1..=64 {
        members.push(evaluate_f(&f, &fam.member(j).unwrap(), &q).unwrap().total);
    }
    let limit = evaluate_f(&f, fam.limit(), &q).unwrap().total;
    let ok = members.iter().all(|v| *v == 0.0) && limit == 1.0;
    let worst = members.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    report(2, ok, format!("max |F[u_j]| = {worst:e}, F[u] = {limit:e}"));
}

#[test]
fn criterion_3_jump_smoothing_sup_gap_and_area_strict_decay() {
    let fam = family("jump_smoothing");
    let mut worst_sup: f64 = 0.0;
    for j in 1..=64 {
        let u = fam.member(j).unwrap();
        worst_sup = worst_sup.max((sup_distance(&u, fam.limit()).unwrap() - 1.0).abs());
    }
    let d = area_strict_distance(&fam.member(64).unwrap(), fam.limit()).unwrap();
    let ok = worst_sup <= 1e-12 && d < 1e-2;
    report(
        3,
        ok,
        format!("max |sup(u_j, u) - 1| = {worst_sup:.2e}, area_strict(u_64, u) = {d:.6}"),
    );
}

#[test]
fn criterion_4_direct_and_graph_paths_agree() {
    let q = QuadratureSpec::default();
    let names = ["abs", "area", "nonconvex", "ygrowth-2", "ex55"];
    let functions = vec![
        ("linear", generators::linear()),
        ("indicator", generators::indicator()),
        ("three_steps", generators::three_steps()),
        ("three_ramps", generators::three_ramps()),
        ("quadratic_with_jump", generators::quadratic_with_jump()),
        ("sine_with_jump", generators::sine_with_jump()),
        ("cantor", generators::cantor()),
        ("cantor_with_jumps", generators::cantor_with_jumps()),
    ];
    let mut worst = (0.0f64, String::new());
    for name in names {
        let f = registry(name).unwrap();
        for (label, u) in &functions {
            let a = evaluate_f(&f, u, &q).unwrap().total;
            let b = evaluate_f_graph(&f, u, &q).unwrap().total;
            if (a - b).abs() >= worst.0 {
                worst = ((a - b).abs(), format!("{name} on {label}"));
            }
        }
    }
    report(4, worst.0 <= 1e-6, format!("max |direct - graph| = {:.2e} ({})", worst.0, worst.1));
}

#[test]
fn criterion_5_lifting_identities_on_the_suite() {
    let q = QuadratureSpec::default();
    let mut worst_mass: f64 = 0.0;
    let mut worst_q = (0.0f64, "");
    for (seed, (name, u)) in generators::suite().into_iter().enumerate() {
        let mu = build_lifting(&u, &q).unwrap();
        worst_mass = worst_mass.max((mu.total_mass() - total_variation(&u).unwrap()).abs());
        let (lo, hi) = value_range(&u);
        for phi in TestFunction::random_bumps(20, u.domain(), lo, hi, u.dim(), 100 + seed as u64) {
            let v = Q(&phi, &u, &mu).unwrap().abs();
            if v >= worst_q.0 {
                worst_q = (v, name);
            }
        }
    }
    let ok = worst_mass <= 1e-9 && worst_q.0 <= 1e-6;
    report(
        5,
        ok,
        format!(
            "max |mass - TV| = {worst_mass:.2e}, max |Q| = {:.2e} ({})",
            worst_q.0, worst_q.1
        ),
    );
}

#[test]
fn criterion_6_functionals_converge_along_mollifications() {
    let q = QuadratureSpec::default();
    let mut problems = Vec::new();
    let mut worst_final: f64 = 0.0;
    for (label, base) in mollified_limits() {
        let fam = mollified(base);
        let members: Vec<BVFunction1D> =
            fam.index_range().iter().map(|&j| fam.member(j).unwrap()).collect();
        for name in smooth_registry_names() {
            let f = registry(name).unwrap();
            assert!(f.has_recession());
            let limit = evaluate_f(&f, fam.limit(), &q).unwrap().total;
            let gaps: Vec<f64> = members
                .iter()
                .map(|u| (evaluate_f(&f, u, &q).unwrap().total - limit).abs())
                .collect();
            let last = *gaps.last().unwrap();
            worst_final = worst_final.max(last);
            if !nonincreasing(&gaps) || last >= 1e-2 {
                problems.push(format!("{name} on {label}: {gaps:?}"));
            }
        }
    }
    report(
        6,
        problems.is_empty(),
        format!("max final |F[u_eps] - F[u]| = {worst_final:.2e}; violations: {problems:?}"),
    );
}

#[test]
fn criterion_7_radial_embedding_witness() {
    let q = QuadratureSpec::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["radial_steepening", "radial_mollified"] {
        let fam = family(name);
        let t = embedding_experiment(&fam, 2, &q).unwrap();
        let l2: Vec<f64> = t.rows.iter().map(|r| r.lp_dist).collect();
        let last = *l2.last().unwrap();
        ok &= l2.windows(2).all(|w| w[1] < w[0]) && last < 1e-2;
        lines.push(format!("{name}: L2 at j={} is {last:.3e}", t.last().unwrap().index));
    }
    let flat = embedding_experiment(&family("jump_smoothing"), 1, &q).unwrap();
    let worst = flat.rows.iter().map(|r| (r.sup_dist - 1.0).abs()).fold(0.0, f64::max);
    ok &= worst <= 1e-12;
    lines.push(format!("d=1 max |sup - 1| = {worst:.1e}"));
    report(7, ok, lines.join("; "));
}

#[test]
fn criterion_8_recession_estimator() {
    let area = Integrand::new("sqrt", |_, _, a: &[f64]| (1.0 + a[0] * a[0]).sqrt());
    let schedule = RecessionSchedule::default();
    let mut worst: f64 = 0.0;
    for &a in &[-7.0, -2.0, -0.5, 0.3, 1.0, 2.0, 5.0, 40.0] {
        let e = estimate_recession(&area, 0.2, &[0.5], &[a], &schedule).unwrap();
        worst = worst.max((e.value - a.abs()).abs());
    }
    let wild = Integrand::new("wild", |_, _, a: &[f64]| {
        let n = a[0].abs();
        n * (1.0 + n).ln().sin()
    });
    let rejected = [-3.0, 1.0, 2.0].iter().all(|&a| {
        matches!(
            estimate_recession(&wild, 0.2, &[0.5], &[a], &schedule),
            Err(Error::NoRecession { .. })
        )
    });
    report(
        8,
        worst <= 1e-3 && rejected,
        format!("max |est - |A|| = {worst:.2e}, oscillating integrand rejected: {rejected}"),
    );
}

#[test]
fn criterion_9_tail_mass_control() {
    let q = QuadratureSpec::default();
    let mut problems = Vec::new();
    let mut checked = 0;
    for (label, base) in mollified_limits() {
        let sup = sup_abs(&base);
        let fam = mollified(base);
        for &j in &[1, 3, 6, 10] {
            let u = fam.member(j).unwrap();
            let ks: Vec<f64> = (0..).map(|i| 0.125 * i as f64).take_while(|k| *k <= sup + 1.5).collect();
            let tails: Vec<f64> = ks.iter().map(|&k| tail_gradient_mass(&u, k, &q).unwrap()).collect();
            let beyond = tail_gradient_mass(&u, sup + 1.0 + 1e-9, &q).unwrap();
            checked += ks.len();
            if !nonincreasing(&tails) || beyond != 0.0 {
                problems.push(format!("{label} j={j}: tails {tails:?}, beyond {beyond:e}"));
            }
        }
    }
    report(9, problems.is_empty(), format!("{checked} levels checked; violations: {problems:?}"));
}
