use super::Integrand;
use crate::vector::norm;

fn bump_tail(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// C^∞ step: 0 for `s <= 0`, 1 for `s >= 1`, strictly increasing in between.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let (l, r) = (bump_tail(s), bump_tail(1.0 - s));
    l / (l + r)
}

/// `χ_n(r) = 1 - S(r - n)`: equal to 1 for `r <= n` and 0 for `r >= n + 1`.
pub fn cutoff(n: f64, r: f64) -> f64 {
    1.0 - smooth_step(r - n)
}

/// The n-th member (n >= 1) of the partition of unity `φ_1 = χ_1`,
/// `φ_n = χ_n - χ_{n-1}`, supported in `n - 1 <= r <= n + 1`.
pub fn partition_of_unity(n: u32, r: f64) -> f64 {
    assert!(n >= 1, "partition index starts at 1");
    let n = n as f64;
    if n == 1.0 {
        cutoff(1.0, r)
    } else {
        cutoff(n, r) - cutoff(n - 1.0, r)
    }
}

/// `f_k = (φ_1 + ... + φ_k)(y) · f = χ_k(|y|) · f`, with recession `χ_k(|y|) f^∞`.
pub fn truncate_integrand(f: &Integrand, k: u32) -> Integrand {
    assert!(k >= 1, "truncation level must be positive");
    let kf = k as f64;
    let base = f.eval_fn().clone();
    let g = f.growth();
    let mut out = Integrand::new(format!("{}_k{}", f.name(), k), move |x, y, a| {
        let c = cutoff(kf, norm(y));
        if c == 0.0 {
            0.0
        } else {
            c * base(x, y, a)
        }
    })
    .with_growth(g.c * (1.0 + (kf + 1.0).powf(g.p)), 1.0);
    if let Some(r) = f.recession_fn() {
        let r = r.clone();
        out = out.with_recession(move |x, y, a| {
            let c = cutoff(kf, norm(y));
            if c == 0.0 {
                0.0
            } else {
                c * r(x, y, a)
            }
        });
    }
    if !f.exceptional_set().is_empty() {
        out = out.with_exceptional_set(f.exceptional_set().to_vec());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_profile() {
        assert_eq!(smooth_step(-0.5), 0.0);
        assert_eq!(smooth_step(1.5), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 1..100 {
            let s = smooth_step(i as f64 / 100.0);
            assert!(s >= prev);
            if (10..90).contains(&i) {
                assert!(s > prev);
            }
            prev = s;
        }
    }

    #[test]
    fn partition_sums_telescope() {
        for k in 1..6u32 {
            for i in 0..80 {
                let r = i as f64 * 0.1;
                let s: f64 = (1..=k).map(|n| partition_of_unity(n, r)).sum();
                assert!((s - cutoff(k as f64, r)).abs() < 1e-14);
                assert!(partition_of_unity(k, r) >= -1e-15);
            }
        }
    }

    #[test]
    fn truncation_sandwich() {
        let f = Integrand::new("ya", |_, y: &[f64], a: &[f64]| norm(y) + norm(a))
            .with_recession(|_, _, a: &[f64]| norm(a));
        let f3 = truncate_integrand(&f, 3);
        assert_eq!(f3.eval(0.0, &[5.0], &[1.0]), 0.0);
        assert_eq!(f3.eval(0.0, &[-4.0], &[1.0]), 0.0);
        assert_eq!(f3.eval(0.0, &[2.0], &[1.5]), 3.5);
        assert_eq!(f3.eval(0.0, &[-3.0], &[1.5]), 4.5);
        let mid = f3.eval(0.0, &[3.5], &[1.0]);
        assert!(mid > 0.0 && mid < 4.5);
        assert_eq!(f3.recession(0.0, &[2.0], &[-2.0]).unwrap(), 2.0);
        assert_eq!(f3.recession(0.0, &[4.0], &[-2.0]).unwrap(), 0.0);
    }
}
