use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Estimate, GaussLegendre};
use crate::error::{Error, Result};
use crate::exec::pairwise_sum;

/// Cells shallower than this are always split, so narrow features are not missed.
const MIN_DEPTH: u32 = 6;

/// Geometry of a symmetric self-similar Cantor set on `[alpha, beta]`.
///
/// Each construction step keeps the two outer sub-intervals of relative length
/// `ratio = (1 - λ) / 2` and removes the middle fraction λ. The associated
/// probability measure gives mass 1/2 to each kept sub-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorGeometry {
    pub alpha: f64,
    pub beta: f64,
    pub ratio: f64,
}

/// One cell of the construction at a given depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorCell {
    pub lo: f64,
    pub len: f64,
    /// Normalised measure of the cell, `2^-depth`.
    pub mass: f64,
    /// Normalised measure to the left of the cell.
    pub offset: f64,
    pub depth: u32,
}

impl CantorCell {
    pub fn hi(&self) -> f64 {
        self.lo + self.len
    }

    pub fn children(&self, ratio: f64) -> [CantorCell; 2] {
        let len = self.len * ratio;
        let mass = 0.5 * self.mass;
        [
            CantorCell { lo: self.lo, len, mass, offset: self.offset, depth: self.depth + 1 },
            CantorCell {
                lo: self.hi() - len,
                len,
                mass,
                offset: self.offset + mass,
                depth: self.depth + 1,
            },
        ]
    }

    /// The removed middle interval.
    pub fn gap(&self, ratio: f64) -> (f64, f64) {
        let len = self.len * ratio;
        (self.lo + len, self.hi() - len)
    }

    fn contains_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi()
    }
}

impl CantorGeometry {
    pub fn new(alpha: f64, beta: f64, removed_fraction: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
            return Err(Error::InvalidParameter(format!(
                "Cantor support [{alpha}, {beta}] is not a proper interval"
            )));
        }
        if !(removed_fraction > 0.0 && removed_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "removed fraction must lie in (0, 1), got {removed_fraction}"
            )));
        }
        Ok(CantorGeometry { alpha, beta, ratio: 0.5 * (1.0 - removed_fraction) })
    }

    pub fn removed_fraction(&self) -> f64 {
        1.0 - 2.0 * self.ratio
    }

    pub fn root(&self) -> CantorCell {
        CantorCell { lo: self.alpha, len: self.beta - self.alpha, mass: 1.0, offset: 0.0, depth: 0 }
    }

    /// Largest usable depth: cells must stay resolvable in floating point.
    pub fn max_depth(&self, requested: u32) -> u32 {
        let len = self.beta - self.alpha;
        let scale = self.alpha.abs().max(self.beta.abs()).max(len);
        let mut depth = 0;
        let mut l = len;
        while depth < requested && l * self.ratio > 1e-14 * scale {
            l *= self.ratio;
            depth += 1;
        }
        depth
    }

    /// Normalised cumulative function of the depth-`depth` approximation of the
    /// Cantor measure: exact on the removed gaps up to that depth, linear inside the
    /// remaining cells. Differs from the true staircase by at most `2^-depth`.
    pub fn staircase(&self, x: f64, depth: u32) -> f64 {
        if x <= self.alpha {
            return 0.0;
        }
        if x >= self.beta {
            return 1.0;
        }
        let mut cell = self.root();
        for _ in 0..self.max_depth(depth) {
            let (g0, g1) = cell.gap(self.ratio);
            if x < g0 {
                cell = cell.children(self.ratio)[0];
            } else if x <= g1 {
                return cell.offset + 0.5 * cell.mass;
            } else {
                cell = cell.children(self.ratio)[1];
            }
        }
        let t = ((x - cell.lo) / cell.len).clamp(0.0, 1.0);
        cell.offset + cell.mass * t
    }

    /// Standard deviation of the normalised Cantor measure on the unit interval.
    pub fn unit_std_dev(&self) -> f64 {
        let r = self.ratio;
        ((1.0 - r) / (4.0 * (1.0 + r))).sqrt()
    }

    /// Integral of `f` against the normalised Cantor measure, discretised at `depth`.
    ///
    /// Non-leaf cells use the symmetric two-point rule matching the first three
    /// moments of the self-similar measure; cells are refined adaptively by the
    /// parent/children discrepancy. Cells containing one of `cuts` are always
    /// refined, so discontinuities of `f` must be listed there. Leaf cells carry
    /// uniform mass and are integrated with a Gauss–Legendre rule split at the cuts.
    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        cuts: &[f64],
        tolerance: f64,
        depth: u32,
        budget: usize,
    ) -> Result<Estimate> {
        let max_depth = self.max_depth(depth);
        let sigma = self.unit_std_dev();
        let leaf_rule = GaussLegendre::unit(8);
        let mut cuts: Vec<f64> =
            cuts.iter().copied().filter(|c| *c > self.alpha && *c < self.beta).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let rule = |c: &CantorCell| -> f64 {
            let x0 = c.lo + c.len * (0.5 - sigma);
            let x1 = c.lo + c.len * (0.5 + sigma);
            0.5 * c.mass * (f(x0) + f(x1))
        };
        let leaf = |c: &CantorCell| -> f64 {
            let mut pts = vec![c.lo];
            pts.extend(cuts.iter().copied().filter(|x| c.contains_interior(*x)));
            pts.push(c.hi());
            let s: f64 = pts.windows(2).map(|w| leaf_rule.integrate(w[0], w[1], &f)).sum();
            s * c.mass / c.len
        };
        let has_cut = |c: &CantorCell| cuts.iter().any(|x| c.contains_interior(*x));
        let make = |c: CantorCell| -> Item {
            if c.depth >= max_depth {
                return Item { cell: c, value: leaf(&c), error: 0.0, refinable: false };
            }
            let kids = c.children(self.ratio);
            let fine: f64 = kids
                .iter()
                .map(|k| if k.depth >= max_depth { leaf(k) } else { rule(k) })
                .sum();
            let coarse = rule(&c);
            let mut error = (coarse - fine).abs();
            if has_cut(&c) || c.depth < MIN_DEPTH {
                error = error.max(c.mass * (1.0 + coarse.abs().max(fine.abs()) / c.mass));
            }
            Item { cell: c, value: fine, error, refinable: true }
        };

        let mut heap = BinaryHeap::new();
        let mut done = Vec::new();
        let first = make(self.root());
        let mut total_error = first.error;
        heap.push(first);
        let mut steps = 0usize;
        while total_error > tolerance {
            let Some(item) = heap.pop() else { break };
            if !item.refinable {
                done.push(item);
                continue;
            }
            if steps >= budget {
                heap.push(item);
                return Err(Error::QuadratureFailure { budget, error: total_error, tolerance });
            }
            steps += 1;
            total_error -= item.error;
            for k in item.cell.children(self.ratio) {
                let child = make(k);
                total_error += child.error;
                heap.push(child);
            }
            if steps % 1024 == 0 {
                total_error = heap.iter().chain(&done).map(|i| i.error).sum();
            }
        }
        done.extend(heap);
        done.sort_by(|a, b| a.cell.lo.total_cmp(&b.cell.lo));
        let values: Vec<f64> = done.iter().map(|i| i.value).collect();
        let errors: Vec<f64> = done.iter().map(|i| i.error).collect();
        Ok(Estimate { value: pairwise_sum(&values), error: pairwise_sum(&errors) })
    }
}

struct Item {
    cell: CantorCell,
    value: f64,
    error: f64,
    refinable: bool,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.cell.lo.total_cmp(&self.cell.lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> CantorGeometry {
        CantorGeometry::new(0.0, 1.0, 1.0 / 3.0).unwrap()
    }

    #[test]
    fn staircase_endpoints_and_gaps() {
        let c = standard();
        assert_eq!(c.staircase(0.0, 24), 0.0);
        assert_eq!(c.staircase(1.0, 24), 1.0);
        assert_eq!(c.staircase(0.5, 24), 0.5);
        // 1/4 is in the Cantor set with staircase value 1/3; the usable depth is
        // capped near 29, so the error is about 2^-30.
        assert!((c.staircase(0.25, 40) - 1.0 / 3.0).abs() < 2e-9);
        assert_eq!(c.staircase(0.8, 24), 0.75);
    }

    #[test]
    fn staircase_depth_bound() {
        let c = standard();
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            for k in [2u32, 5, 10, 16] {
                let d = (c.staircase(x, k) - c.staircase(x, k + 4)).abs();
                assert!(d <= 0.5f64.powi(k as i32) + 1e-15, "x={x} k={k} d={d}");
            }
        }
    }

    #[test]
    fn unit_variance_of_middle_thirds_measure_is_one_eighth() {
        let c = standard();
        assert!((c.unit_std_dev().powi(2) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn moments_by_self_similarity() {
        // E[X] = 1/2, E[X^2] = 1/4 + 1/8 = 3/8 for the middle-thirds measure.
        let c = standard();
        let m0 = c.integrate(|_| 1.0, &[], 1e-12, 24, 10_000).unwrap();
        let m1 = c.integrate(|x| x, &[], 1e-12, 24, 10_000).unwrap();
        let m2 = c.integrate(|x| x * x, &[], 1e-12, 24, 10_000).unwrap();
        assert!((m0.value - 1.0).abs() < 1e-15);
        assert!((m1.value - 0.5).abs() < 1e-15);
        assert!((m2.value - 0.375).abs() < 1e-14);
    }

    #[test]
    fn indicator_with_cut_matches_staircase() {
        let c = standard();
        for cut in [0.1, 0.25, 0.7] {
            let est = c
                .integrate(|x| if x < cut { 1.0 } else { 0.0 }, &[cut], 1e-10, 24, 100_000)
                .unwrap();
            assert!((est.value - c.staircase(cut, 24)).abs() < 1e-9, "cut={cut}");
        }
    }

    #[test]
    fn smooth_integrand_converges() {
        // E[exp(X)] by self-similarity: E[e^X] = (1 + e^{2/3})/2 * E[e^{X/3}], evaluated
        // through the infinite product.
        let c = standard();
        let mut want = 1.0;
        let mut s: f64 = 1.0;
        for _ in 0..60 {
            want *= 0.5 * (1.0 + (2.0 * s / 3.0).exp());
            s /= 3.0;
        }
        let got = c.integrate(f64::exp, &[], 1e-12, 30, 100_000).unwrap();
        assert!((got.value - want).abs() < 1e-11, "{} vs {}", got.value, want);
    }
}
