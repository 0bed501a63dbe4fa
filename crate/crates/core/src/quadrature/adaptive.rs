use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{gk15, CantorCell, CantorGeometry, Estimate};
use crate::error::{Error, Result};
use crate::exec::pairwise_sum;

#[derive(Clone, Copy)]
enum Cell {
    Plain { a: f64, b: f64 },
    Zone { zone: usize, cell: CantorCell },
}

impl Cell {
    fn span(&self) -> (f64, f64) {
        match *self {
            Cell::Plain { a, b } => (a, b),
            Cell::Zone { cell, .. } => (cell.lo, cell.hi()),
        }
    }
}

struct Item {
    cell: Cell,
    value: f64,
    error: f64,
    magnitude: f64,
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
            .then_with(|| other.cell.span().0.total_cmp(&self.cell.span().0))
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// `breakpoints` are points where `f` may be non-smooth; they are never used as
/// nodes. `zones` are Cantor sets inside `[a, b]` on which `f` may be only Hölder
/// continuous: there the subdivision follows the Cantor construction (removed gaps
/// become ordinary intervals), down to `max_depth`, below which cells are bisected
/// like ordinary intervals. Zones may extend beyond `[a, b]` and contain
/// breakpoints; zones that overlap an earlier zone are ignored.
#[allow(clippy::too_many_arguments)]
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    zones: &[CantorGeometry],
    tolerance: f64,
    budget: usize,
    max_depth: u32,
) -> Result<Estimate> {
    if !(a < b) {
        return Ok(Estimate::default());
    }
    let mut bps: Vec<f64> = breakpoints.iter().copied().filter(|x| *x > a && *x < b).collect();
    bps.sort_by(f64::total_cmp);
    bps.dedup();

    let mut used: Vec<CantorGeometry> = Vec::new();
    for z in zones {
        if z.beta <= a || z.alpha >= b {
            continue;
        }
        if used.iter().any(|u| u.alpha < z.beta && z.alpha < u.beta) {
            continue;
        }
        used.push(*z);
    }
    used.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));
    let depths: Vec<u32> = used.iter().map(|z| z.max_depth(max_depth)).collect();

    let eval = |cell: Cell| -> Item {
        let (lo, hi) = cell.span();
        let (value, error, magnitude) = gk15(&f, lo, hi);
        let refinable = match cell {
            Cell::Plain { a, b } => {
                let mid = 0.5 * (a + b);
                mid > a && mid < b && (b - a) > 1e-15 * a.abs().max(b.abs()).max(1e-300)
            }
            Cell::Zone { .. } => true,
        };
        Item { cell, value, error, magnitude, refinable }
    };
    let plain_items = |lo: f64, hi: f64, out: &mut Vec<Item>| {
        let mut prev = lo;
        for &x in bps.iter().filter(|x| **x > lo && **x < hi) {
            out.push(eval(Cell::Plain { a: prev, b: x }));
            prev = x;
        }
        if hi > prev {
            out.push(eval(Cell::Plain { a: prev, b: hi }));
        }
    };

    // Zone cells that straddle `a`, `b` or a breakpoint are opened up along the
    // construction until every cell lies between consecutive cut points.
    let split_zone = |i: usize, out: &mut Vec<Item>| {
        let geo = &used[i];
        let mut stack = vec![geo.root()];
        while let Some(cell) = stack.pop() {
            let (lo, hi) = (cell.lo, cell.hi());
            if hi <= a || lo >= b {
                continue;
            }
            let cut = lo < a || hi > b || bps.iter().any(|x| *x > lo && *x < hi);
            if !cut {
                out.push(eval(Cell::Zone { zone: i, cell }));
            } else if cell.depth >= depths[i] {
                plain_items(lo.max(a), hi.min(b), out);
            } else {
                let (g0, g1) = cell.gap(geo.ratio);
                if g1 > a && g0 < b {
                    plain_items(g0.max(a), g1.min(b), out);
                }
                let [left, right] = cell.children(geo.ratio);
                stack.push(right);
                stack.push(left);
            }
        }
    };

    let mut initial = Vec::new();
    let mut cursor = a;
    for i in 0..used.len() {
        plain_items(cursor, used[i].alpha.max(a), &mut initial);
        split_zone(i, &mut initial);
        cursor = used[i].beta.min(b);
    }
    plain_items(cursor, b, &mut initial);

    let mut total_error: f64 = initial.iter().map(|i| i.error).sum();
    let mut total_mag: f64 = initial.iter().map(|i| i.magnitude).sum();
    let mut heap: BinaryHeap<Item> = initial.into_iter().collect();
    let mut done: Vec<Item> = Vec::new();
    let mut steps = 0usize;
    let effective = |mag: f64| tolerance.max(50.0 * f64::EPSILON * mag);

    while total_error > effective(total_mag) {
        let Some(item) = heap.pop() else { break };
        if !item.refinable {
            done.push(item);
            continue;
        }
        if steps >= budget {
            let error = total_error;
            return Err(Error::QuadratureFailure { budget, error, tolerance });
        }
        steps += 1;
        let mut children = Vec::with_capacity(4);
        match item.cell {
            Cell::Plain { a, b } => {
                let m = 0.5 * (a + b);
                children.push(eval(Cell::Plain { a, b: m }));
                children.push(eval(Cell::Plain { a: m, b }));
            }
            Cell::Zone { zone, cell } => {
                let geo = &used[zone];
                if cell.depth >= depths[zone] {
                    let (lo, hi) = (cell.lo, cell.hi());
                    let m = 0.5 * (lo + hi);
                    children.push(eval(Cell::Plain { a: lo, b: m }));
                    children.push(eval(Cell::Plain { a: m, b: hi }));
                } else {
                    let [left, right] = cell.children(geo.ratio);
                    let (g0, g1) = cell.gap(geo.ratio);
                    children.push(eval(Cell::Zone { zone, cell: left }));
                    plain_items(g0, g1, &mut children);
                    children.push(eval(Cell::Zone { zone, cell: right }));
                }
            }
        }
        total_error -= item.error;
        total_mag -= item.magnitude;
        for c in children {
            total_error += c.error;
            total_mag += c.magnitude;
            heap.push(c);
        }
        if steps % 1024 == 0 {
            total_error = heap.iter().chain(&done).map(|i| i.error).sum();
            total_mag = heap.iter().chain(&done).map(|i| i.magnitude).sum();
        }
    }

    done.extend(heap);
    done.sort_by(|x, y| x.cell.span().0.total_cmp(&y.cell.span().0));
    let values: Vec<f64> = done.iter().map(|i| i.value).collect();
    let errors: Vec<f64> = done.iter().map(|i| i.error).collect();
    Ok(Estimate { value: pairwise_sum(&values), error: pairwise_sum(&errors) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, bps: &[f64], zones: &[CantorGeometry]) -> Estimate {
        integrate(f, a, b, bps, zones, 1e-10, 100_000, 24).unwrap()
    }

    #[test]
    fn smooth_and_oscillatory() {
        let e = run(|x| x.sin(), 0.0, std::f64::consts::PI, &[], &[]);
        assert!((e.value - 2.0).abs() < 1e-12);
        let k = 2.0 * std::f64::consts::PI * 64.0;
        let e = run(|x| 1.0 + (k * x).cos(), 0.0, 1.0, &[], &[]);
        assert!((e.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unlisted_discontinuity_is_resolved() {
        let e = run(|x| if x < 0.3 { 1.0 } else { 2.0 }, 0.0, 1.0, &[], &[]);
        assert!((e.value - 1.7).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn listed_breakpoint_is_exact() {
        let e = run(|x| if x < 0.3 { 1.0 } else { 2.0 }, 0.0, 1.0, &[0.3], &[]);
        assert!((e.value - 1.7).abs() < 1e-14);
    }

    #[test]
    fn staircase_integrals() {
        // ∫_0^1 c(x) dx = 1/2 and ∫_0^1 c(x)^2 dx = 3/10 for the middle-thirds staircase.
        let z = CantorGeometry::new(0.0, 1.0, 1.0 / 3.0).unwrap();
        let e = run(|x| z.staircase(x, 24), 0.0, 1.0, &[], &[z]);
        assert!((e.value - 0.5).abs() < 1e-10, "{}", e.value);
        let e = run(|x| z.staircase(x, 24).powi(2), 0.0, 1.0, &[], &[z]);
        assert!((e.value - 0.3).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn clipped_zone_with_breakpoint() {
        let z = CantorGeometry::new(0.0, 1.0, 1.0 / 3.0).unwrap();
        // ∫_0^{1/2} c = 1/6 by self-similarity and the flat middle gap
        let e = run(|x| z.staircase(x, 24), 0.0, 0.5, &[], &[z]);
        assert!((e.value - 1.0 / 6.0).abs() < 1e-10, "{}", e.value);
        // ∫_{0.4}^1 c = 1/2 - 1/12 - 1/30
        let f = |x: f64| if x > 0.4 { z.staircase(x, 24) } else { 0.0 };
        let e = run(f, 0.0, 1.0, &[0.4], &[z]);
        assert!((e.value - 23.0 / 60.0).abs() < 1e-10, "{}", e.value);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-12, 1.0, &[], &[], 1e-14, 10, 24);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
