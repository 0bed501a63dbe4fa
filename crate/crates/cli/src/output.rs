//! CSV tables and a small self-contained SVG line chart.

use std::fmt::Write as _;

/// A numeric table: one row per family index plus an optional limit row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<(u64, Vec<f64>)>,
    pub limit: Option<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|(_, v)| v[i]).collect())
    }

    /// Append a column; `values` must have one entry per row.
    pub fn push_column(&mut self, name: &str, values: Vec<f64>, limit: f64) {
        debug_assert_eq!(values.len(), self.rows.len());
        self.columns.push(name.to_string());
        for ((_, row), v) in self.rows.iter_mut().zip(values) {
            row.push(v);
        }
        if let Some(l) = &mut self.limit {
            l.push(limit);
        }
    }
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn to_csv(t: &Table) -> String {
    let mut s = String::from("j");
    for c in &t.columns {
        s.push(',');
        s.push_str(c);
    }
    s.push('\n');
    let mut line = |label: String, values: &[f64]| {
        s.push_str(&label);
        for v in values {
            s.push(',');
            s.push_str(&cell(*v));
        }
        s.push('\n');
    };
    for (j, values) in &t.rows {
        line(j.to_string(), values);
    }
    if let Some(l) = &t.limit {
        line("limit".into(), l);
    }
    s
}

const PALETTE: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Line chart of every column against `j` on a logarithmic x axis.
/// Non-finite values are skipped.
pub fn to_svg(title: &str, t: &Table) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 200.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;

    let xs: Vec<f64> = t.rows.iter().map(|(j, _)| (*j.max(&1) as f64).log10()).collect();
    let finite = t.rows.iter().flat_map(|(_, v)| v.iter().copied()).filter(|v| v.is_finite());
    let (mut ylo, mut yhi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !ylo.is_finite() {
        (ylo, yhi) = (0.0, 1.0);
    }
    if yhi - ylo < 1e-12 {
        ylo -= 0.5;
        yhi += 0.5;
    }
    let xlo = xs.first().copied().unwrap_or(0.0);
    let mut xhi = xs.last().copied().unwrap_or(1.0);
    if xhi - xlo < 1e-12 {
        xhi = xlo + 1.0;
    }
    let px = |x: f64| LEFT + (x - xlo) / (xhi - xlo) * (W - LEFT - RIGHT);
    let py = |y: f64| TOP + (yhi - y) / (yhi - ylo) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" font-size="15">{}</text>"#, LEFT, escape(title));
    let (x0, x1, y0, y1) = (px(xlo), px(xhi), py(ylo), py(yhi));
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.1},{y1:.1} V{y0:.1} H{x1:.1}" fill="none" stroke="black"/>"#
    );
    for (j, x) in t.rows.iter().map(|(j, _)| j).zip(&xs) {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{j}</text>"#,
            px(*x),
            y0 + 18.0
        );
    }
    for k in 0..=4 {
        let y = ylo + (yhi - ylo) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            py(y) + 4.0,
            short(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">j (log scale)</text>"#,
        (x0 + x1) / 2.0,
        H - 10.0
    );
    for (c, name) in t.columns.iter().enumerate() {
        let colour = PALETTE[c % PALETTE.len()];
        let mut d = String::new();
        let mut pen_down = false;
        for ((_, row), x) in t.rows.iter().zip(&xs) {
            let v = row[c];
            if !v.is_finite() {
                pen_down = false;
                continue;
            }
            let _ = write!(d, "{}{:.1},{:.1} ", if pen_down { "L" } else { "M" }, px(*x), py(v));
            pen_down = true;
        }
        if !d.is_empty() {
            let _ = writeln!(
                s,
                r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                d.trim_end()
            );
        }
        let ly = TOP + 16.0 * c as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"/>"#,
            W - RIGHT + 15.0,
            W - RIGHT + 35.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            W - RIGHT + 40.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        Table {
            columns: vec!["a".into(), "b".into()],
            rows: vec![(1, vec![1.0, 0.5]), (2, vec![0.25, f64::NAN])],
            limit: Some(vec![0.0, 1.0]),
        }
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&table());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,a,b");
        assert_eq!(lines[1], "1,1.0000000000000000e0,5.0000000000000000e-1");
        assert_eq!(lines[2], "2,2.5000000000000000e-1,NaN");
        assert_eq!(lines[3], "limit,0.0000000000000000e0,1.0000000000000000e0");
    }

    #[test]
    fn csv_round_trips_values() {
        let v = std::f64::consts::PI / 7.0;
        let t = Table { columns: vec!["v".into()], rows: vec![(3, vec![v])], limit: None };
        let csv = to_csv(&t);
        let parsed: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, v);
    }

    #[test]
    fn svg_has_one_path_per_series_and_a_legend() {
        let svg = to_svg("demo <1>", &table());
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("stroke-width=\"1.5\"").count(), 2);
        assert!(svg.contains("demo &lt;1&gt;"));
    }

    #[test]
    fn push_column_extends_rows_and_limit() {
        let mut t = table();
        t.push_column("c", vec![7.0, 8.0], 9.0);
        assert_eq!(t.column("c").unwrap(), vec![7.0, 8.0]);
        assert_eq!(t.limit.unwrap()[2], 9.0);
    }
}
