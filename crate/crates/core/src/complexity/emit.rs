//! CSV and SVG output for complexity profiles.

use std::fmt::Write;

use super::ComplexityProfile;

/// `n,value` lines. Unstabilized values are preceded by a `#` warning.
pub fn profile_csv(p: &ComplexityProfile) -> String {
    let mut out = String::from("n,value\n");
    if let Some(v) = &p.valuation {
        let _ = writeln!(out, "# kind={} valuation={v}", p.kind);
    } else {
        let _ = writeln!(out, "# kind={}", p.kind);
    }
    for (n, (&value, &stable)) in p.values.iter().zip(&p.stabilized).enumerate() {
        if !stable {
            let _ = writeln!(out, "# warning: n={n} did not stabilize under the prefix cap");
        }
        let _ = writeln!(out, "{n},{value}");
    }
    out
}

/// `n,value` lines for an arbitrary integer series.
pub fn series_csv(values: &[i64]) -> String {
    let mut out = String::from("n,value\n");
    for (n, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{n},{v}");
    }
    out
}

#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub label: String,
    pub values: Vec<i64>,
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// A self-contained step plot of one or more series over `n = 0, 1, ...`.
pub fn step_plot_svg(title: &str, series: &[PlotSeries]) -> String {
    let (w, h) = (800.0f64, 420.0f64);
    let (left, right, top, bottom) = (60.0, 20.0, 40.0, 50.0);
    let n_max = series.iter().map(|s| s.values.len()).max().unwrap_or(1).max(1) as f64;
    let lo = series.iter().flat_map(|s| s.values.iter().copied()).min().unwrap_or(0).min(0);
    let hi = series.iter().flat_map(|s| s.values.iter().copied()).max().unwrap_or(1).max(lo + 1);
    let x = |n: f64| left + (w - left - right) * n / n_max;
    let y = |v: i64| top + (h - top - bottom) * (hi - v) as f64 / (hi - lo) as f64;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<path d="M{l},{t} L{l},{b} L{r},{b}" stroke="black" fill="none"/>"#,
        l = left,
        t = top,
        b = h - bottom,
        r = w - right
    );
    let y_step = nice_step((hi - lo) as f64);
    let mut v = (lo as f64 / y_step).ceil() * y_step;
    while v <= hi as f64 {
        let yy = y(v as i64);
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{yy}" x2="{}" y2="{yy}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">{}</text>"##,
            left,
            w - right,
            left - 6.0,
            yy + 4.0,
            v
        );
        v += y_step;
    }
    let x_step = nice_step(n_max);
    let mut n = 0.0;
    while n <= n_max {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            x(n),
            h - bottom + 18.0,
            n
        );
        n += x_step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#,
        w / 2.0,
        h - 12.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (n, &v) in s.values.iter().enumerate() {
            let (x0, x1, yy) = (x(n as f64), x(n as f64 + 1.0), y(v));
            if n == 0 {
                let _ = write!(d, "M{x0:.2},{yy:.2}");
            } else {
                let _ = write!(d, " L{x0:.2},{yy:.2}");
            }
            let _ = write!(d, " L{x1:.2},{yy:.2}");
        }
        let _ = writeln!(
            svg,
            r#"<path d="{d}" stroke="{color}" stroke-width="1.5" fill="none"/>"#
        );
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="12" height="3" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
            w - right - 150.0,
            ly - 4.0,
            w - right - 132.0,
            ly,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn nice_step(span: f64) -> f64 {
    let raw = (span / 8.0).max(1.0);
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let nice = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::Kind;

    #[test]
    fn csv_marks_unstable_rows() {
        let p = ComplexityProfile::new(Kind::Abelian, None, vec![1, 2, 3], vec![true, true, false]);
        let csv = profile_csv(&p);
        assert!(csv.starts_with("n,value\n# kind=abelian\n0,1\n1,2\n# warning: n=2"));
        assert!(csv.ends_with("2,3\n"));
    }

    #[test]
    fn svg_is_self_contained() {
        let s = step_plot_svg(
            "a < b",
            &[
                PlotSeries { label: "abelian".into(), values: vec![1, 3, 6, 7] },
                PlotSeries { label: "difference".into(), values: vec![0, 0, -1, 0] },
            ],
        );
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert!(!s.contains("href"));
        assert_eq!(s.matches("<path").count(), 3);
    }
}
