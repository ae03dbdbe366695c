//! Tables, CSV and SVG rendering, and output destinations.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SUBELLIPTIC_OUT_DIR";

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Which CSV columns to draw: one abscissa and one or more ordinates.
#[derive(Clone, Debug)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub ys: Vec<String>,
    pub log_y: bool,
}

/// Everything a job produces.
pub struct Outcome {
    pub json: Value,
    pub table: Table,
    pub plot: Option<PlotSpec>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Resolves `--out`, falling back to `$SUBELLIPTIC_OUT_DIR/<command>.<ext>`.
pub fn destination(out: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_path_buf());
    }
    std::env::var_os(OUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(format!("{command}.{}", format.ext())))
}

pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => outcome.table.to_csv(),
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Line plot of the named columns, read back from the CSV text.
pub fn svg_from_csv(csv: &str, spec: &PlotSpec) -> Result<String, String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().ok_or("empty CSV")?.split(',').collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| format!("column `{name}` missing from CSV"))
    };
    let xi = col(&spec.x)?;
    let yis: Vec<usize> = spec.ys.iter().map(|y| col(y)).collect::<Result<_, _>>()?;
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap_or(f64::NAN)).collect())
        .collect();
    let ty = |v: f64| if spec.log_y { v.ln() } else { v };
    let mut series: Vec<Vec<(f64, f64)>> = Vec::new();
    for &yi in &yis {
        series.push(
            rows.iter()
                .map(|r| (r[xi], ty(r[yi])))
                .filter(|(a, b)| a.is_finite() && b.is_finite())
                .collect(),
        );
    }
    let all: Vec<&(f64, f64)> = series.iter().flatten().collect();
    if all.is_empty() {
        return Err("nothing to plot".into());
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (a, b) in &all {
        x0 = x0.min(*a);
        x1 = x1.max(*a);
        y0 = y0.min(*b);
        y1 = y1.max(*b);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let (w, h, m) = (640.0, 400.0, 50.0);
    let px = |a: f64| m + (a - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |b: f64| h - m - (b - y0) / (y1 - y0) * (h - 2.0 * m);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        w / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} L{m} {} L{} {}" stroke="black" fill="none"/>"#,
        h - m,
        w - m,
        h - m
    );
    let ylabel = if spec.log_y { format!("ln {}", spec.ys.join(", ")) } else { spec.ys.join(", ") };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 12.0,
        escape(&spec.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">{}</text>"#,
        h / 2.0,
        h / 2.0,
        escape(&ylabel)
    );
    for (tick, v, anchor) in [(x0, px(x0), "start"), (x1, px(x1), "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{v:.2}" y="{}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{}</text>"#,
            h - m + 14.0,
            short(tick)
        );
    }
    for (tick, v) in [(y0, py(y0)), (y1, py(y1))] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{v:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            m - 4.0,
            short(tick)
        );
    }
    for (k, pts) in series.iter().enumerate() {
        let c = colors[k % colors.len()];
        let d: Vec<String> = pts.iter().map(|(a, b)| format!("{:.2},{:.2}", px(*a), py(*b))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{c}" fill="none"/>"#, d.join(" "));
        for (a, b) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{c}"/>"#, px(*a), py(*b));
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn short(v: f64) -> String {
    format!("{v:.4}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_into_svg() {
        let mut t = Table::new(&["t", "a", "b"]);
        for i in 0..5 {
            t.push([i.to_string(), (i * i).to_string(), (2 * i + 1).to_string()]);
        }
        let spec = PlotSpec {
            title: "demo <1>".into(),
            x: "t".into(),
            ys: vec!["a".into(), "b".into()],
            log_y: false,
        };
        let svg = svg_from_csv(&t.to_csv(), &spec).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("demo &lt;1&gt;"));
        let bad = PlotSpec {
            ys: vec!["missing".into()],
            ..spec
        };
        assert!(svg_from_csv(&t.to_csv(), &bad).is_err());
    }
}
