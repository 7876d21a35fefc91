//! Experiment reports and their CSV, JSON and SVG renderings.

use crate::error::Result;
use crate::norms::NormEstimate;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Fixed 17-significant-digit rendering used in every table.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header of `{}`", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_num(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// One registered expectation and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The pass rule, verbatim.
    pub rule: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedEstimate {
    pub name: String,
    pub estimate: NormEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub verdicts: Vec<NamedEstimate>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(id: &str) -> Self {
        Self { id: id.into(), parameters: BTreeMap::new(), verdicts: Vec::new(), tables: Vec::new(), checks: Vec::new(), notes: Vec::new(), passed: true }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.into(), serde_json::to_value(value).expect("parameters serialize"));
    }

    pub fn verdict(&mut self, name: &str, estimate: NormEstimate) {
        self.verdicts.push(NamedEstimate { name: name.into(), estimate });
    }

    pub fn estimate(&self, name: &str) -> Option<&NormEstimate> {
        self.verdicts.iter().find(|v| v.name == name).map(|v| &v.estimate)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Record an expectation; a failing check fails the report.
    pub fn check(&mut self, name: &str, rule: &str, passed: bool, detail: String) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), rule: rule.into(), passed, detail });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Human-readable failure summary including the estimate histories.
    pub fn failure_summary(&self) -> String {
        let mut s = String::new();
        for c in self.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(s, "  FAILED {}: {} ({})", c.name, c.rule, c.detail);
        }
        if !self.passed {
            for v in &self.verdicts {
                let e = &v.estimate;
                let _ = writeln!(s, "    {} -> {} value {} samples {:?}", v.name, e.status, fmt_num(e.value), e.samples);
            }
        }
        s
    }

    /// Files written by [`ExperimentReport::write`], as `(name, contents)`.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut out = vec![("report.json".to_string(), self.to_json())];
        for t in &self.tables {
            out.push((format!("{}.csv", t.name), t.to_csv()));
        }
        out
    }

    /// Write `report.json` and one CSV per table into `dir`. Each file is
    /// written to a temporary name and renamed into place.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, body) in self.files() {
            let tmp = dir.join(format!(".{name}.tmp"));
            std::fs::write(&tmp, body)?;
            std::fs::rename(&tmp, dir.join(name))?;
        }
        Ok(())
    }
}

/// Minimal SVG line plot of `ys` columns against `x`, optionally on log-log axes.
pub fn svg_plot(table: &Table, x: &str, ys: &[&str], log_axes: bool) -> Option<String> {
    let xv = table.column(x)?;
    let series: Vec<(String, Vec<f64>)> = ys.iter().filter_map(|y| Some((y.to_string(), table.column(y)?))).collect();
    let tr = |v: f64| if log_axes { v.abs().max(f64::MIN_POSITIVE).log10() } else { v };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, yv)| xv.iter().zip(yv).filter(|(a, b)| a.is_finite() && b.is_finite()).map(|(&a, &b)| (tr(a), tr(b))).collect())
        .collect();
    let all: Vec<&(f64, f64)> = pts.iter().flatten().collect();
    if all.is_empty() {
        return None;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &&(a, b) in &all {
        x0 = x0.min(a);
        x1 = x1.max(a);
        y0 = y0.min(b);
        y1 = y1.max(b);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let (w, h, m) = (640.0, 400.0, 48.0);
    let sx = |a: f64| m + (a - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |b: f64| h - m - (b - y0) / (y1 - y0) * (h - 2.0 * m);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"12\">\n");
    let _ = writeln!(s, "<rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>", w - 2.0 * m, h - 2.0 * m);
    let axis = if log_axes { format!("log10 {x}") } else { x.to_string() };
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{axis}</text>", w / 2.0, h - 12.0);
    let _ = writeln!(s, "<text x=\"{m}\" y=\"{}\">{:.3}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3}</text>", h - m + 16.0, x0, w - m, h - m + 16.0, x1);
    let _ = writeln!(s, "<text x=\"4\" y=\"{}\">{:.3}</text><text x=\"4\" y=\"{}\">{:.3}</text>", h - m, y0, m, y1);
    for (i, (p, (name, _))) in pts.iter().zip(&series).enumerate() {
        let color = colors[i % colors.len()];
        let path: Vec<String> = p.iter().map(|&(a, b)| format!("{:.2},{:.2}", sx(a), sy(b))).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", path.join(" "));
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{name}</text>", w - m - 4.0, m + 16.0 * (i + 1) as f64);
    }
    s.push_str("</svg>\n");
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        let mut t = Table::new("t", &["n", "v"]);
        t.push(vec![1.0, 0.1]);
        t.push(vec![2.0, f64::NAN]);
        assert_eq!(t.to_csv(), "n,v\n1.0000000000000000e0,1.0000000000000001e-1\n2.0000000000000000e0,nan\n");
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = ExperimentReport::new("x");
        r.check("a", "1 < 2", true, String::new());
        assert!(r.passed);
        r.check("b", "2 < 1", false, "nope".into());
        assert!(!r.passed && r.failure_summary().contains("FAILED b"));
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let mut t = Table::new("t", &["n", "a", "b"]);
        for k in 1..5 {
            t.push(vec![k as f64, k as f64, 1.0 / k as f64]);
        }
        let svg = svg_plot(&t, "n", &["a", "b"], true).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
    }
}
