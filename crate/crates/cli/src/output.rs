//! CSV, JSON and SVG writers. Every file starts with the resolved
//! configuration so it can be regenerated.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::Settings;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // 17 significant digits round-trip every f64.
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub struct Emitter {
    dir: PathBuf,
    command: String,
    settings: Settings,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path, command: &str, settings: &Settings) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), command: command.to_string(), settings: settings.clone(), written: Vec::new() })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("kg5d {} schema_version={SCHEMA_VERSION}", self.command)];
        lines.extend(self.settings.iter().map(|(k, v)| format!("{k} = {v}")));
        lines
    }

    fn write(&mut self, name: &str, body: String) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body)?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, columns: &[&str], rows: &[Vec<Cell>]) -> Result<(), CliError> {
        let mut out = String::new();
        for line in self.header_lines() {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "{}", columns.join(",")).unwrap();
        for row in rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        self.write(name, out)
    }

    pub fn json(&mut self, name: &str, result: Value) -> Result<(), CliError> {
        let config: Map<String, Value> = self.settings.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": config,
            "result": result,
        });
        let mut body = serde_json::to_string_pretty(&doc)?;
        body.push('\n');
        self.write(name, body)
    }

    /// Polylines on shared axes, one per `(label, points)` series.
    pub fn svg(&mut self, name: &str, title: &str, x_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> Result<(), CliError> {
        let mut out = String::new();
        writeln!(out, "<!--").unwrap();
        for line in self.header_lines() {
            writeln!(out, "  {}", line.replace("--", "- -")).unwrap();
        }
        writeln!(out, "-->").unwrap();
        out.push_str(&polyline_svg(title, x_label, series));
        self.write(name, out)
    }
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn polyline_svg(title: &str, x_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h, margin) = (640.0, 420.0, 50.0);
    let finite = series.iter().flat_map(|(_, p)| p.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#, w / 2.0, escape(title)).unwrap();
    writeln!(
        out,
        r#"<path d="M{m} {b} H{r} M{m} {b} V{m}" stroke="black" fill="none"/>"#,
        m = margin,
        b = h - margin,
        r = w - margin
    )
    .unwrap();
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#, w / 2.0, h - 12.0, escape(x_label)).unwrap();
    for (label, anchor_x) in [(format!("{x0:.3}"), margin), (format!("{x1:.3}"), w - margin)] {
        writeln!(
            out,
            r#"<text x="{anchor_x}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{label}</text>"#,
            h - margin + 16.0
        )
        .unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{y1:.3}</text>"#, margin - 4.0, margin + 4.0).unwrap();
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{y0:.3}</text>"#, margin - 4.0, h - margin).unwrap();
    for (i, (label, points)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, coords.join(" ")).unwrap();
        let ly = margin + 16.0 * i as f64;
        writeln!(out, r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#, w - margin - 110.0, escape(label)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
