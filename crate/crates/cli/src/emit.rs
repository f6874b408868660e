//! Artifact writers. All output is a pure function of the input: fixed
//! number formatting, input order preserved, no timestamps.

use std::fmt::Write as _;

use kfree::{Error, Phase, Result};

/// Side of the square SVG canvas in pixels.
pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// One character in a scatter: its phase and `N(𝔡^k)` of its level.
#[derive(Debug, Clone)]
pub struct ScatterPoint {
    pub phase: Phase,
    pub level_norm_k: u128,
}

/// Point radius shrinking with the level, `8 / N(𝔡^k)^{1/4}`.
pub fn point_radius(level_norm_k: u128) -> f64 {
    8.0 / (level_norm_k.max(1) as f64).powf(0.25)
}

/// SVG 1.1 scatter of phases projected on the coordinate pair `coords`,
/// drawn on the unit square `[0,1)^2` (second coordinate pointing up).
pub fn scatter_svg(points: &[ScatterPoint], dim: usize, coords: (usize, usize)) -> Result<String> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension { d: dim });
    }
    if coords.0 >= dim || coords.1 >= dim || coords.0 == coords.1 {
        return Err(Error::Parse(format!("coordinate pair {},{} for dimension {dim}", coords.0, coords.1)));
    }
    let span = CANVAS - 2.0 * MARGIN;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{span}\" height=\"{span}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>"
    );
    for p in points {
        let den = p.phase.den() as f64;
        let x = MARGIN + span * p.phase.num()[coords.0] as f64 / den;
        let y = CANVAS - MARGIN - span * p.phase.num()[coords.1] as f64 / den;
        let _ = writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\" fill=\"black\"/>", point_radius(p.level_norm_k));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// CSV quoting for a free-form field.
pub fn quote(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}

fn phase_header(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("num{i}")).chain(["den".to_string()]).collect()
}

/// Rows `num1,…,numd,den`.
pub fn annihilator_csv(points: &[Phase], dim: usize) -> String {
    let mut s = phase_header(dim).join(",");
    s.push('\n');
    for p in points {
        s.push_str(&p.literal());
        s.push('\n');
    }
    s
}

/// One `Λ` row: phase, level literal, `σ_𝔡`.
#[derive(Debug, Clone)]
pub struct LambdaRow {
    pub phase: Phase,
    pub level: String,
    pub sigma: f64,
}

/// Rows `num1,…,numd,den,level,sigma_weight`; the level is always quoted.
pub fn lambda_csv(rows: &[LambdaRow], dim: usize) -> String {
    let mut head = phase_header(dim);
    head.push("level".into());
    head.push("sigma_weight".into());
    let mut s = head.join(",");
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{:.12e}", r.phase.literal(), quote(&r.level), r.sigma);
    }
    s
}
