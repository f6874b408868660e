use std::fs;
use std::path::Path;
use std::sync::Arc;

use kfree::correlation::{dedekind_zeta, empirical_correlation, ratio_display, CorrelationReport, CorrelationSpec, EulerContext};
use kfree::literal::{format_ideal, parse_element_list, parse_ideal, to_i64_coords};
use kfree::sieve::{crosscheck_sample, sieve, CrosscheckReport};
use kfree::spectral::{annihilator_points, parseval_check, rotation_eigencheck, spectral_atoms, weights, ParsevalReport, RotationReport};
use kfree::{AlgebraicInt, Field, NumberField, PrimeStream, SieveGrid, TruncatedValue};
use serde::Serialize;
use serde_json::Value;

use crate::config::*;
use crate::emit::{annihilator_csv, lambda_csv, scatter_svg, LambdaRow, ScatterPoint};
use crate::CliError;

type Out = Result<Value, CliError>;

/// A truncated value as printed: the number, its 12-digit rendering and the
/// relative tail bound (`null` when nothing is claimed).
#[derive(Debug, Serialize)]
struct Approx {
    value: f64,
    display: String,
    tail_bound: f64,
    cutoff: u64,
    exact_zero: bool,
}

impl From<TruncatedValue> for Approx {
    fn from(t: TruncatedValue) -> Self {
        Approx { value: t.value, display: t.display(), tail_bound: t.tail_bound, cutoff: t.norm_cutoff, exact_zero: t.exact_zero }
    }
}

fn to_value<T: Serialize>(t: &T) -> Out {
    serde_json::to_value(t).map_err(|e| CliError::Io { path: "<report>".into(), message: e.to_string() })
}

fn write_artifact(path: &Path, bytes: &[u8]) -> Result<String, CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(path.display().to_string())
}

fn load_field(a: &FieldArgs) -> Result<Field, CliError> {
    let f = if a.assume_irreducible { NumberField::parse_assuming_irreducible(&a.field)? } else { NumberField::parse(&a.field)? };
    Ok(f)
}

fn stream(a: &FieldArgs) -> Result<Arc<PrimeStream>, CliError> {
    Ok(Arc::new(PrimeStream::new(&load_field(a)?)?))
}

#[derive(Debug, Serialize)]
struct GridSummary {
    radius: u64,
    points: u64,
    k_free: u64,
    density: String,
    density_exact: String,
    density_value: f64,
}

fn summarize(g: &SieveGrid) -> GridSummary {
    let r = g.density();
    GridSummary {
        radius: g.radius(),
        points: g.len(),
        k_free: g.count_ones(),
        density: ratio_display(&r),
        density_exact: format!("{}/{}", r.numer(), r.denom()),
        density_value: *r.numer() as f64 / *r.denom() as f64,
    }
}

pub fn sieve_cmd(a: &SieveArgs) -> Out {
    #[derive(Serialize)]
    struct R {
        #[serde(flatten)]
        grid: GridSummary,
        crosscheck: Option<CrosscheckReport>,
        artifacts: Vec<String>,
    }
    let s = stream(&a.field)?;
    let g = sieve(&s, a.field.k, a.radius)?;
    let mut artifacts = Vec::new();
    if let Some(p) = &a.bitmap {
        artifacts.push(write_artifact(p, &g.pgm_bytes()?)?);
    }
    if let Some(p) = &a.csv {
        let mut buf = Vec::new();
        g.write_csv(&mut buf).map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() })?;
        artifacts.push(write_artifact(p, &buf)?);
    }
    let crosscheck = a.crosscheck.map(|n| crosscheck_sample(&g, &s, n, a.seed)).transpose()?;
    to_value(&R { grid: summarize(&g), crosscheck, artifacts })
}

pub fn density_cmd(a: &DensityArgs) -> Out {
    #[derive(Serialize)]
    struct R {
        #[serde(flatten)]
        grid: GridSummary,
        inverse_zeta: Approx,
        zeta: Approx,
        difference: f64,
    }
    let s = stream(&a.field)?;
    let g = sieve(&s, a.field.k, a.radius)?;
    let ctx = EulerContext::new(s.clone(), a.field.k, a.cutoff)?;
    let inv = ctx.inverse_zeta(a.field.k);
    let zeta = dedekind_zeta(&s, a.field.k, a.cutoff)?;
    let grid = summarize(&g);
    let difference = grid.density_value - inv.value;
    to_value(&R { grid, inverse_zeta: inv.into(), zeta: zeta.into(), difference })
}

fn build_spec(field: &Field, a: &PredictArgs) -> Result<CorrelationSpec, CliError> {
    let shifts = parse_element_list(field, &a.shifts)?;
    let mut spec = CorrelationSpec::new(a.field.k, shifts);
    if let Some(m) = &a.modulus {
        spec = spec.with_modulus(parse_ideal(field, m)?);
    }
    Ok(spec)
}

fn analytic(a: &PredictArgs, empirical_radius: Option<u64>) -> Out {
    #[derive(Serialize)]
    struct R {
        #[serde(flatten)]
        report: CorrelationReport,
        /// The frequency scaled by `ζ_K(k)`.
        natural: Approx,
    }
    let s = stream(&a.field)?;
    let field = s.field().clone();
    let spec = build_spec(&field, a)?;
    let ctx = EulerContext::new(s.clone(), a.field.k, a.cutoff)?;
    let res = ctx.analytic_s(&spec)?;
    let empirical = match empirical_radius {
        Some(radius) => {
            let mut reach = 0u64;
            for sh in &spec.shifts {
                let c = to_i64_coords(sh)?;
                reach = reach.max(c.iter().map(|x| x.unsigned_abs()).sum());
            }
            let g = sieve(&s, a.field.k, radius + reach)?;
            Some((radius, empirical_correlation(&g, &spec, radius)?))
        }
        None => None,
    };
    let natural = res.value.mul(&dedekind_zeta(&s, a.field.k, a.cutoff)?);
    to_value(&R { report: CorrelationReport::new(&field, &spec, &res, empirical), natural: natural.into() })
}

pub fn predict_cmd(a: &PredictArgs) -> Out {
    analytic(a, None)
}

pub fn correlate_cmd(a: &CorrelateArgs) -> Out {
    analytic(&a.predict, Some(a.radius))
}

fn parse_coords(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::from(kfree::Error::Parse(format!("coordinate pair {s:?}")));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

pub fn spectrum_cmd(a: &SpectrumArgs) -> Out {
    #[derive(Serialize)]
    struct Level {
        level: String,
        norm: u64,
        mu: i32,
        characters: usize,
        sigma: Approx,
        g: Approx,
        mass: Approx,
    }
    #[derive(Serialize)]
    struct R {
        d_bound: u64,
        characters: usize,
        levels: Vec<Level>,
        artifacts: Vec<String>,
    }
    let coords = parse_coords(&a.coords)?;
    let s = stream(&a.field)?;
    let dim = s.field().degree();
    let k = a.field.k;
    let ctx = EulerContext::new(s.clone(), k, a.cutoff)?;
    let atoms = spectral_atoms(&ctx, a.d_bound)?;

    let mut levels: Vec<Level> = Vec::new();
    let mut rows = Vec::with_capacity(atoms.len());
    let mut scatter = Vec::with_capacity(atoms.len());
    let mut last = None;
    for atom in &atoms {
        let lvl = &atom.character.level;
        if last != Some(lvl) {
            let w = weights(&ctx, lvl)?;
            levels.push(Level {
                level: format_ideal(lvl),
                norm: lvl.norm_u64().unwrap_or(u64::MAX),
                mu: w.mu,
                characters: 0,
                sigma: w.sigma.into(),
                g: w.g.into(),
                mass: w.mass.into(),
            });
            last = Some(lvl);
        }
        let cur = levels.last_mut().expect("pushed above");
        cur.characters += 1;
        rows.push(LambdaRow { phase: atom.character.phase.clone(), level: cur.level.clone(), sigma: atom.weight.value });
        scatter.push(ScatterPoint { phase: atom.character.phase.clone(), level_norm_k: (cur.norm as u128).saturating_pow(k) });
    }

    let mut artifacts = Vec::new();
    if let Some(p) = &a.csv {
        artifacts.push(write_artifact(p, lambda_csv(&rows, dim).as_bytes())?);
    }
    if let Some(p) = &a.svg {
        artifacts.push(write_artifact(p, scatter_svg(&scatter, dim, coords)?.as_bytes())?);
    }
    to_value(&R { d_bound: a.d_bound, characters: atoms.len(), levels, artifacts })
}

pub fn annihilator_cmd(a: &AnnihilatorArgs) -> Out {
    #[derive(Serialize)]
    struct R {
        ideal: String,
        norm: String,
        count: usize,
        points: Vec<String>,
        artifacts: Vec<String>,
    }
    let field = load_field(&a.field)?;
    let id = parse_ideal(&field, &a.ideal)?;
    let pts = annihilator_points(&id)?;
    let mut artifacts = Vec::new();
    if let Some(p) = &a.csv {
        artifacts.push(write_artifact(p, annihilator_csv(&pts, field.degree()).as_bytes())?);
    }
    to_value(&R {
        ideal: format_ideal(&id),
        norm: id.norm().to_string(),
        count: pts.len(),
        points: pts.iter().map(|p| p.literal()).collect(),
        artifacts,
    })
}

#[derive(Debug, Serialize)]
struct SuiteCase {
    shifts: Vec<String>,
    radius: u64,
    empirical: String,
    empirical_value: f64,
    analytic: Approx,
    difference: f64,
}

pub fn verify_cmd(a: &VerifyArgs) -> Out {
    #[derive(Serialize)]
    struct R {
        crosscheck: CrosscheckReport,
        rotation: Vec<RotationReport>,
        parseval: ParsevalReport,
        correlations: Vec<SuiteCase>,
        tolerance: f64,
    }
    let s = stream(&a.field)?;
    let field = s.field().clone();
    let d = field.degree();
    let k = a.field.k;
    let grid = sieve(&s, k, a.radius)?;
    let crosscheck = crosscheck_sample(&grid, &s, a.samples, a.seed)?;

    let mut rotation = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = vec![0i64; d];
        v[j] = 1;
        rotation.push(rotation_eigencheck(&s, k, a.d_bound, &v)?);
    }

    let ctx = EulerContext::new(s.clone(), k, a.cutoff)?;
    let parseval = parseval_check(&ctx, a.parseval_bound)?;

    // one pattern per basis element, and the pair of the first two
    let mut patterns: Vec<Vec<Vec<i64>>> = (0..d)
        .map(|j| {
            let mut v = vec![0i64; d];
            v[j] = 1;
            vec![v]
        })
        .collect();
    if d >= 2 {
        patterns.push(vec![patterns[0][0].clone(), patterns[1][0].clone()]);
    }
    let radius = a.radius.saturating_sub(2);
    let mut correlations = Vec::new();
    let mut failed = Vec::new();
    for pat in patterns {
        let shifts: Vec<AlgebraicInt> = pat.iter().map(|v| AlgebraicInt::from_i64(v)).collect();
        let spec = CorrelationSpec::new(k, shifts);
        let an = ctx.analytic_correlation(&spec)?.value;
        let emp = empirical_correlation(&grid, &spec, radius)?;
        let ev = *emp.numer() as f64 / *emp.denom() as f64;
        let case = SuiteCase {
            shifts: spec.shifts.iter().map(|s| kfree::literal::format_element(&field, s)).collect(),
            radius,
            empirical: ratio_display(&emp),
            empirical_value: ev,
            difference: ev - an.value,
            analytic: an.into(),
        };
        if case.difference.abs() > a.tolerance {
            failed.push(format!("{} differs by {:.3e}", case.shifts.join(";"), case.difference));
        }
        correlations.push(case);
    }
    if !failed.is_empty() {
        return Err(CliError::Check { message: format!("empirical and analytic correlations disagree: {}", failed.join(", ")) });
    }
    to_value(&R { crosscheck, rotation, parseval, correlations, tolerance: a.tolerance })
}
