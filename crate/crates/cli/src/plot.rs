//! SVG 1.1 figure per report: boundary of Ω, numerical range, spectrum and, when the
//! report carries a witness, a heat line of `|f|` along `∂Ω`.

use std::f64::consts::TAU;
use std::fmt::Write;

use crouzeix_core::calculus::Witness;
use crouzeix_core::conformal::riemann_map;
use crouzeix_core::linalg::{numerical_range, spectrum};
use crouzeix_core::report::ExperimentReport;
use crouzeix_core::{Domain, Matrix, Result, C64};

const SIZE: f64 = 480.0;
const PAD: f64 = 24.0;
const OUTLINE: usize = 512;
const HEAT: usize = 256;
const MAP_NODES: usize = 256;

struct Frame {
    center: C64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[C64]) -> Self {
        let (mut lo, mut hi) = (C64::new(f64::MAX, f64::MAX), C64::new(f64::MIN, f64::MIN));
        for z in points {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        Frame {
            center: (lo + hi) * 0.5,
            scale: (SIZE - 2.0 * PAD) / span,
        }
    }

    fn xy(&self, z: C64) -> (f64, f64) {
        let d = (z - self.center) * self.scale;
        (SIZE / 2.0 + d.re, SIZE / 2.0 - d.im)
    }

    fn points(&self, zs: &[C64]) -> String {
        zs.iter()
            .map(|z| {
                let (x, y) = self.xy(*z);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Blue through yellow to red for `v ∈ [0, 1]`.
fn heat(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round() as u8;
    let (r, g, b) = if v < 0.5 {
        let s = 2.0 * v;
        (lerp(44.0, 255.0, s), lerp(123.0, 221.0, s), lerp(182.0, 60.0, s))
    } else {
        let s = 2.0 * v - 1.0;
        (lerp(255.0, 215.0, s), lerp(221.0, 25.0, s), lerp(60.0, 28.0, s))
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn witness_of(report: &ExperimentReport) -> Option<Witness> {
    ["theta_witness", "shifted_witness"]
        .iter()
        .find_map(|k| serde_json::from_value(report.details.get(*k)?.clone()).ok())
}

pub fn render(report: &ExperimentReport, t: &Matrix, domain: &Domain) -> Result<String> {
    let outline: Vec<C64> = (0..OUTLINE).map(|k| domain.gamma(TAU * k as f64 / OUTLINE as f64)).collect();
    let range = numerical_range(t, 256)?.support_points;
    let spec = spectrum(t)?;
    let frame = Frame::fit(&outline.iter().chain(&range).chain(&spec).copied().collect::<Vec<_>>());

    let mut svg = String::new();
    let w = |s: &mut String, line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    w(&mut svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#.into());
    w(
        &mut svg,
        format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        ),
    );
    w(
        &mut svg,
        format!(
            "<title>{} seed {} ({:?})</title>",
            report.experiment, report.seed, report.outcome
        ),
    );
    w(&mut svg, format!(r##"<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##));
    w(
        &mut svg,
        format!(
            r##"<polygon points="{}" fill="#cfe3f5" stroke="#1f77b4" stroke-width="1"/>"##,
            frame.points(&range)
        ),
    );
    w(
        &mut svg,
        format!(
            r##"<polygon points="{}" fill="none" stroke="#444444" stroke-width="1.5"/>"##,
            frame.points(&outline)
        ),
    );
    if let Some(witness) = witness_of(report) {
        let map = riemann_map(domain, None, MAP_NODES)?;
        let f = witness.to_fn::<f64>()?;
        let ts: Vec<f64> = (0..=HEAT).map(|k| TAU * k as f64 / HEAT as f64).collect();
        let mags: Vec<f64> = ts.iter().map(|&s| f.eval(map.boundary_value(s)).norm()).collect();
        let top = mags.iter().cloned().fold(0.0, f64::max).max(1e-300);
        let mut g = String::from(r#"<g stroke-width="4" stroke-linecap="round">"#);
        for k in 0..HEAT {
            let (x0, y0) = frame.xy(domain.gamma(ts[k]));
            let (x1, y1) = frame.xy(domain.gamma(ts[k + 1]));
            let _ = write!(
                g,
                r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{}"/>"#,
                heat(0.5 * (mags[k] + mags[k + 1]) / top)
            );
        }
        g.push_str("</g>");
        w(&mut svg, g);
    }
    for z in &spec {
        let (x, y) = frame.xy(*z);
        w(&mut svg, format!(r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#000000"/>"##));
    }
    w(
        &mut svg,
        format!(
            r##"<text x="{PAD}" y="{}" font-family="sans-serif" font-size="12" fill="#222222">{} seed {}: margin {:.3e}</text>"##,
            PAD * 0.75,
            report.experiment,
            report.seed,
            report.margin
        ),
    );
    w(&mut svg, "</svg>".into());
    Ok(svg)
}
