use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use polyknot_core::format;
use polyknot_core::scalar::{decimal_string, int, RoundDir};
use polyknot_core::{embed_linear, PolynomialKnot, Rational, Scalar, TraceState};

use crate::{parse_rational_arg, read_json, write_atomic, CmdResult, Failure, PlotFormat};

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Knot, sequence or trace file.
    input: PathBuf,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    range: Option<Vec<String>>,
    #[arg(long, default_value_t = 401)]
    samples: usize,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, value_enum)]
    format: Option<PlotFormat>,
    /// Components to emit (CSV) or the planar projection (SVG, exactly two).
    #[arg(long, num_args = 1..)]
    components: Option<Vec<u32>>,
    /// Output file, or the frame directory for trace input.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub struct Plan {
    pub range: (Rational, Rational),
    pub samples: usize,
    pub format: PlotFormat,
    pub components: Option<Vec<u32>>,
}

fn digits17(x: &Rational) -> String {
    decimal_string(x, 17, RoundDir::Nearest)
}

fn parameters(plan: &Plan) -> Vec<Rational> {
    let (a, b) = &plan.range;
    let last = int(plan.samples as i64 - 1);
    (0..plan.samples).map(|k| a + (b - a) * int(k as i64) / &last).collect()
}

fn coordinate(values: &[Scalar], i: u32) -> Scalar {
    values.get(i as usize - 1).cloned().unwrap_or_else(Scalar::zero)
}

/// Rows `t, x_i…`, with a `±` radius column per component when any coefficient is inexact.
pub fn csv(knot: &PolynomialKnot, plan: &Plan) -> String {
    let comps: Vec<u32> = plan.components.clone().unwrap_or_else(|| (1..=knot.dimension()).collect());
    let inexact = !knot.table().is_exact();
    let mut out = String::from("t");
    for i in &comps {
        let _ = write!(out, ",x{i}");
        if inexact {
            let _ = write!(out, ",x{i}±");
        }
    }
    out.push('\n');
    for t in parameters(plan) {
        let values = knot.evaluate(&Scalar::Exact(t.clone()));
        out.push_str(&digits17(&t));
        for &i in &comps {
            let v = coordinate(&values, i);
            let _ = write!(out, ",{}", digits17(&v.mid()));
            if inexact {
                let _ = write!(out, ",{}", decimal_string(&v.radius(), 17, RoundDir::Up));
            }
        }
        out.push('\n');
    }
    out
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 20.0;

/// A single polyline of the projection onto components `(i, j)`.
pub fn svg(knot: &PolynomialKnot, plan: &Plan) -> String {
    let comps = plan.components.clone().unwrap_or_else(|| vec![1, 2]);
    let (ci, cj) = (comps[0], comps[1]);
    let pts: Vec<(f64, f64)> = parameters(plan)
        .iter()
        .map(|t| {
            let v = knot.evaluate(&Scalar::Exact(t.clone()));
            (mid_f64(&coordinate(&v, ci)), mid_f64(&coordinate(&v, cj)))
        })
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let mut points = String::new();
    for (n, &(x, y)) in pts.iter().enumerate() {
        if n > 0 {
            points.push(' ');
        }
        let px = MARGIN + (x - x0) * scale;
        let py = SIZE - MARGIN - (y - y0) * scale;
        let _ = write!(points, "{px:.3},{py:.3}");
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"{points}\"/>\n\
         </svg>\n"
    )
}

fn mid_f64(v: &Scalar) -> f64 {
    Scalar::Exact(v.mid()).to_f64()
}

pub fn render(knot: &PolynomialKnot, plan: &Plan) -> String {
    match plan.format {
        PlotFormat::Csv => csv(knot, plan),
        PlotFormat::Svg => svg(knot, plan),
    }
}

fn plan(a: &PlotArgs) -> Result<Plan, Failure> {
    let range = match &a.range {
        Some(v) => (parse_rational_arg("--range", &v[0])?, parse_rational_arg("--range", &v[1])?),
        None => (int(-2), int(2)),
    };
    if range.0 >= range.1 {
        return Err(Failure::usage("--range a b requires a < b"));
    }
    if a.samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let format = match a.format {
        Some(f) => f,
        None => match a.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("svg") => PlotFormat::Svg,
            _ => PlotFormat::Csv,
        },
    };
    if let Some(c) = &a.components {
        if c.contains(&0) {
            return Err(Failure::usage("--components: indices start at 1"));
        }
    }
    if format == PlotFormat::Svg && a.components.as_ref().is_some_and(|c| c.len() != 2) {
        return Err(Failure::usage("--format svg needs exactly two --components"));
    }
    Ok(Plan { range, samples: a.samples, format, components: a.components.clone() })
}

fn state_knot(s: &TraceState) -> PolynomialKnot {
    match s {
        TraceState::Knot(k) => k.clone(),
        TraceState::Sequence(x) => embed_linear(x),
    }
}

pub fn run(a: &PlotArgs) -> CmdResult {
    let plan = plan(a)?;
    let (text, value) = read_json(&a.input)?;
    let data = |e: polyknot_core::Error| Failure::data(format!("{}: {e}", a.input.display()));

    if value.get("samples").is_some() {
        let trace = format::parse_trace(&text).map_err(data)?;
        let dir = a.out.as_ref().ok_or_else(|| Failure::usage("trace input needs --out DIR for its frames"))?;
        let ext = match plan.format {
            PlotFormat::Csv => "csv",
            PlotFormat::Svg => "svg",
        };
        let width = trace.samples.len().saturating_sub(1).to_string().len().max(4);
        let frames: Vec<(PathBuf, String)> = trace
            .samples
            .iter()
            .enumerate()
            .map(|(n, s)| (dir.join(format!("frame_{n:0width$}.{ext}")), render(&state_knot(&s.state), &plan)))
            .collect();
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure { code: crate::EXIT_IO, message: format!("{}: {e}", dir.display()) })?;
        for (p, body) in &frames {
            write_atomic(p, body.as_bytes())?;
        }
        println!("wrote {} frames to {}", frames.len(), dir.display());
        return Ok(0);
    }

    let knot = if value.get("entries").is_some() {
        embed_linear(&format::parse_sequence(&text).map_err(data)?)
    } else {
        format::parse_knot(&text).map_err(data)?
    };
    let wanted = plan.components.clone().unwrap_or_else(|| match plan.format {
        PlotFormat::Svg => vec![1, 2],
        PlotFormat::Csv => vec![1],
    });
    if let Some(&i) = wanted.iter().find(|&&i| i > knot.dimension()) {
        return Err(Failure::usage(format!("component {i} exceeds dimension {}", knot.dimension())));
    }
    let body = render(&knot, &plan);
    match &a.out {
        Some(p) => write_atomic(p, body.as_bytes())?,
        None => print!("{body}"),
    }
    Ok(0)
}
