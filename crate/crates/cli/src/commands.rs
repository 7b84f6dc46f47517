use std::fmt::Write as _;
use std::fs;

use qpdeg_core::degeneracy::{default_p_grid, DEFAULT_TOL};
use qpdeg_core::intersect::{intersect_curves_with, Sweep, DEFAULT_INTERSECT_TOL};
use qpdeg_core::io::{
    format_float, relation_from_json, relation_to_json, write_intersections_csv,
    write_spectrum_csv, write_traces_csv, RelationDocument,
};
use qpdeg_core::reduction::{design, line_spectrum_in_q, preset};
use qpdeg_core::reproduce::{reproduce, ArtifactId, Report};
use qpdeg_core::svg::{Mark, Plot, Series, Style};
use qpdeg_core::{
    fit_ellipse, fit_hyperbola, fit_line, fit_parabola, reduced_spectrum, solve_q, trace,
    BranchAssignment, ConicRelation, CurveTrace, Error, FitSpec, IntersectionPoint, LevelPair,
    SpectrumTable,
};
use serde::Serialize;

use crate::args::{
    Cli, Command, ConicKind, FitArgs, Format, IntersectArgs, RelationArgs, ReproduceArgs,
    SolveArgs, SpectrumArgs, TraceArgs,
};

pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
const EXIT_IO: i32 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ARGUMENT,
            message: message.into(),
        }
    }

    fn io(err: std::io::Error, what: &str) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{what}: {err}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            e if e.is_argument() => EXIT_ARGUMENT,
            Error::Format(_) => EXIT_IO,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

pub type Outcome = Result<Output, Failure>;

/// Rendered command output plus the exit status to report after writing it.
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    qpdeg_core::io::check_rounding(cli.rounding)?;
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
        }
    }
    match &cli.command {
        Command::Spectrum(args) => spectrum(cli, args),
        Command::Fit(args) => fit(cli, args),
        Command::Solve(args) => solve(cli, args),
        Command::Trace(args) => trace_cmd(cli, args),
        Command::Intersect(args) => intersect(cli, args),
        Command::Reproduce(args) => reproduce_cmd(cli, args),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::from(Error::Format(e.to_string())))?;
    s.push('\n');
    Ok(s)
}

fn unsupported(command: &str, format: Format) -> Failure {
    Failure::usage(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn params<'a>(
    flag: &str,
    values: &'a Option<Vec<f64>>,
    n: usize,
) -> Result<Option<&'a [f64]>, Failure> {
    match values {
        Some(v) if v.len() != n => Err(Failure::usage(format!(
            "--{flag} takes {n} comma-separated numbers, got {}",
            v.len()
        ))),
        Some(v) => Ok(Some(v.as_slice())),
        None => Ok(None),
    }
}

fn resolve_relation(args: &RelationArgs) -> Result<Option<ConicRelation>, Failure> {
    let mut found = Vec::new();
    if let Some(p) = args.preset {
        found.push(preset(p).0);
    }
    if let Some(path) = &args.relation {
        let text =
            fs::read_to_string(path).map_err(|e| Failure::io(e, &path.display().to_string()))?;
        found.push(relation_from_json(&text)?.relation);
    }
    if let Some(v) = params("parabola", &args.parabola, 3)? {
        found.push(ConicRelation::Parabola {
            alpha: v[0],
            beta: v[1],
            gamma: v[2],
        });
    }
    if let Some(v) = params("hyperbola", &args.hyperbola, 4)? {
        found.push(ConicRelation::Hyperbola {
            a_t: v[0],
            b_t: v[1],
            c_t: v[2],
            r: v[3],
        });
    }
    if let Some(v) = params("ellipse", &args.ellipse, 4)? {
        found.push(ConicRelation::Ellipse {
            mu: v[0],
            nu: v[1],
            rho: v[2],
            eps: v[3],
        });
    }
    if let Some(v) = params("line", &args.line, 2)? {
        found.push(ConicRelation::Line {
            alpha: v[0],
            beta: v[1],
        });
    }
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        _ => Err(Failure::usage(
            "give exactly one of --preset, --relation, --parabola, --hyperbola, --ellipse, --line",
        )),
    }
}

fn spectrum(cli: &Cli, args: &SpectrumArgs) -> Outcome {
    let relation = resolve_relation(&args.relation)?
        .ok_or_else(|| Failure::usage("spectrum needs a relation"))?;
    let assignment = BranchAssignment::new(args.threshold, args.low, args.high);
    let table = match (args.p, args.q) {
        (Some(p), None) => reduced_spectrum(&relation, &assignment, p, args.nmax)?,
        (None, Some(q)) => line_spectrum_in_q(&relation, q, args.nmax)?,
        _ => return Err(Failure::usage("give --p (or --q for line relations)")),
    };
    Ok(match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_spectrum_csv(&table.entries, cli.rounding)?.into(),
        Format::Json => to_json(&table)?.into(),
        Format::Svg => spectrum_plot(&table).render().into(),
    })
}

fn spectrum_plot(table: &SpectrumTable) -> Plot {
    let mut plot = Plot::new(
        format!(
            "{} reduction at p = {}",
            table.relation.kind(),
            table.p_value
        ),
        "n",
        "E(n)",
    );
    let points = table
        .entries
        .iter()
        .map(|e| (e.n as f64, e.energy))
        .collect();
    plot.series
        .push(Series::new("E(n)", points, Style::LineMarkers));
    plot
}

fn fit_spec_from(args: &FitArgs, tol: f64) -> Result<FitSpec, Failure> {
    let p0 = args.p0.ok_or_else(|| Failure::usage("fit needs --p0"))?;
    match (args.pair.as_slice(), args.q1, args.q2) {
        ([a, b], None, None) => Ok(design(*a, *b, p0, tol)?.spec),
        ([], Some(q1), Some(q2)) => Ok(FitSpec::from_roots(q1, q2, p0)?),
        _ => Err(Failure::usage(
            "give either two --pair values or --q1 and --q2",
        )),
    }
}

fn fit_line_doc(args: &FitArgs, tol: Option<f64>) -> Result<RelationDocument, Failure> {
    let (q, p) = match (args.pair.as_slice(), args.q1, args.p0) {
        ([a, b], None, None) => {
            let pts = intersect_curves_with(
                *a,
                *b,
                tol.unwrap_or(DEFAULT_INTERSECT_TOL),
                Sweep::default(),
            )?;
            let idx = args
                .crossing
                .checked_sub(1)
                .filter(|&i| i < pts.len())
                .ok_or_else(|| {
                    Failure::usage(format!(
                        "--crossing {} out of range; curves {a} and {b} cross at {} point(s)",
                        args.crossing,
                        pts.len()
                    ))
                })?;
            (pts[idx].q, pts[idx].p)
        }
        ([], Some(q), Some(p)) => (q, p),
        _ => {
            return Err(Failure::usage(
                "line fit needs two --pair values or --q1 with --p0",
            ))
        }
    };
    Ok(RelationDocument::new(fit_line(q, p)?, None))
}

fn fit(cli: &Cli, args: &FitArgs) -> Outcome {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let doc = match args.kind {
        ConicKind::Line => fit_line_doc(args, cli.tol)?,
        kind => {
            let spec = fit_spec_from(args, tol)?;
            let relation = match kind {
                ConicKind::Parabola => fit_parabola(spec)?,
                ConicKind::Hyperbola => fit_hyperbola(spec, args.r)?,
                _ => fit_ellipse(spec, args.eps)?,
            };
            RelationDocument::new(relation, Some(spec))
        }
    }
    .with_diagnostics();
    Ok(match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = relation_to_json(&doc)?;
            s.push('\n');
            s.into()
        }
        Format::Svg => {
            let mut plot = Plot::new(format!("{} reduction", doc.relation.kind()), "q", "p");
            plot.series.push(relation_series(&doc.relation));
            plot.marks.push(Mark {
                x: 1.0,
                y: 1.0,
                label: "(1,1)".into(),
            });
            if let Some(spec) = doc.fit_spec {
                for q in [spec.q1, spec.q2] {
                    plot.marks.push(Mark {
                        x: q,
                        y: spec.p0,
                        label: format!("({q:.6},{})", spec.p0),
                    });
                }
            }
            unit_square(&mut plot);
            plot.render().into()
        }
        f @ Format::Csv => return Err(unsupported("fit", f)),
    })
}

#[derive(Serialize)]
struct Roots {
    pair: LevelPair,
    p0: f64,
    roots: Vec<f64>,
}

fn solve(cli: &Cli, args: &SolveArgs) -> Outcome {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let results = args
        .pair
        .iter()
        .map(|&pair| {
            Ok(Roots {
                pair,
                p0: args.p0,
                roots: solve_q(pair, args.p0, tol)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("pair,p0,q\n");
            for r in &results {
                for q in &r.roots {
                    let _ = writeln!(
                        s,
                        "{},{},{}",
                        r.pair,
                        format_float(r.p0, cli.rounding),
                        format_float(*q, cli.rounding)
                    );
                }
            }
            s.into()
        }
        Format::Json => to_json(&results)?.into(),
        f @ Format::Svg => return Err(unsupported("solve", f)),
    })
}

fn curve_label(pair: LevelPair) -> String {
    format!("E{}=E{}", pair.upper(), pair.n())
}

fn trace_series(t: &CurveTrace) -> Series {
    // samples are sorted by p; several roots per p form separate branches
    // that a single polyline would zig-zag between, so draw markers only
    let points = t.samples.iter().map(|s| (s.q(), s.p())).collect();
    Series::new(curve_label(t.pair), points, Style::Markers)
}

fn relation_series(rel: &ConicRelation) -> Series {
    let points = (0..=400)
        .filter_map(|i| {
            let q = i as f64 / 400.0;
            rel.eval(q)
                .filter(|p| (0.0..=1.0).contains(p))
                .map(|p| (q, p))
        })
        .collect();
    Series::new(rel.kind(), points, Style::Line)
}

fn unit_square(plot: &mut Plot) {
    plot.x_range = Some((0.0, 1.0));
    plot.y_range = Some((0.0, 1.0));
}

fn crossing_label(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

#[derive(Serialize)]
struct TraceDocument<'a> {
    traces: &'a [CurveTrace],
    relation: Option<ConicRelation>,
    marks: Vec<MarkRecord>,
}

#[derive(Serialize)]
struct MarkRecord {
    q: f64,
    p: f64,
    label: String,
}

fn trace_cmd(cli: &Cli, args: &TraceArgs) -> Outcome {
    if args.pair.is_empty() {
        return Err(Failure::usage("trace needs at least one --pair"));
    }
    if args.grid < 2 {
        return Err(Failure::usage("--grid must be at least 2"));
    }
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let grid = default_p_grid(args.grid);
    let traces = args
        .pair
        .iter()
        .map(|&pair| trace(pair, &grid, tol))
        .collect::<Result<Vec<_>, Error>>()?;
    let relation = resolve_relation(&args.relation)?;

    let mut marks: Vec<MarkRecord> = args
        .mark
        .iter()
        .map(|(q, p, label)| MarkRecord {
            q: *q,
            p: *p,
            label: label.clone(),
        })
        .collect();
    if args.crossings {
        let [a, b, ..] = args.pair.as_slice() else {
            return Err(Failure::usage(
                "--crossings needs at least two --pair values",
            ));
        };
        let pts = intersect_curves_with(*a, *b, DEFAULT_INTERSECT_TOL, Sweep::default())?;
        marks.extend(pts.iter().enumerate().map(|(i, pt)| MarkRecord {
            q: pt.q,
            p: pt.p,
            label: crossing_label(i),
        }));
    }

    Ok(match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_traces_csv(&traces, cli.rounding)?.into(),
        Format::Json => to_json(&TraceDocument {
            traces: &traces,
            relation,
            marks,
        })?
        .into(),
        Format::Svg => {
            let mut plot = Plot::new("degeneracy curves", "q", "p");
            plot.series.extend(traces.iter().map(trace_series));
            if let Some(rel) = &relation {
                plot.series.push(relation_series(rel));
            }
            plot.marks = marks
                .into_iter()
                .map(|m| Mark {
                    x: m.q,
                    y: m.p,
                    label: m.label,
                })
                .collect();
            unit_square(&mut plot);
            plot.render().into()
        }
    })
}

fn intersect(cli: &Cli, args: &IntersectArgs) -> Outcome {
    let [a, b] = args.pair.as_slice() else {
        return Err(Failure::usage("intersect needs exactly two --pair values"));
    };
    let sweep = Sweep {
        samples: args.samples,
        ..Sweep::default()
    };
    if sweep.samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let points: Vec<IntersectionPoint> =
        intersect_curves_with(*a, *b, cli.tol.unwrap_or(DEFAULT_INTERSECT_TOL), sweep)?;
    Ok(match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_intersections_csv(&points, cli.rounding)?.into(),
        Format::Json => to_json(&points)?.into(),
        Format::Svg => {
            let grid = default_p_grid(512);
            let mut plot = Plot::new(
                format!("{} and {}", curve_label(*a), curve_label(*b)),
                "q",
                "p",
            );
            for pair in [*a, *b] {
                plot.series
                    .push(trace_series(&trace(pair, &grid, DEFAULT_TOL)?));
            }
            plot.marks = points
                .iter()
                .enumerate()
                .map(|(i, pt)| Mark {
                    x: pt.q,
                    y: pt.p,
                    label: crossing_label(i),
                })
                .collect();
            unit_square(&mut plot);
            plot.render().into()
        }
    })
}

fn report_csv(report: &Report, rounding: Option<u32>) -> String {
    let mut s = String::from("artifact,quantity,computed,reference,abs_diff,passed\n");
    for a in &report.artifacts {
        for q in &a.quantities {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                a.id,
                q.name,
                format_float(q.computed, rounding),
                format_float(q.reference, rounding),
                format_float((q.computed - q.reference).abs(), rounding),
                a.passed
            );
        }
    }
    s
}

fn reproduce_cmd(cli: &Cli, args: &ReproduceArgs) -> Outcome {
    let mut ids = Vec::new();
    if let Some(n) = args.table {
        ids.push(ArtifactId::table(n)?);
    }
    for name in &args.artifact {
        ids.push(name.parse::<ArtifactId>()?);
    }
    let report = reproduce(&ids);
    let text = match cli.format {
        None => report.to_text(),
        Some(Format::Json) => {
            let mut s = report.to_json()?;
            s.push('\n');
            s
        }
        Some(Format::Csv) => report_csv(&report, cli.rounding),
        Some(f @ Format::Svg) => return Err(unsupported("reproduce", f)),
    };
    Ok(Output {
        text,
        code: if report.passed { 0 } else { EXIT_MISMATCH },
    })
}
