//! The `sqpeg` command line: bounds, generator inspection, solving and
//! plotting of inscribed squares.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or range error,
//! 3 curve parse error, 4 path budget exceeded, 5 solver failure.

pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use squarepeg::polytope::{
    minkowski_params, minkowski_volume_poly, mixed_volume_closed_form, LinearForm,
};
use squarepeg::solver::{reality_and_render_data, RenderSquare};
use squarepeg::{
    count_inscribed_squares, inscribed_bound, mixed_volume, newton_matches, parse_curve,
    rewritten_generators, shape_of_generator, Curve, HomotopySettings, ParseError, SolveError,
    SquareReport,
};

use render::{render_svg, RenderSpec, Viewport, MIN_GRID};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_SOLVER: i32 = 5;

pub const MAX_BOUND_DEGREE: i64 = 50;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: invalid report: {message}")]
    Report { path: PathBuf, message: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } | CliError::Report { .. } => EXIT_PARSE,
            CliError::Solve(SolveError::BudgetExceeded { .. })
            | CliError::Solve(SolveError::StartSystemTooLarge(_)) => EXIT_BUDGET,
            CliError::Solve(_) => EXIT_SOLVER,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sqpeg", version, about = "Inscribed squares on algebraic plane curves")]
pub struct Cli {
    /// Seed for the random rotation, gamma and chart of the solver.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mixed volume, square bound and Bezout number for degree m.
    Bound { m: i64 },
    /// The Minkowski volume polynomial and its mixed-volume coefficient.
    MixedVolume { m: i64 },
    /// Print the rewritten generators g1..g4 of a curve file.
    Generators { file: PathBuf },
    /// Compare each generator's Newton polytope with its predicted shape.
    NewtonCheck { file: PathBuf },
    /// Count the inscribed squares of a curve file.
    Solve {
        file: PathBuf,
        /// Largest number of homotopy paths (m^4) to accept.
        #[arg(long, default_value_t = 625)]
        budget: u64,
        /// Solve in the curve's own coordinates.
        #[arg(long)]
        no_rotate: bool,
    },
    /// Draw the curve and its real inscribed squares as SVG.
    Plot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Samples per axis for the contour.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        xrange: Option<(f64, f64)>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        yrange: Option<(f64, f64)>,
        /// Draw the squares of a saved `solve --json` report instead of solving.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 625)]
        budget: u64,
        /// Solve in randomly rotated coordinates (off by default for plots).
        #[arg(long)]
        rotate: bool,
    },
}

/// Parses `a:b` into a range.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got {:?}", s))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number {:?}", a))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number {:?}", b))?;
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(format!("range {:?} is empty", s));
    }
    Ok((a, b))
}

pub fn read_curve(path: &Path) -> Result<Curve, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_curve(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn cmd_bound(m: i64, as_json: bool) -> Result<String, CliError> {
    if !(1..=MAX_BOUND_DEGREE).contains(&m) {
        return Err(CliError::Usage(format!(
            "degree must be in 1..={}, got {}",
            MAX_BOUND_DEGREE, m
        )));
    }
    let mv = mixed_volume(m);
    let bound = inscribed_bound(m);
    let bezout = m.pow(4);
    Ok(if as_json {
        to_json(&json!({"m": m, "mixed_volume": mv, "bound": bound, "bezout": bezout}))
    } else {
        format!("MV={} bound={} bezout={}\n", mv, bound, bezout)
    })
}

fn lambda_form(a: &LinearForm) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match c {
            1 => format!("λ{}", i + 1),
            _ => format!("{}*λ{}", c, i + 1),
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

const LAMBDAS: [&str; 4] = ["λ1", "λ2", "λ3", "λ4"];

pub fn cmd_mixed_volume(m: i64, as_json: bool) -> Result<String, CliError> {
    if !(1..=MAX_BOUND_DEGREE).contains(&m) {
        return Err(CliError::Usage(format!(
            "degree must be in 1..={}, got {}",
            MAX_BOUND_DEGREE, m
        )));
    }
    let mv = mixed_volume(m);
    let closed = mixed_volume_closed_form(m);
    if m < 4 {
        return Ok(if as_json {
            to_json(&json!({"m": m, "mixed_volume": mv, "closed_form": closed, "volume_polynomial": null}))
        } else {
            format!(
                "m={}: the Newton polytopes are not all four-dimensional; closed form used\nMV={}\n",
                m, mv
            )
        });
    }
    let p = minkowski_params(m).expect("m >= 4");
    let vp = minkowski_volume_poly(m).expect("m >= 4");
    let poly = vp.format_with(&LAMBDAS);
    Ok(if as_json {
        to_json(&json!({
            "m": m,
            "mu1": lambda_form(&p.mu1),
            "mu2": lambda_form(&p.mu2),
            "m_prime": lambda_form(&p.m_prime),
            "l_prime": lambda_form(&p.l_prime),
            "k_prime": lambda_form(&p.k_prime),
            "volume_polynomial": poly,
            "mixed_volume": mv,
            "closed_form": closed,
        }))
    } else {
        format!(
            "m={}\nμ1 = {}, μ2 = {}\nm' = {}\nl' = {}\nk' = {}\nVol = {}\nMV={} (m^4 - 5m^2 + 4m = {})\n",
            m,
            lambda_form(&p.mu1),
            lambda_form(&p.mu2),
            lambda_form(&p.m_prime),
            lambda_form(&p.l_prime),
            lambda_form(&p.k_prime),
            poly,
            mv,
            closed
        )
    })
}

pub fn cmd_generators(path: &Path, as_json: bool) -> Result<String, CliError> {
    let f = read_curve(path)?;
    let sys = rewritten_generators(&f);
    let gs: Vec<String> = sys.g.iter().map(|g| g.to_string()).collect();
    Ok(if as_json {
        to_json(&json!({"curve": f.to_string(), "degree": f.degree(), "generators": gs}))
    } else {
        gs.iter()
            .enumerate()
            .map(|(i, g)| format!("g{} = {}\n", i + 1, g))
            .collect()
    })
}

pub fn cmd_newton_check(path: &Path, as_json: bool) -> Result<String, CliError> {
    let f = read_curve(path)?;
    let m = f.degree() as i64;
    if m < 4 {
        return Err(CliError::Usage(format!(
            "predicted shapes need degree at least 4, the curve has degree {}",
            m
        )));
    }
    let sys = rewritten_generators(&f);
    let mut rows = Vec::new();
    for (i, g) in sys.g.iter().enumerate() {
        let shape = shape_of_generator(i + 1, m).expect("m >= 4");
        rows.push((i + 1, shape, newton_matches(g, &shape)));
    }
    Ok(if as_json {
        let items: Vec<_> = rows
            .iter()
            .map(|(i, s, ok)| json!({"generator": i, "shape": s.to_string(), "pass": ok}))
            .collect();
        to_json(&json!({"degree": m, "checks": items}))
    } else {
        rows.iter()
            .map(|(i, s, ok)| {
                format!("N(g{}) = {}: {}\n", i, s, if *ok { "PASS" } else { "FAIL" })
            })
            .collect()
    })
}

fn settings(seed: u64, budget: u64, rotate: bool) -> HomotopySettings {
    HomotopySettings {
        budget,
        rotate,
        ..HomotopySettings::with_seed(seed)
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{} {}", n, word)
    } else {
        format!("{} {}s", n, word)
    }
}

pub fn format_report(f: &Curve, rep: &SquareReport) -> String {
    let mut out = format!("curve: {} (degree {})\n", f, rep.degree);
    out += &format!(
        "{}, {}, {}\n",
        plural(rep.n_nondegenerate, "solution"),
        plural(rep.n_orbits, "square"),
        plural(rep.n_real_squares, "real square")
    );
    out += &format!(
        "paths {}: finite {}, diverged {}, failed {}, singular {}\n",
        rep.n_paths, rep.n_finite, rep.n_diverged, rep.n_failed, rep.n_singular
    );
    for (k, sq) in reality_and_render_data(rep).iter().enumerate() {
        let p = sq.param;
        out += &format!(
            "real square {}: a={:?} b={:?} c={:?} d={:?}\n",
            k + 1,
            p.a.re,
            p.b.re,
            p.c.re,
            p.d.re
        );
    }
    for w in &rep.warnings {
        out += &format!("warning: {}\n", w);
    }
    out
}

pub fn cmd_solve(
    path: &Path,
    seed: u64,
    budget: u64,
    rotate: bool,
    as_json: bool,
) -> Result<String, CliError> {
    let f = read_curve(path)?;
    let rep = count_inscribed_squares(&f, &settings(seed, budget, rotate))?;
    Ok(if as_json {
        to_json(&rep)
    } else {
        format_report(&f, &rep)
    })
}

pub struct PlotArgs {
    pub file: PathBuf,
    pub out: PathBuf,
    pub grid: usize,
    pub xrange: Option<(f64, f64)>,
    pub yrange: Option<(f64, f64)>,
    pub report: Option<PathBuf>,
    pub seed: u64,
    pub budget: u64,
    pub rotate: bool,
}

pub fn load_report(path: &Path) -> Result<SquareReport, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Report {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn cmd_plot(args: &PlotArgs, as_json: bool) -> Result<String, CliError> {
    if args.grid < MIN_GRID {
        return Err(CliError::Usage(format!(
            "grid must be at least {}, got {}",
            MIN_GRID, args.grid
        )));
    }
    let f = read_curve(&args.file)?;
    let rep = match &args.report {
        Some(p) => load_report(p)?,
        None => count_inscribed_squares(&f, &settings(args.seed, args.budget, args.rotate))?,
    };
    let squares: Vec<RenderSquare> = reality_and_render_data(&rep);
    let viewport = match (args.xrange, args.yrange) {
        (None, None) => None,
        (x, y) => {
            let auto = render::auto_viewport(&f, &squares);
            Some(Viewport::new(
                x.unwrap_or((auto.xmin, auto.xmax)),
                y.unwrap_or((auto.ymin, auto.ymax)),
            ))
        }
    };
    if viewport.is_some_and(|v| v.is_empty()) {
        return Err(CliError::Usage("empty viewport".to_string()));
    }
    let spec = RenderSpec {
        viewport,
        grid: args.grid,
        ..RenderSpec::default()
    };
    let svg = render_svg(&f, &squares, &spec);
    fs::write(&args.out, &svg).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    Ok(if as_json {
        to_json(&json!({"out": args.out, "squares": squares.len()}))
    } else {
        format!(
            "wrote {} with {}\n",
            args.out.display(),
            plural(squares.len(), "square")
        )
    })
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Bound { m } => cmd_bound(m, json),
        Command::MixedVolume { m } => cmd_mixed_volume(m, json),
        Command::Generators { file } => cmd_generators(&file, json),
        Command::NewtonCheck { file } => cmd_newton_check(&file, json),
        Command::Solve {
            file,
            budget,
            no_rotate,
        } => cmd_solve(&file, cli.seed, budget, !no_rotate, json),
        Command::Plot {
            file,
            out,
            grid,
            xrange,
            yrange,
            report,
            budget,
            rotate,
        } => cmd_plot(
            &PlotArgs {
                file,
                out,
                grid,
                xrange,
                yrange,
                report,
                seed: cli.seed,
                budget,
                rotate,
            },
            json,
        ),
    }
}
