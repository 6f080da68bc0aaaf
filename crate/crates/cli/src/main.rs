//! `cdseg`: render, verify and measure consistent digital segment systems.
//!
//! Exit codes: 0 when nothing was found, 1 when a check reports a violation,
//! 2 for configuration, I/O and oracle transport errors.

mod render;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cdseg::conformance::{
    check_axioms_report, check_box_and_slope, check_intersections, check_translation_invariance, extract_order,
    recover_global_order, ExtractError, RecoverError, Violation, Window,
};
use cdseg::external::serve;
use cdseg::hausdorff::{sweep_with, SweepMode, SweepRow};
use cdseg::highdim::{check_axioms_d, find_mixed_s3_violation, BoxD};
use cdseg::lines::{contains_own_segments, line_window, parallels_through, Slope};
use cdseg::order::{IntegerInterval, TotalOrder};
use cdseg::segment::{GridPoint, SegmentError, SegmentSystem};

use render::{Format, RenderSpec};

#[derive(Debug, Parser)]
#[command(name = "cdseg", version, about = "Consistent digital line segments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// System spec: order:<order>, box, waterline, specialline:<file>, extern:<command>
    #[arg(long, global = true)]
    system: Option<String>,
    /// Order spec: natural, pow2, perm:<seed>:<lo>:<hi>
    #[arg(long, global = true)]
    order: Option<String>,
    /// Window: N for [-N, N]², or x0,y0,x1,y1
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw segments as SVG or PPM.
    Render {
        /// System spec (or --system)
        system: Option<String>,
        /// Endpoint pair x0,y0:x1,y1 (repeatable)
        #[arg(long = "pair", allow_hyphen_values = true)]
        pairs: Vec<String>,
        /// Rays from --from to every boundary point of [0, N]² shifted to --from
        #[arg(long)]
        fan: Option<i64>,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        from: String,
        /// Canvas x0,y0,x1,y1 (default: bounding box of the endpoints)
        #[arg(long, allow_hyphen_values = true)]
        bounds: Option<String>,
        #[arg(long, default_value_t = 20)]
        cell: u32,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        /// Overlay the Euclidean chords
        #[arg(long)]
        chords: bool,
    },
    /// Check axioms and properties on a window; violations as JSON lines.
    Verify {
        /// System spec (or --system)
        system: Option<String>,
        #[arg(value_enum, default_value_t = Suite::All)]
        which: Suite,
    },
    /// Hausdorff distances of order-derived segments as CSV.
    Sweep {
        /// Order spec (or --order)
        order: Option<String>,
        /// All pairs of [0, N]²
        #[arg(long, conflicts_with = "random")]
        exhaustive: Option<i64>,
        /// Number of random pairs
        #[arg(long)]
        random: Option<u64>,
        #[arg(long = "max-l", default_value_t = 1 << 16)]
        max_l: u64,
        /// One row per pair instead of the per-length maxima
        #[arg(long)]
        pairs: bool,
    },
    /// Print the order a system induces at a point, ≺-increasing.
    Extract {
        /// System spec (or --system)
        system: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// lo,hi
        #[arg(long, allow_hyphen_values = true)]
        domain: String,
        /// Recover the global order from several base points in --window
        #[arg(long, conflicts_with = "point")]
        global: bool,
    },
    /// Build a digital line and test it.
    Lines {
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        point: String,
        /// all, empty, ratinc:<c>, ratexc:<c>, pred:<file>
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        /// Step sums lo,hi
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
        /// List the parallels through this point
        #[arg(long, allow_hyphen_values = true)]
        through: Option<String>,
    },
    /// Three-dimensional construction: axiom suite and mixed-type S3 search.
    Demo3d,
    /// Answer segment requests on standard input (external oracle protocol).
    #[command(hide = true)]
    Serve { system: Option<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Axioms,
    Consequences,
    Obs1,
    All,
}

/// Failure with the exit code it maps to.
enum Failure {
    Config(String),
    Violations,
}

impl From<SegmentError> for Failure {
    fn from(e: SegmentError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violations) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("cdseg: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let mut out: Box<dyn Write> = match &g.out {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = match cli.command {
        Command::Render {
            system,
            pairs,
            fan,
            from,
            bounds,
            cell,
            format,
            chords,
        } => {
            let system = system_of(system, g)?;
            cmd_render(
                &system,
                &pairs,
                fan,
                &from,
                bounds.as_deref(),
                cell,
                format,
                chords,
                &mut out,
            )
        }
        Command::Verify { system, which } => cmd_verify(&system_of(system, g)?, g, which, &mut out),
        Command::Sweep {
            order,
            exhaustive,
            random,
            max_l,
            pairs,
        } => cmd_sweep(&order_of(order, g)?, exhaustive, random, max_l, g.seed, pairs, &mut out),
        Command::Extract {
            system,
            point,
            domain,
            global,
        } => cmd_extract(&system_of(system, g)?, point.as_deref(), &domain, global, g, &mut out),
        Command::Lines {
            point,
            slope,
            diag,
            through,
        } => {
            let order = order_of(None, g)?;
            cmd_lines(&order, &point, &slope, &diag, through.as_deref(), &mut out)
        }
        Command::Demo3d => cmd_demo3d(&order_of(None, g)?, g, &mut out),
        Command::Serve { system } => {
            let system = system_of(system, g)?;
            serve(&system, io::stdin().lock(), &mut out).map_err(Failure::from)
        }
    };
    out.flush()?;
    result
}

fn system_of(positional: Option<String>, g: &Global) -> Result<SegmentSystem, Failure> {
    let spec = match (positional, &g.system, &g.order) {
        (Some(s), _, _) => s,
        (None, Some(s), _) => s.clone(),
        (None, None, Some(o)) => format!("order:{o}"),
        (None, None, None) => return Err(Failure::Config("no system given".to_string())),
    };
    Ok(SegmentSystem::from_spec(&spec)?)
}

fn order_of(positional: Option<String>, g: &Global) -> Result<TotalOrder, Failure> {
    let spec = positional
        .or_else(|| g.order.clone())
        .unwrap_or_else(|| "pow2".to_string());
    spec.parse().map_err(config)
}

fn parse_ints(s: &str, n: usize) -> Result<Vec<i64>, Failure> {
    let values: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Config(format!("expected {n} comma-separated integers, got {s:?}")))?;
    if values.len() != n {
        return Err(Failure::Config(format!(
            "expected {n} comma-separated integers, got {s:?}"
        )));
    }
    Ok(values)
}

fn parse_point(s: &str) -> Result<GridPoint, Failure> {
    s.parse().map_err(Failure::Config)
}

fn parse_interval(s: &str) -> Result<IntegerInterval, Failure> {
    let v = parse_ints(s, 2)?;
    IntegerInterval::new(v[0], v[1]).map_err(config)
}

fn window_of(g: &Global, default: i64) -> Result<Window, Failure> {
    match g.window.as_deref() {
        None => Ok(Window::centered(default)),
        Some(s) if !s.contains(',') => {
            let n: i64 = s
                .trim()
                .parse()
                .map_err(|_| Failure::Config(format!("bad window {s:?}")))?;
            if n < 0 {
                return Err(Failure::Config(format!("bad window {s:?}")));
            }
            Ok(Window::centered(n))
        }
        Some(s) => {
            let v = parse_ints(s, 4)?;
            Window::new(GridPoint::new(v[0], v[1]), GridPoint::new(v[2], v[3])).map_err(config)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    system: &SegmentSystem,
    pairs: &[String],
    fan: Option<i64>,
    from: &str,
    bounds: Option<&str>,
    cell: u32,
    format: Format,
    chords: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let mut endpoints = Vec::new();
    for pair in pairs {
        let (a, b) = pair
            .split_once(':')
            .ok_or_else(|| Failure::Config(format!("expected x0,y0:x1,y1, got {pair:?}")))?;
        endpoints.push((parse_point(a)?, parse_point(b)?));
    }
    if let Some(n) = fan {
        if n < 1 {
            return Err(Failure::Config("--fan needs N >= 1".to_string()));
        }
        let origin = parse_point(from)?;
        let ring = Window::new(origin, origin.offset(n, n)).map_err(config)?;
        for r in ring.points() {
            let on_edge = r.x == ring.lo().x || r.x == ring.hi().x || r.y == ring.lo().y || r.y == ring.hi().y;
            if on_edge && r != origin {
                endpoints.push((origin, r));
            }
        }
    }
    if endpoints.is_empty() {
        return Err(Failure::Config("nothing to draw: give --pair or --fan".to_string()));
    }
    let (lo, hi) = match bounds {
        Some(b) => {
            let v = parse_ints(b, 4)?;
            (GridPoint::new(v[0], v[1]), GridPoint::new(v[2], v[3]))
        }
        None => {
            let all = endpoints.iter().flat_map(|&(p, q)| [p, q]);
            let lo = all.clone().fold(GridPoint::new(i64::MAX, i64::MAX), |a, r| {
                GridPoint::new(a.x.min(r.x), a.y.min(r.y))
            });
            let hi = all.fold(GridPoint::new(i64::MIN, i64::MIN), |a, r| {
                GridPoint::new(a.x.max(r.x), a.y.max(r.y))
            });
            (lo, hi)
        }
    };
    let spec = RenderSpec {
        pairs: endpoints,
        lo,
        hi,
        cell,
        format,
        chords,
    };
    spec.validate().map_err(Failure::Config)?;
    let segs = render::segments(system, &spec)?;
    out.write_all(&render::render(&spec, &segs))?;
    Ok(())
}

fn cmd_verify(system: &SegmentSystem, g: &Global, which: Suite, out: &mut dyn Write) -> Result<(), Failure> {
    let w = window_of(g, 6)?;
    let mut found: Vec<Violation> = Vec::new();
    if matches!(which, Suite::Axioms | Suite::All) {
        let report = check_axioms_report(system, &w)?;
        eprintln!(
            "axioms on {w}: {} violations, {} pairs without a prolongation witness in the grown window",
            report.violations.len(),
            report.inconclusive.len()
        );
        found.extend(report.violations);
    }
    if matches!(which, Suite::Consequences | Suite::All) {
        let box_slope = check_box_and_slope(system, &w)?;
        // C3 builds a table of all pairs; keep its window small.
        let small = Window::new(
            GridPoint::new(w.lo().x.max(-4), w.lo().y.max(-4)),
            GridPoint::new(w.hi().x.min(4), w.hi().y.min(4)),
        )
        .unwrap_or(w);
        let c3 = check_intersections(system, &small)?;
        eprintln!(
            "consequences: C1/C2 on {w}: {} violations, C3 on {small}: {} violations",
            box_slope.len(),
            c3.len()
        );
        found.extend(box_slope);
        found.extend(c3);
    }
    if matches!(which, Suite::Obs1 | Suite::All) {
        let obs = check_translation_invariance(system, &w, -5..=5)?;
        eprintln!(
            "diagonal translation invariance on {w}, shifts -5..5: {} violations",
            obs.len()
        );
        found.extend(obs);
    }
    for v in &found {
        writeln!(out, "{}", v.to_json_line())?;
    }
    if found.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

fn cmd_sweep(
    order: &TotalOrder,
    exhaustive: Option<i64>,
    random: Option<u64>,
    max_l: u64,
    seed: Option<u64>,
    every: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let mode = match (exhaustive, random) {
        (Some(n), None) => SweepMode::Exhaustive(Window::square(0, n).map_err(config)?),
        (None, Some(count)) => {
            if max_l < 1 {
                return Err(Failure::Config("--max-l must be positive".to_string()));
            }
            SweepMode::Random {
                count,
                max_l,
                seed: seed.unwrap_or(0),
            }
        }
        _ => {
            return Err(Failure::Config(
                "give exactly one of --exhaustive N or --random COUNT".to_string(),
            ))
        }
    };
    writeln!(out, "{}", SweepRow::CSV_HEADER)?;
    let mut write_err = None;
    let report = sweep_with(order, &mode, |row| {
        if every && write_err.is_none() {
            if let Err(e) = writeln!(out, "{}", row.to_csv()) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    if !every {
        for row in &report.rows {
            writeln!(out, "{}", row.to_csv())?;
        }
    }
    eprintln!(
        "{} pairs, max H/log2(L) = {:.9}, {} above sqrt(5)*log2(L)",
        report.pairs,
        report.max_ratio,
        report.failures.len()
    );
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

fn cmd_extract(
    system: &SegmentSystem,
    point: Option<&str>,
    domain: &str,
    global: bool,
    g: &Global,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let domain = parse_interval(domain)?;
    let induced = if global {
        let w = window_of(g, 6)?;
        match recover_global_order(system, &w, domain) {
            Ok(order) => order,
            Err(RecoverError::Segment(e)) => return Err(e.into()),
            Err(RecoverError::Extract(ExtractError::Segment(e))) => return Err(e.into()),
            Err(RecoverError::Precondition(v)) => {
                writeln!(out, "{}", v.to_json_line())?;
                return Err(Failure::Violations);
            }
            Err(e) => {
                eprintln!("cdseg: {e}");
                return Err(Failure::Violations);
            }
        }
    } else {
        let p = parse_point(point.ok_or_else(|| Failure::Config("give --point or --global".to_string()))?)?;
        match extract_order(system, p, domain) {
            Ok(order) => order,
            Err(ExtractError::Segment(e)) => return Err(e.into()),
            Err(e @ ExtractError::Straddles { .. }) => return Err(config(e)),
            Err(e) => {
                eprintln!("cdseg: {e}");
                return Err(Failure::Violations);
            }
        }
    };
    let ranking: Vec<String> = induced.ranking().iter().map(i64::to_string).collect();
    writeln!(out, "{}", ranking.join(" "))?;
    Ok(())
}

fn cmd_lines(
    order: &TotalOrder,
    point: &str,
    slope: &str,
    diag: &str,
    through: Option<&str>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let p = parse_point(point)?;
    let slope = Slope::parse(order, slope).map_err(config)?;
    let diag = parse_interval(diag)?;
    let lw = line_window(order, p, slope, diag).map_err(config)?;
    let points: Vec<String> = lw.points().iter().map(GridPoint::to_string).collect();
    writeln!(out, "line {} through {p} over step sums {diag}", lw.slope())?;
    writeln!(out, "points {}", points.join(" "))?;
    let own = contains_own_segments(order, &lw).map_err(config)?;
    writeln!(out, "contains own segments: {own}")?;
    if let Some(t) = through {
        let t = parse_point(t)?;
        let parallels = parallels_through(order, &lw, t).map_err(config)?;
        let names: Vec<String> = parallels.iter().map(Slope::to_string).collect();
        writeln!(out, "parallels through {t}: {} ({})", parallels.len(), names.join(" "))?;
    }
    if own {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

fn cmd_demo3d(order: &TotalOrder, g: &Global, out: &mut dyn Write) -> Result<(), Failure> {
    let n: i64 = match g.window.as_deref() {
        None => 3,
        Some(s) => s
            .trim()
            .parse()
            .ok()
            .filter(|&n: &i64| n >= 0)
            .ok_or_else(|| Failure::Config(format!("demo3d takes --window N, got {s:?}")))?,
    };
    let positive = BoxD::cube(3, 0, n).map_err(config)?;
    let violations = check_axioms_d(order, &positive).map_err(config)?;
    writeln!(
        out,
        "order {order}: positive-slope axioms on [0,{n}]^3: {} violations",
        violations.len()
    )?;
    for v in &violations {
        writeln!(out, "{}", v.to_json_line())?;
    }
    let mixed = BoxD::cube(3, -n, n).map_err(config)?;
    match find_mixed_s3_violation(order, &mixed).map_err(config)? {
        Some(w) => writeln!(out, "mixed slope types on [-{n},{n}]^3: S3 fails at {w}")?,
        None => writeln!(out, "mixed slope types on [-{n},{n}]^3: NONE")?,
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

#[cfg(test)]
mod tests;
