//! Command line front end: derive implicit equations, trace arcs to CSV or
//! SVG, and verify derivations against the brute-force oracle.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input or I/O,
//! 3 input is numeric-only or otherwise not symbolically derivable.

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use focal::oracle::oracle_points_fn;
use focal::trace::trace_fn;
use focal::{
    classify_point, eliminate, eliminate_closure, hausdorff, trace_implicit, verify_derivation,
    DerivedCurve, PointClass, RadicalEquation, Window,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use config::LoadedInput;
use output::{circle_of_constraint, write_csv, write_svg, CircleOverlay};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_NOT_DERIVABLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "focal",
    about = "Derive, trace, and verify focal curves (weighted sums of point and line distances)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the implicit polynomial and validity constraints of each
    /// defining relation in the config.
    Derive {
        /// JSON config: a named family or a raw scene.
        #[arg(long)]
        config: PathBuf,
    },
    /// Trace locus arcs on a grid and emit CSV vertices or an SVG plot.
    Trace {
        #[arg(long)]
        config: PathBuf,
        /// xmin,xmax,ymin,ymax
        #[arg(long, default_value = "-10,10,-10,10", allow_hyphen_values = true)]
        window: String,
        /// Grid resolution NXxNY.
        #[arg(long, default_value = "512x512")]
        res: String,
        /// Residual tolerance for kept vertices.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output path; `both` writes <out>.csv and <out>.svg. CSV and SVG
        /// go to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trace the residual zero set directly, or a derived implicit
        /// polynomial filtered by relation and constraints.
        #[arg(long, value_enum, default_value_t = Via::Residual)]
        via: Via,
        /// Index of the defining relation when tracing via the implicit.
        #[arg(long, default_value_t = 0)]
        equation: usize,
        /// Draw circle-shaped constraint boundaries in the SVG.
        #[arg(long)]
        overlay_constraints: bool,
        /// Mark Zariski-closure rejects in the SVG.
        #[arg(long)]
        show_rejects: bool,
    },
    /// Check every derivation against independently scanned oracle points.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "-10,10,-10,10", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value = "512x512")]
        res: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Seed for the random classification spot check.
        #[arg(long, default_value_t = 0xF0CA1)]
        seed: u64,
    },
    /// List the built-in families and their config shapes.
    Families,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Via {
    Residual,
    Implicit,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Derive { config } => cmd_derive(&config),
        Cmd::Trace {
            config,
            window,
            res,
            tol,
            format,
            out,
            via,
            equation,
            overlay_constraints,
            show_rejects,
        } => cmd_trace(
            &config,
            &window,
            &res,
            tol,
            format,
            out.as_deref(),
            via,
            equation,
            overlay_constraints,
            show_rejects,
        ),
        Cmd::Verify {
            config,
            window,
            res,
            tol,
            seed,
        } => cmd_verify(&config, &window, &res, tol, seed),
        Cmd::Families => {
            print_families();
            ExitCode::SUCCESS
        }
    }
}

fn load_or_exit(path: &Path) -> Result<LoadedInput, ExitCode> {
    config::load(path).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_BAD_INPUT)
    })
}

fn parse_window(window: &str, res: &str) -> Result<Window, String> {
    let nums: Vec<f64> = window
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad window: {e}")))
        .collect::<Result<_, _>>()?;
    if nums.len() != 4 {
        return Err("window must be xmin,xmax,ymin,ymax".into());
    }
    let (nx, ny) = res
        .split_once('x')
        .ok_or_else(|| "resolution must be NXxNY".to_string())?;
    let nx: usize = nx.trim().parse().map_err(|e| format!("bad resolution: {e}"))?;
    let ny: usize = ny.trim().parse().map_err(|e| format!("bad resolution: {e}"))?;
    Window::new(nums[0], nums[1], nums[2], nums[3], nx, ny).map_err(|e| e.to_string())
}

/// Constrained derivation, falling back to the bare closure for relations
/// whose sign pattern admits no reversibility constraints.
fn derive_equation(eq: &RadicalEquation) -> Result<(DerivedCurve, Option<String>), String> {
    match eliminate(eq) {
        Ok(d) => Ok((d, None)),
        Err(first) => match eliminate_closure(eq) {
            Ok(d) => Ok((d, Some(format!("{first}; Zariski closure only")))),
            Err(second) => Err(format!("{second}")),
        },
    }
}

fn require_derivable(input: &LoadedInput) -> Result<(), ExitCode> {
    if !input.exact {
        eprintln!("error: config contains float literals; symbolic derivation refused");
        return Err(ExitCode::from(EXIT_NOT_DERIVABLE));
    }
    if input.equations.is_empty() {
        eprintln!("error: scene is not rationally normalizable; residual tracing only");
        return Err(ExitCode::from(EXIT_NOT_DERIVABLE));
    }
    Ok(())
}

fn cmd_derive(cfg: &Path) -> ExitCode {
    let input = match load_or_exit(cfg) {
        Ok(i) => i,
        Err(code) => return code,
    };
    if let Err(code) = require_derivable(&input) {
        return code;
    }
    let n = input.equations.len();
    println!("# {}", input.label);
    println!("# equations: {n}");
    let mut failed = false;
    for (i, eq) in input.equations.iter().enumerate() {
        println!("# equation {}/{n}", i + 1);
        match derive_equation(eq) {
            Ok((d, note)) => {
                println!("implicit: {}", d.implicit.normalize().unwrap());
                println!("degree: {}", d.implicit.degree());
                for c in &d.constraints {
                    println!("constraint: {c}");
                }
                if let Some(note) = note {
                    println!("note: {note}");
                }
            }
            Err(msg) => {
                println!("error: {msg}");
                failed = true;
            }
        }
    }
    if failed {
        ExitCode::from(EXIT_NOT_DERIVABLE)
    } else {
        ExitCode::SUCCESS
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_trace(
    cfg: &Path,
    window: &str,
    res: &str,
    tol: f64,
    format: Format,
    out: Option<&Path>,
    via: Via,
    equation: usize,
    overlay_constraints: bool,
    show_rejects: bool,
) -> ExitCode {
    let input = match load_or_exit(cfg) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let win = match parse_window(window, res) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_BAD_INPUT);
        }
    };
    if format == Format::Both && out.is_none() {
        eprintln!("error: --format both requires --out");
        return ExitCode::from(EXIT_BAD_INPUT);
    }

    let started = Instant::now();
    let mut circles: Vec<CircleOverlay> = Vec::new();
    let (arcs, residual): (_, Box<dyn Fn(f64, f64) -> f64>) = match via {
        Via::Residual => {
            let arcs = trace_fn(|x, y| input.residual(x, y), &win, tol);
            (arcs, Box::new(|x, y| input.residual(x, y)))
        }
        Via::Implicit => {
            if let Err(code) = require_derivable(&input) {
                return code;
            }
            let Some(eq) = input.equations.get(equation) else {
                eprintln!(
                    "error: equation index {equation} out of range ({} available)",
                    input.equations.len()
                );
                return ExitCode::from(EXIT_BAD_INPUT);
            };
            let d = match derive_equation(eq) {
                Ok((d, _)) => d,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(EXIT_NOT_DERIVABLE);
                }
            };
            if overlay_constraints {
                circles = d.constraints.iter().filter_map(circle_of_constraint).collect();
            }
            let arcs = trace_implicit(&d, |x, y| eq.residual(x, y), &win, tol);
            (arcs, Box::new(move |x, y| eq.residual(x, y)))
        }
    };
    let arcs = match arcs {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_BAD_INPUT);
        }
    };
    if overlay_constraints && via == Via::Residual {
        eprintln!("note: --overlay-constraints applies only with --via implicit");
    }
    eprintln!(
        "timing: traced {} arcs / {} vertices / {} rejects in {:?}",
        arcs.stats.arc_count,
        arcs.stats.vertex_count,
        arcs.stats.reject_count,
        started.elapsed()
    );

    let write_to = |path: Option<&Path>, emit: &dyn Fn(&mut dyn Write) -> io::Result<()>| -> io::Result<()> {
        match path {
            Some(p) => {
                let mut f = BufWriter::new(File::create(p)?);
                emit(&mut f)?;
                f.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                emit(&mut lock)
            }
        }
    };
    let result = match format {
        Format::Csv => write_to(out, &|w| write_csv(w, &arcs, &residual)),
        Format::Svg => write_to(out, &|w| write_svg(w, &arcs, &win, &circles, show_rejects)),
        Format::Both => {
            let base = out.unwrap();
            let csv = base.with_extension("csv");
            let svg = base.with_extension("svg");
            write_to(Some(&csv), &|w| write_csv(w, &arcs, &residual))
                .and_then(|()| write_to(Some(&svg), &|w| write_svg(w, &arcs, &win, &circles, show_rejects)))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
    }
}

fn cmd_verify(cfg: &Path, window: &str, res: &str, tol: f64, seed: u64) -> ExitCode {
    let input = match load_or_exit(cfg) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let win = match parse_window(window, res) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_BAD_INPUT);
        }
    };
    if let Err(code) = require_derivable(&input) {
        return code;
    }

    println!("# verify: {}", input.label);
    println!(
        "# window: [{}, {}] x [{}, {}] at {}x{}, tol {tol}",
        win.xmin, win.xmax, win.ymin, win.ymax, win.nx, win.ny
    );

    let started = Instant::now();
    let oracle = oracle_points_fn(|x, y| input.residual(x, y), &win, tol * 1e-3);
    eprintln!("timing: oracle {} points in {:?}", oracle.points.len(), started.elapsed());
    println!("oracle: {} locus points", oracle.points.len());

    let n = input.equations.len();
    let bound = 2.0 * win.cell_diagonal();
    let relation_tol = tol * 1e-2;
    let mut ok = true;
    let mut explained = vec![false; oracle.points.len()];
    let mut derivations = Vec::new();

    for (i, eq) in input.equations.iter().enumerate() {
        let d = match derive_equation(eq) {
            Ok((d, _)) => d,
            Err(msg) => {
                eprintln!("error: equation {}/{n}: {msg}", i + 1);
                return ExitCode::from(EXIT_NOT_DERIVABLE);
            }
        };

        // Full-locus points owned by this relation, for the coverage tally.
        for (k, p) in oracle.points.iter().enumerate() {
            if eq.residual(p.x, p.y).abs() <= relation_tol {
                explained[k] = true;
            }
        }

        // The relation's own brute-force locus. This is the set the
        // derivation must reproduce: every scanned point satisfies the
        // implicit and all constraints, and the traced arcs stay close.
        let stage = Instant::now();
        let subset = if n == 1 {
            oracle.clone()
        } else {
            oracle_points_fn(|x, y| eq.residual(x, y), &win, tol * 1e-3)
        };
        let arcs = match trace_implicit(&d, |x, y| eq.residual(x, y), &win, tol) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("error: equation {}/{n}: {e}", i + 1);
                return ExitCode::from(EXIT_BAD_INPUT);
            }
        };
        let verts = arcs.vertices();

        let line = match (subset.points.is_empty(), verts.is_empty()) {
            (true, true) => {
                // Nothing on this relation inside the window from either
                // route: vacuously consistent.
                format!("equation {}/{n}: empty locus in window, PASS", i + 1)
            }
            (false, false) => {
                let report = match verify_derivation(&d, &subset, tol) {
                    Ok(r) => r,
                    Err(e) => {
                        eprintln!("error: equation {}/{n}: {e}", i + 1);
                        return ExitCode::from(EXIT_BAD_INPUT);
                    }
                };
                let gap = match hausdorff(&verts, &subset.coordinates()) {
                    Ok(g) => g,
                    Err(e) => {
                        eprintln!("error: equation {}/{n}: {e}", i + 1);
                        return ExitCode::from(EXIT_BAD_INPUT);
                    }
                };
                let pass = report.pass && gap <= bound;
                ok &= pass;
                format!(
                    "equation {}/{n}: {} points, implicit worst {:.3e}, margin worst {:.3e}, hausdorff {:.4} (bound {:.4}), {}",
                    i + 1,
                    report.total,
                    report.worst_implicit,
                    report.worst_margin,
                    gap,
                    bound,
                    if pass { "PASS" } else { "FAIL" }
                )
            }
            (oracle_empty, _) => {
                ok = false;
                format!(
                    "equation {}/{n}: {} route found the locus, the other did not, FAIL",
                    i + 1,
                    if oracle_empty { "trace" } else { "oracle" }
                )
            }
        };
        println!("{line}");
        eprintln!("timing: equation {}/{n} checked in {:?}", i + 1, stage.elapsed());
        derivations.push(d);
    }

    let unexplained = explained.iter().filter(|&&e| !e).count();
    println!("coverage: {unexplained} oracle points outside every relation");
    ok &= unexplained == 0;

    // Random spot check: classification against the first relation must be
    // internally consistent with the residual and constraints it reports.
    let eq0 = &input.equations[0];
    let d0 = &derivations[0];
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut on_arc, mut zariski, mut off, mut inconsistent) = (0usize, 0usize, 0usize, 0usize);
    for _ in 0..1000 {
        let x = rng.gen_range(win.xmin..win.xmax);
        let y = rng.gen_range(win.ymin..win.ymax);
        match classify_point(d0, |px, py| eq0.residual(px, py), x, y, tol) {
            PointClass::OnArc => {
                on_arc += 1;
                let consistent = eq0.residual(x, y).abs() <= tol
                    && d0.satisfies_constraints(x, y, tol)
                    && (n > 1 || input.residual(x, y).abs() <= tol);
                if !consistent {
                    inconsistent += 1;
                }
            }
            PointClass::ZariskiOnly => zariski += 1,
            PointClass::OffCurve => off += 1,
        }
    }
    println!(
        "classification: 1000 sampled, {off} off-curve, {zariski} zariski-only, {on_arc} on-arc, {inconsistent} inconsistent"
    );
    ok &= inconsistent == 0;

    // Every oracle point of a single-relation input must classify OnArc;
    // with several relations the points of other branches land on the
    // shared implicit as ZariskiOnly or miss region polynomials entirely.
    let (mut o_on, mut o_zar, mut o_off) = (0usize, 0usize, 0usize);
    for p in &oracle.points {
        match classify_point(d0, |px, py| eq0.residual(px, py), p.x, p.y, tol) {
            PointClass::OnArc => o_on += 1,
            PointClass::ZariskiOnly => o_zar += 1,
            PointClass::OffCurve => o_off += 1,
        }
    }
    println!(
        "oracle classification vs relation 1: {o_on} on-arc, {o_zar} zariski-only, {o_off} off-curve"
    );
    if n == 1 {
        ok &= o_zar == 0 && o_off == 0;
    }

    println!("verify: {}", if ok { "PASS" } else { "FAIL" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAIL)
    }
}

fn print_families() {
    println!("built-in families (use as the \"family\" object in a config):");
    println!(
        "  parabola       {{\"name\": \"parabola\", \"p\": 2}}                         y^2 = 2px"
    );
    println!(
        "  ellipse        {{\"name\": \"ellipse\", \"a\": 5, \"b\": 4}}                 R1 + R2 = 2a"
    );
    println!(
        "  hyperbola      {{\"name\": \"hyperbola\", \"a\": 4, \"b\": 3}}               |R1 - R2| = 2a"
    );
    println!(
        "  cartesian_oval {{\"name\": \"cartesian_oval\", \"c\": 1, \"m\": 2, \"n\": 1, \"s\": 5, \"branch\": \"plus\"}}"
    );
    println!(
        "  trifocal       {{\"name\": \"trifocal\", \"a\": -1, \"b\": 1, \"h\": 1, \"s\": 5}}  R1 + R2 + R3 = s"
    );
    println!(
        "  erdos_mordell  {{\"name\": \"erdos_mordell\", \"vertices\": [[0,0],[4,0],[0,3]]}}"
    );
    println!();
    println!("numbers may be integers, exact \"p/q\" strings, or floats;");
    println!("floats make the input numeric-only (trace works, derive exits 3).");
    println!("raw scenes use {{\"scene\": {{\"foci\": [{{\"x\",\"y\",\"weight\"}}], \"directrices\": [{{\"a\",\"b\",\"c\",\"weight\"}}], \"s\"}}}}.");
}
