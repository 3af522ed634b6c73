//! The `metric-spread` command line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::continuum::{
    interval_magnitude, interval_spread0, interval_spread2, interval_spread_inf,
    riemannian_asymptotic_spread, sphere_spread0, surface_asymptotic_spread, ManifoldSummary,
};
use crate::descriptor::{Space, SpaceDescriptor};
use crate::dimension::{dimension_profile, DEFAULT_LOG_STEP};
use crate::diversity::Order;
use crate::error::{Error, Result};
use crate::io::format_value;
use crate::magnitude::{
    magnitude, magnitude_profile, maximum_diversity, maximum_diversity_profile,
};
use crate::metric::{diameter, min_distance, MetricSpace};
use crate::spread::{log_spaced, spread_profile, spread_q, LogGrid, DEFAULT_POINTS_PER_DECADE};

/// Exit status for invalid input.
pub const EXIT_INPUT: i32 = 2;
/// Exit status when a scalar magnitude query hits a singular similarity matrix.
pub const EXIT_NO_WEIGHTING: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "metric-spread",
    version,
    about = "Spread, magnitude and spread dimension of metric spaces"
)]
pub struct Cli {
    /// Worker threads; output does not depend on this value.
    #[arg(long, global = true, env = "METRIC_SPREAD_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the space as a matrix or points CSV.
    Generate {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print E_q(tX).
    Spread {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(short, long)]
        t: f64,
        #[arg(short, long, default_value = "0")]
        q: Order,
    },
    /// Print the magnitude |tX|.
    Magnitude {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(short, long)]
        t: f64,
    },
    /// Print the maximum diversity |tX|_+ and its support.
    Maxdiv {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(short, long)]
        t: f64,
    },
    /// Tabulate a quantity over a log-spaced scale grid.
    Profile {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_enum)]
        quantity: ProfileQuantity,
        /// Order for spread profiles.
        #[arg(short, long, default_value = "0")]
        q: Order,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the spread dimension over a log-spaced scale grid.
    Dimension {
        #[command(flatten)]
        space: SpaceArg,
        #[command(flatten)]
        grid: GridArgs,
        /// Relative log-step of the central difference.
        #[arg(long, default_value_t = DEFAULT_LOG_STEP)]
        delta: f64,
        #[arg(long, value_enum, default_value = "scale")]
        x_axis: XAxis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a closed-form continuum result.
    Continuum {
        #[arg(long, value_enum)]
        formula: Formula,
        /// Comma-separated parameter values; overrides the grid.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_POINTS_PER_DECADE)]
        points_per_decade: usize,
        /// Manifold or sphere dimension.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        volume: Option<f64>,
        /// Total scalar curvature.
        #[arg(long)]
        tsc: Option<f64>,
        #[arg(long)]
        area: Option<f64>,
        /// Euler characteristic.
        #[arg(long)]
        chi: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SpaceArg {
    /// Space descriptor: inline JSON or a path to a JSON file.
    #[arg(long = "space")]
    pub descriptor: String,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub t_min: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS_PER_DECADE)]
    pub points_per_decade: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileQuantity {
    Spread,
    Magnitude,
    Maxdiv,
}

/// First column of a dimension profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum XAxis {
    /// The scale factor t.
    Scale,
    /// t times the diameter: the length of a Cantor set or width of a Koch
    /// curve or Sierpinski triangle.
    Extent,
    /// t times the smallest interpoint distance.
    Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    IntervalE0,
    IntervalE2,
    IntervalEinf,
    IntervalMag,
    Sphere,
    Asymptotic,
    Surface,
}

impl SpaceArg {
    fn load(&self) -> Result<(serde_json::Value, Space)> {
        let text = self.descriptor.trim();
        let (json, base) = if text.starts_with('{') {
            (text.to_string(), None)
        } else {
            let path = Path::new(text);
            let json = std::fs::read_to_string(path).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            })?;
            (json, path.parent().map(Path::to_path_buf))
        };
        let descriptor = SpaceDescriptor::from_json(&json)?;
        let space = descriptor.build(base.as_deref())?;
        Ok((serde_json::to_value(&descriptor)?, space))
    }
}

impl GridArgs {
    fn scales(&self) -> Result<Vec<f64>> {
        Ok(LogGrid::new(self.t_min, self.t_max, self.points_per_decade)?.scales())
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

/// `<out>.<suffix>` next to the main output, or standard error without one.
fn write_sidecar(out: &Option<PathBuf>, suffix: &str, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".");
            name.push(suffix);
            std::fs::write(PathBuf::from(name), text + "\n")?;
        }
        None => eprintln!("{text}"),
    }
    Ok(())
}

/// Runs one command inside a pool of `cli.threads` workers.
pub fn run(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::param("--threads must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    pool.install(|| execute(cli.command))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate { space, out } => {
            let (_, space) = space.load()?;
            let mut w = output(&out)?;
            space.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Spread { space, t, q } => {
            let (_, space) = space.load()?;
            println!("{}", format_value(spread_q(&space, t, q)?.value));
        }
        Command::Magnitude { space, t } => {
            let (_, space) = space.load()?;
            let m = magnitude(&space, t)?;
            if m.weighting.is_degraded() {
                eprintln!("warning: weighting residual {:e}", m.weighting.residual);
            }
            println!("{}", format_value(m.value));
        }
        Command::Maxdiv { space, t } => {
            let (_, space) = space.load()?;
            let m = maximum_diversity(&space, t)?;
            println!("{}", format_value(m.value));
            eprintln!("support: {:?}", m.subset);
        }
        Command::Profile {
            space,
            quantity,
            q,
            grid,
            out,
        } => {
            let (_, space) = space.load()?;
            let scales = grid.scales()?;
            let profile = match quantity {
                ProfileQuantity::Spread => spread_profile(&space, &scales, q)?,
                ProfileQuantity::Maxdiv => maximum_diversity_profile(&space, &scales)?,
                ProfileQuantity::Magnitude => {
                    let m = magnitude_profile(&space, &scales)?;
                    let report = json!({
                        "singular_scales": m.singular_scales,
                        "undefined_grid_scales": m.profile.iter()
                            .filter(|(_, v)| v.is_none())
                            .map(|(t, _)| t)
                            .collect::<Vec<_>>(),
                        "degraded_scales": m.degraded_scales,
                    });
                    write_sidecar(&out, "singularities.json", &report)?;
                    m.profile
                }
            };
            let mut w = output(&out)?;
            profile.write_csv(&mut w, ("t", "value"), 1.0)?;
            w.flush()?;
        }
        Command::Dimension {
            space,
            grid,
            delta,
            x_axis,
            out,
        } => {
            let (descriptor, space) = space.load()?;
            let scales = grid.scales()?;
            let (header, factor) = match x_axis {
                XAxis::Scale => ("t", 1.0),
                XAxis::Extent => ("extent", diameter(&space)?),
                XAxis::Spacing => ("spacing", min_distance(&space).unwrap_or(0.0)),
            };
            if factor.is_nan() || factor <= 0.0 {
                return Err(Error::param(format!(
                    "x-axis {header} needs a space with two distinct points"
                )));
            }
            eprintln!(
                "spread dimension of {} points at {} scales",
                space.len(),
                scales.len()
            );
            let profile = dimension_profile(&space, &scales, delta)?;
            let mut w = output(&out)?;
            profile.write_csv(&mut w, (header, "dimension"), factor)?;
            w.flush()?;
            let meta = json!({
                "delta": delta,
                "descriptor": descriptor,
                "points": space.len(),
                "x_axis": header,
                "x_factor": factor,
            });
            write_sidecar(&out, "meta.json", &meta)?;
        }
        Command::Continuum {
            formula,
            values,
            min,
            max,
            points_per_decade,
            n,
            volume,
            tsc,
            area,
            chi,
            out,
        } => {
            let params = match (values, min, max) {
                (Some(v), _, _) if !v.is_empty() => v,
                (_, Some(lo), Some(hi)) => {
                    LogGrid::new(lo, hi, points_per_decade).map(|g| log_spaced(lo, hi, g.len()))?
                }
                _ => return Err(Error::param("give --values or both --min and --max")),
            };
            let need = |v: Option<f64>, flag: &str| {
                v.ok_or_else(|| Error::param(format!("formula needs --{flag}")))
            };
            let f: Box<dyn Fn(f64) -> Result<f64>> = match formula {
                Formula::IntervalE0 => Box::new(interval_spread0),
                Formula::IntervalE2 => Box::new(interval_spread2),
                Formula::IntervalEinf => Box::new(interval_spread_inf),
                Formula::IntervalMag => Box::new(interval_magnitude),
                Formula::Sphere => {
                    let n = n.ok_or_else(|| Error::param("formula needs --n"))?;
                    Box::new(move |r| sphere_spread0(n, r))
                }
                Formula::Asymptotic => {
                    let n = n.ok_or_else(|| Error::param("formula needs --n"))?;
                    let m = ManifoldSummary::new(n, need(volume, "volume")?, need(tsc, "tsc")?)?;
                    Box::new(move |t| riemannian_asymptotic_spread(&m, t))
                }
                Formula::Surface => {
                    let (a, c) = (need(area, "area")?, need(chi, "chi")?);
                    Box::new(move |t| surface_asymptotic_spread(a, c, t))
                }
            };
            let rows = params
                .iter()
                .map(|&x| f(x).map(|v| (x, v)))
                .collect::<Result<Vec<_>>>()?;
            let mut w = output(&out)?;
            writeln!(w, "param,value")?;
            for (x, v) in rows {
                writeln!(w, "{},{}", format_value(x), format_value(v))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoWeighting { .. } => EXIT_NO_WEIGHTING,
        _ => EXIT_INPUT,
    }
}
