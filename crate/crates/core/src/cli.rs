//! Command-line front end.
//!
//! ```text
//! phonobands dispersion --config cell.toml [--out DIR] [--threads N] [--svg]
//! phonobands compare    --config cell.toml [--result dispersion.csv] [--out DIR] [--threads N] [--svg]
//! phonobands analytic   --config cell.toml [--out DIR]
//! phonobands runge      [--degree 10] [--out DIR]
//! phonobands quadcheck  [--max-degree 9] [--out DIR]
//! ```
//!
//! `PHONOBANDS_THREADS` stands in for `--threads`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{bilayer_branches, BilayerSpec, HomogeneousOracle, Polarization};
use crate::basis::{gauss_legendre_quadrature, gll_quadrature, monomial_exactness, runge_study, QuadratureKind};
use crate::config::{parse_config, OutputFormat, RunConfig};
use crate::output::{band_diagram_svg, float, read_csv, summarize, summary_json, write_csv};
use crate::sweep::{compare_to_oracle, compute_dispersion, sample_path, DispersionResult, ErrorReport, Oracle};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "phonobands", version, about = "Dispersion curves of 2D phononic crystals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the configured path and write the dispersion curves.
    Dispersion(RunArgs),
    /// Compare a sweep against the closed-form oracle for the cell.
    Compare(CompareArgs),
    /// Write the closed-form branches alone.
    Analytic(ConfigArgs),
    /// Interpolation error of the Runge function per node family.
    Runge(RungeArgs),
    /// Monomial exactness of the quadrature rules.
    Quadcheck(QuadcheckArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `output.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    /// Worker threads for the wave-vector sweep. Results do not depend on it.
    #[arg(long, env = "PHONOBANDS_THREADS")]
    pub threads: Option<usize>,
    /// Also write an SVG band diagram.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Compare this dispersion CSV instead of running a new sweep.
    #[arg(long)]
    pub result: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RungeArgs {
    #[arg(long, default_value_t = 10)]
    pub degree: usize,
    #[arg(long, default_value_t = 2001)]
    pub probe_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuadcheckArgs {
    #[arg(long, default_value_t = 9)]
    pub max_degree: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses the process arguments, runs, and maps errors to a nonzero exit.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Dispersion(args) => dispersion(&args, stdout),
        Command::Compare(args) => compare(&args, stdout),
        Command::Analytic(args) => analytic(&args, stdout),
        Command::Runge(args) => runge(&args, stdout),
        Command::Quadcheck(args) => quadcheck(&args, stdout),
    }
}

struct Loaded {
    config: RunConfig,
    hash: String,
    out_dir: PathBuf,
}

fn load(args: &ConfigArgs) -> Result<Loaded> {
    let config = parse_config(&args.config)?;
    let hash = config.hash()?;
    let out_dir = args.out.clone().unwrap_or_else(|| config.output.directory.clone());
    fs::create_dir_all(&out_dir)?;
    Ok(Loaded { config, hash, out_dir })
}

fn thread_count(requested: Option<usize>) -> usize {
    requested
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn sweep(loaded: &Loaded, threads: Option<usize>) -> Result<DispersionResult> {
    let cfg = &loaded.config;
    let mut result = compute_dispersion(
        &cfg.discretization()?,
        &cfg.path_spec()?,
        cfg.sweep.n_modes,
        thread_count(threads),
    )?;
    result.normalization = cfg.normalization()?;
    Ok(result)
}

fn write_artifacts(
    loaded: &Loaded,
    result: &DispersionResult,
    report: Option<&ErrorReport>,
    svg: bool,
    stdout: &mut dyn Write,
) -> Result<()> {
    let cfg = &loaded.config;
    let dir = &loaded.out_dir;
    if cfg.wants(OutputFormat::Csv) {
        let path = dir.join("dispersion.csv");
        write_csv(fs::File::create(&path)?, result, Some(&loaded.hash))?;
        writeln!(stdout, "wrote {}", path.display())?;
    }
    if cfg.wants(OutputFormat::Json) {
        let path = dir.join("summary.json");
        let echo = serde_json::to_value(cfg)?;
        let summary = summarize(result, Some(echo), Some(loaded.hash.clone()), report);
        fs::write(&path, summary_json(&summary)?)?;
        writeln!(stdout, "wrote {}", path.display())?;
    }
    if svg || cfg.wants(OutputFormat::Svg) {
        let path = dir.join("bands.svg");
        fs::write(&path, band_diagram_svg(result))?;
        writeln!(stdout, "wrote {}", path.display())?;
    }
    Ok(())
}

fn dispersion(args: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    let loaded = load(&args.common)?;
    let result = sweep(&loaded, args.threads)?;
    writeln!(
        stdout,
        "{} samples x {} modes on {}",
        result.samples.len(),
        result.n_branches(),
        result.provenance.path
    )?;
    write_artifacts(&loaded, &result, None, args.svg, stdout)
}

fn compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<()> {
    let loaded = load(&args.run.common)?;
    let result = match &args.result {
        Some(path) => read_csv(std::io::BufReader::new(fs::File::open(path)?))?.result,
        None => sweep(&loaded, args.run.threads)?,
    };
    let oracle = Oracle::for_cell(&result.provenance.cell)?;
    let report = compare_to_oracle(&result, &oracle)?;
    let label = match report.metric {
        crate::sweep::ErrorMetric::RelativeFrequency => "relative frequency error",
        crate::sweep::ErrorMetric::RayleighResidual => "layered-medium residual",
    };
    writeln!(stdout, "branch  max {label:<26} median")?;
    for b in &report.branches {
        writeln!(stdout, "{:>6}  {:<30.3e} {:.3e}", b.branch, b.max, b.median)?;
    }
    let path = loaded.out_dir.join("report.json");
    fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
    writeln!(stdout, "wrote {}", path.display())?;
    if args.result.is_none() {
        write_artifacts(&loaded, &result, Some(&report), args.run.svg, stdout)?;
    }
    Ok(())
}

fn analytic(args: &ConfigArgs, stdout: &mut dyn Write) -> Result<()> {
    let loaded = load(args)?;
    let cfg = &loaded.config;
    let cell = cfg.unit_cell()?;
    let norm = cfg.normalization()?;
    let n_modes = cfg.sweep.n_modes;
    let path = loaded.out_dir.join("analytic.csv");
    let mut w = csv::Writer::from_path(&path)?;
    match Oracle::for_cell(&cell)? {
        Oracle::Homogeneous(_) => {
            let oracle = HomogeneousOracle::for_cell(&cell)?;
            w.write_record(["path_coordinate", "k_x", "k_y", "mode_index", "omega", "omega_normalized"])?;
            for p in sample_path(&cfg.path_spec()?, &cell) {
                for (j, omega) in oracle.frequencies(p.k).into_iter().take(n_modes).enumerate() {
                    w.write_record([
                        float(p.coordinate),
                        float(p.k.kx),
                        float(p.k.ky),
                        (j + 1).to_string(),
                        float(omega),
                        float(norm.frequency(omega)),
                    ])?;
                }
            }
        }
        Oracle::Bilayer(_) => {
            let families = [Polarization::Shear, Polarization::Longitudinal];
            let (bottom, top) = match &cell.layout {
                crate::cellmesh::Layout::Bilayer { bottom, top } => (bottom, top),
                _ => unreachable!("bilayer oracle implies a bilayer cell"),
            };
            let specs = families.map(|p| BilayerSpec::new(bottom, top, cell.half_height, p));
            // widen the scan until the families together hold n_modes pass bands
            let mut omega_max = norm.omega_unit();
            let bands = loop {
                let bands: Vec<_> = specs
                    .iter()
                    .map(|s| bilayer_branches(s, omega_max, 4000))
                    .collect::<Result<_>>()?;
                if bands.iter().map(|b| b.bands.len()).sum::<usize>() > n_modes {
                    break bands;
                }
                omega_max *= 2.0;
            };
            w.write_record(["family", "band", "k_y", "omega", "omega_normalized"])?;
            let mut gaps = Vec::new();
            for (family, b) in families.iter().zip(&bands) {
                let name = match family {
                    Polarization::Shear => "shear",
                    Polarization::Longitudinal => "longitudinal",
                };
                for (i, band) in b.bands.iter().enumerate() {
                    for &(k, omega) in &band.points {
                        w.write_record([
                            name.to_string(),
                            (i + 1).to_string(),
                            float(k),
                            float(omega),
                            float(norm.frequency(omega)),
                        ])?;
                    }
                }
                gaps.push(serde_json::json!({ "family": name, "stop_bands": b.gaps }));
            }
            let gaps_path = loaded.out_dir.join("analytic.json");
            fs::write(&gaps_path, serde_json::to_string_pretty(&gaps)? + "\n")?;
            writeln!(stdout, "wrote {}", gaps_path.display())?;
        }
    }
    w.flush()?;
    writeln!(stdout, "wrote {}", path.display())?;
    Ok(())
}

fn runge(args: &RungeArgs, stdout: &mut dyn Write) -> Result<()> {
    let rows = runge_study(args.degree, args.probe_points)?;
    writeln!(stdout, "family       degree  max_error")?;
    for r in &rows {
        writeln!(stdout, "{:<12} {:>6}  {:.6e}", r.family.to_string(), r.degree, r.max_error)?;
    }
    if let Some(dir) = &args.out {
        write_table(dir, "runge.csv", &["family", "degree", "max_error"], rows.iter().map(|r| {
            vec![r.family.to_string(), r.degree.to_string(), float(r.max_error)]
        }))?;
        writeln!(stdout, "wrote {}", dir.join("runge.csv").display())?;
    }
    Ok(())
}

fn quadcheck(args: &QuadcheckArgs, stdout: &mut dyn Write) -> Result<()> {
    if args.max_degree < 1 {
        return Err(Error::config("--max-degree", "must be at least 1"));
    }
    let mut rows = Vec::new();
    for degree in 1..=args.max_degree {
        let rule = gll_quadrature(degree)?;
        rows.push((QuadratureKind::GaussLobatto, rule.len(), 2 * rule.len() - 3, monomial_exactness(&rule, 1e-12)));
    }
    for points in 1..=args.max_degree + 1 {
        let rule = gauss_legendre_quadrature(points)?;
        rows.push((QuadratureKind::GaussLegendre, points, 2 * points - 1, monomial_exactness(&rule, 1e-12)));
    }
    writeln!(stdout, "rule            points  expected  observed")?;
    for (kind, points, expected, observed) in &rows {
        let name = match kind {
            QuadratureKind::GaussLobatto => "gauss-lobatto",
            QuadratureKind::GaussLegendre => "gauss-legendre",
        };
        let mark = if expected == observed { "" } else { "  MISMATCH" };
        writeln!(stdout, "{name:<15} {points:>6}  {expected:>8}  {observed:>8}{mark}")?;
    }
    if let Some(dir) = &args.out {
        write_table(
            dir,
            "quadcheck.csv",
            &["rule", "points", "expected_exactness", "observed_exactness"],
            rows.iter().map(|(kind, p, e, o)| {
                vec![
                    serde_json::to_value(kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
                    p.to_string(),
                    e.to_string(),
                    o.to_string(),
                ]
            }),
        )?;
        writeln!(stdout, "wrote {}", dir.join("quadcheck.csv").display())?;
    }
    if rows.iter().any(|(_, _, e, o)| e != o) {
        return Err(Error::NumericalFailure("quadrature exactness differs from theory".into()));
    }
    Ok(())
}

fn write_table(
    dir: &Path,
    name: &str,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join(name))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
