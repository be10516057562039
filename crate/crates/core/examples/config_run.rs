//! Loads a TOML run file, sweeps it and prints the CSV to stdout.
//!
//! Usage: `config_run [path/to/run.toml]`

use phonobands::config::parse_config;
use phonobands::output::csv_string;
use phonobands::sweep::compute_dispersion;

fn main() -> phonobands::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/homogeneous.toml").into());
    let config = parse_config(path.as_ref())?.resolved()?;
    let mut result = compute_dispersion(
        &config.discretization()?,
        &config.path_spec()?,
        config.sweep.n_modes,
        1,
    )?;
    result.normalization = config.normalization()?;
    print!("{}", csv_string(&result, Some(&config.hash()?))?);
    Ok(())
}
