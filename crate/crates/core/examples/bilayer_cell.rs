//! Aluminum/brass stack at vertical incidence. Prints the residual of the
//! layered-medium relation per branch and the exact stop bands.

use phonobands::analytic::{bilayer_branches, BilayerSpec};
use phonobands::assembly::MassTreatment;
use phonobands::basis::ElementSpec;
use phonobands::cellmesh::{Layout, UnitCell};
use phonobands::elasticity::Material;
use phonobands::sweep::{compare_to_oracle, compute_dispersion, Discretization, Oracle, PathSpec};

fn main() -> phonobands::Result<()> {
    let nodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let cell = UnitCell::new(
        0.1,
        1.0,
        Layout::Bilayer { bottom: Material::aluminum(), top: Material::brass() },
    )?;
    let d = Discretization {
        cell: cell.clone(),
        nx: 1,
        ny: 2,
        spec: ElementSpec::spectral(nodes)?,
        mass: MassTreatment::Consistent,
    };
    let result = compute_dispersion(&d, &PathSpec::gamma_y(20)?, 10, 1)?;
    let report = compare_to_oracle(&result, &Oracle::for_cell(&cell)?)?;
    println!("spectral {nodes}x{nodes} per layer");
    for b in &report.branches {
        println!("  branch {:>2}  max residual {:.2e}", b.branch, b.max);
    }

    let norm = result.normalization;
    let top = result.samples.iter().flat_map(|s| s.omegas.last()).copied().fold(0.0, f64::max);
    for (name, spec) in ["shear", "longitudinal"].iter().zip(BilayerSpec::for_cell(&cell)?) {
        let bands = bilayer_branches(&spec, top, 400)?;
        for gap in &bands.gaps {
            println!(
                "{name} stop band: Omega {:.4} .. {:.4}",
                norm.frequency(gap.0),
                norm.frequency(gap.1)
            );
        }
    }
    Ok(())
}
