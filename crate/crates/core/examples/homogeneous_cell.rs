//! Aluminum cell along Gamma-Y with one spectral and one classical element of
//! the same order, each compared with the folded homogeneous branches.

use phonobands::analytic::HomogeneousOracle;
use phonobands::assembly::MassTreatment;
use phonobands::basis::ElementSpec;
use phonobands::cellmesh::UnitCell;
use phonobands::elasticity::Material;
use phonobands::sweep::{compare_to_oracle, compute_dispersion, Discretization, Oracle, PathSpec};

fn main() -> phonobands::Result<()> {
    let nodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let cell = UnitCell::homogeneous(0.5, Material::aluminum())?;
    let oracle = Oracle::Homogeneous(HomogeneousOracle::for_cell(&cell)?.with_ranges(2, 2));
    let path = PathSpec::gamma_y(20)?;
    for spec in [ElementSpec::spectral(nodes)?, ElementSpec::classical(nodes)?] {
        let label = if spec.is_spectral() { "spectral" } else { "classical" };
        let d = Discretization { cell: cell.clone(), nx: 1, ny: 1, spec, mass: MassTreatment::Consistent };
        let result = compute_dispersion(&d, &path, 10, 1)?;
        let report = compare_to_oracle(&result, &oracle)?;
        println!("{label} {nodes}x{nodes}: {} branches under 1%", report.resolved_branches(0.01));
        for b in &report.branches {
            println!("  branch {:>2}  max {:.2e}  median {:.2e}", b.branch, b.max, b.median);
        }
    }
    Ok(())
}
