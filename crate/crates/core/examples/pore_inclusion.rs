//! Square pore versus square brass inclusion in an aluminum matrix. Lists the
//! complete gaps found along Gamma-X-M-Gamma.
//!
//! Usage: `pore_inclusion [side_fraction] [nodes_per_side] [elements_per_side]`.
//! Try `pore_inclusion 0.75 4 8` for the larger obstacle.

use phonobands::assembly::MassTreatment;
use phonobands::basis::ElementSpec;
use phonobands::cellmesh::{Layout, UnitCell};
use phonobands::elasticity::Material;
use phonobands::sweep::{complete_gaps, compute_dispersion, Discretization, PathSpec};

fn main() -> phonobands::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let fraction = arg(0, 0.5);
    let nodes = arg(1, 5.0) as usize;
    let elements = arg(2, 4.0) as usize;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let al = Material::aluminum();
    for layout in [
        Layout::MatrixPore { matrix: al.clone(), side_fraction: fraction },
        Layout::MatrixInclusion { matrix: al.clone(), inclusion: Material::brass(), side_fraction: fraction },
    ] {
        let name = layout.name();
        let cell = UnitCell::new(0.5, 0.5, layout)?;
        let d = Discretization {
            cell,
            nx: elements,
            ny: elements,
            spec: ElementSpec::spectral(nodes)?,
            mass: MassTreatment::Consistent,
        };
        let result = compute_dispersion(&d, &PathSpec::irreducible_loop(6)?, 12, threads)?;
        let norm = result.normalization;
        let gaps = complete_gaps(&result, 1e-3);
        println!("{name}: {} complete gap(s)", gaps.len());
        for g in gaps {
            println!(
                "  above branch {:>2}: Omega {:.4} .. {:.4}",
                g.below_branch,
                norm.frequency(g.lower),
                norm.frequency(g.upper)
            );
        }
    }
    Ok(())
}
