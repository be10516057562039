//! Consistent versus diagonal-scaled mass on the bilayer stack with
//! classical elements.

use phonobands::assembly::{Lumping, MassTreatment};
use phonobands::basis::ElementSpec;
use phonobands::cellmesh::{Layout, UnitCell};
use phonobands::elasticity::Material;
use phonobands::sweep::{compute_dispersion, Discretization, PathSpec, RELATIVE_ERROR_FLOOR};

fn main() -> phonobands::Result<()> {
    let cell = UnitCell::new(
        0.1,
        1.0,
        Layout::Bilayer { bottom: Material::aluminum(), top: Material::brass() },
    )?;
    let path = PathSpec::gamma_y(20)?;
    for nodes in [4, 8] {
        let consistent = Discretization {
            cell: cell.clone(),
            nx: 1,
            ny: 2,
            spec: ElementSpec::classical(nodes)?,
            mass: MassTreatment::Consistent,
        };
        let c = compute_dispersion(&consistent, &path, 5, 1)?;
        for mode in [Lumping::PerComponent, Lumping::FullTrace] {
            let lumped = Discretization { mass: MassTreatment::Lumped(mode), ..consistent.clone() };
            let l = compute_dispersion(&lumped, &path, 5, 1)?;
            let floor = RELATIVE_ERROR_FLOOR * c.normalization.omega_unit();
            let worst: Vec<String> = (0..5)
                .map(|j| {
                    let (lb, cb) = (l.branch(j), c.branch(j));
                    let e = lb
                        .iter()
                        .zip(&cb)
                        .map(|(a, b)| (a - b).abs() / b.max(floor))
                        .fold(0.0, f64::max);
                    format!("{e:.2e}")
                })
                .collect();
            println!("classical {nodes}x{nodes} {mode:?}: {}", worst.join(" "));
        }
    }
    Ok(())
}
