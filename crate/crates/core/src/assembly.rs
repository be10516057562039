//! Element stiffness and mass integration, global assembly and
//! diagonal-scaling mass lumping.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::basis::{ElementSpec, Tabulation};
use crate::cellmesh::{Mesh, MeshElement, DOFS_PER_NODE};
use crate::elasticity::Material;
use crate::{Error, Result};

/// How a diagonal-scaled mass matrix is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lumping {
    /// Each displacement component's diagonal block sums to the element mass.
    PerComponent,
    /// One factor for the whole element: the diagonal sums to twice the
    /// element mass (once per displacement component).
    FullTrace,
}

/// Consistent mass or a diagonal-scaled (lumped) one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MassTreatment {
    #[default]
    Consistent,
    Lumped(Lumping),
}

impl std::fmt::Display for MassTreatment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MassTreatment::Consistent => "consistent",
            MassTreatment::Lumped(Lumping::PerComponent) => "lumped-per-component",
            MassTreatment::Lumped(Lumping::FullTrace) => "lumped-full-trace",
        })
    }
}

impl std::str::FromStr for MassTreatment {
    type Err = Error;

    /// Accepts the `Display` forms; plain `lumped` means per-component.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "consistent" => Ok(MassTreatment::Consistent),
            "lumped" | "lumped-per-component" => Ok(MassTreatment::Lumped(Lumping::PerComponent)),
            "lumped-full-trace" => Ok(MassTreatment::Lumped(Lumping::FullTrace)),
            other => Err(Error::config(
                "discretization.mass",
                format!("unknown mass treatment `{other}` (expected consistent, lumped, lumped-per-component or lumped-full-trace)"),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ElementMatrices {
    pub stiffness: Mat<f64>,
    pub mass: Mat<f64>,
}

/// Assembled real symmetric `(K, M)` over the active DOFs of a mesh.
#[derive(Debug, Clone)]
pub struct SystemMatrices {
    pub stiffness: Mat<f64>,
    pub mass: Mat<f64>,
    pub mass_is_diagonal: bool,
}

impl SystemMatrices {
    pub fn n_dofs(&self) -> usize {
        self.stiffness.nrows()
    }
}

/// Stiffness `int B^T D B` and mass `int rho N^T N` of one axis-aligned
/// rectangular element, integrated with the spec's quadrature rule.
///
/// Local DOFs follow the tensor node order: node `q` owns `2q` and `2q + 1`.
pub fn element_matrices(
    x_range: (f64, f64),
    y_range: (f64, f64),
    spec: &ElementSpec,
    material: &Material,
) -> Result<ElementMatrices> {
    element_matrices_with(x_range, y_range, spec, &Tabulation::new(spec), material)
}

fn element_matrices_with(
    x_range: (f64, f64),
    y_range: (f64, f64),
    spec: &ElementSpec,
    tab: &Tabulation,
    material: &Material,
) -> Result<ElementMatrices> {
    let hx = x_range.1 - x_range.0;
    let hy = y_range.1 - y_range.0;
    if !(hx > 0.0 && hy > 0.0) || !(hx * hy).is_finite() {
        return Err(Error::Assembly(format!(
            "degenerate element [{}, {}] x [{}, {}]",
            x_range.0, x_range.1, y_range.0, y_range.1
        )));
    }
    let (jx, jy) = (0.5 * hx, 0.5 * hy);
    let det = jx * jy;
    let d = material.constitutive();
    let rho = material.density;

    let n = spec.nodes_per_side();
    let nn = n * n;
    let ndof = DOFS_PER_NODE * nn;
    let mut ke = Mat::<f64>::zeros(ndof, ndof);
    let mut me = Mat::<f64>::zeros(ndof, ndof);
    let w = spec.quadrature().weights();

    let mut val = vec![0.0; nn];
    let mut gx = vec![0.0; nn];
    let mut gy = vec![0.0; nn];
    for (gy_i, &wy) in w.iter().enumerate() {
        for (gx_i, &wx) in w.iter().enumerate() {
            let wdet = wx * wy * det;
            for a in 0..nn {
                let (ax, ay) = (a % n, a / n);
                let lx = tab.value[gx_i][ax];
                let ly = tab.value[gy_i][ay];
                val[a] = lx * ly;
                gx[a] = tab.deriv[gx_i][ax] * ly / jx;
                gy[a] = lx * tab.deriv[gy_i][ay] / jy;
            }
            for a in 0..nn {
                // B_a = [[gx, 0], [0, gy], [gy, gx]]; D B_b columns
                let ba = [[gx[a], 0.0], [0.0, gy[a]], [gy[a], gx[a]]];
                for b in a..nn {
                    let bb = [[gx[b], 0.0], [0.0, gy[b]], [gy[b], gx[b]]];
                    for r in 0..2 {
                        for c in 0..2 {
                            if a == b && c < r {
                                continue;
                            }
                            let mut s = 0.0;
                            for i in 0..3 {
                                if ba[i][r] == 0.0 {
                                    continue;
                                }
                                let mut db = 0.0;
                                for j in 0..3 {
                                    db += d.get(i, j) * bb[j][c];
                                }
                                s += ba[i][r] * db;
                            }
                            ke[(2 * a + r, 2 * b + c)] += wdet * s;
                            if a != b || r != c {
                                ke[(2 * b + c, 2 * a + r)] += wdet * s;
                            }
                        }
                    }
                    let m = wdet * rho * val[a] * val[b];
                    if m != 0.0 {
                        me[(2 * a, 2 * b)] += m;
                        me[(2 * a + 1, 2 * b + 1)] += m;
                        if a != b {
                            me[(2 * b, 2 * a)] += m;
                            me[(2 * b + 1, 2 * a + 1)] += m;
                        }
                    }
                }
            }
        }
    }
    Ok(ElementMatrices {
        stiffness: ke,
        mass: me,
    })
}

/// Diagonal of the diagonal-scaled element mass. `element_mass` is
/// `rho * area`. An already diagonal mass is returned bit for bit.
pub fn lump_element_mass(mass: &Mat<f64>, element_mass: f64, mode: Lumping) -> Result<Vec<f64>> {
    let ndof = mass.nrows();
    let diag: Vec<f64> = (0..ndof).map(|i| mass[(i, i)]).collect();
    if is_diagonal(mass) {
        return Ok(diag);
    }
    let scale = |indices: &mut dyn Iterator<Item = usize>, target: f64, out: &mut [f64]| {
        let idx: Vec<usize> = indices.collect();
        let trace: f64 = idx.iter().map(|&i| diag[i]).sum();
        if !(trace > 0.0) {
            return Err(Error::Assembly("element mass block has non-positive trace".into()));
        }
        let factor = target / trace;
        for i in idx {
            out[i] = factor * diag[i];
        }
        Ok(())
    };
    let mut out = vec![0.0; ndof];
    match mode {
        Lumping::PerComponent => {
            for comp in 0..DOFS_PER_NODE {
                scale(&mut (comp..ndof).step_by(DOFS_PER_NODE), element_mass, &mut out)?;
            }
        }
        Lumping::FullTrace => {
            scale(&mut (0..ndof), DOFS_PER_NODE as f64 * element_mass, &mut out)?;
        }
    }
    Ok(out)
}

fn element_dofs(element: &MeshElement) -> Vec<usize> {
    element
        .nodes
        .iter()
        .flat_map(|&n| [DOFS_PER_NODE * n, DOFS_PER_NODE * n + 1])
        .collect()
}

/// Assembles `(K, M)` over the active elements with a consistent mass.
pub fn assemble(mesh: &Mesh) -> Result<SystemMatrices> {
    assemble_with(mesh, MassTreatment::Consistent)
}

pub fn assemble_with(mesh: &Mesh, treatment: MassTreatment) -> Result<SystemMatrices> {
    let spec = mesh.spec();
    let tab = Tabulation::new(spec);
    let n = mesh.n_dofs();
    let mut k = Mat::<f64>::zeros(n, n);
    let mut m = Mat::<f64>::zeros(n, n);
    for element in mesh.active_elements() {
        let material = mesh.element_material(element).expect("active element");
        let em = element_matrices_with(element.x_range, element.y_range, spec, &tab, material)?;
        let dofs = element_dofs(element);
        for (i, &gi) in dofs.iter().enumerate() {
            for (j, &gj) in dofs.iter().enumerate() {
                k[(gi, gj)] += em.stiffness[(i, j)];
            }
        }
        match treatment {
            MassTreatment::Consistent => {
                for (i, &gi) in dofs.iter().enumerate() {
                    for (j, &gj) in dofs.iter().enumerate() {
                        m[(gi, gj)] += em.mass[(i, j)];
                    }
                }
            }
            MassTreatment::Lumped(mode) => {
                let diag =
                    lump_element_mass(&em.mass, material.density * element.area(), mode)?;
                for (i, &gi) in dofs.iter().enumerate() {
                    m[(gi, gi)] += diag[i];
                }
            }
        }
    }
    let mass_is_diagonal = is_diagonal(&m);
    Ok(SystemMatrices {
        stiffness: k,
        mass: m,
        mass_is_diagonal,
    })
}

/// Diagonal-scaled global mass for `mesh`.
pub fn lump(mesh: &Mesh, mode: Lumping) -> Result<Mat<f64>> {
    Ok(assemble_with(mesh, MassTreatment::Lumped(mode))?.mass)
}

pub(crate) fn is_diagonal(m: &Mat<f64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| i == j || m[(i, j)] == 0.0))
}
