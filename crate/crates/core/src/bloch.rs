//! Bloch-periodic reduction of an assembled cell.
//!
//! Image DOFs on the right edge, top edge and the three non-reference corners
//! are expressed through their reference partners with a phase factor:
//!
//! ```text
//! u_right = e^{i psi_x} u_left            u_rb = e^{i psi_x} u_lb
//! u_top   = e^{i psi_y} u_bottom          u_lt = e^{i psi_y} u_lb
//!                                         u_rt = e^{i (psi_x + psi_y)} u_lb
//! ```
//!
//! with `psi_x = 2 k_x d_a` and `psi_y = 2 k_y d_b`. Writing `u = T u_R`, the
//! reduced pencil is `(T^H K T, T^H M T)`. Interface force balance between
//! neighbouring cells holds identically in the conjugated system, so no
//! traction terms are assembled.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::assembly::SystemMatrices;
use crate::cellmesh::{DofPartition, UnitCell, DOFS_PER_NODE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveVector {
    /// rad/m
    pub kx: f64,
    /// rad/m
    pub ky: f64,
}

impl WaveVector {
    pub const ZERO: WaveVector = WaveVector { kx: 0.0, ky: 0.0 };

    pub fn new(kx: f64, ky: f64) -> Self {
        Self { kx, ky }
    }

    pub fn norm(&self) -> f64 {
        self.kx.hypot(self.ky)
    }

    /// Phase shifts `(psi_x, psi_y)` across the cell.
    pub fn phases(&self, cell: &UnitCell) -> (f64, f64) {
        (2.0 * self.kx * cell.half_width, 2.0 * self.ky * cell.half_height)
    }
}

/// `T(k)`: each full DOF is a unit-modulus multiple of exactly one reduced DOF.
#[derive(Debug, Clone)]
pub struct BlochTransform {
    /// Per full DOF: `(reduced column, phase)`.
    map: Vec<(usize, c64)>,
    n_reduced: usize,
    psi: (f64, f64),
}

impl BlochTransform {
    pub fn n_full(&self) -> usize {
        self.map.len()
    }

    pub fn n_reduced(&self) -> usize {
        self.n_reduced
    }

    pub fn phases(&self) -> (f64, f64) {
        self.psi
    }

    /// Nonzero of row `dof`.
    pub fn entry(&self, dof: usize) -> (usize, c64) {
        self.map[dof]
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let mut t = Mat::<c64>::zeros(self.n_full(), self.n_reduced);
        for (row, &(col, phase)) in self.map.iter().enumerate() {
            t[(row, col)] = phase;
        }
        t
    }
}

fn unit_phase(angle: f64) -> c64 {
    // exact values at the common sampling points keep k = 0 purely real
    if angle == 0.0 {
        c64::new(1.0, 0.0)
    } else {
        c64::new(angle.cos(), angle.sin())
    }
}

/// Reduced unknowns are ordered as left edge, bottom edge, left-bottom
/// corner, then interior nodes, two DOFs per node.
pub fn build_transform(part: &DofPartition, cell: &UnitCell, k: WaveVector) -> Result<BlochTransform> {
    if part.left.len() != part.right.len() || part.bottom.len() != part.top.len() {
        return Err(Error::Transform("unpaired boundary sets".into()));
    }
    let n_nodes = part.n_nodes();
    let (psi_x, psi_y) = k.phases(cell);
    let px = unit_phase(psi_x);
    let py = unit_phase(psi_y);
    let pxy = unit_phase(psi_x + psi_y);
    let one = c64::new(1.0, 0.0);

    let mut node_map: Vec<Option<(usize, c64)>> = vec![None; n_nodes];
    let mut assign = |node: usize, reduced: usize, phase: c64| -> Result<()> {
        let slot = node_map
            .get_mut(node)
            .ok_or_else(|| Error::Transform(format!("node {node} outside the partition")))?;
        if slot.replace((reduced, phase)).is_some() {
            return Err(Error::Transform(format!("node {node} appears in two sets")));
        }
        Ok(())
    };

    let mut next = 0;
    for (&l, &r) in part.left.iter().zip(&part.right) {
        assign(l, next, one)?;
        assign(r, next, px)?;
        next += 1;
    }
    for (&b, &t) in part.bottom.iter().zip(&part.top) {
        assign(b, next, one)?;
        assign(t, next, py)?;
        next += 1;
    }
    assign(part.left_bottom, next, one)?;
    assign(part.right_bottom, next, px)?;
    assign(part.left_top, next, py)?;
    assign(part.right_top, next, pxy)?;
    next += 1;
    for &i in &part.interior {
        assign(i, next, one)?;
        next += 1;
    }

    let mut map = Vec::with_capacity(DOFS_PER_NODE * n_nodes);
    for (node, slot) in node_map.into_iter().enumerate() {
        let (reduced, phase) =
            slot.ok_or_else(|| Error::Transform(format!("node {node} is in no set")))?;
        for c in 0..DOFS_PER_NODE {
            map.push((DOFS_PER_NODE * reduced + c, phase));
        }
    }
    Ok(BlochTransform {
        map,
        n_reduced: DOFS_PER_NODE * next,
        psi: (psi_x, psi_y),
    })
}

/// Reduced Hermitian pencil `(K_R, M_R)`.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub stiffness: Mat<c64>,
    pub mass: Mat<c64>,
    pub mass_is_diagonal: bool,
}

/// `(T^H K T, T^H M T)`, computed by scattering each entry of the full
/// matrices once.
pub fn reduce(sys: &SystemMatrices, t: &BlochTransform) -> Result<ReducedSystem> {
    let n = sys.n_dofs();
    if t.n_full() != n || sys.mass.nrows() != n {
        return Err(Error::Transform(format!(
            "transform has {} rows but the system has {n} DOFs",
            t.n_full()
        )));
    }
    let stiffness = conjugate(&sys.stiffness, t, false);
    let mass = conjugate(&sys.mass, t, sys.mass_is_diagonal);
    Ok(ReducedSystem {
        stiffness,
        mass,
        mass_is_diagonal: sys.mass_is_diagonal,
    })
}

fn conjugate(a: &Mat<f64>, t: &BlochTransform, diagonal: bool) -> Mat<c64> {
    let nr = t.n_reduced();
    let mut out = Mat::<c64>::zeros(nr, nr);
    if diagonal {
        for (i, &(ci, _)) in t.map.iter().enumerate() {
            // |phase|^2 = 1
            out[(ci, ci)] += c64::new(a[(i, i)], 0.0);
        }
        return out;
    }
    for j in 0..a.ncols() {
        let (cj, pj) = t.map[j];
        for i in 0..a.nrows() {
            let v = a[(i, j)];
            if v == 0.0 {
                continue;
            }
            let (ci, pi) = t.map[i];
            out[(ci, cj)] += pi.conj() * pj * v;
        }
    }
    out
}
