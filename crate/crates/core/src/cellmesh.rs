//! Periodic unit cells, structured quadrilateral meshes and the partition of
//! nodal DOFs into the nine boundary/interior sets used by the Bloch
//! reduction.
//!
//! Nodes are numbered lexicographically with `y` as the slow index, and node
//! `n` owns DOFs `2n` (`u_x`) and `2n + 1` (`u_y`).

use serde::{Deserialize, Serialize};

use crate::basis::ElementSpec;
use crate::elasticity::Material;
use crate::{Error, Result};

pub const DOFS_PER_NODE: usize = 2;

/// Default side fraction of a centered inclusion or pore.
pub const DEFAULT_SIDE_FRACTION: f64 = 0.5;

/// Relative tolerance for matching boundary coordinates.
const COORD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Layout {
    Homogeneous {
        material: Material,
    },
    /// Two layers stacked in `y`; the interface is the line `y = 0`.
    Bilayer {
        bottom: Material,
        top: Material,
    },
    /// Centered square inclusion of half-side `side_fraction * half_width`.
    MatrixInclusion {
        matrix: Material,
        inclusion: Material,
        side_fraction: f64,
    },
    /// Centered square void of half-side `side_fraction * half_width`.
    MatrixPore {
        matrix: Material,
        side_fraction: f64,
    },
}

impl Layout {
    pub fn name(&self) -> &'static str {
        match self {
            Layout::Homogeneous { .. } => "homogeneous",
            Layout::Bilayer { .. } => "bilayer",
            Layout::MatrixInclusion { .. } => "inclusion",
            Layout::MatrixPore { .. } => "pore",
        }
    }

    /// Material used as the reference for normalization: the matrix, or the
    /// bottom layer of a bilayer.
    pub fn reference_material(&self) -> &Material {
        match self {
            Layout::Homogeneous { material } => material,
            Layout::Bilayer { bottom, .. } => bottom,
            Layout::MatrixInclusion { matrix, .. } | Layout::MatrixPore { matrix, .. } => matrix,
        }
    }
}

/// A `2 * half_width` by `2 * half_height` cell centered at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCell {
    pub half_width: f64,
    pub half_height: f64,
    pub layout: Layout,
}

impl UnitCell {
    pub fn new(half_width: f64, half_height: f64, layout: Layout) -> Result<Self> {
        let cell = Self {
            half_width,
            half_height,
            layout,
        };
        cell.validate()?;
        Ok(cell)
    }

    pub fn homogeneous(half_side: f64, material: Material) -> Result<Self> {
        Self::new(half_side, half_side, Layout::Homogeneous { material })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::config("cell.half_width", "must be positive"));
        }
        if !(self.half_height.is_finite() && self.half_height > 0.0) {
            return Err(Error::config("cell.half_height", "must be positive"));
        }
        match &self.layout {
            Layout::Homogeneous { material } => material.validate(),
            Layout::Bilayer { bottom, top } => {
                bottom.validate()?;
                top.validate()
            }
            Layout::MatrixInclusion {
                matrix,
                inclusion,
                side_fraction,
            } => {
                matrix.validate()?;
                inclusion.validate()?;
                self.check_square(*side_fraction)
            }
            Layout::MatrixPore {
                matrix,
                side_fraction,
            } => {
                matrix.validate()?;
                self.check_square(*side_fraction)
            }
        }
    }

    fn check_square(&self, side_fraction: f64) -> Result<()> {
        if !(side_fraction > 0.0 && side_fraction < 1.0) {
            return Err(Error::config("cell.side_fraction", "must lie in (0, 1)"));
        }
        if side_fraction * self.half_width >= self.half_height {
            return Err(Error::config(
                "cell.side_fraction",
                "centered square does not fit inside the cell height",
            ));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn height(&self) -> f64 {
        2.0 * self.half_height
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    fn tolerance(&self) -> f64 {
        COORD_TOLERANCE * self.half_width.min(self.half_height)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshElement {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Index into [`Mesh::materials`]; `None` for removed (pore) elements.
    pub material: Option<usize>,
    /// Global node ids in tensor order `q = q_y * n + q_x`. Empty when inactive.
    pub nodes: Vec<usize>,
}

impl MeshElement {
    pub fn is_active(&self) -> bool {
        self.material.is_some()
    }

    pub fn area(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) * (self.y_range.1 - self.y_range.0)
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.x_range.0 + self.x_range.1),
            0.5 * (self.y_range.0 + self.y_range.1),
        )
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    cell: UnitCell,
    spec: ElementSpec,
    nx: usize,
    ny: usize,
    coords: Vec<[f64; 2]>,
    elements: Vec<MeshElement>,
    materials: Vec<Material>,
}

impl Mesh {
    pub fn cell(&self) -> &UnitCell {
        &self.cell
    }

    pub fn spec(&self) -> &ElementSpec {
        &self.spec
    }

    pub fn divisions(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn elements(&self) -> &[MeshElement] {
        &self.elements
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn n_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn n_dofs(&self) -> usize {
        DOFS_PER_NODE * self.coords.len()
    }

    pub fn element_material(&self, element: &MeshElement) -> Option<&Material> {
        element.material.map(|i| &self.materials[i])
    }

    pub fn active_elements(&self) -> impl Iterator<Item = &MeshElement> {
        self.elements.iter().filter(|e| e.is_active())
    }

    /// Total mass of the active material, kg per unit thickness.
    pub fn total_mass(&self) -> f64 {
        self.active_elements()
            .map(|e| self.materials[e.material.unwrap()].density * e.area())
            .sum()
    }

    /// Relabels nodes: old node `i` becomes `perm[i]`.
    pub fn renumbered(&self, perm: &[usize]) -> Mesh {
        assert_eq!(perm.len(), self.n_nodes());
        let mut coords = vec![[0.0; 2]; self.n_nodes()];
        for (old, &new) in perm.iter().enumerate() {
            coords[new] = self.coords[old];
        }
        let elements = self
            .elements
            .iter()
            .map(|e| MeshElement {
                nodes: e.nodes.iter().map(|&n| perm[n]).collect(),
                ..e.clone()
            })
            .collect();
        Mesh {
            coords,
            elements,
            ..self.clone()
        }
    }
}

/// Builds a structured `nx` by `ny` mesh of the cell. Every material
/// interface must fall on element boundaries.
pub fn build_mesh(cell: &UnitCell, nx: usize, ny: usize, spec: &ElementSpec) -> Result<Mesh> {
    cell.validate()?;
    if nx == 0 {
        return Err(Error::config("discretization.nx", "need at least one element"));
    }
    if ny == 0 {
        return Err(Error::config("discretization.ny", "need at least one element"));
    }
    let tol = cell.tolerance();
    let x_edges = edges(cell.half_width, nx);
    let y_edges = edges(cell.half_height, ny);

    let mut materials = Vec::new();
    // Material slot per element (None = removed) as a function of its center.
    let assign: Box<dyn Fn(f64, f64) -> Option<usize>> = match &cell.layout {
        Layout::Homogeneous { material } => {
            materials.push(material.clone());
            Box::new(|_, _| Some(0))
        }
        Layout::Bilayer { bottom, top } => {
            if ny % 2 != 0 {
                return Err(Error::config(
                    "discretization.ny",
                    format!("bilayer needs an even number of element rows so the interface at y = 0 is an element boundary (got {ny})"),
                ));
            }
            materials.push(bottom.clone());
            materials.push(top.clone());
            Box::new(|_, yc| Some(if yc < 0.0 { 0 } else { 1 }))
        }
        Layout::MatrixInclusion {
            matrix,
            inclusion,
            side_fraction,
        } => {
            let half = side_fraction * cell.half_width;
            check_alignment(&x_edges, &y_edges, half, tol)?;
            materials.push(matrix.clone());
            materials.push(inclusion.clone());
            Box::new(move |xc, yc| Some(if xc.abs() < half && yc.abs() < half { 1 } else { 0 }))
        }
        Layout::MatrixPore {
            matrix,
            side_fraction,
        } => {
            let half = side_fraction * cell.half_width;
            check_alignment(&x_edges, &y_edges, half, tol)?;
            materials.push(matrix.clone());
            Box::new(move |xc, yc| (xc.abs() >= half || yc.abs() >= half).then_some(0))
        }
    };

    let n = spec.nodes_per_side();
    let degree = n - 1;
    let grid_x = grid_lines(&x_edges, spec);
    let grid_y = grid_lines(&y_edges, spec);
    let (gnx, gny) = (grid_x.len(), grid_y.len());

    let mut elements = Vec::with_capacity(nx * ny);
    let mut used = vec![false; gnx * gny];
    for ey in 0..ny {
        for ex in 0..nx {
            let x_range = (x_edges[ex], x_edges[ex + 1]);
            let y_range = (y_edges[ey], y_edges[ey + 1]);
            let material = assign(0.5 * (x_range.0 + x_range.1), 0.5 * (y_range.0 + y_range.1));
            if material.is_some() {
                for qy in 0..n {
                    for qx in 0..n {
                        used[(ey * degree + qy) * gnx + ex * degree + qx] = true;
                    }
                }
            }
            elements.push((ex, ey, x_range, y_range, material));
        }
    }

    let mut node_id = vec![usize::MAX; gnx * gny];
    let mut coords = Vec::new();
    for j in 0..gny {
        for i in 0..gnx {
            if used[j * gnx + i] {
                node_id[j * gnx + i] = coords.len();
                coords.push([grid_x[i], grid_y[j]]);
            }
        }
    }
    if coords.is_empty() {
        return Err(Error::config("cell.layout", "mesh has no active elements"));
    }

    let elements = elements
        .into_iter()
        .map(|(ex, ey, x_range, y_range, material)| {
            let nodes = if material.is_some() {
                let mut nodes = Vec::with_capacity(n * n);
                for qy in 0..n {
                    for qx in 0..n {
                        nodes.push(node_id[(ey * degree + qy) * gnx + ex * degree + qx]);
                    }
                }
                nodes
            } else {
                Vec::new()
            };
            MeshElement {
                x_range,
                y_range,
                material,
                nodes,
            }
        })
        .collect();

    Ok(Mesh {
        cell: cell.clone(),
        spec: spec.clone(),
        nx,
        ny,
        coords,
        elements,
        materials,
    })
}

fn edges(half: f64, count: usize) -> Vec<f64> {
    let mut e: Vec<f64> = (0..=count)
        .map(|i| -half + 2.0 * half * i as f64 / count as f64)
        .collect();
    e[0] = -half;
    e[count] = half;
    e
}

/// Unique nodal abscissae along one axis; shared element ends coincide exactly.
fn grid_lines(edges: &[f64], spec: &ElementSpec) -> Vec<f64> {
    let local = spec.nodal().coords();
    let degree = local.len() - 1;
    let mut out = Vec::with_capacity((edges.len() - 1) * degree + 1);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        out.push(a);
        for &xi in &local[1..degree] {
            out.push(a + 0.5 * (xi + 1.0) * (b - a));
        }
    }
    out.push(edges[edges.len() - 1]);
    out
}

fn check_alignment(x_edges: &[f64], y_edges: &[f64], half: f64, tol: f64) -> Result<()> {
    let on = |edges: &[f64], v: f64| edges.iter().any(|e| (e - v).abs() <= tol);
    if !(on(x_edges, half) && on(x_edges, -half)) {
        return Err(Error::config(
            "discretization.nx",
            format!("inclusion edges x = +-{half} do not fall on element boundaries; choose nx so they align"),
        ));
    }
    if !(on(y_edges, half) && on(y_edges, -half)) {
        return Err(Error::config(
            "discretization.ny",
            format!("inclusion edges y = +-{half} do not fall on element boundaries; choose ny so they align"),
        ));
    }
    Ok(())
}

/// The nine node sets of a periodic cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofSet {
    Left = 1,
    Right = 2,
    Bottom = 3,
    Top = 4,
    LeftBottom = 5,
    RightBottom = 6,
    LeftTop = 7,
    RightTop = 8,
    Interior = 9,
}

impl DofSet {
    pub const ALL: [DofSet; 9] = [
        DofSet::Left,
        DofSet::Right,
        DofSet::Bottom,
        DofSet::Top,
        DofSet::LeftBottom,
        DofSet::RightBottom,
        DofSet::LeftTop,
        DofSet::RightTop,
        DofSet::Interior,
    ];
}

/// Node-level partition. `left[i]` pairs with `right[i]` (same `y`) and
/// `bottom[i]` with `top[i]` (same `x`); edge lists exclude corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofPartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
    pub left_bottom: usize,
    pub right_bottom: usize,
    pub left_top: usize,
    pub right_top: usize,
    pub interior: Vec<usize>,
}

impl DofPartition {
    pub fn nodes(&self, set: DofSet) -> Vec<usize> {
        match set {
            DofSet::Left => self.left.clone(),
            DofSet::Right => self.right.clone(),
            DofSet::Bottom => self.bottom.clone(),
            DofSet::Top => self.top.clone(),
            DofSet::LeftBottom => vec![self.left_bottom],
            DofSet::RightBottom => vec![self.right_bottom],
            DofSet::LeftTop => vec![self.left_top],
            DofSet::RightTop => vec![self.right_top],
            DofSet::Interior => self.interior.clone(),
        }
    }

    /// DOF indices of a set, two per node.
    pub fn dofs(&self, set: DofSet) -> Vec<usize> {
        self.nodes(set)
            .into_iter()
            .flat_map(|n| [DOFS_PER_NODE * n, DOFS_PER_NODE * n + 1])
            .collect()
    }

    pub fn n_nodes(&self) -> usize {
        self.left.len() + self.right.len() + self.bottom.len() + self.top.len() + 4 + self.interior.len()
    }
}

pub fn classify_dofs(mesh: &Mesh) -> Result<DofPartition> {
    let cell = mesh.cell();
    let tol = cell.tolerance();
    let (da, db) = (cell.half_width, cell.half_height);
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut bottom = Vec::new();
    let mut top = Vec::new();
    let mut interior = Vec::new();
    let mut corners = [None; 4];
    for (id, &[x, y]) in mesh.coords().iter().enumerate() {
        let l = (x + da).abs() <= tol;
        let r = (x - da).abs() <= tol;
        let b = (y + db).abs() <= tol;
        let t = (y - db).abs() <= tol;
        let slot = match (l, r, b, t) {
            (true, _, true, _) => Some(0),
            (_, true, true, _) => Some(1),
            (true, _, _, true) => Some(2),
            (_, true, _, true) => Some(3),
            _ => None,
        };
        if let Some(s) = slot {
            if corners[s].replace(id).is_some() {
                return Err(Error::Partition(format!("duplicate corner node at ({x}, {y})")));
            }
        } else if l {
            left.push(id);
        } else if r {
            right.push(id);
        } else if b {
            bottom.push(id);
        } else if t {
            top.push(id);
        } else {
            interior.push(id);
        }
    }
    let corner = |s: usize, name: &str| {
        corners[s].ok_or_else(|| Error::Partition(format!("no node at the {name} corner")))
    };
    let (lb, rb, lt, rt) = (
        corner(0, "left-bottom")?,
        corner(1, "right-bottom")?,
        corner(2, "left-top")?,
        corner(3, "right-top")?,
    );

    let coords = mesh.coords();
    let by = |axis: usize| move |a: &usize, b: &usize| coords[*a][axis].total_cmp(&coords[*b][axis]);
    left.sort_by(by(1));
    right.sort_by(by(1));
    bottom.sort_by(by(0));
    top.sort_by(by(0));
    interior.sort_unstable();

    pair_up(&left, &right, 1, coords, tol, "left/right")?;
    pair_up(&bottom, &top, 0, coords, tol, "bottom/top")?;

    Ok(DofPartition {
        left,
        right,
        bottom,
        top,
        left_bottom: lb,
        right_bottom: rb,
        left_top: lt,
        right_top: rt,
        interior,
    })
}

fn pair_up(
    a: &[usize],
    b: &[usize],
    axis: usize,
    coords: &[[f64; 2]],
    tol: f64,
    what: &str,
) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Partition(format!(
            "{what} edges carry {} and {} nodes",
            a.len(),
            b.len()
        )));
    }
    for (&i, &j) in a.iter().zip(b) {
        if (coords[i][axis] - coords[j][axis]).abs() > tol {
            return Err(Error::Partition(format!(
                "{what} node at {} has no periodic partner (nearest {})",
                coords[i][axis], coords[j][axis]
            )));
        }
    }
    Ok(())
}
