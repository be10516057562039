//! Wave-vector paths, the dispersion sweep, normalization and oracle reports.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{rayleigh_residual, BilayerSpec, HomogeneousOracle};
use crate::assembly::{assemble_with, MassTreatment, SystemMatrices};
use crate::basis::{ElementSpec, NodeFamily, QuadratureKind};
use crate::bloch::{build_transform, reduce, WaveVector};
use crate::cellmesh::{build_mesh, classify_dofs, DofPartition, UnitCell};
use crate::eigensolve::ModalSet;
use crate::{Error, Result};

/// High-symmetry points of the rectangular Brillouin zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vertex {
    Gamma,
    X,
    M,
    Y,
}

impl Vertex {
    pub fn wave_vector(self, cell: &UnitCell) -> WaveVector {
        let ex = std::f64::consts::PI / (2.0 * cell.half_width);
        let ey = std::f64::consts::PI / (2.0 * cell.half_height);
        match self {
            Vertex::Gamma => WaveVector::ZERO,
            Vertex::X => WaveVector::new(ex, 0.0),
            Vertex::M => WaveVector::new(ex, ey),
            Vertex::Y => WaveVector::new(0.0, ey),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Vertex::Gamma => "G",
            Vertex::X => "X",
            Vertex::M => "M",
            Vertex::Y => "Y",
        }
    }
}

/// A polyline through zone vertices with a fixed sample count per segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec {
    vertices: Vec<Vertex>,
    samples_per_segment: usize,
}

impl PathSpec {
    pub fn new(vertices: Vec<Vertex>, samples_per_segment: usize) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::config("sweep.path", "a path needs at least two vertices"));
        }
        if samples_per_segment < 2 {
            return Err(Error::config(
                "sweep.samples",
                format!("need at least 2 samples per segment, got {samples_per_segment}"),
            ));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("sweep.path", "consecutive vertices must differ"));
        }
        Ok(Self {
            vertices,
            samples_per_segment,
        })
    }

    /// Vertical incidence: propagation along `y`, normal to the layers.
    pub fn gamma_y(samples: usize) -> Result<Self> {
        Self::new(vec![Vertex::Gamma, Vertex::Y], samples)
    }

    pub fn gamma_x(samples: usize) -> Result<Self> {
        Self::new(vec![Vertex::Gamma, Vertex::X], samples)
    }

    /// The closed loop `G-X-M-G`.
    pub fn irreducible_loop(samples: usize) -> Result<Self> {
        Self::new(vec![Vertex::Gamma, Vertex::X, Vertex::M, Vertex::Gamma], samples)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn samples_per_segment(&self) -> usize {
        self.samples_per_segment
    }

    pub fn n_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn n_samples(&self) -> usize {
        self.n_segments() * self.samples_per_segment - (self.n_segments() - 1)
    }

    pub fn with_samples(&self, samples_per_segment: usize) -> Result<Self> {
        Self::new(self.vertices.clone(), samples_per_segment)
    }
}

impl fmt::Display for PathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.vertices.iter().map(|v| v.symbol()).collect();
        f.write_str(&names.join("-"))
    }
}

/// Parses the vertex list only, e.g. `G-X-M-G`; `Γ` and `gamma` also name
/// the zone center. The sample count must be set separately.
pub fn parse_vertices(s: &str) -> Result<Vec<Vertex>> {
    s.split('-')
        .map(|tok| match tok.trim() {
            "G" | "g" | "Γ" | "gamma" | "Gamma" => Ok(Vertex::Gamma),
            "X" | "x" => Ok(Vertex::X),
            "M" | "m" => Ok(Vertex::M),
            "Y" | "y" => Ok(Vertex::Y),
            other => Err(Error::config(
                "sweep.path",
                format!("unknown zone vertex `{other}` (expected G, X, M or Y)"),
            )),
        })
        .collect()
}

impl FromStr for PathSpec {
    type Err = Error;

    /// `G-X-M-G` or `G-X-M-G:20`; the sample count defaults to 30.
    fn from_str(s: &str) -> Result<Self> {
        let (verts, samples) = match s.split_once(':') {
            Some((v, n)) => (
                v,
                n.trim()
                    .parse()
                    .map_err(|_| Error::config("sweep.samples", format!("bad sample count `{n}`")))?,
            ),
            None => (s, DEFAULT_SAMPLES),
        };
        Self::new(parse_vertices(verts)?, samples)
    }
}

pub const DEFAULT_SAMPLES: usize = 30;
pub const DEFAULT_MODES: usize = 10;

/// One point of a sampled path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub k: WaveVector,
    /// Arc length along the path, rad/m.
    pub coordinate: f64,
}

/// Samples every segment inclusively and drops repeated junction points.
pub fn sample_path(path: &PathSpec, cell: &UnitCell) -> Vec<PathPoint> {
    let n = path.samples_per_segment;
    let mut out = Vec::with_capacity(path.n_samples());
    let mut start_coord = 0.0;
    for (s, pair) in path.vertices.windows(2).enumerate() {
        let a = pair[0].wave_vector(cell);
        let b = pair[1].wave_vector(cell);
        let length = (b.kx - a.kx).hypot(b.ky - a.ky);
        let first = if s == 0 { 0 } else { 1 };
        for i in first..n {
            let t = i as f64 / (n - 1) as f64;
            let k = if i == n - 1 {
                b
            } else {
                WaveVector::new(a.kx + t * (b.kx - a.kx), a.ky + t * (b.ky - a.ky))
            };
            let coordinate = if i == n - 1 { start_coord + length } else { start_coord + t * length };
            out.push(PathPoint { k, coordinate });
        }
        start_coord += length;
    }
    out
}

/// Everything that fixes the discrete problem apart from the wave vector.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub cell: UnitCell,
    pub nx: usize,
    pub ny: usize,
    pub spec: ElementSpec,
    pub mass: MassTreatment,
}

/// Assembled, partitioned system ready for per-k reduction.
#[derive(Debug, Clone)]
pub struct PreparedSystem {
    pub cell: UnitCell,
    pub system: SystemMatrices,
    pub partition: DofPartition,
}

impl PreparedSystem {
    pub fn new(d: &Discretization) -> Result<Self> {
        let mesh = build_mesh(&d.cell, d.nx, d.ny, &d.spec)?;
        let partition = classify_dofs(&mesh)?;
        let system = assemble_with(&mesh, d.mass)?;
        Ok(Self {
            cell: d.cell.clone(),
            system,
            partition,
        })
    }

    pub fn solve(&self, k: WaveVector, n_modes: usize) -> Result<ModalSet> {
        let t = build_transform(&self.partition, &self.cell, k)?;
        let reduced = reduce(&self.system, &t)?;
        ModalSet::solve(k, &reduced, n_modes)
    }
}

/// Reference scales: `Omega = omega L / (pi c)` and `xi = k L / pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// m/s
    pub c_ref: f64,
    /// m
    pub l_ref: f64,
}

impl Normalization {
    pub fn new(c_ref: f64, l_ref: f64) -> Result<Self> {
        if !(c_ref > 0.0 && c_ref.is_finite()) {
            return Err(Error::config("normalization.c_ref", "must be positive"));
        }
        if !(l_ref > 0.0 && l_ref.is_finite()) {
            return Err(Error::config("normalization.l_ref", "must be positive"));
        }
        Ok(Self { c_ref, l_ref })
    }

    /// Shear speed of the cell's reference material and the cell height.
    pub fn for_cell(cell: &UnitCell) -> Self {
        Self {
            c_ref: cell.layout.reference_material().wave_speeds().1,
            l_ref: cell.height(),
        }
    }

    /// The angular frequency that normalizes to one.
    pub fn omega_unit(&self) -> f64 {
        std::f64::consts::PI * self.c_ref / self.l_ref
    }

    pub fn frequency(&self, omega: f64) -> f64 {
        omega * self.l_ref / (std::f64::consts::PI * self.c_ref)
    }

    pub fn wavenumber(&self, k: f64) -> f64 {
        k * self.l_ref / std::f64::consts::PI
    }

    pub fn frequency_inverse(&self, big_omega: f64) -> f64 {
        big_omega * std::f64::consts::PI * self.c_ref / self.l_ref
    }

    pub fn wavenumber_inverse(&self, xi: f64) -> f64 {
        xi * std::f64::consts::PI / self.l_ref
    }
}

/// How a result was produced, recorded alongside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub cell: UnitCell,
    pub nx: usize,
    pub ny: usize,
    pub family: NodeFamily,
    pub quadrature: QuadratureKind,
    pub nodes_per_side: usize,
    pub mass: MassTreatment,
    pub path: String,
    pub n_modes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub point: PathPoint,
    /// rad/s, ascending.
    pub omegas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionResult {
    pub samples: Vec<DispersionSample>,
    pub normalization: Normalization,
    pub provenance: Provenance,
}

impl DispersionResult {
    /// Number of branches present at every sample.
    pub fn n_branches(&self) -> usize {
        self.samples.iter().map(|s| s.omegas.len()).min().unwrap_or(0)
    }

    /// `omega` of branch `j` (zero-based) along the path.
    pub fn branch(&self, j: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.omegas[j]).collect()
    }
}

/// A result with wave vectors and frequencies expressed in reference units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDispersion {
    pub samples: Vec<DispersionSample>,
    pub normalization: Normalization,
    pub provenance: Provenance,
}

pub fn normalize(result: &DispersionResult, norm: Normalization) -> NormalizedDispersion {
    let samples = result
        .samples
        .iter()
        .map(|s| DispersionSample {
            point: PathPoint {
                k: WaveVector::new(norm.wavenumber(s.point.k.kx), norm.wavenumber(s.point.k.ky)),
                coordinate: norm.wavenumber(s.point.coordinate),
            },
            omegas: s.omegas.iter().map(|&w| norm.frequency(w)).collect(),
        })
        .collect();
    NormalizedDispersion {
        samples,
        normalization: norm,
        provenance: result.provenance.clone(),
    }
}

pub fn denormalize(n: &NormalizedDispersion) -> DispersionResult {
    let norm = n.normalization;
    let samples = n
        .samples
        .iter()
        .map(|s| DispersionSample {
            point: PathPoint {
                k: WaveVector::new(
                    norm.wavenumber_inverse(s.point.k.kx),
                    norm.wavenumber_inverse(s.point.k.ky),
                ),
                coordinate: norm.wavenumber_inverse(s.point.coordinate),
            },
            omegas: s.omegas.iter().map(|&w| norm.frequency_inverse(w)).collect(),
        })
        .collect();
    DispersionResult {
        samples,
        normalization: norm,
        provenance: n.provenance.clone(),
    }
}

/// Assembles once, then solves every path sample. With `threads > 1` the
/// samples are distributed over a dedicated pool; results are merged by
/// sample index, so the output does not depend on the thread count.
pub fn compute_dispersion(
    d: &Discretization,
    path: &PathSpec,
    n_modes: usize,
    threads: usize,
) -> Result<DispersionResult> {
    if n_modes == 0 {
        return Err(Error::config("sweep.n_modes", "must be at least 1"));
    }
    let prepared = PreparedSystem::new(d)?;
    let points = sample_path(path, &d.cell);
    let solve_one = |(index, p): (usize, &PathPoint)| {
        prepared
            .solve(p.k, n_modes)
            .map(|set| DispersionSample {
                point: *p,
                omegas: set.omegas,
            })
            .map_err(|e| Error::AtWaveVector {
                index,
                k_x: p.k.kx,
                k_y: p.k.ky,
                source: Box::new(e),
            })
    };
    let samples: Result<Vec<_>> = if threads <= 1 {
        points.iter().enumerate().map(solve_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?;
        pool.install(|| points.par_iter().enumerate().map(solve_one).collect())
    };
    Ok(DispersionResult {
        samples: samples?,
        normalization: Normalization::for_cell(&d.cell),
        provenance: Provenance {
            cell: d.cell.clone(),
            nx: d.nx,
            ny: d.ny,
            family: d.spec.nodal().family(),
            quadrature: d.spec.quadrature().kind(),
            nodes_per_side: d.spec.nodes_per_side(),
            mass: d.mass,
            path: path.to_string(),
            n_modes,
        },
    })
}

/// Closed-form reference for a result.
#[derive(Debug, Clone, PartialEq)]
pub enum Oracle {
    Homogeneous(HomogeneousOracle),
    /// Shear and longitudinal families of a layered stack.
    Bilayer(Vec<BilayerSpec>),
}

impl Oracle {
    pub fn for_cell(cell: &UnitCell) -> Result<Self> {
        use crate::cellmesh::Layout;
        match &cell.layout {
            Layout::Homogeneous { .. } => Ok(Oracle::Homogeneous(HomogeneousOracle::for_cell(cell)?)),
            Layout::Bilayer { .. } => Ok(Oracle::Bilayer(BilayerSpec::for_cell(cell)?.to_vec())),
            other => Err(Error::Report(format!("no closed-form oracle for a {} cell", other.name()))),
        }
    }

    fn layout_name(&self) -> &'static str {
        match self {
            Oracle::Homogeneous(_) => "homogeneous",
            Oracle::Bilayer(_) => "bilayer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMetric {
    /// `|omega - omega_oracle| / max(omega_oracle, floor)` against the
    /// nearest folded branch.
    RelativeFrequency,
    /// `min over families |cos(2 d k) - rhs(omega)|`.
    RayleighResidual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchError {
    /// One-based branch number.
    pub branch: usize,
    pub max: f64,
    pub median: f64,
    /// Error at each path sample.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub metric: ErrorMetric,
    pub branches: Vec<BranchError>,
}

impl ErrorReport {
    /// Number of leading branches whose maximum error is below `tolerance`.
    pub fn resolved_branches(&self, tolerance: f64) -> usize {
        self.branches.iter().take_while(|b| b.max < tolerance).count()
    }

    pub fn max_over(&self, branches: std::ops::Range<usize>) -> f64 {
        self.branches[branches].iter().map(|b| b.max).fold(0.0, f64::max)
    }
}

/// Frequencies below this fraction of the unit normalized frequency are
/// compared in absolute rather than relative terms, so rigid modes at the
/// zone center do not divide by zero.
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-2;

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn compare_to_oracle(result: &DispersionResult, oracle: &Oracle) -> Result<ErrorReport> {
    let layout = result.provenance.cell.layout.name();
    if layout != oracle.layout_name() {
        return Err(Error::Report(format!(
            "a {} oracle cannot be compared with a {layout} cell",
            oracle.layout_name()
        )));
    }
    let n = result.n_branches();
    let mut per_branch = vec![Vec::with_capacity(result.samples.len()); n];
    let metric = match oracle {
        Oracle::Homogeneous(h) => {
            let floor = RELATIVE_ERROR_FLOOR * result.normalization.omega_unit();
            for s in &result.samples {
                let reference = h.frequencies(s.point.k);
                for (j, &w) in s.omegas.iter().take(n).enumerate() {
                    let nearest = reference
                        .iter()
                        .copied()
                        .min_by(|a, b| (a - w).abs().total_cmp(&(b - w).abs()))
                        .ok_or_else(|| Error::Report("oracle has no branches".into()))?;
                    per_branch[j].push((w - nearest).abs() / nearest.max(floor));
                }
            }
            ErrorMetric::RelativeFrequency
        }
        Oracle::Bilayer(specs) => {
            for s in &result.samples {
                if s.point.k.kx != 0.0 {
                    return Err(Error::Report(
                        "the layered-medium relation holds only for vertical incidence (k_x = 0)".into(),
                    ));
                }
                for (j, &w) in s.omegas.iter().take(n).enumerate() {
                    let r = specs
                        .iter()
                        .map(|b| rayleigh_residual(b, s.point.k.ky, w))
                        .fold(f64::INFINITY, f64::min);
                    per_branch[j].push(r);
                }
            }
            ErrorMetric::RayleighResidual
        }
    };
    let branches = per_branch
        .into_iter()
        .enumerate()
        .map(|(j, values)| BranchError {
            branch: j + 1,
            max: values.iter().copied().fold(0.0, f64::max),
            median: median(&values),
            values,
        })
        .collect();
    Ok(ErrorReport { metric, branches })
}

/// A frequency interval crossed by no branch anywhere on the path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompleteGap {
    /// Branch below the gap, one-based.
    pub below_branch: usize,
    /// rad/s
    pub lower: f64,
    /// rad/s
    pub upper: f64,
}

impl CompleteGap {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Gaps between consecutive computed branches wider than
/// `min_relative_width` times the gap's midpoint. The topmost branch has
/// no known upper neighbour and never bounds a gap from below.
pub fn complete_gaps(result: &DispersionResult, min_relative_width: f64) -> Vec<CompleteGap> {
    let n = result.n_branches();
    let mut gaps = Vec::new();
    for j in 0..n.saturating_sub(1) {
        let top = result.branch(j).into_iter().fold(f64::NEG_INFINITY, f64::max);
        let bottom = result.branch(j + 1).into_iter().fold(f64::INFINITY, f64::min);
        let mid = 0.5 * (top + bottom);
        if bottom - top > min_relative_width * mid {
            gaps.push(CompleteGap {
                below_branch: j + 1,
                lower: top,
                upper: bottom,
            });
        }
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::Material;
    use std::f64::consts::PI;

    fn cell() -> UnitCell {
        UnitCell::homogeneous(0.5, Material::aluminum()).unwrap()
    }

    #[test]
    fn gamma_x_three_samples() {
        let c = UnitCell::new(0.25, 0.5, cell().layout).unwrap();
        let pts = sample_path(&PathSpec::gamma_x(3).unwrap(), &c);
        let expected = [0.0, PI / (4.0 * 0.25), PI / (2.0 * 0.25)];
        assert_eq!(pts.len(), 3);
        for (p, e) in pts.iter().zip(expected) {
            assert!((p.k.kx - e).abs() < 1e-15);
            assert_eq!(p.k.ky, 0.0);
        }
    }

    #[test]
    fn closed_loop_counts_and_ends() {
        let path = PathSpec::irreducible_loop(5).unwrap();
        let pts = sample_path(&path, &cell());
        assert_eq!(pts.len(), 3 * 5 - 2);
        assert_eq!(pts.len(), path.n_samples());
        assert_eq!(pts[0].k, WaveVector::ZERO);
        assert_eq!(pts.last().unwrap().k, WaveVector::ZERO);
        assert!(pts.windows(2).all(|w| w[1].coordinate > w[0].coordinate));
        let perimeter = PI + PI + PI * 2f64.sqrt();
        assert!((pts.last().unwrap().coordinate - perimeter).abs() < 1e-12);
    }

    #[test]
    fn path_parsing() {
        let p: PathSpec = "G-X-M-G:7".parse().unwrap();
        assert_eq!(p.to_string(), "G-X-M-G");
        assert_eq!(p.samples_per_segment(), 7);
        let q: PathSpec = "Γ-Y".parse().unwrap();
        assert_eq!(q.samples_per_segment(), DEFAULT_SAMPLES);
        assert!("G-Q".parse::<PathSpec>().is_err());
        assert!("G".parse::<PathSpec>().is_err());
        assert!("G-G-X".parse::<PathSpec>().is_err());
        assert!(PathSpec::gamma_x(1).is_err());
    }

    #[test]
    fn normalization_examples() {
        let c = cell();
        let norm = Normalization::for_cell(&c);
        assert_eq!(norm.l_ref, 1.0);
        assert!((norm.wavenumber(Vertex::X.wave_vector(&c).kx) - 1.0).abs() < 1e-15);
        assert!((norm.frequency(norm.omega_unit()) - 1.0).abs() < 1e-15);
        assert!(Normalization::new(0.0, 1.0).is_err());
        assert!(Normalization::new(1.0, -1.0).is_err());
    }

    fn spectral(n: usize, mass: MassTreatment) -> Discretization {
        Discretization {
            cell: cell(),
            nx: 1,
            ny: 1,
            spec: ElementSpec::spectral(n).unwrap(),
            mass,
        }
    }

    #[test]
    fn normalization_round_trip() {
        let r = compute_dispersion(
            &spectral(5, MassTreatment::Consistent),
            &PathSpec::irreducible_loop(4).unwrap(),
            6,
            1,
        )
        .unwrap();
        let back = denormalize(&normalize(&r, r.normalization));
        for (a, b) in r.samples.iter().zip(&back.samples) {
            assert!((a.point.coordinate - b.point.coordinate).abs() <= 1e-12 * a.point.coordinate.max(1.0));
            for (x, y) in a.omegas.iter().zip(&b.omegas) {
                assert!((x - y).abs() <= 1e-12 * x.max(1.0));
            }
        }
    }

    #[test]
    fn lowest_branches_follow_bulk_speeds() {
        let r = compute_dispersion(
            &spectral(8, MassTreatment::Consistent),
            &PathSpec::gamma_y(20).unwrap(),
            4,
            1,
        )
        .unwrap();
        let (cp, cs) = Material::aluminum().wave_speeds();
        // small |k|: first few samples past the zone center
        for s in &r.samples[1..4] {
            let k = s.point.k.norm();
            assert!((s.omegas[0] - cs * k).abs() < 1e-6 * cs * k);
            assert!((s.omegas[1] - cp * k).abs() < 1e-6 * cp * k);
        }
        // branch 1 along the whole segment
        for s in &r.samples[1..] {
            let k = s.point.k.norm();
            assert!((s.omegas[0] - cs * k).abs() < 1e-6 * cs * k);
        }
    }

    #[test]
    fn lumping_a_spectral_element_is_a_no_op() {
        use crate::assembly::Lumping;
        let path = PathSpec::gamma_y(6).unwrap();
        let a = compute_dispersion(&spectral(6, MassTreatment::Consistent), &path, 8, 1).unwrap();
        let b = compute_dispersion(&spectral(6, MassTreatment::Lumped(Lumping::PerComponent)), &path, 8, 1).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.omegas, y.omegas);
        }
    }

    #[test]
    fn k_context_on_errors() {
        let d = spectral(3, MassTreatment::Consistent);
        let err = compute_dispersion(&d, &PathSpec::gamma_y(3).unwrap(), 0, 1).unwrap_err();
        assert!(matches!(err, Error::Configuration { .. }));
    }

    #[test]
    fn oracle_layout_mismatch() {
        let r = compute_dispersion(
            &spectral(3, MassTreatment::Consistent),
            &PathSpec::gamma_y(3).unwrap(),
            4,
            1,
        )
        .unwrap();
        let bilayer = UnitCell::new(
            0.5,
            0.5,
            crate::cellmesh::Layout::Bilayer {
                bottom: Material::aluminum(),
                top: Material::brass(),
            },
        )
        .unwrap();
        let oracle = Oracle::for_cell(&bilayer).unwrap();
        assert!(compare_to_oracle(&r, &oracle).is_err());
        let pore = UnitCell::new(
            0.5,
            0.5,
            crate::cellmesh::Layout::MatrixPore {
                matrix: Material::aluminum(),
                side_fraction: 0.5,
            },
        )
        .unwrap();
        assert!(Oracle::for_cell(&pore).is_err());
    }

    #[test]
    fn gap_detection_on_synthetic_bands() {
        let r = compute_dispersion(
            &spectral(3, MassTreatment::Consistent),
            &PathSpec::gamma_y(3).unwrap(),
            3,
            1,
        )
        .unwrap();
        let mut synthetic = r.clone();
        for (i, s) in synthetic.samples.iter_mut().enumerate() {
            s.omegas = vec![i as f64, 10.0 + i as f64, 11.0 + i as f64];
        }
        let gaps = complete_gaps(&synthetic, 1e-6);
        assert_eq!(gaps.len(), 1);
        assert_eq!(gaps[0].below_branch, 1);
        assert_eq!((gaps[0].lower, gaps[0].upper), (2.0, 10.0));
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
