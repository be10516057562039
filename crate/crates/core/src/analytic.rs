//! Closed-form dispersion relations used as oracles.
//!
//! - A homogeneous medium folded into the cell's first Brillouin zone:
//!   every reciprocal lattice vector `G` contributes a branch
//!   `omega = c |k + G|` for each bulk speed `c`.
//! - Normal incidence on a periodic two-layer stack with layers of equal
//!   thickness `d`:
//!   `cos(2 d k) = cos(W1) cos(W2) - (Z1^2 + Z2^2) / (2 Z1 Z2) sin(W1) sin(W2)`
//!   with `W_i = omega d / c_i` and `Z_i = rho_i c_i`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bloch::WaveVector;
use crate::cellmesh::{Layout, UnitCell};
use crate::elasticity::Material;
use crate::{Error, Result};

/// Relative precision of refined band edges.
const EDGE_TOLERANCE: f64 = 1e-10;
/// `|rhs|` must exceed one by this much to count as a stop band.
const STOP_BAND_SLACK: f64 = 1e-12;

/// One folded branch for propagation along `y` in a square cell of side `2d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldedBranchSpec {
    pub speed: f64,
    pub half_side: f64,
    pub n: i32,
    pub m: i32,
}

/// `omega = c sqrt((k + n pi / d)^2 + (m pi / d)^2)`.
pub fn folded_homogeneous(spec: &FoldedBranchSpec, k: f64) -> f64 {
    let g = PI / spec.half_side;
    let along = k + spec.n as f64 * g;
    let across = spec.m as f64 * g;
    spec.speed * along.hypot(across)
}

/// All folded branches of a homogeneous rectangular cell for a set of bulk
/// speeds and reciprocal-lattice index ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousOracle {
    pub speeds: Vec<f64>,
    pub half_width: f64,
    pub half_height: f64,
    /// Largest `|n|`, the reciprocal index along `y`.
    pub n_max: i32,
    /// Largest `|m|`, the reciprocal index along `x`.
    pub m_max: i32,
}

impl HomogeneousOracle {
    pub const DEFAULT_N_MAX: i32 = 3;
    pub const DEFAULT_M_MAX: i32 = 3;

    /// Both bulk speeds of `material`, default index ranges.
    pub fn new(material: &Material, half_width: f64, half_height: f64) -> Self {
        let (cp, cs) = material.wave_speeds();
        Self {
            speeds: vec![cp, cs],
            half_width,
            half_height,
            n_max: Self::DEFAULT_N_MAX,
            m_max: Self::DEFAULT_M_MAX,
        }
    }

    pub fn for_cell(cell: &UnitCell) -> Result<Self> {
        match &cell.layout {
            Layout::Homogeneous { material } => {
                Ok(Self::new(material, cell.half_width, cell.half_height))
            }
            other => Err(Error::Report(format!(
                "the homogeneous oracle does not apply to a {} cell",
                other.name()
            ))),
        }
    }

    pub fn with_ranges(mut self, n_max: i32, m_max: i32) -> Self {
        self.n_max = n_max;
        self.m_max = m_max;
        self
    }

    /// All oracle frequencies at `k`, ascending (with multiplicity).
    pub fn frequencies(&self, k: WaveVector) -> Vec<f64> {
        let gx = PI / self.half_width;
        let gy = PI / self.half_height;
        let mut out = Vec::new();
        for &c in &self.speeds {
            for n in -self.n_max..=self.n_max {
                for m in -self.m_max..=self.m_max {
                    let qx = k.kx + m as f64 * gx;
                    let qy = k.ky + n as f64 * gy;
                    out.push(c * qx.hypot(qy));
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Oracle frequency closest to `omega` at `k`.
    pub fn nearest(&self, k: WaveVector, omega: f64) -> f64 {
        self.frequencies(k)
            .into_iter()
            .min_by(|a, b| (a - omega).abs().total_cmp(&(b - omega).abs()))
            .expect("at least one branch")
    }
}

/// Densities, speeds and the common layer thickness of a two-layer stack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilayerSpec {
    pub density1: f64,
    pub speed1: f64,
    pub density2: f64,
    pub speed2: f64,
    /// Thickness of each layer; the period is `2 * thickness`.
    pub thickness: f64,
}

/// Wave family used to pick layer speeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarization {
    Longitudinal,
    Shear,
}

impl BilayerSpec {
    pub fn new(a: &Material, b: &Material, thickness: f64, polarization: Polarization) -> Self {
        let pick = |m: &Material| {
            let (cp, cs) = m.wave_speeds();
            match polarization {
                Polarization::Longitudinal => cp,
                Polarization::Shear => cs,
            }
        };
        Self {
            density1: a.density,
            speed1: pick(a),
            density2: b.density,
            speed2: pick(b),
            thickness,
        }
    }

    /// Shear and longitudinal specs for a bilayer cell stacked along `y`.
    pub fn for_cell(cell: &UnitCell) -> Result<[Self; 2]> {
        match &cell.layout {
            Layout::Bilayer { bottom, top } => Ok([
                Self::new(bottom, top, cell.half_height, Polarization::Shear),
                Self::new(bottom, top, cell.half_height, Polarization::Longitudinal),
            ]),
            other => Err(Error::Report(format!(
                "the layered-medium oracle does not apply to a {} cell",
                other.name()
            ))),
        }
    }

    /// Zone-edge wavenumber `pi / (2 d)`.
    pub fn zone_edge(&self) -> f64 {
        PI / (2.0 * self.thickness)
    }
}

/// Right-hand side of the layered-medium relation at `omega`.
pub fn rayleigh_rhs(spec: &BilayerSpec, omega: f64) -> f64 {
    let a = omega * spec.thickness / spec.speed1;
    let b = omega * spec.thickness / spec.speed2;
    let z1 = spec.density1 * spec.speed1;
    let z2 = spec.density2 * spec.speed2;
    let coupling = (z1 * z1 + z2 * z2) / (2.0 * z1 * z2);
    a.cos() * b.cos() - coupling * a.sin() * b.sin()
}

/// `|cos(2 d k) - rhs(omega)|`.
pub fn rayleigh_residual(spec: &BilayerSpec, k: f64, omega: f64) -> f64 {
    ((2.0 * spec.thickness * k).cos() - rayleigh_rhs(spec, omega)).abs()
}

/// Wavenumber in `[0, pi / (2d)]` of a propagating solution, if any.
pub fn rayleigh_wavenumber(spec: &BilayerSpec, omega: f64) -> Option<f64> {
    let r = rayleigh_rhs(spec, omega);
    (r.abs() <= 1.0 + STOP_BAND_SLACK).then(|| r.clamp(-1.0, 1.0).acos() / (2.0 * spec.thickness))
}

/// One pass band: `(k, omega)` samples with `omega` ascending, and its edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassBand {
    pub lower: f64,
    pub upper: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilayerBands {
    pub bands: Vec<PassBand>,
    /// Stop bands `(lower, upper)` that close below `omega_max`.
    pub gaps: Vec<(f64, f64)>,
}

/// Scans `[0, omega_max]` with `n_samples` steps, inverts the pass bands and
/// reports the stop bands between them. Band edges are refined by bisection.
pub fn bilayer_branches(spec: &BilayerSpec, omega_max: f64, n_samples: usize) -> Result<BilayerBands> {
    if !(omega_max > 0.0) {
        return Err(Error::Report("omega_max must be positive".into()));
    }
    if n_samples < 100 {
        return Err(Error::Report(format!("need at least 100 samples, got {n_samples}")));
    }
    let outside = |w: f64| rayleigh_rhs(spec, w).abs() > 1.0 + STOP_BAND_SLACK;
    let refine = |mut inside_w: f64, mut outside_w: f64| {
        while (outside_w - inside_w).abs() > EDGE_TOLERANCE * outside_w.abs().max(inside_w.abs()) {
            let mid = 0.5 * (inside_w + outside_w);
            if outside(mid) {
                outside_w = mid;
            } else {
                inside_w = mid;
            }
        }
        inside_w
    };
    let point = |w: f64| (rayleigh_wavenumber(spec, w).unwrap_or(0.0), w);

    let step = omega_max / n_samples as f64;
    let mut bands = Vec::new();
    let mut gaps = Vec::new();
    let mut current: Option<PassBand> = Some(PassBand {
        lower: 0.0,
        upper: 0.0,
        points: vec![point(0.0)],
    });
    let mut gap_start: Option<f64> = None;
    let mut prev = 0.0;
    for i in 1..=n_samples {
        let w = if i == n_samples { omega_max } else { i as f64 * step };
        match (current.as_mut(), outside(w)) {
            (Some(band), false) => band.points.push(point(w)),
            (Some(_), true) => {
                let edge = refine(prev, w);
                let mut band = current.take().unwrap();
                if band.points.last().map(|p| p.1) != Some(edge) {
                    band.points.push(point(edge));
                }
                band.upper = edge;
                bands.push(band);
                gap_start = Some(edge);
            }
            (None, true) => {}
            (None, false) => {
                let edge = refine(w, prev);
                gaps.push((gap_start.take().expect("gap opened"), edge));
                let mut points = vec![point(edge)];
                if edge != w {
                    points.push(point(w));
                }
                current = Some(PassBand {
                    lower: edge,
                    upper: edge,
                    points,
                });
            }
        }
        prev = w;
    }
    if let Some(mut band) = current {
        band.upper = omega_max;
        bands.push(band);
    }
    Ok(BilayerBands { bands, gaps })
}
