//! Run configuration: a sectioned TOML file.
//!
//! ```toml
//! [materials.aluminum]
//! E = 7.31e10
//! nu = 0.325
//! rho = 2770.0
//!
//! [cell]
//! layout = "homogeneous"        # bilayer | matrix-inclusion | matrix-pore
//! material = "aluminum"
//! half_width = 0.5              # d_a, m
//! half_height = 0.5             # d_b, m
//!
//! [discretization]
//! nodes_per_side = 8            # an "8x8 element": degree 7
//! family = "lobatto"            # or "equispaced"
//! mass = "consistent"           # lumped | lumped-per-component | lumped-full-trace
//!
//! [sweep]
//! path = "G-Y"
//! samples = 30
//! n_modes = 10
//! ```
//!
//! Omitted keys take defaults; [`RunConfig::resolved`] fills every one of
//! them in and [`RunConfig::echo`] prints the result.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::assembly::MassTreatment;
use crate::basis::{equispaced_nodes, gll_quadrature, ElementSpec, NodeFamily, QuadratureKind};
use crate::cellmesh::{build_mesh, Layout, UnitCell, DEFAULT_SIDE_FRACTION};
use crate::elasticity::Material;
use crate::sweep::{parse_vertices, Discretization, Normalization, PathSpec, DEFAULT_MODES, DEFAULT_SAMPLES};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialEntry {
    /// Young's modulus, Pa.
    #[serde(rename = "E")]
    pub youngs_modulus: f64,
    #[serde(rename = "nu")]
    pub poisson_ratio: f64,
    /// kg/m^3
    #[serde(rename = "rho")]
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutKind {
    #[default]
    Homogeneous,
    Bilayer,
    MatrixInclusion,
    MatrixPore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    #[serde(default)]
    pub layout: LayoutKind,
    #[serde(default = "default_half")]
    pub half_width: f64,
    #[serde(default = "default_half")]
    pub half_height: f64,
    /// Homogeneous cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<String>,
    /// Bilayer cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    /// Inclusion and pore cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_fraction: Option<f64>,
}

fn default_half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationConfig {
    #[serde(default = "one")]
    pub nx: usize,
    #[serde(default = "one")]
    pub ny: usize,
    /// Nodes per element side; the polynomial degree is one less.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_per_side: Option<usize>,
    #[serde(default = "default_family")]
    pub family: NodeFamily,
    /// Defaults to the rule matching `family`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureKind>,
    #[serde(default = "default_mass")]
    pub mass: String,
}

fn one() -> usize {
    1
}

fn default_family() -> NodeFamily {
    NodeFamily::Lobatto
}

fn default_mass() -> String {
    MassTreatment::Consistent.to_string()
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        Self {
            nx: 1,
            ny: 1,
            nodes_per_side: None,
            family: default_family(),
            quadrature: None,
            mass: default_mass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Zone vertices joined by `-`, e.g. `G-X-M-G`. Defaults to `G-Y` for
    /// homogeneous and bilayer cells and `G-X` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Samples per path segment, endpoints included.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_modes")]
    pub n_modes: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_modes() -> usize {
    DEFAULT_MODES
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            path: None,
            samples: DEFAULT_SAMPLES,
            n_modes: DEFAULT_MODES,
        }
    }
}

/// Reference speed and length; default to the reference material's shear
/// speed and the cell height `2 d_b`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_ref: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_ref: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub materials: BTreeMap<String, MaterialEntry>,
    pub cell: CellConfig,
    #[serde(default)]
    pub discretization: DiscretizationConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub normalization: NormalizationConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

/// Parses, validates and resolves defaults.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let raw: RunConfig = toml::from_str(text).map_err(|e| {
        let key = e.span().map(|s| text[s].to_string()).unwrap_or_else(|| "<file>".into());
        Error::config(key, e.message().to_string())
    })?;
    raw.resolved()
}

impl RunConfig {
    /// Validates and returns a copy with every default written out.
    pub fn resolved(&self) -> Result<RunConfig> {
        let mut out = self.clone();
        let cell = self.unit_cell()?;
        let spec = self.element_spec()?;
        let mass = self.mass()?;
        build_mesh(&cell, self.discretization.nx, self.discretization.ny, &spec)?;

        out.discretization.quadrature = Some(spec.quadrature().kind());
        out.discretization.mass = mass.to_string();
        if matches!(self.cell.layout, LayoutKind::MatrixInclusion | LayoutKind::MatrixPore) {
            out.cell.side_fraction = Some(self.cell.side_fraction.unwrap_or(DEFAULT_SIDE_FRACTION));
        }
        let path = self.path_spec()?;
        out.sweep.path = Some(path.to_string());
        if self.sweep.n_modes == 0 {
            return Err(Error::config("sweep.n_modes", "must be at least 1"));
        }
        let norm = self.normalization()?;
        out.normalization = NormalizationConfig {
            c_ref: Some(norm.c_ref),
            l_ref: Some(norm.l_ref),
        };
        let mut formats = self.output.formats.clone();
        formats.sort();
        formats.dedup();
        out.output.formats = formats;
        Ok(out)
    }

    /// The resolved configuration as TOML.
    pub fn echo(&self) -> Result<String> {
        toml::to_string(&self.resolved()?).map_err(|e| Error::config("<echo>", e.to_string()))
    }

    /// SHA-256 of the echo, hex encoded.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.echo()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn material(&self, key: &str, name: Option<&String>) -> Result<Material> {
        let name = name.ok_or_else(|| {
            Error::config(format!("cell.{key}"), format!("required for a {} cell", layout_label(self.cell.layout)))
        })?;
        let entry = self.materials.get(name).ok_or_else(|| {
            Error::config(format!("cell.{key}"), format!("material `{name}` is not defined under [materials]"))
        })?;
        Material::new(name.clone(), entry.youngs_modulus, entry.poisson_ratio, entry.density).map_err(|e| {
            Error::config(format!("materials.{name}"), e.to_string())
        })
    }

    pub fn unit_cell(&self) -> Result<UnitCell> {
        let c = &self.cell;
        let allowed: &[&str] = match c.layout {
            LayoutKind::Homogeneous => &["material"],
            LayoutKind::Bilayer => &["bottom", "top"],
            LayoutKind::MatrixInclusion => &["matrix", "inclusion", "side_fraction"],
            LayoutKind::MatrixPore => &["matrix", "side_fraction"],
        };
        let present = [
            ("material", c.material.is_some()),
            ("bottom", c.bottom.is_some()),
            ("top", c.top.is_some()),
            ("matrix", c.matrix.is_some()),
            ("inclusion", c.inclusion.is_some()),
            ("side_fraction", c.side_fraction.is_some()),
        ];
        for (key, is_set) in present {
            if is_set && !allowed.contains(&key) {
                return Err(Error::config(
                    format!("cell.{key}"),
                    format!("not used by a {} cell", layout_label(c.layout)),
                ));
            }
        }
        let fraction = c.side_fraction.unwrap_or(DEFAULT_SIDE_FRACTION);
        let layout = match c.layout {
            LayoutKind::Homogeneous => Layout::Homogeneous {
                material: self.material("material", c.material.as_ref())?,
            },
            LayoutKind::Bilayer => Layout::Bilayer {
                bottom: self.material("bottom", c.bottom.as_ref())?,
                top: self.material("top", c.top.as_ref())?,
            },
            LayoutKind::MatrixInclusion => Layout::MatrixInclusion {
                matrix: self.material("matrix", c.matrix.as_ref())?,
                inclusion: self.material("inclusion", c.inclusion.as_ref())?,
                side_fraction: fraction,
            },
            LayoutKind::MatrixPore => Layout::MatrixPore {
                matrix: self.material("matrix", c.matrix.as_ref())?,
                side_fraction: fraction,
            },
        };
        UnitCell::new(c.half_width, c.half_height, layout)
    }

    pub fn element_spec(&self) -> Result<ElementSpec> {
        let d = &self.discretization;
        let n = d
            .nodes_per_side
            .ok_or_else(|| Error::config("discretization.nodes_per_side", "missing"))?;
        if n < 2 {
            return Err(Error::config("discretization.nodes_per_side", format!("need at least 2, got {n}")));
        }
        let kind = d.quadrature.unwrap_or(match d.family {
            NodeFamily::Lobatto => QuadratureKind::GaussLobatto,
            _ => QuadratureKind::GaussLegendre,
        });
        match (d.family, kind) {
            (NodeFamily::Lobatto, QuadratureKind::GaussLobatto) => ElementSpec::spectral(n),
            (NodeFamily::Lobatto, QuadratureKind::GaussLegendre) => Err(Error::config(
                "discretization.quadrature",
                "Lobatto nodes require gauss-lobatto quadrature; mixed spectral configurations are not supported",
            )),
            (NodeFamily::Equispaced, QuadratureKind::GaussLegendre) => ElementSpec::classical(n),
            (NodeFamily::Equispaced, QuadratureKind::GaussLobatto) => {
                ElementSpec::new(equispaced_nodes(n - 1)?, gll_quadrature(n - 1)?)
            }
            (NodeFamily::Chebyshev, _) => Err(Error::config(
                "discretization.family",
                "Chebyshev nodes exclude the element corners and cannot form a conforming element",
            )),
        }
        .map_err(|e| match e {
            Error::Configuration { .. } => e,
            other => Error::config("discretization", other.to_string()),
        })
    }

    pub fn mass(&self) -> Result<MassTreatment> {
        self.discretization.mass.parse()
    }

    pub fn path_spec(&self) -> Result<PathSpec> {
        let default = match self.cell.layout {
            LayoutKind::Homogeneous | LayoutKind::Bilayer => "G-Y",
            LayoutKind::MatrixInclusion | LayoutKind::MatrixPore => "G-X",
        };
        let text = self.sweep.path.as_deref().unwrap_or(default);
        if text.contains(':') {
            return Err(Error::config("sweep.path", "set the sample count with sweep.samples"));
        }
        PathSpec::new(parse_vertices(text)?, self.sweep.samples)
    }

    pub fn normalization(&self) -> Result<Normalization> {
        let base = Normalization::for_cell(&self.unit_cell()?);
        Normalization::new(
            self.normalization.c_ref.unwrap_or(base.c_ref),
            self.normalization.l_ref.unwrap_or(base.l_ref),
        )
    }

    pub fn discretization(&self) -> Result<Discretization> {
        Ok(Discretization {
            cell: self.unit_cell()?,
            nx: self.discretization.nx,
            ny: self.discretization.ny,
            spec: self.element_spec()?,
            mass: self.mass()?,
        })
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.output.formats.contains(&format)
    }
}

fn layout_label(kind: LayoutKind) -> &'static str {
    match kind {
        LayoutKind::Homogeneous => "homogeneous",
        LayoutKind::Bilayer => "bilayer",
        LayoutKind::MatrixInclusion => "matrix-inclusion",
        LayoutKind::MatrixPore => "matrix-pore",
    }
}
