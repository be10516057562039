//! Isotropic linear elasticity under plane strain (in-plane P and SV motion).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Young's modulus, Pa.
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Mass density, kg/m^3.
    pub density: f64,
}

impl Material {
    pub fn new(
        name: impl Into<String>,
        youngs_modulus: f64,
        poisson_ratio: f64,
        density: f64,
    ) -> Result<Self> {
        let m = Self {
            name: name.into(),
            youngs_modulus,
            poisson_ratio,
            density,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn aluminum() -> Self {
        Self::new("aluminum", 7.31e10, 0.325, 2770.0).expect("valid constants")
    }

    pub fn brass() -> Self {
        Self::new("brass", 9.2e10, 0.33, 8270.0).expect("valid constants")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidMaterial {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if !(self.youngs_modulus.is_finite() && self.youngs_modulus > 0.0) {
            return bad("Young's modulus must be positive");
        }
        if !(self.density.is_finite() && self.density > 0.0) {
            return bad("density must be positive");
        }
        if !(self.poisson_ratio > -1.0 && self.poisson_ratio < 0.5) {
            return bad("Poisson ratio must lie in (-1, 0.5)");
        }
        Ok(())
    }

    /// `(lambda, mu)` in Pa.
    pub fn lame_constants(&self) -> (f64, f64) {
        let (e, nu) = (self.youngs_modulus, self.poisson_ratio);
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        (lambda, mu)
    }

    /// Bulk wave speeds `(c_P, c_S)` in m/s.
    pub fn wave_speeds(&self) -> (f64, f64) {
        let (lambda, mu) = self.lame_constants();
        (
            ((lambda + 2.0 * mu) / self.density).sqrt(),
            (mu / self.density).sqrt(),
        )
    }

    pub fn constitutive(&self) -> ConstitutiveMatrix {
        let (lambda, mu) = self.lame_constants();
        let c = lambda + 2.0 * mu;
        ConstitutiveMatrix([[c, lambda, 0.0], [lambda, c, 0.0], [0.0, 0.0, mu]])
    }
}

/// Plane-strain `D` mapping `(e_xx, e_yy, g_xy)` to `(s_xx, s_yy, s_xy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstitutiveMatrix(pub [[f64; 3]; 3]);

impl ConstitutiveMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    /// Leading principal minors, in order.
    pub fn leading_minors(&self) -> [f64; 3] {
        let d = &self.0;
        let m1 = d[0][0];
        let m2 = d[0][0] * d[1][1] - d[0][1] * d[1][0];
        let m3 = d[0][0] * (d[1][1] * d[2][2] - d[1][2] * d[2][1])
            - d[0][1] * (d[1][0] * d[2][2] - d[1][2] * d[2][0])
            + d[0][2] * (d[1][0] * d[2][1] - d[1][1] * d[2][0]);
        [m1, m2, m3]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn lame_examples() {
        let unit = Material::new("unit", 1.0, 0.0, 1.0).unwrap();
        assert_eq!(unit.lame_constants(), (0.0, 0.5));
        // closed formulas evaluated independently (oracle script)
        let (l, m) = Material::aluminum().lame_constants();
        assert!(rel(l, 51_229_110_512.129_39) < 1e-12);
        assert!(rel(m, 27_584_905_660.377_36) < 1e-12);
        assert!(rel(l, 5.123e10) < 1e-3 && rel(m, 2.758e10) < 1e-3);
        let (_, mb) = Material::brass().lame_constants();
        assert!(rel(mb, 3.459e10) < 1e-3);
    }

    #[test]
    fn wave_speed_examples() {
        let (cp, cs) = Material::aluminum().wave_speeds();
        assert!(rel(cp, 6197.674_008_574_883) < 1e-12);
        assert!(rel(cs, 3155.701_141_883_865_6) < 1e-12);
        let (cp, cs) = Material::brass().wave_speeds();
        assert!(rel(cp, 4059.880_786_604_679) < 1e-12);
        assert!(rel(cs, 2045.033_094_738_271_5) < 1e-12);
    }

    #[test]
    fn constitutive_examples() {
        let m = Material::new("x", 2.0, 0.0, 1.0).unwrap();
        assert_eq!(
            m.constitutive().0,
            [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]
        );
        for mat in [Material::aluminum(), Material::brass()] {
            // eigenvalues of the block form: c +- lambda and mu
            let (l, mu) = mat.lame_constants();
            let c = l + 2.0 * mu;
            let smallest = (c - l).min(c + l).min(mu);
            assert!(smallest > 0.0);
        }
    }

    #[test]
    fn invalid_materials_rejected() {
        assert!(Material::new("a", 0.0, 0.3, 1.0).is_err());
        assert!(Material::new("a", 1.0, 0.5, 1.0).is_err());
        assert!(Material::new("a", 1.0, -1.0, 1.0).is_err());
        assert!(Material::new("a", 1.0, 0.3, -2.0).is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn any_material() -> impl Strategy<Value = Material> {
            (1e6f64..1e12, -0.99f64..0.499, 10.0f64..2e4)
                .prop_map(|(e, nu, rho)| Material::new("m", e, nu, rho).unwrap())
        }

        proptest! {
            #[test]
            fn d_symmetric_positive_definite(m in any_material()) {
                let d = m.constitutive();
                for i in 0..3 {
                    for j in 0..3 {
                        prop_assert_eq!(d.get(i, j), d.get(j, i));
                    }
                }
                for minor in d.leading_minors() {
                    prop_assert!(minor > 0.0);
                }
            }

            #[test]
            fn speeds_round_trip(m in any_material()) {
                let (l, mu) = m.lame_constants();
                let (cp, cs) = m.wave_speeds();
                prop_assert!(cp > cs);
                prop_assert!(((m.density * cs * cs) - mu).abs() <= 1e-10 * mu);
                prop_assert!(((m.density * cp * cp) - (l + 2.0 * mu)).abs() <= 1e-10 * (l + 2.0 * mu));
                let nu = m.poisson_ratio;
                let ratio = ((2.0 - 2.0 * nu) / (1.0 - 2.0 * nu)).sqrt();
                prop_assert!((cp / cs - ratio).abs() <= 1e-10 * ratio);
            }
        }
    }
}
