//! Dense solver for the reduced Hermitian pencil `K_R v = lambda M_R v`.
//!
//! A diagonal `M_R` is absorbed by symmetric scaling `M^{-1/2} K M^{-1/2}`;
//! otherwise the pencil is reduced with the Cholesky factor `M_R = L L^H` to
//! `L^{-1} K L^{-H}`. Either way the result is a standard Hermitian problem.
//! All factorizations run sequentially so a given input always yields the
//! same bits regardless of how many sweeps run concurrently.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::llt::factor::{cholesky_in_place, cholesky_in_place_scratch};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::diag::Diag;
use faer::{c64, Mat, Par};
use serde::{Deserialize, Serialize};

use crate::bloch::{ReducedSystem, WaveVector};
use crate::{Error, Result};

/// Eigenvalues with `|lambda|` below this fraction of the largest are
/// treated as zero when negative.
pub const ZERO_EIGENVALUE_TOLERANCE: f64 = 1e-8;

/// Frequencies of one wave vector, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalSet {
    pub k: WaveVector,
    /// rad/s
    pub omegas: Vec<f64>,
}

impl ModalSet {
    pub fn solve(k: WaveVector, reduced: &ReducedSystem, n_modes: usize) -> Result<Self> {
        let omegas = solve_gevp(&reduced.stiffness, &reduced.mass, n_modes)?.omegas;
        Ok(Self { k, omegas })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionPath {
    /// Diagonal scaling when `M_R` is diagonal, Cholesky otherwise.
    Auto,
    Cholesky,
    DiagonalScaling,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Clamped eigenvalues `lambda = omega^2`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `sqrt(lambda)`, truncated to the requested mode count.
    pub omegas: Vec<f64>,
    /// Columns are eigenvectors of the original pencil, when requested.
    pub vectors: Option<Mat<c64>>,
}

pub fn solve_gevp(k: &Mat<c64>, m: &Mat<c64>, n_modes: usize) -> Result<Spectrum> {
    solve_gevp_with(k, m, n_modes, ReductionPath::Auto, false)
}

pub fn solve_gevp_with(
    k: &Mat<c64>,
    m: &Mat<c64>,
    n_modes: usize,
    path: ReductionPath,
    want_vectors: bool,
) -> Result<Spectrum> {
    let n = k.nrows();
    if k.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(Error::Solver(format!(
            "pencil shapes differ: K is {}x{}, M is {}x{}",
            k.nrows(),
            k.ncols(),
            m.nrows(),
            m.ncols()
        )));
    }
    let k = hermitian_part(k);
    let m = hermitian_part(m);
    let path = match path {
        ReductionPath::Auto if is_diagonal(&m) => ReductionPath::DiagonalScaling,
        ReductionPath::Auto => ReductionPath::Cholesky,
        p => p,
    };

    let (standard, back) = match path {
        ReductionPath::DiagonalScaling => {
            if !is_diagonal(&m) {
                return Err(Error::Solver("diagonal scaling needs a diagonal mass".into()));
            }
            let mut scale = Vec::with_capacity(n);
            for i in 0..n {
                let d = m[(i, i)].re;
                if !(d > 0.0) {
                    return Err(Error::Solver(format!("mass diagonal {i} is not positive ({d})")));
                }
                scale.push(1.0 / d.sqrt());
            }
            let c = Mat::from_fn(n, n, |i, j| k[(i, j)] * (scale[i] * scale[j]));
            (c, Back::Scale(scale))
        }
        _ => {
            let l = cholesky(&m)?;
            // X = L^{-1} K, then C = L^{-1} X^H = L^{-1} K L^{-H}
            let mut x = k.clone();
            solve_lower_triangular_in_place(l.as_ref(), x.as_mut(), Par::Seq);
            let mut c = x.adjoint().to_owned();
            solve_lower_triangular_in_place(l.as_ref(), c.as_mut(), Par::Seq);
            (hermitian_part(&c), Back::Cholesky(l))
        }
    };

    let (mut eigenvalues, vectors) = hermitian_eigen(&standard, want_vectors)?;
    let largest = eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let tolerance = ZERO_EIGENVALUE_TOLERANCE * largest;
    for v in &mut eigenvalues {
        if *v < -tolerance {
            return Err(Error::NegativeEigenvalue { value: *v, tolerance });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let vectors = vectors.map(|mut y| {
        match back {
            Back::Scale(scale) => {
                for j in 0..y.ncols() {
                    for (i, s) in scale.iter().enumerate() {
                        y[(i, j)] *= *s;
                    }
                }
            }
            Back::Cholesky(l) => {
                solve_upper_triangular_in_place(l.adjoint(), y.as_mut(), Par::Seq);
            }
        }
        y
    });
    let omegas = eigenvalues.iter().take(n_modes).map(|v| v.sqrt()).collect();
    Ok(Spectrum {
        eigenvalues,
        omegas,
        vectors,
    })
}

enum Back {
    Scale(Vec<f64>),
    Cholesky(Mat<c64>),
}

fn hermitian_part(a: &Mat<c64>) -> Mat<c64> {
    let n = a.nrows();
    Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

fn is_diagonal(a: &Mat<c64>) -> bool {
    let zero = c64::new(0.0, 0.0);
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| i == j || a[(i, j)] == zero))
}

fn cholesky(m: &Mat<c64>) -> Result<Mat<c64>> {
    let n = m.nrows();
    let mut l = m.clone();
    let mut buf = MemBuffer::new(cholesky_in_place_scratch::<c64>(n, Par::Seq, Default::default()));
    cholesky_in_place(
        l.as_mut(),
        Default::default(),
        Par::Seq,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| Error::Solver(format!("mass matrix is not positive definite: {e:?}")))?;
    for j in 1..n {
        for i in 0..j {
            l[(i, j)] = c64::new(0.0, 0.0);
        }
    }
    Ok(l)
}

fn hermitian_eigen(a: &Mat<c64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat<c64>>)> {
    let n = a.nrows();
    let compute = if want_vectors {
        ComputeEigenvectors::Yes
    } else {
        ComputeEigenvectors::No
    };
    let mut s = Diag::<c64>::zeros(n);
    let mut u = want_vectors.then(|| Mat::<c64>::zeros(n, n));
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<c64>(
        n,
        compute,
        Par::Seq,
        Default::default(),
    ));
    self_adjoint_evd(
        a.as_ref(),
        s.as_mut(),
        u.as_mut().map(|u| u.as_mut()),
        Par::Seq,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| Error::Solver(format!("eigensolver failed: {e:?}")))?;
    let values = s.column_vector().iter().map(|z| z.re).collect();
    Ok((values, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble;
    use crate::basis::ElementSpec;
    use crate::bloch::{build_transform, reduce};
    use crate::cellmesh::{build_mesh, classify_dofs, Layout, UnitCell};
    use crate::elasticity::Material;
    use std::f64::consts::PI;

    fn eye(n: usize) -> Mat<c64> {
        Mat::from_fn(n, n, |i, j| c64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    fn norm(m: &Mat<c64>) -> f64 {
        let mut s = 0.0;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                s += m[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    }

    #[test]
    fn identity_pencil() {
        let s = solve_gevp(&eye(5), &eye(5), 5).unwrap();
        assert!(s.omegas.iter().all(|w| (w - 1.0).abs() < 1e-14));
    }

    #[test]
    fn truncates_to_requested_modes() {
        let s = solve_gevp(&eye(6), &eye(6), 3).unwrap();
        assert_eq!(s.omegas.len(), 3);
        assert_eq!(s.eigenvalues.len(), 6);
        assert_eq!(solve_gevp(&eye(2), &eye(2), 10).unwrap().omegas.len(), 2);
    }

    #[test]
    fn non_positive_mass_rejected() {
        let mut m = eye(3);
        m[(1, 1)] = c64::new(-1.0, 0.0);
        assert!(matches!(solve_gevp(&eye(3), &m, 3), Err(Error::Solver(_))));
        m[(0, 1)] = c64::new(0.1, 0.0);
        m[(1, 0)] = c64::new(0.1, 0.0);
        assert!(matches!(solve_gevp(&eye(3), &m, 3), Err(Error::Solver(_))));
    }

    #[test]
    fn negative_eigenvalue_reported() {
        let mut k = eye(3);
        k[(2, 2)] = c64::new(-0.5, 0.0);
        assert!(matches!(
            solve_gevp(&k, &eye(3), 3),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    fn bilayer_reduced(k: WaveVector, spec: ElementSpec) -> ReducedSystem {
        let cell = UnitCell::new(
            0.5,
            0.5,
            Layout::Bilayer {
                bottom: Material::aluminum(),
                top: Material::brass(),
            },
        )
        .unwrap();
        let mesh = build_mesh(&cell, 2, 2, &spec).unwrap();
        let part = classify_dofs(&mesh).unwrap();
        let sys = assemble(&mesh).unwrap();
        let t = build_transform(&part, &cell, k).unwrap();
        reduce(&sys, &t).unwrap()
    }

    #[test]
    fn residuals_small_on_both_paths() {
        let k = WaveVector::new(1.1, -0.6);
        for spec in [ElementSpec::classical(4).unwrap(), ElementSpec::spectral(4).unwrap()] {
            let red = bilayer_reduced(k, spec);
            let s = solve_gevp_with(&red.stiffness, &red.mass, usize::MAX, ReductionPath::Auto, true).unwrap();
            let v = s.vectors.unwrap();
            let kn = norm(&red.stiffness);
            let kv = &red.stiffness * &v;
            let mv = &red.mass * &v;
            for (j, &lambda) in s.eigenvalues.iter().enumerate() {
                let mut r = 0.0;
                let mut vn = 0.0;
                for i in 0..v.nrows() {
                    r += (kv[(i, j)] - mv[(i, j)] * lambda).norm_sqr();
                    vn += v[(i, j)].norm_sqr();
                }
                assert!(r.sqrt() / (kn * vn.sqrt()) < 1e-8, "mode {j}");
            }
        }
    }

    #[test]
    fn cholesky_and_scaling_agree_on_diagonal_mass() {
        let red = bilayer_reduced(WaveVector::new(0.4, PI), ElementSpec::spectral(5).unwrap());
        assert!(red.mass_is_diagonal);
        let n = red.stiffness.nrows();
        let a = solve_gevp_with(&red.stiffness, &red.mass, n, ReductionPath::DiagonalScaling, false).unwrap();
        let b = solve_gevp_with(&red.stiffness, &red.mass, n, ReductionPath::Cholesky, false).unwrap();
        let top = a.omegas[n - 1];
        for (x, y) in a.omegas.iter().zip(&b.omegas) {
            assert!((x - y).abs() <= 1e-10 * top, "{x} vs {y}");
        }
    }
}
