//! One-dimensional nodal sets, Lagrange interpolation and quadrature on the
//! reference interval `[-1, 1]`, and the tensor-product shape functions built
//! from them.
//!
//! Node and quadrature indices are zero-based throughout. An element with
//! `n` nodes per side uses Lagrange polynomials of degree `n - 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Newton/bisection stopping tolerance on root abscissae.
const ROOT_TOLERANCE: f64 = 1e-14;
const MAX_ROOT_ITERATIONS: usize = 200;
/// Oversampling of the bracketing grid relative to the number of roots sought.
const BRACKET_OVERSAMPLING: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeFamily {
    Equispaced,
    Chebyshev,
    Lobatto,
}

impl std::fmt::Display for NodeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NodeFamily::Equispaced => "equispaced",
            NodeFamily::Chebyshev => "chebyshev",
            NodeFamily::Lobatto => "lobatto",
        })
    }
}

/// Strictly increasing sampling points on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalSet {
    family: NodeFamily,
    coords: Vec<f64>,
}

impl NodalSet {
    pub fn family(&self) -> NodeFamily {
        self.family
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Polynomial degree of the associated Lagrange basis.
    pub fn degree(&self) -> usize {
        self.coords.len() - 1
    }

    /// Interpolates `values` (one per node) at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        assert_eq!(values.len(), self.len(), "one value per node");
        values
            .iter()
            .enumerate()
            .map(|(q, v)| v * lagrange_eval(self, q, x))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    GaussLegendre,
    GaussLobatto,
}

impl std::fmt::Display for QuadratureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QuadratureKind::GaussLegendre => "gauss-legendre",
            QuadratureKind::GaussLobatto => "gauss-lobatto",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Nodal set plus integration rule defining an element family.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSpec {
    nodal: NodalSet,
    quadrature: QuadratureRule,
}

impl ElementSpec {
    /// Pairs a nodal set with a quadrature rule. The nodal set must contain
    /// both interval endpoints so neighbouring elements can share edge nodes.
    pub fn new(nodal: NodalSet, quadrature: QuadratureRule) -> Result<Self> {
        let c = nodal.coords();
        if c.len() < 2 || c[0] != -1.0 || c[c.len() - 1] != 1.0 {
            return Err(Error::config(
                "discretization.family",
                format!(
                    "{} nodes do not include both interval endpoints and cannot form conforming elements",
                    nodal.family()
                ),
            ));
        }
        Ok(Self { nodal, quadrature })
    }

    /// Equispaced nodes integrated with `n`-point Gauss-Legendre.
    pub fn classical(nodes_per_side: usize) -> Result<Self> {
        let degree = degree_from_nodes(nodes_per_side)?;
        Self::new(
            equispaced_nodes(degree)?,
            gauss_legendre_quadrature(nodes_per_side)?,
        )
    }

    /// Lobatto nodes integrated at those same nodes (GLL rule).
    pub fn spectral(nodes_per_side: usize) -> Result<Self> {
        let degree = degree_from_nodes(nodes_per_side)?;
        Self::new(lobatto_nodes(degree)?, gll_quadrature(degree)?)
    }

    pub fn nodal(&self) -> &NodalSet {
        &self.nodal
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quadrature
    }

    pub fn nodes_per_side(&self) -> usize {
        self.nodal.len()
    }

    pub fn nodes_per_element(&self) -> usize {
        self.nodes_per_side() * self.nodes_per_side()
    }

    /// Lobatto nodes with a GLL rule sampled at exactly those nodes.
    pub fn is_spectral(&self) -> bool {
        self.nodal.family() == NodeFamily::Lobatto
            && self.quadrature.kind() == QuadratureKind::GaussLobatto
            && self.quadrature.len() == self.nodal.len()
            && self
                .quadrature
                .points()
                .iter()
                .zip(self.nodal.coords())
                .all(|(p, x)| (p - x).abs() <= 1e-12)
    }

    /// Splits a tensor node index `q = q_y * n + q_x` into `(q_x, q_y)`.
    pub fn split_index(&self, q: usize) -> (usize, usize) {
        let n = self.nodes_per_side();
        (q % n, q / n)
    }
}

fn degree_from_nodes(nodes_per_side: usize) -> Result<usize> {
    if nodes_per_side < 2 {
        return Err(Error::InvalidDegree {
            got: nodes_per_side.saturating_sub(1),
            min: 1,
        });
    }
    Ok(nodes_per_side - 1)
}

pub fn equispaced_nodes(degree: usize) -> Result<NodalSet> {
    if degree < 1 {
        return Err(Error::InvalidDegree { got: degree, min: 1 });
    }
    let mut coords: Vec<f64> = (0..=degree)
        .map(|i| -1.0 + 2.0 * i as f64 / degree as f64)
        .collect();
    coords[degree] = 1.0;
    Ok(NodalSet {
        family: NodeFamily::Equispaced,
        coords,
    })
}

/// The `count` roots of the Chebyshev polynomial `T_count`, ascending.
pub fn chebyshev_nodes(count: usize) -> Result<NodalSet> {
    if count < 2 {
        return Err(Error::InvalidDegree {
            got: count.saturating_sub(1),
            min: 1,
        });
    }
    let n = count as f64;
    let mut coords: Vec<f64> = (1..=count)
        .map(|k| ((2 * k - 1) as f64 * PI / (2.0 * n)).cos())
        .collect();
    coords.reverse();
    symmetrize(&mut coords);
    Ok(NodalSet {
        family: NodeFamily::Chebyshev,
        coords,
    })
}

/// Roots of `(1 - x^2) P'_degree(x)`: the endpoints plus the interior
/// extrema of the Legendre polynomial.
pub fn lobatto_nodes(degree: usize) -> Result<NodalSet> {
    if degree < 1 {
        return Err(Error::InvalidDegree { got: degree, min: 1 });
    }
    let mut coords = Vec::with_capacity(degree + 1);
    coords.push(-1.0);
    if degree >= 2 {
        let interior = find_roots(degree - 1, |x| {
            let (p, dp) = legendre(degree, x);
            let n = degree as f64;
            // Legendre ODE gives P'' away from the endpoints.
            let d2p = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
            (dp, d2p)
        })?;
        coords.extend(interior);
    }
    coords.push(1.0);
    symmetrize(&mut coords);
    Ok(NodalSet {
        family: NodeFamily::Lobatto,
        coords,
    })
}

/// Gauss-Lobatto-Legendre rule with `degree + 1` points.
pub fn gll_quadrature(degree: usize) -> Result<QuadratureRule> {
    let nodal = lobatto_nodes(degree)?;
    let n = degree as f64;
    let end_weight = 2.0 / (n * (n + 1.0));
    let weights = nodal
        .coords()
        .iter()
        .map(|&x| {
            if x.abs() == 1.0 {
                end_weight
            } else {
                let (p, _) = legendre(degree, x);
                end_weight / (p * p)
            }
        })
        .collect();
    Ok(QuadratureRule {
        kind: QuadratureKind::GaussLobatto,
        points: nodal.coords,
        weights,
    })
}

/// `count`-point Gauss-Legendre rule.
pub fn gauss_legendre_quadrature(count: usize) -> Result<QuadratureRule> {
    if count < 1 {
        return Err(Error::InvalidDegree { got: 0, min: 1 });
    }
    let mut points = find_roots(count, |x| {
        let (p, dp) = legendre(count, x);
        (p, dp)
    })?;
    symmetrize(&mut points);
    let weights = points
        .iter()
        .map(|&x| {
            let (_, dp) = legendre(count, x);
            2.0 / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok(QuadratureRule {
        kind: QuadratureKind::GaussLegendre,
        points,
        weights,
    })
}

/// `(P_n(x), P'_n(x))` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    // P'_{k+1} = P'_{k-1} + (2k + 1) P_k
    let (mut p_prev, mut p) = (1.0, x);
    let (mut dp_prev, mut dp) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        let dp_next = dp_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Finds `expected` simple roots of `f` in `(-1, 1)`. Brackets come from
/// sign changes on a Chebyshev-clustered sampling grid; each bracket is
/// refined by safeguarded Newton. `f` returns the value and its derivative.
fn find_roots(expected: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<Vec<f64>> {
    let samples = BRACKET_OVERSAMPLING * (expected + 2);
    let grid: Vec<f64> = (0..=samples)
        .map(|i| -(PI * i as f64 / samples as f64).cos())
        .collect();
    let mut roots = Vec::with_capacity(expected);
    let mut prev = (grid[0], f(grid[0]).0);
    for &x in &grid[1..] {
        let fx = f(x).0;
        if fx == 0.0 && x.abs() < 1.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && prev.1.signum() != fx.signum() {
            roots.push(refine_root(&f, prev.0, x)?);
        }
        prev = (x, fx);
    }
    if roots.len() != expected {
        return Err(Error::NumericalFailure(format!(
            "expected {expected} roots, bracketed {}",
            roots.len()
        )));
    }
    Ok(roots)
}

fn refine_root(f: &impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64) -> Result<f64> {
    let f_lo = f(lo).0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ROOT_ITERATIONS {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() < ROOT_TOLERANCE || hi - lo < ROOT_TOLERANCE {
            // one Newton polish past the tolerance
            let (fn_, dfn) = f(next);
            let polished = next - fn_ / dfn;
            return Ok(if dfn != 0.0 && (polished - next).abs() < ROOT_TOLERANCE {
                polished
            } else {
                next
            });
        }
        x = next;
    }
    Err(Error::NumericalFailure(format!(
        "root refinement in [{lo}, {hi}] did not converge"
    )))
}

/// Enforces exact mirror symmetry about 0 on an ascending list.
fn symmetrize(xs: &mut [f64]) {
    let n = xs.len();
    for i in 0..n / 2 {
        let half = 0.5 * (xs[n - 1 - i] - xs[i]);
        xs[i] = -half;
        xs[n - 1 - i] = half;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
}

/// Lagrange basis polynomial `q` of `nodal` evaluated at `x`.
pub fn lagrange_eval(nodal: &NodalSet, q: usize, x: f64) -> f64 {
    let c = nodal.coords();
    let xq = c[q];
    c.iter()
        .enumerate()
        .filter(|&(p, _)| p != q)
        .map(|(_, &xp)| (x - xp) / (xq - xp))
        .product()
}

/// Derivative of the Lagrange basis polynomial `q` at `x`, as a sum over
/// the dropped factor of the product form. Well defined at the nodes.
pub fn lagrange_deriv(nodal: &NodalSet, q: usize, x: f64) -> f64 {
    let c = nodal.coords();
    let xq = c[q];
    let mut sum = 0.0;
    for (p, &xp) in c.iter().enumerate() {
        if p == q {
            continue;
        }
        let mut term = 1.0 / (xq - xp);
        for (r, &xr) in c.iter().enumerate() {
            if r != q && r != p {
                term *= (x - xr) / (xq - xr);
            }
        }
        sum += term;
    }
    sum
}

/// Value and reference-coordinate gradient of the 2D shape function for
/// tensor node `q` at `xi = (x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeValue {
    pub value: f64,
    pub grad_x: f64,
    pub grad_y: f64,
}

pub fn shape2d(spec: &ElementSpec, q: usize, xi: (f64, f64)) -> ShapeValue {
    let (qx, qy) = spec.split_index(q);
    let nodal = spec.nodal();
    let lx = lagrange_eval(nodal, qx, xi.0);
    let ly = lagrange_eval(nodal, qy, xi.1);
    ShapeValue {
        value: lx * ly,
        grad_x: lagrange_deriv(nodal, qx, xi.0) * ly,
        grad_y: lx * lagrange_deriv(nodal, qy, xi.1),
    }
}

/// `1 / (1 + 25 x^2)`.
pub fn runge_function(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * x * x)
}

/// Largest `|p(x) - f(x)|` over `probe_points` uniform points on `[-1, 1]`,
/// where `p` interpolates `f` at `nodal`.
pub fn max_interpolation_error(nodal: &NodalSet, f: impl Fn(f64) -> f64, probe_points: usize) -> f64 {
    let values: Vec<f64> = nodal.coords().iter().map(|&x| f(x)).collect();
    let last = probe_points.max(2) - 1;
    (0..=last)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / last as f64;
            (nodal.interpolate(&values, x) - f(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationError {
    pub family: NodeFamily,
    pub degree: usize,
    pub max_error: f64,
}

/// Interpolates the Runge function at degree `degree` with each node family.
pub fn runge_study(degree: usize, probe_points: usize) -> Result<Vec<InterpolationError>> {
    let sets = [
        equispaced_nodes(degree)?,
        chebyshev_nodes(degree + 1)?,
        lobatto_nodes(degree)?,
    ];
    Ok(sets
        .iter()
        .map(|nodal| InterpolationError {
            family: nodal.family(),
            degree,
            max_error: max_interpolation_error(nodal, runge_function, probe_points),
        })
        .collect())
}

/// Highest `p` such that every monomial `x^0 .. x^p` is integrated with
/// absolute error below `tolerance`.
pub fn monomial_exactness(rule: &QuadratureRule, tolerance: f64) -> usize {
    let exact = |p: i32| if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
    let mut p: usize = 0;
    while (rule.integrate(|x| x.powi(p as i32)) - exact(p as i32)).abs() < tolerance {
        p += 1;
    }
    p.saturating_sub(1)
}

/// Basis values and derivatives sampled at quadrature points:
/// `value[g][a] = l_a(x_g)`, `deriv[g][a] = l'_a(x_g)`.
#[derive(Debug, Clone)]
pub(crate) struct Tabulation {
    pub value: Vec<Vec<f64>>,
    pub deriv: Vec<Vec<f64>>,
}

impl Tabulation {
    pub fn new(spec: &ElementSpec) -> Self {
        let nodal = spec.nodal();
        let n = nodal.len();
        let mut value = Vec::with_capacity(spec.quadrature().len());
        let mut deriv = Vec::with_capacity(spec.quadrature().len());
        for &x in spec.quadrature().points() {
            value.push((0..n).map(|a| lagrange_eval(nodal, a, x)).collect());
            deriv.push((0..n).map(|a| lagrange_deriv(nodal, a, x)).collect());
        }
        Self { value, deriv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Plain bisection on a sign change, independent of the library's root finder.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Explicit P_4' = (35 * 4 x^3 - 30 * 2 x) / 8.
    fn p4_prime(x: f64) -> f64 {
        (140.0 * x.powi(3) - 60.0 * x) / 8.0
    }

    #[test]
    fn equispaced_examples() {
        assert_eq!(equispaced_nodes(1).unwrap().coords(), &[-1.0, 1.0]);
        assert_eq!(equispaced_nodes(2).unwrap().coords(), &[-1.0, 0.0, 1.0]);
        assert_eq!(
            equispaced_nodes(4).unwrap().coords(),
            &[-1.0, -0.5, 0.0, 0.5, 1.0]
        );
        assert!(matches!(
            equispaced_nodes(0),
            Err(Error::InvalidDegree { .. })
        ));
    }

    #[test]
    fn chebyshev_examples() {
        let h = std::f64::consts::SQRT_2 / 2.0;
        let c2 = chebyshev_nodes(2).unwrap();
        assert!(close(c2.coords()[0], -h, 1e-15) && close(c2.coords()[1], h, 1e-15));
        let c3 = chebyshev_nodes(3).unwrap();
        let r3 = 3f64.sqrt() / 2.0;
        assert!(close(c3.coords()[0], -r3, 1e-15));
        assert_eq!(c3.coords()[1], 0.0);
        assert!(close(c3.coords()[2], r3, 1e-15));
        let c4 = chebyshev_nodes(4).unwrap();
        let expected = [
            -(PI / 8.0).cos(),
            -(3.0 * PI / 8.0).cos(),
            (3.0 * PI / 8.0).cos(),
            (PI / 8.0).cos(),
        ];
        for (a, b) in c4.coords().iter().zip(expected) {
            assert!(close(*a, b, 1e-15));
        }
        assert!(close(c4.coords()[3], 0.92388, 1e-5));
        assert!(matches!(chebyshev_nodes(1), Err(Error::InvalidDegree { .. })));
    }

    #[test]
    fn lobatto_examples() {
        assert_eq!(lobatto_nodes(1).unwrap().coords(), &[-1.0, 1.0]);
        assert_eq!(lobatto_nodes(2).unwrap().coords(), &[-1.0, 0.0, 1.0]);
        let l4 = lobatto_nodes(4).unwrap();
        // independent oracle: bisection on the explicit P_4'
        let r = bisect(p4_prime, 0.3, 0.9);
        assert!(close(r, (3.0f64 / 7.0).sqrt(), 1e-14));
        let expected = [-1.0, -r, 0.0, r, 1.0];
        for (a, b) in l4.coords().iter().zip(expected) {
            assert!(close(*a, b, 1e-14), "{a} vs {b}");
        }
        assert!(close(l4.coords()[3], 0.654654, 1e-6));
        assert!(matches!(lobatto_nodes(0), Err(Error::InvalidDegree { .. })));
    }

    #[test]
    fn lobatto_high_degree_is_well_formed() {
        for degree in 1..=30 {
            let l = lobatto_nodes(degree).unwrap();
            assert_eq!(l.len(), degree + 1);
            assert!(l.coords().windows(2).all(|w| w[0] < w[1]));
            for &x in &l.coords()[1..degree] {
                assert!(legendre(degree, x).1.abs() < 1e-9 * (degree * degree) as f64);
            }
        }
    }

    #[test]
    fn gll_examples() {
        let g1 = gll_quadrature(1).unwrap();
        assert_eq!(g1.points(), &[-1.0, 1.0]);
        assert_eq!(g1.weights(), &[1.0, 1.0]);
        let g4 = gll_quadrature(4).unwrap();
        assert!(close(g4.weights()[0], 0.1, 1e-15));
        assert!(close(g4.weights()[4], 0.1, 1e-15));
        // weights re-derived from the explicit P_4 at the bisected node
        let r = bisect(p4_prime, 0.3, 0.9);
        let p4 = |x: f64| (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0;
        let w_r = 0.1 / p4(r).powi(2);
        let w_0 = 0.1 / p4(0.0).powi(2);
        assert!(close(g4.weights()[1], w_r, 1e-13));
        assert!(close(g4.weights()[2], w_0, 1e-13));
        assert!(close(w_r, 0.544444, 1e-6) && close(w_0, 0.711111, 1e-6));
        assert!(close(g4.weights().iter().sum::<f64>(), 2.0, 1e-12));
    }

    #[test]
    fn gauss_legendre_examples() {
        let g1 = gauss_legendre_quadrature(1).unwrap();
        assert_eq!(g1.points(), &[0.0]);
        assert!(close(g1.weights()[0], 2.0, 1e-15));
        let g2 = gauss_legendre_quadrature(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(close(g2.points()[0], -s, 1e-15) && close(g2.points()[1], s, 1e-15));
        assert!(close(g2.weights()[0], 1.0, 1e-14) && close(g2.weights()[1], 1.0, 1e-14));
        let g3 = gauss_legendre_quadrature(3).unwrap();
        assert!(close(g3.integrate(|x| x.powi(4)), 0.4, 1e-15));
        assert!(gauss_legendre_quadrature(0).is_err());
    }

    fn monomial_integral(p: i32) -> f64 {
        if p % 2 == 1 {
            0.0
        } else {
            2.0 / (p as f64 + 1.0)
        }
    }

    #[test]
    fn quadrature_exactness_boundaries() {
        for degree in 1..=9usize {
            let rule = gll_quadrature(degree).unwrap();
            let exact_to = 2 * (degree + 1) - 3;
            for p in 0..=exact_to as i32 {
                let err = (rule.integrate(|x| x.powi(p)) - monomial_integral(p)).abs();
                assert!(err < 1e-12, "GLL M={degree} p={p} err={err}");
            }
            let p = (exact_to + 1) as i32;
            let err = (rule.integrate(|x| x.powi(p)) - monomial_integral(p)).abs();
            assert!(err > 1e-6, "GLL M={degree} should fail at p={p}");
        }
        for n in 1..=10usize {
            let rule = gauss_legendre_quadrature(n).unwrap();
            for p in 0..=(2 * n - 1) as i32 {
                let err = (rule.integrate(|x| x.powi(p)) - monomial_integral(p)).abs();
                assert!(err < 1e-12, "GL n={n} p={p}");
            }
            let p = (2 * n) as i32;
            assert!((rule.integrate(|x| x.powi(p)) - monomial_integral(p)).abs() > 1e-6);
        }
    }

    #[test]
    fn runge_study_thresholds() {
        // dense-sampling oracle values: 1.9156, 0.10915, 0.12118
        let rows = runge_study(10, 2001).unwrap();
        let err = |f: NodeFamily| rows.iter().find(|r| r.family == f).unwrap().max_error;
        let (eq, ch, lo) = (err(NodeFamily::Equispaced), err(NodeFamily::Chebyshev), err(NodeFamily::Lobatto));
        assert!(close(eq, 1.915643050219248, 1e-9), "{eq}");
        assert!(close(ch, 0.10915326641231016, 1e-9), "{ch}");
        assert!(close(lo, 0.12117926039622473, 1e-9), "{lo}");
        assert!(eq > 1.0 && ch < 0.2 && lo < 0.2 && eq > 5.0 * ch);
    }

    #[test]
    fn exactness_scan() {
        for degree in 1..=9 {
            assert_eq!(monomial_exactness(&gll_quadrature(degree).unwrap(), 1e-12), 2 * (degree + 1) - 3);
        }
        for n in 1..=10 {
            assert_eq!(monomial_exactness(&gauss_legendre_quadrature(n).unwrap(), 1e-12), 2 * n - 1);
        }
    }

    #[test]
    fn lagrange_examples() {
        let eq2 = equispaced_nodes(2).unwrap();
        assert!(close(lagrange_eval(&eq2, 1, 0.5), 0.75, 1e-15));
        let eq1 = equispaced_nodes(1).unwrap();
        for x in [-1.0, -0.3, 0.0, 0.8] {
            assert!(close(lagrange_deriv(&eq1, 1, x), 0.5, 1e-15));
        }
        for nodal in [lobatto_nodes(5).unwrap(), equispaced_nodes(3).unwrap()] {
            for q in 0..nodal.len() {
                for (p, &xp) in nodal.coords().iter().enumerate() {
                    let v = lagrange_eval(&nodal, q, xp);
                    assert_eq!(v, if p == q { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn lagrange_deriv_matches_finite_difference() {
        let l4 = lobatto_nodes(4).unwrap();
        let h = 1e-6;
        for &x in &[-0.93, -0.41, 0.05, 0.377, 0.88] {
            for q in 0..l4.len() {
                let fd = (lagrange_eval(&l4, q, x + h) - lagrange_eval(&l4, q, x - h)) / (2.0 * h);
                let d = lagrange_deriv(&l4, q, x);
                assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "q={q} x={x}");
            }
        }
    }

    #[test]
    fn element_spec_rejects_open_node_sets() {
        let err = ElementSpec::new(chebyshev_nodes(5).unwrap(), gll_quadrature(4).unwrap());
        assert!(matches!(err, Err(Error::Configuration { .. })));
        assert!(ElementSpec::spectral(6).unwrap().is_spectral());
        assert!(!ElementSpec::classical(6).unwrap().is_spectral());
        // degree 1 and 2 Lobatto nodes coincide with equispaced ones
        assert_eq!(
            ElementSpec::spectral(3).unwrap().nodal().coords(),
            ElementSpec::classical(3).unwrap().nodal().coords()
        );
    }

    #[test]
    fn shape2d_kronecker_and_gradient() {
        let spec = ElementSpec::spectral(5).unwrap();
        let c = spec.nodal().coords().to_vec();
        let n = spec.nodes_per_element();
        for q in 0..n {
            for p in 0..n {
                let (px, py) = spec.split_index(p);
                let v = shape2d(&spec, q, (c[px], c[py])).value;
                assert_eq!(v, if p == q { 1.0 } else { 0.0 });
            }
        }
        let h = 1e-6;
        for &(x, y) in &[(0.13, -0.72), (-0.55, 0.31), (0.9, 0.9)] {
            for q in 0..n {
                let s = shape2d(&spec, q, (x, y));
                let fx = (shape2d(&spec, q, (x + h, y)).value - shape2d(&spec, q, (x - h, y)).value)
                    / (2.0 * h);
                let fy = (shape2d(&spec, q, (x, y + h)).value - shape2d(&spec, q, (x, y - h)).value)
                    / (2.0 * h);
                assert!((s.grad_x - fx).abs() <= 1e-6 * s.grad_x.abs().max(1.0));
                assert!((s.grad_y - fy).abs() <= 1e-6 * s.grad_y.abs().max(1.0));
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn any_nodal() -> impl Strategy<Value = NodalSet> {
            (1usize..=12, 0usize..3).prop_map(|(m, fam)| match fam {
                0 => equispaced_nodes(m).unwrap(),
                1 => chebyshev_nodes(m + 1).unwrap(),
                _ => lobatto_nodes(m).unwrap(),
            })
        }

        proptest! {
            #[test]
            fn partition_of_unity(nodal in any_nodal(), x in -1.0f64..=1.0) {
                let sum: f64 = (0..nodal.len()).map(|q| lagrange_eval(&nodal, q, x)).sum();
                prop_assert!((sum - 1.0).abs() < 1e-12);
                let dsum: f64 = (0..nodal.len()).map(|q| lagrange_deriv(&nodal, q, x)).sum();
                prop_assert!(dsum.abs() < 1e-9);
            }

            #[test]
            fn shape_partition_of_unity(n in 2usize..=9, x in -1.0f64..=1.0, y in -1.0f64..=1.0) {
                let spec = ElementSpec::spectral(n).unwrap();
                let sum: f64 = (0..spec.nodes_per_element()).map(|q| shape2d(&spec, q, (x, y)).value).sum();
                prop_assert!((sum - 1.0).abs() < 1e-12);
            }

            #[test]
            fn symmetric_nodes_and_weights(m in 1usize..=20) {
                for nodal in [lobatto_nodes(m).unwrap(), chebyshev_nodes(m + 1).unwrap()] {
                    let c = nodal.coords();
                    for i in 0..c.len() {
                        prop_assert!((c[i] + c[c.len() - 1 - i]).abs() < 1e-12);
                    }
                }
                let w = gll_quadrature(m).unwrap().weights().to_vec();
                for i in 0..w.len() {
                    prop_assert!((w[i] - w[w.len() - 1 - i]).abs() < 1e-12);
                    prop_assert!(w[i] > 0.0);
                }
                prop_assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
            }
        }
    }
}
