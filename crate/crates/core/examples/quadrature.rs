//! Highest monomial degree integrated exactly by the Gauss-Lobatto and
//! Gauss-Legendre rules.

use phonobands::basis::{gauss_legendre_quadrature, gll_quadrature, monomial_exactness};

fn main() -> phonobands::Result<()> {
    println!("{:>6} {:>14} {:>16}", "points", "gauss-lobatto", "gauss-legendre");
    for points in 2..=10 {
        let gll = monomial_exactness(&gll_quadrature(points - 1)?, 1e-12);
        let gl = monomial_exactness(&gauss_legendre_quadrature(points)?, 1e-12);
        println!("{points:>6} {gll:>14} {gl:>16}");
    }
    Ok(())
}
