//! Interpolates the Runge function with each node family and prints the
//! maximum error on a dense probe grid.

use phonobands::basis::runge_study;

fn main() -> phonobands::Result<()> {
    let degree = std::env::args().nth(1).map_or(Ok(10), |s| s.parse()).unwrap_or(10);
    println!("{:<12} {:>6} {:>12}", "family", "degree", "max error");
    for row in runge_study(degree, 2001)? {
        println!("{:<12} {:>6} {:>12.4e}", row.family.to_string(), row.degree, row.max_error);
    }
    Ok(())
}
