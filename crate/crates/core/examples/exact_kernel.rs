//! Exact exponent vectors and matrices: products, inverses, the division
//! order and minimal elements.

use monores::kernel::{div_le, minimal_elements, ExponentMatrix, ExponentVector};

fn main() -> monores::Result<()> {
    let c = ExponentMatrix::parse(&["E2", "E∞1"], &["E1", "E∞1"], &[&["-2", "0"], &["1", "1/2"]])?;
    let inv = c.inverse()?;
    println!("C =\n{c}");
    println!("C⁻¹ =\n{inv}");
    println!("C⁻¹ C is the identity: {}", inv.mul(&c)?.is_identity());

    let lambda = ExponentVector::parse(&["E2", "E∞1"], &["1", "4"])?;
    println!("λ = {lambda}, λC = {}", lambda.apply(&c)?);

    let points = [
        ExponentVector::parse(&["z1", "z2"], &["2", "1"])?,
        ExponentVector::parse(&["z1", "z2"], &["0", "2"])?,
        ExponentVector::parse(&["z1", "z2"], &["3", "5/2"])?,
    ];
    println!("(2,1) ≤ (3,5/2): {}", div_le(&points[0], &points[2])?);
    for v in minimal_elements(&points)? {
        println!("minimal: {v}");
    }
    Ok(())
}
