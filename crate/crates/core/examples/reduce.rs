//! End-to-end reduction of a minimal support, with the centers seen as
//! products in a stratum of dimension 2.

use monores::gps::SupportSet;
use monores::mideal::PrincipalizeOptions;
use monores::pipeline::{reduce, ReductionProblem};

fn main() -> monores::Result<()> {
    let support = SupportSet::parse(&["z1", "z2", "z3"], &[&["1", "0", "0"], &["0", "1", "1"]])?;
    let report = reduce(&ReductionProblem::new(support, 2)?, &PrincipalizeOptions::default())?;
    for c in &report.centers {
        println!("step {}: center {{{}, {}}} as {}", c.step, c.pair.0, c.pair.1, c.annotation);
    }
    for fc in &report.final_corners {
        println!("{} {:?}: x^{}", fc.id, fc.index_set, fc.principal_exponent);
    }
    println!("age {}, new uncoupled centers for other pairs: {}", report.age(), report.new_uncoupled_other_pairs());
    Ok(())
}
