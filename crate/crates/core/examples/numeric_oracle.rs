//! Evaluates every chart change and blow-up map of a star in floating point,
//! then shows that a corrupted edge is caught.

use monores::gps::SupportSet;
use monores::kernel::Rat;
use monores::mideal::PrincipalizeOptions;
use monores::pipeline::{numeric_oracle, reduce, ReductionProblem};

fn main() -> monores::Result<()> {
    let support = SupportSet::parse(&["z1", "z2"], &[&["2", "1"], &["0", "2"], &["5/2", "0"]])?;
    let report = reduce(&ReductionProblem::new(support, 0)?, &PrincipalizeOptions::default())?;
    let star = report.star();
    println!("age {}: max relative error {:e}", star.age(), numeric_oracle(star, 100, 42)?);

    let e = star.end().edges().next().expect("an edge");
    let (row, col) = (&e.forward.row_labels()[0], &e.forward.col_labels()[0]);
    let bumped = e.forward.entry(row, col) * &Rat::new(3, 4)?;
    let corrupt = star.end().replace_edge_matrix(&e.from, &e.to, e.forward.with_entry(row, col, bumped)?)?;
    let err = numeric_oracle(&star.with_end(corrupt)?, 100, 42)?;
    println!("with a corrupted edge: max relative error {err:e}");
    Ok(())
}
