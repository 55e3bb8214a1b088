//! Principalizes a three-generator ideal in three variables and prints the
//! per-step invariant records.

use std::sync::Arc;

use monores::kernel::{CornerId, ExponentVector, Label};
use monores::manifold::MonomialManifold;
use monores::mideal::{principalize, MIdeal, PrincipalizeOptions};

fn main() -> monores::Result<()> {
    let labels = ["E1", "E2", "E3"];
    let root = Arc::new(MonomialManifold::make_corner(3, labels.map(Label::from))?);
    let generators = [["3", "0", "1"], ["0", "2", "0"], ["1", "1", "1/2"]]
        .iter()
        .map(|v| ExponentVector::parse(&labels, v))
        .collect::<monores::Result<Vec<_>>>()?;
    let ideal = MIdeal::from_corner(&root, &CornerId::generated(0), generators)?;
    let run = principalize(root, ideal, &PrincipalizeOptions::default())?;

    for ((a, b), inv) in &run.pair_invariants {
        println!("pair ({a}, {b}) started with Inv = {inv}");
    }
    for (k, r) in run.records.iter().enumerate() {
        println!(
            "step {}: center {{{}, {}}} for pair {:?}, Inv {} → {}, new elsewhere {}",
            k + 1,
            r.center.0,
            r.center.1,
            r.pair,
            r.inv_before,
            r.inv_after,
            r.new_uncoupled_other_pairs
        );
    }
    println!(
        "age {}, {} corners, principal: {}",
        run.star.age(),
        run.star.end().corner_count(),
        run.ideal.is_locally_principal()
    );
    Ok(())
}
