//! The two-dimensional blow-up with weights (2, 1): morphism matrices,
//! pulled-back exponents and the exceptional edge.

use std::sync::Arc;

use monores::blowup::{blow_up, pullback_vector, BlowupCenter};
use monores::kernel::{CornerId, ExponentVector, Label};
use monores::manifold::MonomialManifold;
use monores::standardization::{extend_with_unit_parameters, LocalStandardization};

fn main() -> monores::Result<()> {
    let root = Arc::new(MonomialManifold::make_corner(2, [Label::from("E1"), Label::from("E2")])?);
    let c0 = CornerId::generated(0);
    let alpha = ExponentVector::parse(&["E1", "E2"], &["2", "1"])?;
    let lambda = extend_with_unit_parameters(&root, &LocalStandardization::new(c0.clone(), alpha)?)?;
    let center = BlowupCenter::new(&root, Label::from("E1"), Label::from("E2"), lambda)?;
    let step = blow_up(&root, &center)?;

    let f = ExponentVector::parse(&["E1", "E2"], &["2", "1"])?;
    let g = ExponentVector::parse(&["E1", "E2"], &["0", "2"])?;
    for c in step.after.corners() {
        println!("corner {} over {} with index set {:?}", c.id, step.parent(&c.id)?, c.index_set);
        println!("B =\n{}", step.morphism(&c.id)?);
        println!("f ↦ {}, g ↦ {}", pullback_vector(&f, &step, &c.id)?, pullback_vector(&g, &step, &c.id)?);
    }
    for e in step.after.edges() {
        println!("exceptional edge {} → {}:\n{}", e.from, e.to, e.forward);
    }
    println!("violations: {}", step.after.validate().len());
    Ok(())
}
