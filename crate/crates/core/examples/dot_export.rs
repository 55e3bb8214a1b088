//! DOT text for a manifold and for a two-step star.

use std::sync::Arc;

use monores::blowup::{BlowupCenter, Star};
use monores::kernel::{ExponentVector, Label};
use monores::manifold::MonomialManifold;
use monores::pipeline::{export_manifold_dot, export_star_dot};
use monores::standardization::{extend_with_unit_parameters, LocalStandardization};

fn unit(m: &MonomialManifold) -> monores::Result<monores::standardization::GlobalStandardization> {
    let p = m.corner_ids().next().expect("a corner").clone();
    let alpha = ExponentVector::ones(m.index_set(&p)?);
    extend_with_unit_parameters(m, &LocalStandardization::new(p, alpha)?)
}

fn main() -> monores::Result<()> {
    let root = Arc::new(MonomialManifold::make_corner(3, ["E1", "E2", "E3"].map(Label::from))?);
    let mut star = Star::new(Arc::clone(&root));
    star.blow_up(&BlowupCenter::new(&root, Label::from("E1"), Label::from("E2"), unit(&root)?)?)?;
    let m = Arc::clone(star.end());
    star.blow_up(&BlowupCenter::new(&m, Label::from("E3"), Label::exceptional(1), unit(&m)?)?)?;

    println!("{}", export_manifold_dot(star.end()));
    println!("{}", export_star_dot(&star));
    Ok(())
}
