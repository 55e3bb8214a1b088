//! Extends a local standardization across a blown-up manifold and checks
//! realizability, the round trip through `restrict`, and the unit diagonal.

use std::collections::BTreeMap;
use std::sync::Arc;

use monores::blowup::{blow_up, BlowupCenter};
use monores::kernel::{CornerId, ExponentVector, Label, Rat};
use monores::manifold::MonomialManifold;
use monores::standardization::{
    extend, extend_with_unit_parameters, standardized_change, validate_realizable, LocalStandardization,
};

fn main() -> monores::Result<()> {
    let root = Arc::new(MonomialManifold::make_corner(3, ["E1", "E2", "E3"].map(Label::from))?);
    let c0 = CornerId::generated(0);
    let alpha = ExponentVector::parse(&["E1", "E2", "E3"], &["1", "2", "3"])?;
    let lambda = extend_with_unit_parameters(&root, &LocalStandardization::new(c0.clone(), alpha)?)?;
    let step = blow_up(&root, &BlowupCenter::new(&root, Label::from("E1"), Label::from("E2"), lambda)?)?;
    let m = &step.after;

    let p = m.corner_ids().next().expect("a corner").clone();
    let ip: Vec<&Label> = m.index_set(&p)?.iter().collect();
    let values: Vec<Rat> = (1..=ip.len() as i64).map(Rat::from_integer).collect();
    let local = LocalStandardization::new(p.clone(), ExponentVector::new(ip.into_iter().cloned().zip(values))?)?;
    let beta: BTreeMap<Label, Rat> = m
        .components()
        .iter()
        .filter(|l| !m.index_set(&p).unwrap().contains(*l))
        .map(|l| (l.clone(), Rat::new(5, 2).unwrap()))
        .collect();
    let global = extend(m, &local, &beta)?;
    for l in global.locals() {
        println!("α at {} = {}", l.corner(), l.alpha());
    }
    println!("realizable: {}", validate_realizable(m, &global));
    let again = extend(m, global.restrict(&p).expect("total"), &global.free_parameters(m, &p)?)?;
    println!("round trip exact: {}", again == global);
    for e in m.edges() {
        let a = standardized_change(m, &global, &e.from, &e.to)?;
        let diag: Vec<String> = e.shared.iter().map(|l| a.entry(l, l).to_string()).collect();
        println!("A^({}{}) shared diagonal: {}", e.from, e.to, diag.join(", "));
    }
    Ok(())
}
