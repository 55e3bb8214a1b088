//! Minimal supports of finite generalized series: complexity, projection,
//! rescaling and pullback by a monomial map.

use std::collections::{BTreeMap, BTreeSet};

use monores::gps::{minimal_support, project_support, pullback_support, rescale_support, FiniteSeries, SupportSet};
use monores::kernel::{ExponentMatrix, ExponentVector, Label};

fn main() -> monores::Result<()> {
    let support = SupportSet::parse(&["z1", "z2"], &[&["2", "1"], &["0", "2"], &["3", "3/2"]])?;
    let units: BTreeMap<ExponentVector, f64> = support.points().iter().map(|p| (p.clone(), 1.0)).collect();
    let series = FiniteSeries::new(support.clone()).with_unit_values(units)?;
    println!("m(f) = {}, monomial type: {}", series.monomial_complexity()?, series.is_monomial_type()?);
    for p in minimal_support(&support).points() {
        println!("  minimal point {p} with unit {}", series.unit_tag(p).unwrap_or("?"));
    }

    let keep = BTreeSet::from([Label::from("z2")]);
    let projected = project_support(&support, &keep)?;
    println!("projected to z2: {} minimal point(s)", minimal_support(&projected).len());

    let gamma = ExponentVector::parse(&["z1", "z2"], &["1/2", "3"])?;
    let rescaled = rescale_support(&support, &gamma)?;
    println!("rescaled by {gamma}: {:?}", rescaled.points().iter().map(|p| p.to_string()).collect::<Vec<_>>());

    // One chart of the blow-up of {z1, z2} with weights (2, 1).
    let b = ExponentMatrix::parse(&["z1", "z2"], &["z2", "E∞1"], &[&["0", "1"], &["1", "2"]])?;
    let pulled = pullback_support(&support, &b, true)?;
    println!("after pullback: {} minimal point(s)", pulled.len());
    for p in pulled.points() {
        println!("  {p}");
    }

    let point: BTreeMap<Label, f64> = [(Label::from("z1"), 0.5), (Label::from("z2"), 0.25)].into();
    println!("f(0.5, 0.25) with unit values 1: {:?}", series.sample(&point));
    Ok(())
}
