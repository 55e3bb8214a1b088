//! Writes a reduction trace, reads it back and replays it.

use monores::gps::SupportSet;
use monores::mideal::PrincipalizeOptions;
use monores::pipeline::{reduce, replay, ReductionProblem, TraceJson};

fn main() -> monores::Result<()> {
    let support = SupportSet::parse(&["z1", "z2"], &[&["2", "1"], &["0", "2"]])?;
    let report = reduce(&ReductionProblem::new(support, 0)?, &PrincipalizeOptions::default())?;
    let text = TraceJson::from_reduction(&report)?.to_canonical_string()?;
    print!("{text}");

    let again = TraceJson::from_reduction(&reduce(&report.problem, &PrincipalizeOptions::default())?)?;
    println!("byte-identical on rerun: {}", again.to_canonical_string()? == text);

    let outcome = replay(&TraceJson::from_json_str(&text)?)?;
    println!(
        "replayed {} step(s); end isomorphic to the original: {}",
        outcome.star.age(),
        outcome.star.end().is_isomorphic_to(report.star().end())
    );
    Ok(())
}
