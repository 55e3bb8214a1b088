mod common;

use std::collections::BTreeSet;

use common::*;
use monores::blowup::compose_star;
use monores::gps::{minimal_support, pullback_support, SupportSet};
use monores::kernel::ExponentVector;
use monores::mideal::PrincipalizeOptions;
use monores::pipeline::{
    build_ideal_from_support, export_manifold_dot, export_star_dot, numeric_oracle, reduce, reduce_batch, replay,
    ReductionProblem, TraceJson,
};
use proptest::prelude::*;

fn problem(seed: u64) -> ReductionProblem {
    let mut rng = rng(seed);
    ReductionProblem::new(support(&mut rng, 5, 3), 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_is_coherent_and_replayable(seed in any::<u64>()) {
        let problem = problem(seed);
        let report = reduce(&problem, &PrincipalizeOptions::default()).unwrap();
        let star = report.star();
        let delta0 = minimal_support(problem.support());

        let expected: usize = report.run.pair_invariants.iter().map(|(_, inv)| inv).sum();
        prop_assert_eq!(report.age(), expected);

        let mut ideal = build_ideal_from_support(&delta0, star.root()).unwrap();
        for step in star.steps() {
            ideal = ideal.pullback(step).unwrap();
        }
        for fc in &report.final_corners {
            let pulled = pullback_support(&delta0, &compose_star(star, &fc.id).unwrap(), true).unwrap();
            prop_assert_eq!(pulled.points().iter().collect::<Vec<_>>(), vec![&fc.principal_exponent]);
            let stepwise: BTreeSet<ExponentVector> = ideal.local_min_data(&fc.id).unwrap().into_iter().collect();
            prop_assert_eq!(&stepwise, pulled.points());
        }

        let text = TraceJson::from_reduction(&report).unwrap().to_canonical_string().unwrap();
        let rerun = reduce(&problem, &PrincipalizeOptions::default()).unwrap();
        prop_assert_eq!(&TraceJson::from_reduction(&rerun).unwrap().to_canonical_string().unwrap(), &text);
        let outcome = replay(&TraceJson::from_json_str(&text).unwrap()).unwrap();
        prop_assert!(outcome.star.end().validate().is_empty());
        prop_assert!(outcome.star.end().is_isomorphic_to(star.end()));
    }
}

#[test]
fn non_minimal_points_do_not_change_the_result() {
    let tight = SupportSet::parse(&["z1", "z2"], &[&["2", "1"], &["0", "2"]]).unwrap();
    let loose = SupportSet::parse(&["z1", "z2"], &[&["2", "1"], &["0", "2"], &["3", "1"], &["1", "5/2"]]).unwrap();
    let a = reduce(&ReductionProblem::new(tight, 0).unwrap(), &PrincipalizeOptions::default()).unwrap();
    let b = reduce(&ReductionProblem::new(loose, 0).unwrap(), &PrincipalizeOptions::default()).unwrap();
    assert_eq!(a.final_corners, b.final_corners);
}

#[test]
fn batch_matches_sequential() {
    let problems: Vec<ReductionProblem> = (0..12).map(problem).collect();
    let batch = reduce_batch(&problems, &PrincipalizeOptions::default());
    for (p, r) in problems.iter().zip(batch) {
        let seq = reduce(p, &PrincipalizeOptions::default()).unwrap();
        assert_eq!(r.unwrap().final_corners, seq.final_corners);
    }
}

#[test]
fn dot_counts_match_the_manifolds() {
    let mut rng = rng(17);
    let star = tower(&mut rng, 3, 2);
    assert_eq!(star.age(), 2);
    let dot = export_star_dot(&star);
    let stages = stages(&star);
    let nodes: usize = stages.iter().map(|m| m.corner_count()).sum();
    let edges: usize = stages.iter().map(|m| m.edge_count()).sum();
    assert_eq!(dot.matches("[label=\"c").count(), nodes);
    assert_eq!(dot.matches(" -- ").count(), edges);
    assert_eq!(dot.matches("subgraph cluster_").count(), 3);

    let end = export_manifold_dot(star.end());
    assert_eq!(end.matches(" -- ").count(), star.end().edge_count());
}

#[test]
fn oracle_is_deterministic_and_zero_on_the_empty_star() {
    let report = reduce(&problem(5), &PrincipalizeOptions::default()).unwrap();
    let a = numeric_oracle(report.star(), 50, 9).unwrap();
    assert_eq!(a, numeric_oracle(report.star(), 50, 9).unwrap());
    assert!(a < 1e-9);
    let empty = monores::blowup::Star::new(root(3));
    assert_eq!(numeric_oracle(&empty, 10, 1).unwrap(), 0.0);
}
