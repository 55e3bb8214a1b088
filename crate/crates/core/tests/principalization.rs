mod common;

use std::sync::Arc;

use common::*;
use monores::blowup::{blow_up, BlowupCenter};
use monores::kernel::Rat;
use monores::manifold::MonomialManifold;
use monores::mideal::{
    adapted_standardization, is_uncoupled_at, principalize, uncoupled_centers, MFunction, MIdeal, PrincipalizeOptions,
};
use proptest::prelude::*;
use rand::Rng;

fn witness_independent(m: &MonomialManifold, lambda: &MFunction, mu: &MFunction) -> bool {
    m.codim2_centers().iter().all(|c| {
        let verdicts: Vec<bool> = m
            .corners_on_center(c)
            .into_iter()
            .map(|p| is_uncoupled_at(lambda, mu, p, c).unwrap())
            .collect();
        verdicts.windows(2).all(|w| w[0] == w[1])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adapted_blow_up_removes_exactly_its_center(seed in any::<u64>(), n in 2usize..=4, steps in 0usize..=2) {
        let mut r = rng(seed);
        let star = tower(&mut r, n, steps);
        let (a, b) = uncoupled_pair(&mut r, n);
        let (lambda, mu) = (pulled_up(&star, &a), pulled_up(&star, &b));
        let m = Arc::clone(star.end());
        prop_assert!(witness_independent(&m, &lambda, &mu));
        let omega = uncoupled_centers(&lambda, &mu, &m).unwrap();
        if omega.is_empty() {
            return Ok(());
        }
        let all: Vec<_> = omega.iter().cloned().collect();
        let center = all[r.gen_range(0..all.len())].clone();
        let std = adapted_standardization(&m, &lambda, &mu, &center).unwrap();
        for p in m.corners_on_center(&center) {
            let (l, u, alpha) = (lambda.at(p).unwrap(), mu.at(p).unwrap(), std.alpha(p).unwrap());
            let (i, j) = &center;
            let defect = &alpha[j] * (&l[i] - &u[i]) + &alpha[i] * (&l[j] - &u[j]);
            prop_assert_eq!(defect, Rat::zero());
        }

        let step = blow_up(&m, &BlowupCenter::new(&m, center.0.clone(), center.1.clone(), std).unwrap()).unwrap();
        let (l2, u2) = (lambda.pullback(&step).unwrap(), mu.pullback(&step).unwrap());
        let after = &step.after;
        prop_assert!(l2.is_consistent(after) && u2.is_consistent(after));
        prop_assert!(witness_independent(after, &l2, &u2));
        for p in after.corner_ids().filter(|p| step.is_exceptional(p)) {
            prop_assert_eq!(&l2.at(p).unwrap()[&step.new_label], &u2.at(p).unwrap()[&step.new_label]);
        }
        prop_assert!(!after.codim2_centers().contains(&center));
        let omega2 = uncoupled_centers(&l2, &u2, after).unwrap();
        let mut expected = omega.clone();
        expected.remove(&center);
        prop_assert_eq!(omega2, expected);
    }

    #[test]
    fn random_ideals_become_principal(seed in any::<u64>(), n in 2usize..=3, t in 2usize..=4) {
        let mut r = rng(seed);
        let root = root(n);
        let c0 = root.corner_ids().next().unwrap().clone();
        let ls = labels(n);
        let exps: Vec<_> = (0..t).map(|_| vector(&mut r, &ls, false)).collect();
        let ideal = MIdeal::from_corner(&root, &c0, exps).unwrap();
        let run = principalize(Arc::clone(&root), ideal, &PrincipalizeOptions::default()).unwrap();
        let end = run.star.end();
        prop_assert!(run.ideal.is_locally_principal());
        prop_assert!(run.ideal.generators().iter().all(|g| g.is_consistent(end)));
        prop_assert!(run.records.iter().all(|s| s.inv_after + 1 == s.inv_before));
        let summed: usize = run.pair_invariants.iter().map(|(_, inv)| inv).sum();
        prop_assert_eq!(summed, run.star.age());
        let again = principalize(Arc::clone(end), run.ideal.clone(), &PrincipalizeOptions::default()).unwrap();
        prop_assert_eq!(again.star.age(), 0);
    }
}
