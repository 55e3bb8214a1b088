//! Seeded random instances shared by the property and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use monores::blowup::{BlowupCenter, Star};
use monores::gps::SupportSet;
use monores::kernel::{CornerId, ExponentVector, Label, Rat};
use monores::manifold::MonomialManifold;
use monores::mideal::MFunction;
use monores::standardization::{extend, GlobalStandardization, LocalStandardization};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(n: usize) -> Vec<Label> {
    (1..=n).map(|k| Label::new(format!("E{k}"))).collect()
}

pub fn root(n: usize) -> Arc<MonomialManifold> {
    Arc::new(MonomialManifold::make_corner(n, labels(n)).unwrap())
}

/// `a/b` with `0 ≤ a ≤ max_num` (or `1 ≤ a` when `positive`) and
/// `1 ≤ b ≤ max_den`.
pub fn rat(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64, positive: bool) -> Rat {
    let lo = if positive { 1 } else { 0 };
    Rat::new(rng.gen_range(lo..=max_num), rng.gen_range(1..=max_den)).unwrap()
}

pub fn vector(rng: &mut ChaCha8Rng, labels: &[Label], positive: bool) -> ExponentVector {
    ExponentVector::new(labels.iter().map(|l| (l.clone(), rat(rng, 10, 8, positive)))).unwrap()
}

/// A random realizable standardization: random positive α at a random
/// corner, random positive free parameters.
pub fn standardization(rng: &mut ChaCha8Rng, m: &MonomialManifold) -> GlobalStandardization {
    let ids: Vec<&CornerId> = m.corner_ids().collect();
    let p = (*ids.choose(rng).unwrap()).clone();
    let ip: Vec<Label> = m.index_set(&p).unwrap().iter().cloned().collect();
    let u = LocalStandardization::new(p, vector(rng, &ip, true)).unwrap();
    let beta: BTreeMap<Label, Rat> = m
        .components()
        .iter()
        .filter(|l| !ip.contains(l))
        .map(|l| (l.clone(), rat(rng, 10, 8, true)))
        .collect();
    extend(m, &u, &beta).unwrap()
}

/// A tower of `steps` blow-ups of the `n`-corner along random centers with
/// random standardizations.
pub fn tower(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> Star {
    let mut star = Star::new(root(n));
    for _ in 0..steps {
        let m = Arc::clone(star.end());
        let centers: Vec<_> = m.codim2_centers().into_iter().collect();
        let Some((i, j)) = centers.choose(rng).cloned() else {
            break;
        };
        let lambda = standardization(rng, &m);
        star.blow_up(&BlowupCenter::new(&m, i, j, lambda).unwrap()).unwrap();
    }
    star
}

/// Every manifold of a star, root first.
pub fn stages(star: &Star) -> Vec<Arc<MonomialManifold>> {
    std::iter::once(Arc::clone(star.root()))
        .chain(star.steps().iter().map(|s| Arc::clone(&s.after)))
        .collect()
}

/// Pulls a root exponent stepwise up to every corner of the end.
pub fn pulled_up(star: &Star, lambda: &ExponentVector) -> MFunction {
    let mut f = MFunction::from_corner(star.root(), &CornerId::generated(0), lambda.clone()).unwrap();
    for step in star.steps() {
        f = f.pullback(step).unwrap();
    }
    f
}

/// A random pair of root exponents uncoupled along at least one center.
pub fn uncoupled_pair(rng: &mut ChaCha8Rng, n: usize) -> (ExponentVector, ExponentVector) {
    let ls = labels(n);
    loop {
        let a = vector(rng, &ls, false);
        let b = vector(rng, &ls, false);
        let diffs: Vec<Rat> = ls.iter().map(|l| &a[l] - &b[l]).collect();
        if diffs.iter().any(Rat::is_positive) && diffs.iter().any(Rat::is_negative) {
            return (a, b);
        }
    }
}

/// A random support with `1..=max_points` points in `1..=max_vars`
/// variables named `z1, z2, …`.
pub fn support(rng: &mut ChaCha8Rng, max_points: usize, max_vars: usize) -> SupportSet {
    let e = rng.gen_range(1..=max_vars);
    let vars: Vec<Label> = (1..=e).map(|k| Label::new(format!("z{k}"))).collect();
    let t = rng.gen_range(1..=max_points);
    let points: Vec<ExponentVector> = (0..t).map(|_| vector(rng, &vars, false)).collect();
    SupportSet::new(vars, points).unwrap()
}
