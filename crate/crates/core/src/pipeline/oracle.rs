//! Floating-point evaluation of the monomial maps of a star, used as an
//! independent check that the exact data describe commuting diagrams.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::{compose_star, Star};
use crate::error::Result;
use crate::kernel::{CornerId, ExponentMatrix, Label};

type LogPoint = BTreeMap<Label, f64>;

/// Smallest sample coordinate; keeps `x^λ` away from underflow.
const LOWER: f64 = 1.0 / 16.0;

/// `log y_r = Σ_c M(r, c) log x_c`, i.e. `y_r = Π_c x_c^{M(r,c)}`.
fn transport(m: &ExponentMatrix, x: &LogPoint) -> LogPoint {
    let mut y: LogPoint = m.row_labels().iter().map(|r| (r.clone(), 0.0)).collect();
    for (r, c, v) in m.entries() {
        if !v.is_zero() {
            *y.get_mut(r).expect("row label") += v.to_f64() * x[c];
        }
    }
    y
}

/// Worst relative discrepancy between two log-coordinate points.
fn discrepancy(a: &LogPoint, b: &LogPoint) -> f64 {
    a.iter()
        .map(|(l, x)| match b.get(l) {
            Some(y) => (x - y).abs().exp_m1(),
            None => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn sample(rng: &mut ChaCha8Rng, labels: &[Label]) -> LogPoint {
    labels
        .iter()
        .map(|l| (l.clone(), rng.gen_range(LOWER..=1.0f64).ln()))
        .collect()
}

/// Per-sample checks, each on a fresh random point:
///
/// * each step: going `p' → q'` upstairs and then down equals going down and
///   then `p → q`;
/// * each end corner: the composite matrix agrees with the stepwise maps;
/// * each end edge: both routes down to the root agree with the root's chart
///   change.
///
/// Returns the maximum relative error seen; not finite when the data do not
/// even line up.
pub fn numeric_oracle(star: &Star, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let end = star.end();
    let root = star.root();

    let mut step_edges = Vec::new();
    for step in star.steps() {
        for e in step.after.edges() {
            let (p, q) = (step.parent(&e.from)?, step.parent(&e.to)?);
            let below = if p == q {
                ExponentMatrix::identity(step.before.index_set(p)?)
            } else {
                step.before.change_matrix(p, q)?
            };
            step_edges.push((
                e.forward.col_labels().to_vec(),
                e.forward.clone(),
                step.morphism(&e.from)?.clone(),
                step.morphism(&e.to)?.clone(),
                below,
            ));
        }
    }

    let mut composites: BTreeMap<&CornerId, (Vec<CornerId>, ExponentMatrix)> = BTreeMap::new();
    for p in end.corner_ids() {
        composites.insert(p, (star.lineage(p)?, compose_star(star, p)?));
    }
    let mut end_edges = Vec::new();
    for e in end.edges() {
        let (p0, q0) = (&composites[&e.from].0[0], &composites[&e.to].0[0]);
        let below = if p0 == q0 {
            ExponentMatrix::identity(root.index_set(p0)?)
        } else {
            root.change_matrix(p0, q0)?
        };
        end_edges.push((e.from.clone(), e.to.clone(), e.forward.clone(), below));
    }

    let mut worst = 0.0f64;
    for _ in 0..samples {
        for (labels, upstairs, b_from, b_to, below) in &step_edges {
            let x = sample(&mut rng, labels);
            let via_up = transport(b_to, &transport(upstairs, &x));
            let via_down = transport(below, &transport(b_from, &x));
            worst = worst.max(discrepancy(&via_up, &via_down));
        }
        for (p, (lineage, composite)) in &composites {
            let x = sample(&mut rng, composite.col_labels());
            let mut stepwise = x.clone();
            for (step, c) in star.steps().iter().zip(&lineage[1..]).rev() {
                stepwise = transport(step.morphism(c)?, &stepwise);
            }
            debug_assert_eq!(lineage.last(), Some(*p));
            worst = worst.max(discrepancy(&transport(composite, &x), &stepwise));
        }
        for (p, q, upstairs, below) in &end_edges {
            let x = sample(&mut rng, upstairs.col_labels());
            let via_up = transport(&composites[q].1, &transport(upstairs, &x));
            let via_down = transport(below, &transport(&composites[p].1, &x));
            worst = worst.max(discrepancy(&via_up, &via_down));
        }
    }
    Ok(worst)
}
