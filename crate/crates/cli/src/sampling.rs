//! Seeded simulation of a mechanism's random process, for comparison with its
//! exact lottery.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rvl_core::{MechanismSpec, Profile, Rational};

fn f64_of(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn pick_weighted<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

/// One draw of the elected candidate.
pub fn sample_outcome<R: Rng>(spec: &MechanismSpec, p: &Profile, rng: &mut R) -> usize {
    let (m, n) = (p.m(), p.n());
    match spec {
        MechanismSpec::Unilateral(q) => {
            let ranking = p.voter(rng.gen_range(0..n)).ranking();
            ranking[rng.gen_range(0..*q)]
        }
        MechanismSpec::RandomFavorite => p.voter(rng.gen_range(0..n)).ranking()[0],
        MechanismSpec::RandomCandidate => rng.gen_range(0..m),
        MechanismSpec::Duple(q) => duple_draw(p, *q, rng),
        MechanismSpec::RandomMajority => duple_draw(p, n as u64 / 2 + 1, rng),
        MechanismSpec::QuadraticLottery => {
            let u = p.voter(rng.gen_range(0..n));
            let r = u.ranking();
            let a = f64_of(u.value(r[1]));
            let w = [4.0 - a * a, 1.0 + 2.0 * a, 1.0 - 2.0 * a + a * a];
            r[pick_weighted(rng, &w)]
        }
        MechanismSpec::Mixture(terms) => {
            let w: Vec<f64> = terms.iter().map(|(w, _)| f64_of(w)).collect();
            sample_outcome(&terms[pick_weighted(rng, &w)].1, p, rng)
        }
        MechanismSpec::Symmetrized(inner) => {
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(rng);
            let c = sample_outcome(inner, &p.relabel(&perm), rng);
            perm.iter().position(|&x| x == c).expect("permutation")
        }
    }
}

fn duple_draw<R: Rng>(p: &Profile, q: u64, rng: &mut R) -> usize {
    let a = rng.gen_range(0..p.m());
    let mut b = rng.gen_range(0..p.m() - 1);
    if b >= a {
        b += 1;
    }
    let for_a = p.voters().iter().filter(|u| u.value(a) > u.value(b)).count() as u64;
    let for_b = p.n() as u64 - for_a;
    if for_a >= q {
        a
    } else if for_b >= q {
        b
    } else if rng.gen_bool(0.5) {
        a
    } else {
        b
    }
}

#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub counts: Vec<usize>,
    /// Largest `|frequency - p| / sigma` over candidates.
    pub max_z: f64,
}

/// Counts over `draws` samples and their worst deviation in standard
/// errors from the exact probabilities.
pub fn sample_check<R: Rng>(
    spec: &MechanismSpec,
    p: &Profile,
    exact: &[Rational],
    draws: usize,
    rng: &mut R,
) -> SampleCheck {
    let mut counts = vec![0usize; p.m()];
    for _ in 0..draws {
        counts[sample_outcome(spec, p, rng)] += 1;
    }
    let d = draws as f64;
    let max_z = counts
        .iter()
        .map(|&c| c as f64 / d)
        .zip(exact)
        .map(|(f, e)| {
            let e = f64_of(e);
            let sigma = (e * (1.0 - e) / d).sqrt();
            if sigma == 0.0 {
                if (f - e).abs() == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (f - e).abs() / sigma
            }
        })
        .fold(0.0, f64::max);
    SampleCheck { counts, max_z }
}
