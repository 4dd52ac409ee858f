//! Limits of mechanism performance on quasi-combinatorial profiles as the
//! grid gets finer, and the pessimization that reduces any grid profile to a
//! quasi-combinatorial one without improving the ratio.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::mechanism::{Ballots, Lottery, MechanismSpec};
use crate::profile::{Profile, Valuation};
use crate::quasi::{alternation_number, image_runs, TypeProfile, TypeSpace};
use crate::rational::{self, Rational};

/// One game entry with the quantities it is built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitEntry {
    pub type_profile: TypeProfile,
    /// Limit welfare per candidate in the profile's own mass units.
    #[serde(with = "rational::vec_as_str")]
    pub welfare: Vec<Rational>,
    pub lottery: Lottery,
    #[serde(with = "rational::as_str")]
    pub ratio: Rational,
}

/// Mass of the types that put each candidate in the high block.
pub fn limit_welfare(tp: &TypeProfile) -> Result<Vec<Rational>> {
    let ts = TypeSpace::get(tp.m())?;
    let mut w = vec![Rational::zero(); tp.m()];
    for (i, t) in ts.types().iter().enumerate() {
        let x = tp.weight(i);
        if x.is_zero() {
            continue;
        }
        for &c in t.high_block() {
            w[c] += &x;
        }
    }
    Ok(w)
}

/// Election probabilities in the limit of the realized profiles.
///
/// Duple components need counts; fraction profiles are rejected for them.
pub fn limit_lottery(spec: &MechanismSpec, tp: &TypeProfile) -> Result<Lottery> {
    if spec.has_duple() && !tp.is_counts() {
        return invalid("duple components need a type profile with integer counts");
    }
    let ballots = Ballots::from_type_profile(tp)?;
    Lottery::new(spec.eval_ballots(&ballots)?)
}

pub fn limit_entry(spec: &MechanismSpec, tp: &TypeProfile) -> Result<LimitEntry> {
    let welfare = limit_welfare(tp)?;
    let lottery = limit_lottery(spec, tp)?;
    let ratio = entry_ratio(&lottery, &welfare)?;
    Ok(LimitEntry {
        type_profile: tp.clone(),
        welfare,
        lottery,
        ratio,
    })
}

/// `sum_j p_j w_j / max_j w_j` in the limit.
pub fn game_entry(spec: &MechanismSpec, tp: &TypeProfile) -> Result<Rational> {
    let welfare = limit_welfare(tp)?;
    entry_ratio(&limit_lottery(spec, tp)?, &welfare)
}

fn entry_ratio(lottery: &Lottery, welfare: &[Rational]) -> Result<Rational> {
    let best = welfare.iter().max().cloned().unwrap_or_else(Rational::zero);
    if best.is_zero() {
        return invalid("type profile has no mass");
    }
    let num: Rational = lottery.probs().iter().zip(welfare).map(|(p, w)| p * w).sum();
    Ok(num / best)
}

/// Exact ratios on the realized profiles `(eta(t_i, k))_i` for each `k`.
pub fn entry_convergence(spec: &MechanismSpec, tp: &TypeProfile, ks: &[u64]) -> Result<Vec<Rational>> {
    ks.iter()
        .map(|&k| crate::mechanism::ratio_on_profile(spec, &tp.realize(k)?))
        .collect()
}

/// Expected welfare over the welfare of candidate 0.
pub fn fixed_reference_ratio(spec: &MechanismSpec, p: &Profile) -> Result<Rational> {
    let w = p.welfare();
    if w[0].is_zero() {
        return invalid("candidate 0 has zero welfare");
    }
    let lot = spec.eval(p)?;
    let num: Rational = lot.probs().iter().zip(&w).map(|(a, b)| a * b).sum();
    Ok(num / &w[0])
}

/// Slides interior value blocks to a neighbouring endpoint, one at a time,
/// always to the side where the fixed-reference ratio is not larger, until
/// every voter is quasi-combinatorial.
///
/// Ordinal mechanisms move whole runs of consecutive grid values; mixtures
/// with the quadratic lottery (three candidates) move the middle value only.
/// Ties go to the lower endpoint.
pub fn pessimize_profile(spec: &MechanismSpec, p: &Profile, k: u64) -> Result<Profile> {
    let single = spec.has_quadratic();
    if single && p.m() != 3 {
        return invalid("quadratic-lottery mixtures need three candidates");
    }
    for v in p.voters() {
        for x in v.values() {
            if !rational::on_grid(x, k) {
                return invalid(format!("value {x} is not on the 1/{k} grid"));
            }
        }
    }
    let mut current = p.clone();
    let mut g = fixed_reference_ratio(spec, &current)?;
    loop {
        let Some((i, (down, up))) = find_slide(&current, k)? else {
            return Ok(current);
        };
        let lo = current.with_voter(i, down)?;
        let hi = current.with_voter(i, up)?;
        let g_lo = fixed_reference_ratio(spec, &lo)?;
        let g_hi = fixed_reference_ratio(spec, &hi)?;
        let (next, g_next) = if g_lo <= g_hi { (lo, g_lo) } else { (hi, g_hi) };
        debug_assert!(g_next <= g, "slide increased the ratio");
        current = next;
        g = g_next;
    }
}

/// The first voter with an interior run and the two slid valuations.
fn find_slide(p: &Profile, k: u64) -> Result<Option<(usize, (Valuation, Valuation))>> {
    for (i, v) in p.voters().iter().enumerate() {
        if alternation_number(v, k)? <= 2 {
            continue;
        }
        let runs = image_runs(v, k)?;
        // runs[0] starts at 0 and the last run ends at k, so an interior run
        // has a neighbour on both sides
        let j = (1..runs.len() - 1)
            .next()
            .expect("alternation above 2 has an interior run");
        let (r, s) = runs[j];
        let below = runs[j - 1].1;
        let above = runs[j + 1].0;
        let down = shift_run(v, k, r, s, -((r - below - 1) as i64))?;
        let up = shift_run(v, k, r, s, (above - s - 1) as i64)?;
        return Ok(Some((i, (down, up))));
    }
    Ok(None)
}

fn shift_run(v: &Valuation, k: u64, r: u64, s: u64, by: i64) -> Result<Valuation> {
    let kk = BigInt::from(k);
    let values = v
        .values()
        .iter()
        .map(|x| {
            let idx = rational::grid_index(x, k)
                .and_then(|i| i.to_u64())
                .expect("grid checked");
            if (r..=s).contains(&idx) {
                Rational::new(BigInt::from(idx as i64 + by), kk.clone())
            } else {
                x.clone()
            }
        })
        .collect();
    Valuation::new(values)
}
