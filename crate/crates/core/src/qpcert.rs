//! Quadratic programs whose minima certify asymptotic ratios of three-candidate
//! mechanisms, over the fractions `x_1..x_12` of voters of each type.
//!
//! For a mechanism `J` with limit lottery `p(x)` and limit welfare `w(x)`,
//! `ratio(J) >= r` holds iff `sum_j p_j w_j - r w_A >= 0` on the simplex.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::limits::{game_entry, limit_lottery, limit_welfare};
use crate::mechanism::MechanismSpec;
use crate::qp::{minimize_qp, LinearConstraint, QpCertificate, QuadraticProgram};
use crate::quasi::{enumerate_type_profiles, TypeProfile, TypeSpace};
use crate::rational::{self, Rational};

const M: usize = 3;

/// Rows indexed by candidate, columns by type.
type Table = Vec<Vec<Rational>>;

/// Per-type limit election probabilities and welfare indicators:
/// `p[j][t]` and `w[j][t]` for candidate `j` and type `t`.
fn per_type(spec: &MechanismSpec) -> Result<(Table, Table)> {
    let d = TypeSpace::get(M)?.len();
    let mut p = vec![vec![Rational::zero(); d]; M];
    let mut w = vec![vec![Rational::zero(); d]; M];
    for t in 0..d {
        let unit = TypeProfile::unit(M, t)?.to_fractions();
        let lot = limit_lottery(spec, &unit)?;
        let wel = limit_welfare(&unit)?;
        for j in 0..M {
            p[j][t] = lot.prob(j).clone();
            w[j][t] = wel[j].clone();
        }
    }
    Ok((p, w))
}

fn simplex_row(d: usize) -> LinearConstraint {
    LinearConstraint::new(vec![Rational::one(); d], Rational::one())
}

/// `w_A - w_B >= 0` and `w_A - w_C >= 0`.
fn reference_rows(w: &[Vec<Rational>]) -> Vec<LinearConstraint> {
    (1..M)
        .map(|j| LinearConstraint::new(w[0].iter().zip(&w[j]).map(|(a, b)| a - b).collect(), Rational::zero()))
        .collect()
}

/// `sum_j (p_j + const_j) w_j - r w_A` with `p = sum_t x_t p[.][t]`.
fn objective(
    p: &[Vec<Rational>],
    w: &[Vec<Rational>],
    constant_lottery: Option<&[Rational]>,
    r: &Rational,
) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let d = p[0].len();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut quad = vec![vec![Rational::zero(); d]; d];
    for j in 0..M {
        for s in 0..d {
            for t in 0..d {
                let v = &p[j][s] * &w[j][t];
                if v.is_zero() {
                    continue;
                }
                let h = &v * &half;
                quad[s][t] += &h;
                quad[t][s] += h;
            }
        }
    }
    let mut lin: Vec<Rational> = w[0].iter().map(|v| -(v * r)).collect();
    if let Some(q) = constant_lottery {
        for j in 0..M {
            for t in 0..d {
                lin[t] += &q[j] * &w[j][t];
            }
        }
    }
    (quad, lin)
}

/// Program for any fraction-safe mechanism on three candidates.
pub fn build_ratio_qp(spec: &MechanismSpec, r: &Rational, reference_max: bool) -> Result<QuadraticProgram> {
    if spec.has_duple() {
        return invalid("duple components depend on majority outcomes; use the case programs");
    }
    let (p, w) = per_type(spec)?;
    let (quad, lin) = objective(&p, &w, None, r);
    let d = lin.len();
    let ineq = if reference_max { reference_rows(&w) } else { Vec::new() };
    QuadraticProgram::new(quad, lin, Rational::zero(), vec![simplex_row(d)], ineq)
}

/// `c_1 U1 + c_2 U2 + c_3 U3`.
pub fn unilateral_mixture(c: &[Rational; 3]) -> Result<MechanismSpec> {
    MechanismSpec::mixture(
        (1..=3)
            .zip(c)
            .map(|(q, w)| (w.clone(), MechanismSpec::Unilateral(q)))
            .collect(),
    )
}

pub fn build_ordinal_ratio_qp(c: &[Rational; 3], r: &Rational, reference_max: bool) -> Result<QuadraticProgram> {
    build_ratio_qp(&unilateral_mixture(c)?, r, reference_max)
}

pub fn build_quadratic_lottery_qp(
    q_weight: &Rational,
    rf_weight: &Rational,
    r: &Rational,
    reference_max: bool,
) -> Result<QuadraticProgram> {
    let spec = MechanismSpec::mixture(vec![
        (q_weight.clone(), MechanismSpec::QuadraticLottery),
        (rf_weight.clone(), MechanismSpec::RandomFavorite),
    ])?;
    build_ratio_qp(&spec, r, reference_max)
}

/// Result of one pairwise majority vote.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    FirstWins,
    SecondWins,
    Tie,
}

/// The pairs in the order `(A,B)`, `(A,C)`, `(B,C)`.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajorityCase {
    pub outcomes: [Outcome; 3],
    /// Random-majority's election probabilities in this case.
    #[serde(with = "rational::vec_as_str")]
    pub q: Vec<Rational>,
}

impl MajorityCase {
    /// Each pair is drawn with probability 1/3; its winner takes it, a tie
    /// splits it.
    pub fn new(outcomes: [Outcome; 3]) -> Self {
        let third = Rational::new(BigInt::one(), BigInt::from(3));
        let sixth = Rational::new(BigInt::one(), BigInt::from(6));
        let mut q = vec![Rational::zero(); M];
        for (&(a, b), o) in PAIRS.iter().zip(outcomes) {
            match o {
                Outcome::FirstWins => q[a] += &third,
                Outcome::SecondWins => q[b] += &third,
                Outcome::Tie => {
                    q[a] += &sixth;
                    q[b] += &sixth;
                }
            }
        }
        Self { outcomes, q }
    }

    pub fn all() -> Vec<MajorityCase> {
        let os = [Outcome::FirstWins, Outcome::SecondWins, Outcome::Tie];
        let mut out = Vec::with_capacity(27);
        for &x in &os {
            for &y in &os {
                for &z in &os {
                    out.push(Self::new([x, y, z]));
                }
            }
        }
        out
    }

    /// The case a counted type profile falls in.
    pub fn of(tp: &TypeProfile) -> Result<MajorityCase> {
        let total: Rational = tp.weights().iter().sum();
        let half = total / Rational::from_integer(BigInt::from(2));
        let prefs = preference_forms()?;
        let mut outcomes = [Outcome::Tie; 3];
        for (o, form) in outcomes.iter_mut().zip(&prefs) {
            let v: Rational = form.iter().zip(tp.weights()).map(|(a, b)| a * b).sum();
            *o = match v.cmp(&half) {
                std::cmp::Ordering::Greater => Outcome::FirstWins,
                std::cmp::Ordering::Less => Outcome::SecondWins,
                std::cmp::Ordering::Equal => Outcome::Tie,
            };
        }
        Ok(Self::new(outcomes))
    }
}

/// For each pair `(a, b)`: the indicator over types of "a ranked above b".
pub fn preference_forms() -> Result<Vec<Vec<Rational>>> {
    let ts = TypeSpace::get(M)?;
    Ok(PAIRS
        .iter()
        .map(|&(a, b)| {
            ts.types()
                .iter()
                .map(|t| {
                    let td = t.top_down();
                    let pa = td.iter().position(|&c| c == a).expect("candidate present");
                    let pb = td.iter().position(|&c| c == b).expect("candidate present");
                    if pa < pb {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect())
}

/// One program per majority outcome for `c_1 U1 + c_2 U2 + c_3 U3 + d RM`;
/// strict majorities are relaxed to weak inequalities.
pub fn build_majority_case_qps(
    c: &[Rational; 3],
    d: &Rational,
    r: &Rational,
) -> Result<Vec<(MajorityCase, QuadraticProgram)>> {
    let total: Rational = c.iter().sum::<Rational>() + d;
    if c.iter().chain([d]).any(|v| v.is_negative()) || total != Rational::one() {
        return invalid("weights must be a distribution");
    }
    let mut p = vec![vec![Rational::zero(); TypeSpace::get(M)?.len()]; M];
    let mut w = Vec::new();
    for (q, cq) in (1..=3).zip(c) {
        let (pq, wq) = per_type(&MechanismSpec::Unilateral(q))?;
        for j in 0..M {
            for (t, v) in pq[j].iter().enumerate() {
                p[j][t] += cq * v;
            }
        }
        w = wq;
    }
    let forms = preference_forms()?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let dim = w[0].len();
    let mut out = Vec::with_capacity(27);
    for case in MajorityCase::all() {
        let dq: Vec<Rational> = case.q.iter().map(|v| v * d).collect();
        let (quad, lin) = objective(&p, &w, Some(&dq), r);
        let mut eqs = vec![simplex_row(dim)];
        let mut ineqs = Vec::new();
        for (o, form) in case.outcomes.iter().zip(&forms) {
            match o {
                Outcome::FirstWins => ineqs.push(LinearConstraint::new(form.clone(), half.clone())),
                Outcome::SecondWins => {
                    ineqs.push(LinearConstraint::new(form.iter().map(|v| -v).collect(), -half.clone()))
                }
                Outcome::Tie => eqs.push(LinearConstraint::new(form.clone(), half.clone())),
            }
        }
        out.push((case, QuadraticProgram::new(quad, lin, Rational::zero(), eqs, ineqs)?));
    }
    Ok(out)
}

/// Minimum over all 27 case programs.
pub fn certify_majority_cases(
    c: &[Rational; 3],
    d: &Rational,
    r: &Rational,
) -> Result<Vec<(MajorityCase, Option<QpCertificate>)>> {
    build_majority_case_qps(c, d, r)?
        .into_iter()
        .map(|(case, qp)| match minimize_qp(&qp) {
            Ok(cert) => Ok((case, Some(cert))),
            Err(Error::Infeasible) => Ok((case, None)),
            Err(e) => Err(e),
        })
        .collect()
}

/// A bracket `[lo, hi]` with `hi - lo <= tol` such that the mechanism's
/// asymptotic ratio is at least `lo` and below `hi`. Lower ends are certified
/// by the plain program, upper ends by the program restricted to profiles
/// where candidate A is optimal.
pub fn bracket_asymptotic_ratio(
    spec: &MechanismSpec,
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<(Rational, Rational)> {
    if lo >= hi || !tol.is_positive() {
        return Err(Error::InvalidBracket("need lo < hi and a positive tolerance".into()));
    }
    if !lower_holds(spec, lo)? {
        return Err(Error::InvalidBracket(format!(
            "program at lo = {lo} has a negative minimum"
        )));
    }
    if !upper_holds(spec, hi)? {
        return Err(Error::InvalidBracket(format!(
            "program at hi = {hi} has a nonnegative minimum"
        )));
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let two = Rational::from_integer(BigInt::from(2));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if lower_holds(spec, &mid)? {
            lo = mid;
        } else if upper_holds(spec, &mid)? {
            hi = mid;
        } else {
            return Err(Error::InvalidBracket(format!("signs disagree at {mid}")));
        }
    }
    Ok((lo, hi))
}

/// `ratio >= r`, certified.
pub fn lower_holds(spec: &MechanismSpec, r: &Rational) -> Result<bool> {
    Ok(!minimize_qp(&build_ratio_qp(spec, r, false)?)?.min_value.is_negative())
}

/// `ratio < r`, witnessed by a profile where A is optimal.
pub fn upper_holds(spec: &MechanismSpec, r: &Rational) -> Result<bool> {
    Ok(minimize_qp(&build_ratio_qp(spec, r, true)?)?.min_value.is_negative())
}

/// `x < (sqrt(5) - 1) / 2`, exactly, for `x >= 0`.
pub fn below_golden_ratio(x: &Rational) -> bool {
    x * x + x - Rational::one() < Rational::zero()
}

/// Smallest game entry over all canonical type profiles with `n` voters.
pub fn min_entry_over_type_profiles(
    spec: &MechanismSpec,
    m: usize,
    n: u64,
    limit: u128,
) -> Result<(Rational, TypeProfile)> {
    let mut best: Option<(Rational, TypeProfile)> = None;
    for tp in enumerate_type_profiles(m, n, true, limit)? {
        let v = game_entry(spec, &tp)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, tp));
        }
    }
    best.ok_or_else(|| Error::InvalidInput("no type profiles".into()))
}

/// `v >= c * m^(-3/4)`, exactly, for nonnegative `v` and `c`.
pub fn meets_power_bound(v: &Rational, c: &Rational, m: u64) -> bool {
    let m3 = Rational::from_integer(BigInt::from(m).pow(3));
    let v2 = v * v;
    let c2 = c * c;
    &v2 * &v2 * m3 >= &c2 * &c2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::limit_lottery;
    use crate::rational::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn q_vectors() {
        let all = MajorityCase::all();
        assert_eq!(all.len(), 27);
        let ties = MajorityCase::new([Outcome::Tie; 3]);
        assert_eq!(ties.q, vec![frac(1, 3); 3]);
        let chain = MajorityCase::new([Outcome::FirstWins, Outcome::FirstWins, Outcome::FirstWins]);
        assert_eq!(chain.q, vec![frac(2, 3), frac(1, 3), int(0)]);
        let cycle = MajorityCase::new([Outcome::FirstWins, Outcome::SecondWins, Outcome::FirstWins]);
        assert_eq!(cycle.q, vec![frac(1, 3); 3]);
        for c in &all {
            assert_eq!(c.q.iter().sum::<Rational>(), int(1));
        }
    }

    #[test]
    fn q_vectors_match_random_majority() {
        // the case formula agrees with exact random-majority evaluation on every
        // counted type profile with up to four voters
        for n in 1..=4 {
            for tp in enumerate_type_profiles(3, n, false, 10_000).unwrap() {
                let case = MajorityCase::of(&tp).unwrap();
                let lot = limit_lottery(&MechanismSpec::RandomMajority, &tp).unwrap();
                assert_eq!(lot.probs(), case.q.as_slice(), "{}", tp.label());
            }
        }
    }

    #[test]
    fn preference_forms_match_displayed_examples() {
        let f = preference_forms().unwrap();
        let ones = |v: &Vec<Rational>| (0..12).filter(|&i| v[i].is_one()).map(|i| i + 1).collect::<Vec<_>>();
        // A over B: x1+x2+x3+x4+x9+x10; A over C: x1+..+x6
        assert_eq!(ones(&f[0]), vec![1, 2, 3, 4, 9, 10]);
        assert_eq!(ones(&f[1]), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(ones(&f[2]), vec![1, 2, 5, 6, 7, 8]);
    }

    #[test]
    fn objective_matches_entries_on_vertices() {
        // at a vertex x = e_t with A optimal, objective / w_A + r = game entry
        let spec = unilateral_mixture(&[frac(1, 2), frac(1, 3), frac(1, 6)]).unwrap();
        let r = frac(3, 5);
        let qp = build_ratio_qp(&spec, &r, false).unwrap();
        for t in 0..12 {
            let tp = TypeProfile::unit(3, t).unwrap();
            let w = limit_welfare(&tp).unwrap();
            if w[0].is_zero() {
                continue;
            }
            let mut x = vec![int(0); 12];
            x[t] = int(1);
            let v = qp.evaluate(&x);
            let g: Rational = limit_lottery(&spec, &tp)
                .unwrap()
                .probs()
                .iter()
                .zip(&w)
                .map(|(a, b)| a * b)
                .sum();
            assert_eq!(v, g - &r * &w[0]);
        }
    }

    #[test]
    fn random_candidate_and_favorite_signs() {
        let rc = [int(0), int(0), int(1)];
        let qp = build_ordinal_ratio_qp(&rc, &frac(1, 3), true).unwrap();
        assert!(!minimize_qp(&qp).unwrap().min_value.is_negative());
        let rf = [int(1), int(0), int(0)];
        let qp = build_ordinal_ratio_qp(&rf, &frac(51, 100), true).unwrap();
        let cert = minimize_qp(&qp).unwrap();
        assert!(cert.min_value.is_negative());
        assert!(qp.is_feasible(&cert.argmin));
    }

    #[test]
    fn random_candidate_brackets_one_third() {
        let spec = MechanismSpec::RandomCandidate;
        let (lo, hi) = bracket_asymptotic_ratio(&spec, &frac(1, 4), &frac(1, 2), &frac(1, 100)).unwrap();
        assert!(lo <= frac(1, 3) && frac(1, 3) < hi);
        assert!(bracket_asymptotic_ratio(&spec, &frac(1, 2), &frac(3, 4), &frac(1, 100)).is_err());
        assert!(bracket_asymptotic_ratio(&spec, &frac(1, 2), &frac(1, 4), &frac(1, 100)).is_err());
    }

    #[test]
    fn decreasing_in_r() {
        let c = [frac(1, 2), frac(1, 2), int(0)];
        let mins: Vec<Rational> = [frac(1, 2), frac(3, 5), frac(7, 10)]
            .iter()
            .map(|r| {
                minimize_qp(&build_ordinal_ratio_qp(&c, r, false).unwrap())
                    .unwrap()
                    .min_value
            })
            .collect();
        assert!(mins[0] > mins[1] && mins[1] > mins[2]);
    }

    #[test]
    fn golden_ratio_comparison() {
        assert!(below_golden_ratio(&frac(6180, 10000)));
        assert!(!below_golden_ratio(&frac(6181, 10000)));
    }

    #[test]
    fn power_bound() {
        // 0.37 * 3^(-3/4) = 0.162315...
        let c = frac(37, 100);
        assert!(meets_power_bound(&frac(162316, 1_000_000), &c, 3));
        assert!(!meets_power_bound(&frac(162315, 1_000_000), &c, 3));
    }

    #[test]
    fn grid_oracle_on_ordinal_program() {
        // every simplex grid point of resolution 1/20 with support at most 3,
        // and random grid points, stay at or above the certified minimum
        let qp = build_ordinal_ratio_qp(&[frac(1, 2), frac(1, 2), int(0)], &frac(3, 5), false).unwrap();
        let min = minimize_qp(&qp).unwrap().min_value;
        let k = 20i64;
        for a in 0..12 {
            for b in a + 1..12 {
                for c in b + 1..12 {
                    for i in 0..=k {
                        for j in 0..=(k - i) {
                            let mut x = vec![int(0); 12];
                            x[a] = frac(i, k);
                            x[b] = frac(j, k);
                            x[c] = frac(k - i - j, k);
                            assert!(qp.evaluate(&x) >= min);
                        }
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let mut counts = [0i64; 12];
            for _ in 0..k {
                counts[rng.gen_range(0..12)] += 1;
            }
            let x: Vec<Rational> = counts.iter().map(|&c| frac(c, k)).collect();
            assert!(qp.evaluate(&x) >= min);
        }
    }
}
