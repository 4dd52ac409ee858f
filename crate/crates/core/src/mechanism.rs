//! Truthful voting mechanisms as exact lottery-valued functions.
//!
//! Lotteries are computed analytically; nothing here samples.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::profile::{Profile, Valuation};
use crate::quasi::{candidate_permutations, TypeProfile, TypeSpace};
use crate::rational::{self, RatStr, Rational};

/// A probability distribution over candidates `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lottery {
    probs: Vec<Rational>,
}

impl Lottery {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.iter().any(|p| p < &Rational::zero()) {
            return invalid("lottery entries must be nonnegative");
        }
        if probs.iter().sum::<Rational>() != Rational::one() {
            return invalid("lottery entries must sum to 1");
        }
        Ok(Self { probs })
    }

    pub fn uniform(m: usize) -> Self {
        let p = Rational::new(BigInt::one(), BigInt::from(m));
        Self { probs: vec![p; m] }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, candidate: usize) -> &Rational {
        &self.probs[candidate]
    }

    pub fn m(&self) -> usize {
        self.probs.len()
    }
}

impl Serialize for Lottery {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::vec_as_str::serialize(&self.probs, s)
    }
}

/// Anything that maps a profile to an election lottery.
pub trait Mechanism {
    fn lottery(&self, profile: &Profile) -> Result<Lottery>;
}

/// The mechanism families and their combinators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MechanismSpec {
    /// A uniform voter; a uniform candidate among that voter's top `q`.
    Unilateral(usize),
    /// A uniform pair; a candidate with at least `q` of the pairwise votes
    /// wins, otherwise a fair coin decides.
    Duple(u64),
    /// `Duple(floor(n/2) + 1)`.
    RandomMajority,
    /// `Unilateral(1)`.
    RandomFavorite,
    /// `Unilateral(m)`.
    RandomCandidate,
    /// Three candidates only: a uniform voter whose second choice has value
    /// `a`; top, second and third are elected with probabilities
    /// `(4 - a^2)/6`, `(1 + 2a)/6` and `(1 - 2a + a^2)/6`.
    QuadraticLottery,
    Mixture(Vec<(Rational, MechanismSpec)>),
    /// Averages the inner mechanism over all candidate relabelings.
    Symmetrized(Box<MechanismSpec>),
}

impl MechanismSpec {
    pub fn mixture(terms: Vec<(Rational, MechanismSpec)>) -> Result<Self> {
        check_weights(terms.iter().map(|(w, _)| w))?;
        Ok(MechanismSpec::Mixture(terms))
    }

    /// True when no component looks at cardinal values.
    pub fn is_ordinal(&self) -> bool {
        match self {
            MechanismSpec::QuadraticLottery => false,
            MechanismSpec::Mixture(terms) => terms.iter().all(|(_, s)| s.is_ordinal()),
            MechanismSpec::Symmetrized(inner) => inner.is_ordinal(),
            _ => true,
        }
    }

    pub fn has_duple(&self) -> bool {
        match self {
            MechanismSpec::Duple(_) | MechanismSpec::RandomMajority => true,
            MechanismSpec::Mixture(terms) => terms.iter().any(|(_, s)| s.has_duple()),
            MechanismSpec::Symmetrized(inner) => inner.has_duple(),
            _ => false,
        }
    }

    pub fn has_quadratic(&self) -> bool {
        match self {
            MechanismSpec::QuadraticLottery => true,
            MechanismSpec::Mixture(terms) => terms.iter().any(|(_, s)| s.has_quadratic()),
            MechanismSpec::Symmetrized(inner) => inner.has_quadratic(),
            _ => false,
        }
    }

    /// Election probabilities on a weighted ballot list.
    pub(crate) fn eval_ballots(&self, b: &Ballots) -> Result<Vec<Rational>> {
        let m = b.m;
        match self {
            MechanismSpec::Unilateral(q) => {
                if *q < 1 || *q > m {
                    return invalid(format!("unilateral q={q} outside 1..={m}"));
                }
                Ok(b.top_q(*q))
            }
            MechanismSpec::RandomFavorite => Ok(b.top_q(1)),
            MechanismSpec::RandomCandidate => Ok(Lottery::uniform(m).probs),
            MechanismSpec::Duple(q) => b.duple(*q),
            MechanismSpec::RandomMajority => {
                let n = b.voter_count()?;
                b.duple(n / 2 + 1)
            }
            MechanismSpec::QuadraticLottery => b.quadratic(),
            MechanismSpec::Mixture(terms) => {
                check_weights(terms.iter().map(|(w, _)| w))?;
                let mut out = vec![Rational::zero(); m];
                for (w, spec) in terms {
                    if w.is_zero() {
                        continue;
                    }
                    for (o, p) in out.iter_mut().zip(spec.eval_ballots(b)?) {
                        *o += w * p;
                    }
                }
                Ok(out)
            }
            MechanismSpec::Symmetrized(inner) => {
                let perms = candidate_permutations(m);
                let scale = Rational::new(BigInt::one(), BigInt::from(perms.len()));
                let mut out = vec![Rational::zero(); m];
                for perm in &perms {
                    let lot = inner.eval_ballots(&b.relabel(perm))?;
                    for (c, o) in out.iter_mut().enumerate() {
                        *o += &lot[perm[c]] * &scale;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Exact election lottery on a profile.
    pub fn eval(&self, p: &Profile) -> Result<Lottery> {
        Lottery::new(self.eval_ballots(&Ballots::from_profile(p))?)
    }

    /// Short human-readable name, e.g. `U1`, `D3`, `RM`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MechanismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismSpec::Unilateral(q) => write!(f, "U{q}"),
            MechanismSpec::Duple(q) => write!(f, "D{q}"),
            MechanismSpec::RandomMajority => write!(f, "random-majority"),
            MechanismSpec::RandomFavorite => write!(f, "random-favorite"),
            MechanismSpec::RandomCandidate => write!(f, "random-candidate"),
            MechanismSpec::QuadraticLottery => write!(f, "quadratic-lottery"),
            MechanismSpec::Mixture(terms) => {
                write!(f, "mix(")?;
                for (i, (w, s)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{w}*{s}")?;
                }
                write!(f, ")")
            }
            MechanismSpec::Symmetrized(inner) => write!(f, "sym({inner})"),
        }
    }
}

impl Mechanism for MechanismSpec {
    fn lottery(&self, profile: &Profile) -> Result<Lottery> {
        self.eval(profile)
    }
}

fn check_weights<'a>(weights: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let mut total = Rational::zero();
    for w in weights {
        if w < &Rational::zero() {
            return invalid("mixture weights must be nonnegative");
        }
        total += w;
    }
    if total != Rational::one() {
        return invalid(format!("mixture weights sum to {total}, not 1"));
    }
    Ok(())
}

/// One ballot with a multiplicity.
#[derive(Clone, Debug)]
pub(crate) struct Ballot {
    weight: Rational,
    /// Most preferred first.
    top_down: Vec<usize>,
    /// `position[c]`: rank of candidate `c`, 0 = favorite.
    position: Vec<usize>,
    /// Value of the second ranked candidate.
    second: Rational,
}

impl Ballot {
    fn new(weight: Rational, top_down: Vec<usize>, second: Rational) -> Self {
        let mut position = vec![0; top_down.len()];
        for (r, &c) in top_down.iter().enumerate() {
            position[c] = r;
        }
        Self {
            weight,
            top_down,
            position,
            second,
        }
    }
}

/// Weighted ballots; the common input of profile evaluation and of the
/// vanishing-grid limit on type profiles.
#[derive(Clone, Debug)]
pub(crate) struct Ballots {
    m: usize,
    /// Integer voter count, when known.
    n: Option<u64>,
    total: Rational,
    items: Vec<Ballot>,
}

impl Ballots {
    pub(crate) fn from_profile(p: &Profile) -> Self {
        let items = p
            .voters()
            .iter()
            .map(|v: &Valuation| Ballot::new(Rational::one(), v.ranking(), v.second_value().clone()))
            .collect();
        Self {
            m: p.m(),
            n: Some(p.n() as u64),
            total: Rational::from_integer(BigInt::from(p.n())),
            items,
        }
    }

    /// Limit ballots of `(eta(t_i, k))_i` as `k` grows: the second ranked value
    /// tends to 1 when it sits in the high block and to 0 otherwise.
    pub(crate) fn from_type_profile(tp: &TypeProfile) -> Result<Self> {
        let ts = TypeSpace::get(tp.m())?;
        let mut items = Vec::new();
        for (i, t) in ts.types().iter().enumerate() {
            let w = tp.weight(i);
            if w.is_zero() {
                continue;
            }
            let second = if t.split() >= 2 {
                Rational::one()
            } else {
                Rational::zero()
            };
            items.push(Ballot::new(w, t.top_down(), second));
        }
        let total = items.iter().map(|b| &b.weight).sum();
        Ok(Self {
            m: tp.m(),
            n: tp.n(),
            total,
            items,
        })
    }

    fn voter_count(&self) -> Result<u64> {
        self.n
            .ok_or_else(|| Error::InvalidInput("duple mechanisms need an integer voter count".into()))
    }

    fn relabel(&self, perm: &[usize]) -> Ballots {
        Ballots {
            m: self.m,
            n: self.n,
            total: self.total.clone(),
            items: self
                .items
                .iter()
                .map(|b| {
                    Ballot::new(
                        b.weight.clone(),
                        b.top_down.iter().map(|&c| perm[c]).collect(),
                        b.second.clone(),
                    )
                })
                .collect(),
        }
    }

    fn top_q(&self, q: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.m];
        let share = Rational::one() / (&self.total * Rational::from_integer(BigInt::from(q)));
        for b in &self.items {
            let w = &b.weight * &share;
            for &c in &b.top_down[..q] {
                out[c] += &w;
            }
        }
        out
    }

    fn duple(&self, q: u64) -> Result<Vec<Rational>> {
        let n = self.voter_count()?;
        if q < n / 2 + 1 || q > n + 1 {
            return invalid(format!("duple threshold q={q} outside {}..={}", n / 2 + 1, n + 1));
        }
        let m = self.m;
        let pairs = m * (m - 1) / 2;
        let per_pair = Rational::new(BigInt::one(), BigInt::from(pairs));
        let half = &per_pair / Rational::from_integer(BigInt::from(2));
        let q = Rational::from_integer(BigInt::from(q));
        let mut out = vec![Rational::zero(); m];
        for a in 0..m {
            for c in a + 1..m {
                let votes_a: Rational = self
                    .items
                    .iter()
                    .filter(|b| b.position[a] < b.position[c])
                    .map(|b| &b.weight)
                    .sum();
                let votes_c = &self.total - &votes_a;
                if votes_a >= q {
                    out[a] += &per_pair;
                } else if votes_c >= q {
                    out[c] += &per_pair;
                } else {
                    out[a] += &half;
                    out[c] += &half;
                }
            }
        }
        Ok(out)
    }

    fn quadratic(&self) -> Result<Vec<Rational>> {
        if self.m != 3 {
            return invalid("quadratic-lottery is defined for three candidates only");
        }
        let six = Rational::from_integer(BigInt::from(6));
        let one = Rational::one();
        let two = Rational::from_integer(BigInt::from(2));
        let four = Rational::from_integer(BigInt::from(4));
        let mut out = vec![Rational::zero(); 3];
        for b in &self.items {
            let a = &b.second;
            let a2 = a * a;
            let w = &b.weight / (&self.total * &six);
            out[b.top_down[0]] += &w * (&four - &a2);
            out[b.top_down[1]] += &w * (&one + &two * a);
            out[b.top_down[2]] += &w * (&one - &two * a + &a2);
        }
        Ok(out)
    }
}

/// `E[sum_i u_i(J(u))] / max_j sum_i u_i(j)` for a fixed profile.
pub fn ratio_on_profile<M: Mechanism + ?Sized>(mech: &M, p: &Profile) -> Result<Rational> {
    let lot = mech.lottery(p)?;
    let w = p.welfare();
    let best = w.iter().max().cloned().unwrap_or_else(Rational::zero);
    let expected: Rational = lot.probs().iter().zip(&w).map(|(a, b)| a * b).sum();
    Ok(expected / best)
}

/// Truthful-minus-deviating expected utility of one voter for each misreport.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub voter: usize,
    #[serde(with = "rational::vec_as_str")]
    pub gaps: Vec<Rational>,
    /// Indices of misreports with a strictly negative gap.
    pub violations: Vec<usize>,
}

impl AuditReport {
    pub fn min_gap(&self) -> Option<&Rational> {
        self.gaps.iter().min()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn truthfulness_audit<M: Mechanism + ?Sized>(
    mech: &M,
    p: &Profile,
    voter: usize,
    misreports: &[Valuation],
) -> Result<AuditReport> {
    if voter >= p.n() {
        return invalid(format!("voter {voter} out of range"));
    }
    let truth = p.voter(voter);
    let honest = truth.expected(mech.lottery(p)?.probs());
    let mut gaps = Vec::with_capacity(misreports.len());
    let mut violations = Vec::new();
    for (i, lie) in misreports.iter().enumerate() {
        let deviated = p.with_voter(voter, lie.clone())?;
        let gap = &honest - truth.expected(mech.lottery(&deviated)?.probs());
        if gap < Rational::zero() {
            violations.push(i);
        }
        gaps.push(gap);
    }
    Ok(AuditReport {
        voter,
        gaps,
        violations,
    })
}

/// All normalized injective valuations of `m` candidates on the `1/k` grid.
pub fn grid_valuations(m: usize, k: u64, limit: usize) -> Result<Vec<Valuation>> {
    if m < 2 || k + 1 < m as u64 {
        return invalid(format!("no injective valuations of {m} candidates on the 1/{k} grid"));
    }
    // choose m-2 interior grid points, then assign all m values to candidates
    let mut interiors: Vec<Vec<u64>> = Vec::new();
    fn choose(start: u64, end: u64, need: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if need == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..end {
            if end - i < need as u64 {
                break;
            }
            cur.push(i);
            choose(i + 1, end, need - 1, cur, out);
            cur.pop();
        }
    }
    choose(1, k, m - 2, &mut Vec::new(), &mut interiors);
    let perms = candidate_permutations(m);
    let total = interiors.len().saturating_mul(perms.len());
    if total > limit {
        return Err(Error::ResourceLimit {
            count: total as u128,
            limit: limit as u128,
        });
    }
    let kk = BigInt::from(k);
    let mut out = Vec::with_capacity(total);
    for inner in &interiors {
        let mut levels = vec![0u64];
        levels.extend(inner);
        levels.push(k);
        for perm in &perms {
            let mut values = vec![Rational::zero(); m];
            for (c, &slot) in perm.iter().enumerate() {
                values[c] = Rational::new(BigInt::from(levels[slot]), kk.clone());
            }
            out.push(Valuation::new(values)?);
        }
    }
    Ok(out)
}

/// Wraps any mechanism so that it is averaged over candidate relabelings.
pub struct Symmetrized<M>(pub M);

impl<M: Mechanism> Mechanism for Symmetrized<M> {
    fn lottery(&self, p: &Profile) -> Result<Lottery> {
        let m = p.m();
        let perms = candidate_permutations(m);
        let scale = Rational::new(BigInt::one(), BigInt::from(perms.len()));
        let mut out = vec![Rational::zero(); m];
        for perm in &perms {
            let lot = self.0.lottery(&p.relabel(perm))?;
            for (c, o) in out.iter_mut().enumerate() {
                *o += lot.prob(perm[c]) * &scale;
            }
        }
        Lottery::new(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SpecJson {
    Unilateral(usize),
    Duple(u64),
    RandomMajority,
    RandomFavorite,
    RandomCandidate,
    QuadraticLottery,
    Mix(Vec<(RatStr, SpecJson)>),
    Symmetrized(Box<SpecJson>),
}

impl From<&MechanismSpec> for SpecJson {
    fn from(s: &MechanismSpec) -> Self {
        match s {
            MechanismSpec::Unilateral(q) => SpecJson::Unilateral(*q),
            MechanismSpec::Duple(q) => SpecJson::Duple(*q),
            MechanismSpec::RandomMajority => SpecJson::RandomMajority,
            MechanismSpec::RandomFavorite => SpecJson::RandomFavorite,
            MechanismSpec::RandomCandidate => SpecJson::RandomCandidate,
            MechanismSpec::QuadraticLottery => SpecJson::QuadraticLottery,
            MechanismSpec::Mixture(t) => SpecJson::Mix(t.iter().map(|(w, s)| (RatStr(w.clone()), s.into())).collect()),
            MechanismSpec::Symmetrized(inner) => SpecJson::Symmetrized(Box::new(inner.as_ref().into())),
        }
    }
}

impl TryFrom<SpecJson> for MechanismSpec {
    type Error = Error;

    fn try_from(s: SpecJson) -> Result<Self> {
        Ok(match s {
            SpecJson::Unilateral(q) => MechanismSpec::Unilateral(q),
            SpecJson::Duple(q) => MechanismSpec::Duple(q),
            SpecJson::RandomMajority => MechanismSpec::RandomMajority,
            SpecJson::RandomFavorite => MechanismSpec::RandomFavorite,
            SpecJson::RandomCandidate => MechanismSpec::RandomCandidate,
            SpecJson::QuadraticLottery => MechanismSpec::QuadraticLottery,
            SpecJson::Mix(t) => MechanismSpec::mixture(
                t.into_iter()
                    .map(|(w, s)| Ok((w.0, MechanismSpec::try_from(s)?)))
                    .collect::<Result<_>>()?,
            )?,
            SpecJson::Symmetrized(inner) => MechanismSpec::Symmetrized(Box::new((*inner).try_into()?)),
        })
    }
}

impl Serialize for MechanismSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MechanismSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SpecJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}
