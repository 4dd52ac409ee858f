//! Cardinal valuations and valuation profiles.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{RatStr, Rational};

/// A canonically represented valuation: injective, values in `[0,1]`, with
/// both 0 and 1 attained. Candidates are `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: Vec<Rational>,
}

impl Valuation {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len() < 2 {
            return invalid("a valuation needs at least two candidates");
        }
        let zero = Rational::zero();
        let one = Rational::one();
        if values.iter().any(|v| v < &zero || v > &one) {
            return invalid("valuation entries must lie in [0,1]");
        }
        let distinct: BTreeSet<&Rational> = values.iter().collect();
        if distinct.len() != values.len() {
            return invalid("valuation must be injective (ties are not supported)");
        }
        if !distinct.contains(&zero) || !distinct.contains(&one) {
            return invalid("valuation must attain both 0 and 1");
        }
        Ok(Self { values })
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, candidate: usize) -> &Rational {
        &self.values[candidate]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Candidates from most to least preferred.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.m()).collect();
        order.sort_by(|&a, &b| self.values[b].cmp(&self.values[a]));
        order
    }

    /// Value of the second most preferred candidate.
    pub fn second_value(&self) -> &Rational {
        &self.values[self.ranking()[1]]
    }

    /// Expected value of a lottery under this valuation.
    pub fn expected(&self, probs: &[Rational]) -> Rational {
        self.values.iter().zip(probs).map(|(v, p)| v * p).sum()
    }

    /// The valuation `v` with `v(perm[c]) = self(c)`.
    pub fn relabel(&self, perm: &[usize]) -> Valuation {
        let mut values = vec![Rational::zero(); self.m()];
        for (c, v) in self.values.iter().enumerate() {
            values[perm[c]] = v.clone();
        }
        Valuation { values }
    }
}

/// Valuations of `n >= 1` voters over a common candidate set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    voters: Vec<Valuation>,
}

impl Profile {
    pub fn new(voters: Vec<Valuation>) -> Result<Self> {
        let Some(first) = voters.first() else {
            return invalid("a profile needs at least one voter");
        };
        let m = first.m();
        if voters.iter().any(|v| v.m() != m) {
            return invalid("all voters must rate the same number of candidates");
        }
        Ok(Self { voters })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(rows.into_iter().map(Valuation::new).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn m(&self) -> usize {
        self.voters[0].m()
    }

    pub fn voters(&self) -> &[Valuation] {
        &self.voters
    }

    pub fn voter(&self, i: usize) -> &Valuation {
        &self.voters[i]
    }

    /// Social welfare of each candidate.
    pub fn welfare(&self) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.m()];
        for v in &self.voters {
            for (c, x) in v.values().iter().enumerate() {
                w[c] += x;
            }
        }
        w
    }

    pub fn with_voter(&self, i: usize, v: Valuation) -> Result<Profile> {
        if v.m() != self.m() {
            return invalid("replacement valuation has the wrong number of candidates");
        }
        let mut voters = self.voters.clone();
        voters[i] = v;
        Ok(Profile { voters })
    }

    pub fn relabel(&self, perm: &[usize]) -> Profile {
        Profile {
            voters: self.voters.iter().map(|v| v.relabel(perm)).collect(),
        }
    }
}

/// Makes `k` consecutive copies of every ballot, preserving block order.
pub fn replicate_profile(p: &Profile, k: usize) -> Result<Profile> {
    if k == 0 {
        return invalid("replication factor must be at least 1");
    }
    let voters = p
        .voters
        .iter()
        .flat_map(|v| std::iter::repeat_n(v.clone(), k))
        .collect();
    Ok(Profile { voters })
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    m: usize,
    n: usize,
    voters: Vec<Vec<RatStr>>,
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileJson {
            m: self.m(),
            n: self.n(),
            voters: self
                .voters
                .iter()
                .map(|v| v.values.iter().cloned().map(RatStr).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ProfileJson::deserialize(d)?;
        let rows: Vec<Vec<Rational>> = raw
            .voters
            .into_iter()
            .map(|row| row.into_iter().map(|r| r.0).collect())
            .collect();
        let p = Profile::from_rows(rows).map_err(D::Error::custom)?;
        if p.m() != raw.m || p.n() != raw.n {
            return Err(D::Error::custom(Error::InvalidInput(format!(
                "header says m={} n={}, voters give m={} n={}",
                raw.m,
                raw.n,
                p.m(),
                p.n()
            ))));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn val(v: &[(i64, i64)]) -> Valuation {
        Valuation::new(v.iter().map(|&(p, q)| frac(p, q)).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_valuations() {
        assert!(Valuation::new(vec![int(1), int(1), int(0)]).is_err());
        assert!(Valuation::new(vec![int(1), frac(1, 2), frac(1, 4)]).is_err());
        assert!(Valuation::new(vec![int(2), int(0), frac(1, 2)]).is_err());
        assert!(Valuation::new(vec![int(1)]).is_err());
        assert!(Profile::new(vec![]).is_err());
        let a = val(&[(1, 1), (0, 1)]);
        let b = val(&[(1, 1), (0, 1), (1, 2)]);
        assert!(Profile::new(vec![a, b]).is_err());
    }

    #[test]
    fn ranking_and_second_value() {
        let v = val(&[(1, 10), (1, 1), (0, 1)]);
        assert_eq!(v.ranking(), vec![1, 0, 2]);
        assert_eq!(v.second_value(), &frac(1, 10));
    }

    #[test]
    fn replicate_scales_welfare() {
        let p = Profile::new(vec![val(&[(1, 1), (1, 3), (0, 1)]), val(&[(0, 1), (1, 1), (1, 2)])]).unwrap();
        assert_eq!(replicate_profile(&p, 1).unwrap(), p);
        let r = replicate_profile(&p, 3).unwrap();
        assert_eq!(r.n(), 6);
        assert_eq!(r.voter(2), p.voter(0));
        assert_eq!(r.voter(3), p.voter(1));
        let w: Vec<Rational> = p.welfare().into_iter().map(|x| x * int(3)).collect();
        assert_eq!(r.welfare(), w);
        assert!(replicate_profile(&p, 0).is_err());
    }

    #[test]
    fn json_format() {
        let text = r#"{"m":3,"n":2,"voters":[["1","1/1000","0"],["0","1","0.5"]]}"#;
        let p: Profile = serde_json::from_str(text).unwrap();
        assert_eq!(p.voter(1).value(2), &frac(1, 2));
        let out = serde_json::to_string(&p).unwrap();
        assert_eq!(out, r#"{"m":3,"n":2,"voters":[["1","1/1000","0"],["0","1","1/2"]]}"#);
        assert!(serde_json::from_str::<Profile>(r#"{"m":3,"n":3,"voters":[["1","0","1/2"]]}"#).is_err());
    }
}
