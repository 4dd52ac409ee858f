//! Quasi-combinatorial valuation types and histograms of them.
//!
//! A type `(M0, M1, <)` is a ranking of the candidates together with the size
//! `s` of the high block `M1` (the top `s` candidates). Realised on the grid
//! `{0, 1/k, ..., 1}` the low block sits at `0, 1/k, ...` and the high block at
//! `..., (k-1)/k, 1`, so that the alternation number is 2.
//!
//! For three candidates `A, B, C` (indices 0, 1, 2) the type order is pinned to
//! the standard `x1 .. x12` numbering used throughout the crate:
//!
//! | x  | A   | B   | C   |
//! |----|-----|-----|-----|
//! | 1  | 1   | 1-e | 0   |
//! | 2  | 1   | e   | 0   |
//! | 3  | 1   | 0   | e   |
//! | 4  | 1   | 0   | 1-e |
//! | 5  | 1-e | 1   | 0   |
//! | 6  | e   | 1   | 0   |
//! | 7  | 0   | 1   | 1-e |
//! | 8  | 0   | 1   | e   |
//! | 9  | 1-e | 0   | 1   |
//! | 10 | e   | 0   | 1   |
//! | 11 | 0   | 1-e | 1   |
//! | 12 | 0   | e   | 1   |

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::profile::{Profile, Valuation};
use crate::rational::{self, RatStr, Rational};

/// Largest candidate count for which the full type space (with its
/// relabeling tables) is materialised.
pub const MAX_TYPE_SPACE_M: usize = 6;

/// Default cap on enumerated type-profile compositions.
pub const DEFAULT_COLUMN_LIMIT: u128 = 250_000;

/// Environment variable overriding [`DEFAULT_COLUMN_LIMIT`].
pub const COLUMN_LIMIT_ENV: &str = "RVL_MAX_COLUMNS";

pub fn column_limit_from_env() -> u128 {
    std::env::var(COLUMN_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_COLUMN_LIMIT)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiType {
    /// Candidates from least to most preferred.
    order: Vec<usize>,
    /// Size of the high block `M1`.
    split: usize,
}

impl QuasiType {
    pub fn new(order: Vec<usize>, split: usize) -> Result<Self> {
        let m = order.len();
        if m < 2 {
            return invalid("a type needs at least two candidates");
        }
        let mut seen = vec![false; m];
        for &c in &order {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return invalid("type ranking must be a permutation of 0..m");
            }
        }
        if split == 0 || split >= m {
            return invalid(format!("split index must be in 1..={}, got {split}", m - 1));
        }
        Ok(Self { order, split })
    }

    /// Builds a type from a most-preferred-first ranking.
    pub fn from_top_down(top_down: &[usize], split: usize) -> Result<Self> {
        Self::new(top_down.iter().rev().copied().collect(), split)
    }

    pub fn m(&self) -> usize {
        self.order.len()
    }

    pub fn split(&self) -> usize {
        self.split
    }

    /// Least to most preferred.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn top_down(&self) -> Vec<usize> {
        self.order.iter().rev().copied().collect()
    }

    pub fn high_block(&self) -> &[usize] {
        &self.order[self.m() - self.split..]
    }

    pub fn low_block(&self) -> &[usize] {
        &self.order[..self.m() - self.split]
    }

    pub fn is_high(&self, candidate: usize) -> bool {
        self.high_block().contains(&candidate)
    }

    /// Type of the relabeled valuation `v(perm[c]) = u(c)`.
    pub fn relabel(&self, perm: &[usize]) -> QuasiType {
        QuasiType {
            order: self.order.iter().map(|&c| perm[c]).collect(),
            split: self.split,
        }
    }
}

/// All permutations of `0..m` in lexicographic order.
pub fn candidate_permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                prefix.push(c);
                rec(prefix, used, out);
                prefix.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

const TABLE_M3: [([usize; 3], usize); 12] = [
    ([0, 1, 2], 2),
    ([0, 1, 2], 1),
    ([0, 2, 1], 1),
    ([0, 2, 1], 2),
    ([1, 0, 2], 2),
    ([1, 0, 2], 1),
    ([1, 2, 0], 2),
    ([1, 2, 0], 1),
    ([2, 0, 1], 2),
    ([2, 0, 1], 1),
    ([2, 1, 0], 2),
    ([2, 1, 0], 1),
];

/// All `m!(m-1)` types. Most-preferred-first rankings in lexicographic
/// order, high block sizes descending; for `m = 3` the `x1..x12` order.
pub fn enumerate_types(m: usize) -> Result<Vec<QuasiType>> {
    if m < 2 {
        return invalid(format!("need at least two candidates, got {m}"));
    }
    if m == 3 {
        return TABLE_M3
            .iter()
            .map(|(top_down, s)| QuasiType::from_top_down(top_down, *s))
            .collect();
    }
    let mut out = Vec::new();
    for top_down in candidate_permutations(m) {
        for s in (1..m).rev() {
            out.push(QuasiType::from_top_down(&top_down, s)?);
        }
    }
    Ok(out)
}

/// The quasi-combinatorial valuation of type `t` on the `1/k` grid.
pub fn eta(t: &QuasiType, k: u64) -> Result<Valuation> {
    let m = t.m();
    if k <= 2 * m as u64 {
        return invalid(format!("grid size k must exceed 2m = {}, got {k}", 2 * m));
    }
    let mut values = vec![Rational::zero(); m];
    let low = m - t.split;
    for (pos, &c) in t.order.iter().enumerate() {
        let idx = if pos < low {
            pos as u64
        } else {
            k - t.split as u64 + 1 + (pos - low) as u64
        };
        values[c] = Rational::new(BigInt::from(idx), BigInt::from(k));
    }
    Valuation::new(values)
}

fn grid_indices(u: &Valuation, k: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return invalid("grid size must be positive");
    }
    let mut idx = u
        .values()
        .iter()
        .map(|v| {
            rational::grid_index(v, k)
                .and_then(|i| i.to_u64())
                .ok_or_else(|| Error::InvalidInput(format!("value {v} is not on the 1/{k} grid")))
        })
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    Ok(idx)
}

/// Maximal runs `[lo, hi]` of consecutive occupied grid indices.
fn runs(sorted: &[u64]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &i in sorted {
        match out.last_mut() {
            Some((_, hi)) if *hi + 1 == i => *hi = i,
            _ => out.push((i, i)),
        }
    }
    out
}

pub(crate) fn image_runs(u: &Valuation, k: u64) -> Result<Vec<(u64, u64)>> {
    Ok(runs(&grid_indices(u, k)?))
}

/// Number of `j in 0..k` for which exactly one of `j/k`, `(j+1)/k` is in the
/// image of `u`.
pub fn alternation_number(u: &Valuation, k: u64) -> Result<u64> {
    let runs = image_runs(u, k)?;
    Ok(runs.iter().map(|&(lo, hi)| u64::from(lo > 0) + u64::from(hi < k)).sum())
}

/// Inverse of [`eta`]: the type of a grid valuation with alternation number 2.
pub fn type_of(u: &Valuation, k: u64) -> Result<Option<QuasiType>> {
    let r = image_runs(u, k)?;
    if r.len() != 2 || r[0].0 != 0 || r[1].1 != k {
        return Ok(None);
    }
    let split = (r[1].1 - r[1].0 + 1) as usize;
    let mut order: Vec<usize> = (0..u.m()).collect();
    order.sort_by(|&a, &b| u.value(a).cmp(u.value(b)));
    QuasiType::new(order, split).map(Some)
}

/// Types of one candidate count with index and relabeling tables.
#[derive(Debug)]
pub struct TypeSpace {
    m: usize,
    types: Vec<QuasiType>,
    index: HashMap<QuasiType, usize>,
    perms: Vec<Vec<usize>>,
    /// `type_perm[p][t]`: index of `types[t].relabel(&perms[p])`.
    type_perm: Vec<Vec<usize>>,
}

impl TypeSpace {
    pub fn get(m: usize) -> Result<Arc<TypeSpace>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TypeSpace>>>> = OnceLock::new();
        if m > MAX_TYPE_SPACE_M {
            return invalid(format!("type spaces are supported for m <= {MAX_TYPE_SPACE_M}"));
        }
        let cache = CACHE.get_or_init(Default::default);
        if let Some(ts) = cache.lock().unwrap().get(&m) {
            return Ok(ts.clone());
        }
        let ts = Arc::new(Self::build(m)?);
        cache.lock().unwrap().insert(m, ts.clone());
        Ok(ts)
    }

    fn build(m: usize) -> Result<Self> {
        let types = enumerate_types(m)?;
        let index: HashMap<QuasiType, usize> = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let perms = candidate_permutations(m);
        let type_perm = perms
            .iter()
            .map(|p| types.iter().map(|t| index[&t.relabel(p)]).collect())
            .collect();
        Ok(Self {
            m,
            types,
            index,
            perms,
            type_perm,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn types(&self) -> &[QuasiType] {
        &self.types
    }

    pub fn index_of(&self, t: &QuasiType) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn type_permutation(&self, p: usize) -> &[usize] {
        &self.type_perm[p]
    }

    /// Lexicographically least relabeling of `v` and whether `v` already is it.
    fn canonical<T: Ord + Clone>(&self, v: &[T]) -> Vec<T> {
        let mut best = v.to_vec();
        let mut buf = v.to_vec();
        for tp in &self.type_perm {
            for (i, x) in v.iter().enumerate() {
                buf[tp[i]] = x.clone();
            }
            if buf < best {
                std::mem::swap(&mut best, &mut buf);
            }
        }
        best
    }

    fn is_canonical(&self, v: &[u64], buf: &mut [u64]) -> bool {
        for tp in &self.type_perm[1..] {
            for (i, &x) in v.iter().enumerate() {
                buf[tp[i]] = x;
            }
            if buf[..] < v[..] {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mass {
    /// Voter counts per type; the total is `n`.
    Counts(Vec<u64>),
    /// Voter fractions per type, summing to 1.
    Fractions(Vec<Rational>),
}

/// A histogram of voters over the types of [`enumerate_types`]`(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeProfile {
    m: usize,
    mass: Mass,
}

impl TypeProfile {
    pub fn from_counts(m: usize, counts: Vec<u64>) -> Result<Self> {
        let ts = TypeSpace::get(m)?;
        if counts.len() != ts.len() {
            return invalid(format!(
                "expected {} type counts for m={m}, got {}",
                ts.len(),
                counts.len()
            ));
        }
        if counts.iter().sum::<u64>() == 0 {
            return invalid("a type profile needs at least one voter");
        }
        Ok(Self {
            m,
            mass: Mass::Counts(counts),
        })
    }

    pub fn from_fractions(m: usize, fractions: Vec<Rational>) -> Result<Self> {
        let ts = TypeSpace::get(m)?;
        if fractions.len() != ts.len() {
            return invalid(format!(
                "expected {} type fractions for m={m}, got {}",
                ts.len(),
                fractions.len()
            ));
        }
        if fractions.iter().any(|f| f < &Rational::zero()) {
            return invalid("type fractions must be nonnegative");
        }
        if fractions.iter().sum::<Rational>() != Rational::one() {
            return invalid("type fractions must sum to 1");
        }
        Ok(Self {
            m,
            mass: Mass::Fractions(fractions),
        })
    }

    /// Counts given as `(x-index, count)` pairs with 1-based type indices.
    pub fn from_sparse_counts(m: usize, entries: &[(usize, u64)]) -> Result<Self> {
        let len = TypeSpace::get(m)?.len();
        let mut counts = vec![0u64; len];
        for &(x, c) in entries {
            if x == 0 || x > len {
                return invalid(format!("type index x{x} out of range 1..={len}"));
            }
            counts[x - 1] += c;
        }
        Self::from_counts(m, counts)
    }

    /// Every voter of the single type `index` (0-based).
    pub fn unit(m: usize, index: usize) -> Result<Self> {
        let len = TypeSpace::get(m)?.len();
        if index >= len {
            return invalid(format!("type index {index} out of range"));
        }
        let mut f = vec![Rational::zero(); len];
        f[index] = Rational::one();
        Self::from_fractions(m, f)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mass(&self) -> &Mass {
        &self.mass
    }

    pub fn len(&self) -> usize {
        match &self.mass {
            Mass::Counts(c) => c.len(),
            Mass::Fractions(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of voters in counts mode.
    pub fn n(&self) -> Option<u64> {
        match &self.mass {
            Mass::Counts(c) => Some(c.iter().sum()),
            Mass::Fractions(_) => None,
        }
    }

    pub fn is_counts(&self) -> bool {
        matches!(self.mass, Mass::Counts(_))
    }

    /// Mass of type `i`: a count, or a fraction in fractions mode.
    pub fn weight(&self, i: usize) -> Rational {
        match &self.mass {
            Mass::Counts(c) => Rational::from_integer(BigInt::from(c[i])),
            Mass::Fractions(f) => f[i].clone(),
        }
    }

    pub fn weights(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.weight(i).is_zero()).collect()
    }

    /// Fractions view of this profile.
    pub fn to_fractions(&self) -> TypeProfile {
        match &self.mass {
            Mass::Fractions(_) => self.clone(),
            Mass::Counts(c) => {
                let n = BigInt::from(c.iter().sum::<u64>());
                TypeProfile {
                    m: self.m,
                    mass: Mass::Fractions(c.iter().map(|&x| Rational::new(BigInt::from(x), n.clone())).collect()),
                }
            }
        }
    }

    /// Counts view with `n` voters; fails unless every `x_t * n` is integral.
    pub fn to_counts(&self, n: u64) -> Result<TypeProfile> {
        match &self.mass {
            Mass::Counts(c) => {
                if c.iter().sum::<u64>() == n {
                    Ok(self.clone())
                } else {
                    invalid(format!("type profile has {} voters, not {n}", c.iter().sum::<u64>()))
                }
            }
            Mass::Fractions(f) => {
                let scale = Rational::from_integer(BigInt::from(n));
                let counts = f
                    .iter()
                    .map(|x| {
                        let c = x * &scale;
                        if c.is_integer() {
                            c.to_integer()
                                .to_u64()
                                .ok_or_else(|| Error::InvalidInput("count overflow".into()))
                        } else {
                            invalid(format!("fraction {x} times {n} voters is not an integer"))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                TypeProfile::from_counts(self.m, counts)
            }
        }
    }

    /// The per-voter valuations at grid `k`: type `t` repeated `count_t` times.
    pub fn realize(&self, k: u64) -> Result<Profile> {
        let Mass::Counts(c) = &self.mass else {
            return invalid("realizing a profile needs counts, not fractions");
        };
        let ts = TypeSpace::get(self.m)?;
        let mut voters = Vec::new();
        for (t, &count) in ts.types().iter().zip(c) {
            if count > 0 {
                let v = eta(t, k)?;
                voters.extend(std::iter::repeat_n(v, count as usize));
            }
        }
        Profile::new(voters)
    }

    /// The histogram after relabeling candidates by `perm`.
    pub fn relabel(&self, perm: &[usize]) -> Result<TypeProfile> {
        let ts = TypeSpace::get(self.m)?;
        let p = ts
            .permutations()
            .iter()
            .position(|q| q == perm)
            .ok_or_else(|| Error::InvalidInput("not a candidate permutation".into()))?;
        let tp = ts.type_permutation(p);
        let mass = match &self.mass {
            Mass::Counts(c) => {
                let mut out = vec![0; c.len()];
                for (i, &x) in c.iter().enumerate() {
                    out[tp[i]] = x;
                }
                Mass::Counts(out)
            }
            Mass::Fractions(f) => {
                let mut out = vec![Rational::zero(); f.len()];
                for (i, x) in f.iter().enumerate() {
                    out[tp[i]] = x.clone();
                }
                Mass::Fractions(out)
            }
        };
        Ok(TypeProfile { m: self.m, mass })
    }

    /// Short label such as `x2=14398 x5=2185 x11=6417`.
    pub fn label(&self) -> String {
        self.support()
            .into_iter()
            .map(|i| format!("x{}={}", i + 1, self.weight(i)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Representative of the candidate-relabeling orbit of `tp`: the
/// lexicographically least mass vector over all `m!` relabelings.
pub fn canonicalize_type_profile(tp: &TypeProfile) -> TypeProfile {
    let ts = TypeSpace::get(tp.m).expect("type profile was validated");
    let mass = match &tp.mass {
        Mass::Counts(c) => Mass::Counts(ts.canonical(c)),
        Mass::Fractions(f) => Mass::Fractions(ts.canonical(f)),
    };
    TypeProfile { m: tp.m, mass }
}

/// Number of compositions of `n` into `parts` nonnegative parts, saturating.
pub fn composition_count(n: u64, parts: usize) -> u128 {
    // C(n + parts - 1, parts - 1)
    let k = parts.saturating_sub(1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        match acc.checked_mul(n as u128 + i) {
            Some(x) => acc = x / i,
            None => return u128::MAX,
        }
    }
    acc
}

/// All `n`-voter histograms over the types of `m` candidates, or one
/// representative per relabeling orbit when `canonical` is set.
pub fn enumerate_type_profiles(m: usize, n: u64, canonical: bool, limit: u128) -> Result<Vec<TypeProfile>> {
    if n == 0 {
        return invalid("need at least one voter");
    }
    let ts = TypeSpace::get(m)?;
    let parts = ts.len();
    let count = composition_count(n, parts);
    if count > limit {
        return Err(Error::ResourceLimit { count, limit });
    }
    let mut out = Vec::new();
    let mut current = vec![0u64; parts];
    let mut buf = vec![0u64; parts];
    // lexicographically decreasing compositions
    fn rec(
        pos: usize,
        left: u64,
        current: &mut Vec<u64>,
        buf: &mut [u64],
        ts: &TypeSpace,
        canonical: bool,
        out: &mut Vec<TypeProfile>,
    ) {
        if pos + 1 == current.len() {
            current[pos] = left;
            if !canonical || ts.is_canonical(current, buf) {
                out.push(TypeProfile {
                    m: ts.m,
                    mass: Mass::Counts(current.clone()),
                });
            }
            current[pos] = 0;
            return;
        }
        for c in (0..=left).rev() {
            current[pos] = c;
            rec(pos + 1, left - c, current, buf, ts, canonical, out);
        }
        current[pos] = 0;
    }
    rec(0, n, &mut current, &mut buf, &ts, canonical, &mut out);
    Ok(out)
}

impl PartialOrd for TypeProfile {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TypeProfile {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m.cmp(&other.m).then_with(|| self.weights().cmp(&other.weights()))
    }
}

#[derive(Serialize, Deserialize)]
struct TypeProfileJson {
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    counts: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fractions: Option<BTreeMap<String, RatStr>>,
}

fn parse_type_key(key: &str, len: usize) -> Result<usize> {
    key.strip_prefix('x')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| i >= 1 && i <= len)
        .map(|i| i - 1)
        .ok_or_else(|| Error::Parse(format!("bad type key {key:?}; expected x1..x{len}")))
}

impl Serialize for TypeProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;

        struct Entries<'a>(&'a TypeProfile);
        impl Serialize for Entries<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let tp = self.0;
                let support = tp.support();
                let mut map = s.serialize_map(Some(support.len()))?;
                for i in support {
                    let key = format!("x{}", i + 1);
                    match &tp.mass {
                        Mass::Counts(c) => map.serialize_entry(&key, &c[i])?,
                        Mass::Fractions(f) => map.serialize_entry(&key, &RatStr(f[i].clone()))?,
                    }
                }
                map.end()
            }
        }

        let mut map = s.serialize_map(None)?;
        map.serialize_entry("m", &self.m)?;
        match &self.mass {
            Mass::Counts(_) => {
                map.serialize_entry("n", &self.n())?;
                map.serialize_entry("counts", &Entries(self))?;
            }
            Mass::Fractions(_) => map.serialize_entry("fractions", &Entries(self))?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for TypeProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TypeProfileJson::deserialize(d)?;
        let len = TypeSpace::get(raw.m).map_err(D::Error::custom)?.len();
        let tp = match (raw.counts, raw.fractions) {
            (Some(counts), None) => {
                let mut v = vec![0u64; len];
                for (k, c) in counts {
                    v[parse_type_key(&k, len).map_err(D::Error::custom)?] = c;
                }
                let tp = TypeProfile::from_counts(raw.m, v).map_err(D::Error::custom)?;
                if let Some(n) = raw.n {
                    if tp.n() != Some(n) {
                        return Err(D::Error::custom(format!(
                            "counts sum to {}, header says n={n}",
                            tp.n().unwrap_or(0)
                        )));
                    }
                }
                tp
            }
            (None, Some(fractions)) => {
                let mut v = vec![Rational::zero(); len];
                for (k, f) in fractions {
                    v[parse_type_key(&k, len).map_err(D::Error::custom)?] = f.0;
                }
                let tp = TypeProfile::from_fractions(raw.m, v).map_err(D::Error::custom)?;
                match raw.n {
                    Some(n) => tp.to_counts(n).map_err(D::Error::custom)?,
                    None => tp,
                }
            }
            _ => {
                return Err(D::Error::custom(
                    "exactly one of \"counts\" or \"fractions\" is required",
                ))
            }
        };
        Ok(tp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn type_counts() {
        assert_eq!(enumerate_types(2).unwrap().len(), 2);
        assert_eq!(enumerate_types(3).unwrap().len(), 12);
        assert_eq!(enumerate_types(4).unwrap().len(), 72);
        assert!(enumerate_types(1).is_err());
    }

    #[test]
    fn eta_examples() {
        // ({B}, {A, C}, B < A < C)
        let t = QuasiType::new(vec![1, 0, 2], 2).unwrap();
        let u = eta(&t, 1000).unwrap();
        assert_eq!(u.values(), &[frac(999, 1000), int(0), int(1)]);
        // column x2
        let t = QuasiType::new(vec![2, 1, 0], 1).unwrap();
        let u = eta(&t, 1000).unwrap();
        assert_eq!(u.values(), &[int(1), frac(1, 1000), int(0)]);
        assert_eq!(enumerate_types(3).unwrap()[1], t);
        assert!(eta(&t, 6).is_err());
        assert!(eta(&t, 7).is_ok());
    }

    #[test]
    fn alternation_examples() {
        let u = Valuation::new(vec![int(0), frac(3, 10), int(1)]).unwrap();
        // boundaries at j = 0, 2, 3, 9
        assert_eq!(alternation_number(&u, 10).unwrap(), 4);
        assert_eq!(type_of(&u, 10).unwrap(), None);
        let u = Valuation::new(vec![int(0), frac(1, 4), int(1)]).unwrap();
        assert_eq!(alternation_number(&u, 4).unwrap(), 2);
        assert!(alternation_number(&u, 3).is_err());
        let x9 = Valuation::new(vec![frac(49, 50), int(0), int(1)]).unwrap();
        let t = type_of(&x9, 50).unwrap().unwrap();
        assert_eq!(t, QuasiType::new(vec![1, 0, 2], 2).unwrap());
        assert_eq!(enumerate_types(3).unwrap()[8], t);
    }

    #[test]
    fn table_columns_match_eta_images() {
        // Rows of the x1..x12 table, A/B/C, "1", "1-e", "e", "0".
        let table = [
            ["1", "1-e", "0"],
            ["1", "e", "0"],
            ["1", "0", "e"],
            ["1", "0", "1-e"],
            ["1-e", "1", "0"],
            ["e", "1", "0"],
            ["0", "1", "1-e"],
            ["0", "1", "e"],
            ["1-e", "0", "1"],
            ["e", "0", "1"],
            ["0", "1-e", "1"],
            ["0", "e", "1"],
        ];
        let k = 97;
        let e = frac(1, k as i64);
        for (t, row) in enumerate_types(3).unwrap().iter().zip(table) {
            let u = eta(t, k).unwrap();
            for (c, cell) in row.iter().enumerate() {
                let want = match *cell {
                    "1" => int(1),
                    "1-e" => int(1) - &e,
                    "e" => e.clone(),
                    _ => int(0),
                };
                assert_eq!(u.value(c), &want, "type {t:?} candidate {c}");
            }
        }
    }

    #[test]
    fn canonical_forms() {
        let x2 = TypeProfile::from_sparse_counts(3, &[(2, 1)]).unwrap();
        // B <-> C swap
        let swapped = x2.relabel(&[0, 2, 1]).unwrap();
        assert_ne!(x2, swapped);
        assert_eq!(canonicalize_type_profile(&x2), canonicalize_type_profile(&swapped));
        let c = canonicalize_type_profile(&x2);
        assert_eq!(canonicalize_type_profile(&c), c);
    }

    #[test]
    fn composition_counts() {
        assert_eq!(composition_count(2, 12), 78);
        assert_eq!(composition_count(5, 12), 4368);
        assert_eq!(enumerate_type_profiles(3, 2, false, 1000).unwrap().len(), 78);
        assert_eq!(enumerate_type_profiles(2, 1, false, 1000).unwrap().len(), 2);
        let err = enumerate_type_profiles(3, 5, false, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                count: 4368,
                limit: 1000
            }
        );
    }

    #[test]
    fn fractions_and_counts() {
        let tp = TypeProfile::from_sparse_counts(3, &[(2, 2), (8, 1)]).unwrap();
        let f = tp.to_fractions();
        assert_eq!(f.weight(1), frac(2, 3));
        assert_eq!(f.to_counts(3).unwrap(), tp);
        assert_eq!(f.to_counts(6).unwrap().weight(7), int(2));
        assert!(f.to_counts(4).is_err());
        assert!(TypeProfile::from_fractions(3, vec![frac(1, 2); 12]).is_err());
    }

    #[test]
    fn json_shapes() {
        let tp = TypeProfile::from_sparse_counts(3, &[(2, 14398), (5, 2185), (11, 6417)]).unwrap();
        let s = serde_json::to_string(&tp).unwrap();
        assert_eq!(s, r#"{"m":3,"n":23000,"counts":{"x2":14398,"x5":2185,"x11":6417}}"#);
        let back: TypeProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, tp);
        let f: TypeProfile = serde_json::from_str(r#"{"m":3,"fractions":{"x1":"1/2","x11":"1/2"}}"#).unwrap();
        assert!(!f.is_counts());
        assert!(serde_json::from_str::<TypeProfile>(r#"{"m":3,"n":4,"counts":{"x1":3}}"#).is_err());
        assert!(serde_json::from_str::<TypeProfile>(r#"{"m":3,"counts":{"x13":3}}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn eta_and_type_of_are_inverse(m in 2usize..=4, t in 0usize..72, extra in 1u64..40) {
                let types = enumerate_types(m).unwrap();
                let t = &types[t % types.len()];
                let k = 2 * m as u64 + extra;
                let u = eta(t, k).unwrap();
                prop_assert_eq!(alternation_number(&u, k).unwrap(), 2);
                prop_assert_eq!(type_of(&u, k).unwrap(), Some(t.clone()));
            }

            #[test]
            fn canonical_form_ignores_relabeling(counts in proptest::collection::vec(0u64..3, 12), p in 0usize..6) {
                prop_assume!(counts.iter().sum::<u64>() > 0);
                let tp = TypeProfile::from_counts(3, counts).unwrap();
                let perm = TypeSpace::get(3).unwrap().permutations()[p].clone();
                let c = canonicalize_type_profile(&tp);
                prop_assert_eq!(&canonicalize_type_profile(&tp.relabel(&perm).unwrap()), &c);
                prop_assert_eq!(&canonicalize_type_profile(&c), &c);
            }
        }
    }
}
