//! Named profiles and type profiles used as fixtures.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::profile::Profile;
use crate::quasi::TypeProfile;
use crate::rational::{frac, int, parse, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Payload {
    Profile(Profile),
    TypeProfile(TypeProfile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFixture {
    pub name: String,
    pub payload: Payload,
    pub provenance: String,
}

pub const CATALOGUE_VOTERS: u64 = 23000;

/// Five bad three-candidate type profiles with 23000 voters each, as sparse
/// `(type, count)` pairs with 1-based type numbers.
const CATALOGUE: [&[(usize, u64)]; 5] = [
    &[(2, 14398), (5, 2185), (11, 6417)],
    &[(2, 6000), (5, 8000), (12, 9000)],
    &[(1, 11500), (11, 11500)],
    &[(2, 9200), (5, 4600), (12, 9200)],
    &[(2, 13800), (12, 9200)],
];

pub fn catalogue() -> Result<Vec<TypeProfile>> {
    CATALOGUE
        .iter()
        .map(|e| TypeProfile::from_sparse_counts(3, e))
        .collect()
}

/// Published game values for three candidates with the mixtures reported to
/// reach them; rows are U1, U2, U3 and then the duples in increasing `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub n: u64,
    pub unilateral_value: Rational,
    pub ordinal_value: Rational,
    pub unilateral_mixture: Vec<Rational>,
    pub ordinal_mixture: Vec<Rational>,
}

/// `(n, unilateral value, ordinal value, unilateral mixture, ordinal mixture)`.
type ReferenceLiteral = (
    u64,
    &'static str,
    &'static str,
    &'static [&'static str],
    &'static [&'static str],
);

const REFERENCE: [ReferenceLiteral; 4] = [
    (
        2,
        "2/3",
        "2/3",
        &["1/3", "2/3", "0"],
        &["4/100", "8/100", "0", "88/100"],
    ),
    (
        3,
        "105/171",
        "2/3",
        &["9/19", "10/19", "0"],
        &["47/100", "0", "0", "53/100", "0"],
    ),
    (4, "5/8", "2/3", &["1/2", "1/2", "0"], &["0", "0", "0", "1", "0"]),
    (
        5,
        "34/55",
        "6407/9899",
        &["5/11", "6/11", "0"],
        &["3035/9899", "0", "0", "3552/9899", "3312/9899", "0"],
    ),
];

pub fn reference_row(n: u64) -> Result<ReferenceRow> {
    let parse_all = |v: &[&str]| v.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>();
    let &(n, u, o, um, om) = REFERENCE
        .iter()
        .find(|r| r.0 == n)
        .ok_or_else(|| Error::InvalidInput(format!("no reference values for n = {n}")))?;
    Ok(ReferenceRow {
        n,
        unilateral_value: parse(u)?,
        ordinal_value: parse(o)?,
        unilateral_mixture: parse_all(um)?,
        ordinal_mixture: parse_all(om)?,
    })
}

/// Published values of the catalogue-restricted games: unilateral rows, then
/// all ordinal rows.
pub fn catalogue_reference_values() -> (Rational, Rational) {
    (
        parse("32093343/52579253").expect("literal"),
        parse("41/64").expect("literal"),
    )
}

fn floor_root(m: u64, p: u32) -> u64 {
    let mut r = (m as f64).powf(1.0 / p as f64).round() as u64;
    while r.pow(p) > m {
        r -= 1;
    }
    while (r + 1).pow(p) <= m {
        r += 1;
    }
    r
}

/// `floor(m^(2/3))`.
pub fn block_count(m: u64) -> u64 {
    floor_root(m * m, 3)
}

/// The bad profile for convex combinations of unilateral and duple
/// mechanisms. Candidate `m` is index `m - 1`.
///
/// With `k = floor(m^(1/3))` and `g = floor(m^(2/3))`, there are `m - 1`
/// voters putting 1 on their own candidate and 0 on candidate `m`, and `g`
/// voters valuing the block `M_j` (consecutive candidates `jk..(j+1)k`)
/// near 1 and candidate `m` at exactly `1 - 1/m^2`. Filler candidates get
/// distinct multiples of `1/m^4` in index order, so their total over all
/// voters stays below `2/m^2`; block members get `1 - t/m^3`.
pub fn bad_profile(m: usize) -> Result<Profile> {
    if m < 20 {
        return invalid("the bad profile needs m >= 20");
    }
    let (k, g) = (floor_root(m as u64, 3) as usize, block_count(m as u64) as usize);
    if k * g >= m {
        return invalid(format!("blocks of {k} over {g} voters would include candidate m = {m}"));
    }
    let mm = BigInt::from(m);
    let cube = &mm * &mm * &mm;
    let fourth = &cube * &mm;
    let tiny = |j: usize| Rational::new(BigInt::from(j), fourth.clone());
    let last = m - 1;
    let mut rows = Vec::with_capacity(m - 1 + g);
    for i in 0..last {
        let mut row = vec![int(0); m];
        row[i] = int(1);
        let mut j = 1;
        for (c, v) in row.iter_mut().enumerate().take(last) {
            if c != i {
                *v = tiny(j);
                j += 1;
            }
        }
        rows.push(row);
    }
    let near_one = Rational::one() - Rational::new(BigInt::one(), &mm * &mm);
    for b in 0..g {
        let mut row = vec![int(0); m];
        let block = b * k..(b + 1) * k;
        for (t, c) in block.clone().enumerate() {
            row[c] = Rational::one() - Rational::new(BigInt::from(t), cube.clone());
        }
        row[last] = near_one.clone();
        let mut j = 0;
        for (c, v) in row.iter_mut().enumerate().take(last) {
            if !block.contains(&c) {
                *v = tiny(j);
                j += 1;
            }
        }
        rows.push(row);
    }
    Profile::from_rows(rows)
}

/// A Condorcet cycle `A > B > C`, `B > C > A`, `C > A > B` with `eps = 1/k`.
pub fn condorcet_profile(k: u64) -> Result<Profile> {
    if k <= 6 {
        return invalid("the Condorcet profile needs k > 6");
    }
    let k = k as i64;
    Profile::from_rows(vec![
        vec![int(1), frac(1, k), int(0)],
        vec![int(0), int(1), frac(1, k)],
        vec![int(1) - frac(1, k), int(0), int(1)],
    ])
}

/// Two profiles on which a truthful mechanism with ratio near 1 must treat
/// voter 1 inconsistently; the second lowers voter 1's value for A to 1/10000.
pub fn dictator_pair() -> Result<(Profile, Profile)> {
    let rows = |a: Rational| {
        vec![
            vec![a, int(1), int(0)],
            vec![frac(8, 10), int(1), int(0)],
            vec![frac(8, 10), int(0), int(1)],
        ]
    };
    Ok((
        Profile::from_rows(rows(frac(7, 10)))?,
        Profile::from_rows(rows(frac(1, 10000)))?,
    ))
}

fn parse_param<'a>(query: &'a str, key: &str) -> Result<&'a str> {
    query
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=<integer>, got {query:?}")))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Resolves `catalogue#1..5`, `condorcet?k=K`, `bad?m=M`, `dictator#1..2`.
/// The aliases `thm6#i`, `thmneg?m=M` and `thmdm#i` are also accepted.
pub fn fixture(name: &str) -> Result<NamedFixture> {
    let (head, index, query) = match (name.split_once('#'), name.split_once('?')) {
        (Some((h, i)), _) => (h, Some(parse_u64(i)?), None),
        (None, Some((h, q))) => (h, None, Some(q)),
        (None, None) => (name, None, None),
    };
    let make = |payload, provenance: &str| NamedFixture {
        name: name.to_string(),
        payload,
        provenance: provenance.to_string(),
    };
    match (head, index, query) {
        ("catalogue" | "thm6", Some(i), None) if (1..=5).contains(&i) => {
            let tp = TypeProfile::from_sparse_counts(3, CATALOGUE[i as usize - 1])?;
            Ok(make(
                Payload::TypeProfile(tp),
                "restricted-game catalogue of bad 23000-voter type profiles",
            ))
        }
        ("condorcet", None, Some(q)) => {
            let k = parse_u64(parse_param(q, "k")?)?;
            Ok(make(
                Payload::Profile(condorcet_profile(k)?),
                "Condorcet cycle with eps = 1/k",
            ))
        }
        ("bad" | "thmneg", None, Some(q)) => {
            let m = parse_u64(parse_param(q, "m")?)?;
            Ok(make(
                Payload::Profile(bad_profile(m as usize)?),
                "bad profile for unilateral and duple combinations",
            ))
        }
        ("dictator" | "thmdm", Some(i), None) if (1..=2).contains(&i) => {
            let (a, b) = dictator_pair()?;
            let p = if i == 1 { a } else { b };
            Ok(make(
                Payload::Profile(p),
                "profile pair forcing a ratio bound on three voters",
            ))
        }
        _ => Err(Error::Parse(format!("unknown fixture {name:?}"))),
    }
}

pub fn fixture_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=5).map(|i| format!("catalogue#{i}")).collect();
    v.extend(["condorcet?k=1000", "bad?m=20", "dictator#1", "dictator#2"].map(String::from));
    v
}
