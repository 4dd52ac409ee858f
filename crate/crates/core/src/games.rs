//! Zero-sum games between a designer choosing mechanisms (rows, maximizing)
//! and an adversary choosing type profiles (columns, minimizing).

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::limits::game_entry;
use crate::lp;
use crate::mechanism::MechanismSpec;
use crate::quasi::{column_limit_from_env, enumerate_type_profiles, TypeProfile};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameMatrix {
    pub rows: Vec<MechanismSpec>,
    pub columns: Vec<TypeProfile>,
    #[serde(serialize_with = "ser_matrix")]
    pub entries: Vec<Vec<Rational>>,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(rational::format).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl GameMatrix {
    /// A game with plain numeric entries and placeholder labels.
    pub fn from_entries(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let width = entries.first().map_or(0, Vec::len);
        if entries.is_empty() || width == 0 || entries.iter().any(|r| r.len() != width) {
            return invalid("game matrix must be a nonempty rectangle");
        }
        Ok(Self {
            rows: Vec::new(),
            columns: Vec::new(),
            entries,
        })
    }

    pub fn row_count(&self) -> usize {
        self.entries.len()
    }

    pub fn column_count(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r][c]
    }

    pub fn row_label(&self, r: usize) -> String {
        self.rows.get(r).map_or_else(|| format!("r{r}"), MechanismSpec::label)
    }

    pub fn column_label(&self, c: usize) -> String {
        self.columns.get(c).map_or_else(|| format!("c{c}"), TypeProfile::label)
    }

    /// Sub-game on the given columns.
    pub fn restrict_columns(&self, cols: &[usize]) -> GameMatrix {
        GameMatrix {
            rows: self.rows.clone(),
            columns: if self.columns.is_empty() {
                Vec::new()
            } else {
                cols.iter().map(|&c| self.columns[c].clone()).collect()
            },
            entries: self
                .entries
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect(),
        }
    }

    /// Matrix as CSV with row and column labels; entries as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for c in 0..self.column_count() {
            let _ = write!(out, ",{}", self.column_label(c));
        }
        out.push('\n');
        for (r, row) in self.entries.iter().enumerate() {
            out.push_str(&self.row_label(r));
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// `U1..Um`.
pub fn unilateral_rows(m: usize) -> Vec<MechanismSpec> {
    (1..=m).map(MechanismSpec::Unilateral).collect()
}

/// `U1..Um` followed by `D_q` for `q = floor(n/2)+1 ..= n`.
pub fn all_rows(m: usize, n: u64) -> Vec<MechanismSpec> {
    let mut rows = unilateral_rows(m);
    rows.extend((n / 2 + 1..=n).map(MechanismSpec::Duple));
    rows
}

/// Unilateral rows against all canonical type profiles.
pub fn build_game_g(m: usize, n: u64) -> Result<GameMatrix> {
    build_game_g_with_limit(m, n, column_limit_from_env())
}

pub fn build_game_g_with_limit(m: usize, n: u64, limit: u128) -> Result<GameMatrix> {
    let cols = enumerate_type_profiles(m, n, true, limit)?;
    build_restricted_game(unilateral_rows(m), cols)
}

/// Unilateral and duple rows against all canonical type profiles.
pub fn build_game_h(m: usize, n: u64) -> Result<GameMatrix> {
    build_game_h_with_limit(m, n, column_limit_from_env())
}

pub fn build_game_h_with_limit(m: usize, n: u64, limit: u128) -> Result<GameMatrix> {
    let cols = enumerate_type_profiles(m, n, true, limit)?;
    build_restricted_game(all_rows(m, n), cols)
}

pub fn build_restricted_game(rows: Vec<MechanismSpec>, columns: Vec<TypeProfile>) -> Result<GameMatrix> {
    if rows.is_empty() || columns.is_empty() {
        return invalid("game needs at least one row and one column");
    }
    let m = columns[0].m();
    if columns.iter().any(|c| c.m() != m) {
        return invalid("columns have different candidate counts");
    }
    let entries = rows
        .iter()
        .map(|r| columns.iter().map(|c| game_entry(r, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(GameMatrix { rows, columns, entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameSolution {
    #[serde(with = "rational::as_str")]
    pub value: Rational,
    #[serde(with = "rational::vec_as_str")]
    pub row_mixture: Vec<Rational>,
    #[serde(with = "rational::vec_as_str")]
    pub column_mixture: Vec<Rational>,
    pub certificate_checked: bool,
}

impl GameSolution {
    pub fn column_support(&self) -> Vec<usize> {
        support(&self.column_mixture)
    }

    pub fn row_support(&self) -> Vec<usize> {
        support(&self.row_mixture)
    }
}

fn support(v: &[Rational]) -> Vec<usize> {
    (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
}

/// Exact value and optimal mixtures. The LP has one constraint per row of
/// whichever of the game and its transposed complement is shorter.
pub fn solve_zero_sum_game(g: &GameMatrix) -> Result<GameSolution> {
    let (value, row_mixture, column_mixture) = if g.row_count() > g.column_count() {
        // B = K - A^T: value(B) = K - value(A), with the players' roles swapped
        let k = g.entries.iter().flatten().max().expect("nonempty") + Rational::one();
        let b: Vec<Vec<Rational>> = (0..g.column_count())
            .map(|c| (0..g.row_count()).map(|r| &k - &g.entries[r][c]).collect())
            .collect();
        let (v, p, q) = solve_raw(&b)?;
        (k - v, q, p)
    } else {
        solve_raw(&g.entries)?
    };
    let sol = GameSolution {
        value,
        row_mixture,
        column_mixture,
        certificate_checked: false,
    };
    check_certificate(g, sol)
}

/// Value, row mixture, column mixture with the LP constraints on rows.
fn solve_raw(a: &[Vec<Rational>]) -> Result<(Rational, Vec<Rational>, Vec<Rational>)> {
    let min = a.iter().flatten().min().expect("nonempty").clone();
    let shift = if min.is_positive() {
        Rational::zero()
    } else {
        Rational::one() - min
    };
    let shifted: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|v| v + &shift).collect()).collect();
    let cols = a[0].len();
    let ones_c = vec![Rational::one(); cols];
    let ones_r = vec![Rational::one(); a.len()];
    // max 1.y s.t. A' y <= 1; value of A' is 1 / sum(y)
    let s = lp::maximize(&ones_c, &shifted, &ones_r)?;
    let v = Rational::one() / &s.objective;
    let q = s.x.iter().map(|y| y * &v).collect();
    let p = s.duals.iter().map(|z| z * &v).collect();
    Ok((v - shift, p, q))
}

/// Checks both mixtures are distributions and that they hold the payoff
/// at or above and at or below the value respectively.
fn check_certificate(g: &GameMatrix, mut s: GameSolution) -> Result<GameSolution> {
    let dist = |v: &[Rational]| v.iter().all(|x| !x.is_negative()) && v.iter().sum::<Rational>() == Rational::one();
    let ok = dist(&s.row_mixture)
        && dist(&s.column_mixture)
        && column_payoffs(g, &s.row_mixture).iter().all(|x| x >= &s.value)
        && row_payoffs(g, &s.column_mixture).iter().all(|x| x <= &s.value);
    if !ok {
        return Err(crate::Error::InvalidInput(
            "game certificate failed verification".into(),
        ));
    }
    s.certificate_checked = true;
    Ok(s)
}

fn column_payoffs(g: &GameMatrix, p: &[Rational]) -> Vec<Rational> {
    (0..g.column_count())
        .map(|c| {
            (0..g.row_count())
                .filter(|&r| !p[r].is_zero())
                .map(|r| &p[r] * &g.entries[r][c])
                .sum()
        })
        .collect()
}

fn row_payoffs(g: &GameMatrix, q: &[Rational]) -> Vec<Rational> {
    g.entries
        .iter()
        .map(|row| {
            row.iter()
                .zip(q)
                .filter(|(_, w)| !w.is_zero())
                .map(|(a, w)| a * w)
                .sum()
        })
        .collect()
}

/// Re-solves on the support of the column mixture so that the column player
/// uses at most as many columns as there are rows.
pub fn extract_small_support(g: &GameMatrix, s: &GameSolution) -> Result<GameSolution> {
    let supp = s.column_support();
    if supp.len() <= g.row_count() {
        return Ok(s.clone());
    }
    let sub = g.restrict_columns(&supp);
    // the restricted LP has one constraint per row, so a basic optimum uses
    // at most that many columns
    let (v, _, q_sub) = solve_raw(&sub.entries)?;
    if v != s.value {
        return invalid("support restriction changed the game value");
    }
    let mut q = vec![Rational::zero(); g.column_count()];
    for (i, &c) in supp.iter().enumerate() {
        q[c] = q_sub[i].clone();
    }
    check_certificate(
        g,
        GameSolution {
            value: v,
            row_mixture: s.row_mixture.clone(),
            column_mixture: q,
            certificate_checked: false,
        },
    )
}

/// Worst-column payoff of a row mixture.
pub fn verify_mixture_value(g: &GameMatrix, row_mixture: &[Rational]) -> Result<Rational> {
    if row_mixture.len() != g.row_count()
        || row_mixture.iter().any(|x| x.is_negative())
        || row_mixture.iter().sum::<Rational>() != Rational::one()
    {
        return invalid("row mixture must be a distribution over the rows");
    }
    Ok(column_payoffs(g, row_mixture).into_iter().min().expect("nonempty"))
}

/// Worst-row payoff of a column mixture.
pub fn verify_column_mixture_value(g: &GameMatrix, column_mixture: &[Rational]) -> Result<Rational> {
    if column_mixture.len() != g.column_count()
        || column_mixture.iter().any(|x| x.is_negative())
        || column_mixture.iter().sum::<Rational>() != Rational::one()
    {
        return invalid("column mixture must be a distribution over the columns");
    }
    Ok(row_payoffs(g, column_mixture).into_iter().max().expect("nonempty"))
}

/// Row mixture as `(weight, row)` terms, dropping zero weights.
pub fn mixture_spec(g: &GameMatrix, row_mixture: &[Rational]) -> Result<MechanismSpec> {
    let terms = g
        .rows
        .iter()
        .zip(row_mixture)
        .filter(|(_, w)| !w.is_zero())
        .map(|(r, w)| (w.clone(), r.clone()))
        .collect();
    MechanismSpec::mixture(terms)
}
