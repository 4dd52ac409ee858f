//! Exact global minimization of a quadratic over a bounded polyhedron
//! `{x >= 0, E x = e, G x >= g}` by enumerating faces.
//!
//! A face is a support set `F` (coordinates outside `F` are zero) together
//! with a set of tight inequalities. On each face the stationarity system of
//! the objective restricted to the face's affine hull is solved exactly with
//! fraction-free elimination. Faces whose system is singular are skipped:
//! along a null direction the objective is constant, so a minimizer in such a
//! face can be slid to a lower-dimensional face with a nonsingular system.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};

/// `coeffs . x` against `rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearConstraint {
    #[serde(with = "rational::vec_as_str")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "rational::as_str")]
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }
}

/// Minimize `x' Q x + c' x + k` subject to `x >= 0`, equalities and
/// `>=` inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticProgram {
    dim: usize,
    #[serde(serialize_with = "ser_matrix")]
    quad: Vec<Vec<Rational>>,
    #[serde(with = "rational::vec_as_str")]
    lin: Vec<Rational>,
    #[serde(with = "rational::as_str")]
    constant: Rational,
    equalities: Vec<LinearConstraint>,
    inequalities: Vec<LinearConstraint>,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(rational::format).collect::<Vec<_>>())?;
    }
    seq.end()
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * v).sum()
}

impl QuadraticProgram {
    /// Checks shapes, symmetry, and that some equality has only positive
    /// coefficients, which together with `x >= 0` bounds the region.
    pub fn new(
        quad: Vec<Vec<Rational>>,
        lin: Vec<Rational>,
        constant: Rational,
        equalities: Vec<LinearConstraint>,
        inequalities: Vec<LinearConstraint>,
    ) -> Result<Self> {
        let dim = lin.len();
        if dim == 0 || dim > 24 {
            return invalid(format!("dimension {dim} outside 1..=24"));
        }
        if quad.len() != dim || quad.iter().any(|r| r.len() != dim) {
            return invalid("quadratic form must be square of the program's dimension");
        }
        if (0..dim).any(|i| (0..i).any(|j| quad[i][j] != quad[j][i])) {
            return invalid("quadratic form must be symmetric");
        }
        if equalities.iter().chain(&inequalities).any(|c| c.coeffs.len() != dim) {
            return invalid("constraint length differs from the dimension");
        }
        if !equalities.iter().any(|c| c.coeffs.iter().all(|v| v.is_positive())) {
            return invalid("feasible region is not certified bounded: no equality with all coefficients positive");
        }
        Ok(Self {
            dim,
            quad,
            lin,
            constant,
            equalities,
            inequalities,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn quad(&self) -> &[Vec<Rational>] {
        &self.quad
    }

    pub fn lin(&self) -> &[Rational] {
        &self.lin
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn equalities(&self) -> &[LinearConstraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[LinearConstraint] {
        &self.inequalities
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        let mut v = self.constant.clone() + dot(&self.lin, x);
        for (i, row) in self.quad.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            v += &x[i] * dot(row, x);
        }
        v
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && x.iter().all(|v| !v.is_negative())
            && self.equalities.iter().all(|c| c.lhs(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.lhs(x) >= c.rhs)
    }

    /// Same program with one more `>=` row.
    pub fn with_inequality(mut self, c: LinearConstraint) -> Result<Self> {
        if c.coeffs.len() != self.dim {
            return invalid("constraint length differs from the dimension");
        }
        self.inequalities.push(c);
        Ok(self)
    }
}

/// Support set and tight inequalities of the face holding the minimizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub support: Vec<usize>,
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QpCertificate {
    #[serde(with = "rational::as_str")]
    pub min_value: Rational,
    #[serde(with = "rational::vec_as_str")]
    pub argmin: Vec<Rational>,
    pub face: Face,
    /// `(support, tight set)` pairs visited.
    pub faces_examined: u64,
    /// Faces with a unique, feasible stationary point.
    pub stationary_points: u64,
    /// Faces whose restricted system was singular.
    pub singular_faces: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct QpOptions {
    /// On singular faces, check that the objective is constant over the
    /// feasible stationary set (slow; for audits).
    pub audit_degenerate: bool,
}

pub fn minimize_qp(qp: &QuadraticProgram) -> Result<QpCertificate> {
    minimize_qp_with(qp, QpOptions::default())
}

pub fn minimize_qp_with(qp: &QuadraticProgram, opts: QpOptions) -> Result<QpCertificate> {
    let d = qp.dim;
    let scaled = Scaled::new(qp);
    let k = qp.inequalities.len();
    if k > 16 {
        return invalid("at most 16 inequalities are supported");
    }
    let mut best: Option<(Rational, Vec<Rational>, Face)> = None;
    let mut faces = 0u64;
    let mut stationary = 0u64;
    let mut singular = 0u64;
    for fmask in 1u32..(1u32 << d) {
        let free: Vec<usize> = (0..d).filter(|&i| fmask >> i & 1 == 1).collect();
        for smask in 0u32..(1u32 << k) {
            faces += 1;
            let tight: Vec<usize> = (0..k).filter(|&i| smask >> i & 1 == 1).collect();
            let rows: Vec<usize> = (0..qp.equalities.len())
                .chain(tight.iter().map(|&t| qp.equalities.len() + t))
                .collect();
            let Some(indep) = independent_rows(&scaled, &rows, &free) else {
                continue;
            };
            let outcome = match solve_face::<i128>(&scaled, &free, &indep) {
                Ok(o) => o,
                Err(Overflow) => solve_face::<BigInt>(&scaled, &free, &indep).expect("big integers do not overflow"),
            };
            let Some((nums, det)) = outcome else {
                singular += 1;
                if opts.audit_degenerate {
                    audit_singular_face(qp, &free, &indep, &scaled)?;
                }
                continue;
            };
            let mut x = vec![Rational::zero(); d];
            for (pos, &i) in free.iter().enumerate() {
                x[i] = Rational::new(nums[pos].clone(), det.clone());
            }
            if !qp.is_feasible(&x) {
                continue;
            }
            stationary += 1;
            let v = qp.evaluate(&x);
            if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                best = Some((
                    v,
                    x,
                    Face {
                        support: free.clone(),
                        tight: tight.clone(),
                    },
                ));
            }
        }
    }
    let Some((min_value, argmin, face)) = best else {
        return Err(Error::Infeasible);
    };
    Ok(QpCertificate {
        min_value,
        argmin,
        face,
        faces_examined: faces,
        stationary_points: stationary,
        singular_faces: singular,
    })
}

/// Integer-scaled copy of the program data.
struct Scaled {
    /// `2 L Q`, with `L` clearing all objective denominators.
    hess: Vec<Vec<BigInt>>,
    /// `-L c`.
    neg_lin: Vec<BigInt>,
    /// Equalities followed by inequalities, each scaled to integers.
    rows: Vec<(Vec<BigInt>, BigInt)>,
}

impl Scaled {
    fn new(qp: &QuadraticProgram) -> Self {
        let l = rational::lcm_of_denominators(qp.quad.iter().flatten().chain(&qp.lin));
        let lr = Rational::from_integer(l);
        let two = Rational::from_integer(BigInt::from(2));
        let hess = qp
            .quad
            .iter()
            .map(|r| r.iter().map(|v| (v * &lr * &two).to_integer()).collect())
            .collect();
        let neg_lin = qp.lin.iter().map(|v| -(v * &lr).to_integer()).collect();
        let rows = qp
            .equalities
            .iter()
            .chain(&qp.inequalities)
            .map(|c| {
                let s = Rational::from_integer(rational::lcm_of_denominators(c.coeffs.iter().chain([&c.rhs])));
                (
                    c.coeffs.iter().map(|v| (v * &s).to_integer()).collect(),
                    (&c.rhs * &s).to_integer(),
                )
            })
            .collect();
        Self { hess, neg_lin, rows }
    }
}

#[derive(Debug)]
struct Overflow;

/// Exact integer arithmetic with an overflow signal.
trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn from_big(v: &BigInt) -> std::result::Result<Self, Overflow>;
    fn to_big(&self) -> BigInt;
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    /// `(a*b - c*d) / e`, exact.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> std::result::Result<Self, Overflow>;
}

impl Ring for i128 {
    fn from_big(v: &BigInt) -> std::result::Result<Self, Overflow> {
        v.to_i128().ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> std::result::Result<Self, Overflow> {
        let ab = a.checked_mul(*b).ok_or(Overflow)?;
        let cd = c.checked_mul(*d).ok_or(Overflow)?;
        let diff = ab.checked_sub(cd).ok_or(Overflow)?;
        debug_assert_eq!(diff % e, 0);
        Ok(diff / e)
    }
}

impl Ring for BigInt {
    fn from_big(v: &BigInt) -> std::result::Result<Self, Overflow> {
        Ok(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> std::result::Result<Self, Overflow> {
        let num = a * b - c * d;
        debug_assert!(num.is_multiple_of(e));
        Ok(num / e)
    }
}

/// Fraction-free Gauss-Jordan on an `n x (n+1)` augmented matrix. Returns
/// `(numerators, det)` with `x_i = numerators[i] / det`, or `None` when the
/// matrix is singular.
fn bareiss_solve<T: Ring>(mut a: Vec<Vec<T>>) -> std::result::Result<Option<(Vec<T>, T)>, Overflow> {
    let n = a.len();
    let mut prev = T::unit();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_nil()) else {
            return Ok(None);
        };
        a.swap(k, p);
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..=n {
                if j == k {
                    continue;
                }
                a[i][j] = T::cross_div(&a[k][k], &a[i][j], &a[i][k], &a[k][j], &prev)?;
            }
            a[i][k] = T::nil();
        }
        prev = a[k][k].clone();
    }
    let nums = a.iter().map(|r| r[n].clone()).collect();
    Ok(Some((nums, prev)))
}

/// Indices (into `rows`) of a maximal independent subset of the constraint
/// rows restricted to `free`, or `None` if the restricted system is
/// inconsistent.
fn independent_rows(s: &Scaled, rows: &[usize], free: &[usize]) -> Option<Vec<usize>> {
    // echelon basis kept as (pivot column, row with rhs)
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut keep = Vec::new();
    for &r in rows {
        let (coeffs, rhs) = &s.rows[r];
        let mut v: Vec<BigInt> = free.iter().map(|&i| coeffs[i].clone()).collect();
        v.push(rhs.clone());
        for (pc, b) in &basis {
            if v[*pc].is_zero() {
                continue;
            }
            let (f, g) = (v[*pc].clone(), b[*pc].clone());
            for j in 0..v.len() {
                v[j] = &v[j] * &g - &b[j] * &f;
            }
            let gcd = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !gcd.is_zero() && !gcd.is_one() {
                for x in v.iter_mut() {
                    *x /= &gcd;
                }
            }
        }
        let last = v.len() - 1;
        match (0..last).find(|&j| !v[j].is_zero()) {
            Some(pc) => {
                basis.push((pc, v));
                keep.push(r);
            }
            None if v[last].is_zero() => {}
            None => return None,
        }
    }
    Some(keep)
}

/// Solves the stationarity system on one face.
fn solve_face<T: Ring>(
    s: &Scaled,
    free: &[usize],
    rows: &[usize],
) -> std::result::Result<Option<(Vec<BigInt>, BigInt)>, Overflow> {
    let nf = free.len();
    let n = nf + rows.len();
    let mut a: Vec<Vec<T>> = Vec::with_capacity(n);
    for &i in free {
        let mut r = Vec::with_capacity(n + 1);
        for &j in free {
            r.push(T::from_big(&s.hess[i][j])?);
        }
        for &c in rows {
            r.push(T::from_big(&-&s.rows[c].0[i])?);
        }
        r.push(T::from_big(&s.neg_lin[i])?);
        a.push(r);
    }
    for &c in rows {
        let mut r = Vec::with_capacity(n + 1);
        for &j in free {
            r.push(T::from_big(&s.rows[c].0[j])?);
        }
        r.extend((0..rows.len()).map(|_| T::nil()));
        r.push(T::from_big(&s.rows[c].1)?);
        a.push(r);
    }
    Ok(bareiss_solve(a)?.map(|(nums, det)| {
        let nums = nums[..nf].iter().map(Ring::to_big).collect();
        (nums, det.to_big())
    }))
}

/// On a singular face, every feasible stationary point must give the same
/// objective value; checked on a particular solution and its shifts along
/// a basis of the solution space's directions.
fn audit_singular_face(qp: &QuadraticProgram, free: &[usize], rows: &[usize], s: &Scaled) -> Result<()> {
    let nf = free.len();
    let n = nf + rows.len();
    let mut m: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for &i in free {
        let mut r: Vec<Rational> = free
            .iter()
            .map(|&j| Rational::from_integer(s.hess[i][j].clone()))
            .collect();
        r.extend(rows.iter().map(|&c| Rational::from_integer(-&s.rows[c].0[i])));
        r.push(Rational::from_integer(s.neg_lin[i].clone()));
        m.push(r);
    }
    for &c in rows {
        let mut r: Vec<Rational> = free
            .iter()
            .map(|&j| Rational::from_integer(s.rows[c].0[j].clone()))
            .collect();
        r.extend((0..rows.len()).map(|_| Rational::zero()));
        r.push(Rational::from_integer(s.rows[c].1.clone()));
        m.push(r);
    }
    let Some((particular, null)) = affine_solutions(m, n) else {
        return Ok(());
    };
    let embed = |y: &[Rational]| {
        let mut x = vec![Rational::zero(); qp.dim];
        for (pos, &i) in free.iter().enumerate() {
            x[i] = y[pos].clone();
        }
        x
    };
    let base = embed(&particular);
    let v0 = qp.evaluate(&base);
    for dir in &null {
        let shifted: Vec<Rational> = particular.iter().zip(dir).map(|(a, b)| a + b).collect();
        let v1 = qp.evaluate(&embed(&shifted));
        if v1 != v0 {
            return invalid("objective varies over a face's stationary set");
        }
    }
    Ok(())
}

/// Particular solution and null-space basis of `m[..][..n] y = m[..][n]`,
/// or `None` if inconsistent.
fn affine_solutions(mut m: Vec<Vec<Rational>>, n: usize) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][n].clone();
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let null = free_cols
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Some((particular, null))
}
