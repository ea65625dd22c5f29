//! Exact integer linear algebra over arbitrary-precision integers:
//! Hermite and Smith normal forms, integer system solving and lattice
//! membership.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "determinant of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        if n == 0 {
            return Ok(BigInt::one());
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let d = s * q;
                self.data[dst * self.cols + j] -= d;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let d = s * q;
                self.data[i * self.cols + dst] -= d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Row Hermite normal form `U·A = H`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`, in row order.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves `y·H = b` for the nonzero rows of `H` and returns
    /// `x = y·U`, so that `x·A = b`; `None` when `b` is not in the row
    /// lattice of `A`.
    pub fn solve_row_combination(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let y = match self.reduce(b)? {
            Some(y) => y,
            None => return Ok(None),
        };
        let mut x = vec![BigInt::zero(); self.u.rows()];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (k, xk) in x.iter_mut().enumerate() {
                let u = &self.u[(j, k)];
                if !u.is_zero() {
                    *xk += yj * u;
                }
            }
        }
        Ok(Some(x))
    }

    pub fn contains(&self, b: &[BigInt]) -> Result<bool> {
        Ok(self.reduce(b)?.is_some())
    }

    /// Coordinates of `b` with respect to the nonzero rows of `H`.
    fn reduce(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.h.cols() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                b.len(),
                self.h.cols()
            )));
        }
        let mut r = b.to_vec();
        let mut y = Vec::with_capacity(self.pivots.len());
        for (j, &p) in self.pivots.iter().enumerate() {
            let (q, rem) = r[p].div_rem(&self.h[(j, p)]);
            if !rem.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for c in p..self.h.cols() {
                    let h = &self.h[(j, c)];
                    if !h.is_zero() {
                        r[c] -= &q * h;
                    }
                }
            }
            y.push(q);
        }
        Ok(if r.iter().all(Zero::is_zero) {
            Some(y)
        } else {
            None
        })
    }

    /// Rows of `U` spanning the left kernel `{x : x·A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.u.rows())
            .map(|i| self.u.row_vec(i))
            .collect()
    }
}

/// Index of the nonzero entry of smallest absolute value among `rows` in
/// column `c` (first one on ties).
fn min_abs_row(m: &IntMatrix, rows: std::ops::Range<usize>, c: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in rows {
        let v = &m[(i, c)];
        if v.is_zero() {
            continue;
        }
        if best.is_none_or(|b| v.abs() < m[(b, c)].abs()) {
            best = Some(i);
        }
    }
    best
}

pub fn hnf(a: &IntMatrix) -> Hnf {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        loop {
            let p = match min_abs_row(&h, r..a.rows(), c) {
                Some(p) => p,
                None => break,
            };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut done = true;
            for i in r + 1..a.rows() {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.sub_row(i, r, &q);
                u.sub_row(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            h.sub_row(i, r, &q);
            u.sub_row(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Smith normal form `U·A·V = D`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries `d1 | d2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

pub fn snf(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                d.sub_row(i, t, &q);
                u.sub_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                d.sub_col(j, t, &q);
                v.sub_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold an offending row into row t
                let bad =
                    (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
                match bad {
                    Some(i) => {
                        let minus_one = BigInt::from(-1);
                        d.sub_row(t, i, &minus_one);
                        u.sub_row(t, i, &minus_one);
                    }
                    None => break,
                }
                continue;
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..m {
                if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
            } else if best.1 != t {
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { d, u, v }
}

/// Integer solution of `A·x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    hnf(&a.transpose()).solve_row_combination(b)
}

/// Whether `v` lies in the lattice spanned by the rows of `lattice`.
pub fn member(lattice: &IntMatrix, v: &[BigInt]) -> Result<bool> {
    hnf(lattice).contains(v)
}

/// Row lattice kept in Hermite normal form while vectors are added one at
/// a time. Stores no transformation; callers that need coefficients
/// re-solve against the accepted rows.
#[derive(Clone, Debug)]
pub struct IncrementalHnf {
    cols: usize,
    /// Basis rows sorted by pivot column; `rows[k].0` is the pivot.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IncrementalHnf {
    pub fn new(cols: usize) -> Self {
        IncrementalHnf {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &[BigInt])> {
        self.rows.iter().map(|(p, r)| (*p, r.as_slice()))
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` is a
    /// member.
    pub fn residual(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let q = r[*p].div_floor(&row[*p]);
            if !q.is_zero() {
                for c in *p..self.cols {
                    if !row[c].is_zero() {
                        r[c] -= &q * &row[c];
                    }
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.residual(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the lattice; returns whether the lattice changed.
    pub fn insert(&mut self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut cur = v.to_vec();
        let mut changed = false;
        let mut k = 0;
        loop {
            let Some(p) = cur.iter().position(|x| !x.is_zero()) else {
                break;
            };
            while k < self.rows.len() && self.rows[k].0 < p {
                k += 1;
            }
            if k == self.rows.len() || self.rows[k].0 > p {
                if cur[p].is_negative() {
                    cur.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                self.rows.insert(k, (p, cur));
                changed = true;
                break;
            }
            let row = &self.rows[k].1;
            let (a, b) = (&row[p], &cur[p]);
            if b.is_multiple_of(a) {
                let q = b / a;
                for c in p..self.cols {
                    if !row[c].is_zero() {
                        cur[c] -= &q * &row[c];
                    }
                }
                continue;
            }
            // replace the basis row by the gcd combination and keep the other
            // unimodular image as the new remainder
            let eg = a.extended_gcd(b);
            let (sa, sb) = (a / &eg.gcd, b / &eg.gcd);
            let mut new_row = vec![BigInt::zero(); self.cols];
            let mut rem = vec![BigInt::zero(); self.cols];
            for c in p..self.cols {
                new_row[c] = &eg.x * &row[c] + &eg.y * &cur[c];
                rem[c] = &sa * &cur[c] - &sb * &row[c];
            }
            self.rows[k].1 = new_row;
            cur = rem;
            changed = true;
        }
        if changed {
            self.normalize();
        }
        Ok(changed)
    }

    /// Makes pivots positive and reduces entries above each pivot.
    fn normalize(&mut self) {
        for k in 0..self.rows.len() {
            let p = self.rows[k].0;
            if self.rows[k].1[p].is_negative() {
                self.rows[k]
                    .1
                    .iter_mut()
                    .for_each(|x| *x = -std::mem::take(x));
            }
            let (upper, lower) = self.rows.split_at_mut(k);
            let piv = &lower[0].1;
            for (_, r) in upper.iter_mut() {
                let q = r[p].div_floor(&piv[p]);
                if !q.is_zero() {
                    for c in p..self.cols {
                        if !piv[c].is_zero() {
                            r[c] -= &q * &piv[c];
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);

        let r = hnf(&m(&[&[2], &[4]]));
        assert_eq!(r.h, m(&[&[2], &[0]]));

        let a = m(&[&[1, 2], &[3, 4]]);
        let r = hnf(&a);
        assert_eq!(r.h, m(&[&[1, 0], &[0, 2]]));
        assert_eq!(r.u.mul(&a).unwrap(), r.h);
        assert_eq!(r.u.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[3, 0], &[0, 1]])).invariant_factors(), v(&[1, 3]));
        let a = m(&[&[2, 4], &[6, 8]]);
        let s = snf(&a);
        assert_eq!(s.invariant_factors(), v(&[2, 4]));
        assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(snf(&IntMatrix::zeros(2, 3)).d.is_zero());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_integer(&IntMatrix::identity(2), &v(&[5, -7])).unwrap(),
            Some(v(&[5, -7]))
        );
        assert_eq!(solve_integer(&m(&[&[2]]), &v(&[3])).unwrap(), None);
        assert_eq!(
            solve_integer(&m(&[&[1, 1], &[0, 2]]), &v(&[3, 4])).unwrap(),
            Some(v(&[1, 2]))
        );
        assert!(solve_integer(&m(&[&[1, 1]]), &v(&[1, 2])).is_err());
        assert!(member(&m(&[&[2, 0], &[0, 3]]), &v(&[4, 9])).unwrap());
        assert!(!member(&m(&[&[2, 0], &[0, 3]]), &v(&[1, 9])).unwrap());
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).det().unwrap(), BigInt::from(-2));
        assert_eq!(
            m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).det().unwrap(),
            BigInt::from(-5)
        );
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), BigInt::zero());
    }

    #[test]
    fn incremental_matches_batch() {
        let rows: [&[i64]; 4] = [&[4, 6, 2], &[6, 9, 3], &[0, 5, 10], &[2, 3, 1]];
        let mut inc = IncrementalHnf::new(3);
        for r in rows {
            inc.insert(&v(r)).unwrap();
        }
        let batch = hnf(&m(&rows));
        let got: Vec<Vec<BigInt>> = inc.basis().map(|(_, r)| r.to_vec()).collect();
        let want: Vec<Vec<BigInt>> = (0..batch.rank()).map(|i| batch.h.row_vec(i)).collect();
        assert_eq!(got, want);
        assert!(!inc.insert(&v(&[2, 8, 11])).unwrap());
    }
}
