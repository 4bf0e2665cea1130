//! Exact integer linear algebra over the lattice: unbounded integers, lattice
//! points, dense integer matrices, Hermite and Smith normal forms.
//!
//! The single normal-form convention used throughout is the *column-style*
//! Hermite normal form: `H = A * U` with `U` unimodular, obtained by column
//! operations. For a square full-rank `A` this makes `H` lower triangular with
//! positive diagonal and every entry left of a diagonal pivot reduced into
//! `[0, pivot)`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Unbounded signed integer. All arithmetic in the crate is exact.
pub type Int = num_bigint::BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// A point of the lattice `Z^n`, stored as its coordinate vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticePoint {
    coords: Vec<Int>,
}

impl LatticePoint {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticePoint { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticePoint::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint::new(vec![Int::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Int {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), other.dim());
        LatticePoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), other.dim());
        LatticePoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, s: &Int) -> LatticePoint {
        LatticePoint::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &LatticePoint) -> Int {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Gcd of the coordinates (nonnegative; 0 for the zero vector).
    pub fn content(&self) -> Int {
        self.coords
            .iter()
            .fold(Int::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content. The zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticePoint {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticePoint::new(self.coords.iter().map(|c| c / &g).collect())
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Int> {
        self.row(i).to_vec()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `self * p` with `p` as a column vector.
    pub fn map_point(&self, p: &LatticePoint) -> LatticePoint {
        assert_eq!(self.cols, p.dim(), "matrix/point dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Int::zero();
            for j in 0..self.cols {
                acc += self.get(i, j) * p.coord(j);
            }
            out.push(acc);
        }
        LatticePoint::new(out)
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a: Vec<Vec<Int>> = (0..n).map(|i| self.row_vec(i)).collect();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -det } else { det })
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.column_echelon().rank
    }

    /// Column-style Hermite normal form: returns `(H, U)` with `H = self * U`,
    /// `U` unimodular. Requires full column rank.
    pub fn hermite_normal_form(&self) -> Result<(IntMatrix, IntMatrix)> {
        let ech = self.column_echelon();
        if ech.rank < self.cols {
            return Err(Error::RankDeficient {
                rank: ech.rank,
                cols: self.cols,
            });
        }
        Ok((ech.h, ech.u))
    }

    fn column_echelon(&self) -> ColumnEchelon {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.cols);
        let mut pivot_rows = Vec::new();
        let mut t = 0usize;
        for i in 0..self.rows {
            if t == self.cols {
                break;
            }
            // clear row i to the right of column t using gcd column combinations
            for j in t + 1..self.cols {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let a = h.get(i, t).clone();
                let b = h.get(i, j).clone();
                let eg = a.extended_gcd(&b);
                let (g, x, y) = (eg.gcd, eg.x, eg.y);
                let p = &a / &g;
                let q = &b / &g;
                for r in 0..self.rows {
                    let ct = h.get(r, t).clone();
                    let cj = h.get(r, j).clone();
                    h.set(r, t, &x * &ct + &y * &cj);
                    h.set(r, j, &p * &cj - &q * &ct);
                }
                for r in 0..self.cols {
                    let ct = u.get(r, t).clone();
                    let cj = u.get(r, j).clone();
                    u.set(r, t, &x * &ct + &y * &cj);
                    u.set(r, j, &p * &cj - &q * &ct);
                }
            }
            if h.get(i, t).is_zero() {
                continue;
            }
            if h.get(i, t).is_negative() {
                for r in 0..self.rows {
                    let v = -h.get(r, t).clone();
                    h.set(r, t, v);
                }
                for r in 0..self.cols {
                    let v = -u.get(r, t).clone();
                    u.set(r, t, v);
                }
            }
            // reduce entries left of the pivot into [0, pivot)
            let pivot = h.get(i, t).clone();
            for j in 0..t {
                let q = h.get(i, j).div_floor(&pivot);
                if q.is_zero() {
                    continue;
                }
                for r in 0..self.rows {
                    let v = h.get(r, j) - &q * h.get(r, t);
                    h.set(r, j, v);
                }
                for r in 0..self.cols {
                    let v = u.get(r, j) - &q * u.get(r, t);
                    u.set(r, j, v);
                }
            }
            pivot_rows.push(i);
            t += 1;
        }
        ColumnEchelon {
            h,
            u,
            rank: t,
            pivot_rows,
        }
    }

    /// Smith normal form: returns `(S, U, V)` with `S = U * self * V` diagonal,
    /// diagonal entries nonnegative and forming a divisibility chain, `U`, `V`
    /// unimodular.
    pub fn smith_normal_form(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut s = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                // pivot: nonzero entry of least absolute value in the trailing block
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        if s.get(i, j).is_zero() {
                            continue;
                        }
                        if best
                            .map(|(bi, bj)| s.get(i, j).abs() < s.get(bi, bj).abs())
                            .unwrap_or(true)
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return finish_snf(s, u, v, t);
                };
                swap_rows(&mut s, &mut u, t, pi);
                swap_cols(&mut s, &mut v, t, pj);
                let mut clean = true;
                for i in t + 1..self.rows {
                    if s.get(i, t).is_zero() {
                        continue;
                    }
                    let q = s.get(i, t).div_floor(s.get(t, t));
                    row_sub(&mut s, &mut u, i, t, &q);
                    if !s.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    if s.get(t, j).is_zero() {
                        continue;
                    }
                    let q = s.get(t, j).div_floor(s.get(t, t));
                    col_sub(&mut s, &mut v, j, t, &q);
                    if !s.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // enforce divisibility: pivot must divide the trailing block
                let mut fixed = true;
                'outer: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !s.get(i, j).mod_floor(s.get(t, t)).is_zero() {
                            let one = Int::one();
                            row_add(&mut s, &mut u, t, i, &one);
                            fixed = false;
                            break 'outer;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        finish_snf(s, u, v, n)
    }
}

struct ColumnEchelon {
    h: IntMatrix,
    u: IntMatrix,
    rank: usize,
    #[allow(dead_code)]
    pivot_rows: Vec<usize>,
}

fn finish_snf(
    mut s: IntMatrix,
    mut u: IntMatrix,
    v: IntMatrix,
    upto: usize,
) -> (IntMatrix, IntMatrix, IntMatrix) {
    for t in 0..upto {
        if s.get(t, t).is_negative() {
            let cols = s.cols();
            for j in 0..cols {
                let val = -s.get(t, j).clone();
                s.set(t, j, val);
            }
            for j in 0..u.cols() {
                let val = -u.get(t, j).clone();
                u.set(t, j, val);
            }
        }
    }
    (s, u, v)
}

fn swap_rows(s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..s.cols() {
        let x = s.get(a, j).clone();
        let y = s.get(b, j).clone();
        s.set(a, j, y);
        s.set(b, j, x);
    }
    for j in 0..u.cols() {
        let x = u.get(a, j).clone();
        let y = u.get(b, j).clone();
        u.set(a, j, y);
        u.set(b, j, x);
    }
}

fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..s.rows() {
        let x = s.get(i, a).clone();
        let y = s.get(i, b).clone();
        s.set(i, a, y);
        s.set(i, b, x);
    }
    for i in 0..v.rows() {
        let x = v.get(i, a).clone();
        let y = v.get(i, b).clone();
        v.set(i, a, y);
        v.set(i, b, x);
    }
}

/// row[i] -= q * row[t]
fn row_sub(s: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &Int) {
    for j in 0..s.cols() {
        let val = s.get(i, j) - q * s.get(t, j);
        s.set(i, j, val);
    }
    for j in 0..u.cols() {
        let val = u.get(i, j) - q * u.get(t, j);
        u.set(i, j, val);
    }
}

/// row[t] += q * row[i]
fn row_add(s: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize, q: &Int) {
    for j in 0..s.cols() {
        let val = s.get(t, j) + q * s.get(i, j);
        s.set(t, j, val);
    }
    for j in 0..u.cols() {
        let val = u.get(t, j) + q * u.get(i, j);
        u.set(t, j, val);
    }
}

/// col[j] -= q * col[t]
fn col_sub(s: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &Int) {
    for i in 0..s.rows() {
        let val = s.get(i, j) - q * s.get(i, t);
        s.set(i, j, val);
    }
    for i in 0..v.rows() {
        let val = v.get(i, j) - q * v.get(i, t);
        v.set(i, j, val);
    }
}

/// Binomial coefficient `C(n, k)` for machine-sized arguments.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// Binomial coefficient `C(n, k)` as a counting coefficient: zero whenever
/// `n < k`, including negative `n`.
pub fn binomial_int(n: &Int, k: u64) -> Int {
    if *n < int(k as i64) {
        return Int::zero();
    }
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * (n - int(i as i64)) / int((i + 1) as i64);
    }
    acc
}
