//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Matrices are small (a handful of
//! rows), so the algorithms favour clarity over asymptotics.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::simplex::{self, LpOutcome};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

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
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix row");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(v);
            }
        }
        m
    }

    pub fn from_big_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row");
            for (j, v) in r.iter().enumerate() {
                m.data[i * cols + j] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect()
            })
            .collect();
        rational_rank(rows)
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

    /// row[target] += c * row[source]
    fn add_row(&mut self, target: usize, source: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(source, j) * c;
            self.data[target * self.cols + j] += v;
        }
    }

    /// col[target] += c * col[source]
    fn add_col(&mut self, target: usize, source: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, source) * c;
            self.data[i * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `A = U·S·V` with `U`, `V` unimodular and `S` diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < s.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SnfDecomposition { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                s.add_row(i, t, &-q.clone());
                // U <- U * (I + q E_it)
                u.add_col(t, i, &q);
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                s.add_col(j, t, &-q.clone());
                // V <- (I + q E_tj) * V
                v.add_row(t, j, &q);
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = s.get(t, t).clone();
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.get(i, j).is_multiple_of(&piv)));
            if let Some(i) = offender {
                s.add_row(t, i, &BigInt::one());
                u.add_col(i, t, &-BigInt::one());
                continue;
            }
            break;
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_col(t);
        }
    }
    SnfDecomposition { u, s, v }
}

/// Row-style Hermite normal form: the nonzero rows of the echelon basis of the
/// row lattice, pivots positive, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&x, &y| h.get(x, col).abs().cmp(&h.get(y, col).abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(h.get(r, col));
                h.add_row(i, r, &-q);
                if !h.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, col).is_zero() {
            continue;
        }
        if h.get(r, col).is_negative() {
            h.negate_row(r);
        }
        for i in 0..r {
            let q = h.get(i, col).div_floor(h.get(r, col));
            if !q.is_zero() {
                h.add_row(i, r, &-q);
            }
        }
        r += 1;
    }
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| h.row(i)).collect();
    IntMatrix::from_big_rows(n, &rows)
}

/// A full-rank sublattice of `Z^n` in Hermite form; used to enumerate and
/// reduce coset representatives.
#[derive(Clone, Debug)]
pub struct FullLattice {
    hnf: IntMatrix,
}

impl FullLattice {
    /// Lattice generated by `rows`, which must span `Q^n`.
    pub fn new(generators: &IntMatrix) -> Option<Self> {
        let hnf = hermite_normal_form(generators);
        if hnf.rows() != generators.cols() {
            return None;
        }
        Some(FullLattice { hnf })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn index(&self) -> BigInt {
        (0..self.hnf.rows())
            .map(|i| self.hnf.get(i, i).clone())
            .product()
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for j in 0..self.hnf.rows() {
            let q = v[j].div_floor(self.hnf.get(j, j));
            if q.is_zero() {
                continue;
            }
            for (k, vk) in v.iter_mut().enumerate().skip(j) {
                *vk -= &q * self.hnf.get(j, k);
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// All canonical coset representatives, in lexicographic order.
    pub fn coset_representatives(&self) -> Vec<Vec<BigInt>> {
        let n = self.hnf.rows();
        let mut out: Vec<Vec<BigInt>> = vec![vec![]];
        for j in 0..n {
            let bound = self.hnf.get(j, j).clone();
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = BigInt::zero();
                while x < bound {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    next.push(p);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &rows[rank][col];
            for j in col..ncols {
                let v = &f * &rows[rank][j];
                rows[i][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a list of integer vectors of common length.
pub fn rank_of(vectors: &[Vec<i64>]) -> usize {
    rational_rank(
        vectors
            .iter()
            .map(|v| v.iter().map(|&x| rat(x)).collect())
            .collect(),
    )
}

/// Solves `A x = b` over `Q`; free variables are set to zero.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "right-hand side has wrong length");
    let mut aug: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> = a
                .row(i)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let piv = aug[row][col].clone();
        for v in aug[row].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..m {
            if i == row || aug[i][col].is_zero() {
                continue;
            }
            let f = aug[i][col].clone();
            for j in col..=n {
                let v = &f * &aug[row][j];
                aug[i][j] -= v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if aug[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

/// A basis of the rational kernel of `a` (vectors `x` with `a x = 0`).
pub fn rational_kernel(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            a.row(i)
                .into_iter()
                .map(BigRational::from_integer)
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..m {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in 0..n {
                let v = &f * &rows[r][j];
                rows[i][j] -= v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![BigRational::zero(); n];
            x[fc] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = -rows[i][fc].clone();
            }
            x
        })
        .collect()
}

/// The primitive integer vector on the open ray through `v`.
pub fn primitive_vector(v: &[BigRational]) -> Result<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(scaled.into_iter().map(|x| x / &g).collect())
}

fn cone_constraints(generators: &[Vec<i64>], dim: usize) -> Vec<Vec<BigRational>> {
    (0..dim)
        .map(|k| generators.iter().map(|g| rat(g[k])).collect())
        .collect()
}

/// Decides `omega = sum a_i g_i` with every `a_i > 0`.
///
/// Maximizes a slack `eps <= 1` with `a_i = eps + b_i`, `b_i >= 0`; strict
/// feasibility holds iff the optimum is positive.
pub fn in_strict_cone(generators: &[Vec<i64>], omega: &[BigRational]) -> bool {
    let dim = omega.len();
    if generators.is_empty() {
        return omega.iter().all(Zero::is_zero);
    }
    let n = generators.len();
    // variables: eps, b_1..b_n, s
    let mut a = Vec::with_capacity(dim + 1);
    for k in 0..dim {
        let sum: i64 = generators.iter().map(|g| g[k]).sum();
        let mut row = vec![rat(sum)];
        row.extend(generators.iter().map(|g| rat(g[k])));
        row.push(BigRational::zero());
        a.push(row);
    }
    let mut cap = vec![BigRational::one()];
    cap.extend(std::iter::repeat_n(BigRational::zero(), n));
    cap.push(BigRational::one());
    a.push(cap);
    let mut b = omega.to_vec();
    b.push(BigRational::one());
    let mut c = vec![BigRational::zero(); n + 2];
    c[0] = BigRational::one();
    match simplex::maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => false,
    }
}

/// Decides `omega = sum a_i g_i` with every `a_i >= 0`.
pub fn in_closed_cone(generators: &[Vec<i64>], omega: &[BigRational]) -> bool {
    if generators.is_empty() {
        return omega.iter().all(Zero::is_zero);
    }
    simplex::feasible(&cone_constraints(generators, omega.len()), omega)
}

/// Index of the lattice generated by `sub` inside its saturation
/// `(Q·sub) ∩ Z^n`. `hyperplane_lattice` must span the same rational subspace.
pub fn saturation_index(sub: &[Vec<i64>], hyperplane_lattice: &[Vec<i64>]) -> Result<BigInt> {
    let rs = rank_of(sub);
    let rl = rank_of(hyperplane_lattice);
    let mut both = sub.to_vec();
    both.extend_from_slice(hyperplane_lattice);
    if rs != rl || rank_of(&both) != rs {
        return Err(Error::RankMismatch);
    }
    if sub.is_empty() {
        return Ok(BigInt::one());
    }
    let cols = sub[0].len();
    let snf = smith_normal_form(&IntMatrix::from_rows(cols, sub));
    Ok(snf
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_zero())
        .product())
}

/// Integer solution of `p·e = target` for primitive `e`, by extended gcd.
pub fn solve_linear_form(e: &[i64], target: i64) -> Option<Vec<i64>> {
    // running combination: g = sum coeff_i e_i
    let mut g: i64 = 0;
    let mut coeff = vec![0i64; e.len()];
    for (i, &ei) in e.iter().enumerate() {
        if ei == 0 {
            continue;
        }
        if g == 0 {
            g = ei;
            coeff[i] = 1;
            continue;
        }
        let ext = g.extended_gcd(&ei);
        for c in coeff.iter_mut().take(i) {
            *c *= ext.x;
        }
        coeff[i] = ext.y;
        g = ext.gcd;
    }
    if g == 0 || target % g != 0 {
        return None;
    }
    let f = target / g;
    Some(coeff.into_iter().map(|c| c * f).collect())
}
