//! Arithmetic in a prime field `F_p` with `p < 2^63`, dense matrices over it,
//! and the search for primes `p ≡ 1 (mod L)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 63)).contains(&p), "modulus out of range");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        powmod(a, e, self.p)
    }

    /// `a^e` for signed `e`; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: u64, e: i64) -> u64 {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.pow(
                self.inv(a).expect("negative power of zero"),
                e.unsigned_abs(),
            )
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.p - 2))
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        if let Some(small) = v.to_i64() {
            return self.from_i64(small);
        }
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    pub fn from_rational(&self, v: &BigRational) -> Result<u64> {
        if v.is_integer() {
            return Ok(self.from_bigint(v.numer()));
        }
        let den = self.from_bigint(v.denom());
        let inv = self.inv(den).ok_or(Error::DivisionByZeroAtSpecialization)?;
        Ok(self.mul(self.from_bigint(v.numer()), inv))
    }

    /// Symmetric lift into `(-p/2, p/2]`, for display.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            -((self.p - a) as i64)
        } else {
            a as i64
        }
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A random prime with exactly `bits` bits and `p ≡ 1 (mod l)`.
pub fn random_prime_1_mod<R: Rng>(rng: &mut R, bits: u32, l: u64) -> u64 {
    assert!((8..=62).contains(&bits), "prime size must be 8..=62 bits");
    let lo = 1u64 << (bits - 1);
    let hi = (1u64 << bits) - 1;
    assert!(l < lo / 4, "root order too large for the prime size");
    let step = if l.is_multiple_of(2) { l } else { 2 * l };
    let kmin = (lo - 1).div_ceil(step);
    let kmax = (hi - 1) / step;
    loop {
        let k = rng.gen_range(kmin..=kmax);
        let p = k * step + 1;
        if is_prime(p) {
            return p;
        }
    }
}

/// Dense square or rectangular matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, f: &PrimeField, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &PrimeField, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn sub(&self, f: &PrimeField, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Solves `self · X = rhs` for square invertible `self`.
    pub fn solve(&self, f: &PrimeField, rhs: &FpMatrix) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let w = n + rhs.cols;
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut r: Vec<u64> = (0..n).map(|j| self.get(i, j)).collect();
                r.extend((0..rhs.cols).map(|j| rhs.get(i, j)));
                r
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&i| a[i][col] != 0)?;
            a.swap(col, p);
            let inv = f.inv(a[col][col])?;
            for v in a[col].iter_mut() {
                *v = f.mul(*v, inv);
            }
            let pivot = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == col || row[col] == 0 {
                    continue;
                }
                let c = row[col];
                for j in col..w {
                    row[j] = f.sub(row[j], f.mul(c, pivot[j]));
                }
            }
        }
        let mut x = Self::zeros(n, rhs.cols);
        for i in 0..n {
            for j in 0..rhs.cols {
                x.set(i, j, a[i][n + j]);
            }
        }
        Some(x)
    }

    pub fn inverse(&self, f: &PrimeField) -> Option<FpMatrix> {
        self.solve(f, &Self::identity(self.rows))
    }

    pub fn solve_vec(&self, f: &PrimeField, b: &[u64]) -> Option<Vec<u64>> {
        let rhs = FpMatrix::from_columns(self.rows, &[b.to_vec()]);
        self.solve(f, &rhs).map(|x| x.column(0))
    }

    /// Entries rendered as symmetric residues.
    pub fn signed_rows(&self, f: &PrimeField) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| f.signed(self.get(i, j))).collect())
            .collect()
    }
}

/// Reduces a rational with possibly negative sign to `F_p`; shorthand used in tests.
pub fn rational_residue(f: &PrimeField, num: i64, den: i64) -> u64 {
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    debug_assert!(!r.denom().is_zero() && r.denom().is_positive());
    f.from_rational(&r).expect("denominator invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        let primes = [
            2u64,
            3,
            5,
            97,
            7919,
            2_147_483_647,
            4_611_686_018_427_387_847,
        ];
        for p in primes {
            assert!(is_prime(p), "{p}");
        }
        let composite = [
            1u64,
            4,
            561,
            1_373_653,
            3_215_031_751,
            4_611_686_018_427_387_849,
        ];
        for n in composite {
            assert!(!is_prime(n), "{n}");
        }
        // brute-force agreement on small range
        for n in 0..2000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "{n}");
        }
    }

    #[test]
    fn prime_search_respects_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for l in [1u64, 2, 6, 12, 60] {
            let p = random_prime_1_mod(&mut rng, 40, l);
            assert!(is_prime(p));
            assert_eq!(p % l, 1 % l);
            assert_eq!(64 - p.leading_zeros(), 40);
        }
    }

    #[test]
    fn field_ops() {
        let f = PrimeField::new(101);
        assert_eq!(f.mul(f.inv(7).unwrap(), 7), 1);
        assert_eq!(f.from_i64(-1), 100);
        assert_eq!(rational_residue(&f, 1, 2), 51);
        assert_eq!(f.signed(100), -1);
        assert_eq!(f.pow_signed(3, -1), f.inv(3).unwrap());
    }

    #[test]
    fn matrix_inverse() {
        let f = PrimeField::new(1_000_003);
        let mut m = FpMatrix::zeros(3, 3);
        let vals = [[2, 1, 0], [0, 1, 5], [3, 0, 1]];
        for i in 0..3 {
            for j in 0..3 {
                m.set(i, j, vals[i][j]);
            }
        }
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        let singular = FpMatrix::zeros(2, 2);
        assert!(singular.inverse(&f).is_none());
    }
}
