//! Laurent combinations with rational exponents, polynomials in an auxiliary
//! variable `t`, and exact evaluation in a prime field.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{prime_factors, random_prime_1_mod, PrimeField};

pub type Exponent = Vec<Ratio<i64>>;

/// A finite sum `Σ c_q e^q` with `q ∈ Q^dim`.
///
/// Exponents are stored as integer numerators over one shared denominator,
/// kept minimal; zero coefficients never appear.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElement {
    dim: usize,
    den: i64,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl KElement {
    pub fn zero(dim: usize) -> Self {
        KElement {
            dim,
            den: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        let mut k = Self::zero(dim);
        if !c.is_zero() {
            k.terms.insert(vec![0; dim], c);
        }
        k
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn monomial(exp: &[Ratio<i64>], c: BigRational) -> Self {
        let den = exp.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let num: Vec<i64> = exp.iter().map(|q| q.numer() * (den / q.denom())).collect();
        let mut k = KElement {
            dim: exp.len(),
            den,
            terms: BTreeMap::new(),
        };
        if !c.is_zero() {
            k.terms.insert(num, c);
        }
        k.normalize();
        k
    }

    /// `e^q` for an integral exponent.
    pub fn integral_monomial(exp: &[i64]) -> Self {
        let mut k = Self::zero(exp.len());
        k.terms.insert(exp.to_vec(), BigRational::one());
        k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The shared exponent denominator.
    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Numerator exponent vectors (over `den()`) with coefficients.
    pub fn raw_terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigRational)> + '_ {
        self.terms
            .iter()
            .map(move |(num, c)| (num.iter().map(|&n| Ratio::new(n, self.den)).collect(), c))
    }

    pub fn coefficient(&self, exp: &[Ratio<i64>]) -> BigRational {
        let probe = Self::monomial(exp, BigRational::one());
        if probe.den > self.den || self.den % probe.den != 0 {
            return BigRational::zero();
        }
        let f = self.den / probe.den;
        let key: Vec<i64> = probe
            .terms
            .keys()
            .next()
            .unwrap()
            .iter()
            .map(|n| n * f)
            .collect();
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.den = 1;
            return;
        }
        let mut g = self.den;
        for num in self.terms.keys() {
            for &n in num {
                g = g.gcd(&n);
                if g == 1 {
                    return;
                }
            }
        }
        if g > 1 {
            self.den /= g;
            let old = std::mem::take(&mut self.terms);
            self.terms = old
                .into_iter()
                .map(|(k, c)| (k.into_iter().map(|n| n / g).collect(), c))
                .collect();
        }
    }

    fn rescaled(&self, den: i64) -> BTreeMap<Vec<i64>, BigRational> {
        let f = den / self.den;
        self.terms
            .iter()
            .map(|(k, c)| (k.iter().map(|n| n * f).collect(), c.clone()))
            .collect()
    }

    fn check_dim(&self, other: &KElement) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &KElement) -> Result<KElement> {
        self.check_dim(other)?;
        let den = self.den.lcm(&other.den);
        let mut terms = self.rescaled(den);
        for (k, c) in other.rescaled(den) {
            *terms.entry(k).or_insert_with(BigRational::zero) += c;
        }
        let mut out = KElement {
            dim: self.dim,
            den,
            terms,
        };
        out.normalize();
        Ok(out)
    }

    pub fn try_mul(&self, other: &KElement) -> Result<KElement> {
        self.check_dim(other)?;
        let den = self.den.lcm(&other.den);
        let a = self.rescaled(den);
        let b = other.rescaled(den);
        let mut terms: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let k: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                *terms.entry(k).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        let mut out = KElement {
            dim: self.dim,
            den,
            terms,
        };
        out.normalize();
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> KElement {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out.normalize();
        out
    }

    pub fn pow(&self, n: u32) -> KElement {
        let mut acc = KElement::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power of a monomial, negative exponents allowed.
    pub fn monomial_pow(&self, n: i64) -> Result<KElement> {
        let (num, c) = self.terms.iter().next().ok_or(Error::BaseNotMonomial)?;
        if self.terms.len() != 1 {
            return Err(Error::BaseNotMonomial);
        }
        let coeff = if n >= 0 {
            num_traits::pow(c.clone(), n as usize)
        } else {
            num_traits::pow(c.recip(), n.unsigned_abs() as usize)
        };
        let mut out = KElement {
            dim: self.dim,
            den: self.den,
            terms: BTreeMap::new(),
        };
        out.terms.insert(num.iter().map(|x| x * n).collect(), coeff);
        out.normalize();
        Ok(out)
    }

    /// Negates every exponent (the dual of a sum of characters).
    pub fn dual(&self) -> KElement {
        KElement {
            dim: self.dim,
            den: self.den,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().map(|n| -n).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies an exponent map termwise and collects like terms.
    pub fn map_exponents<F>(&self, out_dim: usize, f: F) -> KElement
    where
        F: Fn(&[Ratio<i64>]) -> Exponent,
    {
        let images: Vec<(Exponent, &BigRational)> = self
            .terms()
            .map(|(exp, c)| {
                let img = f(&exp);
                assert_eq!(
                    img.len(),
                    out_dim,
                    "exponent map has wrong target dimension"
                );
                (img, c)
            })
            .collect();
        let den = images
            .iter()
            .flat_map(|(img, _)| img.iter())
            .fold(1i64, |acc, q| acc.lcm(q.denom()));
        let mut terms: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (img, c) in images {
            let key = img.iter().map(|q| q.numer() * (den / q.denom())).collect();
            *terms.entry(key).or_insert_with(BigRational::zero) += c;
        }
        let mut out = KElement {
            dim: out_dim,
            den,
            terms,
        };
        out.normalize();
        out
    }

    /// True when every exponent is integral.
    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (exp, c) in self.terms() {
            let mono = format_exponent(&exp, names);
            let s = match (mono.as_str(), c) {
                ("1", c) => c.to_string(),
                (m, c) if c.is_one() => m.to_string(),
                (m, c) if *c == -BigRational::one() => format!("-{m}"),
                (m, c) => format!("{c}*{m}"),
            };
            parts.push(s);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

/// Renders `e^q` as a product of powers of the named generators.
pub fn format_exponent(exp: &[Ratio<i64>], names: &[String]) -> String {
    let factors: Vec<String> = exp
        .iter()
        .zip(names)
        .filter(|(q, _)| !q.is_zero())
        .map(|(q, n)| {
            if q.is_one() {
                n.clone()
            } else if q.is_integer() {
                format!("{n}^{}", q.numer())
            } else {
                format!("{n}^({q})")
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        f.write_str(&self.fmt_with(&names))
    }
}

impl std::ops::Add for &KElement {
    type Output = KElement;
    fn add(self, rhs: &KElement) -> KElement {
        self.try_add(rhs).expect("K-element dimension mismatch")
    }
}

impl std::ops::Sub for &KElement {
    type Output = KElement;
    fn sub(self, rhs: &KElement) -> KElement {
        self.try_add(&-rhs).expect("K-element dimension mismatch")
    }
}

impl std::ops::Mul for &KElement {
    type Output = KElement;
    fn mul(self, rhs: &KElement) -> KElement {
        self.try_mul(rhs).expect("K-element dimension mismatch")
    }
}

impl std::ops::Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

/// A Laurent polynomial in `t` with `KElement` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    dim: usize,
    coeffs: BTreeMap<i64, KElement>,
}

impl TPoly {
    pub fn zero(dim: usize) -> Self {
        TPoly {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: KElement) -> Self {
        Self::term(0, c)
    }

    /// `c · t^n`
    pub fn term(n: i64, c: KElement) -> Self {
        let mut p = Self::zero(c.dim());
        if !c.is_zero() {
            p.coeffs.insert(n, c);
        }
        p
    }

    pub fn t_pow(dim: usize, n: i64) -> Self {
        Self::term(n, KElement::one(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, &KElement)> {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn coefficient(&self, n: i64) -> KElement {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| KElement::zero(self.dim))
    }

    pub fn try_add(&self, other: &TPoly) -> Result<TPoly> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            let cur = out.coefficient(*n);
            let s = cur.try_add(c)?;
            if s.is_zero() {
                out.coeffs.remove(n);
            } else {
                out.coeffs.insert(*n, s);
            }
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &TPoly) -> Result<TPoly> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = TPoly::zero(self.dim);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out = out.try_add(&TPoly::term(a + b, ca.try_mul(cb)?))?;
            }
        }
        Ok(out)
    }
}

impl std::ops::Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        self.try_add(rhs).expect("t-polynomial dimension mismatch")
    }
}

impl std::ops::Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        self.try_mul(rhs).expect("t-polynomial dimension mismatch")
    }
}

/// `Σ_{s=0}^{l-1} t^{-s}`, i.e. `(1 - t^{-l}) / (1 - t^{-1})`.
pub fn geometric_quotient(l: i64, dim: usize) -> Result<TPoly> {
    if l < 1 {
        return Err(Error::NonpositiveL(l));
    }
    let mut p = TPoly::zero(dim);
    for s in 0..l {
        p = &p + &TPoly::t_pow(dim, -s);
    }
    Ok(p)
}

/// Keeps the terms `c_n t^n` with `l | n` and substitutes `t^l = base`.
///
/// This is `(1/l) Σ_{ζ ∈ μ_l} P(ζ·base^{1/l})` written without radicals.
pub fn root_of_unity_filter(p: &TPoly, l: i64, base: &KElement) -> Result<KElement> {
    if l < 1 {
        return Err(Error::NonpositiveL(l));
    }
    if !base.is_monomial() {
        return Err(Error::BaseNotMonomial);
    }
    if base.dim() != p.dim() {
        return Err(Error::DimensionMismatch(base.dim(), p.dim()));
    }
    let mut out = KElement::zero(p.dim());
    for (n, c) in p.coefficients() {
        if n.rem_euclid(l) != 0 {
            continue;
        }
        out = out.try_add(&c.try_mul(&base.monomial_pow(n / l)?)?)?;
    }
    Ok(out)
}

/// A point of `Spec Z[T]` over `F_p` at which rational exponents evaluate:
/// `e^{λ_i} ↦ y_i^L`, so `e^{q·λ} ↦ Π y_i^{L q_i}` whenever `L q` is integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationPoint {
    pub field: PrimeField,
    pub root_order: u64,
    pub y: Vec<u64>,
    pub zeta: u64,
    /// `x_i = y_i^L` and `x_i^{-1}`.
    x: Vec<u64>,
    x_inv: Vec<u64>,
}

impl SpecializationPoint {
    pub fn random<R: Rng>(rng: &mut R, dim: usize, root_order: u64, prime_bits: u32) -> Self {
        let p = random_prime_1_mod(rng, prime_bits, root_order);
        let field = PrimeField::new(p);
        Self::random_in(rng, field, dim, root_order)
    }

    /// A fresh point in an existing field (the prime must be `1 mod root_order`).
    pub fn random_in<R: Rng>(rng: &mut R, field: PrimeField, dim: usize, root_order: u64) -> Self {
        let p = field.modulus();
        assert_eq!((p - 1) % root_order, 0, "prime is not 1 mod the root order");
        let y = (0..dim).map(|_| rng.gen_range(1..p)).collect();
        let factors = prime_factors(root_order);
        let zeta = loop {
            let g = rng.gen_range(2..p);
            let z = field.pow(g, (p - 1) / root_order);
            if factors.iter().all(|q| field.pow(z, root_order / q) != 1) {
                break z;
            }
        };
        Self::from_parts(field, root_order, y, zeta)
    }

    /// `p` must be prime, `1 mod root_order`; `zeta` a primitive `root_order`-th root.
    pub fn from_parts(field: PrimeField, root_order: u64, y: Vec<u64>, zeta: u64) -> Self {
        let x: Vec<u64> = y.iter().map(|&v| field.pow(v, root_order)).collect();
        let x_inv = x
            .iter()
            .map(|&v| field.inv(v).expect("nonzero coordinate"))
            .collect();
        SpecializationPoint {
            field,
            root_order,
            y,
            zeta,
            x,
            x_inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// The point `y ↦ y^{-1}`: evaluating there is evaluating the dual.
    pub fn inverse(&self) -> Self {
        Self::from_parts(
            self.field,
            self.root_order,
            self.y
                .iter()
                .map(|&v| self.field.inv(v).expect("nonzero coordinate"))
                .collect(),
            self.zeta,
        )
    }

    /// `x_i = y_i^L`, the value of `e^{λ_i}`.
    pub fn x(&self, i: usize) -> u64 {
        self.x[i]
    }

    /// Value of `e^{n·λ}` for an integral exponent.
    pub fn eval_integral(&self, n: &[i64]) -> u64 {
        let f = &self.field;
        let mut v = 1;
        for (i, &e) in n.iter().enumerate() {
            v = match e {
                0 => v,
                1 => f.mul(v, self.x[i]),
                -1 => f.mul(v, self.x_inv[i]),
                e if e > 0 => f.mul(v, f.pow(self.x[i], e as u64)),
                e => f.mul(v, f.pow(self.x_inv[i], e.unsigned_abs())),
            };
        }
        v
    }

    fn scaled_exponent(&self, num: i64, den: i64) -> Result<i64> {
        let l = self.root_order as i64;
        if l % den != 0 {
            return Err(Error::DenominatorNotDividingL(den, self.root_order));
        }
        num.checked_mul(l / den).ok_or(Error::Overflow)
    }

    /// Value of `e^q` times `ζ^{L (q·w)}`; `w = 0` gives the plain evaluation.
    pub fn eval_monomial(&self, exp: &[Ratio<i64>], w: Option<&[i64]>) -> Result<u64> {
        let f = &self.field;
        // one inversion for all negative powers
        let (mut v, mut below) = (1, 1);
        for (i, q) in exp.iter().enumerate() {
            let e = self.scaled_exponent(*q.numer(), *q.denom())?;
            if e >= 0 {
                v = f.mul(v, f.pow(self.y[i], e as u64));
            } else {
                below = f.mul(below, f.pow(self.y[i], e.unsigned_abs()));
            }
        }
        if below != 1 {
            v = f.mul(
                v,
                f.inv(below)
                    .expect("specialization coordinates are nonzero"),
            );
        }
        if let Some(w) = w {
            let mut phase = Ratio::new(0i64, 1);
            for (q, &wi) in exp.iter().zip(w) {
                phase += q * wi;
            }
            let e = self.scaled_exponent(*phase.numer(), *phase.denom())?;
            v = f.mul(
                v,
                f.pow_signed(self.zeta, e.rem_euclid(self.root_order as i64)),
            );
        }
        Ok(v)
    }
}

/// Exact value of `x` at `s`.
pub fn specialize(x: &KElement, s: &SpecializationPoint) -> Result<u64> {
    specialize_twisted(x, s, None)
}

/// Value of `x` at `s` with each monomial `e^q` weighted by `ζ^{L (q·w)}`.
pub fn specialize_twisted(x: &KElement, s: &SpecializationPoint, w: Option<&[i64]>) -> Result<u64> {
    if x.dim() != s.dim() {
        return Err(Error::DimensionMismatch(x.dim(), s.dim()));
    }
    let f = &s.field;
    let l = s.root_order as i64;
    if l % x.den() != 0 {
        return Err(Error::DenominatorNotDividingL(x.den(), s.root_order));
    }
    let mut acc = 0;
    for (exp, c) in x.terms() {
        let v = f.mul(f.from_rational(c)?, s.eval_monomial(&exp, w)?);
        acc = f.add(acc, v);
    }
    Ok(acc)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn exponent(v: &[i64]) -> Exponent {
    v.iter().map(|&n| Ratio::from_integer(n)).collect()
}

/// `true` when every coefficient is an integer.
pub fn has_integer_coefficients(x: &KElement) -> bool {
    x.raw_terms().all(|(_, c)| c.is_integer())
}

/// Sum of absolute values of the coefficients (a crude size measure for reports).
pub fn coefficient_weight(x: &KElement) -> BigRational {
    x.raw_terms().map(|(_, c)| c.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn ring_examples() {
        let s = KElement::integral_monomial(&[1]);
        let one = KElement::one(1);
        let lhs = &(&one - &s) * &(&one + &s);
        let rhs = &one - &s.pow(2);
        assert_eq!(lhs, rhs);
        let x = &s + &KElement::zero(1);
        assert_eq!(x, s);
        let half = KElement::monomial(&[q(1, 2)], BigRational::one());
        assert_eq!(half.den(), 2);
        assert_eq!(&half * &half, s);
        assert_eq!((&half * &half).den(), 1);
        let a = KElement::one(2);
        assert_eq!(one.try_add(&a), Err(Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn geometric_quotient_examples() {
        assert_eq!(geometric_quotient(1, 1).unwrap(), TPoly::t_pow(1, 0));
        let two = geometric_quotient(2, 1).unwrap();
        assert_eq!(two, &TPoly::t_pow(1, 0) + &TPoly::t_pow(1, -1));
        assert_eq!(geometric_quotient(3, 1).unwrap().coefficients().count(), 3);
        assert_eq!(geometric_quotient(0, 1), Err(Error::NonpositiveL(0)));
    }

    #[test]
    fn filter_examples() {
        let b = KElement::integral_monomial(&[1, 0]);
        let tl = TPoly::t_pow(2, 3);
        assert_eq!(root_of_unity_filter(&tl, 3, &b).unwrap(), b);
        assert!(root_of_unity_filter(&TPoly::t_pow(2, 1), 2, &b)
            .unwrap()
            .is_zero());
        let c = |v: i64| KElement::constant(2, rational(v, 1));
        let p = &(&TPoly::term(-2, c(3)) + &TPoly::term(3, c(5))) + &TPoly::term(4, c(7));
        let want = &b.monomial_pow(-1).unwrap().scale(&rational(3, 1))
            + &b.monomial_pow(2).unwrap().scale(&rational(7, 1));
        assert_eq!(root_of_unity_filter(&p, 2, &b).unwrap(), want);
        let two_terms = &b + &KElement::one(2);
        assert_eq!(
            root_of_unity_filter(&p, 2, &two_terms),
            Err(Error::BaseNotMonomial)
        );
    }

    #[test]
    fn specialization_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = SpecializationPoint::random(&mut rng, 2, 6, 40);
        assert_eq!(specialize(&KElement::one(2), &s).unwrap(), 1);
        let a = KElement::integral_monomial(&[1, 0]);
        let b = KElement::integral_monomial(&[-1, 0]);
        assert_eq!(specialize(&(&a * &b), &s).unwrap(), 1);
        let third = KElement::monomial(&[q(1, 3), q(0, 1)], BigRational::one());
        let cube = specialize(&third, &s).unwrap();
        assert_eq!(s.field.pow(cube, 3), s.x(0));
        let fifth = KElement::monomial(&[q(1, 5), q(0, 1)], BigRational::one());
        assert_eq!(
            specialize(&fifth, &s),
            Err(Error::DenominatorNotDividingL(5, 6))
        );
        assert_eq!(s.field.pow(s.zeta, 6), 1);
        assert_ne!(s.field.pow(s.zeta, 2), 1);
        assert_ne!(s.field.pow(s.zeta, 3), 1);
    }

    #[test]
    fn formatting() {
        let names = vec!["a".to_string(), "b".to_string()];
        let x = &KElement::one(2) - &KElement::monomial(&[q(1, 1), q(-1, 2)], rational(2, 1));
        assert_eq!(x.fmt_with(&names), "1 - 2*a*b^(-1/2)");
    }
}
