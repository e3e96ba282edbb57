//! Wall detection between two stability conditions, ray classification and
//! the common blow-up.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::git::{Anticone, GitDatum};
use crate::lattice::{
    in_closed_cone, primitive_vector, rank_of, rat, rational_kernel, solve_rational, IntMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossing {
    pub plus: GitDatum,
    pub minus: GitDatum,
    /// Primitive normal to the wall, positive on the plus chamber.
    pub e: Vec<i64>,
    /// Point where the segment from `ω_+` to `ω_-` meets the wall.
    pub omega0: Vec<BigRational>,
    pub m_plus: Vec<usize>,
    pub m_minus: Vec<usize>,
    pub m_zero: Vec<usize>,
    pub k: Vec<i64>,
    pub l: Vec<i64>,
    pub n: i64,
    pub crepant: bool,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_q(a: &[i64], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(&x, y)| y * rat(x)).sum()
}

/// Primitive normals of the hyperplanes spanned by `r-1` characters, up to sign.
fn candidate_normals(d: &GitDatum) -> Vec<Vec<i64>> {
    let r = d.rank();
    if r == 1 {
        return vec![vec![1]];
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    for subset in (0..d.m()).combinations(r - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| d.character(i).to_vec()).collect();
        if rank_of(&rows) != r - 1 {
            continue;
        }
        let ker = rational_kernel(&IntMatrix::from_rows(r, &rows));
        debug_assert_eq!(ker.len(), 1);
        let v = primitive_vector(&ker[0]).expect("kernel vector is nonzero");
        let mut v: Vec<i64> = v
            .iter()
            .map(|x| x.to_i64().expect("small normal"))
            .collect();
        if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn in_hyperplane(d: &GitDatum, normal: &[i64]) -> Vec<Vec<i64>> {
    d.characters()
        .iter()
        .filter(|c| dot(c, normal) == 0)
        .cloned()
        .collect()
}

pub fn analyze_wall(plus: &GitDatum, minus: &GitDatum) -> Result<WallCrossing> {
    if plus.rank() != minus.rank() || plus.characters() != minus.characters() {
        return Err(Error::InvalidDatum(
            "the two stability conditions must share rank and characters".into(),
        ));
    }
    let min_plus = plus.minimal_anticones()?;
    let min_minus = minus.minimal_anticones()?;
    if min_plus == min_minus {
        return Err(Error::SameChamber);
    }
    let r = plus.rank();
    let (wp, wm) = (plus.omega(), minus.omega());

    let mut crossings: Vec<(Vec<i64>, Vec<BigRational>)> = Vec::new();
    for normal in candidate_normals(plus) {
        let gens = in_hyperplane(plus, &normal);
        let sp = dot_q(&normal, wp);
        let sm = dot_q(&normal, wm);
        if sp.is_zero() || sm.is_zero() {
            let on = if sp.is_zero() { wp } else { wm };
            if in_closed_cone(&gens, on) {
                return Err(Error::NotAdjacent(
                    "a stability vector lies on a wall".into(),
                ));
            }
            continue;
        }
        if sp.is_positive() == sm.is_positive() {
            continue;
        }
        let t = &sp / (&sp - &sm);
        let omega0: Vec<BigRational> = wp.iter().zip(wm).map(|(a, b)| a + &t * (b - a)).collect();
        if in_closed_cone(&gens, &omega0) {
            let e = if sp.is_positive() {
                normal
            } else {
                normal.iter().map(|x| -x).collect()
            };
            crossings.push((e, omega0));
        }
    }
    if crossings.len() != 1 {
        return Err(Error::NotAdjacent(format!(
            "the segment crosses {} walls",
            crossings.len()
        )));
    }
    let (e, omega0) = crossings.pop().unwrap();
    if r >= 2 {
        for subset in (0..plus.m()).combinations(r - 2) {
            let gens: Vec<Vec<i64>> = subset.iter().map(|&i| plus.character(i).to_vec()).collect();
            if in_closed_cone(&gens, &omega0) {
                return Err(Error::NotAdjacent(
                    "the segment meets the wall in codimension two".into(),
                ));
            }
        }
    }

    let pair: Vec<i64> = plus.characters().iter().map(|c| dot(c, &e)).collect();
    let m_plus = (0..plus.m()).filter(|&i| pair[i] > 0).collect_vec();
    let m_minus = (0..plus.m()).filter(|&i| pair[i] < 0).collect_vec();
    let m_zero = (0..plus.m()).filter(|&i| pair[i] == 0).collect_vec();
    let k = pair.iter().map(|&p| p.max(0)).collect_vec();
    let l = pair.iter().map(|&p| (-p).max(0)).collect_vec();
    let n = m_plus.iter().map(|&i| pair[i]).sum();
    let crepant = pair.iter().sum::<i64>() == 0;
    Ok(WallCrossing {
        plus: plus.clone(),
        minus: minus.clone(),
        e,
        omega0,
        m_plus,
        m_minus,
        m_zero,
        k,
        l,
        n,
        crepant,
    })
}

impl WallCrossing {
    pub fn rank(&self) -> usize {
        self.plus.rank()
    }

    pub fn m(&self) -> usize {
        self.plus.m()
    }

    pub fn pairing(&self, i: usize) -> i64 {
        dot(self.plus.character(i), &self.e)
    }

    /// The same crossing read from the other side: `ω_±` exchanged, `e ↦ -e`.
    pub fn mirror(&self) -> WallCrossing {
        WallCrossing {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            e: self.e.iter().map(|x| -x).collect(),
            omega0: self.omega0.clone(),
            m_plus: self.m_minus.clone(),
            m_minus: self.m_plus.clone(),
            m_zero: self.m_zero.clone(),
            k: self.l.clone(),
            l: self.k.clone(),
            n: self.n,
            crepant: self.crepant,
        }
    }
}

/// `(Σ D_i)·e = 0`.
pub fn crepancy_check(wc: &WallCrossing) -> bool {
    let r = wc.rank();
    let sum: Vec<i64> = (0..r)
        .map(|k| wc.plus.characters().iter().map(|c| c[k]).sum())
        .collect();
    dot(&sum, &wc.e) == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TildeKind {
    Flopping,
    Nonflopping,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TildeFixedPoint {
    pub delta: Anticone,
    pub kind: TildeKind,
    pub image_plus: Anticone,
    pub image_minus: Anticone,
}

/// The rank `r+1` datum of the common blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupDatum {
    pub characters: Vec<Vec<i64>>,
    pub omega0: Vec<BigRational>,
    pub plus: GitDatum,
    pub minus: GitDatum,
    m: usize,
}

pub fn build_blowup(wc: &WallCrossing) -> Result<BlowupDatum> {
    if !wc.crepant {
        return Err(Error::NotCrepant);
    }
    let r = wc.rank();
    let m = wc.m();
    let mut chars: Vec<Vec<i64>> = (0..m)
        .map(|j| {
            let mut c = wc.plus.character(j).to_vec();
            let de = wc.pairing(j);
            c.push(if de > 0 { -de } else { 0 });
            c
        })
        .collect();
    let mut last = vec![0; r];
    last.push(1);
    chars.push(last);
    let lift = |w: &[BigRational]| {
        let mut v = w.to_vec();
        v.push(BigRational::one());
        v
    };
    Ok(BlowupDatum {
        plus: GitDatum::new(r + 1, chars.clone(), lift(wc.plus.omega()))?,
        minus: GitDatum::new(r + 1, chars.clone(), lift(wc.minus.omega()))?,
        characters: chars,
        omega0: wc.omega0.clone(),
        m,
    })
}

impl BlowupDatum {
    /// Index of the exceptional character `0 ⊕ 1`.
    pub fn exceptional(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.omega0.len() + 1
    }

    /// Datum whose characters are the blow-up characters; its stability vector is
    /// `(ω_0, 0)` and only serves to carry the characters.
    pub fn datum(&self) -> GitDatum {
        let mut w = self.omega0.clone();
        w.push(BigRational::zero());
        GitDatum::new(self.rank(), self.characters.clone(), w).expect("consistent blow-up datum")
    }

    /// Minimal anticones of the chamber of `(ω_0, -ε)` for all small `ε > 0`.
    ///
    /// With `M_δ^T a = ω_0 + ε d`, `a = a_0 + ε a_1`, and positivity for small `ε`
    /// means each coordinate is lexicographically positive.
    pub fn minimal_anticones(&self) -> Vec<Anticone> {
        let r1 = self.rank();
        let mut base = self.omega0.clone();
        base.push(BigRational::zero());
        let mut dir = vec![BigRational::zero(); r1];
        dir[r1 - 1] = -BigRational::one();
        let mut out = Vec::new();
        for subset in (0..self.characters.len()).combinations(r1) {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&i| self.characters[i].clone()).collect();
            let mt = IntMatrix::from_rows(r1, &rows).transpose();
            if mt.det().is_zero() {
                continue;
            }
            let a0 = solve_rational(&mt, &base).expect("invertible");
            let a1 = solve_rational(&mt, &dir).expect("invertible");
            let ok = a0
                .iter()
                .zip(&a1)
                .all(|(x, y)| x.is_positive() || (x.is_zero() && y.is_positive()));
            if ok {
                out.push(Anticone(subset));
            }
        }
        out
    }

    pub fn tilde_fixed_points(&self, wc: &WallCrossing) -> Vec<TildeFixedPoint> {
        let ex = self.exceptional();
        self.minimal_anticones()
            .into_iter()
            .map(|delta| {
                if delta.contains(ex) {
                    let img = delta.without(ex);
                    TildeFixedPoint {
                        delta,
                        kind: TildeKind::Nonflopping,
                        image_plus: img.clone(),
                        image_minus: img,
                    }
                } else {
                    let jp = *delta
                        .indices()
                        .iter()
                        .find(|&&j| wc.pairing(j) > 0)
                        .expect("flopping anticone has a positive ray");
                    let jm = *delta
                        .indices()
                        .iter()
                        .find(|&&j| wc.pairing(j) < 0)
                        .expect("flopping anticone has a negative ray");
                    TildeFixedPoint {
                        image_plus: delta.without(jm),
                        image_minus: delta.without(jp),
                        delta,
                        kind: TildeKind::Flopping,
                    }
                }
            })
            .collect()
    }
}

/// Integer basis-free description of the wall lattice: primitive vectors
/// spanning `e^⊥` over `Q`.
pub fn wall_lattice_generators(e: &[i64]) -> Vec<Vec<i64>> {
    let ker = rational_kernel(&IntMatrix::from_rows(e.len(), &[e.to_vec()]));
    ker.iter()
        .map(|v| {
            primitive_vector(v)
                .expect("nonzero kernel vector")
                .iter()
                .map(|x: &BigInt| x.to_i64().expect("small entry"))
                .collect()
        })
        .collect()
}
