//! GIT data, anticones and the standing assumptions.
//!
//! Character indices are 0-based internally; reports print them 1-based.

use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{in_strict_cone, rank_of, rat, solve_rational, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitDatum {
    r: usize,
    characters: Vec<Vec<i64>>,
    omega: Vec<BigRational>,
}

/// A sorted set of character indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Anticone(pub Vec<usize>);

impl Anticone {
    pub fn new(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        idx.dedup();
        Anticone(idx)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn without(&self, i: usize) -> Anticone {
        Anticone(self.0.iter().copied().filter(|&j| j != i).collect())
    }

    pub fn with(&self, i: usize) -> Anticone {
        let mut v = self.0.clone();
        v.push(i);
        Anticone::new(v)
    }

    /// 1-based rendering, e.g. `{1,3}`.
    pub fn label(&self) -> String {
        format!("{{{}}}", self.0.iter().map(|i| i + 1).join(","))
    }
}

impl fmt::Display for Anticone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub passed: bool,
    /// A subset violating the condition, when it fails.
    pub witness: Option<Anticone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub a1: CheckResult,
    pub a2: CheckResult,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.a1.passed && self.a2.passed
    }
}

impl GitDatum {
    pub fn new(r: usize, characters: Vec<Vec<i64>>, omega: Vec<BigRational>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidDatum("rank must be positive".into()));
        }
        if characters.len() < r {
            return Err(Error::InvalidDatum(format!(
                "need at least r = {r} characters, got {}",
                characters.len()
            )));
        }
        if let Some(bad) = characters.iter().position(|d| d.len() != r) {
            return Err(Error::InvalidDatum(format!(
                "character {} has length {}, expected {r}",
                bad + 1,
                characters[bad].len()
            )));
        }
        if omega.len() != r {
            return Err(Error::InvalidDatum(format!(
                "stability vector has length {}, expected {r}",
                omega.len()
            )));
        }
        Ok(GitDatum {
            r,
            characters,
            omega,
        })
    }

    /// Convenience constructor with an integral stability vector.
    pub fn with_integral_omega(r: usize, characters: Vec<Vec<i64>>, omega: &[i64]) -> Result<Self> {
        Self::new(r, characters, omega.iter().map(|&x| rat(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.characters.len()
    }

    pub fn characters(&self) -> &[Vec<i64>] {
        &self.characters
    }

    pub fn character(&self, i: usize) -> &[i64] {
        &self.characters[i]
    }

    pub fn omega(&self) -> &[BigRational] {
        &self.omega
    }

    /// Same characters, another stability vector.
    pub fn with_omega(&self, omega: Vec<BigRational>) -> Result<Self> {
        Self::new(self.r, self.characters.clone(), omega)
    }

    fn gens(&self, idx: &[usize]) -> Vec<Vec<i64>> {
        idx.iter().map(|&i| self.characters[i].clone()).collect()
    }

    pub fn is_anticone(&self, idx: &[usize]) -> bool {
        in_strict_cone(&self.gens(idx), &self.omega)
    }

    /// The r×r matrix with rows `D_i`, `i ∈ δ`.
    pub fn matrix_of(&self, delta: &Anticone) -> IntMatrix {
        IntMatrix::from_rows(self.r, &self.gens(delta.indices()))
    }

    pub fn validate(&self) -> ValidationReport {
        let all: Vec<usize> = (0..self.m()).collect();
        let a1 = CheckResult {
            passed: self.is_anticone(&all),
            witness: if self.is_anticone(&all) {
                None
            } else {
                Some(Anticone(all.clone()))
            },
        };
        // only rank-deficient subsets can violate the spanning condition
        let mut witness = None;
        'search: for size in 0..=self.m() {
            for subset in (0..self.m()).combinations(size) {
                if rank_of(&self.gens(&subset)) < self.r && self.is_anticone(&subset) {
                    witness = Some(Anticone(subset));
                    break 'search;
                }
            }
        }
        ValidationReport {
            a1,
            a2: CheckResult {
                passed: witness.is_none(),
                witness,
            },
        }
    }

    fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if let Some(w) = v.a1.witness {
            return Err(Error::InvalidDatum(format!(
                "the full character set {w} is not an anticone"
            )));
        }
        if let Some(w) = v.a2.witness {
            return Err(Error::InvalidDatum(format!(
                "anticone {w} does not span the character space"
            )));
        }
        Ok(())
    }

    /// Minimal anticones found by solving `M_δ^T a = ω` on each invertible r-subset.
    pub fn minimal_anticones_unchecked(&self) -> Vec<Anticone> {
        let mut out = Vec::new();
        for subset in (0..self.m()).combinations(self.r) {
            let delta = Anticone(subset);
            let mt = self.matrix_of(&delta).transpose();
            if mt.det().is_zero() {
                continue;
            }
            let a = solve_rational(&mt, &self.omega).expect("invertible system");
            if a.iter().all(|x| x.is_positive()) {
                out.push(delta);
            }
        }
        out
    }

    pub fn minimal_anticones(&self) -> Result<Vec<Anticone>> {
        self.require_valid()?;
        Ok(self.minimal_anticones_unchecked())
    }

    /// All anticones, as the supersets of the minimal ones.
    pub fn anticones(&self) -> Result<Vec<Anticone>> {
        let minimal = self.minimal_anticones()?;
        let mut out = Vec::new();
        for size in self.r..=self.m() {
            for subset in (0..self.m()).combinations(size) {
                let s = Anticone(subset);
                if minimal.iter().any(|d| d.0.iter().all(|i| s.contains(*i))) {
                    out.push(s);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// `{i : the complement of {i} is not an anticone}`.
    pub fn extended_set(&self) -> Vec<usize> {
        (0..self.m())
            .filter(|&i| {
                let rest: Vec<usize> = (0..self.m()).filter(|&j| j != i).collect();
                !self.is_anticone(&rest)
            })
            .collect()
    }

    pub fn same_chamber(&self, other_omega: &[BigRational]) -> Result<bool> {
        let other = self.with_omega(other_omega.to_vec())?;
        Ok(self.minimal_anticones()? == other.minimal_anticones()?)
    }
}
