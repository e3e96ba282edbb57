//! Torus fixed points, their isotropy groups, restriction of equivariant line
//! bundles and the localized basis.
//!
//! A global class lives in `Z[L^∨ ⊕ Z^{nT}]`: the exponent `(p, μ)` stands for
//! `L(p) ⊗ e^{μ·λ}`. At a fixed point `δ` it restricts to `e^{μ - C_δ p}`, where
//! `C_δ = W_δ M_δ^{-T}` sends a character to the torus weights of the rays in `δ`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FpMatrix;
use crate::git::{Anticone, GitDatum};
use crate::kring::{exponent, specialize_twisted, Exponent, KElement, SpecializationPoint};
use crate::lattice::{smith_normal_form, FullLattice, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Plus,
    Minus,
    Tilde,
}

/// A character of `G_δ` with its canonical lift to `L^∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterWithLift {
    /// Residues of the lift modulo the Hermite basis of the row lattice of `M_δ`.
    pub rho: Vec<i64>,
    pub rho_hat: Vec<i64>,
    /// Torus exponent `-C_δ ρ̂` of `L(ρ̂)` at the fixed point.
    pub exponent: Vec<Ratio<i64>>,
    /// Its fractional part, which labels the character.
    pub coset: Vec<Ratio<i64>>,
}

#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub delta: Anticone,
    pub matrix: IntMatrix,
    pub group_order: u64,
    pub invariant_factors: Vec<BigInt>,
    /// `C_δ`, an `nT × r` matrix.
    placement: Vec<Vec<Ratio<i64>>>,
    /// `group_order · Λ_δ` as a full sublattice of `Z^{nT}`.
    admissible: FullLattice,
    characters: Vec<CharacterWithLift>,
    coset_index: HashMap<Vec<Ratio<i64>>, usize>,
    /// `g · coset ↦ index`, the integer form of `coset_index`.
    scaled_index: HashMap<Vec<i64>, usize>,
    /// `products[a][b]`: slot of `coset_a + coset_b` and the carried integer part.
    products: Vec<Vec<(usize, Vec<i64>)>>,
}

fn frac(q: &Ratio<i64>) -> Ratio<i64> {
    q - q.floor()
}

fn to_ratio(q: &BigRational) -> Ratio<i64> {
    Ratio::new(
        q.numer().to_i64().expect("small numerator"),
        q.denom().to_i64().expect("small denominator"),
    )
}

impl FixedPoint {
    /// Fixed-point data for a minimal anticone `δ` with torus weights `w_i`.
    pub fn new(d: &GitDatum, delta: &Anticone, weights: &[Vec<i64>]) -> Result<Self> {
        let r = d.rank();
        if delta.len() != r {
            return Err(Error::NotMinimal(delta.label()));
        }
        let matrix = d.matrix_of(delta);
        let det = matrix.det();
        if det.is_zero() {
            return Err(Error::NotMinimal(delta.label()));
        }
        let group_order = det.abs().to_u64().ok_or(Error::Overflow)?;
        let g = group_order as i64;
        let invariant_factors = smith_normal_form(&matrix).invariant_factors();
        let nt = weights.first().map_or(0, |w| w.len());

        // M^{-T}: column k solves M^T x = e_k
        let mt = matrix.transpose();
        let mut inv_t = vec![vec![Ratio::new(0i64, 1); r]; r];
        for k in 0..r {
            let mut ek = vec![BigRational::zero(); r];
            ek[k] = BigRational::one();
            let x = crate::lattice::solve_rational(&mt, &ek).expect("invertible");
            for (i, xi) in x.iter().enumerate() {
                inv_t[i][k] = to_ratio(xi);
            }
        }
        // C = W_δ M^{-T}: torus slot t gets Σ_{s} w_{δ_s}[t] · (M^{-T})[s][·]
        let mut placement = vec![vec![Ratio::new(0i64, 1); r]; nt];
        for (s, &i) in delta.indices().iter().enumerate() {
            for t in 0..nt {
                let w = weights[i][t];
                if w == 0 {
                    continue;
                }
                for k in 0..r {
                    placement[t][k] += inv_t[s][k] * w;
                }
            }
        }

        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        for t in 0..nt {
            let mut v = vec![BigInt::zero(); nt];
            v[t] = BigInt::from(g);
            gens.push(v);
        }
        for k in 0..r {
            let col: Vec<BigInt> = (0..nt)
                .map(|t| {
                    let v = placement[t][k] * g;
                    debug_assert!(v.is_integer());
                    BigInt::from(v.to_integer())
                })
                .collect();
            gens.push(col);
        }
        let admissible = FullLattice::new(&IntMatrix::from_big_rows(nt, &gens))
            .expect("admissible lattice contains g·Z^nT");

        let rows = FullLattice::new(&matrix).expect("invertible matrix");
        let mut characters = Vec::new();
        let mut coset_index = HashMap::new();
        for lift in rows.coset_representatives() {
            let rho_hat: Vec<i64> = lift
                .iter()
                .map(|x| x.to_i64().expect("small lift"))
                .collect();
            let exponent: Vec<Ratio<i64>> = (0..nt)
                .map(|t| {
                    -(0..r)
                        .map(|k| placement[t][k] * rho_hat[k])
                        .sum::<Ratio<i64>>()
                })
                .collect();
            let coset: Vec<Ratio<i64>> = exponent.iter().map(frac).collect();
            if coset_index
                .insert(coset.clone(), characters.len())
                .is_some()
            {
                return Err(Error::CharacterMismatch(format!(
                    "torus weights do not separate the characters of G at {}",
                    delta.label()
                )));
            }
            characters.push(CharacterWithLift {
                rho: rho_hat.clone(),
                rho_hat,
                exponent,
                coset,
            });
        }
        debug_assert_eq!(characters.len() as u64, group_order);
        let scaled_index = coset_index
            .iter()
            .map(|(c, &i)| (c.iter().map(|x| (x * g).to_integer()).collect(), i))
            .collect();
        let products = characters
            .iter()
            .map(|a| {
                characters
                    .iter()
                    .map(|b| {
                        let sum: Vec<Ratio<i64>> =
                            a.coset.iter().zip(&b.coset).map(|(x, y)| x + y).collect();
                        let carry = sum.iter().map(|x| x.floor().to_integer()).collect();
                        let slot = coset_index[&sum.iter().map(frac).collect::<Vec<_>>()];
                        (slot, carry)
                    })
                    .collect()
            })
            .collect();
        Ok(FixedPoint {
            delta: delta.clone(),
            matrix,
            group_order,
            invariant_factors,
            placement,
            admissible,
            characters,
            coset_index,
            scaled_index,
            products,
        })
    }

    pub fn nt(&self) -> usize {
        self.placement.len()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn characters_with_lifts(&self) -> &[CharacterWithLift] {
        &self.characters
    }

    /// The torus exponent of `L(p) e^{μ}` at this fixed point.
    pub fn restrict_exponent(&self, p: &[Ratio<i64>], mu: &[Ratio<i64>]) -> Exponent {
        (0..self.nt())
            .map(|t| {
                let cp: Ratio<i64> = (0..self.rank()).map(|k| self.placement[t][k] * p[k]).sum();
                mu[t] - cp
            })
            .collect()
    }

    /// Restriction of the monomial `L(p) e^{μ}`.
    pub fn restrict_line(&self, p: &[i64], mu: &[i64]) -> KElement {
        KElement::monomial(
            &self.restrict_exponent(&exponent(p), &exponent(mu)),
            BigRational::one(),
        )
    }

    /// Restriction of a global class over `L^∨ ⊕ Z^{nT}`.
    pub fn restrict(&self, global: &KElement) -> KElement {
        let r = self.rank();
        assert_eq!(
            global.dim(),
            r + self.nt(),
            "global class has wrong dimension"
        );
        global.map_exponents(self.nt(), |q| self.restrict_exponent(&q[..r], &q[r..]))
    }

    pub fn is_admissible_exponent(&self, q: &[Ratio<i64>]) -> bool {
        let g = self.group_order as i64;
        let mut v = Vec::with_capacity(q.len());
        for x in q {
            let y = x * g;
            if !y.is_integer() {
                return false;
            }
            v.push(BigInt::from(y.to_integer()));
        }
        self.admissible.contains(&v)
    }

    pub fn is_admissible(&self, x: &KElement) -> bool {
        x.terms().all(|(q, _)| self.is_admissible_exponent(&q))
    }

    /// `[Λ_δ : Z^{nT}]`
    pub fn admissible_index(&self) -> u64 {
        let g = BigInt::from(self.group_order);
        let full = num_traits::pow(g, self.nt());
        (full / self.admissible.index())
            .to_u64()
            .expect("small index")
    }

    /// Index of the character whose coset contains `q`.
    pub fn coset_of(&self, q: &[Ratio<i64>]) -> Option<usize> {
        let key: Vec<Ratio<i64>> = q.iter().map(frac).collect();
        self.coset_index.get(&key).copied()
    }

    /// Slot and integer part of the exponent `num / den`, when it is admissible.
    pub fn locate(&self, num: &[i64], den: i64) -> Option<(usize, Vec<i64>)> {
        let g = self.group_order as i64;
        let mut key = Vec::with_capacity(num.len());
        let mut floor = Vec::with_capacity(num.len());
        for &n in num {
            let r = n.rem_euclid(den);
            let scaled = r.checked_mul(g)?;
            if scaled % den != 0 {
                return None;
            }
            key.push(scaled / den);
            floor.push(n.div_euclid(den));
        }
        self.scaled_index.get(&key).map(|&slot| (slot, floor))
    }

    /// Twists `w ∈ Z^{nT}` whose phases `q ↦ ζ^{L q·w}` run over all characters
    /// of `Λ_δ / Z^{nT}`, found by breadth-first search.
    pub fn dual_twists(&self) -> Vec<Vec<i64>> {
        let nt = self.nt();
        let r = self.rank();
        let key = |w: &[i64]| -> Vec<Ratio<i64>> {
            (0..r)
                .map(|k| {
                    frac(
                        &(0..nt)
                            .map(|t| self.placement[t][k] * w[t])
                            .sum::<Ratio<i64>>(),
                    )
                })
                .collect()
        };
        let mut seen: HashMap<Vec<Ratio<i64>>, ()> = HashMap::new();
        let mut out = vec![vec![0i64; nt]];
        seen.insert(key(&out[0]), ());
        let mut i = 0;
        while i < out.len() {
            for t in 0..nt {
                let mut w = out[i].clone();
                w[t] += 1;
                let k = key(&w);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(k) {
                    e.insert(());
                    out.push(w);
                }
            }
            i += 1;
        }
        out
    }
}

/// Localized equivariant K-theory of one GIT quotient: its fixed points, with
/// torus weights attached to the characters.
#[derive(Clone, Debug)]
pub struct Space {
    pub side: Side,
    pub datum: GitDatum,
    pub weights: Vec<Vec<i64>>,
    pub fixed_points: Vec<FixedPoint>,
    eulers: Vec<KElement>,
}

/// One element of the localized basis: fixed point index and character index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasisLabel {
    pub point: usize,
    pub character: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedClass {
    pub side: Side,
    pub restrictions: BTreeMap<Anticone, KElement>,
    /// A global Laurent expression in `L(p) e^{μ}`, when one is known.
    pub global: Option<KElement>,
}

/// A class evaluated at a specialization: one vector of `A_δ ⊗ F_p` per fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedClass {
    pub side: Side,
    pub fibers: BTreeMap<Anticone, Vec<u64>>,
}

impl Space {
    /// Torus weights `w_i = e_i`.
    pub fn standard(side: Side, datum: &GitDatum) -> Result<Self> {
        let m = datum.m();
        let weights = (0..m)
            .map(|i| (0..m).map(|t| i64::from(t == i)).collect())
            .collect();
        let minimal = datum.minimal_anticones()?;
        Self::with_fixed_points(side, datum, weights, &minimal)
    }

    pub fn with_fixed_points(
        side: Side,
        datum: &GitDatum,
        weights: Vec<Vec<i64>>,
        minimal: &[Anticone],
    ) -> Result<Self> {
        let fixed_points = minimal
            .iter()
            .map(|d| FixedPoint::new(datum, d, &weights))
            .collect::<Result<Vec<_>>>()?;
        let mut space = Space {
            side,
            datum: datum.clone(),
            weights,
            fixed_points,
            eulers: Vec::new(),
        };
        space.eulers = space
            .fixed_points
            .iter()
            .map(|fp| space.compute_euler(fp))
            .collect();
        Ok(space)
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn nt(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }

    pub fn global_dim(&self) -> usize {
        self.rank() + self.nt()
    }

    pub fn point_index(&self, delta: &Anticone) -> Option<usize> {
        self.fixed_points.iter().position(|f| &f.delta == delta)
    }

    pub fn point(&self, delta: &Anticone) -> Option<&FixedPoint> {
        self.fixed_points.iter().find(|f| &f.delta == delta)
    }

    /// Global monomial `L(p) e^{μ}`.
    pub fn line(&self, p: &[i64], mu: &[i64]) -> KElement {
        let mut v = p.to_vec();
        v.extend_from_slice(mu);
        KElement::integral_monomial(&v)
    }

    /// `R_j = L(D_j) e^{w_j}`
    pub fn r_class(&self, j: usize) -> KElement {
        self.line(self.datum.character(j), &self.weights[j])
    }

    /// `S_j = R_j^{-1}`
    pub fn s_class(&self, j: usize) -> KElement {
        self.r_class(j).dual()
    }

    pub fn restrict(&self, global: &KElement) -> LocalizedClass {
        LocalizedClass {
            side: self.side,
            restrictions: self
                .fixed_points
                .iter()
                .map(|f| (f.delta.clone(), f.restrict(global)))
                .collect(),
            global: Some(global.clone()),
        }
    }

    /// `λ_{-1} N^∨_δ = Π_{j∉δ} (1 - S_j|_δ)`
    pub fn normal_euler(&self, fp: &FixedPoint) -> KElement {
        match self.fixed_points.iter().position(|f| f.delta == fp.delta) {
            Some(i) if i < self.eulers.len() => self.eulers[i].clone(),
            _ => self.compute_euler(fp),
        }
    }

    fn compute_euler(&self, fp: &FixedPoint) -> KElement {
        let one = KElement::one(self.nt());
        let mut acc = one.clone();
        for j in 0..self.datum.m() {
            if fp.delta.contains(j) {
                continue;
            }
            acc = &acc * &(&one - &fp.restrict(&self.s_class(j)));
        }
        acc
    }

    pub fn basis_labels(&self) -> Vec<BasisLabel> {
        let mut out = Vec::new();
        for (point, f) in self.fixed_points.iter().enumerate() {
            for character in 0..f.characters.len() {
                out.push(BasisLabel { point, character });
            }
        }
        out
    }

    pub fn basis_size(&self) -> usize {
        self.fixed_points.iter().map(|f| f.characters.len()).sum()
    }

    pub fn label_name(&self, b: BasisLabel) -> String {
        let f = &self.fixed_points[b.point];
        let lift = &f.characters[b.character].rho_hat;
        format!(
            "{}:({})",
            f.delta.label(),
            lift.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }

    /// Global expression `L(ρ̂) Π_{i∉δ}(1 - S_i)` of a basis class.
    pub fn basis_global(&self, b: BasisLabel) -> KElement {
        let f = &self.fixed_points[b.point];
        let lift = &f.characters[b.character].rho_hat;
        self.basis_global_with_lift(&f.delta, lift)
    }

    pub fn basis_global_with_lift(&self, delta: &Anticone, lift: &[i64]) -> KElement {
        let one = KElement::one(self.global_dim());
        let mut acc = self.line(lift, &vec![0; self.nt()]);
        for i in 0..self.datum.m() {
            if !delta.contains(i) {
                acc = &acc * &(&one - &self.s_class(i));
            }
        }
        acc
    }

    pub fn basis_class(&self, b: BasisLabel) -> LocalizedClass {
        self.restrict(&self.basis_global(b))
    }

    pub fn is_genuine(&self, c: &LocalizedClass) -> bool {
        self.fixed_points.iter().all(|f| {
            c.restrictions
                .get(&f.delta)
                .is_some_and(|x| f.is_admissible(x))
        })
    }

    /// Coordinates of `x` in `A_δ ⊗ F_p`, indexed by the characters of `G_δ`:
    /// `c e^q ↦ c x^{⌊q⌋}` in the slot of `frac(q)`.
    pub fn fiber(
        &self,
        fp: &FixedPoint,
        x: &KElement,
        s: &SpecializationPoint,
    ) -> Result<Vec<u64>> {
        let f = &s.field;
        let mut out = vec![0u64; fp.characters.len()];
        let l = s.root_order as i64;
        if l % x.den() != 0 {
            return Err(Error::DenominatorNotDividingL(x.den(), s.root_order));
        }
        for (num, c) in x.raw_terms() {
            // Z^{nT} ⊆ Λ_δ, so an exponent is admissible exactly when its coset is listed
            let (slot, floor) = fp
                .locate(num, x.den())
                .ok_or_else(|| Error::NotAdmissible(fp.delta.label()))?;
            let v = f.mul(f.from_rational(c)?, s.eval_integral(&floor));
            out[slot] = f.add(out[slot], v);
        }
        Ok(out)
    }

    /// Matrix of multiplication by `a` on `A_δ ⊗ F_p`.
    pub fn multiplication_matrix(
        &self,
        fp: &FixedPoint,
        a: &[u64],
        s: &SpecializationPoint,
    ) -> FpMatrix {
        let f = &s.field;
        let n = fp.characters.len();
        let mut m = FpMatrix::zeros(n, n);
        for col in 0..n {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let (slot, carry) = &fp.products[i][col];
                let v = f.mul(ai, s.eval_integral(carry));
                m.set(*slot, col, f.add(m.get(*slot, col), v));
            }
        }
        m
    }

    pub fn fiber_mul(
        &self,
        fp: &FixedPoint,
        a: &[u64],
        b: &[u64],
        s: &SpecializationPoint,
    ) -> Vec<u64> {
        self.multiplication_matrix(fp, a, s).mul_vec(&s.field, b)
    }

    pub fn fiber_div(
        &self,
        fp: &FixedPoint,
        b: &[u64],
        a: &[u64],
        s: &SpecializationPoint,
    ) -> Result<Vec<u64>> {
        self.multiplication_matrix(fp, a, s)
            .solve_vec(&s.field, b)
            .ok_or(Error::DivisionByZeroAtSpecialization)
    }

    pub fn specialize_class(
        &self,
        c: &LocalizedClass,
        s: &SpecializationPoint,
    ) -> Result<SpecializedClass> {
        let mut fibers = BTreeMap::new();
        for fp in &self.fixed_points {
            let x = c
                .restrictions
                .get(&fp.delta)
                .ok_or_else(|| Error::NotAdmissible(fp.delta.label()))?;
            fibers.insert(fp.delta.clone(), self.fiber(fp, x, s)?);
        }
        Ok(SpecializedClass {
            side: self.side,
            fibers,
        })
    }

    fn floor_value(&self, ch: &CharacterWithLift, s: &SpecializationPoint) -> Result<u64> {
        let floor: Vec<Ratio<i64>> = ch.exponent.iter().map(|x| x.floor()).collect();
        s.eval_monomial(&floor, None)
    }

    /// Coefficients in the basis `e_{δ,ρ}`, ordered as `basis_labels()`.
    pub fn decompose(&self, c: &LocalizedClass, s: &SpecializationPoint) -> Result<Vec<u64>> {
        self.decompose_specialized(&self.specialize_class(c, s)?, s)
    }

    pub fn decompose_specialized(
        &self,
        c: &SpecializedClass,
        s: &SpecializationPoint,
    ) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(self.basis_size());
        for fp in &self.fixed_points {
            let target = &c.fibers[&fp.delta];
            let euler = self.fiber(fp, &self.normal_euler(fp), s)?;
            // e_{δ,ρ}|_δ = e^{q_ρ} · Euler, so coefficients are target / Euler
            // read off in the character coordinates
            let quotient = self.fiber_div(fp, target, &euler, s)?;
            // e^{q_ρ} is x^{⌊q_ρ⌋} times the unit vector at slot ρ
            for (c, ch) in quotient.iter().zip(&fp.characters) {
                let shift = self.floor_value(ch, s)?;
                out.push(
                    s.field.mul(
                        *c,
                        s.field
                            .inv(shift)
                            .ok_or(Error::DivisionByZeroAtSpecialization)?,
                    ),
                );
            }
        }
        Ok(out)
    }

    /// Matrix whose column `j` is basis vector `j` specialized and stacked over all
    /// fixed points (rows: fixed point, character slot).
    pub fn restriction_matrix(&self, s: &SpecializationPoint) -> Result<FpMatrix> {
        let labels = self.basis_labels();
        let n = labels.len();
        let mut cols = Vec::with_capacity(n);
        for b in labels {
            let c = self.specialize_class(&self.basis_class(b), s)?;
            let col: Vec<u64> = self
                .fixed_points
                .iter()
                .flat_map(|f| c.fibers[&f.delta].clone())
                .collect();
            cols.push(col);
        }
        Ok(FpMatrix::from_columns(n, &cols))
    }

    /// Class from basis coordinates, as specialized fibers.
    pub fn recompose(&self, coeffs: &[u64], s: &SpecializationPoint) -> Result<SpecializedClass> {
        let f = &s.field;
        let mut fibers = BTreeMap::new();
        let mut offset = 0;
        for fp in &self.fixed_points {
            let n = fp.characters.len();
            let euler = self.fiber(fp, &self.normal_euler(fp), s)?;
            let mut block = Vec::with_capacity(n);
            for (c, ch) in coeffs[offset..offset + n].iter().zip(&fp.characters) {
                block.push(f.mul(*c, self.floor_value(ch, s)?));
            }
            fibers.insert(fp.delta.clone(), self.fiber_mul(fp, &block, &euler, s));
            offset += n;
        }
        Ok(SpecializedClass {
            side: self.side,
            fibers,
        })
    }

    /// `χ(A, B) = Σ_δ (A^∨ B|_δ / Euler_δ)^{inv}`: the invariant part is the
    /// coordinate of the trivial character.
    pub fn euler_pairing(
        &self,
        a: &LocalizedClass,
        b: &LocalizedClass,
        s: &SpecializationPoint,
    ) -> Result<u64> {
        let f = &s.field;
        let mut acc = 0;
        for fp in &self.fixed_points {
            let left = self.fiber(fp, &a.restrictions[&fp.delta].dual(), s)?;
            let right = self.fiber(fp, &b.restrictions[&fp.delta], s)?;
            let num = self.fiber_mul(fp, &left, &right, s);
            let euler = self.fiber(fp, &self.normal_euler(fp), s)?;
            let q = self
                .fiber_div(fp, &num, &euler, s)
                .map_err(|_| Error::EulerClassVanishes)?;
            let trivial = fp
                .coset_of(&vec![Ratio::new(0, 1); self.nt()])
                .expect("trivial coset");
            acc = f.add(acc, q[trivial]);
        }
        Ok(acc)
    }

    /// The same pairing computed by averaging over the characters of each
    /// `Λ_δ / Z^{nT}` instead of using the coset algebra.
    pub fn euler_pairing_by_average(
        &self,
        a: &LocalizedClass,
        b: &LocalizedClass,
        s: &SpecializationPoint,
    ) -> Result<u64> {
        let f = &s.field;
        let mut acc = 0;
        for fp in &self.fixed_points {
            let x = &a.restrictions[&fp.delta].dual() * &b.restrictions[&fp.delta];
            let euler = self.normal_euler(fp);
            let twists = fp.dual_twists();
            let mut sum = 0;
            for w in &twists {
                let num = specialize_twisted(&x, s, Some(w))?;
                let den = specialize_twisted(&euler, s, Some(w))?;
                let inv = f.inv(den).ok_or(Error::EulerClassVanishes)?;
                sum = f.add(sum, f.mul(num, inv));
            }
            let n = f
                .inv(f.from_i64(twists.len() as i64))
                .expect("group order invertible");
            acc = f.add(acc, f.mul(sum, n));
        }
        Ok(acc)
    }

    /// lcm of the isotropy orders, the exponent denominators that can occur.
    pub fn root_order(&self) -> u64 {
        self.fixed_points
            .iter()
            .fold(1u64, |acc, f| acc.lcm(&f.group_order))
    }
}

impl LocalizedClass {
    pub fn zero(space: &Space) -> Self {
        LocalizedClass {
            side: space.side,
            restrictions: space
                .fixed_points
                .iter()
                .map(|f| (f.delta.clone(), KElement::zero(space.nt())))
                .collect(),
            global: Some(KElement::zero(space.global_dim())),
        }
    }

    pub fn add(&self, other: &LocalizedClass) -> LocalizedClass {
        assert_eq!(self.side, other.side, "classes live on different sides");
        LocalizedClass {
            side: self.side,
            restrictions: self
                .restrictions
                .iter()
                .map(|(d, x)| (d.clone(), x + &other.restrictions[d]))
                .collect(),
            global: match (&self.global, &other.global) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn scale(&self, c: &BigRational) -> LocalizedClass {
        LocalizedClass {
            side: self.side,
            restrictions: self
                .restrictions
                .iter()
                .map(|(d, x)| (d.clone(), x.scale(c)))
                .collect(),
            global: self.global.as_ref().map(|g| g.scale(c)),
        }
    }

    /// The class with its global expression dropped (a bare tuple of restrictions).
    pub fn without_global(&self) -> LocalizedClass {
        LocalizedClass {
            global: None,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(chars: &[i64], w: i64) -> Space {
        let d = GitDatum::with_integral_omega(1, chars.iter().map(|&c| vec![c]).collect(), &[w])
            .unwrap();
        Space::standard(if w > 0 { Side::Plus } else { Side::Minus }, &d).unwrap()
    }

    fn q(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn isotropy_examples() {
        let s = space(&[1, 1, -1, -1], -1);
        assert_eq!(s.fixed_points[0].group_order, 1);
        let w = space(&[1, 1, -2], -1);
        let fp = &w.fixed_points[0];
        assert_eq!(fp.group_order, 2);
        let lifts: Vec<Vec<i64>> = fp
            .characters_with_lifts()
            .iter()
            .map(|c| c.rho_hat.clone())
            .collect();
        assert_eq!(lifts, vec![vec![0], vec![1]]);
        let d = GitDatum::with_integral_omega(2, vec![vec![1, 0], vec![0, 1]], &[1, 1]).unwrap();
        let sp = Space::standard(Side::Plus, &d).unwrap();
        assert_eq!(sp.fixed_points[0].group_order, 1);
    }

    #[test]
    fn product_group_has_six_characters() {
        let d = GitDatum::with_integral_omega(2, vec![vec![2, 0], vec![0, 3]], &[1, 1]).unwrap();
        let sp = Space::standard(Side::Plus, &d).unwrap();
        let fp = &sp.fixed_points[0];
        assert_eq!(fp.group_order, 6);
        assert_eq!(fp.characters_with_lifts().len(), 6);
        assert_eq!(fp.admissible_index(), 6);
        assert_eq!(fp.dual_twists().len(), 6);
    }

    #[test]
    fn restriction_examples() {
        let s = space(&[1, 1, -1, -1], -1);
        let fp = &s.fixed_points[0];
        assert_eq!(fp.delta, Anticone(vec![2]));
        assert!(fp.restrict(&s.r_class(2)) == KElement::one(4));
        assert_eq!(
            fp.restrict(&s.r_class(0)),
            KElement::integral_monomial(&[1, 0, 1, 0])
        );
        let w = space(&[1, 1, -2], -1);
        let fp = &w.fixed_points[0];
        assert_eq!(
            fp.restrict(&w.r_class(0)),
            KElement::monomial(&[q(1, 1), q(0, 1), q(1, 2)], BigRational::one())
        );
    }

    #[test]
    fn euler_example() {
        let s = space(&[1, 1, -1, -1], -1);
        let fp = &s.fixed_points[0];
        let one = KElement::one(4);
        let f1 = &one - &KElement::integral_monomial(&[-1, 0, -1, 0]);
        let f2 = &one - &KElement::integral_monomial(&[0, -1, -1, 0]);
        let f4 = &one - &KElement::integral_monomial(&[0, 0, 1, -1]);
        assert_eq!(s.normal_euler(fp), &(&f1 * &f2) * &f4);
        let pt = GitDatum::with_integral_omega(1, vec![vec![1]], &[1]).unwrap();
        let sp = Space::standard(Side::Plus, &pt).unwrap();
        assert_eq!(sp.normal_euler(&sp.fixed_points[0]), KElement::one(1));
    }

    #[test]
    fn basis_support_and_admissibility() {
        for (chars, w) in [
            (&[1, 1, -1, -1][..], 1),
            (&[1, 1, -2][..], -1),
            (&[1, 2, -1, -2][..], 1),
        ] {
            let s = space(chars, w);
            for b in s.basis_labels() {
                let c = s.basis_class(b);
                assert!(s.is_genuine(&c));
                for (i, fp) in s.fixed_points.iter().enumerate() {
                    if i != b.point {
                        assert!(c.restrictions[&fp.delta].is_zero());
                    }
                }
            }
        }
        let w = space(&[1, 1, -2], -1);
        let c = w.basis_class(BasisLabel {
            point: 0,
            character: 1,
        });
        assert!(c.restrictions.values().next().unwrap().den() == 2);
    }

    #[test]
    fn trivial_bundle_decomposition() {
        let s = space(&[1, 1, -1, -1], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pt = SpecializationPoint::random(&mut rng, 4, 1, 40);
        let one = s.restrict(&KElement::one(5));
        let coeffs = s.decompose(&one, &pt).unwrap();
        for (fp, c) in s.fixed_points.iter().zip(&coeffs) {
            let e = crate::kring::specialize(&s.normal_euler(fp), &pt).unwrap();
            assert_eq!(pt.field.mul(*c, e), 1);
        }
        let lin = s.restrict(
            &(&s.basis_global(BasisLabel {
                point: 0,
                character: 0,
            })
            .scale(&rational(3, 1))
                + &s.basis_global(BasisLabel {
                    point: 1,
                    character: 0,
                })),
        );
        assert_eq!(s.decompose(&lin, &pt).unwrap(), vec![3, 1]);
    }

    #[test]
    fn pairing_routes_agree() {
        let w = space(&[1, 2, -1, -2], -1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pt = SpecializationPoint::random(&mut rng, 4, w.root_order(), 40);
        for a in w.basis_labels() {
            for b in w.basis_labels() {
                let ca = w.basis_class(a);
                let cb = w.restrict(&(&w.basis_global(b) * &w.r_class(1)));
                assert_eq!(
                    w.euler_pairing(&ca, &cb, &pt).unwrap(),
                    w.euler_pairing_by_average(&ca, &cb, &pt).unwrap()
                );
            }
        }
    }
}
