//! Bondal–Orlov transforms on localized equivariant K-theory: the closed
//! formula, the blow-up computation it is checked against, and transform
//! matrices over a prime field.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FpMatrix;
use crate::fixed::{BasisLabel, CharacterWithLift, LocalizedClass, Side, Space, SpecializedClass};
use crate::git::{Anticone, GitDatum};
use crate::kring::{
    geometric_quotient, root_of_unity_filter, KElement, SpecializationPoint, TPoly,
};
use crate::wall::{build_blowup, BlowupDatum, TildeFixedPoint, WallCrossing};

/// Everything needed to transport classes across one crepant wall.
#[derive(Clone, Debug)]
pub struct CrossingModel {
    pub wc: WallCrossing,
    pub plus: Space,
    pub minus: Space,
    pub blowup: BlowupDatum,
    pub tilde: Space,
    pub tilde_points: Vec<TildeFixedPoint>,
}

impl CrossingModel {
    pub fn new(wc: &WallCrossing) -> Result<Self> {
        let blowup = build_blowup(wc)?;
        let plus = Space::standard(Side::Plus, &wc.plus)?;
        let minus = Space::standard(Side::Minus, &wc.minus)?;
        let m = wc.m();
        // the exceptional character carries no torus weight
        let weights: Vec<Vec<i64>> = (0..=m)
            .map(|i| (0..m).map(|t| i64::from(t == i)).collect())
            .collect();
        let tilde_points = blowup.tilde_fixed_points(wc);
        let deltas: Vec<Anticone> = tilde_points.iter().map(|t| t.delta.clone()).collect();
        let tilde = Space::with_fixed_points(Side::Tilde, &blowup.datum(), weights, &deltas)?;
        Ok(CrossingModel {
            wc: wc.clone(),
            plus,
            minus,
            blowup,
            tilde,
            tilde_points,
        })
    }

    /// The model of the mirrored crossing, whose transforms are the `BO′_k`.
    pub fn mirror(&self) -> Result<Self> {
        let mut m = Self::new(&self.wc.mirror())?;
        m.plus.side = Side::Minus;
        m.minus.side = Side::Plus;
        Ok(m)
    }

    /// Root order for specializations: every isotropy order on all three spaces.
    pub fn root_order(&self) -> u64 {
        self.plus
            .root_order()
            .lcm(&self.minus.root_order())
            .lcm(&self.tilde.root_order())
    }

    pub fn nt(&self) -> usize {
        self.plus.nt()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `BO_k(e_{δ_-,ρ})` by the closed formula, for the canonical lift of `ρ`.
pub fn bo_apply(
    model: &CrossingModel,
    k: i64,
    delta_minus: &Anticone,
    c: &CharacterWithLift,
) -> Result<LocalizedClass> {
    let fp = model
        .minus
        .point(delta_minus)
        .ok_or_else(|| Error::NotMinimal(delta_minus.label()))?;
    if !fp.characters_with_lifts().iter().any(|x| x == c) {
        return Err(Error::CharacterMismatch(format!(
            "lift {:?} is not a character of {}",
            c.rho_hat,
            delta_minus.label()
        )));
    }
    bo_apply_with_lift(model, k, delta_minus, &c.rho_hat)
}

/// The formula with an arbitrary lift `ρ̂ ∈ L^∨`.
pub fn bo_apply_with_lift(
    model: &CrossingModel,
    k: i64,
    delta_minus: &Anticone,
    lift: &[i64],
) -> Result<LocalizedClass> {
    let wc = &model.wc;
    if !wc.crepant {
        return Err(Error::NotCrepant);
    }
    if lift.len() != wc.rank() {
        return Err(Error::CharacterMismatch(format!(
            "lift has length {}, expected {}",
            lift.len(),
            wc.rank()
        )));
    }
    let plus = &model.plus;
    if plus.point(delta_minus).is_some() {
        return Ok(plus.restrict(&plus.basis_global_with_lift(delta_minus, lift)));
    }
    let global = bo_formula_global(model, k, delta_minus, lift)?;
    Ok(plus.restrict(&global))
}

/// The global expression produced by the formula for `δ_- ∉ 𝒜_+`.
pub fn bo_formula_global(
    model: &CrossingModel,
    k: i64,
    delta_minus: &Anticone,
    lift: &[i64],
) -> Result<KElement> {
    let wc = &model.wc;
    let plus = &model.plus;
    let dim = plus.global_dim();
    let negative: Vec<usize> = delta_minus
        .indices()
        .iter()
        .copied()
        .filter(|&j| wc.pairing(j) < 0)
        .collect();
    let [j_minus] = negative[..] else {
        return Err(Error::NotMinimal(format!(
            "{} has {} rays with D·e < 0",
            delta_minus.label(),
            negative.len()
        )));
    };
    let l = -wc.pairing(j_minus);
    let one = KElement::one(dim);

    let mut p = TPoly::term(k + dot(lift, &wc.e), plus.line(lift, &vec![0; plus.nt()]));
    p = &p * &geometric_quotient(l, dim)?;
    for i in 0..wc.m() {
        if delta_minus.contains(i) {
            continue;
        }
        let pair = wc.pairing(i);
        let factor = if pair < 0 {
            TPoly::constant(&one - &plus.s_class(i))
        } else {
            &TPoly::constant(one.clone()) + &TPoly::term(-pair, -&plus.s_class(i))
        };
        p = &p * &factor;
    }
    root_of_unity_filter(&p, l, &plus.r_class(j_minus))
}

/// Images of every minus-side basis vector under `BO_k`, in basis order.
pub fn bo_images(model: &CrossingModel, k: i64) -> Result<Vec<LocalizedClass>> {
    model
        .minus
        .basis_labels()
        .into_iter()
        .map(|b| {
            let fp = &model.minus.fixed_points[b.point];
            bo_apply(
                model,
                k,
                &fp.delta,
                &fp.characters_with_lifts()[b.character],
            )
        })
        .collect()
}

/// `BO_k(α)` through the blow-up, evaluated at `s`.
///
/// `α` is pulled back along `f_-`, twisted by `R̃_{m+1}^k`, restricted to each
/// fixed point of the blow-up and divided by its Euler class there, pushed to
/// the plus side by keeping the characters that descend, and multiplied by the
/// plus-side Euler class.
pub fn bo_geometric(
    model: &CrossingModel,
    k: i64,
    alpha: &LocalizedClass,
    s: &SpecializationPoint,
) -> Result<SpecializedClass> {
    bo_geometric_at(model, &blowup_restrictions(model, k, alpha)?, s)
}

/// The pulled-back and twisted class restricted to each blow-up fixed point,
/// in the order of `model.tilde_points`.
pub fn blowup_restrictions(
    model: &CrossingModel,
    k: i64,
    alpha: &LocalizedClass,
) -> Result<Vec<KElement>> {
    let global = alpha
        .global
        .as_ref()
        .ok_or(Error::MissingGlobalExpression)?;
    let r = model.wc.rank();
    let nt = model.nt();
    let zero = Ratio::new(0i64, 1);
    let pulled = global.map_exponents(r + 1 + nt, |q| {
        let mut v = q[..r].to_vec();
        v.push(zero);
        v.extend_from_slice(&q[r..]);
        v
    });
    let mut twist = vec![0i64; r + 1 + nt];
    twist[r] = k;
    let x = &pulled * &KElement::integral_monomial(&twist);
    Ok(model
        .tilde_points
        .iter()
        .map(|tp| {
            model
                .tilde
                .point(&tp.delta)
                .expect("tilde point")
                .restrict(&x)
        })
        .collect())
}

/// The numerical half of [`bo_geometric`].
pub fn bo_geometric_at(
    model: &CrossingModel,
    restrictions: &[KElement],
    s: &SpecializationPoint,
) -> Result<SpecializedClass> {
    let tilde = &model.tilde;
    let f = &s.field;
    let plus = &model.plus;
    let mut fibers: BTreeMap<Anticone, Vec<u64>> = plus
        .fixed_points
        .iter()
        .map(|fp| (fp.delta.clone(), vec![0; fp.characters_with_lifts().len()]))
        .collect();
    for (tp, x) in model.tilde_points.iter().zip(restrictions) {
        let tfp = tilde.point(&tp.delta).expect("tilde point");
        let pfp = plus
            .point(&tp.image_plus)
            .ok_or_else(|| Error::NotMinimal(tp.image_plus.label()))?;
        let num = tilde.fiber(tfp, x, s)?;
        let euler = tilde.fiber(tfp, &tilde.normal_euler(tfp), s)?;
        let local = tilde
            .fiber_div(tfp, &num, &euler, s)
            .map_err(|_| Error::EulerClassVanishes)?;
        let target = fibers.get_mut(&pfp.delta).expect("plus point");
        for (ch, v) in tfp.characters_with_lifts().iter().zip(&local) {
            if *v == 0 || !pfp.is_admissible_exponent(&ch.coset) {
                continue;
            }
            let slot = pfp.coset_of(&ch.coset).expect("admissible coset");
            target[slot] = f.add(target[slot], *v);
        }
    }
    for fp in &plus.fixed_points {
        let euler = plus.fiber(fp, &plus.normal_euler(fp), s)?;
        let v = fibers.get_mut(&fp.delta).unwrap();
        *v = plus.fiber_mul(fp, v, &euler, s);
    }
    Ok(SpecializedClass {
        side: Side::Plus,
        fibers,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    MinusToPlus,
    PlusToMinus,
}

/// A transform written in the localized bases over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformMatrix {
    pub k: i64,
    pub direction: Direction,
    pub point: SpecializationPoint,
    pub entries: FpMatrix,
}

/// Matrix whose column `j` holds the coordinates of `images[j]` in `target`.
pub fn matrix_of_images(
    target: &Space,
    images: &[LocalizedClass],
    s: &SpecializationPoint,
) -> Result<FpMatrix> {
    let cols = images
        .iter()
        .map(|c| target.decompose(c, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(FpMatrix::from_columns(target.basis_size(), &cols))
}

/// `BO_k` (direction minus to plus) or `BO′_k` (plus to minus) at `s`.
pub fn bo_matrix(
    model: &CrossingModel,
    k: i64,
    direction: Direction,
    s: &SpecializationPoint,
) -> Result<TransformMatrix> {
    let entries = match direction {
        Direction::MinusToPlus => matrix_of_images(&model.plus, &bo_images(model, k)?, s)?,
        Direction::PlusToMinus => {
            let mirror = model.mirror()?;
            matrix_of_images(&mirror.plus, &bo_images(&mirror, k)?, s)?
        }
    };
    Ok(TransformMatrix {
        k,
        direction,
        point: s.clone(),
        entries,
    })
}

/// A crossing together with its mirror, memoizing basis images per `k`.
#[derive(Clone, Debug)]
pub struct CrossingPair {
    pub model: CrossingModel,
    pub mirror: CrossingModel,
    forward: BTreeMap<i64, Vec<LocalizedClass>>,
    back: BTreeMap<i64, Vec<LocalizedClass>>,
}

impl CrossingPair {
    pub fn new(model: CrossingModel) -> Result<Self> {
        let mirror = model.mirror()?;
        Ok(CrossingPair {
            model,
            mirror,
            forward: BTreeMap::new(),
            back: BTreeMap::new(),
        })
    }

    pub fn images(&mut self, k: i64, direction: Direction) -> Result<&[LocalizedClass]> {
        let (model, cache) = match direction {
            Direction::MinusToPlus => (&self.model, &mut self.forward),
            Direction::PlusToMinus => (&self.mirror, &mut self.back),
        };
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(k) {
            e.insert(bo_images(model, k)?);
        }
        Ok(&cache[&k])
    }

    pub fn matrix(
        &mut self,
        k: i64,
        direction: Direction,
        s: &SpecializationPoint,
    ) -> Result<FpMatrix> {
        self.images(k, direction)?;
        let (target, cache) = match direction {
            Direction::MinusToPlus => (&self.model.plus, &self.forward),
            Direction::PlusToMinus => (&self.mirror.plus, &self.back),
        };
        matrix_of_images(target, &cache[&k], s)
    }

    /// `BO′_{(N-1)-k} · BO_k = 1`.
    pub fn duality_holds(&mut self, k: i64, s: &SpecializationPoint) -> Result<bool> {
        let forward = self.matrix(k, Direction::MinusToPlus, s)?;
        let back = self.matrix(self.model.wc.n - 1 - k, Direction::PlusToMinus, s)?;
        Ok(back.mul(&s.field, &forward).is_identity())
    }
}

/// `BO′_{(N-1)-k} · BO_k = 1`.
pub fn verify_duality(model: &CrossingModel, k: i64, s: &SpecializationPoint) -> Result<bool> {
    CrossingPair::new(model.clone())?.duality_holds(k, s)
}

/// Basis labels on the minus side whose fixed point also lies on the plus side.
pub fn shared_labels(model: &CrossingModel) -> Vec<(BasisLabel, BasisLabel)> {
    let mut out = Vec::new();
    for b in model.minus.basis_labels() {
        let delta = &model.minus.fixed_points[b.point].delta;
        if let Some(pi) = model.plus.point_index(delta) {
            out.push((
                b,
                BasisLabel {
                    point: pi,
                    character: b.character,
                },
            ));
        }
    }
    out
}

/// Convenience: the datum pair of a crossing given by characters and two stability vectors.
pub fn crossing_from(
    r: usize,
    characters: Vec<Vec<i64>>,
    omega_plus: &[i64],
    omega_minus: &[i64],
) -> Result<CrossingModel> {
    let p = GitDatum::with_integral_omega(r, characters.clone(), omega_plus)?;
    let m = GitDatum::with_integral_omega(r, characters, omega_minus)?;
    CrossingModel::new(&crate::wall::analyze_wall(&p, &m)?)
}
