//! Exceptional loci of the contraction, their twisted structure sheaves as
//! K-classes, Euler pairings and spherical twists.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bo::{CrossingModel, CrossingPair, Direction, TransformMatrix};
use crate::error::{Error, Result};
use crate::field::FpMatrix;
use crate::fixed::{LocalizedClass, Side};
use crate::kring::{KElement, SpecializationPoint};
use crate::lattice::{saturation_index, solve_linear_form};
use crate::wall::{wall_lattice_generators, WallCrossing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalDatum {
    pub side: Side,
    /// `(D_i·e)_{i∈M_+}` on the plus side, `(-D_i·e)_{i∈M_-}` on the minus side.
    pub weights: Vec<i64>,
    /// Index of `<D_i : i ∈ M_0>` in the wall lattice; 0 when the ranks differ.
    pub saturation_index: u64,
    pub quotient_rank_ok: bool,
}

impl ExceptionalDatum {
    pub fn saturated(&self) -> bool {
        self.quotient_rank_ok && self.saturation_index == 1
    }
}

pub fn exceptional_data(wc: &WallCrossing, side: Side) -> ExceptionalDatum {
    let weights = match side {
        Side::Minus => wc.m_minus.iter().map(|&i| -wc.pairing(i)).collect(),
        _ => wc.m_plus.iter().map(|&i| wc.pairing(i)).collect(),
    };
    let sub: Vec<Vec<i64>> = wc
        .m_zero
        .iter()
        .map(|&i| wc.plus.character(i).to_vec())
        .collect();
    let lattice = wall_lattice_generators(&wc.e);
    let (saturation_index, quotient_rank_ok) = match saturation_index(&sub, &lattice) {
        Ok(ix) => (ix.to_u64().unwrap_or(u64::MAX), true),
        Err(_) => (0, false),
    };
    ExceptionalDatum {
        side,
        weights,
        saturation_index,
        quotient_rank_ok,
    }
}

/// `p_1 ∈ L^∨` with `p_1·e = -1`, the degree-one twist on the minus-side locus.
pub fn degree_one(wc: &WallCrossing) -> Vec<i64> {
    solve_linear_form(&wc.e, -1).expect("e is primitive")
}

fn require_saturated(model: &CrossingModel) -> Result<()> {
    let ex = exceptional_data(&model.wc, Side::Minus);
    if !ex.saturated() {
        return Err(Error::SaturationFailure(ex.saturation_index));
    }
    Ok(())
}

/// `[j_* O_{P(b)}(k)] = L_-(k p_1) Π_{i∈M_+} (1 - S_i^-)` on the minus side.
pub fn substack_class(model: &CrossingModel, k: i64) -> Result<LocalizedClass> {
    require_saturated(model)?;
    let minus = &model.minus;
    let p1 = degree_one(&model.wc);
    let pk: Vec<i64> = p1.iter().map(|x| x * k).collect();
    let one = KElement::one(minus.global_dim());
    let mut g = minus.line(&pk, &vec![0; minus.nt()]);
    for &i in &model.wc.m_plus {
        g = &g * &(&one - &minus.s_class(i));
    }
    Ok(minus.restrict(&g))
}

/// Twist data at one specialization: `T(E) = E - χ(W, E) W` is `1 - w c^T`.
#[derive(Clone, Debug)]
pub struct TwistOperator {
    pub k: i64,
    pub side: Side,
    pub class: LocalizedClass,
    /// Coordinates of `W_k` in the localized basis.
    pub w: Vec<u64>,
    /// `c_j = χ(W_k, e_j)`.
    pub c: Vec<u64>,
}

pub fn twist_operator(
    model: &CrossingModel,
    k: i64,
    s: &SpecializationPoint,
) -> Result<TwistOperator> {
    let class = substack_class(model, k)?;
    let minus = &model.minus;
    let w = minus.decompose(&class, s)?;
    let c = minus
        .basis_labels()
        .into_iter()
        .map(|b| minus.euler_pairing(&class, &minus.basis_class(b), s))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistOperator {
        k,
        side: minus.side,
        class,
        w,
        c,
    })
}

impl TwistOperator {
    pub fn matrix(&self, s: &SpecializationPoint) -> FpMatrix {
        let f = &s.field;
        let n = self.w.len();
        let mut m = FpMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let v = f.sub(m.get(i, j), f.mul(self.w[i], self.c[j]));
                m.set(i, j, v);
            }
        }
        m
    }

    /// `1 + w c^T / (1 - c·w)`, when `c·w ≠ 1`.
    pub fn inverse_matrix(&self, s: &SpecializationPoint) -> Option<FpMatrix> {
        let f = &s.field;
        let cw = self
            .c
            .iter()
            .zip(&self.w)
            .fold(0, |acc, (a, b)| f.add(acc, f.mul(*a, *b)));
        let scale = f.inv(f.sub(1, cw))?;
        let n = self.w.len();
        let mut m = FpMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let v = f.add(m.get(i, j), f.mul(scale, f.mul(self.w[i], self.c[j])));
                m.set(i, j, v);
            }
        }
        Some(m)
    }
}

pub fn twist_matrix(
    model: &CrossingModel,
    k: i64,
    s: &SpecializationPoint,
) -> Result<TransformMatrix> {
    let op = twist_operator(model, k, s)?;
    Ok(TransformMatrix {
        k,
        direction: Direction::MinusToPlus,
        point: s.clone(),
        entries: op.matrix(s),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeCheck {
    pub identity: String,
    pub holds: bool,
}

/// Checks `BO′_{-k-1} · BO_{(N-1)+k} = T(k)^{-1}` for `k ∈ {-1, …, N-1}` and
/// `FM′ · FM = T(-1)^{-1} ⋯ T(-(N-1))^{-1}` on the minus side of `model`.
pub fn verify_composites(
    model: &CrossingModel,
    s: &SpecializationPoint,
) -> Result<Vec<CompositeCheck>> {
    require_saturated(model)?;
    composites(&mut CrossingPair::new(model.clone())?, s)
}

/// As [`verify_composites`], reusing the images cached in `pair`.
pub fn composites(pair: &mut CrossingPair, s: &SpecializationPoint) -> Result<Vec<CompositeCheck>> {
    require_saturated(&pair.model)?;
    let f = &s.field;
    let n = pair.model.wc.n;
    let mut inverse_twists = BTreeMap::new();
    for k in -(n - 1)..=n - 1 {
        let t = twist_operator(&pair.model, k, s)?
            .inverse_matrix(s)
            .ok_or(Error::SingularAfterResampling(0))?;
        inverse_twists.insert(k, t);
    }
    let mut out = Vec::new();
    for k in -1..=n - 1 {
        let forward = pair.matrix(n - 1 + k, Direction::MinusToPlus, s)?;
        let lhs = pair
            .matrix(-k - 1, Direction::PlusToMinus, s)?
            .mul(f, &forward);
        out.push(CompositeCheck {
            identity: format!("BO'_{} * BO_{} = T(O({k}))^-1", -k - 1, n - 1 + k),
            holds: lhs == inverse_twists[&k],
        });
    }
    let forward = pair.matrix(0, Direction::MinusToPlus, s)?;
    let lhs = pair.matrix(0, Direction::PlusToMinus, s)?.mul(f, &forward);
    let mut rhs = FpMatrix::identity(pair.model.minus.basis_size());
    for i in 1..n {
        rhs = rhs.mul(f, &inverse_twists[&-i]);
    }
    out.push(CompositeCheck {
        identity: format!(
            "FM' * FM = {}",
            if n > 1 {
                (1..n)
                    .map(|i| format!("T(O(-{i}))^-1"))
                    .collect::<Vec<_>>()
                    .join(" * ")
            } else {
                "1".to_string()
            }
        ),
        holds: lhs == rhs,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bo::crossing_from;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_dim(chars: &[i64]) -> CrossingModel {
        crossing_from(1, chars.iter().map(|&c| vec![c]).collect(), &[1], &[-1]).unwrap()
    }

    #[test]
    fn weights_examples() {
        let c = one_dim(&[1, 1, -1, -1]);
        assert_eq!(exceptional_data(&c.wc, Side::Plus).weights, vec![1, 1]);
        let w = one_dim(&[1, 1, -2]);
        assert_eq!(exceptional_data(&w.wc, Side::Minus).weights, vec![2]);
        let f = one_dim(&[1, 2, -1, -2]);
        let ex = exceptional_data(&f.wc, Side::Plus);
        assert_eq!(ex.weights, vec![1, 2]);
        assert!(ex.saturated());
    }

    #[test]
    fn calibration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for chars in [&[1, 1, -1, -1][..], &[1, 1, -2][..], &[1, 2, -1, -2][..]] {
            let model = one_dim(chars);
            let s = SpecializationPoint::random(&mut rng, model.nt(), model.root_order(), 40);
            let minus = &model.minus;
            let o = minus.restrict(&KElement::one(minus.global_dim()));
            let w0 = substack_class(&model, 0).unwrap();
            assert_eq!(minus.euler_pairing(&o, &w0, &s).unwrap(), 1, "{chars:?}");
            for j in 1..model.wc.n {
                let wj = substack_class(&model, -j).unwrap();
                assert_eq!(
                    minus.euler_pairing(&o, &wj, &s).unwrap(),
                    0,
                    "{chars:?} j={j}"
                );
            }
        }
    }

    #[test]
    fn composites_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for chars in [&[1, 1, -1, -1][..], &[1, 1, -2][..], &[1, 2, -1, -2][..]] {
            let model = one_dim(chars);
            let s = SpecializationPoint::random(&mut rng, model.nt(), model.root_order(), 40);
            for check in verify_composites(&model, &s).unwrap() {
                assert!(check.holds, "{chars:?}: {}", check.identity);
            }
        }
    }
}
