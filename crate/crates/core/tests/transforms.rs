mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_wall::bo::*;
use toric_wall::error::Error;
use toric_wall::field::FpMatrix;
use toric_wall::fixed::Side;
use toric_wall::kring::KElement;
use toric_wall::twist::*;

fn k_range(model: &CrossingModel) -> std::ops::RangeInclusive<i64> {
    -2..=model.wc.n + 2
}

#[test]
fn formula_agrees_with_blowup() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (name, model) in common::catalog() {
        let points = common::points(&mut rng, &model, 5);
        for k in k_range(&model) {
            let images = bo_images(&model, k).unwrap();
            for (b, image) in model.minus.basis_labels().into_iter().zip(&images) {
                assert!(model.plus.is_genuine(image), "{name} k={k}");
                let alpha = model.minus.basis_class(b);
                let pulled = blowup_restrictions(&model, k, &alpha).unwrap();
                for s in &points {
                    let direct = model.plus.specialize_class(image, s).unwrap();
                    assert_eq!(
                        bo_geometric_at(&model, &pulled, s).unwrap(),
                        direct,
                        "{name} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn blowup_distinguishes_twists() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for (name, model) in common::catalog() {
        let s = common::points(&mut rng, &model, 1).remove(0);
        let formula = matrix_of_images(&model.plus, &bo_images(&model, 1).unwrap(), &s).unwrap();
        let labels = model.minus.basis_labels();
        let mut columns = Vec::new();
        for b in &labels {
            let geo = bo_geometric(&model, 0, &model.minus.basis_class(*b), &s).unwrap();
            columns.push(model.plus.decompose_specialized(&geo, &s).unwrap());
        }
        let geometric = FpMatrix::from_columns(model.plus.basis_size(), &columns);
        assert_ne!(formula, geometric, "{name}");
    }
}

#[test]
fn identity_case_and_invertibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut shared_total = 0;
    for (name, model) in common::catalog() {
        let shared = shared_labels(&model);
        shared_total += shared.len();
        let s = common::points(&mut rng, &model, 1).remove(0);
        for k in k_range(&model) {
            let m = bo_matrix(&model, k, Direction::MinusToPlus, &s)
                .unwrap()
                .entries;
            assert!(m.inverse(&s.field).is_some(), "{name} k={k}");
            let labels = model.minus.basis_labels();
            let plus_labels = model.plus.basis_labels();
            for (minus_b, plus_b) in &shared {
                let col = m.column(labels.iter().position(|b| b == minus_b).unwrap());
                let row = plus_labels.iter().position(|b| b == plus_b).unwrap();
                for (i, v) in col.iter().enumerate() {
                    assert_eq!(*v, u64::from(i == row), "{name} k={k}");
                }
            }
        }
    }
    assert!(shared_total > 0);
}

#[test]
fn duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for (name, model) in common::catalog() {
        let mut pair = CrossingPair::new(model.clone()).unwrap();
        for s in common::points(&mut rng, &model, 2) {
            for k in k_range(&model) {
                assert!(pair.duality_holds(k, &s).unwrap(), "{name} k={k}");
            }
            // the pairing of BO_k with BO′_{(N-1)-k} is the only one that works
            let n = model.wc.n;
            let forward = pair.matrix(0, Direction::MinusToPlus, &s).unwrap();
            let wrong = pair.matrix(n, Direction::PlusToMinus, &s).unwrap();
            assert!(!wrong.mul(&s.field, &forward).is_identity(), "{name}");
        }
    }
}

#[test]
fn composites_on_both_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for (name, model) in common::catalog() {
        assert!(exceptional_data(&model.wc, Side::Minus).saturated());
        let mut pair = CrossingPair::new(model.clone()).unwrap();
        let mut mirrored = CrossingPair::new(model.mirror().unwrap()).unwrap();
        for s in common::points(&mut rng, &model, 2) {
            for p in [&mut pair, &mut mirrored] {
                for check in composites(p, &s).unwrap() {
                    assert!(check.holds, "{name}: {}", check.identity);
                }
            }
        }
    }
}

#[test]
fn composites_are_not_vacuous() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for (name, model) in common::catalog() {
        let s = common::points(&mut rng, &model, 1).remove(0);
        let f = &s.field;
        let n = model.wc.n;
        let mut pair = CrossingPair::new(model.clone()).unwrap();
        for k in -1..n {
            let t = twist_operator(&model, k, &s).unwrap();
            assert!(!t.matrix(&s).is_identity(), "{name} k={k}");
            let lhs = pair
                .matrix(-k - 1, Direction::PlusToMinus, &s)
                .unwrap()
                .mul(
                    f,
                    &pair.matrix(n - 1 + k, Direction::MinusToPlus, &s).unwrap(),
                );
            assert!(!lhs.is_identity(), "{name} k={k}");
            let shifted = twist_operator(&model, k + 1, &s)
                .unwrap()
                .inverse_matrix(&s)
                .unwrap();
            assert_ne!(lhs, shifted, "{name} k={k}");
        }
    }
}

#[test]
fn twist_inverse_is_the_dual_pairing_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for (name, model) in common::catalog() {
        let minus = &model.minus;
        for s in common::points(&mut rng, &model, 2) {
            let f = &s.field;
            let dual = s.inverse();
            for k in -(model.wc.n - 1)..model.wc.n {
                let op = twist_operator(&model, k, &s).unwrap();
                let inverse = op.matrix(&s).inverse(f).unwrap();
                assert_eq!(Some(inverse.clone()), op.inverse_matrix(&s));
                // E ↦ E - χ′(E, W) W, with χ′(E, W) = χ(E, W) read at the dual point
                let c: Vec<u64> = minus
                    .basis_labels()
                    .into_iter()
                    .map(|b| {
                        minus
                            .euler_pairing(&minus.basis_class(b), &op.class, &dual)
                            .unwrap()
                    })
                    .collect();
                let n = op.w.len();
                let mut m = FpMatrix::identity(n);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, f.sub(m.get(i, j), f.mul(op.w[i], c[j])));
                    }
                }
                assert_eq!(m, inverse, "{name} k={k}");
            }
        }
    }
}

#[test]
fn calibration_of_exceptional_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for (name, model) in common::catalog() {
        let minus = &model.minus;
        let o = minus.restrict(&KElement::one(minus.global_dim()));
        for s in common::points(&mut rng, &model, 2) {
            let w0 = substack_class(&model, 0).unwrap();
            assert_eq!(minus.euler_pairing(&o, &w0, &s).unwrap(), 1, "{name}");
            for j in 1..model.wc.n {
                let wj = substack_class(&model, -j).unwrap();
                assert_eq!(minus.euler_pairing(&o, &wj, &s).unwrap(), 0, "{name} j={j}");
            }
        }
    }
}

#[test]
fn unsaturated_locus_has_no_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    let model = common::unsaturated();
    let ex = exceptional_data(&model.wc, Side::Minus);
    assert_eq!(ex.saturation_index, 2);
    assert!(matches!(
        substack_class(&model, 0),
        Err(Error::SaturationFailure(2))
    ));
    let s = common::points(&mut rng, &model, 1).remove(0);
    assert!(matches!(
        verify_composites(&model, &s),
        Err(Error::SaturationFailure(2))
    ));
    let mut pair = CrossingPair::new(model.clone()).unwrap();
    for k in k_range(&model) {
        assert!(pair.duality_holds(k, &s).unwrap(), "k={k}");
    }
}

#[test]
fn shifting_the_lift_twists_the_image() {
    // ρ̂ + D_j with j ∈ δ names the same character; the image picks up e^{-w_j}
    for (name, model) in common::catalog() {
        for fp in &model.minus.fixed_points {
            for c in fp.characters_with_lifts() {
                for &j in fp.delta.indices() {
                    let lift: Vec<i64> = c
                        .rho_hat
                        .iter()
                        .zip(model.minus.datum.character(j))
                        .map(|(a, b)| a + b)
                        .collect();
                    let mu: Vec<i64> = model.minus.weights[j].iter().map(|w| -w).collect();
                    let phase = KElement::integral_monomial(&mu);
                    for k in -1..=model.wc.n {
                        let base = bo_apply(&model, k, &fp.delta, c).unwrap();
                        let shifted = bo_apply_with_lift(&model, k, &fp.delta, &lift).unwrap();
                        for (delta, x) in &base.restrictions {
                            assert_eq!(
                                &(x * &phase),
                                &shifted.restrictions[delta],
                                "{name} {delta} k={k}"
                            );
                        }
                    }
                }
            }
        }
    }
}
