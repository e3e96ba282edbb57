mod common;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_wall::fixed::Space;
use toric_wall::kring::{KElement, SpecializationPoint};

fn spaces(model: &toric_wall::bo::CrossingModel) -> [&Space; 3] {
    [&model.plus, &model.minus, &model.tilde]
}

#[test]
fn tautological_classes_restrict_to_one() {
    for (name, model) in common::catalog() {
        for space in spaces(&model) {
            let one = KElement::one(space.nt());
            for fp in &space.fixed_points {
                for &j in fp.delta.indices() {
                    assert_eq!(
                        fp.restrict(&space.r_class(j)),
                        one,
                        "{name} {} R_{}",
                        fp.delta,
                        j + 1
                    );
                }
            }
        }
    }
}

#[test]
fn basis_is_supported_at_its_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, model) in common::catalog() {
        for space in spaces(&model) {
            for b in space.basis_labels() {
                let c = space.basis_class(b);
                for (i, fp) in space.fixed_points.iter().enumerate() {
                    if i != b.point {
                        assert!(
                            c.restrictions[&fp.delta].is_zero(),
                            "{name} {}",
                            space.label_name(b)
                        );
                    }
                }
                assert!(space.is_genuine(&c));
            }
            for s in common::points(&mut rng, &model, 5) {
                let m = space.restriction_matrix(&s).unwrap();
                let mut row = 0;
                let mut col = 0;
                for fp in &space.fixed_points {
                    let n = fp.characters_with_lifts().len();
                    for i in 0..space.basis_size() {
                        for j in col..col + n {
                            if !(row..row + n).contains(&i) {
                                assert_eq!(m.get(i, j), 0);
                            }
                        }
                    }
                    row += n;
                    col += n;
                }
                assert!(
                    m.inverse(&s.field).is_some(),
                    "{name}: singular restriction matrix"
                );
            }
        }
    }
}

fn random_product(rng: &mut ChaCha8Rng, space: &Space) -> KElement {
    let mut x = KElement::one(space.global_dim());
    for j in 0..space.datum.m() {
        let e: i64 = rng.gen_range(-2..=2);
        let r = if e >= 0 {
            space.r_class(j)
        } else {
            space.s_class(j)
        };
        for _ in 0..e.abs() {
            x = &x * &r;
        }
    }
    x
}

#[test]
fn decomposition_reconstructs_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (name, model) in common::catalog() {
        for space in spaces(&model) {
            let points = common::points(&mut rng, &model, 5);
            for _ in 0..6 {
                let x = random_product(&mut rng, space);
                let local = space.restrict(&x);
                for fp in &space.fixed_points {
                    assert!(
                        fp.is_admissible(&local.restrictions[&fp.delta]),
                        "{name} {}",
                        fp.delta
                    );
                }
                for s in &points {
                    let coeffs = space.decompose(&local, s).unwrap();
                    let back = space.recompose(&coeffs, s).unwrap();
                    assert_eq!(back, space.specialize_class(&local, s).unwrap(), "{name}");
                }
            }
        }
    }
}

#[test]
fn admissible_lattice_index() {
    for (name, model) in common::catalog()
        .into_iter()
        .chain([("unsaturated", common::unsaturated())])
    {
        for space in spaces(&model) {
            for fp in &space.fixed_points {
                let g = fp.group_order;
                assert_eq!(
                    fp.characters_with_lifts().len() as u64,
                    g,
                    "{name} {}",
                    fp.delta
                );
                let full = g.pow(space.nt() as u32);
                assert_eq!(full % fp.admissible_index(), 0, "{name} {}", fp.delta);
                for ch in fp.characters_with_lifts() {
                    assert!(fp.is_admissible_exponent(&ch.exponent));
                    assert!(fp.is_admissible_exponent(&ch.coset));
                }
            }
        }
    }
}

#[test]
fn pairing_is_independent_of_auxiliary_choices() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (name, model) in common::catalog() {
        let l = model.root_order();
        let s = common::points(&mut rng, &model, 1).remove(0);
        let f = s.field;
        // same values of e^{λ_i}, other roots of y_i^L and another primitive root
        let u = (2..l + 2).find(|u| u.gcd(&l) == 1).unwrap();
        let y: Vec<u64> =
            s.y.iter()
                .map(|&v| f.mul(v, f.pow(s.zeta, rng.gen_range(0..l))))
                .collect();
        let other = SpecializationPoint::from_parts(f, l, y, f.pow(s.zeta, u));
        for i in 0..model.nt() {
            assert_eq!(other.x(i), s.x(i));
        }
        for space in [&model.plus, &model.minus] {
            let labels = space.basis_labels();
            let classes: Vec<_> = labels.iter().map(|b| space.basis_class(*b)).collect();
            let extra = space.restrict(&random_product(&mut rng, space));
            for a in classes.iter().chain([&extra]) {
                for b in classes.iter().chain([&extra]) {
                    let v = space.euler_pairing(a, b, &s).unwrap();
                    assert_eq!(space.euler_pairing(a, b, &other).unwrap(), v, "{name}");
                    assert_eq!(
                        space.euler_pairing_by_average(a, b, &s).unwrap(),
                        v,
                        "{name}"
                    );
                    assert_eq!(
                        space.euler_pairing_by_average(a, b, &other).unwrap(),
                        v,
                        "{name}"
                    );
                }
            }
        }
    }
}
