use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toric_wall::lattice::*;

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, cols), rows)
}

fn shaped(range: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(move |(r, c)| matrix(r, c, range).prop_map(move |m| (c, m)))
}

fn unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && m.det().abs().is_one()
}

fn q(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat(x)).collect()
}

proptest! {
    #[test]
    fn smith_form_factors((cols, rows) in shaped(6)) {
        let a = IntMatrix::from_rows(cols, &rows);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&snf.s).mul(&snf.v), a.clone());
        prop_assert!(snf.s.is_diagonal());
        prop_assert!(unimodular(&snf.u));
        prop_assert!(unimodular(&snf.v));
        let d = snf.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        prop_assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), a.rank());
    }

    #[test]
    fn full_lattice_index(n in 1usize..=3, seed in matrix(3, 3, 4)) {
        let rows: Vec<Vec<i64>> = seed.iter().take(n).map(|r| r[..n].to_vec()).collect();
        let a = IntMatrix::from_rows(n, &rows);
        prop_assume!(!a.det().is_zero());
        let lat = FullLattice::new(&a).unwrap();
        prop_assert_eq!(lat.index(), a.det().abs());
        for r in &rows {
            let v: Vec<BigInt> = r.iter().map(|&x| int(x)).collect();
            prop_assert!(lat.contains(&v));
        }
        let reps = lat.coset_representatives();
        prop_assert_eq!(BigInt::from(reps.len()), lat.index());
        for rep in reps.iter().take(50) {
            prop_assert_eq!(&lat.reduce(rep), rep);
            let shifted: Vec<BigInt> = rep.iter().zip(&rows[0]).map(|(x, &y)| x + 3 * y).collect();
            prop_assert_eq!(&lat.reduce(&shifted), rep);
        }
    }

    #[test]
    fn strict_cone_monotone(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=4),
        omega in prop::collection::vec(-4i64..=4, 2),
        coeffs in prop::collection::vec(0i64..=3, 4),
    ) {
        let g: Vec<i64> = (0..2)
            .map(|k| gens.iter().zip(&coeffs).map(|(v, c)| v[k] * c).sum())
            .collect();
        let mut bigger = gens.clone();
        bigger.push(g);
        prop_assert_eq!(in_strict_cone(&gens, &q(&omega)), in_strict_cone(&bigger, &q(&omega)));
    }

    #[test]
    fn strict_cone_positive_combinations(
        gens in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..=5),
        coeffs in prop::collection::vec((1i64..=7, 1i64..=4), 5),
    ) {
        let omega: Vec<BigRational> = (0..3)
            .map(|k| {
                gens.iter()
                    .zip(&coeffs)
                    .map(|(v, (a, b))| BigRational::new(int(*a * v[k]), int(*b)))
                    .sum()
            })
            .collect();
        prop_assert!(in_strict_cone(&gens, &omega));
        prop_assert!(in_closed_cone(&gens, &omega));
    }

    #[test]
    fn strict_cone_brute_force_2d(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2..=4),
        omega in prop::collection::vec(-4i64..=4, 2),
    ) {
        prop_assume!(rank_of(&gens) == 2);
        let answer = in_strict_cone(&gens, &q(&omega));
        let primal = grid_witness(&gens, &omega);
        let dual = separating_witness(&gens, &omega);
        prop_assert!(!(primal && dual));
        prop_assert!(primal || dual);
        prop_assert_eq!(answer, primal);
    }

    #[test]
    fn primitive_scaling(
        v in prop::collection::vec((-9i64..=9, 1i64..=5), 1..=4),
        scale in (1i64..=12, 1i64..=7),
    ) {
        let v: Vec<BigRational> = v.iter().map(|&(n, d)| BigRational::new(int(n), int(d))).collect();
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let p = primitive_vector(&v).unwrap();
        let c = BigRational::new(int(scale.0), int(scale.1));
        let scaled: Vec<BigRational> = v.iter().map(|x| x * &c).collect();
        prop_assert_eq!(&primitive_vector(&scaled).unwrap(), &p);
        let again: Vec<BigRational> = p.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        prop_assert_eq!(&primitive_vector(&again).unwrap(), &p);
        let g = p.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        prop_assert!(g.is_one());
    }
}

/// Fix all but two coefficients on a grid and solve exactly for the rest.
fn grid_witness(gens: &[Vec<i64>], omega: &[i64]) -> bool {
    let grid: Vec<BigRational> = [(1, 100), (1, 10), (1, 3), (1, 1), (3, 1), (10, 1)]
        .iter()
        .map(|&(n, d)| BigRational::new(int(n), int(d)))
        .collect();
    let n = gens.len();
    for i in 0..n {
        for j in i + 1..n {
            let det = gens[i][0] * gens[j][1] - gens[i][1] * gens[j][0];
            if det == 0 {
                continue;
            }
            let others: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
            let mut idx = vec![0usize; others.len()];
            loop {
                let mut rest = q(omega);
                for (slot, &k) in idx.iter().zip(&others) {
                    for t in 0..2 {
                        rest[t] -= &grid[*slot] * rat(gens[k][t]);
                    }
                }
                let d = rat(det);
                let a = (&rest[0] * rat(gens[j][1]) - &rest[1] * rat(gens[j][0])) / &d;
                let b = (&rest[1] * rat(gens[i][0]) - &rest[0] * rat(gens[i][1])) / &d;
                if a.is_positive() && b.is_positive() {
                    return true;
                }
                let Some(pos) = idx.iter().position(|&s| s + 1 < grid.len()) else {
                    break;
                };
                idx[pos] += 1;
                for s in idx.iter_mut().take(pos) {
                    *s = 0;
                }
            }
        }
    }
    false
}

/// A functional `u` with `u·g ≥ 0` on every generator that rules `omega` out of
/// the interior. Facets of a plane cone are orthogonal to generators.
fn separating_witness(gens: &[Vec<i64>], omega: &[i64]) -> bool {
    let mut candidates: Vec<[i64; 2]> = Vec::new();
    for g in gens {
        candidates.push([-g[1], g[0]]);
        candidates.push([g[1], -g[0]]);
    }
    candidates.into_iter().any(|u| {
        let on = |v: &[i64]| u[0] * v[0] + u[1] * v[1];
        gens.iter().all(|g| on(g) >= 0) && on(omega) <= 0 && (u != [0, 0])
    })
}
