use itertools::Itertools;
use num_traits::Zero;
use proptest::prelude::*;
use toric_wall::bo::crossing_from;
use toric_wall::fixed::Side;
use toric_wall::git::{Anticone, GitDatum};
use toric_wall::twist::exceptional_data;
use toric_wall::wall::{analyze_wall, build_blowup, TildeKind};

fn datum() -> impl Strategy<Value = GitDatum> {
    (1usize..=2).prop_flat_map(|r| {
        (
            prop::collection::vec(prop::collection::vec(-2i64..=2, r), 0..=6 - r),
            prop::collection::vec(1i64..=3, r),
        )
            .prop_map(move |(extra, omega)| {
                // the coordinate vectors keep the full set an anticone
                let mut chars: Vec<Vec<i64>> = (0..r)
                    .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
                    .collect();
                chars.extend(extra);
                GitDatum::with_integral_omega(r, chars, &omega).unwrap()
            })
    })
}

fn brute_minimal(d: &GitDatum) -> Vec<Anticone> {
    let anticones: Vec<Vec<usize>> = (0..=d.m())
        .flat_map(|k| (0..d.m()).combinations(k))
        .filter(|s| d.is_anticone(s))
        .collect();
    let mut out: Vec<Anticone> = anticones
        .iter()
        .filter(|s| {
            !anticones
                .iter()
                .any(|t| t.len() < s.len() && t.iter().all(|i| s.contains(i)))
        })
        .map(|s| Anticone::new(s.clone()))
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimal_anticones_brute_force(d in datum()) {
        prop_assume!(d.validate().passed());
        let mut found = d.minimal_anticones().unwrap();
        found.sort();
        prop_assert_eq!(&found, &brute_minimal(&d));
        for delta in &found {
            prop_assert!(!d.matrix_of(delta).det().is_zero());
        }
    }

    #[test]
    fn anticones_superset_closed(d in datum()) {
        prop_assume!(d.validate().passed());
        let all = d.anticones().unwrap();
        for a in &all {
            for j in 0..d.m() {
                if !a.contains(j) {
                    prop_assert!(all.contains(&a.with(j)));
                }
            }
        }
        let direct: Vec<Anticone> = (0..=d.m())
            .flat_map(|k| (0..d.m()).combinations(k))
            .filter(|s| d.is_anticone(s))
            .map(Anticone::new)
            .sorted()
            .collect();
        prop_assert_eq!(all, direct);
    }
}

/// Rank-one crepant crossings with weights `a` on the plus side and `b` on the minus side.
fn rank_one_crossing() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=3, 1..=3).prop_flat_map(|a| {
        let n: i64 = a.iter().sum();
        prop::collection::vec(1i64..=3, 1..=3)
            .prop_filter("same total", move |b| b.iter().sum::<i64>() == n)
            .prop_map({
                let a = a.clone();
                move |b| a.iter().copied().chain(b.iter().map(|x| -x)).collect()
            })
    })
}

fn check_crossing(r: usize, chars: Vec<Vec<i64>>, wp: &[i64], wm: &[i64]) {
    let plus = GitDatum::with_integral_omega(r, chars.clone(), wp).unwrap();
    let minus = GitDatum::with_integral_omega(r, chars.clone(), wm).unwrap();
    let wc = analyze_wall(&plus, &minus).unwrap();
    assert!(wc.crepant);
    for side in [Side::Plus, Side::Minus] {
        let ex = exceptional_data(&wc, side);
        assert_eq!(ex.weights.iter().sum::<i64>(), wc.n, "{chars:?} {side:?}");
        assert!(ex.weights.iter().all(|&w| w > 0));
    }
    let blowup = build_blowup(&wc).unwrap();
    let m = wc.m();
    for (j, c) in blowup.characters.iter().take(m).enumerate() {
        assert_eq!(&c[..r], &chars[j][..]);
        assert_eq!(c[r], (-wc.pairing(j)).min(0));
    }
    assert_eq!(blowup.characters[m][..r], vec![0; r][..]);
    let plus_minimal = blowup.plus.minimal_anticones().unwrap();
    let minus_minimal = blowup.minus.minimal_anticones().unwrap();
    for t in blowup.tilde_fixed_points(&wc) {
        if t.kind != TildeKind::Flopping {
            continue;
        }
        let jp = *t
            .delta
            .indices()
            .iter()
            .find(|&&j| wc.pairing(j) > 0)
            .unwrap();
        let jm = *t
            .delta
            .indices()
            .iter()
            .find(|&&j| wc.pairing(j) < 0)
            .unwrap();
        assert!(
            plus_minimal.contains(&t.delta.without(jm).with(m)),
            "{chars:?} {}",
            t.delta
        );
        assert!(
            minus_minimal.contains(&t.delta.without(jp).with(m)),
            "{chars:?} {}",
            t.delta
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_one_wall_invariants(chars in rank_one_crossing()) {
        check_crossing(1, chars.iter().map(|&c| vec![c]).collect(), &[1], &[-1]);
    }
}

#[test]
fn rank_two_wall_invariants() {
    check_crossing(
        2,
        vec![
            vec![1, 0],
            vec![2, 1],
            vec![-1, 0],
            vec![-1, 1],
            vec![-1, 2],
            vec![0, 1],
        ],
        &[1, 10],
        &[-1, 10],
    );
    check_crossing(
        2,
        vec![
            vec![1, 1],
            vec![1, 0],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, 2],
        ],
        &[1, 3],
        &[-1, 3],
    );
}

#[test]
fn catalog_flopping_points() {
    // D = (1,1,-2): the flopping anticones of the blow-up are {1,3} and {2,3}
    let model = crossing_from(1, vec![vec![1], vec![1], vec![-2]], &[1], &[-1]).unwrap();
    let flopping: Vec<String> = model
        .tilde_points
        .iter()
        .filter(|t| t.kind == TildeKind::Flopping)
        .map(|t| t.delta.label())
        .collect();
    assert_eq!(flopping, vec!["{1,3}", "{2,3}"]);
    let conifold =
        crossing_from(1, vec![vec![1], vec![1], vec![-1], vec![-1]], &[1], &[-1]).unwrap();
    assert!(conifold
        .tilde_points
        .iter()
        .all(|t| t.kind == TildeKind::Flopping));
}
