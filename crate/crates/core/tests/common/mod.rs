#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use toric_wall::bo::{crossing_from, CrossingModel};
use toric_wall::kring::SpecializationPoint;

pub fn one_dim(chars: &[i64]) -> CrossingModel {
    crossing_from(1, chars.iter().map(|&c| vec![c]).collect(), &[1], &[-1]).unwrap()
}

pub fn conifold() -> CrossingModel {
    one_dim(&[1, 1, -1, -1])
}

pub fn weighted() -> CrossingModel {
    one_dim(&[1, 1, -2])
}

pub fn weighted_flop() -> CrossingModel {
    one_dim(&[1, 2, -1, -2])
}

pub fn rank_two() -> CrossingModel {
    let chars = vec![
        vec![1, 0],
        vec![2, 1],
        vec![-1, 0],
        vec![-1, 1],
        vec![-1, 2],
        vec![0, 1],
    ];
    crossing_from(2, chars, &[1, 10], &[-1, 10]).unwrap()
}

/// A crossing whose contracted locus has saturation index 2.
pub fn unsaturated() -> CrossingModel {
    let chars = vec![
        vec![1, 1],
        vec![1, 0],
        vec![-1, 0],
        vec![-1, -1],
        vec![0, 2],
    ];
    crossing_from(2, chars, &[1, 3], &[-1, 3]).unwrap()
}

pub fn catalog() -> Vec<(&'static str, CrossingModel)> {
    vec![
        ("conifold", conifold()),
        ("weighted", weighted()),
        ("weighted-flop", weighted_flop()),
        ("rank-two", rank_two()),
    ]
}

pub fn points(
    rng: &mut ChaCha8Rng,
    model: &CrossingModel,
    count: usize,
) -> Vec<SpecializationPoint> {
    (0..count)
        .map(|_| SpecializationPoint::random(rng, model.nt(), model.root_order(), 61))
        .collect()
}
