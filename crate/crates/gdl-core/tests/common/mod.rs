#![allow(dead_code)]

use gdl_core::gabor_engine::WindowFamily;
use gdl_core::phase_space::PhaseSpace;
use gdl_core::{Complex64, Signal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn signal(len: usize, r: &mut ChaCha8Rng) -> Signal {
    (0..len)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect()
}

pub fn family(space: &PhaseSpace, d: usize, n: usize, r: &mut ChaCha8Rng) -> WindowFamily {
    WindowFamily::new(space.group().clone(), d, n, signal(d * n * space.n(), r)).unwrap()
}

pub fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Groups of order at most `max_order`, cyclic first.
pub fn small_groups(max_order: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = (2..=max_order).map(|n| vec![n]).collect();
    for orders in [vec![2, 2], vec![2, 4], vec![2, 2, 2], vec![3, 3], vec![2, 6]] {
        if orders.iter().product::<u64>() <= max_order {
            out.push(orders);
        }
    }
    out
}
