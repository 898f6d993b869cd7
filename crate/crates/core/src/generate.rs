//! Seeded random complexes for tests, experiments and the `random` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::morse::MorseFunction;
use crate::simplex::Simplex;

/// Closure of a few random simplices on `1..=max_vertices` vertices, each of
/// dimension at most `max_dim`. Every vertex is present; the result may be
/// disconnected.
pub fn random_complex(seed: u64, max_vertices: usize, max_dim: usize) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut simplices: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
    add_random_simplices(&mut rng, n, max_dim, &mut simplices);
    SimplicialComplex::closure(simplices)
}

/// Like [`random_complex`] but connected: a random spanning tree on the
/// vertices is added first. Has at least two vertices when `max_vertices >= 2`.
pub fn random_connected_complex(seed: u64, max_vertices: usize, max_dim: usize) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = max_vertices.clamp(1, 2);
    let n = rng.gen_range(lo..=max_vertices.max(1));
    let mut simplices: Vec<Simplex> = vec![Simplex::vertex(0)];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        simplices.push(Simplex::edge(order[k], parent));
    }
    add_random_simplices(&mut rng, n, max_dim, &mut simplices);
    SimplicialComplex::closure(simplices)
}

fn add_random_simplices(rng: &mut ChaCha8Rng, n: usize, max_dim: usize, out: &mut Vec<Simplex>) {
    if n < 2 || max_dim == 0 {
        return;
    }
    let count = rng.gen_range(0..=n);
    let vertices: Vec<usize> = (0..n).collect();
    for _ in 0..count {
        let size = rng.gen_range(2..=(max_dim + 1).min(n));
        let chosen: Vec<usize> = vertices.choose_multiple(rng, size).copied().collect();
        out.push(Simplex::new(chosen).expect("distinct vertices"));
    }
}

/// A random connected complex together with a random Morse function on it.
pub fn random_instance(seed: u64, max_vertices: usize, max_dim: usize) -> MorseFunction {
    let k = random_connected_complex(seed, max_vertices, max_dim);
    MorseFunction::random(k, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1))
}
