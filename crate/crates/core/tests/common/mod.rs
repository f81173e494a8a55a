#![allow(dead_code)]

use cubekit::{Cubulation, Facet, Pairing, Relabeling, SignedPerm3, SignedPerm4};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random complete cubulation with `n` hypercubes. With `orientable`,
/// every pairing reverses orientation before a random relabeling scrambles
/// the frames.
pub fn random_cubulation(n: usize, seed: u64, orientable: bool) -> Cubulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps = SignedPerm3::all();
    let mut facets: Vec<Facet> = (0..n).flat_map(Facet::all_of).collect();
    facets.shuffle(&mut rng);
    let pairings = facets.chunks(2).map(|pair| {
        let mut map = *maps.choose(&mut rng).unwrap();
        let p = Pairing::new(pair[0], pair[1], map);
        if orientable && !p.is_orientation_reversing() {
            let mut image = map.image();
            image[0] = -image[0];
            map = SignedPerm3::new(image).unwrap();
        }
        Pairing::new(pair[0], pair[1], map)
    });
    let c = Cubulation::new(n, pairings.collect::<Vec<_>>(), []);
    if orientable {
        c.relabel(&random_relabeling(n, &mut rng))
    } else {
        c
    }
}

/// Same as [`random_cubulation`], retrying seeds until the result is connected.
pub fn random_connected(n: usize, seed: u64, orientable: bool) -> Cubulation {
    (0..)
        .map(|i| random_cubulation(n, seed.wrapping_mul(1_000_003).wrapping_add(i), orientable))
        .find(|c| c.components().len() == 1)
        .unwrap()
}

pub fn random_relabeling(n: usize, rng: &mut impl Rng) -> Relabeling {
    let all = SignedPerm4::all();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Relabeling { perm, frames: (0..n).map(|_| *all.choose(rng).unwrap()).collect() }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
