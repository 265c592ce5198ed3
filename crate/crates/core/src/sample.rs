//! Seeded random generators used by property tests and verification suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cardinal::{sup, Cardinal};
use crate::fg::{FgGroup, FgSubgroup};
use crate::group::{Atom, StructuredGroup};

const PRIMES: [u64; 3] = [2, 3, 5];

/// A random cardinal term of nesting depth at most `depth`.
pub fn random_cardinal<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Cardinal {
    let choice = if depth == 0 {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..4)
    };
    match choice {
        0 => Cardinal::finite(rng.gen_range(0..20)),
        1 => Cardinal::aleph(rng.gen_range(0..4)),
        2 => {
            let inner = random_cardinal(rng, depth - 1);
            match inner.as_u64() {
                Some(n) => Cardinal::finite(n % 8).exp2(),
                None => inner.exp2(),
            }
        }
        _ => {
            let n = rng.gen_range(2..4);
            sup((0..n).map(|_| random_cardinal(rng, depth - 1)))
        }
    }
}

fn random_multiplicity<R: Rng + ?Sized>(rng: &mut R) -> Cardinal {
    match rng.gen_range(0..10) {
        0..=2 => Cardinal::one(),
        3 => Cardinal::finite(2),
        4 => Cardinal::finite(3),
        5 | 6 => Cardinal::omega(),
        7 => Cardinal::aleph(1),
        8 => Cardinal::continuum(),
        _ => Cardinal::continuum().exp2(),
    }
}

pub fn random_atom<R: Rng + ?Sized>(rng: &mut R) -> Atom {
    let p = *PRIMES.choose(rng).unwrap();
    match rng.gen_range(0..9) {
        0 | 1 => Atom::Z,
        2..=4 => Atom::Cyc {
            p,
            k: rng.gen_range(1..=3),
        },
        5 => Atom::Prufer(p),
        6 => Atom::Q,
        7 => Atom::PAdic(p),
        _ => Atom::TorProd(p),
    }
}

/// A random structured group with up to four distinct atom kinds.
pub fn random_group<R: Rng + ?Sized>(rng: &mut R) -> StructuredGroup {
    let n = rng.gen_range(0..=4);
    StructuredGroup::from_summands((0..n).map(|_| (random_atom(rng), random_multiplicity(rng))))
}

/// A random finite structured group of order at most `bound`.
pub fn random_finite_group<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> StructuredGroup {
    let mut g = StructuredGroup::zero();
    let mut order = 1u64;
    for _ in 0..rng.gen_range(0..5) {
        let atom = Atom::Cyc {
            p: *PRIMES.choose(rng).unwrap(),
            k: rng.gen_range(1..=2),
        };
        let size = atom.order().unwrap().try_into().unwrap_or(u64::MAX);
        if order.saturating_mul(size) <= bound {
            order *= size;
            g.add_summand(atom, Cardinal::one());
        }
    }
    g
}

/// A random finitely generated group with a random subgroup.
pub fn random_fg_instance<R: Rng + ?Sized>(rng: &mut R) -> (FgGroup, FgSubgroup) {
    let free = rng.gen_range(0..=3);
    let torsion: Vec<u64> = (0..rng.gen_range(0..=2))
        .map(|_| *[2u64, 3, 4, 6, 9].choose(rng).unwrap())
        .collect();
    let g = FgGroup::new(free, &torsion).expect("small torsion part");
    let gens: Vec<Vec<i64>> = (0..rng.gen_range(0..=3))
        .map(|_| (0..g.width()).map(|_| rng.gen_range(-6..=6)).collect())
        .collect();
    let h = g
        .subgroup_i64(&gens)
        .expect("generators have the group's width");
    (g, h)
}
