//! Seeded inputs shared by the benchmarks.

use jordan2::sample;
use jordan2::{Effect2, JteForm, JteKind, Pd2, Rot3, SeqForm, SeqKind};

pub const SEED: u64 = 0x5eed;

pub struct Fixtures {
    pub pd: Vec<Pd2>,
    pub effects: Vec<Effect2>,
    pub rotations: Vec<Rot3>,
    pub b1: JteForm,
    pub b2: JteForm,
    pub b3: JteForm,
    pub d3: SeqForm,
}

impl Fixtures {
    pub fn new(n: usize) -> Self {
        let mut rng = sample::rng_from_seed(SEED);
        let pd = (0..n).map(|_| sample::pd(&mut rng)).collect();
        let effects = (0..n).map(|_| sample::effect(&mut rng)).collect();
        let rotations = (0..n)
            .map(|_| jordan2::spin::rotation_of(&sample::unitary(&mut rng)))
            .collect();
        Fixtures {
            pd,
            effects,
            rotations,
            b1: sample::jte_form(&mut rng, JteKind::B1),
            b2: sample::jte_form(&mut rng, JteKind::B2),
            b3: sample::jte_form(&mut rng, JteKind::B3),
            d3: sample::seq_form(&mut rng, SeqKind::D3),
        }
    }
}
