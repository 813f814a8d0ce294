//! Deterministic stream-keyed randomness.
//!
//! Every randomized job (instance generation, a grid cell of the maximizer, a
//! Monte Carlo trial) draws from its own ChaCha8 stream derived from one master
//! seed plus a purpose tag and up to two indices. Results are reproducible from
//! the master seed alone and independent of how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a derived stream is used for. Keeping purposes distinct means e.g.
/// instance generation never shares a stream with the algorithm run on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Instance,
    Costs,
    Algorithm,
    Trial,
    Probe,
}

impl Purpose {
    fn salt(self) -> u64 {
        match self {
            Purpose::Instance => 0x9e37_79b9_7f4a_7c15,
            Purpose::Costs => 0xbf58_476d_1ce4_e5b9,
            Purpose::Algorithm => 0x94d0_49bb_1331_11eb,
            Purpose::Trial => 0x2545_f491_4f6c_dd1d,
            Purpose::Probe => 0xd6e8_feb8_6659_fd93,
        }
    }
}

/// splitmix64 finalizer; good enough to decorrelate seeds that differ in one bit.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives independent ChaCha8 streams from one master seed.
#[derive(Clone, Copy, Debug)]
pub struct Seeder {
    master: u64,
}

impl Seeder {
    pub fn new(master: u64) -> Self {
        Seeder { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Stream keyed by (purpose, a, b). The same key always yields the same stream.
    pub fn stream(&self, purpose: Purpose, a: u64, b: u64) -> ChaCha8Rng {
        let mut s = mix(self.master ^ purpose.salt());
        s = mix(s ^ a);
        s = mix(s ^ b);
        ChaCha8Rng::seed_from_u64(s)
    }

    /// Derive a child seeder, e.g. one per trial of an experiment.
    pub fn child(&self, purpose: Purpose, a: u64) -> Seeder {
        Seeder {
            master: mix(mix(self.master ^ purpose.salt()) ^ a),
        }
    }
}
