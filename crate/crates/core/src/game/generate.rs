use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PayoffTensor3;
use crate::{Error, Result};

/// Interval the free entries of a random game are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryRange {
    pub lo: f64,
    pub hi: f64,
}

impl Default for EntryRange {
    fn default() -> Self {
        Self { lo: -1.0, hi: 1.0 }
    }
}

/// Random symmetric zero-sum game with free entries uniform on `[-1, 1]`.
pub fn random_symmetric_tensor(n: usize, seed: u64) -> Result<PayoffTensor3> {
    random_symmetric_tensor_in(n, seed, EntryRange::default())
}

/// Random symmetric zero-sum game with free entries uniform on `range`.
///
/// For each pair `i < j` two entries are drawn (`P_jji` and `P_jii`), for each
/// triple `i < j < k` two more (`P_ijk` and `P_jik`); every other entry is
/// fixed by `P_ijk = P_ikj` and `P_ijk + P_jik + P_kij = 0`.
pub fn random_symmetric_tensor_in(n: usize, seed: u64, range: EntryRange) -> Result<PayoffTensor3> {
    if n < 2 {
        return Err(Error::invalid(format!("random games need n >= 2, got {n}")));
    }
    if !(range.lo.is_finite() && range.hi.is_finite() && range.lo < range.hi) {
        return Err(Error::invalid(format!("bad entry range [{}, {}]", range.lo, range.hi)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rng.gen_range(range.lo..=range.hi);
    let mut e = vec![0.0; n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;

    for i in 0..n {
        for j in i + 1..n {
            let a = draw();
            e[idx(j, j, i)] = a;
            e[idx(j, i, j)] = a;
            e[idx(i, j, j)] = -2.0 * a;
            let b = draw();
            e[idx(j, i, i)] = b;
            e[idx(i, j, i)] = -0.5 * b;
            e[idx(i, i, j)] = -0.5 * b;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = draw();
                let b = draw();
                let c = -a - b;
                e[idx(i, j, k)] = a;
                e[idx(i, k, j)] = a;
                e[idx(j, i, k)] = b;
                e[idx(j, k, i)] = b;
                e[idx(k, i, j)] = c;
                e[idx(k, j, i)] = c;
            }
        }
    }
    PayoffTensor3::symmetric(n, e)
}
