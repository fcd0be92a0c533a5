//! Colexicographic ranking of fixed-size vertex subsets.
//!
//! Every r-subset of `[0, n)` is identified with an integer in `[0, C(n, r))`.
//! Sets are ordered colexicographically (compare the largest differing
//! element), so the rank of `{s_1 < s_2 < ... < s_r}` is `sum_j C(s_j, j)`.
//! The formula does not involve `n`: ranks stay stable when the vertex set
//! grows, and the first `C(m, r)` ranks are exactly the subsets of `[0, m)`.

use serde::Serialize;

use crate::error::{CoreError, Result};

/// Exact binomial coefficient; 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 1..=k {
        // acc stays exact: after each iteration it equals C(n - k + i, i).
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// Colex rank of a strictly increasing slice. Callers guarantee sortedness.
pub fn colex_rank(set: &[u32]) -> u64 {
    debug_assert!(set.windows(2).all(|w| w[0] < w[1]));
    set.iter()
        .enumerate()
        .map(|(j, &v)| binomial(v as u64, j as u64 + 1))
        .sum()
}

/// Colex rank of `sorted` with the extra element `x` spliced in, without
/// materializing the merged set. `x` must not already be present.
pub fn colex_rank_with_inserted(sorted: &[u32], x: u32) -> u64 {
    debug_assert!(!sorted.contains(&x));
    let pos = sorted.partition_point(|&v| v < x);
    let mut rank = 0u64;
    for (j, &v) in sorted.iter().enumerate() {
        let slot = if j < pos { j + 1 } else { j + 2 };
        rank += binomial(v as u64, slot as u64);
    }
    rank + binomial(x as u64, pos as u64 + 1)
}

/// Inverse of [`colex_rank`]: writes the `k` elements of the set into `out`.
pub fn colex_unrank_into(mut rank: u64, k: u32, out: &mut Vec<u32>) {
    out.clear();
    out.resize(k as usize, 0);
    for j in (1..=k as u64).rev() {
        // Largest c with C(c, j) <= rank.
        let mut c = j - 1;
        while binomial(c + 1, j) <= rank {
            c += 1;
        }
        rank -= binomial(c, j);
        out[j as usize - 1] = c as u32;
    }
}

pub fn colex_unrank(rank: u64, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    colex_unrank_into(rank, k, &mut out);
    out
}

/// Visits every k-subset of `[0, m)` as a slice of indices, in
/// lexicographic order, without allocating per subset.
pub fn for_each_index_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance the odometer from the right.
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if idx[j] != j + m - k {
                break;
            }
        }
        idx[j] += 1;
        for l in j + 1..k {
            idx[l] = idx[l - 1] + 1;
        }
    }
}

/// A canonically ordered r-subset of `[0, n)` together with its colex rank —
/// the atom the whole process state is indexed by.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RSet {
    vertices: Vec<u32>,
    rank: u64,
}

impl RSet {
    /// Builds an [`RSet`] from vertices in any order, validating bounds and
    /// distinctness against the vertex count `n`.
    pub fn new(mut vertices: Vec<u32>, n: u32) -> Result<Self> {
        if vertices.is_empty() {
            return Err(CoreError::InvalidArgument("empty vertex set".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(CoreError::InvalidArgument(format!(
                "duplicate vertex in {vertices:?}"
            )));
        }
        let last = *vertices.last().unwrap();
        if last >= n {
            return Err(CoreError::InvalidArgument(format!(
                "vertex {last} out of range [0, {n})"
            )));
        }
        let rank = colex_rank(&vertices);
        Ok(Self { vertices, rank })
    }

    /// Inverse of [`RSet::rank`]: the r-set of colex rank `rank` on `[0, n)`.
    pub fn from_rank(rank: u64, n: u32, r: u32) -> Result<Self> {
        if r == 0 || r > n {
            return Err(CoreError::InvalidArgument(format!(
                "need 1 <= r <= n, got r={r}, n={n}"
            )));
        }
        let total = binomial(n as u64, r as u64);
        if rank >= total {
            return Err(CoreError::InvalidArgument(format!(
                "rank {rank} out of range [0, {total})"
            )));
        }
        let vertices = colex_unrank(rank, r);
        Ok(Self { vertices, rank })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn r(&self) -> u32 {
        self.vertices.len() as u32
    }

    pub fn into_vertices(self) -> Vec<u32> {
        self.vertices
    }
}
