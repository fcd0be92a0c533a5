//! Enumeration of T^(r) copies through a fixed member edge.
//!
//! A copy of T^(r) is r "petal" edges `b_1..b_r` through a common core
//! (r-1)-set `R` plus the crossing edge `a` formed by the leftover vertex of
//! each petal. A fixed r-set `e` lies in `(r+1) * C(n-r, r-1)` copies on
//! `[0, n)`: `r * C(n-r, r-1)` with `e` as a petal (pick the core inside `e`,
//! pick the other crossing vertices outside `e`) and `C(n-r, r-1)` with `e`
//! as the crossing edge (pick the core outside `e`). Enumeration is lazy; the
//! global copy set is never materialized.

use crate::combinatorics::{colex_rank, colex_rank_with_inserted};
use crate::error::{CoreError, Result};

/// The role the anchoring edge plays inside one generated copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberRole {
    /// The edge is the petal whose non-core vertex sits at this index of the
    /// crossing set.
    Petal { crossing_index: usize },
    /// The edge is the crossing edge `a`.
    Crossing,
}

/// A single copy: core (r-1)-set plus the ordered crossing r-set, disjoint
/// from the core. Member edges are the r petals `core ∪ {crossing_i}` and
/// the crossing set itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriangleCopy {
    core: Vec<u32>,
    crossing: Vec<u32>,
}

impl TriangleCopy {
    pub fn new(mut core: Vec<u32>, mut crossing: Vec<u32>) -> Result<Self> {
        core.sort_unstable();
        crossing.sort_unstable();
        if crossing.len() != core.len() + 1 || core.is_empty() {
            return Err(CoreError::InvalidArgument(format!(
                "core of size {} cannot pair with crossing of size {}",
                core.len(),
                crossing.len()
            )));
        }
        let strict = |v: &[u32]| v.windows(2).all(|w| w[0] < w[1]);
        if !strict(&core) || !strict(&crossing) {
            return Err(CoreError::InvalidArgument("repeated vertex".into()));
        }
        if crossing.iter().any(|v| core.binary_search(v).is_ok()) {
            return Err(CoreError::InvalidArgument(
                "core and crossing sets must be disjoint".into(),
            ));
        }
        Ok(Self { core, crossing })
    }

    pub fn core(&self) -> &[u32] {
        &self.core
    }

    pub fn crossing(&self) -> &[u32] {
        &self.crossing
    }

    pub fn r(&self) -> u32 {
        self.crossing.len() as u32
    }

    /// The r+1 member edges: petals in crossing order, then the crossing edge.
    pub fn member_edges(&self) -> Vec<Vec<u32>> {
        let mut edges = Vec::with_capacity(self.crossing.len() + 1);
        for &x in &self.crossing {
            let mut petal = self.core.clone();
            let pos = petal.partition_point(|&v| v < x);
            petal.insert(pos, x);
            edges.push(petal);
        }
        edges.push(self.crossing.clone());
        edges
    }

    /// Colex ranks of the member edges, same order as [`member_edges`].
    ///
    /// [`member_edges`]: TriangleCopy::member_edges
    pub fn member_ranks(&self) -> Vec<u64> {
        let mut ranks: Vec<u64> = self
            .crossing
            .iter()
            .map(|&x| colex_rank_with_inserted(&self.core, x))
            .collect();
        ranks.push(colex_rank(&self.crossing));
        ranks
    }
}

/// Allocation-free generator behind [`copies_containing`]. `next_into` fills
/// caller-owned buffers and reports the anchoring edge's role in the copy.
pub(crate) struct CopyGen {
    e: Vec<u32>,
    /// `[0, n)` minus the vertices of `e`, ascending.
    comp: Vec<u32>,
    r: usize,
    /// Phases `0..r` drop `e[phase]` from the core (petal branch); phase `r`
    /// is the crossing branch.
    phase: usize,
    combo: Vec<usize>,
    fresh_phase: bool,
    exhausted: bool,
}

impl CopyGen {
    pub(crate) fn new(e: &[u32], n: u32) -> Self {
        let r = e.len();
        let comp: Vec<u32> = (0..n).filter(|v| e.binary_search(v).is_err()).collect();
        let exhausted = comp.len() < r - 1;
        CopyGen {
            e: e.to_vec(),
            comp,
            r,
            phase: 0,
            combo: (0..r - 1).collect(),
            fresh_phase: true,
            exhausted,
        }
    }

    fn advance_combo(&mut self) -> bool {
        let k = self.combo.len();
        let m = self.comp.len();
        let mut j = k;
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            if self.combo[j] != j + m - k {
                break;
            }
        }
        self.combo[j] += 1;
        for l in j + 1..k {
            self.combo[l] = self.combo[l - 1] + 1;
        }
        true
    }

    pub(crate) fn next_into(
        &mut self,
        core: &mut Vec<u32>,
        crossing: &mut Vec<u32>,
    ) -> Option<MemberRole> {
        if self.exhausted {
            return None;
        }
        if self.fresh_phase {
            self.fresh_phase = false;
        } else if !self.advance_combo() {
            self.phase += 1;
            if self.phase > self.r {
                self.exhausted = true;
                return None;
            }
            for (j, slot) in self.combo.iter_mut().enumerate() {
                *slot = j;
            }
        }

        if self.phase < self.r {
            // e is the petal missing e[phase] from its core.
            let dropped = self.e[self.phase];
            core.clear();
            core.extend(self.e.iter().enumerate().filter_map(|(j, &v)| {
                (j != self.phase).then_some(v)
            }));
            crossing.clear();
            crossing.extend(self.combo.iter().map(|&j| self.comp[j]));
            let pos = crossing.partition_point(|&v| v < dropped);
            crossing.insert(pos, dropped);
            Some(MemberRole::Petal {
                crossing_index: pos,
            })
        } else {
            core.clear();
            core.extend(self.combo.iter().map(|&j| self.comp[j]));
            crossing.clear();
            crossing.extend_from_slice(&self.e);
            Some(MemberRole::Crossing)
        }
    }
}

/// Lazy iterator over every copy of T^(r) on `[0, n)` having `e` as a member
/// edge. Yields nothing when `n < 2r - 1` (a copy spans `2r - 1` vertices).
pub struct CopiesContaining {
    gen: CopyGen,
}

impl Iterator for CopiesContaining {
    type Item = TriangleCopy;

    fn next(&mut self) -> Option<TriangleCopy> {
        let mut core = Vec::new();
        let mut crossing = Vec::new();
        self.gen.next_into(&mut core, &mut crossing)?;
        Some(TriangleCopy { core, crossing })
    }
}

/// Validates `e` and streams the copies through it.
pub fn copies_containing(e: &[u32], n: u32) -> Result<CopiesContaining> {
    if e.len() < 2 {
        return Err(CoreError::InvalidArgument(format!(
            "edge must have r >= 2 vertices, got {}",
            e.len()
        )));
    }
    if !e.windows(2).all(|w| w[0] < w[1]) {
        return Err(CoreError::InvalidArgument(format!(
            "edge vertices must be strictly increasing, got {e:?}"
        )));
    }
    if e.last().copied().unwrap_or(0) >= n {
        return Err(CoreError::InvalidArgument(format!(
            "edge {e:?} out of range [0, {n})"
        )));
    }
    Ok(CopiesContaining {
        gen: CopyGen::new(e, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use std::collections::BTreeSet;

    fn copy_degree(n: u32, r: u32) -> u64 {
        (r as u64 + 1) * binomial(n as u64 - r as u64, r as u64 - 1)
    }

    #[test]
    fn too_few_vertices_yields_nothing() {
        // A copy spans 2r - 1 = 5 vertices.
        let copies: Vec<_> = copies_containing(&[0, 1, 2], 4).unwrap().collect();
        assert!(copies.is_empty());
    }

    #[test]
    fn twelve_distinct_copies_on_six_vertices() {
        let copies: Vec<_> = copies_containing(&[0, 1, 2], 6).unwrap().collect();
        assert_eq!(copies.len(), 12);
        assert_eq!(copy_degree(6, 3), 12);
        let distinct: BTreeSet<Vec<u64>> = copies
            .iter()
            .map(|c| {
                let mut ranks = c.member_ranks();
                ranks.sort_unstable();
                ranks
            })
            .collect();
        assert_eq!(distinct.len(), 12);
    }

    #[test]
    fn member_edge_intersections() {
        for n in [5u32, 6, 7] {
            for copy in copies_containing(&[0, 2, 4], n).unwrap() {
                let edges = copy.member_edges();
                let r = copy.r() as usize;
                assert_eq!(edges.len(), r + 1);
                let as_sets: Vec<BTreeSet<u32>> = edges
                    .iter()
                    .map(|e| e.iter().copied().collect())
                    .collect();
                // Petals pairwise share the core; each petal meets the
                // crossing edge in exactly one vertex.
                for i in 0..r {
                    for j in i + 1..r {
                        assert_eq!(as_sets[i].intersection(&as_sets[j]).count(), r - 1);
                    }
                    assert_eq!(as_sets[i].intersection(&as_sets[r]).count(), 1);
                }
                let distinct: BTreeSet<_> = as_sets.iter().collect();
                assert_eq!(distinct.len(), r + 1);
            }
        }
    }

    #[test]
    fn every_copy_contains_the_anchor() {
        let e = vec![1u32, 3, 5];
        for copy in copies_containing(&e, 9).unwrap() {
            let ranks = copy.member_ranks();
            assert!(ranks.contains(&colex_rank(&e)));
        }
    }

    #[test]
    fn copy_count_matches_formula_across_sizes() {
        for r in [2u32, 3, 4] {
            for n in (2 * r - 1)..=10 {
                let e: Vec<u32> = (0..r).collect();
                let count = copies_containing(&e, n).unwrap().count() as u64;
                assert_eq!(count, copy_degree(n, r), "n={n}, r={r}");
            }
        }
    }

    #[test]
    fn total_copies_counted_r_plus_one_times() {
        // Summing the per-edge counts over all e counts each copy r+1 times;
        // on 5 vertices with r=3 there are N*D/(r+1) = 10*4/4 = 10 copies.
        let n = 5u32;
        let r = 3u32;
        let total: u64 = (0..binomial(n as u64, r as u64))
            .map(|rank| {
                let set = crate::combinatorics::colex_unrank(rank, r);
                copies_containing(&set, n).unwrap().count() as u64
            })
            .sum();
        assert_eq!(total % (r as u64 + 1), 0);
        assert_eq!(total / (r as u64 + 1), 10);
    }

    #[test]
    fn triangles_are_the_r2_copies() {
        // For r=2 the generated copies of a fixed pair are exactly the
        // triangles through it, each reachable as an edge set.
        let n = 6u32;
        let mut edge_sets: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
        for copy in copies_containing(&[0, 1], n).unwrap() {
            let edges = copy.member_edges();
            assert_eq!(edges.len(), 3);
            // Union spans exactly 3 vertices, pairwise sharing one vertex.
            let verts: BTreeSet<u32> = edges.iter().flatten().copied().collect();
            assert_eq!(verts.len(), 3);
            edge_sets.insert(copy.member_ranks().into_iter().collect());
        }
        // One triangle per third vertex.
        assert_eq!(edge_sets.len(), (n - 2) as usize);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(copies_containing(&[0, 0, 1], 6).is_err());
        assert!(copies_containing(&[0, 1, 7], 6).is_err());
        assert!(copies_containing(&[3], 6).is_err());
    }

    #[test]
    fn triangle_copy_validation() {
        assert!(TriangleCopy::new(vec![0, 1], vec![2, 3, 4]).is_ok());
        assert!(TriangleCopy::new(vec![0, 1], vec![1, 3, 4]).is_err());
        assert!(TriangleCopy::new(vec![0, 1], vec![2, 3]).is_err());
        assert!(TriangleCopy::new(vec![], vec![2]).is_err());
    }
}
