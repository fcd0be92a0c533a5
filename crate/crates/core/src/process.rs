//! The incremental state machine for the T^(r)-free process.
//!
//! At every step the r-sets of `[0, n)` are partitioned into edges (chosen),
//! open sets (choosable without creating a copy of T^(r)), and closed sets.
//! A step samples uniformly from the open list, promotes it to an edge, and
//! propagates closures.
//!
//! Closure detection is exact because a copy reaches r member edges only at
//! the step its r-th member is added, and that member is the edge just
//! chosen: scanning the copies through the new edge therefore finds every
//! r-set whose remaining slot just became forced, and nothing ever reopens.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, colex_rank, colex_rank_with_inserted, colex_unrank_into, RSet};
use crate::copies::{CopyGen, MemberRole};
use crate::error::{CoreError, Result};
use crate::rng::{stream_rng, STREAM_PROCESS};

/// Guard against states whose status array would not fit in memory.
const MAX_RSETS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Open,
    Edge,
    Closed,
}

/// What one step did: the sampled edge and every r-set it closed,
/// deduplicated, in scan order.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub chosen: RSet,
    pub newly_closed: Vec<RSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    UntilTerminated,
    UntilStep(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunResult {
    pub final_i: u64,
    /// True when the open set is exhausted, i.e. `final_i = M` and the graph
    /// is maximal T^(r)-free.
    pub terminated: bool,
}

const NOT_OPEN: usize = usize::MAX;

/// Full state of one run. Single-threaded by design; distinct runs are
/// independent and the state moves freely between threads while not in use.
#[derive(Debug, Clone)]
pub struct ProcessState {
    n: u32,
    r: u32,
    num_rsets: u64,
    status: Vec<Status>,
    /// Dense list of open ranks; sampling and deletion are O(1) via
    /// swap-remove plus the rank -> position index below.
    open_list: Vec<u64>,
    open_pos: Vec<usize>,
    edges: Vec<u64>,
    closed_count: u64,
    /// (r-1)-set rank -> sorted list of completing vertices; tracks d_i(A)
    /// for exactly the sets with positive degree.
    neighborhoods: HashMap<u64, Vec<u32>>,
    max_degree: usize,
    rng: ChaCha8Rng,
}

impl ProcessState {
    /// Empty hypergraph: every r-set open, degrees zero. The seed fully
    /// determines the edge sequence (process stream of ChaCha8).
    pub fn new(n: u32, r: u32, seed: u64) -> Result<Self> {
        if r < 2 || n < r {
            return Err(CoreError::InvalidArgument(format!(
                "need n >= r >= 2, got n={n}, r={r}"
            )));
        }
        let num_rsets = binomial(n as u64, r as u64);
        if num_rsets > MAX_RSETS {
            return Err(CoreError::InvalidArgument(format!(
                "C({n}, {r}) = {num_rsets} r-sets exceeds the desk-scale limit {MAX_RSETS}"
            )));
        }
        let count = num_rsets as usize;
        Ok(ProcessState {
            n,
            r,
            num_rsets,
            status: vec![Status::Open; count],
            open_list: (0..num_rsets).collect(),
            open_pos: (0..count).collect(),
            edges: Vec::new(),
            closed_count: 0,
            neighborhoods: HashMap::new(),
            max_degree: 0,
            rng: stream_rng(seed, STREAM_PROCESS),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn num_rsets(&self) -> u64 {
        self.num_rsets
    }

    /// The step counter i = |E(i)|.
    pub fn i(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn open_count(&self) -> u64 {
        self.open_list.len() as u64
    }

    pub fn closed_count(&self) -> u64 {
        self.closed_count
    }

    pub fn status_of(&self, rank: u64) -> Status {
        self.status[rank as usize]
    }

    /// Chosen ranks in selection order.
    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn edge_vertex_sets(&self) -> Vec<Vec<u32>> {
        let mut buf = Vec::with_capacity(self.r as usize);
        self.edges
            .iter()
            .map(|&rank| {
                colex_unrank_into(rank, self.r, &mut buf);
                buf.clone()
            })
            .collect()
    }

    /// Open ranks in internal (swap-remove) order; deterministic for a seed.
    pub fn open_ranks(&self) -> &[u64] {
        &self.open_list
    }

    /// d_i(A) for an (r-1)-set given by rank.
    pub fn degree_of_rank(&self, a_rank: u64) -> u64 {
        self.neighborhoods.get(&a_rank).map_or(0, |v| v.len() as u64)
    }

    /// N_i(A), sorted; empty when A has no completing edge.
    pub fn neighborhood(&self, a: &[u32]) -> &[u32] {
        self.neighborhoods
            .get(&colex_rank(a))
            .map_or(&[], |v| v.as_slice())
    }

    /// Max degree over (r-1)-sets.
    pub fn max_degree_rm1(&self) -> u64 {
        self.max_degree as u64
    }

    /// The (r-1)-sets with positive degree, as (rank, neighborhood) pairs.
    /// Iteration order is unspecified; callers must only reduce with
    /// order-insensitive operations.
    pub fn positive_degree_sets(&self) -> impl Iterator<Item = (u64, &[u32])> {
        self.neighborhoods.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// One step: sample uniformly from the open list, add the edge,
    /// propagate closures. `None` when the open set is exhausted.
    pub fn step(&mut self) -> Option<StepOutcome> {
        if self.open_list.is_empty() {
            return None;
        }
        let idx = self.rng.random_range(0..self.open_list.len());
        let chosen = self.open_list[idx];
        Some(self.apply_edge(chosen, idx))
    }

    /// Deterministic variant of [`step`]: adds a specific open r-set, with
    /// identical transition semantics. Used to build prescribed states.
    ///
    /// [`step`]: ProcessState::step
    pub fn force_edge(&mut self, rank: u64) -> Result<StepOutcome> {
        if rank >= self.num_rsets {
            return Err(CoreError::InvalidArgument(format!(
                "rank {rank} out of range [0, {})",
                self.num_rsets
            )));
        }
        if self.status[rank as usize] != Status::Open {
            return Err(CoreError::InvalidArgument(format!(
                "r-set {rank} is not open"
            )));
        }
        let idx = self.open_pos[rank as usize];
        Ok(self.apply_edge(rank, idx))
    }

    fn apply_edge(&mut self, chosen: u64, open_idx: usize) -> StepOutcome {
        self.remove_from_open(open_idx);
        self.status[chosen as usize] = Status::Edge;
        self.edges.push(chosen);

        let mut verts = Vec::with_capacity(self.r as usize);
        colex_unrank_into(chosen, self.r, &mut verts);

        // Each (r-1)-subset of the new edge gains the leftover vertex.
        let mut sub = Vec::with_capacity(self.r as usize - 1);
        for j in 0..verts.len() {
            sub.clear();
            sub.extend(verts.iter().enumerate().filter_map(|(l, &v)| (l != j).then_some(v)));
            let entry = self.neighborhoods.entry(colex_rank(&sub)).or_default();
            let pos = entry.partition_point(|&v| v < verts[j]);
            entry.insert(pos, verts[j]);
            self.max_degree = self.max_degree.max(entry.len());
        }

        // Close every open r-set that is the unique missing member of some
        // copy through the new edge. Candidates are collected first (a rank
        // may be reported by several copies) and deduplicated by status.
        let mut candidates: Vec<u64> = Vec::new();
        for_each_unique_missing_member(&verts, self.n, &self.status, |rank| {
            candidates.push(rank)
        });
        let mut newly_closed = Vec::new();
        for rank in candidates {
            if self.status[rank as usize] == Status::Open {
                self.status[rank as usize] = Status::Closed;
                self.remove_from_open(self.open_pos[rank as usize]);
                self.closed_count += 1;
                newly_closed.push(
                    RSet::from_rank(rank, self.n, self.r).expect("rank valid by construction"),
                );
            }
        }

        debug_assert_eq!(
            self.open_list.len() as u64 + self.edges.len() as u64 + self.closed_count,
            self.num_rsets
        );

        StepOutcome {
            chosen: RSet::from_rank(chosen, self.n, self.r).expect("rank valid by construction"),
            newly_closed,
        }
    }

    fn remove_from_open(&mut self, idx: usize) {
        let rank = self.open_list.swap_remove(idx);
        self.open_pos[rank as usize] = NOT_OPEN;
        if let Some(&moved) = self.open_list.get(idx) {
            self.open_pos[moved as usize] = idx;
        }
    }

    /// Repeated stepping. With `UntilStep(i)` the run halts at step i or at
    /// termination, whichever comes first.
    pub fn run(&mut self, stop: StopRule) -> RunResult {
        loop {
            if let StopRule::UntilStep(target) = stop {
                if self.i() >= target {
                    return RunResult {
                        final_i: self.i(),
                        terminated: self.open_list.is_empty(),
                    };
                }
            }
            if self.step().is_none() {
                return RunResult {
                    final_i: self.i(),
                    terminated: true,
                };
            }
        }
    }

    /// C_e(i) for an open r-set e: the open r-sets f whose selection
    /// together with e would complete a copy of T^(r), i.e. some copy
    /// through e has its other r-1 members already chosen and f open.
    /// Returned sorted.
    pub fn compute_ce(&self, e_rank: u64) -> Result<Vec<u64>> {
        if e_rank >= self.num_rsets {
            return Err(CoreError::InvalidArgument(format!(
                "rank {e_rank} out of range [0, {})",
                self.num_rsets
            )));
        }
        if self.status[e_rank as usize] != Status::Open {
            return Err(CoreError::InvalidArgument(format!(
                "r-set {e_rank} is not open"
            )));
        }
        let mut verts = Vec::with_capacity(self.r as usize);
        colex_unrank_into(e_rank, self.r, &mut verts);
        let mut out: Vec<u64> = Vec::new();
        for_each_unique_missing_member(&verts, self.n, &self.status, |rank| {
            if self.status[rank as usize] == Status::Open {
                out.push(rank);
            }
        });
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// Scans the copies of T^(r) through `e` and reports, for each copy whose
/// other members are all edges except exactly one, that one member's rank.
/// Copies with two or more non-edge members are skipped early.
fn for_each_unique_missing_member(
    e: &[u32],
    n: u32,
    status: &[Status],
    mut sink: impl FnMut(u64),
) {
    let mut gen = CopyGen::new(e, n);
    let mut core: Vec<u32> = Vec::with_capacity(e.len());
    let mut crossing: Vec<u32> = Vec::with_capacity(e.len() + 1);
    while let Some(role) = gen.next_into(&mut core, &mut crossing) {
        let mut missing: Option<u64> = None;
        let mut blocked = false;
        {
            let mut consider = |rank: u64| -> bool {
                if status[rank as usize] != Status::Edge {
                    if missing.is_some() {
                        blocked = true;
                        return false;
                    }
                    missing = Some(rank);
                }
                true
            };
            match role {
                MemberRole::Petal { crossing_index } => {
                    let mut alive = true;
                    for (j, &x) in crossing.iter().enumerate() {
                        if j == crossing_index {
                            continue;
                        }
                        if !consider(colex_rank_with_inserted(&core, x)) {
                            alive = false;
                            break;
                        }
                    }
                    if alive {
                        consider(colex_rank(&crossing));
                    }
                }
                MemberRole::Crossing => {
                    for &x in crossing.iter() {
                        if !consider(colex_rank_with_inserted(&core, x)) {
                            break;
                        }
                    }
                }
            }
        }
        if blocked {
            continue;
        }
        match missing {
            Some(rank) => sink(rank),
            // All other members are edges: the copy would be complete, which
            // the closure invariant rules out.
            None => debug_assert!(false, "complete T^(r) copy encountered"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_is_all_open() {
        let st = ProcessState::new(6, 3, 1).unwrap();
        assert_eq!(st.open_count(), 20);
        assert_eq!(st.i(), 0);
        assert_eq!(st.closed_count(), 0);
        assert_eq!(st.max_degree_rm1(), 0);
    }

    #[test]
    fn equal_seeds_equal_streams() {
        let mut a = ProcessState::new(8, 3, 99).unwrap();
        let mut b = ProcessState::new(8, 3, 99).unwrap();
        for _ in 0..10 {
            let oa = a.step().map(|o| o.chosen.rank());
            let ob = b.step().map(|o| o.chosen.rank());
            assert_eq!(oa, ob);
        }
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn no_copies_fit_on_four_vertices() {
        let mut st = ProcessState::new(4, 3, 5).unwrap();
        let res = st.run(StopRule::UntilTerminated);
        assert_eq!(res.final_i, 4);
        assert!(res.terminated);
        assert_eq!(st.closed_count(), 0);
    }

    #[test]
    fn triangle_on_three_vertices_closes_third_pair() {
        for seed in 0..8 {
            let mut st = ProcessState::new(3, 2, seed).unwrap();
            let res = st.run(StopRule::UntilTerminated);
            assert_eq!(res.final_i, 2, "two edges then the third pair closes");
            assert_eq!(st.closed_count(), 1);
        }
    }

    #[test]
    fn forced_triangle_closure_is_exactly_the_missing_pair() {
        // Edges {0,1} and {1,2} close {0,2}.
        let n = 3;
        let mut st = ProcessState::new(n, 2, 0).unwrap();
        let e01 = RSet::new(vec![0, 1], n).unwrap().rank();
        let e12 = RSet::new(vec![1, 2], n).unwrap().rank();
        let e02 = RSet::new(vec![0, 2], n).unwrap().rank();
        let out = st.force_edge(e01).unwrap();
        assert!(out.newly_closed.is_empty());
        let out = st.force_edge(e12).unwrap();
        assert_eq!(out.newly_closed.len(), 1);
        assert_eq!(out.newly_closed[0].rank(), e02);
        assert_eq!(st.status_of(e02), Status::Closed);
        assert!(st.step().is_none());
    }

    #[test]
    fn compute_ce_empty_at_start() {
        let st = ProcessState::new(8, 3, 3).unwrap();
        for rank in [0u64, 5, 20, 55] {
            assert!(st.compute_ce(rank).unwrap().is_empty());
        }
    }

    #[test]
    fn compute_ce_completes_triangle() {
        let n = 3;
        let mut st = ProcessState::new(n, 2, 0).unwrap();
        let e01 = RSet::new(vec![0, 1], n).unwrap().rank();
        let e12 = RSet::new(vec![1, 2], n).unwrap().rank();
        let e02 = RSet::new(vec![0, 2], n).unwrap().rank();
        st.force_edge(e01).unwrap();
        assert_eq!(st.compute_ce(e12).unwrap(), vec![e02]);
        assert_eq!(st.compute_ce(e02).unwrap(), vec![e12]);
    }

    #[test]
    fn compute_ce_rejects_non_open() {
        let mut st = ProcessState::new(6, 3, 3).unwrap();
        let out = st.step().unwrap();
        assert!(st.compute_ce(out.chosen.rank()).is_err());
    }

    #[test]
    fn degrees_count_supersets_in_edges() {
        let n = 6;
        let mut st = ProcessState::new(n, 3, 0).unwrap();
        let e = RSet::new(vec![0, 1, 2], n).unwrap().rank();
        st.force_edge(e).unwrap();
        assert_eq!(st.neighborhood(&[0, 1]), &[2]);
        assert_eq!(st.neighborhood(&[0, 2]), &[1]);
        assert_eq!(st.neighborhood(&[1, 2]), &[0]);
        assert_eq!(st.neighborhood(&[3, 4]), &[] as &[u32]);
        assert_eq!(st.max_degree_rm1(), 1);
    }

    #[test]
    fn monotone_partition_over_run() {
        let mut st = ProcessState::new(9, 3, 11).unwrap();
        let mut prev_open = st.open_count();
        let mut prev_closed = st.closed_count();
        while let Some(out) = st.step() {
            assert!(st.open_count() < prev_open);
            assert!(st.closed_count() >= prev_closed);
            assert_eq!(
                st.open_count() + st.i() + st.closed_count(),
                st.num_rsets()
            );
            assert_eq!(
                st.closed_count() - prev_closed,
                out.newly_closed.len() as u64
            );
            prev_open = st.open_count();
            prev_closed = st.closed_count();
        }
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(ProcessState::new(3, 4, 0).is_err());
        assert!(ProcessState::new(5, 1, 0).is_err());
        assert!(ProcessState::new(5, 0, 0).is_err());
    }

    #[test]
    fn first_step_is_uniform_chi_square() {
        // 10^5 fresh seeds, first chosen rank over N = 20 cells.
        let n = 6;
        let r = 3;
        let cells = 20usize;
        let trials = 100_000u64;
        let mut counts = vec![0u64; cells];
        for seed in 0..trials {
            let mut st = ProcessState::new(n, r, seed).unwrap();
            let out = st.step().unwrap();
            counts[out.chosen.rank() as usize] += 1;
        }
        let expected = trials as f64 / cells as f64;
        let stat: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // p > 0.001 for df = 19 means the statistic stays below the 0.999
        // quantile of chi-square(19), computed by statrs.
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let critical = ChiSquared::new((cells - 1) as f64)
            .unwrap()
            .inverse_cdf(0.999);
        assert!(
            stat < critical,
            "chi-square {stat:.2} >= critical {critical:.2}"
        );
    }
}
