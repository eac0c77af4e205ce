//! Canonical finite matroids, represented by their flats grouped by rank.
//!
//! The flats-by-rank form is the working representation throughout: the
//! algorithms here are flat/lattice-centric, and it scales to PG(3,4)-sized
//! instances where full 2^|E| rank tables do not. Rank and closure of an
//! arbitrary subset are derived by scanning the flat classes in ascending
//! rank; closures are memoized per matroid.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

use crate::ground::{GroundSet, GroundSetError, Subset};

#[derive(Debug, Error)]
pub enum MatroidError {
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error(transparent)]
    Ground(#[from] GroundSetError),
    #[error("delete and contract sets overlap on `{0}`")]
    Overlap(String),
    #[error("rank {k} out of range 0..={rank}")]
    OutOfRange { k: usize, rank: usize },
}

/// Anything that can answer rank queries over a ground set.
///
/// Implemented by [`Matroid`] and by raw rank tables; the generic
/// flat-reconstruction and diagnostic scans (Escher check) run against this
/// trait so they also apply to would-be matroids that fail the axioms.
pub trait RankOracle {
    fn ground(&self) -> &GroundSet;
    fn rank_subset(&self, x: &Subset) -> usize;

    /// `{e : r(X + e) = r(X)}`; for a genuine matroid this is the closure.
    fn closure_subset(&self, x: &Subset) -> Subset {
        let n = self.ground().len();
        let rx = self.rank_subset(x);
        let mut cl = x.clone();
        for e in 0..n {
            if !x.contains(e) {
                let mut xe = x.clone();
                xe.insert(e);
                if self.rank_subset(&xe) == rx {
                    cl.insert(e);
                }
            }
        }
        cl
    }

    fn full_rank(&self) -> usize {
        self.rank_subset(&self.ground().full_subset())
    }
}

/// Immutable finite matroid: ground set plus the set of rank-`k` flats for
/// each `k` in `0..=rank`.
pub struct Matroid {
    ground: GroundSet,
    flats_by_rank: Vec<Vec<Subset>>,
    /// all flats in canonical order (rank ascending, canonical within rank)
    flat_list: Vec<Subset>,
    /// flat -> (rank, position in `flat_list`)
    flat_meta: HashMap<Subset, (usize, usize)>,
    name: Option<String>,
    closure_cache: RwLock<HashMap<Subset, Subset>>,
    pair_table: OnceLock<PairTable>,
}

/// Precomputed per-matroid data for the flat-pair sweeps: the modular defect
/// and meet of every flat pair, and the strict superset lists.
pub(crate) struct PairTable {
    count: usize,
    defect: Vec<u8>,
    meet: Vec<u32>,
    supersets: Vec<Vec<u32>>,
}

impl PairTable {
    pub fn defect(&self, i: usize, j: usize) -> usize {
        self.defect[i * self.count + j] as usize
    }
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.count + j] as usize
    }
    pub fn supersets(&self, i: usize) -> &[u32] {
        &self.supersets[i]
    }
}

impl Clone for Matroid {
    fn clone(&self) -> Self {
        Matroid {
            ground: self.ground.clone(),
            flats_by_rank: self.flats_by_rank.clone(),
            flat_list: self.flat_list.clone(),
            flat_meta: self.flat_meta.clone(),
            name: self.name.clone(),
            closure_cache: RwLock::new(HashMap::new()),
            pair_table: OnceLock::new(),
        }
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.flats_by_rank == other.flats_by_rank
    }
}
impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Matroid({}, |E|={}, rank={}, flats={:?})",
            self.name.as_deref().unwrap_or("?"),
            self.ground.len(),
            self.rank(),
            self.flats_by_rank
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>()
        )
    }
}

impl Matroid {
    /// Builds a matroid from flats grouped by rank, after checking the flat
    /// axioms: a unique bottom flat contained in all others, the full set as
    /// the unique top flat, closure under pairwise intersection, and for
    /// every non-spanning flat `F` a partition of `E \ F` by the covers of
    /// `F`.
    pub fn from_flats(
        ground: GroundSet,
        name: Option<String>,
        mut flats_by_rank: Vec<Vec<Subset>>,
    ) -> Result<Self, MatroidError> {
        for class in flats_by_rank.iter_mut() {
            class.sort();
            class.dedup();
        }
        validate_flats(&ground, &flats_by_rank)?;
        let mut flat_list = Vec::new();
        let mut flat_meta = HashMap::new();
        for (k, class) in flats_by_rank.iter().enumerate() {
            for f in class {
                flat_meta.insert(f.clone(), (k, flat_list.len()));
                flat_list.push(f.clone());
            }
        }
        Ok(Matroid {
            ground,
            flats_by_rank,
            flat_list,
            flat_meta,
            name,
            closure_cache: RwLock::new(HashMap::new()),
            pair_table: OnceLock::new(),
        })
    }

    /// Reconstructs the flats of an arbitrary rank oracle and validates them.
    pub fn from_rank_oracle<O: RankOracle>(
        oracle: &O,
        name: Option<String>,
    ) -> Result<Self, MatroidError> {
        let flats = flats_from_oracle(oracle);
        Matroid::from_flats(oracle.ground().clone(), name, flats)
    }

    pub fn ground_set(&self) -> &GroundSet {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn rank(&self) -> usize {
        self.flats_by_rank.len() - 1
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// All rank-`k` flats in canonical order.
    pub fn flats(&self, k: usize) -> Result<&[Subset], MatroidError> {
        self.flats_by_rank
            .get(k)
            .map(Vec::as_slice)
            .ok_or(MatroidError::OutOfRange {
                k,
                rank: self.rank(),
            })
    }

    pub fn flats_of_rank(&self, k: usize) -> &[Subset] {
        &self.flats_by_rank[k]
    }

    pub fn all_flats(&self) -> impl Iterator<Item = (usize, &Subset)> {
        self.flats_by_rank
            .iter()
            .enumerate()
            .flat_map(|(k, class)| class.iter().map(move |f| (k, f)))
    }

    pub fn flat_count(&self) -> usize {
        self.flat_list.len()
    }

    pub fn is_flat(&self, x: &Subset) -> bool {
        self.flat_meta.contains_key(x)
    }

    /// Rank of a flat without a scan; `None` if `x` is not a flat.
    pub fn rank_of_flat(&self, x: &Subset) -> Option<usize> {
        self.flat_meta.get(x).map(|&(k, _)| k)
    }

    /// All flats in canonical order (the indexing used by the pair table).
    pub fn flat_list(&self) -> &[Subset] {
        &self.flat_list
    }

    pub fn flat_position(&self, x: &Subset) -> Option<usize> {
        self.flat_meta.get(x).map(|&(_, i)| i)
    }

    pub(crate) fn pairs(&self) -> &PairTable {
        self.pair_table.get_or_init(|| {
            let n = self.flat_list.len();
            let mut defect = vec![0u8; n * n];
            let mut meet = vec![0u32; n * n];
            let mut supersets: Vec<Vec<u32>> = vec![Vec::new(); n];
            let ranks: Vec<usize> = self
                .flat_list
                .iter()
                .map(|f| self.flat_meta[f].0)
                .collect();
            for i in 0..n {
                for j in i..n {
                    let fi = &self.flat_list[i];
                    let fj = &self.flat_list[j];
                    let meet_set = fi.intersection(fj);
                    let (meet_rank, meet_idx) = self.flat_meta[&meet_set];
                    let union = fi.union(fj);
                    let union_rank = if meet_idx == i || meet_idx == j {
                        ranks[i].max(ranks[j]) // nested pair
                    } else {
                        self.union_rank_from(&union, ranks[i].max(ranks[j]))
                    };
                    let d = ranks[i] + ranks[j] - union_rank - meet_rank;
                    defect[i * n + j] = d as u8;
                    defect[j * n + i] = d as u8;
                    meet[i * n + j] = meet_idx as u32;
                    meet[j * n + i] = meet_idx as u32;
                    if i != j {
                        if fi.is_subset_of(fj) {
                            supersets[i].push(j as u32);
                        } else if fj.is_subset_of(fi) {
                            supersets[j].push(i as u32);
                        }
                    }
                }
            }
            PairTable {
                count: n,
                defect,
                meet,
                supersets,
            }
        })
    }

    fn union_rank_from(&self, union: &Subset, start_rank: usize) -> usize {
        for k in start_rank..=self.rank() {
            if self.flats_by_rank[k].iter().any(|f| union.is_subset_of(f)) {
                return k;
            }
        }
        unreachable!("the full set contains every union")
    }

    /// Modular defect of two flats via the precomputed pair table.
    pub fn flat_pair_defect(&self, f: &Subset, g: &Subset) -> Option<usize> {
        let i = self.flat_position(f)?;
        let j = self.flat_position(g)?;
        Some(self.pairs().defect(i, j))
    }

    pub fn loops(&self) -> &Subset {
        &self.flats_by_rank[0][0]
    }

    /// Lines are the rank-2 flats; empty slice for rank < 2.
    pub fn lines(&self) -> &[Subset] {
        if self.rank() >= 2 {
            self.flats_of_rank(2)
        } else {
            &[]
        }
    }

    pub fn hyperplanes(&self) -> &[Subset] {
        self.flats_of_rank(self.rank().saturating_sub(1))
    }

    /// Smallest flat containing `x`. The flat classes are scanned in
    /// ascending rank, so the first containing flat found is the closure.
    pub fn closure(&self, x: &Subset) -> Subset {
        if let Some(cl) = self.closure_cache.read().unwrap().get(x) {
            return cl.clone();
        }
        let cl = self
            .flats_by_rank
            .iter()
            .flatten()
            .find(|f| x.is_subset_of(f))
            .expect("the full set contains every subset")
            .clone();
        self.closure_cache
            .write()
            .unwrap()
            .insert(x.clone(), cl.clone());
        cl
    }

    pub fn rank_of(&self, x: &Subset) -> usize {
        if let Some(&(k, _)) = self.flat_meta.get(x) {
            return k;
        }
        self.flat_meta[&self.closure(x)].0
    }

    /// Rank by direct scan, bypassing the closure cache. Used by the bulk
    /// random axiom checks, where caching every query would only burn memory.
    pub fn rank_of_uncached(&self, x: &Subset) -> usize {
        if let Some(&(k, _)) = self.flat_meta.get(x) {
            return k;
        }
        for (k, class) in self.flats_by_rank.iter().enumerate() {
            if class.iter().any(|f| x.is_subset_of(f)) {
                return k;
            }
        }
        unreachable!("the full set contains every subset")
    }

    pub fn is_independent(&self, x: &Subset) -> bool {
        self.rank_of(x) == x.len()
    }

    pub fn is_basis(&self, x: &Subset) -> bool {
        x.len() == self.rank() && self.is_independent(x)
    }

    /// Standard minor: delete `delete`, contract `contract`. Restriction to
    /// `S` is `minor(E \ S, empty)`.
    ///
    /// Flats come straight from the host lattice: a deletion keeps the traces
    /// `F \ D` re-ranked by the host, a contraction keeps the flats above
    /// `cl(C)` shifted down by `r(C)`.
    pub fn minor(&self, delete: &Subset, contract: &Subset) -> Result<Matroid, MatroidError> {
        if !delete.is_disjoint_from(contract) {
            let i = delete.intersection(contract).iter().next().unwrap();
            return Err(MatroidError::Overlap(self.ground.label(i).to_string()));
        }
        let name = self.name.as_ref().map(|n| {
            format!(
                "{}/del[{}]con[{}]",
                n,
                self.ground.format_subset(delete),
                self.ground.format_subset(contract)
            )
        });
        let deleted = if delete.is_empty() {
            self.clone()
        } else {
            self.deletion(delete)?
        };
        if contract.is_empty() {
            return Ok(match name {
                Some(n) => deleted.with_name(n),
                None => deleted,
            });
        }
        let contract_there = deleted
            .ground
            .subset_from_labels(contract.iter().map(|i| self.ground.label(i)))?;
        let contracted = deleted.contraction(&contract_there)?;
        Ok(match name {
            Some(n) => contracted.with_name(n),
            None => contracted,
        })
    }

    fn deletion(&self, delete: &Subset) -> Result<Matroid, MatroidError> {
        let keep = delete.complement();
        let keep_indices: Vec<usize> = keep.iter().collect();
        let ground = GroundSet::new(keep_indices.iter().map(|&i| self.ground.label(i)))?;
        let reindex: HashMap<usize, usize> = keep_indices
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let mut traces: HashMap<Subset, usize> = HashMap::new();
        for (_, f) in self.all_flats() {
            let host_trace = f.intersection(&keep);
            let trace = Subset::from_indices(
                keep_indices.len(),
                host_trace.iter().map(|i| reindex[&i]),
            );
            traces
                .entry(trace)
                .or_insert_with(|| self.rank_of(&host_trace));
        }
        let rank = traces.values().copied().max().unwrap_or(0);
        let mut flats: Vec<Vec<Subset>> = vec![Vec::new(); rank + 1];
        for (f, k) in traces {
            flats[k].push(f);
        }
        Matroid::from_flats(ground, None, flats)
    }

    fn contraction(&self, contract: &Subset) -> Result<Matroid, MatroidError> {
        let closed = self.closure(contract);
        let base_rank = self.rank_of(contract);
        let keep = contract.complement();
        let keep_indices: Vec<usize> = keep.iter().collect();
        let ground = GroundSet::new(keep_indices.iter().map(|&i| self.ground.label(i)))?;
        let reindex: HashMap<usize, usize> = keep_indices
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let mut flats: Vec<Vec<Subset>> = vec![Vec::new(); self.rank() - base_rank + 1];
        for (k, f) in self.all_flats() {
            if closed.is_subset_of(f) {
                flats[k - base_rank].push(Subset::from_indices(
                    keep_indices.len(),
                    f.intersection(&keep).iter().map(|i| reindex[&i]),
                ));
            }
        }
        Matroid::from_flats(ground, None, flats)
    }

    /// Restriction to the elements with the given labels (order preserved).
    pub fn restriction(&self, keep: &Subset) -> Result<Matroid, MatroidError> {
        self.minor(&keep.complement(), &self.ground.empty_subset())
    }

    /// Maps a subset of this matroid into another ground set by label.
    pub fn subset_to(&self, x: &Subset, target: &GroundSet) -> Option<Subset> {
        let mut out = target.empty_subset();
        for i in x.iter() {
            out.insert(target.index_of(self.ground.label(i))?);
        }
        Some(out)
    }
}

impl RankOracle for Matroid {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }
    fn rank_subset(&self, x: &Subset) -> usize {
        self.rank_of(x)
    }
    fn closure_subset(&self, x: &Subset) -> Subset {
        self.closure(x)
    }
}

/// Rank oracle view of a matroid that never touches the closure cache.
pub struct Uncached<'a>(pub &'a Matroid);

impl RankOracle for Uncached<'_> {
    fn ground(&self) -> &GroundSet {
        self.0.ground_set()
    }
    fn rank_subset(&self, x: &Subset) -> usize {
        self.0.rank_of_uncached(x)
    }
}

/// Rebuilds the flats of an oracle level by level: the closure of the empty
/// set, then closures `cl(F + e)` of covers. For a genuine matroid oracle
/// this yields exactly the lattice of flats.
pub fn flats_from_oracle<O: RankOracle>(oracle: &O) -> Vec<Vec<Subset>> {
    let n = oracle.ground().len();
    let full_rank = oracle.full_rank();
    let bottom = oracle.closure_subset(&Subset::empty(n));
    let mut by_rank: Vec<Vec<Subset>> = vec![vec![bottom]];
    for k in 0..full_rank {
        let mut next: HashSet<Subset> = HashSet::new();
        for f in &by_rank[k] {
            for e in 0..n {
                if f.contains(e) {
                    continue;
                }
                let mut fe = f.clone();
                fe.insert(e);
                let g = oracle.closure_subset(&fe);
                if oracle.rank_subset(&g) == k + 1 {
                    next.insert(g);
                }
            }
        }
        let mut next: Vec<Subset> = next.into_iter().collect();
        next.sort();
        if next.is_empty() {
            break;
        }
        by_rank.push(next);
    }
    by_rank
}

fn validate_flats(ground: &GroundSet, flats_by_rank: &[Vec<Subset>]) -> Result<(), MatroidError> {
    let n = ground.len();
    let fail = |msg: String| Err(MatroidError::NotAMatroid(msg));
    if flats_by_rank.is_empty() {
        return fail("no flats at all".into());
    }
    let top_rank = flats_by_rank.len() - 1;
    for (k, class) in flats_by_rank.iter().enumerate() {
        if class.is_empty() {
            return fail(format!("no flats of rank {k}"));
        }
        for f in class {
            if f.universe() != n {
                return fail(format!("flat over wrong universe at rank {k}"));
            }
        }
        // each rank class must be an antichain
        for (i, f) in class.iter().enumerate() {
            for g in &class[i + 1..] {
                if f.is_subset_of(g) || g.is_subset_of(f) {
                    return fail(format!(
                        "rank-{k} flats are nested: {} inside {}",
                        ground.format_subset(f.intersection(g).eq(f).then_some(f).unwrap_or(g)),
                        ground.format_subset(f.union(g).eq(f).then_some(f).unwrap_or(g)),
                    ));
                }
            }
        }
    }
    if flats_by_rank[0].len() != 1 {
        return fail("rank 0 must contain exactly one flat (the closure of the empty set)".into());
    }
    if flats_by_rank[top_rank].as_slice() != [ground.full_subset()] {
        return fail("the unique top-rank flat must be the full ground set".into());
    }
    let bottom = &flats_by_rank[0][0];
    let all: Vec<(usize, &Subset)> = flats_by_rank
        .iter()
        .enumerate()
        .flat_map(|(k, class)| class.iter().map(move |f| (k, f)))
        .collect();
    let index: HashSet<&Subset> = all.iter().map(|(_, f)| *f).collect();
    if index.len() != all.len() {
        return fail("the same flat appears at two different ranks".into());
    }
    for (_, f) in &all {
        if !bottom.is_subset_of(f) {
            return fail(format!(
                "flat {} does not contain the loops {}",
                ground.format_subset(f),
                ground.format_subset(bottom)
            ));
        }
    }
    // closure under pairwise intersection
    for (i, (_, f)) in all.iter().enumerate() {
        for (_, g) in &all[i + 1..] {
            let meet = f.intersection(g);
            if !index.contains(&meet) {
                return fail(format!(
                    "intersection of flats {} and {} is {}, which is not a flat",
                    ground.format_subset(f),
                    ground.format_subset(g),
                    ground.format_subset(&meet)
                ));
            }
        }
    }
    // covers of each flat of rank k partition the complement
    for k in 0..top_rank {
        for f in &flats_by_rank[k] {
            let mut seen = f.clone();
            for g in &flats_by_rank[k + 1] {
                if f.is_subset_of(g) {
                    if !seen.is_disjoint_from(&g.difference(f)) {
                        return fail(format!(
                            "covers of rank-{k} flat {} overlap outside it",
                            ground.format_subset(f)
                        ));
                    }
                    seen = seen.union(g);
                }
            }
            if seen != ground.full_subset() {
                return fail(format!(
                    "covers of rank-{k} flat {} do not cover {}",
                    ground.format_subset(f),
                    ground.format_subset(&seen.complement())
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::ground::k_subsets;

    #[test]
    fn uniform_matroid_rank_and_closure() {
        let m = generators::uniform(2, 4).unwrap();
        let g = m.ground_set().clone();
        let abc = g.subset_from_labels(["a", "b", "c"]).unwrap();
        assert_eq!(m.rank_of(&abc), 2);
        assert_eq!(m.closure(&abc), g.full_subset());
        let a = g.subset_from_labels(["a"]).unwrap();
        assert_eq!(m.closure(&a), a);
        assert_eq!(m.rank_of(&g.empty_subset()), 0);
    }

    #[test]
    fn validation_rejects_missing_cover() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let e = |labels: &[&str]| g.subset_from_labels(labels.iter().copied()).unwrap();
        // rank-1 flats missing {c}: covers of the bottom do not partition
        let flats = vec![
            vec![e(&[])],
            vec![e(&["a"]), e(&["b"])],
            vec![g.full_subset()],
        ];
        assert!(Matroid::from_flats(g, None, flats).is_err());
    }

    #[test]
    fn validation_rejects_non_flat_intersection() {
        let g = GroundSet::new(["a", "b", "c", "d"]).unwrap();
        let e = |labels: &[&str]| g.subset_from_labels(labels.iter().copied()).unwrap();
        // two "lines" meeting in a point that is not declared a flat
        let flats = vec![
            vec![e(&[])],
            vec![e(&["a"]), e(&["b"]), e(&["c"]), e(&["d"])],
            vec![e(&["a", "b", "c"]), e(&["a", "b", "d"])],
            vec![g.full_subset()],
        ];
        let err = Matroid::from_flats(g, None, flats).unwrap_err();
        assert!(matches!(err, MatroidError::NotAMatroid(_)));
    }

    #[test]
    fn deletion_and_contraction() {
        let pg = generators::pg3(2).unwrap();
        let p = pg.ground_set().singleton(0);
        let del = pg.minor(&p, &pg.ground_set().empty_subset()).unwrap();
        assert_eq!(del.size(), 14);
        assert_eq!(del.rank(), 4);
        let con = pg.minor(&pg.ground_set().empty_subset(), &p).unwrap();
        assert_eq!(con.rank(), 3);
        assert_eq!(con.size(), 14);
    }

    #[test]
    fn vamos_contraction_has_rank_3() {
        let v = generators::vamos();
        let a = v.ground_set().subset_from_labels(["a"]).unwrap();
        let c = v.minor(&v.ground_set().empty_subset(), &a).unwrap();
        assert_eq!(c.rank(), 3);
        assert_eq!(c.size(), 7);
        // brute-force contraction oracle: r'(X) = r(X ∪ a) − r(a)
        for x in crate::ground::all_subsets(7) {
            let mut lifted = v.ground_set().empty_subset();
            for i in x.iter() {
                let label = c.ground_set().label(i);
                lifted.insert(v.ground_set().index_of(label).unwrap());
            }
            lifted.insert(0); // element a
            assert_eq!(c.rank_of(&x), v.rank_of(&lifted) - 1);
        }
    }

    #[test]
    fn matroid_types_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Matroid>();
        assert_send_sync::<GroundSet>();
        assert_send_sync::<Subset>();
    }

    #[test]
    fn flats_accessor_bounds() {
        let m = generators::uniform(2, 4).unwrap();
        assert_eq!(m.flats(1).unwrap().len(), 4);
        assert!(matches!(m.flats(3), Err(MatroidError::OutOfRange { .. })));
    }

    #[test]
    fn minor_rejects_overlapping_arguments() {
        let m = generators::uniform(2, 4).unwrap();
        let a = m.ground_set().singleton(0);
        assert!(matches!(
            m.minor(&a, &a),
            Err(MatroidError::Overlap(_))
        ));
    }

    #[test]
    fn restriction_of_uniform_is_uniform() {
        let m = generators::uniform(3, 6).unwrap();
        let keep = Subset::from_indices(6, [0, 1, 2, 3]);
        let r = m.restriction(&keep).unwrap();
        assert_eq!(r.rank(), 3);
        assert_eq!(r.size(), 4);
        assert_eq!(r.flats_of_rank(2).len(), k_subsets(4, 2).len());
    }
}
