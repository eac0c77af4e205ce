//! Matroid isomorphism by backtracking search with invariant pruning.
//!
//! Intended for ground sets of at most 20 elements (configurable bound);
//! larger inputs error out rather than silently degrading.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::ground::Subset;
use crate::matroid::Matroid;

pub const DEFAULT_ISO_BOUND: usize = 20;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("isomorphism search limited to {bound} elements, got {got}")]
    TooLarge { bound: usize, got: usize },
}

/// A ground-set bijection carrying flats to flats, as a map from indices of
/// the first matroid to indices of the second.
pub type Bijection = Vec<usize>;

pub fn are_isomorphic(
    m1: &Matroid,
    m2: &Matroid,
    bound: usize,
) -> Result<Option<Bijection>, IsoError> {
    let n = m1.size();
    if n.max(m2.size()) > bound {
        return Err(IsoError::TooLarge {
            bound,
            got: n.max(m2.size()),
        });
    }
    if n != m2.size() || m1.rank() != m2.rank() {
        return Ok(None);
    }
    for k in 0..=m1.rank() {
        if m1.flats_of_rank(k).len() != m2.flats_of_rank(k).len() {
            return Ok(None);
        }
        let sizes = |m: &Matroid| {
            let mut v: Vec<usize> = m.flats_of_rank(k).iter().map(Subset::len).collect();
            v.sort_unstable();
            v
        };
        if sizes(m1) != sizes(m2) {
            return Ok(None);
        }
    }

    let sig1 = signatures(m1);
    let sig2 = signatures(m2);
    {
        let mut s1 = sig1.clone();
        let mut s2 = sig2.clone();
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 != s2 {
            return Ok(None);
        }
    }

    // assign rare-signature elements first
    let mut order: Vec<usize> = (0..n).collect();
    let mut freq: HashMap<&Vec<usize>, usize> = HashMap::new();
    for s in &sig1 {
        *freq.entry(s).or_insert(0) += 1;
    }
    order.sort_by_key(|&i| (freq[&sig1[i]], i));

    // flats of m1 that become fully assigned exactly at step d
    let pos_of = {
        let mut pos = vec![0usize; n];
        for (d, &e) in order.iter().enumerate() {
            pos[e] = d;
        }
        pos
    };
    let all_flats1: Vec<(usize, &Subset)> = m1.all_flats().collect();
    let mut completed_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, (_, f)) in all_flats1.iter().enumerate() {
        if let Some(last) = f.iter().map(|e| pos_of[e]).max() {
            completed_at[last].push(fi);
        }
    }
    let flats2: HashSet<&Subset> = m2.all_flats().map(|(_, f)| f).collect();

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(
        0,
        &order,
        &sig1,
        &sig2,
        &all_flats1,
        &completed_at,
        &flats2,
        m2,
        &mut mapping,
        &mut used,
    ) {
        Ok(Some(mapping))
    } else {
        Ok(None)
    }
}

/// Per-element invariant: for each rank, how many flats of that rank contain
/// the element, refined by flat sizes.
fn signatures(m: &Matroid) -> Vec<Vec<usize>> {
    let n = m.size();
    let mut sigs = vec![Vec::new(); n];
    for k in 0..=m.rank() {
        let mut per_elem: Vec<Vec<usize>> = vec![Vec::new(); n];
        for f in m.flats_of_rank(k) {
            for e in f.iter() {
                per_elem[e].push(f.len());
            }
        }
        for (e, mut v) in per_elem.into_iter().enumerate() {
            v.sort_unstable();
            sigs[e].push(v.len());
            sigs[e].extend(v);
            sigs[e].push(usize::MAX); // rank separator
        }
    }
    sigs
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    order: &[usize],
    sig1: &[Vec<usize>],
    sig2: &[Vec<usize>],
    all_flats1: &[(usize, &Subset)],
    completed_at: &[Vec<usize>],
    flats2: &HashSet<&Subset>,
    m2: &Matroid,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let e = order[depth];
    for target in 0..mapping.len() {
        if used[target] || sig2[target] != sig1[e] {
            continue;
        }
        mapping[e] = target;
        used[target] = true;
        let ok = completed_at[depth].iter().all(|&fi| {
            let (k, f) = all_flats1[fi];
            let image = Subset::from_indices(mapping.len(), f.iter().map(|i| mapping[i]));
            flats2.contains(&image) && m2.rank_of_flat(&image) == Some(k)
        });
        if ok
            && search(
                depth + 1,
                order,
                sig1,
                sig2,
                all_flats1,
                completed_at,
                flats2,
                m2,
                mapping,
                used,
            )
        {
            return true;
        }
        mapping[e] = usize::MAX;
        used[target] = false;
    }
    false
}

/// Checks that a given index map is a flat-preserving bijection.
pub fn verify_bijection(m1: &Matroid, m2: &Matroid, mapping: &[usize]) -> bool {
    if mapping.len() != m1.size() || m1.size() != m2.size() {
        return false;
    }
    let mut seen = vec![false; mapping.len()];
    for &t in mapping {
        if t >= mapping.len() || seen[t] {
            return false;
        }
        seen[t] = true;
    }
    m1.all_flats().all(|(k, f)| {
        let image = Subset::from_indices(mapping.len(), f.iter().map(|i| mapping[i]));
        m2.rank_of_flat(&image) == Some(k)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::ground::GroundSet;
    use crate::matroid::Matroid;

    fn relabel(m: &Matroid, labels: &[&str]) -> Matroid {
        let ground = GroundSet::new(labels.iter().copied()).unwrap();
        let flats = (0..=m.rank())
            .map(|k| m.flats_of_rank(k).to_vec())
            .collect();
        Matroid::from_flats(ground, None, flats).unwrap()
    }

    #[test]
    fn uniform_relabeling_is_isomorphic() {
        let m1 = generators::uniform(2, 4).unwrap();
        let m2 = relabel(&m1, &["w", "x", "y", "z"]);
        let bij = are_isomorphic(&m1, &m2, DEFAULT_ISO_BOUND).unwrap().unwrap();
        assert!(verify_bijection(&m1, &m2, &bij));
    }

    #[test]
    fn different_ranks_are_not_isomorphic() {
        let m1 = generators::uniform(3, 6).unwrap();
        let v8 = generators::vamos();
        assert!(are_isomorphic(&m1, &v8, DEFAULT_ISO_BOUND).unwrap().is_none());
    }

    #[test]
    fn vamos_is_not_uniform() {
        let v8 = generators::vamos();
        let u48 = generators::uniform(4, 8).unwrap();
        assert!(are_isomorphic(&v8, &u48, DEFAULT_ISO_BOUND).unwrap().is_none());
    }

    #[test]
    fn pg32_self_isomorphism_under_permutation() {
        let pg = generators::pg3(2).unwrap();
        // reverse the point order
        let labels: Vec<String> = pg
            .ground_set()
            .labels()
            .iter()
            .rev()
            .cloned()
            .collect();
        let n = pg.size();
        let ground = GroundSet::new(labels.iter().map(String::as_str)).unwrap();
        let flats = (0..=pg.rank())
            .map(|k| {
                pg.flats_of_rank(k)
                    .iter()
                    .map(|f| Subset::from_indices(n, f.iter().map(|i| n - 1 - i)))
                    .collect()
            })
            .collect();
        let rev = Matroid::from_flats(ground, None, flats).unwrap();
        let bij = are_isomorphic(&pg, &rev, DEFAULT_ISO_BOUND).unwrap().unwrap();
        assert!(verify_bijection(&pg, &rev, &bij));
    }

    #[test]
    fn too_large_errors() {
        let m = generators::pg3(3).unwrap();
        assert!(matches!(
            are_isomorphic(&m, &m, DEFAULT_ISO_BOUND),
            Err(IsoError::TooLarge { .. })
        ));
    }
}
