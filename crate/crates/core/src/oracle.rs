//! Independent brute-force reference implementations.
//!
//! Everything here recomputes results from first principles — explicit
//! enumeration over subsets, rank tables, or coordinate vectors — and never
//! calls into the construction path it is used to check. The acceptance
//! harness and the test suite compare against these.

use std::collections::HashSet;

use crate::ground::{all_subsets, k_subsets, Subset};
use crate::matroid::{Matroid, RankOracle};

/// Bases found by scanning every rank-sized subset with the rank oracle.
pub fn enumerate_bases(m: &Matroid) -> Vec<Subset> {
    k_subsets(m.size(), m.rank())
        .into_iter()
        .filter(|b| m.is_basis(b))
        .collect()
}

/// Independent count of single-element extensions of a tiny matroid: every
/// 0/1 assignment `X ↦ r'(X ∪ p) − r(X)` is materialized as a full rank
/// table on `E ∪ {p}` and kept iff it satisfies the rank axioms.
///
/// Only feasible for `|E| <= 4` (the assignment space is `2^(2^|E|)`).
pub fn count_extensions_bruteforce(m: &Matroid) -> usize {
    let n = m.size();
    assert!(n <= 4, "extension enumeration is capped at 4 elements");
    let subsets: Vec<Subset> = all_subsets(n).collect();
    let base_rank: Vec<usize> = subsets.iter().map(|s| m.rank_of(s)).collect();
    let masks = 1usize << n;

    // full table on E ∪ {p}: index = (mask, has_p)
    let mut count = 0;
    'assignments: for assignment in 0u64..1 << masks {
        let rank_with_p =
            |mask: usize| -> usize { base_rank[mask] + ((assignment >> mask) & 1) as usize };
        // R2 within the p-slice and against the base slice
        for mask in 0..masks {
            if rank_with_p(mask) < base_rank[mask] {
                continue 'assignments;
            }
            for b in 0..n {
                if mask & (1 << b) == 0 {
                    let bigger = mask | 1 << b;
                    if rank_with_p(bigger) < rank_with_p(mask)
                        || base_rank[bigger] + 1 < rank_with_p(bigger)
                    {
                        continue 'assignments;
                    }
                }
            }
        }
        // full submodularity over all pairs of subsets of E ∪ {p}
        let rank_of = |mask: usize, has_p: bool| -> usize {
            if has_p {
                rank_with_p(mask)
            } else {
                base_rank[mask]
            }
        };
        for x in 0..masks {
            for px in [false, true] {
                for y in 0..masks {
                    for py in [false, true] {
                        let rx = rank_of(x, px);
                        let ry = rank_of(y, py);
                        let ru = rank_of(x | y, px || py);
                        let ri = rank_of(x & y, px && py);
                        if rx + ry < ru + ri {
                            continue 'assignments;
                        }
                    }
                }
            }
        }
        count += 1;
    }
    count
}

/// Superset-minimum transform: `out[mask] = min { values[sup] : sup ⊇ mask }`.
pub fn superset_min(values: &[i64]) -> Vec<i64> {
    let n = values.len().trailing_zeros() as usize;
    assert_eq!(values.len(), 1 << n);
    let mut out = values.to_vec();
    for b in 0..n {
        for mask in 0..values.len() {
            if mask & (1 << b) == 0 {
                out[mask] = out[mask].min(out[mask | 1 << b]);
            }
        }
    }
    out
}

/// ξ over all subsets by brute force: η evaluated directly from the three
/// rank functions, then a superset-minimum sweep. The lattice never enters.
pub fn xi_bruteforce(
    e_size: usize,
    eta: impl Fn(&Subset) -> usize,
) -> Vec<i64> {
    assert!(e_size <= 20);
    let etas: Vec<i64> = (0u32..1 << e_size)
        .map(|mask| {
            let s = crate::ranktable::RankTable::mask_to_subset(e_size, mask);
            eta(&s) as i64
        })
        .collect();
    superset_min(&etas)
}

/// Number of k-dimensional subspaces of GF(q)^4 by the Gaussian binomial.
pub fn gaussian_binomial_4(k: usize, q: u64) -> u64 {
    let numer: u64 = (0..k).map(|i| q.pow(4) - q.pow(i as u32)).product();
    let denom: u64 = (0..k).map(|i| q.pow(k as u32) - q.pow(i as u32)).product();
    numer / denom
}

/// Counts the additively closed subsets of GF(2)^4 of size `2^k` — the
/// k-dimensional subspaces — by scanning all 2^16 subsets.
pub fn count_f2_subspaces_bruteforce(k: usize) -> usize {
    let mut count = 0;
    'sets: for mask in 0u32..=u16::MAX as u32 {
        if mask & 1 == 0 {
            continue; // must contain the zero vector
        }
        if mask.count_ones() != 1 << k {
            continue;
        }
        let members: Vec<u16> = (0..16).filter(|&v| mask >> v & 1 == 1).collect();
        for &a in &members {
            for &b in &members {
                if mask >> (a ^ b) & 1 == 0 {
                    continue 'sets;
                }
            }
        }
        count += 1;
    }
    count
}

/// Span of two PG(3,2) points computed from their coordinate labels: the
/// third point of the line is the XOR of the coordinates.
pub fn pg32_line_through(label_a: &str, label_b: &str) -> Vec<String> {
    let parse = |l: &str| -> u8 {
        l.bytes().fold(0u8, |acc, b| acc << 1 | (b - b'0'))
    };
    let a = parse(label_a);
    let b = parse(label_b);
    let c = a ^ b;
    let fmt = |v: u8| -> String {
        (0..4).map(|i| char::from(b'0' + (v >> (3 - i) & 1))).collect()
    };
    let mut line = vec![fmt(a), fmt(b), fmt(c)];
    line.sort();
    line
}

/// Every removable member must break the modular cut conditions or the seed
/// containment: single-member minimality of a generated cut.
pub fn cut_is_single_removal_minimal(
    m: &Matroid,
    cut: &crate::cuts::ModularCut,
    seed: &[Subset],
) -> bool {
    for f in cut.members() {
        if seed.contains(f) {
            continue;
        }
        let reduced: Vec<Subset> = cut
            .members()
            .iter()
            .filter(|g| *g != f)
            .cloned()
            .collect();
        let still_valid = {
            let set: HashSet<&Subset> = reduced.iter().collect();
            let upward = reduced.iter().all(|g| {
                m.all_flats()
                    .all(|(_, h)| !g.is_subset_of(h) || set.contains(h))
            });
            let meets = reduced.iter().enumerate().all(|(i, g)| {
                reduced[i + 1..].iter().all(|h| {
                    crate::modularity::modular_defect(m, g, h) != 0
                        || set.contains(&g.intersection(h))
                })
            });
            upward && meets
        };
        if still_valid {
            return false; // a smaller cut containing the seed exists
        }
    }
    true
}

/// Exhaustive submodularity scan of an arbitrary rank function over all
/// subset pairs, for ground sets up to ~13 elements.
pub fn submodularity_violations<O: RankOracle>(oracle: &O) -> Vec<(Subset, Subset)> {
    let n = oracle.ground().len();
    assert!(n <= 13);
    let subsets: Vec<Subset> = all_subsets(n).collect();
    let ranks: Vec<usize> = subsets.iter().map(|s| oracle.rank_subset(s)).collect();
    let mut out = Vec::new();
    for (i, x) in subsets.iter().enumerate() {
        for (j, y) in subsets.iter().enumerate().skip(i + 1) {
            let u = crate::ranktable::RankTable::subset_to_mask(&x.union(y)) as usize;
            let v = crate::ranktable::RankTable::subset_to_mask(&x.intersection(y)) as usize;
            if ranks[i] + ranks[j] < ranks[u] + ranks[v] {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn basis_counts() {
        // C(8,4) − 5 nonbases
        assert_eq!(enumerate_bases(&generators::vamos()).len(), 65);
        assert_eq!(enumerate_bases(&generators::uniform(2, 4).unwrap()).len(), 6);
    }

    #[test]
    fn extension_counts_on_tiny_matroids() {
        assert_eq!(
            count_extensions_bruteforce(&generators::uniform(1, 1).unwrap()),
            3
        );
        assert_eq!(
            count_extensions_bruteforce(&generators::uniform(2, 4).unwrap()),
            7
        );
    }

    #[test]
    fn superset_min_simple() {
        // values indexed by mask over 2 elements
        let v = vec![5, 3, 4, 2];
        assert_eq!(superset_min(&v), vec![2, 2, 2, 2]);
        let w = vec![0, 3, 4, 9];
        assert_eq!(superset_min(&w), vec![0, 3, 4, 9]);
    }

    #[test]
    fn subspace_counts_agree() {
        assert_eq!(count_f2_subspaces_bruteforce(1), 15);
        assert_eq!(count_f2_subspaces_bruteforce(2), 35);
        assert_eq!(count_f2_subspaces_bruteforce(3), 15);
        assert_eq!(gaussian_binomial_4(2, 2), 35);
        assert_eq!(gaussian_binomial_4(1, 3), 40);
        assert_eq!(gaussian_binomial_4(2, 3), 130);
        assert_eq!(gaussian_binomial_4(1, 4), 85);
        assert_eq!(gaussian_binomial_4(2, 4), 357);
    }

    #[test]
    fn pg32_closure_matches_linear_span() {
        let pg = generators::pg3(2).unwrap();
        let g = pg.ground_set();
        for (i, j) in [(0usize, 1usize), (2, 9), (4, 13)] {
            let pair = Subset::from_indices(pg.size(), [i, j]);
            let closure = pg.closure(&pair);
            let mut labels: Vec<String> =
                g.labels_of(&closure).iter().map(|s| s.to_string()).collect();
            labels.sort();
            assert_eq!(labels, pg32_line_through(g.label(i), g.label(j)));
        }
    }
}
