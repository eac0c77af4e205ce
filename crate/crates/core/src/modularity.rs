//! Modular defect machinery: modular pairs, hypermodularity, the Escher
//! scan, line partitions of hypermodular rank-4 matroids, and the bundle
//! condition.

use std::collections::HashSet;

use thiserror::Error;

use crate::ground::Subset;
use crate::matroid::{Matroid, RankOracle};

#[derive(Debug, Error)]
pub enum ModularityError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("enumeration cap of {cap} quadruples exceeded")]
    CapExceeded { cap: u64 },
}

/// A pair of flats together with its modular defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPair {
    pub x: Subset,
    pub y: Subset,
    pub defect: usize,
}

/// δ(X, Y) = r(X) + r(Y) − r(X ∪ Y) − r(X ∩ Y); non-negative by
/// submodularity, zero exactly for modular pairs.
pub fn modular_defect<O: RankOracle>(m: &O, x: &Subset, y: &Subset) -> usize {
    let sum = m.rank_subset(x) + m.rank_subset(y);
    let mixed = m.rank_subset(&x.union(y)) + m.rank_subset(&x.intersection(y));
    sum - mixed
}

/// Signed variant for raw rank tables, which may break submodularity.
pub fn modular_defect_signed<O: RankOracle>(m: &O, x: &Subset, y: &Subset) -> i64 {
    let sum = (m.rank_subset(x) + m.rank_subset(y)) as i64;
    let mixed = (m.rank_subset(&x.union(y)) + m.rank_subset(&x.intersection(y))) as i64;
    sum - mixed
}

pub fn is_modular_pair(m: &Matroid, x: &Subset, y: &Subset) -> bool {
    modular_defect(m, x, y) == 0
}

/// First non-modular pair of flats in canonical order, or `None` when the
/// matroid is modular.
pub fn modularity_witness(m: &Matroid) -> Option<FlatPair> {
    let table = m.pairs();
    let flats = m.flat_list();
    for i in 0..flats.len() {
        for j in i + 1..flats.len() {
            let defect = table.defect(i, j);
            if defect > 0 {
                return Some(FlatPair {
                    x: flats[i].clone(),
                    y: flats[j].clone(),
                    defect,
                });
            }
        }
    }
    None
}

pub fn is_modular(m: &Matroid) -> bool {
    modularity_witness(m).is_none()
}

/// First non-modular hyperplane pair, or `None` when hypermodular.
pub fn hypermodularity_witness(m: &Matroid) -> Option<FlatPair> {
    let table = m.pairs();
    let hyperplanes = m.hyperplanes();
    let pos: Vec<usize> = hyperplanes
        .iter()
        .map(|h| m.flat_position(h).unwrap())
        .collect();
    for (i, x) in hyperplanes.iter().enumerate() {
        for (j, y) in hyperplanes.iter().enumerate().skip(i + 1) {
            let defect = table.defect(pos[i], pos[j]);
            if defect > 0 {
                return Some(FlatPair {
                    x: x.clone(),
                    y: y.clone(),
                    defect,
                });
            }
        }
    }
    None
}

pub fn is_hypermodular(m: &Matroid) -> bool {
    hypermodularity_witness(m).is_none()
}

/// All pairs of disjoint rank-2 flats spanning a common plane, in canonical
/// order. Empty for rank < 3 and for projective geometries.
pub fn coplanar_disjoint_line_pairs(m: &Matroid) -> Vec<FlatPair> {
    let mut out = Vec::new();
    if m.rank() < 3 {
        return out;
    }
    let table = m.pairs();
    let lines = m.lines();
    let pos: Vec<usize> = lines.iter().map(|l| m.flat_position(l).unwrap()).collect();
    for (i, l1) in lines.iter().enumerate() {
        for (j, l2) in lines.iter().enumerate().skip(i + 1) {
            // for disjoint lines, defect 1 says exactly that the union has rank 3
            if l1.is_disjoint_from(l2) && table.defect(pos[i], pos[j]) == 1 {
                out.push(FlatPair {
                    x: l1.clone(),
                    y: l2.clone(),
                    defect: 1,
                });
            }
        }
    }
    out
}

/// An Escher violation: three pairwise-coplanar lines, not all in one plane,
/// where two of them meet in a point that the third misses. Impossible in a
/// matroid; the scan certifies that raw rank tables are not matroids.
///
/// Violations are grouped by the offending plane pair (the closures of
/// `l1 ∪ l3` and `l2 ∪ l3`): a single geometric failure is typically
/// witnessed by several line triples, and one violation per plane pair is
/// reported, with the canonically least witness triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscherViolation {
    pub l1: Subset,
    pub l2: Subset,
    pub l3: Subset,
    pub meeting_point: Subset,
    pub planes: (Subset, Subset),
}

/// Lines of an arbitrary rank oracle: distinct closures of rank-2 pairs that
/// are themselves rank 2.
pub fn oracle_lines<O: RankOracle>(m: &O) -> Vec<Subset> {
    let n = m.ground().len();
    let mut lines = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = Subset::from_indices(n, [i, j]);
            if m.rank_subset(&pair) == 2 {
                let cl = m.closure_subset(&pair);
                if m.rank_subset(&cl) == 2 {
                    lines.insert(cl);
                }
            }
        }
    }
    let mut lines: Vec<Subset> = lines.into_iter().collect();
    lines.sort();
    lines
}

pub fn check_escher<O: RankOracle>(m: &O) -> Vec<EscherViolation> {
    let lines = oracle_lines(m);
    let k = lines.len();
    // pairwise data: coplanar = union of the two lines has rank exactly 3
    let mut coplanar = vec![false; k * k];
    let mut meets = vec![false; k * k];
    for i in 0..k {
        for j in i + 1..k {
            let cop = m.rank_subset(&lines[i].union(&lines[j])) == 3;
            coplanar[i * k + j] = cop;
            coplanar[j * k + i] = cop;
            let met = !lines[i].is_disjoint_from(&lines[j]);
            meets[i * k + j] = met;
            meets[j * k + i] = met;
        }
    }
    let mut found: Vec<EscherViolation> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if !coplanar[a * k + b] {
                continue;
            }
            for c in 0..k {
                if c == a || c == b || !coplanar[a * k + c] || !coplanar[b * k + c] {
                    continue;
                }
                // roles: l1, l2 meet; l3 = lines[c]
                if !meets[a * k + b] {
                    continue;
                }
                let p = lines[a].intersection(&lines[b]);
                if p.is_subset_of(&lines[c]) {
                    continue;
                }
                let union3 = lines[a].union(&lines[b]).union(&lines[c]);
                if m.rank_subset(&union3) <= 3 {
                    continue;
                }
                found.push(EscherViolation {
                    l1: lines[a].clone(),
                    l2: lines[b].clone(),
                    l3: lines[c].clone(),
                    meeting_point: p,
                    planes: ordered_pair(
                        m.closure_subset(&lines[a].union(&lines[c])),
                        m.closure_subset(&lines[b].union(&lines[c])),
                    ),
                });
            }
        }
    }
    // one violation per offending plane pair, least witness first
    found.sort_by(|u, v| {
        (&u.l1, &u.l2, &u.l3)
            .cmp(&(&v.l1, &v.l2, &v.l3))
    });
    let mut seen = HashSet::new();
    found
        .into_iter()
        .filter(|v| seen.insert(v.planes.clone()))
        .collect()
}

fn ordered_pair(a: Subset, b: Subset) -> (Subset, Subset) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A partition of the ground set into lines, all coplanar with the two
/// origin lines, built as in the hypermodular rank-4 construction.
#[derive(Debug, Clone)]
pub struct LinePartition {
    pub origin: (Subset, Subset),
    pub plane: Subset,
    /// lines through points outside the origin plane
    pub delta: Vec<Subset>,
    /// the chosen line of `delta` used to split the origin plane
    pub chosen: Subset,
    /// lines inside the origin plane, away from the origin lines
    pub sigma: Vec<Subset>,
    /// the full partition: origin lines, then sigma, then delta
    pub lines: Vec<Subset>,
}

/// Partitions `E` into `l1`, `l2` and lines coplanar with both, following
/// the construction `Γ = l1 ∪ l2 ∪ Σ ∪ Δ`: for `p` outside the plane
/// `e = cl(l1 ∪ l2)` take `l_p = (l1 ∨ p) ∧ (l2 ∨ p)`, then split
/// `e ∖ (l1 ∪ l2)` along a chosen member of Δ. All members lie in the
/// modular cut generated by `{l1, l2}`.
pub fn line_partition(
    m: &Matroid,
    l1: &Subset,
    l2: &Subset,
    tie_break: Option<usize>,
) -> Result<LinePartition, ModularityError> {
    let pre = |msg: &str| Err(ModularityError::PreconditionFailed(msg.to_string()));
    if m.rank() != 4 {
        return pre("line_partition needs a rank-4 matroid");
    }
    if !is_hypermodular(m) {
        return pre("line_partition needs a hypermodular matroid");
    }
    if m.rank_of_flat(l1) != Some(2) || m.rank_of_flat(l2) != Some(2) {
        return pre("l1 and l2 must be lines");
    }
    if !l1.is_disjoint_from(l2) {
        return pre("l1 and l2 must be disjoint");
    }
    let plane = m.closure(&l1.union(l2));
    if m.rank_of_flat(&plane) != Some(3) {
        return pre("l1 and l2 must be coplanar");
    }

    let n = m.size();
    let mut delta_set: HashSet<Subset> = HashSet::new();
    for p in plane.complement().iter() {
        let p_sub = Subset::from_indices(n, [p]);
        let lp = m
            .closure(&l1.union(&p_sub))
            .intersection(&m.closure(&l2.union(&p_sub)));
        delta_set.insert(lp);
    }
    let mut delta: Vec<Subset> = delta_set.into_iter().collect();
    delta.sort();
    if delta.is_empty() {
        return pre("no points outside the origin plane");
    }
    let chosen = match tie_break {
        None => delta[0].clone(),
        Some(i) if i < delta.len() => delta[i].clone(),
        Some(i) => {
            return pre(&format!(
                "tie-break index {i} out of range for {} delta lines",
                delta.len()
            ))
        }
    };

    let mut sigma_set: HashSet<Subset> = HashSet::new();
    for r in plane.difference(&l1.union(l2)).iter() {
        let r_sub = Subset::from_indices(n, [r]);
        let lr = plane.intersection(&m.closure(&chosen.union(&r_sub)));
        sigma_set.insert(lr);
    }
    let mut sigma: Vec<Subset> = sigma_set.into_iter().collect();
    sigma.sort();

    let mut lines = vec![l1.clone(), l2.clone()];
    lines.extend(sigma.iter().cloned());
    lines.extend(delta.iter().cloned());

    // postconditions from the construction
    let mut covered = Subset::empty(n);
    for l in &lines {
        if m.rank_of_flat(l) != Some(2) {
            return Err(ModularityError::PostconditionFailed(format!(
                "partition member {} is not a line",
                m.ground_set().format_subset(l)
            )));
        }
        if !covered.is_disjoint_from(l) {
            return Err(ModularityError::PostconditionFailed(
                "partition members overlap".into(),
            ));
        }
        covered = covered.union(l);
    }
    if covered != m.ground_set().full_subset() {
        return Err(ModularityError::PostconditionFailed(
            "partition does not cover the ground set".into(),
        ));
    }
    for l in lines.iter().skip(2) {
        for origin in [l1, l2] {
            if m.rank_of(&l.union(origin)) != 3 {
                return Err(ModularityError::PostconditionFailed(format!(
                    "partition member {} is not coplanar with an origin line",
                    m.ground_set().format_subset(l)
                )));
            }
        }
    }
    let cut = crate::cuts::generate_cut(m, &[l1.clone(), l2.clone()]);
    for l in &lines {
        if !cut.contains(l) {
            return Err(ModularityError::PostconditionFailed(format!(
                "partition member {} is outside the generated modular cut",
                m.ground_set().format_subset(l)
            )));
        }
    }

    Ok(LinePartition {
        origin: (l1.clone(), l2.clone()),
        plane,
        delta,
        chosen,
        sigma,
        lines,
    })
}

/// Quadruples of pairwise-disjoint lines, no three in a common plane, with
/// exactly five of the six pairs coplanar. Empty exactly when the bundle
/// condition holds. `cap` bounds the number of candidate quadruples visited.
pub fn bundle_violations(m: &Matroid, cap: u64) -> Result<Vec<[Subset; 4]>, ModularityError> {
    if m.rank() < 4 {
        return Ok(Vec::new());
    }
    let table = m.pairs();
    let lines = m.lines();
    let pos: Vec<usize> = lines.iter().map(|l| m.flat_position(l).unwrap()).collect();
    let k = lines.len();
    let mut disjoint = vec![false; k * k];
    let mut coplanar = vec![false; k * k];
    for i in 0..k {
        for j in i + 1..k {
            let dis = lines[i].is_disjoint_from(&lines[j]);
            disjoint[i * k + j] = dis;
            disjoint[j * k + i] = dis;
            if dis {
                let cop = table.defect(pos[i], pos[j]) == 1;
                coplanar[i * k + j] = cop;
                coplanar[j * k + i] = cop;
            }
        }
    }
    let mut visited = 0u64;
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if !disjoint[a * k + b] {
                continue;
            }
            for c in b + 1..k {
                if !disjoint[a * k + c] || !disjoint[b * k + c] {
                    continue;
                }
                let cop3 = [coplanar[a * k + b], coplanar[a * k + c], coplanar[b * k + c]];
                let non_cop3 = cop3.iter().filter(|&&x| !x).count();
                if non_cop3 >= 2 {
                    continue; // can never reach five coplanar pairs
                }
                for d in c + 1..k {
                    if !disjoint[a * k + d] || !disjoint[b * k + d] || !disjoint[c * k + d] {
                        continue;
                    }
                    visited += 1;
                    if visited > cap {
                        return Err(ModularityError::CapExceeded { cap });
                    }
                    let quad = [a, b, c, d];
                    let mut non_coplanar = 0;
                    for x in 0..4 {
                        for y in x + 1..4 {
                            if !coplanar[quad[x] * k + quad[y]] {
                                non_coplanar += 1;
                            }
                        }
                    }
                    if non_coplanar != 1 {
                        continue;
                    }
                    // no three lines in a common plane
                    let mut three_coplanar = false;
                    'triples: for x in 0..4 {
                        for y in x + 1..4 {
                            for z in y + 1..4 {
                                if coplanar[quad[x] * k + quad[y]]
                                    && coplanar[quad[x] * k + quad[z]]
                                    && coplanar[quad[y] * k + quad[z]]
                                {
                                    let union = lines[quad[x]]
                                        .union(&lines[quad[y]])
                                        .union(&lines[quad[z]]);
                                    if m.rank_of(&union) == 3 {
                                        three_coplanar = true;
                                        break 'triples;
                                    }
                                }
                            }
                        }
                    }
                    if !three_coplanar {
                        out.push([
                            lines[a].clone(),
                            lines[b].clone(),
                            lines[c].clone(),
                            lines[d].clone(),
                        ]);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub const DEFAULT_QUAD_CAP: u64 = 10_000_000;

/// Outcome of the search for a Vamos restriction witnessing that a disjoint
/// coplanar line pair cannot be intersected (five of six pairs coplanar, the
/// `(l3, l4)` pair not, with an eight-point V8 restriction).
#[derive(Debug, Clone)]
pub struct VamosWitness {
    pub l3: Subset,
    pub l4: Subset,
    /// two points from each of l1, l2, l3, l4 inducing a V8 restriction
    pub points: Subset,
}

/// Searches the line partition generated by `(l1, l2)` for a non-coplanar
/// pair `(l3, l4)` completing the Vamos pattern. Returns `None` when the
/// pair is intersectable (no such configuration is forced). The returned
/// witness is the first verified one in canonical order; others may exist.
pub fn vamos_restriction_search(
    m: &Matroid,
    l1: &Subset,
    l2: &Subset,
) -> Result<Option<VamosWitness>, ModularityError> {
    if crate::cuts::is_intersectable(m, l1, l2)
        .map_err(|e| ModularityError::PreconditionFailed(e.to_string()))?
    {
        return Ok(None);
    }
    let partition = line_partition(m, l1, l2, None)?;
    match find_vamos_pair(m, l1, l2, &partition.lines) {
        Some(w) => Ok(Some(w)),
        None => Err(ModularityError::PostconditionFailed(
            "pair is not intersectable but no Vamos restriction was found".into(),
        )),
    }
}

/// Search for the non-coplanar pair and a V8 point selection inside a given
/// family of candidate lines. Split out so the mechanics are testable on
/// matroids that fail the hypermodularity precondition.
pub(crate) fn find_vamos_pair(
    m: &Matroid,
    l1: &Subset,
    l2: &Subset,
    candidates: &[Subset],
) -> Option<VamosWitness> {
    let others: Vec<&Subset> = candidates
        .iter()
        .filter(|l| *l != l1 && *l != l2)
        .collect();
    for (i, l3) in others.iter().enumerate() {
        for l4 in &others[i + 1..] {
            if m.rank_of(&l3.union(l4)) == 3 {
                continue; // coplanar, not the missing pair
            }
            let quad = [l1, l2, *l3, *l4];
            if !pattern_holds(m, &quad) {
                continue;
            }
            if let Some(points) = v8_point_selection(m, &quad) {
                return Some(VamosWitness {
                    l3: (*l3).clone(),
                    l4: (*l4).clone(),
                    points,
                });
            }
        }
    }
    None
}

/// five of six pairs coplanar ((l3,l4) not), pairwise disjoint, no common
/// plane for any three
fn pattern_holds(m: &Matroid, quad: &[&Subset; 4]) -> bool {
    for x in 0..4 {
        for y in x + 1..4 {
            if !quad[x].is_disjoint_from(quad[y]) {
                return false;
            }
            let cop = m.rank_of(&quad[x].union(quad[y])) == 3;
            let expected = !(x == 2 && y == 3);
            if cop != expected {
                return false;
            }
        }
    }
    for x in 0..4 {
        for y in x + 1..4 {
            for z in y + 1..4 {
                let union = quad[x].union(quad[y]).union(quad[z]);
                if m.rank_of(&union) == 3 {
                    return false;
                }
            }
        }
    }
    true
}

/// Picks two points per line such that the eight points form a V8
/// restriction: exactly the five pair-unions matching the coplanarity
/// pattern are dependent, all other 4-subsets independent.
fn v8_point_selection(m: &Matroid, quad: &[&Subset; 4]) -> Option<Subset> {
    let n = m.size();
    let pairs: Vec<Vec<(usize, usize)>> = quad
        .iter()
        .map(|l| {
            let pts: Vec<usize> = l.iter().collect();
            let mut out = Vec::new();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    out.push((pts[i], pts[j]));
                }
            }
            out
        })
        .collect();
    for &(a1, a2) in &pairs[0] {
        for &(b1, b2) in &pairs[1] {
            for &(c1, c2) in &pairs[2] {
                for &(d1, d2) in &pairs[3] {
                    let points =
                        Subset::from_indices(n, [a1, a2, b1, b2, c1, c2, d1, d2]);
                    if is_v8_restriction(m, &points, &[[a1, a2], [b1, b2], [c1, c2], [d1, d2]]) {
                        return Some(points);
                    }
                }
            }
        }
    }
    None
}

fn is_v8_restriction(m: &Matroid, points: &Subset, lines: &[[usize; 2]; 4]) -> bool {
    let n = m.size();
    let expected_dependent: HashSet<Subset> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
        .iter()
        .map(|&(i, j)| {
            Subset::from_indices(
                n,
                [lines[i][0], lines[i][1], lines[j][0], lines[j][1]],
            )
        })
        .collect();
    let pts: Vec<usize> = points.iter().collect();
    debug_assert_eq!(pts.len(), 8);
    for quad in crate::ground::k_subsets(8, 4) {
        let four = Subset::from_indices(n, quad.iter().map(|i| pts[i]));
        let rank = m.rank_of(&four);
        if expected_dependent.contains(&four) {
            if rank != 3 {
                return false;
            }
        } else if rank != 4 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn defect_formula_on_u36() {
        let m = generators::uniform(3, 6).unwrap();
        let g = m.ground_set();
        let ab = g.subset_from_labels(["a", "b"]).unwrap();
        let cd = g.subset_from_labels(["c", "d"]).unwrap();
        assert_eq!(modular_defect(&m, &ab, &cd), 1);
        let abc = g.subset_from_labels(["a", "b", "c"]).unwrap();
        assert_eq!(modular_defect(&m, &ab, &abc), 0);
    }

    #[test]
    fn modularity_of_small_matroids() {
        assert!(is_modular(&generators::pg3(2).unwrap()));
        assert!(is_modular(&generators::free(3).unwrap()));
        let u36 = generators::uniform(3, 6).unwrap();
        let witness = modularity_witness(&u36).unwrap();
        assert_eq!(witness.defect, 1);
        assert_eq!(witness.x.len(), 2);
        assert_eq!(witness.y.len(), 2);
        assert!(witness.x.is_disjoint_from(&witness.y));
    }

    #[test]
    fn hypermodularity_examples() {
        assert!(is_hypermodular(&generators::pg3(2).unwrap()));
        assert!(!is_hypermodular(&generators::vamos()));
        assert!(is_hypermodular(&generators::uniform(2, 4).unwrap()));
        assert!(is_hypermodular(&generators::uniform(1, 3).unwrap()));
        // deleting one point of PG(3,2) keeps all plane pairs modular
        let pg = generators::pg3(2).unwrap();
        let p = pg.ground_set().singleton(0);
        let deleted = pg.minor(&p, &pg.ground_set().empty_subset()).unwrap();
        assert!(is_hypermodular(&deleted));
    }

    #[test]
    fn coplanar_disjoint_pairs() {
        assert!(coplanar_disjoint_line_pairs(&generators::pg3(2).unwrap()).is_empty());
        assert!(coplanar_disjoint_line_pairs(&generators::uniform(2, 4).unwrap()).is_empty());
        let u36 = generators::uniform(3, 6).unwrap();
        // all pairs of disjoint 2-subsets: 6!/(2!2!2!)/... = 45 total pairs of
        // disjoint pairs: C(6,2)*C(4,2)/2 = 45
        assert_eq!(coplanar_disjoint_line_pairs(&u36).len(), 45);
        let pg_del = {
            let pg = generators::pg3(2).unwrap();
            let p = pg.ground_set().singleton(0);
            pg.minor(&p, &pg.ground_set().empty_subset()).unwrap()
        };
        let pairs = coplanar_disjoint_line_pairs(&pg_del);
        assert!(!pairs.is_empty());
        // every such pair consists of two 2-point lines (the lines through
        // the deleted point inside a common plane)
        assert!(pairs.iter().all(|p| p.x.len() == 2 && p.y.len() == 2));
    }

    #[test]
    fn escher_clear_on_matroids() {
        assert!(check_escher(&generators::pg3(2).unwrap()).is_empty());
        assert!(check_escher(&generators::vamos()).is_empty());
        assert!(check_escher(&generators::uniform(4, 8).unwrap()).is_empty());
        assert!(check_escher(&generators::figure1_erection()).is_empty());
    }

    #[test]
    fn escher_flags_figure_one_table_once() {
        let table = generators::escher_configuration_table();
        let violations = check_escher(&table);
        assert_eq!(violations.len(), 1);
        let v = &violations[0];
        let g = table.ground();
        assert_eq!(g.format_subset(&v.meeting_point), "p");
        assert_eq!(g.format_subset(&v.l3), "g h");
    }

    #[test]
    fn bundle_condition_examples() {
        let cap = DEFAULT_QUAD_CAP;
        assert!(bundle_violations(&generators::pg3(2).unwrap(), cap)
            .unwrap()
            .is_empty());
        assert!(bundle_violations(&generators::uniform(3, 6).unwrap(), cap)
            .unwrap()
            .is_empty());
        let v8_violations = bundle_violations(&generators::vamos(), cap).unwrap();
        assert!(!v8_violations.is_empty());
        // the defining quadruple ab | cd | ef | gh is among them
        let v8 = generators::vamos();
        let g = v8.ground_set();
        let defining = [
            g.subset_from_labels(["a", "b"]).unwrap(),
            g.subset_from_labels(["c", "d"]).unwrap(),
            g.subset_from_labels(["e", "f"]).unwrap(),
            g.subset_from_labels(["g", "h"]).unwrap(),
        ];
        assert!(v8_violations.iter().any(|q| {
            let mut sorted = q.clone();
            sorted.sort();
            let mut expected = defining.clone();
            expected.sort();
            sorted == expected
        }));
    }

    #[test]
    fn bundle_cap_triggers() {
        let err = bundle_violations(&generators::vamos(), 0).unwrap_err();
        assert!(matches!(err, ModularityError::CapExceeded { cap: 0 }));
    }

    #[test]
    fn vamos_pattern_found_inside_v8() {
        let v8 = generators::vamos();
        let g = v8.ground_set();
        let l1 = g.subset_from_labels(["a", "b"]).unwrap();
        let l2 = g.subset_from_labels(["c", "d"]).unwrap();
        let candidates: Vec<Subset> = vec![
            l1.clone(),
            l2.clone(),
            g.subset_from_labels(["e", "f"]).unwrap(),
            g.subset_from_labels(["g", "h"]).unwrap(),
        ];
        let witness = find_vamos_pair(&v8, &l1, &l2, &candidates).unwrap();
        assert_eq!(witness.points.len(), 8);
    }

    #[test]
    fn line_partition_requires_hypermodularity() {
        let v8 = generators::vamos();
        let g = v8.ground_set();
        let l1 = g.subset_from_labels(["a", "b"]).unwrap();
        let l2 = g.subset_from_labels(["c", "d"]).unwrap();
        assert!(matches!(
            line_partition(&v8, &l1, &l2, None),
            Err(ModularityError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn line_partition_rejects_meeting_lines() {
        let pg = generators::pg3(2).unwrap();
        let lines = pg.lines();
        let (l1, l2) = (&lines[0], &lines[1]);
        assert!(matches!(
            line_partition(&pg, l1, l2, None),
            Err(ModularityError::PreconditionFailed(_))
        ));
    }
}
