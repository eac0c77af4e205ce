//! Named matroid families with documented canonical labelings.
//!
//! - `uniform(r, n)` / `free(n)`: elements `a, b, c, ...` (or `e0, e1, ...`
//!   past 26).
//! - `vamos`: elements `a..h`; the four defining lines are `ab`, `cd`, `ef`,
//!   `gh` and the circuit-hyperplanes are every union of two of them except
//!   `ef ∪ gh`.
//! - `pg3(q)`, q in {2, 3, 4}: points of PG(3, q) labeled by the normalized
//!   homogeneous coordinates over GF(q) (first nonzero coordinate 1), four
//!   digits per label, GF(4) = {0, 1, w, w+1} written {0, 1, 2, 3}.
//! - `figure1-erection`: the rank-4 erection of U_{3,6} carrying a
//!   Vamos-style pair of top lines `gh`, `ij` over the base lines `ab`, `cd`.

use thiserror::Error;

use crate::ground::{GroundSet, Subset};
use crate::matroid::{Matroid, MatroidError, RankOracle};
use crate::ranktable::RankTable;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("unknown matroid family `{0}`")]
    UnknownFamily(String),
    #[error("unsupported parameter for family `{family}`: {detail}")]
    UnsupportedParam { family: String, detail: String },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

fn default_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("e{i}")).collect()
    }
}

/// Uniform matroid U_{r,n}: every set of at most r elements is independent.
pub fn uniform(r: usize, n: usize) -> Result<Matroid, GenError> {
    if r > n {
        return Err(GenError::UnsupportedParam {
            family: "uniform".into(),
            detail: format!("rank {r} exceeds size {n}"),
        });
    }
    let ground = GroundSet::new(default_labels(n)).map_err(MatroidError::from)?;
    let mut flats: Vec<Vec<Subset>> = Vec::with_capacity(r + 1);
    if r == 0 {
        flats.push(vec![ground.full_subset()]);
    } else {
        for k in 0..r {
            flats.push(crate::ground::k_subsets(n, k));
        }
        flats.push(vec![ground.full_subset()]);
    }
    Ok(Matroid::from_flats(ground, Some(format!("U_{{{r},{n}}}")), flats)?)
}

/// Free matroid on n elements (U_{n,n}).
pub fn free(n: usize) -> Result<Matroid, GenError> {
    Ok(uniform(n, n)?.with_name(format!("free({n})")))
}

/// Rank oracle for paving-style constructions: rank is `min(|X|, r)` except
/// inside a listed degenerate hyperplane, where it is capped at `r - 1`.
struct CappedOracle {
    ground: GroundSet,
    rank: usize,
    capped: Vec<Subset>,
}

impl RankOracle for CappedOracle {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }
    fn rank_subset(&self, x: &Subset) -> usize {
        let cap = if self.capped.iter().any(|h| x.is_subset_of(h)) {
            self.rank - 1
        } else {
            self.rank
        };
        x.len().min(cap)
    }
}

/// The Vamos matroid V8: rank 4, 8 elements, exactly 5 nonbases.
pub fn vamos() -> Matroid {
    let ground = GroundSet::new(default_labels(8)).unwrap();
    let s = |labels: &[&str]| ground.subset_from_labels(labels.iter().copied()).unwrap();
    let capped = vec![
        s(&["a", "b", "c", "d"]),
        s(&["a", "b", "e", "f"]),
        s(&["a", "b", "g", "h"]),
        s(&["c", "d", "e", "f"]),
        s(&["c", "d", "g", "h"]),
    ];
    let oracle = CappedOracle {
        ground,
        rank: 4,
        capped,
    };
    Matroid::from_rank_oracle(&oracle, Some("V8".into()))
        .expect("the Vamos matroid satisfies the flat axioms")
}

/// Rank-4 erection of U_{3,6}: the six base points span a plane, and two new
/// lines `gh`, `ij` are each coplanar with the base lines `ab` and `cd` but
/// not with each other. Restricting to `a..f` gives back U_{3,6}; restricting
/// to `{a, b, c, d, g, h, i, j}` gives V8.
pub fn figure1_erection() -> Matroid {
    let labels: Vec<String> = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let ground = GroundSet::new(labels).unwrap();
    let s = |labels: &[&str]| ground.subset_from_labels(labels.iter().copied()).unwrap();
    let capped = vec![
        s(&["a", "b", "c", "d", "e", "f"]),
        s(&["a", "b", "g", "h"]),
        s(&["c", "d", "g", "h"]),
        s(&["a", "b", "i", "j"]),
        s(&["c", "d", "i", "j"]),
    ];
    let oracle = CappedOracle {
        ground,
        rank: 4,
        capped,
    };
    Matroid::from_rank_oracle(&oracle, Some("figure1-erection".into()))
        .expect("the figure-1 erection satisfies the flat axioms")
}

// --- finite fields for PG(3, q) ---

#[derive(Clone, Copy)]
struct Gf {
    q: u8,
}

impl Gf {
    fn new(q: u8) -> Option<Gf> {
        matches!(q, 2 | 3 | 4).then_some(Gf { q })
    }

    fn add(self, a: u8, b: u8) -> u8 {
        match self.q {
            2 | 3 => (a + b) % self.q,
            // GF(4) as GF(2)[x]/(x^2+x+1): addition is xor on coefficients
            _ => a ^ b,
        }
    }

    fn mul(self, a: u8, b: u8) -> u8 {
        match self.q {
            2 | 3 => (a * b) % self.q,
            _ => {
                const TABLE: [[u8; 4]; 4] = [
                    [0, 0, 0, 0],
                    [0, 1, 2, 3],
                    [0, 2, 3, 1],
                    [0, 3, 1, 2],
                ];
                TABLE[a as usize][b as usize]
            }
        }
    }

    fn inv(self, a: u8) -> u8 {
        (1..self.q).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    fn elements(self) -> impl Iterator<Item = u8> {
        0..self.q
    }
}

type Vec4 = [u8; 4];

fn scale(gf: Gf, c: u8, v: Vec4) -> Vec4 {
    [
        gf.mul(c, v[0]),
        gf.mul(c, v[1]),
        gf.mul(c, v[2]),
        gf.mul(c, v[3]),
    ]
}

fn add4(gf: Gf, a: Vec4, b: Vec4) -> Vec4 {
    [
        gf.add(a[0], b[0]),
        gf.add(a[1], b[1]),
        gf.add(a[2], b[2]),
        gf.add(a[3], b[3]),
    ]
}

fn dot(gf: Gf, a: Vec4, b: Vec4) -> u8 {
    let mut acc = 0;
    for i in 0..4 {
        acc = gf.add(acc, gf.mul(a[i], b[i]));
    }
    acc
}

fn normalize(gf: Gf, v: Vec4) -> Vec4 {
    let lead = v.iter().copied().find(|&c| c != 0).unwrap();
    scale(gf, gf.inv(lead), v)
}

fn all_nonzero_vectors(gf: Gf) -> Vec<Vec4> {
    let mut out = Vec::new();
    for a in gf.elements() {
        for b in gf.elements() {
            for c in gf.elements() {
                for d in gf.elements() {
                    let v = [a, b, c, d];
                    if v != [0, 0, 0, 0] {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Normalized projective points of PG(3, q), in lexicographic coordinate order.
fn projective_points(gf: Gf) -> Vec<Vec4> {
    let mut pts: Vec<Vec4> = all_nonzero_vectors(gf)
        .into_iter()
        .map(|v| normalize(gf, v))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// The projective geometry PG(3, q) as a rank-4 matroid on its points.
pub fn pg3(q: u8) -> Result<Matroid, GenError> {
    let gf = Gf::new(q).ok_or_else(|| GenError::UnsupportedParam {
        family: "pg3".into(),
        detail: format!("q = {q} not in {{2, 3, 4}}"),
    })?;
    let points = projective_points(gf);
    let n = points.len();
    let labels: Vec<String> = points
        .iter()
        .map(|v| format!("{}{}{}{}", v[0], v[1], v[2], v[3]))
        .collect();
    let ground = GroundSet::new(labels).map_err(MatroidError::from)?;
    let point_index = |v: &Vec4| points.binary_search(v).unwrap();

    // lines: spans of point pairs, deduplicated
    let mut lines: Vec<Subset> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut line = Subset::empty(n);
            for a in gf.elements() {
                for b in gf.elements() {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let v = add4(gf, scale(gf, a, points[i]), scale(gf, b, points[j]));
                    line.insert(point_index(&normalize(gf, v)));
                }
            }
            lines.push(line);
        }
    }
    lines.sort();
    lines.dedup();

    // planes: kernels of nonzero functionals, one per normalized functional
    let mut planes: Vec<Subset> = projective_points(gf)
        .iter()
        .map(|w| {
            Subset::from_indices(
                n,
                (0..n).filter(|&i| dot(gf, *w, points[i]) == 0),
            )
        })
        .collect();
    planes.sort();
    planes.dedup();

    let flats = vec![
        vec![Subset::empty(n)],
        (0..n).map(|i| Subset::from_indices(n, [i])).collect(),
        lines,
        planes,
        vec![ground.full_subset()],
    ];
    Ok(Matroid::from_flats(ground, Some(format!("PG(3,{q})")), flats)?)
}

/// The would-be matroid of Figure 1 as a raw rank table: two lines `abp`,
/// `cdp` meeting at `p`, a third line `gh` coplanar with both but missing
/// `p`, and the three lines not all in one plane. Any genuine matroid would
/// force `p` onto `gh`; this table is the canonical Escher violation.
pub fn escher_configuration_table() -> RankTable {
    let ground = GroundSet::new(["a", "b", "c", "d", "p", "g", "h"]).unwrap();
    let s = |labels: &[&str]| ground.subset_from_labels(labels.iter().copied()).unwrap();
    let declared: Vec<(Subset, usize)> = vec![
        (s(&["a", "b", "p"]), 2),
        (s(&["c", "d", "p"]), 2),
        (s(&["g", "h"]), 2),
        (s(&["a", "b", "c", "d", "p"]), 3),
        (s(&["a", "b", "p", "g", "h"]), 3),
        (s(&["c", "d", "p", "g", "h"]), 3),
    ];
    RankTable::from_fn(ground, |x| {
        let geometric = declared
            .iter()
            .filter(|(f, _)| x.is_subset_of(f))
            .map(|&(_, r)| r)
            .min()
            .unwrap_or(4);
        x.len().min(geometric)
    })
    .unwrap()
}

/// Dispatch by family name, as used by the CLI `gen` subcommand.
pub fn gen_named(family: &str, params: &[usize]) -> Result<Matroid, GenError> {
    let want = |k: usize| -> Result<(), GenError> {
        if params.len() == k {
            Ok(())
        } else {
            Err(GenError::UnsupportedParam {
                family: family.into(),
                detail: format!("expected {k} parameter(s), got {}", params.len()),
            })
        }
    };
    match family {
        "uniform" => {
            want(2)?;
            uniform(params[0], params[1])
        }
        "free" => {
            want(1)?;
            free(params[0])
        }
        "vamos" => {
            want(0)?;
            Ok(vamos())
        }
        "pg3" => {
            want(1)?;
            pg3(params[0] as u8)
        }
        "figure1-erection" => {
            want(0)?;
            Ok(figure1_erection())
        }
        other => Err(GenError::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_flat_counts() {
        let m = uniform(2, 4).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.flats_of_rank(1).len(), 4);
        assert_eq!(m.flats_of_rank(2).len(), 1);
        let f = free(3).unwrap();
        assert_eq!(f.rank(), 3);
        assert_eq!(f.flat_count(), 8);
    }

    #[test]
    fn uniform_degenerate_cases() {
        let m = uniform(0, 3).unwrap();
        assert_eq!(m.rank(), 0);
        assert_eq!(m.loops().len(), 3);
        let empty = uniform(0, 0).unwrap();
        assert_eq!(empty.size(), 0);
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn vamos_shape() {
        let v = vamos();
        assert_eq!(v.size(), 8);
        assert_eq!(v.rank(), 4);
        // 5 four-element circuit-hyperplanes among the rank-3 flats
        let big_hyperplanes = v
            .flats_of_rank(3)
            .iter()
            .filter(|f| f.len() == 4)
            .count();
        assert_eq!(big_hyperplanes, 5);
        assert_eq!(v.lines().len(), 28);
    }

    #[test]
    fn pg3_2_counts() {
        let pg = pg3(2).unwrap();
        assert_eq!(pg.size(), 15);
        assert_eq!(pg.rank(), 4);
        assert_eq!(pg.flats_of_rank(1).len(), 15);
        assert_eq!(pg.flats_of_rank(2).len(), 35);
        assert_eq!(pg.flats_of_rank(3).len(), 15);
        assert!(pg.lines().iter().all(|l| l.len() == 3));
        assert!(pg.hyperplanes().iter().all(|h| h.len() == 7));
    }

    #[test]
    fn pg3_3_counts() {
        let pg = pg3(3).unwrap();
        assert_eq!(pg.size(), 40);
        assert_eq!(pg.flats_of_rank(2).len(), 130);
        assert_eq!(pg.flats_of_rank(3).len(), 40);
    }

    #[test]
    fn figure1_erection_restricts_to_u36_and_v8() {
        let m = figure1_erection();
        assert_eq!(m.size(), 10);
        assert_eq!(m.rank(), 4);
        let g = m.ground_set();
        let base = g
            .subset_from_labels(["a", "b", "c", "d", "e", "f"])
            .unwrap();
        let u36 = m.restriction(&base).unwrap();
        assert_eq!(u36, uniform(3, 6).unwrap());
        let v8_part = g
            .subset_from_labels(["a", "b", "c", "d", "g", "h", "i", "j"])
            .unwrap();
        let v = m.restriction(&v8_part).unwrap();
        let bij = crate::iso::are_isomorphic(&v, &vamos(), 20).unwrap();
        assert!(bij.is_some());
    }

    #[test]
    fn unknown_family_errors() {
        assert!(matches!(
            gen_named("dowling", &[]),
            Err(GenError::UnknownFamily(_))
        ));
        assert!(matches!(
            gen_named("pg3", &[5]),
            Err(GenError::UnsupportedParam { .. })
        ));
    }
}
