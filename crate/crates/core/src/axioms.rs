//! Rank axiom checking: subcardinality (R1), monotonicity (R2),
//! submodularity (R3).
//!
//! Exhaustive over all subset pairs for small ground sets, seeded random
//! sampling above that. All sampling in the crate flows from a caller-
//! provided seed so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ground::{all_subsets, Subset};
use crate::matroid::RankOracle;

/// Ground sets up to this size get the exhaustive pair check.
pub const EXHAUSTIVE_LIMIT: usize = 10;
/// Default number of sampled pairs above the exhaustive limit.
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomCheckMode {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

impl AxiomCheckMode {
    /// Exhaustive for |E| <= 10, sampled otherwise.
    pub fn auto(n: usize, pairs: usize, seed: u64) -> Self {
        if n <= EXHAUSTIVE_LIMIT {
            AxiomCheckMode::Exhaustive
        } else {
            AxiomCheckMode::Sampled { pairs, seed }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// r(X) outside 0..=|X|
    Subcardinality { x: Subset, rank: usize },
    /// X ⊆ Y but r(X) > r(Y)
    Monotonicity { x: Subset, y: Subset },
    /// r(X) + r(Y) < r(X ∪ Y) + r(X ∩ Y)
    Submodularity { x: Subset, y: Subset },
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub mode: AxiomCheckMode,
    pub pairs_checked: u64,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_REPORTED: usize = 8;

pub fn check_rank_axioms<O: RankOracle>(oracle: &O, mode: AxiomCheckMode) -> AxiomReport {
    match mode {
        AxiomCheckMode::Exhaustive => check_exhaustive(oracle),
        AxiomCheckMode::Sampled { pairs, seed } => check_sampled(oracle, pairs, seed),
    }
}

fn check_pair<O: RankOracle>(oracle: &O, x: &Subset, y: &Subset, out: &mut Vec<AxiomViolation>) {
    let rx = oracle.rank_subset(x);
    let ry = oracle.rank_subset(y);
    if rx > x.len() {
        out.push(AxiomViolation::Subcardinality {
            x: x.clone(),
            rank: rx,
        });
        return;
    }
    if x.is_subset_of(y) && rx > ry {
        out.push(AxiomViolation::Monotonicity {
            x: x.clone(),
            y: y.clone(),
        });
        return;
    }
    let ru = oracle.rank_subset(&x.union(y));
    let ri = oracle.rank_subset(&x.intersection(y));
    if rx + ry < ru + ri {
        out.push(AxiomViolation::Submodularity {
            x: x.clone(),
            y: y.clone(),
        });
    }
}

fn check_exhaustive<O: RankOracle>(oracle: &O) -> AxiomReport {
    let n = oracle.ground().len();
    let subsets: Vec<Subset> = all_subsets(n).collect();
    let mut violations = Vec::new();
    let mut pairs = 0u64;
    'outer: for (i, x) in subsets.iter().enumerate() {
        for y in &subsets[i..] {
            pairs += 1;
            check_pair(oracle, x, y, &mut violations);
            if violations.len() >= MAX_REPORTED {
                break 'outer;
            }
        }
    }
    AxiomReport {
        mode: AxiomCheckMode::Exhaustive,
        pairs_checked: pairs,
        violations,
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Subset {
    Subset::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

fn check_sampled<O: RankOracle>(oracle: &O, pairs: usize, seed: u64) -> AxiomReport {
    let n = oracle.ground().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for _ in 0..pairs {
        let x = random_subset(&mut rng, n);
        let y = random_subset(&mut rng, n);
        checked += 1;
        check_pair(oracle, &x, &y, &mut violations);
        if violations.len() >= MAX_REPORTED {
            break;
        }
    }
    AxiomReport {
        mode: AxiomCheckMode::Sampled { pairs, seed },
        pairs_checked: checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn vamos_passes_exhaustive() {
        let v = generators::vamos();
        let report = check_rank_axioms(&v, AxiomCheckMode::Exhaustive);
        assert!(report.passed());
        assert_eq!(report.pairs_checked, (256 * 257) / 2);
    }

    #[test]
    fn escher_table_fails_submodularity() {
        let t = generators::escher_configuration_table();
        let report = check_rank_axioms(&t, AxiomCheckMode::Exhaustive);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::Submodularity { .. })));
    }

    #[test]
    fn sampled_check_is_deterministic() {
        let pg = generators::pg3(2).unwrap();
        let mode = AxiomCheckMode::Sampled {
            pairs: 500,
            seed: 7,
        };
        let a = check_rank_axioms(&pg, mode);
        let b = check_rank_axioms(&pg, mode);
        assert!(a.passed() && b.passed());
        assert_eq!(a.pairs_checked, b.pairs_checked);
    }
}
