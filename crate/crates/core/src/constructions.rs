//! Matroid-building procedures: free additions, the non-stickiness witness
//! erected over a flat/hyperplane pair, the certificate pipeline pairing it
//! with a defect-reducing chain, and the budget-bounded embedding chains
//! toward OTE and hypermodular matroids.

use thiserror::Error;

use crate::amalgam::{proper_amalgam, AmalgamError, SubmodularityReport};
use crate::cuts::{
    crapo_extend, fresh_label, fresh_plain_label, generate_cut, intersectable_pairs,
    is_intersectable, principal_cut, reduce_defect_chain, ChainStatus, CutError, ExtensionChain,
    ExtensionStep, ModularCut,
};
use crate::ground::Subset;
use crate::matroid::{Matroid, MatroidError};
use crate::modularity::{coplanar_disjoint_line_pairs, modular_defect};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
}

/// Adds a point freely to the flat `f` (principal cut extension).
pub fn add_free_on_flat(m: &Matroid, f: &Subset, label: &str) -> Result<Matroid, CutError> {
    let cut = principal_cut(m, f)?;
    crapo_extend(m, &cut, label)
}

/// Adds a coloop (empty cut); the rank goes up by one.
pub fn add_coloop(m: &Matroid, label: &str) -> Result<Matroid, CutError> {
    crapo_extend(m, &ModularCut::empty(), label)
}

/// Adds a free element (principal cut at the full ground set).
pub fn add_free(m: &Matroid, label: &str) -> Result<Matroid, CutError> {
    add_free_on_flat(m, &m.ground_set().full_subset(), label)
}

/// Verification results for the witness construction.
#[derive(Debug, Clone)]
pub struct WitnessChecks {
    pub n0_rank: usize,
    pub h_closure_is_h_plus_a: bool,
    pub defect_t: usize,
    pub defect_b: usize,
    pub expected_defect: usize,
    pub t_pair_modular_in_result: bool,
    pub b_pair_modular_in_result: bool,
    pub p_inside_t_meet: bool,
    pub q_inside_b_meet: bool,
}

impl WitnessChecks {
    pub fn all_hold(&self) -> bool {
        self.h_closure_is_h_plus_a
            && self.defect_t == self.expected_defect
            && self.defect_b == self.expected_defect
            && self.t_pair_modular_in_result
            && self.b_pair_modular_in_result
            && self.p_inside_t_meet
            && self.q_inside_b_meet
    }
}

/// The artifacts of the witness erection over a non-modular pair `(F, H)`:
/// the scaffold `N0` (free points on `H`, a coloop, a free point), the four
/// hyperplane sets `T1, T2, B1, B2`, and the result `N` in which both
/// hyperplane pairs have been made modular by the added sets `P` and `Q`.
#[derive(Debug, Clone)]
pub struct WitnessBundle {
    pub base: Matroid,
    pub flat: Subset,
    pub hyperplane: Subset,
    pub a_labels: Vec<String>,
    pub coloop_label: String,
    pub free_label: String,
    /// T1, T2, B1, B2 over the ground set of `n0`
    pub t1: Subset,
    pub t2: Subset,
    pub b1: Subset,
    pub b2: Subset,
    pub p_labels: Vec<String>,
    pub q_labels: Vec<String>,
    pub n0: Matroid,
    pub result: Matroid,
    pub checks: WitnessChecks,
}

/// Erects the witness matroid over a non-modular pair of disjoint flats
/// `(F, H)` with `H` a hyperplane: in every extension of the result, the
/// closures of `F` and `H` remain a non-modular pair.
pub fn nonsticky_witness(
    m: &Matroid,
    f: &Subset,
    h: &Subset,
) -> Result<WitnessBundle, ConstructError> {
    let pre = |msg: String| Err(ConstructError::PreconditionFailed(msg));
    if !m.is_flat(f) {
        return pre(format!("F = {} is not a flat", m.ground_set().format_subset(f)));
    }
    if !m.is_flat(h) {
        return pre(format!("H = {} is not a flat", m.ground_set().format_subset(h)));
    }
    let r = m.rank();
    if r < 3 {
        return pre(format!("rank {r} < 3"));
    }
    if m.rank_of(h) != r - 1 {
        return pre("H must be a hyperplane".into());
    }
    if !f.is_disjoint_from(h) {
        return pre("F and H must be disjoint".into());
    }
    let rk_f = m.rank_of(f);
    if !(2..=r - 1).contains(&rk_f) {
        return pre(format!("rank of F must be between 2 and {}, got {rk_f}", r - 1));
    }
    if modular_defect(m, f, h) == 0 {
        return pre("(F, H) must be non-modular".into());
    }

    // A: r - 1 - rk(F) points freely on the current closure of H
    let mut current = m.clone();
    let mut a_labels = Vec::new();
    let mut counter = 1;
    for _ in 0..(r - 1 - rk_f) {
        let (label, next) = fresh_label(&current, "a", counter);
        counter = next;
        let h_now = current.closure(&h.grown(current.size()));
        current = add_free_on_flat(&current, &h_now, &label)?;
        a_labels.push(label);
    }
    let coloop_label = fresh_plain_label(&current, "e");
    current = add_coloop(&current, &coloop_label)?;
    let free_label = fresh_plain_label(&current, "f");
    current = add_free(&current, &free_label)?;
    let n0 = current;

    let idx = |label: &str| n0.ground_set().index_of(label).unwrap();
    let n0_size = n0.size();
    let mut a_set = Subset::empty(n0_size);
    for l in &a_labels {
        a_set.insert(idx(l));
    }
    let e_idx = idx(&coloop_label);
    let f_idx = idx(&free_label);
    let f_in_n0 = f.grown(n0_size);
    let h_in_n0 = h.grown(n0_size);

    let mut t1 = f_in_n0.union(&a_set);
    t1.insert(e_idx);
    let mut t2 = h_in_n0.union(&a_set);
    t2.insert(e_idx);
    let mut b1 = f_in_n0.union(&a_set);
    b1.insert(f_idx);
    let mut b2 = h_in_n0.union(&a_set);
    b2.insert(f_idx);

    let expected_defect = rk_f - 1;
    let defect_t = modular_defect(&n0, &t1, &t2);
    let defect_b = modular_defect(&n0, &b1, &b2);

    // two defect-reduction chains on the hyperplane pairs
    let chain_t = reduce_defect_chain(&n0, &n0.closure(&t1), &n0.closure(&t2), "wp")?;
    if chain_t.status != ChainStatus::Complete {
        return Err(ConstructError::PostconditionFailed(
            "the T-pair defect chain stopped early".into(),
        ));
    }
    let mid = chain_t.result.clone();
    let b1_mid = mid.closure(&b1.grown(mid.size()));
    let b2_mid = mid.closure(&b2.grown(mid.size()));
    let chain_b = reduce_defect_chain(&mid, &b1_mid, &b2_mid, "wq")?;
    if chain_b.status != ChainStatus::Complete {
        return Err(ConstructError::PostconditionFailed(
            "the B-pair defect chain stopped early".into(),
        ));
    }
    let result = chain_b.result.clone();
    let p_labels: Vec<String> = chain_t.steps.iter().map(|s| s.label.clone()).collect();
    let q_labels: Vec<String> = chain_b.steps.iter().map(|s| s.label.clone()).collect();

    let rsize = result.size();
    let cl_t1 = result.closure(&t1.grown(rsize));
    let cl_t2 = result.closure(&t2.grown(rsize));
    let cl_b1 = result.closure(&b1.grown(rsize));
    let cl_b2 = result.closure(&b2.grown(rsize));
    let p_set = Subset::from_indices(
        rsize,
        p_labels.iter().map(|l| result.ground_set().index_of(l).unwrap()),
    );
    let q_set = Subset::from_indices(
        rsize,
        q_labels.iter().map(|l| result.ground_set().index_of(l).unwrap()),
    );

    let checks = WitnessChecks {
        n0_rank: n0.rank(),
        h_closure_is_h_plus_a: n0.closure(&h_in_n0) == h_in_n0.union(&a_set),
        defect_t,
        defect_b,
        expected_defect,
        t_pair_modular_in_result: modular_defect(&result, &cl_t1, &cl_t2) == 0,
        b_pair_modular_in_result: modular_defect(&result, &cl_b1, &cl_b2) == 0,
        p_inside_t_meet: p_set.is_subset_of(&cl_t1.intersection(&cl_t2)),
        q_inside_b_meet: q_set.is_subset_of(&cl_b1.intersection(&cl_b2)),
    };
    if checks.n0_rank != r + 1 {
        return Err(ConstructError::PostconditionFailed(format!(
            "scaffold rank is {} instead of {}",
            checks.n0_rank,
            r + 1
        )));
    }
    if !checks.all_hold() {
        return Err(ConstructError::PostconditionFailed(format!(
            "witness invariants failed: {checks:?}"
        )));
    }

    Ok(WitnessBundle {
        base: m.clone(),
        flat: f.clone(),
        hyperplane: h.clone(),
        a_labels,
        coloop_label,
        free_label,
        t1,
        t2,
        b1,
        b2,
        p_labels,
        q_labels,
        n0,
        result,
        checks,
    })
}

/// The full non-stickiness certificate: one extension chain making `(F, H)`
/// modular, one witness in which it can never become modular, and the
/// failed proper amalgam of the two.
#[derive(Debug)]
pub struct CertificateReport {
    /// `F ∩ H` over the original ground set, when a contraction was needed
    pub contracted: Option<Subset>,
    /// the matroid the pipeline actually ran on
    pub base: Matroid,
    pub flat: Subset,
    pub hyperplane: Subset,
    pub chain: ExtensionChain,
    pub witness: WitnessBundle,
    pub amalgam: SubmodularityReport,
}

/// Builds the certificate for a non-modular intersectable pair `(F, H)`
/// with `H` a hyperplane. If `F` and `H` meet, their intersection is
/// contracted first and the pipeline runs on the contraction.
pub fn nonsticky_certificate(
    m: &Matroid,
    f: &Subset,
    h: &Subset,
) -> Result<CertificateReport, ConstructError> {
    if !m.is_flat(f) || !m.is_flat(h) {
        return Err(ConstructError::PreconditionFailed(
            "F and H must be flats".into(),
        ));
    }
    if m.rank_of(h) != m.rank() - 1 {
        return Err(ConstructError::PreconditionFailed(
            "H must be a hyperplane".into(),
        ));
    }
    if modular_defect(m, f, h) == 0 {
        return Err(ConstructError::Cut(CutError::NotIntersectable));
    }
    if !is_intersectable(m, f, h)? {
        return Err(ConstructError::Cut(CutError::NotIntersectable));
    }

    let meet = f.intersection(h);
    let (base, bf, bh, contracted) = if meet.is_empty() {
        (m.clone(), f.clone(), h.clone(), None)
    } else {
        let contraction = m.minor(&m.ground_set().empty_subset(), &meet)?;
        let map = |x: &Subset| -> Subset {
            Subset::from_indices(
                contraction.size(),
                x.difference(&meet).iter().map(|i| {
                    contraction
                        .ground_set()
                        .index_of(m.ground_set().label(i))
                        .unwrap()
                }),
            )
        };
        (contraction.clone(), map(f), map(h), Some(meet))
    };

    let chain = reduce_defect_chain(&base, &bf, &bh, "p")?;
    if chain.status != ChainStatus::Complete {
        return Err(ConstructError::PostconditionFailed(
            "the defect-reduction chain stopped early".into(),
        ));
    }
    let witness = nonsticky_witness(&base, &bf, &bh)?;
    let amalgam = proper_amalgam(&chain.result, &witness.result)?;
    Ok(CertificateReport {
        contracted,
        base,
        flat: bf,
        hyperplane: bh,
        chain,
        witness,
        amalgam,
    })
}

#[derive(Debug, Clone)]
pub struct EmbedChecks {
    pub hypermodular: bool,
    pub ote: bool,
    pub lines_restrict_to_lines: bool,
    /// set when the input satisfied the bundle condition
    pub modular_given_bundle: Option<bool>,
}

#[derive(Debug)]
pub struct EmbedReport {
    pub chain: ExtensionChain,
    pub pairs_processed: usize,
    pub pairs_skipped: usize,
    pub checks: EmbedChecks,
}

/// Embeds a finite hypermodular rank-4 matroid into an OTE matroid of rank
/// 4 by one pass over the disjoint coplanar line pairs of the original
/// matroid, extending by the generated cut whenever the pair is still
/// intersectable. Every line of the result restricts to a line of the
/// input; the OTE postcondition is asserted and failure is loud.
pub fn embed_ote_rank4(m: &Matroid) -> Result<EmbedReport, ConstructError> {
    if m.rank() != 4 {
        return Err(ConstructError::PreconditionFailed(
            "embedding needs a rank-4 matroid".into(),
        ));
    }
    if !crate::modularity::is_hypermodular(m) {
        return Err(ConstructError::PreconditionFailed(
            "embedding needs a hypermodular matroid".into(),
        ));
    }
    let bundle_held = crate::modularity::bundle_violations(m, crate::modularity::DEFAULT_QUAD_CAP)
        .map(|v| v.is_empty())
        .unwrap_or(false);

    let pairs = coplanar_disjoint_line_pairs(m);
    let mut current = m.clone();
    let mut steps: Vec<ExtensionStep> = Vec::new();
    let mut counter = 1;
    let mut processed = 0;
    let mut skipped = 0;
    let base_size = m.size();

    for pair in &pairs {
        let cx = current.closure(&pair.x.grown(current.size()));
        let cy = current.closure(&pair.y.grown(current.size()));
        if modular_defect(&current, &cx, &cy) == 0 {
            skipped += 1;
            continue;
        }
        let cut = generate_cut(&current, &[cx.clone(), cy.clone()]);
        if cut.contains(&cx.intersection(&cy)) {
            skipped += 1;
            continue;
        }
        let (label, next_counter) = fresh_label(&current, "x", counter);
        counter = next_counter;
        let next = crapo_extend(&current, &cut, &label)?;
        steps.push(ExtensionStep {
            label,
            generators: vec![cx, cy],
            cut,
        });
        // every line of the extension must restrict to a line of the input
        for line in next.lines() {
            let restricted: Subset = Subset::from_indices(
                m.size(),
                line.iter().filter(|&i| i < base_size),
            );
            if m.rank_of_flat(&restricted) != Some(2) {
                return Err(ConstructError::PostconditionFailed(format!(
                    "line {} of the extension does not restrict to a line",
                    next.ground_set().format_subset(line)
                )));
            }
        }
        processed += 1;
        current = next;
    }

    let checks = EmbedChecks {
        hypermodular: crate::modularity::is_hypermodular(&current),
        ote: crate::cuts::is_ote(&current),
        lines_restrict_to_lines: true,
        modular_given_bundle: bundle_held.then(|| crate::modularity::is_modular(&current)),
    };
    if !checks.hypermodular {
        return Err(ConstructError::PostconditionFailed(
            "embedding result is not hypermodular".into(),
        ));
    }
    if !checks.ote {
        return Err(ConstructError::PostconditionFailed(
            "embedding result is not OTE after the single pass".into(),
        ));
    }
    if checks.modular_given_bundle == Some(false) {
        return Err(ConstructError::PostconditionFailed(
            "bundle condition held but the embedding is not modular".into(),
        ));
    }
    Ok(EmbedReport {
        chain: ExtensionChain {
            base: m.clone(),
            steps,
            result: current,
            status: ChainStatus::Complete,
        },
        pairs_processed: processed,
        pairs_skipped: skipped,
        checks,
    })
}

/// Budget-bounded embedding toward an OTE matroid of the same rank:
/// repeatedly lists the intersectable non-modular pairs of the current
/// matroid and drives each pair's defect to zero, until no intersectable
/// pair remains (`Complete`) or the extension budget runs out (`Partial`
/// with the count of remaining pairs).
pub fn embed_ote_general(m: &Matroid, budget: usize) -> Result<ExtensionChain, ConstructError> {
    embed_by_pairs(m, budget, "x", PairKind::AllFlats)
}

/// As [`embed_ote_general`] but only non-modular hyperplane pairs are
/// processed; `Complete` means hypermodular.
pub fn hypermodular_completion(
    m: &Matroid,
    budget: usize,
) -> Result<ExtensionChain, ConstructError> {
    embed_by_pairs(m, budget, "h", PairKind::Hyperplanes)
}

enum PairKind {
    AllFlats,
    Hyperplanes,
}

fn open_pairs(m: &Matroid, kind: &PairKind) -> Vec<(Subset, Subset)> {
    match kind {
        PairKind::AllFlats => intersectable_pairs(m)
            .into_iter()
            .map(|(x, y, _)| (x, y))
            .collect(),
        PairKind::Hyperplanes => {
            let hyperplanes = m.hyperplanes();
            let mut out = Vec::new();
            for (i, x) in hyperplanes.iter().enumerate() {
                for y in &hyperplanes[i + 1..] {
                    if modular_defect(m, x, y) > 0 {
                        out.push((x.clone(), y.clone()));
                    }
                }
            }
            out
        }
    }
}

fn embed_by_pairs(
    m: &Matroid,
    budget: usize,
    prefix: &str,
    kind: PairKind,
) -> Result<ExtensionChain, ConstructError> {
    let rank = m.rank();
    let mut current = m.clone();
    let mut steps = Vec::new();
    let mut counter = 1;
    let mut used = 0usize;

    loop {
        let pairs = open_pairs(&current, &kind);
        if pairs.is_empty() {
            return Ok(ExtensionChain {
                base: m.clone(),
                steps,
                result: current,
                status: ChainStatus::Complete,
            });
        }
        for (x, y) in pairs {
            let mut cx = current.closure(&x.grown(current.size()));
            let mut cy = current.closure(&y.grown(current.size()));
            // drive this pair's defect as far down as extensions allow
            loop {
                if modular_defect(&current, &cx, &cy) == 0 {
                    break;
                }
                let cut = generate_cut(&current, &[cx.clone(), cy.clone()]);
                if cut.contains(&cx.intersection(&cy)) {
                    break; // no longer intersectable
                }
                if used == budget {
                    let remaining = open_pairs(&current, &kind).len();
                    return Ok(ExtensionChain {
                        base: m.clone(),
                        steps,
                        result: current,
                        status: ChainStatus::Partial { remaining },
                    });
                }
                let (label, next_counter) = fresh_label(&current, prefix, counter);
                counter = next_counter;
                let next = crapo_extend(&current, &cut, &label)?;
                steps.push(ExtensionStep {
                    label,
                    generators: vec![cx.clone(), cy.clone()],
                    cut,
                });
                used += 1;
                if next.rank() != rank {
                    return Err(ConstructError::PostconditionFailed(
                        "extension changed the rank".into(),
                    ));
                }
                cx = next.closure(&cx.grown(next.size()));
                cy = next.closure(&cy.grown(next.size()));
                current = next;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn free_addition_on_pg32_line_makes_4_point_line() {
        let pg = generators::pg3(2).unwrap();
        let line = pg.lines()[0].clone();
        let ext = add_free_on_flat(&pg, &line, "q").unwrap();
        let line_q = {
            let mut s = line.grown(16);
            s.insert(15);
            s
        };
        assert_eq!(ext.rank_of(&line_q), 2);
        assert_eq!(ext.closure(&line_q).len(), 4);
        // all other flats keep their rank
        for (k, f) in pg.all_flats() {
            assert_eq!(ext.rank_of(&f.grown(16)), k);
        }
    }

    #[test]
    fn coloop_on_empty_matroid() {
        let m = generators::uniform(0, 0).unwrap();
        let ext = add_coloop(&m, "e").unwrap();
        assert_eq!(ext.rank(), 1);
        assert_eq!(ext.size(), 1);
        let again = add_coloop(&ext, "f").unwrap();
        assert_eq!(again.rank(), 2);
    }

    #[test]
    fn coloop_preserves_basis_count() {
        let m = generators::uniform(2, 4).unwrap();
        let ext = add_coloop(&m, "z").unwrap();
        let bases_before = crate::ground::k_subsets(4, 2)
            .iter()
            .filter(|b| m.is_basis(b))
            .count();
        let bases_after = crate::ground::k_subsets(5, 3)
            .iter()
            .filter(|b| ext.is_basis(b))
            .count();
        assert_eq!(bases_before, bases_after);
    }

    #[test]
    fn witness_on_u36() {
        let m = generators::uniform(3, 6).unwrap();
        let g = m.ground_set();
        let f = g.subset_from_labels(["a", "b"]).unwrap();
        let h = g.subset_from_labels(["c", "d"]).unwrap();
        let bundle = nonsticky_witness(&m, &f, &h).unwrap();
        assert_eq!(bundle.result.size(), 10);
        assert_eq!(bundle.result.rank(), 4);
        assert!(bundle.a_labels.is_empty());
        assert_eq!(bundle.p_labels.len(), 1);
        assert_eq!(bundle.q_labels.len(), 1);
        assert_eq!(bundle.checks.defect_t, 1);
        assert_eq!(bundle.checks.defect_b, 1);
        assert!(bundle.checks.all_hold());
    }

    #[test]
    fn witness_on_v8_plane_pair() {
        let v8 = generators::vamos();
        let g = v8.ground_set();
        let f = g.subset_from_labels(["e", "f", "g"]).unwrap();
        let h = g.subset_from_labels(["a", "b", "c", "d"]).unwrap();
        assert_eq!(modular_defect(&v8, &f, &h), 2);
        let bundle = nonsticky_witness(&v8, &f, &h).unwrap();
        assert_eq!(bundle.checks.expected_defect, 2);
        assert_eq!(bundle.p_labels.len(), 2);
        assert_eq!(bundle.q_labels.len(), 2);
        assert_eq!(bundle.result.rank(), 5);
        assert!(bundle.a_labels.is_empty());
    }

    #[test]
    fn witness_rejects_modular_pairs() {
        let m = generators::uniform(3, 6).unwrap();
        let g = m.ground_set();
        let f = g.subset_from_labels(["a", "b"]).unwrap();
        let h = g.subset_from_labels(["a", "c"]).unwrap();
        assert!(nonsticky_witness(&m, &f, &h).is_err());
    }

    #[test]
    fn certificate_on_u36_reproduces_the_figure() {
        let m = generators::uniform(3, 6).unwrap();
        let g = m.ground_set();
        let f = g.subset_from_labels(["a", "b"]).unwrap();
        let h = g.subset_from_labels(["c", "d"]).unwrap();
        let report = nonsticky_certificate(&m, &f, &h).unwrap();
        assert!(report.contracted.is_none());
        assert_eq!(
            report.amalgam.status,
            crate::amalgam::AmalgamStatus::Fails
        );
        assert!(report.amalgam.violation.is_some());
    }

    #[test]
    fn certificate_contracts_meeting_pairs() {
        // two generic planes of V8 meeting in a point: δ = 1, intersectable,
        // and the pipeline must contract the shared point first
        let v8 = generators::vamos();
        let g = v8.ground_set();
        let f = g.subset_from_labels(["a", "c", "e"]).unwrap();
        let h = g.subset_from_labels(["a", "d", "f"]).unwrap();
        assert_eq!(modular_defect(&v8, &f, &h), 1);
        assert!(is_intersectable(&v8, &f, &h).unwrap());
        let report = nonsticky_certificate(&v8, &f, &h).unwrap();
        let contracted = report.contracted.as_ref().unwrap();
        assert_eq!(v8.ground_set().format_subset(contracted), "a");
        assert_eq!(report.base.size(), 7);
        assert_eq!(report.base.rank(), 3);
        assert_eq!(
            report.amalgam.status,
            crate::amalgam::AmalgamStatus::Fails
        );
    }

    #[test]
    fn witness_pair_cannot_be_made_modular_afterwards() {
        // operational form of the witness guarantee: in the constructed
        // extensions of the witness, the closures of F and H stay
        // non-modular, and the pair is not even intersectable in N
        let m = generators::uniform(3, 6).unwrap();
        let g = m.ground_set();
        let f = g.subset_from_labels(["a", "b"]).unwrap();
        let h = g.subset_from_labels(["c", "d"]).unwrap();
        let n = nonsticky_witness(&m, &f, &h).unwrap().result;
        let cf = n.closure(&f.grown(n.size()));
        let ch = n.closure(&h.grown(n.size()));
        assert!(modular_defect(&n, &cf, &ch) > 0);
        assert!(!is_intersectable(&n, &cf, &ch).unwrap());
        for ext in [
            add_free(&n, "z1").unwrap(),
            add_free_on_flat(&n, &cf, "z2").unwrap(),
            add_free_on_flat(&n, &ch, "z3").unwrap(),
            add_coloop(&n, "z4").unwrap(),
        ] {
            let cf2 = ext.closure(&cf.grown(ext.size()));
            let ch2 = ext.closure(&ch.grown(ext.size()));
            assert!(modular_defect(&ext, &cf2, &ch2) > 0);
        }
    }

    #[test]
    fn embed_pg32_minus_point_restores_pg32() {
        let pg = generators::pg3(2).unwrap();
        let p = pg.ground_set().singleton(0);
        let m = pg.minor(&p, &pg.ground_set().empty_subset()).unwrap();
        let report = embed_ote_rank4(&m).unwrap();
        assert_eq!(report.chain.len(), 1);
        let bij = crate::iso::are_isomorphic(&report.chain.result, &pg, 20)
            .unwrap();
        assert!(bij.is_some());
    }

    #[test]
    fn embed_pg32_is_noop() {
        let pg = generators::pg3(2).unwrap();
        let report = embed_ote_rank4(&pg).unwrap();
        assert!(report.chain.is_empty());
        assert_eq!(report.chain.result, pg);
    }

    #[test]
    fn embed_rejects_vamos() {
        assert!(matches!(
            embed_ote_rank4(&generators::vamos()),
            Err(ConstructError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn general_embedding_of_modular_matroid_is_empty() {
        let pg = generators::pg3(2).unwrap();
        let chain = embed_ote_general(&pg, 10).unwrap();
        assert!(chain.is_empty());
        assert_eq!(chain.status, ChainStatus::Complete);
    }

    #[test]
    fn u36_free_closure_does_not_terminate() {
        let m = generators::uniform(3, 6).unwrap();
        let chain = hypermodular_completion(&m, 3).unwrap();
        assert_eq!(chain.len(), 3);
        assert!(matches!(chain.status, ChainStatus::Partial { remaining } if remaining > 0));
        let general = embed_ote_general(&m, 4).unwrap();
        assert!(matches!(general.status, ChainStatus::Partial { .. }));
    }

    #[test]
    fn v8_embedding_with_budget() {
        // V8 has hundreds of intersectable pairs and each extension spawns
        // more, so only small budgets stay desk-scale
        let chain = embed_ote_general(&generators::vamos(), 5).unwrap();
        assert_eq!(chain.result.rank(), 4);
        assert_eq!(chain.len(), 5);
        assert!(matches!(chain.status, ChainStatus::Partial { remaining } if remaining > 0));
        // the run is reproducible
        let again = embed_ote_general(&generators::vamos(), 5).unwrap();
        assert_eq!(chain.len(), again.len());
        assert_eq!(chain.status, again.status);
        assert_eq!(chain.result, again.result);
    }
}
