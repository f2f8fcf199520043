//! Separating non-equivalent presentations by a graded polynomial that is
//! an identity of one algebra and not of the other.

use serde::{Deserialize, Serialize};

use super::brute::{bruteforce_cost, compare_identities, BruteForceOutcome};
use super::{equivalent, IsomorphismError, Side};
use crate::finite_group::{Elem, Subgroup};
use crate::graded_poly::{
    build_block_probe, build_block_separators, build_global_probe, evaluate_basis,
    is_identity_with, BasisAssignment, GradedPolynomial, IdentityVerdict, PolyError,
    DEFAULT_SIZE_CAP,
};
use crate::presentation::{AlgebraElement, Presentation};

/// Cap on basis assignments for the brute-force step of [`separate`].
pub const BRUTE_FORCE_BUDGET: u128 = 2_000_000;

/// Degree bound of the brute-force step.
const BRUTE_FORCE_DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationMode {
    /// Every canonical assignment was evaluated.
    Exhaustive,
    /// An alternation class has more variables than basis elements of its
    /// degree.
    AlternationBound,
}

/// Which rung of the search produced the polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationStep {
    /// Probe over the whole group; the homogeneous dimensions differ.
    Dimensions,
    /// Probe over a subgroup `T`.
    SubgroupProbe,
    /// A cocycle separator on one block.
    BlockSeparator,
    /// The global probe with cocycle separators spliced in.
    GlobalProbe,
    /// Exhaustive linear algebra in low degree.
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub polynomial: GradedPolynomial,
    /// The side the polynomial is an identity of.
    pub identity_side: Side,
    /// Leaf values on the other side with a nonzero evaluation.
    #[serde(with = "crate::graded_poly::assignment_serde")]
    pub witness: BasisAssignment,
    pub value: AlgebraElement,
    pub verification_mode: VerificationMode,
    pub step: SeparationStep,
    /// Subgroup of a probe step, as elements.
    pub subgroup: Option<Vec<Elem>>,
    /// Search nodes spent on the identity side.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeparationOutcome {
    Separated(SeparationCertificate),
    /// No candidate was settled within the budget.
    Inconclusive {
        attempts: usize,
        spent: u64,
    },
}

struct Ladder<'a> {
    a: &'a Presentation,
    b: &'a Presentation,
    budget: u64,
    threads: usize,
    attempts: usize,
    spent: u64,
}

impl Ladder<'_> {
    /// Check a candidate that is nonzero on `side` at `witness`.
    fn attempt(
        &mut self,
        step: SeparationStep,
        subgroup: Option<&Subgroup>,
        side: Side,
        polynomial: GradedPolynomial,
        witness: BasisAssignment,
    ) -> Result<Option<SeparationCertificate>, IsomorphismError> {
        let x = side.pick(self.a, self.b);
        let y = side.other().pick(self.a, self.b);
        let value = evaluate_basis(&polynomial, x, &witness)?;
        if value.is_zero() {
            return Ok(None);
        }
        self.attempts += 1;
        match is_identity_with(&polynomial, y, self.budget, self.threads) {
            IdentityVerdict::Identity { proof } => {
                self.spent += proof.nodes;
                Ok(Some(SeparationCertificate {
                    polynomial,
                    identity_side: side.other(),
                    witness,
                    value,
                    verification_mode: if proof.pigeonhole {
                        VerificationMode::AlternationBound
                    } else {
                        VerificationMode::Exhaustive
                    },
                    step,
                    subgroup: subgroup.map(|t| t.elements().to_vec()),
                    nodes: proof.nodes,
                }))
            }
            IdentityVerdict::NonIdentity { .. } => Ok(None),
            IdentityVerdict::Inconclusive { spent } => {
                self.spent += spent;
                Ok(None)
            }
        }
    }

    fn probes(
        &mut self,
        step: SeparationStep,
        t: &Subgroup,
    ) -> Result<Option<SeparationCertificate>, IsomorphismError> {
        for side in [Side::A, Side::B] {
            let probe = build_block_probe(side.pick(self.a, self.b), t)?;
            if let Some(c) = self.attempt(step, Some(t), side, probe.polynomial, probe.witness)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

/// Block shape of `A_T`: group part and matrix size of every block.
fn block_signature(
    p: &Presentation,
    t: &Subgroup,
) -> Result<Vec<(Vec<Elem>, usize)>, IsomorphismError> {
    let mut s: Vec<(Vec<Elem>, usize)> = p
        .block_decomposition(t)?
        .blocks
        .iter()
        .map(|b| (b.omega.elements().to_vec(), b.matrix_size))
        .collect();
    s.sort();
    Ok(s)
}

/// Search for a graded polynomial separating two non-equivalent
/// presentations, with `budget` search nodes per identity check.
pub fn separate(
    a: &Presentation,
    b: &Presentation,
    budget: u64,
) -> Result<SeparationOutcome, IsomorphismError> {
    separate_with(a, b, budget, 1)
}

/// As [`separate`], checking identities on `threads` threads.
///
/// Candidates, in order: probes over the whole group when the homogeneous
/// dimensions differ; probes over subgroups `T` (the trivial one, the two
/// `H`s and their conjugates, then the rest) whose block shapes differ;
/// single-block cocycle separators; global probes with cocycle
/// separators; a brute-force search in degree at most 3.
pub fn separate_with(
    a: &Presentation,
    b: &Presentation,
    budget: u64,
    threads: usize,
) -> Result<SeparationOutcome, IsomorphismError> {
    if equivalent(a, b)?.is_some() {
        return Err(IsomorphismError::PresentationsEquivalent);
    }
    let g = a.ambient();
    let mut ladder = Ladder {
        a,
        b,
        budget,
        threads,
        attempts: 0,
        spent: 0,
    };
    let whole = g.whole();
    if a.component_dimensions() != b.component_dimensions() {
        if let Some(c) = ladder.probes(SeparationStep::Dimensions, &whole)? {
            return Ok(SeparationOutcome::Separated(c));
        }
    }
    let mut subgroups: Vec<Subgroup> = vec![g.trivial_subgroup()];
    for h in [a.subgroup(), b.subgroup()] {
        subgroups.push(h.clone());
        subgroups.extend(g.conjugates(h));
    }
    subgroups.extend(g.subgroups());
    let mut tried: Vec<Subgroup> = Vec::new();
    for t in subgroups {
        if tried.contains(&t) {
            continue;
        }
        tried.push(t.clone());
        if t == whole && a.component_dimensions() != b.component_dimensions() {
            continue;
        }
        if block_signature(a, &t)? == block_signature(b, &t)? {
            continue;
        }
        if let Some(c) = ladder.probes(SeparationStep::SubgroupProbe, &t)? {
            return Ok(SeparationOutcome::Separated(c));
        }
    }
    for side in [Side::B, Side::A] {
        for (poly, witness) in build_block_separators(side.pick(a, b))? {
            if let Some(c) =
                ladder.attempt(SeparationStep::BlockSeparator, None, side, poly, witness)?
            {
                return Ok(SeparationOutcome::Separated(c));
            }
        }
    }
    for side in [Side::A, Side::B] {
        match build_global_probe(side.pick(a, b), true, DEFAULT_SIZE_CAP) {
            Ok(probe) => {
                if let Some(c) = ladder.attempt(
                    SeparationStep::GlobalProbe,
                    None,
                    side,
                    probe.polynomial,
                    probe.witness,
                )? {
                    return Ok(SeparationOutcome::Separated(c));
                }
            }
            Err(PolyError::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if bruteforce_cost(a, b, BRUTE_FORCE_DEGREE) <= BRUTE_FORCE_BUDGET {
        if let BruteForceOutcome::Differ {
            polynomial,
            identity_side,
        } = compare_identities(a, b, BRUTE_FORCE_DEGREE, BRUTE_FORCE_BUDGET)?
        {
            let side = identity_side.other();
            let verdict = is_identity_with(&polynomial, side.pick(a, b), budget, threads);
            if let IdentityVerdict::NonIdentity { witness, .. } = verdict {
                if let Some(c) =
                    ladder.attempt(SeparationStep::BruteForce, None, side, polynomial, witness)?
                {
                    return Ok(SeparationOutcome::Separated(c));
                }
            }
        }
    }
    Ok(SeparationOutcome::Inconclusive {
        attempts: ladder.attempts,
        spent: ladder.spent,
    })
}

/// Re-check a certificate: the witness evaluates to a nonzero element on
/// the non-identity side, and the identity side passes an exhaustive check.
pub fn verify_separation(
    cert: &SeparationCertificate,
    a: &Presentation,
    b: &Presentation,
    budget: u64,
) -> bool {
    let x = cert.identity_side.other().pick(a, b);
    let y = cert.identity_side.pick(a, b);
    match evaluate_basis(&cert.polynomial, x, &cert.witness) {
        Ok(v) if !v.is_zero() => is_identity_with(&cert.polynomial, y, budget, 1).is_identity(),
        _ => false,
    }
}
