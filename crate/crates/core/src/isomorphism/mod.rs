//! Graded isomorphism of presentations: move-sequence certificates for
//! equivalent pairs and separating graded identities for the others.

mod brute;
mod separate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{cohomologous_over_field, CochainWitness, CocycleError};
use crate::finite_group::Elem;
use crate::graded_poly::PolyError;
use crate::presentation::{Move, Presentation, PresentationError};

pub use brute::{
    bruteforce_cost, compare_identities, same_identities_bruteforce, BruteForceOutcome,
};
pub use separate::{
    separate, separate_with, verify_separation, SeparationCertificate, SeparationOutcome,
    SeparationStep, VerificationMode, BRUTE_FORCE_BUDGET,
};

#[derive(Debug, Error)]
pub enum IsomorphismError {
    #[error("the presentations have different ambient groups")]
    AmbientMismatch,
    #[error("the presentations are equivalent, so no graded identity separates them")]
    PresentationsEquivalent,
    #[error("{needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One of the two presentations being compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn pick<'a, T>(self, a: &'a T, b: &'a T) -> &'a T {
        match self {
            Side::A => a,
            Side::B => b,
        }
    }
}

/// A start presentation and moves to replay on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    pub start: Presentation,
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn end(&self) -> Result<Presentation, PresentationError> {
        self.start.apply_moves(&self.moves)
    }

    /// The moves of `self` followed by those of `next`, which must start
    /// where `self` ends.
    pub fn then(&self, next: &MoveSequence) -> Result<MoveSequence, PresentationError> {
        if self.end()? != next.start {
            return Err(PresentationError::InvalidMoveParameter(
                "sequences do not chain".into(),
            ));
        }
        let mut moves = self.moves.clone();
        moves.extend(next.moves.iter().cloned());
        Ok(MoveSequence {
            start: self.start.clone(),
            moves,
        })
    }

    /// Moves leading from the end back to the start.
    pub fn inverse(&self) -> Result<MoveSequence, PresentationError> {
        let mut cur = self.start.clone();
        let mut back = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            let g = cur.ambient();
            back.push(match m {
                Move::Permute { perm } => {
                    let mut inv = vec![0; perm.len()];
                    for (j, &k) in perm.iter().enumerate() {
                        inv[k] = j;
                    }
                    Move::Permute { perm: inv }
                }
                Move::CosetShift { index, h0 } => Move::CosetShift {
                    index: *index,
                    h0: g.inv(*h0),
                },
                Move::Conjugate { g: x } => Move::Conjugate { g: g.inv(*x) },
                Move::CocycleReplace { witness } => Move::CocycleReplace {
                    witness: CochainWitness {
                        n: witness.n,
                        values: witness
                            .values
                            .iter()
                            .map(|&v| (witness.n - v % witness.n) % witness.n)
                            .collect(),
                    },
                },
            });
            cur = cur.apply_move(m)?;
        }
        back.reverse();
        Ok(MoveSequence {
            start: cur,
            moves: back,
        })
    }
}

/// Whether replaying the moves on the start gives exactly `target`.
pub fn verify_moves(seq: &MoveSequence, target: &Presentation) -> bool {
    matches!(seq.end(), Ok(p) if p == *target)
}

/// `perm` with new entry `j` of the tuple in the right `H`-coset of
/// `target[j]`, the least unused index first; `None` if the coset
/// multisets differ.
fn matching_permutation(p: &Presentation, target: &[Elem]) -> Option<Vec<usize>> {
    let g = p.ambient();
    let h = p.subgroup();
    let keys: Vec<Elem> = p.tuple().iter().map(|&x| g.right_coset_key(h, x)).collect();
    let mut used = vec![false; keys.len()];
    target
        .iter()
        .map(|&q| {
            let key = g.right_coset_key(h, q);
            let i = (0..keys.len()).find(|&i| !used[i] && keys[i] == key)?;
            used[i] = true;
            Some(i)
        })
        .collect()
}

/// Moves turning `a` into `b` literally, or `None` if the presentations
/// define non-isomorphic graded algebras.
///
/// Tries every `g` with `g H_a g^-1 = H_b` in increasing order; after
/// conjugating, the tuple is matched coset by coset, shifted onto `b`'s
/// tuple, and the cocycles are compared over the field.
pub fn equivalent(
    a: &Presentation,
    b: &Presentation,
) -> Result<Option<MoveSequence>, IsomorphismError> {
    if a.ambient() != b.ambient() {
        return Err(IsomorphismError::AmbientMismatch);
    }
    if a.matrix_size() != b.matrix_size() || a.subgroup().order() != b.subgroup().order() {
        return Ok(None);
    }
    let g = a.ambient();
    for x in g.elements() {
        if g.conjugate_subgroup(a.subgroup(), x) != *b.subgroup() {
            continue;
        }
        let mut moves = Vec::new();
        if x != g.identity() {
            moves.push(Move::Conjugate { g: x });
        }
        let conj = a.apply_moves(&moves)?;
        let Some(perm) = matching_permutation(&conj, b.tuple()) else {
            continue;
        };
        if perm.iter().enumerate().any(|(j, &k)| j != k) {
            moves.push(Move::Permute { perm: perm.clone() });
        }
        for (j, (&q, &k)) in b.tuple().iter().zip(&perm).enumerate() {
            let h0 = g.mul(q, g.inv(conj.tuple()[k]));
            if h0 != g.identity() {
                moves.push(Move::CosetShift { index: j, h0 });
            }
        }
        if conj.cocycle() != b.cocycle() {
            match cohomologous_over_field(conj.cocycle(), b.cocycle())? {
                Some(witness) => moves.push(Move::CocycleReplace { witness }),
                None => continue,
            }
        }
        let seq = MoveSequence {
            start: a.clone(),
            moves,
        };
        if verify_moves(&seq, b) {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}
