//! Co-span equality proofs for computation results.
//!
//! A proof that `(w1, a)` and `(w1', a')` agree over the ambient world `w` is
//! a pair of injections `x : w1 → apex`, `x' : w1' → apex` that commute with
//! the extension inclusions out of `w`, together with ground evidence that
//! the transported payloads coincide at the apex. Proof synthesis fixes `x`
//! as the identity-carrier inclusion and backtracks over assignments of the
//! right-hand fresh names to left-hand fresh names or to garbage above the
//! apex; this subsumes the dummy-allocation witness (an inclusion leg) and
//! the allocation-swap witness (a permutation leg).

use super::ground::{common_evidence, value_matches_evidence, GroundEq};
use super::EquivError;
use crate::abstract_sem::{transport, TValue};
use crate::lang::Type;
use crate::worlds::{Injection, Name, World};
use serde::Serialize;

/// A proof object for equality of two computation results over a world.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TProof {
    /// Both results are bottom.
    Bottom,
    /// Both results converged; the payloads agree at the apex.
    Cospan {
        left: Injection,
        right: Injection,
        evidence: GroundEq,
    },
}

/// Verifies a proof against two computation results over `w` at payload type
/// `ty` (restricted to the fragment {int, bool, name, name -> bool}).
pub fn verify_tproof(
    w: &World,
    tv_left: &TValue,
    tv_right: &TValue,
    proof: &TProof,
    ty: &Type,
    fuel: u32,
) -> Result<bool, EquivError> {
    check_fragment(ty)?;
    match (proof, tv_left, tv_right) {
        (TProof::Bottom, TValue::Bot, TValue::Bot) => Ok(true),
        (TProof::Bottom, _, _) => Ok(false),
        (TProof::Cospan { .. }, TValue::Bot, _) | (TProof::Cospan { .. }, _, TValue::Bot) => {
            Ok(false)
        }
        (
            TProof::Cospan {
                left,
                right,
                evidence,
            },
            TValue::Done {
                world: w1,
                value: a,
            },
            TValue::Done {
                world: w1p,
                value: ap,
            },
        ) => {
            if left.dom() != w1 || right.dom() != w1p {
                return Err(EquivError::ShapeMismatch(format!(
                    "proof legs start at {} and {}, results live at {} and {}",
                    left.dom(),
                    right.dom(),
                    w1,
                    w1p
                )));
            }
            if left.cod() != right.cod() {
                return Err(EquivError::ShapeMismatch(format!(
                    "proof legs end at different apexes {} and {}",
                    left.cod(),
                    right.cod()
                )));
            }
            if !w.is_subset(w1) || !w.is_subset(w1p) {
                return Err(EquivError::ShapeMismatch(format!(
                    "result worlds {w1} and {w1p} do not extend the ambient world {w}"
                )));
            }
            // commutation with the extension inclusions out of w
            for n in w.iter() {
                if left.apply(n) != right.apply(n) {
                    return Ok(false);
                }
            }
            Ok(value_matches_evidence(left, a, evidence, ty, fuel)?
                && value_matches_evidence(right, ap, evidence, ty, fuel)?)
        }
    }
}

/// Searches for a proof that two results agree over `w`. Returns the first
/// proof found in a deterministic order, or `None`.
pub fn synth_tproof(
    w: &World,
    tv_left: &TValue,
    tv_right: &TValue,
    ty: &Type,
    fuel: u32,
) -> Result<Option<TProof>, EquivError> {
    check_fragment(ty)?;
    let (w1, a, w1p, ap) = match (tv_left, tv_right) {
        (TValue::Bot, TValue::Bot) => return Ok(Some(TProof::Bottom)),
        (TValue::Bot, _) | (_, TValue::Bot) => return Ok(None),
        (
            TValue::Done {
                world: w1,
                value: a,
            },
            TValue::Done {
                world: w1p,
                value: ap,
            },
        ) => (w1, a, w1p, ap),
    };
    if !w.is_subset(w1) || !w.is_subset(w1p) {
        return Err(EquivError::ShapeMismatch(format!(
            "result worlds {w1} and {w1p} do not extend the ambient world {w}"
        )));
    }

    let fresh_left: Vec<Name> = w1.difference(w).iter().collect();
    let fresh_right: Vec<Name> = w1p.difference(w).iter().collect();

    // x is the identity-carrier inclusion of w1; x' is forced on w and
    // assigned on fresh_right by backtracking: each right-hand fresh name
    // goes to an unused left-hand fresh name or to new garbage above w1.
    let mut search = Search {
        fresh_left: &fresh_left,
        fresh_right: &fresh_right,
        used: vec![false; fresh_left.len()],
        targets: Vec::with_capacity(fresh_right.len()),
        w,
        w1,
        w1p,
        payload_left: a,
        payload_right: ap,
        ty,
        fuel,
    };
    search.go(0)
}

/// Sentinel target meaning "a new garbage name above the apex".
const GARBAGE: Name = Name::MAX;

struct Search<'a> {
    fresh_left: &'a [Name],
    fresh_right: &'a [Name],
    used: Vec<bool>,
    /// Chosen target per right-hand fresh name, parallel to `fresh_right`.
    targets: Vec<Name>,
    w: &'a World,
    w1: &'a World,
    w1p: &'a World,
    payload_left: &'a crate::abstract_sem::AValue,
    payload_right: &'a crate::abstract_sem::AValue,
    ty: &'a Type,
    fuel: u32,
}

impl Search<'_> {
    fn go(&mut self, idx: usize) -> Result<Option<TProof>, EquivError> {
        if idx == self.fresh_right.len() {
            return self.finish();
        }
        for slot in 0..self.fresh_left.len() {
            if self.used[slot] {
                continue;
            }
            self.used[slot] = true;
            self.targets.push(self.fresh_left[slot]);
            let found = self.go(idx + 1)?;
            self.targets.pop();
            self.used[slot] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        self.targets.push(GARBAGE);
        let found = self.go(idx + 1)?;
        self.targets.pop();
        Ok(found)
    }

    fn finish(&self) -> Result<Option<TProof>, EquivError> {
        // apex: w1 plus one garbage name per unmatched right-hand fresh name
        let mut apex = self.w1.clone();
        let mut next = self.w1.next_fresh();
        let mut right_pairs: Vec<(Name, Name)> = self.w.iter().map(|n| (n, n)).collect();
        for (&m, &tgt) in self.fresh_right.iter().zip(&self.targets) {
            if tgt == GARBAGE {
                apex = apex.insert(next);
                right_pairs.push((m, next));
                next += 1;
            } else {
                right_pairs.push((m, tgt));
            }
        }
        let left = Injection::inclusion(self.w1, &apex)?;
        let right = Injection::new(self.w1p.clone(), apex.clone(), right_pairs)?;
        let moved_left = transport(&left, self.payload_left)?;
        let moved_right = transport(&right, self.payload_right)?;
        match common_evidence(&apex, &moved_left, &moved_right, self.ty, self.fuel)? {
            Some(evidence) => Ok(Some(TProof::Cospan {
                left,
                right,
                evidence,
            })),
            None => Ok(None),
        }
    }
}

fn check_fragment(ty: &Type) -> Result<(), EquivError> {
    let ok = match ty {
        Type::Int | Type::Bool | Type::Name => true,
        Type::Arrow(a, b) => **a == Type::Name && **b == Type::Bool,
    };
    if ok {
        Ok(())
    } else {
        Err(EquivError::UnsupportedType(ty.clone()))
    }
}
