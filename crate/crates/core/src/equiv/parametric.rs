//! The heterogeneous, span-indexed relation for the certified fragment.
//!
//! Values at two different worlds are compared over a span without first
//! being pushed into a common world: names are related when the span links
//! them, and `name -> bool` functions are related when their truth tables
//! agree on every linked pair. Computation results are related over a span
//! `S` when some span `S1` connecting their extended worlds (reached from `S`
//! by a parametric square of inclusions) relates the payloads; the square
//! condition is what keeps a fresh, never-revealed name out of every low
//! point.

use super::ground::tabulate_closure;
use super::EquivError;
use crate::abstract_sem::{transport, AValue, TValue};
use crate::lang::Type;
use crate::spans::{check_parametric_square, Span};
use crate::worlds::{Injection, Name};
#[cfg(test)]
use crate::worlds::World;
use serde::Serialize;

/// A witness that two values (or computation results) are related over a
/// span. At base types the relation is proof-irrelevant, so the witness is a
/// bare token; at the computation level it records the connecting span.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamWitness {
    /// int/bool equality or a span-linked pair of names.
    Ground,
    /// Truth tables agree on every linked pair.
    Table,
    /// Both computations are bottom.
    Bottom,
    /// Computation results: a span over the extended worlds, reached from
    /// the ambient span by a parametric square of inclusions, relating the
    /// payloads by `inner`.
    TLevel {
        span: Span,
        inner: Box<ParamWitness>,
    },
}

/// Relates two fragment values over a span. There is nothing to search at
/// base types; at `name -> bool` both closures are tabulated (fuel-bounded).
pub fn param_relate(
    span: &Span,
    left: &AValue,
    right: &AValue,
    ty: &Type,
    _budget: u32,
    fuel: u32,
) -> Result<Option<ParamWitness>, EquivError> {
    match (ty, left, right) {
        (Type::Int, AValue::Int(a), AValue::Int(b)) => {
            Ok((a == b).then_some(ParamWitness::Ground))
        }
        (Type::Bool, AValue::Bool(a), AValue::Bool(b)) => {
            Ok((a == b).then_some(ParamWitness::Ground))
        }
        (Type::Name, AValue::Name(a), AValue::Name(b)) => {
            let linked = span.pairs().any(|(l, r)| l == *a && r == *b);
            Ok(linked.then_some(ParamWitness::Ground))
        }
        (Type::Arrow(arg, res), AValue::Closure(cl), AValue::Closure(cr))
            if **arg == Type::Name && **res == Type::Bool =>
        {
            let tl = tabulate_closure(cl, span.left(), fuel)?;
            let tr = tabulate_closure(cr, span.right(), fuel)?;
            let agree = span.pairs().all(|(l, r)| tl[&l] == tr[&r]);
            Ok(agree.then_some(ParamWitness::Table))
        }
        (Type::Int | Type::Bool | Type::Name, _, _) => Ok(None),
        _ => Err(EquivError::UnsupportedType(ty.clone())),
    }
}

/// Re-checks a given witness against values over a span.
pub fn param_verify(
    span: &Span,
    left: &AValue,
    right: &AValue,
    ty: &Type,
    witness: &ParamWitness,
    fuel: u32,
) -> Result<bool, EquivError> {
    match witness {
        ParamWitness::Ground | ParamWitness::Table => {
            Ok(param_relate(span, left, right, ty, 0, fuel)?.is_some())
        }
        _ => Ok(false),
    }
}

/// Relates two computation results over a span: searches for a span between
/// the extended worlds whose low point is a partial bijection extending the
/// ambient one (forced on old names, free on fresh-to-fresh pairs) such
/// that the inclusion square is parametric and the payloads relate. The
/// search visits candidate matchings in a deterministic order, bounded by
/// `budget`; exceeding the budget is reported as fuel exhaustion, never as
/// inequivalence.
pub fn param_relate_t(
    span: &Span,
    left: &TValue,
    right: &TValue,
    ty: &Type,
    budget: u32,
    fuel: u32,
) -> Result<Option<ParamWitness>, EquivError> {
    let (w1, a, w1p, ap) = match (left, right) {
        (TValue::Bot, TValue::Bot) => return Ok(Some(ParamWitness::Bottom)),
        (TValue::Bot, _) | (_, TValue::Bot) => return Ok(None),
        (
            TValue::Done { world: w1, value: a },
            TValue::Done {
                world: w1p,
                value: ap,
            },
        ) => (w1, a, w1p, ap),
    };
    if !span.left().is_subset(w1) || !span.right().is_subset(w1p) {
        return Err(EquivError::ShapeMismatch(format!(
            "result worlds {w1} and {w1p} do not extend the span endpoints {} and {}",
            span.left(),
            span.right()
        )));
    }

    let base_pairs: Vec<(Name, Name)> = span.pairs().collect();
    let fresh_left: Vec<Name> = w1.difference(span.left()).iter().collect();
    let fresh_right: Vec<Name> = w1p.difference(span.right()).iter().collect();

    let mut tried = 0u32;
    let mut matching: Vec<(Name, Name)> = Vec::new();
    let mut used = vec![false; fresh_right.len()];
    let found = search_matchings(
        0,
        &fresh_left,
        &fresh_right,
        &mut used,
        &mut matching,
        &mut tried,
        budget,
        &mut |pairs| {
            let mut all = base_pairs.clone();
            all.extend_from_slice(pairs);
            let candidate = Span::from_pairs(w1, w1p, all)?;
            let incl_l = Injection::inclusion(span.left(), w1)?;
            let incl_r = Injection::inclusion(span.right(), w1p)?;
            if check_parametric_square(&incl_l, &incl_r, span, &candidate)?.is_none() {
                return Ok(None);
            }
            match param_relate(&candidate, a, ap, ty, budget, fuel)? {
                Some(inner) => Ok(Some(ParamWitness::TLevel {
                    span: candidate,
                    inner: Box::new(inner),
                })),
                None => Ok(None),
            }
        },
    )?;
    match found {
        Some(w) => Ok(Some(w)),
        None if tried > budget => Err(EquivError::FuelExhausted),
        None => Ok(None),
    }
}

/// Depth-first enumeration of partial injective matchings between two name
/// lists, leaving each left name unmatched before trying its pairings, so
/// smaller matchings are visited first along each branch.
#[allow(clippy::too_many_arguments)]
fn search_matchings<F>(
    idx: usize,
    fresh_left: &[Name],
    fresh_right: &[Name],
    used: &mut Vec<bool>,
    matching: &mut Vec<(Name, Name)>,
    tried: &mut u32,
    budget: u32,
    test: &mut F,
) -> Result<Option<ParamWitness>, EquivError>
where
    F: FnMut(&[(Name, Name)]) -> Result<Option<ParamWitness>, EquivError>,
{
    if *tried > budget {
        return Ok(None);
    }
    if idx == fresh_left.len() {
        *tried += 1;
        return test(matching);
    }
    let found = search_matchings(
        idx + 1,
        fresh_left,
        fresh_right,
        used,
        matching,
        tried,
        budget,
        test,
    )?;
    if found.is_some() {
        return Ok(found);
    }
    for slot in 0..fresh_right.len() {
        if used[slot] {
            continue;
        }
        used[slot] = true;
        matching.push((fresh_left[idx], fresh_right[slot]));
        let found = search_matchings(
            idx + 1,
            fresh_left,
            fresh_right,
            used,
            matching,
            tried,
            budget,
            test,
        )?;
        matching.pop();
        used[slot] = false;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Re-checks a computation-level witness: the recorded span must connect the
/// result worlds, be reachable from the ambient span by the inclusion
/// parametric square, and relate the payloads.
pub fn param_verify_t(
    span: &Span,
    left: &TValue,
    right: &TValue,
    ty: &Type,
    witness: &ParamWitness,
    fuel: u32,
) -> Result<bool, EquivError> {
    match (witness, left, right) {
        (ParamWitness::Bottom, TValue::Bot, TValue::Bot) => Ok(true),
        (ParamWitness::Bottom, _, _) => Ok(false),
        (
            ParamWitness::TLevel { span: s1, inner },
            TValue::Done { world: w1, value: a },
            TValue::Done {
                world: w1p,
                value: ap,
            },
        ) => {
            if s1.left() != w1 || s1.right() != w1p {
                return Ok(false);
            }
            if !span.left().is_subset(w1) || !span.right().is_subset(w1p) {
                return Ok(false);
            }
            let incl_l = Injection::inclusion(span.left(), w1)?;
            let incl_r = Injection::inclusion(span.right(), w1p)?;
            if check_parametric_square(&incl_l, &incl_r, span, s1)?.is_none() {
                return Ok(false);
            }
            param_verify(s1, a, ap, ty, inner, fuel)
        }
        _ => Ok(false),
    }
}

/// The symmetric witness: relates the values in the opposite order over the
/// reversed span.
pub fn param_reverse(witness: &ParamWitness) -> ParamWitness {
    match witness {
        ParamWitness::Ground => ParamWitness::Ground,
        ParamWitness::Table => ParamWitness::Table,
        ParamWitness::Bottom => ParamWitness::Bottom,
        ParamWitness::TLevel { span, inner } => ParamWitness::TLevel {
            span: span.reversed(),
            inner: Box::new(param_reverse(inner)),
        },
    }
}

/// Composes witnesses along composable spans: the recorded spans compose by
/// span composition, the ground tokens compose by kind. The caller supplies
/// witnesses whose middle world and middle value agree; composition of
/// mismatched kinds is rejected.
pub fn param_compose(
    left: &ParamWitness,
    right: &ParamWitness,
) -> Result<ParamWitness, EquivError> {
    match (left, right) {
        (ParamWitness::Ground, ParamWitness::Ground) => Ok(ParamWitness::Ground),
        (ParamWitness::Table, ParamWitness::Table) => Ok(ParamWitness::Table),
        (ParamWitness::Bottom, ParamWitness::Bottom) => Ok(ParamWitness::Bottom),
        (
            ParamWitness::TLevel { span: s1, inner: i1 },
            ParamWitness::TLevel { span: s2, inner: i2 },
        ) => {
            let span = s1.compose(s2).map_err(|_| {
                EquivError::MiddleMismatch(format!(
                    "witness spans do not share a middle world: {} vs {}",
                    s1.right(),
                    s2.left()
                ))
            })?;
            let inner = param_compose(i1, i2)?;
            Ok(ParamWitness::TLevel {
                span,
                inner: Box::new(inner),
            })
        }
        _ => Err(EquivError::MiddleMismatch(
            "witness kinds do not compose".to_string(),
        )),
    }
}

/// Robustness sweep: extends the witness span by parametric squares that add
/// common fresh pairs and one-sided garbage, transports the payloads along
/// the world inclusions, and re-checks the relation there. The pullback
/// condition built into parametric squares guarantees no old unlinked name
/// (such as an encapsulated private name) ever joins a low point.
pub fn sweep_extensions(
    left: &TValue,
    right: &TValue,
    ty: &Type,
    witness: &ParamWitness,
    budget: u32,
    fuel: u32,
) -> Result<bool, EquivError> {
    let (s1, a, ap) = match (witness, left, right) {
        (ParamWitness::Bottom, _, _) => return Ok(true),
        (
            ParamWitness::TLevel { span, .. },
            TValue::Done { value: a, .. },
            TValue::Done { value: ap, .. },
        ) => (span, a, ap),
        _ => return Ok(false),
    };

    let shapes: &[(u32, u32, u32)] = &[
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 1, 1),
        (2, 0, 0),
        (2, 1, 0),
        (2, 0, 1),
        (3, 2, 2),
    ];
    for &(common, garbage_l, garbage_r) in shapes.iter().take(budget.max(1) as usize) {
        let mut left_world = s1.left().clone();
        let mut right_world = s1.right().clone();
        let mut pairs: Vec<(Name, Name)> = s1.pairs().collect();

        let mut next_l = left_world.next_fresh();
        let mut next_r = right_world.next_fresh();
        for _ in 0..common {
            left_world = left_world.insert(next_l);
            right_world = right_world.insert(next_r);
            pairs.push((next_l, next_r));
            next_l += 1;
            next_r += 1;
        }
        for _ in 0..garbage_l {
            left_world = left_world.insert(next_l);
            next_l += 1;
        }
        for _ in 0..garbage_r {
            right_world = right_world.insert(next_r);
            next_r += 1;
        }

        let extended = Span::from_pairs(&left_world, &right_world, pairs)?;
        let u = Injection::inclusion(s1.left(), &left_world)?;
        let u_prime = Injection::inclusion(s1.right(), &right_world)?;
        debug_assert!(
            check_parametric_square(&u, &u_prime, s1, &extended)?.is_some(),
            "extension squares are parametric by construction"
        );
        let moved_left = transport(&u, a)?;
        let moved_right = transport(&u_prime, ap)?;
        if param_relate(&extended, &moved_left, &moved_right, ty, budget, fuel)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
