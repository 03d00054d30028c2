//! Type-directed equality evidence at the certified fragment
//! {int, bool, name, name -> bool}. At the three base types the evidence is
//! the shared value itself (equality is proof-irrelevant there); at
//! `name -> bool` it is the shared truth table over an ambient world,
//! obtained by fuel-bounded application of the closure to every name.

use super::EquivError;
use crate::abstract_sem::{apply, transport, AClosure, AValue, TValue};
use crate::lang::Type;
use crate::worlds::{Injection, Name, World};
use serde::Serialize;
use std::collections::BTreeMap;

/// Equality evidence for a ground-fragment payload at some ambient world.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroundEq {
    Int { value: i64 },
    Bool { value: bool },
    Name { value: Name },
    /// Truth table over the ambient world, as sorted (name, bool) rows.
    Table { rows: Vec<(Name, bool)> },
}

/// Applies a `name -> bool` closure to every name of `world`, producing its
/// truth table there. The closure must already live at `world`. Divergence
/// during tabulation aborts certification rather than silently equating.
pub fn tabulate_closure(
    cl: &AClosure,
    world: &World,
    fuel: u32,
) -> Result<BTreeMap<Name, bool>, EquivError> {
    if cl.world() != world {
        return Err(EquivError::ShapeMismatch(format!(
            "closure lives at {}, tabulated over {}",
            cl.world(),
            world
        )));
    }
    let f = AValue::Closure(std::rc::Rc::new(cl.clone()));
    let mut table = BTreeMap::new();
    for n in world.iter() {
        match apply(&f, AValue::Name(n), fuel)? {
            TValue::Bot => return Err(EquivError::FuelExhaustedDuringTabulation),
            TValue::Done { value, .. } => match value {
                AValue::Bool(b) => {
                    table.insert(n, b);
                }
                other => {
                    return Err(EquivError::ShapeMismatch(format!(
                        "tabulated closure returned {other:?}, expected a boolean"
                    )))
                }
            },
        }
    }
    Ok(table)
}

/// Transports a fragment value along `u` and compares it to the evidence.
/// For closures the comparison tabulates at the codomain of `u`.
pub fn value_matches_evidence(
    u: &Injection,
    value: &AValue,
    evidence: &GroundEq,
    ty: &Type,
    fuel: u32,
) -> Result<bool, EquivError> {
    let moved = transport(u, value)?;
    match (ty, evidence, &moved) {
        (Type::Int, GroundEq::Int { value }, AValue::Int(i)) => Ok(value == i),
        (Type::Bool, GroundEq::Bool { value }, AValue::Bool(b)) => Ok(value == b),
        (Type::Name, GroundEq::Name { value }, AValue::Name(n)) => Ok(value == n),
        (Type::Arrow(a, r), GroundEq::Table { rows }, AValue::Closure(cl))
            if **a == Type::Name && **r == Type::Bool =>
        {
            let table = tabulate_closure(cl, u.cod(), fuel)?;
            let table_rows: Vec<(Name, bool)> = table.into_iter().collect();
            Ok(table_rows == *rows)
        }
        _ => Ok(false),
    }
}

/// Derives the evidence shared by two already-transported values, if they
/// agree. `left` and `right` must both live at `world`.
pub fn common_evidence(
    world: &World,
    left: &AValue,
    right: &AValue,
    ty: &Type,
    fuel: u32,
) -> Result<Option<GroundEq>, EquivError> {
    match (ty, left, right) {
        (Type::Int, AValue::Int(a), AValue::Int(b)) => {
            Ok((a == b).then_some(GroundEq::Int { value: *a }))
        }
        (Type::Bool, AValue::Bool(a), AValue::Bool(b)) => {
            Ok((a == b).then_some(GroundEq::Bool { value: *a }))
        }
        (Type::Name, AValue::Name(a), AValue::Name(b)) => {
            Ok((a == b).then_some(GroundEq::Name { value: *a }))
        }
        (Type::Arrow(a, r), AValue::Closure(cl), AValue::Closure(cr))
            if **a == Type::Name && **r == Type::Bool =>
        {
            let tl = tabulate_closure(cl, world, fuel)?;
            let tr = tabulate_closure(cr, world, fuel)?;
            Ok((tl == tr).then(|| GroundEq::Table {
                rows: tl.into_iter().collect(),
            }))
        }
        _ => Err(EquivError::UnsupportedType(ty.clone())),
    }
}
