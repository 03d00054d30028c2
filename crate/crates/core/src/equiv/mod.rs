//! Equivalence certification.
//!
//! Three routes, in decreasing order of abstraction:
//! - `direct`: evaluate both terms in the world-indexed semantics and search
//!   for a co-span proof that the results agree at a common apex
//!   ([`synth_tproof`] / [`verify_tproof`]);
//! - `parametric`: relate the results over spans, searching for a span
//!   witness whose low point is a partial bijection of the fresh names, and
//!   sweep it against parametric-square extensions ([`param_relate_t`]);
//! - `oracle`: enumerate boolean observations and execute both terms under
//!   each one. Sound for distinguishing, incomplete for equating.
//!
//! Certificates returned by the first two routes are re-verified before a
//! verdict is issued.

mod ground;
mod oracle;
mod parametric;
mod realize;
mod tproof;

pub use ground::{tabulate_closure, GroundEq};
pub use oracle::{enumerate_observations, oracle_equiv, oracle_equiv_with};
pub use parametric::{
    param_compose, param_relate, param_relate_t, param_reverse, param_verify, param_verify_t,
    ParamWitness,
};
pub use realize::{realizes_comp, realizes_value, Bounds};
pub use tproof::{synth_tproof, verify_tproof, TProof};

use crate::abstract_sem::{eval_closed, SemError};
use crate::lang::{typecheck_comp, Comp, Context, Type, TypeError, Value};
use crate::spans::Span;
use crate::worlds::{World, WorldError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("fuel exhausted while tabulating a closure")]
    FuelExhaustedDuringTabulation,
    #[error("fuel exhausted during certification")]
    FuelExhausted,
    #[error("function arguments must have ground type, found {0}")]
    HigherOrderArgument(Type),
    #[error("middle mismatch: {0}")]
    MiddleMismatch(String),
    #[error("certified type {0} is outside the supported fragment")]
    UnsupportedType(Type),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Sem(#[from] SemError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// A verifiable equivalence certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A co-span proof over the ambient world.
    Direct { world: World, proof: TProof },
    /// A span witness over the identity span of the ambient world.
    Parametric { base: Span, witness: ParamWitness },
}

/// The outcome of an equivalence check.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// The terms are equivalent, with a certificate that re-verifies.
    Equivalent(Certificate),
    /// A replayable boolean observation told the terms apart.
    Distinguished(Value),
    /// Neither a certificate nor a distinguishing observation was found
    /// within the budgets.
    Unknown(String),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMethod {
    Direct,
    Parametric,
    Oracle,
}

/// Budgets for the equivalence routes: `fuel` bounds evaluation and
/// tabulation, `depth` bounds oracle observations, `ext` bounds world
/// extensions in realizability, `budget` bounds the span search and the
/// parametric robustness sweep.
#[derive(Clone, Debug)]
pub struct Budgets {
    pub fuel: u32,
    pub depth: u32,
    pub ext: u32,
    pub budget: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            fuel: 500,
            depth: 4,
            ext: 3,
            budget: 2048,
        }
    }
}

/// Checks two closed terms of one type for contextual equivalence by the
/// requested method. Certificates are re-verified before `Equivalent` is
/// returned; a failed re-verification is reported as `Unknown`, never as a
/// silent pass.
pub fn check_equivalence(
    left: &Comp,
    right: &Comp,
    ty: &Type,
    method: CheckMethod,
    budgets: &Budgets,
) -> Result<Verdict, EquivError> {
    let ctx = Context::new();
    let lt = typecheck_comp(&ctx, left)?;
    if lt != *ty {
        return Err(EquivError::Type(TypeError::Mismatch {
            expected: ty.clone(),
            actual: lt,
            term: left.to_string(),
        }));
    }
    let rt = typecheck_comp(&ctx, right)?;
    if rt != *ty {
        return Err(EquivError::Type(TypeError::Mismatch {
            expected: ty.clone(),
            actual: rt,
            term: right.to_string(),
        }));
    }

    match method {
        CheckMethod::Direct => {
            let world = World::empty();
            let tv_l = eval_closed(&world, left, budgets.fuel)?;
            let tv_r = eval_closed(&world, right, budgets.fuel)?;
            match synth_tproof(&world, &tv_l, &tv_r, ty, budgets.fuel)? {
                Some(proof) => {
                    if verify_tproof(&world, &tv_l, &tv_r, &proof, ty, budgets.fuel)? {
                        Ok(Verdict::Equivalent(Certificate::Direct { world, proof }))
                    } else {
                        Ok(Verdict::Unknown(
                            "synthesized co-span proof failed re-verification".to_string(),
                        ))
                    }
                }
                None => Ok(Verdict::Unknown(
                    "no co-span proof found at the common world".to_string(),
                )),
            }
        }
        CheckMethod::Parametric => {
            let world = World::empty();
            let base = Span::identity(&world);
            let tv_l = eval_closed(&world, left, budgets.fuel)?;
            let tv_r = eval_closed(&world, right, budgets.fuel)?;
            match param_relate_t(&base, &tv_l, &tv_r, ty, budgets.budget, budgets.fuel) {
                Ok(Some(witness)) => {
                    let verified =
                        param_verify_t(&base, &tv_l, &tv_r, ty, &witness, budgets.fuel)?;
                    let robust = parametric::sweep_extensions(
                        &tv_l,
                        &tv_r,
                        ty,
                        &witness,
                        budgets.budget,
                        budgets.fuel,
                    )?;
                    if verified && robust {
                        Ok(Verdict::Equivalent(Certificate::Parametric { base, witness }))
                    } else if !verified {
                        Ok(Verdict::Unknown(
                            "span witness failed re-verification".to_string(),
                        ))
                    } else {
                        Ok(Verdict::Unknown(
                            "span witness is not stable under parametric extensions".to_string(),
                        ))
                    }
                }
                Ok(None) => Ok(Verdict::Unknown("no span witness found".to_string())),
                Err(EquivError::FuelExhausted) => {
                    Ok(Verdict::Unknown("span search budget exhausted".to_string()))
                }
                Err(e) => Err(e),
            }
        }
        CheckMethod::Oracle => oracle_equiv(left, right, ty, budgets.depth, budgets.fuel),
    }
}
