//! The realizability relation tying the concrete name-supply semantics to the
//! world-indexed semantics, clause by clause:
//!
//! - base values are related when equal (names as bare naturals);
//! - functions are related when, at every extension of the world and every
//!   pair of related arguments, the applications are related as computations;
//! - a concrete computation run at supply `max(w) + 1` is related to an
//!   abstract result over `w` when they diverge together, or both converge
//!   with the final supply equal to `max(w1) + 1` for the abstract result
//!   world `w1` and related payloads there.
//!
//! The universal quantifiers of the function clause are bounded: extensions
//! range over chains `w ∪ {max(w)+1, ...}` up to a length bound, integer
//! arguments over a fixed probe set, and argument types must be ground.

use super::EquivError;
use crate::abstract_sem::{self, transport, AValue, TValue};
use crate::concrete::{self, CResult, CValue};
use crate::lang::Type;
use crate::worlds::{Injection, World};

/// Bounds for the quantifiers in the function clause.
#[derive(Clone, Debug)]
pub struct Bounds {
    /// Extensions of the world range over `w`, `w ∪ {m}`, ... up to `ext`
    /// added names, where `m = max(w) + 1`.
    pub ext: u32,
    /// Fuel for running both sides.
    pub fuel: u32,
    /// Integer arguments probed at function types.
    pub int_probe: Vec<i64>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            ext: 3,
            fuel: 200,
            int_probe: vec![-1, 0, 1, 2],
        }
    }
}

/// The value-level relation at type `ty` and world `w`.
pub fn realizes_value(
    cv: &CValue,
    av: &AValue,
    ty: &Type,
    w: &World,
    bounds: &Bounds,
) -> Result<bool, EquivError> {
    match (ty, cv, av) {
        (Type::Bool, CValue::Bool(a), AValue::Bool(b)) => Ok(a == b),
        (Type::Int, CValue::Int(a), AValue::Int(b)) => Ok(a == b),
        (Type::Name, CValue::Name(a), AValue::Name(b)) => Ok(a == b),
        (Type::Arrow(arg_ty, res_ty), CValue::Closure(_), AValue::Closure(_)) => {
            if !arg_ty.is_ground() {
                return Err(EquivError::HigherOrderArgument((**arg_ty).clone()));
            }
            // extensions w1 of w: chains adding max(w)+1, max(w)+2, ...
            let mut w1 = w.clone();
            for step in 0..=bounds.ext {
                if step > 0 {
                    w1 = w1.insert(w1.next_fresh());
                }
                let incl = Injection::inclusion(w, &w1)?;
                let g = transport(&incl, av)?;
                for (carg, aarg) in related_arguments(arg_ty, &w1, bounds) {
                    let cres = concrete::apply(cv, carg, w1.next_fresh(), bounds.fuel)
                        .map_err(|e| EquivError::ShapeMismatch(e.to_string()))?;
                    let ares = abstract_sem::apply(&g, aarg, bounds.fuel)?;
                    if !realizes_comp(&cres, &ares, res_ty, &w1, bounds)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        _ => Ok(false),
    }
}

/// The computation-level relation over `w`: `cres` must be the result of the
/// concrete run at supply `max(w) + 1`.
pub fn realizes_comp(
    cres: &CResult,
    ares: &TValue,
    ty: &Type,
    w: &World,
    bounds: &Bounds,
) -> Result<bool, EquivError> {
    match (cres, ares) {
        (CResult::Diverge, TValue::Bot) => Ok(true),
        (CResult::Diverge, _) | (_, TValue::Bot) => Ok(false),
        (
            CResult::Done { supply, value },
            TValue::Done {
                world: w1,
                value: av,
            },
        ) => {
            if !w.is_subset(w1) {
                return Err(EquivError::ShapeMismatch(format!(
                    "abstract result world {w1} does not extend {w}"
                )));
            }
            if *supply != w1.next_fresh() {
                return Ok(false);
            }
            realizes_value(value, av, ty, w1, bounds)
        }
    }
}

/// All related argument pairs at a ground type and world: equal names drawn
/// from the world, both booleans, probed integers.
fn related_arguments(ty: &Type, w1: &World, bounds: &Bounds) -> Vec<(CValue, AValue)> {
    match ty {
        Type::Name => w1
            .iter()
            .map(|n| (CValue::Name(n), AValue::Name(n)))
            .collect(),
        Type::Bool => vec![
            (CValue::Bool(false), AValue::Bool(false)),
            (CValue::Bool(true), AValue::Bool(true)),
        ],
        Type::Int => bounds
            .int_probe
            .iter()
            .map(|&i| (CValue::Int(i), AValue::Int(i)))
            .collect(),
        Type::Arrow(..) => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstract_sem::{eval_closed, AEnv};
    use crate::concrete::{eval_comp as eval_concrete, CEnv};
    use crate::lang::parse_comp;
    use crate::worlds::Name;

    fn w(names: &[Name]) -> World {
        names.iter().copied().collect()
    }

    /// Runs a closed term both ways at world `w` and checks the T-clause.
    fn realizes_term(src: &str, ty: &Type, world: &World, bounds: &Bounds) -> bool {
        let e = parse_comp(src).unwrap();
        let cres = eval_concrete(&CEnv::new(), &e, world.next_fresh(), bounds.fuel).unwrap();
        let ares = eval_closed(world, &e, bounds.fuel).unwrap();
        realizes_comp(&cres, &ares, ty, world, bounds).unwrap()
    }

    #[test]
    fn new_realizes_at_the_empty_world() {
        assert!(realizes_term("new", &Type::Name, &World::empty(), &Bounds::default()));
    }

    #[test]
    fn booleans_relate_by_equality() {
        let b = Bounds::default();
        assert!(realizes_value(
            &CValue::Bool(true),
            &AValue::Bool(true),
            &Type::Bool,
            &w(&[0, 3]),
            &b
        )
        .unwrap());
        assert!(!realizes_value(
            &CValue::Bool(true),
            &AValue::Bool(false),
            &Type::Bool,
            &w(&[0, 3]),
            &b
        )
        .unwrap());
    }

    #[test]
    fn reflexive_name_test_realizes_at_function_type() {
        let e = parse_comp("fun (x:name). x = x").unwrap();
        let cres = eval_concrete(&CEnv::new(), &e, 0, 100).unwrap();
        let ares = eval_closed(&World::empty(), &e, 100).unwrap();
        let (cv, av) = match (cres, ares) {
            (CResult::Done { value: cv, .. }, TValue::Done { value: av, .. }) => (cv, av),
            other => panic!("unexpected results: {other:?}"),
        };
        let bounds = Bounds {
            ext: 3,
            ..Bounds::default()
        };
        assert!(realizes_value(
            &cv,
            &av,
            &Type::arrow(Type::Name, Type::Bool),
            &World::empty(),
            &bounds
        )
        .unwrap());
    }

    #[test]
    fn higher_order_arguments_are_rejected() {
        let e = parse_comp("fun (g:name -> bool). g").unwrap();
        let cres = eval_concrete(&CEnv::new(), &e, 0, 100).unwrap();
        let ares = eval_comp_empty(&e);
        let (cv, av) = match (cres, ares) {
            (CResult::Done { value: cv, .. }, TValue::Done { value: av, .. }) => (cv, av),
            other => panic!("unexpected results: {other:?}"),
        };
        let arrow = Type::arrow(Type::Name, Type::Bool);
        let ty = Type::arrow(arrow.clone(), arrow);
        assert_eq!(
            realizes_value(&cv, &av, &ty, &World::empty(), &Bounds::default()),
            Err(EquivError::HigherOrderArgument(Type::arrow(
                Type::Name,
                Type::Bool
            )))
        );
    }

    fn eval_comp_empty(e: &crate::lang::Comp) -> TValue {
        abstract_sem::eval_comp(&AEnv::empty(World::empty()), e, 100).unwrap()
    }

    #[test]
    fn divergence_must_match() {
        let loops = "(fix f(x:int):int. f x) 0";
        assert!(realizes_term(loops, &Type::Int, &World::empty(), &Bounds::default()));

        // a diverging concrete result against a converging abstract one fails
        let b = Bounds::default();
        let ares = TValue::Done {
            world: World::empty(),
            value: AValue::Int(3),
        };
        assert!(!realizes_comp(&CResult::Diverge, &ares, &Type::Int, &World::empty(), &b).unwrap());
    }

    #[test]
    fn supply_alignment_is_checked() {
        let b = Bounds::default();
        // abstract says one allocation, concrete supply says two
        let cres = CResult::Done {
            supply: 2,
            value: CValue::Name(0),
        };
        let ares = TValue::Done {
            world: w(&[0]),
            value: AValue::Name(0),
        };
        assert!(!realizes_comp(&cres, &ares, &Type::Name, &World::empty(), &b).unwrap());
        let cres = CResult::Done {
            supply: 1,
            value: CValue::Name(0),
        };
        assert!(realizes_comp(&cres, &ares, &Type::Name, &World::empty(), &b).unwrap());
    }

    #[test]
    fn realizes_at_nonempty_world() {
        assert!(realizes_term(
            "let a = new in let b = new in a = b",
            &Type::Bool,
            &w(&[0, 4]),
            &Bounds::default()
        ));
    }
}
