//! Brute-force contextual testing: enumerate closed boolean observations up
//! to a depth bound and execute both terms under each. The first observation
//! under which the runs disagree (one diverges and the other does not, or
//! both converge with different booleans) distinguishes the terms. The
//! oracle is sound for distinguishing and incomplete for equating: if no
//! observation disagrees the verdict is `Unknown`.
//!
//! Observations are applied via `let r = e in o r` starting from supply 0, so
//! the observation body runs after the observed term's allocations.

use super::{EquivError, Verdict};
use crate::concrete::{self, CEnv, CResult, CValue};
use crate::lang::{typecheck_value, Comp, Context, Type, Value};

const INT_PROBES: [i64; 4] = [-1, 0, 1, 2];

/// Enumerates closed observation values of type `ty -> bool` whose AST depth
/// is at most `depth`. Depth counts syntax nodes along each path; the
/// top-level function binder counts one.
pub fn enumerate_observations(ty: &Type, depth: u32) -> Vec<Value> {
    if depth == 0 {
        return Vec::new();
    }
    let ctx = Context::new()
        .bind("obs", Type::arrow(ty.clone(), Type::Bool))
        .bind("x", ty.clone());
    let mut out = Vec::new();
    for body in comps(&ctx, &Type::Bool, depth - 1) {
        out.push(Value::fix("obs", "x", ty.clone(), Type::Bool, body));
    }
    debug_assert!(out
        .iter()
        .all(|o| typecheck_value(&Context::new(), o).is_ok()));
    out
}

/// The types a let-binder may take during enumeration: the ground types plus
/// every subformula of the observed type, so functions received as arguments
/// can be applied and their results bound.
fn binder_types(ty: &Type) -> Vec<Type> {
    let mut tys = vec![Type::Int, Type::Bool, Type::Name];
    fn add_subformulas(t: &Type, out: &mut Vec<Type>) {
        if !out.contains(t) {
            out.push(t.clone());
        }
        if let Type::Arrow(a, b) = t {
            add_subformulas(a, out);
            add_subformulas(b, out);
        }
    }
    add_subformulas(ty, &mut tys);
    tys
}

fn comps(ctx: &Context, ty: &Type, depth: u32) -> Vec<Comp> {
    if depth == 0 {
        return Vec::new();
    }
    let mut out: Vec<Comp> = Vec::new();
    if *ty == Type::Name {
        out.push(Comp::New);
    }
    out.extend(values(ctx, ty, depth).into_iter().map(Comp::Ret));
    // applications of every function variable in scope with a matching result
    for (fname, fty) in ctx.iter() {
        if let Type::Arrow(arg, res) = fty {
            if **res == *ty {
                for a in values(ctx, arg, depth.saturating_sub(1)) {
                    out.push(Comp::App(Value::var(fname), a));
                }
            }
        }
    }
    if depth >= 2 {
        for cond in values(ctx, &Type::Bool, depth - 1) {
            for t in comps(ctx, ty, depth - 1) {
                for e in comps(ctx, ty, depth - 1) {
                    out.push(Comp::if_then_else(cond.clone(), t.clone(), e.clone()));
                }
            }
        }
        // a single canonical binder name per scope depth avoids alpha-duplicates
        let var = format!("b{}", ctx.iter().count());
        for bty in binder_types(observed_type(ctx)) {
            let bodies = comps(&ctx.bind(&var, bty.clone()), ty, depth - 1);
            if bodies.is_empty() {
                continue;
            }
            for bound in comps(ctx, &bty, depth - 1) {
                for body in &bodies {
                    out.push(Comp::let_in(&var, bound.clone(), body.clone()));
                }
            }
        }
    }
    out
}

/// The observed type is recorded as the parameter type of `obs` in the
/// enumeration context.
fn observed_type(ctx: &Context) -> &Type {
    match ctx.lookup("obs") {
        Some(Type::Arrow(arg, _)) => arg,
        _ => &Type::Bool,
    }
}

fn values(ctx: &Context, ty: &Type, depth: u32) -> Vec<Value> {
    if depth == 0 {
        return Vec::new();
    }
    let mut out: Vec<Value> = Vec::new();
    for (name, vty) in ctx.iter() {
        if vty == ty {
            out.push(Value::var(name));
        }
    }
    match ty {
        Type::Bool => {
            out.push(Value::Bool(true));
            out.push(Value::Bool(false));
            if depth >= 2 {
                for operand_ty in [Type::Int, Type::Name] {
                    let operands = values(ctx, &operand_ty, depth - 1);
                    for l in &operands {
                        for r in &operands {
                            out.push(Value::eq(l.clone(), r.clone()));
                        }
                    }
                }
            }
        }
        Type::Int => {
            out.extend(INT_PROBES.iter().map(|&i| Value::Int(i)));
            if depth >= 2 {
                let operands = values(ctx, &Type::Int, depth - 1);
                for l in &operands {
                    for r in &operands {
                        out.push(Value::plus(l.clone(), r.clone()));
                    }
                }
            }
        }
        Type::Name => {}
        Type::Arrow(arg, res) => {
            if depth >= 2 {
                let var = format!("a{}", ctx.iter().count());
                for body in comps(&ctx.bind(&var, (**arg).clone()), res, depth - 1) {
                    out.push(Value::fun(&var, (**arg).clone(), body));
                }
            }
        }
    }
    out
}

/// Runs `let r = e in o r` from supply 0 at the given fuel, reusing the
/// pre-computed result of `e` and the pre-built observation closure.
fn observe(result: &CResult, observation: &CValue, fuel: u32) -> Result<CResult, EquivError> {
    match result {
        CResult::Diverge => Ok(CResult::Diverge),
        CResult::Done { supply, value } => {
            concrete::apply(observation, value.clone(), *supply, fuel)
                .map_err(|e| EquivError::ShapeMismatch(e.to_string()))
        }
    }
}

fn disagree(a: &CResult, b: &CResult) -> bool {
    match (a, b) {
        (CResult::Diverge, CResult::Diverge) => false,
        (CResult::Diverge, _) | (_, CResult::Diverge) => true,
        (CResult::Done { value: va, .. }, CResult::Done { value: vb, .. }) => {
            !matches!((va, vb), (CValue::Bool(x), CValue::Bool(y)) if x == y)
        }
    }
}

/// Enumerates observations of type `ty -> bool` up to `depth` and compares
/// the two terms under each. Any disagreement distinguishes; exhaustion of
/// the enumeration is `Unknown`.
pub fn oracle_equiv(
    left: &Comp,
    right: &Comp,
    ty: &Type,
    depth: u32,
    fuel: u32,
) -> Result<Verdict, EquivError> {
    let observations = enumerate_observations(ty, depth);
    oracle_equiv_with(left, right, &observations, fuel)
}

/// As [`oracle_equiv`], against a pre-enumerated observation list. Useful
/// when many pairs share one type.
pub fn oracle_equiv_with(
    left: &Comp,
    right: &Comp,
    observations: &[Value],
    fuel: u32,
) -> Result<Verdict, EquivError> {
    let run = |e: &Comp| -> Result<CResult, EquivError> {
        concrete::eval_comp(&CEnv::new(), e, 0, fuel)
            .map_err(|err| EquivError::ShapeMismatch(err.to_string()))
    };
    let left_result = run(left)?;
    let right_result = run(right)?;

    for o in observations {
        let closure = concrete::eval_value(&CEnv::new(), o)
            .map_err(|e| EquivError::ShapeMismatch(e.to_string()))?;
        let la = observe(&left_result, &closure, fuel)?;
        let ra = observe(&right_result, &closure, fuel)?;
        if disagree(&la, &ra) {
            return Ok(Verdict::Distinguished(o.clone()));
        }
    }
    Ok(Verdict::Unknown(format!(
        "no distinguishing observation among {} candidates",
        observations.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_comp;

    #[test]
    fn booleans_are_distinguished_by_the_identity_observation() {
        let t = parse_comp("true").unwrap();
        let f = parse_comp("false").unwrap();
        match oracle_equiv(&t, &f, &Type::Bool, 2, 50).unwrap() {
            Verdict::Distinguished(o) => {
                assert_eq!(o.to_string(), "fix obs(x:bool):bool. x");
            }
            other => panic!("expected a distinguishing observation, got {other:?}"),
        }
    }

    #[test]
    fn drop_pair_is_never_distinguished() {
        let l = parse_comp("let x = new in 42").unwrap();
        let r = parse_comp("42").unwrap();
        match oracle_equiv(&l, &r, &Type::Int, 4, 200).unwrap() {
            Verdict::Unknown(_) => {}
            other => panic!("drop pair must not be distinguished, got {other:?}"),
        }
    }

    #[test]
    fn private_name_pair_is_never_distinguished() {
        let l = parse_comp("let n = new in fun (x:name). x = n").unwrap();
        let r = parse_comp("fun (x:name). false").unwrap();
        let ty = Type::arrow(Type::Name, Type::Bool);
        match oracle_equiv(&l, &r, &ty, 4, 200).unwrap() {
            Verdict::Unknown(_) => {}
            other => panic!("private name pair must not be distinguished, got {other:?}"),
        }
    }

    #[test]
    fn observable_function_difference_is_found() {
        let l = parse_comp("fun (x:name). true").unwrap();
        let r = parse_comp("fun (x:name). false").unwrap();
        let ty = Type::arrow(Type::Name, Type::Bool);
        match oracle_equiv(&l, &r, &ty, 4, 200).unwrap() {
            Verdict::Distinguished(o) => {
                // the observation must feed the function a name it allocated
                let rendered = o.to_string();
                assert!(rendered.contains("new"), "observation: {rendered}");
            }
            other => panic!("expected distinction, got {other:?}"),
        }
    }

    #[test]
    fn divergence_mismatch_distinguishes() {
        let l = parse_comp("(fix f(x:int):int. f x) 0").unwrap();
        let r = parse_comp("7").unwrap();
        match oracle_equiv(&l, &r, &Type::Int, 2, 50).unwrap() {
            Verdict::Distinguished(_) => {}
            other => panic!("expected distinction, got {other:?}"),
        }
    }

    #[test]
    fn int_literals_distinguished_by_probe() {
        let l = parse_comp("1").unwrap();
        let r = parse_comp("2").unwrap();
        match oracle_equiv(&l, &r, &Type::Int, 3, 50).unwrap() {
            Verdict::Distinguished(o) => {
                let rendered = o.to_string();
                assert!(rendered.contains('='), "observation: {rendered}");
            }
            other => panic!("expected distinction, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_nonempty() {
        let a = enumerate_observations(&Type::Int, 3);
        let b = enumerate_observations(&Type::Int, 3);
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}
