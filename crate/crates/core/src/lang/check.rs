//! Syntax-directed typing for values and computations. Recursive functions
//! carry their annotations, so no unification is needed; the result type of
//! the `fun` sugar is inferred from its body.

use super::ast::{Comp, Context, Type, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable '{name}'")]
    UnboundVariable { name: String },
    #[error("type mismatch in '{term}': expected {expected}, found {actual}")]
    Mismatch {
        expected: Type,
        actual: Type,
        term: String,
    },
    #[error("'{term}' is not a function (it has type {actual})")]
    NotAFunction { actual: Type, term: String },
    #[error("equality is only defined at int and name, not {actual}, in '{term}'")]
    EqNotGround { actual: Type, term: String },
}

pub fn typecheck_value(ctx: &Context, v: &Value) -> Result<Type, TypeError> {
    match v {
        Value::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| TypeError::UnboundVariable { name: x.clone() }),
        Value::Bool(_) => Ok(Type::Bool),
        Value::Int(_) => Ok(Type::Int),
        Value::Fix {
            self_ref,
            param,
            param_ty,
            body,
        } => match self_ref {
            Some(sr) => {
                let fn_ty = Type::arrow(param_ty.clone(), sr.ret_ty.clone());
                let inner = ctx.bind(&sr.name, fn_ty.clone()).bind(param, param_ty.clone());
                let body_ty = typecheck_comp(&inner, body)?;
                if body_ty != sr.ret_ty {
                    return Err(TypeError::Mismatch {
                        expected: sr.ret_ty.clone(),
                        actual: body_ty,
                        term: v.to_string(),
                    });
                }
                Ok(fn_ty)
            }
            None => {
                let inner = ctx.bind(param, param_ty.clone());
                let body_ty = typecheck_comp(&inner, body)?;
                Ok(Type::arrow(param_ty.clone(), body_ty))
            }
        },
        Value::Plus(l, r) => {
            for side in [l, r] {
                let ty = typecheck_value(ctx, side)?;
                if ty != Type::Int {
                    return Err(TypeError::Mismatch {
                        expected: Type::Int,
                        actual: ty,
                        term: v.to_string(),
                    });
                }
            }
            Ok(Type::Int)
        }
        Value::Eq(l, r) => {
            let lt = typecheck_value(ctx, l)?;
            let rt = typecheck_value(ctx, r)?;
            if lt != rt {
                return Err(TypeError::Mismatch {
                    expected: lt,
                    actual: rt,
                    term: v.to_string(),
                });
            }
            if !matches!(lt, Type::Int | Type::Name) {
                return Err(TypeError::EqNotGround {
                    actual: lt,
                    term: v.to_string(),
                });
            }
            Ok(Type::Bool)
        }
    }
}

pub fn typecheck_comp(ctx: &Context, e: &Comp) -> Result<Type, TypeError> {
    match e {
        Comp::Ret(v) => typecheck_value(ctx, v),
        Comp::New => Ok(Type::Name),
        Comp::Let { var, bound, body } => {
            let bound_ty = typecheck_comp(ctx, bound)?;
            typecheck_comp(&ctx.bind(var, bound_ty), body)
        }
        Comp::App(callee, arg) => {
            let callee_ty = typecheck_value(ctx, callee)?;
            let (arg_expected, res) = match callee_ty {
                Type::Arrow(a, b) => (*a, *b),
                other => {
                    return Err(TypeError::NotAFunction {
                        actual: other,
                        term: callee.to_string(),
                    })
                }
            };
            let arg_ty = typecheck_value(ctx, arg)?;
            if arg_ty != arg_expected {
                return Err(TypeError::Mismatch {
                    expected: arg_expected,
                    actual: arg_ty,
                    term: arg.to_string(),
                });
            }
            Ok(res)
        }
        Comp::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let cond_ty = typecheck_value(ctx, cond)?;
            if cond_ty != Type::Bool {
                return Err(TypeError::Mismatch {
                    expected: Type::Bool,
                    actual: cond_ty,
                    term: cond.to_string(),
                });
            }
            let then_ty = typecheck_comp(ctx, then_branch)?;
            let else_ty = typecheck_comp(ctx, else_branch)?;
            if then_ty != else_ty {
                return Err(TypeError::Mismatch {
                    expected: then_ty,
                    actual: else_ty,
                    term: e.to_string(),
                });
            }
            Ok(then_ty)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse::{parse_comp, parse_value};

    fn check(src: &str) -> Result<Type, TypeError> {
        typecheck_comp(&Context::new(), &parse_comp(src).unwrap())
    }

    #[test]
    fn new_has_type_name() {
        assert_eq!(check("new").unwrap(), Type::Name);
    }

    #[test]
    fn annotated_fix_checks() {
        let v = parse_value("fix f(x:name):bool. f x").unwrap();
        assert_eq!(
            typecheck_value(&Context::new(), &v).unwrap(),
            Type::arrow(Type::Name, Type::Bool)
        );
    }

    #[test]
    fn eq_requires_same_operand_types() {
        let v = parse_value("true = 3").unwrap();
        assert!(matches!(
            typecheck_value(&Context::new(), &v),
            Err(TypeError::Mismatch { .. })
        ));
    }

    #[test]
    fn eq_rejects_bool_and_functions() {
        let v = parse_value("true = false").unwrap();
        assert!(matches!(
            typecheck_value(&Context::new(), &v),
            Err(TypeError::EqNotGround { .. })
        ));
    }

    #[test]
    fn fun_result_type_is_inferred() {
        let v = parse_value("fun (x:name). x = x").unwrap();
        assert_eq!(
            typecheck_value(&Context::new(), &v).unwrap(),
            Type::arrow(Type::Name, Type::Bool)
        );
    }

    #[test]
    fn unbound_variable_is_reported() {
        assert!(matches!(
            check("ghost"),
            Err(TypeError::UnboundVariable { .. })
        ));
    }

    #[test]
    fn let_threads_types() {
        assert_eq!(check("let x = new in let y = new in x = y").unwrap(), Type::Bool);
        assert_eq!(check("let x = 1 in x + x").unwrap(), Type::Int);
    }

    #[test]
    fn branches_must_agree() {
        assert!(check("if true then 1 else false").is_err());
        assert_eq!(check("if true then 1 else 2").unwrap(), Type::Int);
    }

    #[test]
    fn application_checks_argument() {
        assert_eq!(check("(fun (x:int). x + 1) 3").unwrap(), Type::Int);
        assert!(check("(fun (x:int). x + 1) true").is_err());
        assert!(check("(fun (x:int). x) (fun (y:int). y)").is_err());
    }
}
