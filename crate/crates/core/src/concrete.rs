//! The naive semantics: names are plain naturals handed out by a counter, and
//! a computation is run against an explicit supply. Recursion is fuel-bounded;
//! fuel is spent at function applications only, so the result at fuel `k` is
//! the `k`-th approximant of the least-fixpoint chain. Running out of fuel is
//! an ordinary result, not an error.

use crate::lang::{Comp, Value};
use crate::worlds::Name;
use std::rc::Rc;
use thiserror::Error;

pub type Supply = Name;

/// Raised only on ill-typed input; unreachable after typechecking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stuck term: {0}")]
pub struct StuckTerm(pub String);

#[derive(Clone, Debug, PartialEq)]
pub enum CValue {
    Int(i64),
    Bool(bool),
    Name(Name),
    Closure(Rc<CClosure>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CClosure {
    pub self_name: Option<String>,
    pub param: String,
    pub body: std::sync::Arc<Comp>,
    pub env: CEnv,
}

/// A persistent environment: binding and capture are O(1), lookup walks to
/// the innermost (shadowing) binding.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CEnv(Option<Rc<EnvNode>>);

#[derive(Debug, PartialEq)]
struct EnvNode {
    name: String,
    value: CValue,
    rest: CEnv,
}

impl CEnv {
    pub fn new() -> Self {
        CEnv(None)
    }

    pub fn bind(&self, name: &str, value: CValue) -> CEnv {
        CEnv(Some(Rc::new(EnvNode {
            name: name.to_string(),
            value,
            rest: self.clone(),
        })))
    }

    pub fn get(&self, name: &str) -> Option<&CValue> {
        let mut cursor = self;
        while let Some(node) = &cursor.0 {
            if node.name == name {
                return Some(&node.value);
            }
            cursor = &node.rest;
        }
        None
    }
}

/// Either divergence (fuel ran out) or a final supply and value.
#[derive(Clone, Debug, PartialEq)]
pub enum CResult {
    Diverge,
    Done { supply: Supply, value: CValue },
}

impl CResult {
    pub fn is_divergent(&self) -> bool {
        matches!(self, CResult::Diverge)
    }
}

pub fn eval_value(env: &CEnv, v: &Value) -> Result<CValue, StuckTerm> {
    match v {
        Value::Var(x) => env
            .get(x)
            .cloned()
            .ok_or_else(|| StuckTerm(format!("unbound variable '{x}'"))),
        Value::Bool(b) => Ok(CValue::Bool(*b)),
        Value::Int(i) => Ok(CValue::Int(*i)),
        Value::Fix {
            self_ref,
            param,
            body,
            ..
        } => Ok(CValue::Closure(Rc::new(CClosure {
            self_name: self_ref.as_ref().map(|sr| sr.name.clone()),
            param: param.clone(),
            body: std::sync::Arc::clone(body),
            env: env.clone(),
        }))),
        Value::Plus(l, r) => match (eval_value(env, l)?, eval_value(env, r)?) {
            (CValue::Int(a), CValue::Int(b)) => Ok(CValue::Int(a.wrapping_add(b))),
            _ => Err(StuckTerm(format!("'+' on non-integers in '{v}'"))),
        },
        Value::Eq(l, r) => match (eval_value(env, l)?, eval_value(env, r)?) {
            (CValue::Int(a), CValue::Int(b)) => Ok(CValue::Bool(a == b)),
            (CValue::Name(a), CValue::Name(b)) => Ok(CValue::Bool(a == b)),
            _ => Err(StuckTerm(format!("'=' on incomparable values in '{v}'"))),
        },
    }
}

pub fn eval_comp(env: &CEnv, e: &Comp, supply: Supply, fuel: u32) -> Result<CResult, StuckTerm> {
    match e {
        Comp::Ret(v) => Ok(CResult::Done {
            supply,
            value: eval_value(env, v)?,
        }),
        Comp::New => Ok(CResult::Done {
            supply: supply + 1,
            value: CValue::Name(supply),
        }),
        Comp::Let { var, bound, body } => match eval_comp(env, bound, supply, fuel)? {
            CResult::Diverge => Ok(CResult::Diverge),
            CResult::Done { supply, value } => {
                eval_comp(&env.bind(var, value), body, supply, fuel)
            }
        },
        Comp::App(callee, arg) => {
            let f = eval_value(env, callee)?;
            let a = eval_value(env, arg)?;
            apply(&f, a, supply, fuel)
        }
        Comp::If {
            cond,
            then_branch,
            else_branch,
        } => match eval_value(env, cond)? {
            CValue::Bool(true) => eval_comp(env, then_branch, supply, fuel),
            CValue::Bool(false) => eval_comp(env, else_branch, supply, fuel),
            _ => Err(StuckTerm(format!("non-boolean condition in '{e}'"))),
        },
    }
}

/// Applies a closure, spending one unit of fuel. Fuel 0 diverges.
pub fn apply(f: &CValue, arg: CValue, supply: Supply, fuel: u32) -> Result<CResult, StuckTerm> {
    let cl = match f {
        CValue::Closure(cl) => cl,
        other => return Err(StuckTerm(format!("applied a non-function: {other:?}"))),
    };
    if fuel == 0 {
        return Ok(CResult::Diverge);
    }
    let mut env = cl.env.clone();
    if let Some(fname) = &cl.self_name {
        env = env.bind(fname, f.clone());
    }
    env = env.bind(&cl.param, arg);
    eval_comp(&env, &cl.body, supply, fuel - 1)
}
