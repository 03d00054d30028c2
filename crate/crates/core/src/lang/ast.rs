//! Abstract syntax for the call-by-value language with recursive functions,
//! name generation and equality testing, stratified into values and
//! computations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Types: `int | bool | name | T -> T'`, with arrows right-associative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Int,
    Bool,
    Name,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(arg: Type, res: Type) -> Type {
        Type::Arrow(Box::new(arg), Box::new(res))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Type::Int | Type::Bool | Type::Name)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => write!(f, "int"),
            Type::Bool => write!(f, "bool"),
            Type::Name => write!(f, "name"),
            Type::Arrow(a, b) => {
                if matches!(**a, Type::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

/// The recursive part of a `fix f(x:T):T'. e` value. Absent for the
/// `fun (x:T). e` sugar, where the function name never occurs in the body
/// and the result type is inferred.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SelfRef {
    pub name: String,
    pub ret_ty: Type,
}

/// Values: variables, literals, recursive functions, and the value-level
/// operators `+` and `=`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Var(String),
    Bool(bool),
    Int(i64),
    Fix {
        self_ref: Option<SelfRef>,
        param: String,
        param_ty: Type,
        body: Arc<Comp>,
    },
    Plus(Box<Value>, Box<Value>),
    Eq(Box<Value>, Box<Value>),
}

impl Value {
    pub fn plus(l: Value, r: Value) -> Value {
        Value::Plus(Box::new(l), Box::new(r))
    }

    pub fn eq(l: Value, r: Value) -> Value {
        Value::Eq(Box::new(l), Box::new(r))
    }

    pub fn var(name: &str) -> Value {
        Value::Var(name.to_string())
    }

    /// Non-recursive function: `fun (param:param_ty). body`.
    pub fn fun(param: &str, param_ty: Type, body: Comp) -> Value {
        Value::Fix {
            self_ref: None,
            param: param.to_string(),
            param_ty,
            body: Arc::new(body),
        }
    }

    /// Recursive function: `fix name(param:param_ty):ret_ty. body`.
    pub fn fix(name: &str, param: &str, param_ty: Type, ret_ty: Type, body: Comp) -> Value {
        Value::Fix {
            self_ref: Some(SelfRef {
                name: name.to_string(),
                ret_ty,
            }),
            param: param.to_string(),
            param_ty,
            body: Arc::new(body),
        }
    }
}

/// Computations: returned values, fresh-name generation, sequencing,
/// application and conditionals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Comp {
    Ret(Value),
    New,
    Let {
        var: String,
        bound: Box<Comp>,
        body: Box<Comp>,
    },
    App(Value, Value),
    If {
        cond: Value,
        then_branch: Box<Comp>,
        else_branch: Box<Comp>,
    },
}

impl Comp {
    pub fn ret(v: Value) -> Comp {
        Comp::Ret(v)
    }

    pub fn let_in(var: &str, bound: Comp, body: Comp) -> Comp {
        Comp::Let {
            var: var.to_string(),
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    pub fn if_then_else(cond: Value, then_branch: Comp, else_branch: Comp) -> Comp {
        Comp::If {
            cond,
            then_branch: Box::new(then_branch),
            else_branch: Box::new(else_branch),
        }
    }
}

/// A typing context: an ordered map from variables to types. Binding an
/// existing variable shadows it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    /// Binds a variable, replacing any existing binding of the same name so
    /// the entries stay distinct.
    pub fn bind(&self, name: &str, ty: Type) -> Context {
        let mut entries: Vec<(String, Type)> = self
            .entries
            .iter()
            .filter(|(n, _)| n != name)
            .cloned()
            .collect();
        entries.push((name.to_string(), ty));
        Context { entries }
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }
}

pub fn free_vars_value(v: &Value) -> BTreeSet<String> {
    match v {
        Value::Var(x) => std::iter::once(x.clone()).collect(),
        Value::Bool(_) | Value::Int(_) => BTreeSet::new(),
        Value::Fix {
            self_ref,
            param,
            body,
            ..
        } => {
            let mut fv = free_vars_comp(body);
            fv.remove(param);
            if let Some(sr) = self_ref {
                fv.remove(&sr.name);
            }
            fv
        }
        Value::Plus(l, r) | Value::Eq(l, r) => {
            let mut fv = free_vars_value(l);
            fv.extend(free_vars_value(r));
            fv
        }
    }
}

pub fn free_vars_comp(e: &Comp) -> BTreeSet<String> {
    match e {
        Comp::Ret(v) => free_vars_value(v),
        Comp::New => BTreeSet::new(),
        Comp::Let { var, bound, body } => {
            let mut fv = free_vars_comp(bound);
            let mut body_fv = free_vars_comp(body);
            body_fv.remove(var);
            fv.extend(body_fv);
            fv
        }
        Comp::App(f, a) => {
            let mut fv = free_vars_value(f);
            fv.extend(free_vars_value(a));
            fv
        }
        Comp::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let mut fv = free_vars_value(cond);
            fv.extend(free_vars_comp(then_branch));
            fv.extend(free_vars_comp(else_branch));
            fv
        }
    }
}

// Pretty-printing. Values carry a precedence: 0 accepts any value, 1 is an
// equality operand, 2 is an atom (application position, `+` right operand).

fn fmt_value(v: &Value, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match v {
        Value::Var(x) => write!(f, "{x}"),
        Value::Bool(b) => write!(f, "{b}"),
        Value::Int(i) => write!(f, "{i}"),
        Value::Fix {
            self_ref,
            param,
            param_ty,
            body,
        } => {
            let parens = prec >= 1;
            if parens {
                write!(f, "(")?;
            }
            match self_ref {
                Some(sr) => write!(f, "fix {}({param}:{param_ty}):{}. {body}", sr.name, sr.ret_ty)?,
                None => write!(f, "fun ({param}:{param_ty}). {body}")?,
            }
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Value::Plus(l, r) => {
            let parens = prec >= 2;
            if parens {
                write!(f, "(")?;
            }
            fmt_value(l, 1, f)?;
            write!(f, " + ")?;
            fmt_value(r, 2, f)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Value::Eq(l, r) => {
            let parens = prec >= 1;
            if parens {
                write!(f, "(")?;
            }
            fmt_value(l, 1, f)?;
            write!(f, " = ")?;
            fmt_value(r, 1, f)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_value(self, 0, f)
    }
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comp::Ret(v) => fmt_value(v, 0, f),
            Comp::New => write!(f, "new"),
            Comp::Let { var, bound, body } => {
                if matches!(**bound, Comp::Let { .. } | Comp::If { .. }) {
                    write!(f, "let {var} = ({bound}) in {body}")
                } else {
                    write!(f, "let {var} = {bound} in {body}")
                }
            }
            Comp::App(callee, arg) => {
                fmt_value(callee, 2, f)?;
                write!(f, " ")?;
                fmt_value(arg, 2, f)
            }
            Comp::If {
                cond,
                then_branch,
                else_branch,
            } => {
                write!(f, "if ")?;
                fmt_value(cond, 0, f)?;
                write!(f, " then {then_branch} else {else_branch}")
            }
        }
    }
}
