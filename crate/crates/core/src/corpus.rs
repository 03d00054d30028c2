//! Deterministic generation of random well-typed terms and term pairs, for
//! property suites and the `corpus` subcommand. The generator is type-
//! directed: every emitted term typechecks by construction. Randomness comes
//! from a self-contained splitmix64 stream so that a given seed yields a
//! byte-identical corpus on every platform and toolchain.

use crate::lang::{free_vars_comp, Comp, Context, Type, Value};
use crate::worlds::{Name, World};

/// splitmix64; passes through every 64-bit state exactly once.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`; n must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    /// A small random world with names below 8.
    pub fn world(&mut self, max_size: usize) -> World {
        let size = self.below(max_size + 1);
        let mut w = World::empty();
        for _ in 0..size {
            w = w.insert(self.below(8) as Name);
        }
        w
    }
}

const INT_LITERALS: [i64; 5] = [-1, 0, 1, 2, 3];

fn vars_of<'c>(ctx: &'c Context, ty: &Type) -> Vec<&'c str> {
    ctx.iter()
        .filter(|(_, t)| *t == ty)
        .map(|(n, _)| n)
        .collect()
}

/// A random value of the given type, if one is expressible in the context.
/// Names have no literals, so a `name`-typed value needs a variable.
pub fn gen_value(rng: &mut Rng, ctx: &Context, ty: &Type, depth: u32) -> Option<Value> {
    let vars = vars_of(ctx, ty);
    match ty {
        Type::Int => {
            if depth > 0 && rng.chance(1, 3) {
                let l = gen_value(rng, ctx, &Type::Int, depth - 1)?;
                let r = gen_value(rng, ctx, &Type::Int, depth - 1)?;
                Some(Value::plus(l, r))
            } else if !vars.is_empty() && rng.bool() {
                Some(Value::var(rng.pick(&vars)))
            } else {
                Some(Value::Int(*rng.pick(&INT_LITERALS)))
            }
        }
        Type::Bool => {
            if depth > 0 && rng.chance(1, 2) {
                let operand_ty = if rng.bool() { Type::Int } else { Type::Name };
                let l = gen_value(rng, ctx, &operand_ty, depth - 1);
                let r = gen_value(rng, ctx, &operand_ty, depth - 1);
                if let (Some(l), Some(r)) = (l, r) {
                    return Some(Value::eq(l, r));
                }
                // fall through to a literal when the operand type is empty here
            }
            if !vars.is_empty() && rng.bool() {
                Some(Value::var(rng.pick(&vars)))
            } else {
                Some(Value::Bool(rng.bool()))
            }
        }
        Type::Name => {
            if vars.is_empty() {
                None
            } else {
                Some(Value::var(rng.pick(&vars)))
            }
        }
        Type::Arrow(arg, res) => {
            if !vars.is_empty() && rng.chance(1, 3) {
                return Some(Value::var(rng.pick(&vars)));
            }
            if depth == 0 {
                return None;
            }
            let param = format!("x{}", rng.below(1000));
            if rng.chance(1, 3) && res.is_ground() {
                // recursive function; a counter argument keeps most of them total
                let fname = format!("f{}", rng.below(1000));
                let inner = ctx
                    .bind(&fname, ty.clone())
                    .bind(&param, (**arg).clone());
                let body = gen_comp(rng, &inner, res, depth - 1)?;
                Some(Value::fix(&fname, &param, (**arg).clone(), (**res).clone(), body))
            } else {
                let inner = ctx.bind(&param, (**arg).clone());
                let body = gen_comp(rng, &inner, res, depth - 1)?;
                Some(Value::fun(&param, (**arg).clone(), body))
            }
        }
    }
}

/// A random computation of the given type. Total: every type is inhabited by
/// a computation at any depth (`new` covers `name`).
pub fn gen_comp(rng: &mut Rng, ctx: &Context, ty: &Type, depth: u32) -> Option<Comp> {
    if depth == 0 {
        return base_comp(rng, ctx, ty);
    }
    match rng.below(10) {
        // let with a random bound type
        0..=2 => {
            let bound_ty = match rng.below(4) {
                0 => Type::Int,
                1 => Type::Bool,
                2 => Type::Name,
                _ => Type::arrow(Type::Name, Type::Bool),
            };
            let bound = gen_comp(rng, ctx, &bound_ty, depth - 1)?;
            let var = format!("v{}", rng.below(1000));
            let body = gen_comp(rng, &ctx.bind(&var, bound_ty), ty, depth - 1)?;
            Some(Comp::let_in(&var, bound, body))
        }
        3 | 4 => {
            let cond = gen_value(rng, ctx, &Type::Bool, depth - 1)?;
            let t = gen_comp(rng, ctx, ty, depth - 1)?;
            let e = gen_comp(rng, ctx, ty, depth - 1)?;
            Some(Comp::if_then_else(cond, t, e))
        }
        5 | 6 => {
            let arg_ty = match rng.below(3) {
                0 => Type::Int,
                1 => Type::Bool,
                _ => Type::Name,
            };
            let f = gen_value(rng, ctx, &Type::arrow(arg_ty.clone(), ty.clone()), depth - 1)?;
            let a = gen_value(rng, ctx, &arg_ty, depth - 1)?;
            Some(Comp::App(f, a))
        }
        _ => base_comp(rng, ctx, ty).or_else(|| {
            if *ty == Type::Name {
                Some(Comp::New)
            } else {
                None
            }
        }),
    }
}

fn base_comp(rng: &mut Rng, ctx: &Context, ty: &Type) -> Option<Comp> {
    if *ty == Type::Name && (vars_of(ctx, ty).is_empty() || rng.chance(1, 2)) {
        return Some(Comp::New);
    }
    gen_value(rng, ctx, ty, 1).map(Comp::Ret).or_else(|| {
        if *ty == Type::Name {
            Some(Comp::New)
        } else {
            None
        }
    })
}

/// A deterministic corpus of closed, well-typed, ground-type computations.
pub fn gen_corpus(seed: u64, count: u32, depth: u32) -> Vec<(Type, Comp)> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::with_capacity(count as usize);
    while out.len() < count as usize {
        let ty = match rng.below(3) {
            0 => Type::Int,
            1 => Type::Bool,
            _ => Type::Name,
        };
        if let Some(e) = gen_comp(&mut rng, &Context::new(), &ty, depth) {
            debug_assert!(crate::lang::typecheck_comp(&Context::new(), &e).is_ok());
            out.push((ty, e));
        }
    }
    out
}

/// How the two halves of a generated pair are related.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// Identical terms.
    Same,
    /// Right side wraps the left in a dummy allocation.
    DropRewrite,
    /// Right side swaps two adjacent allocations.
    SwapRewrite,
    /// Independently generated terms of the same type.
    Independent,
}

/// A pair of closed terms of one type; rewritten pairs are contextually
/// equivalent by construction, independent pairs usually are not.
pub fn gen_pair(rng: &mut Rng, depth: u32) -> (Type, Comp, Comp, PairKind) {
    let ty = match rng.below(3) {
        0 => Type::Int,
        1 => Type::Bool,
        _ => Type::Name,
    };
    let left = loop {
        if let Some(e) = gen_comp(rng, &Context::new(), &ty, depth) {
            break e;
        }
    };
    match rng.below(8) {
        0 => (ty, left.clone(), left, PairKind::Same),
        1 => {
            let var = fresh_unused(&left);
            let right = Comp::let_in(&var, Comp::New, left.clone());
            (ty, left, right, PairKind::DropRewrite)
        }
        2 => {
            // wrap in two allocations both ways; the bound names are unused
            let (a, b) = (fresh_unused(&left), format!("{}q", fresh_unused(&left)));
            let lhs = Comp::let_in(&a, Comp::New, Comp::let_in(&b, Comp::New, left.clone()));
            let rhs = Comp::let_in(&b, Comp::New, Comp::let_in(&a, Comp::New, left));
            (ty, lhs, rhs, PairKind::SwapRewrite)
        }
        _ => {
            let right = loop {
                if let Some(e) = gen_comp(rng, &Context::new(), &ty, depth) {
                    break e;
                }
            };
            (ty, left, right, PairKind::Independent)
        }
    }
}

fn fresh_unused(e: &Comp) -> String {
    let used = free_vars_comp(e);
    let mut i = 0;
    loop {
        let candidate = format!("u{i}");
        if !used.contains(&candidate) {
            return candidate;
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::typecheck_comp;

    #[test]
    fn single_term_at_depth_one_is_small() {
        let corpus = gen_corpus(1, 1, 1);
        assert_eq!(corpus.len(), 1);
    }

    #[test]
    fn every_emitted_term_typechecks() {
        for (ty, e) in gen_corpus(7, 100, 4) {
            assert_eq!(typecheck_comp(&Context::new(), &e), Ok(ty), "term: {e}");
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = gen_corpus(42, 50, 4);
        let b = gen_corpus(42, 50, 4);
        assert_eq!(a, b);
        let rendered_a: Vec<String> = a.iter().map(|(_, e)| e.to_string()).collect();
        let rendered_b: Vec<String> = b.iter().map(|(_, e)| e.to_string()).collect();
        assert_eq!(rendered_a, rendered_b);
    }

    #[test]
    fn pairs_typecheck_and_cover_kinds() {
        let mut rng = Rng::new(11);
        let mut kinds = std::collections::BTreeSet::new();
        for _ in 0..80 {
            let (ty, a, b, kind) = gen_pair(&mut rng, 3);
            assert_eq!(typecheck_comp(&Context::new(), &a), Ok(ty.clone()));
            assert_eq!(typecheck_comp(&Context::new(), &b), Ok(ty));
            kinds.insert(format!("{kind:?}"));
        }
        assert!(kinds.len() >= 3, "kinds seen: {kinds:?}");
    }
}
