//! A workbench for a nu-calculus with recursion: a concrete name-supply
//! interpreter, a world-indexed interpreter built on the category of finite
//! sets and injections, and an equivalence engine that certifies program
//! equivalences with machine-checkable proof objects (co-spans, pullback
//! squares, spans and parametric squares), cross-validated by a brute-force
//! contextual-equivalence oracle.

pub mod abstract_sem;
pub mod concrete;
pub mod corpus;
pub mod equiv;
pub mod lang;
pub mod spans;
pub mod worlds;

pub use lang::{Comp, Context, Type, Value};
pub use worlds::{Injection, Name, World};
