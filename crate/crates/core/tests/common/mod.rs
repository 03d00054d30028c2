#![allow(dead_code)]

//! Shared generators for randomized suites: worlds, injections, co-spans and
//! spans over small name sets, all driven by the deterministic corpus RNG.

use nu_core::corpus::Rng;
use nu_core::spans::Span;
use nu_core::worlds::{Injection, Name, World};

pub fn world(names: &[Name]) -> World {
    names.iter().copied().collect()
}

/// A random world of at most `max_size` names drawn from 0..bound.
pub fn rand_world(rng: &mut Rng, max_size: usize, bound: Name) -> World {
    let size = rng.below(max_size + 1);
    let mut w = World::empty();
    for _ in 0..size {
        w = w.insert(rng.below(bound as usize) as Name);
    }
    w
}

/// A random injection into `cod`, with a random domain drawn from 0..bound.
pub fn rand_injection_into(rng: &mut Rng, cod: &World, bound: Name) -> Injection {
    let targets: Vec<Name> = cod.iter().collect();
    let dom_size = rng.below(targets.len() + 1);
    let mut chosen: Vec<Name> = Vec::new();
    let mut available = targets;
    for _ in 0..dom_size {
        let idx = rng.below(available.len());
        chosen.push(available.swap_remove(idx));
    }
    let mut dom = World::empty();
    while dom.len() < chosen.len() {
        dom = dom.insert(rng.below(bound as usize) as Name);
    }
    let pairs: Vec<(Name, Name)> = dom.iter().zip(chosen).collect();
    Injection::new(dom, cod.clone(), pairs).expect("generated pairs are injective")
}

/// A random injection out of `dom` into a fresh codomain extending its image.
pub fn rand_injection_from(rng: &mut Rng, dom: &World, bound: Name) -> Injection {
    let extra = rng.below(3);
    let mut cod = World::empty();
    let mut targets: Vec<Name> = Vec::new();
    for _ in dom.iter() {
        loop {
            let t = rng.below(bound as usize) as Name;
            if !cod.contains(t) {
                cod = cod.insert(t);
                targets.push(t);
                break;
            }
        }
    }
    for _ in 0..extra {
        cod = cod.insert(rng.below(bound as usize) as Name);
    }
    let pairs: Vec<(Name, Name)> = dom.iter().zip(targets).collect();
    Injection::new(dom.clone(), cod, pairs).expect("generated pairs are injective")
}

/// A random span between the two given worlds: a random partial bijection.
pub fn rand_span_between(rng: &mut Rng, left: &World, right: &World) -> Span {
    let lefts: Vec<Name> = left.iter().collect();
    let mut rights: Vec<Name> = right.iter().collect();
    let max_links = lefts.len().min(rights.len());
    let links = if max_links == 0 {
        0
    } else {
        rng.below(max_links + 1)
    };
    let mut pairs = Vec::new();
    let mut available_left = lefts;
    for _ in 0..links {
        let li = rng.below(available_left.len());
        let ri = rng.below(rights.len());
        pairs.push((available_left.swap_remove(li), rights.swap_remove(ri)));
    }
    Span::from_pairs(left, right, pairs).expect("generated pairs are a partial bijection")
}

/// All injective maps from `dom` (as a slice) into `cod`, in a fixed order.
pub fn all_injective_maps(dom: &[Name], cod: &World) -> Vec<Vec<(Name, Name)>> {
    fn go(
        rest: &[Name],
        cod: &World,
        used: &mut std::collections::BTreeSet<Name>,
    ) -> Vec<Vec<(Name, Name)>> {
        match rest.split_first() {
            None => vec![Vec::new()],
            Some((&a, tail)) => {
                let mut out = Vec::new();
                let targets: Vec<Name> = cod.iter().filter(|t| !used.contains(t)).collect();
                for t in targets {
                    used.insert(t);
                    for mut sub in go(tail, cod, used) {
                        sub.insert(0, (a, t));
                        out.push(sub);
                    }
                    used.remove(&t);
                }
                out
            }
        }
    }
    go(dom, cod, &mut std::collections::BTreeSet::new())
}

/// Brute-force enumeration of every minimal pullback over a span whose apex
/// is an initial segment of the naturals. Oracle for completion uniqueness.
pub fn enumerate_minimal_completions(
    u: &Injection,
    u_prime: &Injection,
) -> Vec<nu_core::worlds::PullbackSquare> {
    use nu_core::worlds::PullbackSquare;
    let size_bound = u.cod().len() + u_prime.cod().len();
    let mut found = Vec::new();
    for apex_size in 0..=size_bound {
        let apex: World = (0..apex_size as Name).collect();
        let w1: Vec<Name> = u.cod().iter().collect();
        let w1p: Vec<Name> = u_prime.cod().iter().collect();
        for x_pairs in all_injective_maps(&w1, &apex) {
            let x = Injection::new(u.cod().clone(), apex.clone(), x_pairs).unwrap();
            for xp_pairs in all_injective_maps(&w1p, &apex) {
                let xp = Injection::new(u_prime.cod().clone(), apex.clone(), xp_pairs).unwrap();
                let sq = PullbackSquare::new(x.clone(), u.clone(), xp, u_prime.clone()).unwrap();
                if sq.commutes()
                    && sq.is_pullback().unwrap()
                    && sq.is_minimal_pullback().unwrap()
                {
                    found.push(sq);
                }
            }
        }
    }
    found
}
