//! The category of worlds: finite sets of natural numbers as objects and
//! injective functions as morphisms, with inclusions as a distinguished
//! subcategory.
//!
//! A world models the set of names allocated so far. Injections model
//! renaming plus weakening by unused names; identification of names is
//! impossible by injectivity. The module provides composition, pullbacks of
//! co-spans, minimal pullback completion of spans, image factorization, and
//! decidable pullback/minimality checks. Everything is finite, pure and
//! deterministic.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Names are natural numbers.
pub type Name = u32;

/// Errors raised by world and injection operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: World, found: World },
    #[error("codomain mismatch: expected {expected}, found {found}")]
    CodomainMismatch { expected: World, found: World },
    #[error("square does not commute")]
    NotCommuting,
    #[error("square is not a pullback")]
    NotAPullback,
    #[error("middle worlds do not match: {left} vs {right}")]
    MiddleMismatch { left: World, right: World },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid injection: {0}")]
    InvalidInjection(String),
}

/// A finite set of names. May be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World {
    names: BTreeSet<Name>,
}

impl World {
    pub fn empty() -> Self {
        World::default()
    }

    pub fn contains(&self, n: Name) -> bool {
        self.names.contains(&n)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Iterates names in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Name> + '_ {
        self.names.iter().copied()
    }

    pub fn max(&self) -> Option<Name> {
        self.names.iter().next_back().copied()
    }

    /// The smallest name strictly above every name in the world; 0 for the
    /// empty world. This is the `max(w) + 1` convention with `max(∅) = -1`.
    pub fn next_fresh(&self) -> Name {
        self.max().map_or(0, |m| m + 1)
    }

    pub fn insert(&self, n: Name) -> World {
        let mut names = self.names.clone();
        names.insert(n);
        World { names }
    }

    pub fn union(&self, other: &World) -> World {
        World {
            names: self.names.union(&other.names).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &World) -> World {
        World {
            names: self.names.intersection(&other.names).copied().collect(),
        }
    }

    pub fn difference(&self, other: &World) -> World {
        World {
            names: self.names.difference(&other.names).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &World) -> bool {
        self.names.is_subset(&other.names)
    }
}

impl FromIterator<Name> for World {
    fn from_iter<T: IntoIterator<Item = Name>>(iter: T) -> Self {
        World {
            names: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, n) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "}}")
    }
}

// Worlds serialize as sorted integer arrays.
impl Serialize for World {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.names.len()))?;
        for n in &self.names {
            seq.serialize_element(n)?;
        }
        seq.end()
    }
}

/// An injective function between worlds, total on its domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Injection {
    dom: World,
    cod: World,
    map: BTreeMap<Name, Name>,
}

impl Injection {
    /// Builds an injection from explicit pairs, validating totality,
    /// injectivity and codomain membership.
    pub fn new(
        dom: World,
        cod: World,
        pairs: impl IntoIterator<Item = (Name, Name)>,
    ) -> Result<Self, WorldError> {
        let map: BTreeMap<Name, Name> = pairs.into_iter().collect();
        for (&a, &b) in &map {
            if !dom.contains(a) {
                return Err(WorldError::InvalidInjection(format!(
                    "{a} is mapped but not in the domain {dom}"
                )));
            }
            if !cod.contains(b) {
                return Err(WorldError::InvalidInjection(format!(
                    "image {b} of {a} is not in the codomain {cod}"
                )));
            }
        }
        if map.len() != dom.len() {
            return Err(WorldError::InvalidInjection(format!(
                "map is not total on the domain {dom}"
            )));
        }
        let image: BTreeSet<Name> = map.values().copied().collect();
        if image.len() != map.len() {
            return Err(WorldError::InvalidInjection(
                "two names share an image".to_string(),
            ));
        }
        Ok(Injection { dom, cod, map })
    }

    pub fn identity(w: &World) -> Self {
        Injection {
            dom: w.clone(),
            cod: w.clone(),
            map: w.iter().map(|n| (n, n)).collect(),
        }
    }

    /// The subset inclusion `dom ↪ cod`; requires `dom ⊆ cod`.
    pub fn inclusion(dom: &World, cod: &World) -> Result<Self, WorldError> {
        if !dom.is_subset(cod) {
            return Err(WorldError::InvalidInjection(format!(
                "{dom} is not a subset of {cod}"
            )));
        }
        Ok(Injection {
            dom: dom.clone(),
            cod: cod.clone(),
            map: dom.iter().map(|n| (n, n)).collect(),
        })
    }

    pub fn dom(&self) -> &World {
        &self.dom
    }

    pub fn cod(&self) -> &World {
        &self.cod
    }

    pub fn apply(&self, n: Name) -> Option<Name> {
        self.map.get(&n).copied()
    }

    /// The unique `a` with `self(a) = b`, if any.
    pub fn preimage(&self, b: Name) -> Option<Name> {
        self.map
            .iter()
            .find(|(_, &img)| img == b)
            .map(|(&a, _)| a)
    }

    /// Pairs `(from, to)` in ascending order of `from`.
    pub fn pairs(&self) -> impl Iterator<Item = (Name, Name)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn image(&self) -> World {
        self.map.values().copied().collect()
    }

    /// True iff the map is the identity on its domain (a member of the
    /// subcategory of inclusions).
    pub fn is_inclusion(&self) -> bool {
        self.map.iter().all(|(&a, &b)| a == b)
    }

    /// True iff the injection is bijective onto its codomain.
    pub fn is_iso(&self) -> bool {
        self.map.len() == self.cod.len()
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Injection> {
        if !self.is_iso() {
            return None;
        }
        Some(Injection {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            map: self.map.iter().map(|(&a, &b)| (b, a)).collect(),
        })
    }

    /// Composition `self ∘ first` (apply `first`, then `self`).
    pub fn compose(&self, first: &Injection) -> Result<Injection, WorldError> {
        if first.cod != self.dom {
            return Err(WorldError::DomainMismatch {
                expected: self.dom.clone(),
                found: first.cod.clone(),
            });
        }
        let map = first
            .map
            .iter()
            .map(|(&a, &b)| (a, self.map[&b]))
            .collect();
        Ok(Injection {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map,
        })
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}->{b}")?;
        }
        write!(f, "] : {} -> {}", self.dom, self.cod)
    }
}

// Injections serialize with their endpoints and a sorted (from, to) pair array.
impl Serialize for Injection {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Injection", 3)?;
        st.serialize_field("dom", &self.dom)?;
        st.serialize_field("cod", &self.cod)?;
        let pairs: Vec<(Name, Name)> = self.pairs().collect();
        st.serialize_field("map", &pairs)?;
        st.end()
    }
}

/// A commuting square of injections
///
/// ```text
///        apex
///       x ↑ ↑ x′
///    left     right
///       u ↑ ↑ u′
///        low
/// ```
///
/// with `x ∘ u = x′ ∘ u′`. Whether the square enjoys the pullback property is
/// a separate, decidable question ([`PullbackSquare::is_pullback`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackSquare {
    left_up: Injection,
    right_up: Injection,
    left_down: Injection,
    right_down: Injection,
}

impl PullbackSquare {
    /// Validates the shape: `left_down: low → left`, `left_up: left → apex`,
    /// and symmetrically on the right, with shared low point and apex.
    /// Commutation is not enforced here; see [`PullbackSquare::commutes`].
    pub fn new(
        left_up: Injection,
        left_down: Injection,
        right_up: Injection,
        right_down: Injection,
    ) -> Result<Self, WorldError> {
        if left_down.cod() != left_up.dom() {
            return Err(WorldError::ShapeMismatch(format!(
                "left leg: {} does not match {}",
                left_down.cod(),
                left_up.dom()
            )));
        }
        if right_down.cod() != right_up.dom() {
            return Err(WorldError::ShapeMismatch(format!(
                "right leg: {} does not match {}",
                right_down.cod(),
                right_up.dom()
            )));
        }
        if left_up.cod() != right_up.cod() {
            return Err(WorldError::ShapeMismatch(format!(
                "apexes differ: {} vs {}",
                left_up.cod(),
                right_up.cod()
            )));
        }
        if left_down.dom() != right_down.dom() {
            return Err(WorldError::ShapeMismatch(format!(
                "low points differ: {} vs {}",
                left_down.dom(),
                right_down.dom()
            )));
        }
        Ok(PullbackSquare {
            left_up,
            right_up,
            left_down,
            right_down,
        })
    }

    pub fn identity(w: &World) -> Self {
        let id = Injection::identity(w);
        PullbackSquare {
            left_up: id.clone(),
            right_up: id.clone(),
            left_down: id.clone(),
            right_down: id,
        }
    }

    pub fn low(&self) -> &World {
        self.left_down.dom()
    }

    pub fn apex(&self) -> &World {
        self.left_up.cod()
    }

    pub fn left(&self) -> &World {
        self.left_up.dom()
    }

    pub fn right(&self) -> &World {
        self.right_up.dom()
    }

    /// `x : left → apex`
    pub fn left_up(&self) -> &Injection {
        &self.left_up
    }

    /// `x′ : right → apex`
    pub fn right_up(&self) -> &Injection {
        &self.right_up
    }

    /// `u : low → left`
    pub fn left_down(&self) -> &Injection {
        &self.left_down
    }

    /// `u′ : low → right`
    pub fn right_down(&self) -> &Injection {
        &self.right_down
    }

    /// `x ∘ u = x′ ∘ u′` as functions.
    pub fn commutes(&self) -> bool {
        let via_left = self.left_up.compose(&self.left_down);
        let via_right = self.right_up.compose(&self.right_down);
        match (via_left, via_right) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Decides the pullback property via the image-intersection criterion:
    /// the square is a pullback iff `x(left) ∩ x′(right) = x(u(low))`.
    /// For injective legs this is equivalent to the universal property.
    pub fn is_pullback(&self) -> Result<bool, WorldError> {
        if !self.commutes() {
            return Err(WorldError::NotCommuting);
        }
        let both = self.left_up.image().intersection(&self.right_up.image());
        let through_low = self
            .left_up
            .compose(&self.left_down)
            .expect("shape validated")
            .image();
        Ok(both == through_low)
    }

    /// A pullback is minimal iff the leg images jointly cover the apex:
    /// `x(left) ∪ x′(right) = apex`.
    pub fn is_minimal_pullback(&self) -> Result<bool, WorldError> {
        if !self.is_pullback()? {
            return Err(WorldError::NotAPullback);
        }
        let covered = self.left_up.image().union(&self.right_up.image());
        Ok(&covered == self.apex())
    }
}

/// Completes the co-span `f : X → Z ← Y : g` to a pullback.
///
/// The low point is realized concretely as the X-side preimage
/// `f⁻¹(fX ∩ gY) ⊆ X`, so the left leg is the identity-carrier map `n ↦ n`
/// and the right leg sends `n ↦ g⁻¹(f(n))`.
pub fn pullback_cospan(f: &Injection, g: &Injection) -> Result<PullbackSquare, WorldError> {
    if f.cod() != g.cod() {
        return Err(WorldError::CodomainMismatch {
            expected: f.cod().clone(),
            found: g.cod().clone(),
        });
    }
    let common = f.image().intersection(&g.image());
    let low: World = common.iter().map(|z| f.preimage(z).unwrap()).collect();
    let left_down = Injection::new(low.clone(), f.dom().clone(), low.iter().map(|n| (n, n)))?;
    let right_down = Injection::new(
        low.clone(),
        g.dom().clone(),
        low.iter()
            .map(|n| (n, g.preimage(f.apply(n).unwrap()).unwrap())),
    )?;
    PullbackSquare::new(f.clone(), left_down, g.clone(), right_down)
}

/// Completes the span `u : W → W1, u′ : W → W1′` to a minimal pullback with
/// the canonical choice: the left leg `x : W1 → apex` is the identity-carrier
/// inclusion, and the right leg `x′ : W1′ → apex` sends `u′(W)`-elements
/// through `u ∘ u′⁻¹` and the remaining elements of `W1′` to the smallest
/// fresh names above `max(W1)`, in ascending order.
///
/// The particular completion is a free choice; all downstream checks are
/// stable under apex isomorphism.
pub fn complete_span_minimal(
    u: &Injection,
    u_prime: &Injection,
) -> Result<PullbackSquare, WorldError> {
    if u.dom() != u_prime.dom() {
        return Err(WorldError::DomainMismatch {
            expected: u.dom().clone(),
            found: u_prime.dom().clone(),
        });
    }
    let w1 = u.cod().clone();
    let w1p = u_prime.cod().clone();
    let shared = u_prime.image();

    let mut apex = w1.clone();
    let mut next = w1.next_fresh();
    let mut right_pairs = Vec::with_capacity(w1p.len());
    for m in w1p.iter() {
        if shared.contains(m) {
            // forced through the low point: m = u′(n) goes to u(n)
            let n = u_prime.preimage(m).unwrap();
            right_pairs.push((m, u.apply(n).unwrap()));
        } else {
            apex = apex.insert(next);
            right_pairs.push((m, next));
            next += 1;
        }
    }

    let left_up = Injection::inclusion(&w1, &apex)?;
    let right_up = Injection::new(w1p, apex, right_pairs)?;
    PullbackSquare::new(left_up, u.clone(), right_up, u_prime.clone())
}

/// The two factorizations of an injection through its image and through a
/// carrier rename: `u = u1 ∘ i1` and `u = i2 ∘ u2` with `i1, i2` inclusions
/// and `u1, u2` isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Inclusion `dom ↪ M`.
    pub i1: Injection,
    /// Isomorphism `M → cod` extending `u`.
    pub u1: Injection,
    /// Corestriction `dom → image(u)`, an isomorphism.
    pub u2: Injection,
    /// Inclusion `image(u) ↪ cod`.
    pub i2: Injection,
}

/// Factors `u` both ways. For `i2` we take the inclusion `image(u) ↪ cod(u)`
/// with `u2` the corestriction; for the first factorization, `i1 = id` when
/// `u` is already an isomorphism, otherwise the domain is padded with the
/// smallest fresh names above `max(dom)` and `u1` matches them to the unhit
/// part of the codomain in ascending order.
pub fn factorize(u: &Injection) -> Factorization {
    let image = u.image();
    let u2 = Injection::new(u.dom().clone(), image.clone(), u.pairs())
        .expect("corestriction is a valid injection");
    let i2 = Injection::inclusion(&image, u.cod()).expect("image is a subset of the codomain");

    let missing: Vec<Name> = u.cod().difference(&image).iter().collect();
    let mut mid = u.dom().clone();
    let mut pairs: Vec<(Name, Name)> = u.pairs().collect();
    for (next, tgt) in (mid.next_fresh()..).zip(missing) {
        mid = mid.insert(next);
        pairs.push((next, tgt));
    }
    let i1 = Injection::inclusion(u.dom(), &mid).expect("domain is a subset of the padded carrier");
    let u1 = Injection::new(mid, u.cod().clone(), pairs).expect("padded map is a bijection");

    Factorization { i1, u1, u2, i2 }
}

/// Searches for an apex isomorphism `t : apex(a) → apex(b)` with
/// `t ∘ a.x = b.x` and `t ∘ a.x′ = b.x′`, witnessing that two (minimal)
/// pullback completions of one span agree up to iso.
pub fn apex_isomorphism(a: &PullbackSquare, b: &PullbackSquare) -> Option<Injection> {
    if a.left() != b.left() || a.right() != b.right() || a.apex().len() != b.apex().len() {
        return None;
    }
    // Forced on the leg images; for minimal pullbacks that is the whole apex.
    let mut pairs: BTreeMap<Name, Name> = BTreeMap::new();
    for n in a.left().iter() {
        let from = a.left_up().apply(n).unwrap();
        let to = b.left_up().apply(n).unwrap();
        if *pairs.entry(from).or_insert(to) != to {
            return None;
        }
    }
    for n in a.right().iter() {
        let from = a.right_up().apply(n).unwrap();
        let to = b.right_up().apply(n).unwrap();
        if *pairs.entry(from).or_insert(to) != to {
            return None;
        }
    }
    // Any garbage left over is matched in ascending order.
    let unmatched_from: Vec<Name> = a
        .apex()
        .iter()
        .filter(|n| !pairs.contains_key(n))
        .collect();
    let hit: BTreeSet<Name> = pairs.values().copied().collect();
    let unmatched_to: Vec<Name> = b.apex().iter().filter(|n| !hit.contains(n)).collect();
    if unmatched_from.len() != unmatched_to.len() {
        return None;
    }
    pairs.extend(unmatched_from.into_iter().zip(unmatched_to));
    let t = Injection::new(a.apex().clone(), b.apex().clone(), pairs).ok()?;
    if !t.is_iso() {
        return None;
    }
    let ok_left = t.compose(a.left_up()).ok()? == *b.left_up();
    let ok_right = t.compose(a.right_up()).ok()? == *b.right_up();
    (ok_left && ok_right).then_some(t)
}
