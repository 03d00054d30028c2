//! Spans of worlds and parametric squares.
//!
//! A span `w ← low → w′` reads as a partial bijection between `w` and `w′`:
//! the low point lists the linked pairs. Spans carry the heterogeneous
//! equality of the parametric semantics; parametric squares are the span
//! morphisms that permit consistent renaming, new links and garbage, but
//! never link an old name with a fresh one.

use crate::worlds::{
    complete_span_minimal, pullback_cospan, Injection, Name, PullbackSquare, World, WorldError,
};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// A span `left <-u- low -u'-> right`. Both legs share the domain `low`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    left_leg: Injection,
    right_leg: Injection,
}

impl Span {
    pub fn new(left_leg: Injection, right_leg: Injection) -> Result<Self, WorldError> {
        if left_leg.dom() != right_leg.dom() {
            return Err(WorldError::DomainMismatch {
                expected: left_leg.dom().clone(),
                found: right_leg.dom().clone(),
            });
        }
        Ok(Span {
            left_leg,
            right_leg,
        })
    }

    /// The identity span `w <-id- w -id-> w`, whose relation is equality.
    pub fn identity(w: &World) -> Self {
        let id = Injection::identity(w);
        Span {
            left_leg: id.clone(),
            right_leg: id,
        }
    }

    /// Builds the span whose low point carrier is the set of left-hand names
    /// of `pairs`, read as a partial bijection `left ⇀ right`.
    pub fn from_pairs(
        left: &World,
        right: &World,
        pairs: impl IntoIterator<Item = (Name, Name)>,
    ) -> Result<Self, WorldError> {
        let pairs: Vec<(Name, Name)> = pairs.into_iter().collect();
        let low: World = pairs.iter().map(|&(a, _)| a).collect();
        let left_leg = Injection::new(low.clone(), left.clone(), low.iter().map(|n| (n, n)))?;
        let right_leg = Injection::new(low, right.clone(), pairs)?;
        Ok(Span {
            left_leg,
            right_leg,
        })
    }

    pub fn left(&self) -> &World {
        self.left_leg.cod()
    }

    pub fn right(&self) -> &World {
        self.right_leg.cod()
    }

    pub fn low(&self) -> &World {
        self.left_leg.dom()
    }

    /// `u : low → left`
    pub fn left_leg(&self) -> &Injection {
        &self.left_leg
    }

    /// `u′ : low → right`
    pub fn right_leg(&self) -> &Injection {
        &self.right_leg
    }

    /// The linked pairs `(u(n), u′(n))`, in ascending order of `n`.
    pub fn pairs(&self) -> impl Iterator<Item = (Name, Name)> + '_ {
        self.low()
            .iter()
            .map(|n| (self.left_leg.apply(n).unwrap(), self.right_leg.apply(n).unwrap()))
    }

    /// The reversal `s(S)`, swapping the two legs. An involution.
    pub fn reversed(&self) -> Span {
        Span {
            left_leg: self.right_leg.clone(),
            right_leg: self.left_leg.clone(),
        }
    }

    /// Span composition `t(S, S′)`: the legs `S.u′` and `S′.u` form a co-span
    /// into the shared middle world and are completed to a pullback; the new
    /// low point projects to both old low points and the outer legs compose.
    pub fn compose(&self, other: &Span) -> Result<Span, WorldError> {
        if self.right() != other.left() {
            return Err(WorldError::MiddleMismatch {
                left: self.right().clone(),
                right: other.left().clone(),
            });
        }
        let sq = pullback_cospan(&self.right_leg, &other.left_leg)?;
        let left_leg = self.left_leg.compose(sq.left_down())?;
        let right_leg = other.right_leg.compose(sq.right_down())?;
        Ok(Span {
            left_leg,
            right_leg,
        })
    }

    /// Searches for an isomorphism `t : low → other.low` commuting with both
    /// legs. The candidate is forced: `t(n)` is determined by where the left
    /// leg sends `n`, since `other`'s left leg is injective.
    pub fn isomorphism_to(&self, other: &Span) -> Result<Option<Injection>, WorldError> {
        if self.left() != other.left() || self.right() != other.right() {
            return Err(WorldError::ShapeMismatch(format!(
                "span endpoints differ: {}<->{} vs {}<->{}",
                self.left(),
                self.right(),
                other.left(),
                other.right()
            )));
        }
        if self.low().len() != other.low().len() {
            return Ok(None);
        }
        let mut pairs = Vec::with_capacity(self.low().len());
        for n in self.low().iter() {
            match other.left_leg.preimage(self.left_leg.apply(n).unwrap()) {
                Some(m) => pairs.push((n, m)),
                None => return Ok(None),
            }
        }
        let t = match Injection::new(self.low().clone(), other.low().clone(), pairs) {
            Ok(t) => t,
            Err(_) => return Ok(None),
        };
        if !t.is_iso() {
            return Ok(None);
        }
        let left_ok = other.left_leg.compose(&t)? == self.left_leg;
        let right_ok = other.right_leg.compose(&t)? == self.right_leg;
        Ok((left_ok && right_ok).then_some(t))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-{}- {} -{}-> {}",
            self.left(), self.left_leg, self.low(), self.right_leg, self.right())
    }
}

impl Serialize for Span {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Span", 5)?;
        st.serialize_field("left", self.left())?;
        st.serialize_field("right", self.right())?;
        st.serialize_field("low", self.low())?;
        st.serialize_field("u", &self.left_leg)?;
        st.serialize_field("u_prime", &self.right_leg)?;
        st.end()
    }
}

/// A morphism of spans: injections `top : from.left → to.left` and
/// `bottom : from.right → to.right` together with the unique mediating
/// injection on low points making both constituent squares pullbacks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParametricSquare {
    pub from: Span,
    pub to: Span,
    pub top: Injection,
    pub bottom: Injection,
    pub mediating: Injection,
}

/// Decides whether `(top, bottom) : from → to` is a parametric square.
///
/// The mediating injection is forced pointwise by commutation of the top
/// square; the function then verifies commutation of the bottom square and
/// the pullback property of both. Returns `None` when no mediating morphism
/// exists or a square fails to be a pullback.
pub fn check_parametric_square(
    top: &Injection,
    bottom: &Injection,
    from: &Span,
    to: &Span,
) -> Result<Option<ParametricSquare>, WorldError> {
    if top.dom() != from.left() || top.cod() != to.left() {
        return Err(WorldError::ShapeMismatch(format!(
            "top must map {} to {}, found {} to {}",
            from.left(),
            to.left(),
            top.dom(),
            top.cod()
        )));
    }
    if bottom.dom() != from.right() || bottom.cod() != to.right() {
        return Err(WorldError::ShapeMismatch(format!(
            "bottom must map {} to {}, found {} to {}",
            from.right(),
            to.right(),
            bottom.dom(),
            bottom.cod()
        )));
    }

    let mut pairs = Vec::with_capacity(from.low().len());
    for n in from.low().iter() {
        let in_left = top.apply(from.left_leg().apply(n).unwrap()).unwrap();
        let m = match to.left_leg().preimage(in_left) {
            Some(m) => m,
            None => return Ok(None),
        };
        let in_right = bottom.apply(from.right_leg().apply(n).unwrap()).unwrap();
        if to.right_leg().apply(m) != Some(in_right) {
            return Ok(None);
        }
        pairs.push((n, m));
    }
    let mediating = match Injection::new(from.low().clone(), to.low().clone(), pairs) {
        Ok(m) => m,
        Err(_) => return Ok(None),
    };

    let top_square = PullbackSquare::new(
        top.clone(),
        from.left_leg().clone(),
        to.left_leg().clone(),
        mediating.clone(),
    )?;
    let bottom_square = PullbackSquare::new(
        bottom.clone(),
        from.right_leg().clone(),
        to.right_leg().clone(),
        mediating.clone(),
    )?;
    if !top_square.commutes() || !bottom_square.commutes() {
        return Ok(None);
    }
    if !top_square.is_pullback()? || !bottom_square.is_pullback()? {
        return Ok(None);
    }
    Ok(Some(ParametricSquare {
        from: from.clone(),
        to: to.clone(),
        top: top.clone(),
        bottom: bottom.clone(),
        mediating,
    }))
}

/// Completes a span to its canonical minimal pullback and returns the square.
/// Convenience for callers comparing heterogeneous and common-world readings.
pub fn minimal_pullback_of(span: &Span) -> Result<PullbackSquare, WorldError> {
    complete_span_minimal(span.left_leg(), span.right_leg())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(names: &[Name]) -> World {
        names.iter().copied().collect()
    }

    fn inj(dom: &[Name], cod: &[Name], pairs: &[(Name, Name)]) -> Injection {
        Injection::new(w(dom), w(cod), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn identity_span_shapes() {
        let s = Span::identity(&World::empty());
        assert!(s.left().is_empty() && s.right().is_empty() && s.low().is_empty());

        let s = Span::identity(&w(&[0]));
        assert_eq!(s.left(), &w(&[0]));
        assert_eq!(s.right(), &w(&[0]));
        assert_eq!(s.low(), &w(&[0]));
        assert!(s.left_leg().is_inclusion() && s.right_leg().is_inclusion());
        assert_eq!(s.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn reversal_is_an_involution() {
        let s = Span::new(
            inj(&[0], &[0, 1], &[(0, 1)]),
            inj(&[0], &[5], &[(0, 5)]),
        )
        .unwrap();
        assert_eq!(s.reversed().reversed(), s);
        assert_eq!(s.reversed().left(), s.right());

        let id = Span::identity(&w(&[0, 2]));
        assert_eq!(id.reversed(), id);

        let empty_low = Span::new(
            Injection::new(World::empty(), w(&[0]), []).unwrap(),
            Injection::identity(&World::empty()),
        )
        .unwrap();
        let rev = empty_low.reversed();
        assert_eq!(rev.left(), &World::empty());
        assert_eq!(rev.right(), &w(&[0]));
    }

    #[test]
    fn compose_with_identity_is_isomorphic() {
        let s = Span::new(
            inj(&[0], &[0, 1], &[(0, 1)]),
            inj(&[0], &[3, 4], &[(0, 3)]),
        )
        .unwrap();
        let t = s.compose(&Span::identity(s.right())).unwrap();
        assert!(s.isomorphism_to(&t).unwrap().is_some() || t.isomorphism_to(&s).unwrap().is_some());

        let t = Span::identity(s.left()).compose(&s).unwrap();
        assert!(t.isomorphism_to(&s).unwrap().is_some());
    }

    #[test]
    fn compose_through_empty_middle() {
        let s = Span::new(
            Injection::new(World::empty(), w(&[0]), []).unwrap(),
            Injection::identity(&World::empty()),
        )
        .unwrap();
        let s2 = Span::new(
            Injection::identity(&World::empty()),
            Injection::new(World::empty(), w(&[1]), []).unwrap(),
        )
        .unwrap();
        let t = s.compose(&s2).unwrap();
        assert_eq!(t.left(), &w(&[0]));
        assert_eq!(t.right(), &w(&[1]));
        assert!(t.low().is_empty());
    }

    #[test]
    fn compose_identities() {
        let id = Span::identity(&w(&[0, 1]));
        let t = id.compose(&id).unwrap();
        assert!(t.isomorphism_to(&id).unwrap().is_some());
    }

    #[test]
    fn compose_rejects_middle_mismatch() {
        let s = Span::identity(&w(&[0]));
        let s2 = Span::identity(&w(&[1]));
        assert!(matches!(
            s.compose(&s2),
            Err(WorldError::MiddleMismatch { .. })
        ));
    }

    #[test]
    fn isomorphic_to_self() {
        let s = Span::from_pairs(&w(&[0, 1]), &w(&[0, 1]), [(0, 1), (1, 0)]).unwrap();
        let iso = s.isomorphism_to(&s).unwrap().unwrap();
        assert_eq!(iso, Injection::identity(s.low()));
    }

    #[test]
    fn low_cardinality_obstruction() {
        // same endpoints, low points of different size: no isomorphism
        let s = Span::from_pairs(&w(&[0]), &w(&[1]), []).unwrap();
        let s2 = Span::from_pairs(&w(&[0]), &w(&[1]), [(0, 1)]).unwrap();
        assert!(s.isomorphism_to(&s2).unwrap().is_none());

        // mismatched endpoints are a shape error, not a mere absence
        let s3 = Span::identity(&w(&[0]));
        assert!(matches!(
            s.isomorphism_to(&s3),
            Err(WorldError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn consistent_renaming_with_new_links_is_parametric() {
        // spans over {0,1,2} <-> {0,1,2} and {0,1,2,3} <-> {0,1,2,3};
        // the from-span links 1<->1 and 2<->2, the to-span links
        // 0<->1, 1<->2 and 3<->3.
        let from = Span::new(
            inj(&[0, 1], &[0, 1, 2], &[(0, 1), (1, 2)]),
            inj(&[0, 1], &[0, 1, 2], &[(0, 1), (1, 2)]),
        )
        .unwrap();
        let to = Span::new(
            inj(&[0, 1, 2], &[0, 1, 2, 3], &[(0, 0), (1, 1), (2, 3)]),
            inj(&[0, 1, 2], &[0, 1, 2, 3], &[(0, 1), (1, 2), (2, 3)]),
        )
        .unwrap();
        let top = inj(&[0, 1, 2], &[0, 1, 2, 3], &[(0, 2), (1, 0), (2, 1)]);
        let bottom = Injection::inclusion(&w(&[0, 1, 2]), &w(&[0, 1, 2, 3])).unwrap();
        let sq = check_parametric_square(&top, &bottom, &from, &to).unwrap();
        let sq = sq.expect("left diagram must be parametric");
        assert_eq!(sq.mediating, inj(&[0, 1], &[0, 1, 2], &[(0, 0), (1, 1)]));
    }

    #[test]
    fn linking_an_old_name_with_a_fresh_one_is_rejected() {
        // same configuration, but the to-span's left leg sends 2 -> 2,
        // linking the old name 2 with a fresh one
        let from = Span::new(
            inj(&[0, 1], &[0, 1, 2], &[(0, 1), (1, 2)]),
            inj(&[0, 1], &[0, 1, 2], &[(0, 1), (1, 2)]),
        )
        .unwrap();
        let to = Span::new(
            inj(&[0, 1, 2], &[0, 1, 2, 3], &[(0, 0), (1, 1), (2, 2)]),
            inj(&[0, 1, 2], &[0, 1, 2, 3], &[(0, 1), (1, 2), (2, 3)]),
        )
        .unwrap();
        let top = inj(&[0, 1, 2], &[0, 1, 2, 3], &[(0, 2), (1, 0), (2, 1)]);
        let bottom = Injection::inclusion(&w(&[0, 1, 2]), &w(&[0, 1, 2, 3])).unwrap();
        let sq = check_parametric_square(&top, &bottom, &from, &to).unwrap();
        assert!(sq.is_none(), "right diagram must be rejected");
    }

    #[test]
    fn identity_square_is_parametric() {
        let s = Span::from_pairs(&w(&[0, 1]), &w(&[5, 6]), [(0, 6)]).unwrap();
        let sq = check_parametric_square(
            &Injection::identity(s.left()),
            &Injection::identity(s.right()),
            &s,
            &s,
        )
        .unwrap()
        .expect("identity square is parametric");
        assert_eq!(sq.mediating, Injection::identity(s.low()));
    }

    #[test]
    fn parametric_square_rejects_shape_mismatch() {
        let s = Span::identity(&w(&[0]));
        let bad = Injection::identity(&w(&[1]));
        assert!(check_parametric_square(&bad, &bad, &s, &s).is_err());
    }
}
