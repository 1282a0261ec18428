//! The representation variety X = Hom(F_n, G) = G^n.
//!
//! A [`Point`] is the tuple of generator images. `sigma_x` is precomposition
//! with an endomorphism of F_n (an anti-action: `(s o t)_X = t_X o s_X`),
//! `gamma_x` is postcomposition with an automorphism of G, and [`act`] is the
//! genuine left action of Aut(F_n) x Aut(G) built from the inverse of `s`.
//! Quotients by a finite R are represented by canonical orbit
//! representatives: the lexicographically least member of the orbit.

use serde_json::{json, Value};
use thiserror::Error;

use crate::autf::{AutElement, Endomorphism};
use crate::field::{Field, FiniteField};
use crate::freegroup::Word;
use crate::groups::{AutSubgroup, Group, GroupAutomorphism, GroupError, GroupKind};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepVarError {
    #[error("word of rank {word} evaluated at a point with {point} coordinates")]
    RankMismatch { word: usize, point: usize },
    #[error("homomorphism {hom} cannot be applied to {group}")]
    UnknownHomomorphism { hom: String, group: String },
    #[error("point literal error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A tuple `(g_1, ..., g_n)`; the derived order is the lexicographic
/// coordinatewise `order_key`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<E> {
    coords: Vec<Matrix<E>>,
}

impl<E> Point<E> {
    pub fn new(coords: Vec<Matrix<E>>) -> Point<E> {
        Point { coords }
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Matrix<E>] {
        &self.coords
    }

    /// Coordinate `i`, 1-based.
    pub fn coord(&self, i: usize) -> &Matrix<E> {
        &self.coords[i - 1]
    }
}

/// Canonical member of an R-orbit together with the orbit size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitRep<E> {
    pub canonical: Point<E>,
    pub orbit_size: usize,
}

impl<F: Field> Group<F> {
    pub fn point(&self, coords: Vec<Matrix<F::Elem>>) -> Result<Point<F::Elem>, RepVarError> {
        let coords = coords.into_iter().map(|m| self.element(m)).collect::<Result<_, _>>()?;
        Ok(Point { coords })
    }

    /// Parses `;`-separated matrix literals, e.g. `[1,1;0,1];[1,0;1,1]`.
    pub fn parse_point(&self, text: &str) -> Result<Point<F::Elem>, RepVarError> {
        let mut coords = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        let bytes = text.as_bytes();
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                b'[' => depth += 1,
                b']' => {
                    if depth == 0 {
                        return Err(RepVarError::Syntax { position: i, message: "unbalanced ']'".into() });
                    }
                    depth -= 1;
                }
                b';' if depth == 0 => {
                    coords.push(self.parse_coord(&text[start..i], start)?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(RepVarError::Syntax { position: text.len(), message: "unclosed '['".into() });
        }
        if !text[start..].trim().is_empty() || coords.is_empty() {
            coords.push(self.parse_coord(&text[start..], start)?);
        }
        Ok(Point { coords })
    }

    fn parse_coord(&self, text: &str, offset: usize) -> Result<Matrix<F::Elem>, RepVarError> {
        let m = crate::matrix::parse_at(self.field(), text, offset).map_err(|e| match e {
            crate::matrix::MatrixError::Syntax { position, message } => RepVarError::Syntax { position, message },
            other => RepVarError::Group(other.into()),
        })?;
        Ok(self.element(m)?)
    }

    pub fn format_point(&self, x: &Point<F::Elem>) -> String {
        x.coords.iter().map(|g| self.format_element(g)).collect::<Vec<_>>().join(";")
    }

    pub fn point_to_json(&self, x: &Point<F::Elem>) -> Value {
        Value::Array(x.coords.iter().map(|g| self.element_to_json(g)).collect())
    }

    pub fn orbit_to_json(&self, o: &OrbitRep<F::Elem>) -> Value {
        json!({"canonical": self.point_to_json(&o.canonical), "orbit_size": o.orbit_size})
    }

    /// `w(g_1, ..., g_n)`.
    pub fn evaluate_word(&self, w: &Word, x: &Point<F::Elem>) -> Result<Matrix<F::Elem>, RepVarError> {
        if w.rank() != x.arity() {
            return Err(RepVarError::RankMismatch { word: w.rank(), point: x.arity() });
        }
        let inverses: Vec<Option<Matrix<F::Elem>>> = (1..=x.arity())
            .map(|j| w.letters().iter().any(|l| l.generator() == j && l.is_inverse()).then(|| self.inv(x.coord(j))))
            .collect();
        let mut acc = self.identity();
        for l in w.letters() {
            let g = if l.is_inverse() {
                inverses[l.generator() - 1].as_ref().expect("precomputed")
            } else {
                x.coord(l.generator())
            };
            acc = self.mul(&acc, g);
        }
        Ok(acc)
    }

    /// `x o s`: coordinate `j` is `s(f_j)` evaluated at `x`.
    pub fn sigma_x(&self, s: &Endomorphism, x: &Point<F::Elem>) -> Result<Point<F::Elem>, RepVarError> {
        if s.rank() != x.arity() {
            return Err(RepVarError::RankMismatch { word: s.rank(), point: x.arity() });
        }
        let coords = s.images().iter().map(|w| self.evaluate_word(w, x)).collect::<Result<_, _>>()?;
        Ok(Point { coords })
    }

    /// Coordinatewise `gamma`.
    pub fn gamma_x(&self, gamma: &GroupAutomorphism<F::Elem>, x: &Point<F::Elem>) -> Result<Point<F::Elem>, RepVarError> {
        let coords = x.coords.iter().map(|g| self.apply_automorphism(gamma, g)).collect::<Result<_, _>>()?;
        Ok(Point { coords })
    }

    /// Left action of `(s, gamma)`: `gamma_X(s^-1_X(x))`.
    pub fn act(
        &self,
        s: &AutElement,
        gamma: &GroupAutomorphism<F::Elem>,
        x: &Point<F::Elem>,
    ) -> Result<Point<F::Elem>, RepVarError> {
        self.gamma_x(gamma, &self.sigma_x(s.inverse(), x)?)
    }

    /// The R-orbit of `x`, reduced to its least member.
    pub fn orbit(&self, x: &Point<F::Elem>, r: &AutSubgroup<F::Elem>) -> Result<OrbitRep<F::Elem>, RepVarError> {
        let mut members = r.elements().iter().map(|gamma| self.gamma_x(gamma, x)).collect::<Result<Vec<_>, _>>()?;
        members.sort();
        members.dedup();
        let orbit_size = members.len();
        let canonical = members.swap_remove(0);
        Ok(OrbitRep { canonical, orbit_size })
    }

    /// The descended map on X//R: `orbit(s_X(canonical))`.
    pub fn sigma_on_quotient(
        &self,
        s: &AutElement,
        o: &OrbitRep<F::Elem>,
        r: &AutSubgroup<F::Elem>,
    ) -> Result<OrbitRep<F::Elem>, RepVarError> {
        self.orbit(&self.sigma_x(s.forward(), &o.canonical)?, r)
    }
}

/// Built-in group homomorphisms for `pushforward`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homomorphism {
    /// SL2 -> PSL2.
    Projection,
    /// Borel -> SL2.
    BorelInclusion,
}

impl Homomorphism {
    pub fn target<F: Field>(self, source: &Group<F>) -> Result<Group<F>, RepVarError> {
        match (self, source.kind()) {
            (Homomorphism::Projection, GroupKind::Sl2) => Ok(Group::psl2(source.field().clone())),
            (Homomorphism::BorelInclusion, GroupKind::Borel) => Ok(Group::sl2(source.field().clone())),
            _ => Err(RepVarError::UnknownHomomorphism { hom: format!("{self:?}"), group: source.descriptor() }),
        }
    }

    /// Coordinatewise image of `x`; returns the target group alongside.
    pub fn pushforward<F: Field>(
        self,
        source: &Group<F>,
        x: &Point<F::Elem>,
    ) -> Result<(Group<F>, Point<F::Elem>), RepVarError> {
        let target = self.target(source)?;
        let coords = x.coords.iter().map(|g| target.canonicalize(g.clone())).collect();
        Ok((target, Point { coords }))
    }
}

/// Default bound on the number of points `enumerate_x` will produce.
pub const DEFAULT_ENUM_BOUND: u128 = 1_000_000;

/// Iterator over all points of G^n in lexicographic order.
pub struct PointIter<E> {
    elements: Vec<Matrix<E>>,
    digits: Vec<usize>,
    done: bool,
}

impl<E: Clone> Iterator for PointIter<E> {
    type Item = Point<E>;

    fn next(&mut self) -> Option<Point<E>> {
        if self.done {
            return None;
        }
        let point = Point { coords: self.digits.iter().map(|&i| self.elements[i].clone()).collect() };
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.elements.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(point)
    }
}

impl<F: FiniteField> Group<F> {
    pub fn enumerate_x(&self, n: usize, bound: u128) -> Result<PointIter<F::Elem>, RepVarError> {
        let size = self.order().checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > bound {
            return Err(GroupError::EnumerationBound { size, bound }.into());
        }
        let elements = self.elements(bound)?;
        Ok(PointIter { done: elements.is_empty(), elements, digits: vec![0; n] })
    }

    pub fn random_point<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Point<F::Elem> {
        Point { coords: (0..n).map(|_| self.random_element(rng)).collect() }
    }
}
