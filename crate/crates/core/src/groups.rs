//! Exact matrix groups: SL2, PSL2, GL_d, the upper-triangular Borel subgroup
//! of SL2 and the center {±I} of SL2, over a [`Field`].
//!
//! Elements are plain [`Matrix`] values; a [`Group`] is the context that
//! validates, multiplies and canonicalizes them. PSL2 elements are stored as
//! the SL2 lift whose first nonzero entry (reading order) is "positive" in
//! the field's sense: `1..=(p-1)/2` for F_p, `> 0` for Q.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldError, FiniteField, PrimeField, RationalField};
use crate::matrix::{self, Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("bad group descriptor {0:?}")]
    BadDescriptor(String),
    #[error("matrix of dimension {found} does not belong to a group of {expected}x{expected} matrices")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{matrix} is not an element of {group}")]
    NotInGroup { matrix: String, group: String },
    #[error("automorphism kind {kind} is not supported on {group}")]
    UnsupportedKind { kind: String, group: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("subgroup closure exceeds bound {0}")]
    ClosureExceedsBound(usize),
    #[error("enumeration of {size} elements exceeds bound {bound}")]
    EnumerationBound { size: u128, bound: u128 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Sl2,
    Psl2,
    Gl(usize),
    /// Upper-triangular matrices of SL2.
    Borel,
    /// `{I, -I}` inside SL2.
    Center,
}

impl GroupKind {
    pub fn dim(self) -> usize {
        match self {
            GroupKind::Gl(d) => d,
            _ => 2,
        }
    }

    /// Subgroups of SL2 whose elements are honest determinant-one matrices.
    pub fn is_sl2_type(self) -> bool {
        matches!(self, GroupKind::Sl2 | GroupKind::Borel | GroupKind::Center)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group<F: Field> {
    field: F,
    kind: GroupKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    ExceedsCutoff,
}

/// Automorphisms of G of the supported kinds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupAutomorphism<E> {
    /// `g -> h g h^-1`.
    Inner(Matrix<E>),
    /// `g -> (g^T)^-1`; GL_d only.
    TransposeInverse,
    /// Applied right to left; the empty list is the identity.
    Composite(Vec<GroupAutomorphism<E>>),
}

impl<E> GroupAutomorphism<E> {
    pub fn identity() -> GroupAutomorphism<E> {
        GroupAutomorphism::Composite(Vec::new())
    }
}

impl<E: fmt::Display> fmt::Display for GroupAutomorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAutomorphism::Inner(h) => write!(f, "inner:{h}"),
            GroupAutomorphism::TransposeInverse => f.write_str("transpose-inverse"),
            GroupAutomorphism::Composite(parts) if parts.is_empty() => f.write_str("id"),
            GroupAutomorphism::Composite(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" o ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// A finite subgroup R of Aut(G), listed element by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutSubgroup<E> {
    elements: Vec<GroupAutomorphism<E>>,
}

impl<E> AutSubgroup<E> {
    pub fn trivial() -> AutSubgroup<E> {
        AutSubgroup { elements: vec![GroupAutomorphism::identity()] }
    }

    pub fn elements(&self) -> &[GroupAutomorphism<E>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

impl<F: Field> Group<F> {
    pub fn new(field: F, kind: GroupKind) -> Result<Group<F>, GroupError> {
        if kind == GroupKind::Gl(0) {
            return Err(GroupError::BadDescriptor("gl:d=0".into()));
        }
        Ok(Group { field, kind })
    }

    pub fn sl2(field: F) -> Group<F> {
        Group { field, kind: GroupKind::Sl2 }
    }

    pub fn psl2(field: F) -> Group<F> {
        Group { field, kind: GroupKind::Psl2 }
    }

    pub fn gl(field: F, d: usize) -> Result<Group<F>, GroupError> {
        Group::new(field, GroupKind::Gl(d))
    }

    pub fn borel(field: F) -> Group<F> {
        Group { field, kind: GroupKind::Borel }
    }

    pub fn center(field: F) -> Group<F> {
        Group { field, kind: GroupKind::Center }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn descriptor(&self) -> String {
        let f = self.field.descriptor();
        match self.kind {
            GroupKind::Sl2 => format!("sl2:{f}"),
            GroupKind::Psl2 => format!("psl2:{f}"),
            GroupKind::Gl(d) => format!("gl:d={d},{f}"),
            GroupKind::Borel => format!("borel:{f}"),
            GroupKind::Center => format!("center:{f}"),
        }
    }

    pub fn identity(&self) -> Matrix<F::Elem> {
        matrix::identity(&self.field, self.dim())
    }

    pub fn minus_identity(&self) -> Matrix<F::Elem> {
        matrix::neg(&self.field, &self.identity())
    }

    pub fn mul(&self, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
        self.canonicalize(matrix::mul(&self.field, a, b))
    }

    pub fn inv(&self, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
        let f = &self.field;
        if self.dim() == 2 && self.kind != GroupKind::Gl(2) {
            // determinant one: adjugate
            let m = Matrix::from_fn(2, |i, j| match (i, j) {
                (0, 0) => a.get(1, 1).clone(),
                (1, 1) => a.get(0, 0).clone(),
                _ => f.neg(a.get(i, j)),
            });
            return self.canonicalize(m);
        }
        matrix::inverse(f, a).expect("group elements are invertible")
    }

    pub fn pow(&self, a: &Matrix<F::Elem>, k: i64) -> Matrix<F::Elem> {
        let mut base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn commutes(&self, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// PSL2 sign normalization; the identity map for every other kind.
    pub fn canonicalize(&self, m: Matrix<F::Elem>) -> Matrix<F::Elem> {
        if self.kind == GroupKind::Psl2 {
            psl2_canonicalize(&self.field, m)
        } else {
            m
        }
    }

    pub fn contains(&self, m: &Matrix<F::Elem>) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        let f = &self.field;
        let det = matrix::det(f, m);
        match self.kind {
            GroupKind::Gl(_) => !f.is_zero(&det),
            GroupKind::Sl2 => det == f.one(),
            GroupKind::Psl2 => det == f.one() && psl2_canonicalize(f, m.clone()) == *m,
            GroupKind::Borel => det == f.one() && f.is_zero(m.get(1, 0)),
            GroupKind::Center => *m == self.identity() || *m == self.minus_identity(),
        }
    }

    /// Validates a matrix as an element; PSL2 inputs may be either lift.
    pub fn element(&self, m: Matrix<F::Elem>) -> Result<Matrix<F::Elem>, GroupError> {
        if m.dim() != self.dim() {
            return Err(GroupError::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        let m = self.canonicalize(m);
        if self.contains(&m) {
            Ok(m)
        } else {
            Err(GroupError::NotInGroup { matrix: matrix::format(&self.field, &m), group: self.descriptor() })
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Matrix<F::Elem>, GroupError> {
        self.element(matrix::parse(&self.field, text)?)
    }

    pub fn format_element(&self, g: &Matrix<F::Elem>) -> String {
        matrix::format(&self.field, g)
    }

    pub fn element_to_json(&self, g: &Matrix<F::Elem>) -> Value {
        matrix::to_json(&self.field, g)
    }

    /// Trace of an SL2-type element; PSL2 traces are only defined up to sign.
    pub fn trace(&self, g: &Matrix<F::Elem>) -> Option<F::Elem> {
        self.kind.is_sl2_type().then(|| matrix::trace(&self.field, g))
    }

    /// Least `m >= 1` with `g^m = e`, if it is at most `cutoff`.
    pub fn element_order(&self, g: &Matrix<F::Elem>, cutoff: u64) -> ElementOrder {
        let e = self.identity();
        let mut acc = g.clone();
        for m in 1..=cutoff {
            if acc == e {
                return ElementOrder::Finite(m);
            }
            acc = self.mul(&acc, g);
        }
        ElementOrder::ExceedsCutoff
    }

    /// A generating set (for finite fields) used to tell automorphisms apart.
    pub fn probe_generators(&self) -> Vec<Matrix<F::Elem>> {
        let f = &self.field;
        let d = self.dim();
        let elementary = |i: usize, j: usize| {
            Matrix::from_fn(d, |r, c| if r == c || (r == i && c == j) { f.one() } else { f.zero() })
        };
        let two = f.from_i64(2);
        let gen_scalar = match f.modulus() {
            Some(p) => f.from_i64(PrimeField::new(p).expect("field modulus is prime").primitive_root() as i64),
            None => two,
        };
        let diag = |a: &F::Elem, b: &F::Elem| {
            Matrix::from_fn(2, |r, c| match (r, c) {
                (0, 0) => a.clone(),
                (1, 1) => b.clone(),
                _ => f.zero(),
            })
        };
        let gens = match self.kind {
            GroupKind::Sl2 | GroupKind::Psl2 => {
                let mut g = vec![elementary(0, 1), elementary(1, 0)];
                if f.modulus().is_none() {
                    g.push(diag(&gen_scalar, &f.inv(&gen_scalar).unwrap()));
                }
                g
            }
            GroupKind::Gl(_) => {
                let mut g = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            g.push(elementary(i, j));
                        }
                    }
                }
                g.push(Matrix::from_fn(d, |r, c| match (r, c) {
                    (0, 0) => gen_scalar.clone(),
                    _ if r == c => f.one(),
                    _ => f.zero(),
                }));
                g
            }
            GroupKind::Borel => vec![elementary(0, 1), diag(&gen_scalar, &f.inv(&gen_scalar).unwrap())],
            GroupKind::Center => vec![self.minus_identity()],
        };
        gens.into_iter().map(|m| self.canonicalize(m)).collect()
    }

    pub fn inner(&self, h: Matrix<F::Elem>) -> Result<GroupAutomorphism<F::Elem>, GroupError> {
        Ok(GroupAutomorphism::Inner(self.element(h)?))
    }

    pub fn transpose_inverse(&self) -> Result<GroupAutomorphism<F::Elem>, GroupError> {
        match self.kind {
            GroupKind::Gl(_) => Ok(GroupAutomorphism::TransposeInverse),
            _ => Err(GroupError::UnsupportedKind { kind: "transpose-inverse".into(), group: self.descriptor() }),
        }
    }

    /// Parses `id`, `inner:<matrix>` or `transpose-inverse`.
    pub fn parse_automorphism(&self, text: &str) -> Result<GroupAutomorphism<F::Elem>, GroupError> {
        let text = text.trim();
        if text == "id" || text == "identity" {
            Ok(GroupAutomorphism::identity())
        } else if let Some(m) = text.strip_prefix("inner:") {
            self.inner(matrix::parse_at(&self.field, m, "inner:".len())?)
        } else if text == "transpose-inverse" {
            self.transpose_inverse()
        } else {
            Err(GroupError::BadDescriptor(text.to_string()))
        }
    }

    pub fn apply_automorphism(
        &self,
        gamma: &GroupAutomorphism<F::Elem>,
        g: &Matrix<F::Elem>,
    ) -> Result<Matrix<F::Elem>, GroupError> {
        match gamma {
            GroupAutomorphism::Inner(h) => Ok(self.mul(&self.mul(h, g), &self.inv(h))),
            GroupAutomorphism::TransposeInverse => {
                self.transpose_inverse()?;
                Ok(self.inv(&g.transpose()))
            }
            GroupAutomorphism::Composite(parts) => {
                parts.iter().rev().try_fold(g.clone(), |acc, part| self.apply_automorphism(part, &acc))
            }
        }
    }

    /// Writes `gamma` as `inner(h) o TI^flag`.
    fn normal_form(&self, gamma: &GroupAutomorphism<F::Elem>) -> Result<(Matrix<F::Elem>, bool), GroupError> {
        match gamma {
            GroupAutomorphism::Inner(h) => Ok((h.clone(), false)),
            GroupAutomorphism::TransposeInverse => {
                self.transpose_inverse()?;
                Ok((self.identity(), true))
            }
            GroupAutomorphism::Composite(parts) => {
                let mut acc = (self.identity(), false);
                for part in parts {
                    acc = self.compose_normal(&acc, &self.normal_form(part)?);
                }
                Ok(acc)
            }
        }
    }

    // inner(a) TI^s inner(b) TI^t = inner(a TI^s(b)) TI^(s+t), using TI o inner(b) = inner(TI(b)) o TI.
    fn compose_normal(
        &self,
        a: &(Matrix<F::Elem>, bool),
        b: &(Matrix<F::Elem>, bool),
    ) -> (Matrix<F::Elem>, bool) {
        let hb = if a.1 { self.inv(&b.0.transpose()) } else { b.0.clone() };
        (self.mul(&a.0, &hb), a.1 ^ b.1)
    }

    fn from_normal(&self, (h, ti): (Matrix<F::Elem>, bool)) -> GroupAutomorphism<F::Elem> {
        match (h == self.identity(), ti) {
            (true, false) => GroupAutomorphism::identity(),
            (true, true) => GroupAutomorphism::TransposeInverse,
            (false, false) => GroupAutomorphism::Inner(h),
            (false, true) => {
                GroupAutomorphism::Composite(vec![GroupAutomorphism::Inner(h), GroupAutomorphism::TransposeInverse])
            }
        }
    }

    /// `a o b`, simplified to `inner(h)` or `inner(h) o transpose-inverse`.
    pub fn compose_automorphisms(
        &self,
        a: &GroupAutomorphism<F::Elem>,
        b: &GroupAutomorphism<F::Elem>,
    ) -> Result<GroupAutomorphism<F::Elem>, GroupError> {
        let na = self.normal_form(a)?;
        let nb = self.normal_form(b)?;
        Ok(self.from_normal(self.compose_normal(&na, &nb)))
    }

    pub fn automorphism_inverse(
        &self,
        gamma: &GroupAutomorphism<F::Elem>,
    ) -> Result<GroupAutomorphism<F::Elem>, GroupError> {
        let (h, ti) = self.normal_form(gamma)?;
        // (inner(h) TI^t)^-1 = TI^t inner(h^-1) = inner(TI^t(h^-1)) TI^t
        let hinv = self.inv(&h);
        let h2 = if ti { self.inv(&hinv.transpose()) } else { hinv };
        Ok(self.from_normal((h2, ti)))
    }

    fn probe_key(&self, gamma: &GroupAutomorphism<F::Elem>, probes: &[Matrix<F::Elem>]) -> Result<Vec<Matrix<F::Elem>>, GroupError> {
        probes.iter().map(|g| self.apply_automorphism(gamma, g)).collect()
    }

    /// Closure of `generators` under composition, deduplicated by the action
    /// on [`Group::probe_generators`]. Finite closure is automatically closed
    /// under inverses.
    pub fn close_subgroup(
        &self,
        generators: &[GroupAutomorphism<F::Elem>],
        bound: usize,
    ) -> Result<AutSubgroup<F::Elem>, GroupError> {
        let probes = self.probe_generators();
        let gens: Vec<_> = generators
            .iter()
            .map(|g| self.normal_form(g).map(|n| self.from_normal(n)))
            .collect::<Result<_, _>>()?;
        let identity = GroupAutomorphism::identity();
        let mut seen: HashSet<Vec<Matrix<F::Elem>>> = HashSet::new();
        seen.insert(self.probe_key(&identity, &probes)?);
        let mut elements = vec![identity];
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in &gens {
                let next = self.compose_automorphisms(g, &current)?;
                if seen.insert(self.probe_key(&next, &probes)?) {
                    if elements.len() >= bound {
                        return Err(GroupError::ClosureExceedsBound(bound));
                    }
                    elements.push(next);
                }
            }
        }
        Ok(AutSubgroup { elements })
    }

    /// `(a, d, b, -c)` for `[[a, b], [c, d]]`; lands on `x1 x2 + x3 x4 = 1`.
    pub fn sl2_to_quadric(&self, g: &Matrix<F::Elem>) -> Result<[F::Elem; 4], GroupError> {
        if !self.kind.is_sl2_type() {
            return Err(GroupError::Unsupported(format!("quadric model needs an SL2 element, got {}", self.descriptor())));
        }
        let f = &self.field;
        Ok([g.get(0, 0).clone(), g.get(1, 1).clone(), g.get(0, 1).clone(), f.neg(g.get(1, 0))])
    }

    pub fn quadric_to_sl2(&self, x: &[F::Elem; 4]) -> Result<Matrix<F::Elem>, GroupError> {
        let f = &self.field;
        let m = Matrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => x[0].clone(),
            (1, 1) => x[1].clone(),
            (0, 1) => x[2].clone(),
            _ => f.neg(&x[3]),
        });
        if !self.kind.is_sl2_type() {
            return Err(GroupError::Unsupported("quadric model needs an SL2 group".into()));
        }
        self.element(m)
    }

    pub fn to_json(&self) -> Value {
        json!({"descriptor": self.descriptor(), "modulus": self.field.modulus()})
    }
}

/// Picks the lift of `±m` whose first nonzero entry is positive.
pub fn psl2_canonicalize<F: Field>(field: &F, m: Matrix<F::Elem>) -> Matrix<F::Elem> {
    match m.entries().iter().find(|x| !field.is_zero(x)) {
        Some(x) if !field.is_positive(x) => matrix::neg(field, &m),
        _ => m,
    }
}

impl<F: FiniteField> Group<F> {
    pub fn order(&self) -> u128 {
        let q = self.field.order() as u128;
        match self.kind {
            GroupKind::Sl2 => q * (q * q - 1),
            GroupKind::Psl2 => q * (q * q - 1) / 2,
            GroupKind::Gl(d) => (0..d as u32).map(|i| q.pow(d as u32) - q.pow(i)).product(),
            GroupKind::Borel => q * (q - 1),
            GroupKind::Center => 2,
        }
    }

    /// Uniform sample. SL2 draws a uniform GL2 matrix by rejection and scales
    /// its first row by `det^-1`; every fiber of det has the same size.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix<F::Elem> {
        let f = &self.field;
        match self.kind {
            GroupKind::Sl2 | GroupKind::Psl2 => {
                let m = self.random_gl(2, rng);
                let dinv = f.inv(&matrix::det(f, &m)).expect("nonsingular");
                let scaled = Matrix::from_fn(2, |i, j| if i == 0 { f.mul(m.get(i, j), &dinv) } else { m.get(i, j).clone() });
                self.canonicalize(scaled)
            }
            GroupKind::Gl(d) => self.random_gl(d, rng),
            GroupKind::Borel => {
                let a = f.random_nonzero(rng);
                let b = f.random(rng);
                let ainv = f.inv(&a).unwrap();
                Matrix::from_fn(2, |i, j| match (i, j) {
                    (0, 0) => a.clone(),
                    (0, 1) => b.clone(),
                    (1, 1) => ainv.clone(),
                    _ => f.zero(),
                })
            }
            GroupKind::Center => {
                if rng.gen::<bool>() {
                    self.identity()
                } else {
                    self.minus_identity()
                }
            }
        }
    }

    fn random_gl<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Matrix<F::Elem> {
        let f = &self.field;
        loop {
            let m = Matrix::from_fn(d, |_, _| f.random(rng));
            if !f.is_zero(&matrix::det(f, &m)) {
                return m;
            }
        }
    }

    /// All elements, sorted by `order_key`.
    pub fn elements(&self, bound: u128) -> Result<Vec<Matrix<F::Elem>>, GroupError> {
        let size = self.order();
        if size > bound {
            return Err(GroupError::EnumerationBound { size, bound });
        }
        let f = &self.field;
        let scalars = f.elements();
        let mut out = Vec::with_capacity(size as usize);
        match self.kind {
            GroupKind::Sl2 | GroupKind::Psl2 => {
                for a in &scalars {
                    for c in &scalars {
                        if f.is_zero(a) && f.is_zero(c) {
                            continue;
                        }
                        for free in &scalars {
                            // a d - b c = 1 with one of b, d determined by the other
                            let (b, d) = if !f.is_zero(a) {
                                let b = free.clone();
                                let d = f.mul(&f.add(&f.one(), &f.mul(&b, c)), &f.inv(a).unwrap());
                                (b, d)
                            } else {
                                (f.neg(&f.inv(c).unwrap()), free.clone())
                            };
                            let m = Matrix::from_rows(vec![vec![a.clone(), b], vec![c.clone(), d]]).unwrap();
                            if self.kind == GroupKind::Sl2 || psl2_canonicalize(f, m.clone()) == m {
                                out.push(m);
                            }
                        }
                    }
                }
            }
            GroupKind::Gl(d) => {
                let q = f.order() as u128;
                let candidates = q.pow((d * d) as u32);
                if candidates > bound.saturating_mul(16) {
                    return Err(GroupError::EnumerationBound { size: candidates, bound });
                }
                for index in 0..candidates {
                    let mut rest = index;
                    let m = Matrix::from_fn(d, |_, _| {
                        let x = f.element((rest % q) as u64);
                        rest /= q;
                        x
                    });
                    if !f.is_zero(&matrix::det(f, &m)) {
                        out.push(m);
                    }
                }
            }
            GroupKind::Borel => {
                for a in scalars.iter().filter(|a| !f.is_zero(a)) {
                    for b in &scalars {
                        let ainv = f.inv(a).unwrap();
                        out.push(Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![f.zero(), ainv]]).unwrap());
                    }
                }
            }
            GroupKind::Center => out.extend([self.identity(), self.minus_identity()]),
        }
        out.sort();
        debug_assert_eq!(out.len() as u128, size);
        Ok(out)
    }
}

/// Uniform element of the upper-triangular Borel subgroup of SL2(F_p).
pub fn random_borel_element<R: Rng + ?Sized>(p: u64, rng: &mut R) -> Result<Matrix<u64>, GroupError> {
    Ok(Group::borel(PrimeField::new(p)?).random_element(rng))
}

pub type Rationals = RationalField<BigInt>;

/// A group whose field is chosen at run time from a descriptor string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyGroup {
    Finite(Group<PrimeField>),
    Rational(Group<Rationals>),
}

impl AnyGroup {
    /// Parses `sl2:p=5`, `psl2:p=7`, `gl:d=3,p=5`, `sl2:Q`, `borel:p=7`,
    /// `center:p=5`.
    pub fn parse(text: &str) -> Result<AnyGroup, GroupError> {
        let bad = || GroupError::BadDescriptor(text.to_string());
        let (name, params) = text.trim().split_once(':').ok_or_else(bad)?;
        let mut p = None;
        let mut d = None;
        let mut rational = false;
        for param in params.split(',') {
            let param = param.trim();
            if param == "Q" {
                rational = true;
            } else if let Some(v) = param.strip_prefix("p=") {
                p = Some(v.parse::<u64>().map_err(|_| bad())?);
            } else if let Some(v) = param.strip_prefix("d=") {
                d = Some(v.parse::<usize>().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        let kind = match (name, d) {
            ("sl2", None) => GroupKind::Sl2,
            ("psl2", None) => GroupKind::Psl2,
            ("gl", Some(d)) if d >= 1 => GroupKind::Gl(d),
            ("borel", None) => GroupKind::Borel,
            ("center", None) => GroupKind::Center,
            _ => return Err(bad()),
        };
        match (p, rational) {
            (Some(p), false) => Ok(AnyGroup::Finite(Group::new(PrimeField::new(p)?, kind)?)),
            (None, true) => Ok(AnyGroup::Rational(Group::new(Rationals::new(), kind)?)),
            _ => Err(bad()),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            AnyGroup::Finite(g) => g.descriptor(),
            AnyGroup::Rational(g) => g.descriptor(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn m(group: &Group<PrimeField>, text: &str) -> Matrix<u64> {
        group.parse_element(text).unwrap()
    }

    #[test]
    fn group_laws_sl2_f5() {
        let g = Group::sl2(fp(5));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = g.random_element(&mut rng);
            let b = g.random_element(&mut rng);
            assert!(g.contains(&a));
            assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
            assert_eq!(g.inv(&g.mul(&a, &b)), g.mul(&g.inv(&b), &g.inv(&a)));
        }
    }

    #[test]
    fn psl2_center_collapses() {
        let g = Group::psl2(fp(5));
        let minus = g.element(Group::sl2(fp(5)).minus_identity()).unwrap();
        assert_eq!(minus, g.identity());
        let lift1 = matrix::parse(g.field(), "[2,1;1,1]").unwrap();
        let lift2 = matrix::parse(g.field(), "[-2,-1;-1,-1]").unwrap();
        assert_eq!(g.element(lift1).unwrap(), g.element(lift2).unwrap());
    }

    #[test]
    fn psl2_canonical_rule() {
        let f = fp(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sl = Group::sl2(f);
        for _ in 0..200 {
            let a = sl.random_element(&mut rng);
            let c = psl2_canonicalize(&f, a.clone());
            assert_eq!(psl2_canonicalize(&f, c.clone()), c);
            assert_eq!(psl2_canonicalize(&f, matrix::neg(&f, &a)), c);
            assert!(c == a || c == matrix::neg(&f, &a));
            let first = *c.entries().iter().find(|&&x| x != 0).unwrap();
            assert!((1..=3).contains(&first));
        }
        assert_eq!(psl2_canonicalize(&f, sl.minus_identity()), sl.identity());
    }

    #[test]
    fn order_key_is_total_on_sl2_f3() {
        let g = Group::sl2(fp(3));
        let all = g.elements(1000).unwrap();
        assert_eq!(all.len(), 24);
        for a in &all {
            for b in &all {
                assert_eq!(a.cmp(b) == std::cmp::Ordering::Equal, a == b);
                assert_eq!(a.cmp(b), b.cmp(a).reverse());
                for c in &all {
                    if a < b && b < c {
                        assert!(a < c);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        for p in [3, 5, 7] {
            let q = p as usize;
            assert_eq!(Group::sl2(fp(p)).elements(1 << 20).unwrap().len(), q * (q * q - 1));
            assert_eq!(Group::psl2(fp(p)).elements(1 << 20).unwrap().len(), q * (q * q - 1) / 2);
            assert_eq!(Group::borel(fp(p)).elements(1 << 20).unwrap().len(), q * (q - 1));
        }
        assert_eq!(Group::gl(fp(3), 2).unwrap().elements(1 << 20).unwrap().len(), 48);
        assert_eq!(Group::center(fp(5)).elements(10).unwrap().len(), 2);
        assert!(matches!(Group::sl2(fp(101)).elements(1000), Err(GroupError::EnumerationBound { .. })));
    }

    #[test]
    fn sl2_f3_sampling_is_uniform() {
        // chi-square against the full enumeration: 23 degrees of freedom,
        // 5 sigma above the mean is 23 + 5 * sqrt(46) ~ 57.
        let g = Group::sl2(fp(3));
        let all = g.elements(1000).unwrap();
        let mut counts = std::collections::HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let samples = 100_000;
        for _ in 0..samples {
            *counts.entry(g.random_element(&mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 24);
        let expected = samples as f64 / 24.0;
        let chi2: f64 = all.iter().map(|e| (counts[e] as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 57.0, "chi2 = {chi2}");
    }

    #[test]
    fn gl_and_borel_samplers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gl = Group::gl(fp(3), 2).unwrap();
        for _ in 0..500 {
            assert_ne!(matrix::det(gl.field(), &gl.random_element(&mut rng)), 0);
        }
        let b = Group::borel(fp(7));
        let sl = Group::sl2(fp(7));
        for _ in 0..500 {
            let x = random_borel_element(7, &mut rng).unwrap();
            let y = b.random_element(&mut rng);
            assert_eq!(*x.get(1, 0), 0);
            assert!(sl.contains(&x));
            // oracle: commutator of upper triangular matrices is unipotent
            let c = sl.mul(&sl.mul(&sl.inv(&x), &sl.inv(&y)), &sl.mul(&x, &y));
            assert_eq!((*c.get(0, 0), *c.get(1, 0), *c.get(1, 1)), (1, 0, 1));
        }
    }

    #[test]
    fn element_orders() {
        let g = Group::sl2(fp(5));
        assert_eq!(g.element_order(&g.identity(), 100), ElementOrder::Finite(1));
        assert_eq!(g.element_order(&g.minus_identity(), 100), ElementOrder::Finite(2));
        assert_eq!(g.element_order(&m(&g, "[1,1;0,1]"), 100), ElementOrder::Finite(5));
        assert_eq!(g.element_order(&m(&g, "[1,1;0,1]"), 4), ElementOrder::ExceedsCutoff);
    }

    #[test]
    fn torus_orders_grow_with_p() {
        for p in [5u64, 13, 101] {
            let f = fp(p);
            let t = f.primitive_root();
            let g = Group::sl2(f);
            let d = Matrix::from_rows(vec![vec![t, 0], vec![0, f.inv(&t).unwrap()]]).unwrap();
            assert_eq!(g.element_order(&d, 10_000), ElementOrder::Finite(p - 1));
        }
    }

    #[test]
    fn automorphism_examples() {
        let g = Group::sl2(fp(5));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let id_inner = g.inner(g.identity()).unwrap();
        let central = g.inner(g.minus_identity()).unwrap();
        for _ in 0..100 {
            let x = g.random_element(&mut rng);
            assert_eq!(g.apply_automorphism(&id_inner, &x).unwrap(), x);
            assert_eq!(g.apply_automorphism(&central, &x).unwrap(), x);
        }
        assert!(matches!(g.transpose_inverse(), Err(GroupError::UnsupportedKind { .. })));
        assert!(g.apply_automorphism(&GroupAutomorphism::TransposeInverse, &g.identity()).is_err());

        let gl3 = Group::gl(fp(5), 3).unwrap();
        let ti = gl3.transpose_inverse().unwrap();
        for _ in 0..100 {
            let x = gl3.random_element(&mut rng);
            let once = gl3.apply_automorphism(&ti, &x).unwrap();
            assert_ne!(once.dim(), 0);
            assert_eq!(gl3.apply_automorphism(&ti, &once).unwrap(), x);
        }
    }

    #[test]
    fn automorphisms_are_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let gl = Group::gl(fp(5), 3).unwrap();
        let h = gl.random_element(&mut rng);
        let autos = vec![
            gl.inner(h.clone()).unwrap(),
            gl.transpose_inverse().unwrap(),
            GroupAutomorphism::Composite(vec![gl.transpose_inverse().unwrap(), gl.inner(h).unwrap()]),
        ];
        for gamma in &autos {
            for _ in 0..50 {
                let a = gl.random_element(&mut rng);
                let b = gl.random_element(&mut rng);
                let lhs = gl.apply_automorphism(gamma, &gl.mul(&a, &b)).unwrap();
                let rhs = gl.mul(&gl.apply_automorphism(gamma, &a).unwrap(), &gl.apply_automorphism(gamma, &b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        let sl = Group::psl2(fp(7));
        let h = sl.random_element(&mut rng);
        let gamma = sl.inner(h).unwrap();
        for _ in 0..50 {
            let a = sl.random_element(&mut rng);
            let b = sl.random_element(&mut rng);
            let lhs = sl.apply_automorphism(&gamma, &sl.mul(&a, &b)).unwrap();
            let rhs = sl.mul(&sl.apply_automorphism(&gamma, &a).unwrap(), &sl.apply_automorphism(&gamma, &b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compose_and_inverse_agree_with_pointwise_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let gl = Group::gl(fp(5), 2).unwrap();
        let a = GroupAutomorphism::Composite(vec![gl.inner(gl.random_element(&mut rng)).unwrap(), GroupAutomorphism::TransposeInverse]);
        let b = GroupAutomorphism::Composite(vec![GroupAutomorphism::TransposeInverse, gl.inner(gl.random_element(&mut rng)).unwrap()]);
        let ab = gl.compose_automorphisms(&a, &b).unwrap();
        let a_inv = gl.automorphism_inverse(&a).unwrap();
        for _ in 0..50 {
            let x = gl.random_element(&mut rng);
            let direct = gl.apply_automorphism(&a, &gl.apply_automorphism(&b, &x).unwrap()).unwrap();
            assert_eq!(gl.apply_automorphism(&ab, &x).unwrap(), direct);
            assert_eq!(gl.apply_automorphism(&a_inv, &gl.apply_automorphism(&a, &x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn closure_examples() {
        let g = Group::sl2(fp(3));
        assert_eq!(g.close_subgroup(&[], 10).unwrap().order(), 1);
        // h has order 4 in SL2(F3) and order 2 in PSL2(F3)
        let h = m(&g, "[0,1;-1,0]");
        assert_eq!(g.element_order(&h, 10), ElementOrder::Finite(4));
        let r = g.close_subgroup(&[g.inner(h).unwrap()], 10).unwrap();
        assert_eq!(r.order(), 2);

        let gl = Group::gl(fp(5), 2).unwrap();
        assert_eq!(gl.close_subgroup(&[gl.transpose_inverse().unwrap()], 10).unwrap().order(), 2);

        // Int(SL2(F3)) = PSL2(F3) has order 12
        let all: Vec<_> = g.probe_generators().into_iter().map(|x| g.inner(x).unwrap()).collect();
        assert_eq!(g.close_subgroup(&all, 100).unwrap().order(), 12);
        assert_eq!(g.close_subgroup(&all, 5), Err(GroupError::ClosureExceedsBound(5)));
    }

    #[test]
    fn quadric_model() {
        let g = Group::sl2(fp(101));
        let f = *g.field();
        assert_eq!(g.sl2_to_quadric(&g.identity()).unwrap(), [1, 1, 0, 0]);
        let j = m(&g, "[0,1;-1,0]");
        assert_eq!(g.sl2_to_quadric(&j).unwrap(), [0, 0, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let x = g.random_element(&mut rng);
            let q = g.sl2_to_quadric(&x).unwrap();
            assert_eq!(f.add(&f.mul(&q[0], &q[1]), &f.mul(&q[2], &q[3])), 1);
            assert_eq!(g.quadric_to_sl2(&q).unwrap(), x);
        }
        assert!(g.quadric_to_sl2(&[1, 1, 1, 1]).is_err());
        assert!(Group::psl2(fp(5)).sl2_to_quadric(&Group::psl2(fp(5)).identity()).is_err());
    }

    #[test]
    fn descriptors() {
        for text in ["sl2:p=5", "psl2:p=7", "gl:d=3,p=5", "sl2:Q", "borel:p=7", "center:p=5"] {
            assert_eq!(AnyGroup::parse(text).unwrap().descriptor(), text);
        }
        for bad in ["sl2", "sl2:p=4", "gl:p=5", "sl3:p=5", "sl2:p=5,Q", "gl:d=0,p=5"] {
            assert!(AnyGroup::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rational_group() {
        let AnyGroup::Rational(g) = AnyGroup::parse("sl2:Q").unwrap() else { panic!() };
        let a = g.parse_element("[2,1/2;2,1]").unwrap();
        assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
        assert!(g.parse_element("[2,0;0,2]").is_err());
        let h = g.inner(g.parse_element("[1,1;0,1]").unwrap()).unwrap();
        let back = g.automorphism_inverse(&h).unwrap();
        assert_eq!(g.apply_automorphism(&back, &g.apply_automorphism(&h, &a).unwrap()).unwrap(), a);
    }
}
