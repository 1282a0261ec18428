//! SL2 trace coordinates for free groups of rank at most 3.
//!
//! Every trace function on Hom(F_n, SL2) with n <= 3 is an integer
//! polynomial in the traces of the increasing products of distinct
//! generators: x1, x2, x3, x12, x13, x23, x123. [`TraceReducer`] computes that
//! polynomial for a word using
//!
//! ```text
//! tr(e) = 2,   tr(U^-1) = tr(U),   tr(UV) = tr(VU),
//! tr(U V^-1) = tr(U) tr(V) - tr(U V),
//! tr(x1 x3 x2) = x1 x23 + x2 x13 + x3 x12 - x1 x2 x3 - x123.
//! ```
//!
//! For n = 3 the coordinates satisfy one quadratic relation in x123; emitted
//! polynomials are not reduced by it, but [`reduce_modulo_relation`] gives a
//! normal form for comparisons.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::autf::{AutElement, AutError};
use crate::field::Field;
use crate::freegroup::{Letter, Word, WordError};
use crate::groups::Group;
use crate::repvar::{Point, RepVarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharVarError {
    #[error("trace coordinates are only available for rank at most 3, got {0}")]
    RankUnsupported(usize),
    #[error("trace variable must be a strictly increasing nonempty subset of 1..3: {0}")]
    BadVariable(String),
    #[error("trace reduction exceeded its step budget of {0}")]
    StepBudgetExceeded(u64),
    #[error("traces need an SL2 point, got group {0}")]
    NotSl2(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    RepVar(#[from] RepVarError),
}

pub const MAX_TRACE_RANK: usize = 3;
pub const NUM_TRACE_VARS: usize = 7;
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Generator bitmasks in variable order x1, x2, x3, x12, x13, x23, x123.
const MASKS: [u8; NUM_TRACE_VARS] = [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

/// A trace coordinate `tr(f_i f_j ...)` for an increasing index set.
/// Ordered as printed: x1 < x2 < x3 < x12 < x13 < x23 < x123.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceVar(u8);

impl TraceVar {
    /// `indices` are 1-based generator numbers.
    pub fn new(indices: &[usize]) -> Result<TraceVar, CharVarError> {
        let bad = || CharVarError::BadVariable(format!("{indices:?}"));
        if indices.is_empty() || indices.windows(2).any(|p| p[0] >= p[1]) {
            return Err(bad());
        }
        let mut mask = 0u8;
        for &i in indices {
            if !(1..=MAX_TRACE_RANK).contains(&i) {
                return Err(bad());
            }
            mask |= 1 << (i - 1);
        }
        Ok(TraceVar::from_mask(mask))
    }

    fn from_mask(mask: u8) -> TraceVar {
        TraceVar(MASKS.iter().position(|&m| m == mask).expect("valid mask") as u8)
    }

    pub fn from_index(index: usize) -> TraceVar {
        assert!(index < NUM_TRACE_VARS);
        TraceVar(index as u8)
    }

    /// Position in the variable order.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (1..=MAX_TRACE_RANK).filter(|i| MASKS[self.index()] & (1 << (i - 1)) != 0).collect()
    }

    pub fn max_generator(self) -> usize {
        *self.indices().last().unwrap()
    }

    /// Coordinates for rank `n`: 1 for n = 1, 3 for n = 2, 7 for n = 3.
    pub fn basis(n: usize) -> Result<Vec<TraceVar>, CharVarError> {
        if n > MAX_TRACE_RANK {
            return Err(CharVarError::RankUnsupported(n));
        }
        Ok((0..NUM_TRACE_VARS).map(TraceVar::from_index).filter(|v| v.max_generator() <= n).collect())
    }

    /// The word `f_i f_j ...` whose trace this variable is.
    pub fn word(self, rank: usize) -> Result<Word, WordError> {
        Word::reduce(self.indices().into_iter().map(Letter::pos), rank)
    }

    pub fn parse(text: &str) -> Result<TraceVar, CharVarError> {
        let digits = text.trim().strip_prefix('x').ok_or_else(|| CharVarError::BadVariable(text.to_string()))?;
        let indices: Option<Vec<usize>> = digits.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        TraceVar::new(&indices.ok_or_else(|| CharVarError::BadVariable(text.to_string()))?)
    }
}

impl fmt::Display for TraceVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("x")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

type Monomial = [u32; NUM_TRACE_VARS];

/// Integer polynomial in the trace coordinates. No zero coefficients are
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TracePolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl TracePolynomial {
    pub fn zero() -> TracePolynomial {
        TracePolynomial::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> TracePolynomial {
        let mut p = TracePolynomial::zero();
        p.add_term([0; NUM_TRACE_VARS], c.into());
        p
    }

    pub fn var(v: TraceVar) -> TracePolynomial {
        let mut m = [0; NUM_TRACE_VARS];
        m[v.index()] = 1;
        let mut p = TracePolynomial::zero();
        p.add_term(m, BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponents, coefficient)` pairs; exponents follow the variable order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32; NUM_TRACE_VARS], &BigInt)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: TraceVar) -> u32 {
        self.terms.keys().map(|m| m[v.index()]).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<TraceVar> {
        (0..NUM_TRACE_VARS)
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .map(TraceVar::from_index)
            .collect()
    }

    pub fn pow(&self, k: u32) -> TracePolynomial {
        (0..k).fold(TracePolynomial::constant(1), |acc, _| acc * self.clone())
    }

    /// Evaluates at `values[v.index()]` for each variable `v`.
    pub fn evaluate<F: Field>(&self, field: &F, values: &[F::Elem]) -> F::Elem {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_bigint(c);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = field.mul(&t, &field.pow(&values[i], e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Replaces each variable `v` by `image(v)`, or leaves it if `None`.
    pub fn substitute_with(&self, image: impl Fn(TraceVar) -> Option<TracePolynomial>) -> TracePolynomial {
        let images: Vec<TracePolynomial> = (0..NUM_TRACE_VARS)
            .map(|i| {
                let v = TraceVar::from_index(i);
                image(v).unwrap_or_else(|| TracePolynomial::var(v))
            })
            .collect();
        let mut out = TracePolynomial::zero();
        for (m, c) in &self.terms {
            let mut t = TracePolynomial::constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t * images[i].pow(e);
                }
            }
            out = out + t;
        }
        out
    }

    pub fn substitute(&self, s: &TraceSubstitution) -> TracePolynomial {
        self.substitute_with(|v| s.get(v).cloned())
    }

    fn display_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        let key = |m: &Monomial| (m.iter().copied().max().unwrap_or(0), m.iter().sum::<u32>());
        key(b).cmp(&key(a)).then_with(|| b.cmp(a))
    }
}

impl fmt::Display for TracePolynomial {
    /// Terms are ordered by largest single exponent, then total degree, then
    /// lexicographically in the variable order, all descending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| TracePolynomial::display_order(a.0, b.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = TraceVar::from_index(i);
                    if e == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for TracePolynomial {
    type Output = TracePolynomial;
    fn add(mut self, rhs: TracePolynomial) -> TracePolynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for TracePolynomial {
    type Output = TracePolynomial;
    fn neg(mut self) -> TracePolynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for TracePolynomial {
    type Output = TracePolynomial;
    fn sub(self, rhs: TracePolynomial) -> TracePolynomial {
        self + (-rhs)
    }
}

impl Mul for TracePolynomial {
    type Output = TracePolynomial;
    fn mul(self, rhs: TracePolynomial) -> TracePolynomial {
        let mut out = TracePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = *ma;
                for (x, y) in m.iter_mut().zip(mb) {
                    *x += y;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

/// Memoizing trace reduction. The cache is keyed by the least rotation of
/// the cyclically reduced word, oriented to have at most half its letters
/// inverted.
#[derive(Debug, Clone)]
pub struct TraceReducer {
    cache: HashMap<Vec<Letter>, TracePolynomial>,
    steps: u64,
    budget: u64,
}

impl Default for TraceReducer {
    fn default() -> TraceReducer {
        TraceReducer::with_budget(DEFAULT_STEP_BUDGET)
    }
}

impl TraceReducer {
    pub fn new() -> TraceReducer {
        TraceReducer::default()
    }

    pub fn with_budget(budget: u64) -> TraceReducer {
        TraceReducer { cache: HashMap::new(), steps: 0, budget }
    }

    pub fn trace(&mut self, w: &Word) -> Result<TracePolynomial, CharVarError> {
        if w.rank() > MAX_TRACE_RANK {
            return Err(CharVarError::RankUnsupported(w.rank()));
        }
        self.reduce(w.letters().to_vec())
    }

    fn reduce(&mut self, raw: Vec<Letter>) -> Result<TracePolynomial, CharVarError> {
        let key = normalize(raw)?;
        if key.is_empty() {
            return Ok(TracePolynomial::constant(2));
        }
        if let Some(p) = self.cache.get(&key) {
            return Ok(p.clone());
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(CharVarError::StepBudgetExceeded(self.budget));
        }
        let p = self.expand(&key)?;
        self.cache.insert(key, p.clone());
        Ok(p)
    }

    /// Each branch recurses on words that are shorter, or of equal length
    /// with fewer inverse letters, so the recursion terminates.
    fn expand(&mut self, w: &[Letter]) -> Result<TracePolynomial, CharVarError> {
        if let Some(pos) = w.iter().position(|l| l.is_inverse()) {
            // w ~ X f_g^-1, and tr(X f_g^-1) = tr(X) tr(f_g) - tr(X f_g)
            let mut rotated: Vec<Letter> = w[pos + 1..].iter().chain(&w[..=pos]).copied().collect();
            let g = rotated.pop().unwrap().generator();
            let x = rotated.clone();
            rotated.push(Letter::pos(g));
            let fg = TracePolynomial::var(TraceVar::new(&[g])?);
            return Ok(self.reduce(x)? * fg - self.reduce(rotated)?);
        }
        let mut counts = [0usize; MAX_TRACE_RANK + 1];
        for l in w {
            counts[l.generator()] += 1;
        }
        if let Some(g) = (1..=MAX_TRACE_RANK).rev().find(|&g| counts[g] > 1) {
            // w ~ g A g B, and tr(gA gB) = tr(gA) tr(gB) - tr(A B^-1)
            let start = w.iter().position(|l| l.generator() == g).unwrap();
            let r: Vec<Letter> = w[start..].iter().chain(&w[..start]).copied().collect();
            let k = 1 + r[1..].iter().position(|l| l.generator() == g).unwrap();
            let ga = r[..k].to_vec();
            let gb = r[k..].to_vec();
            let ab: Vec<Letter> = r[1..k].iter().copied().chain(r[k + 1..].iter().rev().map(|l| l.inv())).collect();
            return Ok(self.reduce(ga)? * self.reduce(gb)? - self.reduce(ab)?);
        }
        let gens: Vec<usize> = w.iter().map(|l| l.generator()).collect();
        match gens.as_slice() {
            [_] | [_, _] | [1, 2, 3] => {
                let mut sorted = gens.clone();
                sorted.sort_unstable();
                Ok(TracePolynomial::var(TraceVar::new(&sorted)?))
            }
            [1, 3, 2] => {
                let v = |i: &[usize]| TracePolynomial::var(TraceVar::new(i).unwrap());
                Ok(v(&[1]) * v(&[2, 3]) + v(&[2]) * v(&[1, 3]) + v(&[3]) * v(&[1, 2])
                    - v(&[1]) * v(&[2]) * v(&[3])
                    - v(&[1, 2, 3]))
            }
            _ => unreachable!("normalized words of distinct positive letters start at their least generator"),
        }
    }
}

/// Cyclic reduction, orientation with at most half the letters inverted, then
/// the least rotation.
fn normalize(raw: Vec<Letter>) -> Result<Vec<Letter>, CharVarError> {
    let reduced = Word::reduce(raw, MAX_TRACE_RANK)?;
    let (core, _) = reduced.cyclically_reduce();
    let mut letters = core.letters().to_vec();
    let inverted = letters.iter().filter(|l| l.is_inverse()).count();
    if 2 * inverted > letters.len() {
        letters = letters.iter().rev().map(|l| l.inv()).collect();
    }
    let n = letters.len();
    let best = (0..n)
        .map(|s| letters[s..].iter().chain(&letters[..s]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default();
    Ok(best)
}

/// The trace polynomial of `w`; `w` must have rank at most 3.
pub fn trace_polynomial(w: &Word) -> Result<TracePolynomial, CharVarError> {
    TraceReducer::new().trace(w)
}

/// `tr(w(x))` for a point of an SL2-type group; works for any rank.
pub fn numeric_trace<F: Field>(group: &Group<F>, w: &Word, x: &Point<F::Elem>) -> Result<F::Elem, CharVarError> {
    let g = group.evaluate_word(w, x)?;
    group.trace(&g).ok_or_else(|| CharVarError::NotSl2(group.descriptor()))
}

/// Numeric values of all seven coordinates at `x`, indexed by
/// [`TraceVar::index`]; coordinates beyond the rank of `x` are zero.
pub fn basis_traces<F: Field>(group: &Group<F>, x: &Point<F::Elem>) -> Result<Vec<F::Elem>, CharVarError> {
    let n = x.arity();
    let basis = TraceVar::basis(n)?;
    let mut values = vec![group.field().zero(); NUM_TRACE_VARS];
    for v in basis {
        values[v.index()] = numeric_trace(group, &v.word(n)?, x)?;
    }
    Ok(values)
}

/// A polynomial map on trace coordinates, one image per basis variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSubstitution {
    rank: usize,
    images: BTreeMap<TraceVar, TracePolynomial>,
}

impl TraceSubstitution {
    pub fn identity(rank: usize) -> Result<TraceSubstitution, CharVarError> {
        let images = TraceVar::basis(rank)?.into_iter().map(|v| (v, TracePolynomial::var(v))).collect();
        Ok(TraceSubstitution { rank, images })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, v: TraceVar) -> Option<&TracePolynomial> {
        self.images.get(&v)
    }

    pub fn images(&self) -> impl Iterator<Item = (TraceVar, &TracePolynomial)> {
        self.images.iter().map(|(v, p)| (*v, p))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(v, p)| *p == TracePolynomial::var(*v))
    }

    /// Images in variable order, each as `{"var": "x12", "image": "..."}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.images
                .iter()
                .map(|(v, p)| json!({"var": v.to_string(), "image": p.to_string()}))
                .collect(),
        )
    }
}

/// `v -> first(v)` followed by substituting `second` into the result. With
/// `first = induced_action(t)` and `second = induced_action(s)` this is
/// `induced_action(s . t)`.
pub fn substitute(first: &TraceSubstitution, second: &TraceSubstitution) -> TraceSubstitution {
    let images = first.images.iter().map(|(v, p)| (*v, p.substitute(second))).collect();
    TraceSubstitution { rank: first.rank, images }
}

/// The map `x_u -> tr(s(u))` on the basis words `u`.
pub fn induced_action(s: &AutElement) -> Result<TraceSubstitution, CharVarError> {
    let n = s.rank();
    let mut reducer = TraceReducer::new();
    let mut images = BTreeMap::new();
    for v in TraceVar::basis(n)? {
        let image = s.apply(&v.word(n)?)?;
        images.insert(v, reducer.trace(&image)?);
    }
    Ok(TraceSubstitution { rank: n, images })
}

/// The commutator trace `x1^2 + x2^2 + x12^2 - x1*x2*x12 - 2`.
pub fn commutator_polynomial() -> TracePolynomial {
    let v = |i: &[usize]| TracePolynomial::var(TraceVar::new(i).unwrap());
    v(&[1]).pow(2) + v(&[2]).pow(2) + v(&[1, 2]).pow(2) - v(&[1]) * v(&[2]) * v(&[1, 2]) - TracePolynomial::constant(2)
}

/// Normal form modulo the rank-3 relation
/// `x123^2 = P x123 - Q`, where `P = tr(f1 f2 f3) + tr(f1 f3 f2)` and
/// `Q = tr(f1 f2 f3) tr(f1 f3 f2)`: every power of x123 above 1 is rewritten.
/// Two polynomials define the same function on rank-3 SL2 characters iff
/// their normal forms agree.
pub fn reduce_modulo_relation(p: &TracePolynomial) -> TracePolynomial {
    let v = |i: &[usize]| TracePolynomial::var(TraceVar::new(i).unwrap());
    let (x1, x2, x3, x12, x13, x23, x123) = (v(&[1]), v(&[2]), v(&[3]), v(&[1, 2]), v(&[1, 3]), v(&[2, 3]), v(&[1, 2, 3]));
    let sum = x1.clone() * x23.clone() + x2.clone() * x13.clone() + x3.clone() * x12.clone() - x1.clone() * x2.clone() * x3.clone();
    let product = x1.pow(2) + x2.pow(2) + x3.pow(2) + x12.pow(2) + x13.pow(2) + x23.pow(2)
        - x1.clone() * x2.clone() * x12.clone()
        - x1 * x3.clone() * x13.clone()
        - x2 * x3 * x23.clone()
        + x12 * x13 * x23
        - TracePolynomial::constant(4);
    let square = sum * x123 - product;
    let top = TraceVar::new(&[1, 2, 3]).unwrap().index();
    let mut current = p.clone();
    loop {
        let mut keep = TracePolynomial::zero();
        let mut rewritten = TracePolynomial::zero();
        let mut changed = false;
        for (m, c) in &current.terms {
            if m[top] >= 2 {
                let mut lower = *m;
                lower[top] -= 2;
                let mut t = TracePolynomial::zero();
                t.add_term(lower, c.clone());
                rewritten = rewritten + t * square.clone();
                changed = true;
            } else {
                keep.add_term(*m, c.clone());
            }
        }
        current = keep + rewritten;
        if !changed {
            return current;
        }
    }
}
