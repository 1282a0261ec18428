//! Endomorphisms and automorphisms of F_n.
//!
//! An [`Endomorphism`] is given by the images of the generators. An
//! [`AutElement`] pairs one with an inverse that has been checked at
//! construction. Composition follows function composition:
//! `compose(s, t)(w) = s(t(w))`. Inner automorphisms use the orientation
//! `inner(t): f_j -> t f_j t^-1`.

use std::fmt;

use thiserror::Error;

use crate::freegroup::{Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank must be at least {min}, got {rank}")]
    RankTooSmall { rank: usize, min: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("expected {expected} generator images, got {found}")]
    WrongImageCount { expected: usize, found: usize },
    #[error("claimed inverse does not compose to the identity")]
    NotInverse,
    #[error("bad automorphism spec {spec:?}: {message}")]
    BadSpec { spec: String, message: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(images: Vec<Word>) -> Result<Endomorphism, AutError> {
        let rank = images.len();
        for w in &images {
            if w.rank() != rank {
                return Err(AutError::RankMismatch { left: rank, right: w.rank() });
            }
        }
        Ok(Endomorphism { rank, images })
    }

    pub fn identity(rank: usize) -> Endomorphism {
        let images = (1..=rank).map(|j| Word::generator(rank, j).expect("in range")).collect();
        Endomorphism { rank, images }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Image of generator `j` (1-based).
    pub fn image(&self, j: usize) -> &Word {
        &self.images[j - 1]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Substitutes generator images into `w` and reduces.
    pub fn apply(&self, w: &Word) -> Result<Word, AutError> {
        if w.rank() != self.rank {
            return Err(AutError::RankMismatch { left: self.rank, right: w.rank() });
        }
        let raw = w.letters().iter().flat_map(|l| {
            let img = &self.images[l.generator() - 1];
            let letters: Vec<Letter> = if l.is_inverse() {
                img.letters().iter().rev().map(|x| x.inv()).collect()
            } else {
                img.letters().to_vec()
            };
            letters
        });
        Ok(Word::reduce(raw, self.rank)?)
    }

    /// `self o other`: generator `f_j` maps to `self(other(f_j))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, AutError> {
        if self.rank != other.rank {
            return Err(AutError::RankMismatch { left: self.rank, right: other.rank });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<_, _>>()?;
        Ok(Endomorphism { rank: self.rank, images })
    }

    pub fn is_identity(&self) -> bool {
        *self == Endomorphism::identity(self.rank)
    }

    /// If `self` is `inner(t)` for some word `t`, returns such a `t`.
    pub fn inner_conjugator(&self) -> Option<Word> {
        let n = self.rank;
        if n == 0 {
            return Some(Word::identity(0));
        }
        if n == 1 {
            // F_1 is abelian: only the identity is inner
            return self.is_identity().then(|| Word::identity(1));
        }
        let f1 = Word::generator(n, 1).ok()?;
        let f2 = Word::generator(n, 2).ok()?;
        let (core1, c1) = self.images[0].cyclically_reduce();
        let (core2, c2) = self.images[1].cyclically_reduce();
        if core1 != f1 || core2 != f2 {
            return None;
        }
        // t = c1 f1^k = c2 f2^m, so c1^-1 c2 must be f1^k f2^-m.
        let u = c1.invert().multiply(&c2).ok()?;
        let k = u.letters().iter().take_while(|l| l.generator() == 1).count();
        if u.letters()[k..].iter().any(|l| l.generator() != 2) {
            return None;
        }
        let head = Word::reduce(u.letters()[..k].iter().copied(), n).ok()?;
        let t = c1.multiply(&head).ok()?;
        let candidate = inner_endomorphism(&t);
        (candidate == *self).then_some(t)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, w) in self.images.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            let shown = if w.is_empty() { "e".to_string() } else { w.to_string() };
            write!(f, "x{} -> {}", j + 1, shown)?;
        }
        Ok(())
    }
}

/// An automorphism of F_n with a certified inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutElement {
    forward: Endomorphism,
    inverse: Endomorphism,
}

impl AutElement {
    /// Checks that both composites are the identity.
    pub fn new(forward: Endomorphism, inverse: Endomorphism) -> Result<AutElement, AutError> {
        if forward.compose(&inverse)?.is_identity() && inverse.compose(&forward)?.is_identity() {
            Ok(AutElement { forward, inverse })
        } else {
            Err(AutError::NotInverse)
        }
    }

    pub fn identity(rank: usize) -> AutElement {
        AutElement { forward: Endomorphism::identity(rank), inverse: Endomorphism::identity(rank) }
    }

    pub fn rank(&self) -> usize {
        self.forward.rank
    }

    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn inverse(&self) -> &Endomorphism {
        &self.inverse
    }

    pub fn inv(&self) -> AutElement {
        AutElement { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, AutError> {
        self.forward.apply(w)
    }

    /// `self o other`.
    pub fn compose(&self, other: &AutElement) -> Result<AutElement, AutError> {
        Ok(AutElement { forward: self.forward.compose(&other.forward)?, inverse: other.inverse.compose(&self.inverse)? })
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_identity()
    }

    pub fn is_inner(&self) -> bool {
        self.forward.inner_conjugator().is_some()
    }
}

/// Equality of generator images.
pub fn equals(a: &Endomorphism, b: &Endomorphism) -> bool {
    a == b
}

fn gen(n: usize, j: usize) -> Word {
    Word::generator(n, j).expect("index checked by caller")
}

fn check_index(index: usize, rank: usize) -> Result<(), AutError> {
    if index == 0 || index > rank {
        Err(AutError::IndexOutOfRange { index, rank })
    } else {
        Ok(())
    }
}

fn replace(n: usize, changes: &[(usize, Word)]) -> Endomorphism {
    let mut e = Endomorphism::identity(n);
    for (j, w) in changes {
        e.images[j - 1] = w.clone();
    }
    e
}

/// Swap of generators `i` and `i + 1`.
pub fn transposition(i: usize, n: usize) -> Result<AutElement, AutError> {
    check_index(i, n)?;
    check_index(i + 1, n)?;
    let e = replace(n, &[(i, gen(n, i + 1)), (i + 1, gen(n, i))]);
    AutElement::new(e.clone(), e)
}

/// `f_i -> f_i^-1`.
pub fn inversion(i: usize, n: usize) -> Result<AutElement, AutError> {
    check_index(i, n)?;
    let e = replace(n, &[(i, gen(n, i).invert())]);
    AutElement::new(e.clone(), e)
}

/// `f_i -> f_i f_j` for `i != j`.
pub fn transvection(i: usize, j: usize, n: usize) -> Result<AutElement, AutError> {
    check_index(i, n)?;
    check_index(j, n)?;
    if i == j {
        return Err(AutError::IndexOutOfRange { index: j, rank: n });
    }
    let fwd = replace(n, &[(i, gen(n, i).multiply(&gen(n, j))?)]);
    let back = replace(n, &[(i, gen(n, i).multiply(&gen(n, j).invert())?)]);
    AutElement::new(fwd, back)
}

/// `tau_1..tau_{n-1}`, `inv_1`, and `s_12` when `n >= 2`.
pub fn nielsen_generators(n: usize) -> Result<Vec<AutElement>, AutError> {
    Ok(nielsen_generators_labeled(n)?.into_iter().map(|(_, a)| a).collect())
}

/// Nielsen generators with their textual spec labels.
pub fn nielsen_generators_labeled(n: usize) -> Result<Vec<(String, AutElement)>, AutError> {
    if n == 0 {
        return Err(AutError::RankTooSmall { rank: 0, min: 1 });
    }
    let mut out = Vec::new();
    for i in 1..n {
        out.push((format!("nielsen:tau{i}"), transposition(i, n)?));
    }
    out.push(("nielsen:inv1".to_string(), inversion(1, n)?));
    if n >= 2 {
        out.push(("nielsen:s12".to_string(), transvection(1, 2, n)?));
    }
    Ok(out)
}

fn inner_endomorphism(t: &Word) -> Endomorphism {
    let n = t.rank();
    let tinv = t.invert();
    let images = (1..=n)
        .map(|j| t.multiply(&gen(n, j)).and_then(|w| w.multiply(&tinv)).expect("same rank"))
        .collect();
    Endomorphism { rank: n, images }
}

/// `f_j -> t f_j t^-1`; the inverse is `inner(t^-1)`.
pub fn inner(t: &Word) -> AutElement {
    AutElement { forward: inner_endomorphism(t), inverse: inner_endomorphism(&t.invert()) }
}

/// Artin generator: `f_i -> f_i f_{i+1} f_i^-1`, `f_{i+1} -> f_i`.
pub fn braid_generator(i: usize, n: usize) -> Result<AutElement, AutError> {
    if n < 2 {
        return Err(AutError::RankTooSmall { rank: n, min: 2 });
    }
    if i == 0 || i >= n {
        return Err(AutError::IndexOutOfRange { index: i, rank: n });
    }
    let a = gen(n, i);
    let b = gen(n, i + 1);
    let fwd = replace(n, &[(i, a.multiply(&b)?.multiply(&a.invert())?), (i + 1, a.clone())]);
    let back = replace(n, &[(i, b.clone()), (i + 1, b.invert().multiply(&a)?.multiply(&b)?)]);
    AutElement::new(fwd, back)
}

/// Parses an automorphism spec: `id`, `nielsen:tau<i>`, `nielsen:inv<i>`,
/// `nielsen:s12` (or `nielsen:s<i>_<j>`), `inner:<word>`, `braid:<i>`, and
/// `;`-separated compositions applied right to left.
pub fn parse_spec(spec: &str, n: usize) -> Result<AutElement, AutError> {
    let mut acc = AutElement::identity(n);
    for part in spec.split(';') {
        acc = acc.compose(&parse_atom(part.trim(), n)?)?;
    }
    Ok(acc)
}

fn parse_atom(atom: &str, n: usize) -> Result<AutElement, AutError> {
    let bad = |message: &str| AutError::BadSpec { spec: atom.to_string(), message: message.to_string() };
    let number = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an index"));
    if atom == "id" || atom == "identity" {
        return Ok(AutElement::identity(n));
    }
    if let Some(rest) = atom.strip_prefix("nielsen:") {
        if let Some(i) = rest.strip_prefix("tau") {
            return transposition(number(i)?, n);
        }
        if let Some(i) = rest.strip_prefix("inv") {
            return inversion(number(i)?, n);
        }
        if let Some(ij) = rest.strip_prefix('s') {
            let (i, j) = match ij.split_once('_') {
                Some((i, j)) => (number(i)?, number(j)?),
                None if ij.len() == 2 => (number(&ij[..1])?, number(&ij[1..])?),
                None => return Err(bad("use s<i>_<j> for multi-digit indices")),
            };
            return transvection(i, j, n);
        }
        return Err(bad("unknown Nielsen generator"));
    }
    if let Some(w) = atom.strip_prefix("inner:") {
        return Ok(inner(&Word::parse(w, n)?));
    }
    if let Some(i) = atom.strip_prefix("braid:") {
        return braid_generator(number(i)?, n);
    }
    Err(bad("unknown automorphism kind"))
}
