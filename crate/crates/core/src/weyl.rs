//! Finite root systems, the longest Weyl element and the test `w0 = -1`.
//!
//! Simple roots use the standard (Bourbaki) realizations with rational
//! coordinates. Weyl group elements are stored as integer matrices in the
//! basis of simple roots, which is where every root has integer coordinates.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("invalid rank {rank} for type {ty}")]
    InvalidRank { ty: RootType, rank: usize },
    #[error("cannot parse root system factor {0:?}")]
    BadFactor(String),
    #[error("factor list is empty")]
    EmptyFactors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl RootType {
    pub const ALL: [RootType; 7] = [RootType::A, RootType::B, RootType::C, RootType::D, RootType::E, RootType::F, RootType::G];

    pub fn valid_rank(self, rank: usize) -> bool {
        match self {
            RootType::A => rank >= 1,
            RootType::B | RootType::C => rank >= 2,
            RootType::D => rank >= 3,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A simple factor such as `D5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub ty: RootType,
    pub rank: usize,
}

impl CartanType {
    pub fn new(ty: RootType, rank: usize) -> Result<CartanType, WeylError> {
        if !ty.valid_rank(rank) {
            return Err(WeylError::InvalidRank { ty, rank });
        }
        Ok(CartanType { ty, rank })
    }

    /// Every valid type with rank at most `max_rank`.
    pub fn all_up_to(max_rank: usize) -> Vec<CartanType> {
        RootType::ALL
            .iter()
            .flat_map(|&ty| (1..=max_rank).filter_map(move |r| CartanType::new(ty, r).ok()))
            .collect()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ty, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<CartanType, WeylError> {
        let s = s.trim();
        let bad = || WeylError::BadFactor(s.to_string());
        let mut chars = s.chars();
        let ty = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => RootType::A,
            Some('B') => RootType::B,
            Some('C') => RootType::C,
            Some('D') => RootType::D,
            Some('E') => RootType::E,
            Some('F') => RootType::F,
            Some('G') => RootType::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        CartanType::new(ty, rank)
    }
}

/// Parses a comma-separated factor list such as `A2,D5,E6`.
pub fn parse_factors(text: &str) -> Result<Vec<CartanType>, WeylError> {
    if text.trim().is_empty() {
        return Err(WeylError::EmptyFactors);
    }
    text.split(',').map(str::parse).collect()
}

type Vector = Vec<Rational64>;

fn dot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    cartan_type: CartanType,
    simple_roots: Vec<Vector>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> RootSystem {
        let simple_roots = simple_roots(cartan_type);
        let l = simple_roots.len();
        let two = Rational64::from_integer(2);
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let v = two * dot(&simple_roots[i], &simple_roots[j]) / dot(&simple_roots[j], &simple_roots[j]);
                        assert!(v.is_integer(), "non-integral Cartan entry");
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let mut rs = RootSystem { cartan_type, simple_roots, cartan, positive_roots: Vec::new() };
        rs.positive_roots = rs.compute_positive_roots();
        rs
    }

    pub fn of(ty: RootType, rank: usize) -> Result<RootSystem, WeylError> {
        Ok(RootSystem::new(CartanType::new(ty, rank)?))
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple_roots
    }

    /// `cartan[i][j] = 2 (a_i, a_j) / (a_j, a_j)`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Gram matrix of the simple roots.
    pub fn gram_matrix(&self) -> Vec<Vec<Rational64>> {
        let l = self.rank();
        (0..l).map(|i| (0..l).map(|j| dot(&self.simple_roots[i], &self.simple_roots[j])).collect()).collect()
    }

    /// Positive roots in simple-root coordinates.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Matrix of the simple reflection `s_i` (0-based) in the simple-root
    /// basis: `s_i(a_j) = a_j - cartan[j][i] a_i`.
    pub fn reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let l = self.rank();
        let mut m = identity(l);
        for j in 0..l {
            m[i][j] -= self.cartan[j][i];
        }
        m
    }

    fn reflect(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let pairing: i64 = (0..self.rank()).map(|j| v[j] * self.cartan[j][i]).sum();
        let mut out = v.to_vec();
        out[i] -= pairing;
        out
    }

    /// The W-orbit of the simple roots, restricted to the positive half.
    fn compute_positive_roots(&self) -> Vec<Vec<i64>> {
        let l = self.rank();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..l {
            let mut e = vec![0; l];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(v) = queue.pop_front() {
            for i in 0..l {
                let r = self.reflect(i, &v);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        seen.into_iter().filter(|v| v.iter().all(|&c| c >= 0)).collect()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        let neg: Vec<i64> = v.iter().map(|c| -c).collect();
        self.positive_roots.iter().any(|r| r == v || *r == neg)
    }

    /// Builds `w0` by right-multiplying simple reflections while some simple
    /// root is still sent to a positive root; each step lengthens `w` by one.
    pub fn longest_element(&self) -> WeylElement {
        let l = self.rank();
        let mut m = identity(l);
        let mut word = Vec::new();
        // column i of m is w(a_i)
        while let Some(i) = (0..l).find(|&i| (0..l).all(|k| m[k][i] >= 0)) {
            m = mat_mul(&m, &self.reflection(i));
            word.push(i + 1);
        }
        WeylElement { matrix: m, word }
    }

    pub fn minus_one_in_weyl(&self) -> bool {
        let w0 = self.longest_element();
        let l = self.rank();
        w0.matrix == (0..l).map(|i| (0..l).map(|j| if i == j { -1 } else { 0 }).collect::<Vec<i64>>()).collect::<Vec<_>>()
    }

    /// The product of the reflections of `word` (1-based indices), left to right.
    pub fn word_matrix(&self, word: &[usize]) -> Vec<Vec<i64>> {
        word.iter().fold(identity(self.rank()), |acc, &i| mat_mul(&acc, &self.reflection(i - 1)))
    }
}

/// `matrix` acts on simple-root coordinates; `word` lists reflections
/// `s_i` (1-based) whose product is `matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

fn identity(l: usize) -> Vec<Vec<i64>> {
    (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn simple_roots(t: CartanType) -> Vec<Vector> {
    let q = |n: i64| Rational64::from_integer(n);
    let half = Rational64::new(1, 2);
    let unit = |dim: usize, i: usize| {
        let mut v = vec![Rational64::zero(); dim];
        v[i] = Rational64::one();
        v
    };
    let diff = |dim: usize, i: usize, j: usize| {
        let mut v = unit(dim, i);
        v[j] = q(-1);
        v
    };
    let l = t.rank;
    match t.ty {
        RootType::A => (0..l).map(|i| diff(l + 1, i, i + 1)).collect(),
        RootType::B | RootType::C | RootType::D => {
            let mut roots: Vec<Vector> = (0..l - 1).map(|i| diff(l, i, i + 1)).collect();
            roots.push(match t.ty {
                RootType::B => unit(l, l - 1),
                RootType::C => {
                    let mut v = vec![q(0); l];
                    v[l - 1] = q(2);
                    v
                }
                _ => {
                    let mut v = unit(l, l - 1);
                    v[l - 2] = q(1);
                    v
                }
            });
            roots
        }
        RootType::E => {
            let mut e8 = vec![
                std::iter::once(half).chain(std::iter::repeat_n(-half, 6)).chain(std::iter::once(half)).collect(),
                {
                    let mut v = unit(8, 0);
                    v[1] = q(1);
                    v
                },
            ];
            e8.extend((0..6).map(|i| diff(8, i + 1, i)));
            e8.truncate(l);
            e8
        }
        RootType::F => vec![diff(4, 1, 2), diff(4, 2, 3), unit(4, 3), vec![half, -half, -half, -half]],
        RootType::G => vec![diff(3, 0, 1), vec![q(-2), q(1), q(1)]],
    }
}

/// Whether Aut(F_n) acts faithfully on the quotient by inner automorphisms for
/// a group with the given simple factors. For `n >= 2` inner automorphisms of
/// F_n always act trivially, so the answer is `false`; for `n = 1` it is true
/// iff some factor has `w0 != -1`.
pub fn classify_faithful(factors: &[CartanType], n: usize) -> Result<bool, WeylError> {
    if factors.is_empty() {
        return Err(WeylError::EmptyFactors);
    }
    if n >= 2 {
        return Ok(false);
    }
    Ok(factors.iter().any(|&t| !RootSystem::new(t).minus_one_in_weyl()))
}

pub fn classify_faithful_n1(factors: &[CartanType]) -> Result<bool, WeylError> {
    classify_faithful(factors, 1)
}
