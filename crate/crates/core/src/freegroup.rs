//! Reduced words in the free group F_n.
//!
//! Generators are numbered `1..=n`. A [`Word`] always carries its rank and is
//! kept freely reduced: no letter is ever adjacent to its own inverse.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: usize,
    inverse: bool,
}

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator >= 1, "generators are numbered from 1");
        Letter { generator, inverse }
    }

    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    pub fn generator(self) -> usize {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// +1 or -1.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.generator)
        } else {
            write!(f, "x{}", self.generator)
        }
    }
}

/// A freely reduced word of F_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Word, WordError> {
        Word::reduce([Letter::pos(index)], rank)
    }

    /// Freely reduces a raw letter sequence (stack-based, single pass).
    pub fn reduce<I>(raw: I, rank: usize) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut letters: Vec<Letter> = Vec::new();
        for letter in raw {
            if letter.generator > rank {
                return Err(WordError::IndexOutOfRange { index: letter.generator, rank });
            }
            push_reducing(&mut letters, letter);
        }
        Ok(Word { rank, letters })
    }

    /// Builds a word from `(generator, exponent)` pairs, e.g. `[(1, 2), (2, -1)]`.
    pub fn from_powers(rank: usize, powers: &[(usize, i64)]) -> Result<Word, WordError> {
        let raw = powers.iter().flat_map(|&(g, e)| {
            let letter = Letter::new(g.max(1), e < 0);
            std::iter::repeat_n(letter, e.unsigned_abs() as usize)
        });
        for &(g, _) in powers {
            if g == 0 || g > rank {
                return Err(WordError::IndexOutOfRange { index: g, rank });
            }
        }
        Word::reduce(raw, rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut letters = self.letters.clone();
        for &letter in &other.letters {
            push_reducing(&mut letters, letter);
        }
        Ok(Word { rank: self.rank, letters })
    }

    pub fn invert(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base).expect("same rank");
        }
        out
    }

    /// Commutator `u^-1 v^-1 u v`.
    pub fn commutator(&self, other: &Word) -> Result<Word, WordError> {
        self.invert().multiply(&other.invert())?.multiply(self)?.multiply(other)
    }

    /// Returns `(core, conjugator)` with `self = conjugator * core * conjugator^-1`
    /// and `core` cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k].cancels(l[l.len() - 1 - k]) {
            k += 1;
        }
        let core = Word { rank: self.rank, letters: l[k..l.len() - k].to_vec() };
        let conjugator = Word { rank: self.rank, letters: l[..k].to_vec() };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) if self.letters.len() > 1 => !a.cancels(b),
            _ => true,
        }
    }

    /// Same letters viewed in a larger (or equal) rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word, WordError> {
        Word::reduce(self.letters.iter().copied(), rank)
    }

    /// Parses the textual word grammar: whitespace-separated `x<k>` tokens with
    /// an optional `^-1` or `^<int>` suffix. For `rank <= 26` single letters are
    /// accepted too: `a` is generator 1, `A` its inverse.
    pub fn parse(text: &str, rank: usize) -> Result<Word, WordError> {
        let raw = parse_letters(text)?;
        Word::reduce(raw, rank).map_err(|e| match e {
            WordError::IndexOutOfRange { index, rank } => WordError::Syntax {
                position: 0,
                message: format!("generator x{index} exceeds rank {rank}"),
            },
            e => e,
        })
    }

    /// Letter-sugar form (`a b A`), only meaningful for rank <= 26.
    pub fn to_sugar(&self) -> String {
        self.letters
            .iter()
            .map(|l| {
                let c = (b'a' + (l.generator - 1) as u8) as char;
                if l.inverse {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .map(String::from)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn push_reducing(letters: &mut Vec<Letter>, letter: Letter) {
    match letters.last() {
        Some(&last) if last.cancels(letter) => {
            letters.pop();
        }
        _ => letters.push(letter),
    }
}

fn syntax(position: usize, message: impl Into<String>) -> WordError {
    WordError::Syntax { position, message: message.into() }
}

/// Largest generator index mentioned in `text`; useful for choosing a rank.
pub fn max_generator(text: &str) -> Result<usize, WordError> {
    Ok(parse_letters(text)?.iter().map(|l| l.generator).max().unwrap_or(0))
}

fn parse_letters(text: &str) -> Result<Vec<Letter>, WordError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let (generator, mut inverse) = if c == b'x' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
            i += 1;
            let digits = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let index: usize = text[digits..i].parse().map_err(|_| syntax(digits, "bad generator index"))?;
            if index == 0 {
                return Err(syntax(digits, "generators are numbered from 1"));
            }
            (index, false)
        } else if c.is_ascii_alphabetic() {
            i += 1;
            ((c.to_ascii_lowercase() - b'a') as usize + 1, c.is_ascii_uppercase())
        } else {
            return Err(syntax(start, format!("unexpected character {:?}", c as char)));
        };
        let mut exponent: i64 = 1;
        if bytes.get(i) == Some(&b'^') {
            i += 1;
            let exp_start = i;
            if bytes.get(i) == Some(&b'-') {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exponent = text[exp_start..i]
                .parse()
                .map_err(|_| syntax(exp_start, "expected integer exponent after '^'"))?;
        }
        if i < bytes.len() && !bytes[i].is_ascii_whitespace() && !bytes[i].is_ascii_alphabetic() {
            return Err(syntax(i, format!("unexpected character {:?}", bytes[i] as char)));
        }
        if exponent < 0 {
            inverse = !inverse;
        }
        let letter = Letter { generator, inverse };
        out.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
    }
    Ok(out)
}
