//! Words in the free group on `a`, `b`, the fundamental group of the
//! once-punctured torus. Capital letters are inverses: `abAB` is the
//! commutator.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TorusWord {
    letters: Vec<Letter>,
}

impl TorusWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        TorusWord { letters }
    }

    pub fn identity() -> Self {
        TorusWord::default()
    }

    /// Parses letters `a`, `A`, `b`, `B`. The empty string and `1` give the
    /// identity; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(TorusWord::identity());
        }
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'A' => Ok(Letter::AInv),
                'b' => Ok(Letter::B),
                'B' => Ok(Letter::BInv),
                other => Err(Error::ParseWord(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusWord { letters })
    }

    pub fn commutator() -> Self {
        TorusWord::new(vec![Letter::A, Letter::B, Letter::AInv, Letter::BInv])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn inverse(&self) -> Self {
        TorusWord::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Cancels adjacent inverse pairs.
    pub fn freely_reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        TorusWord::new(out)
    }

    /// Free reduction followed by cancelling first against last letter.
    pub fn cyclically_reduced(&self) -> Self {
        let w = self.freely_reduced().letters;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        TorusWord::new(w[i..j].to_vec())
    }

    /// Length after cyclic reduction.
    pub fn word_length(&self) -> usize {
        self.cyclically_reduced().letters.len()
    }

    /// Rotation by `k` letters.
    pub fn rotated(&self, k: usize) -> Self {
        let mut l = self.letters.clone();
        if !l.is_empty() {
            let n = l.len();
            l.rotate_left(k % n);
        }
        TorusWord::new(l)
    }

    /// Signed exponent sums `(p, q)` of `a` and `b`.
    pub fn abelianization(&self) -> (i64, i64) {
        self.letters.iter().fold((0, 0), |(p, q), l| match l {
            Letter::A => (p + 1, q),
            Letter::AInv => (p - 1, q),
            Letter::B => (p, q + 1),
            Letter::BInv => (p, q - 1),
        })
    }
}

impl fmt::Display for TorusWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        self.letters
            .iter()
            .try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl std::str::FromStr for TorusWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TorusWord::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> TorusWord {
        TorusWord::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("abAB"), TorusWord::commutator());
        assert_eq!(w("a b").to_string(), "ab");
        assert_eq!(w("").to_string(), "1");
        assert_eq!(w("1"), TorusWord::identity());
        assert_eq!(TorusWord::parse("abc"), Err(Error::ParseWord('c')));
    }

    #[test]
    fn reductions() {
        assert_eq!(w("aAb").freely_reduced(), w("b"));
        assert_eq!(w("abBA").freely_reduced(), TorusWord::identity());
        assert_eq!(w("baB").cyclically_reduced(), w("a"));
        assert_eq!(w("bAabaB").cyclically_reduced(), w("ba"));
        assert_eq!(w("bAbaB").cyclically_reduced(), w("b"));
        assert_eq!(w("abAB").word_length(), 4);
        assert_eq!(TorusWord::identity().word_length(), 0);
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(w("abAB").abelianization(), (0, 0));
        assert_eq!(w("aab").abelianization(), (2, 1));
        assert_eq!(w("aB").abelianization(), (1, -1));
    }

    fn word() -> impl Strategy<Value = TorusWord> {
        prop::collection::vec(
            prop_oneof![
                Just(Letter::A),
                Just(Letter::AInv),
                Just(Letter::B),
                Just(Letter::BInv)
            ],
            0..12,
        )
        .prop_map(TorusWord::new)
    }

    proptest! {
        #[test]
        fn cyclic_reduction_idempotent(x in word()) {
            let once = x.cyclically_reduced();
            prop_assert_eq!(once.cyclically_reduced(), once.clone());
            prop_assert_eq!(once.abelianization(), x.abelianization());
        }

        #[test]
        fn inverse_cancels(x in word()) {
            let mut l = x.letters().to_vec();
            l.extend_from_slice(x.inverse().letters());
            prop_assert_eq!(TorusWord::new(l).word_length(), 0);
        }
    }
}
