//! Eventually periodic binary words and cycles of the maps `tau_0`, `tau_1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, Result};
use crate::rational::{int, Rational};

/// Parses a plain binary word such as `1001100`.
pub fn parse_bits(s: &str) -> std::result::Result<Vec<u8>, ParseError> {
    s.bytes()
        .enumerate()
        .map(|(i, b)| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(ParseError::new(
                i,
                format!("expected binary digit, found {:?}", b as char),
            )),
        })
        .collect()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

/// Shortest word whose repetition gives `w`.
fn primitive_root(w: &[u8]) -> &[u8] {
    let n = w.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| w[i] == w[i - d]))
        .map_or(w, |d| &w[..d])
}

/// An infinite binary word `preperiod period period ...` in canonical form:
/// the period is primitive and the preperiod as short as possible.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EPWord {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl EPWord {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition(
                "period of a word must be nonempty".into(),
            ));
        }
        if preperiod.iter().chain(period.iter()).any(|&b| b > 1) {
            return Err(Error::Precondition("words are binary".into()));
        }
        Ok(Self::canonical(preperiod, period))
    }

    fn canonical(mut preperiod: Vec<u8>, period: Vec<u8>) -> Self {
        let mut period = primitive_root(&period).to_vec();
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Self { preperiod, period }
    }

    /// The constant word `d d d ...`.
    pub fn constant(digit: u8) -> Self {
        Self {
            preperiod: Vec::new(),
            period: vec![digit],
        }
    }

    /// The purely periodic word with the given period.
    pub fn periodic(period: &[u8]) -> Result<Self> {
        Self::new(Vec::new(), period.to_vec())
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// The digit at 0-based position `n`.
    pub fn digit(&self, n: usize) -> u8 {
        match n.checked_sub(self.preperiod.len()) {
            None => self.preperiod[n],
            Some(k) => self.period[k % self.period.len()],
        }
    }

    pub fn first_digits(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.digit(i)).collect()
    }

    /// `d` followed by this word.
    pub fn prepend(&self, digit: u8) -> Self {
        let mut pre = Vec::with_capacity(self.preperiod.len() + 1);
        pre.push(digit);
        pre.extend_from_slice(&self.preperiod);
        Self::canonical(pre, self.period.clone())
    }

    /// The word with its first `n` digits removed.
    pub fn shift(&self, n: usize) -> Self {
        if n <= self.preperiod.len() {
            return Self {
                preperiod: self.preperiod[n..].to_vec(),
                period: self.period.clone(),
            };
        }
        let mut period = self.period.clone();
        let r = (n - self.preperiod.len()) % period.len();
        period.rotate_left(r);
        Self {
            preperiod: Vec::new(),
            period,
        }
    }

    /// `Some(d)` when the word ends in the constant tail `d d d ...`.
    pub fn constant_tail(&self) -> Option<u8> {
        (self.period.len() == 1).then(|| self.period[0])
    }
}

impl fmt::Display for EPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})",
            bits_to_string(&self.preperiod),
            bits_to_string(&self.period)
        )
    }
}

impl fmt::Debug for EPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for EPWord {
    type Err = ParseError;

    /// Parses `preperiod(period)`, e.g. `01(100)` or `(1)`.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let open = s
            .find('(')
            .ok_or_else(|| ParseError::new(s.len(), "expected '('"))?;
        let close = s
            .rfind(')')
            .filter(|&c| c > open)
            .ok_or_else(|| ParseError::new(s.len(), "expected ')'"))?;
        if close + 1 != s.len() {
            return Err(ParseError::new(close + 1, "trailing characters after ')'"));
        }
        let pre = parse_bits(&s[..open])?;
        let per = parse_bits(&s[open + 1..close])
            .map_err(|e| ParseError::new(e.position + open + 1, e.message))?;
        if per.is_empty() {
            return Err(ParseError::new(open + 1, "empty period"));
        }
        Ok(Self::canonical(pre, per))
    }
}

impl Serialize for EPWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EPWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A periodic orbit `theta_0 -> theta_1 -> ... -> theta_0` with
/// `theta_{j+1} = tau_{l_j}(theta_j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    word: Vec<u8>,
    points: Vec<Rational>,
}

impl Cycle {
    /// The cycle of a primitive word `l_0 ... l_{p-1}`, in the rotation given.
    pub fn from_word(word: &[u8]) -> Result<Self> {
        if word.is_empty() || word.iter().any(|&b| b > 1) {
            return Err(Error::Precondition(format!(
                "cycle word must be a nonempty binary word, got {word:?}"
            )));
        }
        if primitive_root(word).len() != word.len() {
            return Err(Error::Precondition(format!(
                "cycle word {} is not primitive",
                bits_to_string(word)
            )));
        }
        let p = word.len();
        let numer = word
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .fold(BigInt::from(0), |acc, (i, _)| acc + (BigInt::one() << i));
        let denom = (BigInt::one() << p) - 1;
        let mut points = Vec::with_capacity(p);
        let mut theta = Rational::new(numer, denom);
        for &l in word {
            points.push(theta.clone());
            theta = (theta + int(i64::from(l))) / int(2);
        }
        debug_assert_eq!(theta, points[0]);
        Ok(Self {
            word: word.to_vec(),
            points,
        })
    }

    /// The rotation of the cycle whose first point is the smallest.
    pub fn canonical(&self) -> Self {
        let j = (0..self.len())
            .min_by(|&a, &b| self.points[a].cmp(&self.points[b]))
            .unwrap_or(0);
        self.rotated(j)
    }

    /// The same orbit started at `theta_j`.
    pub fn rotated(&self, j: usize) -> Self {
        let mut word = self.word.clone();
        let mut points = self.points.clone();
        word.rotate_left(j);
        points.rotate_left(j);
        Self { word, points }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn word_string(&self) -> String {
        bits_to_string(&self.word)
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `Some(d)` for the fixed points `0` (word `0`) and `1` (word `1`).
    pub fn constant_digit(&self) -> Option<u8> {
        (self.word.len() == 1).then(|| self.word[0])
    }

    /// The index `j` with `period == l_j l_{j+1} ... l_{j-1}`.
    pub fn rotation_index(&self, period: &[u8]) -> Option<usize> {
        if period.len() != self.len() {
            return None;
        }
        let p = self.len();
        (0..p).find(|&j| (0..p).all(|i| period[i] == self.word[(j + i) % p]))
    }

    /// `theta_0 -> ... -> theta_0` as the composed contraction `tau_{l_{p-1}} ... tau_{l_0}`.
    pub fn orbit_word(&self) -> EPWord {
        EPWord::canonical(Vec::new(), self.word.clone())
    }
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle({}: ", self.word_string())?;
        for (i, t) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            word: String,
            points: Vec<String>,
        }
        Repr {
            word: self.word_string(),
            points: self.points.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}
