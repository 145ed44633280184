//! Finite unions of half-open intervals with rational endpoints.
//!
//! Every set is kept in a unique canonical form: intervals `[lo, hi)` with
//! `lo < hi`, strictly increasing, and separated by gaps of positive length.
//! Two sets that agree up to a Lebesgue-null set therefore compare equal
//! exactly when their canonical forms are equal.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::rational::{half, int, parse_rational, parse_rational_at, pow2, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[lo, hi)`, empty when `hi <= lo`.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        if lo < hi {
            Self {
                intervals: vec![(lo, hi)],
            }
        } else {
            Self::empty()
        }
    }

    /// The unit interval `[0,1)`.
    pub fn unit() -> Self {
        Self::interval(int(0), int(1))
    }

    /// Canonicalizes an arbitrary list of `[lo, hi)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut v: Vec<_> = pairs.into_iter().filter(|(lo, hi)| lo < hi).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    /// Iterates over the maximal intervals as single-interval sets.
    pub fn components(&self) -> impl Iterator<Item = IntervalSet> + '_ {
        self.intervals
            .iter()
            .map(|(lo, hi)| IntervalSet::interval(lo.clone(), hi.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn inf(&self) -> Option<&Rational> {
        self.intervals.first().map(|(lo, _)| lo)
    }

    pub fn sup(&self) -> Option<&Rational> {
        self.intervals.last().map(|(_, hi)| hi)
    }

    /// All endpoints, in increasing order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.intervals.iter().flat_map(|(lo, hi)| [lo, hi])
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_pairs(self.intervals.iter().chain(other.intervals.iter()).cloned())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = std::cmp::max(&a[i].0, &b[j].0);
            let hi = std::cmp::min(&a[i].1, &b[j].1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of two canonical sets never abut, so the result is already canonical.
        Self { intervals: out }
    }

    pub fn subtract(&self, other: &IntervalSet) -> IntervalSet {
        let b = &other.intervals;
        let mut out = Vec::new();
        let mut j = 0;
        for (lo, hi) in &self.intervals {
            while j < b.len() && b[j].1 <= *lo {
                j += 1;
            }
            let mut cur = lo.clone();
            let mut k = j;
            while k < b.len() && b[k].0 < *hi {
                if b[k].0 > cur {
                    out.push((cur.clone(), b[k].0.clone()));
                }
                if b[k].1 > cur {
                    cur = b[k].1.clone();
                }
                k += 1;
            }
            if cur < *hi {
                out.push((cur, hi.clone()));
            }
        }
        Self::from_pairs(out)
    }

    pub fn symmetric_difference(&self, other: &IntervalSet) -> IntervalSet {
        self.subtract(other).union(&other.subtract(self))
    }

    /// `[lo, hi) \ self`.
    pub fn complement_in(&self, lo: &Rational, hi: &Rational) -> IntervalSet {
        IntervalSet::interval(lo.clone(), hi.clone()).subtract(self)
    }

    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|(lo, _)| lo <= x);
        idx > 0 && *x < self.intervals[idx - 1].1
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= x && x <= hi)
    }

    /// True when some `[x - eps, x + eps)` with `eps > 0` lies inside the set.
    pub fn has_interior_point(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo < x && x < hi)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.subtract(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Image under `x -> scale * x + shift`.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Result<IntervalSet> {
        if scale.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(self.affine_nonzero(scale, shift))
    }

    fn affine_nonzero(&self, scale: &Rational, shift: &Rational) -> IntervalSet {
        let neg = scale.is_negative();
        Self::from_pairs(self.intervals.iter().map(|(lo, hi)| {
            let a = scale * lo + shift;
            let b = scale * hi + shift;
            if neg {
                (b, a)
            } else {
                (a, b)
            }
        }))
    }

    pub fn translate(&self, shift: &Rational) -> IntervalSet {
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| (lo + shift, hi + shift))
                .collect(),
        }
    }

    /// `2^e * self`.
    pub fn dilate_pow2(&self, e: i64) -> IntervalSet {
        let f = pow2(e);
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| (lo * &f, hi * &f))
                .collect(),
        }
    }

    /// Image under the contraction `tau_d(x) = (x + d) / 2`.
    pub fn tau(&self, digit: u8) -> IntervalSet {
        let shift = if digit == 0 { Rational::zero() } else { half() };
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| (lo / int(2) + &shift, hi / int(2) + &shift))
                .collect(),
        }
    }

    /// Splits every interval at the integers and returns `(k, piece - k)` pairs,
    /// so each reduced piece lies in `[0,1)`.
    pub fn integer_pieces(&self) -> Vec<(Rational, IntervalSet)> {
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals {
            let mut start = lo.clone();
            while start < *hi {
                let k = start.floor();
                let next = std::cmp::min(&k + int(1), hi.clone());
                out.push((k.clone(), IntervalSet::interval(&start - &k, &next - &k)));
                start = next;
            }
        }
        out
    }

    /// Set image under `x -> x mod 1`.
    pub fn mod1(&self) -> IntervalSet {
        Self::from_pairs(
            self.integer_pieces()
                .into_iter()
                .flat_map(|(_, p)| p.intervals),
        )
    }

    /// Whether `x -> x mod 1` is injective on the set, up to measure zero.
    pub fn mod1_is_injective(&self) -> bool {
        self.mod1().measure() == self.measure()
    }

    /// `Per(A)` restricted to `[lo, hi)`.
    pub fn periodize_within(&self, lo: &Rational, hi: &Rational) -> IntervalSet {
        let base = self.mod1();
        let mut out = IntervalSet::empty();
        let mut k = lo.floor();
        while k < *hi {
            out = out.union(&base.translate(&k));
            k += int(1);
        }
        out.intersect(&IntervalSet::interval(lo.clone(), hi.clone()))
    }

    /// Image under `s(x) = (x + 1/2) mod 1`; the input must lie in `[0,1)`.
    pub fn s_map(&self) -> Result<IntervalSet> {
        if !self.is_subset(&IntervalSet::unit()) {
            return Err(Error::OutsideUnitInterval(self.clone()));
        }
        Ok(self.translate(&half()).mod1())
    }

    /// `s_map` for sets already known to lie in `[0,1)`.
    pub(crate) fn s(&self) -> IntervalSet {
        debug_assert!(self.is_subset(&IntervalSet::unit()));
        self.translate(&half()).mod1()
    }

    /// No `x` with both `x` and `s(x)` in the set.
    pub fn is_s_simple(&self) -> bool {
        self.is_disjoint(&self.s())
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("u")?;
            }
            write!(f, "[{lo},{hi})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntervalSet {
    type Err = ParseError;

    /// Parses `[a,b)u[c,d)`; `{}`, `∅` and `empty` denote the empty set.
    /// A closing `]` is accepted and read as `)`.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let trimmed = s.trim();
        if matches!(trimmed, "{}" | "∅" | "empty") {
            return Ok(IntervalSet::empty());
        }
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let mut pairs = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() || bytes[pos] != b'[' {
                return Err(ParseError::new(pos, "expected '['"));
            }
            pos += 1;
            let comma = s[pos..].find(',').map(|i| pos + i).ok_or_else(|| {
                let at = s[pos..].find([')', ']']).map_or(s.len(), |i| pos + i);
                ParseError::new(at, "expected ','")
            })?;
            let lo = parse_rational_at(&s[pos..comma], pos)?;
            pos = comma + 1;
            let close = s[pos..]
                .find([')', ']'])
                .map(|i| pos + i)
                .ok_or_else(|| ParseError::new(s.len(), "expected ')'"))?;
            let hi = parse_rational_at(&s[pos..close], pos)?;
            if lo >= hi {
                return Err(ParseError::new(pos, format!("empty interval [{lo},{hi})")));
            }
            pairs.push((lo, hi));
            pos = close + 1;
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            if bytes[pos] == b'u' || bytes[pos] == b'U' {
                pos += 1;
            } else {
                return Err(ParseError::new(pos, "expected 'u' or end of input"));
            }
        }
        Ok(IntervalSet::from_pairs(pairs))
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.intervals.len()))?;
        for (lo, hi) in &self.intervals {
            seq.serialize_element(&[lo.to_string(), hi.to_string()])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<[String; 2]> = Vec::deserialize(deserializer)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for [lo, hi] in raw {
            let lo = parse_rational(&lo).map_err(de::Error::custom)?;
            let hi = parse_rational(&hi).map_err(de::Error::custom)?;
            pairs.push((lo, hi));
        }
        Ok(IntervalSet::from_pairs(pairs))
    }
}

/// Parses a set literal; panics on malformed input. Meant for tests and fixtures.
pub fn iset(s: &str) -> IntervalSet {
    s.parse()
        .unwrap_or_else(|e| panic!("bad interval set literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn union_merges_overlap_and_adjacency() {
        assert_eq!(iset("[0,1/2)").union(&iset("[1/4,3/4)")), iset("[0,3/4)"));
        assert_eq!(iset("[0,1/4)").union(&iset("[1/4,1/2)")), iset("[0,1/2)"));
        assert_eq!(
            iset("[-1/4,-1/8)u[1/8,1/4)").union(&iset("[-1/8,1/8)")),
            iset("[-1/4,1/4)")
        );
        assert_eq!(iset("[0,1/4)u[1/4,1/2)").len(), 1);
    }

    #[test]
    fn intersect_subtract_symdiff() {
        assert_eq!(iset("[0,1)").intersect(&iset("[1/2,3/2)")), iset("[1/2,1)"));
        assert_eq!(
            iset("[-1/4,1/4)").subtract(&iset("[-1/8,1/8)")),
            iset("[-1/4,-1/8)u[1/8,1/4)")
        );
        let a = iset("[0,1/3)u[1/2,2)");
        assert!(a.symmetric_difference(&a).is_empty());
        assert!(a.subtract(&a).is_empty());
        assert_eq!(
            iset("[0,1)").subtract(&iset("[1/4,1/2)u[3/4,2)")),
            iset("[0,1/4)u[1/2,3/4)")
        );
    }

    #[test]
    fn measures() {
        assert_eq!(iset("[0,1/2)u[3/4,1)").measure(), rat(3, 4));
        assert_eq!(IntervalSet::empty().measure(), rat(0, 1));
        assert_eq!(iset("[-1/8,1/8)").measure(), rat(1, 4));
    }

    #[test]
    fn affine_images() {
        assert_eq!(
            iset("[1/4,1/2)").affine(&rat(2, 1), &rat(0, 1)).unwrap(),
            iset("[1/2,1)")
        );
        assert_eq!(
            iset("[1/4,1/2)").affine(&rat(1, 2), &rat(1, 2)).unwrap(),
            iset("[5/8,3/4)")
        );
        assert_eq!(
            iset("[1/8,1/4)").affine(&rat(1, 2), &rat(0, 1)).unwrap(),
            iset("[1/16,1/8)")
        );
        assert_eq!(
            iset("[1/8,1/4)").affine(&rat(-1, 1), &rat(0, 1)).unwrap(),
            iset("[-1/4,-1/8)")
        );
        assert!(matches!(
            iset("[0,1)").affine(&rat(0, 1), &rat(1, 1)),
            Err(Error::ZeroScale)
        ));
    }

    #[test]
    fn mod1_reduction() {
        assert_eq!(iset("[-1/2,-1/4)").mod1(), iset("[1/2,3/4)"));
        assert_eq!(iset("[-1,-1/2)u[1/2,1)").mod1(), iset("[0,1)"));
        assert!(iset("[-1/8,1/8)").mod1_is_injective());
        assert!(!iset("[0,1/2)u[1,5/4)").mod1_is_injective());
        assert_eq!(iset("[-3/2,7/4)").mod1(), IntervalSet::unit());
        assert_eq!(iset("[1/2,17/4)").mod1(), IntervalSet::unit());
        let pieces = iset("[1/2,17/4)").integer_pieces();
        assert_eq!(pieces.len(), 5);
        assert_eq!(pieces[4], (int(4), iset("[0,1/4)")));
        assert!(!iset("[0,3/2)").mod1_is_injective());
    }

    #[test]
    fn s_map_images() {
        assert_eq!(iset("[0,1/4)").s_map().unwrap(), iset("[1/2,3/4)"));
        let x = iset("[1/8,3/8)");
        assert_eq!(x.s_map().unwrap().s_map().unwrap(), x);
        // a = 1/8: s([a/2,a) u [1-a,1-a/2)) = [1/2+a/2,1/2+a) u [1/2-a,1/2-a/2)
        assert_eq!(
            iset("[1/16,1/8)u[7/8,15/16)").s_map().unwrap(),
            iset("[3/8,7/16)u[9/16,5/8)")
        );
        assert!(matches!(
            iset("[1/2,3/2)").s_map(),
            Err(Error::OutsideUnitInterval(_))
        ));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let a = iset("[-1/4,-1/8)u[1/8,1/4)");
        assert_eq!(a.to_string(), "[-1/4,-1/8)u[1/8,1/4)");
        assert_eq!(iset(&a.to_string()), a);
        assert_eq!(iset("{}"), IntervalSet::empty());
        assert_eq!(IntervalSet::empty().to_string(), "{}");
        assert_eq!(iset(" [0, 1/2] U [1/2,1) "), IntervalSet::unit());
        let err = "[0,1/2)x[3/4,1)".parse::<IntervalSet>().unwrap_err();
        assert_eq!(err.position, 7);
        let err = "[0,q)".parse::<IntervalSet>().unwrap_err();
        assert_eq!(err.position, 3);
        assert_eq!("[0,1/2".parse::<IntervalSet>().unwrap_err().position, 6);
        assert_eq!("[0)".parse::<IntervalSet>().unwrap_err().position, 2);
        assert!("[1,0)".parse::<IntervalSet>().is_err());
    }

    #[test]
    fn json_form() {
        let a = iset("[-1/4,-1/8)u[1/8,1/4)");
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"[["-1/4","-1/8"],["1/8","1/4"]]"#);
        let back: IntervalSet = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn membership_and_interior() {
        let a = iset("[1/4,1/2)");
        assert!(a.contains(&rat(1, 4)));
        assert!(!a.contains(&rat(1, 2)));
        assert!(a.closure_contains(&rat(1, 2)));
        assert!(a.has_interior_point(&rat(1, 3)));
        assert!(!a.has_interior_point(&rat(1, 4)));
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((-40i64..40, 1i64..20, 1i64..8), 0..6).prop_map(|v| {
            IntervalSet::from_pairs(
                v.into_iter()
                    .map(|(lo, len, den)| (rat(lo, den), rat(lo, den) + rat(len, 3 * den))),
            )
        })
    }

    proptest! {
        #[test]
        fn canonical_form_is_idempotent(a in arb_set()) {
            let again = IntervalSet::from_pairs(a.intervals().iter().cloned());
            prop_assert_eq!(&again, &a);
            for w in a.intervals().windows(2) {
                prop_assert!(w[0].1 < w[1].0);
            }
        }

        #[test]
        fn boolean_laws(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(a.intersect(&b), b.intersect(&a));
            prop_assert_eq!(
                a.union(&b).measure() + a.intersect(&b).measure(),
                a.measure() + b.measure()
            );
            let lo = rat(-100, 1);
            let hi = rat(100, 1);
            prop_assert_eq!(a.subtract(&b), a.intersect(&b.complement_in(&lo, &hi)));
            prop_assert_eq!(
                a.symmetric_difference(&b),
                a.union(&b).subtract(&a.intersect(&b))
            );
            prop_assert!(a.union(&b).measure() <= a.measure() + b.measure());
        }

        #[test]
        fn affine_inverts(a in arb_set(), s in prop_oneof![1i64..9, -9i64..-1], d in 1i64..7, t in -20i64..20) {
            let scale = rat(s, d);
            let shift = rat(t, 5);
            let img = a.affine(&scale, &shift).unwrap();
            let inv = img.affine(&(rat(1, 1) / &scale), &(-&shift / &scale)).unwrap();
            prop_assert_eq!(inv, a);
        }

        #[test]
        fn s_is_involution(a in arb_set()) {
            let u = a.mod1();
            prop_assert_eq!(u.s_map().unwrap().s_map().unwrap(), u);
        }

        #[test]
        fn mod1_measure(a in arb_set()) {
            let m = a.mod1();
            prop_assert!(m.measure() <= a.measure());
            prop_assert_eq!(m.measure() == a.measure(), a.mod1_is_injective());
        }

        #[test]
        fn text_and_json_roundtrip(a in arb_set()) {
            prop_assert_eq!(iset(&a.to_string()), a.clone());
            let back: IntervalSet = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
