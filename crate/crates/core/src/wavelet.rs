//! Wavelet-set verification, scaling sets and the semi-orthogonal complement.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::rational::{ceil_log2, floor_log2, int, pow2, Rational};

/// Outcome of [`verify_wavelet_set`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WaveletSetReport {
    pub is_multiplicative_tile: bool,
    pub is_translation_simple: bool,
    pub covers_line: bool,
    pub is_parseval: bool,
    pub is_orthonormal: bool,
}

/// The scaling set `F` of an MRA Parseval wavelet set `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingData {
    #[serde(rename = "F")]
    pub f: IntervalSet,
    #[serde(rename = "P")]
    pub p: IntervalSet,
    #[serde(rename = "F_is_translation_simple")]
    pub f_is_translation_simple: bool,
    /// Iterations of `F -> F/2 u P/2` run before the fixed point was certified.
    pub iterations: usize,
}

/// The classical Shannon set `[-1,-1/2) u [1/2,1)`.
pub fn shannon_set() -> IntervalSet {
    IntervalSet::from_pairs([
        (int(-1), Rational::new((-1).into(), 2.into())),
        (Rational::new(1.into(), 2.into()), int(1)),
    ])
}

/// Positive and negative parts of a set, the latter reflected to the positive axis.
fn sides(p: &IntervalSet) -> (IntervalSet, IntervalSet) {
    let big = p
        .endpoints()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero)
        + int(1);
    let pos = p.intersect(&IntervalSet::interval(Rational::zero(), big.clone()));
    let neg = p
        .intersect(&IntervalSet::interval(-big, Rational::zero()))
        .affine(&int(-1), &Rational::zero())
        .expect("nonzero scale");
    (pos, neg)
}

/// `(delta, w)` with the set contained in `[delta, w)`, for a nonempty set of positive numbers.
fn radial_bounds(side: &IntervalSet) -> Option<(Rational, Rational)> {
    Some((side.inf()?.clone(), side.sup()?.clone()))
}

/// Number of octaves beyond which dilates of a set inside `[delta, w)` cannot meet.
fn octave_span(delta: &Rational, w: &Rational) -> i64 {
    ceil_log2(&(w / delta)).max(1)
}

/// Whether `2^m A` and `A` are disjoint for `1 <= m <= max_shift`.
pub fn dilates_disjoint(a: &IntervalSet, max_shift: i64) -> bool {
    (1..=max_shift).all(|m| a.is_disjoint(&a.dilate_pow2(m)))
}

/// Splits a subset of `(0, inf)` by octaves: returns `(m, 2^{-m}(A n [2^m, 2^{m+1})))`,
/// each reduced piece lying in `[1,2)`.
pub fn octave_pieces(a: &IntervalSet) -> Vec<(i64, IntervalSet)> {
    let (Some(lo), Some(hi)) = (a.inf(), a.sup()) else {
        return Vec::new();
    };
    assert!(
        !lo.is_negative(),
        "octave_pieces expects a subset of [0, inf)"
    );
    if lo.is_zero() {
        panic!("octave_pieces needs a set bounded away from 0");
    }
    let first = floor_log2(lo);
    let last = floor_log2(hi);
    (first..=last)
        .filter_map(|m| {
            let band = IntervalSet::interval(pow2(m), pow2(m + 1));
            let piece = a.intersect(&band);
            (!piece.is_empty()).then(|| (m, piece.dilate_pow2(-m)))
        })
        .collect()
}

fn side_is_tile(side: &IntervalSet, j_window: i64) -> (bool, bool) {
    let Some((delta, w)) = radial_bounds(side) else {
        return (true, false);
    };
    if delta.is_zero() {
        // An interval touching 0 always meets its own dilate.
        return (false, false);
    }
    let span = octave_span(&delta, &w);
    let disjoint = dilates_disjoint(side, span.max(2 * j_window));
    // Coverage of one full octave plus disjointness settles every scale. The
    // dilates range a little past the window so its edge octaves can be filled.
    let jw = j_window + span + 1;
    let mut union = IntervalSet::empty();
    for j in -jw..=jw {
        union = union.union(&side.dilate_pow2(j));
    }
    let window = IntervalSet::interval(&delta * pow2(-j_window), &w * pow2(j_window));
    let octave = IntervalSet::interval(delta.clone(), &delta * int(2));
    let covers = window.union(&octave).is_subset(&union);
    (disjoint, covers)
}

/// Checks whether `P` is a Parseval wavelet set: a multiplicative tile of the
/// line that is also translation simple.
pub fn verify_wavelet_set(p: &IntervalSet, j_window: u32) -> Result<WaveletSetReport> {
    if p.is_empty() {
        return Err(Error::EmptyWaveletSet);
    }
    let jw = i64::from(j_window.max(1));
    let (pos, neg) = sides(p);
    let (pos_disjoint, pos_covers) = side_is_tile(&pos, jw);
    let (neg_disjoint, neg_covers) = side_is_tile(&neg, jw);
    let covers_line = pos_covers && neg_covers;
    let is_multiplicative_tile = pos_disjoint && neg_disjoint && covers_line;
    let is_translation_simple = p.mod1_is_injective();
    let is_parseval = is_multiplicative_tile && is_translation_simple;
    Ok(WaveletSetReport {
        is_multiplicative_tile,
        is_translation_simple,
        covers_line,
        is_parseval,
        is_orthonormal: is_parseval && p.measure() == int(1),
    })
}

fn require_parseval(p: &IntervalSet) -> Result<()> {
    if verify_wavelet_set(p, 10)?.is_parseval {
        Ok(())
    } else {
        Err(Error::NotParseval(p.clone()))
    }
}

/// Lowest component `[l, h)` of a positive set with `h >= 2l`.
fn lowest_full_octave(side: &IntervalSet) -> Option<Rational> {
    side.intervals()
        .iter()
        .find(|(lo, hi)| lo.is_positive() && *hi >= lo * int(2))
        .map(|(lo, _)| lo.clone())
}

/// Adds the limit interval `[0, l)` once an iterate contains a full octave
/// `[l, 2l)`, and the mirror image on the left. Iterates are subsets of the
/// scaling set, which is invariant under halving, so the fill never overshoots.
fn accumulation_fill(f: &IntervalSet) -> IntervalSet {
    let (pos, neg) = sides(f);
    let mut out = f.clone();
    if let Some(l) = lowest_full_octave(&pos) {
        out = out.union(&IntervalSet::interval(Rational::zero(), l));
    }
    if let Some(l) = lowest_full_octave(&neg) {
        out = out.union(&IntervalSet::interval(-l, Rational::zero()));
    }
    out
}

/// Computes `F = U_{j>=1} 2^{-j} P` as the exact fixed point of `F = F/2 u P/2`.
///
/// Each iterate is offered a fill of the gap at the accumulation point 0 and
/// accepted as soon as the fixed-point identity holds exactly. Bounded fixed
/// points of this equation agree up to measure zero, so the first certified
/// candidate is the scaling set.
pub fn scaling_set(p: &IntervalSet, max_iter: usize) -> Result<ScalingData> {
    require_parseval(p)?;
    let p_half = p.dilate_pow2(-1);
    let step = |f: &IntervalSet| f.dilate_pow2(-1).union(&p_half);
    let mut f = p_half.clone();
    for iteration in 1..=max_iter {
        f = step(&f);
        let candidate = accumulation_fill(&f);
        if step(&candidate) == candidate {
            let doubled = candidate.dilate_pow2(1);
            if !candidate.is_subset(&doubled) || doubled.subtract(&candidate) != *p {
                return Err(Error::Internal(format!(
                    "scaling set {candidate} does not reproduce {p}"
                )));
            }
            return Ok(ScalingData {
                f_is_translation_simple: candidate.mod1_is_injective(),
                f: candidate,
                p: p.clone(),
                iterations: iteration,
            });
        }
    }
    Err(Error::NonClosingScalingSet {
        iterations: max_iter,
    })
}

/// Checks carried out by [`semiorthogonal_complement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    /// `mod1(P)` and `mod1(F')` are disjoint with union `[0,1)`.
    pub translation_tiling: bool,
    /// `2^j F'` pairwise disjoint for `|j| <= j_window`.
    pub dilates_disjoint: bool,
    pub j_window: u32,
}

/// Builds `F'` inside the orthonormal wavelet set `G` so that `P` and `F'`
/// together are translation congruent to `[0,1)`.
pub fn semiorthogonal_complement(
    p: &IntervalSet,
    g: &IntervalSet,
    j_window: u32,
) -> Result<(IntervalSet, ComplementReport)> {
    require_parseval(p)?;
    if !g.mod1_is_injective() || g.mod1() != IntervalSet::unit() {
        return Err(Error::NotTranslationCongruent(g.clone()));
    }
    let e = p.mod1();
    let target = IntervalSet::unit().subtract(&e);
    let f_prime = g
        .integer_pieces()
        .into_iter()
        .fold(IntervalSet::empty(), |acc, (k, piece)| {
            acc.union(&piece.intersect(&target).translate(&k))
        });
    let fm = f_prime.mod1();
    let report = ComplementReport {
        translation_tiling: f_prime.mod1_is_injective()
            && e.is_disjoint(&fm)
            && e.union(&fm) == IntervalSet::unit(),
        dilates_disjoint: dilates_disjoint(&f_prime, 2 * i64::from(j_window)),
        j_window,
    };
    Ok((f_prime, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::iset;
    use crate::rational::rat;

    /// Independent tile test: every octave-reduced piece of each side must
    /// fill `[1,2)` exactly once.
    fn octave_oracle(p: &IntervalSet) -> bool {
        let (pos, neg) = sides(p);
        [pos, neg].iter().all(|side| {
            if side.inf().is_none_or(|d| d.is_zero()) {
                return false;
            }
            let pieces = octave_pieces(side);
            let total: Rational = pieces.iter().map(|(_, s)| s.measure()).sum();
            let union = pieces
                .iter()
                .fold(IntervalSet::empty(), |acc, (_, s)| acc.union(s));
            total == int(1) && union == iset("[1,2)")
        })
    }

    fn two_interval(a: Rational) -> IntervalSet {
        IntervalSet::interval(-&a * int(2), -a.clone())
            .union(&IntervalSet::interval(a.clone(), a * int(2)))
    }

    #[test]
    fn shannon_is_orthonormal() {
        let r = verify_wavelet_set(&shannon_set(), 10).unwrap();
        assert!(r.is_orthonormal && r.is_parseval && r.covers_line);
    }

    #[test]
    fn two_interval_set_is_parseval_not_orthonormal() {
        for a in [rat(1, 8), rat(1, 16), rat(1, 4)] {
            let p = two_interval(a);
            let r = verify_wavelet_set(&p, 10).unwrap();
            assert!(r.is_parseval && !r.is_orthonormal, "{p}");
            assert!(octave_oracle(&p));
        }
    }

    #[test]
    fn rejects_non_tiles() {
        let r = verify_wavelet_set(&iset("[0,1)"), 10).unwrap();
        assert!(!r.is_multiplicative_tile && !r.is_parseval);
        let r = verify_wavelet_set(&iset("[1/2,1)"), 10).unwrap();
        assert!(!r.covers_line && !r.is_parseval);
        // Tile but not translation simple.
        let r = verify_wavelet_set(&iset("[-2,-1)u[1,2)"), 10).unwrap();
        assert!(r.is_multiplicative_tile && !r.is_translation_simple && !r.is_parseval);
        // Overlapping octaves.
        let r = verify_wavelet_set(&iset("[-1,-1/2)u[1/2,5/4)"), 10).unwrap();
        assert!(!r.is_multiplicative_tile);
        assert!(matches!(
            verify_wavelet_set(&IntervalSet::empty(), 10),
            Err(Error::EmptyWaveletSet)
        ));
    }

    #[test]
    fn scaling_sets() {
        let s = scaling_set(&two_interval(rat(1, 8)), 64).unwrap();
        assert_eq!(s.f, iset("[-1/8,1/8)"));
        assert!(s.f_is_translation_simple);
        let s = scaling_set(&shannon_set(), 64).unwrap();
        assert_eq!(s.f, iset("[-1/2,1/2)"));
        assert_eq!(s.f.dilate_pow2(-1).union(&s.p.dilate_pow2(-1)), s.f);
        // Pieces spread over two octaves leave a gap in F.
        let p = iset("[-1/4,-1/8)u[1/8,3/16)u[3/8,1/2)");
        assert!(octave_oracle(&p));
        let s = scaling_set(&p, 64).unwrap();
        assert_eq!(s.f, iset("[-1/8,1/8)u[3/16,1/4)"));
        assert_eq!(s.f.measure(), p.measure());
        let err = scaling_set(&iset("[0,1)"), 8).unwrap_err();
        assert!(matches!(err, Error::NotParseval(_)));
    }

    #[test]
    fn complement_of_two_interval_set() {
        let p = two_interval(rat(1, 8));
        let (fp, report) = semiorthogonal_complement(&p, &shannon_set(), 8).unwrap();
        assert!(report.translation_tiling && report.dilates_disjoint);
        assert_eq!(fp, iset("[-1,-7/8)u[-3/4,-1/2)u[1/2,3/4)u[7/8,1)"));
        assert_eq!(p.measure() + fp.measure(), int(1));
        let (fp, _) = semiorthogonal_complement(&shannon_set(), &shannon_set(), 8).unwrap();
        assert!(fp.is_empty());
        assert!(matches!(
            semiorthogonal_complement(&p, &iset("[0,1/2)"), 8),
            Err(Error::NotTranslationCongruent(_))
        ));
    }
}
