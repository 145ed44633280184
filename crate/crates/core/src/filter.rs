//! Low-pass filter sets `M` with `m_0 = Per(chi_M)` satisfying the QMF condition.

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::rational::{ceil_log2, half, int, pow2, rat, Rational};
use crate::words::{bits_to_string, Cycle};

/// A QMF filter set together with the parts it was assembled from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterSet {
    pub m: IntervalSet,
    /// `mod1(F/2)`, the part forced into `M` by the scaling equation.
    pub tau_f_half: IntervalSet,
    /// The supplement of the part of `mod1(F)` that `M` must avoid.
    pub c: IntervalSet,
    /// The completion chosen on the undecided zone.
    pub d: IntervalSet,
}

impl Serialize for FilterSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Provenance<'a> {
            #[serde(rename = "tau_F_half")]
            tau_f_half: &'a IntervalSet,
            #[serde(rename = "C")]
            c: &'a IntervalSet,
            #[serde(rename = "D")]
            d: &'a IntervalSet,
        }
        let mut st = serializer.serialize_struct("FilterSet", 2)?;
        st.serialize_field("M", &self.m)?;
        st.serialize_field(
            "provenance",
            &Provenance {
                tau_f_half: &self.tau_f_half,
                c: &self.c,
                d: &self.d,
            },
        )?;
        st.end()
    }
}

/// How the undecided zone of the filter is filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DStrategy {
    /// `D = [0,1/2) \ ((B n [0,1/2)) u s(B n [1/2,1)))` for the forced part `B`.
    Standard,
    ExplicitSet(IntervalSet),
    /// Fill the undecided zone so that the cycle of this word sits inside `M`.
    CycleSeeded(Vec<u8>),
}

fn left_half() -> IntervalSet {
    IntervalSet::interval(Rational::zero(), half())
}

fn right_half() -> IntervalSet {
    IntervalSet::interval(half(), Rational::one())
}

/// Whether `m` is the support of a QMF filter: `M` and `s(M)` tile `[0,1)`.
pub fn is_qmf(m: &IntervalSet) -> bool {
    m.is_subset(&IntervalSet::unit()) && m.is_s_simple() && m.union(&m.s()) == IntervalSet::unit()
}

/// The default completion of an `s`-simple set `base` inside `[0,1)`.
pub fn default_completion(base: &IntervalSet) -> IntervalSet {
    let taken = base
        .intersect(&left_half())
        .union(&base.intersect(&right_half()).s());
    left_half().subtract(&taken)
}

/// The part of `[0,1)` left open once `base` and its supplement are fixed.
pub fn undecided_zone(base: &IntervalSet) -> IntervalSet {
    IntervalSet::unit().subtract(&base.union(&base.s()))
}

fn validate_completion(base: &IntervalSet, d: &IntervalSet) -> Result<IntervalSet> {
    let outside = d.subtract(&IntervalSet::unit());
    if !outside.is_empty() {
        return Err(Error::InvalidCompletion {
            reason: "D is not contained in [0,1)",
            offending: outside,
        });
    }
    let clash = d.intersect(&base.union(&base.s()));
    if !clash.is_empty() {
        return Err(Error::InvalidCompletion {
            reason: "D meets the forced part of M or its supplement",
            offending: clash,
        });
    }
    let self_clash = d.intersect(&d.s());
    if !self_clash.is_empty() {
        return Err(Error::InvalidCompletion {
            reason: "D is not s-simple",
            offending: self_clash,
        });
    }
    let m = base.union(d);
    let gap = IntervalSet::unit().subtract(&m.union(&m.s()));
    if !gap.is_empty() {
        return Err(Error::InvalidCompletion {
            reason: "D leaves part of [0,1) uncovered by M and s(M)",
            offending: gap,
        });
    }
    Ok(m)
}

/// Cells of the undecided zone around the cycle points and their supplements:
/// each point of the zone joins `D` when the nearest such point is on the cycle.
fn cycle_seeded_completion(zone: &IntervalSet, cycle: &Cycle) -> Result<IntervalSet> {
    let cycle_points: Vec<Rational> = cycle.points().to_vec();
    let supplements: Vec<Rational> = cycle_points
        .iter()
        .map(|t| {
            let x = t + half();
            if x >= Rational::one() {
                x - Rational::one()
            } else {
                x
            }
        })
        .collect();
    for t in &cycle_points {
        if !zone.has_interior_point(t) {
            return Err(Error::Precondition(format!(
                "cycle point {t} of {} does not lie inside the undecided zone {zone}",
                cycle.word_string()
            )));
        }
        if supplements.contains(t) {
            return Err(Error::Precondition(format!(
                "cycle point {t} coincides with a supplement"
            )));
        }
    }
    let mut main: Vec<(Rational, bool)> = cycle_points
        .into_iter()
        .map(|t| (t, true))
        .chain(supplements.into_iter().map(|t| (t, false)))
        .collect();
    main.sort();
    let mut d = Vec::new();
    for (lo, hi) in zone.intervals() {
        let inside: Vec<&(Rational, bool)> =
            main.iter().filter(|(t, _)| lo < t && t < hi).collect();
        if inside.is_empty() {
            continue;
        }
        for (i, (t, on_cycle)) in inside.iter().enumerate() {
            if !on_cycle {
                continue;
            }
            let start = match i {
                0 => lo.clone(),
                _ => (&inside[i - 1].0 + t) / int(2),
            };
            let end = match inside.get(i + 1) {
                None => hi.clone(),
                Some((next, _)) => (t + next) / int(2),
            };
            d.push((start, end));
        }
    }
    let d = IntervalSet::from_pairs(d);
    // Components without main points are split evenly between M and s(M).
    let empty_left: Vec<_> = zone
        .intersect(&left_half())
        .intervals()
        .iter()
        .filter(|(lo, hi)| !main.iter().any(|(t, _)| lo < t && t < hi))
        .cloned()
        .collect();
    Ok(d.union(&IntervalSet::from_pairs(empty_left)))
}

fn forced_parts(f: &IntervalSet) -> Result<(IntervalSet, IntervalSet, IntervalSet)> {
    if !f.mod1_is_injective() {
        return Err(Error::NotMra(f.clone()));
    }
    let f_half = f.dilate_pow2(-1);
    if !f_half.is_subset(f) {
        return Err(Error::Precondition(format!(
            "{f} does not contain its half, so it is not a scaling set"
        )));
    }
    let tau_f = f.mod1();
    let tau_f_half = f_half.mod1();
    let c = tau_f.subtract(&tau_f_half).s();
    Ok((tau_f, tau_f_half, c))
}

/// Builds the filter set of the scaling set `F` with the given completion.
pub fn build_filter(f: &IntervalSet, strategy: &DStrategy) -> Result<FilterSet> {
    let (tau_f, tau_f_half, c) = forced_parts(f)?;
    let base = c.union(&tau_f_half);
    if !base.is_s_simple() {
        return Err(Error::Internal(format!(
            "forced part {base} of the filter is not s-simple"
        )));
    }
    let d = match strategy {
        DStrategy::Standard => default_completion(&base),
        DStrategy::ExplicitSet(d) => d.clone(),
        DStrategy::CycleSeeded(word) => {
            let cycle = Cycle::from_word(word)?;
            cycle_seeded_completion(&undecided_zone(&base), &cycle)?
        }
    };
    let m = validate_completion(&base, &d)?;
    let filter = FilterSet {
        m,
        tau_f_half,
        c,
        d,
    };
    check_filter(&filter, f, &tau_f)?;
    Ok(filter)
}

/// Exact postconditions shared by every construction.
fn check_filter(filter: &FilterSet, f: &IntervalSet, tau_f: &IntervalSet) -> Result<()> {
    let m = &filter.m;
    if !is_qmf(m) || m.measure() != rat(1, 2) {
        return Err(Error::NotQmf(m.clone()));
    }
    if !filter.tau_f_half.is_subset(m) {
        return Err(Error::Internal(format!("{m} misses part of mod1(F/2)")));
    }
    if !m.is_disjoint(&tau_f.subtract(&filter.tau_f_half)) {
        return Err(Error::Internal(format!("{m} meets mod1(F) \\ mod1(F/2)")));
    }
    if let (Some(lo), Some(hi)) = (f.inf(), f.sup()) {
        let per_m = m.periodize_within(lo, hi);
        if f.intersect(&per_m) != f.dilate_pow2(-1) {
            return Err(Error::Internal(format!(
                "scaling identity F/2 = F n Per(M) fails for {m}"
            )));
        }
    }
    Ok(())
}

/// The filter of the construction around a cycle for the wavelet set
/// `[-2a,-a) u [a,2a)`, assembled from midpoint intervals between the cycle
/// points and their supplements.
pub fn build_cycle_filter(a: &Rational, cycle_word: &[u8]) -> Result<FilterSet> {
    let sixteenth = rat(1, 16);
    if !(a > &Rational::zero() && a < &sixteenth) {
        return Err(Error::Precondition(format!(
            "a = {a} must satisfy 0 < a < 1/16"
        )));
    }
    if !(cycle_word.contains(&0) && cycle_word.contains(&1)) {
        return Err(Error::Precondition(format!(
            "cycle word {} must contain both digits",
            bits_to_string(cycle_word)
        )));
    }
    let cycle = Cycle::from_word(cycle_word)?;
    let a2 = a / int(2);
    let h = half();
    let one = Rational::one();
    let forced = IntervalSet::from_pairs([
        (Rational::zero(), a2.clone()),
        (&h - a, &h - &a2),
        (&h + &a2, &h + a),
        (&one - &a2, one.clone()),
    ]);
    let zone = IntervalSet::from_pairs([(a.clone(), &h - a), (&h + a, &one - a)]);
    let s = |x: &Rational| {
        let y = x + &h;
        if y >= one {
            y - &one
        } else {
            y
        }
    };
    for t in cycle.points() {
        if !zone.has_interior_point(t) {
            return Err(Error::Precondition(format!(
                "cycle point {t} lies outside the undecided zone {zone}"
            )));
        }
    }
    let mut main: Vec<(Rational, bool)> = cycle
        .points()
        .iter()
        .map(|t| (t.clone(), true))
        .chain(cycle.points().iter().map(|t| (s(t), false)))
        .collect();
    main.sort();
    if main.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Precondition(
            "a cycle point coincides with a supplement".into(),
        ));
    }
    let c_l = main
        .iter()
        .filter(|(t, on)| *on && *t < h)
        .map(|(t, _)| t.clone())
        .max();
    let c_r = main
        .iter()
        .filter(|(t, on)| *on && *t > h)
        .map(|(t, _)| t.clone())
        .min();
    let (Some(c_l), Some(c_r)) = (c_l, c_r) else {
        return Err(Error::Precondition(
            "cycle has points on one side of 1/2 only".into(),
        ));
    };
    let mut pieces = Vec::new();
    for (i, (c, on_cycle)) in main.iter().enumerate() {
        if !on_cycle {
            continue;
        }
        let left = i.checked_sub(1).map(|k| &main[k].0);
        let right = main.get(i + 1).map(|(t, _)| t);
        let piece = if *c == c_l {
            let l =
                left.ok_or_else(|| Error::Precondition(format!("no main point left of {c}")))?;
            ((l + c) / int(2), &h - &a2)
        } else if *c == c_r {
            let r =
                right.ok_or_else(|| Error::Precondition(format!("no main point right of {c}")))?;
            (&h + &a2, (c + r) / int(2))
        } else {
            match (left, right) {
                (Some(l), Some(r)) => ((l + c) / int(2), (c + r) / int(2)),
                _ => {
                    return Err(Error::Precondition(format!(
                        "cycle point {c} lacks a neighboring main point"
                    )))
                }
            }
        };
        pieces.push(piece);
    }
    let d = IntervalSet::from_pairs(pieces);
    let m = forced.union(&d);
    if !is_qmf(&m) {
        return Err(Error::NotQmf(m));
    }
    for t in cycle.points() {
        if !m.has_interior_point(t) {
            return Err(Error::Internal(format!(
                "cycle point {t} is not interior to {m}"
            )));
        }
    }
    let f = IntervalSet::interval(-a.clone(), a.clone());
    let (tau_f, tau_f_half, c) = forced_parts(&f)?;
    let filter = FilterSet {
        m,
        tau_f_half,
        c,
        d,
    };
    check_filter(&filter, &f, &tau_f)?;
    Ok(filter)
}

/// Certificate for [`build_aperiodic_filter_prefix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AperiodicReport {
    pub images: usize,
    pub pairwise_disjoint: bool,
    pub s_simple: bool,
    /// Distance from `S_N` to the points `0`, `1/2`, `1`.
    #[serde(serialize_with = "serialize_display")]
    pub distance_to_critical: Rational,
}

fn serialize_display<S: Serializer>(
    x: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(x)
}

/// The interval `[.1 0^p 1 0, .1 0^p 1 1)` in binary.
pub fn aperiodic_seed(p: usize) -> IntervalSet {
    let p = p as i64;
    let lo = half() + pow2(-(p + 2));
    let hi = &lo + pow2(-(p + 3));
    IntervalSet::interval(lo, hi)
}

/// Checks that no run of equal digits is `limit` long or longer.
pub fn check_runs(word: &[u8], limit: usize) -> Result<()> {
    let mut start = 0;
    for i in 1..=word.len() {
        if i == word.len() || word[i] != word[start] {
            if i - start >= limit {
                return Err(Error::RunTooLong {
                    start,
                    length: i - start,
                    limit,
                });
            }
            start = i;
        }
    }
    Ok(())
}

/// `S_N`: the union of the first `N` images `tau_{eta_n} ... tau_{eta_1} I`.
pub fn build_aperiodic_filter_prefix(
    eta: &[u8],
    p: usize,
    n: usize,
) -> Result<(IntervalSet, AperiodicReport)> {
    if p < 2 {
        return Err(Error::Precondition(format!("p = {p} must be at least 2")));
    }
    if n == 0 || eta.len() < n {
        return Err(Error::Precondition(format!(
            "need 1 <= N <= {} digits, got N = {n}",
            eta.len()
        )));
    }
    check_runs(eta, p)?;
    let mut image = aperiodic_seed(p);
    let mut images = Vec::with_capacity(n);
    for &d in &eta[..n] {
        image = image.tau(d);
        images.push(image.clone());
    }
    let pairwise_disjoint = images
        .iter()
        .enumerate()
        .all(|(i, a)| images[i + 1..].iter().all(|b| a.is_disjoint(b)));
    let s_n = images
        .iter()
        .fold(IntervalSet::empty(), |acc, im| acc.union(im));
    let s_simple = s_n.is_s_simple();
    let distance_to_critical = [Rational::zero(), half(), Rational::one()]
        .iter()
        .flat_map(|c| {
            s_n.intervals().iter().map(move |(lo, hi)| {
                if c < lo {
                    lo - c
                } else if c >= hi {
                    c - hi
                } else {
                    Rational::zero()
                }
            })
        })
        .min()
        .unwrap_or_else(Rational::zero);
    let report = AperiodicReport {
        images: n,
        pairwise_disjoint,
        s_simple,
        distance_to_critical,
    };
    Ok((s_n, report))
}

/// A QMF filter containing `S_N` together with dyadic neighborhoods of 0 and 1,
/// completed by the default rule.
pub fn aperiodic_filter(s_n: &IntervalSet, report: &AperiodicReport) -> Result<FilterSet> {
    if !(report.pairwise_disjoint
        && report.s_simple
        && report.distance_to_critical > Rational::zero())
    {
        return Err(Error::Precondition(
            "S_N must be s-simple with positive distance to 0, 1/2 and 1".into(),
        ));
    }
    let k = ceil_log2(&(int(2) / &report.distance_to_critical));
    let eps = pow2(-k);
    let ends = IntervalSet::from_pairs([
        (Rational::zero(), eps.clone()),
        (Rational::one() - &eps, Rational::one()),
    ]);
    let base = s_n.union(&ends);
    let d = default_completion(&base);
    let m = validate_completion(&base, &d)?;
    if !is_qmf(&m) {
        return Err(Error::NotQmf(m));
    }
    Ok(FilterSet {
        m,
        tau_f_half: ends,
        c: s_n.clone(),
        d,
    })
}

/// `a b a a b a a a b ...` with `a = 01`, `b = 10`, truncated to `len` digits.
pub fn block_word(len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len + 2);
    let mut reps = 1;
    while out.len() < len {
        for _ in 0..reps {
            out.extend_from_slice(&[0, 1]);
        }
        out.extend_from_slice(&[1, 0]);
        reps += 1;
    }
    out.truncate(len);
    out
}
