//! Integer and cycle encodings of paths, the symbolic sets `F~` and `P~`, and
//! their decoding into explicit supports on each component.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::PiecewisePath;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::rational::{half, int, pow2, Rational};
use crate::wavelet::{dilates_disjoint, octave_pieces};
use crate::words::{parse_bits, Cycle, EPWord};

/// `d_0(w_1 ... w_n 0 0 ...) = sum w_k 2^{k-1}` and
/// `d_1(w_1 ... w_n 1 1 ...) = sum w_k 2^{k-1} - 2^n`.
pub fn d_z(w: &EPWord) -> Result<BigInt> {
    let tail = w
        .constant_tail()
        .ok_or_else(|| Error::NotConstantTail(w.to_string()))?;
    let pre = w.preperiod();
    let mut value = BigInt::zero();
    for (k, &digit) in pre.iter().enumerate() {
        if digit == 1 {
            value += BigInt::one() << k;
        }
    }
    if tail == 1 {
        value -= BigInt::one() << pre.len();
    }
    Ok(value)
}

/// Inverse of [`d_z`]: the two's-complement digits of `k`, least significant first.
pub fn d_z_inv(k: &BigInt) -> EPWord {
    let two = BigInt::from(2);
    let minus_one = -BigInt::one();
    let mut k = k.clone();
    let mut digits = Vec::new();
    while !k.is_zero() && k != minus_one {
        let d = k.mod_floor(&two);
        digits.push(if d.is_zero() { 0 } else { 1 });
        k = (k - d) / &two;
    }
    let tail = if k.is_zero() { 0 } else { 1 };
    EPWord::new(digits, vec![tail]).expect("binary digits")
}

fn tau_digits(x: &Rational, digits: &[u8]) -> Rational {
    digits
        .iter()
        .fold(x.clone(), |y, &d| (y + int(i64::from(d))) * half())
}

/// `(x + d(w)) / 2^n == tau_{w_n} ... tau_{w_1} x + d(w_{n+1} w_{n+2} ...)`.
pub fn shift_identity_check(x: &Rational, w: &EPWord, n: usize) -> Result<bool> {
    let lhs = (x + Rational::from_integer(d_z(w)?)) * pow2(-(n as i64));
    let rhs = tau_digits(x, &w.first_digits(n)) + Rational::from_integer(d_z(&w.shift(n))?);
    Ok(lhs == rhs)
}

fn require_nonconstant(cycle: &Cycle) -> Result<()> {
    match cycle.constant_digit() {
        Some(_) => Err(Error::ConstantCycle(cycle.word_string())),
        None => Ok(()),
    }
}

/// The cycle encoding `(x, w) -> (x - theta_j + k(w), j)` where the tail of
/// `w` runs through the cycle from `theta_j`.
pub fn d_c(x: &Rational, w: &EPWord, cycle: &Cycle) -> Result<(Rational, usize)> {
    require_nonconstant(cycle)?;
    let p = cycle.len();
    let blocks = w.preperiod().len().div_ceil(p);
    let np = blocks * p;
    let tail = w.shift(np);
    let j = cycle
        .rotation_index(tail.period())
        .ok_or_else(|| Error::NotCycleTail {
            word: w.to_string(),
            cycle: cycle.word_string(),
        })?;
    let theta = &cycle.points()[j];
    let head = w
        .first_digits(np)
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .fold(BigInt::zero(), |acc, (i, _)| acc + (BigInt::one() << i));
    let k = Rational::from_integer(head) + theta - pow2(np as i64) * theta;
    if !k.is_integer() {
        return Err(Error::Internal(format!("k({w}) = {k} is not an integer")));
    }
    Ok((x - theta + k, j))
}

/// Inverse of [`d_c`].
pub fn d_c_inv(y: &Rational, j: usize, cycle: &Cycle) -> Result<(Rational, EPWord)> {
    require_nonconstant(cycle)?;
    let p = cycle.len();
    if j >= p {
        return Err(Error::Precondition(format!(
            "slot {j} out of range for a {p}-cycle"
        )));
    }
    let theta = &cycle.points()[j];
    let shifted = y + theta;
    let k = shifted.floor();
    let x = &shifted - &k;
    // Find the shortest head of n blocks with
    // sum head_i 2^i = k + theta (2^{np} - 1) inside [0, 2^{np}).
    let limit = 64 * p + k.numer().bits() as usize;
    let mut np = 0;
    let head = loop {
        let target = &k + theta * (pow2(np as i64) - int(1));
        if !target.is_integer() {
            return Err(Error::Internal(format!("non-integral head {target}")));
        }
        if !target.is_negative() && target < pow2(np as i64) {
            break target.to_integer();
        }
        np += p;
        if np > limit {
            return Err(Error::Internal(format!(
                "no head found for ({y}, {j}) within {limit} digits"
            )));
        }
    };
    let digits: Vec<u8> = (0..np).map(|i| u8::from(head.bit(i as u64))).collect();
    let mut period = cycle.word().to_vec();
    period.rotate_left(j);
    Ok((x, EPWord::new(digits, period)?))
}

/// A finite union of sets `base x {path}` inside `[0,1) x Omega`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolicSet {
    parts: BTreeMap<EPWord, IntervalSet>,
}

impl SymbolicSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, base: IntervalSet, path: EPWord) {
        if base.is_empty() {
            return;
        }
        let entry = self.parts.entry(path).or_default();
        *entry = entry.union(&base);
    }

    pub fn parts(&self) -> impl Iterator<Item = (&EPWord, &IntervalSet)> {
        self.parts.iter()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the base measures.
    pub fn lambda(&self) -> Rational {
        self.parts.values().map(IntervalSet::measure).sum()
    }

    /// Image under `(x, w) -> (2x mod 1, d w)` with `d` the half containing `x`.
    pub fn r_tilde(&self) -> SymbolicSet {
        let h = half();
        let halves = [
            IntervalSet::interval(Rational::zero(), h.clone()),
            IntervalSet::interval(h, Rational::one()),
        ];
        let mut out = SymbolicSet::new();
        for (path, base) in &self.parts {
            for (d, half_set) in halves.iter().enumerate() {
                let part = base.intersect(half_set);
                out.insert(
                    part.dilate_pow2(1).translate(&int(-(d as i64))),
                    path.prepend(d as u8),
                );
            }
        }
        out
    }

    /// Image under the inverse map `(y, d w) -> (tau_d y, w)`.
    pub fn r_tilde_inv(&self) -> SymbolicSet {
        let mut out = SymbolicSet::new();
        for (path, base) in &self.parts {
            out.insert(base.tau(path.digit(0)), path.shift(1));
        }
        out
    }

    pub fn subtract(&self, other: &SymbolicSet) -> SymbolicSet {
        let mut out = SymbolicSet::new();
        for (path, base) in &self.parts {
            let rest = match other.parts.get(path) {
                Some(b) => base.subtract(b),
                None => base.clone(),
            };
            out.insert(rest, path.clone());
        }
        out
    }

    /// Restriction to `A x Omega`.
    pub fn restrict(&self, a: &IntervalSet) -> SymbolicSet {
        let mut out = SymbolicSet::new();
        for (path, base) in &self.parts {
            out.insert(base.intersect(a), path.clone());
        }
        out
    }
}

/// `F~ = {(x, w(x))}`, the graph of the chosen-path map.
pub fn build_f_tilde(paths: &PiecewisePath) -> SymbolicSet {
    let mut out = SymbolicSet::new();
    for (piece, path) in &paths.pieces {
        out.insert(piece.clone(), path.clone());
    }
    out
}

/// `P~ = r~(F~) \ F~`.
pub fn build_p_tilde(f_tilde: &SymbolicSet) -> SymbolicSet {
    f_tilde.r_tilde().subtract(f_tilde)
}

/// `r~^{-1}(F~) = F~ n (M x Omega)`.
pub fn scaling_relation_holds(f_tilde: &SymbolicSet, m: &IntervalSet) -> bool {
    f_tilde.r_tilde_inv() == f_tilde.restrict(m)
}

/// Supports on the line component and on each slot of each cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFunction {
    pub real: IntervalSet,
    pub cycles: Vec<(Cycle, Vec<IntervalSet>)>,
}

impl ComponentFunction {
    pub fn total_measure(&self) -> Rational {
        self.real.measure()
            + self
                .cycles
                .iter()
                .flat_map(|(_, slots)| slots.iter().map(IntervalSet::measure))
                .sum::<Rational>()
    }

    /// The slots of the cycle with the given word, if present.
    pub fn slots_of(&self, word: &[u8]) -> Option<&[IntervalSet]> {
        self.cycles
            .iter()
            .find(|(c, _)| c.word() == word)
            .map(|(_, s)| s.as_slice())
    }
}

#[derive(Serialize, Deserialize)]
struct CycleSlots {
    word: String,
    slots: Vec<IntervalSet>,
}

#[derive(Serialize, Deserialize)]
struct ComponentWire {
    real: IntervalSet,
    cycles: Vec<CycleSlots>,
}

impl Serialize for ComponentFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComponentWire {
            real: self.real.clone(),
            cycles: self
                .cycles
                .iter()
                .map(|(c, slots)| CycleSlots {
                    word: c.word_string(),
                    slots: slots.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComponentFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = ComponentWire::deserialize(deserializer)?;
        let cycles = wire
            .cycles
            .into_iter()
            .map(|entry| {
                let bits = parse_bits(&entry.word).map_err(D::Error::custom)?;
                let cycle = Cycle::from_word(&bits).map_err(D::Error::custom)?;
                if cycle.len() != entry.slots.len() {
                    return Err(D::Error::custom(format!(
                        "cycle {} needs {} slots, got {}",
                        entry.word,
                        cycle.len(),
                        entry.slots.len()
                    )));
                }
                Ok((cycle, entry.slots))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(ComponentFunction {
            real: wire.real,
            cycles,
        })
    }
}

/// Decodes a symbolic set: constant tails go to the line through `d_z`, cycle
/// tails to the slots of their cycle through `d_c`.
pub fn decode_components(s: &SymbolicSet, cycles: &[Cycle]) -> Result<ComponentFunction> {
    let cycles: Vec<&Cycle> = cycles
        .iter()
        .filter(|c| c.constant_digit().is_none())
        .collect();
    let mut real = IntervalSet::empty();
    let mut slots: Vec<Vec<IntervalSet>> = cycles
        .iter()
        .map(|c| vec![IntervalSet::empty(); c.len()])
        .collect();
    for (path, base) in s.parts() {
        if path.constant_tail().is_some() {
            let shift = Rational::from_integer(d_z(path)?);
            real = real.union(&base.translate(&shift));
            continue;
        }
        let (ci, cycle) = cycles
            .iter()
            .enumerate()
            .find(|(_, c)| c.rotation_index(path.period()).is_some())
            .ok_or_else(|| Error::UnresolvedPath(path.to_string()))?;
        // d_c moves every point of the piece by the same amount.
        let (shift, j) = d_c(&Rational::zero(), path, cycle)?;
        slots[ci][j] = slots[ci][j].union(&base.translate(&shift));
    }
    Ok(ComponentFunction {
        real,
        cycles: cycles.into_iter().cloned().zip(slots).collect(),
    })
}

/// Exact checks that a decoded super-wavelet is orthonormal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DilationReport {
    /// Shifted supports reduced mod 1 tile `[0,1)`.
    pub translation_tiling: bool,
    /// Dilates are pairwise disjoint for `|j| <= j_window`.
    pub dilation_disjoint_window: bool,
    /// Reduction to one octave tiles every slot exactly, which settles all scales.
    pub dilation_certified: bool,
    pub real_matches_p: bool,
    pub j_window: u32,
    pub passed: bool,
}

/// Octave-reduced pieces of `slots` under `(x, j) -> (2x, j - 1 mod p)` tile
/// `[1,2) x Z_p` and `[-2,-1) x Z_p` exactly once.
fn fundamental_domain_tiles(slots: &[IntervalSet]) -> bool {
    let p = slots.len() as i64;
    let mut pos = vec![(IntervalSet::empty(), Rational::zero()); slots.len()];
    let mut neg = pos.clone();
    for (j, slot) in slots.iter().enumerate() {
        if slot.closure_contains(&Rational::zero()) {
            return false;
        }
        let positive = slot.intersect(&IntervalSet::interval(
            Rational::zero(),
            slot.sup().cloned().unwrap_or_else(Rational::zero).abs() + int(1),
        ));
        let negative = slot
            .subtract(&positive)
            .affine(&int(-1), &Rational::zero())
            .expect("nonzero scale");
        for (side, acc) in [(positive, &mut pos), (negative, &mut neg)] {
            for (m, piece) in octave_pieces(&side) {
                let target = (j as i64 + m).rem_euclid(p) as usize;
                acc[target].1 += piece.measure();
                acc[target].0 = acc[target].0.union(&piece);
            }
        }
    }
    let octave = IntervalSet::interval(int(1), int(2));
    pos.iter()
        .chain(neg.iter())
        .all(|(set, total)| *set == octave && *total == int(1))
}

fn window_disjoint(slots: &[IntervalSet], j_window: u32) -> bool {
    let p = slots.len();
    (1..=2 * i64::from(j_window)).all(|m| {
        (0..p).all(|j| {
            let target = (j as i64 - m).rem_euclid(p as i64) as usize;
            slots[j].dilate_pow2(m).is_disjoint(&slots[target])
        })
    })
}

/// Verifies that `psi` is an orthonormal wavelet for the dilated representation
/// and that its line component is `P`.
pub fn verify_orthonormal_dilation(
    psi: &ComponentFunction,
    p: &IntervalSet,
    j_window: u32,
) -> DilationReport {
    let mut reduced = vec![(psi.real.clone(), psi.real.mod1())];
    for (cycle, slots) in &psi.cycles {
        for (slot, theta) in slots.iter().zip(cycle.points()) {
            let shifted = slot.translate(theta);
            let r = shifted.mod1();
            reduced.push((shifted, r));
        }
    }
    let translation_tiling = reduced.iter().all(|(s, r)| s.measure() == r.measure())
        && reduced.iter().map(|(_, r)| r.measure()).sum::<Rational>() == int(1)
        && reduced
            .iter()
            .fold(IntervalSet::empty(), |acc, (_, r)| acc.union(r))
            == IntervalSet::unit();

    let real_window = psi.real.is_empty() || dilates_disjoint(&psi.real, 2 * i64::from(j_window));
    let dilation_disjoint_window = real_window
        && psi
            .cycles
            .iter()
            .all(|(_, slots)| window_disjoint(slots, j_window));
    let dilation_certified = fundamental_domain_tiles(std::slice::from_ref(&psi.real))
        && psi.cycles.iter().all(|(_, slots)| {
            slots.iter().all(IntervalSet::is_empty) || fundamental_domain_tiles(slots)
        });
    let real_matches_p = psi.real == *p;
    DilationReport {
        translation_tiling,
        dilation_disjoint_window,
        dilation_certified,
        real_matches_p,
        j_window,
        passed: translation_tiling
            && dilation_disjoint_window
            && dilation_certified
            && real_matches_p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{chosen_paths, discover_partition, graph_cycles};
    use crate::intervals::iset;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn w(s: &str) -> EPWord {
        s.parse().unwrap()
    }

    #[test]
    fn integer_encoding() {
        assert_eq!(d_z(&w("(0)")).unwrap(), BigInt::from(0));
        assert_eq!(d_z(&w("(1)")).unwrap(), BigInt::from(-1));
        assert_eq!(d_z(&w("11(0)")).unwrap(), BigInt::from(3));
        assert_eq!(d_z(&w("0(1)")).unwrap(), BigInt::from(-2));
        assert!(matches!(d_z(&w("(10)")), Err(Error::NotConstantTail(_))));
        assert_eq!(d_z_inv(&BigInt::from(-2)), w("0(1)"));
        assert_eq!(d_z_inv(&BigInt::from(6)), w("011(0)"));
    }

    #[test]
    fn shift_identity_examples() {
        assert!(shift_identity_check(&rat(0, 1), &w("(1)"), 1).unwrap());
        assert!(shift_identity_check(&rat(1, 3), &w("10(0)"), 2).unwrap());
    }

    #[test]
    fn cycle_encoding_examples() {
        let two = Cycle::from_word(&[1, 0]).unwrap();
        let (y, j) = d_c(&rat(1, 5), &w("(10)"), &two).unwrap();
        assert_eq!((y, j), (rat(1, 5) - rat(1, 3), 0));
        let three = Cycle::from_word(&[1, 0, 0]).unwrap();
        let (y, j) = d_c(&rat(1, 2), &w("(001)"), &three).unwrap();
        assert_eq!((y, j), (rat(1, 2) - rat(4, 7), 1));
        let (y, _) = d_c(&rat(7, 8), &w("(001)"), &three).unwrap();
        assert_eq!(y, rat(17, 56));
        assert_eq!(
            d_c_inv(&rat(0, 1), 0, &two).unwrap(),
            (rat(1, 3), w("(10)"))
        );
        assert!(matches!(
            d_c(&rat(0, 1), &w("(0)"), &Cycle::from_word(&[0]).unwrap()),
            Err(Error::ConstantCycle(_))
        ));
        assert!(matches!(
            d_c(&rat(0, 1), &w("(100)"), &two),
            Err(Error::NotCycleTail { .. })
        ));
    }

    fn pipeline(m: &IntervalSet) -> (SymbolicSet, Vec<Cycle>) {
        let g = discover_partition(m, 100).unwrap();
        let paths = chosen_paths(m, &g).unwrap();
        (build_f_tilde(&paths), graph_cycles(&g))
    }

    #[test]
    fn shannon_dilation_is_trivial() {
        let m = iset("[0,1/4)u[3/4,1)");
        let (ft, cycles) = pipeline(&m);
        let pt = build_p_tilde(&ft);
        let psi = decode_components(&pt, &cycles).unwrap();
        assert_eq!(psi.real, iset("[-1,-1/2)u[1/2,1)"));
        assert!(psi.cycles.is_empty());
        let report = verify_orthonormal_dilation(&psi, &iset("[-1,-1/2)u[1/2,1)"), 10);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn two_cycle_decoding() {
        let m = iset("[0,1/16)u[1/4,7/16)u[9/16,3/4)u[15/16,1)");
        let (ft, cycles) = pipeline(&m);
        assert_eq!(ft.lambda(), rat(1, 1));
        assert!(scaling_relation_holds(&ft, &m));
        let phi = decode_components(&ft, &cycles).unwrap();
        assert_eq!(phi.real, iset("[-1/8,1/8)"));
        assert_eq!(
            phi.slots_of(&[1, 0]).unwrap(),
            &[iset("[-5/24,1/6)"), iset("[-1/6,5/24)")]
        );
        assert_eq!(phi.total_measure(), rat(1, 1));
        let psi = decode_components(&build_p_tilde(&ft), &cycles).unwrap();
        assert_eq!(psi.real, iset("[-1/4,-1/8)u[1/8,1/4)"));
        assert_eq!(
            psi.slots_of(&[1, 0]).unwrap(),
            &[
                iset("[-1/3,-5/24)u[1/6,5/12)"),
                iset("[-5/12,-1/6)u[5/24,1/3)")
            ]
        );
        let report = verify_orthonormal_dilation(&psi, &iset("[-1/4,-1/8)u[1/8,1/4)"), 10);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn unresolved_tail() {
        let mut s = SymbolicSet::new();
        s.insert(iset("[0,1/2)"), w("(110)"));
        assert!(matches!(
            decode_components(&s, &[Cycle::from_word(&[1, 0]).unwrap()]),
            Err(Error::UnresolvedPath(_))
        ));
    }

    #[test]
    fn lambda_halves_under_inverse() {
        let m = iset("[0,1/16)u[1/8,7/16)u[9/16,5/8)u[15/16,1)");
        let (ft, _) = pipeline(&m);
        let mut s = ft.clone();
        for n in 1..=12 {
            s = s.r_tilde_inv();
            assert_eq!(s.lambda(), pow2(-n));
        }
        assert_eq!(ft.r_tilde().lambda(), ft.lambda() * int(2));
    }

    fn arb_word() -> impl Strategy<Value = EPWord> {
        (
            prop::collection::vec(0u8..2, 0..12),
            prop::collection::vec(0u8..2, 1..5),
        )
            .prop_map(|(pre, per)| EPWord::new(pre, per).unwrap())
    }

    proptest! {
        #[test]
        fn integer_roundtrip(k in -(1i64 << 16)..(1i64 << 16)) {
            let k = BigInt::from(k);
            prop_assert_eq!(d_z(&d_z_inv(&k)).unwrap(), k);
        }

        #[test]
        fn integer_roundtrip_on_words(pre in prop::collection::vec(0u8..2, 0..16), tail in 0u8..2) {
            let word = EPWord::new(pre, vec![tail]).unwrap();
            prop_assert_eq!(d_z_inv(&d_z(&word).unwrap()), word);
        }

        #[test]
        fn shift_identity(num in 0i64..1000, n in 0usize..20, pre in prop::collection::vec(0u8..2, 0..12), tail in 0u8..2) {
            let x = rat(num, 1000);
            let word = EPWord::new(pre, vec![tail]).unwrap();
            prop_assert!(shift_identity_check(&x, &word, n).unwrap());
        }

        #[test]
        fn cycle_roundtrip(num in -5000i64..5000, den_exp in 0u32..11, j in 0usize..7, word in arb_word()) {
            let period = word.period().to_vec();
            prop_assume!(period.len() > 1);
            let cycle = Cycle::from_word(&period).unwrap();
            let j = j % cycle.len();
            let y = rat(num, 1 << den_exp);
            let (x, w) = d_c_inv(&y, j, &cycle).unwrap();
            prop_assert!(x >= rat(0, 1) && x < rat(1, 1));
            prop_assert_eq!(d_c(&x, &w, &cycle).unwrap(), (y, j));
        }

        #[test]
        fn cycle_roundtrip_from_words(word in arb_word(), num in 0i64..256) {
            prop_assume!(word.period().len() > 1);
            let cycle = Cycle::from_word(word.period()).unwrap();
            let x = rat(num, 256);
            let (y, j) = d_c(&x, &word, &cycle).unwrap();
            prop_assert_eq!(d_c_inv(&y, j, &cycle).unwrap(), (x, word));
        }
    }
}
