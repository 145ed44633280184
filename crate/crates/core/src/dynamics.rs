//! Chosen paths of a QMF filter, subordinated partitions and their cycles.
//!
//! All computations run on interval pieces; a point is never sampled.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::filter::is_qmf;
use crate::intervals::IntervalSet;
use crate::rational::{half, int, pow2, Rational};
use crate::words::{Cycle, EPWord};

/// Default number of splits `discover_partition` may perform.
pub const DEFAULT_MAX_SPLITS: usize = 1 << 12;

/// Environment variable overriding [`DEFAULT_MAX_SPLITS`].
pub const MAX_SPLITS_ENV: &str = "PARSEVAL_DILATE_MAX_SPLITS";

/// The split budget from the environment, falling back to the default.
pub fn max_splits_from_env() -> usize {
    std::env::var(MAX_SPLITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SPLITS)
}

/// The sets of `x` in `[0,1)` whose chosen path starts with 0, respectively 1.
pub fn chosen_digit_pieces(m: &IntervalSet) -> Result<(IntervalSet, IntervalSet)> {
    if !is_qmf(m) {
        return Err(Error::NotQmf(m.clone()));
    }
    let h = half();
    let zero = m
        .intersect(&IntervalSet::interval(Rational::zero(), h.clone()))
        .dilate_pow2(1);
    let one = m
        .intersect(&IntervalSet::interval(h, Rational::one()))
        .dilate_pow2(1)
        .translate(&int(-1));
    Ok((zero, one))
}

/// A finite partition of `M` with one outgoing labeled edge per piece:
/// `tau_{label[i]}(vertices[i])` lies inside `vertices[target[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionGraph {
    pub vertices: Vec<IntervalSet>,
    pub targets: Vec<usize>,
    pub labels: Vec<u8>,
}

impl PartitionGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Index of the vertex containing `set`, if any single one does.
    fn vertex_containing(&self, set: &IntervalSet) -> Option<usize> {
        self.vertices.iter().position(|v| set.is_subset(v))
    }
}

/// Checks that `partition` is subordinated to `M` and returns its graph.
pub fn verify_partition(m: &IntervalSet, partition: &[IntervalSet]) -> Result<PartitionGraph> {
    let (zero, one) = chosen_digit_pieces(m)?;
    let mut union = IntervalSet::empty();
    for piece in partition {
        if piece.is_empty() {
            return Err(Error::InvalidPartition("empty piece".into()));
        }
        if !union.is_disjoint(piece) {
            return Err(Error::InvalidPartition(format!(
                "piece {piece} overlaps earlier pieces on {}",
                union.intersect(piece)
            )));
        }
        union = union.union(piece);
    }
    if union != *m {
        return Err(Error::InvalidPartition(format!(
            "pieces cover {union} instead of {m}"
        )));
    }
    let mut graph = PartitionGraph {
        vertices: partition.to_vec(),
        targets: Vec::with_capacity(partition.len()),
        labels: Vec::with_capacity(partition.len()),
    };
    for piece in partition {
        let label = if piece.is_subset(&zero) {
            0
        } else if piece.is_subset(&one) {
            1
        } else {
            return Err(Error::NotSubordinated {
                piece: piece.clone(),
                counterexample: piece.intersect(&one),
            });
        };
        let image = piece.tau(label);
        let target = graph
            .vertex_containing(&image)
            .ok_or_else(|| Error::NotSubordinated {
                piece: piece.clone(),
                counterexample: image.clone(),
            })?;
        graph.labels.push(label);
        graph.targets.push(target);
    }
    Ok(graph)
}

/// Finds a subordinated partition by refining the maximal intervals of `M`.
///
/// A piece is cut where the digit of its points changes, and where its image
/// crosses a boundary between pieces (at the preimage of that boundary).
pub fn discover_partition(m: &IntervalSet, max_splits: usize) -> Result<PartitionGraph> {
    let (zero, _) = chosen_digit_pieces(m)?;
    let digit_cuts: BTreeSet<Rational> = zero.endpoints().cloned().collect();
    let mut pieces: Vec<(Rational, Rational)> = m.intervals().to_vec();
    let mut splits = 0usize;
    loop {
        let boundaries: BTreeSet<Rational> = pieces
            .iter()
            .flat_map(|(lo, hi)| [lo.clone(), hi.clone()])
            .collect();
        let mut next = Vec::with_capacity(pieces.len());
        let mut changed = false;
        for (lo, hi) in &pieces {
            let mut cuts: Vec<Rational> = digit_cuts
                .range((std::ops::Bound::Excluded(lo), std::ops::Bound::Excluded(hi)))
                .cloned()
                .collect();
            if cuts.is_empty() {
                let label = if zero.contains(lo) { 0 } else { 1 };
                let shift = if label == 0 { Rational::zero() } else { half() };
                let img_lo = lo / int(2) + &shift;
                let img_hi = hi / int(2) + &shift;
                cuts = boundaries
                    .range((
                        std::ops::Bound::Excluded(&img_lo),
                        std::ops::Bound::Excluded(&img_hi),
                    ))
                    .map(|b| (b - &shift) * int(2))
                    .collect();
            }
            if cuts.is_empty() {
                next.push((lo.clone(), hi.clone()));
                continue;
            }
            changed = true;
            splits += cuts.len();
            if splits > max_splits {
                return Err(Error::Unpartitionable { splits: max_splits });
            }
            let mut start = lo.clone();
            for c in cuts {
                next.push((start, c.clone()));
                start = c;
            }
            next.push((start, hi.clone()));
        }
        pieces = next;
        if !changed {
            break;
        }
    }
    let partition: Vec<IntervalSet> = pieces
        .into_iter()
        .map(|(lo, hi)| IntervalSet::interval(lo, hi))
        .collect();
    verify_partition(m, &partition)
}

/// The distinct cycles of the graph, as canonical rotations sorted by
/// length and first point.
pub fn graph_cycles(g: &PartitionGraph) -> Vec<Cycle> {
    let n = g.len();
    // 0 = unvisited, 1 = on the current walk, 2 = done.
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            v = g.targets[v];
        }
        if state[v] == 1 {
            let from = walk.iter().position(|&u| u == v).expect("on walk");
            let labels: Vec<u8> = walk[from..].iter().map(|&u| g.labels[u]).collect();
            let word = EPWord::periodic(&labels).expect("nonempty binary labels");
            let cycle = Cycle::from_word(word.period()).expect("primitive period");
            cycles.push(cycle.canonical());
        }
        for u in walk {
            state[u] = 2;
        }
    }
    cycles.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.points()[0].cmp(&b.points()[0]))
    });
    cycles.dedup();
    cycles
}

/// The label sequence read along the graph starting from vertex `v`.
pub fn vertex_path(g: &PartitionGraph, v: usize) -> EPWord {
    let mut seen = vec![usize::MAX; g.len()];
    let mut order = Vec::new();
    let mut u = v;
    while seen[u] == usize::MAX {
        seen[u] = order.len();
        order.push(u);
        u = g.targets[u];
    }
    let labels: Vec<u8> = order.iter().map(|&w| g.labels[w]).collect();
    let (pre, per) = labels.split_at(seen[u]);
    EPWord::new(pre.to_vec(), per.to_vec()).expect("binary labels")
}

/// A partition of `[0,1)` into pieces with a common chosen path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePath {
    pub pieces: Vec<(IntervalSet, EPWord)>,
}

impl PiecewisePath {
    /// The path of the piece containing `x`.
    pub fn path_at(&self, x: &Rational) -> Option<&EPWord> {
        self.pieces
            .iter()
            .find(|(piece, _)| piece.contains(x))
            .map(|(_, w)| w)
    }

    /// The distinct periods, as cycle words, occurring in the paths.
    pub fn tail_words(&self) -> BTreeSet<Vec<u8>> {
        self.pieces
            .iter()
            .map(|(_, w)| w.period().to_vec())
            .collect()
    }
}

impl Serialize for PiecewisePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            piece: &'a IntervalSet,
            path: &'a EPWord,
        }
        let mut seq = serializer.serialize_seq(Some(self.pieces.len()))?;
        for (piece, path) in &self.pieces {
            seq.serialize_element(&Entry { piece, path })?;
        }
        seq.end()
    }
}

/// Chosen paths for every point of `[0,1)`, read off the partition graph.
pub fn chosen_paths(m: &IntervalSet, g: &PartitionGraph) -> Result<PiecewisePath> {
    let h = half();
    let halves = [
        IntervalSet::interval(Rational::zero(), h.clone()),
        IntervalSet::interval(h, Rational::one()),
    ];
    let mut pieces: Vec<(IntervalSet, EPWord)> = Vec::new();
    for v in 0..g.len() {
        if !g.vertices[v].is_subset(m) {
            return Err(Error::InconsistentGraph(format!(
                "vertex {} is not inside the filter",
                g.vertices[v]
            )));
        }
        let tail = vertex_path(g, v);
        for (d, half_set) in halves.iter().enumerate() {
            let part = g.vertices[v].intersect(half_set);
            if part.is_empty() {
                continue;
            }
            let piece = part.dilate_pow2(1).translate(&int(-(d as i64)));
            let path = tail.prepend(d as u8);
            match pieces.iter_mut().find(|(_, w)| *w == path) {
                Some(entry) => entry.0 = entry.0.union(&piece),
                None => pieces.push((piece, path)),
            }
        }
    }
    pieces.sort_by(|a, b| a.0.inf().cmp(&b.0.inf()));
    let total = pieces.iter().try_fold(IntervalSet::empty(), |acc, (p, _)| {
        acc.is_disjoint(p).then(|| acc.union(p))
    });
    if total != Some(IntervalSet::unit()) {
        return Err(Error::InconsistentGraph(
            "path pieces do not partition [0,1)".into(),
        ));
    }
    Ok(PiecewisePath { pieces })
}

/// Which of the equivalent density conditions were verified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    /// `U_{n>=1} 2^n F` is the whole line.
    pub condition_ii: bool,
    /// Chosen paths are `(0)` near 0 and `(1)` near 1.
    pub condition_v: bool,
    pub passed: bool,
    pub checked: Vec<&'static str>,
    /// Conditions that follow by equivalence and are not tested separately.
    pub implied: Vec<&'static str>,
}

/// Tests the density conditions `(ii)` and `(v)` exactly.
pub fn density_check(m: &IntervalSet, f: &IntervalSet, paths: &PiecewisePath) -> DensityReport {
    let zero = Rational::zero();
    let one = Rational::one();
    let near_zero = paths.pieces.iter().find(|(p, _)| p.inf() == Some(&zero));
    let near_one = paths.pieces.iter().find(|(p, _)| p.sup() == Some(&one));
    // Points close to 0 or 1 are where tau_0^n x and tau_1^n x end up.
    let condition_v = matches!(near_zero, Some((_, w)) if *w == EPWord::constant(0))
        && matches!(near_one, Some((_, w)) if *w == EPWord::constant(1))
        && m.contains(&zero)
        && m.sup() == Some(&one);
    // F contains a neighborhood of 0 exactly when its dilates exhaust the line;
    // the finite window is checked as well.
    let neighborhood = f.has_interior_point(&zero);
    let w = f
        .endpoints()
        .map(num_traits::Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero);
    let reach = &w * pow2(8);
    let window = IntervalSet::interval(-reach.clone(), reach)
        .subtract(&IntervalSet::interval(-pow2(-8), pow2(-8)));
    let dilates = (1..=16).fold(IntervalSet::empty(), |acc, n| acc.union(&f.dilate_pow2(n)));
    let condition_ii = neighborhood && window.is_subset(&dilates);
    DensityReport {
        condition_ii,
        condition_v,
        passed: condition_ii && condition_v,
        checked: vec!["ii", "v"],
        implied: vec!["i", "iii", "iv", "vi"],
    }
}

/// Whether `m_0^{(p)}` equals 1 on `Phi^n([0,1))` for some `n <= n_max`, where
/// `Phi = tau_{l_{p-1}} ... tau_{l_0}`. This is the criterion for the cycle
/// representation to sit inside the dilation.
pub fn cycle_subrep_check(m: &IntervalSet, cycle: &Cycle, n_max: usize) -> bool {
    let mut t = IntervalSet::unit();
    for _ in 0..n_max {
        for &l in cycle.word() {
            t = t.tau(l);
        }
        let mut image = t.clone();
        let ok = (0..cycle.len()).all(|_| {
            let inside = image.is_subset(m);
            image = image.dilate_pow2(1).mod1();
            inside
        });
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::iset;
    use crate::rational::rat;

    fn two_cycle_m() -> IntervalSet {
        iset("[0,1/16)u[1/4,7/16)u[9/16,3/4)u[15/16,1)")
    }

    fn three_cycle_m() -> IntervalSet {
        iset("[0,1/16)u[1/8,7/16)u[9/16,5/8)u[15/16,1)")
    }

    fn shannon_m() -> IntervalSet {
        iset("[0,1/4)u[3/4,1)")
    }

    #[test]
    fn digit_pieces() {
        let (z, o) = chosen_digit_pieces(&shannon_m()).unwrap();
        assert_eq!(z, iset("[0,1/2)"));
        assert_eq!(o, iset("[1/2,1)"));
        let (z, o) = chosen_digit_pieces(&two_cycle_m()).unwrap();
        assert!(iset("[0,1/8)").is_subset(&z));
        assert_eq!(z.measure() + o.measure(), rat(1, 1));
        let (z, _) = chosen_digit_pieces(&iset("[1/2,1)")).unwrap();
        assert!(z.is_empty());
        assert!(chosen_digit_pieces(&iset("[0,1/4)")).is_err());
    }

    #[test]
    fn two_cycle_partition() {
        let parts: Vec<_> = ["[0,1/16)", "[1/4,7/16)", "[9/16,3/4)", "[15/16,1)"]
            .iter()
            .map(|s| iset(s))
            .collect();
        let g = verify_partition(&two_cycle_m(), &parts).unwrap();
        assert_eq!(g.targets, vec![0, 2, 1, 3]);
        assert_eq!(g.labels, vec![0, 1, 0, 1]);
        let found = discover_partition(&two_cycle_m(), 100).unwrap();
        assert_eq!(found.vertices, parts);
        let cycles = graph_cycles(&g);
        let words: Vec<_> = cycles.iter().map(Cycle::word_string).collect();
        assert_eq!(words, ["0", "1", "10"]);
        assert_eq!(cycles[2].points(), &[rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn three_cycle_partition() {
        let g = discover_partition(&three_cycle_m(), 100).unwrap();
        let cycles = graph_cycles(&g);
        let words: Vec<_> = cycles.iter().map(Cycle::word_string).collect();
        assert_eq!(words, ["0", "1", "100"]);
        assert_eq!(cycles[2].points(), &[rat(1, 7), rat(4, 7), rat(2, 7)]);
        let paths = chosen_paths(&three_cycle_m(), &g).unwrap();
        let shown: Vec<_> = paths
            .pieces
            .iter()
            .map(|(p, w)| format!("{p} {w}"))
            .collect();
        assert_eq!(
            shown,
            [
                "[0,1/8) (0)",
                "[1/8,1/4) (100)",
                "[1/4,1/2) (010)",
                "[1/2,7/8) (001)",
                "[7/8,1) (1)"
            ]
        );
    }

    #[test]
    fn shannon_needs_a_split() {
        let m = shannon_m();
        let err = verify_partition(&m, std::slice::from_ref(&m));
        assert!(err.is_err());
        let g = verify_partition(&m, &[iset("[0,1/4)"), iset("[3/4,1)")]).unwrap();
        assert_eq!(g.targets, vec![0, 1]);
        let found = discover_partition(&m, 10).unwrap();
        assert_eq!(found.len(), 2);
        let words: Vec<_> = graph_cycles(&found)
            .iter()
            .map(Cycle::word_string)
            .collect();
        assert_eq!(words, ["0", "1"]);
        let paths = chosen_paths(&m, &found).unwrap();
        assert_eq!(paths.pieces.len(), 2);
        assert_eq!(paths.pieces[0], (iset("[0,1/2)"), EPWord::constant(0)));
        assert_eq!(paths.pieces[1], (iset("[1/2,1)"), EPWord::constant(1)));
    }

    #[test]
    fn two_cycle_paths_and_density() {
        let m = two_cycle_m();
        let g = discover_partition(&m, 100).unwrap();
        let paths = chosen_paths(&m, &g).unwrap();
        let shown: Vec<_> = paths
            .pieces
            .iter()
            .map(|(p, w)| format!("{p} {w}"))
            .collect();
        assert_eq!(
            shown,
            [
                "[0,1/8) (0)",
                "[1/8,1/2) (10)",
                "[1/2,7/8) (01)",
                "[7/8,1) (1)"
            ]
        );
        let report = density_check(&m, &iset("[-1/8,1/8)"), &paths);
        assert!(report.passed);
        // A QMF filter vanishing near 0.
        let bad_m = iset("[1/4,3/4)");
        let g = discover_partition(&bad_m, 100).unwrap();
        let p = chosen_paths(&bad_m, &g).unwrap();
        assert!(!density_check(&bad_m, &iset("[-1/8,1/8)"), &p).condition_v);
    }

    #[test]
    fn paths_stay_in_filter() {
        for m in [two_cycle_m(), three_cycle_m(), shannon_m()] {
            let g = discover_partition(&m, 100).unwrap();
            let paths = chosen_paths(&m, &g).unwrap();
            for (piece, w) in &paths.pieces {
                for (lo, hi) in piece.intervals() {
                    for x in [lo.clone(), (lo + hi) / int(2), (lo * int(3) + hi) / int(4)] {
                        let steps = 3 * (w.preperiod().len() + w.period().len());
                        let mut y = x.clone();
                        for n in 0..steps {
                            y = (y + int(i64::from(w.digit(n)))) / int(2);
                            assert!(m.contains(&y), "{x} leaves M along {w}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subrepresentation_checks() {
        let two = Cycle::from_word(&[1, 0]).unwrap();
        let three = Cycle::from_word(&[1, 0, 0]).unwrap();
        assert!(cycle_subrep_check(&two_cycle_m(), &two, 20));
        assert!(!cycle_subrep_check(&two_cycle_m(), &three, 20));
        assert!(cycle_subrep_check(
            &shannon_m(),
            &Cycle::from_word(&[0]).unwrap(),
            20
        ));
        assert!(cycle_subrep_check(&three_cycle_m(), &three, 20));
    }

    #[test]
    fn cycle_points_lie_in_their_vertices() {
        for m in [two_cycle_m(), three_cycle_m()] {
            let g = discover_partition(&m, 100).unwrap();
            for c in graph_cycles(&g) {
                for t in c.points() {
                    assert!(g.vertices.iter().any(|v| v.closure_contains(t)));
                }
            }
        }
    }
}
