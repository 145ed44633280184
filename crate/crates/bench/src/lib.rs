//! Shared inputs for the benchmarks.

use parseval_dilate::rational::rat;
use parseval_dilate::{iset, DStrategy, IntervalSet, Rational};

/// `[-2a,-a) u [a,2a)`.
pub fn two_interval_set(a: &Rational) -> IntervalSet {
    IntervalSet::from_pairs([
        (-a.clone() * rat(2, 1), -a.clone()),
        (a.clone(), a.clone() * rat(2, 1)),
    ])
}

pub fn example_wavelet() -> IntervalSet {
    iset("[-1/4,-1/8)u[1/8,1/4)")
}

/// The two completions of the undecided zone for `a = 1/8` that produce the
/// 2-cycle and the 3-cycle dilations.
pub fn example_strategies() -> [(&'static str, DStrategy); 2] {
    [
        (
            "two_cycle",
            DStrategy::ExplicitSet(iset("[1/4,3/8)u[5/8,3/4)")),
        ),
        ("three_cycle", DStrategy::ExplicitSet(iset("[1/8,3/8)"))),
    ]
}

/// Cycle words for the cycle-seeded filters at `a = 1/32`.
pub const CYCLE_WORDS: [&[u8]; 2] = [&[1, 0, 0, 1, 1, 0, 0], &[1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0]];
