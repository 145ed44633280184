//! Floating-point checks of the wavelet system `{U^j T^k psi}` for `psi^ = chi_P`:
//! Fourier-side inner products, the complement kernel `K2 = I - Gram` and its
//! invariance relations.
//!
//! Set algebra stays exact; only the oscillatory integrals are evaluated in
//! `f64`, with phases reduced mod 1 in exact arithmetic first.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::intervals::IntervalSet;
use crate::rational::{frac, int, pow2, Rational};

pub type C64 = Complex<f64>;

/// Dilation exponent `j` and translation `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexPair {
    pub j: i64,
    pub k: i64,
}

impl IndexPair {
    pub fn new(j: i64, k: i64) -> Self {
        Self { j, k }
    }
}

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("finite rational")
}

/// `e^{-2 pi i t}` with `t` reduced mod 1 before rounding.
fn cis_neg(t: &Rational) -> C64 {
    let angle = -2.0 * PI * to_f64(&frac(t));
    C64::new(angle.cos(), angle.sin())
}

/// `int_set e^{-2 pi i theta xi} d xi`.
fn oscillatory_integral(set: &IntervalSet, theta: &Rational) -> C64 {
    if theta.is_zero() {
        return C64::new(to_f64(&set.measure()), 0.0);
    }
    let denom = C64::new(0.0, -2.0 * PI * to_f64(theta));
    set.intervals()
        .iter()
        .map(|(lo, hi)| (cis_neg(&(theta * hi)) - cis_neg(&(theta * lo))) / denom)
        .sum()
}

/// `<U^j T^k psi, U^j' T^k' psi>` for `psi^ = chi_P`, which is
/// `2^{(j+j')/2} int e^{-2 pi i (k 2^j - k' 2^j') xi} chi_P(2^j xi) chi_P(2^j' xi) d xi`.
pub fn wavelet_inner_product(p: &IntervalSet, a: IndexPair, b: IndexPair) -> C64 {
    let support = p.dilate_pow2(-a.j).intersect(&p.dilate_pow2(-b.j));
    if support.is_empty() {
        return C64::zero();
    }
    let theta = int(a.k) * pow2(a.j) - int(b.k) * pow2(b.j);
    let scale = 2f64.powf((a.j + b.j) as f64 / 2.0);
    oscillatory_integral(&support, &theta) * scale
}

/// Dense complex matrix over an ordered list of indices.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub indices: Vec<IndexPair>,
    pub entries: DMatrix<C64>,
}

impl GramMatrix {
    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dimension();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian matrix via the real symmetric embedding
    /// `[[A, -B], [B, A]]`, which lists each one twice.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dimension();
        let embedded = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            let z = self.entries[(r % n, c % n)];
            match (r < n, c < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let sym = (&embedded + embedded.transpose()) * 0.5;
        let mut values: Vec<f64> = SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        values
    }
}

/// Indices `|j| <= jmax`, `|k| <= kmax` ordered by `j` then `k`.
pub fn index_grid(jmax: i64, kmax: i64) -> Vec<IndexPair> {
    (-jmax..=jmax)
        .flat_map(|j| (-kmax..=kmax).map(move |k| IndexPair::new(j, k)))
        .collect()
}

/// The complement kernel `K2(a, b) = delta_{a,b} - <psi_a, psi_b>` over the grid.
pub fn complement_gram(p: &IntervalSet, jmax: i64, kmax: i64) -> GramMatrix {
    let indices = index_grid(jmax, kmax);
    let n = indices.len();
    let entries = DMatrix::from_fn(n, n, |r, c| {
        let delta = if r == c { 1.0 } else { 0.0 };
        C64::new(delta, 0.0) - wavelet_inner_product(p, indices[r], indices[c])
    });
    GramMatrix { indices, entries }
}

/// Result of the positive semidefiniteness check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub smallest_eigenvalue: f64,
    pub dimension: usize,
    pub max_abs_entry: f64,
    pub hermitian_defect: f64,
    pub tolerance: f64,
    pub violations: Vec<String>,
}

impl GramReport {
    pub fn is_psd(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// PSD check with tolerance `1e-9 * dimension` on the smallest eigenvalue.
pub fn psd_report(gram: &GramMatrix) -> GramReport {
    let dimension = gram.dimension();
    let tolerance = 1e-9 * dimension as f64;
    let eigenvalues = gram.eigenvalues();
    let smallest_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let hermitian_defect = gram.hermitian_defect();
    let mut violations: Vec<String> = eigenvalues
        .iter()
        .filter(|&&e| e < -tolerance)
        .map(|e| format!("eigenvalue {e:e} below -{tolerance:e}"))
        .collect();
    if hermitian_defect > HERMITIAN_TOLERANCE {
        violations.push(format!("hermitian defect {hermitian_defect:e}"));
    }
    GramReport {
        smallest_eigenvalue,
        dimension,
        max_abs_entry: gram.max_abs_entry(),
        hermitian_defect,
        tolerance,
        violations,
    }
}

/// Outcome of the sampled invariance relations
/// `K(a, b) = K(a + (1,0), b + (1,0))` and
/// `K((j,k),(j',k')) = K((j, k + 2^-j), (j', k' + 2^-j'))` for `j, j' <= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub dilation_max_deviation: f64,
    pub translation_max_deviation: f64,
    pub tolerance: f64,
    pub failures: Vec<(IndexPair, IndexPair)>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const INVARIANCE_TOLERANCE: f64 = 1e-10;

pub fn invariance_check(p: &IntervalSet, samples: usize, seed: u64) -> InvarianceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernel = |a: IndexPair, b: IndexPair| wavelet_inner_product(p, a, b);
    let mut report = InvarianceReport {
        samples,
        dilation_max_deviation: 0.0,
        translation_max_deviation: 0.0,
        tolerance: INVARIANCE_TOLERANCE,
        failures: Vec::new(),
    };
    for _ in 0..samples {
        let a = IndexPair::new(rng.random_range(-4..=4), rng.random_range(-8..=8));
        let b = IndexPair::new(rng.random_range(-4..=4), rng.random_range(-8..=8));
        let base = kernel(a, b);
        let dilated = kernel(IndexPair::new(a.j + 1, a.k), IndexPair::new(b.j + 1, b.k));
        let d1 = (base - dilated).norm();
        report.dilation_max_deviation = report.dilation_max_deviation.max(d1);

        let a0 = IndexPair::new(-a.j.abs(), a.k);
        let b0 = IndexPair::new(-b.j.abs(), b.k);
        let shifted = |x: IndexPair| IndexPair::new(x.j, x.k + (1i64 << -x.j));
        let d2 = (kernel(a0, b0) - kernel(shifted(a0), shifted(b0))).norm();
        report.translation_max_deviation = report.translation_max_deviation.max(d2);

        if d1 > INVARIANCE_TOLERANCE || d2 > INVARIANCE_TOLERANCE {
            report.failures.push((a, b));
        }
    }
    report
}

/// `sum_{|j| <= jmax, |k| <= kmax} |<f, psi_{j,k}>|^2` for `f^ = chi_[0,1)`.
/// For a Parseval wavelet set this increases towards `||f||^2 = 1`.
pub fn parseval_energy(p: &IntervalSet, jmax: i64, kmax: i64) -> f64 {
    let unit = IntervalSet::unit();
    index_grid(jmax, kmax)
        .into_iter()
        .map(|ix| {
            let support = unit.intersect(&p.dilate_pow2(-ix.j));
            let coeff = oscillatory_integral(&support, &-(int(ix.k) * pow2(ix.j)));
            coeff.norm_sqr() * 2f64.powi(ix.j as i32)
        })
        .sum()
}
