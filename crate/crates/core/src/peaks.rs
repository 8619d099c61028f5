//! Peak statistics of permutations and their generating functions.
//!
//! A peak of `π ∈ S_n` is an *interior* position `i` (1-based, `1 < i < n`)
//! with `π(i-1) < π(i) > π(i+1)`. Boundary maxima never count. With this
//! convention `P_n(-1)` reproduces A006673: 1, 1, 2, 2, -8, -56, ...
//!
//! The exponential generating function of the peak polynomials is
//! `sqrt(1-t) / (sqrt(1-t) - tanh(z*sqrt(1-t)))`. Dividing through by
//! `sqrt(1-t)` gives `1 / (1 - T_u(z))` with `u = 1 - t` and
//! `T_u = tanh(z*sqrt(u))/sqrt(u)`, whose coefficients are rational, so
//! everything here is exact.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::series::{tanh_scaled, EgfSeries, Rational, SeriesError};

/// Default ceiling on `n` for brute-force enumeration of `S_n`.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeakError {
    #[error("input is not a permutation of 1..{0}")]
    NotAPermutation(usize),
    #[error("enumeration of S_{n} exceeds the configured bound {bound}")]
    EnumerationBound { n: usize, bound: usize },
    #[error("permutation size must be at least 1")]
    EmptySize,
    #[error("peak generating function needs t < 1, got {0}")]
    ParameterOutOfRange(Rational),
    #[error("coefficient {n} of the generating function is not an integer: {value}")]
    NonIntegral { n: usize, value: Rational },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Counts of permutations of size `n` by number of peaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakPolynomial {
    n: usize,
    counts: Vec<BigUint>,
}

impl PeakPolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `counts()[k]` is the number of permutations with exactly `k` peaks.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `P_n(t) = Σ_k counts[k] t^k`, by Horner's rule.
    pub fn evaluate(&self, t: &Rational) -> Rational {
        self.counts.iter().rev().fold(Rational::zero(), |acc, c| {
            acc * t + Rational::from_integer(BigInt::from(c.clone()))
        })
    }
}

/// Largest possible number of interior peaks in a permutation of size `n`.
pub fn max_peaks(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// Exact values `f_0..f_N` of `P_n(-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSequence {
    values: Vec<BigInt>,
}

impl FSequence {
    pub fn from_values(values: Vec<BigInt>) -> Self {
        assert!(!values.is_empty(), "an FSequence holds at least f_0");
        FSequence { values }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }
}

pub fn pk_count(perm: &[usize]) -> Result<usize, PeakError> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &v in perm {
        if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
            return Err(PeakError::NotAPermutation(n));
        }
    }
    Ok(perm
        .windows(3)
        .filter(|w| w[0] < w[1] && w[1] > w[2])
        .count())
}

/// Rearranges `perm` into its lexicographic successor; false once it wraps.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm
        .iter()
        .rposition(|&x| x > perm[i])
        .expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Tallies peaks over all of `S_n` in lexicographic order.
pub fn peak_polynomial_enum(n: usize, bound: usize) -> Result<PeakPolynomial, PeakError> {
    if n == 0 {
        return Err(PeakError::EmptySize);
    }
    if n > bound {
        return Err(PeakError::EnumerationBound { n, bound });
    }
    let mut tally = vec![0u64; max_peaks(n) + 1];
    let mut perm: Vec<usize> = (1..=n).collect();
    loop {
        let k = perm
            .windows(3)
            .filter(|w| w[0] < w[1] && w[1] > w[2])
            .count();
        tally[k] += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(PeakPolynomial {
        n,
        counts: tally.into_iter().map(BigUint::from).collect(),
    })
}

/// One step of the peak recurrence, `row` being the counts for size `n - 1`.
pub type PeakStep = fn(n: usize, row: &[BigUint]) -> Vec<BigUint>;

/// `p(n,k) = (2k+2) p(n-1,k) + (n-2k) p(n-1,k-1)`.
///
/// Inserting the value `n` into a permutation of size `n-1` with `k` peaks:
/// the `2k+2` slots at either side of an existing peak or at the ends
/// keep the count, the remaining `n-2k` slots create a new peak.
pub fn peak_step(n: usize, row: &[BigUint]) -> Vec<BigUint> {
    (0..=max_peaks(n))
        .map(|k| {
            let keep = row
                .get(k)
                .map(|c| c * (2 * k as u64 + 2))
                .unwrap_or_default();
            let grow = match k.checked_sub(1).and_then(|j| row.get(j)) {
                Some(c) if n >= 2 * k => c * (n - 2 * k) as u64,
                _ => BigUint::zero(),
            };
            keep + grow
        })
        .collect()
}

pub fn peak_polynomial_rec(n: usize) -> Result<PeakPolynomial, PeakError> {
    peak_polynomial_rec_with(n, peak_step)
}

/// Recurrence driver with a pluggable step, so verification can exercise a
/// deliberately broken rule.
pub fn peak_polynomial_rec_with(n: usize, step: PeakStep) -> Result<PeakPolynomial, PeakError> {
    if n == 0 {
        return Err(PeakError::EmptySize);
    }
    let mut row = vec![BigUint::one()];
    for m in 2..=n {
        row = step(m, &row);
    }
    Ok(PeakPolynomial { n, counts: row })
}

/// All rows `1..=n` of the recurrence.
pub fn peak_polynomial_rows(n: usize) -> Vec<PeakPolynomial> {
    let mut rows = Vec::with_capacity(n);
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        if m > 1 {
            row = peak_step(m, &row);
        }
        rows.push(PeakPolynomial {
            n: m,
            counts: row.clone(),
        });
    }
    rows
}

pub fn evaluate_polynomial(p: &PeakPolynomial, t: &Rational) -> Rational {
    p.evaluate(t)
}

/// Ordinary series of `P^pk(z, t)` for `t < 1`.
pub fn peak_gf_series(t: &Rational, order: usize) -> Result<EgfSeries, PeakError> {
    let u = Rational::one() - t;
    if !u.is_positive() {
        return Err(PeakError::ParameterOutOfRange(t.clone()));
    }
    let kernel = tanh_scaled(&u, order)?;
    let denom = EgfSeries::one(order).sub(&kernel);
    Ok(denom.reciprocal()?.with_label(format!("P^pk(z, {t})")))
}

/// `P_n(t)` for `0 <= n <= order`, read off the generating function.
pub fn evaluate_gf_at_t(t: &Rational, order: usize) -> Result<Vec<Rational>, PeakError> {
    Ok(peak_gf_series(t, order)?.egf_values())
}

/// `f_n = P_n(-1) = n! [z^n] sqrt(2)/(sqrt(2) - tanh(z*sqrt(2)))`.
pub fn f_sequence(order: usize) -> Result<FSequence, PeakError> {
    let t = Rational::from_integer(BigInt::from(-1));
    let values = evaluate_gf_at_t(&t, order)?
        .into_iter()
        .enumerate()
        .map(|(n, v)| {
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(PeakError::NonIntegral { n, value: v })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FSequence { values })
}
