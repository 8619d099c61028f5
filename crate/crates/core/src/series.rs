//! Exact truncated power series over arbitrary-precision rationals.
//!
//! An [`EgfSeries`] stores ordinary coefficients `[z^n]` for `0 <= n <= order`.
//! Exponential-generating-function values are recovered by multiplying by
//! `n!`. Binary operations truncate to the smaller order of their operands.
//! `BigRational` keeps every coefficient in lowest terms with a positive
//! denominator after each operation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Scalar domain for every series coefficient.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("tanh kernel requires a positive scale, got {0}")]
    NonPositiveScale(Rational),
    #[error("a series needs at least one coefficient")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgfSeries {
    coeffs: Vec<Rational>,
    label: String,
}

impl EgfSeries {
    pub fn new(coeffs: Vec<Rational>, label: impl Into<String>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(EgfSeries {
            coeffs,
            label: label.into(),
        })
    }

    /// Series from integer coefficients; convenient for tests and literals.
    pub fn from_ints(coeffs: &[i64], label: impl Into<String>) -> Result<Self, SeriesError> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
            label,
        )
    }

    pub fn zero(order: usize) -> Self {
        EgfSeries {
            coeffs: vec![Rational::zero(); order + 1],
            label: "0".into(),
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s.label = "1".into();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        EgfSeries {
            coeffs: self.coeffs[..keep].to_vec(),
            label: self.label.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        EgfSeries {
            coeffs,
            label: format!("({}) + ({})", self.label, other.label),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        EgfSeries {
            coeffs,
            label: format!("({}) - ({})", self.label, other.label),
        }
    }

    pub fn neg(&self) -> Self {
        EgfSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            label: format!("-({})", self.label),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        EgfSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            label: format!("{k}*({})", self.label),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| convolve_at(&self.coeffs, &other.coeffs, k))
            .collect();
        EgfSeries {
            coeffs,
            label: format!("({})*({})", self.label, other.label),
        }
    }

    /// Multiplicative inverse up to the same order:
    /// `b_0 = 1/a_0`, `b_n = -(1/a_0) * sum_{k=1..n} a_k b_{n-k}`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let a = &self.coeffs;
        if a[0].is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = a[0].recip();
        let mut b: Vec<Rational> = Vec::with_capacity(a.len());
        b.push(inv0.clone());
        for n in 1..a.len() {
            let s = sum_of_products((1..=n).map(|k| (&a[k], &b[n - k])));
            b.push(-(s * &inv0));
        }
        Ok(EgfSeries {
            coeffs: b,
            label: format!("1/({})", self.label),
        })
    }

    /// Formal derivative; the result has order one less (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        let coeffs: Vec<Rational> = if self.order() == 0 {
            vec![Rational::zero()]
        } else {
            (1..=self.order())
                .map(|n| &self.coeffs[n] * Rational::from_integer(n.into()))
                .collect()
        };
        EgfSeries {
            coeffs,
            label: format!("d/dz({})", self.label),
        }
    }

    /// EGF values `n! * [z^n]`.
    pub fn egf_values(&self) -> Vec<Rational> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= n;
                }
                c * Rational::from_integer(fact.clone())
            })
            .collect()
    }
}

/// `T_u(z) = tanh(z*sqrt(u)) / sqrt(u)`, which has rational coefficients for
/// rational `u > 0`.
///
/// Generated from `y' = 1 - u*y^2`, `y(0) = 0`: `c_1 = 1` and
/// `(n+1) c_{n+1} = -u * sum_{i+j=n} c_i c_j` for `n >= 1`.
pub fn tanh_scaled(u: &Rational, order: usize) -> Result<EgfSeries, SeriesError> {
    if !u.is_positive() {
        return Err(SeriesError::NonPositiveScale(u.clone()));
    }
    let mut c = vec![Rational::zero(); order + 1];
    if order >= 1 {
        c[1] = Rational::one();
    }
    for n in 1..order {
        // the convolution only sees odd indices; skip the even outputs, which vanish
        if n % 2 == 1 {
            continue;
        }
        let s = sum_of_products((1..n).step_by(2).map(|i| (&c[i], &c[n - i])));
        c[n + 1] = -(u * s) / Rational::from_integer(BigInt::from(n + 1));
    }
    Ok(EgfSeries {
        coeffs: c,
        label: format!("tanh(z*sqrt({u}))/sqrt({u})"),
    })
}

fn convolve_at(a: &[Rational], b: &[Rational], k: usize) -> Rational {
    sum_of_products((0..=k).map(|i| (&a[i], &b[k - i])))
}

/// Sum of rational products, accumulated over a common denominator and
/// reduced once at the end.
fn sum_of_products<'a>(terms: impl Iterator<Item = (&'a Rational, &'a Rational)>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in terms {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let tn = x.numer() * y.numer();
        let td = x.denom() * y.denom();
        if td == den {
            num += tn;
        } else {
            let g = num_integer::Integer::gcd(&den, &td);
            let l_over_den = &td / &g;
            let l_over_td = &den / &g;
            num = num * &l_over_den + tn * l_over_td;
            den *= l_over_den;
        }
    }
    Rational::new(num, den)
}
