//! Singularity analysis of `F(z) = sqrt(2) / (sqrt(2) - tanh(z*sqrt(2)))`.
//!
//! The poles of `F` form the lattice `z_k = (L + (2k+1)πi) / (2 sqrt(2))`,
//! `k ∈ ℤ`, with `L = log(3 + 2 sqrt(2))`. The conjugate pair `z_0`, `z_{-1}`
//! is dominant, every pole is simple with residue 1, so
//!
//! ```text
//! f_n / n! = -Σ_k z_k^{-(n+1)}
//!          = -2 ρ^{-(n+1)} cos((n+1)θ) + O(|z_1|^{-n})
//! ```
//!
//! with `ρ = |z_0|` and `θ = arg z_0`. Comparisons against exact `f_n` are made
//! on the normalized scale `f_n ρ^{n+1} / n!`, where the leading term is O(1).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bignum::{factorial, BigComplex, BigReal};
use crate::peaks::FSequence;

pub const DEFAULT_PRECISION: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymptoticsError {
    #[error("an asymptotic model needs at least one pole pair")]
    NoPolePairs,
    #[error("sequence has order {have}, at least {need} is required")]
    OrderTooSmall { need: usize, have: usize },
}

/// `log(3 + 2 sqrt(2))`, the real part of `2 sqrt(2) z_k`.
pub fn log_pole_real(prec: usize) -> BigReal {
    let sqrt2 = BigReal::from_i64(2, prec).sqrt();
    BigReal::from_i64(3, prec).add(&sqrt2.mul_i64(2)).ln()
}

#[derive(Clone, Debug)]
pub struct Singularity {
    pub k: i64,
    pub location: BigComplex,
    pub modulus: BigReal,
    pub argument: BigReal,
}

/// Pole `z_k = (L + (2k+1)πi) / (2 sqrt(2))` at `prec` bits.
pub fn singularity(k: i64, prec: usize) -> Singularity {
    let two_sqrt2 = BigReal::from_i64(8, prec).sqrt();
    let re = log_pole_real(prec).div(&two_sqrt2);
    let im = BigReal::pi(prec).mul_i64(2 * k + 1).div(&two_sqrt2);
    let location = BigComplex::new(re, im);
    Singularity {
        k,
        modulus: location.abs(),
        argument: location.arg(),
        location,
    }
}

/// `|tanh(z sqrt(2)) - sqrt(2)|` at `s.location`.
pub fn pole_defect(s: &Singularity) -> BigReal {
    let sqrt2 = BigReal::from_i64(2, s.location.precision()).sqrt();
    let t = s.location.scale(&sqrt2).tanh();
    t.sub(&BigComplex::from_real(sqrt2)).abs()
}

pub fn verify_pole(s: &Singularity, tolerance: &BigReal) -> bool {
    pole_defect(s) <= *tolerance
}

/// Residue of `F` at a simple pole: `sqrt(2) / D'(z)` with
/// `D(z) = sqrt(2) - tanh(z sqrt(2))`, `D'(z) = -sqrt(2) (1 - tanh^2(z sqrt(2)))`.
pub fn residue_at(s: &Singularity) -> BigComplex {
    let p = s.location.precision();
    let sqrt2 = BigReal::from_i64(2, p).sqrt();
    let t = s.location.scale(&sqrt2).tanh();
    let one = BigComplex::from_real(BigReal::one(p));
    let d_prime = one.sub(&t.mul(&t)).scale(&sqrt2.neg());
    BigComplex::from_real(sqrt2).div(&d_prime)
}

/// Leading-order model of `f_n`: `ρ`, `θ`, the error rate `α = 1/|z_1|`
/// and the first `K` pole pairs (`k = 0..K`, conjugates implicit).
#[derive(Clone, Debug)]
pub struct AsymptoticModel {
    rho: BigReal,
    theta: BigReal,
    alpha: BigReal,
    pole_pairs: Vec<Singularity>,
    precision: usize,
}

pub fn model(pole_pairs: usize, precision: usize) -> Result<AsymptoticModel, AsymptoticsError> {
    AsymptoticModel::new(pole_pairs, precision)
}

impl AsymptoticModel {
    pub fn new(pole_pairs: usize, precision: usize) -> Result<Self, AsymptoticsError> {
        if pole_pairs == 0 {
            return Err(AsymptoticsError::NoPolePairs);
        }
        let poles: Vec<Singularity> = (0..pole_pairs as i64)
            .map(|k| singularity(k, precision))
            .collect();
        let subdominant = if pole_pairs > 1 {
            poles[1].modulus.clone()
        } else {
            singularity(1, precision).modulus
        };
        Ok(AsymptoticModel {
            rho: poles[0].modulus.clone(),
            theta: poles[0].argument.clone(),
            alpha: subdominant.recip(),
            pole_pairs: poles,
            precision,
        })
    }

    pub fn rho(&self) -> &BigReal {
        &self.rho
    }

    pub fn theta(&self) -> &BigReal {
        &self.theta
    }

    pub fn alpha(&self) -> &BigReal {
        &self.alpha
    }

    pub fn pole_pairs(&self) -> &[Singularity] {
        &self.pole_pairs
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// `θ / (π/3)`; close to but not equal to 1.
    pub fn theta_over_pi_thirds(&self) -> BigReal {
        self.theta.mul_i64(3).div(&BigReal::pi(self.precision))
    }

    /// `ρ |z_1|^{-1} = αρ`, the per-step decay ratio of the normalized error.
    pub fn decay_ratio(&self) -> BigReal {
        self.rho.mul(&self.alpha)
    }

    /// `cos((n+1)θ)`.
    pub fn cos_term(&self, n: usize) -> BigReal {
        self.theta.mul_i64(n as i64 + 1).cos()
    }

    /// Predicted `f_n / n!` from the model's pole pairs:
    /// `-Σ_j 2 Re(z_j^{-(n+1)})`.
    pub fn predict_scaled(&self, n: usize) -> BigReal {
        let exp = -(n as i64 + 1);
        self.pole_pairs
            .iter()
            .fold(BigReal::zero(self.precision), |acc, s| {
                acc.sub(&s.location.powi(exp).re.mul_i64(2))
            })
    }

    /// Predicted `f_n`.
    pub fn predict(&self, n: usize) -> BigReal {
        self.predict_scaled(n)
            .mul(&BigReal::from_bigint(&factorial(n), self.precision))
    }

    /// Prediction on the normalized scale, `predict(n) ρ^{n+1} / n!`.
    pub fn predict_normalized(&self, n: usize) -> BigReal {
        self.predict_scaled(n).mul(&self.rho.powi(n as u64 + 1))
    }

    /// `f_n ρ^{n+1} / n!` for an exact `f_n`.
    pub fn normalize(&self, f_n: &BigInt, n: usize) -> BigReal {
        let p = self.precision;
        BigReal::from_bigint(f_n, p)
            .div(&BigReal::from_bigint(&factorial(n), p))
            .mul(&self.rho.powi(n as u64 + 1))
    }

    /// `r_n = f_n ρ^{n+1} / n! + 2 cos((n+1)θ)`.
    pub fn normalized_residual(
        &self,
        f: &FSequence,
        n: usize,
    ) -> Result<BigReal, AsymptoticsError> {
        if n > f.order() {
            return Err(AsymptoticsError::OrderTooSmall {
                need: n,
                have: f.order(),
            });
        }
        Ok(self
            .normalize(f.get(n), n)
            .add(&self.cos_term(n).mul_i64(2)))
    }

    /// `|predict(n) - f_n|` measured on the normalized scale.
    pub fn prediction_error(&self, f: &FSequence, n: usize) -> Result<BigReal, AsymptoticsError> {
        if n > f.order() {
            return Err(AsymptoticsError::OrderTooSmall {
                need: n,
                have: f.order(),
            });
        }
        Ok(self
            .normalize(f.get(n), n)
            .sub(&self.predict_normalized(n))
            .abs())
    }

    /// `|cos|` threshold below which a cosine sign is not declared.
    pub fn sign_guard(&self) -> BigReal {
        BigReal::pow2(-((self.precision / 2) as i64), self.precision)
    }
}

pub fn predict(m: &AsymptoticModel, n: usize) -> BigReal {
    m.predict(n)
}

pub fn normalized_residual(
    m: &AsymptoticModel,
    f: &FSequence,
    n: usize,
) -> Result<BigReal, AsymptoticsError> {
    m.normalized_residual(f, n)
}

/// Working precision under which normalized residuals up to index `n_max`
/// stay resolvable: the residual shrinks like `(ρ/|z_1|)^n`, so each index
/// costs `log2(|z_1|/ρ)` bits on top of `base`.
pub fn residual_precision(base: usize, n_max: usize) -> usize {
    // |z_1| / ρ = sqrt(L^2 + 9π^2) / sqrt(L^2 + π^2)
    let l = (3.0 + 2.0 * std::f64::consts::SQRT_2).ln();
    let pi2 = std::f64::consts::PI.powi(2);
    let bits_per_step = 0.5 * ((l * l + 9.0 * pi2) / (l * l + pi2)).log2();
    base + (n_max as f64 * bits_per_step).ceil() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn of_int(v: &BigInt) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
        }
    }
}

/// Sign predicted by the apparent 6-periodic pattern: positive when
/// `n mod 6 ∈ {1, 2, 3}`, negative otherwise.
pub fn naive_sign(n: usize) -> Sign {
    match n % 6 {
        1..=3 => Sign::Positive,
        _ => Sign::Negative,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignReport {
    pub n: usize,
    pub f_sign: Sign,
    pub naive_sign: Sign,
    /// Sign of `-cos((n+1)θ)`; `None` when `|cos|` falls under the guard.
    pub cos_sign: Option<Sign>,
    pub matches_naive: bool,
    pub matches_cos: Option<bool>,
}

impl SignReport {
    pub fn is_indeterminate(&self) -> bool {
        self.cos_sign.is_none()
    }
}

pub fn sign_report(
    f: &FSequence,
    m: &AsymptoticModel,
) -> Result<Vec<SignReport>, AsymptoticsError> {
    if f.order() < 1 {
        return Err(AsymptoticsError::OrderTooSmall {
            need: 1,
            have: f.order(),
        });
    }
    let guard = m.sign_guard();
    Ok((1..=f.order())
        .map(|n| {
            let f_sign = Sign::of_int(f.get(n));
            let naive = naive_sign(n);
            let c = m.cos_term(n);
            let cos_sign = if c.abs() < guard {
                None
            } else if c.signum() < 0 {
                Some(Sign::Positive)
            } else {
                Some(Sign::Negative)
            };
            SignReport {
                n,
                f_sign,
                naive_sign: naive,
                cos_sign,
                matches_naive: f_sign == naive,
                matches_cos: cos_sign.map(|s| s == f_sign),
            }
        })
        .collect())
}

/// Smallest `n >= 1` whose sign contradicts the 6-periodic pattern.
pub fn first_sign_break(f: &FSequence) -> Option<usize> {
    (1..=f.order()).find(|&n| Sign::of_int(f.get(n)) != naive_sign(n))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignSummary {
    pub first_break: Option<usize>,
    pub cos_exceptions: Vec<usize>,
    pub indeterminate: Vec<usize>,
}

pub fn summarize_signs(reports: &[SignReport]) -> SignSummary {
    SignSummary {
        first_break: reports.iter().find(|r| !r.matches_naive).map(|r| r.n),
        cos_exceptions: reports
            .iter()
            .filter(|r| r.matches_cos == Some(false))
            .map(|r| r.n)
            .collect(),
        indeterminate: reports
            .iter()
            .filter(|r| r.is_indeterminate())
            .map(|r| r.n)
            .collect(),
    }
}

/// Partial quotients of `θ/π`.
///
/// The expansion runs on an interval `[x - ε, x + ε]` around the computed
/// value; it stops before `terms` quotients once the endpoints disagree on the
/// next quotient, since the working precision can no longer certify it.
pub fn theta_continued_fraction(m: &AsymptoticModel, terms: usize) -> Vec<BigInt> {
    let p = m.precision();
    let work = p + 64;
    let x = m.theta().with_precision(work).div(&BigReal::pi(work));
    let eps = BigReal::pow2(-(p as i64) + 8, work);
    let mut lo = x.sub(&eps);
    let mut hi = x.add(&eps);
    let mut out = Vec::with_capacity(terms);
    while out.len() < terms {
        let a = lo.floor_bigint();
        if a != hi.floor_bigint() {
            break;
        }
        let a_real = BigReal::from_bigint(&a, work);
        let lo_frac = lo.sub(&a_real);
        let hi_frac = hi.sub(&a_real);
        out.push(a);
        if lo_frac.signum() <= 0 {
            break;
        }
        // 1/x is decreasing, so the endpoints swap
        lo = hi_frac.recip();
        hi = lo_frac.recip();
    }
    out
}

/// Convergents `p_k / q_k` of a continued fraction.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .map(|a| {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            (p.clone(), q.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peaks::f_sequence;

    const P: usize = DEFAULT_PRECISION;

    fn tol(exp10: i32) -> BigReal {
        BigReal::from_i64(10, P)
            .powi(exp10.unsigned_abs() as u64)
            .recip()
    }

    #[test]
    fn dominant_pole_modulus() {
        let z0 = singularity(0, P);
        assert_eq!(z0.modulus.to_sci_string(4), "1.274e0");
        let z1 = singularity(1, P);
        assert_eq!(z1.modulus.to_sci_string(4), "3.390e0");
    }

    #[test]
    fn conjugate_pair() {
        let a = singularity(0, P);
        let b = singularity(-1, P);
        assert_eq!(a.location.re, b.location.re);
        assert_eq!(a.location.im, b.location.im.neg());
        assert_eq!(a.modulus, b.modulus);
    }

    #[test]
    fn poles_are_roots() {
        let t = tol(30);
        assert!(verify_pole(&singularity(0, P), &t));
        assert!(verify_pole(&singularity(5, P), &t));
        let mut off = singularity(0, P);
        off.location = off
            .location
            .add(&BigComplex::from_real(BigReal::from_f64(1e-5, P)));
        assert!(!verify_pole(&off, &t));
    }

    #[test]
    fn residues_are_one() {
        let one = BigComplex::from_real(BigReal::one(P));
        for k in [0, 1] {
            let r = residue_at(&singularity(k, P));
            assert!(r.sub(&one).abs() <= tol(30), "k = {k}: {r}");
        }
        let r0 = residue_at(&singularity(0, P));
        let rm1 = residue_at(&singularity(-1, P));
        assert!(rm1.sub(&r0.conj()).abs() <= tol(30));
    }

    #[test]
    fn closed_form_constants() {
        let m = model(1, P).unwrap();
        assert_eq!(m.rho().to_sci_string(4), "1.274e0");
        assert_eq!(m.theta_over_pi_thirds().to_sci_string(4), "1.012e0");
        let alpha = m.alpha();
        assert!(alpha.signum() > 0 && *alpha < m.rho().recip());
        assert_eq!(alpha.recip().to_sci_string(4), "3.390e0");

        // ρ = sqrt(L^2 + π^2) / (2 sqrt 2), θ = atan(π / L)
        let l = log_pole_real(P);
        let pi = BigReal::pi(P);
        let rho = l
            .mul(&l)
            .add(&pi.mul(&pi))
            .sqrt()
            .div(&BigReal::from_i64(8, P).sqrt());
        let theta = pi.div(&l).atan();
        let eps = BigReal::pow2(-240, P);
        assert!(rho.sub(m.rho()).abs() < eps);
        assert!(theta.sub(m.theta()).abs() < eps);
    }

    #[test]
    fn zero_pole_pairs_rejected() {
        assert!(matches!(model(0, P), Err(AsymptoticsError::NoPolePairs)));
    }

    #[test]
    fn single_pair_prediction_is_leading_term() {
        let m = model(1, P).unwrap();
        for n in [0usize, 3, 17] {
            let closed = m
                .rho()
                .powi(n as u64 + 1)
                .recip()
                .mul(&m.cos_term(n))
                .mul_i64(-2);
            let diff = closed.sub(&m.predict_scaled(n)).abs();
            assert!(diff < BigReal::pow2(-230, P), "n = {n}");
        }
    }

    #[test]
    fn predictions_near_exact_values() {
        let f = f_sequence(60).unwrap();
        let m1 = model(1, P).unwrap();
        let exact = BigReal::from_bigint(f.get(12), P);
        let rel = m1.predict(12).sub(&exact).div(&exact).abs();
        assert!(rel < BigReal::from_f64(0.01, P));
        assert_eq!(m1.predict(4).signum(), -1);

        let m2 = model(2, P).unwrap();
        assert!(m2.prediction_error(&f, 50).unwrap() < m1.prediction_error(&f, 50).unwrap());
    }

    #[test]
    fn residual_at_zero_is_direct_substitution() {
        let f = f_sequence(2).unwrap();
        let m = model(1, P).unwrap();
        let r0 = m.normalized_residual(&f, 0).unwrap();
        let want = m.rho().add(&m.theta().cos().mul_i64(2));
        assert!(r0.sub(&want).abs() < BigReal::pow2(-240, P));
        assert!(matches!(
            m.normalized_residual(&f, 3),
            Err(AsymptoticsError::OrderTooSmall { need: 3, have: 2 })
        ));
    }

    #[test]
    fn naive_pattern() {
        let signs: Vec<Sign> = (1..=6).map(naive_sign).collect();
        use Sign::*;
        assert_eq!(
            signs,
            vec![Positive, Positive, Positive, Negative, Negative, Negative]
        );
    }

    #[test]
    fn sign_break_at_42() {
        assert_eq!(first_sign_break(&f_sequence(60).unwrap()), Some(42));
        assert_eq!(first_sign_break(&f_sequence(41).unwrap()), None);
        assert_eq!(first_sign_break(&f_sequence(1).unwrap()), None);
    }

    #[test]
    fn sign_report_rows() {
        let f = f_sequence(45).unwrap();
        let m = model(1, P).unwrap();
        let rows = sign_report(&f, &m).unwrap();
        assert_eq!(rows.len(), 45);
        let r7 = &rows[6];
        assert_eq!(
            (r7.n, r7.f_sign, r7.matches_naive),
            (7, Sign::Positive, true)
        );
        let r1 = &rows[0];
        assert_eq!(
            (r1.f_sign, r1.cos_sign),
            (Sign::Positive, Some(Sign::Positive))
        );
        let r42 = &rows[41];
        assert!(!r42.matches_naive);
        assert_eq!(r42.matches_cos, Some(true));
        let s = summarize_signs(&rows);
        assert_eq!(s.first_break, Some(42));
        assert!(s.cos_exceptions.is_empty());

        assert!(sign_report(&f_sequence(0).unwrap(), &m).is_err());
    }

    #[test]
    fn continued_fraction_head() {
        let m = model(1, P).unwrap();
        let cf = theta_continued_fraction(&m, 12);
        assert_eq!(cf.len(), 12);
        assert_eq!(cf[0], BigInt::zero());
        assert_eq!(cf[1], BigInt::from(2));
        let x = m.theta().div(&BigReal::pi(P));
        for (p, q) in convergents(&cf).into_iter().skip(1) {
            let approx = BigReal::from_bigint(&p, P).div(&BigReal::from_bigint(&q, P));
            let bound = BigReal::from_bigint(&(&q * &q), P).recip();
            assert!(x.sub(&approx).abs() < bound, "{p}/{q}");
        }
    }

    #[test]
    fn continued_fraction_stops_when_precision_runs_out() {
        let m = model(1, 64).unwrap();
        let cf = theta_continued_fraction(&m, 500);
        assert!(!cf.is_empty() && cf.len() < 500);
        let hi = theta_continued_fraction(&model(1, 512).unwrap(), cf.len());
        assert_eq!(cf, hi);
    }

    #[test]
    fn convergents_of_known_fraction() {
        // 13/30 = [0; 2, 3, 4]
        let cf: Vec<BigInt> = [0, 2, 3, 4].iter().map(|&v| BigInt::from(v)).collect();
        let c = convergents(&cf);
        assert_eq!(c.last().unwrap(), &(BigInt::from(13), BigInt::from(30)));
        assert_eq!(c[1], (BigInt::one(), BigInt::from(2)));
    }
}
