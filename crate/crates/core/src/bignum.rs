//! Arbitrary-precision real and complex scalars.
//!
//! [`BigReal`] wraps an `astro_float::BigFloat` together with the working
//! precision (in bits) it was produced at. Binary operations run at the larger
//! of the two operand precisions and round to nearest-even. Transcendental
//! functions share a per-thread constants cache; cached constants are always
//! recomputed for the precision requested, so results depend only on the inputs
//! and the precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = Word::BITS as usize;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// An arbitrary-precision binary floating-point real.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        debug_assert!(!value.is_nan(), "BigReal operation produced NaN");
        BigReal { value, prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, prec), prec)
    }

    /// Exact dyadic value of `v`, rounded to `prec`.
    pub fn from_f64(v: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec), prec)
    }

    /// Correctly rounded conversion of an arbitrary-size integer.
    pub fn from_bigint(v: &BigInt, prec: usize) -> Self {
        if v.is_zero() {
            return Self::zero(prec);
        }
        let mag = v.magnitude();
        let bits = mag.bits() as usize;
        let words_len = bits.div_ceil(WORD_BITS);
        // normalize so the top bit of the top word is set
        let shifted: BigUint = mag << (words_len * WORD_BITS - bits);
        let mut words: Vec<Word> = shifted
            .to_u64_digits()
            .into_iter()
            .map(|w| w as Word)
            .collect();
        words.resize(words_len, 0);
        let sign = if v.is_negative() {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let mut exact = BigFloat::from_words(&words, sign, bits as astro_float::Exponent);
        exact
            .set_precision(prec, RM)
            .expect("precision change on finite value");
        Self::wrap(exact, prec)
    }

    pub fn from_rational(v: &BigRational, prec: usize) -> Self {
        let guard = prec + WORD_BITS;
        let num = Self::from_bigint(v.numer(), guard);
        let den = Self::from_bigint(v.denom(), guard);
        num.div(&den).with_precision(prec)
    }

    /// π at `prec` bits.
    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    /// 2^exp, exact.
    pub fn pow2(exp: i64, prec: usize) -> Self {
        let two = Self::from_i64(2, prec);
        let p = two.powi(exp.unsigned_abs());
        if exp < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut v = self.value.clone();
        v.set_precision(prec, RM)
            .expect("precision change on finite value");
        Self::wrap(v, prec)
    }

    fn p2(&self, other: &Self) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.add(&other.value, p, RM), p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.sub(&other.value, p, RM), p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.mul(&other.value, p, RM), p)
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.div(&other.value, p, RM), p)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.prec))
    }

    pub fn neg(&self) -> Self {
        Self::wrap(self.value.neg(), self.prec)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.prec, RM), self.prec)
    }

    pub fn powi(&self, n: u64) -> Self {
        Self::wrap(self.value.powi(n as usize, self.prec, RM), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.sin(p, RM, cc)), p)
    }

    pub fn cos(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.cos(p, RM, cc)), p)
    }

    pub fn sinh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.sinh(p, RM, cc)), p)
    }

    pub fn cosh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.cosh(p, RM, cc)), p)
    }

    pub fn tanh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.tanh(p, RM, cc)), p)
    }

    pub fn atan(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.value.atan(p, RM, cc)), p)
    }

    /// Four-quadrant arctangent of `y / x`, in (−π, π].
    pub fn atan2(y: &Self, x: &Self) -> Self {
        let p = y.p2(x);
        let pi = Self::pi(p);
        match x.signum() {
            1 => y.div(x).atan(),
            -1 => {
                let base = y.div(x).atan();
                if y.signum() < 0 {
                    base.sub(&pi)
                } else {
                    base.add(&pi)
                }
            }
            _ => match y.signum() {
                1 => pi.div(&Self::from_i64(2, p)),
                -1 => pi.div(&Self::from_i64(-2, p)),
                _ => Self::zero(p),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// −1, 0 or 1.
    pub fn signum(&self) -> i8 {
        if self.value.is_zero() {
            0
        } else if self.value.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Binary exponent `e` with `2^(e−1) ≤ |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.value.exponent().map(i64::from)
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Largest integer not exceeding `self`.
    pub fn floor_bigint(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let (words, _, sign, exp, _) = self.value.as_raw_parts().expect("finite value");
        let mut mantissa = BigUint::zero();
        for &w in words.iter().rev() {
            mantissa = (mantissa << WORD_BITS) + BigUint::from(w);
        }
        // value = mantissa * 2^(exp - total_bits)
        let shift = exp as i64 - (words.len() * WORD_BITS) as i64;
        let negative = sign == Sign::Neg;
        let (int_part, has_fraction) = if shift >= 0 {
            (mantissa << shift as usize, false)
        } else {
            let s = (-shift) as usize;
            let q = &mantissa >> s;
            let frac = !(mantissa - (&q << s)).is_zero();
            (q, frac)
        };
        let mut out = BigInt::from_biguint(IntSign::Plus, int_part);
        if negative {
            out = -out;
            if has_fraction {
                out -= 1;
            }
        }
        out
    }

    /// Nearest integer, ties away from zero.
    pub fn round_bigint(&self) -> BigInt {
        let half = Self::from_f64(0.5, self.prec + 2);
        if self.signum() >= 0 {
            self.add(&half).floor_bigint()
        } else {
            -(self.neg().add(&half).floor_bigint())
        }
    }

    /// Nearest `f64`; for diagnostics and plotting-style output only.
    pub fn to_f64(&self) -> f64 {
        match self.exponent() {
            None => 0.0,
            Some(e) => {
                let scaled = self.mul(&Self::pow2(64 - e, self.prec));
                let m = scaled.round_bigint().to_f64().unwrap_or(f64::NAN);
                m * 2f64.powi((e - 64) as i32)
            }
        }
    }

    /// Decimal digits justified by `prec` bits.
    pub fn decimal_digits(prec: usize) -> usize {
        // floor(prec * log10(2)), minus one guard digit
        ((prec as f64) * std::f64::consts::LOG10_2).floor().max(2.0) as usize - 1
    }

    /// Scientific decimal rendering with `digits` significant digits, rounded
    /// to nearest. Zero renders as `0`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let work = self.prec + 4 * digits + 2 * WORD_BITS;
        let x = self.abs().with_precision(work);
        let e2 = self.exponent().unwrap_or(0);
        let mut k = ((e2 - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10u32);
        let lower = ten.pow(digits as u32 - 1);
        let upper = ten.pow(digits as u32);
        let mantissa = loop {
            let shift = digits as i64 - 1 - k;
            let scale = BigReal::from_bigint(&ten.pow(shift.unsigned_abs() as u32), work);
            let y = if shift >= 0 {
                x.mul(&scale)
            } else {
                x.div(&scale)
            };
            let m = y.round_bigint();
            if m >= upper {
                k += 1;
            } else if m < lower {
                k -= 1;
            } else {
                break m;
            }
        };
        let s = mantissa.to_string();
        let sign = if self.signum() < 0 { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        }
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(Self::decimal_digits(self.prec)))
    }
}

/// Exact ratio of two integers as a `BigReal`.
pub fn ratio(num: &BigInt, den: &BigInt, prec: usize) -> BigReal {
    BigReal::from_rational(&BigRational::new(num.clone(), den.clone()), prec)
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// An arbitrary-precision complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.precision();
        BigComplex {
            re,
            im: BigReal::zero(p),
        }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        BigComplex::new(re, im)
    }

    pub fn scale(&self, k: &BigReal) -> Self {
        BigComplex::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> BigReal {
        BigReal::atan2(&self.im, &self.re)
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        BigComplex::new(self.re.div(&d), self.im.neg().div(&d))
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn powi(&self, n: i64) -> Self {
        let p = self.precision();
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = BigComplex::from_real(BigReal::one(p));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// tanh(x + iy) = (sinh 2x + i sin 2y) / (cosh 2x + cos 2y).
    pub fn tanh(&self) -> Self {
        let two_x = self.re.mul_i64(2);
        let two_y = self.im.mul_i64(2);
        let den = two_x.cosh().add(&two_y.cos());
        BigComplex::new(two_x.sinh().div(&den), two_y.sin().div(&den))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.signum() < 0 { "-" } else { "+" };
        write!(f, "{} {} {}i", self.re, sign, self.im.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roundtrip_through_floor() {
        for s in [
            "0",
            "1",
            "-1",
            "18446744073709551616",
            "-356077960394850110410690594606123271850033152",
        ] {
            let v: BigInt = s.parse().unwrap();
            let r = BigReal::from_bigint(&v, 256);
            assert_eq!(r.floor_bigint(), v, "{s}");
        }
    }

    #[test]
    fn floor_of_negative_fraction() {
        let r = BigReal::from_f64(-2.5, 64);
        assert_eq!(r.floor_bigint(), BigInt::from(-3));
        assert_eq!(BigReal::from_f64(2.5, 64).floor_bigint(), BigInt::from(2));
        assert_eq!(BigReal::from_f64(-2.5, 64).round_bigint(), BigInt::from(-3));
    }

    #[test]
    fn sci_string_rounds_to_nearest() {
        let x = BigReal::from_f64(1.27449, 128);
        assert_eq!(x.to_sci_string(4), "1.274e0");
        let y = BigReal::from_f64(-0.0009996, 128);
        assert_eq!(y.to_sci_string(3), "-1.00e-3");
        assert_eq!(BigReal::from_i64(12345, 64).to_sci_string(1), "1e4");
        assert_eq!(BigReal::zero(64).to_sci_string(5), "0");
    }

    #[test]
    fn pi_digits() {
        let s = BigReal::pi(256).to_sci_string(30);
        assert_eq!(s, "3.14159265358979323846264338328e0");
    }

    #[test]
    fn complex_tanh_matches_real_on_axis() {
        let x = BigReal::from_f64(0.75, 192);
        let z = BigComplex::from_real(x.clone());
        let t = z.tanh();
        assert!(t.re.sub(&x.tanh()).abs() < BigReal::pow2(-180, 192));
        assert!(t.im.is_zero());
    }

    #[test]
    fn complex_powi_inverse() {
        let z = BigComplex::new(BigReal::from_f64(0.5, 128), BigReal::from_f64(-1.25, 128));
        let w = z.powi(7).mul(&z.powi(-7));
        assert!(w.re.sub(&BigReal::one(128)).abs() < BigReal::pow2(-110, 128));
        assert!(w.im.abs() < BigReal::pow2(-110, 128));
    }

    #[test]
    fn atan2_quadrants() {
        let p = 128;
        let one = BigReal::one(p);
        let m1 = BigReal::from_i64(-1, p);
        let pi = BigReal::pi(p);
        let q = |v: &BigReal| v.div(&pi).to_f64();
        assert!((q(&BigReal::atan2(&one, &one)) - 0.25).abs() < 1e-15);
        assert!((q(&BigReal::atan2(&one, &m1)) - 0.75).abs() < 1e-15);
        assert!((q(&BigReal::atan2(&m1, &m1)) + 0.75).abs() < 1e-15);
        assert!((q(&BigReal::atan2(&one, &BigReal::zero(p))) - 0.5).abs() < 1e-15);
    }
}
