//! Self-verification suite: cross-checks between the exact series route,
//! permutation enumeration, the peak recurrence and the asymptotic model.
//!
//! Each check reports a stable name so callers can tell which invariant broke.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;

use crate::asymptotics::{
    first_sign_break, pole_defect, residual_precision, residue_at, sign_report, singularity,
    summarize_signs, AsymptoticModel, DEFAULT_PRECISION,
};
use crate::bignum::{BigComplex, BigReal};
use crate::peaks::{
    evaluate_gf_at_t, f_sequence, peak_polynomial_enum, peak_polynomial_rec_with, peak_step,
    PeakStep, DEFAULT_ENUMERATION_BOUND,
};
use crate::series::{tanh_scaled, Rational};

/// f_0..f_12 (OEIS A006673).
pub const F_HEAD: [i64; 13] = [
    1, 1, 2, 2, -8, -56, -112, 848, 9088, 25216, -310528, -4334848, -14701568,
];

pub const F_42: &str = "356077960394850110410690594606123271850033152";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub level: Level,
    pub precision: usize,
    pub enumeration_bound: usize,
    pub peak_step: PeakStep,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            level: Level::Quick,
            precision: DEFAULT_PRECISION,
            enumeration_bound: DEFAULT_ENUMERATION_BOUND,
            peak_step,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type CheckResult = Result<String, String>;

fn timed(name: &'static str, f: impl FnOnce() -> CheckResult) -> CheckOutcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    match result {
        Ok(detail) => CheckOutcome {
            name,
            passed: true,
            detail,
            elapsed,
        },
        Err(detail) => CheckOutcome {
            name,
            passed: false,
            detail,
            elapsed,
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pow10_recip(k: u32, prec: usize) -> BigReal {
    BigReal::from_i64(10, prec).powi(k as u64).recip()
}

pub fn run(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let full = cfg.level == Level::Full;
    let mut out = vec![
        timed("exact-sequence", check_exact_sequence),
        timed("enumeration-equivalence", || {
            check_enumeration(
                if full { 9 } else { 7 },
                cfg.enumeration_bound,
                cfg.peak_step,
            )
        }),
        timed("pole-residue", || {
            check_poles(if full { 2 } else { 1 }, cfg.precision)
        }),
    ];
    if full {
        out.push(timed("tanh-kernel", check_tanh_kernel));
        out.push(timed("f42-sign-break", check_f42));
        out.push(timed("closed-form-constants", || {
            check_constants(cfg.precision)
        }));
        out.push(timed("error-law", || check_error_law(cfg.precision)));
        out.push(timed("cos-sign-agreement", || {
            check_cos_signs(cfg.precision)
        }));
        out.push(timed("generalized-t", || {
            check_generalized_t(cfg.enumeration_bound)
        }));
    }
    out
}

fn check_exact_sequence() -> CheckResult {
    let f = f_sequence(12).map_err(|e| e.to_string())?;
    let want: Vec<BigInt> = F_HEAD.iter().map(|&v| BigInt::from(v)).collect();
    ensure(f.values() == want.as_slice(), || {
        format!("f_0..f_12 = {:?}", f.values())
    })?;
    Ok("f_0..f_12 match".into())
}

fn check_enumeration(max_n: usize, bound: usize, step: PeakStep) -> CheckResult {
    let f = f_sequence(max_n).map_err(|e| e.to_string())?;
    let minus_one = Rational::from_integer(BigInt::from(-1));
    for n in 1..=max_n {
        let enumerated = peak_polynomial_enum(n, bound).map_err(|e| e.to_string())?;
        let recurred = peak_polynomial_rec_with(n, step).map_err(|e| e.to_string())?;
        ensure(enumerated == recurred, || {
            format!(
                "n = {n}: enumeration {:?} vs recurrence {:?}",
                enumerated.counts(),
                recurred.counts()
            )
        })?;
        let at_minus_one = enumerated.evaluate(&minus_one);
        ensure(
            at_minus_one == Rational::from_integer(f.get(n).clone()),
            || {
                format!(
                    "n = {n}: P_n(-1) = {at_minus_one} but series gives {}",
                    f.get(n)
                )
            },
        )?;
    }
    Ok(format!("S_1..S_{max_n} agree"))
}

fn check_poles(max_k: i64, prec: usize) -> CheckResult {
    let tol = pow10_recip(30, prec);
    let one = BigComplex::from_real(BigReal::one(prec));
    for k in 0..=max_k {
        let s = singularity(k, prec);
        let defect = pole_defect(&s);
        ensure(defect <= tol, || {
            format!(
                "k = {k}: |tanh(z sqrt 2) - sqrt 2| = {}",
                defect.to_sci_string(6)
            )
        })?;
        let dev = residue_at(&s).sub(&one).abs();
        ensure(dev <= tol, || {
            format!("k = {k}: |residue - 1| = {}", dev.to_sci_string(6))
        })?;
    }
    Ok(format!("poles k = 0..{max_k} verified, residues 1"))
}

fn check_tanh_kernel() -> CheckResult {
    let order = 40;
    for u in [(1, 1), (2, 1), (1, 2), (3, 1)] {
        let u = Rational::new(u.0.into(), u.1.into());
        let y = tanh_scaled(&u, order).map_err(|e| e.to_string())?;
        let lhs = y.derivative().add(&y.mul(&y).scale(&u));
        let one = crate::series::EgfSeries::one(order - 1);
        ensure(lhs.coeffs() == one.coeffs(), || {
            format!("y' + u y^2 != 1 for u = {u}")
        })?;
    }
    Ok("y' = 1 - u y^2 holds for u in {1, 2, 1/2, 3}".into())
}

fn check_f42() -> CheckResult {
    let f = f_sequence(60).map_err(|e| e.to_string())?;
    let want: BigInt = F_42.parse().expect("literal");
    ensure(f.get(42) == &want, || format!("f_42 = {}", f.get(42)))?;
    let head = f_sequence(42).map_err(|e| e.to_string())?;
    ensure(head.get(42) == &want, || {
        "f_sequence(42) disagrees with f_sequence(60)".into()
    })?;
    let brk = first_sign_break(&f);
    ensure(brk == Some(42), || format!("first sign break = {brk:?}"))?;
    let early = f_sequence(41).map_err(|e| e.to_string())?;
    ensure(first_sign_break(&early).is_none(), || {
        "sign break before n = 42".into()
    })?;
    Ok("f_42 exact, first break at 42".into())
}

fn check_constants(prec: usize) -> CheckResult {
    let m = AsymptoticModel::new(1, prec).map_err(|e| e.to_string())?;
    let rho = m.rho().to_sci_string(4);
    ensure(rho == "1.274e0", || format!("rho = {rho}"))?;
    let ratio = m.theta_over_pi_thirds().to_sci_string(4);
    ensure(ratio == "1.012e0", || format!("theta/(pi/3) = {ratio}"))?;
    ensure(*m.alpha() < m.rho().recip(), || "alpha >= 1/rho".into())?;

    let lo = AsymptoticModel::new(1, 128).map_err(|e| e.to_string())?;
    let hi = AsymptoticModel::new(1, 256).map_err(|e| e.to_string())?;
    let tol = BigReal::pow2(-120, 256);
    for (name, a, b) in [
        ("rho", lo.rho(), hi.rho()),
        ("theta", lo.theta(), hi.theta()),
    ] {
        let rel = a.sub(b).div(b).abs();
        ensure(rel < tol, || {
            format!(
                "{name} moved by {} under precision doubling",
                rel.to_sci_string(4)
            )
        })?;
    }
    Ok(format!("rho = {rho}, theta/(pi/3) = {ratio}"))
}

fn check_error_law(prec: usize) -> CheckResult {
    let (first, last) = (20usize, 200usize);
    let f = f_sequence(last).map_err(|e| e.to_string())?;
    let work = residual_precision(128, last).max(prec);
    let m = AsymptoticModel::new(1, work).map_err(|e| e.to_string())?;
    let r = |n| {
        m.normalized_residual(&f, n)
            .map(|v| v.abs())
            .map_err(|e| e.to_string())
    };
    let r_first = r(first)?;
    let q = m.decay_ratio();
    for n in first..=last {
        let bound = r_first.mul_i64(10).mul(&q.powi((n - first) as u64));
        let rn = r(n)?;
        ensure(rn <= bound, || {
            format!(
                "n = {n}: |r_n| = {} exceeds {}",
                rn.to_sci_string(6),
                bound.to_sci_string(6)
            )
        })?;
    }
    let at_default = AsymptoticModel::new(1, prec).map_err(|e| e.to_string())?;
    let r100 = at_default
        .normalized_residual(&f, 100)
        .map_err(|e| e.to_string())?
        .abs();
    ensure(r100 <= pow10_recip(30, prec), || {
        format!("|r_100| = {}", r100.to_sci_string(6))
    })?;
    Ok(format!(
        "|r_n| <= 10 |r_20| (rho/|z_1|)^(n-20) for n in 20..=200 at {work} bits"
    ))
}

fn check_cos_signs(prec: usize) -> CheckResult {
    let f = f_sequence(300).map_err(|e| e.to_string())?;
    let m = AsymptoticModel::new(1, prec).map_err(|e| e.to_string())?;
    let reports = sign_report(&f, &m).map_err(|e| e.to_string())?;
    let summary = summarize_signs(&reports);
    ensure(summary.cos_exceptions.is_empty(), || {
        format!(
            "sign(f_n) != sign(-cos((n+1) theta)) at n = {:?}",
            summary.cos_exceptions
        )
    })?;
    let naive_41 = reports.iter().take(41).all(|r| r.matches_naive);
    let naive_42 = reports.iter().take(42).all(|r| r.matches_naive);
    ensure(naive_41 && !naive_42, || {
        "mod-6 pattern density wrong around n = 42".into()
    })?;
    Ok(format!(
        "no exceptions over 1..=300, {} indeterminate",
        summary.indeterminate.len()
    ))
}

fn check_generalized_t(bound: usize) -> CheckResult {
    let zero =
        evaluate_gf_at_t(&Rational::from_integer(0.into()), 12).map_err(|e| e.to_string())?;
    for (n, v) in zero.iter().enumerate().skip(1) {
        let want = Rational::from_integer(BigInt::one() << (n - 1));
        ensure(*v == want, || format!("P_{n}(0) = {v}"))?;
    }
    let max_n = 9.min(bound);
    for t in [(0, 1), (-1, 1), (-2, 1), (1, 2)] {
        let t = Rational::new(t.0.into(), t.1.into());
        let gf = evaluate_gf_at_t(&t, max_n).map_err(|e| e.to_string())?;
        for (n, g) in gf.iter().enumerate().skip(1) {
            let p = peak_polynomial_enum(n, bound).map_err(|e| e.to_string())?;
            let direct = p.evaluate(&t);
            ensure(*g == direct, || {
                format!("t = {t}, n = {n}: series {g} vs enumeration {direct}")
            })?;
        }
    }
    Ok(format!("t in {{0, -1, -2, 1/2}} agree for n <= {max_n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn broken_step(n: usize, row: &[BigUint]) -> Vec<BigUint> {
        let mut v = peak_step(n, row);
        if n == 5 {
            v[0] += 1u32;
        }
        v
    }

    #[test]
    fn quick_level_passes() {
        let outcomes = run(&VerifyConfig::default());
        assert_eq!(outcomes.len(), 3);
        for o in &outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    #[test]
    fn corrupted_recurrence_is_named() {
        let cfg = VerifyConfig {
            peak_step: broken_step,
            ..VerifyConfig::default()
        };
        let failed: Vec<_> = run(&cfg)
            .into_iter()
            .filter(|o| !o.passed)
            .map(|o| o.name)
            .collect();
        assert_eq!(failed, vec!["enumeration-equivalence"]);
    }
}
