use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use peakgf::asymptotics::{
    self, pole_defect, residue_at, sign_report, singularity, summarize_signs, AsymptoticModel,
    AsymptoticsError, Sign,
};
use peakgf::bignum::{BigComplex, BigReal};
use peakgf::peaks::{self, peak_polynomial_enum, PeakError, PeakStep};
use peakgf::verify::{self, Level, VerifyConfig};
use peakgf::Rational;

use crate::report::{Cell, OutputFormat, Report};

#[derive(Debug, Error)]
pub enum CommandError {
    /// Invalid arguments; maps to exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A cross-check inside a command failed; maps to exit code 1.
    #[error("{0}")]
    Check(String),
    #[error(transparent)]
    Peak(#[from] PeakError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub order: usize,
    pub precision: usize,
    pub pole_pairs: usize,
    pub enumeration_bound: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 100,
            precision: asymptotics::DEFAULT_PRECISION,
            pole_pairs: 1,
            enumeration_bound: peaks::DEFAULT_ENUMERATION_BOUND,
            format: OutputFormat::Plain,
        }
    }
}

/// Smallest precision the numeric commands accept.
pub const MIN_PRECISION: usize = 32;

impl RunConfig {
    pub fn validate(&self) -> Result<(), CommandError> {
        if self.precision < MIN_PRECISION {
            return Err(CommandError::Usage(format!(
                "--precision must be at least {MIN_PRECISION} bits"
            )));
        }
        if self.pole_pairs == 0 {
            return Err(CommandError::Usage(
                "--pole-pairs must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn echo(&self, report: &mut Report, command: &str) {
        report
            .meta("command", Cell::Text(command.into()))
            .meta("order", Cell::Index(self.order as i64))
            .meta("precision", Cell::Index(self.precision as i64))
            .meta("pole_pairs", Cell::Index(self.pole_pairs as i64))
            .meta("enum_bound", Cell::Index(self.enumeration_bound as i64));
    }

    fn digits(&self) -> usize {
        BigReal::decimal_digits(self.precision)
    }
}

/// Parses `NUM/DEN` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("invalid numerator in {s:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("invalid denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Integers in full decimal; other rationals as `num/den`.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn check_t(t: &Rational) -> Result<(), CommandError> {
    if t >= &Rational::one() {
        Err(CommandError::Usage(format!(
            "--t must be below 1, got {}",
            format_rational(t)
        )))
    } else {
        Ok(())
    }
}

fn real(v: &BigReal, digits: usize) -> Cell {
    Cell::Num(v.to_sci_string(digits))
}

fn complex(z: &BigComplex, digits: usize) -> String {
    let sign = if z.im.signum() < 0 { "-" } else { "+" };
    format!(
        "{} {} {}i",
        z.re.to_sci_string(digits),
        sign,
        z.im.abs().to_sci_string(digits)
    )
}

fn sign_cell(s: Option<Sign>) -> Cell {
    match s {
        Some(s) => Cell::Text(s.symbol().into()),
        None => Cell::Text("?".into()),
    }
}

fn model(cfg: &RunConfig) -> Result<AsymptoticModel, CommandError> {
    Ok(AsymptoticModel::new(cfg.pole_pairs, cfg.precision)?)
}

/// `n, f_n` (or `P_n(t)`) for `0 <= n <= order`.
pub fn cmd_coeffs(cfg: &RunConfig, t: Option<&Rational>) -> Result<Report, CommandError> {
    cfg.validate()?;
    let minus_one = Rational::from_integer(BigInt::from(-1));
    let t = t.unwrap_or(&minus_one);
    check_t(t)?;
    let values = peaks::evaluate_gf_at_t(t, cfg.order)?;
    let mut report = Report::new(&["n", "value"]);
    cfg.echo(&mut report, "coeffs");
    report.meta("t", Cell::Num(format_rational(t)));
    for (n, v) in values.iter().enumerate() {
        report.row(vec![Cell::Index(n as i64), Cell::Num(format_rational(v))]);
    }
    Ok(report)
}

/// Peak-count rows from the recurrence, cross-checked against enumeration up
/// to the enumeration bound.
pub fn cmd_peaks(
    cfg: &RunConfig,
    t: Option<&Rational>,
    step: PeakStep,
) -> Result<Report, CommandError> {
    cfg.validate()?;
    let minus_one = Rational::from_integer(BigInt::from(-1));
    let t = t.unwrap_or(&minus_one);
    let mut report = Report::new(&["n", "counts", "total", "value_at_t", "enumerated"]);
    cfg.echo(&mut report, "peaks");
    report.meta("t", Cell::Num(format_rational(t)));
    let rows = (1..=cfg.order.max(1))
        .map(|n| peaks::peak_polynomial_rec_with(n, step))
        .collect::<Result<Vec<_>, _>>()?;
    for p in rows {
        let n = p.n();
        let enumerated = n <= cfg.enumeration_bound;
        if enumerated {
            let brute = peak_polynomial_enum(n, cfg.enumeration_bound)?;
            if brute != p {
                return Err(CommandError::Check(format!(
                    "enumeration-equivalence: n = {n}: enumeration {:?} vs recurrence {:?}",
                    brute.counts(),
                    p.counts()
                )));
            }
        }
        let counts: Vec<String> = p.counts().iter().map(|c| c.to_string()).collect();
        report.row(vec![
            Cell::Index(n as i64),
            Cell::Text(counts.join(" ")),
            Cell::Num(p.total().to_string()),
            Cell::Num(format_rational(&p.evaluate(t))),
            Cell::Bool(enumerated),
        ]);
    }
    Ok(report)
}

pub fn cmd_asymptotics(cfg: &RunConfig) -> Result<Report, CommandError> {
    cfg.validate()?;
    let m = model(cfg)?;
    let d = cfg.digits();
    let f = peaks::f_sequence(cfg.order)?;
    let mut report = Report::new(&["n", "f_n", "predicted", "residual"]);
    cfg.echo(&mut report, "asymptotics");
    report
        .summary("rho", real(m.rho(), d))
        .summary("theta", real(m.theta(), d))
        .summary("theta_over_pi_thirds", real(&m.theta_over_pi_thirds(), d))
        .summary("alpha", real(m.alpha(), d));
    for s in m.pole_pairs() {
        report.summary(
            &format!("pole_{}", s.k),
            Cell::Text(complex(&s.location, d)),
        );
    }
    for n in 0..=cfg.order {
        report.row(vec![
            Cell::Index(n as i64),
            Cell::Num(f.get(n).to_string()),
            real(&m.predict(n), d),
            real(&m.normalized_residual(&f, n)?, d),
        ]);
    }
    Ok(report)
}

pub fn cmd_signs(cfg: &RunConfig) -> Result<Report, CommandError> {
    cfg.validate()?;
    if cfg.order < 1 {
        return Err(CommandError::Usage(
            "signs needs --order of at least 1".into(),
        ));
    }
    let m = model(cfg)?;
    let f = peaks::f_sequence(cfg.order)?;
    let rows = sign_report(&f, &m)?;
    let summary = summarize_signs(&rows);
    let mut report = Report::new(&[
        "n",
        "f_sign",
        "naive_sign",
        "cos_sign",
        "matches_naive",
        "matches_cos",
    ]);
    cfg.echo(&mut report, "signs");
    let list = |v: &[usize]| {
        v.iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    report
        .summary(
            "first_break",
            summary
                .first_break
                .map_or(Cell::Text("none".into()), |n| Cell::Index(n as i64)),
        )
        .summary(
            "cos_exceptions",
            Cell::Index(summary.cos_exceptions.len() as i64),
        )
        .summary(
            "cos_exception_list",
            Cell::Text(list(&summary.cos_exceptions)),
        )
        .summary(
            "indeterminate",
            Cell::Index(summary.indeterminate.len() as i64),
        )
        .summary(
            "indeterminate_list",
            Cell::Text(list(&summary.indeterminate)),
        );
    for r in rows {
        report.row(vec![
            Cell::Index(r.n as i64),
            Cell::Text(r.f_sign.symbol().into()),
            Cell::Text(r.naive_sign.symbol().into()),
            sign_cell(r.cos_sign),
            Cell::Bool(r.matches_naive),
            r.matches_cos.map_or(Cell::Missing, Cell::Bool),
        ]);
    }
    Ok(report)
}

/// Poles `z_k` for `-K <= k < K`, i.e. the first `K` conjugate pairs.
pub fn cmd_singularities(cfg: &RunConfig) -> Result<Report, CommandError> {
    cfg.validate()?;
    let d = cfg.digits();
    let k_max = cfg.pole_pairs as i64;
    let mut report = Report::new(&[
        "k",
        "re",
        "im",
        "modulus",
        "argument",
        "pole_defect",
        "residue",
    ]);
    cfg.echo(&mut report, "singularities");
    for k in -k_max..k_max {
        let s = singularity(k, cfg.precision);
        report.row(vec![
            Cell::Index(k),
            real(&s.location.re, d),
            real(&s.location.im, d),
            real(&s.modulus, d),
            real(&s.argument, d),
            Cell::Num(pole_defect(&s).to_sci_string(6)),
            Cell::Text(complex(&residue_at(&s), d)),
        ]);
    }
    Ok(report)
}

/// Normalized residuals next to the subdominant envelope `2 (ρ/|z_1|)^{n+1}`.
pub fn cmd_residuals(cfg: &RunConfig) -> Result<Report, CommandError> {
    cfg.validate()?;
    let m = model(cfg)?;
    let d = cfg.digits();
    let f = peaks::f_sequence(cfg.order)?;
    let q = m.decay_ratio();
    let mut report = Report::new(&["n", "residual", "envelope"]);
    cfg.echo(&mut report, "residuals");
    report.summary("decay_ratio", real(&q, d));
    for n in 0..=cfg.order {
        let r = m.normalized_residual(&f, n)?;
        let envelope = q.powi(n as u64 + 1).mul_i64(2);
        report.row(vec![Cell::Index(n as i64), real(&r, d), real(&envelope, d)]);
    }
    Ok(report)
}

/// Runs the check suite; the second element is true when every check passed.
pub fn cmd_verify(
    cfg: &RunConfig,
    level: Level,
    step: PeakStep,
) -> Result<(Report, bool), CommandError> {
    cfg.validate()?;
    let vcfg = VerifyConfig {
        level,
        precision: cfg.precision,
        enumeration_bound: cfg.enumeration_bound,
        peak_step: step,
    };
    let outcomes = verify::run(&vcfg);
    let mut report = Report::new(&["check", "status", "millis", "detail"]);
    cfg.echo(&mut report, "verify");
    report.meta(
        "level",
        Cell::Text(
            if level == Level::Full {
                "full"
            } else {
                "quick"
            }
            .into(),
        ),
    );
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    report
        .summary("checks", Cell::Index(outcomes.len() as i64))
        .summary(
            "failed",
            Cell::Text(if failed.is_empty() {
                "none".into()
            } else {
                failed.join(" ")
            }),
        );
    for o in &outcomes {
        report.row(vec![
            Cell::Text(o.name.into()),
            Cell::Text(if o.passed { "PASS" } else { "FAIL" }.into()),
            Cell::Num(o.elapsed.as_millis().to_string()),
            Cell::Text(o.detail.clone()),
        ]);
    }
    Ok((report, failed.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(order: usize) -> RunConfig {
        RunConfig {
            order,
            ..RunConfig::default()
        }
    }

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(
            (c.order, c.precision, c.pole_pairs, c.enumeration_bound),
            (100, 256, 1, 10)
        );
        assert_eq!(c.format, OutputFormat::Plain);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("-1").unwrap(),
            Rational::from_integer((-1).into())
        );
        assert_eq!(
            parse_rational("1/2").unwrap(),
            Rational::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_rational("4/-6").unwrap(),
            Rational::new((-2).into(), 3.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
    }

    #[test]
    fn coeffs_rows() {
        let r = cmd_coeffs(&cfg(12), None).unwrap();
        assert_eq!(r.rows.len(), 13);
        assert_eq!(r.rows[12][1], Cell::Num("-14701568".into()));
        let r = cmd_coeffs(&cfg(5), Some(&parse_rational("0").unwrap())).unwrap();
        let vals: Vec<Cell> = r.rows.iter().map(|row| row[1].clone()).collect();
        let want: Vec<Cell> = ["1", "1", "2", "4", "8", "16"]
            .iter()
            .map(|s| Cell::Num(s.to_string()))
            .collect();
        assert_eq!(vals, want);
    }

    #[test]
    fn coeffs_rejects_t_at_least_one() {
        let err = cmd_coeffs(&cfg(5), Some(&parse_rational("1").unwrap())).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn signs_order_zero_is_usage_error() {
        assert_eq!(cmd_signs(&cfg(0)).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn zero_pole_pairs_is_usage_error() {
        let c = RunConfig {
            pole_pairs: 0,
            ..cfg(5)
        };
        assert_eq!(cmd_asymptotics(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn peaks_cross_checks_small_rows() {
        let r = cmd_peaks(&cfg(6), None, peaks::peak_step).unwrap();
        assert_eq!(r.rows[4][1], Cell::Text("16 88 16".into()));
        assert_eq!(r.rows[4][3], Cell::Num("-56".into()));
        assert_eq!(r.rows[4][4], Cell::Bool(true));
    }
}
