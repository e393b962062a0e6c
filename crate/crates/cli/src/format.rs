//! Number formatting and the CSV / gnuplot writers.

use std::fmt::Write as _;

use impactbandit::AggregateCurve;

/// Frozen CSV header.
pub const CSV_HEADER: &str = "policy,gamma,t,mean_regret,std,runs";

/// Significant digits of every numeric CSV field.
pub const SIG_DIGITS: usize = 9;

/// C-style `%.{digits}g`: fixed or scientific notation, whichever is shorter
/// for the exponent, with trailing zeros removed.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    // round to `digits` significant figures first; the exponent may shift
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g9(x: f64) -> String {
    fmt_g(x, SIG_DIGITS)
}

/// One labelled curve at one discount value.
#[derive(Debug, Clone)]
pub struct CurveRow<'a> {
    pub policy: &'a str,
    pub gamma: f64,
    pub curve: &'a AggregateCurve,
}

pub fn csv<'a>(rows: impl IntoIterator<Item = &'a CurveRow<'a>>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let c = row.curve;
        for i in 0..c.checkpoints.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.policy,
                g9(row.gamma),
                c.checkpoints[i],
                g9(c.mean[i]),
                g9(c.std[i]),
                c.runs
            );
        }
    }
    out
}

/// gnuplot data: one indexed block per curve (`plot 'f.dat' index i`),
/// columns `t mean std`.
pub fn dat<'a>(rows: impl IntoIterator<Item = &'a CurveRow<'a>>) -> String {
    let mut out = String::new();
    for (i, row) in rows.into_iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let c = row.curve;
        let _ = writeln!(out, "# {} gamma={} runs={}", row.policy, g9(row.gamma), c.runs);
        let _ = writeln!(out, "# t mean_regret std");
        for j in 0..c.checkpoints.len() {
            let _ = writeln!(out, "{} {} {}", c.checkpoints[j], g9(c.mean[j]), g9(c.std[j]));
        }
    }
    out
}
