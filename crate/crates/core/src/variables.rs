//! The `z` and `x` variables: single Laurent monomials in the `Y` symbols,
//! one family of formulas per algebra.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::{power_product_pow, resolve_pow, LaurentPoly};
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::{Family, Shift};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariableLabel {
    Plain(u32),
    Bar(u32),
    /// `z_0`, present for `A(2)_{2n}` only.
    Zero,
}

impl fmt::Display for VariableLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableLabel::Plain(a) => write!(f, "z{a}"),
            VariableLabel::Bar(a) => write!(f, "z{a}bar"),
            VariableLabel::Zero => f.write_str("z0"),
        }
    }
}

impl FromStr for VariableLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadLabel {
            label: s.to_string(),
            kind: "any algebra",
        };
        let body = s.strip_prefix('z').ok_or_else(bad)?;
        if body == "0" {
            return Ok(VariableLabel::Zero);
        }
        if let Some(idx) = body.strip_suffix("bar") {
            return idx.parse().map(VariableLabel::Bar).map_err(|_| bad());
        }
        body.parse().map(VariableLabel::Plain).map_err(|_| bad())
    }
}

/// Labels accepted by [`z_var`] for this algebra, unbarred first.
pub fn labels(spec: &AlgebraSpec) -> Vec<VariableLabel> {
    let top = plain_count(spec);
    let mut out: Vec<_> = (1..=top).map(VariableLabel::Plain).collect();
    if spec.kind() == AlgebraKind::A2Even {
        out.push(VariableLabel::Zero);
    }
    out.extend((1..=top).rev().map(VariableLabel::Bar));
    out
}

fn plain_count(spec: &AlgebraSpec) -> u32 {
    match spec.kind() {
        AlgebraKind::A2Even | AlgebraKind::A2Odd => spec.n(),
        AlgebraKind::D2 => spec.n() + 1,
        AlgebraKind::D3_4 => 4,
    }
}

/// `Y_a(u + base + p + (qn/qd) t)^e`, with index conventions.
fn y(spec: &AlgebraSpec, a: u32, base: &Shift, p: i64, qn: i64, qd: i64, e: i64) -> Result<LaurentPoly> {
    resolve_pow(spec, Family::Y, a, &(base + &spec.shift(p, qn, qd)), e)
}

/// `Y^k_a(u + base + p + (qn/qd) t)^e`.
#[allow(clippy::too_many_arguments)]
fn yk(spec: &AlgebraSpec, a: u32, k: u32, base: &Shift, p: i64, qn: i64, qd: i64, e: i64) -> Result<LaurentPoly> {
    power_product_pow(spec, Family::Y, a, k, &(base + &spec.shift(p, qn, qd)), e)
}

pub fn z_var(spec: &AlgebraSpec, label: VariableLabel, base: &Shift) -> Result<LaurentPoly> {
    let n = spec.n();
    let ni = n as i64;
    let bad = || Error::BadLabel {
        label: label.to_string(),
        kind: spec.kind().name(),
    };
    use VariableLabel::*;
    let out = match spec.kind() {
        AlgebraKind::A2Even => match label {
            Plain(a) if (1..=n).contains(&a) => {
                let ai = a as i64;
                &y(spec, a, base, ai, 0, 1, 1)? * &y(spec, a - 1, base, ai + 1, 0, 1, -1)?
            }
            Zero => &y(spec, n, base, ni + 1, 1, 2, 1)? * &y(spec, n, base, ni + 2, 0, 1, -1)?,
            Bar(a) if (1..=n).contains(&a) => {
                let ai = a as i64;
                &y(spec, a - 1, base, 2 * ni - ai + 2, 1, 2, 1)? * &y(spec, a, base, 2 * ni - ai + 3, 1, 2, -1)?
            }
            _ => return Err(bad()),
        },
        AlgebraKind::A2Odd => match label {
            Plain(a) if (1..n).contains(&a) => {
                let ai = a as i64;
                &y(spec, a, base, ai, 0, 1, 1)? * &y(spec, a - 1, base, ai + 1, 0, 1, -1)?
            }
            Plain(a) if a == n => &yk(spec, n, 2, base, ni, 0, 1, 1)? * &y(spec, n - 1, base, ni + 1, 0, 1, -1)?,
            Bar(a) if a == n => &y(spec, n - 1, base, ni + 1, 1, 2, 1)? * &yk(spec, n, 2, base, ni + 2, 0, 1, -1)?,
            Bar(a) if (1..n).contains(&a) => {
                let ai = a as i64;
                &y(spec, a - 1, base, 2 * ni - ai + 1, 1, 2, 1)? * &y(spec, a, base, 2 * ni - ai + 2, 1, 2, -1)?
            }
            _ => return Err(bad()),
        },
        AlgebraKind::D2 => match label {
            Plain(a) if (1..=n).contains(&a) => {
                let ai = a as i64;
                &yk(spec, a, 2, base, ai, 0, 1, 1)? * &yk(spec, a - 1, 2, base, ai + 1, 0, 1, -1)?
            }
            Plain(a) if a == n + 1 => &y(spec, n, base, ni, 1, 2, 1)? * &y(spec, n, base, ni + 2, 0, 1, -1)?,
            Bar(a) if a == n + 1 => &y(spec, n, base, ni, 0, 1, 1)? * &y(spec, n, base, ni + 2, 1, 2, -1)?,
            Bar(a) if (1..=n).contains(&a) => {
                let ai = a as i64;
                &yk(spec, a - 1, 2, base, 2 * ni - ai + 1, 0, 1, 1)? * &yk(spec, a, 2, base, 2 * ni - ai + 2, 0, 1, -1)?
            }
            _ => return Err(bad()),
        },
        AlgebraKind::D3_4 => match label {
            Plain(1) => y(spec, 1, base, 1, 0, 1, 1)?,
            Plain(2) => &yk(spec, 2, 3, base, 2, 0, 1, 1)? * &y(spec, 1, base, 3, 0, 1, -1)?,
            Plain(3) => {
                let num = yk(spec, 1, 3, base, 3, 0, 1, 1)?;
                let den = &y(spec, 1, base, 3, 0, 1, -1)? * &yk(spec, 2, 3, base, 4, 0, 1, -1)?;
                &num * &den
            }
            Plain(4) => &y(spec, 1, base, 3, -1, 3, 1)? * &y(spec, 1, base, 5, 1, 3, -1)?,
            Bar(4) => &y(spec, 1, base, 3, 1, 3, 1)? * &y(spec, 1, base, 5, -1, 3, -1)?,
            Bar(3) => {
                let num = &y(spec, 1, base, 5, 0, 1, 1)? * &yk(spec, 2, 3, base, 4, 0, 1, 1)?;
                &num * &yk(spec, 1, 3, base, 5, 0, 1, -1)?
            }
            Bar(2) => &y(spec, 1, base, 5, 0, 1, 1)? * &yk(spec, 2, 3, base, 6, 0, 1, -1)?,
            Bar(1) => y(spec, 1, base, 7, 0, 1, -1)?,
            _ => return Err(bad()),
        },
    };
    Ok(out)
}

/// Number of `x` variables: `N + 1` for the `A(2)_N` families.
pub fn x_count(spec: &AlgebraSpec) -> Result<u32> {
    match spec.kind() {
        AlgebraKind::A2Even | AlgebraKind::A2Odd => Ok(spec.rank() + 1),
        _ => Err(Error::Unsupported {
            operation: "x variables",
            allowed: "a2even, a2odd",
            kind: spec.kind().name(),
        }),
    }
}

/// The `z` label sitting at position `i` of the linear `x` ordering.
pub fn x_label(spec: &AlgebraSpec, i: u32) -> Result<VariableLabel> {
    let count = x_count(spec)?;
    if !(1..=count).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, max: count });
    }
    let n = spec.n();
    Ok(match spec.kind() {
        AlgebraKind::A2Even if i <= n => VariableLabel::Plain(i),
        AlgebraKind::A2Even if i == n + 1 => VariableLabel::Zero,
        AlgebraKind::A2Even => VariableLabel::Bar(2 * n + 2 - i),
        _ if i <= n => VariableLabel::Plain(i),
        _ => VariableLabel::Bar(2 * n + 1 - i),
    })
}

pub fn x_var(spec: &AlgebraSpec, i: u32, base: &Shift) -> Result<LaurentPoly> {
    z_var(spec, x_label(spec, i)?, base)
}
