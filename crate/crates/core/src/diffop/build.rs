use super::{geometric_inverse, DiffOperator, OrderBound};
use crate::error::{Error, Result};
use crate::report::{CheckReport, ReportParams};
use crate::ring::LaurentPoly;
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::Shift;
use crate::variables::{x_count, x_var, z_var, VariableLabel};

/// `1 - c(u) D`.
pub fn factor(c: &LaurentPoly) -> DiffOperator {
    DiffOperator::new(vec![LaurentPoly::one(), -c], OrderBound::Exact)
}

fn z(spec: &AlgebraSpec, label: VariableLabel) -> Result<LaurentPoly> {
    z_var(spec, label, &Shift::zero())
}

/// The factorized `L(u)`. Exact for the `A(2)` families (the cutoff is
/// ignored there); truncated at `cutoff` for `D(2)_{n+1}` and `D(3)_4`.
pub fn build_l(spec: &AlgebraSpec, cutoff: usize) -> Result<DiffOperator> {
    let n = spec.n();
    let mut acc = DiffOperator::identity();
    match spec.kind() {
        AlgebraKind::A2Even | AlgebraKind::A2Odd => {
            for i in (1..=x_count(spec)?).rev() {
                acc = acc.mul(&factor(&x_var(spec, i, &Shift::zero())?));
            }
        }
        AlgebraKind::D2 | AlgebraKind::D3_4 => {
            let top = if spec.kind() == AlgebraKind::D2 { n + 1 } else { 4 };
            acc = acc.truncate(cutoff);
            for a in 1..=top {
                acc = acc.mul(&factor(&z(spec, VariableLabel::Bar(a))?));
            }
            let center = &z(spec, VariableLabel::Plain(top))? * &z_var(spec, VariableLabel::Bar(top), &Shift::real(2))?;
            acc = acc.mul(&geometric_inverse(&center, cutoff));
            for a in (1..=top).rev() {
                acc = acc.mul(&factor(&z(spec, VariableLabel::Plain(a))?));
            }
        }
    }
    Ok(acc)
}

fn require_a2(spec: &AlgebraSpec, operation: &'static str) -> Result<()> {
    if spec.kind().is_a2() {
        Ok(())
    } else {
        Err(Error::Unsupported {
            operation,
            allowed: "a2even, a2odd",
            kind: spec.kind().name(),
        })
    }
}

/// `x_b(u + N + 1 - 2b + t/2)`.
fn x_rewritten(spec: &AlgebraSpec, b: u32) -> Result<LaurentPoly> {
    let big_n = spec.rank() as i64;
    let base = spec.shift(big_n + 1 - 2 * b as i64, 1, 2);
    x_var(spec, b, &base)
}

/// `->prod_{a=1}^{N+1} (x_a(u + N + 1 - 2a + t/2) - D)`.
pub fn build_l_rewritten_a2(spec: &AlgebraSpec) -> Result<DiffOperator> {
    require_a2(spec, "rewritten L operator")?;
    let mut acc = DiffOperator::identity();
    for a in 1..=x_count(spec)? {
        let f = DiffOperator::new(vec![x_rewritten(spec, a)?, -LaurentPoly::one()], OrderBound::Exact);
        acc = acc.mul(&f);
    }
    Ok(acc)
}

/// `L_a(u) = ->prod_{b=N+2-a}^{N+1} (D - x_b(u + N + 1 - 2b + t/2))`, `0 <= a <= N+1`.
pub fn build_l_a(spec: &AlgebraSpec, a: u32) -> Result<DiffOperator> {
    require_a2(spec, "L_a operators")?;
    let count = x_count(spec)?;
    if a > count {
        return Err(Error::IndexOutOfRange { index: a, max: count });
    }
    let mut acc = DiffOperator::identity();
    for b in (count + 1 - a)..=count {
        let f = DiffOperator::new(vec![-x_rewritten(spec, b)?, LaurentPoly::one()], OrderBound::Exact);
        acc = acc.mul(&f);
    }
    Ok(acc)
}

/// Compares `L` with its rewritten product and with `(-1)^{N+1} L_{N+1}`.
pub fn check_rewrite_a2(spec: &AlgebraSpec) -> Result<CheckReport> {
    require_a2(spec, "rewrite check")?;
    let mut report = CheckReport::new("rewrite", ReportParams::for_spec(spec));
    let l = build_l(spec, 0)?;
    let rewritten = build_l_rewritten_a2(spec)?;
    let sign = if spec.rank().is_multiple_of(2) { -1 } else { 1 };
    let l_top = build_l_a(spec, x_count(spec)?)?.scale_i64(sign);
    let len = l.coeffs().len().max(rewritten.coeffs().len()).max(l_top.coeffs().len());
    for d in 0..len {
        let c = l.coeff(d)?;
        report.exact(format!("rewrite D^{d}"), &(&c - &rewritten.coeff(d)?));
        report.exact(format!("L_(N+1) D^{d}"), &(&c - &l_top.coeff(d)?));
    }
    Ok(report.finish())
}
