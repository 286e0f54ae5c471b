//! Structural identities specific to `D(3)_4`: the `H_a`, `K_a` building
//! blocks, the three-factor form of `L(u)`, and the expansion of its
//! `Y_2`-dependent factors.

use super::{build_l, factor, DiffOperator, OrderBound};
use crate::error::{Error, Result};
use crate::report::{CheckReport, ReportParams};
use crate::ring::{power_product, resolve_conventions, LaurentPoly};
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::{Family, Shift};
use crate::variables::{z_var, VariableLabel};

/// Shift `u + p + (qn/3) t`.
fn at(base: &Shift, p: i64, qn: i64) -> Shift {
    base + &Shift::from_ints(p, 1, qn, 3)
}

fn y1(spec: &AlgebraSpec, s: &Shift) -> Result<LaurentPoly> {
    resolve_conventions(spec, Family::Y, 1, s)
}

fn cube(spec: &AlgebraSpec, a: u32, s: &Shift) -> Result<LaurentPoly> {
    power_product(spec, Family::Y, a, 3, s)
}

fn inv(p: LaurentPoly) -> LaurentPoly {
    p.inverse().expect("monomial")
}

/// `H_1(u) = Y_1(u) + Y_2^3(u+1) / Y_1(u+2)`.
pub fn h1(spec: &AlgebraSpec, s: &Shift) -> Result<LaurentPoly> {
    Ok(&y1(spec, s)? + &(&cube(spec, 2, &at(s, 1, 0))? * &inv(y1(spec, &at(s, 2, 0))?)))
}

/// `H_2(u) = Y_2^3(u) + Y_1^3(u+1) / Y_2^3(u+2)`.
pub fn h2(spec: &AlgebraSpec, s: &Shift) -> Result<LaurentPoly> {
    Ok(&cube(spec, 2, s)? + &(&cube(spec, 1, &at(s, 1, 0))? * &inv(cube(spec, 2, &at(s, 2, 0))?)))
}

/// `K_1(u) = 1 / Y_1(u) + Y_1(u-2) / Y_2^3(u-1)`.
pub fn k1(spec: &AlgebraSpec, s: &Shift) -> Result<LaurentPoly> {
    Ok(&inv(y1(spec, s)?) + &(&y1(spec, &at(s, -2, 0))? * &inv(cube(spec, 2, &at(s, -1, 0))?)))
}

/// `K_2(u) = 1 / Y_2^3(u) + Y_2^3(u-2) / Y_1^3(u-1)`.
pub fn k2(spec: &AlgebraSpec, s: &Shift) -> Result<LaurentPoly> {
    Ok(&inv(cube(spec, 2, s)?) + &(&cube(spec, 2, &at(s, -2, 0))? * &inv(cube(spec, 1, &at(s, -1, 0))?)))
}

pub fn a_coeff(spec: &AlgebraSpec, j: i64) -> Result<LaurentPoly> {
    let zero = Shift::zero();
    let mut out = &k1(spec, &at(&zero, 4 * j + 5, 1))? * &h1(spec, &at(&zero, 3, -1))?;
    if j != 0 {
        out += &(&k1(spec, &at(&zero, 4 * j + 5, -1))? * &h1(spec, &at(&zero, 3, 1))?);
    }
    Ok(out)
}

pub fn b_coeff(spec: &AlgebraSpec, j: i64) -> Result<LaurentPoly> {
    let zero = Shift::zero();
    let mut out = &(&k1(spec, &at(&zero, 4 * j + 7, 1))? * &h1(spec, &at(&zero, 3, 1))?)
        + &(&k1(spec, &at(&zero, 4 * j + 7, -1))? * &h1(spec, &at(&zero, 3, -1))?);
    if j == 0 {
        out = &out - &(&cube(spec, 2, &at(&zero, 4, 0))? * &inv(cube(spec, 2, &at(&zero, 6, 0))?));
    }
    Ok(out)
}

fn quadratic(c0: LaurentPoly, c1: LaurentPoly, c2: LaurentPoly) -> DiffOperator {
    DiffOperator::new(vec![c0, c1, c2], OrderBound::Exact)
}

/// `(1 - K_1(u+7) D + D^2 / Y_2^3(u+8)) (1 - sum A_j D^{2j+1} + sum B_j D^{2j+2})
/// (1 - H_1(u+1) D + Y_2^3(u+2) D^2)`, truncated at `cutoff`.
pub fn rewritten_l(spec: &AlgebraSpec, cutoff: usize) -> Result<DiffOperator> {
    require_d34(spec)?;
    let zero = Shift::zero();
    let left = quadratic(
        LaurentPoly::one(),
        -k1(spec, &at(&zero, 7, 0))?,
        inv(cube(spec, 2, &at(&zero, 8, 0))?),
    );
    let right = quadratic(
        LaurentPoly::one(),
        -h1(spec, &at(&zero, 1, 0))?,
        cube(spec, 2, &at(&zero, 2, 0))?,
    );
    let mut mid = vec![LaurentPoly::zero(); cutoff + 1];
    mid[0] = LaurentPoly::one();
    for (d, slot) in mid.iter_mut().enumerate().skip(1) {
        let j = ((d - 1) / 2) as i64;
        *slot = if d % 2 == 1 {
            -a_coeff(spec, j)?
        } else {
            b_coeff(spec, j)?
        };
    }
    let mid = DiffOperator::new(mid, OrderBound::Truncated(cutoff));
    Ok(left.truncate(cutoff).mul(&mid).mul(&right))
}

fn require_d34(spec: &AlgebraSpec) -> Result<()> {
    if spec.kind() == AlgebraKind::D3_4 {
        Ok(())
    } else {
        Err(Error::Unsupported {
            operation: "D3_4 lemmas",
            allowed: "d3_4",
            kind: spec.kind().name(),
        })
    }
}

/// Both expansions of the `Y_2`-dependent two-factor products, as
/// `(label, product, closed form)`.
pub fn y2_part_identities(spec: &AlgebraSpec) -> Result<Vec<(&'static str, DiffOperator, DiffOperator)>> {
    require_d34(spec)?;
    let zero = Shift::zero();
    let z = |l| z_var(spec, l, &zero);
    let bar = factor(&z(VariableLabel::Bar(2))?).mul(&factor(&z(VariableLabel::Bar(3))?));
    let bar_closed = quadratic(
        LaurentPoly::one(),
        -(&y1(spec, &at(&zero, 5, 0))? * &k2(spec, &at(&zero, 6, 0))?),
        &(&y1(spec, &at(&zero, 5, 0))? * &y1(spec, &at(&zero, 7, 0))?) * &inv(cube(spec, 1, &at(&zero, 7, 0))?),
    );
    let plain = factor(&z(VariableLabel::Plain(3))?).mul(&factor(&z(VariableLabel::Plain(2))?));
    let plain_closed = quadratic(
        LaurentPoly::one(),
        -(&h2(spec, &at(&zero, 2, 0))? * &inv(y1(spec, &at(&zero, 3, 0))?)),
        &cube(spec, 1, &at(&zero, 3, 0))? * &inv(&y1(spec, &at(&zero, 3, 0))? * &y1(spec, &at(&zero, 5, 0))?),
    );
    Ok(vec![
        ("(1-z2bar D)(1-z3bar D)", bar, bar_closed),
        ("(1-z3 D)(1-z2 D)", plain, plain_closed),
    ])
}

/// Checks the three-factor form of `L` degree-wise up to `cutoff` and both
/// `Y_2`-part expansions exactly. Screening of `H_a`, `K_a` is checked by the
/// screening module.
pub fn check_d34_lemmas(spec: &AlgebraSpec, cutoff: usize) -> Result<CheckReport> {
    require_d34(spec)?;
    let mut report = CheckReport::new("d34", ReportParams::for_spec(spec).cutoff(cutoff));
    let direct = build_l(spec, cutoff)?;
    let rewritten = rewritten_l(spec, cutoff)?;
    for d in 0..=cutoff {
        report.exact(format!("rewrite D^{d}"), &(&direct.coeff(d)? - &rewritten.coeff(d)?));
    }
    for (label, product, closed) in y2_part_identities(spec)? {
        for d in 0..3 {
            report.exact(format!("{label} D^{d}"), &(&product.coeff(d)? - &closed.coeff(d)?));
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d34() -> AlgebraSpec {
        AlgebraSpec::new(AlgebraKind::D3_4, 2).unwrap()
    }

    #[test]
    fn a0_has_single_product() {
        let s = d34();
        let zero = Shift::zero();
        let expected = &k1(&s, &at(&zero, 5, 1)).unwrap() * &h1(&s, &at(&zero, 3, -1)).unwrap();
        assert_eq!(a_coeff(&s, 0).unwrap(), expected);
        assert_eq!(a_coeff(&s, 0).unwrap().len(), 4);
    }

    #[test]
    fn lemmas_hold_to_degree_eight() {
        let r = check_d34_lemmas(&d34(), 8).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.items.iter().any(|i| i.label == "rewrite D^0"));
    }

    #[test]
    fn rejects_other_algebras() {
        let s = AlgebraSpec::new(AlgebraKind::D2, 2).unwrap();
        assert!(check_d34_lemmas(&s, 4).is_err());
    }
}
