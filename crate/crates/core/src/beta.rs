//! Projection of `Y`-polynomials to classical weights, `Y_a^e -> e^{(e / r_a) Lambda_a}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::diffop::TTable;
use crate::error::{Error, Result};
use crate::report::{CheckReport, ReportParams, Status};
use crate::ring::LaurentPoly;
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::{Family, Shift};
use crate::variables::{z_var, VariableLabel};

/// Finite sum of `c * e^{sum_a lambda_a Lambda_a}` with integer `c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightPoly {
    terms: BTreeMap<Vec<BigRational>, BigInt>,
}

impl WeightPoly {
    pub fn zero() -> Self {
        WeightPoly::default()
    }

    pub fn monomial(weight: Vec<BigRational>, c: BigInt) -> Self {
        let mut out = WeightPoly::zero();
        out.add_term(weight, c);
        out
    }

    /// `e^{Lambda_a}` in rank `n`.
    pub fn fundamental(n: u32, a: u32) -> Self {
        let weight = (1..=n)
            .map(|b| {
                if b == a {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        WeightPoly::monomial(weight, BigInt::one())
    }

    fn add_term(&mut self, weight: Vec<BigRational>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(weight).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BigRational>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, weight: &[BigRational]) -> BigInt {
        self.terms.get(weight).cloned().unwrap_or_default()
    }

    /// Value at `e^{Lambda_a} = 1` for all `a`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|w| w.iter().all(BigRational::is_integer))
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(BigInt::is_positive)
    }
}

impl Add for &WeightPoly {
    type Output = WeightPoly;

    fn add(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Mul for &WeightPoly {
    type Output = WeightPoly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = WeightPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let w = w1.iter().zip(w2).map(|(a, b)| a + b).collect();
                out.add_term(w, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
            write!(f, "e[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

/// `beta` on the `Y` ring: `Y_a(u + s)^e -> e^{(e / r_a) Lambda_a}`, `h_a -> 1`.
pub fn beta_project(spec: &AlgebraSpec, p: &LaurentPoly) -> Result<WeightPoly> {
    let n = spec.n() as usize;
    let mut out = WeightPoly::zero();
    for (m, c) in p.terms() {
        let mut weight = vec![BigRational::zero(); n];
        for (sym, e) in m.symbols() {
            if sym.family() != Family::Y {
                return Err(Error::WrongFamily { expected: Family::Y });
            }
            let a = sym.index();
            let r = spec.node_twist(a)?;
            weight[(a - 1) as usize] += BigRational::new(e.into(), r.into());
        }
        out.add_term(weight, c.clone());
    }
    Ok(out)
}

/// `prod_{k=1}^{a} z_k(u + a - 2k)`.
pub fn top_term(spec: &AlgebraSpec, a: u32) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::one();
    for k in 1..=a {
        out = &out * &z_var(spec, VariableLabel::Plain(k), &Shift::real(a as i64 - 2 * k as i64))?;
    }
    Ok(out)
}

fn params(table: &TTable) -> ReportParams {
    let p = ReportParams::for_spec(table.spec());
    match table.bound().cutoff() {
        Some(k) => p.cutoff(k),
        None => p,
    }
}

/// Top term of `T^a` has coefficient 1 and `beta`-image `e^{Lambda_a}`.
pub fn check_top_term(table: &TTable, a: u32) -> Result<CheckReport> {
    let spec = table.spec();
    if a == 0 || a > spec.kr_bound() {
        return Err(Error::IndexOutOfRange {
            index: a,
            max: spec.kr_bound(),
        });
    }
    let mut report = CheckReport::new("beta-top", params(table));
    push_top_term(&mut report, table, a)?;
    Ok(report.finish())
}

fn push_top_term(report: &mut CheckReport, table: &TTable, a: u32) -> Result<()> {
    let spec = table.spec();
    let top = top_term(spec, a)?;
    let (m, c) = top.as_monomial().expect("product of monomials");
    let coeff = table.upper(a as i64)?.coefficient(m) * c;
    report.note(
        format!("T^{a} top coefficient"),
        if coeff.is_one() { Status::Pass } else { Status::Fail },
        format!("coefficient {coeff}"),
    );
    let image = beta_project(spec, &top)?;
    let expected = WeightPoly::fundamental(spec.n(), a);
    report.note(
        format!("T^{a} top weight"),
        if image == expected { Status::Pass } else { Status::Fail },
        image.to_string(),
    );
    Ok(())
}

/// Top terms for `1 <= a <= b`, integrality of every known `beta(T^a)`,
/// `T^1` term counts for the `A(2)` families and (warning only) positivity.
pub fn check_beta(table: &TTable) -> Result<CheckReport> {
    let spec = table.spec();
    let mut report = CheckReport::new("beta", params(table));
    for a in 1..=spec.kr_bound() {
        push_top_term(&mut report, table, a)?;
    }
    for a in 0..table.upper_len() {
        let image = beta_project(spec, &table.upper(a as i64)?)?;
        report.note(
            format!("beta(T^{a}) integral"),
            if image.is_integral() {
                Status::Pass
            } else {
                Status::Fail
            },
            format!("{} weights", image.len()),
        );
        if (1..=spec.kr_bound() as usize).contains(&a) {
            report.note(
                format!("beta(T^{a}) positive"),
                if image.is_positive() {
                    Status::Pass
                } else {
                    Status::Warn
                },
                format!("coefficient sum {}", image.coefficient_sum()),
            );
        }
    }
    if spec.kind().is_a2() {
        let expected = match spec.kind() {
            AlgebraKind::A2Even => 2 * spec.n() + 1,
            _ => 2 * spec.n(),
        } as usize;
        let got = table.upper(1)?.len();
        report.note(
            "T^1 term count",
            if got == expected { Status::Pass } else { Status::Fail },
            format!("{got} terms, expected {expected}"),
        );
    }
    Ok(report.finish())
}
