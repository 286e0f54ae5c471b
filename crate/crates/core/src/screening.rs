//! Screening derivations `S_a` on the `Y` ring, with values in the `Q` ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::diffop::{d34, TTable};
use crate::error::{Error, Result};
use crate::report::{CheckReport, ReportParams};
use crate::ring::{power_product, y_to_q_unchecked, LaurentPoly};
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::{Family, Shift};

/// Screening data for one orbit index `a`, with memoized `S_a(u + s)`.
#[derive(Clone, Debug)]
pub struct ScreeningContext {
    spec: AlgebraSpec,
    a: u32,
    cache: BTreeMap<Shift, LaurentPoly>,
}

fn shift_by(s: &Shift, num: i64, den: i64) -> Shift {
    s + &Shift::from_ints(num, den, 0, 1)
}

impl ScreeningContext {
    pub fn new(spec: &AlgebraSpec, a: u32) -> Result<Self> {
        spec.check_orbit(a)?;
        Ok(ScreeningContext {
            spec: spec.clone(),
            a,
            cache: BTreeMap::new(),
        })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn index(&self) -> u32 {
        self.a
    }

    fn k_ab(&self, b: u32, s: &Shift) -> Result<LaurentPoly> {
        let spec = &self.spec;
        let q = |at: &Shift| power_product(spec, Family::Q, b, 1, at);
        Ok(match spec.incidence(self.a, b)? {
            0 => LaurentPoly::one(),
            1 => power_product(spec, Family::Q, b, spec.r_ab(self.a, b)?, s)?,
            2 => &q(&shift_by(s, -1, 2))? * &q(&shift_by(s, 1, 2))?,
            _ => &(&q(&shift_by(s, -2, 3))? * &q(s)?) * &q(&shift_by(s, 2, 3))?,
        })
    }

    /// `S_a(u + s) = prod_b K_ab(u + s) / (Q_a^{r_a}(u + s - 1) Q_a^{r_a}(u + s + 1))`.
    pub fn formal_s(&mut self, s: &Shift) -> Result<LaurentPoly> {
        if let Some(v) = self.cache.get(s) {
            return Ok(v.clone());
        }
        let spec = &self.spec;
        let ra = spec.node_twist(self.a)?;
        let mut out = LaurentPoly::one();
        for b in 1..=spec.n_prime() {
            out = &out * &self.k_ab(b, s)?;
        }
        for d in [-1, 1] {
            let den = power_product(spec, Family::Q, self.a, ra, &shift_by(s, d, 1))?;
            out = &out * &den.inverse().expect("monomial");
        }
        self.cache.insert(s.clone(), out.clone());
        Ok(out)
    }

    /// `A_a(u + s) = prod_b Q_b^{r_ab}(u + s - (a|b)) / Q_b^{r_ab}(u + s + (a|b))`.
    pub fn a_factor(&self, s: &Shift) -> Result<LaurentPoly> {
        let spec = &self.spec;
        let mut out = LaurentPoly::one();
        for b in 1..=spec.n_prime() {
            let pair = spec.pairing(self.a, b)?;
            if *pair.numer() == 0 {
                continue;
            }
            let r = spec.r_ab(self.a, b)?;
            let num = power_product(spec, Family::Q, b, r, &shift_by(s, -pair.numer(), *pair.denom()))?;
            let den = power_product(spec, Family::Q, b, r, &shift_by(s, *pair.numer(), *pair.denom()))?;
            out = &(&out * &num) * &den.inverse().expect("monomial");
        }
        Ok(out)
    }

    /// `S_a` applied to a `Y`-family polynomial, converted to the `Q` ring.
    pub fn apply(&mut self, p: &LaurentPoly) -> Result<LaurentPoly> {
        if p.family()? == Some(Family::Q) {
            return Err(Error::WrongFamily { expected: Family::Y });
        }
        let mut acc = LaurentPoly::zero();
        for (m, c) in p.terms() {
            let hits: Vec<(Shift, i64)> = m
                .symbols()
                .filter(|(sym, _)| sym.index() == self.a)
                .map(|(sym, e)| (sym.shift().clone(), e))
                .collect();
            if hits.is_empty() {
                continue;
            }
            let base = y_to_q_unchecked(&LaurentPoly::from_monomial(m.clone()));
            for (s, e) in hits {
                let term = &base * &self.formal_s(&s)?;
                acc += &term.scale(&(c * BigInt::from(e)));
            }
        }
        Ok(acc)
    }
}

pub fn formal_s(spec: &AlgebraSpec, a: u32, s: &Shift) -> Result<LaurentPoly> {
    ScreeningContext::new(spec, a)?.formal_s(s)
}

pub fn apply_screening(spec: &AlgebraSpec, a: u32, p: &LaurentPoly) -> Result<LaurentPoly> {
    ScreeningContext::new(spec, a)?.apply(p)
}

/// `S_a(u + 2) - A_a(u + 1) S_a(u) = 0` for every orbit index.
pub fn check_s_functional(spec: &AlgebraSpec) -> Result<CheckReport> {
    let mut report = CheckReport::new("sc-eq", ReportParams::for_spec(spec));
    for a in 1..=spec.n() {
        let mut ctx = ScreeningContext::new(spec, a)?;
        let lhs = ctx.formal_s(&Shift::real(2))?;
        let rhs = &ctx.a_factor(&Shift::real(1))? * &ctx.formal_s(&Shift::zero())?;
        report.exact(format!("a={a}"), &(&lhs - &rhs));
    }
    Ok(report.finish())
}

/// `S_a T^b(u) = 0` for every orbit index `a` and every known `b <= max_degree`.
pub fn check_screening_annihilation(table: &TTable, max_degree: usize) -> Result<CheckReport> {
    let spec = table.spec();
    let mut params = ReportParams::for_spec(spec);
    if let Some(k) = table.bound().cutoff() {
        params = params.cutoff(k);
    }
    let mut report = CheckReport::new("screening", params);
    let top = max_degree.min(table.upper_len().saturating_sub(1));
    for a in 1..=spec.n() {
        let mut ctx = ScreeningContext::new(spec, a)?;
        for b in 0..=top {
            let t = table.upper(b as i64)?;
            report.exact(format!("S_{a} T^{b}"), &ctx.apply(&t)?);
        }
    }
    Ok(report.finish())
}

/// `S_a H_a = S_a K_a = 0` for `D(3)_4`, `a = 1, 2`.
pub fn check_hk_annihilation(spec: &AlgebraSpec) -> Result<CheckReport> {
    if spec.kind() != AlgebraKind::D3_4 {
        return Err(Error::Unsupported {
            operation: "H/K annihilation",
            allowed: "d3_4",
            kind: spec.kind().name(),
        });
    }
    let mut report = CheckReport::new("hk", ReportParams::for_spec(spec));
    let zero = Shift::zero();
    let cases = [
        ("S_1 H_1", 1, d34::h1(spec, &zero)?),
        ("S_1 K_1", 1, d34::k1(spec, &zero)?),
        ("S_2 H_2", 2, d34::h2(spec, &zero)?),
        ("S_2 K_2", 2, d34::k2(spec, &zero)?),
    ];
    for (label, a, p) in cases {
        report.exact(label, &apply_screening(spec, a, &p)?);
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{build_l, extract_t};
    use crate::ring::testing::arb_poly;
    use crate::ring::text::parse_poly;
    use proptest::prelude::*;

    fn spec(kind: AlgebraKind, n: u32) -> AlgebraSpec {
        AlgebraSpec::new(kind, n).unwrap()
    }

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn formal_s_examples() {
        let s = spec(AlgebraKind::A2Even, 1);
        assert_eq!(
            formal_s(&s, 1, &Shift::zero()).unwrap(),
            p("Q[1](u-1)^-1*Q[1](u+1/2t)*Q[1](u+1)^-1")
        );
        let d = spec(AlgebraKind::D3_4, 2);
        let s1 = formal_s(&d, 1, &Shift::zero()).unwrap();
        assert_eq!(s1.len(), 1);
        assert_eq!(s1, p("Q[1](u-1)^-1*Q[1](u+1)^-1*Q[2](u)*Q[2](u+1/3t)*Q[2](u+2/3t)"));
    }

    #[test]
    fn functional_equation_holds() {
        for (kind, n) in [
            (AlgebraKind::A2Even, 1),
            (AlgebraKind::A2Even, 3),
            (AlgebraKind::A2Odd, 2),
            (AlgebraKind::A2Odd, 3),
            (AlgebraKind::D2, 2),
            (AlgebraKind::D2, 3),
            (AlgebraKind::D3_4, 2),
        ] {
            let r = check_s_functional(&spec(kind, n)).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn derivation_basics() {
        let s = spec(AlgebraKind::A2Odd, 2);
        assert!(apply_screening(&s, 1, &p("Y[2](u)")).unwrap().is_zero());
        assert!(apply_screening(&s, 1, &LaurentPoly::constant(5)).unwrap().is_zero());
        let inv = apply_screening(&s, 1, &p("Y[1](u)^-1")).unwrap();
        let expected = -(&p("Q[1](u-1)^-1*Q[1](u+1)") * &formal_s(&s, 1, &Shift::zero()).unwrap());
        assert_eq!(inv, expected);
        assert!(apply_screening(&s, 1, &p("Q[1](u)")).is_err());
    }

    #[test]
    fn annihilates_t_functions() {
        for (kind, n, k) in [
            (AlgebraKind::A2Even, 1, 0),
            (AlgebraKind::A2Even, 2, 0),
            (AlgebraKind::A2Odd, 2, 0),
            (AlgebraKind::D2, 2, 6),
            (AlgebraKind::D3_4, 2, 6),
        ] {
            let s = spec(kind, n);
            let table = extract_t(&s, &build_l(&s, k).unwrap());
            let r = check_screening_annihilation(&table, 6).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn hk_lemma() {
        let r = check_hk_annihilation(&spec(AlgebraKind::D3_4, 2)).unwrap();
        assert!(r.passed(), "{r}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn leibniz_rule(x in arb_poly(Family::Y), y in arb_poly(Family::Y), a in 1u32..3) {
            let s = spec(AlgebraKind::A2Odd, 2);
            let mut ctx = ScreeningContext::new(&s, a).unwrap();
            let lhs = ctx.apply(&(&x * &y)).unwrap();
            let rhs = &(&ctx.apply(&x).unwrap() * &y_to_q_unchecked(&y))
                + &(&y_to_q_unchecked(&x) * &ctx.apply(&y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
