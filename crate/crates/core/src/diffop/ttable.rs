use super::{DiffOperator, OrderBound};
use crate::error::{Error, Result};
use crate::report::{CheckReport, ReportParams};
use crate::ring::{power_product, resolve_conventions, y_to_q_unchecked, LaurentPoly};
use crate::root_data::AlgebraSpec;
use crate::shift::{Family, Shift};

/// Upper `T^a(u)` and lower `T_m(u)` functions read off `L(u)`.
#[derive(Clone, Debug)]
pub struct TTable {
    spec: AlgebraSpec,
    upper: Vec<LaurentPoly>,
    lower: Vec<LaurentPoly>,
    bound: OrderBound,
}

impl TTable {
    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn bound(&self) -> OrderBound {
        self.bound
    }

    /// `T^a(u)`; zero for `a < 0` and, for exact operators, above the degree.
    pub fn upper(&self, a: i64) -> Result<LaurentPoly> {
        if a < 0 {
            return Ok(LaurentPoly::zero());
        }
        let a = a as usize;
        if let Some(t) = self.upper.get(a) {
            return Ok(t.clone());
        }
        match self.bound {
            OrderBound::Exact => Ok(LaurentPoly::zero()),
            OrderBound::Truncated(k) => Err(Error::CutoffTooSmall { degree: a, cutoff: k }),
        }
    }

    /// `T_m(u)`; zero for `m < 0`.
    pub fn lower(&self, m: i64) -> Result<LaurentPoly> {
        if m < 0 {
            return Ok(LaurentPoly::zero());
        }
        self.lower.get(m as usize).cloned().ok_or(Error::CutoffTooSmall {
            degree: m as usize,
            cutoff: self.lower.len().saturating_sub(1),
        })
    }

    /// Largest `a` for which `T^a` is known (`N + 1` in the exact case).
    pub fn upper_len(&self) -> usize {
        self.upper.len()
    }

    pub fn lower_len(&self) -> usize {
        self.lower.len()
    }

    /// Fills `T_m` for `m <= m_max`.
    pub fn with_lower(mut self, m_max: usize) -> Result<Self> {
        self.lower = solve_lower(&self, m_max)?;
        Ok(self)
    }
}

/// `T^a(u) = (-1)^a c_a(u - a)` for `L(u) = sum_a c_a(u) D^a`; lower part holds `T_0` only.
pub fn extract_t(spec: &AlgebraSpec, l: &DiffOperator) -> TTable {
    let len = match l.bound() {
        OrderBound::Exact => l.coeffs().len(),
        OrderBound::Truncated(k) => k + 1,
    };
    let upper = (0..len)
        .map(|a| {
            let c = l.coeffs().get(a).cloned().unwrap_or_default();
            let sign = if a % 2 == 0 { 1 } else { -1 };
            c.scale_i64(sign).shift_all(&Shift::real(-(a as i64)))
        })
        .collect();
    TTable {
        spec: spec.clone(),
        upper,
        lower: vec![LaurentPoly::one()],
        bound: l.bound(),
    }
}

fn real(p: i64) -> Shift {
    Shift::real(p)
}

/// `T_m(u) = sum_{a=1}^m (-1)^{a+1} T_{m-a}(u + a) T^a(u + a - m)`, for `m <= m_max`.
pub fn solve_lower(table: &TTable, m_max: usize) -> Result<Vec<LaurentPoly>> {
    let mut lower = vec![LaurentPoly::one()];
    for m in 1..=m_max as i64 {
        let mut acc = LaurentPoly::zero();
        for a in 1..=m {
            let prev = &lower[(m - a) as usize];
            let term = &prev.shift_all(&real(a)) * &table.upper(a)?.shift_all(&real(a - m));
            acc += &(if a % 2 == 1 { term } else { -term });
        }
        lower.push(acc);
    }
    Ok(lower)
}

/// `sum_{a=0}^m (-1)^a T_{m-a}(u - m - a) T^a(u - a) = delta_{m0}` for `m < lower_len`.
pub fn check_tt2(table: &TTable) -> Result<CheckReport> {
    let mut report = CheckReport::new("tt", params(table));
    for m in 0..table.lower_len() as i64 {
        let mut acc = if m == 0 {
            -LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        };
        for a in 0..=m {
            let term = &table.lower(m - a)?.shift_all(&real(-m - a)) * &table.upper(a)?.shift_all(&real(-a));
            acc += &(if a % 2 == 0 { term } else { -term });
        }
        report.exact(format!("m={m}"), &acc);
    }
    Ok(report.finish())
}

fn params(table: &TTable) -> ReportParams {
    let p = ReportParams::for_spec(&table.spec);
    match table.bound.cutoff() {
        Some(k) => p.cutoff(k),
        None => p,
    }
}

/// `sum_a y_to_q(c_a) f(u + 2a)` for an exact `L` and a `Q`-family `f`.
pub fn apply_operator(l: &DiffOperator, f: &LaurentPoly) -> Result<LaurentPoly> {
    if !l.is_exact() {
        return Err(Error::TruncatedOperator);
    }
    if f.family()? == Some(Family::Y) {
        return Err(Error::WrongFamily { expected: Family::Q });
    }
    let mut acc = LaurentPoly::zero();
    for (a, c) in l.coeffs().iter().enumerate() {
        acc += &(&y_to_q_unchecked(c) * &f.shift_all(&real(2 * a as i64)));
    }
    Ok(acc)
}

/// `L(u) Q_1^{r_1}(u) = 0`.
pub fn check_tq(spec: &AlgebraSpec, l: &DiffOperator) -> Result<CheckReport> {
    let mut report = CheckReport::new("tq", ReportParams::for_spec(spec));
    let r1 = spec.node_twist(1)?;
    let q = power_product(spec, Family::Q, 1, r1, &Shift::zero())?;
    report.exact("L Q_1", &apply_operator(l, &q)?);
    Ok(report.finish())
}

fn require_exact_a2(table: &TTable, operation: &'static str) -> Result<()> {
    if table.spec.kind().is_a2() && table.bound == OrderBound::Exact {
        Ok(())
    } else {
        Err(Error::Unsupported {
            operation,
            allowed: "a2even, a2odd",
            kind: table.spec.kind().name(),
        })
    }
}

/// `sum_{a=0}^{N+1} (-1)^a T^a(u - a) Q_1(u - 2a + g + t/2) = 0`.
pub fn check_tq_dualized(table: &TTable) -> Result<CheckReport> {
    require_exact_a2(table, "dualized T-Q relation")?;
    let spec = &table.spec;
    let mut report = CheckReport::new("tq-dual", params(table));
    let g = spec.dual_coxeter().unwrap_or(spec.rank() + 1) as i64;
    let mut acc = LaurentPoly::zero();
    for a in 0..=(spec.rank() as i64 + 1) {
        let t = y_to_q_unchecked(&table.upper(a)?.shift_all(&real(-a)));
        let q = resolve_conventions(spec, Family::Q, 1, &spec.shift(g - 2 * a, 1, 2))?;
        let term = &t * &q;
        acc += &(if a % 2 == 0 { term } else { -term });
    }
    report.exact("sum_a (-1)^a T^a Q_1", &acc);
    Ok(report.finish())
}

/// `T^a(u) = T^{N+1-a}(u + t/2)` for `0 <= a <= N+1`.
pub fn check_duality(table: &TTable) -> Result<CheckReport> {
    require_exact_a2(table, "duality")?;
    let spec = &table.spec;
    let mut report = CheckReport::new("duality", params(table));
    let top = spec.rank() as i64 + 1;
    let half = spec.shift(0, 1, 2);
    for a in 0..=top {
        let lhs = table.upper(a)?;
        let rhs = table.upper(top - a)?.shift_all(&half);
        report.exact(format!("a={a}"), &(&lhs - &rhs));
    }
    Ok(report.finish())
}
