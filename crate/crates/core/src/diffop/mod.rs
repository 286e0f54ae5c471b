//! Difference operators `sum_a c_a(u) D^a` with `D f(u) = f(u + 2) D`.
//!
//! Operators are either exact (finitely many terms) or power series truncated
//! at a cutoff `K`; a truncated operator never reports coefficients above `K`.

mod build;
pub mod d34;
mod ttable;

pub use build::{build_l, build_l_a, build_l_rewritten_a2, check_rewrite_a2, factor};
pub use ttable::{
    apply_operator, check_duality, check_tq, check_tq_dualized, check_tt2, extract_t, solve_lower, TTable,
};

use crate::error::{Error, Result};
use crate::ring::LaurentPoly;
use crate::shift::Shift;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderBound {
    Exact,
    Truncated(usize),
}

impl OrderBound {
    fn meet(self, other: OrderBound) -> OrderBound {
        match (self, other) {
            (OrderBound::Exact, OrderBound::Exact) => OrderBound::Exact,
            (OrderBound::Exact, t) | (t, OrderBound::Exact) => t,
            (OrderBound::Truncated(a), OrderBound::Truncated(b)) => OrderBound::Truncated(a.min(b)),
        }
    }

    pub fn cutoff(self) -> Option<usize> {
        match self {
            OrderBound::Exact => None,
            OrderBound::Truncated(k) => Some(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    coeffs: Vec<LaurentPoly>,
    bound: OrderBound,
}

impl DiffOperator {
    pub fn new(coeffs: Vec<LaurentPoly>, bound: OrderBound) -> Self {
        let mut op = DiffOperator { coeffs, bound };
        op.normalize();
        op
    }

    pub fn identity() -> Self {
        DiffOperator::new(vec![LaurentPoly::one()], OrderBound::Exact)
    }

    /// `c(u) D^degree`.
    pub fn monomial(c: LaurentPoly, degree: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(); degree + 1];
        coeffs[degree] = c;
        DiffOperator::new(coeffs, OrderBound::Exact)
    }

    fn normalize(&mut self) {
        if let OrderBound::Truncated(k) = self.bound {
            self.coeffs.truncate(k + 1);
        }
        while self.coeffs.last().is_some_and(LaurentPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn bound(&self) -> OrderBound {
        self.bound
    }

    pub fn is_exact(&self) -> bool {
        self.bound == OrderBound::Exact
    }

    /// Highest degree with a nonzero coefficient (`None` for the zero operator).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `D^degree`; errors above the truncation cutoff.
    pub fn coeff(&self, degree: usize) -> Result<LaurentPoly> {
        if let OrderBound::Truncated(k) = self.bound {
            if degree > k {
                return Err(Error::CutoffTooSmall { degree, cutoff: k });
            }
        }
        Ok(self.coeffs.get(degree).cloned().unwrap_or_default())
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, k: usize) -> DiffOperator {
        DiffOperator::new(self.coeffs.clone(), self.bound.meet(OrderBound::Truncated(k)))
    }

    pub fn scale_i64(&self, k: i64) -> DiffOperator {
        DiffOperator::new(self.coeffs.iter().map(|c| c.scale_i64(k)).collect(), self.bound)
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let bound = self.bound.meet(other.bound);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                match other.coeffs.get(i) {
                    Some(b) => &a + b,
                    None => a,
                }
            })
            .collect();
        DiffOperator::new(coeffs, bound)
    }

    /// Graded product using `D^a d(u) = d(u + 2a) D^a`.
    pub fn mul(&self, other: &DiffOperator) -> DiffOperator {
        let bound = self.bound.meet(other.bound);
        let cap = match bound {
            OrderBound::Exact => usize::MAX,
            OrderBound::Truncated(k) => k,
        };
        let len = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let mut out = vec![LaurentPoly::zero(); len.min(cap.saturating_add(1))];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() || a > cap {
                continue;
            }
            let step = Shift::real(2 * a as i64);
            for (b, cb) in other.coeffs.iter().enumerate() {
                if a + b > cap {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                out[a + b] += &(ca * &cb.shift_all(&step));
            }
        }
        DiffOperator::new(out, bound)
    }

    /// Applies `u -> u + d` to every coefficient.
    pub fn shift_coeffs(&self, d: &Shift) -> DiffOperator {
        DiffOperator::new(self.coeffs.iter().map(|c| c.shift_all(d)).collect(), self.bound)
    }
}

pub fn dop_mul(a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
    a.mul(b)
}

/// `(1 - c(u) D^2)^{-1} = sum_j (c(u) D^2)^j`, truncated at `cutoff`.
pub fn geometric_inverse(c: &LaurentPoly, cutoff: usize) -> DiffOperator {
    let mut coeffs = vec![LaurentPoly::zero(); cutoff + 1];
    let mut power = LaurentPoly::one();
    let mut j = 0usize;
    while 2 * j <= cutoff {
        coeffs[2 * j] = power.clone();
        if power.is_zero() {
            break;
        }
        power = &power * &c.shift_all(&Shift::real(4 * j as i64));
        j += 1;
    }
    DiffOperator::new(coeffs, OrderBound::Truncated(cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::text::parse_poly;
    use crate::shift::Family;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    fn one_minus(c: &LaurentPoly) -> DiffOperator {
        DiffOperator::new(vec![LaurentPoly::one(), -c], OrderBound::Exact)
    }

    #[test]
    fn shift_rule() {
        let d = DiffOperator::monomial(LaurentPoly::one(), 1);
        let f = DiffOperator::monomial(p("Y[1](u)"), 0);
        assert_eq!(d.mul(&f), DiffOperator::monomial(p("Y[1](u+2)"), 1));
        let op = one_minus(&p("Y[1](u)"));
        assert_eq!(op.mul(&DiffOperator::identity()), op);
    }

    #[test]
    fn two_factor_product() {
        let a = p("Y[1](u)");
        let b = p("Y[2](u)");
        let got = one_minus(&a).mul(&one_minus(&b));
        assert_eq!(got.coeff(0).unwrap(), LaurentPoly::one());
        assert_eq!(got.coeff(1).unwrap(), -(&a + &b));
        assert_eq!(got.coeff(2).unwrap(), p("Y[1](u)*Y[2](u+2)"));
        assert!(got.is_exact());
        assert_eq!(got.degree(), Some(2));
    }

    #[test]
    fn geometric_inverse_examples() {
        assert_eq!(
            geometric_inverse(&LaurentPoly::zero(), 6).coeffs(),
            &[LaurentPoly::one()]
        );
        let c = p("Y[1](u)");
        let k2 = geometric_inverse(&c, 2);
        assert_eq!(k2.coeffs(), &[LaurentPoly::one(), LaurentPoly::zero(), c.clone()]);
        let k4 = geometric_inverse(&c, 4);
        assert_eq!(k4.coeff(4).unwrap(), p("Y[1](u)*Y[1](u+4)"));
        assert!(k4.coeff(5).is_err());
        // inverse really inverts, up to the cutoff
        let prod = DiffOperator::new(vec![LaurentPoly::one(), LaurentPoly::zero(), -&c], OrderBound::Exact)
            .mul(&geometric_inverse(&c, 8));
        assert_eq!(prod.coeffs(), &[LaurentPoly::one()]);
        assert_eq!(prod.bound(), OrderBound::Truncated(8));
    }

    fn arb_op() -> impl Strategy<Value = DiffOperator> {
        prop::collection::vec(crate::ring::testing::arb_poly(Family::Y), 1..4)
            .prop_map(|c| DiffOperator::new(c, OrderBound::Exact))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_is_associative(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
