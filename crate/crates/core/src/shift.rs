//! Exact argument shifts `u + p + q t`, where `t` stands for `pi i / hbar`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Which family of formal functions a symbol belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Baxter functions, quasi-periodic: `Q_a(u + t) = h_a Q_a(u)`.
    Q,
    /// Ratios `Q_a(u - 1) / Q_a(u + 1)`, periodic in `t`.
    Y,
}

/// A point of the lattice `Q + Q t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shift {
    p: BigRational,
    q: BigRational,
}

impl Shift {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        Shift { p, q }
    }

    pub fn zero() -> Self {
        Shift::default()
    }

    /// `p_num/p_den + (q_num/q_den) t`.
    pub fn from_ints(p_num: i64, p_den: i64, q_num: i64, q_den: i64) -> Self {
        Shift {
            p: BigRational::new(p_num.into(), p_den.into()),
            q: BigRational::new(q_num.into(), q_den.into()),
        }
    }

    /// An integer real displacement.
    pub fn real(p: i64) -> Self {
        Shift::from_ints(p, 1, 0, 1)
    }

    /// A pure `t` displacement `(num/den) t`.
    pub fn theta(num: i64, den: i64) -> Self {
        Shift::from_ints(0, 1, num, den)
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Drops the `t` component (the degenerate `pi i / hbar -> 0` limit).
    pub fn without_theta(self) -> Self {
        Shift {
            p: self.p,
            q: BigRational::zero(),
        }
    }

    pub fn p_f64(&self) -> f64 {
        ratio_to_f64(&self.p)
    }

    pub fn q_f64(&self) -> f64 {
        ratio_to_f64(&self.q)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    let num: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}

impl Add for &Shift {
    type Output = Shift;

    fn add(self, rhs: &Shift) -> Shift {
        Shift {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Add for Shift {
    type Output = Shift;

    fn add(self, rhs: Shift) -> Shift {
        &self + &rhs
    }
}

impl Sub for &Shift {
    type Output = Shift;

    fn sub(self, rhs: &Shift) -> Shift {
        Shift {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Neg for &Shift {
    type Output = Shift;

    fn neg(self) -> Shift {
        Shift {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

pub fn shift_add(a: &Shift, b: &Shift) -> Shift {
    a + b
}

/// Canonical representative of a shifted symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalizationResult {
    pub shift: Shift,
    /// Power of `h_a` pulled out (always 0 for the `Y` family).
    pub unit_power: BigInt,
}

/// Reduces the `t` component into `[0, 1)`.
pub fn canonicalize(family: Family, s: &Shift) -> CanonicalizationResult {
    let whole = s.q.floor().to_integer();
    let q = &s.q - BigRational::from_integer(whole.clone());
    let unit_power = match family {
        Family::Q => whole,
        Family::Y => BigInt::zero(),
    };
    CanonicalizationResult {
        shift: Shift { p: s.p.clone(), q },
        unit_power,
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    let abs = r.abs();
    if abs.denom().is_one() {
        write!(f, "{}", abs.numer())
    } else {
        write!(f, "{}/{}", abs.numer(), abs.denom())
    }
}

/// Text form `u`, `u+3/2`, `u-1+1/2t`, `u+2/3t`.
impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("u")?;
        if !self.p.is_zero() {
            f.write_str(if self.p.is_negative() { "-" } else { "+" })?;
            write_rational(f, &self.p)?;
        }
        if !self.q.is_zero() {
            f.write_str(if self.q.is_negative() { "-" } else { "+" })?;
            write_rational(f, &self.q)?;
            f.write_str("t")?;
        }
        Ok(())
    }
}
