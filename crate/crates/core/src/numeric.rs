//! Real scalar types for the numeric checks: `f64` and a 160-bit binary
//! float. Complex arithmetic goes through `num_complex::Complex<R>`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex;
use num_traits::{Num, One, Zero};

pub trait Real: Clone + Num + Neg<Output = Self> + PartialOrd + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;
    /// Approximate number of significant decimal digits.
    const DIGITS: u32;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn pi() -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn to_hp(&self) -> HpReal;
    fn from_hp(x: &HpReal) -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Real for f64 {
    const NAME: &'static str = "double";
    const DIGITS: u32 = 15;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn to_hp(&self) -> HpReal {
        HpReal::from_f64(*self)
    }
    fn from_hp(x: &HpReal) -> Self {
        x.to_f64()
    }
}

const HP_BITS: usize = 160;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// 160-bit binary floating point (about 48 decimal digits).
#[derive(Clone)]
pub struct HpReal(BigFloat);

impl HpReal {
    fn wrap(x: BigFloat) -> Self {
        HpReal(x)
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! hp_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                HpReal::wrap(self.0.$call(&rhs.0, HP_BITS, RM))
            }
        }
    };
}

hp_binop!(Add, add, add);
hp_binop!(Sub, sub, sub);
hp_binop!(Mul, mul, mul);
hp_binop!(Div, div, div);

impl Rem for HpReal {
    type Output = HpReal;
    fn rem(self, rhs: HpReal) -> HpReal {
        HpReal::wrap(self.0.rem(&rhs.0))
    }
}

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(self.0.neg())
    }
}

impl Zero for HpReal {
    fn zero() -> Self {
        HpReal::wrap(BigFloat::from_f64(0.0, HP_BITS))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for HpReal {
    fn one() -> Self {
        HpReal::wrap(BigFloat::from_f64(1.0, HP_BITS))
    }
}

impl Num for HpReal {
    type FromStrRadixErr = &'static str;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err("only radix 10 is supported");
        }
        let v = with_consts(|cc| BigFloat::parse(s, astro_float::Radix::Dec, HP_BITS, RM, cc));
        if v.is_nan() {
            Err("invalid number")
        } else {
            Ok(HpReal(v))
        }
    }
}

impl Real for HpReal {
    const NAME: &'static str = "high";
    const DIGITS: u32 = 48;

    fn from_f64(x: f64) -> Self {
        HpReal(BigFloat::from_f64(x, HP_BITS))
    }
    fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        self.0.to_string().parse().unwrap_or(f64::NAN)
    }
    fn pi() -> Self {
        HpReal(with_consts(|cc| cc.pi(HP_BITS, RM)))
    }
    fn sinh(&self) -> Self {
        HpReal(with_consts(|cc| self.0.sinh(HP_BITS, RM, cc)))
    }
    fn cosh(&self) -> Self {
        HpReal(with_consts(|cc| self.0.cosh(HP_BITS, RM, cc)))
    }
    fn sin(&self) -> Self {
        HpReal(with_consts(|cc| self.0.sin(HP_BITS, RM, cc)))
    }
    fn cos(&self) -> Self {
        HpReal(with_consts(|cc| self.0.cos(HP_BITS, RM, cc)))
    }
    fn sqrt(&self) -> Self {
        HpReal(self.0.sqrt(HP_BITS, RM))
    }
    fn to_hp(&self) -> HpReal {
        self.clone()
    }
    fn from_hp(x: &HpReal) -> Self {
        x.clone()
    }
}

pub type C<R> = Complex<R>;

pub fn c_from(re: f64, im: f64) -> C<f64> {
    Complex::new(re, im)
}

pub fn lift<R: Real>(z: C<f64>) -> C<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

pub fn widen<R: Real>(z: &C<R>) -> C<HpReal> {
    Complex::new(z.re.to_hp(), z.im.to_hp())
}

pub fn narrow<R: Real>(z: &C<HpReal>) -> C<R> {
    Complex::new(R::from_hp(&z.re), R::from_hp(&z.im))
}

pub fn lower<R: Real>(z: &C<R>) -> C<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// `|z|` as `f64`; enough for pivoting and error estimates.
pub fn abs_f64<R: Real>(z: &C<R>) -> f64 {
    lower(z).norm()
}

/// `sinh(x + iy) = sinh x cos y + i cosh x sin y`.
pub fn csinh<R: Real>(z: &C<R>) -> C<R> {
    Complex::new(z.re.sinh() * z.im.cos(), z.re.cosh() * z.im.sin())
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det<R: Real>(mut m: Vec<Vec<C<R>>>) -> C<R> {
    let size = m.len();
    let mut acc = C::<R>::one();
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&a, &b| abs_f64(&m[a][col]).total_cmp(&abs_f64(&m[b][col])))
            .expect("non-empty");
        if m[pivot][col].is_zero() {
            return C::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            acc = -acc;
        }
        let p = m[col][col].clone();
        acc = acc * p.clone();
        for row in col + 1..size {
            let f = m[row][col].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            let (top, rest) = m.split_at_mut(row);
            for (target, pivot_row) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *target = target.clone() - f.clone() * pivot_row.clone();
            }
        }
    }
    acc
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_err<R: Real>(a: &C<R>, b: &C<R>, floor: f64) -> f64 {
    let d = abs_f64(&(a.clone() - b.clone()));
    d / abs_f64(a).max(abs_f64(b)).max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_identities<R: Real>(tol: f64) {
        let z: C<R> = lift(c_from(0.37, -1.21));
        let s = csinh(&z);
        // sinh(z + i pi) = -sinh(z)
        let shifted = csinh(&(z.clone() + C::new(R::zero(), R::pi())));
        assert!(rel_err(&shifted, &(-s.clone()), 0.0) < tol);
        let expected = c_from(0.37, -1.21).sinh();
        assert!((lower(&s) - expected).norm() < 1e-14);
    }

    #[test]
    fn sinh_quasi_periodic() {
        check_identities::<f64>(1e-14);
        check_identities::<HpReal>(1e-15);
    }

    #[test]
    fn hp_is_more_precise() {
        let third = HpReal::one() / HpReal::from_f64(3.0);
        let back = third * HpReal::from_f64(3.0) - HpReal::one();
        assert!(back.abs().to_f64() < 1e-40);
        assert_eq!(HpReal::from_f64(-2.5).to_f64(), -2.5);
        assert_eq!(HpReal::zero().to_f64(), 0.0);
        let two: HpReal = Num::from_str_radix("2", 10).unwrap();
        assert!((two.sqrt().to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn determinant_matches_closed_form() {
        let m: Vec<Vec<C<f64>>> = vec![
            vec![c_from(1.0, 1.0), c_from(2.0, 0.0)],
            vec![c_from(0.0, 3.0), c_from(1.0, -1.0)],
        ];
        // (1+i)(1-i) - 2*3i = 2 - 6i
        assert!((det(m.clone()) - c_from(2.0, -6.0)).norm() < 1e-14);
        let hp: Vec<Vec<C<HpReal>>> = m.into_iter().map(|r| r.into_iter().map(lift).collect()).collect();
        assert!((lower(&det(hp)) - c_from(2.0, -6.0)).norm() < 1e-14);
        let mut sing = vec![vec![c_from(1.0, 0.0); 3]; 3];
        sing[2][1] = c_from(4.0, 0.0);
        assert!(det(sing).norm() < 1e-14);
    }
}
