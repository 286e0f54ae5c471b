//! Numeric Casorati determinants for the `A(2)_N` families.
//!
//! `Q_a(u) = prod_k sinh(hbar (u - u_k))` with random complex roots, so that
//! `Q_a(u + pi i / hbar) = (-1)^{M_a} Q_a(u)`. Evaluation points are kept as
//! exact shifts relative to one random base point `u0`, which lets frames on
//! different cosets of `2Z` be told apart without float comparisons.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffop::{build_l, build_l_a, extract_t, DiffOperator};
use crate::error::{Error, Result};
use crate::numeric::{abs_f64, c_from, csinh, det, lift, lower, narrow, rel_err, widen, HpReal, Real, C};
use crate::report::{CheckReport, ReportParams, Residual, Status};
use crate::ring::LaurentPoly;
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::{Family, Shift};
use crate::tsystem::{nnsy_determinant, script_t, tableaux_sum, YoungData};
use crate::variables::{x_count, x_var};

/// Relative tolerance for the determinant identities.
pub const TOL_IDENTITY: f64 = 1e-8;
/// Relative tolerance for the defining first-order recursion.
pub const TOL_RECURSION: f64 = 1e-12;
/// Relative tolerance for `L` applied to frame columns.
pub const TOL_OPERATOR: f64 = 1e-9;
/// Relative tolerance for the quasi-periodicity of the sinh model.
pub const TOL_QUASI: f64 = 1e-12;
/// Smallest `|Q|` accepted in a denominator.
pub const POLE_GUARD: f64 = 1e-6;
/// Smallest `|[0..N]|` relative to the product of row norms, after column
/// equilibration. Determinants are taken in [`Work`] precision, so this keeps
/// at least 24 significant digits.
pub const DEGENERACY: f64 = 1e-24;
/// `L_{b-1} w_b` relative to its terms must exceed this for `w_b` to count
/// as outside `Ker L_{b-1}`; far above [`Work`] rounding.
pub const ESCAPE: f64 = 1e-20;
pub const MAX_ATTEMPTS: u32 = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    High,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::High => "high",
        })
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "high" => Ok(Precision::High),
            other => Err(Error::BadLabel {
                label: other.to_string(),
                kind: "precision (double or high)",
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasoratiConfig {
    pub hbar: f64,
    pub min_roots: usize,
    pub max_roots: usize,
    /// Number of base points per trial (`u0 + j`, `j = 0..base_points`).
    pub base_points: usize,
    pub m_max: usize,
    pub a_max: u32,
    pub tolerance: f64,
}

impl Default for CasoratiConfig {
    fn default() -> Self {
        CasoratiConfig {
            hbar: 0.7,
            min_roots: 2,
            max_roots: 3,
            base_points: 5,
            m_max: 3,
            a_max: u32::MAX,
            tolerance: TOL_IDENTITY,
        }
    }
}

fn rational_f64(r: &BigRational) -> (f64, f64) {
    (
        r.numer().to_f64().unwrap_or(f64::NAN),
        r.denom().to_f64().unwrap_or(f64::NAN),
    )
}

fn rational_real<R: Real>(r: &BigRational) -> R {
    let (n, d) = rational_f64(r);
    R::from_f64(n) / R::from_f64(d)
}

/// Random sinh-product specialization of the `Q` functions.
pub struct Specialization<R: Real> {
    spec: AlgebraSpec,
    hbar: f64,
    roots: Vec<Vec<C<f64>>>,
    base: C<f64>,
    seed: u64,
    cache: RefCell<HashMap<(u32, Shift), C<R>>>,
}

impl<R: Real> Specialization<R> {
    pub fn sample(spec: &AlgebraSpec, cfg: &CasoratiConfig, seed: u64) -> Result<Self> {
        require_a2(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let roots = (0..spec.n())
            .map(|_| {
                let count = rng.gen_range(cfg.min_roots..=cfg.max_roots);
                (0..count)
                    .map(|_| c_from(rng.gen_range(-2.0..=2.0), rng.gen_range(-1.0..=1.0)))
                    .collect()
            })
            .collect();
        let base = c_from(rng.gen_range(-0.5..=0.5), rng.gen_range(-0.5..=0.5));
        Ok(Self::with_roots(spec, cfg.hbar, roots, base, seed))
    }

    pub fn with_roots(spec: &AlgebraSpec, hbar: f64, roots: Vec<Vec<C<f64>>>, base: C<f64>, seed: u64) -> Self {
        Specialization {
            spec: spec.clone(),
            hbar,
            roots,
            base,
            seed,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn base(&self) -> C<f64> {
        self.base
    }

    pub fn roots(&self, a: u32) -> &[C<f64>] {
        &self.roots[(a - 1) as usize]
    }

    /// `h_a = (-1)^{M_a}`.
    pub fn unit(&self, a: u32) -> i64 {
        if self.roots(a).len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `Q_a(u0 + at)`; the `t` part enters as `i pi q` inside each sinh.
    pub fn eval_q(&self, a: u32, at: &Shift) -> C<R> {
        let key = (a, at.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let hbar = R::from_f64(self.hbar);
        let p: R = rational_real(at.p());
        let q_pi: R = rational_real::<R>(at.q()) * R::pi();
        let mut acc = C::<R>::one();
        for root in self.roots(a) {
            let re = hbar.clone() * (R::from_f64(self.base.re - root.re) + p.clone());
            let im = hbar.clone() * R::from_f64(self.base.im - root.im) + q_pi.clone();
            acc = acc * csinh(&C::new(re, im));
        }
        self.cache.borrow_mut().insert(key, acc.clone());
        acc
    }

    fn q_power(&self, a: u32, at: &Shift, e: i64) -> Result<C<R>> {
        let v = self.eval_q(a, at);
        if e < 0 && abs_f64(&v) < POLE_GUARD {
            return Err(Error::NearPole(format!("Q[{a}](u0{at:+})", at = ShiftText(at))));
        }
        Ok(powi(&v, e))
    }

    /// Value of `p(u0 + at)`; `Y` symbols go through their `Q` ratio.
    pub fn eval_poly(&self, p: &LaurentPoly, at: &Shift) -> Result<C<R>> {
        let mut acc = C::<R>::zero();
        for (m, c) in p.terms() {
            let mut term: C<R> = lift(c_from(c.to_f64().unwrap_or(f64::NAN), 0.0));
            for (sym, e) in m.symbols() {
                let s = at + sym.shift();
                term = term
                    * match sym.family() {
                        Family::Q => self.q_power(sym.index(), &s, e)?,
                        Family::Y => {
                            let lo = &s + &Shift::real(-1);
                            let hi = &s + &Shift::real(1);
                            self.q_power(sym.index(), &lo, e)? * self.q_power(sym.index(), &hi, -e)?
                        }
                    };
            }
            for (a, e) in m.units() {
                if self.unit(a) < 0 && e % 2 != 0 {
                    term = -term;
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

struct ShiftText<'a>(&'a Shift);

impl fmt::Display for ShiftText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.0.to_string();
        f.write_str(text.strip_prefix('u').unwrap_or(&text))
    }
}

fn powi<R: Real>(v: &C<R>, e: i64) -> C<R> {
    let base = if e < 0 { C::<R>::one() / v.clone() } else { v.clone() };
    let mut acc = C::<R>::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * base.clone();
    }
    acc
}

fn require_a2(spec: &AlgebraSpec) -> Result<()> {
    if spec.kind().is_a2() {
        Ok(())
    } else {
        Err(Error::Unsupported {
            operation: "Casorati determinants",
            allowed: "a2even, a2odd",
            kind: spec.kind().name(),
        })
    }
}

/// Working scalar for basis values and determinants.
///
/// Cascade bases mix solution modes that separate by several orders of
/// magnitude per lattice step, so determinants of their values cancel
/// heavily even though the ratios are well conditioned in the `x` values.
/// Basis values are therefore carried in the wide type whatever precision
/// the model is evaluated in.
pub type Work = HpReal;

/// Filtered basis `w_b in Ker L_b` on the lattice `u0 + start + 2k`.
pub struct CasoratiFrame {
    start: Shift,
    values: Vec<Vec<C<Work>>>,
}

fn annulus(rng: &mut ChaCha8Rng) -> C<f64> {
    let r = rng.gen_range(0.5..=1.5);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    C::from_polar(r, phi)
}

/// `y_b(u) = x_b(u + N + 1 - 2b + t/2)`, the factors of `L_a`.
fn y_offset(spec: &AlgebraSpec, b: u32) -> Shift {
    spec.shift(spec.rank() as i64 + 1 - 2 * b as i64, 1, 2)
}

impl CasoratiFrame {
    /// Nested first-order recursions: `w_1` solves `(D - y_{N+1}) w = 0`;
    /// `w_a` solves `L_{a-1} w = v` with `v in Ker (D - y_{N+2-a})`.
    pub fn solve_basis<R: Real>(
        spc: &Specialization<R>,
        xs: &[LaurentPoly],
        start: Shift,
        len: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        let spec = spc.spec();
        let count = xs.len() as u32;
        let mut y = Vec::with_capacity(count as usize);
        for b in 1..=count {
            let off = &start + &y_offset(spec, b);
            let row = (0..len)
                .map(|k| {
                    let at = &off + &Shift::real(2 * k as i64);
                    spc.eval_poly(&xs[(b - 1) as usize], &at).map(|v| widen(&v))
                })
                .collect::<Result<Vec<_>>>()?;
            y.push(row);
        }
        let mut values = Vec::with_capacity(count as usize);
        for a in 1..=count {
            let first = (count + 1 - a) as usize;
            let mut cur = recurse(&y[first - 1], None, lift(annulus(rng)), len);
            for b in first + 1..=count as usize {
                cur = recurse(&y[b - 1], Some(&cur), lift(annulus(rng)), len);
            }
            values.push(cur);
        }
        Ok(CasoratiFrame { start, values })
    }

    pub fn start(&self) -> &Shift {
        &self.start
    }

    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    /// `w_b(u0 + start + 2k)`.
    pub fn value(&self, b: usize, k: usize) -> &C<Work> {
        &self.values[b - 1][k]
    }

    pub fn column(&self, b: usize) -> &[C<Work>] {
        &self.values[b - 1]
    }

    fn matrix(&self, indices: &[i64], k0: i64) -> Result<Vec<Vec<C<Work>>>> {
        let len = self.len() as i64;
        let mut m = Vec::with_capacity(self.width());
        for col in &self.values {
            let mut row = Vec::with_capacity(indices.len());
            for &i in indices {
                let k = k0 + i;
                if k < 0 || k >= len {
                    return Err(Error::WindowOverflow {
                        needed: k.max(0) as usize + 1,
                        available: self.len(),
                    });
                }
                row.push(col[k as usize].clone());
            }
            m.push(row);
        }
        Ok(m)
    }

    /// `[i_1, ..., i_{N+1}]` at lattice position `k0`.
    pub fn xi(&self, indices: &[i64], k0: i64) -> Result<C<Work>> {
        Ok(det(self.matrix(indices, k0)?))
    }

    /// `|det| / prod of row norms` for `[0..N]` at `k0`, after scaling each column to unit norm.
    fn health(&self, k0: i64) -> Result<f64> {
        let indices: Vec<i64> = (0..self.width() as i64).collect();
        let m: Vec<Vec<C<f64>>> = self
            .matrix(&indices, k0)?
            .iter()
            .map(|row| row.iter().map(lower).collect())
            .collect();
        let size = m.len();
        let col_norms: Vec<f64> = (0..size)
            .map(|c| m.iter().map(|row| row[c].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        let scaled: Vec<Vec<C<f64>>> = m
            .iter()
            .map(|row| row.iter().zip(&col_norms).map(|(z, n)| z / n).collect())
            .collect();
        let scale: f64 = scaled
            .iter()
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .product();
        Ok(det(scaled).norm() / scale)
    }
}

/// Solves `r(k+1) = y(k) r(k) + g(k)` with one free value. The free value
/// sits at the end of the window towards which the homogeneous solution
/// decays relative to `g`, so the result tracks the particular solution and
/// columns built from different factors stay separated.
fn recurse<R: Real>(y: &[C<R>], source: Option<&Vec<C<R>>>, init: C<R>, len: usize) -> Vec<C<R>> {
    let steps = len - 1;
    let hom: f64 = y[..steps].iter().map(|v| abs_f64(v).ln()).sum();
    let src = source.map_or(hom, |g| (abs_f64(&g[steps]) / abs_f64(&g[0])).ln());
    let mut out = vec![C::<R>::zero(); len];
    if hom <= src || source.is_none() {
        out[0] = init;
        for k in 0..steps {
            let mut next = y[k].clone() * out[k].clone();
            if let Some(g) = source {
                next = next + g[k].clone();
            }
            out[k + 1] = next;
        }
    } else {
        out[steps] = init;
        for k in (0..steps).rev() {
            let mut prev = out[k + 1].clone();
            if let Some(g) = source {
                prev = prev - g[k].clone();
            }
            out[k] = prev / y[k].clone();
        }
    }
    out
}

/// Indices of `xi^(a)_m`: `0, ..., a-1, a+m, ..., N+m`.
pub fn xi_indices(big_n: u32, a: u32, m: u32) -> Vec<i64> {
    (0..=big_n as i64)
        .map(|b| if b < a as i64 { b } else { b + m as i64 })
        .collect()
}

/// Lazily built frames of a fixed length, one per origin point.
///
/// Solution modes separate exponentially along the lattice, so a cascade
/// basis only stays well conditioned near the point where its initial values
/// are drawn. Every determinant is therefore taken in a frame whose origin is
/// at (or just below) its first column.
pub struct FrameSet<'s, R: Real> {
    spc: &'s Specialization<R>,
    xs: Vec<LaurentPoly>,
    len: usize,
    rng: RefCell<ChaCha8Rng>,
    frames: RefCell<BTreeMap<Shift, Rc<CasoratiFrame>>>,
}

impl<'s, R: Real> FrameSet<'s, R> {
    pub fn new(spc: &'s Specialization<R>, len: usize, constants_seed: u64) -> Result<Self> {
        let spec = spc.spec();
        let xs = (1..=x_count(spec)?)
            .map(|b| x_var(spec, b, &Shift::zero()))
            .collect::<Result<_>>()?;
        Ok(FrameSet {
            spc,
            xs,
            len,
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(constants_seed)),
            frames: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn specialization(&self) -> &Specialization<R> {
        self.spc
    }

    pub fn frame_len(&self) -> usize {
        self.len
    }

    /// Frame with initial values at `u0 + origin`.
    pub fn frame(&self, origin: &Shift) -> Result<Rc<CasoratiFrame>> {
        if let Some(f) = self.frames.borrow().get(origin) {
            return Ok(f.clone());
        }
        let frame =
            CasoratiFrame::solve_basis(self.spc, &self.xs, origin.clone(), self.len, &mut self.rng.borrow_mut())?;
        if frame.health(0)? < DEGENERACY {
            return Err(Error::DegenerateFrame { attempts: 1 });
        }
        let frame = Rc::new(frame);
        self.frames.borrow_mut().insert(origin.clone(), frame.clone());
        Ok(frame)
    }

    /// `[indices]` at `u0 + at`, in the frame anchored at `origin`.
    pub fn xi_from(&self, origin: &Shift, at: &Shift, indices: &[i64]) -> Result<C<R>> {
        let diff = at - origin;
        let steps = diff.p() / BigRational::from_integer(2.into());
        if !diff.q().is_zero() || !steps.is_integer() {
            return Err(Error::BadIndices(format!("{at} is not on the lattice of {origin}")));
        }
        let k0 = steps.to_integer().to_i64().unwrap_or(i64::MAX);
        Ok(narrow(&self.frame(origin)?.xi(indices, k0)?))
    }

    pub fn xi(&self, at: &Shift, indices: &[i64]) -> Result<C<R>> {
        self.xi_from(at, at, indices)
    }

    /// `[indices] / [0..N]` at `u0 + at`.
    pub fn ratio(&self, at: &Shift, indices: &[i64]) -> Result<C<R>> {
        let frame = self.frame(at)?;
        let identity: Vec<i64> = (0..frame.width() as i64).collect();
        Ok(narrow(&(frame.xi(indices, 0)? / frame.xi(&identity, 0)?)))
    }

    /// `T^(a)_m(u0 + at) = xi^(a)_m(u - a - m + 1) / xi(u - a - m + 1)`, with `T^(0)_m = T^(a)_0 = 1`.
    pub fn t_casorati(&self, a: u32, m: u32, at: &Shift) -> Result<C<R>> {
        if a == 0 || m == 0 {
            return Ok(C::one());
        }
        let big_n = self.spc.spec().rank();
        let base = at + &Shift::real(1 - a as i64 - m as i64);
        self.ratio(&base, &xi_indices(big_n, a, m))
    }
}

/// Worst relative error per label.
struct Tally {
    worst: BTreeMap<String, (f64, f64)>,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: BTreeMap::new() }
    }

    fn record(&mut self, label: impl Into<String>, err: f64, tol: f64) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        let slot = self.worst.entry(label.into()).or_insert((0.0, tol));
        slot.0 = slot.0.max(err);
    }

    fn into_report(self, report: &mut CheckReport) {
        for (label, (err, tol)) in self.worst {
            report.numeric(label, err, tol);
        }
    }
}

fn base_points(cfg: &CasoratiConfig) -> Vec<Shift> {
    (0..cfg.base_points as i64).map(Shift::real).collect()
}

/// `|Q_a(u + pi i / hbar) - h_a Q_a(u)|` at the base points.
pub fn check_quasi_periodicity<R: Real>(spc: &Specialization<R>, cfg: &CasoratiConfig, report: &mut CheckReport) {
    let mut tally = Tally::new();
    for a in 1..=spc.spec().n() {
        for s in base_points(cfg) {
            let lhs = spc.eval_q(a, &(&s + &Shift::theta(1, 1)));
            let h: C<R> = lift(c_from(spc.unit(a) as f64, 0.0));
            let rhs = h * spc.eval_q(a, &s);
            tally.record("quasi-periodicity", rel_err(&lhs, &rhs, 0.0), TOL_QUASI);
        }
    }
    tally.into_report(report);
}

fn apply_numeric<R: Real>(
    spc: &Specialization<R>,
    op: &DiffOperator,
    frame: &CasoratiFrame,
    b: usize,
    k: usize,
) -> Result<(C<Work>, f64)> {
    let at = frame.start() + &Shift::real(2 * k as i64);
    let mut acc = C::<Work>::zero();
    let mut scale = 0.0f64;
    for (deg, c) in op.coeffs().iter().enumerate() {
        let term = widen(&spc.eval_poly(c, &at)?) * frame.value(b, k + deg).clone();
        scale = scale.max(abs_f64(&term));
        acc = acc + term;
    }
    Ok((acc, scale))
}

/// Recursion residuals, `L w_b = 0`, `L_b w_b = 0` and `L_{b-1} w_b != 0` on the base frame.
pub fn check_frame<R: Real>(frames: &FrameSet<'_, R>, report: &mut CheckReport) -> Result<()> {
    let spc = frames.specialization();
    let spec = spc.spec();
    let frame = frames.frame(&Shift::zero())?;
    let width = frame.width();
    let big_n = spec.rank();
    let mut tally = Tally::new();
    let y_top = x_var(spec, big_n + 1, &Shift::zero())?;
    for k in 0..frame.len() - 1 {
        let at = frame.start() + &(&y_offset(spec, big_n + 1) + &Shift::real(2 * k as i64));
        let ratio: C<R> = narrow(&(frame.value(1, k + 1).clone() / frame.value(1, k).clone()));
        tally.record(
            "w_1 recursion",
            rel_err(&ratio, &spc.eval_poly(&y_top, &at)?, 0.0),
            TOL_RECURSION,
        );
    }
    let l = build_l(spec, 0)?;
    let ops: Vec<DiffOperator> = (0..=width as u32).map(|a| build_l_a(spec, a)).collect::<Result<_>>()?;
    let mut escaped = true;
    for b in 1..=width {
        let mut outside = 0.0f64;
        for k in 0..frame.len() - width {
            let (r, scale) = apply_numeric(spc, &l, &frame, b, k)?;
            tally.record("L w_b = 0", abs_f64(&r) / scale, TOL_OPERATOR);
            let (r, scale) = apply_numeric(spc, &ops[width], &frame, b, k)?;
            tally.record("L_(N+1) w_b = 0", abs_f64(&r) / scale, TOL_OPERATOR);
            let (r, scale) = apply_numeric(spc, &ops[b], &frame, b, k)?;
            tally.record("L_b w_b = 0", abs_f64(&r) / scale, TOL_OPERATOR);
            if b > 1 {
                let (r, scale) = apply_numeric(spc, &ops[b - 1], &frame, b, k)?;
                outside = outside.max(abs_f64(&r) / scale);
            }
        }
        escaped &= b == 1 || outside > ESCAPE;
    }
    tally.into_report(report);
    report.note(
        "w_b outside Ker L_(b-1)",
        if escaped { Status::Pass } else { Status::Warn },
        if escaped { "generic" } else { "a column is degenerate" },
    );
    Ok(())
}

/// Symbolic polynomials compared against Casorati ratios, built once per run.
pub struct Oracles {
    upper: Vec<LaurentPoly>,
    script: BTreeMap<i64, LaurentPoly>,
    mnnsy: Vec<(Vec<i64>, LaurentPoly, LaurentPoly)>,
}

impl Oracles {
    pub fn new(spec: &AlgebraSpec) -> Result<Self> {
        Self::with_index_sets(spec, &default_index_sets(spec.rank()))
    }

    pub fn with_index_sets(spec: &AlgebraSpec, index_sets: &[Vec<i64>]) -> Result<Self> {
        require_a2(spec)?;
        let table = extract_t(spec, &build_l(spec, 0)?);
        let top = spec.rank() as i64 + 1;
        let upper = (0..=top).map(|a| table.upper(a)).collect::<Result<_>>()?;
        let script = (0..=top)
            .map(|a| Ok((a, script_t(&table, a, &Shift::zero())?)))
            .collect::<Result<_>>()?;
        let mut mnnsy = Vec::with_capacity(index_sets.len());
        for indices in index_sets {
            let data = YoungData::new(indices.clone())?;
            let sum = tableaux_sum(spec, &data, &Shift::zero())?;
            let detf = nnsy_determinant(&table, &data, &Shift::zero())?;
            mnnsy.push((indices.clone(), sum, detf));
        }
        Ok(Oracles { upper, script, mnnsy })
    }

    /// `T^a(u)`, zero outside `0..=N+1`.
    pub fn upper(&self, a: i64) -> LaurentPoly {
        usize::try_from(a)
            .ok()
            .and_then(|i| self.upper.get(i))
            .cloned()
            .unwrap_or_else(LaurentPoly::zero)
    }

    /// `calT^a(u)`, zero outside `0..=N+1`.
    pub fn script(&self, a: i64) -> LaurentPoly {
        self.script.get(&a).cloned().unwrap_or_else(LaurentPoly::zero)
    }
}

/// `[0..N] = [1..N+1]` and `T^a(u + a) = [0..a-1, a+1..N+1] / [0..N]`.
pub fn check_ta1<R: Real>(
    frames: &FrameSet<'_, R>,
    oracles: &Oracles,
    cfg: &CasoratiConfig,
    report: &mut CheckReport,
) -> Result<()> {
    let spc = frames.specialization();
    let big_n = spc.spec().rank();
    let mut tally = Tally::new();
    for s in base_points(cfg) {
        let shifted: Vec<i64> = (1..=big_n as i64 + 1).collect();
        let one = frames.ratio(&s, &shifted)?;
        tally.record("[0..N] = [1..N+1]", rel_err(&one, &C::one(), 0.0), cfg.tolerance);
        for a in 0..=big_n + 1 {
            let got = frames.ratio(&s, &xi_indices(big_n, a, 1))?;
            let want = spc.eval_poly(&oracles.upper(a as i64), &(&s + &Shift::real(a as i64)))?;
            tally.record(format!("ta1 a={a}"), rel_err(&got, &want, 0.0), cfg.tolerance);
        }
    }
    tally.into_report(report);
    Ok(())
}

/// `xi^(a)_m(u) xi^(a)_m(u+2) = xi^(a)_{m+1}(u) xi^(a)_{m-1}(u+2) + xi^(a+1)_m(u) xi^(a-1)_m(u+2)`.
pub fn check_plucker<R: Real>(frames: &FrameSet<'_, R>, cfg: &CasoratiConfig, report: &mut CheckReport) -> Result<()> {
    let big_n = frames.specialization().spec().rank();
    let mut tally = Tally::new();
    for s in base_points(cfg) {
        let next = &s + &Shift::real(2);
        for a in 1..=big_n {
            for m in 1..=cfg.m_max as u32 {
                let xi = |a: u32, m: u32, at: &Shift| frames.xi_from(&s, at, &xi_indices(big_n, a, m));
                let lhs = xi(a, m, &s)? * xi(a, m, &next)?;
                let first = xi(a, m + 1, &s)? * xi(a, m - 1, &next)?;
                let second = xi(a + 1, m, &s)? * xi(a - 1, m, &next)?;
                let scale = abs_f64(&lhs).max(abs_f64(&first)).max(abs_f64(&second));
                let err = abs_f64(&(lhs - first - second)) / scale;
                tally.record(format!("plucker a={a} m={m}"), err, cfg.tolerance);
            }
        }
    }
    tally.into_report(report);
    Ok(())
}

/// Default index sets for the three-way comparison: every `0 < i_1 < ... < i_N <= N + 2`.
pub fn default_index_sets(big_n: u32) -> Vec<Vec<i64>> {
    let top = big_n as i64 + 2;
    let mut out = Vec::new();
    // choose the two values in 1..=top left out
    for skip1 in 1..=top {
        for skip2 in skip1 + 1..=top {
            let v: Vec<i64> = std::iter::once(0)
                .chain((1..=top).filter(|&i| i != skip1 && i != skip2))
                .collect();
            out.push(v);
        }
    }
    out
}

/// `[indices] / [0..N]` against the tableaux sum and the determinant form.
pub fn check_mnnsy_numeric<R: Real>(
    frames: &FrameSet<'_, R>,
    oracles: &Oracles,
    cfg: &CasoratiConfig,
    report: &mut CheckReport,
) -> Result<()> {
    let spc = frames.specialization();
    let mut tally = Tally::new();
    for (indices, sum, detf) in &oracles.mnnsy {
        let label = format!("{indices:?}");
        for s in base_points(cfg) {
            let ratio = frames.ratio(&s, indices)?;
            let sv = spc.eval_poly(sum, &s)?;
            let dv = spc.eval_poly(detf, &s)?;
            tally.record(
                format!("m-nnsy {label} ratio~tableaux"),
                rel_err(&ratio, &sv, 0.0),
                cfg.tolerance,
            );
            tally.record(
                format!("m-nnsy {label} ratio~det"),
                rel_err(&ratio, &dv, 0.0),
                cfg.tolerance,
            );
        }
    }
    tally.into_report(report);
    Ok(())
}

/// Dual-Ca ratios across the `t/2` coset and the T-system with Casorati `T^(a)_m`.
pub fn check_dual_ca_and_theorem<R: Real>(
    frames: &FrameSet<'_, R>,
    cfg: &CasoratiConfig,
    report: &mut CheckReport,
) -> Result<()> {
    let spec = frames.specialization().spec().clone();
    let big_n = spec.rank();
    let n = spec.n();
    let half = spec.shift(0, 1, 2);
    let mut tally = Tally::new();
    for s in base_points(cfg) {
        for a in 0..=big_n + 1 {
            for m in 1..=cfg.m_max as u32 {
                let lhs = frames.ratio(&s, &xi_indices(big_n, a, m))?;
                let at = &(&s + &half) + &Shift::real(2 * a as i64 - big_n as i64 - 1);
                let rhs = frames.ratio(&at, &xi_indices(big_n, big_n + 1 - a, m))?;
                tally.record(format!("dual-Ca a={a}"), rel_err(&lhs, &rhs, 0.0), cfg.tolerance);
            }
        }
        let zero = Shift::zero();
        for a in 1..=n.min(cfg.a_max) {
            for m in 1..=cfg.m_max as u32 {
                let t = |a: u32, m: u32, d: &Shift| frames.t_casorati(a, m, &(&s + d));
                let lhs = t(a, m, &Shift::real(-1))? * t(a, m, &Shift::real(1))?;
                let first = t(a, m - 1, &zero)? * t(a, m + 1, &zero)?;
                let second = if a < n {
                    t(a - 1, m, &zero)? * t(a + 1, m, &zero)?
                } else if spec.kind() == AlgebraKind::A2Even {
                    t(n - 1, m, &zero)? * t(n, m, &half)?
                } else {
                    t(n - 1, m, &zero)? * t(n - 1, m, &half)?
                };
                let scale = abs_f64(&lhs).max(abs_f64(&first)).max(abs_f64(&second));
                let err = abs_f64(&(lhs - first - second)) / scale;
                tally.record(format!("t-system a={a} m={m}"), err, cfg.tolerance);
            }
        }
    }
    tally.into_report(report);
    Ok(())
}

/// Casorati `T^(a)_m` against the Jacobi-Trudi determinant of evaluated `calT` entries.
pub fn check_jacobi_trudi_numeric<R: Real>(
    frames: &FrameSet<'_, R>,
    oracles: &Oracles,
    cfg: &CasoratiConfig,
    report: &mut CheckReport,
) -> Result<()> {
    let spc = frames.specialization();
    let n = spc.spec().n();
    let mut tally = Tally::new();
    let mut entries: HashMap<(i64, Shift), C<R>> = HashMap::new();
    for s in base_points(cfg) {
        for a in 1..=n.min(cfg.a_max) {
            for m in 1..=cfg.m_max {
                let mi = m as i64;
                let mut matrix = Vec::with_capacity(m);
                for j in 1..=mi {
                    let mut row = Vec::with_capacity(m);
                    for k in 1..=mi {
                        let idx = a as i64 - j + k;
                        let at = &s + &Shift::real(j + k - mi - 1);
                        let key = (idx, at.clone());
                        if !entries.contains_key(&key) {
                            entries.insert(key.clone(), spc.eval_poly(&oracles.script(idx), &at)?);
                        }
                        row.push(entries[&key].clone());
                    }
                    matrix.push(row);
                }
                let jt = det(matrix);
                let cas = frames.t_casorati(a, m as u32, &s)?;
                tally.record(
                    format!("jacobi-trudi a={a} m={m}"),
                    rel_err(&cas, &jt, 0.0),
                    cfg.tolerance,
                );
            }
        }
    }
    tally.into_report(report);
    Ok(())
}

/// Ratios from two frame sets with different cascade constants.
pub fn check_basis_invariance<R: Real>(
    a: &FrameSet<'_, R>,
    b: &FrameSet<'_, R>,
    cfg: &CasoratiConfig,
    report: &mut CheckReport,
) -> Result<()> {
    let big_n = a.specialization().spec().rank();
    let mut tally = Tally::new();
    for s in base_points(cfg) {
        for aa in 0..=big_n + 1 {
            for m in 1..=cfg.m_max as u32 {
                let idx = xi_indices(big_n, aa, m);
                tally.record(
                    "basis invariance",
                    rel_err(&a.ratio(&s, &idx)?, &b.ratio(&s, &idx)?, 0.0),
                    cfg.tolerance,
                );
            }
        }
    }
    tally.into_report(report);
    Ok(())
}

/// Lattice points needed by the largest determinant: Plücker at `u + 2` with indices up to `N + m_max + 1`.
fn frame_len(spec: &AlgebraSpec, cfg: &CasoratiConfig) -> usize {
    (spec.rank() as usize + cfg.m_max + 3).max(spec.rank() as usize + 4)
}

/// All numeric checks for one specialization.
pub fn run_trial<R: Real>(
    spec: &AlgebraSpec,
    oracles: &Oracles,
    cfg: &CasoratiConfig,
    seed: u64,
) -> Result<CheckReport> {
    let spc = Specialization::<R>::sample(spec, cfg, seed)?;
    let len = frame_len(spec, cfg);
    let frames = FrameSet::new(&spc, len, seed ^ 0x5eed)?;
    let mut report = CheckReport::new(
        "casorati-trial",
        ReportParams {
            seed: Some(seed),
            precision: Some(R::NAME.to_string()),
            ..ReportParams::for_spec(spec)
        },
    );
    check_quasi_periodicity(&spc, cfg, &mut report);
    check_frame(&frames, &mut report)?;
    check_ta1(&frames, oracles, cfg, &mut report)?;
    check_plucker(&frames, cfg, &mut report)?;
    check_mnnsy_numeric(&frames, oracles, cfg, &mut report)?;
    check_dual_ca_and_theorem(&frames, cfg, &mut report)?;
    check_jacobi_trudi_numeric(&frames, oracles, cfg, &mut report)?;
    let other = FrameSet::new(&spc, len, seed ^ 0xd1ff)?;
    check_basis_invariance(&frames, &other, cfg, &mut report)?;
    Ok(report.finish())
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::NearPole(_) | Error::DegenerateFrame { .. })
}

/// One trial with up to [`MAX_ATTEMPTS`] reseeds on poles or degenerate frames.
pub fn run_trial_with_retries<R: Real>(
    spec: &AlgebraSpec,
    oracles: &Oracles,
    cfg: &CasoratiConfig,
    seed: u64,
) -> Result<CheckReport> {
    for attempt in 0..MAX_ATTEMPTS as u64 {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        match run_trial::<R>(spec, oracles, cfg, s) {
            Err(e) if retryable(&e) => continue,
            other => return other,
        }
    }
    Err(Error::DegenerateFrame { attempts: MAX_ATTEMPTS })
}

/// `trials` independent specializations in parallel, folded into one report
/// holding the worst error per check.
pub fn run_casorati(
    spec: &AlgebraSpec,
    cfg: &CasoratiConfig,
    seed: u64,
    trials: usize,
    precision: Precision,
) -> Result<CheckReport> {
    let oracles = Oracles::new(spec)?;
    let results: Vec<Result<CheckReport>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i.wrapping_mul(1_000_003));
            match precision {
                Precision::Double => run_trial_with_retries::<f64>(spec, &oracles, cfg, s),
                Precision::High => run_trial_with_retries::<HpReal>(spec, &oracles, cfg, s),
            }
        })
        .collect();
    let mut report = CheckReport::new(
        "casorati",
        ReportParams {
            seed: Some(seed),
            precision: Some(precision.to_string()),
            ..ReportParams::for_spec(spec)
        }
        .with("trials", trials)
        .with("m_max", cfg.m_max),
    );
    let mut worst: BTreeMap<String, (Status, Residual)> = BTreeMap::new();
    for r in results {
        for item in r?.items {
            let replace = match (worst.get(&item.label), &item.residual) {
                (None, _) => true,
                (
                    Some((_, Residual::Numeric { max_rel_error: old, .. })),
                    Residual::Numeric { max_rel_error: new, .. },
                ) => new > old,
                (Some((old, _)), _) => item.status > *old,
            };
            if replace {
                worst.insert(item.label, (item.status, item.residual));
            }
        }
    }
    for (label, (status, residual)) in worst {
        report.push(label, status, residual);
    }
    Ok(report.finish())
}
