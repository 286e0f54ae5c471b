//! `T^(a)_m` for the `A(2)_N` families: Jacobi-Trudi determinants, skew
//! tableaux sums over the `x` variables, and the T-system itself.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::diffop::TTable;
use crate::error::{Error, Result};
use crate::report::{CheckReport, ReportParams};
use crate::ring::LaurentPoly;
use crate::root_data::{AlgebraKind, AlgebraSpec};
use crate::shift::Shift;
use crate::variables::{x_count, x_var};

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

/// `calT^a(u + s)`: 0 outside `0..=N+1`, 1 at both ends, `T^a` for
/// `a <= n` and `T^{N+1-a}(u + t/2)` above.
pub fn script_t(table: &TTable, a: i64, s: &Shift) -> Result<LaurentPoly> {
    let spec = table.spec();
    require_a2(spec, "calT table")?;
    let big_n = spec.rank() as i64;
    let n = spec.n() as i64;
    Ok(if a < 0 || a > big_n + 1 {
        LaurentPoly::zero()
    } else if a == 0 || a == big_n + 1 {
        LaurentPoly::one()
    } else if a <= n {
        table.upper(a)?.shift_all(s)
    } else {
        table.upper(big_n + 1 - a)?.shift_all(&(s + &spec.shift(0, 1, 2)))
    })
}

/// Division-free determinant by Laplace expansion along rows, memoized on
/// the set of used columns.
pub fn determinant(matrix: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let size = matrix.len();
    assert!(size < 64, "determinant too large");
    let mut memo: HashMap<u64, LaurentPoly> = HashMap::new();
    minor(matrix, 0, &mut memo)
}

fn minor(matrix: &[Vec<LaurentPoly>], used: u64, memo: &mut HashMap<u64, LaurentPoly>) -> LaurentPoly {
    let size = matrix.len();
    let row = used.count_ones() as usize;
    if row == size {
        return LaurentPoly::one();
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let mut acc = LaurentPoly::zero();
    let mut sign = 1;
    for col in 0..size {
        if used & (1 << col) != 0 {
            continue;
        }
        let entry = &matrix[row][col];
        if !entry.is_zero() {
            let sub = minor(matrix, used | (1 << col), memo);
            let term = entry * &sub;
            acc += &(if sign > 0 { term } else { -term });
        }
        sign = -sign;
    }
    memo.insert(used, acc.clone());
    acc
}

/// `T^(a)_m(u + s) = det_{1<=j,k<=m} calT^{a-j+k}(u + s + j + k - m - 1)`.
pub fn jacobi_trudi(table: &TTable, a: i64, m: usize, s: &Shift) -> Result<LaurentPoly> {
    let mi = m as i64;
    let mut matrix = Vec::with_capacity(m);
    for j in 1..=mi {
        let mut row = Vec::with_capacity(m);
        for k in 1..=mi {
            row.push(script_t(table, a - j + k, &(s + &Shift::real(j + k - mi - 1)))?);
        }
        matrix.push(row);
    }
    Ok(determinant(&matrix))
}

/// Index set `0 = i_0 < i_1 < ... < i_N` with its Young diagram data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungData {
    indices: Vec<i64>,
    mu: Vec<usize>,
    mu_conj: Vec<usize>,
}

impl YoungData {
    pub fn new(indices: Vec<i64>) -> Result<Self> {
        if indices.first() != Some(&0) {
            return Err(Error::BadIndices("the first index must be 0".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadIndices("indices must be strictly increasing".into()));
        }
        let len = indices.len() as i64;
        // mu_k = i_{N+1-k} + k - N - 1 for k = 1..N+1
        let mu: Vec<usize> = (1..=len)
            .map(|k| (indices[(len - k) as usize] + k - len) as usize)
            .collect();
        let width = mu.first().copied().unwrap_or(0);
        let mu_conj = (1..=width).map(|c| mu.iter().filter(|&&p| p >= c).count()).collect();
        Ok(YoungData { indices, mu, mu_conj })
    }

    /// Indices of `xi^(a)_m`: `0, ..., a-1, a+m, ..., N+m`.
    pub fn for_xi(big_n: u32, a: u32, m: u32) -> Result<Self> {
        if a > big_n + 1 {
            return Err(Error::IndexOutOfRange {
                index: a,
                max: big_n + 1,
            });
        }
        let v = (0..=big_n as i64)
            .map(|b| if b < a as i64 { b } else { b + m as i64 })
            .collect();
        YoungData::new(v)
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    pub fn mu_conj(&self) -> &[usize] {
        &self.mu_conj
    }

    pub fn width(&self) -> usize {
        self.mu.first().copied().unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.indices.len()
    }

    /// Row `j` (counted from the bottom) holds columns `start..=width`.
    fn row_start(&self, j: usize) -> usize {
        self.mu[self.height() - j] + 1
    }

    /// Cells `(j, k)` of the skew diagram, `(1, 1)` at the bottom left.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=self.height() {
            for k in self.row_start(j)..=self.width() {
                out.push((j, k));
            }
        }
        out
    }

    pub fn cell_count(&self) -> usize {
        self.height() * self.width() - self.mu.iter().sum::<usize>()
    }
}

impl fmt::Display for YoungData {
    /// Skew diagram drawn top row first; `.` marks removed boxes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (1..=self.height()).rev() {
            let start = self.row_start(j);
            for k in 1..=self.width() {
                f.write_str(if k < start { "." } else { "#" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    WeakIncreasing,
    WeakDecreasing,
    StrictIncreasing,
    StrictDecreasing,
}

impl Order {
    fn allows(self, prev: u32, next: u32) -> bool {
        match self {
            Order::WeakIncreasing => prev <= next,
            Order::WeakDecreasing => prev >= next,
            Order::StrictIncreasing => prev < next,
            Order::StrictDecreasing => prev > next,
        }
    }
}

/// Admissibility of a filling: order along rows (increasing `k`) and along
/// columns (increasing `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableauRule {
    pub rows: Order,
    pub columns: Order,
}

impl TableauRule {
    /// Rows weakly increase to the right; columns strictly decrease upwards.
    pub const SEMISTANDARD: TableauRule = TableauRule {
        rows: Order::WeakIncreasing,
        columns: Order::StrictDecreasing,
    };

    pub const CANDIDATES: [TableauRule; 6] = [
        TableauRule::SEMISTANDARD,
        TableauRule {
            rows: Order::WeakIncreasing,
            columns: Order::StrictIncreasing,
        },
        TableauRule {
            rows: Order::WeakDecreasing,
            columns: Order::StrictDecreasing,
        },
        TableauRule {
            rows: Order::WeakDecreasing,
            columns: Order::StrictIncreasing,
        },
        TableauRule {
            rows: Order::StrictIncreasing,
            columns: Order::WeakDecreasing,
        },
        TableauRule {
            rows: Order::StrictDecreasing,
            columns: Order::WeakIncreasing,
        },
    ];
}

/// All admissible fillings with entries in `1..=max_entry`, keyed by cell.
pub fn tableaux(data: &YoungData, max_entry: u32, rule: TableauRule) -> Vec<BTreeMap<(usize, usize), u32>> {
    let cells = data.cells();
    let mut out = Vec::new();
    let mut filling = BTreeMap::new();
    fill(&cells, 0, max_entry, rule, &mut filling, &mut out);
    out
}

fn fill(
    cells: &[(usize, usize)],
    pos: usize,
    max_entry: u32,
    rule: TableauRule,
    filling: &mut BTreeMap<(usize, usize), u32>,
    out: &mut Vec<BTreeMap<(usize, usize), u32>>,
) {
    let Some(&(j, k)) = cells.get(pos) else {
        out.push(filling.clone());
        return;
    };
    let left = filling.get(&(j, k.wrapping_sub(1))).copied();
    let below = filling.get(&(j.wrapping_sub(1), k)).copied();
    for b in 1..=max_entry {
        if left.is_some_and(|l| !rule.rows.allows(l, b)) || below.is_some_and(|d| !rule.columns.allows(d, b)) {
            continue;
        }
        filling.insert((j, k), b);
        fill(cells, pos + 1, max_entry, rule, filling, out);
        filling.remove(&(j, k));
    }
}

/// `sum_b prod_{(j,k)} x_{b(j,k)}(u + s + 2j + 2k - 4)` over admissible fillings.
pub fn tableaux_sum_with(spec: &AlgebraSpec, data: &YoungData, s: &Shift, rule: TableauRule) -> Result<LaurentPoly> {
    require_a2(spec, "tableaux sums")?;
    let count = x_count(spec)?;
    if data.height() != count as usize {
        return Err(Error::BadIndices(format!(
            "expected {} indices, got {}",
            count,
            data.height()
        )));
    }
    let mut xs: HashMap<(u32, i64), LaurentPoly> = HashMap::new();
    let mut acc = LaurentPoly::zero();
    for t in tableaux(data, count, rule) {
        let mut term = LaurentPoly::one();
        for (&(j, k), &b) in &t {
            let off = 2 * (j + k) as i64 - 4;
            if let std::collections::hash_map::Entry::Vacant(e) = xs.entry((b, off)) {
                e.insert(x_var(spec, b, &(s + &Shift::real(off)))?);
            }
            term = &term * &xs[&(b, off)];
        }
        acc += &term;
    }
    Ok(acc)
}

pub fn tableaux_sum(spec: &AlgebraSpec, data: &YoungData, s: &Shift) -> Result<LaurentPoly> {
    tableaux_sum_with(spec, data, s, TableauRule::SEMISTANDARD)
}

/// `det_{1<=j,k<=mu_1} T^{mu'_j - j + k}(u + s + N - 1 + j + k - mu'_j + t/2)`.
pub fn nnsy_determinant(table: &TTable, data: &YoungData, s: &Shift) -> Result<LaurentPoly> {
    let spec = table.spec();
    require_a2(spec, "tableaux determinant")?;
    let big_n = spec.rank() as i64;
    let width = data.width();
    let half = spec.shift(0, 1, 2);
    let mut matrix = Vec::with_capacity(width);
    for j in 1..=width as i64 {
        let mj = data.mu_conj()[(j - 1) as usize] as i64;
        let mut row = Vec::with_capacity(width);
        for k in 1..=width as i64 {
            let at = &(s + &half) + &Shift::real(big_n - 1 + j + k - mj);
            row.push(table.upper(mj - j + k)?.shift_all(&at));
        }
        matrix.push(row);
    }
    Ok(determinant(&matrix))
}

/// Memoized `T^(a)_m(u)` from the Jacobi-Trudi formula.
pub struct TSystem<'a> {
    table: &'a TTable,
    cache: HashMap<(i64, usize), LaurentPoly>,
}

impl<'a> TSystem<'a> {
    pub fn new(table: &'a TTable) -> Result<Self> {
        require_a2(table.spec(), "T-system")?;
        Ok(TSystem {
            table,
            cache: HashMap::new(),
        })
    }

    /// `T^(a)_m(u + s)`, with `T^(0)_m = T^(a)_0 = 1`.
    pub fn get(&mut self, a: i64, m: usize, s: &Shift) -> Result<LaurentPoly> {
        if a == 0 || m == 0 {
            return Ok(LaurentPoly::one());
        }
        if !self.cache.contains_key(&(a, m)) {
            let v = jacobi_trudi(self.table, a, m, &Shift::zero())?;
            self.cache.insert((a, m), v);
        }
        Ok(self.cache[&(a, m)].shift_all(s))
    }
}

/// Exact T-system residuals for `1 <= a <= min(a_max, n)`, `1 <= m <= m_max`.
pub fn check_tsystem_symbolic(table: &TTable, a_max: u32, m_max: usize) -> Result<CheckReport> {
    let spec = table.spec();
    require_a2(spec, "T-system check")?;
    let mut report = CheckReport::new(
        "tsystem",
        ReportParams::for_spec(spec).with("a_max", a_max).with("m_max", m_max),
    );
    let mut ts = TSystem::new(table)?;
    let n = spec.n() as i64;
    let zero = Shift::zero();
    let half = spec.shift(0, 1, 2);
    for a in 1..=(a_max as i64).min(n) {
        for m in 1..=m_max {
            let lhs = &ts.get(a, m, &Shift::real(-1))? * &ts.get(a, m, &Shift::real(1))?;
            let first = &ts.get(a, m - 1, &zero)? * &ts.get(a, m + 1, &zero)?;
            let second = if a < n {
                &ts.get(a - 1, m, &zero)? * &ts.get(a + 1, m, &zero)?
            } else if spec.kind() == AlgebraKind::A2Even {
                &ts.get(n - 1, m, &zero)? * &ts.get(n, m, &half)?
            } else {
                &ts.get(n - 1, m, &zero)? * &ts.get(n - 1, m, &half)?
            };
            report.exact(format!("a={a} m={m}"), &(&(&lhs - &first) - &second));
        }
    }
    Ok(report.finish())
}
