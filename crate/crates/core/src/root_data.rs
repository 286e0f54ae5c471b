//! Dynkin data for the twisted affine algebras `A(2)_{2n}`, `A(2)_{2n-1}`,
//! `D(2)_{n+1}` and `D(3)_4`.
//!
//! Every algebra is described through its simply laced finite diagram `X_N`
//! together with the diagram automorphism `sigma`. Nodes are enumerated
//! exactly as in the standard figure: orbit representatives are `1..=n`, and
//! for `A(2)_{2n}` the node `n + 1` doubles as the shifted copy of node `n`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::Shift;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `A(2)_{2n}`, n >= 1.
    A2Even,
    /// `A(2)_{2n-1}`, n >= 2.
    A2Odd,
    /// `D(2)_{n+1}`, n >= 2.
    D2,
    /// `D(3)_4`, n = 2.
    D3_4,
}

impl AlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::A2Even => "a2even",
            AlgebraKind::A2Odd => "a2odd",
            AlgebraKind::D2 => "d2",
            AlgebraKind::D3_4 => "d3_4",
        }
    }

    pub fn is_a2(self) -> bool {
        matches!(self, AlgebraKind::A2Even | AlgebraKind::A2Odd)
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2even" | "a2_even" => Ok(AlgebraKind::A2Even),
            "a2odd" | "a2_odd" => Ok(AlgebraKind::A2Odd),
            "d2" => Ok(AlgebraKind::D2),
            "d3_4" | "d34" => Ok(AlgebraKind::D3_4),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

/// Root data of one twisted algebra. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    kind: AlgebraKind,
    n: u32,
    rank: u32,
    twist: u32,
    n_prime: u32,
    theta_zero: bool,
    /// `sigma(a)` for `a` in `1..=rank`, stored at `a - 1`.
    sigma: Vec<u32>,
    /// Symmetric adjacency of `X_N`.
    adjacent: Vec<Vec<bool>>,
}

impl AlgebraSpec {
    pub fn new(kind: AlgebraKind, n: u32) -> Result<Self> {
        let (rank, twist, n_prime) = match kind {
            AlgebraKind::A2Even => {
                if n < 1 {
                    return Err(out_of_range(kind, n, "n >= 1"));
                }
                (2 * n, 2, n + 1)
            }
            AlgebraKind::A2Odd => {
                if n < 2 {
                    return Err(out_of_range(kind, n, "n >= 2"));
                }
                (2 * n - 1, 2, n)
            }
            AlgebraKind::D2 => {
                if n < 2 {
                    return Err(out_of_range(kind, n, "n >= 2"));
                }
                (n + 1, 2, n)
            }
            AlgebraKind::D3_4 => {
                if n != 2 {
                    return Err(out_of_range(kind, n, "n = 2"));
                }
                (4, 3, 2)
            }
        };
        let size = rank as usize;
        let mut adjacent = vec![vec![false; size]; size];
        let mut link = |a: u32, b: u32| {
            adjacent[(a - 1) as usize][(b - 1) as usize] = true;
            adjacent[(b - 1) as usize][(a - 1) as usize] = true;
        };
        let sigma: Vec<u32> = match kind {
            AlgebraKind::A2Even | AlgebraKind::A2Odd => {
                for a in 1..rank {
                    link(a, a + 1);
                }
                (1..=rank).map(|a| rank + 1 - a).collect()
            }
            AlgebraKind::D2 => {
                for a in 1..n - 1 {
                    link(a, a + 1);
                }
                link(n - 1, n);
                link(n - 1, n + 1);
                (1..=rank)
                    .map(|a| match a {
                        a if a == n => n + 1,
                        a if a == n + 1 => n,
                        a => a,
                    })
                    .collect()
            }
            AlgebraKind::D3_4 => {
                link(1, 2);
                link(2, 3);
                link(2, 4);
                vec![3, 2, 4, 1]
            }
        };
        Ok(AlgebraSpec {
            kind,
            n,
            rank,
            twist,
            n_prime,
            theta_zero: false,
            sigma,
            adjacent,
        })
    }

    /// Same algebra in the degenerate limit where `pi i / (r hbar)` is set to zero.
    pub fn with_theta_zero(mut self, on: bool) -> Self {
        self.theta_zero = on;
        self
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Rank `N` of `X_N`.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Twist order `r`.
    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn n_prime(&self) -> u32 {
        self.n_prime
    }

    pub fn theta_zero(&self) -> bool {
        self.theta_zero
    }

    /// Dual Coxeter number `N + 1`, defined for the `A(2)_N` families only.
    pub fn dual_coxeter(&self) -> Option<u32> {
        self.kind.is_a2().then_some(self.rank + 1)
    }

    /// Upper end `b` of the range `1 <= a <= b` carrying Kirillov-Reshetikhin top terms.
    pub fn kr_bound(&self) -> u32 {
        match self.kind {
            AlgebraKind::A2Even | AlgebraKind::A2Odd => self.n,
            AlgebraKind::D2 => self.n - 1,
            AlgebraKind::D3_4 => 2,
        }
    }

    pub fn sigma(&self, a: u32) -> Result<u32> {
        self.check_node(a)?;
        Ok(self.sigma[(a - 1) as usize])
    }

    /// `r_a = r` when `sigma` fixes `a`, else 1.
    pub fn node_twist(&self, a: u32) -> Result<u32> {
        Ok(if self.sigma(a)? == a { self.twist } else { 1 })
    }

    /// `r_ab = max(r_a, r_b)` for screening indices `a, b` in `1..=n_prime`.
    pub fn r_ab(&self, a: u32, b: u32) -> Result<u32> {
        self.check_screening_index(a)?;
        self.check_screening_index(b)?;
        Ok(self.node_twist(a)?.max(self.node_twist(b)?))
    }

    /// `(alpha_a | alpha_b)` on `X_N`; all long roots, so the diagonal is 2.
    pub fn pairing(&self, a: u32, b: u32) -> Result<Rational64> {
        self.check_node(a)?;
        self.check_node(b)?;
        Ok(if a == b {
            Rational64::from_integer(2)
        } else if self.adjacent[(a - 1) as usize][(b - 1) as usize] {
            Rational64::from_integer(-1)
        } else {
            Rational64::from_integer(0)
        })
    }

    /// `I_ab = 2 delta_ab - 2 (alpha_a|alpha_b) / (alpha_a|alpha_a)`.
    pub fn incidence(&self, a: u32, b: u32) -> Result<u32> {
        let delta = if a == b { 2 } else { 0 };
        let value =
            Rational64::from_integer(delta) - Rational64::from_integer(2) * self.pairing(a, b)? / self.pairing(a, a)?;
        Ok(value.to_integer() as u32)
    }

    /// Whether the Dynkin diagram of `X_N` is connected.
    pub fn is_connected(&self) -> bool {
        let size = self.rank as usize;
        let mut seen = vec![false; size];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for (w, flag) in seen.iter_mut().enumerate() {
                if self.adjacent[v][w] && !*flag {
                    *flag = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A shift `p + (q_num/q_den) t`, with the `t` part dropped in theta-zero mode.
    pub fn shift(&self, p: i64, q_num: i64, q_den: i64) -> Shift {
        let s = Shift::from_ints(p, 1, q_num, q_den);
        if self.theta_zero {
            s.without_theta()
        } else {
            s
        }
    }

    /// Applies the theta-zero rule to an arbitrary shift.
    pub fn adapt(&self, s: Shift) -> Shift {
        if self.theta_zero {
            s.without_theta()
        } else {
            s
        }
    }

    pub(crate) fn check_orbit(&self, a: u32) -> Result<()> {
        if (1..=self.n).contains(&a) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a, max: self.n })
        }
    }

    fn check_screening_index(&self, a: u32) -> Result<()> {
        if (1..=self.n_prime).contains(&a) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: a,
                max: self.n_prime,
            })
        }
    }

    fn check_node(&self, a: u32) -> Result<()> {
        if (1..=self.rank).contains(&a) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: a,
                max: self.rank,
            })
        }
    }
}

fn out_of_range(kind: AlgebraKind, n: u32, constraint: &'static str) -> Error {
    Error::RankOutOfRange {
        kind: kind.name(),
        n,
        constraint,
    }
}

/// Builds the spec for `kind` given by name, e.g. `"a2even"`.
pub fn make_algebra(kind: &str, n: u32) -> Result<AlgebraSpec> {
    AlgebraSpec::new(kind.parse()?, n)
}
