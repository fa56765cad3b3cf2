//! The ℓ-pregroup F_n(ℤ) of n-periodic maps on the integers.
//!
//! An element is stored as one period `vals = [f(0), …, f(n-1)]`; the rest
//! follows from `f(x + n) = f(x) + n`. The representation is canonical, so
//! structural equality is equality of functions.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FnzError {
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(i64, i64),
    #[error("invalid period values: {0}")]
    Invalid(String),
    #[error("partial map is not n-periodic")]
    NotPeriodic,
    #[error("empty partial map")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodicFn")]
pub struct PeriodicFn {
    n: i64,
    vals: Vec<i64>,
}

#[derive(Deserialize)]
struct RawPeriodicFn {
    n: i64,
    vals: Vec<i64>,
}

impl TryFrom<RawPeriodicFn> for PeriodicFn {
    type Error = FnzError;
    fn try_from(r: RawPeriodicFn) -> Result<Self, FnzError> {
        PeriodicFn::new(r.n, r.vals)
    }
}

impl fmt::Display for PeriodicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.n, self.vals)
    }
}

/// Remainder of `x` mod `n` in `[0, n)`.
#[inline]
pub fn rem(x: i64, n: i64) -> i64 {
    x.mod_floor(&n)
}

/// Quotient `floor(x / n)`.
#[inline]
pub fn quot(x: i64, n: i64) -> i64 {
    Integer::div_floor(&x, &n)
}

impl PeriodicFn {
    /// Checked constructor: `v0 <= … <= v_{n-1} <= v0 + n`.
    pub fn new(n: i64, vals: Vec<i64>) -> Result<Self, FnzError> {
        if n < 1 || vals.len() as i64 != n {
            return Err(FnzError::Invalid(format!("n = {n}, {} values", vals.len())));
        }
        if vals.windows(2).any(|w| w[0] > w[1]) || vals[n as usize - 1] > vals[0] + n {
            return Err(FnzError::Invalid(format!("{vals:?} is not monotone over one period")));
        }
        Ok(PeriodicFn { n, vals })
    }

    pub fn identity(n: i64) -> Self {
        PeriodicFn { n, vals: (0..n).collect() }
    }

    pub fn translation(n: i64, t: i64) -> Self {
        PeriodicFn { n, vals: (0..n).map(|x| x + t).collect() }
    }

    /// Tabulate a function known to be n-periodic.
    pub fn from_fn(n: i64, f: impl Fn(i64) -> i64) -> Self {
        PeriodicFn { n, vals: (0..n).map(f).collect() }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn vals(&self) -> &[i64] {
        &self.vals
    }

    pub fn is_identity(&self) -> bool {
        self.vals.iter().enumerate().all(|(i, v)| *v == i as i64)
    }

    #[inline]
    pub fn eval(&self, x: i64) -> i64 {
        self.vals[rem(x, self.n) as usize] + self.n * quot(x, self.n)
    }

    fn same_n(&self, g: &PeriodicFn) -> Result<(), FnzError> {
        if self.n != g.n {
            Err(FnzError::PeriodMismatch(self.n, g.n))
        } else {
            Ok(())
        }
    }

    /// `f ∘ g`.
    pub fn compose(&self, g: &PeriodicFn) -> Result<PeriodicFn, FnzError> {
        self.same_n(g)?;
        Ok(PeriodicFn { n: self.n, vals: g.vals.iter().map(|&y| self.eval(y)).collect() })
    }

    /// Dual residual `f^ℓ(a) = min{b : a <= f(b)}`.
    pub fn linv(&self) -> PeriodicFn {
        let n = self.n;
        let vals = (0..n)
            .map(|a| {
                // For residue r the least k with v_r + nk >= a gives b = nk + r.
                (0..n)
                    .map(|r| n * Integer::div_ceil(&(a - self.vals[r as usize]), &n) + r)
                    .min()
                    .unwrap()
            })
            .collect();
        PeriodicFn { n, vals }
    }

    /// Residual `f^r(b) = max{a : f(a) <= b}`.
    pub fn rinv(&self) -> PeriodicFn {
        let n = self.n;
        let vals = (0..n)
            .map(|b| (0..n).map(|r| n * quot(b - self.vals[r as usize], n) + r).max().unwrap())
            .collect();
        PeriodicFn { n, vals }
    }

    /// `f^(m)`: m-fold `linv` for m > 0, |m|-fold `rinv` for m < 0.
    /// Even orders use `f^(2k)(x) = f(x - k) + k`.
    pub fn iter_inv(&self, m: i64) -> PeriodicFn {
        let k = Integer::div_floor(&m, &2);
        let even = PeriodicFn::from_fn(self.n, |x| self.eval(x - k) + k);
        if m.is_even() {
            even
        } else {
            even.linv()
        }
    }

    /// `f^(m)` by repeated residuation, without the even-order shortcut.
    pub fn iter_inv_slow(&self, m: i64) -> PeriodicFn {
        let mut f = self.clone();
        for _ in 0..m.unsigned_abs() {
            f = if m > 0 { f.linv() } else { f.rinv() };
        }
        f
    }

    pub fn meet(&self, g: &PeriodicFn) -> Result<PeriodicFn, FnzError> {
        self.same_n(g)?;
        Ok(PeriodicFn { n: self.n, vals: self.vals.iter().zip(&g.vals).map(|(a, b)| *a.min(b)).collect() })
    }

    pub fn join(&self, g: &PeriodicFn) -> Result<PeriodicFn, FnzError> {
        self.same_n(g)?;
        Ok(PeriodicFn { n: self.n, vals: self.vals.iter().zip(&g.vals).map(|(a, b)| *a.max(b)).collect() })
    }

    /// Pointwise order.
    pub fn leq(&self, g: &PeriodicFn) -> bool {
        self.n == g.n && self.vals.iter().zip(&g.vals).all(|(a, b)| a <= b)
    }

    /// Split `f = f° ∘ f*` with `f°(x) = x + shift`, `shift = S f(0)` and
    /// `0 <= f*(0) < n`.
    pub fn decompose(&self) -> (i64, PeriodicFn) {
        let shift = self.n * quot(self.vals[0], self.n);
        (shift, PeriodicFn { n: self.n, vals: self.vals.iter().map(|v| v - shift).collect() })
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn recompose(shift: i64, star: &PeriodicFn) -> PeriodicFn {
        PeriodicFn { n: star.n, vals: star.vals.iter().map(|v| v + shift).collect() }
    }
}

/// Extend a finite partial map on ℤ that is n-periodic (w.r.t. the identity
/// embedding) to an element of F_n(ℤ).
///
/// Every domain point is folded into `[0, n)`; each remaining residue takes
/// the value of the nearest folded point above it (or of the largest one when
/// none lies above). The empty map is rejected unless `permissive`, in which
/// case the identity is returned.
pub fn extend_partial(h: &BTreeMap<i64, i64>, n: i64, permissive: bool) -> Result<PeriodicFn, FnzError> {
    if h.is_empty() {
        return if permissive { Ok(PeriodicFn::identity(n)) } else { Err(FnzError::Empty) };
    }
    if !crate::diagram::check_n_periodic_map(h, n) {
        return Err(FnzError::NotPeriodic);
    }
    let mut folded: BTreeMap<i64, i64> = BTreeMap::new();
    for (&x, &y) in h {
        let r = rem(x, n);
        let v = y - (x - r);
        if let Some(old) = folded.insert(r, v) {
            if old != v {
                return Err(FnzError::NotPeriodic);
            }
        }
    }
    let last_v = *folded.values().next_back().unwrap();
    let vals: Vec<i64> = (0..n)
        .map(|x| folded.range(x..).next().map(|(_, v)| *v).unwrap_or(last_v))
        .collect();
    let f = PeriodicFn::new(n, vals).map_err(|_| FnzError::NotPeriodic)?;
    if h.iter().any(|(&x, &y)| f.eval(x) != y) {
        return Err(FnzError::NotPeriodic);
    }
    Ok(f)
}
