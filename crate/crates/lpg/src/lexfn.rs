//! Finitely described elements of F_n(ℚ ×→ ℤ): a piecewise-linear global
//! part on ℚ together with finitely many non-identity local components.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::fnz::{FnzError, PeriodicFn};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// A point of ℚ ×→ ℤ, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexPoint {
    pub j: Q,
    pub z: i64,
}

impl LexPoint {
    pub fn new(j: Q, z: i64) -> Self {
        LexPoint { j, z }
    }
}

impl fmt::Display for LexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j, self.z)
    }
}

#[derive(Serialize, Deserialize)]
struct RawLexPoint {
    j: String,
    z: i64,
}

impl Serialize for LexPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawLexPoint { j: self.j.to_string(), z: self.z }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LexPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RawLexPoint::deserialize(d)?;
        Ok(LexPoint { j: parse_q(&r.j).map_err(serde::de::Error::custom)?, z: r.z })
    }
}

fn parse_q(s: &str) -> Result<Q, String> {
    Q::from_str(s.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))
}

/// An increasing piecewise-linear bijection of ℚ with slope 1 outside its
/// breakpoints. Stored canonically as its breakpoints `(x, f(x))`; a pure
/// translation by `c` is the single point `(0, c)`, the identity has none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLBijection {
    pts: Vec<(Q, Q)>,
}

impl PLBijection {
    pub fn identity() -> Self {
        PLBijection { pts: vec![] }
    }

    pub fn translation(c: Q) -> Self {
        PLBijection { pts: vec![(Q::zero(), c)] }.canonical()
    }

    /// Interpolate through points with strictly increasing coordinates.
    pub fn from_points(mut pts: Vec<(Q, Q)>) -> Option<Self> {
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        if pts.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
            return None;
        }
        Some(PLBijection { pts }.canonical())
    }

    pub fn points(&self) -> &[(Q, Q)] {
        &self.pts
    }

    fn canonical(mut self) -> Self {
        let slope = |a: &(Q, Q), b: &(Q, Q)| (&b.1 - &a.1) / (&b.0 - &a.0);
        loop {
            let n = self.pts.len();
            if n <= 1 {
                break;
            }
            let one = Q::one();
            let drop = if slope(&self.pts[0], &self.pts[1]) == one {
                Some(0)
            } else if slope(&self.pts[n - 2], &self.pts[n - 1]) == one {
                Some(n - 1)
            } else {
                (1..n - 1).find(|&i| slope(&self.pts[i - 1], &self.pts[i]) == slope(&self.pts[i], &self.pts[i + 1]))
            };
            match drop {
                Some(i) => {
                    self.pts.remove(i);
                }
                None => break,
            }
        }
        if self.pts.len() == 1 {
            let c = &self.pts[0].1 - &self.pts[0].0;
            self.pts = if c.is_zero() { vec![] } else { vec![(Q::zero(), c)] };
        }
        self
    }

    pub fn is_identity(&self) -> bool {
        self.pts.is_empty()
    }

    /// The translation amount if this is a translation.
    pub fn as_translation(&self) -> Option<Q> {
        match self.pts.len() {
            0 => Some(Q::zero()),
            1 => Some(&self.pts[0].1 - &self.pts[0].0),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        eval_pts(&self.pts, x)
    }

    pub fn inverse(&self) -> Self {
        PLBijection { pts: self.pts.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }.canonical()
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &PLBijection) -> Self {
        let ginv = g.inverse();
        let mut xs: BTreeSet<Q> = g.pts.iter().map(|p| p.0.clone()).collect();
        xs.extend(self.pts.iter().map(|p| ginv.eval(&p.0)));
        if xs.is_empty() {
            return PLBijection::identity();
        }
        PLBijection { pts: xs.into_iter().map(|x| { let y = self.eval(&g.eval(&x)); (x, y) }).collect() }.canonical()
    }

    fn breakpoints_with(&self, g: &PLBijection) -> BTreeSet<Q> {
        let mut xs: BTreeSet<Q> = self.pts.iter().map(|p| p.0.clone()).collect();
        xs.extend(g.pts.iter().map(|p| p.0.clone()));
        xs
    }

    /// Pointwise minimum (or maximum), again a PL bijection.
    fn extremum(&self, g: &PLBijection, take_min: bool) -> Self {
        let mut xs = self.breakpoints_with(g);
        let list: Vec<Q> = xs.iter().cloned().collect();
        for w in list.windows(2) {
            // affine on [w0, w1]; add the crossing point if any
            let d0 = self.eval(&w[0]) - g.eval(&w[0]);
            let d1 = self.eval(&w[1]) - g.eval(&w[1]);
            if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                let t = &d0 / (&d0 - &d1);
                xs.insert(&w[0] + t * (&w[1] - &w[0]));
            }
        }
        if xs.is_empty() {
            return self.clone();
        }
        // Beyond the breakpoints both have slope 1, so one side wins; add
        // a point on each side to pin the tails.
        let lo = xs.iter().next().unwrap() - Q::one();
        let hi = xs.iter().next_back().unwrap() + Q::one();
        xs.insert(lo);
        xs.insert(hi);
        let pts = xs
            .into_iter()
            .map(|x| {
                let (a, b) = (self.eval(&x), g.eval(&x));
                let y = if (a <= b) == take_min { a } else { b };
                (x, y)
            })
            .collect();
        PLBijection { pts }.canonical()
    }

    pub fn min(&self, g: &PLBijection) -> Self {
        self.extremum(g, true)
    }

    pub fn max(&self, g: &PLBijection) -> Self {
        self.extremum(g, false)
    }

    /// Exact pointwise `self <= g`.
    pub fn leq(&self, g: &PLBijection) -> bool {
        let xs = self.breakpoints_with(g);
        let probe: Vec<Q> = match (xs.iter().next(), xs.iter().next_back()) {
            (Some(lo), Some(hi)) => {
                let mut v: Vec<Q> = xs.iter().cloned().collect();
                v.push(lo - Q::one());
                v.push(hi + Q::one());
                v
            }
            _ => vec![Q::zero()],
        };
        probe.iter().all(|x| self.eval(x) <= g.eval(x))
    }

    /// Breakpoints and pieces `(slope, intercept)`, one more piece than
    /// breakpoints.
    pub fn pieces(&self) -> (Vec<Q>, Vec<(Q, Q)>) {
        match self.pts.len() {
            0 => (vec![], vec![(Q::one(), Q::zero())]),
            1 => (vec![], vec![(Q::one(), &self.pts[0].1 - &self.pts[0].0)]),
            _ => {
                let xs: Vec<Q> = self.pts.iter().map(|p| p.0.clone()).collect();
                let mut pieces = vec![(Q::one(), &self.pts[0].1 - &self.pts[0].0)];
                for w in self.pts.windows(2) {
                    let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                    let c = &w[0].1 - &s * &w[0].0;
                    pieces.push((s, c));
                }
                let last = self.pts.last().unwrap();
                pieces.push((Q::one(), &last.1 - &last.0));
                (xs, pieces)
            }
        }
    }

    /// Inverse of [`pieces`](Self::pieces).
    pub fn from_pieces(xs: &[Q], pieces: &[(Q, Q)]) -> Result<Self, String> {
        if pieces.len() != xs.len() + 1 {
            return Err("need one more piece than breakpoints".into());
        }
        if pieces[0].0 != Q::one() || pieces.last().unwrap().0 != Q::one() {
            return Err("tails must have slope 1".into());
        }
        if xs.is_empty() {
            return Ok(PLBijection::translation(pieces[0].1.clone()));
        }
        let mut pts = Vec::new();
        for (i, x) in xs.iter().enumerate() {
            let (a, b) = (&pieces[i], &pieces[i + 1]);
            let (ya, yb) = (&a.0 * x + &a.1, &b.0 * x + &b.1);
            if ya != yb {
                return Err(format!("pieces disagree at {x}"));
            }
            pts.push((x.clone(), ya));
        }
        if pieces.iter().any(|p| !p.0.is_positive()) {
            return Err("slopes must be positive".into());
        }
        PLBijection::from_points(pts).ok_or_else(|| "not strictly increasing".into())
    }
}

fn eval_pts(pts: &[(Q, Q)], x: &Q) -> Q {
    match pts.len() {
        0 => x.clone(),
        _ => {
            let first = &pts[0];
            if x <= &first.0 {
                return &first.1 + (x - &first.0);
            }
            let last = pts.last().unwrap();
            if x >= &last.0 {
                return &last.1 + (x - &last.0);
            }
            let i = pts.partition_point(|p| &p.0 <= x);
            let (a, b) = (&pts[i - 1], &pts[i]);
            &a.1 + (&b.1 - &a.1) * (x - &a.0) / (&b.0 - &a.0)
        }
    }
}

/// `f(j, r) = (f̃(j), f̄_j(r))`, with `f̄_j` the identity off the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexFn {
    n: i64,
    tilde: PLBijection,
    comps: BTreeMap<Q, PeriodicFn>,
}

impl LexFn {
    pub fn identity(n: i64) -> Self {
        LexFn { n, tilde: PLBijection::identity(), comps: BTreeMap::new() }
    }

    pub fn new(n: i64, tilde: PLBijection, comps: BTreeMap<Q, PeriodicFn>) -> Result<Self, FnzError> {
        if let Some(bad) = comps.values().find(|f| f.n() != n) {
            return Err(FnzError::PeriodMismatch(n, bad.n()));
        }
        Ok(LexFn { n, tilde, comps: comps.into_iter().filter(|(_, f)| !f.is_identity()).collect() })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn tilde(&self) -> &PLBijection {
        &self.tilde
    }

    pub fn components(&self) -> &BTreeMap<Q, PeriodicFn> {
        &self.comps
    }

    pub fn component(&self, j: &Q) -> PeriodicFn {
        self.comps.get(j).cloned().unwrap_or_else(|| PeriodicFn::identity(self.n))
    }

    pub fn eval(&self, p: &LexPoint) -> LexPoint {
        let z = self.comps.get(&p.j).map_or(p.z, |f| f.eval(p.z));
        LexPoint { j: self.tilde.eval(&p.j), z }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LexFn) -> Result<LexFn, FnzError> {
        if self.n != g.n {
            return Err(FnzError::PeriodMismatch(self.n, g.n));
        }
        let ginv = g.tilde.inverse();
        let mut keys: BTreeSet<Q> = g.comps.keys().cloned().collect();
        keys.extend(self.comps.keys().map(|k| ginv.eval(k)));
        let comps = keys
            .into_iter()
            .map(|j| {
                let c = self.component(&g.tilde.eval(&j)).compose(&g.component(&j))?;
                Ok((j, c))
            })
            .collect::<Result<_, FnzError>>()?;
        LexFn::new(self.n, self.tilde.compose(&g.tilde), comps)
    }

    fn residual(&self, left: bool) -> LexFn {
        let comps = self
            .comps
            .iter()
            .map(|(k, f)| (self.tilde.eval(k), if left { f.linv() } else { f.rinv() }))
            .collect();
        LexFn { n: self.n, tilde: self.tilde.inverse(), comps }
    }

    pub fn linv(&self) -> LexFn {
        self.residual(true)
    }

    pub fn rinv(&self) -> LexFn {
        self.residual(false)
    }

    pub fn iter_inv(&self, m: i64) -> LexFn {
        let mut f = self.clone();
        for _ in 0..m.unsigned_abs() {
            f = if m > 0 { f.linv() } else { f.rinv() };
        }
        f
    }

    /// Sound check: `self <= g` at the given points.
    pub fn leq(&self, g: &LexFn, sample: &[LexPoint]) -> bool {
        sample.iter().all(|p| self.eval(p) <= g.eval(p))
    }

    /// Exact pointwise lexicographic order.
    pub fn exact_leq(&self, g: &LexFn) -> bool {
        if self.n != g.n || !self.tilde.leq(&g.tilde) {
            return false;
        }
        // Where the global parts agree the components decide; off the
        // supports both components are the identity.
        self.comps.keys().chain(g.comps.keys()).all(|j| {
            self.tilde.eval(j) != g.tilde.eval(j) || self.component(j).leq(&g.component(j))
        })
    }

    fn lattice(&self, g: &LexFn, meet: bool) -> Result<LexFn, FnzError> {
        if self.n != g.n {
            return Err(FnzError::PeriodMismatch(self.n, g.n));
        }
        let tilde = if meet { self.tilde.min(&g.tilde) } else { self.tilde.max(&g.tilde) };
        let keys: BTreeSet<Q> = self.comps.keys().chain(g.comps.keys()).cloned().collect();
        let mut comps = BTreeMap::new();
        for j in keys {
            let (a, b) = (self.tilde.eval(&j), g.tilde.eval(&j));
            let c = match (a.cmp(&b), meet) {
                (Ordering::Equal, true) => self.component(&j).meet(&g.component(&j))?,
                (Ordering::Equal, false) => self.component(&j).join(&g.component(&j))?,
                (Ordering::Less, true) | (Ordering::Greater, false) => self.component(&j),
                _ => g.component(&j),
            };
            comps.insert(j, c);
        }
        LexFn::new(self.n, tilde, comps)
    }

    pub fn meet(&self, g: &LexFn) -> Result<LexFn, FnzError> {
        self.lattice(g, true)
    }

    pub fn join(&self, g: &LexFn) -> Result<LexFn, FnzError> {
        self.lattice(g, false)
    }
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    slope: String,
    intercept: String,
}

#[derive(Serialize, Deserialize)]
struct RawTilde {
    breakpoints: Vec<String>,
    pieces: Vec<RawPiece>,
}

#[derive(Serialize, Deserialize)]
struct RawComponent {
    j: String,
    #[serde(rename = "fn")]
    f: PeriodicFn,
}

#[derive(Serialize, Deserialize)]
struct RawLexFn {
    tilde: RawTilde,
    components: Vec<RawComponent>,
    n: i64,
}

impl Serialize for PLBijection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        raw_tilde(self).serialize(s)
    }
}

fn raw_tilde(t: &PLBijection) -> RawTilde {
    let (xs, pieces) = t.pieces();
    RawTilde {
        breakpoints: xs.iter().map(|x| x.to_string()).collect(),
        pieces: pieces.iter().map(|(s, c)| RawPiece { slope: s.to_string(), intercept: c.to_string() }).collect(),
    }
}

fn from_raw_tilde(r: &RawTilde) -> Result<PLBijection, String> {
    let xs = r.breakpoints.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()?;
    let pieces = r
        .pieces
        .iter()
        .map(|p| Ok((parse_q(&p.slope)?, parse_q(&p.intercept)?)))
        .collect::<Result<Vec<_>, String>>()?;
    PLBijection::from_pieces(&xs, &pieces)
}

impl<'de> Deserialize<'de> for PLBijection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        from_raw_tilde(&RawTilde::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for LexFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawLexFn {
            tilde: raw_tilde(&self.tilde),
            components: self.comps.iter().map(|(j, f)| RawComponent { j: j.to_string(), f: f.clone() }).collect(),
            n: self.n,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LexFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = RawLexFn::deserialize(d)?;
        let tilde = from_raw_tilde(&r.tilde).map_err(D::Error::custom)?;
        let mut comps = BTreeMap::new();
        for c in r.components {
            comps.insert(parse_q(&c.j).map_err(D::Error::custom)?, c.f);
        }
        LexFn::new(r.n, tilde, comps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(pts: &[(i64, i64)]) -> PLBijection {
        PLBijection::from_points(pts.iter().map(|(a, b)| (q(*a), q(*b))).collect()).unwrap()
    }

    #[test]
    fn pl_basics() {
        let f = pl(&[(0, 0), (1, 3)]);
        assert_eq!(f.eval(&q_frac(1, 2)), q_frac(3, 2));
        assert_eq!(f.eval(&q(5)), q(7));
        assert_eq!(f.eval(&q(-2)), q(-2));
        assert_eq!(f.inverse().eval(&q(3)), q(1));
        assert_eq!(f.compose(&f.inverse()), PLBijection::identity());
        assert_eq!(pl(&[(0, 1), (5, 6)]), PLBijection::translation(q(1)));
        assert!(PLBijection::from_points(vec![(q(0), q(1)), (q(1), q(0))]).is_none());
    }

    #[test]
    fn pl_lattice() {
        let f = pl(&[(0, 0), (1, 3)]);
        let g = PLBijection::translation(q(1));
        let m = f.min(&g);
        for x in -4..6 {
            for d in 0..3 {
                let x = q(x) + q_frac(d, 3);
                assert_eq!(m.eval(&x), f.eval(&x).min(g.eval(&x)));
                assert_eq!(f.max(&g).eval(&x), f.eval(&x).max(g.eval(&x)));
            }
        }
        assert!(m.leq(&f) && m.leq(&g) && !f.leq(&g) && !g.leq(&f));
    }

    #[test]
    fn swapping_blocks() {
        // exchange neighbourhoods of 0 and 1: 0 ↦ 1, 1 ↦ 2 fixes the order
        // but moves block 0 onto block 1
        let f = pl(&[(-1, -1), (0, 1), (1, 2)]);
        assert_eq!(f.eval(&q(0)), q(1));
        assert_eq!(f.eval(&q_frac(-1, 4)), q_frac(1, 2));
    }

    #[test]
    fn eval_examples() {
        let id = LexFn::identity(2);
        assert_eq!(id.eval(&LexPoint::new(q_frac(1, 2), 3)), LexPoint::new(q_frac(1, 2), 3));
        let f = LexFn::new(2, PLBijection::identity(), BTreeMap::from([(q(0), PeriodicFn::new(2, vec![4, 4]).unwrap())]))
            .unwrap();
        assert_eq!(f.eval(&LexPoint::new(q(0), 1)), LexPoint::new(q(0), 4));
        assert_eq!(f.eval(&LexPoint::new(q(7), 5)), LexPoint::new(q(7), 5));
    }

    #[test]
    fn compose_example() {
        let f = LexFn::new(
            1,
            PLBijection::translation(q(1)),
            BTreeMap::from([(q(0), PeriodicFn::translation(1, 1))]),
        )
        .unwrap();
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff.tilde(), &PLBijection::translation(q(2)));
        assert_eq!(ff.component(&q(0)), PeriodicFn::translation(1, 1));
        assert_eq!(ff.component(&q(-1)), PeriodicFn::translation(1, 1));
        for j in -3..3 {
            let p = LexPoint::new(q(j), 5);
            assert_eq!(ff.eval(&p), f.eval(&f.eval(&p)));
        }
        assert_eq!(f.compose(&LexFn::identity(1)).unwrap(), f);
    }

    #[test]
    fn residuals_and_order() {
        let f = LexFn::new(
            2,
            pl(&[(0, 0), (1, 3)]),
            BTreeMap::from([(q(1), PeriodicFn::new(2, vec![4, 4]).unwrap())]),
        )
        .unwrap();
        assert_eq!(f.linv().rinv(), f);
        assert_eq!(f.iter_inv(4), f);
        assert!(f.exact_leq(&f));
        let g = f.meet(&LexFn::identity(2)).unwrap();
        assert!(g.exact_leq(&f) && g.exact_leq(&LexFn::identity(2)));
        // f^ℓ f <= 1 <= f f^ℓ
        let id = LexFn::identity(2);
        assert!(f.linv().compose(&f).unwrap().exact_leq(&id));
        assert!(id.exact_leq(&f.compose(&f.linv()).unwrap()));
        let smaller = LexFn::new(2, f.tilde().clone(), BTreeMap::from([(q(1), PeriodicFn::new(2, vec![3, 4]).unwrap())]))
            .unwrap();
        assert!(smaller.exact_leq(&f) && !f.exact_leq(&smaller));
    }

    #[test]
    fn json_roundtrip() {
        let f = LexFn::new(
            2,
            pl(&[(0, 0), (1, 3)]),
            BTreeMap::from([(q_frac(1, 2), PeriodicFn::new(2, vec![4, 4]).unwrap())]),
        )
        .unwrap();
        let s = serde_json::to_value(&f).unwrap();
        assert_eq!(s["tilde"]["breakpoints"], serde_json::json!(["0", "1"]));
        assert_eq!(s["tilde"]["pieces"][1]["slope"], "3");
        assert_eq!(s["components"][0]["j"], "1/2");
        let back: LexFn = serde_json::from_value(s).unwrap();
        assert_eq!(back, f);
    }
}
