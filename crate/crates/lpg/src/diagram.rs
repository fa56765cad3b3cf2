//! Finite chains with designated covers, partial maps on them, the bracket
//! inverses `g^[ℓ]`, `g^[r]`, spacing embeddings into ℤ and n-periodicity.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde_json::{json, Value};

/// Order-preserving partial map on chain elements (or on ℤ).
pub type PartialFn = BTreeMap<i64, i64>;

/// The chain `0 < 1 < … < q-1`; `a ∈ covers` designates `a ⋖ a+1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CChain {
    pub q: usize,
    pub covers: BTreeSet<i64>,
}

impl CChain {
    pub fn new(q: usize, covers: impl IntoIterator<Item = i64>) -> Self {
        let covers: BTreeSet<i64> = covers.into_iter().collect();
        assert!(covers.iter().all(|&a| a >= 0 && a + 1 < q as i64), "covers must be (a, a+1) pairs inside the chain");
        CChain { q, covers }
    }

    pub fn is_cover(&self, a: i64) -> bool {
        self.covers.contains(&a)
    }
}

/// Where bracket inverses take their arguments.
#[derive(Debug, Clone, Copy)]
enum Universe {
    Finite(i64),
    Integers,
}

impl Universe {
    fn clamp(self, lo: i64, hi: i64) -> (i64, i64) {
        match self {
            Universe::Finite(q) => (lo.max(0), hi.min(q - 1)),
            Universe::Integers => (lo, hi),
        }
    }
}

fn ell_bracket_in(g: &PartialFn, is_cover: impl Fn(i64) -> bool, u: Universe) -> PartialFn {
    let mut out = PartialFn::new();
    for (&b, &gb) in g.iter().skip(1) {
        if let Some(&gb1) = g.get(&(b - 1)) {
            if is_cover(b - 1) {
                let (lo, hi) = u.clamp(gb1 + 1, gb);
                for x in lo..=hi {
                    out.insert(x, b);
                }
            }
        }
    }
    out
}

fn r_bracket_in(g: &PartialFn, is_cover: impl Fn(i64) -> bool, u: Universe) -> PartialFn {
    let mut out = PartialFn::new();
    for (&a, &ga) in g {
        if let Some(&ga1) = g.get(&(a + 1)) {
            if is_cover(a) {
                let (lo, hi) = u.clamp(ga, ga1 - 1);
                for x in lo..=hi {
                    out.insert(x, a);
                }
            }
        }
    }
    out
}

/// `g^[ℓ](x) = b` iff `b-1 ⋖ b`, both in Dom(g), and `g(b-1) < x <= g(b)`.
pub fn ell_bracket(g: &PartialFn, c: &CChain) -> PartialFn {
    ell_bracket_in(g, |a| c.is_cover(a), Universe::Finite(c.q as i64))
}

/// `g^[r](x) = a` iff `a ⋖ a+1`, both in Dom(g), and `g(a) <= x < g(a+1)`.
pub fn r_bracket(g: &PartialFn, c: &CChain) -> PartialFn {
    r_bracket_in(g, |a| c.is_cover(a), Universe::Finite(c.q as i64))
}

/// `g^[m]`, iterating `^[ℓ]` for positive and `^[r]` for negative m.
pub fn iter_bracket(g: &PartialFn, m: i64, c: &CChain) -> PartialFn {
    let mut h = g.clone();
    for _ in 0..m.unsigned_abs() {
        h = if m > 0 { ell_bracket(&h, c) } else { r_bracket(&h, c) };
    }
    h
}

/// `g^[m]` for a partial map on ℤ, where every `a ⋖ a+1` is a cover.
pub fn iter_bracket_z(g: &PartialFn, m: i64) -> PartialFn {
    let mut h = g.clone();
    for _ in 0..m.unsigned_abs() {
        h = if m > 0 {
            ell_bracket_in(&h, |_| true, Universe::Integers)
        } else {
            r_bracket_in(&h, |_| true, Universe::Integers)
        };
    }
    h
}

pub fn is_order_preserving(g: &PartialFn) -> bool {
    g.values().zip(g.values().skip(1)).all(|(a, b)| a <= b)
}

/// Injection of a chain into ℤ preserving order and designated covers,
/// with least image 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpacingEmbedding {
    pub pos: Vec<i64>,
}

impl SpacingEmbedding {
    pub fn identity(q: usize) -> Self {
        SpacingEmbedding { pos: (0..q as i64).collect() }
    }

    /// Validate against a chain.
    pub fn new(pos: Vec<i64>, c: &CChain) -> Option<Self> {
        let e = SpacingEmbedding { pos };
        e.is_valid_for(c).then_some(e)
    }

    pub fn is_valid_for(&self, c: &CChain) -> bool {
        self.pos.len() == c.q
            && self.pos.first().is_none_or(|&p| p == 0)
            && self.pos.windows(2).all(|w| w[0] < w[1])
            && c.covers.iter().all(|&a| self.pos[a as usize + 1] == self.pos[a as usize] + 1)
    }

    pub fn height(&self) -> i64 {
        self.pos.last().copied().unwrap_or(0)
    }

    #[inline]
    pub fn at(&self, a: i64) -> i64 {
        self.pos[a as usize]
    }
}

/// `g^e = e ∘ g ∘ e⁻¹`.
pub fn counterpart(g: &PartialFn, e: &SpacingEmbedding) -> PartialFn {
    g.iter().map(|(&x, &y)| (e.at(x), e.at(y))).collect()
}

/// n-periodicity of a partial map on ℤ with respect to the identity:
/// for every pair `x < y` in the domain, with `d = y - x` and
/// `d' = h(y) - h(x)`, require `n⌊d/n⌋ <= d' <= n⌈d/n⌉`.
pub fn check_n_periodic_map(h: &PartialFn, n: i64) -> bool {
    let pts: Vec<(i64, i64)> = h.iter().map(|(a, b)| (*a, *b)).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[j].0 - pts[i].0;
            let d2 = pts[j].1 - pts[i].1;
            if d2 < n * Integer::div_floor(&d, &n) || d2 > n * Integer::div_ceil(&d, &n) {
                return false;
            }
        }
    }
    true
}

/// The definition itself: `x <= y + kn ⇒ h(x) <= h(y) + kn` for all domain
/// points and all `|k|` up to the span of the map divided by n (plus one).
pub fn check_n_periodic_map_definitional(h: &PartialFn, n: i64) -> bool {
    if h.is_empty() {
        return true;
    }
    let lo = h.keys().chain(h.values()).min().unwrap();
    let hi = h.keys().chain(h.values()).max().unwrap();
    let kmax = Integer::div_ceil(&(hi - lo), &n) + 1;
    for (&x, &hx) in h {
        for (&y, &hy) in h {
            for k in -kmax..=kmax {
                if x <= y + k * n && hx > hy + k * n {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `g` is n-periodic with respect to the spacing embedding `e`.
pub fn check_n_periodic(g: &PartialFn, e: &SpacingEmbedding, n: i64) -> bool {
    check_n_periodic_map(&counterpart(g, e), n)
}

/// A c-chain with named order-preserving partial maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub chain: CChain,
    pub fns: Vec<(String, PartialFn)>,
}

impl Diagram {
    pub fn is_valid(&self) -> bool {
        self.fns.iter().all(|(_, g)| {
            is_order_preserving(g)
                && g.iter().all(|(&x, &y)| (0..self.chain.q as i64).contains(&x) && (0..self.chain.q as i64).contains(&y))
        })
    }

    pub fn to_json(&self) -> Value {
        let fns: serde_json::Map<String, Value> = self
            .fns
            .iter()
            .map(|(name, g)| {
                let m: serde_json::Map<String, Value> = g.iter().map(|(x, y)| (x.to_string(), json!(y))).collect();
                (name.clone(), Value::Object(m))
            })
            .collect();
        json!({
            "q": self.chain.q,
            "covers": self.chain.covers.iter().map(|a| [*a, a + 1]).collect::<Vec<_>>(),
            "fns": fns,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(pairs: &[(i64, i64)]) -> PartialFn {
        pairs.iter().copied().collect()
    }

    #[test]
    fn bracket_examples() {
        let c = CChain::new(3, [0]);
        let g = pf(&[(0, 0), (1, 2)]);
        assert_eq!(ell_bracket(&g, &c), pf(&[(1, 1), (2, 1)]));
        assert_eq!(r_bracket(&g, &c), pf(&[(0, 0), (1, 0)]));
        let plain = CChain::new(3, []);
        assert!(ell_bracket(&g, &plain).is_empty());
        let c2 = CChain::new(2, [0]);
        assert_eq!(ell_bracket(&pf(&[(0, 0), (1, 1)]), &c2), pf(&[(1, 1)]));
        assert_eq!(iter_bracket(&g, 0, &c), g);
        assert_eq!(iter_bracket(&g, 1, &c), ell_bracket(&g, &c));
    }

    #[test]
    fn counterpart_examples() {
        let c = CChain::new(3, []);
        let e = SpacingEmbedding::new(vec![0, 2, 3], &c).unwrap();
        assert_eq!(counterpart(&pf(&[(0, 1)]), &e), pf(&[(0, 2)]));
        let id = SpacingEmbedding::identity(3);
        let g = pf(&[(0, 1), (2, 2)]);
        assert_eq!(counterpart(&g, &id), g);
        assert!(SpacingEmbedding::new(vec![0, 2, 3], &CChain::new(3, [0])).is_none());
    }

    #[test]
    fn periodicity_examples() {
        let id = SpacingEmbedding::identity(4);
        let good = pf(&[(0, 0), (3, 4)]);
        let bad = pf(&[(0, 0), (1, 3)]);
        let id5 = SpacingEmbedding::identity(5);
        assert!(check_n_periodic(&good, &id5, 2));
        assert!(check_n_periodic_map_definitional(&good, 2));
        assert!(!check_n_periodic(&bad, &id, 2));
        assert!(!check_n_periodic_map_definitional(&bad, 2));
        assert!(check_n_periodic(&PartialFn::new(), &id, 2));
    }

    #[test]
    fn z_brackets_match_residuals_on_full_windows() {
        let f = crate::fnz::PeriodicFn::new(2, vec![1, 3]).unwrap();
        let g: PartialFn = (-20..20).map(|x| (x, f.eval(x))).collect();
        let gl = iter_bracket_z(&g, 1);
        let fl = f.linv();
        for x in -5..5 {
            assert_eq!(gl[&x], fl.eval(x));
        }
        let gr = iter_bracket_z(&g, -1);
        let fr = f.rinv();
        for x in -5..5 {
            assert_eq!(gr[&x], fr.eval(x));
        }
    }

    #[test]
    fn json_debug_form() {
        let d = Diagram { chain: CChain::new(2, [0]), fns: vec![("x".into(), pf(&[(1, 0)]))] };
        assert!(d.is_valid());
        assert_eq!(d.to_json(), json!({"q": 2, "covers": [[0, 1]], "fns": {"x": {"1": 0}}}));
    }
}
