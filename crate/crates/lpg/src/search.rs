//! Enumeration of compatible surjections Δ_ε → ℕ_q and of their block
//! refinements (partition diagrams).
//!
//! A surjection is built as an ordered partition of Δ_ε, one point at a
//! time, every point after its tail (the order is chosen greedily so that
//! conditions close early). Placing a point either joins an existing class or opens a new class
//! in one of the gaps; gaps between classes already known to be designated
//! covers are closed. Every condition is checked as soon as all the points
//! it mentions are placed:
//!
//! * for each variable and exponent, `φ(u) ↦ φ(x^(m) u)` is an
//!   order-preserving function;
//! * `φ(v) ⋖ φ(+v)` and `φ(-v) ⋖ φ(v)` are adjacent classes;
//! * for `w = x^(m) u` with `m > 0`,
//!   `φ(x^(m-1)(-w)) < φ(u) <= φ(x^(m-1) w)`, and dually for `m < 0`.
//!
//! Δ_ε always contains those helper points, and by induction on |m| the
//! last condition is exactly `φ(w) = g^[m](φ(u))`. Completed surjections are
//! re-checked from scratch anyway.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use crate::diagram::{iter_bracket, CChain, Diagram, PartialFn};
use crate::term::{delta_epsilon, DeltaPoint, IntensionalEquation, Letter};

/// How a point of Δ_ε is built from its tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    One,
    Var { var: usize, exp: i64, tail: usize },
    Up { tail: usize },
    Down { tail: usize },
}

/// Δ_ε with its points indexed.
#[derive(Debug, Clone)]
pub struct Universe {
    pub eps: IntensionalEquation,
    pub points: Vec<DeltaPoint>,
    pub shapes: Vec<Shape>,
    pub index: HashMap<DeltaPoint, usize>,
    pub one: usize,
    pub joinands: Vec<usize>,
}

impl Universe {
    pub fn new(eps: &IntensionalEquation) -> Self {
        let mut points: Vec<DeltaPoint> = delta_epsilon(eps).into_iter().collect();
        points.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.cmp(b)));
        let index: HashMap<DeltaPoint, usize> = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let shapes = points
            .iter()
            .map(|p| match p.tail() {
                None => Shape::One,
                Some((l, t)) => {
                    let tail = *index.get(&t).expect("Δ_ε is closed under tails");
                    match l {
                        Letter::Var(var, exp) => Shape::Var { var, exp, tail },
                        Letter::Up => Shape::Up { tail },
                        Letter::Down => Shape::Down { tail },
                    }
                }
            })
            .collect();
        let joinands = eps.joinands.iter().map(|w| index[&DeltaPoint::from_word(w)]).collect();
        let one = index[&DeltaPoint::one()];
        Universe { eps: eps.clone(), points, shapes, index, one, joinands }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.eps.vars.len()
    }

    fn find(&self, p: &DeltaPoint) -> Option<usize> {
        self.index.get(p).copied()
    }
}

/// An onto map φ: Δ_ε → {0, …, q-1} satisfying the compatibility
/// conditions, with its induced diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleSurjection {
    /// `phi[i]` is the image of `Universe::points[i]`.
    pub phi: Vec<usize>,
    pub chain: CChain,
    /// `g_i = {(φ(u), φ(x_i u))}` per variable.
    pub fns: Vec<PartialFn>,
}

impl CompatibleSurjection {
    /// Check every condition from scratch and build the diagram.
    pub fn from_phi(u: &Universe, phi: Vec<usize>) -> Result<Self, String> {
        if phi.len() != u.len() {
            return Err("wrong number of points".into());
        }
        let q = phi.iter().max().map_or(0, |m| m + 1);
        let mut hit = vec![false; q];
        for &v in &phi {
            hit[v] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err("not onto".into());
        }
        let mut fns = vec![PartialFn::new(); u.nvars()];
        let mut covers = Vec::new();
        for (i, s) in u.shapes.iter().enumerate() {
            match *s {
                Shape::Var { var, exp: 0, tail } => {
                    let (a, b) = (phi[tail] as i64, phi[i] as i64);
                    if let Some(old) = fns[var].insert(a, b) {
                        if old != b {
                            return Err(format!("g_{var} is not a function at {a}"));
                        }
                    }
                }
                Shape::Up { tail } => {
                    if phi[i] != phi[tail] + 1 {
                        return Err(format!("{} is not an upper cover", i));
                    }
                    covers.push(phi[tail] as i64);
                }
                Shape::Down { tail } => {
                    if phi[i] + 1 != phi[tail] {
                        return Err(format!("{} is not a lower cover", i));
                    }
                    covers.push(phi[i] as i64);
                }
                _ => {}
            }
        }
        if !fns.iter().all(crate::diagram::is_order_preserving) {
            return Err("some g_i is not order preserving".into());
        }
        let chain = CChain::new(q, covers);
        let mut cache: HashMap<(usize, i64), PartialFn> = HashMap::new();
        for (i, s) in u.shapes.iter().enumerate() {
            if let Shape::Var { var, exp, tail } = *s {
                if exp == 0 {
                    continue;
                }
                let gm = cache.entry((var, exp)).or_insert_with(|| iter_bracket(&fns[var], exp, &chain));
                if gm.get(&(phi[tail] as i64)) != Some(&(phi[i] as i64)) {
                    return Err(format!("bracket condition fails at {}", u.points[i].display(&u.eps.vars)));
                }
            }
        }
        Ok(CompatibleSurjection { phi, chain, fns })
    }

    pub fn q(&self) -> usize {
        self.chain.q
    }

    /// φ(1).
    pub fn at_one(&self, u: &Universe) -> usize {
        self.phi[u.one]
    }

    pub fn diagram(&self, u: &Universe) -> Diagram {
        Diagram { chain: self.chain.clone(), fns: u.eps.vars.iter().cloned().zip(self.fns.iter().cloned()).collect() }
    }
}

/// Whether every joinand lands strictly below φ(1).
pub fn fails_in(phi: &CompatibleSurjection, u: &Universe) -> bool {
    u.joinands.iter().all(|&w| phi.phi[w] < phi.phi[u.one])
}

#[derive(Debug, Clone, Default)]
pub struct EnumOptions {
    /// Prune to surjections in which the equation fails.
    pub only_failing: bool,
    /// Search-node budget; `None` is unlimited.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub nodes: u64,
    pub emitted: u64,
    /// Leaves the from-scratch re-check rejected (always 0 unless the
    /// incremental checks are wrong).
    pub rejected: u64,
    /// The whole space was explored.
    pub exhausted: bool,
}

#[derive(Debug, Clone)]
enum Cons {
    /// Same (x, m): `a ↦ fa` and `b ↦ fb` must be monotone and functional.
    Mono { a: usize, fa: usize, b: usize, fb: usize },
    /// `lo ⋖ hi`.
    Cover { lo: usize, hi: usize },
    /// `φ(below) < φ(u) <= φ(at)` (m > 0) or `φ(at) <= φ(u) < φ(above)`.
    Bracket { u: usize, at: usize, other: usize, positive: bool },
    Fails { w: usize, one: usize },
}

impl Cons {
    fn points(&self) -> Vec<usize> {
        match *self {
            Cons::Mono { a, fa, b, fb } => vec![a, fa, b, fb],
            Cons::Cover { lo, hi } => vec![lo, hi],
            Cons::Bracket { u, at, other, .. } => vec![u, at, other],
            Cons::Fails { w, one } => vec![w, one],
        }
    }
}

fn build_constraints(u: &Universe, only_failing: bool) -> (Vec<usize>, Vec<Vec<Cons>>, u64) {
    let mut all = Vec::new();
    let mut missing_helpers = 0;
    let mut by_rel: BTreeMap<(usize, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for (i, s) in u.shapes.iter().enumerate() {
        match *s {
            Shape::Var { var, exp, tail } => {
                by_rel.entry((var, exp)).or_default().push((tail, i));
                if exp != 0 {
                    let w = &u.points[i];
                    let step = if exp > 0 { exp - 1 } else { exp + 1 };
                    let deco = if exp > 0 { Letter::Down } else { Letter::Up };
                    let at = u.find(&w.cons(Letter::Var(var, step)));
                    let other = u.find(&w.cons(deco).cons(Letter::Var(var, step)));
                    match (at, other) {
                        (Some(at), Some(other)) => all.push(Cons::Bracket { u: tail, at, other, positive: exp > 0 }),
                        _ => missing_helpers += 1,
                    }
                }
            }
            Shape::Up { tail } => all.push(Cons::Cover { lo: tail, hi: i }),
            Shape::Down { tail } => all.push(Cons::Cover { lo: i, hi: tail }),
            Shape::One => {}
        }
    }
    for pairs in by_rel.values() {
        for x in 0..pairs.len() {
            for y in x + 1..pairs.len() {
                let ((a, fa), (b, fb)) = (pairs[x], pairs[y]);
                all.push(Cons::Mono { a, fa, b, fb });
            }
        }
    }
    if only_failing {
        for &w in &u.joinands {
            all.push(Cons::Fails { w, one: u.one });
        }
    }
    let order = placement_order(u, &all);
    let mut step_of = vec![0; u.len()];
    for (s, &i) in order.iter().enumerate() {
        step_of[i] = s;
    }
    // Each constraint fires when its last point is placed.
    let mut at = vec![Vec::new(); u.len()];
    for c in all {
        let last = c.points().iter().map(|&i| step_of[i]).max().unwrap();
        at[last].push(c);
    }
    (order, at, missing_helpers)
}

/// Greedy order: tails first, then whichever point completes the most
/// constraints (shorter points on ties).
fn placement_order(u: &Universe, cons: &[Cons]) -> Vec<usize> {
    let n = u.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, c) in cons.iter().enumerate() {
        for i in c.points() {
            touching[i].push(k);
        }
    }
    let mut open: Vec<usize> = cons.iter().map(|c| c.points().iter().collect::<std::collections::BTreeSet<_>>().len()).collect();
    for _ in 0..n {
        let ready = (0..n).filter(|&i| {
            !placed[i]
                && match u.shapes[i] {
                    Shape::One => true,
                    Shape::Var { tail, .. } | Shape::Up { tail } | Shape::Down { tail } => placed[tail],
                }
        });
        let best = ready
            .max_by_key(|&i| {
                let closes = touching[i].iter().filter(|&&k| open[k] == 1).count();
                let progress = touching[i].len();
                (closes, progress, std::cmp::Reverse(u.points[i].0.len()), std::cmp::Reverse(i))
            })
            .expect("tails are always placeable");
        placed[best] = true;
        order.push(best);
        let mut seen = std::collections::BTreeSet::new();
        for &k in &touching[best] {
            if seen.insert(k) {
                open[k] -= 1;
            }
        }
    }
    order
}

struct Dfs<'a, F> {
    u: &'a Universe,
    order: Vec<usize>,
    cons: Vec<Vec<Cons>>,
    budget: Option<u64>,
    stats: EnumStats,
    emit: F,
}

#[derive(Clone)]
struct Placement {
    rank: Vec<usize>,
    /// `covered[c]`: classes c and c+1 are a designated cover.
    covered: Vec<bool>,
    nclasses: usize,
}

impl Placement {
    fn open(&mut self, k: usize) {
        for r in &mut self.rank {
            if *r != usize::MAX && *r >= k {
                *r += 1;
            }
        }
        self.covered.insert(k, false);
        self.nclasses += 1;
    }

    fn can_open(&self, k: usize) -> bool {
        k == 0 || k == self.nclasses || !self.covered[k - 1]
    }
}

impl<'a, F: FnMut(CompatibleSurjection) -> ControlFlow<()>> Dfs<'a, F> {
    fn check(&self, step: usize, pl: &mut Placement) -> bool {
        let r = &pl.rank;
        for c in &self.cons[step] {
            let ok = match *c {
                Cons::Mono { a, fa, b, fb } => match r[a].cmp(&r[b]) {
                    std::cmp::Ordering::Less => r[fa] <= r[fb],
                    std::cmp::Ordering::Equal => r[fa] == r[fb],
                    std::cmp::Ordering::Greater => r[fa] >= r[fb],
                },
                Cons::Cover { lo, hi } => r[hi] == r[lo] + 1,
                Cons::Bracket { u, at, other, positive } => {
                    if positive {
                        r[other] < r[u] && r[u] <= r[at]
                    } else {
                        r[at] <= r[u] && r[u] < r[other]
                    }
                }
                Cons::Fails { w, one } => r[w] < r[one],
            };
            if !ok {
                return false;
            }
        }
        for c in &self.cons[step] {
            if let Cons::Cover { lo, .. } = *c {
                let k = pl.rank[lo];
                pl.covered[k] = true;
            }
        }
        true
    }

    /// `Break` stops the whole enumeration.
    fn go(&mut self, step: usize, pl: Placement) -> ControlFlow<()> {
        self.stats.nodes += 1;
        if let Some(b) = self.budget {
            if self.stats.nodes > b {
                return ControlFlow::Break(());
            }
        }
        if step == self.u.len() {
            match CompatibleSurjection::from_phi(self.u, pl.rank.clone()) {
                Ok(cs) => {
                    self.stats.emitted += 1;
                    return (self.emit)(cs);
                }
                Err(_) => {
                    self.stats.rejected += 1;
                    return ControlFlow::Continue(());
                }
            }
        }
        let i = self.order[step];
        // Candidate moves: Ok(class) joins, Err(gap) opens a class at gap.
        let moves: Vec<Result<usize, usize>> = match self.u.shapes[i] {
            Shape::Up { tail } => {
                let k = pl.rank[tail] + 1;
                let mut v = vec![Err(k)];
                if k < pl.nclasses {
                    v.push(Ok(k));
                }
                v
            }
            Shape::Down { tail } => {
                let k = pl.rank[tail];
                let mut v = vec![Err(k)];
                if k > 0 {
                    v.insert(0, Ok(k - 1));
                }
                v
            }
            _ => {
                let mut v = Vec::with_capacity(2 * pl.nclasses + 1);
                for k in 0..=pl.nclasses {
                    v.push(Err(k));
                    if k < pl.nclasses {
                        v.push(Ok(k));
                    }
                }
                v
            }
        };
        for mv in moves {
            let mut next = pl.clone();
            match mv {
                Ok(c) => next.rank[i] = c,
                Err(k) => {
                    if !next.can_open(k) {
                        continue;
                    }
                    next.open(k);
                    next.rank[i] = k;
                }
            }
            if self.check(step, &mut next) {
                self.go(step + 1, next)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Stream every compatible surjection (or only the failing ones) to `emit`,
/// which may stop the enumeration by returning `Break`.
pub fn enumerate_compatible_surjections<F>(u: &Universe, opts: &EnumOptions, emit: F) -> EnumStats
where
    F: FnMut(CompatibleSurjection) -> ControlFlow<()>,
{
    let (order, cons, missing) = build_constraints(u, opts.only_failing);
    debug_assert_eq!(missing, 0, "Δ_ε lacks a bracket helper point");
    let mut dfs = Dfs { u, order, cons, budget: opts.node_budget, stats: EnumStats::default(), emit };
    let pl = Placement { rank: vec![usize::MAX; u.len()], covered: Vec::new(), nclasses: 0 };
    let flow = dfs.go(0, pl);
    let budget_hit = dfs.budget.is_some_and(|b| dfs.stats.nodes > b);
    dfs.stats.exhausted = flow.is_continue() && !budget_hit;
    dfs.stats
}

/// All compatible surjections, collected.
pub fn all_compatible_surjections(u: &Universe) -> Vec<CompatibleSurjection> {
    let mut out = Vec::new();
    enumerate_compatible_surjections(u, &EnumOptions::default(), |cs| {
        out.push(cs);
        ControlFlow::Continue(())
    });
    out
}

// ---------------------------------------------------------------------------
// Partition diagrams

/// A compatible surjection whose chain is cut into consecutive blocks such
/// that covers stay inside blocks and every `g_i` satisfies
/// `x ≡ y ⇔ g_i(x) ≡ g_i(y)`. Block `j` is the chain interval
/// `starts[j] .. starts[j+1]`; its elements are slots `0, 1, …` of `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionDiagram {
    pub surjection: CompatibleSurjection,
    /// Block index of each chain element.
    pub block: Vec<usize>,
    pub starts: Vec<usize>,
}

impl PartitionDiagram {
    pub fn new(surjection: CompatibleSurjection, block: Vec<usize>) -> Option<Self> {
        let q = surjection.q();
        if block.len() != q || block.first().is_some_and(|b| *b != 0) {
            return None;
        }
        if block.windows(2).any(|w| w[1] != w[0] && w[1] != w[0] + 1) {
            return None;
        }
        let starts: Vec<usize> = (0..q).filter(|&a| a == 0 || block[a] != block[a - 1]).collect();
        let pd = PartitionDiagram { surjection, block, starts };
        pd.is_valid().then_some(pd)
    }

    pub fn nblocks(&self) -> usize {
        self.starts.len()
    }

    /// Common slot count |Δ₀|: the largest block.
    pub fn width(&self) -> usize {
        (0..self.nblocks()).map(|j| self.block_len(j)).max().unwrap_or(0)
    }

    pub fn block_len(&self, j: usize) -> usize {
        self.starts.get(j + 1).copied().unwrap_or(self.block.len()) - self.starts[j]
    }

    /// `(block, slot)` of a chain element.
    pub fn split(&self, a: usize) -> (usize, usize) {
        let j = self.block[a];
        (j, a - self.starts[j])
    }

    pub fn join(&self, j: usize, s: usize) -> usize {
        self.starts[j] + s
    }

    pub fn is_valid(&self) -> bool {
        let c = &self.surjection.chain;
        c.covers.iter().all(|&a| self.block[a as usize] == self.block[a as usize + 1])
            && self.surjection.fns.iter().all(|g| {
                let pts: Vec<(usize, usize)> = g.iter().map(|(a, b)| (*a as usize, *b as usize)).collect();
                pts.iter().all(|&(x, gx)| {
                    pts.iter().all(|&(y, gy)| (self.block[x] == self.block[y]) == (self.block[gx] == self.block[gy]))
                })
            })
    }

    /// `g̃`: the induced partial injection on blocks.
    pub fn tilde(&self, var: usize) -> BTreeMap<usize, usize> {
        self.surjection.fns[var].iter().map(|(a, b)| (self.block[*a as usize], self.block[*b as usize])).collect()
    }

    /// `ḡ_j`: the slot map from block j to block g̃(j).
    pub fn bar(&self, var: usize, j: usize) -> PartialFn {
        self.surjection.fns[var]
            .iter()
            .filter(|(a, _)| self.block[**a as usize] == j)
            .map(|(a, b)| (self.split(*a as usize).1 as i64, self.split(*b as usize).1 as i64))
            .collect()
    }

    /// Rebuild `g` from `g̃` and the `ḡ_j`.
    pub fn recompose(&self, var: usize) -> PartialFn {
        let tilde = self.tilde(var);
        let mut g = PartialFn::new();
        for (&j, &tj) in &tilde {
            for (s, t) in self.bar(var, j) {
                g.insert(self.join(j, s as usize) as i64, self.join(tj, t as usize) as i64);
            }
        }
        g
    }
}

/// Every admissible block structure on the chain of `cs`, coarsest first.
pub fn block_partitions(cs: &CompatibleSurjection) -> Vec<Vec<usize>> {
    let q = cs.q();
    if q == 0 {
        return vec![vec![]];
    }
    let pairs: Vec<(usize, usize, usize, usize)> = cs
        .fns
        .iter()
        .flat_map(|g| {
            let pts: Vec<(usize, usize)> = g.iter().map(|(a, b)| (*a as usize, *b as usize)).collect();
            let mut v = Vec::new();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    v.push((pts[i].0, pts[i].1, pts[j].0, pts[j].1));
                }
            }
            v
        })
        .collect();
    let mut watch = vec![Vec::new(); q];
    for (k, p) in pairs.iter().enumerate() {
        watch[p.0.max(p.1).max(p.2).max(p.3)].push(k);
    }
    let mut out = Vec::new();
    let mut block = vec![0usize; q];
    fn rec(
        a: usize,
        block: &mut Vec<usize>,
        cs: &CompatibleSurjection,
        pairs: &[(usize, usize, usize, usize)],
        watch: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        let q = block.len();
        let ok = watch[a].iter().all(|&k| {
            let (x, gx, y, gy) = pairs[k];
            (block[x] == block[y]) == (block[gx] == block[gy])
        });
        if !ok {
            return;
        }
        if a + 1 == q {
            out.push(block.clone());
            return;
        }
        // continue the block, or (outside covers) start a new one
        block[a + 1] = block[a];
        rec(a + 1, block, cs, pairs, watch, out);
        if !cs.chain.is_cover(a as i64) {
            block[a + 1] = block[a] + 1;
            rec(a + 1, block, cs, pairs, watch, out);
        }
    }
    rec(0, &mut block, cs, &pairs, &watch, &mut out);
    out
}

/// Stream the partition diagrams over (failing, if requested) compatible
/// surjections.
pub fn enumerate_partition_diagrams<F>(u: &Universe, opts: &EnumOptions, mut emit: F) -> EnumStats
where
    F: FnMut(PartitionDiagram) -> ControlFlow<()>,
{
    enumerate_compatible_surjections(u, opts, |cs| {
        for block in block_partitions(&cs) {
            let pd = PartitionDiagram::new(cs.clone(), block).expect("enumerated partitions are admissible");
            emit(pd)?;
        }
        ControlFlow::Continue(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, to_intensional};

    fn universe(s: &str) -> Universe {
        Universe::new(&to_intensional(&parse(s).unwrap())[0])
    }

    #[test]
    fn one_le_x() {
        let u = universe("1 <= x");
        assert_eq!(u.len(), 2);
        let all = all_compatible_surjections(&u);
        assert_eq!(all.len(), 3);
        let failing: Vec<_> = all.iter().filter(|c| fails_in(c, &u)).collect();
        assert_eq!(failing.len(), 1);
        let f = failing[0];
        assert_eq!((f.phi[u.one], f.fns[0].clone()), (1, PartialFn::from([(1, 0)])));
        assert!(all.iter().any(|c| c.q() == 1 && !fails_in(c, &u)));
    }

    #[test]
    fn valid_equation_has_no_failing_surjection() {
        for s in ["1 <= x^(-1) x", "1 <= x x^l"] {
            let u = universe(s);
            let mut n = 0;
            let st = enumerate_compatible_surjections(&u, &EnumOptions { only_failing: true, node_budget: None }, |_| {
                n += 1;
                ControlFlow::Continue(())
            });
            assert!(st.exhausted);
            assert_eq!((n, st.rejected), (0, 0), "{s}");
        }
    }

    fn brute_force(u: &Universe) -> Vec<Vec<usize>> {
        let n = u.len();
        let mut out = Vec::new();
        let mut phi = vec![0usize; n];
        loop {
            if CompatibleSurjection::from_phi(u, phi.clone()).is_ok() {
                out.push(phi.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort();
                    return out;
                }
                phi[i] += 1;
                if phi[i] < n {
                    break;
                }
                phi[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn exhaustive_against_brute_force() {
        for s in ["1 <= x", "1 <= x y", "1 <= x | y", "1 <= x x", "x <= 1"] {
            let u = universe(s);
            assert!(u.len() <= 5, "{s}: {}", u.len());
            let mut got: Vec<Vec<usize>> = all_compatible_surjections(&u).into_iter().map(|c| c.phi).collect();
            got.sort();
            assert_eq!(got, brute_force(&u), "{s}");
        }
    }

    #[test]
    fn inverse_example_against_brute_force() {
        let u = universe("1 <= x^(-1) x");
        assert_eq!(u.len(), 6);
        let mut got: Vec<Vec<usize>> = all_compatible_surjections(&u).into_iter().map(|c| c.phi).collect();
        got.sort();
        assert_eq!(got, brute_force(&u));
        assert!(!got.is_empty());
    }

    #[test]
    fn partition_diagrams_recompose() {
        let u = universe("1 <= x y");
        let mut count = 0;
        enumerate_partition_diagrams(&u, &EnumOptions::default(), |pd| {
            count += 1;
            for v in 0..u.nvars() {
                assert_eq!(pd.recompose(v), pd.surjection.fns[v]);
            }
            assert!(pd.surjection.diagram(&u).is_valid());
            ControlFlow::Continue(())
        });
        assert!(count > 0);
    }

    #[test]
    fn block_preservation_is_enforced() {
        let cs = CompatibleSurjection {
            phi: vec![],
            chain: CChain::new(3, []),
            fns: vec![PartialFn::from([(0, 2), (1, 2)])],
        };
        // 0 and 1 both land on 2, so they can never be split apart
        for b in block_partitions(&cs) {
            assert_eq!(b[0], b[1]);
        }
        assert_eq!(block_partitions(&cs).len(), 2);
    }
}
