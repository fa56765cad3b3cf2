//! Spacing embeddings: the Δ-bounded systems whose solutions transfer
//! 1-periodicity, the ρ/ν height bounds, short n-transferring embeddings,
//! and the exact search for an embedding that makes a diagram n-periodic.

pub mod ilp;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::diagram::{CChain, PartialFn, SpacingEmbedding};
use crate::fnz::{quot, rem};
use ilp::{Ilp, IlpOutcome};

/// `ρ(a) = 2a³a! + a + 1`.
pub fn rho(a: u64) -> BigUint {
    let fact: BigUint = (1..=a).map(BigUint::from).product();
    BigUint::from(2u8) * BigUint::from(a).pow(3) * fact + BigUint::from(a) + BigUint::one()
}

/// `ν(a, n) = (ρ(3a) + 1) n`.
pub fn nu(a: u64, n: u64) -> BigUint {
    (rho(3 * a) + BigUint::one()) * BigUint::from(n)
}

/// Gaps `y_k = p_k - p_{k-1} - 1` between consecutive chain points.
pub type GapVector = Vec<i64>;

/// A finite sub c-chain of ℤ: sorted points, and the indices `i` with
/// `pts[i] ⋖ pts[i+1]` designated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZChain {
    pub pts: Vec<i64>,
    pub covers: BTreeSet<usize>,
}

impl ZChain {
    pub fn new(mut pts: Vec<i64>, covers: impl IntoIterator<Item = usize>) -> Self {
        pts.sort();
        pts.dedup();
        let covers: BTreeSet<usize> = covers.into_iter().collect();
        assert!(covers.iter().all(|&i| i + 1 < pts.len() && pts[i + 1] == pts[i] + 1));
        ZChain { pts, covers }
    }

    /// Points with every integer-adjacent pair designated a cover.
    pub fn with_inherited_covers(pts: Vec<i64>) -> Self {
        let mut z = ZChain::new(pts, []);
        z.covers = (0..z.pts.len().saturating_sub(1)).filter(|&i| z.pts[i + 1] == z.pts[i] + 1).collect();
        z
    }

    pub fn gaps(&self) -> GapVector {
        self.pts.windows(2).map(|w| w[1] - w[0] - 1).collect()
    }

    pub fn cchain(&self) -> CChain {
        CChain::new(self.pts.len(), self.covers.iter().map(|&i| i as i64))
    }
}

/// `A Y = b` with `l` unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub l: usize,
}

impl LinearSystem {
    pub fn is_solution(&self, y: &[i64]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, rhs)| row.iter().zip(y).map(|(a, y)| a * y).sum::<i64>() == *rhs)
    }

    /// Entries of A in {-1, 0, 1}, entries of b within ±2|Δ|.
    pub fn is_delta_bounded(&self, delta: usize) -> bool {
        self.a.iter().flatten().all(|v| (-1..=1).contains(v))
            && self.b.iter().all(|v| v.unsigned_abs() as usize <= 2 * delta)
            && self.l <= delta
    }
}

/// The system whose nonnegative solutions are exactly the gap vectors of
/// spacing embeddings of `c` that transfer 1-periodicity.
///
/// For every translation `t > 0` the pairs `(z, z')` with `p_{z'} = p_z + t`
/// must keep a common difference: relative to the first pair `(z0, z0')`,
/// `Σ_{z0<k≤z} Y_k − Σ_{z0'<k≤z'} Y_k = (z' − z0') − (z − z0)`. Designated
/// covers add `Y_k = 0`.
pub fn build_1transfer_system(c: &ZChain) -> LinearSystem {
    let p = &c.pts;
    let l = p.len().saturating_sub(1);
    let mut rows: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    let index: BTreeMap<i64, usize> = p.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut translations: BTreeSet<i64> = BTreeSet::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            translations.insert(p[j] - p[i]);
        }
    }
    for t in translations {
        let pairs: Vec<(usize, usize)> =
            (0..p.len()).filter_map(|z| index.get(&(p[z] + t)).map(|&z2| (z, z2))).collect();
        let Some(&(z0, z0p)) = pairs.first() else { continue };
        for &(z, zp) in &pairs[1..] {
            let mut row = vec![0i64; l];
            for k in z0 + 1..=z {
                row[k - 1] += 1;
            }
            for k in z0p + 1..=zp {
                row[k - 1] -= 1;
            }
            let rhs = (zp as i64 - z0p as i64) - (z as i64 - z0 as i64);
            if row.iter().any(|v| *v != 0) || rhs != 0 {
                rows.insert((row, rhs));
            }
        }
    }
    for &i in &c.covers {
        let mut row = vec![0i64; l];
        row[i] = 1;
        rows.insert((row, 0));
    }
    let (a, b) = rows.into_iter().unzip();
    let sys = LinearSystem { a, b, l };
    assert!(sys.is_delta_bounded(p.len().max(1)), "constructed system is not Δ-bounded");
    assert!(sys.is_solution(&c.gaps()), "the chain's own gaps must solve its system");
    sys
}

/// Maximal linearly independent subset of rows (exact elimination).
fn independent_rows(a: &[Vec<i64>]) -> Vec<usize> {
    use num_rational::BigRational as Q;
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut keep = Vec::new();
    for (ri, row) in a.iter().enumerate() {
        let mut v: Vec<Q> = row.iter().map(|x| Q::from_integer(BigInt::from(*x))).collect();
        for (b, &pc) in basis.iter().zip(&pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone() / &b[pc];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            basis.push(v);
            pivots.push(pc);
            keep.push(ri);
        }
    }
    keep
}

fn det_bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// γ: the largest |M×M minor| of `(A'|b')`, or the `M!·max|b|`-style bound
/// when enumerating minors would be too expensive.
pub fn gamma(a: &[Vec<i64>], b: &[i64]) -> BigUint {
    let m = a.len();
    if m == 0 {
        return BigUint::one();
    }
    let cols = a[0].len() + 1;
    let aug: Vec<Vec<i128>> =
        a.iter().zip(b).map(|(r, x)| r.iter().map(|v| *v as i128).chain([*x as i128]).collect()).collect();
    if binomial(cols, m) > 20_000 || m > 12 {
        let fact: BigUint = (1..=m as u64).map(BigUint::from).product();
        let bmax = b.iter().map(|v| v.unsigned_abs()).max().unwrap_or(1).max(1);
        return fact * BigUint::from(bmax);
    }
    let mut best = 0u128;
    let mut choose: Vec<usize> = (0..m).collect();
    loop {
        let sub: Vec<Vec<i128>> = aug.iter().map(|r| choose.iter().map(|&j| r[j]).collect()).collect();
        best = best.max(det_bareiss(sub).unsigned_abs());
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return BigUint::from(best.max(1));
            }
            i -= 1;
            if choose[i] < cols - m + i {
                choose[i] += 1;
                for j in i + 1..m {
                    choose[j] = choose[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A nonnegative integer solution with every entry at most `(l−M+1)γ`,
/// minimizing the total; `None` if there is none.
pub fn solve_bounded_nonneg(sys: &LinearSystem) -> Option<GapVector> {
    let keep = independent_rows(&sys.a);
    let a: Vec<Vec<i64>> = keep.iter().map(|&i| sys.a[i].clone()).collect();
    let b: Vec<i64> = keep.iter().map(|&i| sys.b[i]).collect();
    let m = a.len();
    let bound = BigUint::from((sys.l + 1).saturating_sub(m) as u64) * gamma(&a, &b);
    let mut p = Ilp::new(sys.l);
    for (row, rhs) in sys.a.iter().zip(&sys.b) {
        p.add_eq(row.clone(), *rhs);
    }
    p.upper = vec![Some(BigInt::from(bound)); sys.l];
    p.cost = vec![BigInt::one(); sys.l];
    match p.solve(100_000) {
        IlpOutcome::Solved { x, .. } => Some(x.iter().map(|v| v.to_i64().expect("gap fits in i64")).collect()),
        IlpOutcome::Infeasible => None,
        IlpOutcome::Budget => panic!("bounded solver exceeded its node budget"),
    }
}

fn positions_from_gaps(y: &[i64]) -> Vec<i64> {
    let mut pos = vec![0i64];
    for g in y {
        let last = *pos.last().unwrap();
        pos.push(last + g + 1);
    }
    pos
}

/// A spacing embedding of `c` that transfers 1-periodicity, of height at
/// most ρ(|Δ|).
pub fn find_short_1transfer(c: &ZChain) -> SpacingEmbedding {
    let sys = build_1transfer_system(c);
    let y = solve_bounded_nonneg(&sys).expect("a realized chain always solves its own system");
    let e = SpacingEmbedding { pos: positions_from_gaps(&y) };
    assert!(BigUint::from(e.height() as u64) <= rho(c.pts.len() as u64), "height exceeds ρ(|Δ|)");
    e
}

/// An n-short spacing embedding of `c` that transfers n-periodicity:
/// solve the 1-transfer problem on the quotients `{Qx, Qx±1}` (with their
/// inherited covers) and put `e(x) = d(Qx)·n + Rx`, shifted to start at 0.
pub fn find_short_ntransfer(c: &ZChain, n: i64) -> SpacingEmbedding {
    let tilde: BTreeSet<i64> = c.pts.iter().flat_map(|&x| {
        let qx = quot(x, n);
        [qx - 1, qx, qx + 1]
    }).collect();
    let tchain = ZChain::with_inherited_covers(tilde.into_iter().collect());
    let d = find_short_1transfer(&tchain);
    let dpos: BTreeMap<i64, i64> = tchain.pts.iter().zip(&d.pos).map(|(a, b)| (*a, *b)).collect();
    let raw: Vec<i64> = c.pts.iter().map(|&x| dpos[&quot(x, n)] * n + rem(x, n)).collect();
    let base = raw.first().copied().unwrap_or(0);
    let e = SpacingEmbedding { pos: raw.iter().map(|v| v - base).collect() };
    assert!(e.is_valid_for(&c.cchain()));
    assert!(BigUint::from(e.height() as u64) <= nu(c.pts.len() as u64, n as u64), "height exceeds ν(|Δ|, n)");
    e
}

// ---------------------------------------------------------------------------
// Exact search for witnessing embeddings

/// Outcome of an embedding search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingSearch {
    /// Positions per chain element; each block starts at 0.
    Found(Vec<i64>),
    /// Proven: no embedding within the cap exists.
    NoneExists,
    /// The work budget ran out first.
    Budget,
}

/// Search parameters for [`find_block_embedding`].
#[derive(Debug, Clone)]
pub struct EmbedParams {
    pub n: i64,
    /// Height cap; `None` means ν(q, n), which is complete.
    pub cap: Option<BigUint>,
    /// Total work units (residue nodes plus LP solves).
    pub budget: u64,
}

struct PairCons {
    u: usize,
    v: usize,
    gu: usize,
    gv: usize,
}

/// Find positions for the chain `c` (split into interval blocks by
/// `block`, each block embedded on its own) making every map in `fns`
/// n-periodic. Pairs are only constrained inside a block, and the maps must
/// send same-block pairs to same-block pairs.
///
/// Writing `e(a) = n·Q(a) + R(a)`, the residues `R` are enumerated (with
/// designated covers forcing the next residue); with `R` fixed, each map's
/// quotient shift `T(x) = Q(gx) − Q(x)` takes at most two adjacent values,
/// and each admissible 0/1 pattern of those values leaves an integer program
/// in the quotient gaps.
pub fn find_block_embedding(fns: &[PartialFn], c: &CChain, block: &[usize], p: &EmbedParams) -> EmbeddingSearch {
    let q = c.q;
    let n = p.n;
    assert_eq!(block.len(), q);
    if q == 0 {
        return EmbeddingSearch::Found(vec![]);
    }
    let starts: Vec<usize> = (0..q).filter(|&a| a == 0 || block[a] != block[a - 1]).collect();
    for &a in &c.covers {
        assert_eq!(block[a as usize], block[a as usize + 1], "covers must stay inside a block");
    }
    let start_of = |a: usize| -> usize { *starts.iter().rev().find(|&&s| s <= a).unwrap() };
    let max_block = (0..q).map(|a| a - start_of(a) + 1).max().unwrap();
    if max_block as i64 <= n {
        return EmbeddingSearch::Found((0..q).map(|a| (a - start_of(a)) as i64).collect());
    }
    let cap = p.cap.clone().unwrap_or_else(|| nu(q as u64, n as u64));

    // Same-block pairs per map, grouped by (map, block).
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new(); // list of (x, gx) sorted
    let mut pairs: Vec<Vec<PairCons>> = Vec::new();
    for g in fns {
        let mut by_block: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (&x, &y) in g {
            by_block.entry(block[x as usize]).or_default().push((x as usize, y as usize));
        }
        for (_, pts) in by_block {
            let mut pc = Vec::new();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    assert_eq!(block[pts[i].1], block[pts[j].1], "maps must preserve blocks");
                    pc.push(PairCons { u: pts[i].0, v: pts[j].0, gu: pts[i].1, gv: pts[j].1 });
                }
            }
            groups.push(pts);
            pairs.push(pc);
        }
    }
    // Constraints checkable once the largest involved point has a residue.
    let mut watch: Vec<Vec<(usize, usize)>> = vec![Vec::new(); q];
    for (gi, pc) in pairs.iter().enumerate() {
        for (pi, k) in pc.iter().enumerate() {
            let last = k.u.max(k.v).max(k.gu).max(k.gv);
            watch[last].push((gi, pi));
        }
    }

    let mut st = EmbedState {
        c,
        n,
        starts: &starts,
        block,
        groups: &groups,
        pairs: &pairs,
        watch: &watch,
        cap: &cap,
        budget: p.budget,
        used: 0,
        r: vec![0; q],
    };
    match st.dfs(0) {
        Some(Some(pos)) => EmbeddingSearch::Found(pos),
        Some(None) => EmbeddingSearch::NoneExists,
        None => EmbeddingSearch::Budget,
    }
}

struct EmbedState<'a> {
    c: &'a CChain,
    n: i64,
    starts: &'a [usize],
    block: &'a [usize],
    groups: &'a [Vec<(usize, usize)>],
    pairs: &'a [Vec<PairCons>],
    watch: &'a [Vec<(usize, usize)>],
    cap: &'a BigUint,
    budget: u64,
    used: u64,
    r: Vec<i64>,
}

impl EmbedState<'_> {
    /// `None`: budget exhausted; `Some(None)`: subtree has no solution.
    fn dfs(&mut self, a: usize) -> Option<Option<Vec<i64>>> {
        self.used += 1;
        if self.used > self.budget {
            return None;
        }
        let q = self.c.q;
        if a == q {
            return self.solve_quotients();
        }
        let choices: Vec<i64> = if self.starts.contains(&a) {
            vec![0]
        } else if self.c.is_cover(a as i64 - 1) {
            vec![(self.r[a - 1] + 1) % self.n]
        } else {
            (0..self.n).collect()
        };
        for r in choices {
            self.r[a] = r;
            let ok = self.watch[a].iter().all(|&(gi, pi)| {
                let k = &self.pairs[gi][pi];
                let d = self.r[k.v] - self.r[k.u];
                let d2 = self.r[k.gv] - self.r[k.gu];
                d != 0 || d2 == 0
            });
            if ok {
                match self.dfs(a + 1) {
                    None => return None,
                    Some(Some(sol)) => return Some(Some(sol)),
                    Some(None) => {}
                }
            }
        }
        Some(None)
    }

    /// Bounds `lo <= T(v) − T(u) <= hi` for one pair under the current residues.
    fn t_bounds(&self, k: &PairCons) -> (i64, i64) {
        let r = self.r[k.v] - self.r[k.u];
        let r2 = self.r[k.gv] - self.r[k.gu];
        let lo = (r2 < 0) as i64 - (r < 0) as i64;
        let hi = (r > 0) as i64 - (r2 > 0) as i64;
        (lo, hi)
    }

    fn solve_quotients(&mut self) -> Option<Option<Vec<i64>>> {
        // Admissible 0/1 offsets per group.
        let mut options: Vec<Vec<Vec<i64>>> = Vec::new();
        for (gi, grp) in self.groups.iter().enumerate() {
            let idx: BTreeMap<usize, usize> = grp.iter().enumerate().map(|(i, (x, _))| (*x, i)).collect();
            let cons: Vec<(usize, usize, i64, i64)> = self.pairs[gi]
                .iter()
                .map(|k| {
                    let (lo, hi) = self.t_bounds(k);
                    (idx[&k.u], idx[&k.v], lo, hi)
                })
                .collect();
            if cons.iter().any(|c| c.2 > c.3) {
                return Some(None);
            }
            let mut found = Vec::new();
            let mut tau = vec![0i64; grp.len()];
            enumerate_tau(0, &mut tau, &cons, &mut found);
            if found.is_empty() {
                return Some(None);
            }
            options.push(found);
        }
        // Iterate the product of per-group choices.
        let mut choice = vec![0usize; options.len()];
        loop {
            self.used += 1;
            if self.used > self.budget {
                return None;
            }
            match self.solve_ilp(&options, &choice) {
                IlpOutcome::Solved { x, .. } => return Some(Some(self.positions(&x))),
                IlpOutcome::Infeasible => {}
                IlpOutcome::Budget => return None,
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Some(None);
                }
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Lower bound and forced value of the quotient step `Q(a+1) − Q(a)`.
    fn step(&self, a: usize) -> (i64, bool) {
        let (r0, r1) = (self.r[a], self.r[a + 1]);
        if self.c.is_cover(a as i64) {
            ((r0 == self.n - 1) as i64, true)
        } else {
            ((r1 <= r0) as i64, false)
        }
    }

    fn var_index(&self) -> (Vec<Option<usize>>, usize) {
        let q = self.c.q;
        let mut vi = vec![None; q.saturating_sub(1)];
        let mut k = 0;
        for a in 0..q.saturating_sub(1) {
            if self.block[a] == self.block[a + 1] && !self.step(a).1 {
                vi[a] = Some(k);
                k += 1;
            }
        }
        (vi, k)
    }

    /// Coefficients and constant of `Q(b) − Q(a)` (same block, a <= b).
    fn qdiff(&self, a: usize, b: usize, vi: &[Option<usize>], row: &mut [i64], sign: i64) -> i64 {
        let mut konst = 0;
        for s in a..b {
            konst += self.step(s).0;
            if let Some(j) = vi[s] {
                row[j] += sign;
            }
        }
        sign * konst
    }

    fn solve_ilp(&self, options: &[Vec<Vec<i64>>], choice: &[usize]) -> IlpOutcome {
        let (vi, nv) = self.var_index();
        let mut p = Ilp::new(nv);
        for (gi, grp) in self.groups.iter().enumerate() {
            let tau = &options[gi][choice[gi]];
            let (x0, gx0) = grp[0];
            for (i, &(x, gx)) in grp.iter().enumerate().skip(1) {
                // (Q(gx) − Q(gx0)) − (Q(x) − Q(x0)) = τ(x) − τ(x0)
                let mut row = vec![0i64; nv];
                let k1 = self.qdiff(gx0, gx, &vi, &mut row, 1);
                let k2 = self.qdiff(x0, x, &vi, &mut row, -1);
                p.add_eq(row, tau[i] - tau[0] - k1 - k2);
            }
        }
        // Height cap per block: n·Q(last) + R(last) <= cap.
        for w in self.starts.iter().enumerate() {
            let s = *w.1;
            let end = self.starts.get(w.0 + 1).copied().unwrap_or(self.c.q) - 1;
            let mut row = vec![0i64; nv];
            let k = self.qdiff(s, end, &vi, &mut row, 1);
            if row.iter().any(|v| *v != 0) {
                let room = (BigInt::from(self.cap.clone()) - BigInt::from(self.r[end])) / BigInt::from(self.n)
                    - BigInt::from(k);
                p.add_le(row, room);
            }
        }
        p.cost = vec![BigInt::one(); nv];
        p.solve(2_000)
    }

    fn positions(&self, x: &[BigInt]) -> Vec<i64> {
        let (vi, _) = self.var_index();
        let q = self.c.q;
        let mut pos = vec![0i64; q];
        let mut qv = 0i64;
        for a in 0..q {
            if self.starts.contains(&a) {
                qv = 0;
            } else {
                let (lb, _) = self.step(a - 1);
                qv += lb + vi[a - 1].map_or(0, |j| x[j].to_i64().expect("gap fits in i64"));
            }
            pos[a] = self.n * qv + self.r[a];
        }
        pos
    }
}

fn enumerate_tau(i: usize, tau: &mut Vec<i64>, cons: &[(usize, usize, i64, i64)], out: &mut Vec<Vec<i64>>) {
    if i == tau.len() {
        if tau.contains(&0) {
            out.push(tau.clone());
        }
        return;
    }
    for t in 0..2 {
        tau[i] = t;
        let ok = cons.iter().all(|&(u, v, lo, hi)| {
            if u.max(v) != i {
                return true;
            }
            let d = tau[v] - tau[u];
            lo <= d && d <= hi
        });
        if ok {
            enumerate_tau(i + 1, tau, cons, out);
        }
    }
}

/// Single-block convenience wrapper: a spacing embedding of `c` under
/// which every map in `fns` is n-periodic.
pub fn find_witness_embedding(fns: &[PartialFn], c: &CChain, n: i64, cap: Option<BigUint>, budget: u64) -> EmbeddingSearch {
    find_block_embedding(fns, c, &vec![0; c.q], &EmbedParams { n, cap, budget })
}
