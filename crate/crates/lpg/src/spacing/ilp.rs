//! Small exact integer programs: `min c·x` subject to equalities and `<=`
//! rows, `0 <= x <= upper`, x integral.
//!
//! Dense two-phase simplex over exact rationals with Bland's rule, wrapped in
//! depth-first branch and bound. Systems here have a few dozen variables at
//! most, so clarity wins over speed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, Default)]
pub struct Ilp {
    pub nvars: usize,
    pub eq: Vec<(Vec<BigInt>, BigInt)>,
    pub le: Vec<(Vec<BigInt>, BigInt)>,
    pub upper: Vec<Option<BigInt>>,
    /// Nonnegative objective coefficients (minimized).
    pub cost: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlpOutcome {
    /// Optimal (or, when the node budget ran out after an incumbent was
    /// found, merely feasible) integral point.
    Solved { x: Vec<BigInt>, optimal: bool },
    Infeasible,
    /// Budget exhausted before anything was decided.
    Budget,
}

impl Ilp {
    pub fn new(nvars: usize) -> Self {
        Ilp { nvars, upper: vec![None; nvars], cost: vec![BigInt::zero(); nvars], ..Default::default() }
    }

    pub fn add_eq(&mut self, row: Vec<i64>, rhs: i64) {
        self.eq.push((row.into_iter().map(BigInt::from).collect(), BigInt::from(rhs)));
    }

    pub fn add_le(&mut self, row: Vec<i64>, rhs: BigInt) {
        self.le.push((row.into_iter().map(BigInt::from).collect(), rhs));
    }

    /// Branch and bound with at most `node_budget` LP solves.
    pub fn solve(&self, node_budget: u64) -> IlpOutcome {
        assert!(self.cost.iter().all(|c| !c.is_negative()), "objective must be nonnegative");
        if !self.equalities_integrally_solvable() {
            return IlpOutcome::Infeasible;
        }
        let lo = vec![BigInt::zero(); self.nvars];
        let hi = self.upper.clone();
        let mut st = Bb { ilp: self, nodes: 0, budget: node_budget, best: None, exhausted: false };
        st.branch(lo, hi);
        match (st.best, st.exhausted) {
            (Some((x, _)), ex) => IlpOutcome::Solved { x, optimal: !ex },
            (None, true) => IlpOutcome::Budget,
            (None, false) => IlpOutcome::Infeasible,
        }
    }

    /// Whether `A x = b` has any integral solution (sign constraints
    /// ignored), via column Hermite reduction.
    pub fn equalities_integrally_solvable(&self) -> bool {
        let m = self.eq.len();
        if m == 0 {
            return true;
        }
        let k = self.nvars;
        let mut a: Vec<Vec<BigInt>> = self.eq.iter().map(|(r, _)| r.clone()).collect();
        let b: Vec<BigInt> = self.eq.iter().map(|(_, r)| r.clone()).collect();
        // Reduce A to column echelon form with unimodular column operations,
        // then solve the triangular system for integer unknowns.
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut col = 0;
        for row in 0..m {
            if col >= k {
                break;
            }
            loop {
                // Euclid across columns col.. on this row.
                let nz: Vec<usize> = (col..k).filter(|&j| !a[row][j].is_zero()).collect();
                if nz.len() <= 1 {
                    if let Some(&j) = nz.first() {
                        for r in a.iter_mut() {
                            r.swap(col, j);
                        }
                        pivots.push((row, col));
                        col += 1;
                    }
                    break;
                }
                let jmin = *nz.iter().min_by_key(|&&j| a[row][j].abs()).unwrap();
                for &j in &nz {
                    if j != jmin {
                        let f = a[row][j].div_floor(&a[row][jmin]);
                        for r in a.iter_mut() {
                            let t = &r[jmin] * &f;
                            r[j] -= t;
                        }
                    }
                }
            }
        }
        // Forward substitution on the echelon columns.
        let mut z: Vec<BigInt> = Vec::new();
        let mut pi = 0;
        for row in 0..m {
            let mut acc = BigInt::zero();
            for (j, zj) in z.iter().enumerate() {
                acc += &a[row][j] * zj;
            }
            let rest = &b[row] - acc;
            if pi < pivots.len() && pivots[pi].0 == row {
                let p = &a[row][pivots[pi].1];
                if !rest.is_multiple_of(p) {
                    return false;
                }
                z.push(rest / p);
                pi += 1;
            } else if !rest.is_zero() {
                return false;
            }
        }
        true
    }
}

struct Bb<'a> {
    ilp: &'a Ilp,
    nodes: u64,
    budget: u64,
    best: Option<(Vec<BigInt>, Q)>,
    exhausted: bool,
}

impl Bb<'_> {
    fn branch(&mut self, lo: Vec<BigInt>, hi: Vec<Option<BigInt>>) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        let Some((x, obj)) = solve_lp(self.ilp, &lo, &hi) else { return };
        if let Some((_, b)) = &self.best {
            if &obj >= b {
                return;
            }
        }
        match x.iter().position(|v| !v.is_integer()) {
            None => {
                let xi = x.iter().map(|v| v.to_integer()).collect();
                self.best = Some((xi, obj));
            }
            Some(j) => {
                let fl = x[j].floor().to_integer();
                let mut hi_down = hi.clone();
                hi_down[j] = Some(fl.clone());
                self.branch(lo.clone(), hi_down);
                let mut lo_up = lo;
                lo_up[j] = fl + 1;
                if hi[j].as_ref().is_none_or(|h| &lo_up[j] <= h) {
                    self.branch(lo_up, hi);
                }
            }
        }
    }
}

/// Solve the LP relaxation with bounds `lo <= x <= hi`; returns the optimal
/// point and objective, or `None` if infeasible.
pub(crate) fn solve_lp(ilp: &Ilp, lo: &[BigInt], hi: &[Option<BigInt>]) -> Option<(Vec<Q>, Q)> {
    let k = ilp.nvars;
    for j in 0..k {
        if let Some(h) = &hi[j] {
            if h < &lo[j] {
                return None;
            }
        }
    }
    // Shift x = lo + x'. Rows: equalities, then <= rows and upper bounds
    // with one slack each.
    let mut rows: Vec<(Vec<Q>, Q, bool)> = Vec::new(); // (coeffs over x', rhs, needs_slack)
    let shift = |row: &[BigInt], rhs: &BigInt| -> Q {
        let mut r = Q::from_integer(rhs.clone());
        for j in 0..k {
            r -= Q::from_integer(&row[j] * &lo[j]);
        }
        r
    };
    for (row, rhs) in &ilp.eq {
        rows.push((row.iter().cloned().map(Q::from_integer).collect(), shift(row, rhs), false));
    }
    for (row, rhs) in &ilp.le {
        rows.push((row.iter().cloned().map(Q::from_integer).collect(), shift(row, rhs), true));
    }
    for j in 0..k {
        if let Some(h) = &hi[j] {
            let mut r = vec![Q::zero(); k];
            r[j] = Q::one();
            rows.push((r, Q::from_integer(h - &lo[j]), true));
        }
    }
    let nslack = rows.iter().filter(|r| r.2).count();
    let m = rows.len();
    let ncols = k + nslack + m; // structural, slacks, artificials
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut s = 0;
    for (i, (coef, rhs, slack)) in rows.into_iter().enumerate() {
        let mut r = vec![Q::zero(); ncols + 1];
        r[..k].clone_from_slice(&coef);
        if slack {
            r[k + s] = Q::one();
            s += 1;
        }
        r[ncols] = rhs;
        if r[ncols].is_negative() {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
        }
        r[k + nslack + i] = Q::one();
        tab.push(r);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| k + nslack + i).collect();
    // Phase 1.
    let mut c1 = vec![Q::zero(); ncols];
    for c in c1.iter_mut().skip(k + nslack) {
        *c = Q::one();
    }
    run_simplex(&mut tab, &mut basis, &c1, ncols);
    let infeas: Q = basis.iter().enumerate().filter(|(_, &b)| b >= k + nslack).map(|(i, _)| tab[i][ncols].clone()).sum();
    if infeas.is_positive() {
        return None;
    }
    // Drive artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.len() {
        if basis[i] >= k + nslack {
            if let Some(j) = (0..k + nslack).find(|&j| !tab[i][j].is_zero()) {
                pivot(&mut tab, &mut basis, i, j);
            } else {
                tab.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    // Phase 2 over structural and slack columns only.
    let mut c2 = vec![Q::zero(); ncols];
    for j in 0..k {
        c2[j] = Q::from_integer(ilp.cost[j].clone());
    }
    run_simplex(&mut tab, &mut basis, &c2, k + nslack);
    let mut x: Vec<Q> = lo.iter().cloned().map(Q::from_integer).collect();
    for (i, &b) in basis.iter().enumerate() {
        if b < k {
            x[b] += tab[i][ncols].clone();
        }
    }
    let obj = (0..k).map(|j| Q::from_integer(ilp.cost[j].clone()) * &x[j]).sum();
    Some((x, obj))
}

fn pivot(tab: &mut [Vec<Q>], basis: &mut [usize], r: usize, c: usize) {
    let p = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        *v /= &p;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
    }
    basis[r] = c;
}

/// Minimize `cost` over columns `< allowed`; the problem is bounded here
/// because all costs are nonnegative.
fn run_simplex(tab: &mut [Vec<Q>], basis: &mut [usize], cost: &[Q], allowed: usize) {
    let rhs = tab.first().map_or(0, |r| r.len() - 1);
    loop {
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut d = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !tab[i][j].is_zero() && !cost[b].is_zero() {
                    d -= &cost[b] * &tab[i][j];
                }
            }
            d.is_negative()
        });
        let Some(j) = entering else { return };
        let mut best: Option<(usize, Q)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][rhs] / &tab[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        match best {
            Some((i, _)) => pivot(tab, basis, i, j),
            None => return,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn trivial_systems() {
        let mut p = Ilp::new(2);
        p.add_eq(vec![1, 0], 0);
        p.cost = vec![bi(1), bi(1)];
        assert_eq!(p.solve(100), IlpOutcome::Solved { x: vec![bi(0), bi(0)], optimal: true });
        let mut p = Ilp::new(1);
        p.add_eq(vec![1], -1);
        assert_eq!(p.solve(100), IlpOutcome::Infeasible);
    }

    #[test]
    fn parity_obstruction_is_detected_without_branching() {
        let mut p = Ilp::new(2);
        p.add_eq(vec![2, -2], 1);
        assert!(!p.equalities_integrally_solvable());
        assert_eq!(p.solve(10), IlpOutcome::Infeasible);
    }

    #[test]
    fn branching_finds_integer_optimum() {
        // min x + y s.t. 2x + 3y = 7 → (2, 1).
        let mut p = Ilp::new(2);
        p.add_eq(vec![2, 3], 7);
        p.cost = vec![bi(1), bi(1)];
        assert_eq!(p.solve(1000), IlpOutcome::Solved { x: vec![bi(2), bi(1)], optimal: true });
    }

    #[test]
    fn upper_bounds_and_le_rows() {
        let mut p = Ilp::new(2);
        p.add_eq(vec![1, -1], 3);
        p.upper = vec![Some(bi(2)), None];
        assert_eq!(p.solve(100), IlpOutcome::Infeasible);
        let mut p = Ilp::new(2);
        p.add_le(vec![-1, -1], bi(-5));
        p.cost = vec![bi(2), bi(1)];
        assert_eq!(p.solve(100), IlpOutcome::Solved { x: vec![bi(0), bi(5)], optimal: true });
    }
}
