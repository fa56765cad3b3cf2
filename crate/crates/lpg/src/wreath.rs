//! The wreath product ℤ ≀_{ℤ} F_n(ℤ): integer translations acting on the
//! index chain ℤ, with finitely supported families of periodic maps.
//!
//! `(h₁, n₁)(h₂, n₂) = (h₁ + h₂, j ↦ n₁(j + h₂) ∘ n₂(j))`, ordered by
//! `h₁ < h₂`, or `h₁ = h₂` and `n₁ <= n₂` componentwise.

use std::collections::{BTreeMap, BTreeSet};

use crate::fnz::{FnzError, PeriodicFn};
use crate::lexfn::{q, LexFn, PLBijection};
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    n: i64,
    h: i64,
    comps: BTreeMap<i64, PeriodicFn>,
}

impl WreathElement {
    pub fn identity(n: i64) -> Self {
        WreathElement { n, h: 0, comps: BTreeMap::new() }
    }

    pub fn new(n: i64, h: i64, comps: BTreeMap<i64, PeriodicFn>) -> Result<Self, FnzError> {
        if let Some(f) = comps.values().find(|f| f.n() != n) {
            return Err(FnzError::PeriodMismatch(n, f.n()));
        }
        Ok(WreathElement { n, h, comps: comps.into_iter().filter(|(_, f)| !f.is_identity()).collect() })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn comps(&self) -> &BTreeMap<i64, PeriodicFn> {
        &self.comps
    }

    pub fn comp(&self, j: i64) -> PeriodicFn {
        self.comps.get(&j).cloned().unwrap_or_else(|| PeriodicFn::identity(self.n))
    }

    /// `(h*j, n(j)(m))`.
    pub fn act(&self, j: i64, m: i64) -> (i64, i64) {
        (j + self.h, self.comp(j).eval(m))
    }

    /// `(n ⊗ h)(j) = n(h*j)`.
    pub fn shift_comps(comps: &BTreeMap<i64, PeriodicFn>, h: i64) -> BTreeMap<i64, PeriodicFn> {
        comps.iter().map(|(j, f)| (j - h, f.clone())).collect()
    }

    pub fn multiply(&self, b: &WreathElement) -> WreathElement {
        assert_eq!(self.n, b.n, "period mismatch");
        let keys: BTreeSet<i64> = b.comps.keys().copied().chain(self.comps.keys().map(|k| k - b.h)).collect();
        let comps = keys
            .into_iter()
            .map(|j| (j, self.comp(j + b.h).compose(&b.comp(j)).expect("same n")))
            .filter(|(_, f)| !f.is_identity())
            .collect();
        WreathElement { n: self.n, h: self.h + b.h, comps }
    }

    fn support(&self, b: &WreathElement) -> BTreeSet<i64> {
        self.comps.keys().chain(b.comps.keys()).copied().collect()
    }

    pub fn leq(&self, b: &WreathElement) -> bool {
        self.h < b.h || (self.h == b.h && self.support(b).into_iter().all(|j| self.comp(j).leq(&b.comp(j))))
    }

    fn lattice(&self, b: &WreathElement, meet: bool) -> WreathElement {
        assert_eq!(self.n, b.n, "period mismatch");
        // h₁*j < h₂*j for every j exactly when h₁ < h₂.
        if self.h != b.h {
            let self_lower = self.h < b.h;
            return if self_lower == meet { self.clone() } else { b.clone() };
        }
        let comps = self
            .support(b)
            .into_iter()
            .map(|j| {
                let (x, y) = (self.comp(j), b.comp(j));
                (j, if meet { x.meet(&y) } else { x.join(&y) }.expect("same n"))
            })
            .filter(|(_, f)| !f.is_identity())
            .collect();
        WreathElement { n: self.n, h: self.h, comps }
    }

    pub fn meet(&self, b: &WreathElement) -> WreathElement {
        self.lattice(b, true)
    }

    pub fn join(&self, b: &WreathElement) -> WreathElement {
        self.lattice(b, false)
    }

    /// `(h, n)^ℓ = (h⁻¹, n^ℓ ⊗ h⁻¹)`.
    pub fn linv(&self) -> WreathElement {
        let comps = self.comps.iter().map(|(j, f)| (j + self.h, f.linv())).collect();
        WreathElement { n: self.n, h: -self.h, comps }
    }

    pub fn rinv(&self) -> WreathElement {
        let comps = self.comps.iter().map(|(j, f)| (j + self.h, f.rinv())).collect();
        WreathElement { n: self.n, h: -self.h, comps }
    }

    pub fn iter_inv(&self, m: i64) -> WreathElement {
        let mut a = self.clone();
        for _ in 0..m.unsigned_abs() {
            a = if m > 0 { a.linv() } else { a.rinv() };
        }
        a
    }

    /// The same map on ℚ ×→ ℤ, with the index chain ℤ sitting inside ℚ.
    pub fn iso_to_lexfn(&self) -> LexFn {
        let comps = self.comps.iter().map(|(j, f)| (q(*j), f.clone())).collect();
        LexFn::new(self.n, PLBijection::translation(q(self.h)), comps).expect("same n")
    }

    /// Inverse of [`iso_to_lexfn`](Self::iso_to_lexfn) on its image: the
    /// global part must be an integer translation and the support integral.
    pub fn iso_from_lexfn(f: &LexFn) -> Option<WreathElement> {
        let t = f.tilde().as_translation()?;
        if !t.is_integer() {
            return None;
        }
        let mut comps = BTreeMap::new();
        for (j, c) in f.components() {
            if !j.is_integer() {
                return None;
            }
            comps.insert(j.to_integer().to_i64()?, c.clone());
        }
        Some(WreathElement { n: f.n(), h: t.to_integer().to_i64()?, comps })
    }
}

/// For an acting map `h` that is not invertible (here an element of
/// F_n(ℤ) acting on the index chain), the would-be inverse formula
/// `(h, n)^ℓ = (h^ℓ, n^ℓ ⊗ h^ℓ)` sends `(h, n)` under `ℓ` then `r` to
/// components `j ↦ n(h^ℓ(h(j)))`. Returns that index for each `j`.
pub fn lr_roundtrip_index(h: &PeriodicFn, j: i64) -> i64 {
    h.linv().eval(h.eval(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexfn::LexPoint;

    fn w(h: i64, comps: &[(i64, Vec<i64>)]) -> WreathElement {
        let n = comps.first().map_or(2, |c| c.1.len() as i64);
        WreathElement::new(n, h, comps.iter().map(|(j, v)| (*j, PeriodicFn::new(n, v.clone()).unwrap())).collect())
            .unwrap()
    }

    #[test]
    fn identity_laws() {
        let a = w(1, &[(0, vec![4, 4]), (3, vec![-1, 1])]);
        let id = WreathElement::identity(2);
        assert_eq!(id.multiply(&a), a);
        assert_eq!(a.multiply(&id), a);
        assert_eq!(id.linv(), id);
        assert!(a.leq(&a));
    }

    #[test]
    fn pregroup_inequalities() {
        let a = w(1, &[(0, vec![4, 4]), (3, vec![-1, 1])]);
        let id = WreathElement::identity(2);
        assert!(a.linv().multiply(&a).leq(&id));
        assert!(id.leq(&a.multiply(&a.linv())));
        assert!(a.multiply(&a.rinv()).leq(&id));
        assert!(id.leq(&a.rinv().multiply(&a)));
        assert_eq!(a.iter_inv(2).h(), a.h());
        assert_eq!(a.iter_inv(4), a);
    }

    #[test]
    fn join_by_cases() {
        let a = w(0, &[(0, vec![1, 1])]);
        let b = w(0, &[(0, vec![0, 2]), (1, vec![2, 3])]);
        let j = a.join(&b);
        assert_eq!(j.comp(0).vals(), &[1, 2]);
        assert_eq!(j.comp(1).vals(), &[2, 3]);
        let c = w(1, &[]);
        assert_eq!(a.join(&c), c);
        assert_eq!(a.meet(&c), a);
    }

    #[test]
    fn lexfn_agreement() {
        let a = w(1, &[(0, vec![4, 4]), (3, vec![-1, 1])]);
        let b = w(-2, &[(1, vec![0, 2])]);
        let f = a.iso_to_lexfn();
        for j in -3..5 {
            for m in -3..3 {
                let (x, y) = a.act(j, m);
                assert_eq!(f.eval(&LexPoint::new(q(j), m)), LexPoint::new(q(x), y));
            }
        }
        assert_eq!(a.multiply(&b).iso_to_lexfn(), f.compose(&b.iso_to_lexfn()).unwrap());
        assert_eq!(a.linv().iso_to_lexfn(), f.linv());
        assert_eq!(WreathElement::iso_from_lexfn(&f), Some(a));
    }

    #[test]
    fn non_invertible_action_breaks_lr_roundtrip() {
        let h = PeriodicFn::new(2, vec![0, 0]).unwrap();
        let n = |j: i64| PeriodicFn::translation(2, j);
        let moved: Vec<i64> = (-4..4).filter(|&j| n(lr_roundtrip_index(&h, j)) != n(j)).collect();
        assert!(!moved.is_empty());
        assert!((-4..4).all(|j| lr_roundtrip_index(&h, j) <= j));
    }
}
