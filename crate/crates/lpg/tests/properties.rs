use std::collections::BTreeMap;

use lpg::decide::{decide_fnz, decide_lpn, verify_against_clauses, verify_witness, DecideConfig, Mode, Status};
use lpg::diagram::{check_n_periodic, check_n_periodic_map, check_n_periodic_map_definitional};
use lpg::fnz::{extend_partial, PeriodicFn};
use lpg::lexfn::{LexFn, LexPoint};
use lpg::oracle::{random_lexfn, random_periodic_fn, search_counterexample_fnz, search_counterexample_lex};
use lpg::search::{all_compatible_surjections, Universe};
use lpg::spacing::{find_short_1transfer, find_short_ntransfer, nu, rho, ZChain};
use lpg::term::{delta_epsilon, parse, to_intensional};
use lpg::wreath::WreathElement;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pfn() -> impl Strategy<Value = PeriodicFn> {
    (1..=3i64, any::<u64>()).prop_map(|(n, s)| random_periodic_fn(n, 3 * n, &mut ChaCha8Rng::seed_from_u64(s)))
}

fn pfn_pair() -> impl Strategy<Value = (PeriodicFn, PeriodicFn, PeriodicFn)> {
    (1..=3i64, any::<u64>()).prop_map(|(n, s)| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        (random_periodic_fn(n, 3 * n, &mut r), random_periodic_fn(n, 3 * n, &mut r), random_periodic_fn(n, 3 * n, &mut r))
    })
}

fn lex_triple() -> impl Strategy<Value = (LexFn, LexFn, LexFn)> {
    (1..=2i64, any::<u64>()).prop_map(|(n, s)| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        (random_lexfn(n, &mut r), random_lexfn(n, &mut r), random_lexfn(n, &mut r))
    })
}

fn sample_points(fs: &[&LexFn]) -> Vec<LexPoint> {
    let mut js: Vec<_> = fs
        .iter()
        .flat_map(|f| f.tilde().points().iter().map(|p| p.0.clone()).chain(f.components().keys().cloned()))
        .collect();
    js.extend((-6..=6).map(|t| lpg::lexfn::q_frac(t, 2)));
    js.into_iter().flat_map(|j| (-3..3).map(move |z| LexPoint::new(j.clone(), z))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fnz_pregroup_laws(f in pfn()) {
        let id = PeriodicFn::identity(f.n());
        let (l, r) = (f.linv(), f.rinv());
        prop_assert!(l.compose(&f).unwrap().leq(&id));
        prop_assert!(id.leq(&f.compose(&l).unwrap()));
        prop_assert!(f.compose(&r).unwrap().leq(&id));
        prop_assert!(id.leq(&r.compose(&f).unwrap()));
        prop_assert_eq!(f.compose(&l).unwrap().compose(&f).unwrap(), f.clone());
        prop_assert_eq!(l.compose(&f).unwrap().compose(&l).unwrap(), l.clone());
        prop_assert_eq!(l.rinv(), f.clone());
        prop_assert_eq!(r.linv(), f.clone());
        prop_assert_eq!(f.iter_inv(2 * f.n()), f.clone());
        for m in -3..=3 {
            prop_assert_eq!(f.iter_inv(m), f.iter_inv_slow(m));
        }
        for x in -8..8 {
            prop_assert_eq!(f.iter_inv(2).eval(x), f.eval(x - 1) + 1);
        }
    }

    #[test]
    fn fnz_residuation(f in pfn(), a in -10i64..10, b in -10i64..10) {
        prop_assert_eq!(f.eval(a) <= b, a <= f.rinv().eval(b));
        prop_assert_eq!(a <= f.eval(b), f.linv().eval(a) <= b);
    }

    #[test]
    fn fnz_lattice_and_distributivity((f, g, h) in pfn_pair()) {
        let j = f.join(&g).unwrap();
        let m = f.meet(&g).unwrap();
        prop_assert!(f.leq(&j) && g.leq(&j) && m.leq(&f) && m.leq(&g));
        prop_assert_eq!(f.join(&g.meet(&h).unwrap()).unwrap(), j.meet(&f.join(&h).unwrap()).unwrap());
        // composition distributes over joins on both sides
        prop_assert_eq!(h.compose(&j).unwrap(), h.compose(&f).unwrap().join(&h.compose(&g).unwrap()).unwrap());
        prop_assert_eq!(j.compose(&h).unwrap(), f.compose(&h).unwrap().join(&g.compose(&h).unwrap()).unwrap());
        let (s, star) = f.decompose();
        prop_assert_eq!(PeriodicFn::recompose(s, &star), f.clone());
    }

    #[test]
    fn extension_recovers_restrictions(f in pfn(), dom in prop::collection::btree_set(-12i64..12, 1..6)) {
        let h: BTreeMap<i64, i64> = dom.iter().map(|&x| (x, f.eval(x))).collect();
        prop_assert!(check_n_periodic_map(&h, f.n()));
        prop_assert!(check_n_periodic_map_definitional(&h, f.n()));
        let g = extend_partial(&h, f.n(), false).unwrap();
        prop_assert!(h.iter().all(|(&x, &y)| g.eval(x) == y));
    }

    #[test]
    fn periodicity_checks_agree(pairs in prop::collection::btree_map(-8i64..8, -8i64..8, 1..5), n in 1i64..4) {
        let mut h = BTreeMap::new();
        let mut last = i64::MIN;
        for (x, y) in pairs {
            last = last.max(y);
            h.insert(x, last);
        }
        prop_assert_eq!(check_n_periodic_map(&h, n), check_n_periodic_map_definitional(&h, n));
        prop_assert_eq!(check_n_periodic_map(&h, n), extend_partial(&h, n, false).is_ok());
    }

    #[test]
    fn lexfn_pregroup_laws((f, g, h) in lex_triple()) {
        let id = LexFn::identity(f.n());
        let l = f.linv();
        prop_assert!(l.compose(&f).unwrap().exact_leq(&id));
        prop_assert!(id.exact_leq(&f.compose(&l).unwrap()));
        prop_assert!(f.compose(&f.rinv()).unwrap().exact_leq(&id));
        prop_assert_eq!(l.rinv(), f.clone());
        prop_assert_eq!(f.iter_inv(2 * f.n()), f.clone());
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.compose(&h).unwrap(), f.compose(&g.compose(&h).unwrap()).unwrap());
        let j = f.join(&g).unwrap();
        prop_assert!(f.exact_leq(&j) && g.exact_leq(&j));
        prop_assert!(f.meet(&g).unwrap().exact_leq(&f));
        for p in sample_points(&[&f, &g]) {
            prop_assert_eq!(fg.eval(&p), f.eval(&g.eval(&p)));
            prop_assert_eq!(j.eval(&p), f.eval(&p).max(g.eval(&p)));
        }
    }

    #[test]
    fn wreath_matches_lexfn(s in any::<u64>(), n in 1i64..=2) {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let el = |r: &mut ChaCha8Rng| {
            use rand::Rng;
            let h = r.gen_range(-2..=2);
            let comps = (0..r.gen_range(0..3)).map(|_| (r.gen_range(-3..=3), random_periodic_fn(n, n, r))).collect();
            WreathElement::new(n, h, comps).unwrap()
        };
        let (a, b) = (el(&mut r), el(&mut r));
        let (fa, fb) = (a.iso_to_lexfn(), b.iso_to_lexfn());
        prop_assert_eq!(a.multiply(&b).iso_to_lexfn(), fa.compose(&fb).unwrap());
        prop_assert_eq!(a.join(&b).iso_to_lexfn(), fa.join(&fb).unwrap());
        prop_assert_eq!(a.meet(&b).iso_to_lexfn(), fa.meet(&fb).unwrap());
        prop_assert_eq!(a.rinv().iso_to_lexfn(), fa.rinv());
        prop_assert_eq!(a.leq(&b), fa.exact_leq(&fb));
        prop_assert_eq!(WreathElement::iso_from_lexfn(&fa), Some(a));
    }

    #[test]
    fn short_embeddings_transfer_periodicity(s in any::<u64>(), n in 1i64..=3, k in 1usize..=3) {
        use rand::Rng;
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let f = random_periodic_fn(n, 3 * n, &mut r);
        let dom: Vec<i64> = (0..k).map(|_| r.gen_range(-20..20)).collect();
        let mut pts = dom.clone();
        pts.extend(dom.iter().map(|&x| f.eval(x)));
        let c = ZChain::with_inherited_covers(pts);
        let idx = |v: i64| c.pts.iter().position(|&p| p == v).unwrap() as i64;
        let g: BTreeMap<i64, i64> = dom.iter().map(|&x| (idx(x), idx(f.eval(x)))).collect();
        let e = find_short_ntransfer(&c, n);
        prop_assert!(e.is_valid_for(&c.cchain()));
        prop_assert!(BigUint::from(e.height() as u64) <= nu(c.pts.len() as u64, n as u64));
        prop_assert!(check_n_periodic(&g, &e, n));
        let e1 = find_short_1transfer(&c);
        prop_assert!(BigUint::from(e1.height() as u64) <= rho(c.pts.len() as u64));
    }
}

fn clause_text() -> impl Strategy<Value = String> {
    let factor = (prop::sample::select(vec!["x", "y"]), -1i64..=1).prop_map(|(v, e)| format!("{v}^({e})"));
    let word = prop::collection::vec(factor, 1..=2).prop_map(|fs| fs.join(" "));
    prop::collection::vec(word, 1..=2).prop_map(|ws| format!("1 <= {}", ws.join(" | ")))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The diagram procedures agree with direct evaluation: witnesses
    /// verify, valid verdicts survive random search, and F_n(ℤ) failures
    /// are LP_n failures.
    #[test]
    fn decision_procedures_agree(text in clause_text(), n in 1i64..=2) {
        let cs = to_intensional(&parse(&text).unwrap());
        let cfg = DecideConfig { embed_budget: 20_000, ..DecideConfig::capped(30_000) };
        let fz = decide_fnz(&cs, n, &cfg).unwrap();
        let lp = decide_lpn(&cs, n, &cfg).unwrap();
        for v in [&fz, &lp] {
            if let Some(w) = &v.witness {
                prop_assert!(cs.iter().any(|c| verify_witness(c, w) == Ok(true)));
            }
            prop_assert_eq!(v.status == Status::Fails, v.witness.is_some());
        }
        if fz.status == Status::Valid {
            prop_assert_eq!(fz.mode, Mode::Complete);
            prop_assert!(cs.iter().all(|c| search_counterexample_fnz(c, n, 3_000, 11).is_none()));
        }
        if fz.status == Status::Fails {
            prop_assert!(lp.status != Status::Valid);
        }
        if lp.status == Status::Valid {
            prop_assert!(fz.status != Status::Fails);
        }
    }

    /// With the random probe off, refutations come from realized diagrams.
    #[test]
    fn diagram_refutations_verify(text in clause_text()) {
        let cs = to_intensional(&parse(&text).unwrap());
        let cfg = DecideConfig { probe: 0, embed_budget: 20_000, ..DecideConfig::capped(10_000) };
        for v in [decide_fnz(&cs, 1, &cfg).unwrap(), decide_lpn(&cs, 1, &cfg).unwrap()] {
            prop_assert!(!v.stats.probed);
            if let Some(w) = &v.witness {
                prop_assert_eq!(verify_against_clauses(&cs, w), Ok(true));
            }
            if v.status == Status::Valid {
                prop_assert!(cs.iter().all(|c| search_counterexample_lex(c, 1, 500, 5).is_none()));
            }
        }
    }

    #[test]
    fn surjections_restrict_to_delta(text in clause_text()) {
        let c = to_intensional(&parse(&text).unwrap()).remove(0);
        let u = Universe::new(&c);
        prop_assert_eq!(u.len(), delta_epsilon(&c).len());
        if u.len() <= 9 {
            for cs in all_compatible_surjections(&u) {
                prop_assert!(cs.diagram(&u).is_valid());
                prop_assert_eq!(cs.phi.iter().max().map_or(0, |m| m + 1), cs.q());
            }
        }
    }
}
