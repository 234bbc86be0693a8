//! Property-based invariants over randomly generated instances: orders,
//! tables and fibre elements beyond the exhaustively checked fragments.

use eqcat::completions::eqc;
use eqcat::constructions::{equiv_closure, ClosureStrategy};
use eqcat::doctrine::{self, exists_along, Doc, Doctrine, Fib, PowerDoctrine};
use eqcat::kernel::{CatOps, Data, Mor, Ob};
use eqcat::lattice::Lattice;
use proptest::prelude::*;
use std::rc::Rc;

fn ph3() -> Doc {
    Rc::new(PowerDoctrine::new("ph3", Rc::new(Lattice::chain(3))))
}

fn arb_table(src: u32, dst: u32) -> impl Strategy<Value = Mor> {
    prop::collection::vec(0..dst, src as usize)
        .prop_map(move |t| Mor::map(Ob::Fin(src), Ob::Fin(dst), t))
}

fn arb_fib(n: usize, k: u8) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..k, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A randomly generated reflexive-transitively closed order yields
    /// tables satisfying the derived laws.
    #[test]
    fn derived_lattice_tables_obey_their_laws(bits in prop::collection::vec(any::<bool>(), 9)) {
        let n = 3usize;
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = (i == j) || (i < j && bits[i * n + j]);
            }
        }
        // transitive closure to make it an order
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        let names = (0..n).map(|i| format!("e{i}")).collect();
        if let Ok(l) = Lattice::from_order(names, leq) {
            l.validate().unwrap();
            for x in 0..n {
                for y in 0..n {
                    let m = l.and(x, y);
                    prop_assert!(l.le(m, x) && l.le(m, y));
                    for z in 0..n {
                        prop_assert_eq!(l.le(z, m), l.le(z, x) && l.le(z, y));
                    }
                }
            }
        }
    }

    /// Composition of random tables is associative.
    #[test]
    fn table_composition_associative(
        f in arb_table(3, 2),
        g in arb_table(2, 3),
        h in arb_table(3, 2),
    ) {
        let c = eqcat::corpus::finset();
        let l = c.compose(&h, &c.compose(&g, &f).unwrap()).unwrap();
        let r = c.compose(&c.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(l, r);
    }

    /// The pullback square commutes and its mediator is unique for random
    /// cospans.
    #[test]
    fn pullback_squares_commute(f in arb_table(3, 2), g in arb_table(2, 2)) {
        let c = eqcat::corpus::finset();
        let pb = c.pullback(&f, &g).unwrap();
        let l = c.compose(&f, &pb.to_left).unwrap();
        let r = c.compose(&g, &pb.to_right).unwrap();
        prop_assert_eq!(l, r);
    }

    /// The Galois law of the derived direct image, on random data.
    #[test]
    fn exists_along_galois(
        f in arb_table(3, 2),
        alpha in arb_fib(3, 3),
        beta in arb_fib(2, 3),
    ) {
        let d = ph3();
        let a = Fib::new(Ob::Fin(3), Data::Vals(alpha));
        let b = Fib::new(Ob::Fin(2), Data::Vals(beta));
        let ea = exists_along(d.as_ref(), &f, &a).unwrap();
        let pullback = d.reindex(&f, &b).unwrap();
        prop_assert_eq!(d.leq(&ea, &b), d.leq(&a, &pullback));
    }

    /// The least-equivalence closure is extensive, idempotent, minimal and
    /// strategy-independent on a three-point carrier (sampled rather than
    /// exhausted: the fibre has 3^9 relations).
    #[test]
    fn closure_laws_sampled(rho in arb_fib(9, 3)) {
        let d = ph3();
        let a = Ob::Fin(3);
        let sq = d.cat().product(&a, &a).unwrap();
        let r = Fib::new(sq.ob, Data::Vals(rho));
        let fx = equiv_closure(d.as_ref(), &a, &r, ClosureStrategy::Fixpoint).unwrap();
        prop_assert!(d.leq(&r, &fx));
        prop_assert!(doctrine::is_equivalence_relation(d.as_ref(), &a, &fx).unwrap());
        let again = equiv_closure(d.as_ref(), &a, &fx, ClosureStrategy::Fixpoint).unwrap();
        prop_assert!(doctrine::eq_fib(&again, &fx));
        let tr = equiv_closure(d.as_ref(), &a, &r, ClosureStrategy::Tripos).unwrap();
        prop_assert!(doctrine::eq_fib(&fx, &tr));
    }

    /// Reindexing in the completed doctrine does not depend on the chosen
    /// representative of an arrow class.
    #[test]
    fn completion_reindex_is_representative_independent(
        t1 in arb_table(2, 2),
        t2 in arb_table(2, 2),
        alpha in arb_fib(2, 3),
    ) {
        let p = ph3();
        let q = eqc(&p, "q", 1 << 16);
        let blob = Ob::rel(Ob::Fin(2), Data::Vals(vec![2, 2, 2, 2]));
        let f = Mor::new(blob.clone(), blob.clone(), t1.data.clone());
        let g = Mor::new(blob.clone(), blob.clone(), t2.data.clone());
        let cat = q.cat();
        prop_assume!(cat.equal_mor(&f, &g));
        let x = Fib::new(blob.clone(), Data::Vals(alpha));
        prop_assume!(doctrine::is_descent_datum(
            p.as_ref(),
            &Ob::Fin(2),
            &Fib::new(p.cat().product(&Ob::Fin(2), &Ob::Fin(2)).unwrap().ob, Data::Vals(vec![2,2,2,2])),
            &Fib::new(Ob::Fin(2), x.data.clone()),
        ).unwrap());
        let rf = q.reindex(&f, &x).unwrap();
        let rg = q.reindex(&g, &x).unwrap();
        prop_assert!(doctrine::eq_fib(&rf, &rg));
    }
}
