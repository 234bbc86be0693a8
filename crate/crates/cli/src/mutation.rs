//! The seeded-wrong-witness regression suite: each mutation plants a
//! deliberately broken witness and passes exactly when the corresponding
//! oracle rejects it with a counterexample. The seed only affects which
//! instances the broken witnesses are planted on.

use anyhow::{bail, Result};
use eqcat::completions::eqc;
use eqcat::constructions::{equiv_closure, ClosureStrategy};
use eqcat::doctrine::{self, Doc, Doctrine, Fib};
use eqcat::kernel::{Data, Fragment, Mor, Ob, StructureWitness};
use eqcat::lattice::Lattice;
use eqcat::oracle::{check_universal, Cx, Outcome, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::rc::Rc;

const BUDGET: usize = 1 << 16;

fn p2() -> Doc {
    Rc::new(eqcat::doctrine::PowerDoctrine::new(
        "p2",
        Rc::new(Lattice::bool2()),
    ))
}

fn ph3() -> Doc {
    Rc::new(eqcat::doctrine::PowerDoctrine::new(
        "ph3",
        Rc::new(Lattice::chain(3)),
    ))
}

fn detected(name: &str, rejected: bool, witness: Cx) -> Outcome {
    let mut out = Outcome::new();
    if rejected {
        out.pass();
    } else {
        out.fail(Cx::one("mutation", name).push("reason", "broken witness went undetected"));
    }
    let _ = witness;
    out.finish()
}

/// A product whose mediator procedure swaps the cone legs.
fn bad_pairing(rng: &mut ChaCha8Rng) -> Outcome {
    let cat = eqcat::corpus::finset();
    let m = rng.gen_range(2..=3u32);
    let n = rng.gen_range(2..=3u32);
    let p = cat.product(&Ob::Fin(m), &Ob::Fin(n)).unwrap();
    let mut w = StructureWitness::of_product(&cat, &p);
    let cat2 = cat.clone();
    let p2 = p.clone();
    w.mediator = Some(Rc::new(move |cone: &[Mor]| {
        // swapped pairing: wrong unless the legs coincide
        let swapped = cat2.product(&cone[1].dst, &cone[0].dst)?;
        let tw = cat2.pair(&swapped, &cone[1], &cone[0])?;
        let table = tw.table().unwrap().to_vec();
        Ok(Mor::map(cone[0].src.clone(), p2.ob.clone(), table))
    }));
    let out = check_universal(&cat, &w, &Fragment::sized(2));
    detected(
        "bad_pairing",
        matches!(out.verdict, Verdict::Fails(_)),
        Cx::one("instance", format!("{m} x {n}")),
    )
}

/// A classifying relation with only one direction of the biconditional: not
/// symmetric, hence not an internal equivalence relation.
fn bad_classifier(rng: &mut ChaCha8Rng) -> Outcome {
    let p = if rng.gen_bool(0.5) { p2() } else { ph3() };
    let q = eqc(&p, "q", BUDGET);
    let (omega0, member) = p.classifier().unwrap();
    let cat = p.cat();
    let sq = cat.product(&omega0, &omega0).unwrap();
    let m1 = p.reindex(&sq.pr1, &member).unwrap();
    let m2 = p.reindex(&sq.pr2, &member).unwrap();
    let lambda_wrong = p.implies(&m1, &m2).unwrap();
    let bad = Ob::rel(omega0, lambda_wrong.data);
    let ok = !doctrine::is_equivalence_relation(q.as_ref(), &bad, &q.diagonal(&bad).unwrap())
        .unwrap_or(false);
    detected(
        "bad_classifier",
        ok,
        Cx::one("doctrine", p.name()),
    )
}

/// A sum relation missing its second component: fails reflexivity on the
/// second injection's image.
fn bad_coproduct(rng: &mut ChaCha8Rng) -> Outcome {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let pick = rng.gen_range(1..=2u32);
    let a = Ob::rel(Ob::Fin(pick), p.diagonal(&Ob::Fin(pick)).unwrap().data);
    let b = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    let (ba, rho) = q.eqc_cat().parts(&a).unwrap();
    let (bb, _) = q.eqc_cat().parts(&b).unwrap();
    let base_c = p.cat().coproduct(&ba, &bb).unwrap();
    let i1 = eqcat::kernel::prod_mor(p.cat().as_ref(), &base_c.in1, &base_c.in1).unwrap();
    // deliberately drop the second disjunct
    let broken = doctrine::exists_along(p.as_ref(), &i1.mor, &rho).unwrap();
    let laws = doctrine::relation_laws(p.as_ref(), &base_c.ob, &broken).unwrap();
    let ok = !(laws.0 && laws.1 && laws.2);
    detected(
        "bad_coproduct",
        ok,
        Cx::one("instance", format!("{a} + {b}")),
    )
}

/// A closure that skips the symmetrization seed: not symmetric on an
/// asymmetric input.
fn bad_closure(rng: &mut ChaCha8Rng) -> Outcome {
    let d = ph3();
    let a = Ob::Fin(2);
    let sq = d.cat().product(&a, &a).unwrap();
    // an asymmetric seed: relate (0, 1) at a random nonzero strength
    let s = rng.gen_range(1..=2u8);
    let rho = Fib::new(sq.ob.clone(), Data::Vals(vec![0, s, 0, 0]));
    // broken closure: reflexivize and compose, never symmetrize
    let delta = d.diagonal(&a).unwrap();
    let mut r = d.join(&rho, &delta).unwrap();
    loop {
        let rr = doctrine::rel_compose(d.as_ref(), &a, &a, &a, &r, &r).unwrap();
        let next = d.join(&r, &rr).unwrap();
        if doctrine::eq_fib(&next, &r) {
            break;
        }
        r = next;
    }
    let broken_is_equivalence = doctrine::is_equivalence_relation(d.as_ref(), &a, &r).unwrap();
    // the genuine closure is an equivalence relation and differs
    let good = equiv_closure(d.as_ref(), &a, &rho, ClosureStrategy::Fixpoint).unwrap();
    let ok = !broken_is_equivalence && !doctrine::eq_fib(&good, &r);
    detected("bad_closure", ok, Cx::one("seed_strength", s.to_string()))
}

pub fn run(name: &str, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<&str> = match name {
        "all" => vec!["bad_pairing", "bad_classifier", "bad_coproduct", "bad_closure"],
        single => vec![single],
    };
    // the seed also permutes the order the mutations run in
    for i in (1..names.len()).rev() {
        let j = rng.gen_range(0..=i);
        names.swap(i, j);
    }
    let mut out = Outcome::new();
    for n in names {
        let o = match n {
            "bad_pairing" => bad_pairing(&mut rng),
            "bad_classifier" => bad_classifier(&mut rng),
            "bad_coproduct" => bad_coproduct(&mut rng),
            "bad_closure" => bad_closure(&mut rng),
            other => bail!("unknown mutation `{other}`"),
        };
        out.merge(o);
    }
    Ok(out.finish())
}
