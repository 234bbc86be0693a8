use eqcat::completions::{comprehension_completion, eqc};
use eqcat::constructions::{check_coproduct, check_equalizer, coequalizer_eqc, slice_exponential};
use eqcat::corpus;
use eqcat::doctrine::{verify, Doc, Doctrine, Property};
use eqcat::kernel::{CatOps, Fragment, StructureWitness};
use eqcat::lattice::Lattice;
use eqcat::oracle::{check_slice_exp, check_universal};
use std::rc::Rc;
use std::time::Instant;

fn main() {
    let h = Rc::new(Lattice::chain(3));
    let p: Doc = corpus::power_doctrine("ph3", h);
    let comp: Doc = comprehension_completion(&p, "phc");
    let q = eqc(&comp, "qc", 1 << 16);
    let cat = q.cat();
    let frag = Fragment::sized(2).with_budgets(1 << 12, 1 << 12);
    let obs = cat.objects(&frag);
    println!("objects: {}", obs.len());

    let t = Instant::now();
    let w = StructureWitness::of_terminal(&cat);
    let o = check_universal(&cat, &w, &frag);
    println!("terminal: {} {:?}", o.verdict.holds(), t.elapsed());

    let t = Instant::now();
    for a in &obs {
        for b in &obs {
            let pr = cat.product(a, b).unwrap();
            let w = StructureWitness::of_product(&cat, &pr);
            let o = check_universal(&cat, &w, &frag);
            assert!(o.verdict.holds());
        }
    }
    println!("products: {:?}", t.elapsed());

    let t = Instant::now();
    let mut n = 0;
    for a in &obs {
        for b in &obs {
            let hs = cat.hom(a, b, frag.hom_budget).unwrap();
            for f in &hs {
                for g in &hs {
                    let o = check_equalizer(&q, f, g, &frag);
                    assert!(o.verdict.holds(), "{:?}", o.verdict);
                    n += 1;
                }
            }
        }
    }
    println!("equalizers: {n} in {:?}", t.elapsed());

    let t = Instant::now();
    for a in &obs {
        for b in &obs {
            let o = check_coproduct(&q, a, b, &frag);
            assert!(o.verdict.holds(), "{a}+{b}: {:?}", o.verdict);
        }
    }
    println!("coproducts: {:?}", t.elapsed());

    let t = Instant::now();
    let mut n = 0;
    for a in &obs {
        for b in &obs {
            let hs = cat.hom(a, b, frag.hom_budget).unwrap();
            for f in &hs {
                for g in &hs {
                    let w = coequalizer_eqc(&q, f, g).unwrap();
                    let o = check_universal(&cat, &w, &frag);
                    assert!(o.verdict.holds(), "{:?}", o.verdict);
                    n += 1;
                }
            }
        }
    }
    println!("coequalizers: {n} in {:?}", t.elapsed());

    let t = Instant::now();
    let r = verify(q.as_ref(), Property::StrongClassifier, &frag);
    println!("classifier: {} {:?}", r.holds(), t.elapsed());

    let t = Instant::now();
    let mut n = 0u64;
    for target in &obs {
        let mut arrows = Vec::new();
        for x in &obs {
            arrows.extend(cat.hom(x, target, frag.hom_budget).unwrap());
        }
        for f in &arrows {
            for g in &arrows {
                let (se, _) = slice_exponential(&q, f, g).unwrap();
                let mut inner = frag.clone();
                inner.include.push(se.w.clone());
                inner.include.push(se.z.clone());
                let o = check_slice_exp(&cat, f, g, &se, false, &inner);
                assert!(o.verdict.holds(), "{:?}", o.verdict);
                n += 1;
            }
        }
    }
    println!("exponentials: {n} in {:?}", t.elapsed());
}
