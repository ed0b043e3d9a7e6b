//! The ten acceptance criteria, one PASS/FAIL line each. Every count below is
//! an exact match; the only tolerance is the wall-clock bound on criterion 3.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use schreier::automorphism::aut_a;
use schreier::catalog::{Catalog, Payload};
use schreier::cleavage::{canonical_cleavage, enumerate_cleavages, extract_action, reconstruct, round_trip_b};
use schreier::cohomology::{h2, verify_exact_sequences, verify_h2_bijection, NModule};
use schreier::fibration::{analyze, check_closure_lemmas_on};
use schreier::generators;
use schreier::groth::groth;
use schreier::iso::find_isomorphism;
use schreier::suite::{is_regular_schreier, run_suite};
use schreier::util::pointed_count;
use schreier::{Elem, FiniteMonoid, MonoidHom};

const LEDGER_TIME_LIMIT: Duration = Duration::from_secs(60);
const MIN_CATALOG_HOMS: usize = 20;
const MAX_CATALOG_ORDER: usize = 12;
const ORACLE_AUT_ORDER: usize = 8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Catalog) -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hom(cat: &Catalog, id: &str) -> MonoidHom {
    match &cat.get(id).expect("catalog id").payload {
        Payload::Hom(h) => h.clone(),
        _ => panic!("{id} is not a hom"),
    }
}

fn quaternion(cat: &Catalog) -> Outcome {
    let Payload::Action(a) = &cat.get("quaternion_action").unwrap().payload else {
        return Err("quaternion_action missing".into());
    };
    let g = groth(a).map_err(|e| e.to_string())?;
    let q8 = Arc::new(generators::q8());
    ensure(g.underlying.order() == 8, || format!("order {}", g.underlying.order()))?;
    let iso = find_isomorphism(&g.underlying, &q8).ok_or("find_isomorphism found nothing")?;
    ensure(
        common::is_hom(&g.underlying, &q8, iso.map()) && iso.is_bijective(),
        || "returned map is not an isomorphism".into(),
    )?;
    ensure(common::isomorphic(&g.underlying, &q8), || "oracle disagrees".into())?;
    let r = analyze(&g.projection);
    let car = common::car(&g.projection);
    ensure(r.is_fibration && common::covers(&g.projection, &car), || "projection is not a fibration".into())?;
    Ok("order 8, isomorphic to Q8, projection is a fibration".into())
}

fn counterexample(cat: &Catalog) -> Outcome {
    let h = hom(cat, "c33_to_c3");
    let r = analyze(&h);
    let (p, c) = (common::pcar(&h), common::car(&h));
    ensure(r.pcar == p && r.car == c, || format!("analyze {:?}/{:?} oracle {p:?}/{c:?}", r.pcar, r.car))?;
    ensure(r.is_prefibration && !r.is_fibration, || "wrong classification".into())?;
    ensure(p.len() == 3 && c.len() == 1, || format!("|Pcar| {} |Car| {}", p.len(), c.len()))?;
    Ok("prefibration, not a fibration, |Pcar| = 3, |Car| = 1".into())
}

fn ledger(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let homs: Vec<_> = cat.homs().collect();
    ensure(homs.len() >= MIN_CATALOG_HOMS, || format!("only {} homs", homs.len()))?;
    ensure(
        homs.iter().all(|(_, h)| h.source().order() <= MAX_CATALOG_ORDER && h.target().order() <= MAX_CATALOG_ORDER),
        || "catalog hom too large".into(),
    )?;
    let mut checks = 0;
    for (id, h) in &homs {
        let r = analyze(h);
        ensure(r.pcar == common::pcar(h) && r.car == common::car(h), || format!("{id}: oracle disagrees"))?;
        let v = check_closure_lemmas_on(&r);
        checks += v.len();
        if let Some(f) = v.iter().find(|v| !v.passed) {
            return Err(format!("{id}: {f}"));
        }
    }
    let rows = run_suite(cat, &[], Some("fibration-analysis"), 0);
    checks += rows.rows.len();
    if let Some(f) = rows.failures().next() {
        return Err(format!("{}/{}: {:?}", f.subject, f.check, f.witness));
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= LEDGER_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{} homs, {checks} checks, 0 violations, {:.2}s", homs.len(), elapsed.as_secs_f64()))
}

fn round_trip_a(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for (id, h) in cat.homs() {
        if !common::covers(h, &common::pcar(h)) {
            continue;
        }
        let cl = canonical_cleavage(h).map_err(|e| format!("{id}: {e}"))?;
        let (g, iso) = reconstruct(&cl).map_err(|e| format!("{id}: {e}"))?;
        let m = h.source();
        let mut seen = vec![false; m.order()];
        for &y in iso.map() {
            seen[y] = true;
        }
        ensure(
            seen.iter().all(|&b| b)
                && common::is_hom(&g.underlying, m, iso.map())
                && g.underlying.elements().all(|x| h.apply(iso.apply(x)) == g.projection.apply(x)),
            || format!("{id}: not an isomorphism over N"),
        )?;
        n += 1;
    }
    Ok(format!("{n} prefibrations reconstructed"))
}

/// Independent search for η with both change-of-cleavage formulas.
fn related(before: &schreier::lax::LaxAction, after: &schreier::lax::LaxAction) -> bool {
    let (n, a) = (before.acting(), before.carrier());
    let units: Vec<Elem> = a.elements().filter(|&x| a.inverse(x).is_some()).collect();
    let k = n.order();
    let total = pointed_count(k, units.len()).unwrap();
    (0..total).any(|code| {
        let mut code = code as usize;
        let eta: Vec<Elem> = n
            .elements()
            .map(|b| {
                if b == n.identity() {
                    a.identity()
                } else {
                    let v = units[code % units.len()];
                    code /= units.len();
                    v
                }
            })
            .collect();
        let inv = |x: Elem| a.inverse(x).unwrap();
        let phi_ok = n.elements().all(|b| {
            a.elements().all(|x| after.phi(b, x) == a.product([inv(eta[b]), before.phi(b, x), eta[b]]))
        });
        let gamma_ok = n.elements().all(|p| {
            n.elements().all(|q| {
                after.gamma(p, q)
                    == a.product([inv(eta[n.mul(p, q)]), before.gamma(p, q), before.phi(q, eta[p]), eta[q]])
            })
        });
        phi_ok && gamma_ok
    })
}

fn round_trip_b_all(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for (id, a) in cat.actions() {
        let found = round_trip_b(a).map_err(|e| format!("{id}: {e}"))?;
        let g = groth(a).map_err(|e| e.to_string())?;
        let again = extract_action(&canonical_cleavage(&g.projection).map_err(|e| e.to_string())?);
        ensure(found.is_some() && related(a, &again), || format!("{id}: no η relates the actions"))?;
        n += 1;
    }
    Ok(format!("{n} actions"))
}

fn dichotomy(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for (id, h) in cat.homs() {
        let Ok(cl) = canonical_cleavage(h) else { continue };
        let act = extract_action(&cl);
        let a = act.carrier();
        let pseudo = act
            .acting()
            .elements()
            .all(|p| act.acting().elements().all(|q| a.inverse(act.gamma(p, q)).is_some()));
        let fib = common::covers(h, &common::car(h));
        ensure(pseudo == fib && act.is_pseudo() == analyze(h).is_fibration, || {
            format!("{id}: pseudo {pseudo} fibration {fib}")
        })?;
        n += 1;
    }
    Ok(format!("{n} prefibrations"))
}

fn h2_c2(_: &Catalog) -> Outcome {
    let c2 = Arc::new(generators::cyclic_group(2).unwrap());
    let m = Arc::new(NModule::trivial(&c2, &c2).unwrap());
    let h = h2(&m, true).map_err(|e| e.to_string())?;
    let oracle = common::Module {
        n: &c2,
        a: &c2,
        phi: vec![vec![0, 1], vec![0, 1]],
    };
    let cocycles = oracle.cocycles(true);
    let classes = oracle.class_count(&cocycles);
    ensure(h.classes.len() == 2 && classes == 2, || format!("h2 {} oracle {classes}", h.classes.len()))?;
    let b = verify_h2_bijection(&m, true).map_err(|e| e.to_string())?;
    ensure(b.congruence_classes == 2 && b.verdicts.iter().all(|v| v.passed), || format!("{:?}", b.verdicts))?;
    // congruence classes of the extensions built from every oracle cocycle
    let exts: Vec<_> = cocycles
        .iter()
        .map(|g| {
            let act = Arc::new(m.to_action(g));
            groth(&act).unwrap()
        })
        .collect();
    let mut reps: Vec<usize> = Vec::new();
    for (i, e) in exts.iter().enumerate() {
        let new = reps.iter().all(|&j| {
            let f = &exts[j];
            !common::congruent(
                &e.underlying,
                e.projection.map(),
                e.inclusion.map(),
                &f.underlying,
                f.projection.map(),
                f.inclusion.map(),
            )
        });
        if new {
            reps.push(i);
        }
    }
    ensure(reps.len() == 2, || format!("oracle finds {} congruence classes", reps.len()))?;
    let c4 = generators::cyclic_group(4).unwrap();
    let v4 = generators::klein4();
    let kinds: Vec<(bool, bool)> = reps
        .iter()
        .map(|&i| (common::isomorphic(&exts[i].underlying, &c4), common::isomorphic(&exts[i].underlying, &v4)))
        .collect();
    ensure(kinds.contains(&(true, false)) && kinds.contains(&(false, true)), || format!("{kinds:?}"))?;
    Ok("2 classes, 2 congruence classes (C4 and Klein four)".into())
}

fn aut_oracle(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for (id, h) in cat.homs() {
        if h.source().order() > ORACLE_AUT_ORDER || !is_regular_schreier(h) {
            continue;
        }
        let cl = canonical_cleavage(h).map_err(|e| e.to_string())?;
        let mut param: Vec<Vec<Elem>> = aut_a(&cl).map_err(|e| e.to_string())?.into_iter().map(|t| t.psi).collect();
        param.sort();
        let brute = common::kernel_cartesian_automorphisms(h);
        ensure(param == brute, || format!("{id}: parametric {} brute force {}", param.len(), brute.len()))?;
        n += 1;
    }
    ensure(n > 0, || "no regular extension of order at most 8".into())?;
    Ok(format!("{n} extensions agree"))
}

/// N × A with the trivial action: trivial φ and a cocycle cohomologous to 1.
fn is_trivial_extension(h: &MonoidHom) -> bool {
    if !is_regular_schreier(h) {
        return false;
    }
    let cl = canonical_cleavage(h).unwrap();
    let act = extract_action(&cl);
    let n = act.acting();
    let a = act.carrier();
    let trivial_phi = n.elements().all(|b| a.elements().all(|x| act.phi(b, x) == x));
    let m = common::Module {
        n,
        a,
        phi: n.elements().map(|_| a.elements().collect()).collect(),
    };
    let gamma: Vec<Elem> = act.gamma_rows().into_iter().flatten().collect();
    let one = vec![a.identity(); n.order() * n.order()];
    trivial_phi && m.class_count(&[gamma, one]) == 1
}

fn exact(cat: &Catalog) -> Outcome {
    let mut ids: Vec<String> = vec!["q8_over_klein4".into(), "c4_over_c2".into()];
    ids.extend(cat.homs().filter(|(_, h)| is_trivial_extension(h)).map(|(id, _)| id.to_string()));
    ensure(ids.len() > 2, || "no trivial extensions in the catalog".into())?;
    for id in &ids {
        let h = hom(cat, id);
        let cl = canonical_cleavage(&h).map_err(|e| e.to_string())?;
        let r = verify_exact_sequences(&cl, 0).map_err(|e| format!("{id}: {e}"))?;
        if let Some(f) = r.verdicts.iter().find(|v| !v.passed) {
            return Err(format!("{id}: {f}"));
        }
        let all = enumerate_cleavages(&h, usize::MAX).map_err(|e| e.to_string())?.len();
        ensure(r.counts.cleavages_checked == all, || format!("{id}: swept {} of {all}", r.counts.cleavages_checked))?;
    }
    Ok(format!("{} extensions: {}", ids.len(), ids.join(", ")))
}

fn z1_oracle(n: &FiniteMonoid, a: &FiniteMonoid, phi: impl Fn(Elem, Elem) -> Elem) -> usize {
    let units: Vec<Elem> = a.elements().filter(|&x| a.inverse(x).is_some()).collect();
    let total = pointed_count(n.order(), units.len()).unwrap() as usize;
    (0..total)
        .filter(|&code| {
            let mut code = code;
            let xi: Vec<Elem> = n
                .elements()
                .map(|b| {
                    if b == n.identity() {
                        a.identity()
                    } else {
                        let v = units[code % units.len()];
                        code /= units.len();
                        v
                    }
                })
                .collect();
            n.elements()
                .all(|p| n.elements().all(|q| xi[n.mul(p, q)] == a.mul(phi(q, xi[p]), xi[q])))
        })
        .count()
}

fn z1(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for (id, h) in cat.homs() {
        if !is_regular_schreier(h) {
            continue;
        }
        let cl = canonical_cleavage(h).map_err(|e| e.to_string())?;
        let r = verify_exact_sequences(&cl, 0).map_err(|e| format!("{id}: {e}"))?;
        if let Some(f) = r.verdicts.iter().find(|v| v.check.starts_with("z1-") && !v.passed) {
            return Err(format!("{id}: {f}"));
        }
        let act = extract_action(&cl);
        let count = z1_oracle(act.acting(), act.carrier(), |b, x| act.phi(b, x));
        ensure(r.counts.z1 == count && r.counts.fixing_both == count, || {
            format!("{id}: z1 {} automorphisms {} oracle {count}", r.counts.z1, r.counts.fixing_both)
        })?;
        n += 1;
    }
    let h = hom(cat, "c2_over_c2_trivial");
    let r = verify_exact_sequences(&canonical_cleavage(&h).unwrap(), 0).map_err(|e| e.to_string())?;
    ensure(r.counts.z1 == 2 && r.counts.fixing_both == 2, || format!("C2/C2: {} and {}", r.counts.z1, r.counts.fixing_both))?;
    Ok(format!("{n} regular extensions; C2/C2 has 2 on both sides"))
}

fn main() -> ExitCode {
    let cat = Catalog::builtin();
    let criteria: [Criterion; 10] = [
        ("quaternion reproduction", quaternion),
        ("counterexample reproduction", counterexample),
        ("lemma ledger", ledger),
        ("round trip A", round_trip_a),
        ("round trip B", round_trip_b_all),
        ("lax/pseudo dichotomy", dichotomy),
        ("H2 classification C2/C2", h2_c2),
        ("automorphism oracle", aut_oracle),
        ("exact sequences", exact),
        ("Z1 isomorphism", z1),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f(&cat) {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
