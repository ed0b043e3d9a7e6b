//! Runs every property check over a catalog, grouped by scope.

use serde::Serialize;

use crate::automorphism::{aut_a, compute_c, oracle_check, rho};
use crate::catalog::Catalog;
use crate::cleavage::{canonical_cleavage, enumerate_cleavages, extract_action, reconstruct, round_trip_b, transport, CleavageChange};
use crate::cohomology::{verify_exact_sequences, verify_h2_bijection, h2};
use crate::error::Error;
use crate::fibration::{analyze, check_closure_lemmas_on, compose_check, product_check, pullback_check};
use crate::groth::{groth, groth_projection_report};
use crate::hom::MonoidHom;
use crate::lax::validate_lax;
use crate::verdict::Verdict;

pub const SCOPES: [&str; 8] = [
    "monoid-core",
    "fibration-analysis",
    "lax-action",
    "grothendieck",
    "cleavage-transport",
    "automorphism",
    "cohomology-extensions",
    "cli-toolkit",
];

/// Cross-map checks (composites, products, pullbacks) only run on pairs whose
/// resulting source order stays within this bound.
pub const PAIR_ORDER_LIMIT: usize = 64;
/// The brute-force automorphism oracle runs up to this source order.
pub const ORACLE_ORDER_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub scope: String,
    pub subject: String,
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    fn add(&mut self, scope: &str, subject: &str, verdicts: impl IntoIterator<Item = Verdict>) {
        for v in verdicts {
            self.rows.push(SuiteRow {
                scope: scope.into(),
                subject: subject.into(),
                check: v.check,
                passed: v.passed,
                witness: v.witness,
            });
        }
    }

    fn error(&mut self, scope: &str, subject: &str, check: &str, e: &Error) {
        self.add(scope, subject, [Verdict::fail(check, e.to_string())]);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteRow> {
        self.rows.iter().filter(|r| !r.passed)
    }

    /// Verdicts keyed as `scope/subject/check`.
    pub fn verdicts(&self) -> Vec<Verdict> {
        self.rows
            .iter()
            .map(|r| Verdict {
                check: format!("{}/{}/{}", r.scope, r.subject, r.check),
                passed: r.passed,
                witness: r.witness.clone(),
            })
            .collect()
    }
}

fn in_scope(scope: Option<&str>, name: &str) -> bool {
    scope.is_none_or(|s| s == "all" || s == name)
}

/// Runs the scope (or every scope) over the catalog. Entries that failed to
/// load are passed in `broken` and reported as failures.
pub fn run_suite(cat: &Catalog, broken: &[(String, Error)], scope: Option<&str>, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for (id, e) in broken {
        rep.error("monoid-core", id, "entry-valid", e);
    }
    if in_scope(scope, "monoid-core") {
        monoid_core(cat, &mut rep);
    }
    if in_scope(scope, "fibration-analysis") {
        fibration_analysis(cat, &mut rep);
    }
    if in_scope(scope, "lax-action") {
        lax_action(cat, &mut rep);
    }
    if in_scope(scope, "grothendieck") {
        grothendieck(cat, &mut rep);
    }
    if in_scope(scope, "cleavage-transport") {
        cleavage_transport(cat, &mut rep);
    }
    if in_scope(scope, "automorphism") {
        automorphism(cat, &mut rep);
    }
    if in_scope(scope, "cohomology-extensions") {
        cohomology(cat, &mut rep, seed);
    }
    if in_scope(scope, "cli-toolkit") {
        toolkit(cat, &mut rep);
    }
    rep
}

fn monoid_core(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "monoid-core";
    for (id, m) in cat.monoids() {
        let v = match m.audit() {
            Ok(()) => Verdict::pass("monoid-axioms"),
            Err(e) => Verdict::fail("monoid-axioms", e.to_string()),
        };
        rep.add(S, id, [v]);
    }
    for (id, h) in cat.homs() {
        let v = match h.audit() {
            Ok(()) => Verdict::pass("hom-axioms"),
            Err(e) => Verdict::fail("hom-axioms", e.to_string()),
        };
        let kernel = h.kernel();
        let k = Verdict::check("kernel-is-submonoid", kernel.contains(h.source().identity()), || {
            "identity missing from kernel".into()
        });
        rep.add(S, id, [v, k]);
    }
}

fn fibration_analysis(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "fibration-analysis";
    let homs: Vec<(&str, &MonoidHom)> = cat.homs().collect();
    for &(id, h) in &homs {
        rep.add(S, id, check_closure_lemmas_on(&analyze(h)));
    }
    for &(i, f) in &homs {
        for &(j, g) in &homs {
            let subject = format!("{i}+{j}");
            if f.target().same_table(g.source()) {
                match compose_check(f, g) {
                    Ok((_, v)) => rep.add(S, &format!("{j}.{i}"), v),
                    Err(e) => rep.error(S, &format!("{j}.{i}"), "composite", &e),
                }
            }
            if i <= j && f.source().order() * g.source().order() <= PAIR_ORDER_LIMIT {
                match product_check(f, g) {
                    Ok(v) => rep.add(S, &format!("{i}x{j}"), v),
                    Err(e) => rep.error(S, &format!("{i}x{j}"), "product", &e),
                }
            }
            if i != j
                && f.target().same_table(g.target())
                && f.source().order() * g.source().order() <= PAIR_ORDER_LIMIT
            {
                match pullback_check(f, g) {
                    Ok(v) => rep.add(S, &subject, v),
                    Err(e) => rep.error(S, &subject, "pullback", &e),
                }
            }
        }
    }
}

fn lax_action(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "lax-action";
    for (id, a) in cat.actions() {
        rep.add(S, id, validate_lax(a).verdicts);
    }
    for (id, h) in cat.homs() {
        if let Ok(cl) = canonical_cleavage(h) {
            let act = extract_action(&cl);
            let r = validate_lax(&act);
            let fib = analyze(h).is_fibration;
            rep.add(S, id, r.verdicts);
            rep.add(
                S,
                id,
                [Verdict::check("pseudo-iff-fibration", act.is_pseudo() == fib, || {
                    format!("pseudo {} fibration {fib}", act.is_pseudo())
                })],
            );
        }
    }
}

fn grothendieck(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "grothendieck";
    for (id, a) in cat.actions() {
        match groth(a) {
            Ok(g) => {
                let (r, v) = groth_projection_report(&g);
                rep.add(S, id, v);
                rep.add(
                    S,
                    id,
                    [Verdict::check("pseudo-iff-fibration", a.is_pseudo() == r.is_fibration, || {
                        format!("pseudo {} fibration {}", a.is_pseudo(), r.is_fibration)
                    })],
                );
            }
            Err(e) => rep.error(S, id, "groth", &e),
        }
    }
}

fn cleavage_transport(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "cleavage-transport";
    for (id, h) in cat.homs() {
        let r = analyze(h);
        if !r.is_prefibration {
            continue;
        }
        let v = match canonical_cleavage(h).and_then(|cl| reconstruct(&cl)) {
            Ok(_) => Verdict::pass("reconstruct-iso-over-base"),
            Err(e) => Verdict::fail("reconstruct-iso-over-base", e.to_string()),
        };
        rep.add(S, id, [v]);
        match enumerate_cleavages(h, 64) {
            Ok(all) => {
                let base = &all[0];
                for other in &all[1..] {
                    match CleavageChange::between(base, other) {
                        Ok(change) => rep.add(S, id, [transport(&change).2]),
                        Err(e) => rep.error(S, id, "change-of-cleavage", &e),
                    }
                }
            }
            Err(e) if e.is_size_limit() => {}
            Err(e) => rep.error(S, id, "enumerate-cleavages", &e),
        }
    }
    for (id, a) in cat.actions() {
        let v = match round_trip_b(a) {
            Ok(Some(_)) => Verdict::pass("round-trip-action"),
            Ok(None) => Verdict::fail("round-trip-action", "no η relates the actions"),
            Err(e) => Verdict::fail("round-trip-action", e.to_string()),
        };
        rep.add(S, id, [v]);
    }
}

fn automorphism(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "automorphism";
    for (id, h) in cat.homs() {
        if !analyze(h).is_prefibration {
            continue;
        }
        let Ok(cl) = canonical_cleavage(h) else { continue };
        let res = aut_a(&cl).and_then(|auts| Ok((compute_c(&cl)?, auts)));
        match res {
            Ok((c, auts)) => {
                rep.add(S, id, c.audit());
                rep.add(S, id, rho(&auts, &c, &cl).verdicts);
            }
            Err(e) => rep.error(S, id, "aut-enumeration", &e),
        }
        if h.source().order() <= ORACLE_ORDER_LIMIT {
            match oracle_check(&cl) {
                Ok(v) => rep.add(S, id, [v]),
                Err(e) => rep.error(S, id, "aut-oracle-agrees", &e),
            }
        }
    }
}

/// Regular Schreier extensions: commutative kernel, fibration.
pub fn is_regular_schreier(h: &MonoidHom) -> bool {
    let r = analyze(h);
    r.is_fibration && canonical_cleavage(h).is_ok_and(|cl| cl.kernel().is_commutative())
}

fn cohomology(cat: &Catalog, rep: &mut SuiteReport, seed: u64) {
    const S: &str = "cohomology-extensions";
    for (id, m) in cat.modules() {
        for regular in [true, false] {
            let subject = format!("{id}{}", if regular { "/regular" } else { "" });
            match verify_h2_bijection(m, regular) {
                Ok(r) => rep.add(S, &subject, r.verdicts),
                Err(e) if e.is_size_limit() => {
                    // classification alone still runs
                    if let Err(e) = h2(m, regular) {
                        rep.error(S, &subject, "h2", &e);
                    }
                }
                Err(e) => rep.error(S, &subject, "h2-bijection", &e),
            }
        }
    }
    for (id, h) in cat.homs() {
        if !is_regular_schreier(h) {
            continue;
        }
        match canonical_cleavage(h).and_then(|cl| verify_exact_sequences(&cl, seed)) {
            Ok(r) => rep.add(S, id, r.verdicts),
            Err(e) => rep.error(S, id, "exact-sequences", &e),
        }
    }
}

fn toolkit(cat: &Catalog, rep: &mut SuiteReport) {
    const S: &str = "cli-toolkit";
    let files = cat.files();
    let ids_unique = {
        let mut ids: Vec<&str> = cat.entries().iter().map(|e| e.id.as_str()).collect();
        ids.dedup();
        ids.len() == cat.entries().len()
    };
    rep.add(
        S,
        "catalog",
        [
            Verdict::check("render-deterministic", files == cat.files(), || "two renders differ".into()),
            Verdict::check("ids-unique", ids_unique, || "duplicate id".into()),
        ],
    );
}
