//! Cleavages of a prefibration and the lax action they induce.
//!
//! A cleavage picks one precartesian `κ(n)` in each fiber with `κ(1) = 1`.
//! Every `x` then factors uniquely as `x = κ(σx) ξ(x)` with `ξ(x)` in the
//! kernel `A`. From `κ` and `ξ` one reads off
//! `φ_n(a) = ξ(a κ(n))` and `γ_{m,n} = ξ(κ(m) κ(n))`, and `(m, a) ↦ κ(m) a`
//! identifies the Grothendieck construction with `M`.
//!
//! Kernel elements are reported with their position in the sorted kernel, the
//! numbering of [`Submonoid::to_monoid`](crate::monoid::Submonoid::to_monoid).

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::{analyze, CartesianReport};
use crate::groth::{groth, GrothMonoid};
use crate::hom::MonoidHom;
use crate::lax::{LaxAction, LaxHom};
use crate::monoid::{Elem, FiniteMonoid};
use crate::util::{pointed_count, PointedMaps};
use crate::verdict::Verdict;

#[derive(Debug, Clone)]
pub struct Cleavage {
    hom: MonoidHom,
    kernel: Arc<FiniteMonoid>,
    /// kernel positions -> source elements
    embed: MonoidHom,
    kappa: Vec<Elem>,
    /// `xi[x]` as a kernel position
    xi: Vec<Elem>,
}

#[derive(Serialize)]
struct CleavageJson {
    kappa: Vec<Elem>,
    kappa_names: Vec<String>,
    xi: Vec<Elem>,
    kernel: Vec<Elem>,
}

fn first_uncovered(r: &CartesianReport) -> Option<Elem> {
    r.fiber_index
        .iter()
        .position(|fiber| !fiber.iter().any(|&x| r.in_pcar(x)))
}

impl Cleavage {
    /// Validates `κ` and computes the induced cocleavage.
    pub fn new(hom: &MonoidHom, kappa: Vec<Elem>) -> Result<Self> {
        let r = analyze(hom);
        Self::with_report(&r, kappa)
    }

    fn with_report(r: &CartesianReport, kappa: Vec<Elem>) -> Result<Self> {
        let hom = &r.hom;
        if let Some(n) = first_uncovered(r) {
            return Err(Error::NotPrefibration { n });
        }
        let (m, nmon) = (hom.source(), hom.target());
        if kappa.len() != nmon.order() {
            return Err(Error::InvalidCleavage(format!("κ has {} entries", kappa.len())));
        }
        if kappa[nmon.identity()] != m.identity() {
            return Err(Error::InvalidCleavage("κ(1) != 1".into()));
        }
        for n in nmon.elements() {
            let k = kappa[n];
            if k >= m.order() || hom.apply(k) != n || !r.in_pcar(k) {
                return Err(Error::InvalidCleavage(format!("κ({n}) is not precartesian over {n}")));
            }
        }
        let (kernel, embed) = hom.kernel().to_monoid();
        let xi = m
            .elements()
            .map(|x| {
                let k = kappa[hom.apply(x)];
                let mut found = kernel.elements().filter(|&a| m.mul(k, embed.apply(a)) == x);
                let a = found.next();
                match (a, found.next()) {
                    (Some(a), None) => Ok(a),
                    _ => Err(Error::falsified("cocleavage-unique", format!("element {x}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cleavage {
            hom: hom.clone(),
            kernel,
            embed,
            kappa,
            xi,
        })
    }

    pub fn hom(&self) -> &MonoidHom {
        &self.hom
    }

    /// The kernel `A` as a monoid in its own right.
    pub fn kernel(&self) -> &Arc<FiniteMonoid> {
        &self.kernel
    }

    /// Embedding `A -> M`.
    pub fn embed(&self) -> &MonoidHom {
        &self.embed
    }

    pub fn kappa(&self) -> &[Elem] {
        &self.kappa
    }

    /// `ξ(x)` as a kernel position.
    pub fn xi(&self, x: Elem) -> Elem {
        self.xi[x]
    }

    pub fn xi_table(&self) -> &[Elem] {
        &self.xi
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m = self.hom.source();
        serde_json::to_value(CleavageJson {
            kappa: self.kappa.clone(),
            kappa_names: self.kappa.iter().map(|&k| m.name(k)).collect(),
            xi: self.xi.clone(),
            kernel: self.embed.map().to_vec(),
        })
        .expect("cleavage serializes")
    }

    /// `κ · η`, where `η(n)` is a unit of `A` given as a kernel position.
    pub fn twist(&self, eta: &[Elem]) -> Result<Cleavage> {
        let change = CleavageChange::new(self, eta.to_vec())?;
        Ok(change.to)
    }
}

impl PartialEq for Cleavage {
    fn eq(&self, other: &Self) -> bool {
        self.hom == other.hom && self.kappa == other.kappa
    }
}

/// Least-index precartesian in each fiber, with `κ(1) = 1`.
pub fn canonical_cleavage(sigma: &MonoidHom) -> Result<Cleavage> {
    let r = analyze(sigma);
    canonical_from_report(&r)
}

pub fn canonical_from_report(r: &CartesianReport) -> Result<Cleavage> {
    if let Some(n) = first_uncovered(r) {
        return Err(Error::NotPrefibration { n });
    }
    let (m, n) = (r.hom.source(), r.hom.target());
    let kappa = n
        .elements()
        .map(|b| {
            if b == n.identity() {
                m.identity()
            } else {
                *r.fiber_index[b].iter().find(|&&x| r.in_pcar(x)).expect("covered fiber")
            }
        })
        .collect();
    Cleavage::with_report(r, kappa)
}

/// Units of `A` as kernel positions, sorted.
pub fn kernel_units(cl: &Cleavage) -> Vec<Elem> {
    cl.kernel.elements().filter(|&a| cl.kernel.is_unit(a)).collect()
}

/// Every cleavage, as `canonical · η` over all pointed `η: N -> A^×`.
pub fn enumerate_cleavages(sigma: &MonoidHom, limit: usize) -> Result<Vec<Cleavage>> {
    let canonical = canonical_cleavage(sigma)?;
    let units = kernel_units(&canonical);
    let n = sigma.target();
    let count = pointed_count(n.order(), units.len()).unwrap_or(u128::MAX);
    if count > limit as u128 {
        return Err(Error::SizeLimit {
            what: "cleavage enumeration".into(),
            requested: count,
            limit: limit as u128,
        });
    }
    let identity = canonical.kernel.identity();
    PointedMaps::new(n.order(), n.identity(), identity, &units)
        .map(|eta| canonical.twist(&eta))
        .collect()
}

/// Two cleavages of the same map with `to.κ(n) = from.κ(n) η(n)`.
#[derive(Debug, Clone)]
pub struct CleavageChange {
    pub from: Cleavage,
    pub to: Cleavage,
    /// kernel positions, all units
    pub eta: Vec<Elem>,
}

impl CleavageChange {
    pub fn new(from: &Cleavage, eta: Vec<Elem>) -> Result<Self> {
        let (a, n) = (&from.kernel, from.hom.target());
        if eta.len() != n.order() || eta.iter().any(|&e| e >= a.order() || !a.is_unit(e)) {
            return Err(Error::InvalidCleavage("η must map N into the units of A".into()));
        }
        if eta[n.identity()] != a.identity() {
            return Err(Error::InvalidCleavage("η(1) != 1".into()));
        }
        let m = from.hom.source();
        let kappa = n
            .elements()
            .map(|b| m.mul(from.kappa[b], from.embed.apply(eta[b])))
            .collect();
        let to = Cleavage::new(&from.hom, kappa)?;
        Ok(CleavageChange {
            from: from.clone(),
            to,
            eta,
        })
    }

    /// The unique `η` relating two cleavages of the same map.
    pub fn between(from: &Cleavage, to: &Cleavage) -> Result<Self> {
        if from.hom != to.hom {
            return Err(Error::Composability("cleavages of different maps".into()));
        }
        let eta = to.kappa.iter().map(|&k| from.xi[k]).collect();
        let change = CleavageChange::new(from, eta)?;
        if change.to != *to {
            return Err(Error::falsified("cleavage-torsor", "η does not reproduce the target cleavage"));
        }
        Ok(change)
    }
}

/// `φ_n(a) = ξ(a κ(n))`, `γ_{m,n} = ξ(κ(m) κ(n))`.
pub fn extract_action(cl: &Cleavage) -> LaxAction {
    let (m, n) = (cl.hom.source(), cl.hom.target());
    let a = &cl.kernel;
    let (no, ao) = (n.order(), a.order());
    let mut phi = Vec::with_capacity(ao * no);
    for x in a.elements() {
        let ex = cl.embed.apply(x);
        for b in n.elements() {
            phi.push(cl.xi[m.mul(ex, cl.kappa[b])]);
        }
    }
    let gamma = (0..no * no)
        .map(|i| cl.xi[m.mul(cl.kappa[i / no], cl.kappa[i % no])])
        .collect();
    LaxAction::from_flat(Arc::clone(n), Arc::clone(a), phi, gamma)
}

/// The Grothendieck construction of the extracted action and the
/// isomorphism `(m, a) ↦ κ(m) a` onto the source of `σ`.
pub fn reconstruct(cl: &Cleavage) -> Result<(GrothMonoid, MonoidHom)> {
    let g = groth(&Arc::new(extract_action(cl)))?;
    let m = cl.hom.source();
    let map = g
        .underlying
        .elements()
        .map(|x| {
            let (b, a) = g.decode(x);
            m.mul(cl.kappa[b], cl.embed.apply(a))
        })
        .collect();
    let iso = MonoidHom::new(Arc::clone(&g.underlying), Arc::clone(m), map)
        .map_err(|e| Error::falsified("reconstruct-homomorphism", e.to_string()))?;
    if !iso.is_bijective() {
        return Err(Error::falsified("reconstruct-bijective", "κ(m)a is not a bijection"));
    }
    if let Some(x) = g.underlying.elements().find(|&x| cl.hom.apply(iso.apply(x)) != g.projection.apply(x)) {
        return Err(Error::Triangle { x });
    }
    Ok((g, iso))
}

/// `α = ᾱ` restricted to kernels, `τ_n = ξ'(ᾱ(κ(n)))`.
pub fn extract_lax_hom(alpha_bar: &MonoidHom, cl: &Cleavage, cl2: &Cleavage) -> Result<LaxHom> {
    let (s1, s2) = (&cl.hom, &cl2.hom);
    if !alpha_bar.source().same_table(s1.source()) || !alpha_bar.target().same_table(s2.source()) {
        return Err(Error::Composability("ᾱ does not map between the cleaved monoids".into()));
    }
    if let Some(x) = s1.source().elements().find(|&x| s2.apply(alpha_bar.apply(x)) != s1.apply(x)) {
        return Err(Error::Triangle { x });
    }
    let alpha_map = cl
        .kernel
        .elements()
        .map(|a| cl2.xi[alpha_bar.apply(cl.embed.apply(a))])
        .collect();
    let alpha = MonoidHom::new(Arc::clone(&cl.kernel), Arc::clone(&cl2.kernel), alpha_map)?;
    let tau = cl.kappa.iter().map(|&k| cl2.xi[alpha_bar.apply(k)]).collect();
    LaxHom::new(Arc::new(extract_action(cl)), Arc::new(extract_action(cl2)), alpha, tau)
}

/// Applies the change-of-cleavage formulas
/// `φ̃_n(a) = η(n)⁻¹ φ_n(a) η(n)` and
/// `γ̃_{m,n} = η(mn)⁻¹ γ_{m,n} φ_n(η(m)) η(n)` to an action.
pub fn apply_change(action: &LaxAction, eta: &[Elem]) -> Result<LaxAction> {
    let (n, a) = (action.acting(), action.carrier());
    let inv = |x: Elem| a.inverse(x).ok_or_else(|| Error::InvalidCleavage(format!("η value {x} is not a unit")));
    let mut phi = Vec::with_capacity(a.order() * n.order());
    for x in a.elements() {
        for b in n.elements() {
            phi.push(a.product([inv(eta[b])?, action.phi(b, x), eta[b]]));
        }
    }
    let mut gamma = Vec::with_capacity(n.order() * n.order());
    for p in n.elements() {
        for q in n.elements() {
            gamma.push(a.product([
                inv(eta[n.mul(p, q)])?,
                action.gamma(p, q),
                action.phi(q, eta[p]),
                eta[q],
            ]));
        }
    }
    Ok(LaxAction::from_flat(Arc::clone(n), Arc::clone(a), phi, gamma))
}

/// Extracts both actions independently and checks the change-of-cleavage formulas cell by cell.
pub fn transport(change: &CleavageChange) -> (LaxAction, LaxAction, Verdict) {
    let before = extract_action(&change.from);
    let after = extract_action(&change.to);
    let verdict = match apply_change(&before, &change.eta) {
        Err(e) => Verdict::fail("change-of-cleavage", e.to_string()),
        Ok(predicted) => {
            let (n, a) = (before.acting(), before.carrier());
            let phi_bad = a
                .elements()
                .flat_map(|x| n.elements().map(move |b| (x, b)))
                .find(|&(x, b)| predicted.phi(b, x) != after.phi(b, x))
                .map(|(x, b)| format!("phi at n={b} a={x}"));
            let gamma_bad = n
                .elements()
                .flat_map(|p| n.elements().map(move |q| (p, q)))
                .find(|&(p, q)| predicted.gamma(p, q) != after.gamma(p, q))
                .map(|(p, q)| format!("gamma at m={p} n={q}"));
            Verdict::from_witness("change-of-cleavage", phi_bad.or(gamma_bad))
        }
    };
    (before, after, verdict)
}

/// Checks `τ̃(n) = η'(n)⁻¹ τ(n) α(η(n))` for lax homs extracted from `ᾱ`
/// before and after changing cleavages on both sides.
pub fn transport_tau(
    alpha_bar: &MonoidHom,
    cl: &Cleavage,
    cl_t: &Cleavage,
    cl2: &Cleavage,
    cl2_t: &Cleavage,
) -> Result<Verdict> {
    let f = extract_lax_hom(alpha_bar, cl, cl2)?;
    let ft = extract_lax_hom(alpha_bar, cl_t, cl2_t)?;
    let eta = CleavageChange::between(cl, cl_t)?.eta;
    let eta2 = CleavageChange::between(cl2, cl2_t)?.eta;
    let a2 = &cl2.kernel;
    let bad = cl.hom.target().elements().find(|&b| {
        let inv = a2.inverse(eta2[b]).expect("η' takes unit values");
        ft.tau()[b] != a2.product([inv, f.tau()[b], f.alpha().apply(eta[b])])
    });
    Ok(Verdict::from_witness("change-of-cleavage-tau", bad.map(|b| format!("n={b}"))))
}

/// Extracts the action from the canonical cleavage of the Grothendieck
/// projection and searches for the `η` relating it to the original action.
pub fn round_trip_b(action: &Arc<LaxAction>) -> Result<Option<Vec<Elem>>> {
    let g = groth(action)?;
    let cl = canonical_cleavage(&g.projection)?;
    let extracted = extract_action(&cl);
    let a = action.carrier();
    let n = action.acting();
    // the kernel of the projection is {(1, a)}, so kernel positions are carrier indices
    debug_assert!(cl.kernel.same_table(a));
    let units: Vec<Elem> = a.elements().filter(|&x| a.is_unit(x)).collect();
    for eta in PointedMaps::new(n.order(), n.identity(), a.identity(), &units) {
        let candidate = apply_change(action, &eta)?;
        if candidate.phi_rows() == extracted.phi_rows() && candidate.gamma_rows() == extracted.gamma_rows() {
            return Ok(Some(eta));
        }
    }
    Ok(None)
}
