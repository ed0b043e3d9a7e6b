//! Cohomology of a monoid `N` with coefficients in a commutative monoid `A`
//! carrying a right `N`-action.
//!
//! A 2-cocycle is a normalized table `γ` with
//! `γ_{mn,k} φ_k(γ_{m,n}) = γ_{m,nk} γ_{n,k}`; it is regular when all values are
//! units. Two cocycles are cohomologous when some pointed `τ: N -> A^×` gives
//! `γ_{m,n} τ(mn) = γ'_{m,n} τ(n) φ_n(τ(m))`. Since `A` is commutative this is
//! `γ' = γ · δτ` with `δτ(m,n) = τ(mn) τ(n)⁻¹ φ_n(τ(m))⁻¹`, so classes are
//! orbits of the coboundary group.

mod exact;
mod extension;

pub use exact::*;
pub use extension::*;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lax::LaxAction;
use crate::monoid::{Elem, FiniteMonoid};
use crate::util::{pointed_count, PointedMaps};

/// Bound on visited nodes in the cocycle and extension searches.
pub const SEARCH_LIMIT: u64 = 10_000_000;

/// A commutative monoid with a right action of `N` by endomorphisms.
#[derive(Clone, PartialEq, Eq)]
pub struct NModule {
    acting: Arc<FiniteMonoid>,
    carrier: Arc<FiniteMonoid>,
    /// `phi[a * |N| + n] = φ_n(a)`
    phi: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct NModuleJson {
    acting: FiniteMonoid,
    carrier: FiniteMonoid,
    phi: Vec<Vec<Elem>>,
}

impl NModule {
    /// `phi[a][n] = φ_n(a)`.
    pub fn new(acting: Arc<FiniteMonoid>, carrier: Arc<FiniteMonoid>, phi: Vec<Vec<Elem>>) -> Result<Self> {
        if !carrier.is_commutative() {
            return Err(Error::InvalidModule("carrier is not commutative".into()));
        }
        let gamma = vec![vec![carrier.identity(); acting.order()]; acting.order()];
        let action = LaxAction::new(Arc::clone(&acting), Arc::clone(&carrier), phi, gamma)?;
        let failures: Vec<String> = crate::lax::validate_lax(&action)
            .verdicts
            .into_iter()
            .filter(|v| !v.passed)
            .map(|v| format!("{}: {}", v.check, v.witness.unwrap_or_default()))
            .collect();
        if !failures.is_empty() {
            return Err(Error::InvalidModule(failures.join("; ")));
        }
        let phi = action.phi_rows().into_iter().flatten().collect();
        Ok(NModule { acting, carrier, phi })
    }

    pub fn trivial(acting: &Arc<FiniteMonoid>, carrier: &Arc<FiniteMonoid>) -> Result<Self> {
        let rows = carrier.elements().map(|a| vec![a; acting.order()]).collect();
        NModule::new(Arc::clone(acting), Arc::clone(carrier), rows)
    }

    /// The action part of a lax action on a commutative carrier.
    pub fn from_action(action: &LaxAction) -> Result<Self> {
        NModule::new(Arc::clone(action.acting()), Arc::clone(action.carrier()), action.phi_rows())
    }

    pub fn acting(&self) -> &Arc<FiniteMonoid> {
        &self.acting
    }

    pub fn carrier(&self) -> &Arc<FiniteMonoid> {
        &self.carrier
    }

    #[inline]
    pub fn phi(&self, n: Elem, a: Elem) -> Elem {
        self.phi[a * self.acting.order() + n]
    }

    pub fn phi_rows(&self) -> Vec<Vec<Elem>> {
        self.phi.chunks(self.acting.order()).map(<[Elem]>::to_vec).collect()
    }

    pub fn units(&self) -> Vec<Elem> {
        self.carrier.elements().filter(|&a| self.carrier.is_unit(a)).collect()
    }

    /// The lax action `(φ, γ)` for a cocycle table.
    pub fn to_action(&self, gamma: &[Elem]) -> LaxAction {
        LaxAction::from_flat(Arc::clone(&self.acting), Arc::clone(&self.carrier), self.phi.clone(), gamma.to_vec())
    }

    pub fn trivial_cocycle(&self) -> Vec<Elem> {
        vec![self.carrier.identity(); self.acting.order() * self.acting.order()]
    }

    /// First violation of normalization or the cocycle identity.
    pub fn cocycle_violation(&self, gamma: &[Elem]) -> Option<String> {
        let (n, a) = (&self.acting, &self.carrier);
        let k = n.order();
        if gamma.len() != k * k || gamma.iter().any(|&g| g >= a.order()) {
            return Some("table has the wrong shape".into());
        }
        let g = |p: Elem, q: Elem| gamma[p * k + q];
        let one = n.identity();
        if let Some(x) = n.elements().find(|&x| g(x, one) != a.identity() || g(one, x) != a.identity()) {
            return Some(format!("not normalized at {x}"));
        }
        for p in n.elements() {
            for q in n.elements() {
                for r in n.elements() {
                    let lhs = a.mul(g(n.mul(p, q), r), self.phi(r, g(p, q)));
                    let rhs = a.mul(g(p, n.mul(q, r)), g(q, r));
                    if lhs != rhs {
                        return Some(format!("cocycle identity fails at m={p} n={q} k={r}"));
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("module serializes")
    }
}

impl Serialize for NModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NModuleJson {
            acting: (*self.acting).clone(),
            carrier: (*self.carrier).clone(),
            phi: self.phi_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = NModuleJson::deserialize(d)?;
        NModule::new(Arc::new(j.acting), Arc::new(j.carrier), j.phi).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Debug for NModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NModule")
            .field("acting_order", &self.acting.order())
            .field("carrier_order", &self.carrier.order())
            .field("phi", &self.phi_rows())
            .finish()
    }
}

/// A normalized 2-cocycle; `gamma[m * |N| + n] = γ_{m,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    pub module: Arc<NModule>,
    pub gamma: Vec<Elem>,
}

impl Cocycle2 {
    pub fn new(module: &Arc<NModule>, gamma: Vec<Elem>) -> Result<Self> {
        if let Some(w) = module.cocycle_violation(&gamma) {
            return Err(Error::InvalidCocycle(w));
        }
        Ok(Cocycle2 {
            module: Arc::clone(module),
            gamma,
        })
    }

    pub fn is_regular(&self) -> bool {
        self.gamma.iter().all(|&g| self.module.carrier.is_unit(g))
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.gamma.chunks(self.module.acting.order()).map(<[Elem]>::to_vec).collect()
    }
}

/// A 1-cocycle `ξ: N -> A^×` with `ξ(mn) = φ_n(ξ(m)) ξ(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle1 {
    pub xi: Vec<Elem>,
}

/// All of `Z¹(N, A^×)`, by scanning pointed maps.
pub fn enumerate_z1(module: &NModule) -> Vec<Cocycle1> {
    let (n, a) = (&module.acting, &module.carrier);
    let units = module.units();
    PointedMaps::new(n.order(), n.identity(), a.identity(), &units)
        .filter(|xi| {
            n.elements().all(|p| {
                n.elements().all(|q| xi[n.mul(p, q)] == a.mul(module.phi(q, xi[p]), xi[q]))
            })
        })
        .map(|xi| Cocycle1 { xi })
        .collect()
}

struct CocycleSearch<'a> {
    module: &'a NModule,
    values: Vec<Elem>,
    /// free cells `(m, n)` in assignment order
    cells: Vec<(Elem, Elem)>,
    /// triples that become checkable once cell `i` is assigned
    checks: Vec<Vec<(Elem, Elem, Elem)>>,
    gamma: Vec<Elem>,
    nodes: u64,
    limit: u64,
    out: Vec<Vec<Elem>>,
}

impl CocycleSearch<'_> {
    fn holds(&self, p: Elem, q: Elem, r: Elem) -> bool {
        let (n, a) = (&self.module.acting, &self.module.carrier);
        let k = n.order();
        let g = |x: Elem, y: Elem| self.gamma[x * k + y];
        a.mul(g(n.mul(p, q), r), self.module.phi(r, g(p, q))) == a.mul(g(p, n.mul(q, r)), g(q, r))
    }

    fn run(&mut self, depth: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SizeLimit {
                what: "cocycle search nodes".into(),
                requested: pointed_count(self.cells.len() + 1, self.values.len()).unwrap_or(u128::MAX),
                limit: self.limit as u128,
            });
        }
        if depth == self.cells.len() {
            self.out.push(self.gamma.clone());
            return Ok(());
        }
        let k = self.module.acting.order();
        let (p, q) = self.cells[depth];
        for i in 0..self.values.len() {
            self.gamma[p * k + q] = self.values[i];
            if self.checks[depth].iter().all(|&(x, y, z)| self.holds(x, y, z)) {
                self.run(depth + 1)?;
            }
        }
        Ok(())
    }
}

/// Every normalized 2-cocycle (only unit-valued ones if `regular_only`), sorted.
pub fn enumerate_cocycles(module: &Arc<NModule>, regular_only: bool) -> Result<Vec<Cocycle2>> {
    enumerate_cocycles_bounded(module, regular_only, SEARCH_LIMIT)
}

/// [`enumerate_cocycles`] with an explicit node budget.
pub fn enumerate_cocycles_bounded(module: &Arc<NModule>, regular_only: bool, limit: u64) -> Result<Vec<Cocycle2>> {
    let (n, a) = (&module.acting, &module.carrier);
    let k = n.order();
    let one = n.identity();
    let values: Vec<Elem> = if regular_only { module.units() } else { a.elements().collect() };
    let cells: Vec<(Elem, Elem)> = n
        .elements()
        .flat_map(|p| n.elements().map(move |q| (p, q)))
        .filter(|&(p, q)| p != one && q != one)
        .collect();
    let position: HashMap<(Elem, Elem), usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut checks = vec![Vec::new(); cells.len()];
    for p in n.elements() {
        for q in n.elements() {
            for r in n.elements() {
                let involved = [(n.mul(p, q), r), (p, q), (p, n.mul(q, r)), (q, r)];
                // normalized-only triples hold automatically
                if let Some(level) = involved.iter().filter_map(|c| position.get(c)).max() {
                    checks[*level].push((p, q, r));
                }
            }
        }
    }
    let mut s = CocycleSearch {
        module,
        values,
        cells,
        checks,
        gamma: vec![a.identity(); k * k],
        nodes: 0,
        limit,
        out: Vec::new(),
    };
    s.run(0)?;
    let mut out = s.out;
    out.sort();
    Ok(out
        .into_iter()
        .map(|gamma| Cocycle2 {
            module: Arc::clone(module),
            gamma,
        })
        .collect())
}

/// `δτ(m,n) = τ(mn) τ(n)⁻¹ φ_n(τ(m))⁻¹`.
pub fn coboundary(module: &NModule, tau: &[Elem]) -> Vec<Elem> {
    let (n, a) = (&module.acting, &module.carrier);
    let inv = |x: Elem| a.inverse(x).expect("τ takes unit values");
    n.elements()
        .flat_map(|p| n.elements().map(move |q| (p, q)))
        .map(|(p, q)| a.product([tau[n.mul(p, q)], inv(tau[q]), inv(module.phi(q, tau[p]))]))
        .collect()
}

/// Least `τ` (lexicographically, units in index order) with
/// `γ_{m,n} τ(mn) = γ'_{m,n} τ(n) φ_n(τ(m))` for all `m, n`.
pub fn cohomologous(g: &Cocycle2, h: &Cocycle2) -> Option<Vec<Elem>> {
    let module = &g.module;
    let (n, a) = (&module.acting, &module.carrier);
    let k = n.order();
    let units = module.units();
    PointedMaps::new(k, n.identity(), a.identity(), &units).find(|tau| {
        n.elements().all(|p| {
            n.elements().all(|q| {
                let lhs = a.mul(g.gamma[p * k + q], tau[n.mul(p, q)]);
                let rhs = a.product([h.gamma[p * k + q], tau[q], module.phi(q, tau[p])]);
                lhs == rhs
            })
        })
    })
}

/// One cohomology class: least member and number of members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleClass {
    pub representative: Vec<Vec<Elem>>,
    pub size: usize,
    pub regular: bool,
}

/// The partition of a cocycle set into classes.
#[derive(Debug, Clone)]
pub struct H2 {
    pub module: Arc<NModule>,
    pub cocycles: Vec<Cocycle2>,
    /// class index of each cocycle
    pub class_of: Vec<usize>,
    pub classes: Vec<CocycleClass>,
    index: HashMap<Vec<Elem>, usize>,
}

impl H2 {
    pub fn class_index(&self, gamma: &[Elem]) -> Option<usize> {
        self.index.get(gamma).map(|&i| self.class_of[i])
    }

    /// Index of the first cocycle of each class.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.classes.len()];
        for (i, &c) in self.class_of.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = i;
            }
        }
        reps
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cocycles": self.cocycles.len(),
            "classes": self.classes,
        })
    }
}

/// The coboundaries `δτ` over all pointed `τ: N -> A^×`, deduplicated.
pub fn coboundaries(module: &NModule) -> Vec<Vec<Elem>> {
    let (n, a) = (&module.acting, &module.carrier);
    let units = module.units();
    let mut out: Vec<Vec<Elem>> = PointedMaps::new(n.order(), n.identity(), a.identity(), &units)
        .map(|tau| coboundary(module, &tau))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Classes as orbits of the coboundary group; representatives are the least tables.
pub fn h2(module: &Arc<NModule>, regular: bool) -> Result<H2> {
    h2_bounded(module, regular, SEARCH_LIMIT)
}

pub fn h2_bounded(module: &Arc<NModule>, regular: bool, limit: u64) -> Result<H2> {
    let cocycles = enumerate_cocycles_bounded(module, regular, limit)?;
    let a = &module.carrier;
    let index: HashMap<Vec<Elem>, usize> = cocycles.iter().enumerate().map(|(i, c)| (c.gamma.clone(), i)).collect();
    let bounds = coboundaries(module);
    let mut class_of = vec![usize::MAX; cocycles.len()];
    let mut classes = Vec::new();
    for i in 0..cocycles.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut size = 0;
        for b in &bounds {
            let shifted: Vec<Elem> = cocycles[i].gamma.iter().zip(b).map(|(&x, &y)| a.mul(x, y)).collect();
            let j = *index
                .get(&shifted)
                .ok_or_else(|| Error::falsified("coboundary-shift-is-cocycle", format!("{shifted:?}")))?;
            if class_of[j] == usize::MAX {
                class_of[j] = c;
                size += 1;
            }
        }
        classes.push(CocycleClass {
            representative: cocycles[i].rows(),
            size,
            regular: cocycles[i].is_regular(),
        });
    }
    Ok(H2 {
        module: Arc::clone(module),
        cocycles,
        class_of,
        classes,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::lax::quaternion_action;

    fn trivial(n: FiniteMonoid, a: FiniteMonoid) -> Arc<NModule> {
        Arc::new(NModule::trivial(&Arc::new(n), &Arc::new(a)).unwrap())
    }

    #[test]
    fn module_validation() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let s3 = Arc::new(generators::symmetric(3).unwrap());
        assert!(matches!(NModule::trivial(&c2, &s3), Err(Error::InvalidModule(_))));
        let c3 = Arc::new(generators::cyclic_group(3).unwrap());
        assert!(NModule::new(Arc::clone(&c2), Arc::clone(&c3), vec![vec![0, 0], vec![1, 2], vec![2, 1]]).is_ok());
        assert!(NModule::new(c2, c3, vec![vec![0, 0], vec![1, 1], vec![2, 1]]).is_err());
    }

    #[test]
    fn c2_over_c2() {
        let m = trivial(generators::cyclic_group(2).unwrap(), generators::cyclic_group(2).unwrap());
        let all = enumerate_cocycles(&m, false).unwrap();
        assert_eq!(all.len(), 2);
        assert!(cohomologous(&all[0], &all[1]).is_none());
        assert_eq!(cohomologous(&all[1], &all[1]), Some(vec![0, 0]));
        assert_eq!(h2(&m, true).unwrap().classes.len(), 2);
    }

    #[test]
    fn klein_four_over_c2() {
        let q = quaternion_action();
        let m = Arc::new(NModule::from_action(&q).unwrap());
        let all = enumerate_cocycles(&m, true).unwrap();
        assert_eq!(all.len(), 16);
        let quaternion: Vec<Elem> = q.gamma_rows().into_iter().flatten().collect();
        assert!(all.iter().any(|c| c.gamma == quaternion));
        let h = h2(&m, true).unwrap();
        assert_eq!(h.classes.len(), 8);
        assert_ne!(h.class_index(&quaternion), h.class_index(&m.trivial_cocycle()));
    }

    #[test]
    fn orbit_partition_matches_pairwise_oracle() {
        let q = quaternion_action();
        let m = Arc::new(NModule::from_action(&q).unwrap());
        let h = h2(&m, true).unwrap();
        for (i, x) in h.cocycles.iter().enumerate() {
            for (j, y) in h.cocycles.iter().enumerate() {
                assert_eq!(cohomologous(x, y).is_some(), h.class_of[i] == h.class_of[j]);
            }
        }
    }

    #[test]
    fn shifted_cocycle_recovers_tau() {
        let q = quaternion_action();
        let m = Arc::new(NModule::from_action(&q).unwrap());
        let gamma: Vec<Elem> = q.gamma_rows().into_iter().flatten().collect();
        let g = Cocycle2::new(&m, gamma).unwrap();
        let tau = vec![0, 1, 0, 1];
        let d = coboundary(&m, &tau);
        let shifted: Vec<Elem> = g.gamma.iter().zip(&d).map(|(&x, &y)| m.carrier().mul(x, y)).collect();
        let h = Cocycle2::new(&m, shifted).unwrap();
        let found = cohomologous(&g, &h).unwrap();
        assert_eq!(coboundary(&m, &found), d);
    }

    #[test]
    fn trivial_base_has_one_class() {
        let m = trivial(FiniteMonoid::trivial(), generators::cyclic_group(3).unwrap());
        let h = h2(&m, false).unwrap();
        assert_eq!(h.classes.len(), 1);
    }

    #[test]
    fn non_group_coefficients() {
        let m = trivial(generators::cyclic_group(2).unwrap(), generators::truncated_add(1).unwrap());
        let all = enumerate_cocycles(&m, false).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(enumerate_cocycles(&m, true).unwrap().len(), 1);
        // no nontrivial units, so every class is a singleton
        assert_eq!(h2(&m, false).unwrap().classes.len(), 2);
    }

    #[test]
    fn z1_is_hom_group_for_trivial_action() {
        let m = trivial(generators::klein4(), generators::cyclic_group(2).unwrap());
        assert_eq!(enumerate_z1(&m).len(), 4);
        let m = trivial(generators::cyclic_group(2).unwrap(), generators::cyclic_group(2).unwrap());
        assert_eq!(enumerate_z1(&m).len(), 2);
    }

    #[test]
    fn search_limit_is_enforced() {
        let m = trivial(generators::cyclic_group(4).unwrap(), generators::truncated_add(3).unwrap());
        let err = enumerate_cocycles_bounded(&m, false, 1000).unwrap_err();
        assert!(err.is_size_limit(), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let m = trivial(generators::cyclic_group(2).unwrap(), generators::cyclic_group(3).unwrap());
        let s = serde_json::to_string(&*m).unwrap();
        let back: NModule = serde_json::from_str(&s).unwrap();
        assert_eq!(back, *m);
    }
}
