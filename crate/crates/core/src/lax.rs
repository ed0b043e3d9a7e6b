//! Lax actions of a monoid `N` on a monoid `A`, lax homomorphisms between them
//! and 2-cells between lax homomorphisms.
//!
//! A lax action is a pair of tables: `φ_n(a)` and `γ_{m,n}`. The axioms are
//!
//! 1. `φ_1(a) = a`
//! 2. `γ_{m,n} φ_n(φ_m(a)) = φ_{mn}(a) γ_{m,n}`
//! 3. `γ_{mn,k} φ_k(γ_{m,n}) = γ_{m,nk} γ_{n,k}`
//! 4. `γ_{1,m} = 1 = γ_{m,1}`
//! 5. every `φ_n` is an endomorphism of `A`
//!
//! and the action is pseudo when every `γ_{m,n}` is a unit.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators;
use crate::hom::MonoidHom;
use crate::monoid::{Elem, FiniteMonoid};
use crate::verdict::Verdict;

/// Check names reported by [`validate_lax`], in axiom order.
pub const AXIOMS: [&str; 5] = [
    "phi-unit",
    "phi-gamma-twist",
    "gamma-cocycle",
    "gamma-normalized",
    "phi-endomorphism",
];

#[derive(Clone, PartialEq, Eq)]
pub struct LaxAction {
    acting: Arc<FiniteMonoid>,
    carrier: Arc<FiniteMonoid>,
    /// `phi[a * |N| + n] = φ_n(a)`
    phi: Vec<Elem>,
    /// `gamma[m * |N| + n] = γ_{m,n}`
    gamma: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct LaxActionJson {
    acting: FiniteMonoid,
    carrier: FiniteMonoid,
    phi: Vec<Vec<Elem>>,
    gamma: Vec<Vec<Elem>>,
}

fn flatten(rows: Vec<Vec<Elem>>, nrows: usize, ncols: usize, bound: usize, what: &str) -> Result<Vec<Elem>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Shape(format!("{what} table must be {nrows}x{ncols}")));
    }
    let flat: Vec<Elem> = rows.into_iter().flatten().collect();
    if let Some(v) = flat.iter().find(|&&v| v >= bound) {
        return Err(Error::Shape(format!("{what} entry {v} out of range")));
    }
    Ok(flat)
}

impl LaxAction {
    /// Shape-checked constructor; the axioms are checked by [`validate_lax`].
    /// `phi` has one row per element of `A`, `gamma` one row per element of `N`.
    pub fn new(
        acting: Arc<FiniteMonoid>,
        carrier: Arc<FiniteMonoid>,
        phi: Vec<Vec<Elem>>,
        gamma: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let (n, a) = (acting.order(), carrier.order());
        let phi = flatten(phi, a, n, a, "phi")?;
        let gamma = flatten(gamma, n, n, a, "gamma")?;
        Ok(LaxAction { acting, carrier, phi, gamma })
    }

    pub(crate) fn from_flat(acting: Arc<FiniteMonoid>, carrier: Arc<FiniteMonoid>, phi: Vec<Elem>, gamma: Vec<Elem>) -> Self {
        debug_assert_eq!(phi.len(), acting.order() * carrier.order());
        debug_assert_eq!(gamma.len(), acting.order() * acting.order());
        LaxAction { acting, carrier, phi, gamma }
    }

    /// Trivial strict action: `φ_n = id`, `γ ≡ 1`.
    pub fn trivial(acting: &Arc<FiniteMonoid>, carrier: &Arc<FiniteMonoid>) -> Self {
        let (n, a) = (acting.order(), carrier.order());
        LaxAction {
            acting: Arc::clone(acting),
            carrier: Arc::clone(carrier),
            phi: (0..a * n).map(|i| i / n).collect(),
            gamma: vec![carrier.identity(); n * n],
        }
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

    #[inline]
    pub fn gamma(&self, m: Elem, n: Elem) -> Elem {
        self.gamma[m * self.acting.order() + n]
    }

    pub fn phi_rows(&self) -> Vec<Vec<Elem>> {
        self.phi.chunks(self.acting.order()).map(<[Elem]>::to_vec).collect()
    }

    pub fn gamma_rows(&self) -> Vec<Vec<Elem>> {
        self.gamma.chunks(self.acting.order()).map(<[Elem]>::to_vec).collect()
    }

    /// Replaces one `γ` entry; used to build tampered instances.
    pub fn with_gamma(mut self, m: Elem, n: Elem, value: Elem) -> Result<Self> {
        if m >= self.acting.order() || n >= self.acting.order() || value >= self.carrier.order() {
            return Err(Error::Shape("gamma index out of range".into()));
        }
        let k = self.acting.order();
        self.gamma[m * k + n] = value;
        Ok(self)
    }

    pub fn is_strict(&self) -> bool {
        self.gamma.iter().all(|&g| g == self.carrier.identity())
    }

    pub fn is_pseudo(&self) -> bool {
        self.gamma.iter().all(|&g| self.carrier.is_unit(g))
    }

    /// `φ_n` as a map on `A`, without the endomorphism audit.
    pub fn phi_map(&self, n: Elem) -> Vec<Elem> {
        self.carrier.elements().map(|a| self.phi(n, a)).collect()
    }

    /// Errors with the first failing axiom.
    pub fn ensure_valid(&self) -> Result<()> {
        match validate_lax(self).verdicts.into_iter().find(|v| !v.passed) {
            None => Ok(()),
            Some(v) => Err(Error::InvalidAction {
                axiom: v.check,
                witness: v.witness.unwrap_or_default(),
            }),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("action serializes")
    }
}

impl Serialize for LaxAction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaxActionJson {
            acting: (*self.acting).clone(),
            carrier: (*self.carrier).clone(),
            phi: self.phi_rows(),
            gamma: self.gamma_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaxAction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LaxActionJson::deserialize(d)?;
        LaxAction::new(Arc::new(j.acting), Arc::new(j.carrier), j.phi, j.gamma).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Debug for LaxAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaxAction")
            .field("acting_order", &self.acting.order())
            .field("carrier_order", &self.carrier.order())
            .field("phi", &self.phi_rows())
            .field("gamma", &self.gamma_rows())
            .finish()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LaxReport {
    pub verdicts: Vec<Verdict>,
    pub is_pseudo: bool,
}

impl LaxReport {
    pub fn valid(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Checks all five axioms, each with its first counterexample.
pub fn validate_lax(action: &LaxAction) -> LaxReport {
    let (n, a) = (action.acting(), action.carrier());
    let one = n.identity();
    let e = a.identity();
    let pairs = || n.elements().flat_map(|m| n.elements().map(move |k| (m, k)));

    let unit = a.elements().find(|&x| action.phi(one, x) != x).map(|x| format!("a={x}"));

    let twist = pairs().find_map(|(m, k)| {
        let g = action.gamma(m, k);
        a.elements()
            .find(|&x| a.mul(g, action.phi(k, action.phi(m, x))) != a.mul(action.phi(n.mul(m, k), x), g))
            .map(|x| format!("a={x} m={m} n={k}"))
    });

    let cocycle = pairs().find_map(|(m, k)| {
        n.elements()
            .find(|&l| {
                let lhs = a.mul(action.gamma(n.mul(m, k), l), action.phi(l, action.gamma(m, k)));
                let rhs = a.mul(action.gamma(m, n.mul(k, l)), action.gamma(k, l));
                lhs != rhs
            })
            .map(|l| format!("m={m} n={k} k={l}"))
    });

    let normalized = n
        .elements()
        .find(|&m| action.gamma(one, m) != e || action.gamma(m, one) != e)
        .map(|m| format!("m={m}"));

    let endo = n.elements().find_map(|k| {
        if action.phi(k, e) != e {
            return Some(format!("n={k} does not fix 1"));
        }
        a.elements()
            .flat_map(|x| a.elements().map(move |y| (x, y)))
            .find(|&(x, y)| action.phi(k, a.mul(x, y)) != a.mul(action.phi(k, x), action.phi(k, y)))
            .map(|(x, y)| format!("n={k} a={x} b={y}"))
    });

    let verdicts = [unit, twist, cocycle, normalized, endo]
        .into_iter()
        .zip(AXIOMS)
        .map(|(w, name)| Verdict::from_witness(name, w))
        .collect();
    LaxReport {
        verdicts,
        is_pseudo: action.is_pseudo(),
    }
}

/// Builds the strict action `γ ≡ 1` from a right action table `table[a][n] = φ_n(a)`.
/// Rejects tables that are not a right action by endomorphisms.
pub fn strictify(acting: &Arc<FiniteMonoid>, carrier: &Arc<FiniteMonoid>, table: Vec<Vec<Elem>>) -> Result<LaxAction> {
    let n = acting.order();
    let gamma = vec![vec![carrier.identity(); n]; n];
    let action = LaxAction::new(Arc::clone(acting), Arc::clone(carrier), table, gamma)?;
    let failures: Vec<String> = validate_lax(&action)
        .verdicts
        .into_iter()
        .filter(|v| !v.passed)
        .map(|v| format!("{}: {}", v.check, v.witness.unwrap_or_default()))
        .collect();
    if !failures.is_empty() {
        return Err(Error::NotAnAction(failures.join("; ")));
    }
    Ok(action)
}

/// Klein four `{1, x, y, xy}` acting trivially on `{1, -1}` with the sign
/// cocycle whose Grothendieck construction is the quaternion group.
pub fn quaternion_action() -> LaxAction {
    let v4 = Arc::new(generators::klein4());
    let c2 = generators::cyclic_group(2)
        .and_then(|m| m.with_names(vec!["1".into(), "-1".into()]))
        .expect("sign group");
    // rows m, columns n, in the order 1, x, y, xy; 1 marks γ = -1
    let gamma = vec![
        vec![0, 0, 0, 0],
        vec![0, 1, 0, 1],
        vec![0, 1, 1, 0],
        vec![0, 0, 1, 1],
    ];
    let phi = vec![vec![0; 4], vec![1; 4]];
    LaxAction::new(v4, Arc::new(c2), phi, gamma).expect("quaternion data")
}

/// A lax homomorphism `(α, τ)` between two lax actions of the same monoid.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxHom {
    source: Arc<LaxAction>,
    target: Arc<LaxAction>,
    alpha: MonoidHom,
    tau: Vec<Elem>,
}

impl LaxHom {
    /// Audits `φ'_m(α(a)) τ_m = τ_m α(φ_m(a))`,
    /// `γ'_{m,n} φ'_n(τ_m) τ_n = τ_{mn} α(γ_{m,n})` and `τ_1 = 1`.
    pub fn new(source: Arc<LaxAction>, target: Arc<LaxAction>, alpha: MonoidHom, tau: Vec<Elem>) -> Result<Self> {
        if !source.acting().same_table(target.acting()) {
            return Err(Error::InvalidLaxHom("actions of different monoids".into()));
        }
        if !alpha.source().same_table(source.carrier()) || !alpha.target().same_table(target.carrier()) {
            return Err(Error::InvalidLaxHom("α does not map between the carriers".into()));
        }
        let n = source.acting();
        if tau.len() != n.order() || tau.iter().any(|&t| t >= target.carrier().order()) {
            return Err(Error::InvalidLaxHom("τ has the wrong shape".into()));
        }
        let h = LaxHom { source, target, alpha, tau };
        h.audit()?;
        Ok(h)
    }

    fn audit(&self) -> Result<()> {
        let (src, tgt) = (&*self.source, &*self.target);
        let (n, a2) = (src.acting(), tgt.carrier());
        if self.tau[n.identity()] != a2.identity() {
            return Err(Error::InvalidLaxHom("τ_1 != 1".into()));
        }
        for m in n.elements() {
            let t = self.tau[m];
            for a in src.carrier().elements() {
                let lhs = a2.mul(tgt.phi(m, self.alpha.apply(a)), t);
                let rhs = a2.mul(t, self.alpha.apply(src.phi(m, a)));
                if lhs != rhs {
                    return Err(Error::InvalidLaxHom(format!("twist fails at m={m} a={a}")));
                }
            }
            for k in n.elements() {
                let lhs = a2.product([tgt.gamma(m, k), tgt.phi(k, t), self.tau[k]]);
                let rhs = a2.mul(self.tau[n.mul(m, k)], self.alpha.apply(src.gamma(m, k)));
                if lhs != rhs {
                    return Err(Error::InvalidLaxHom(format!("cocycle compatibility fails at m={m} n={k}")));
                }
            }
        }
        Ok(())
    }

    /// `(id, 1)`.
    pub fn identity(action: &Arc<LaxAction>) -> Self {
        LaxHom {
            source: Arc::clone(action),
            target: Arc::clone(action),
            alpha: MonoidHom::identity(action.carrier()),
            tau: vec![action.carrier().identity(); action.acting().order()],
        }
    }

    pub fn source(&self) -> &Arc<LaxAction> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LaxAction> {
        &self.target
    }

    pub fn alpha(&self) -> &MonoidHom {
        &self.alpha
    }

    pub fn tau(&self) -> &[Elem] {
        &self.tau
    }
}

/// `(α', τ')(α, τ) = (α'α, m ↦ τ'_m α'(τ_m))`.
pub fn compose_lax_homs(g: &LaxHom, f: &LaxHom) -> Result<LaxHom> {
    if *f.target != *g.source {
        return Err(Error::Composability("lax homs do not share the middle action".into()));
    }
    let alpha = f.alpha.then(&g.alpha)?;
    let a3 = g.target.carrier();
    let tau = f
        .source
        .acting()
        .elements()
        .map(|m| a3.mul(g.tau[m], g.alpha.apply(f.tau[m])))
        .collect();
    LaxHom::new(Arc::clone(&f.source), Arc::clone(&g.target), alpha, tau)
}

/// A 2-cell `c: (α, τ) => (β, θ)` between parallel lax homs.
#[derive(Debug, Clone)]
pub struct TwoCell {
    pub from: LaxHom,
    pub to: LaxHom,
    pub c: Elem,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub verdicts: Vec<Verdict>,
    pub is_pseudo_cell: bool,
}

impl CellReport {
    pub fn valid(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Checks `c α(a) = β(a) c` for all `a` and `φ'_m(c) τ_m = θ_m c` for all `m`.
pub fn validate_two_cell(cell: &TwoCell) -> CellReport {
    let (f, g) = (&cell.from, &cell.to);
    let parallel = *f.source == *g.source && *f.target == *g.target;
    let mut verdicts = vec![Verdict::check("cell-parallel", parallel, || "lax homs are not parallel".into())];
    if !parallel || cell.c >= f.target.carrier().order() {
        if parallel {
            verdicts.push(Verdict::fail("cell-in-range", format!("c={}", cell.c)));
        }
        return CellReport {
            verdicts,
            is_pseudo_cell: false,
        };
    }
    let (a, a2, n) = (f.source.carrier(), f.target.carrier(), f.source.acting());
    let c = cell.c;
    let natural = a
        .elements()
        .find(|&x| a2.mul(c, f.alpha.apply(x)) != a2.mul(g.alpha.apply(x), c))
        .map(|x| format!("a={x}"));
    let twisted = n
        .elements()
        .find(|&m| a2.mul(f.target.phi(m, c), f.tau[m]) != a2.mul(g.tau[m], c))
        .map(|m| format!("m={m}"));
    verdicts.push(Verdict::from_witness("cell-intertwines-alpha", natural));
    verdicts.push(Verdict::from_witness("cell-intertwines-tau", twisted));
    CellReport {
        verdicts,
        is_pseudo_cell: a2.is_unit(c),
    }
}

impl TwoCell {
    /// Vertical composite of `self: f => g` and `next: g => h`, with element `next.c * self.c`.
    pub fn then(&self, next: &TwoCell) -> Result<TwoCell> {
        if self.to != next.from {
            return Err(Error::Composability("2-cells do not share the middle lax hom".into()));
        }
        let a2 = self.from.target.carrier();
        Ok(TwoCell {
            from: self.from.clone(),
            to: next.to.clone(),
            c: a2.mul(next.c, self.c),
        })
    }

    pub fn identity(f: &LaxHom) -> TwoCell {
        TwoCell {
            from: f.clone(),
            to: f.clone(),
            c: f.target.carrier().identity(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_on_c3_inversion() -> LaxAction {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let c3 = Arc::new(generators::cyclic_group(3).unwrap());
        strictify(&c2, &c3, vec![vec![0, 0], vec![1, 2], vec![2, 1]]).unwrap()
    }

    #[test]
    fn trivial_and_strict_actions_are_valid() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let c3 = Arc::new(generators::cyclic_group(3).unwrap());
        let r = validate_lax(&LaxAction::trivial(&c2, &c3));
        assert!(r.valid() && r.is_pseudo);
        assert!(c2_on_c3_inversion().is_strict());
    }

    #[test]
    fn translation_is_not_by_endomorphisms() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let err = strictify(&c2, &c2, vec![vec![0, 1], vec![1, 0]]).unwrap_err();
        match err {
            Error::NotAnAction(w) => assert!(w.contains("phi-endomorphism: n=1 does not fix 1"), "{w}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn quaternion_data_is_pseudo() {
        let q = quaternion_action();
        let r = validate_lax(&q);
        assert!(r.valid(), "{:?}", r.verdicts);
        assert!(r.is_pseudo);
        assert!(!q.is_strict());
    }

    #[test]
    fn tampered_quaternion_fails_cocycle() {
        let q = quaternion_action().with_gamma(1, 2, 1).unwrap();
        let r = validate_lax(&q);
        let failing: Vec<&str> = r.verdicts.iter().filter(|v| !v.passed).map(|v| v.check.as_str()).collect();
        assert_eq!(failing, ["gamma-cocycle"]);
        assert!(matches!(q.ensure_valid(), Err(Error::InvalidAction { .. })));
    }

    #[test]
    fn all_failures_are_reported() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let bad = LaxAction::new(Arc::clone(&c2), c2, vec![vec![1, 1], vec![0, 0]], vec![vec![1, 1], vec![1, 1]]).unwrap();
        let r = validate_lax(&bad);
        assert!(r.verdicts.iter().filter(|v| !v.passed).count() >= 3);
    }

    #[test]
    fn json_round_trip() {
        let q = quaternion_action();
        let s = serde_json::to_string(&q).unwrap();
        let back: LaxAction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn identity_is_a_unit_for_composition() {
        let act = Arc::new(c2_on_c3_inversion());
        let id = LaxHom::identity(&act);
        // inversion on C3 commutes with the action
        let inv = MonoidHom::new(Arc::clone(act.carrier()), Arc::clone(act.carrier()), vec![0, 2, 1]).unwrap();
        let f = LaxHom::new(Arc::clone(&act), Arc::clone(&act), inv, vec![0, 0]).unwrap();
        assert_eq!(compose_lax_homs(&f, &id).unwrap(), f);
        assert_eq!(compose_lax_homs(&id, &f).unwrap(), f);
        assert_eq!(compose_lax_homs(&f, &f).unwrap(), id);
    }

    #[test]
    fn lax_hom_audit_rejects_bad_tau() {
        let q = Arc::new(quaternion_action());
        let alpha = MonoidHom::identity(q.carrier());
        assert!(LaxHom::new(Arc::clone(&q), Arc::clone(&q), alpha.clone(), vec![1, 0, 0, 0]).is_err());
        // any τ with τ_1 = 1 works here: A is central and φ trivial, and
        // γ φ(τ_m) τ_n = τ_{mn} γ needs τ_m τ_n = τ_{mn}
        let ok = LaxHom::new(Arc::clone(&q), Arc::clone(&q), alpha.clone(), vec![0, 1, 1, 0]);
        assert!(ok.is_ok());
        assert!(LaxHom::new(Arc::clone(&q), q, alpha, vec![0, 1, 0, 0]).is_err());
    }

    #[test]
    fn two_cells() {
        let q = Arc::new(quaternion_action());
        let id = LaxHom::identity(&q);
        assert!(validate_two_cell(&TwoCell::identity(&id)).valid());
        // -1 is central and φ is trivial, so c = -1 is a pseudo cell id => id
        let minus = TwoCell { from: id.clone(), to: id.clone(), c: 1 };
        let r = validate_two_cell(&minus);
        assert!(r.valid() && r.is_pseudo_cell);
        let comp = minus.then(&minus).unwrap();
        assert_eq!(comp.c, 0);
        assert!(validate_two_cell(&comp).valid());
    }

    #[test]
    fn non_central_cell_is_rejected() {
        let s3 = Arc::new(generators::symmetric(3).unwrap());
        let one = Arc::new(FiniteMonoid::trivial());
        let act = Arc::new(LaxAction::trivial(&one, &s3));
        let id = LaxHom::identity(&act);
        let cell = TwoCell { from: id.clone(), to: id, c: 1 };
        let r = validate_two_cell(&cell);
        assert!(!r.verdicts.iter().find(|v| v.check == "cell-intertwines-alpha").unwrap().passed);
    }
}
