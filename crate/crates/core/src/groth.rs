//! The Grothendieck construction of a lax action.
//!
//! The underlying set is `N × A`, with `(n, a)` stored at index `n·|A| + a`, and
//! `(m,a)(n,b) = (mn, γ_{m,n} φ_n(a) b)`. The table goes through the usual
//! associativity audit, so every constructed instance certifies the product law.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fibration::{analyze, CartesianReport};
use crate::hom::MonoidHom;
use crate::lax::{validate_two_cell, LaxAction, LaxHom, TwoCell};
use crate::monoid::{check_size, Elem, FiniteMonoid};
use crate::verdict::Verdict;

#[derive(Debug, Clone)]
pub struct GrothMonoid {
    pub underlying: Arc<FiniteMonoid>,
    /// `(n, a) -> n`
    pub projection: MonoidHom,
    /// `a -> (1, a)`
    pub inclusion: MonoidHom,
    pub action: Arc<LaxAction>,
}

impl GrothMonoid {
    pub fn encode(&self, n: Elem, a: Elem) -> Elem {
        n * self.action.carrier().order() + a
    }

    pub fn decode(&self, x: Elem) -> (Elem, Elem) {
        let k = self.action.carrier().order();
        (x / k, x % k)
    }
}

pub fn groth(action: &Arc<LaxAction>) -> Result<GrothMonoid> {
    action.ensure_valid()?;
    let (n, a) = (action.acting(), action.carrier());
    let (no, ao) = (n.order(), a.order());
    let order = no.saturating_mul(ao);
    check_size("Grothendieck construction", order)?;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (m, p) = (x / ao, x % ao);
        for y in 0..order {
            let (k, q) = (y / ao, y % ao);
            let second = a.product([action.gamma(m, k), action.phi(k, p), q]);
            table.push(n.mul(m, k) * ao + second);
        }
    }
    let names = (0..order)
        .map(|x| format!("({},{})", n.name(x / ao), a.name(x % ao)))
        .collect();
    let identity = n.identity() * ao + a.identity();
    let underlying = Arc::new(FiniteMonoid::from_flat(order, table, identity, Some(names))?);
    let projection = MonoidHom::new(Arc::clone(&underlying), Arc::clone(n), (0..order).map(|x| x / ao).collect())?;
    let inclusion = MonoidHom::new(
        Arc::clone(a),
        Arc::clone(&underlying),
        a.elements().map(|p| n.identity() * ao + p).collect(),
    )?;
    Ok(GrothMonoid {
        underlying,
        projection,
        inclusion,
        action: Arc::clone(action),
    })
}

/// Analysis of the projection together with the structural checks that hold
/// for every Grothendieck construction.
pub fn groth_projection_report(g: &GrothMonoid) -> (CartesianReport, Vec<Verdict>) {
    let r = analyze(&g.projection);
    let a = g.action.carrier();
    let expected: Vec<Elem> = g
        .underlying
        .elements()
        .filter(|&x| a.is_unit(g.decode(x).1))
        .collect();
    let image: Vec<Elem> = g.inclusion.map().to_vec();
    let mut sorted_image = image.clone();
    sorted_image.sort_unstable();
    let verdicts = vec![
        Verdict::check("groth-prefibration", r.is_prefibration, || "projection is not a prefibration".into()),
        Verdict::check(
            "groth-pseudo-fibration",
            !g.action.is_pseudo() || r.is_fibration,
            || "pseudo action with non-fibration projection".into(),
        ),
        Verdict::check("groth-pcar-unit-pairs", r.pcar == expected, || {
            format!("pcar {:?}, expected {:?}", r.pcar, expected)
        }),
        Verdict::check(
            "groth-exact",
            g.inclusion.is_injective() && r.kernel() == sorted_image.as_slice(),
            || format!("kernel {:?}, inclusion image {:?}", r.kernel(), image),
        ),
    ];
    (r, verdicts)
}

/// `ᾱ(m, a) = (m, τ_m α(a))`, audited as a homomorphism over `N`.
pub fn groth_on_hom(f: &LaxHom, source: &GrothMonoid, target: &GrothMonoid) -> Result<MonoidHom> {
    if *source.action != **f.source() || *target.action != **f.target() {
        return Err(Error::InvalidLaxHom("Grothendieck monoids do not match the lax hom".into()));
    }
    let a2 = target.action.carrier();
    let map = source
        .underlying
        .elements()
        .map(|x| {
            let (m, a) = source.decode(x);
            target.encode(m, a2.mul(f.tau()[m], f.alpha().apply(a)))
        })
        .collect();
    let hom = MonoidHom::new(Arc::clone(&source.underlying), Arc::clone(&target.underlying), map)
        .map_err(|e| Error::InvalidLaxHom(e.to_string()))?;
    if let Some(x) = source
        .underlying
        .elements()
        .find(|&x| target.projection.apply(hom.apply(x)) != source.projection.apply(x))
    {
        return Err(Error::Triangle { x });
    }
    Ok(hom)
}

/// The element `(1, c)` of the target monoid, certified to satisfy
/// `(1,c) ᾱ(x) = β̄(x) (1,c)` for every `x`.
pub fn groth_on_cell(cell: &TwoCell, source: &GrothMonoid, target: &GrothMonoid) -> Result<Elem> {
    let report = validate_two_cell(cell);
    if let Some(v) = report.verdicts.iter().find(|v| !v.passed) {
        return Err(Error::InvalidCell(format!("{}: {}", v.check, v.witness.clone().unwrap_or_default())));
    }
    let alpha = groth_on_hom(&cell.from, source, target)?;
    let beta = groth_on_hom(&cell.to, source, target)?;
    let c = target.encode(target.action.acting().identity(), cell.c);
    let m = &target.underlying;
    if let Some(x) = source
        .underlying
        .elements()
        .find(|&x| m.mul(c, alpha.apply(x)) != m.mul(beta.apply(x), c))
    {
        return Err(Error::InvalidCell(format!("naturality fails at {x}")));
    }
    Ok(c)
}
