//! Automorphisms of a prefibration that preserve the kernel and precartesian
//! elements, and their parametrization by triples `(θ, η, ξ)`.
//!
//! For a fixed cleavage every such `ψ` is `ψ(κ(n) a) = κ(η(n)) ξ(n) θ(a)` with
//! `θ ∈ Aut(A)`, `η ∈ Aut(N)` and `ξ: N -> A^×` subject to
//!
//! 1. `ξ(1) = 1`
//! 2. `φ_{η(n)}(θ(a)) ξ(n) = ξ(n) θ(φ_n(a))`
//! 3. `γ_{η(m),η(n)} φ_{η(n)}(ξ(m)) ξ(n) = ξ(mn) θ(γ_{m,n})`
//!
//! Kernel elements are sorted-kernel positions, as in [`crate::cleavage`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::cleavage::{extract_action, kernel_units, Cleavage};
use crate::error::{Error, Result};
use crate::fibration::{analyze, CartesianReport};
use crate::hom::MonoidHom;
use crate::iso::automorphisms;
use crate::lax::LaxAction;
use crate::monoid::Elem;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AutTriple {
    pub theta: Vec<Elem>,
    pub eta: Vec<Elem>,
    pub xi: Vec<Elem>,
    /// The automorphism of `M` the triple defines.
    pub psi: Vec<Elem>,
}

fn compose(after: &[Elem], first: &[Elem]) -> Vec<Elem> {
    first.iter().map(|&x| after[x]).collect()
}

fn invert(p: &[Elem]) -> Vec<Elem> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Checks identities 2 and 3 at `n` against an action.
fn satisfies_twist(act: &LaxAction, theta: &[Elem], eta: &[Elem], n: Elem, x: Elem) -> bool {
    let a = act.carrier();
    a.elements()
        .all(|p| a.mul(act.phi(eta[n], theta[p]), x) == a.mul(x, theta[act.phi(n, p)]))
}

fn satisfies_cocycle(act: &LaxAction, theta: &[Elem], eta: &[Elem], xi: &[Elem], m: Elem, n: Elem) -> bool {
    let (a, nm) = (act.carrier(), act.acting());
    let lhs = a.product([act.gamma(eta[m], eta[n]), act.phi(eta[n], xi[m]), xi[n]]);
    let rhs = a.mul(xi[nm.mul(m, n)], theta[act.gamma(m, n)]);
    lhs == rhs
}

struct XiSearch<'a> {
    act: &'a LaxAction,
    theta: &'a [Elem],
    eta: &'a [Elem],
    /// non-identity elements of N in assignment order
    order: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
    xi: Vec<Option<Elem>>,
    out: Vec<Vec<Elem>>,
}

impl XiSearch<'_> {
    fn consistent(&self) -> bool {
        let n = self.act.acting();
        let xi: Vec<Elem> = self.xi.iter().map(|v| v.unwrap_or(usize::MAX)).collect();
        n.elements().all(|m| {
            n.elements().all(|k| {
                let assigned = self.xi[m].is_some() && self.xi[k].is_some() && self.xi[n.mul(m, k)].is_some();
                !assigned || satisfies_cocycle(self.act, self.theta, self.eta, &xi, m, k)
            })
        })
    }

    fn run(&mut self, depth: usize) {
        if !self.consistent() {
            return;
        }
        if depth == self.order.len() {
            self.out.push(self.xi.iter().map(|v| v.expect("assigned")).collect());
            return;
        }
        let n = self.order[depth];
        for i in 0..self.candidates[n].len() {
            self.xi[n] = Some(self.candidates[n][i]);
            self.run(depth + 1);
        }
        self.xi[n] = None;
    }
}

/// All `ξ` completing `(θ, η)` to a valid triple.
pub fn solve_xi(act: &LaxAction, units: &[Elem], theta: &[Elem], eta: &[Elem]) -> Vec<Vec<Elem>> {
    let (n, a) = (act.acting(), act.carrier());
    let candidates: Vec<Vec<Elem>> = n
        .elements()
        .map(|k| {
            if k == n.identity() {
                vec![a.identity()]
            } else {
                units.iter().copied().filter(|&x| satisfies_twist(act, theta, eta, k, x)).collect()
            }
        })
        .collect();
    let mut xi = vec![None; n.order()];
    xi[n.identity()] = Some(a.identity());
    let mut s = XiSearch {
        act,
        theta,
        eta,
        order: n.elements().filter(|&k| k != n.identity()).collect(),
        candidates,
        xi,
        out: Vec::new(),
    };
    s.run(0);
    s.out
}

/// `ψ(κ(n) a) = κ(η(n)) ξ(n) θ(a)`.
pub fn materialize(cl: &Cleavage, theta: &[Elem], eta: &[Elem], xi: &[Elem]) -> Vec<Elem> {
    let (sigma, embed) = (cl.hom(), cl.embed());
    let m = sigma.source();
    let a = cl.kernel();
    m.elements()
        .map(|x| {
            let n = sigma.apply(x);
            let p = cl.xi(x);
            m.mul(cl.kappa()[eta[n]], embed.apply(a.mul(xi[n], theta[p])))
        })
        .collect()
}

fn require_prefibration(r: &CartesianReport) -> Result<()> {
    if let Some(n) = r
        .fiber_index
        .iter()
        .position(|fiber| !fiber.iter().any(|&x| r.in_pcar(x)))
    {
        return Err(Error::NotPrefibration { n });
    }
    Ok(())
}

/// Audits a permutation of `M` as a member of the group: a homomorphism that
/// maps the kernel onto itself and precartesians to precartesians.
fn audit_member(r: &CartesianReport, psi: &[Elem]) -> Result<()> {
    let m = r.hom.source();
    let hom = MonoidHom::new(Arc::clone(m), Arc::clone(m), psi.to_vec())?;
    if !hom.is_bijective() {
        return Err(Error::falsified("aut-bijective", format!("{psi:?}")));
    }
    let kernel = r.kernel();
    if let Some(&x) = kernel.iter().find(|&&x| kernel.binary_search(&psi[x]).is_err()) {
        return Err(Error::NotKernelPreserving { x });
    }
    if let Some(&x) = r.pcar.iter().find(|&&x| !r.in_pcar(psi[x])) {
        return Err(Error::NotCartesian { x });
    }
    Ok(())
}

/// Every element of the group, parametrized by the given cleavage, sorted by triple.
pub fn aut_a(cl: &Cleavage) -> Result<Vec<AutTriple>> {
    let r = analyze(cl.hom());
    require_prefibration(&r)?;
    let act = extract_action(cl);
    let units = kernel_units(cl);
    let aut_a = automorphisms(cl.kernel());
    let aut_n = automorphisms(cl.hom().target());
    let mut out = Vec::new();
    for theta in &aut_a {
        for eta in &aut_n {
            for xi in solve_xi(&act, &units, theta, eta) {
                let psi = materialize(cl, theta, eta, &xi);
                audit_member(&r, &psi).map_err(|e| Error::falsified("aut-triple-audit", e.to_string()))?;
                out.push(AutTriple {
                    theta: theta.clone(),
                    eta: eta.clone(),
                    xi,
                    psi,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Brute force over all bijections of `M` fixing the identity, pruned by
/// partial multiplicativity. Only for `|M| <= 8`.
pub fn aut_a_bruteforce(sigma: &MonoidHom) -> Result<Vec<Vec<Elem>>> {
    const LIMIT: usize = 8;
    let m = sigma.source();
    if m.order() > LIMIT {
        return Err(Error::SizeLimit {
            what: "brute-force automorphism oracle".into(),
            requested: m.order() as u128,
            limit: LIMIT as u128,
        });
    }
    let r = analyze(sigma);
    require_prefibration(&r)?;
    let k = m.order();
    let mut out = Vec::new();
    let mut psi = vec![usize::MAX; k];
    let mut used = vec![false; k];

    fn rec(
        x: usize,
        m: &crate::monoid::FiniteMonoid,
        psi: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let k = m.order();
        if x == k {
            out.push(psi.clone());
            return;
        }
        for y in 0..k {
            if used[y] || (x == m.identity()) != (y == m.identity()) {
                continue;
            }
            psi[x] = y;
            used[y] = true;
            let ok = (0..=x).all(|p| {
                [(p, x), (x, p)].iter().all(|&(u, v)| {
                    let w = m.mul(u, v);
                    w > x || psi[w] == m.mul(psi[u], psi[v])
                })
            });
            if ok {
                rec(x + 1, m, psi, used, out);
            }
            used[y] = false;
        }
        psi[x] = usize::MAX;
    }
    rec(0, m, &mut psi, &mut used, &mut out);
    out.retain(|p| audit_member(&r, p).is_ok());
    out.sort();
    Ok(out)
}

/// `θ = ψ|_A` and the induced `η` on `N`. Kernel preservation, cartesianness
/// and well-definedness of `η` are checked in that order; multiplicativity is
/// not, so the descent check also sees bijections that are not automorphisms.
pub fn restrict_and_descend(psi: &[Elem], cl: &Cleavage) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let sigma = cl.hom();
    let r = analyze(sigma);
    require_prefibration(&r)?;
    let m = sigma.source();
    if psi.len() != m.order() {
        return Err(Error::Shape("ψ has the wrong length".into()));
    }
    let mut seen = vec![false; m.order()];
    if psi.iter().any(|&y| y >= m.order() || std::mem::replace(&mut seen[y], true)) {
        return Err(Error::Shape("ψ is not a bijection".into()));
    }
    let kernel = r.kernel();
    if let Some(&x) = kernel.iter().find(|&&x| kernel.binary_search(&psi[x]).is_err()) {
        return Err(Error::NotKernelPreserving { x });
    }
    if let Some(&x) = r.pcar.iter().find(|&&x| !r.in_pcar(psi[x])) {
        return Err(Error::NotCartesian { x });
    }
    let theta = cl.kernel().elements().map(|p| cl.xi(psi[cl.embed().apply(p)])).collect();
    let mut eta = Vec::with_capacity(r.fiber_index.len());
    for (n, fiber) in r.fiber_index.iter().enumerate() {
        let image = sigma.apply(psi[fiber[0]]);
        if fiber.iter().any(|&x| sigma.apply(psi[x]) != image) {
            return Err(Error::IllDefinedDescent { n });
        }
        eta.push(image);
    }
    Ok((theta, eta))
}

/// `ξ(n)` determined by `ψ(κ(n)) = κ(η(n)) ξ(n)`.
pub fn xi_of(psi: &[Elem], cl: &Cleavage) -> Vec<Elem> {
    cl.kappa().iter().map(|&k| cl.xi(psi[k])).collect()
}

/// Pairs `(θ, η)` for which some `α: N -> A^×` satisfies
/// `φ_{η(n)}(θ(a)) α(n) = α(n) θ(φ_n(a))`, each with its least witness.
#[derive(Debug, Clone, Serialize)]
pub struct CGroup {
    pub pairs: Vec<(Vec<Elem>, Vec<Elem>)>,
    pub witnesses: Vec<Vec<Elem>>,
}

impl CGroup {
    pub fn position(&self, theta: &[Elem], eta: &[Elem]) -> Option<usize> {
        self.pairs.iter().position(|(t, e)| t == theta && e == eta)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Identity membership and closure under composition.
    pub fn audit(&self) -> Vec<Verdict> {
        let contains_identity = self.pairs.iter().any(|(t, e)| {
            t.iter().enumerate().all(|(i, &v)| i == v) && e.iter().enumerate().all(|(i, &v)| i == v)
        });
        let closure = self
            .pairs
            .iter()
            .flat_map(|p| self.pairs.iter().map(move |q| (p, q)))
            .find(|((t1, e1), (t2, e2))| self.position(&compose(t1, t2), &compose(e1, e2)).is_none())
            .map(|(p, q)| format!("{p:?} then {q:?}"));
        vec![
            Verdict::check("c-contains-identity", contains_identity, || "identity pair missing".into()),
            Verdict::from_witness("c-closed", closure),
        ]
    }
}

pub fn compute_c(cl: &Cleavage) -> Result<CGroup> {
    let r = analyze(cl.hom());
    require_prefibration(&r)?;
    let act = extract_action(cl);
    let units = kernel_units(cl);
    let n = cl.hom().target();
    let mut pairs = Vec::new();
    let mut witnesses = Vec::new();
    for theta in automorphisms(cl.kernel()) {
        for eta in automorphisms(n) {
            // the condition is independent in each coordinate, so the least
            // witness takes the least admissible unit at every n
            let alpha: Option<Vec<Elem>> = n
                .elements()
                .map(|k| units.iter().copied().find(|&x| satisfies_twist(&act, &theta, &eta, k, x)))
                .collect();
            if let Some(alpha) = alpha {
                pairs.push((theta.clone(), eta));
                witnesses.push(alpha);
            }
        }
    }
    Ok(CGroup { pairs, witnesses })
}

/// `ρ(ψ) = (θ_ψ, η_ψ)` as indices into `C`, with group checks.
#[derive(Debug, Clone, Serialize)]
pub struct RhoTable {
    pub images: Vec<usize>,
    pub verdicts: Vec<Verdict>,
}

pub fn rho(auts: &[AutTriple], c: &CGroup, cl: &Cleavage) -> RhoTable {
    let index: HashMap<&[Elem], usize> = auts.iter().enumerate().map(|(i, t)| (t.psi.as_slice(), i)).collect();
    let mut images = Vec::with_capacity(auts.len());
    let mut into_c = None;
    let mut descend = None;
    for t in auts {
        match restrict_and_descend(&t.psi, cl) {
            Ok((theta, eta)) => {
                if (theta.as_slice(), eta.as_slice()) != (t.theta.as_slice(), t.eta.as_slice()) {
                    descend.get_or_insert_with(|| format!("psi {:?}", t.psi));
                }
                match c.position(&theta, &eta) {
                    Some(i) => images.push(i),
                    None => {
                        into_c.get_or_insert_with(|| format!("psi {:?}", t.psi));
                        images.push(usize::MAX);
                    }
                }
            }
            Err(e) => {
                descend.get_or_insert_with(|| e.to_string());
                images.push(usize::MAX);
            }
        }
    }
    let mut closed = None;
    let mut hom = None;
    for (i, s) in auts.iter().enumerate() {
        for (j, t) in auts.iter().enumerate() {
            let st = compose(&s.psi, &t.psi);
            let Some(&k) = index.get(st.as_slice()) else {
                closed.get_or_insert_with(|| format!("{i} after {j}"));
                continue;
            };
            if images[i] == usize::MAX || images[j] == usize::MAX {
                continue;
            }
            let (ti, ei) = &c.pairs[images[i]];
            let (tj, ej) = &c.pairs[images[j]];
            if c.position(&compose(ti, tj), &compose(ei, ej)) != Some(images[k]) {
                hom.get_or_insert_with(|| format!("{i} after {j}"));
            }
        }
    }
    let inverses = auts
        .iter()
        .enumerate()
        .find(|(_, t)| !index.contains_key(invert(&t.psi).as_slice()))
        .map(|(i, _)| format!("element {i}"));
    let identity = (0..cl.hom().source().order()).collect::<Vec<_>>();
    RhoTable {
        images,
        verdicts: vec![
            Verdict::check("aut-contains-identity", index.contains_key(identity.as_slice()), || {
                "identity missing".into()
            }),
            Verdict::from_witness("aut-closed", closed),
            Verdict::from_witness("aut-inverses", inverses),
            Verdict::from_witness("rho-matches-triple", descend),
            Verdict::from_witness("rho-into-c", into_c),
            Verdict::from_witness("rho-homomorphism", hom),
        ],
    }
}

/// Sizes of the fibers of `ρ` keyed by C-index; equal sizes on the image.
pub fn rho_fibers(table: &RhoTable) -> BTreeMap<usize, usize> {
    let mut fibers = BTreeMap::new();
    for &i in &table.images {
        *fibers.entry(i).or_insert(0) += 1;
    }
    fibers
}

/// Parametric enumeration against the brute-force oracle.
pub fn oracle_check(cl: &Cleavage) -> Result<Verdict> {
    let param: Vec<Vec<Elem>> = {
        let mut v: Vec<Vec<Elem>> = aut_a(cl)?.into_iter().map(|t| t.psi).collect();
        v.sort();
        v
    };
    let brute = aut_a_bruteforce(cl.hom())?;
    Ok(Verdict::check("aut-oracle-agrees", param == brute, || {
        format!("parametric {} vs brute force {}", param.len(), brute.len())
    }))
}
