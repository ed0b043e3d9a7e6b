//! Schreier extensions, congruence, and the correspondence between cohomology
//! classes and congruence classes of extensions.

use std::sync::Arc;

use serde::Serialize;

use super::{h2, NModule, SEARCH_LIMIT};
use crate::cleavage::{canonical_cleavage, extract_action};
use crate::error::{Error, Result};
use crate::fibration::{analyze, is_cartesian_morphism};
use crate::groth::groth;
use crate::hom::MonoidHom;
use crate::monoid::{Elem, FiniteMonoid};
use crate::util::PointedMaps;
use crate::verdict::Verdict;

/// `1 -> A --ι--> M --σ--> N -> 1` together with the module structure on `A`.
#[derive(Debug, Clone)]
pub struct ExtensionRecord {
    pub module: Arc<NModule>,
    pub total: Arc<FiniteMonoid>,
    pub iota: MonoidHom,
    pub sigma: MonoidHom,
}

impl ExtensionRecord {
    /// The four Schreier conditions, then the regularity flag as a separate value.
    pub fn schreier_conditions(&self) -> Vec<Verdict> {
        let (m, a) = (&self.total, self.module.carrier());
        let r = analyze(&self.sigma);
        let trivial = a
            .elements()
            .find(|&x| self.sigma.apply(self.iota.apply(x)) != self.sigma.target().identity())
            .map(|x| format!("a={x}"));
        let mut image: Vec<Elem> = self.iota.map().to_vec();
        image.sort_unstable();
        let iso = self.iota.is_injective() && image.as_slice() == r.kernel();
        let compatible = a
            .elements()
            .flat_map(|x| m.elements().map(move |y| (x, y)))
            .find(|&(x, y)| {
                let lhs = m.mul(self.iota.apply(x), y);
                let rhs = m.mul(y, self.iota.apply(self.module.phi(self.sigma.apply(y), x)));
                lhs != rhs
            })
            .map(|(x, y)| format!("a={x} x={y}"));
        vec![
            Verdict::from_witness("schreier-kernel-trivial", trivial),
            Verdict::check("schreier-prefibration", r.is_prefibration, || "σ is not a prefibration".into()),
            Verdict::check("schreier-kernel-iso", iso, || "ι is not onto the kernel".into()),
            Verdict::from_witness("schreier-action-compatible", compatible),
        ]
    }

    pub fn is_schreier(&self) -> bool {
        self.schreier_conditions().iter().all(|v| v.passed)
    }

    pub fn is_regular(&self) -> bool {
        analyze(&self.sigma).is_fibration
    }
}

/// The Grothendieck construction of `(φ, γ)` with its inclusion and projection.
pub fn extension_from_cocycle(c: &super::Cocycle2) -> Result<ExtensionRecord> {
    let action = Arc::new(c.module.to_action(&c.gamma));
    let g = groth(&action)?;
    Ok(ExtensionRecord {
        module: Arc::clone(&c.module),
        total: Arc::clone(&g.underlying),
        iota: g.inclusion,
        sigma: g.projection,
    })
}

fn same_shape(e: &ExtensionRecord, f: &ExtensionRecord) -> bool {
    e.module == f.module && e.sigma.target().same_table(f.sigma.target())
}

/// A cartesian `β: M -> M'` with `β ι = ι'` and `σ' β = σ`, if one exists.
///
/// `β` is fixed by its values on a cleavage: `β(κ(n)) = κ'(n) ι'(t(n))` with
/// `t: N -> A^×` pointed, so only those maps are tried.
pub fn congruent(e: &ExtensionRecord, f: &ExtensionRecord) -> Option<MonoidHom> {
    if !same_shape(e, f) {
        return None;
    }
    let cl = canonical_cleavage(&e.sigma).ok()?;
    let cl2 = canonical_cleavage(&f.sigma).ok()?;
    let (m, m2) = (&e.total, &f.total);
    let a = e.module.carrier();
    let n = e.sigma.target();
    let mut iota_inv = vec![usize::MAX; m.order()];
    for x in a.elements() {
        iota_inv[e.iota.apply(x)] = x;
    }
    // a_x with x = κ(σx) ι(a_x)
    let coords: Vec<Elem> = m.elements().map(|x| iota_inv[cl.embed().apply(cl.xi(x))]).collect();
    let units = e.module.units();
    PointedMaps::new(n.order(), n.identity(), a.identity(), &units).find_map(|t| {
        let map = m
            .elements()
            .map(|x| {
                let b = e.sigma.apply(x);
                m2.mul(m2.mul(cl2.kappa()[b], f.iota.apply(t[b])), f.iota.apply(coords[x]))
            })
            .collect();
        let beta = MonoidHom::new(Arc::clone(m), Arc::clone(m2), map).ok()?;
        let commutes = a.elements().all(|x| beta.apply(e.iota.apply(x)) == f.iota.apply(x))
            && m.elements().all(|x| f.sigma.apply(beta.apply(x)) == e.sigma.apply(x));
        (commutes && is_cartesian_morphism(&beta, &e.sigma, &f.sigma).ok()?).then_some(beta)
    })
}

struct ExtensionSearch<'a> {
    module: &'a NModule,
    p: usize,
    k: usize,
    prod: Vec<Option<Elem>>,
    cells: Vec<(Elem, Elem)>,
    nodes: u64,
    limit: u64,
    out: Vec<Vec<Elem>>,
}

impl ExtensionSearch<'_> {
    fn get(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.prod[x * self.k + y]
    }

    /// Every associativity triple and action-compatibility pair in which
    /// `(x, y)` takes part and whose other cells are known.
    fn consistent(&self, x: Elem, y: Elem) -> bool {
        let z = self.get(x, y).expect("just assigned");
        let k = self.k;
        for r in 0..k {
            // (x y) r = x (y r)
            if let (Some(zr), Some(yr)) = (self.get(z, r), self.get(y, r)) {
                if let Some(v) = self.get(x, yr) {
                    if v != zr {
                        return false;
                    }
                }
            }
            // (r x) y = r (x y)
            if let (Some(rx), Some(rz)) = (self.get(r, x), self.get(r, z)) {
                if let Some(v) = self.get(rx, y) {
                    if v != rz {
                        return false;
                    }
                }
            }
        }
        for p in 0..k {
            for q in 0..k {
                // (p q) y = p (q y) with p q = x
                if self.get(p, q) == Some(x) {
                    if let Some(qy) = self.get(q, y) {
                        if let Some(v) = self.get(p, qy) {
                            if v != z {
                                return false;
                            }
                        }
                    }
                }
                // x (p q) = (x p) q with p q = y
                if self.get(p, q) == Some(y) {
                    if let Some(xp) = self.get(x, p) {
                        if let Some(v) = self.get(xp, q) {
                            if v != z {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        // ι(a) x = x ι(φ_{σx}(a))
        let (p, n) = (self.p, self.module.acting());
        let one = n.identity();
        let iota = |a: Elem| one * p + a;
        if x / p == one {
            let partner = iota(self.module.phi(y / p, x % p));
            if let Some(v) = self.get(y, partner) {
                if v != z {
                    return false;
                }
            }
        }
        if y / p == one {
            for a in self.module.carrier().elements() {
                if self.module.phi(x / p, a) == y % p {
                    if let Some(v) = self.get(iota(a), x) {
                        if v != z {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SizeLimit {
                what: "extension search nodes".into(),
                requested: (self.p as u128).checked_pow(self.cells.len() as u32).unwrap_or(u128::MAX),
                limit: self.limit as u128,
            });
        }
        if depth == self.cells.len() {
            self.out.push(self.prod.iter().map(|v| v.expect("complete")).collect());
            return Ok(());
        }
        let (x, y) = self.cells[depth];
        let n = self.module.acting();
        let base = n.mul(x / self.p, y / self.p) * self.p;
        for a in 0..self.p {
            self.prod[x * self.k + y] = Some(base + a);
            if self.consistent(x, y) {
                self.run(depth + 1)?;
            }
        }
        self.prod[x * self.k + y] = None;
        Ok(())
    }
}

/// Every monoid structure on `N × A` (pairs `(n, a)` at `n·|A| + a`) for which
/// the first projection is a homomorphism, `a ↦ (1, a)` is a homomorphism, and
/// `ι(a) x = x ι(φ_{σx}(a))`; kept when the projection is a prefibration
/// (a fibration if `regular`). Pure table search, no cocycles involved.
pub fn enumerate_extensions(module: &Arc<NModule>, regular: bool) -> Result<Vec<ExtensionRecord>> {
    enumerate_extensions_bounded(module, regular, SEARCH_LIMIT)
}

pub fn enumerate_extensions_bounded(module: &Arc<NModule>, regular: bool, limit: u64) -> Result<Vec<ExtensionRecord>> {
    let (n, a) = (module.acting(), module.carrier());
    let p = a.order();
    let k = n.order() * p;
    crate::monoid::check_size("extension search", k)?;
    let e = n.identity() * p + a.identity();
    let mut prod = vec![None; k * k];
    let mut cells = Vec::new();
    for x in 0..k {
        for y in 0..k {
            if x == e {
                prod[x * k + y] = Some(y);
            } else if y == e {
                prod[x * k + y] = Some(x);
            } else if x / p == n.identity() && y / p == n.identity() {
                prod[x * k + y] = Some(n.identity() * p + a.mul(x % p, y % p));
            } else {
                cells.push((x, y));
            }
        }
    }
    let mut s = ExtensionSearch {
        module,
        p,
        k,
        prod,
        cells,
        nodes: 0,
        limit,
        out: Vec::new(),
    };
    s.run(0)?;
    let names: Vec<String> = (0..k).map(|x| format!("({},{})", n.name(x / p), a.name(x % p))).collect();
    let mut out = Vec::new();
    for table in s.out {
        let total = Arc::new(FiniteMonoid::from_flat(k, table, e, Some(names.clone()))?);
        let sigma = MonoidHom::new(Arc::clone(&total), Arc::clone(n), (0..k).map(|x| x / p).collect())?;
        let iota = MonoidHom::new(Arc::clone(a), Arc::clone(&total), a.elements().map(|x| n.identity() * p + x).collect())?;
        let r = analyze(&sigma);
        if (regular && r.is_fibration) || (!regular && r.is_prefibration) {
            out.push(ExtensionRecord {
                module: Arc::clone(module),
                total,
                iota,
                sigma,
            });
        }
    }
    Ok(out)
}

/// Cocycle of an extension read off its canonical cleavage, in carrier indices.
pub fn extension_cocycle(e: &ExtensionRecord) -> Result<Vec<Elem>> {
    let cl = canonical_cleavage(&e.sigma)?;
    let action = extract_action(&cl);
    // kernel positions -> carrier indices through ι
    let a = e.module.carrier();
    let mut to_carrier = vec![usize::MAX; cl.kernel().order()];
    for x in a.elements() {
        let pos = cl.embed().map().binary_search(&e.iota.apply(x)).map_err(|_| {
            Error::NotRegularSchreier("ι does not land in the kernel".into())
        })?;
        to_carrier[pos] = x;
    }
    let n = e.sigma.target();
    for x in cl.kernel().elements() {
        for b in n.elements() {
            if to_carrier[action.phi(b, x)] != e.module.phi(b, to_carrier[x]) {
                return Err(Error::NotRegularSchreier(format!("induced action differs at n={b}")));
            }
        }
    }
    Ok(action.gamma_rows().into_iter().flatten().map(|g| to_carrier[g]).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub classes: usize,
    pub cocycles: usize,
    pub extensions: usize,
    pub congruence_classes: usize,
    pub verdicts: Vec<Verdict>,
}

/// Checks that `γ ↦ Groth(φ, γ)` induces a bijection from cohomology classes to
/// congruence classes of (regular) Schreier extensions. The extension side is
/// enumerated independently by [`enumerate_extensions`].
pub fn verify_h2_bijection(module: &Arc<NModule>, regular: bool) -> Result<BijectionReport> {
    let h = h2(module, regular)?;
    let exts: Vec<ExtensionRecord> = h.cocycles.iter().map(extension_from_cocycle).collect::<Result<_>>()?;
    let reps = h.representatives();

    let schreier = exts
        .iter()
        .enumerate()
        .find(|(i, e)| !e.is_schreier() || e.is_regular() != h.cocycles[*i].is_regular())
        .map(|(i, _)| format!("cocycle {i}"));

    let well_defined = exts
        .iter()
        .enumerate()
        .find(|(i, e)| congruent(&exts[reps[h.class_of[*i]]], e).is_none())
        .map(|(i, _)| format!("cocycle {i}"));

    let mut injective = None;
    'outer: for (ci, &i) in reps.iter().enumerate() {
        for (cj, &j) in reps.iter().enumerate() {
            if ci != cj && congruent(&exts[i], &exts[j]).is_some() {
                injective = Some(format!("classes {ci} and {cj}"));
                break 'outer;
            }
        }
    }

    let labeled = enumerate_extensions(module, regular)?;
    let mut hit = vec![false; h.classes.len()];
    let mut classified = None;
    for (i, e) in labeled.iter().enumerate() {
        let found = extension_cocycle(e).ok().and_then(|g| h.class_index(&g));
        match found {
            Some(c) if congruent(&exts[reps[c]], e).is_some() => hit[c] = true,
            _ => {
                classified.get_or_insert_with(|| format!("extension {i}"));
            }
        }
    }
    let congruence_classes = hit.iter().filter(|&&b| b).count();
    let surjective = hit.iter().position(|&b| !b).map(|c| format!("class {c} not realized"));

    Ok(BijectionReport {
        classes: h.classes.len(),
        cocycles: h.cocycles.len(),
        extensions: labeled.len(),
        congruence_classes,
        verdicts: vec![
            Verdict::from_witness("cocycle-extension-is-schreier", schreier),
            Verdict::from_witness("cohomologous-implies-congruent", well_defined),
            Verdict::from_witness("congruent-implies-cohomologous", injective),
            Verdict::from_witness("extensions-classified", classified),
            Verdict::from_witness("every-class-realized", surjective),
        ],
    })
}
