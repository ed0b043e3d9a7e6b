//! Isomorphism search by backtracking over generator images.
//!
//! The source's greedy generating set is fixed; candidate images are tried in
//! increasing index order, so the first isomorphism found is the
//! lexicographically least one in generator-image order. After every generator
//! is placed the partial map is extended over the generated submonoid and
//! checked on every (element, generator) edge, which certifies multiplicativity.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::hom::MonoidHom;
use crate::monoid::{Elem, FiniteMonoid};

/// Isomorphism invariants of a single element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Signature {
    index: usize,
    period: usize,
    unit: bool,
    central: bool,
}

fn signatures(m: &FiniteMonoid) -> Vec<Signature> {
    m.elements()
        .map(|x| {
            let (index, period) = m.index_period(x);
            Signature {
                index,
                period,
                unit: m.is_unit(x),
                central: m.elements().all(|y| m.mul(x, y) == m.mul(y, x)),
            }
        })
        .collect()
}

struct Search<'a> {
    src: &'a FiniteMonoid,
    dst: &'a FiniteMonoid,
    gens: Vec<Elem>,
    src_sig: Vec<Signature>,
    dst_sig: Vec<Signature>,
    images: Vec<Elem>,
}

impl Search<'_> {
    /// Extends the assignment of the first `k` generator images to the
    /// generated submonoid. Returns `None` on inconsistency or collision.
    fn extend(&self, k: usize) -> Option<Vec<Option<Elem>>> {
        let (src, dst) = (self.src, self.dst);
        let mut map: Vec<Option<Elem>> = vec![None; src.order()];
        let mut used = vec![false; dst.order()];
        map[src.identity()] = Some(dst.identity());
        used[dst.identity()] = true;
        let mut queue = VecDeque::from([src.identity()]);
        while let Some(e) = queue.pop_front() {
            let fe = map[e].expect("queued elements are mapped");
            for j in 0..k {
                let (g, fg) = (self.gens[j], self.images[j]);
                let x = src.mul(e, g);
                let fx = dst.mul(fe, fg);
                match map[x] {
                    Some(y) if y != fx => return None,
                    Some(_) => {}
                    None => {
                        if used[fx] || self.src_sig[x] != self.dst_sig[fx] {
                            return None;
                        }
                        used[fx] = true;
                        map[x] = Some(fx);
                        queue.push_back(x);
                    }
                }
            }
        }
        Some(map)
    }

    fn run(&mut self, k: usize, out: &mut Vec<Vec<Elem>>, first_only: bool) {
        if first_only && !out.is_empty() {
            return;
        }
        let Some(partial) = self.extend(k) else {
            return;
        };
        if k == self.gens.len() {
            let map: Vec<Elem> = partial.into_iter().map(|v| v.expect("generators cover the source")).collect();
            out.push(map);
            return;
        }
        let g = self.gens[k];
        for y in self.dst.elements() {
            if self.src_sig[g] != self.dst_sig[y] {
                continue;
            }
            self.images.push(y);
            self.run(k + 1, out, first_only);
            self.images.pop();
            if first_only && !out.is_empty() {
                return;
            }
        }
    }
}

fn search(m: &FiniteMonoid, n: &FiniteMonoid, first_only: bool) -> Vec<Vec<Elem>> {
    if m.order() != n.order() {
        return Vec::new();
    }
    let src_sig = signatures(m);
    let dst_sig = signatures(n);
    let mut sorted_a = src_sig.iter().map(|s| (s.index, s.period, s.unit, s.central)).collect::<Vec<_>>();
    let mut sorted_b = dst_sig.iter().map(|s| (s.index, s.period, s.unit, s.central)).collect::<Vec<_>>();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return Vec::new();
    }
    if m.is_commutative() != n.is_commutative() {
        return Vec::new();
    }
    let mut s = Search {
        src: m,
        dst: n,
        gens: m.generating_set(),
        src_sig,
        dst_sig,
        images: Vec::new(),
    };
    let mut out = Vec::new();
    s.run(0, &mut out, first_only);
    out
}

/// Least isomorphism `M -> N` in generator-image order, if one exists.
pub fn find_isomorphism(m: &Arc<FiniteMonoid>, n: &Arc<FiniteMonoid>) -> Option<MonoidHom> {
    search(m, n, true).into_iter().next().map(|map| {
        let hom = MonoidHom::new(Arc::clone(m), Arc::clone(n), map).expect("certified homomorphism");
        debug_assert!(hom.is_bijective());
        hom
    })
}

/// All isomorphisms `M -> N`, in generator-image order.
pub fn isomorphisms(m: &Arc<FiniteMonoid>, n: &Arc<FiniteMonoid>) -> Vec<MonoidHom> {
    search(m, n, false)
        .into_iter()
        .map(|map| MonoidHom::new(Arc::clone(m), Arc::clone(n), map).expect("certified homomorphism"))
        .collect()
}

/// All automorphisms of `M` as permutations, sorted.
pub fn automorphisms(m: &Arc<FiniteMonoid>) -> Vec<Vec<Elem>> {
    let mut perms = search(m, m, false);
    perms.sort();
    perms
}
