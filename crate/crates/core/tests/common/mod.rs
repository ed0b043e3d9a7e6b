//! Brute-force oracles written straight from the definitions. They share no
//! code with the library beyond reading Cayley tables.
#![allow(dead_code)]

use schreier::{Elem, FiniteMonoid, MonoidHom};

pub fn table(m: &FiniteMonoid) -> Vec<Vec<Elem>> {
    m.rows()
}

pub fn is_hom(s: &FiniteMonoid, t: &FiniteMonoid, f: &[Elem]) -> bool {
    f[s.identity()] == t.identity()
        && s.elements().all(|x| s.elements().all(|y| f[s.mul(x, y)] == t.mul(f[x], f[y])))
}

/// x such that every z over σ(x) is x·y for exactly one kernel element y.
pub fn pcar(h: &MonoidHom) -> Vec<Elem> {
    let (m, n) = (h.source(), h.target());
    let kernel: Vec<Elem> = m.elements().filter(|&y| h.apply(y) == n.identity()).collect();
    m.elements()
        .filter(|&x| {
            m.elements()
                .filter(|&z| h.apply(z) == h.apply(x))
                .all(|z| kernel.iter().filter(|&&y| m.mul(x, y) == z).count() == 1)
        })
        .collect()
}

/// Existence of lifts of factorisations, and their uniqueness.
pub fn car(h: &MonoidHom) -> Vec<Elem> {
    let (m, n) = (h.source(), h.target());
    m.elements()
        .filter(|&x| {
            let lifts = m.elements().all(|z| {
                n.elements()
                    .filter(|&v| h.apply(z) == n.mul(h.apply(x), v))
                    .all(|v| m.elements().any(|y| m.mul(x, y) == z && h.apply(y) == v))
            });
            let unique = m.elements().all(|y1| {
                m.elements()
                    .all(|y2| !(m.mul(x, y1) == m.mul(x, y2) && h.apply(y1) == h.apply(y2)) || y1 == y2)
            });
            lifts && unique
        })
        .collect()
}

pub fn covers(h: &MonoidHom, xs: &[Elem]) -> bool {
    h.target().elements().all(|b| xs.iter().any(|&x| h.apply(x) == b))
}

/// Every permutation of `0..k` fixing `fixed`, by plain recursion.
pub fn permutations_fixing(k: usize, fixed: Elem) -> Vec<Vec<Elem>> {
    fn go(k: usize, cur: &mut Vec<Elem>, used: &mut Vec<bool>, out: &mut Vec<Vec<Elem>>, fixed: Elem) {
        let i = cur.len();
        if i == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..k {
            if used[v] || (i == fixed) != (v == fixed) {
                continue;
            }
            used[v] = true;
            cur.push(v);
            go(k, cur, used, out, fixed);
            cur.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut vec![false; k], &mut out, fixed);
    out
}

/// Whether some bijection is a homomorphism between the two tables.
pub fn isomorphic(m: &FiniteMonoid, n: &FiniteMonoid) -> bool {
    if m.order() != n.order() {
        return false;
    }
    permutations_fixing(m.order(), m.identity()).into_iter().any(|p| {
        // p maps identity to identity only when both identities agree; relabel
        let f: Vec<Elem> = p
            .iter()
            .map(|&v| {
                if v == m.identity() {
                    n.identity()
                } else if v == n.identity() {
                    m.identity()
                } else {
                    v
                }
            })
            .collect();
        is_hom(m, n, &f)
    })
}

/// Automorphisms ψ of M with ψ(ker σ) = ker σ and ψ(Pcar) ⊆ Pcar.
pub fn kernel_cartesian_automorphisms(h: &MonoidHom) -> Vec<Vec<Elem>> {
    let m = h.source();
    let n = h.target();
    let kernel: Vec<Elem> = m.elements().filter(|&y| h.apply(y) == n.identity()).collect();
    let p = pcar(h);
    let mut out: Vec<Vec<Elem>> = permutations_fixing(m.order(), m.identity())
        .into_iter()
        .filter(|f| {
            is_hom(m, m, f)
                && kernel.iter().all(|&k| kernel.contains(&f[k]))
                && p.iter().all(|&x| p.contains(&f[x]))
        })
        .collect();
    out.sort();
    out
}

/// A commutative `A` with `φ_n(a)` given as a closure.
pub struct Module<'a> {
    pub n: &'a FiniteMonoid,
    pub a: &'a FiniteMonoid,
    pub phi: Vec<Vec<Elem>>, // phi[n][a]
}

impl Module<'_> {
    fn units(&self) -> Vec<Elem> {
        self.a
            .elements()
            .filter(|&x| self.a.elements().any(|y| self.a.mul(x, y) == self.a.identity()))
            .collect()
    }

    fn is_cocycle(&self, g: &[Elem]) -> bool {
        let (n, a) = (self.n, self.a);
        let k = n.order();
        let gam = |x: Elem, y: Elem| g[x * k + y];
        n.elements().all(|x| gam(n.identity(), x) == a.identity() && gam(x, n.identity()) == a.identity())
            && n.elements().all(|x| {
                n.elements().all(|y| {
                    n.elements().all(|z| {
                        a.mul(gam(n.mul(x, y), z), self.phi[z][gam(x, y)])
                            == a.mul(gam(x, n.mul(y, z)), gam(y, z))
                    })
                })
            })
    }

    /// All normalized cocycle tables by exhaustive enumeration.
    pub fn cocycles(&self, regular: bool) -> Vec<Vec<Elem>> {
        let k = self.n.order();
        let values: Vec<Elem> = if regular { self.units() } else { self.a.elements().collect() };
        let cells = k * k;
        let mut out = Vec::new();
        let mut idx = vec![0usize; cells];
        loop {
            let g: Vec<Elem> = idx.iter().map(|&i| values[i]).collect();
            if self.is_cocycle(&g) {
                out.push(g);
            }
            let mut c = cells;
            loop {
                if c == 0 {
                    return out;
                }
                c -= 1;
                idx[c] += 1;
                if idx[c] < values.len() {
                    break;
                }
                idx[c] = 0;
            }
        }
    }

    /// Classes under γ τ(mn) = γ' τ(n) φ_n(τ(m)) with τ: N → A^×, τ(1) = 1.
    pub fn class_count(&self, cocycles: &[Vec<Elem>]) -> usize {
        let (n, a) = (self.n, self.a);
        let k = n.order();
        let units = self.units();
        let mut taus: Vec<Vec<Elem>> = vec![vec![]];
        for b in n.elements() {
            let opts: Vec<Elem> = if b == n.identity() { vec![a.identity()] } else { units.clone() };
            taus = taus
                .into_iter()
                .flat_map(|t| {
                    opts.iter().map(move |&v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        let related = |g: &[Elem], h: &[Elem]| {
            taus.iter().any(|t| {
                n.elements().all(|x| {
                    n.elements().all(|y| {
                        a.mul(g[x * k + y], t[n.mul(x, y)]) == a.product([h[x * k + y], t[y], self.phi[y][t[x]]])
                    })
                })
            })
        };
        let mut parent: Vec<usize> = (0..cocycles.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for i in 0..cocycles.len() {
            for j in i + 1..cocycles.len() {
                if related(&cocycles[i], &cocycles[j]) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        (0..cocycles.len()).filter(|&i| find(&mut parent, i) == i).count()
    }
}

/// Bijections β: M → M' with σ'β = σ, β ι = ι' that are homomorphisms.
pub fn congruent(
    m: &FiniteMonoid,
    sigma: &[Elem],
    iota: &[Elem],
    m2: &FiniteMonoid,
    sigma2: &[Elem],
    iota2: &[Elem],
) -> bool {
    if m.order() != m2.order() {
        return false;
    }
    permutations_fixing(m.order(), m.identity()).into_iter().any(|p| {
        let f: Vec<Elem> = p
            .iter()
            .map(|&v| {
                if v == m.identity() {
                    m2.identity()
                } else if v == m2.identity() {
                    m.identity()
                } else {
                    v
                }
            })
            .collect();
        m.elements().all(|x| sigma2[f[x]] == sigma[x])
            && iota.iter().zip(iota2).all(|(&x, &y)| f[x] == y)
            && is_hom(m, m2, &f)
    })
}
