//! Homomorphisms between finite monoids.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoid::{opposite, Elem, FiniteMonoid, Submonoid};

/// An element-indexed map between two monoids, audited on construction.
#[derive(Clone)]
pub struct MonoidHom {
    source: Arc<FiniteMonoid>,
    target: Arc<FiniteMonoid>,
    map: Vec<Elem>,
}

impl MonoidHom {
    pub fn new(source: Arc<FiniteMonoid>, target: Arc<FiniteMonoid>, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::Shape(format!(
                "map has {} entries for a source of order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.order()) {
            return Err(Error::Shape(format!("image {v} out of range")));
        }
        let hom = MonoidHom { source, target, map };
        hom.audit()?;
        Ok(hom)
    }

    /// Checks unit preservation and multiplicativity on every pair.
    pub fn audit(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.map[s.identity()] != t.identity() {
            return Err(Error::NotAHomomorphism(format!(
                "identity maps to {}",
                self.map[s.identity()]
            )));
        }
        for x in s.elements() {
            for y in s.elements() {
                if self.map[s.mul(x, y)] != t.mul(self.map[x], self.map[y]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "f({x}*{y}) != f({x})*f({y})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(m: &Arc<FiniteMonoid>) -> Self {
        MonoidHom {
            source: Arc::clone(m),
            target: Arc::clone(m),
            map: m.elements().collect(),
        }
    }

    /// The hom sending everything to the identity.
    pub fn trivial(source: &Arc<FiniteMonoid>, target: &Arc<FiniteMonoid>) -> Self {
        MonoidHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map: vec![target.identity(); source.order()],
        }
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn source(&self) -> &Arc<FiniteMonoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteMonoid> {
        &self.target
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &MonoidHom) -> Result<MonoidHom> {
        if !self.target.same_table(&after.source) {
            return Err(Error::Composability(
                "target of the first map differs from source of the second".into(),
            ));
        }
        Ok(MonoidHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&after.target),
            map: self.map.iter().map(|&x| after.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    /// Preimage of the identity.
    pub fn kernel(&self) -> Submonoid {
        let e = self.target.identity();
        let elements = self.source.elements().filter(|&x| self.map[x] == e).collect();
        Submonoid::new(Arc::clone(&self.source), elements).expect("kernel is a submonoid")
    }

    /// Source elements lying over `n`.
    pub fn fiber(&self, n: Elem) -> Vec<Elem> {
        self.source.elements().filter(|&x| self.map[x] == n).collect()
    }

    /// Same map between the opposite monoids.
    pub fn opposite(&self) -> MonoidHom {
        MonoidHom {
            source: Arc::new(opposite(&self.source)),
            target: Arc::new(opposite(&self.target)),
            map: self.map.clone(),
        }
    }

    pub fn inverse(&self) -> Option<MonoidHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(MonoidHom {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            map: inv,
        })
    }
}

impl PartialEq for MonoidHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && self.source.same_table(&other.source)
            && self.target.same_table(&other.target)
    }
}

impl fmt::Debug for MonoidHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonoidHom")
            .field("source_order", &self.source.order())
            .field("target_order", &self.target.order())
            .field("map", &self.map)
            .finish()
    }
}

/// Componentwise product `σ1 × σ2 : M1 × M2 -> N1 × N2`.
pub fn product_hom(sigma1: &MonoidHom, sigma2: &MonoidHom) -> Result<(MonoidHom, crate::monoid::Product, crate::monoid::Product)> {
    let src = crate::monoid::product_monoid(sigma1.source(), sigma2.source())?;
    let tgt = crate::monoid::product_monoid(sigma1.target(), sigma2.target())?;
    let b_src = sigma2.source().order();
    let b_tgt = sigma2.target().order();
    let map = src
        .monoid
        .elements()
        .map(|x| sigma1.apply(x / b_src) * b_tgt + sigma2.apply(x % b_src))
        .collect();
    let hom = MonoidHom::new(Arc::clone(&src.monoid), Arc::clone(&tgt.monoid), map)?;
    Ok((hom, src, tgt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::monoid::{product_monoid, pullback};

    #[test]
    fn kernels() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        assert_eq!(MonoidHom::identity(&c2).kernel().len(), 1);

        let p = product_monoid(&c2, &c2).unwrap();
        let k = p.first.kernel();
        assert_eq!(k.len(), 2);
        assert!(k.elements().iter().all(|&x| x / 2 == 0));

        // C(3,3) -> C3, t^i -> t^(i mod 3): kernel {t^0, t^3}
        let sigma = generators::c33_to_c3();
        assert_eq!(sigma.kernel().elements(), &[0, 3]);
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let c3 = Arc::new(generators::cyclic_group(3).unwrap());
        assert!(matches!(
            MonoidHom::new(Arc::clone(&c2), Arc::clone(&c3), vec![0, 1]),
            Err(Error::NotAHomomorphism(_))
        ));
        assert!(matches!(
            MonoidHom::new(c2, c3, vec![1, 0]),
            Err(Error::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn pullbacks() {
        let c4 = Arc::new(generators::cyclic_group(4).unwrap());
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let id = MonoidHom::identity(&c2);

        let diag = pullback(&id, &id).unwrap();
        assert_eq!(diag.monoid.order(), 2);

        let s = MonoidHom::new(Arc::clone(&c4), Arc::clone(&c2), vec![0, 1, 0, 1]).unwrap();
        let pb = pullback(&s, &id).unwrap();
        assert_eq!(pb.monoid.order(), 4);

        let one = Arc::new(FiniteMonoid::trivial());
        let incl = MonoidHom::trivial(&one, &c2);
        let fib = pullback(&s, &incl).unwrap();
        assert_eq!(fib.monoid.order(), s.kernel().len());
    }

    #[test]
    fn composition_and_inverse() {
        let c4 = Arc::new(generators::cyclic_group(4).unwrap());
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let s = MonoidHom::new(Arc::clone(&c4), Arc::clone(&c2), vec![0, 1, 0, 1]).unwrap();
        let inv = MonoidHom::new(Arc::clone(&c4), Arc::clone(&c4), vec![0, 3, 2, 1]).unwrap();
        assert_eq!(inv.then(&s).unwrap().map(), s.map());
        assert_eq!(inv.inverse().unwrap().map(), inv.map());
        assert!(s.then(&inv).is_err());
    }
}
