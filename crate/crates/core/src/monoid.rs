//! Finite monoids stored as Cayley tables.
//!
//! Elements are dense indices `0..order`. The identity is an explicit field, so
//! tables imported from elsewhere keep their numbering. Every constructor audits
//! associativity and the identity law; downstream code relies on that.

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom::MonoidHom;

/// Element index inside a [`FiniteMonoid`].
pub type Elem = usize;

static SIZE_LIMIT: AtomicUsize = AtomicUsize::new(4096);

/// Largest order a constructed monoid may have.
pub fn size_limit() -> usize {
    SIZE_LIMIT.load(Ordering::Relaxed)
}

pub fn set_size_limit(limit: usize) {
    SIZE_LIMIT.store(limit, Ordering::Relaxed);
}

pub(crate) fn check_size(what: &str, requested: usize) -> Result<()> {
    let limit = size_limit();
    if requested > limit {
        return Err(Error::SizeLimit {
            what: what.to_string(),
            requested: requested as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    order: usize,
    identity: Elem,
    table: Vec<Elem>,
    names: Option<Vec<String>>,
}

/// Serialized form: `{"order": n, "identity": i, "table": [[...]], "names": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonoidJson {
    pub order: usize,
    pub identity: Elem,
    pub table: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl FiniteMonoid {
    /// Validates a square table and returns the monoid.
    pub fn new(table: Vec<Vec<Elem>>, identity: Elem, names: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::Shape("empty table".into()));
        }
        check_size("monoid order", order)?;
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::Shape(format!("entry {v} in row {i} out of range")));
                }
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(order, flat, identity, names)
    }

    /// Same as [`FiniteMonoid::new`] but takes a row-major flat table.
    pub fn from_flat(
        order: usize,
        table: Vec<Elem>,
        identity: Elem,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::Shape(format!(
                "flat table of length {} does not match order {order}",
                table.len()
            )));
        }
        check_size("monoid order", order)?;
        if identity >= order {
            return Err(Error::Shape(format!("identity {identity} out of range")));
        }
        if let Some(v) = table.iter().find(|&&v| v >= order) {
            return Err(Error::Shape(format!("entry {v} out of range")));
        }
        if let Some(names) = &names {
            if names.len() != order {
                return Err(Error::Shape(format!(
                    "{} names for {order} elements",
                    names.len()
                )));
            }
            let mut sorted: Vec<&String> = names.iter().collect();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Shape("element names are not distinct".into()));
            }
        }
        let m = FiniteMonoid {
            order,
            identity,
            table,
            names,
        };
        m.audit()?;
        Ok(m)
    }

    /// Full identity and associativity check.
    pub fn audit(&self) -> Result<()> {
        let e = self.identity;
        for x in 0..self.order {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(Error::BadIdentity { identity: e, x });
            }
        }
        for x in 0..self.order {
            for y in 0..self.order {
                let xy = self.mul(x, y);
                for z in 0..self.order {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        FiniteMonoid {
            order: 1,
            identity: 0,
            table: vec![0],
            names: Some(vec!["1".into()]),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x * self.order + y]
    }

    /// Product of a sequence, left to right.
    pub fn product<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, x: Elem) -> String {
        match &self.names {
            Some(n) => n[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        let rebuilt = FiniteMonoid::from_flat(self.order, std::mem::take(&mut self.table), self.identity, Some(names))?;
        Ok(rebuilt)
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Structural equality ignoring display names.
    pub fn same_table(&self, other: &FiniteMonoid) -> bool {
        self.order == other.order && self.identity == other.identity && self.table == other.table
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Two-sided inverse of `x`, if any.
    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        (0..self.order).find(|&y| self.mul(x, y) == self.identity && self.mul(y, x) == self.identity)
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.inverse(x).is_some()
    }

    pub fn is_group(&self) -> bool {
        (0..self.order).all(|x| self.is_unit(x))
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.mul(x, x) == x
    }

    /// The group of units as a submonoid.
    pub fn units(self: &Arc<Self>) -> Submonoid {
        let elements = (0..self.order).filter(|&x| self.is_unit(x)).collect();
        Submonoid {
            parent: Arc::clone(self),
            elements,
        }
    }

    /// `(index, period)` of the monogenic submonoid generated by `x`:
    /// `x^(index+period) = x^index` with both minimal, powers counted from `x^0 = 1`.
    pub fn index_period(&self, x: Elem) -> (usize, usize) {
        let mut seen = vec![usize::MAX; self.order];
        let mut p = self.identity;
        let mut k = 0;
        loop {
            if seen[p] != usize::MAX {
                return (seen[p], k - seen[p]);
            }
            seen[p] = k;
            p = self.mul(p, x);
            k += 1;
        }
    }

    /// Order of `x` in the group case: least `k >= 1` with `x^k = 1`, if any.
    pub fn element_order(&self, x: Elem) -> Option<usize> {
        let (index, period) = self.index_period(x);
        (index == 0).then_some(period)
    }

    /// Membership mask of the submonoid generated by `gens`.
    pub fn generated(&self, gens: &[Elem]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        let mut queue = VecDeque::new();
        mask[self.identity] = true;
        queue.push_back(self.identity);
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let f = self.mul(e, g);
                if !mask[f] {
                    mask[f] = true;
                    queue.push_back(f);
                }
            }
        }
        mask
    }

    /// A small generating set, built greedily: at each step add the element that
    /// enlarges the generated submonoid the most (ties to the smallest index).
    pub fn generating_set(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut mask = self.generated(&gens);
        while mask.iter().any(|&b| !b) {
            let mut best: Option<(usize, Elem, Vec<bool>)> = None;
            for x in (0..self.order).filter(|&x| !mask[x]) {
                let mut trial = gens.clone();
                trial.push(x);
                let m = self.generated(&trial);
                let size = m.iter().filter(|&&b| b).count();
                if best.as_ref().is_none_or(|(s, _, _)| size > *s) {
                    best = Some((size, x, m));
                }
            }
            let (_, x, m) = best.expect("some element is missing");
            gens.push(x);
            mask = m;
        }
        gens
    }

    pub fn to_json(&self) -> MonoidJson {
        MonoidJson {
            order: self.order,
            identity: self.identity,
            table: self.rows(),
            names: self.names.clone(),
        }
    }
}

impl TryFrom<MonoidJson> for FiniteMonoid {
    type Error = Error;

    fn try_from(j: MonoidJson) -> Result<Self> {
        if j.table.len() != j.order {
            return Err(Error::Shape(format!(
                "order {} but table has {} rows",
                j.order,
                j.table.len()
            )));
        }
        FiniteMonoid::new(j.table, j.identity, j.names)
    }
}

impl Serialize for FiniteMonoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMonoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MonoidJson::deserialize(d)?;
        FiniteMonoid::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMonoid")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("table", &self.rows())
            .finish()
    }
}

/// A submonoid given by a sorted element set of its parent.
#[derive(Debug, Clone)]
pub struct Submonoid {
    parent: Arc<FiniteMonoid>,
    elements: Vec<Elem>,
}

impl Submonoid {
    /// Validates closure and identity membership.
    pub fn new(parent: Arc<FiniteMonoid>, mut elements: Vec<Elem>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.binary_search(&parent.identity()).is_err() {
            return Err(Error::Shape("submonoid misses the identity".into()));
        }
        for &x in &elements {
            for &y in &elements {
                if elements.binary_search(&parent.mul(x, y)).is_err() {
                    return Err(Error::Shape(format!("submonoid not closed at ({x},{y})")));
                }
            }
        }
        Ok(Submonoid { parent, elements })
    }

    pub fn parent(&self) -> &Arc<FiniteMonoid> {
        &self.parent
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of a parent element inside the sorted element list.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The submonoid as a standalone monoid, renumbered by sorted position,
    /// together with its embedding into the parent.
    pub fn to_monoid(&self) -> (Arc<FiniteMonoid>, MonoidHom) {
        let k = self.elements.len();
        let mut table = Vec::with_capacity(k * k);
        for &x in &self.elements {
            for &y in &self.elements {
                table.push(self.position(self.parent.mul(x, y)).expect("closed"));
            }
        }
        let identity = self.position(self.parent.identity()).expect("contains identity");
        let names = self.parent.names().map(|_| {
            self.elements.iter().map(|&x| self.parent.name(x)).collect()
        });
        let sub = Arc::new(
            FiniteMonoid::from_flat(k, table, identity, names).expect("submonoid of a valid monoid"),
        );
        let embed = MonoidHom::new(Arc::clone(&sub), Arc::clone(&self.parent), self.elements.clone())
            .expect("inclusion is a homomorphism");
        (sub, embed)
    }
}

/// Direct product with its projections; `(m, n)` is encoded as `m * |N| + n`.
#[derive(Debug, Clone)]
pub struct Product {
    pub monoid: Arc<FiniteMonoid>,
    pub first: MonoidHom,
    pub second: MonoidHom,
}

pub fn product_monoid(m: &Arc<FiniteMonoid>, n: &Arc<FiniteMonoid>) -> Result<Product> {
    let (a, b) = (m.order(), n.order());
    check_size("product order", a.saturating_mul(b))?;
    let order = a * b;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (x1, x2) = (x / b, x % b);
        for y in 0..order {
            let (y1, y2) = (y / b, y % b);
            table.push(m.mul(x1, y1) * b + n.mul(x2, y2));
        }
    }
    let names = match (m.names(), n.names()) {
        (Some(_), Some(_)) => Some(
            (0..order)
                .map(|x| format!("({},{})", m.name(x / b), n.name(x % b)))
                .collect(),
        ),
        _ => None,
    };
    let monoid = Arc::new(FiniteMonoid::from_flat(
        order,
        table,
        m.identity() * b + n.identity(),
        names,
    )?);
    let first = MonoidHom::new(Arc::clone(&monoid), Arc::clone(m), (0..order).map(|x| x / b).collect())?;
    let second = MonoidHom::new(Arc::clone(&monoid), Arc::clone(n), (0..order).map(|x| x % b).collect())?;
    Ok(Product {
        monoid,
        first,
        second,
    })
}

/// Pullback of `sigma1: K -> L` along `tau1: N -> L`, with its two projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub monoid: Arc<FiniteMonoid>,
    /// Projection to `K`.
    pub to_left: MonoidHom,
    /// Projection to `N`.
    pub to_right: MonoidHom,
    pub pairs: Vec<(Elem, Elem)>,
}

pub fn pullback(sigma1: &MonoidHom, tau1: &MonoidHom) -> Result<Pullback> {
    if !sigma1.target().same_table(tau1.target()) {
        return Err(Error::Composability("pullback legs have different targets".into()));
    }
    let k = sigma1.source();
    let n = tau1.source();
    let pairs: Vec<(Elem, Elem)> = k
        .elements()
        .flat_map(|a| n.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| sigma1.apply(a) == tau1.apply(b))
        .collect();
    check_size("pullback order", pairs.len())?;
    let index = |p: (Elem, Elem)| pairs.binary_search(&p).expect("pullback closed");
    let order = pairs.len();
    let mut table = Vec::with_capacity(order * order);
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            table.push(index((k.mul(a, c), n.mul(b, d))));
        }
    }
    let identity = index((k.identity(), n.identity()));
    let names = match (k.names(), n.names()) {
        (Some(_), Some(_)) => Some(
            pairs
                .iter()
                .map(|&(a, b)| format!("({},{})", k.name(a), n.name(b)))
                .collect(),
        ),
        _ => None,
    };
    let monoid = Arc::new(FiniteMonoid::from_flat(order, table, identity, names)?);
    let to_left = MonoidHom::new(Arc::clone(&monoid), Arc::clone(k), pairs.iter().map(|p| p.0).collect())?;
    let to_right = MonoidHom::new(Arc::clone(&monoid), Arc::clone(n), pairs.iter().map(|p| p.1).collect())?;
    Ok(Pullback {
        monoid,
        to_left,
        to_right,
        pairs,
    })
}

/// Opposite monoid: the transposed table.
pub fn opposite(m: &FiniteMonoid) -> FiniteMonoid {
    let n = m.order();
    let table = (0..n * n).map(|i| m.mul(i % n, i / n)).collect();
    FiniteMonoid::from_flat(n, table, m.identity(), m.names.clone()).expect("opposite of a monoid")
}
