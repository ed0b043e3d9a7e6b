//! Closed-form constructions of small monoids used by the catalog.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::MonoidHom;
use crate::monoid::{check_size, Elem, FiniteMonoid};

fn power_name(i: usize) -> String {
    match i {
        0 => "1".into(),
        1 => "t".into(),
        _ => format!("t^{i}"),
    }
}

/// Cyclic group `C_k = {1, t, ..., t^(k-1)}`.
pub fn cyclic_group(k: usize) -> Result<FiniteMonoid> {
    if k == 0 {
        return Err(Error::Shape("cyclic group of order 0".into()));
    }
    check_size("cyclic group", k)?;
    let table = (0..k * k).map(|i| (i / k + i % k) % k).collect();
    FiniteMonoid::from_flat(k, table, 0, Some((0..k).map(power_name).collect()))
}

/// Cyclic monoid `C(index, period) = <t | t^(index+period) = t^index>`.
pub fn cyclic_monoid(index: usize, period: usize) -> Result<FiniteMonoid> {
    if period == 0 {
        return Err(Error::Shape("cyclic monoid needs period >= 1".into()));
    }
    let order = index + period;
    check_size("cyclic monoid", order)?;
    let reduce = |s: usize| if s < order { s } else { index + (s - index) % period };
    let table = (0..order * order).map(|i| reduce(i / order + i % order)).collect();
    FiniteMonoid::from_flat(order, table, 0, Some((0..order).map(power_name).collect()))
}

/// Klein four-group `{1, x, y, xy}`; the product is XOR of the indices.
pub fn klein4() -> FiniteMonoid {
    let table = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
    let names = ["1", "x", "y", "xy"].map(String::from).to_vec();
    FiniteMonoid::from_flat(4, table, 0, Some(names)).expect("klein four")
}

/// Quaternion group, indexed `1, -1, i, -i, j, -j, k, -k`.
pub fn q8() -> FiniteMonoid {
    // unit part 0..4 = 1, i, j, k; product of units as (sign, unit)
    fn unit_mul(a: usize, b: usize) -> (bool, usize) {
        match (a, b) {
            (0, b) => (false, b),
            (a, 0) => (false, a),
            (a, b) if a == b => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    }
    let mut table = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (s, u) = unit_mul(x / 2, y / 2);
            let neg = (x % 2 == 1) ^ (y % 2 == 1) ^ s;
            table.push(2 * u + usize::from(neg));
        }
    }
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    FiniteMonoid::from_flat(8, table, 0, Some(names)).expect("quaternion group")
}

/// Truncated addition on `{0, ..., k}`: `a + b` capped at `k`.
pub fn truncated_add(k: usize) -> Result<FiniteMonoid> {
    let order = k + 1;
    check_size("truncated addition", order)?;
    let table = (0..order * order).map(|i| (i / order + i % order).min(k)).collect();
    FiniteMonoid::from_flat(order, table, 0, Some((0..order).map(|i| i.to_string()).collect()))
}

fn all_maps(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Monoid generated by composition of self-maps, "apply left factor first":
/// `(f * g)(x) = g(f(x))`.
fn map_monoid(maps: Vec<Vec<usize>>) -> Result<FiniteMonoid> {
    let order = maps.len();
    let index = |f: &Vec<usize>| maps.binary_search(f).expect("closed under composition");
    let mut table = Vec::with_capacity(order * order);
    for f in &maps {
        for g in &maps {
            let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
            table.push(index(&h));
        }
    }
    let n = maps[0].len();
    let identity = index(&(0..n).collect());
    let names = maps
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect::<String>())
        .collect();
    FiniteMonoid::from_flat(order, table, identity, Some(names))
}

/// Full transformation monoid `T_n` for `n <= 3`.
pub fn full_transformation(n: usize) -> Result<FiniteMonoid> {
    if n == 0 || n > 3 {
        return Err(Error::SizeLimit {
            what: "full transformation degree".into(),
            requested: n as u128,
            limit: 3,
        });
    }
    map_monoid(all_maps(n))
}

/// Symmetric group `S_n` for `n <= 4`, same composition convention as `T_n`.
pub fn symmetric(n: usize) -> Result<FiniteMonoid> {
    if n == 0 || n > 4 {
        return Err(Error::SizeLimit {
            what: "symmetric group degree".into(),
            requested: n as u128,
            limit: 4,
        });
    }
    let perms = all_maps(n)
        .into_iter()
        .filter(|f| {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == n
        })
        .collect();
    map_monoid(perms)
}

/// `C_3` with its elements stored out of order: the identity sits at index 2.
pub fn cyclic_group_shuffled() -> FiniteMonoid {
    // index -> exponent
    let exp = [1usize, 2, 0];
    let idx = |e: usize| exp.iter().position(|&x| x == e).expect("exponent");
    let table = (0..9).map(|i| idx((exp[i / 3] + exp[i % 3]) % 3)).collect();
    let names = exp.iter().map(|&e| power_name(e)).collect();
    FiniteMonoid::from_flat(3, table, 2, Some(names)).expect("shuffled C3")
}

/// Reduction `C(3,3) -> C_3`, `t^i -> t^(i mod 3)`.
pub fn c33_to_c3() -> MonoidHom {
    let m = Arc::new(cyclic_monoid(3, 3).expect("C(3,3)"));
    let n = Arc::new(cyclic_group(3).expect("C3"));
    MonoidHom::new(m, n, (0..6).map(|i| i % 3).collect()).expect("reduction mod 3")
}

/// Reduction `C_a -> C_b` for `b | a`.
pub fn cyclic_reduction(a: usize, b: usize) -> Result<MonoidHom> {
    if b == 0 || !a.is_multiple_of(b) {
        return Err(Error::Shape(format!("{b} does not divide {a}")));
    }
    let m = Arc::new(cyclic_group(a)?);
    let n = Arc::new(cyclic_group(b)?);
    MonoidHom::new(m, n, (0..a).map(|i| i % b).collect())
}

/// Element orders of a group, sorted; `None` entries for non-units.
pub fn order_profile(m: &FiniteMonoid) -> Vec<Option<usize>> {
    let mut v: Vec<Option<usize>> = m.elements().map(|x: Elem| m.element_order(x)).collect();
    v.sort_unstable();
    v
}
