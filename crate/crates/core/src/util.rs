//! Small enumeration helpers.

use crate::monoid::Elem;

/// All maps `f: {0..domain} -> values` with `f(base) = fixed`, in odometer
/// order with the last coordinate varying fastest.
pub struct PointedMaps<'a> {
    base: usize,
    values: &'a [Elem],
    digits: Vec<usize>,
    current: Vec<Elem>,
    done: bool,
}

impl<'a> PointedMaps<'a> {
    pub fn new(domain: usize, base: usize, fixed: Elem, values: &'a [Elem]) -> Self {
        let done = values.is_empty() && domain > 1;
        let current = (0..domain)
            .map(|i| if i == base { fixed } else { values.first().copied().unwrap_or(fixed) })
            .collect();
        PointedMaps {
            base,
            values,
            digits: vec![0; domain],
            current,
            done,
        }
    }
}

impl Iterator for PointedMaps<'_> {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // advance
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if i == self.base {
                continue;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.values.len() {
                self.current[i] = self.values[self.digits[i]];
                break;
            }
            self.digits[i] = 0;
            self.current[i] = self.values[0];
        }
        Some(out)
    }
}

/// `values^(domain - 1)`, or `None` on overflow.
pub fn pointed_count(domain: usize, values: usize) -> Option<u128> {
    (values as u128).checked_pow(domain.saturating_sub(1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_base_point() {
        let vals = [3, 5];
        let maps: Vec<_> = PointedMaps::new(3, 1, 9, &vals).collect();
        assert_eq!(maps.len(), 4);
        assert!(maps.iter().all(|m| m[1] == 9));
        assert_eq!(maps[0], vec![3, 9, 3]);
        assert_eq!(maps[1], vec![3, 9, 5]);
        assert_eq!(pointed_count(3, 2), Some(4));
    }

    #[test]
    fn degenerate_domains() {
        assert_eq!(PointedMaps::new(1, 0, 0, &[]).count(), 1);
        assert_eq!(PointedMaps::new(2, 0, 0, &[]).count(), 0);
        assert_eq!(PointedMaps::new(0, 0, 0, &[1]).count(), 1);
    }
}
