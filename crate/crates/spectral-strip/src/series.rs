//! Truncated power series in `eps^(1/3)` whose coefficients are physical
//! samples on a common `x x s` grid. Used to collect the order-by-order
//! terms of products of expansions.

use std::collections::BTreeMap;

use crate::field::Samples;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    nx: usize,
    ns: usize,
    terms: BTreeMap<i32, Samples>,
}

impl Series {
    pub fn new(nx: usize, ns: usize) -> Self {
        Self { nx, ns, terms: BTreeMap::new() }
    }

    /// Adds `s` to the coefficient of `level` (in thirds).
    pub fn add(&mut self, level: i32, s: &Samples) {
        debug_assert!(s.nx == self.nx && s.ns == self.ns);
        match self.terms.get_mut(&level) {
            Some(t) => t.add_assign(s, 1.0),
            None => {
                self.terms.insert(level, s.clone());
            }
        }
    }

    pub fn get(&self, level: i32) -> Option<&Samples> {
        self.terms.get(&level)
    }

    /// Coefficient of `level`, zero when absent.
    pub fn coeff(&self, level: i32) -> Samples {
        self.terms.get(&level).cloned().unwrap_or_else(|| Samples::zeros(self.nx, self.ns))
    }

    pub fn levels(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Cauchy product truncated at `max_level`.
    pub fn mul(&self, other: &Series, max_level: i32) -> Series {
        let mut out = Series::new(self.nx, self.ns);
        for (&a, sa) in &self.terms {
            for (&b, sb) in &other.terms {
                if a + b <= max_level {
                    out.add(a + b, &sa.zip_with(sb, |x, y| x * y));
                }
            }
        }
        out
    }

    pub fn map_terms(&self, f: impl Fn(&Samples) -> Samples) -> Series {
        Series { nx: self.nx, ns: self.ns, terms: self.terms.iter().map(|(l, s)| (*l, f(s))).collect() }
    }

    pub fn ddx(&self) -> Series {
        self.map_terms(|s| s.ddx(1))
    }

    pub fn ddx2(&self) -> Series {
        self.map_terms(|s| s.ddx(2))
    }

    pub fn dds(&self, h: f64) -> Series {
        self.map_terms(|s| s.dds(h, 1))
    }

    pub fn dds2(&self, h: f64) -> Series {
        self.map_terms(|s| s.dds(h, 2))
    }

    /// Multiplies by `eps^(k/3)`.
    pub fn shift(&self, k: i32) -> Series {
        Series { nx: self.nx, ns: self.ns, terms: self.terms.iter().map(|(l, s)| (l + k, s.clone())).collect() }
    }

    pub fn scale(&self, c: f64) -> Series {
        self.map_terms(|s| s.map(|v| c * v))
    }

    pub fn plus(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (l, s) in &other.terms {
            out.add(*l, s);
        }
        out
    }

    /// Keeps only levels `<= max_level`.
    pub fn truncate(&self, max_level: i32) -> Series {
        Series {
            nx: self.nx,
            ns: self.ns,
            terms: self.terms.iter().filter(|(l, _)| **l <= max_level).map(|(l, s)| (*l, s.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(nx: usize, ns: usize, c: f64) -> Samples {
        Samples { nx, ns, data: vec![c; nx * ns] }
    }

    #[test]
    fn cauchy_product_collects_levels() {
        let mut a = Series::new(4, 2);
        a.add(0, &constant(4, 2, 1.0));
        a.add(3, &constant(4, 2, 2.0));
        let mut b = Series::new(4, 2);
        b.add(0, &constant(4, 2, 3.0));
        b.add(2, &constant(4, 2, 5.0));
        let p = a.mul(&b, 4);
        assert_eq!(p.coeff(0).data[0], 3.0);
        assert_eq!(p.coeff(2).data[0], 5.0);
        assert_eq!(p.coeff(3).data[0], 6.0);
        assert!(p.get(5).is_none());
    }

    #[test]
    fn shift_moves_levels() {
        let mut a = Series::new(4, 1);
        a.add(3, &constant(4, 1, 1.0));
        assert!(a.shift(-3).get(0).is_some());
    }
}
