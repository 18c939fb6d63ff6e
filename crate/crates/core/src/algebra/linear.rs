use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use num_traits::{One, Zero};

use super::Rational;

/// Sparse linear combination with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(key: K, coeff: Rational) -> Self {
        let mut lc = Self::new();
        lc.add_term(key, coeff);
        lc
    }

    pub fn unit(key: K) -> Self {
        Self::term(key, Rational::one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.terms.get(key)
    }

    pub fn contains(&self, key: &K) -> bool {
        self.terms.contains_key(key)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Rational> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Rational> {
        self.terms.keys()
    }

    pub fn remove(&mut self, key: &K) -> Option<Rational> {
        self.terms.remove(key)
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, other: &LinComb<K>, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn add(&mut self, other: &LinComb<K>) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &LinComb<K>) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), -c.clone());
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    pub fn negated(&self) -> Self {
        LinComb {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (K, Rational)> {
        self.terms.into_iter()
    }

    /// Relabels every key; colliding keys are summed.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> LinComb<J> {
        let mut out = LinComb::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut lc = LinComb::new();
        for (k, c) in iter {
            lc.add_term(k, c);
        }
        lc
    }
}

impl<K: Ord + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{k}")?;
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Display> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut a = LinComb::term("x", q(1, 2));
        a.add_term("y", q(3, 1));
        let mut b = LinComb::term("x", q(-1, 2));
        b.add_term("y", q(1, 1));
        a.add(&b);
        assert_eq!(a.len(), 1);
        assert_eq!(a.get(&"y"), Some(&q(4, 1)));
        a.scale(&q(0, 1));
        assert!(a.is_zero());
        assert_eq!(a.to_string(), "0");
    }

    proptest! {
        #[test]
        fn coefficients_stay_reduced(ops in proptest::collection::vec((0u8..4, -50i64..50, 1i64..40, 0u8..2), 1..60)) {
            let mut lc: LinComb<u8> = LinComb::new();
            for (key, n, d, mode) in ops {
                let c = q(n, d);
                if mode == 0 {
                    lc.add_term(key, c);
                } else if !c.is_zero() {
                    lc.scale(&c);
                }
            }
            for (_, c) in lc.iter() {
                prop_assert!(!c.is_zero());
                prop_assert!(c.denom() > &BigInt::from(0));
                prop_assert_eq!(c.numer().gcd(c.denom()), BigInt::from(1));
            }
        }
    }
}
