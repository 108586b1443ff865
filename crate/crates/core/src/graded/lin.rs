//! Finite formal linear combinations with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::Rational;

/// A finite ℚ-linear combination of keys. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(key, coeff);
        out
    }

    pub fn basis(key: K) -> Self {
        Self::single(key, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn add_assign(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub_assign(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn scaled(&self, factor: &Rational) -> Lin<K> {
        let mut out = Lin::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn neg(&self) -> Lin<K> {
        self.scaled(&-Rational::one())
    }

    /// Re-keys every term, accumulating coefficients of colliding keys.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> Lin<J> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Applies a linear map given on keys.
    pub fn apply<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Lin<J>) -> Lin<J> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Lin<K> {
        Lin {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut out = Lin::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{:?}", c, k)?;
        }
        Ok(())
    }
}
