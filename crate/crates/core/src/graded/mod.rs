//! Exact rationals, ℤ-graded vector spaces with named bases, sparse linear
//! maps and the sign bookkeeping shared by everything else.
//!
//! Basis elements are referred to by their index in the owning
//! [`GradedSpace`]. A tensor word is a `Vec<usize>` of such indices and a
//! graded-commutative monomial is a `Vec<usize>` kept in canonical order, so
//! an element of any of these spaces is a [`Lin`] over the matching key type.

mod lin;
pub mod linalg;
pub mod sign;
pub mod tensor;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use lin::Lin;

use crate::error::{Error, Result};

/// The ground field ℚ.
pub type Rational = num_rational::BigRational;

/// Tensor word: ordered list of basis indices.
pub type Word = Vec<usize>;

/// Vector in a single graded space.
pub type Vector = Lin<usize>;

/// Element of a tensor power (words of any length).
pub type Tensor = Lin<Word>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign_rat(sign: i32) -> Rational {
    if sign >= 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k))
}

/// A graded vector space with a finite ordered basis of named, homogeneous
/// elements. Declaration order is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
    ranks: Vec<usize>,
}

fn canonical_ranks(degrees: &[i64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..degrees.len()).collect();
    order.sort_by_key(|&i| (degrees[i], i));
    let mut ranks = vec![0; degrees.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r;
    }
    ranks
}

impl GradedSpace {
    pub fn new<S: Into<String>>(basis: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, deg) in basis {
            let name = name.into();
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Input(format!("duplicate basis name `{name}`")));
            }
            names.push(name);
            degrees.push(deg);
        }
        let ranks = canonical_ranks(&degrees);
        Ok(GradedSpace { names, degrees, index, ranks })
    }

    pub fn empty() -> Self {
        GradedSpace { names: vec![], degrees: vec![], index: HashMap::new(), ranks: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Position in the canonical (degree, declaration index) order used for
    /// wedge and monomial words.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// Sorts a wedge (`skew`) or graded-commutative word into canonical
    /// order. `None` when the word vanishes.
    pub fn canonical_word(&self, word: &[usize], skew: bool) -> Option<(i32, Word)> {
        sign::sort_graded(word, |i| self.degrees[i], |i| self.ranks[i], skew)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &str, i64)> {
        self.names.iter().enumerate().map(move |(i, n)| (i, n.as_str(), self.degrees[i]))
    }

    pub fn basis_of_degree(&self, deg: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == deg).collect()
    }

    pub fn has_degree(&self, deg: i64) -> bool {
        self.degrees.contains(&deg)
    }

    pub fn word_degree(&self, word: &[usize]) -> i64 {
        word.iter().map(|&i| self.degrees[i]).sum()
    }

    /// Same degrees and order under new names.
    pub fn renamed(&self, names: &[String]) -> Result<GradedSpace> {
        if names.len() != self.dim() {
            return Err(Error::Input(format!("{} names for a basis of size {}", names.len(), self.dim())));
        }
        GradedSpace::new(names.iter().cloned().zip(self.degrees.iter().copied()))
    }

    /// Same basis with every degree shifted by `by` (suspension when
    /// `by = 1`, desuspension when `by = -1`).
    pub fn shifted(&self, by: i64) -> GradedSpace {
        GradedSpace {
            names: self.names.clone(),
            degrees: self.degrees.iter().map(|d| d + by).collect(),
            index: self.index.clone(),
            ranks: self.ranks.clone(),
        }
    }

    /// Degree of a homogeneous vector, `None` for zero; errors on
    /// inhomogeneous input.
    pub fn vector_degree(&self, v: &Vector) -> Result<Option<i64>> {
        let mut deg = None;
        for (&i, _) in v.iter() {
            let d = self.degrees[i];
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Degree(format!("inhomogeneous element {}", self.fmt_vector(v))))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn tensor_degree(&self, t: &Tensor) -> Result<Option<i64>> {
        let mut deg = None;
        for (w, _) in t.iter() {
            let d = self.word_degree(w);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Degree("inhomogeneous tensor".into())),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn fmt_vector(&self, v: &Vector) -> String {
        fmt_sum(v.iter().map(|(&i, c)| (c.clone(), self.names[i].clone())))
    }

    pub fn fmt_tensor(&self, t: &Tensor) -> String {
        fmt_sum(t.iter().map(|(w, c)| {
            let body = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join("|")
            };
            (c.clone(), body)
        }))
    }
}

/// Renders `c1 w1 + c2 w2 - ...` with unit coefficients elided. Zero renders
/// as `0`.
pub fn fmt_sum(terms: impl IntoIterator<Item = (Rational, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let neg = c < Rational::zero();
        let abs = if neg { -c } else { c };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{abs} {body}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Homogeneous linear map given by sparse images of basis elements; basis
/// elements without a stored image map to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<K: Ord = usize> {
    pub degree: i64,
    pub images: BTreeMap<usize, Lin<K>>,
}

impl<K: Ord + Clone> GradedMap<K> {
    pub fn zero(degree: i64) -> Self {
        GradedMap { degree, images: BTreeMap::new() }
    }

    pub fn set(&mut self, basis: usize, image: Lin<K>) {
        if image.is_zero() {
            self.images.remove(&basis);
        } else {
            self.images.insert(basis, image);
        }
    }

    pub fn image(&self, basis: usize) -> Lin<K> {
        self.images.get(&basis).cloned().unwrap_or_default()
    }

    pub fn apply(&self, v: &Vector) -> Lin<K> {
        v.apply(|&i| self.image(i))
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(|v| v.is_zero())
    }
}

impl GradedMap<usize> {
    pub fn identity(dim: usize) -> Self {
        let mut m = GradedMap::zero(0);
        for i in 0..dim {
            m.set(i, Vector::basis(i));
        }
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap<usize>) -> GradedMap<usize> {
        let mut m = GradedMap::zero(self.degree + other.degree);
        for (&i, v) in &other.images {
            m.set(i, self.apply(v));
        }
        m
    }

    pub fn add(&self, other: &GradedMap<usize>) -> Result<GradedMap<usize>> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Degree("adding maps of different degree".into()));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut m = self.clone();
        m.degree = degree;
        for (&i, v) in &other.images {
            let mut w = m.image(i);
            w.add_assign(v);
            m.set(i, w);
        }
        Ok(m)
    }

    pub fn scaled(&self, c: &Rational) -> GradedMap<usize> {
        let mut m = GradedMap::zero(self.degree);
        for (&i, v) in &self.images {
            m.set(i, v.scaled(c));
        }
        m
    }

    /// Checks that every stored image of a basis element of `source` is
    /// homogeneous of degree `|e| + self.degree` in `target`.
    pub fn check_degrees(&self, source: &GradedSpace, target: &GradedSpace) -> Result<()> {
        for (&i, v) in &self.images {
            if let Some(d) = target.vector_degree(v)? {
                if d != source.degree(i) + self.degree {
                    return Err(Error::Degree(format!(
                        "image of `{}` has degree {d}, expected {}",
                        source.name(i),
                        source.degree(i) + self.degree
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Extends multilinearly over a tensor: applies `f(slot, basis)` to each
/// factor of each word and concatenates, with the Koszul sign
/// `(−1)^{|f_j| (|x_1| + … + |x_{j−1}|)}` for the map in slot `j` passing the
/// earlier factors.
pub fn apply_factorwise(
    t: &Tensor,
    degree: impl Fn(usize) -> i64,
    map_degrees: &[i64],
    mut f: impl FnMut(usize, usize) -> Tensor,
) -> Tensor {
    let mut out = Tensor::zero();
    for (word, c) in t.iter() {
        debug_assert_eq!(word.len(), map_degrees.len());
        let mut acc = Tensor::single(vec![], c.clone());
        let mut passed = 0i64;
        for (slot, &b) in word.iter().enumerate() {
            let img = f(slot, b);
            if img.is_zero() {
                acc = Tensor::zero();
                break;
            }
            let sign = if (map_degrees[slot] * passed).rem_euclid(2) == 1 { -1 } else { 1 };
            acc = concat(&acc, &img).scaled(&sign_rat(sign));
            passed += degree(b);
        }
        out.add_assign(&acc);
    }
    out
}

/// Concatenation product of tensors (no signs: nothing is transposed).
pub fn concat(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (wa, ca) in a.iter() {
        for (wb, cb) in b.iter() {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            out.add_term(w, ca * cb);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::new([("a", 1), ("a", 2)]).is_err());
    }

    #[test]
    fn factorwise_sign_on_second_slot() {
        // (id ⊗ δ)(g ⊗ s) with |δ| = -1, |g| = 3, δs = r  gives  -(g ⊗ r)
        let space = GradedSpace::new([("g", 3), ("r", 5), ("s", 6)]).unwrap();
        let t = Tensor::basis(vec![0, 2]);
        let out = apply_factorwise(&t, |i| space.degree(i), &[0, -1], |slot, b| {
            if slot == 0 {
                Tensor::basis(vec![b])
            } else if b == 2 {
                Tensor::basis(vec![1])
            } else {
                Tensor::zero()
            }
        });
        assert_eq!(out, Tensor::single(vec![0, 1], rat(-1)));

        // (δ ⊗ id)(s ⊗ g) = r ⊗ g
        let t = Tensor::basis(vec![2, 0]);
        let out = apply_factorwise(&t, |i| space.degree(i), &[-1, 0], |slot, b| {
            if slot == 1 {
                Tensor::basis(vec![b])
            } else if b == 2 {
                Tensor::basis(vec![1])
            } else {
                Tensor::zero()
            }
        });
        assert_eq!(out, Tensor::basis(vec![1, 0]));
    }

    #[test]
    fn identity_tensor_map() {
        let t = Tensor::basis(vec![0, 1]);
        let out = apply_factorwise(&t, |_| 3, &[0, 0], |_, b| Tensor::basis(vec![b]));
        assert_eq!(out, t);
    }

    #[test]
    fn fmt_sum_elides_units() {
        assert_eq!(fmt_sum(vec![(rat(1), "a".into()), (rat(-2), "b".into())]), "a - 2 b");
        assert_eq!(fmt_sum(vec![(frac(-1, 2), "a".into())]), "-1/2 a");
        assert_eq!(fmt_sum(Vec::<(Rational, String)>::new()), "0");
    }
}
