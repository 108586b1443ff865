use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Rational, Tensor, Word};

/// Polynomial in a free graded-commutative algebra: canonical monomial words
/// (sorted by generator rank; odd generators at most once) with coefficients.
pub type Poly = Tensor;

/// Commutative differential graded algebra `ΛV/I` with cohomological
/// degrees, `I` an ideal spanned by monomials (empty for free algebras).
/// `d` is stored on generators and extended as a degree +1 derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdga {
    pub gens: GradedSpace,
    d: BTreeMap<usize, Poly>,
    /// Monomial generators of the ideal, as canonical words.
    relations: Vec<Word>,
}

/// `true` when the multiset `small` is contained in the multiset `big`
/// (both canonical, hence sorted by rank).
fn divides(small: &[usize], big: &[usize], rank: impl Fn(usize) -> usize) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && rank(big[j]) < rank(x) {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

impl Cdga {
    pub fn free(gens: GradedSpace) -> Cdga {
        Cdga { gens, d: BTreeMap::new(), relations: Vec::new() }
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    /// Adds the monomial `m` to the ideal.
    pub fn add_relation(&mut self, m: &[usize]) -> Result<()> {
        match self.gens.canonical_word(m, false) {
            None => Ok(()),
            Some((_, w)) if w.is_empty() => Err(Error::Input("the unit cannot be a relation".into())),
            Some((_, w)) => {
                if !self.relations.contains(&w) {
                    self.relations.push(w);
                }
                Ok(())
            }
        }
    }

    pub fn set_d(&mut self, gen: usize, value: Poly) -> Result<()> {
        let value = self.normalize(&value);
        if let Some(deg) = self.poly_degree(&value)? {
            if deg != self.gens.degree(gen) + 1 {
                return Err(Error::Degree(format!(
                    "d{} has degree {deg}, expected {}",
                    self.gens.name(gen),
                    self.gens.degree(gen) + 1
                )));
            }
        }
        if value.is_zero() {
            self.d.remove(&gen);
        } else {
            self.d.insert(gen, value);
        }
        Ok(())
    }

    pub fn d_of(&self, gen: usize) -> Poly {
        self.d.get(&gen).cloned().unwrap_or_default()
    }

    pub fn poly_degree(&self, p: &Poly) -> Result<Option<i64>> {
        let mut deg = None;
        for w in p.keys() {
            let d = self.gens.word_degree(w);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Degree(format!("inhomogeneous polynomial {}", self.fmt_poly(p))));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Sorts every monomial and kills those in the ideal.
    pub fn normalize(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in p.iter() {
            if let Some((s, m)) = self.gens.canonical_word(w, false) {
                if !self.in_ideal(&m) {
                    out.add_term(m, if s < 0 { -c.clone() } else { c.clone() });
                }
            }
        }
        out
    }

    pub fn in_ideal(&self, m: &[usize]) -> bool {
        self.relations.iter().any(|r| divides(r, m, |i| self.gens.rank(i)))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        self.normalize(&out)
    }

    /// `d` extended as a derivation: `d(x_1⋯x_n) = Σ ±x_1⋯dx_i⋯x_n`.
    pub fn d(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in p.iter() {
            let mut passed = 0i64;
            for (i, &x) in w.iter().enumerate() {
                let dx = self.d_of(x);
                if !dx.is_zero() {
                    let sign = if passed % 2 != 0 { -c.clone() } else { c.clone() };
                    for (dw, dc) in dx.iter() {
                        let mut nw = w[..i].to_vec();
                        nw.extend_from_slice(dw);
                        nw.extend_from_slice(&w[i + 1..]);
                        out.add_term(nw, &sign * dc);
                    }
                }
                passed += self.gens.degree(x);
            }
        }
        self.normalize(&out)
    }

    /// `d² = 0` on generators and `d(I) ⊆ I`.
    pub fn validate(&self) -> Result<()> {
        for x in 0..self.gens.dim() {
            if !self.d(&self.d_of(x)).is_zero() {
                return Err(Error::Axiom(format!("d² ≠ 0 on `{}`", self.gens.name(x))));
            }
        }
        for r in &self.relations {
            // d of a monomial in I, computed without reducing first
            let free = Cdga { gens: self.gens.clone(), d: self.d.clone(), relations: Vec::new() };
            let dr = free.d(&Poly::basis(r.clone()));
            if !self.normalize(&dr).is_zero() {
                return Err(Error::Axiom(format!("the ideal is not closed under d at {}", self.fmt_word(r))));
            }
        }
        Ok(())
    }

    /// Same algebra with the generators renamed.
    pub fn renamed(&self, names: &[String]) -> Result<Cdga> {
        Ok(Cdga { gens: self.gens.renamed(names)?, ..self.clone() })
    }

    /// Word-length-`j` part `d_j` of `d` on a generator.
    pub fn d_part(&self, gen: usize, j: usize) -> Poly {
        self.d_of(gen).filter(|w| w.len() == j)
    }

    /// Free, with `d(V) ⊆ Λ^{≥1}V` and generators in positive degrees.
    pub fn is_sullivan(&self) -> bool {
        self.is_free()
            && self.gens.degrees().iter().all(|&d| d >= 1)
            && self.d.values().all(|p| p.keys().all(|w| !w.is_empty()))
    }

    /// Sullivan with decomposable differential.
    pub fn is_minimal(&self) -> bool {
        self.is_sullivan() && self.d.values().all(|p| p.keys().all(|w| w.len() >= 2))
    }

    /// Monomial basis of a finite-dimensional quotient, ordered by degree
    /// and then by word. The unit comes first.
    pub fn monomial_basis(&self) -> Result<Vec<Word>> {
        for x in 0..self.gens.dim() {
            if self.gens.degree(x) % 2 == 0 && !self.relations.iter().any(|r| r.iter().all(|&y| y == x)) {
                return Err(Error::Unsupported(format!(
                    "`{}` is even and no power of it is a relation: the algebra is infinite dimensional",
                    self.gens.name(x)
                )));
            }
        }
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for w in &layer {
                let start = w.last().map_or(0, |&l| self.gens.rank(l));
                for x in 0..self.gens.dim() {
                    let r = self.gens.rank(x);
                    if r < start || (r == start && !w.is_empty() && self.gens.degree(x) % 2 != 0) {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(x);
                    if !self.in_ideal(&nw) {
                        next.push(nw);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.sort_by_key(|w| (self.gens.word_degree(w), w.iter().map(|&i| self.gens.rank(i)).collect::<Vec<_>>()));
        Ok(out)
    }

    pub fn fmt_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = self.gens.name(w[i]);
            parts.push(if j - i > 1 { format!("{name}^{}", j - i) } else { name.to_string() });
            i = j;
        }
        parts.join("*")
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        crate::graded::fmt_sum(p.iter().map(|(w, c)| (c.clone(), self.fmt_word(w))))
    }

    /// Polynomial from `(coefficient, generator names)` terms.
    pub fn poly(&self, terms: &[(Rational, &[&str])]) -> Result<Poly> {
        let mut out = Poly::zero();
        for (c, names) in terms {
            let w: Result<Word> = names
                .iter()
                .map(|n| self.gens.index_of(n).ok_or_else(|| Error::Input(format!("unknown generator `{n}`"))))
                .collect();
            out.add_term(w?, c.clone());
        }
        Ok(self.normalize(&out))
    }
}
