use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::{factorial, sign_rat, GradedSpace, Rational, Vector, Word};
use crate::structures::LInfAlgebra;
use crate::transfer::decalage;

use super::cdga::{Cdga, Poly};

/// Name of the generator of `(sL)^♯` dual to `sx`: a trailing prime is
/// dropped (`x' ↦ x`), otherwise `*` is appended.
pub(crate) fn dual_name(name: &str) -> String {
    match name.strip_suffix('\'') {
        Some(base) if !base.is_empty() => base.to_string(),
        _ => format!("{name}*"),
    }
}

/// Inverse of [`dual_name`].
fn predual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) if !base.is_empty() => base.to_string(),
        _ => format!("{name}'"),
    }
}

/// Product of the factorials of the multiplicities in a sorted word.
fn multiplicity(word: &[usize]) -> Rational {
    let mut out = Rational::from_integer(1.into());
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        out *= factorial(j - i);
        i = j;
    }
    out
}

/// Sign relating the coefficient of `v_{y_1}⋯v_{y_j}` in `d v_x` to the
/// `x`-component of `ℓ_j(y_1, …, y_j)`: minus the décalage sign, so that
/// `d_1` is the plain transpose of `ℓ_1`. Any further factor `(−1)^j` or a
/// Koszul reordering sign would either be invisible to `d² = 0` or break it.
fn pairing_sign(word: &[usize], l_degrees: &[i64]) -> i32 {
    -decalage(word, l_degrees)
}

/// Cochain functor `(Λ(sL)^♯, d)`: generators dual to `sx` in degree
/// `|x| + 1`, and `d_j` dual to `ℓ_j` through the pairing.
pub fn cochain(l: &LInfAlgebra) -> Result<Cdga> {
    let space = &l.space;
    let gens = GradedSpace::new((0..space.dim()).map(|x| (dual_name(space.name(x)), space.degree(x) + 1)))?;
    let mut d: Vec<Poly> = vec![Poly::zero(); space.dim()];
    for k in l.arities().collect::<Vec<_>>() {
        for (word, value) in l.brackets_of_arity(k) {
            // bracket words are canonical for the skew order on L, which is
            // the commutative order on sL
            let factor = sign_rat(pairing_sign(word, space.degrees())) / multiplicity(word);
            for (&x, c) in value.iter() {
                d[x].add_term(word.clone(), c * &factor);
            }
        }
    }
    let mut out = Cdga::free(gens);
    for (x, p) in d.into_iter().enumerate() {
        out.set_d(x, p)?;
    }
    Ok(out)
}

/// The L∞-algebra on `s^{−1}V^♯` whose cochain algebra is the given free
/// CDGA.
pub fn linf_from_cdga(a: &Cdga) -> Result<LInfAlgebra> {
    if !a.is_free() {
        return Err(Error::Unsupported("L∞-algebras are read off free algebras only".into()));
    }
    let gens = &a.gens;
    let space = GradedSpace::new((0..gens.dim()).map(|v| (predual_name(gens.name(v)), gens.degree(v) - 1)))?;
    let mut values: BTreeMap<Word, Vector> = BTreeMap::new();
    for x in 0..gens.dim() {
        for (m, c) in a.d_of(x).iter() {
            if m.is_empty() {
                return Err(Error::Input(format!("d{} has a constant term", gens.name(x))));
            }
            let factor = sign_rat(pairing_sign(m, space.degrees())) * multiplicity(m);
            values.entry(m.clone()).or_default().add_term(x, c * factor);
        }
    }
    let mut l = LInfAlgebra::new(space);
    for (w, v) in values {
        l.set_bracket(&w, v)?;
    }
    Ok(l)
}
