use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Tensor, Word};
use crate::structures::AInfCoalgebra;

use super::cdga::{Cdga, Poly};

/// The dual coalgebra `C = B^♯` of a finite-dimensional CDGA and its
/// reduction `C̄ = ker ε`. The basis of `C` is dual to the monomial basis
/// of `B` (degree of `m^♯` is the degree of `m`, now homological), named
/// `<m>`; in `C̄` the unit's dual is dropped.
#[derive(Clone, Debug)]
pub struct DualCoalgebra {
    pub full: AInfCoalgebra,
    pub reduced: AInfCoalgebra,
    /// Monomial of `B` dual to each basis element of `C`.
    pub monomials: Vec<Word>,
}

impl DualCoalgebra {
    /// Same coalgebras with the nonunit basis elements renamed (unit first
    /// in `C` keeps its name).
    pub fn renamed(&self, reduced_names: &[String]) -> Result<DualCoalgebra> {
        let reduced_space = self.reduced.space.renamed(reduced_names)?;
        let mut full_names = vec![self.full.space.name(0).to_string()];
        full_names.extend(reduced_names.iter().cloned());
        let full_space = self.full.space.renamed(&full_names)?;
        let mut out = self.clone();
        out.full.space = full_space;
        out.reduced.space = reduced_space;
        Ok(out)
    }
}

/// Transpose of multiplication and differential: `⟨Δc, x⊗y⟩ = ⟨c, xy⟩` and
/// `⟨δc, x⟩ = ⟨c, dx⟩` against the monomial basis.
pub fn dual_coalgebra(b: &Cdga) -> Result<DualCoalgebra> {
    b.validate()?;
    let monomials = b.monomial_basis()?;
    let pos: HashMap<&Word, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let names: Vec<(String, i64)> =
        monomials.iter().map(|m| (format!("<{}>", b.fmt_word(m)), b.gens.word_degree(m))).collect();
    let space = GradedSpace::new(names)?;
    let n = monomials.len();
    let mut delta = vec![Tensor::zero(); n];
    let mut diff = vec![Tensor::zero(); n];
    for (i, x) in monomials.iter().enumerate() {
        let dx = b.d(&Poly::basis(x.clone()));
        for (m, c) in dx.iter() {
            diff[pos[m]].add_term(vec![i], c.clone());
        }
        for (j, y) in monomials.iter().enumerate() {
            let xy = b.mul(&Poly::basis(x.clone()), &Poly::basis(y.clone()));
            for (m, c) in xy.iter() {
                delta[pos[m]].add_term(vec![i, j], c.clone());
            }
        }
    }
    let mut full = AInfCoalgebra::new(space.clone(), false);
    for c in 0..n {
        full.set_op(1, c, diff[c].clone())?;
        full.set_op(2, c, delta[c].clone())?;
    }
    // C̄: drop the unit's dual and the splittings through it
    if !monomials[0].is_empty() {
        return Err(Error::Construction("monomial basis does not start with the unit".into()));
    }
    let reduced_space = GradedSpace::new((1..n).map(|i| (space.name(i).to_string(), space.degree(i))))?;
    let mut reduced = AInfCoalgebra::new(reduced_space, true);
    for c in 1..n {
        let shift = |w: &Word| w.iter().map(|&i| i - 1).collect::<Word>();
        let d1 = diff[c].filter(|w| w[0] != 0).map_keys(shift);
        let d2 = delta[c].filter(|w| w.iter().all(|&i| i != 0)).map_keys(shift);
        reduced.set_op(1, c - 1, d1)?;
        reduced.set_op(2, c - 1, d2)?;
    }
    Ok(DualCoalgebra { full, reduced, monomials })
}
