use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::linalg::{kernel, solve, Matrix};
use crate::graded::{factorial, GradedSpace, Rational, Vector};

use super::linf::{canonical_words, LInfAlgebra};

/// A degree −1 element whose curvature `Σ_k ℓ_k(z, …, z)/k!` vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaurerCartanElement {
    pub element: Vector,
}

/// `Σ_{k≥1} ℓ_k(z, …, z)/k!`. The series stops at the largest stored
/// arity, so it is always a finite sum.
pub fn curvature(l: &LInfAlgebra, z: &Vector) -> Vector {
    let mut total = Vector::zero();
    for k in l.arities() {
        let args = vec![z; k];
        let term = l.bracket_vectors(&args);
        total.add_scaled(&term, &(Rational::from_integer(1.into()) / factorial(k)));
    }
    total
}

pub fn mc_check(l: &LInfAlgebra, z: &Vector) -> Result<MaurerCartanElement> {
    if let Some(d) = l.space.vector_degree(z)? {
        if d != -1 {
            return Err(Error::Degree(format!("Maurer–Cartan candidate has degree {d}, not −1")));
        }
    }
    let r = curvature(l, z);
    if !r.is_zero() {
        return Err(Error::Axiom(format!("Maurer–Cartan residual {}", l.space.fmt_vector(&r))));
    }
    Ok(MaurerCartanElement { element: z.clone() })
}

/// `ℓ_k^z(x_1, …, x_k) = Σ_{i≥0} ℓ_{i+k}(z, …, z, x_1, …, x_k)/i!`.
pub fn perturb(l: &LInfAlgebra, z: &MaurerCartanElement) -> Result<LInfAlgebra> {
    let mut out = LInfAlgebra::new(l.space.clone());
    if z.element.is_zero() {
        return Ok(l.clone());
    }
    let top = l.max_arity();
    for k in 1..=top {
        let words = canonical_words(&l.space, k, true, |d| l.space.has_degree(d + k as i64 - 2));
        for w in words {
            let basis: Vec<Vector> = w.iter().map(|&b| Vector::basis(b)).collect();
            let mut value = Vector::zero();
            for i in 0..=(top - k) {
                let mut args: Vec<&Vector> = vec![&z.element; i];
                args.extend(basis.iter());
                let term = l.bracket_vectors(&args);
                value.add_scaled(&term, &(Rational::from_integer(1.into()) / factorial(i)));
            }
            out.set_bracket(&w, value)?;
        }
    }
    Ok(out)
}

/// Keeps positive degrees, replaces degree 0 by the cycles of `ℓ_1` (an
/// echelon basis in declaration order) and drops negative degrees.
pub fn truncate(l: &LInfAlgebra) -> Result<LInfAlgebra> {
    let zero_basis = l.space.basis_of_degree(0);
    let minus_one = l.space.basis_of_degree(-1);
    // ℓ_1 : L_0 → L_{-1} as a matrix, rows indexed by L_{-1}
    let mut m: Matrix = vec![vec![Rational::zero(); zero_basis.len()]; minus_one.len()];
    for (col, &b) in zero_basis.iter().enumerate() {
        let img = l.bracket(&[b]);
        for (row, &t) in minus_one.iter().enumerate() {
            m[row][col] = img.coeff(&t);
        }
    }
    let cycles = kernel(&m, zero_basis.len());

    // declaration order, with the degree-0 block replaced by the cycle basis
    let mut new_vectors: Vec<(String, i64, Vector)> = Vec::new();
    for (j, c) in cycles.iter().enumerate() {
        let v: Vector = zero_basis.iter().zip(c).map(|(&b, q)| (b, q.clone())).collect();
        let name = match v.iter().next() {
            Some((&b, q)) if v.len() == 1 && *q == Rational::from_integer(1.into()) => l.space.name(b).to_string(),
            _ => format!("cycle{}", j + 1),
        };
        new_vectors.push((name, 0, v));
    }
    let mut ordered: Vec<(String, i64, Vector)> = Vec::new();
    for i in 0..l.space.dim() {
        if l.space.degree(i) == 0 {
            if i == zero_basis.first().copied().unwrap_or(usize::MAX) {
                ordered.append(&mut new_vectors);
            }
        } else if l.space.degree(i) > 0 {
            ordered.push((l.space.name(i).to_string(), l.space.degree(i), Vector::basis(i)));
        }
    }
    let space = GradedSpace::new(ordered.iter().map(|(n, d, _)| (n.clone(), *d)))?;
    let embed: Vec<Vector> = ordered.iter().map(|(_, _, v)| v.clone()).collect();

    // express an old vector of nonnegative degree in the new basis
    let zero_cols: Vec<usize> = (0..ordered.len()).filter(|&i| ordered[i].1 == 0).collect();
    let express = |v: &Vector| -> Result<Vector> {
        let mut out = Vector::zero();
        let mut zero_part = Vector::zero();
        for (&b, q) in v.iter() {
            let d = l.space.degree(b);
            if d > 0 {
                let idx = space.index_of(l.space.name(b)).expect("positive basis kept");
                out.add_term(idx, q.clone());
            } else if d == 0 {
                zero_part.add_term(b, q.clone());
            } else {
                return Err(Error::Construction("bracket leaves the truncation".into()));
            }
        }
        if !zero_part.is_zero() {
            let mat: Matrix = zero_basis
                .iter()
                .map(|&b| zero_cols.iter().map(|&c| embed[c].coeff(&b)).collect())
                .collect();
            let rhs: Vec<Rational> = zero_basis.iter().map(|b| zero_part.coeff(b)).collect();
            let sol = solve(&mat, &rhs)
                .ok_or_else(|| Error::Construction("degree-0 bracket output is not a cycle".into()))?;
            for (c, q) in zero_cols.iter().zip(sol) {
                out.add_term(*c, q);
            }
        }
        Ok(out)
    };

    let mut out = LInfAlgebra::new(space.clone());
    for k in l.arities() {
        let words = canonical_words(&space, k, true, |d| space.has_degree(d + k as i64 - 2));
        for w in words {
            let args: Vec<&Vector> = w.iter().map(|&i| &embed[i]).collect();
            let value = l.bracket_vectors(&args);
            out.set_bracket(&w, express(&value)?)?;
        }
    }
    Ok(out)
}
