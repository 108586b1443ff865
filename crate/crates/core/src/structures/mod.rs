//! A∞-coalgebras and L∞-algebras as data, their axiom checkers, iterated
//! coproducts and the Maurer–Cartan machinery.

mod ainf;
mod linf;
mod mc;

use std::fmt;

pub use ainf::{ainf_relation, check_ainf, check_cocommutative, conilpotence, iterated_coproduct, AInfCoalgebra};
pub use linf::{canonical_words, check_linf, jacobi, LInfAlgebra};
pub use mc::{curvature, mc_check, perturb, truncate, MaurerCartanElement};

/// First failing instance of a structure relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub arity: usize,
    pub element: String,
    pub residual: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation of arity {} fails on {}: residual {}", self.arity, self.element, self.residual)
    }
}
