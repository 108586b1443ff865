use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::tensor::{apply_at_slot, reduced_unshuffle};
use crate::graded::{sign_rat, GradedMap, GradedSpace, Tensor, Word};

use super::Violation;

/// A graded space with co-operations `Δ_k: C → C^{⊗k}` of degree `k − 2`.
/// `Δ_1` is the differential and `Δ_2` the (reduced, when `reduced`)
/// coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfCoalgebra {
    pub space: GradedSpace,
    ops: BTreeMap<usize, GradedMap<Word>>,
    /// Whether this is the kernel of the counit (reduced coproducts).
    pub reduced: bool,
}

impl AInfCoalgebra {
    pub fn new(space: GradedSpace, reduced: bool) -> Self {
        AInfCoalgebra { space, ops: BTreeMap::new(), reduced }
    }

    /// Sets `Δ_k(basis)`, checking that every word has length `k` and
    /// degree `|basis| + k − 2`.
    pub fn set_op(&mut self, k: usize, basis: usize, image: Tensor) -> Result<()> {
        if k == 0 {
            return Err(Error::Input("co-operations start at arity 1".into()));
        }
        let expected = self.space.degree(basis) + k as i64 - 2;
        for (w, _) in image.iter() {
            if w.len() != k {
                return Err(Error::Degree(format!(
                    "Δ_{k}({}) contains a word of length {}",
                    self.space.name(basis),
                    w.len()
                )));
            }
            if self.space.word_degree(w) != expected {
                return Err(Error::Degree(format!(
                    "Δ_{k}({}) has a term of degree {}, expected {expected}",
                    self.space.name(basis),
                    self.space.word_degree(w)
                )));
            }
        }
        self.ops.entry(k).or_insert_with(|| GradedMap::zero(k as i64 - 2)).set(basis, image);
        if self.ops[&k].is_zero() {
            self.ops.remove(&k);
        }
        Ok(())
    }

    pub fn op(&self, k: usize, basis: usize) -> Tensor {
        self.ops.get(&k).map(|m| m.image(basis)).unwrap_or_default()
    }

    /// Applies `Δ_k` to a tensor of length one.
    pub fn op_on(&self, k: usize, t: &Tensor) -> Tensor {
        t.apply(|w| {
            debug_assert_eq!(w.len(), 1);
            self.op(k, w[0])
        })
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().copied()
    }

    /// Largest `k` with `Δ_k ≠ 0` (0 for the trivial structure).
    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_dgc(&self) -> bool {
        self.max_arity() <= 2
    }

    pub fn differential(&self) -> GradedMap {
        let mut m = GradedMap::zero(-1);
        for i in 0..self.space.dim() {
            m.set(i, self.op(1, i).map_keys(|w| w[0]));
        }
        m
    }
}

/// Evaluates `Σ_{k,n} (−1)^{k+n+kn} (id^{⊗i−k−n} ⊗ Δ_k ⊗ id^{⊗n}) Δ_{i−k+1}`
/// on one basis element.
pub fn ainf_relation(c: &AInfCoalgebra, i: usize, x: usize) -> Tensor {
    let degrees = c.space.degrees();
    let mut total = Tensor::zero();
    for k in 1..=i {
        let m = i - k + 1;
        let inner = c.op(m, x);
        if inner.is_zero() {
            continue;
        }
        for n in 0..=(i - k) {
            let slot = i - k - n;
            let term = apply_at_slot(&inner, degrees, slot, k as i64 - 2, |b| c.op(k, b));
            let sign = if (k + n + k * n) % 2 == 1 { -1 } else { 1 };
            total.add_scaled(&term, &sign_rat(sign));
        }
    }
    total
}

/// Checks the A∞ relations for every `i ≤ 2·max_arity − 1` on every basis
/// element.
pub fn check_ainf(c: &AInfCoalgebra) -> std::result::Result<(), Violation> {
    let bound = (2 * c.max_arity()).saturating_sub(1);
    for i in 1..=bound {
        for x in 0..c.space.dim() {
            let r = ainf_relation(c, i, x);
            if !r.is_zero() {
                return Err(Violation {
                    arity: i,
                    element: c.space.name(x).to_string(),
                    residual: c.space.fmt_tensor(&r),
                });
            }
        }
    }
    Ok(())
}

/// Checks that the reduced unshuffle coproduct kills every `Δ_k(x)`.
pub fn check_cocommutative(c: &AInfCoalgebra) -> std::result::Result<(), Violation> {
    let degrees = c.space.degrees();
    for k in c.arities() {
        for x in 0..c.space.dim() {
            let mut total = crate::graded::tensor::TensorPair::zero();
            for (w, coeff) in c.op(k, x).iter() {
                let split = reduced_unshuffle(w, degrees).expect("nonempty word");
                total.add_scaled(&split, coeff);
            }
            if !total.is_zero() {
                let shown = total
                    .iter()
                    .map(|((a, b), q)| {
                        let left = Tensor::single(a.clone(), q.clone());
                        format!("({}) ⊗ ({})", c.space.fmt_tensor(&left), c.space.fmt_tensor(&Tensor::basis(b.clone())))
                    })
                    .collect::<Vec<_>>()
                    .join(" + ");
                return Err(Violation { arity: k, element: c.space.name(x).to_string(), residual: shown });
            }
        }
    }
    Ok(())
}

/// `Δ^{(k)} = (Δ ⊗ id ⊗ ⋯) ∘ ⋯ ∘ Δ`, with `Δ^{(0)} = id`. Only defined for
/// differential graded coalgebras.
pub fn iterated_coproduct(c: &AInfCoalgebra, k: usize) -> Result<GradedMap<Word>> {
    if !c.is_dgc() {
        return Err(Error::Unsupported(
            "iterated coproducts need a coalgebra without higher co-operations".into(),
        ));
    }
    let mut m = GradedMap::zero(0);
    for x in 0..c.space.dim() {
        m.set(x, iterated_coproduct_of(c, x, k));
    }
    Ok(m)
}

pub(crate) fn iterated_coproduct_of(c: &AInfCoalgebra, x: usize, k: usize) -> Tensor {
    let mut t = Tensor::basis(vec![x]);
    for _ in 0..k {
        if t.is_zero() {
            break;
        }
        t = apply_at_slot(&t, c.space.degrees(), 0, 0, |b| c.op(2, b));
    }
    t
}

/// Largest `n` with `Δ^{(n−1)} ≠ 0` on the reduced coalgebra: the
/// coalgebra-side length (2 means all triple iterated coproducts vanish).
pub fn conilpotence(c: &AInfCoalgebra) -> Result<usize> {
    if !c.reduced {
        return Err(Error::Unsupported("conilpotence is defined on the reduced coalgebra".into()));
    }
    if !c.is_dgc() {
        return Err(Error::Unsupported("conilpotence needs a differential graded coalgebra".into()));
    }
    let mut n = 0;
    for x in 0..c.space.dim() {
        let mut k = 0;
        while !iterated_coproduct_of(c, x, k).is_zero() {
            k += 1;
            if k > c.space.dim() + 1 {
                return Err(Error::Construction("reduced coproduct is not conilpotent".into()));
            }
        }
        n = n.max(k);
    }
    Ok(n)
}
