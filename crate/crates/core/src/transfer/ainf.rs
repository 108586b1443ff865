use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graded::{apply_factorwise, sign_rat, GradedMap, Tensor, Vector, Word};
use crate::structures::AInfCoalgebra;
use crate::trees::PlanarTree;

use super::retract::HomotopyRetract;
use super::{arity_cap, TransferOptions};

/// Sign `(−1)^{Σ_j (k−j)|c_j|}` of `(s^{−1})^{⊗k}` on `c_1 ⊗ ⋯ ⊗ c_k`.
pub(crate) fn desuspension_sign(word: &[usize], degrees: &[i64]) -> i32 {
    let k = word.len();
    let e: i64 = word.iter().enumerate().map(|(j, &c)| (k - 1 - j) as i64 * degrees[c]).sum();
    if e.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Passes between `Δ_k` and the cobar component `D_k = (−1)^k (s^{−1})^{⊗k} Δ_k s`
/// (an involution, so it converts in both directions).
pub(crate) fn cobar_convert(k: usize, t: &Tensor, degrees: &[i64]) -> Tensor {
    let eps = if k % 2 == 1 { -1 } else { 1 };
    t.iter()
        .map(|(w, c)| (w.clone(), c * sign_rat(eps * desuspension_sign(w, degrees))))
        .collect()
}

/// Shifted-world data shared by both evaluation routes.
struct Shifted<'a> {
    c: &'a AInfCoalgebra,
    r: &'a HomotopyRetract,
}

impl Shifted<'_> {
    fn op(&self, k: usize, b: usize) -> Tensor {
        cobar_convert(k, &self.c.op(k, b), self.c.space.degrees())
    }

    /// `−H` where `H(s^{−1}x) = −s^{−1}k(x)` is the shifted homotopy.
    fn minus_h(&self, b: usize) -> Vector {
        self.r.homotopy.image(b)
    }

    fn leaf(&self, b: usize) -> Tensor {
        self.r.proj.image(b).map_keys(|&y| vec![y])
    }

    fn eval_tree(&self, t: &PlanarTree, b: usize) -> Tensor {
        match t {
            PlanarTree::Leaf => self.leaf(b),
            PlanarTree::Node(children) => {
                let split = self.op(children.len(), b);
                apply_factorwise(&split, |_| 0, &vec![0; children.len()], |slot, x| match &children[slot] {
                    PlanarTree::Leaf => self.leaf(x),
                    child => self.minus_h(x).apply(|&y| self.eval_tree(child, y)),
                })
            }
        }
    }
}

/// `Δ_T` for a planar tree: leaves labelled by the projection, internal
/// edges by the homotopy, the root by the inclusion and vertices by the
/// co-operations, composed from the root up.
pub fn tree_map_coalgebra(t: &PlanarTree, c: &AInfCoalgebra, r: &HomotopyRetract) -> Result<GradedMap<Word>> {
    check_compatible(c, r)?;
    let sh = Shifted { c, r };
    let k = t.leaves();
    let mut m = GradedMap::zero(k as i64 - 2);
    for y in 0..r.small.space.dim() {
        let img = r.incl.image(y).apply(|&b| sh.eval_tree(t, b));
        m.set(y, cobar_convert(k, &img, r.small.space.degrees()));
    }
    Ok(m)
}

fn check_compatible(c: &AInfCoalgebra, r: &HomotopyRetract) -> Result<()> {
    if c.space != r.big.space {
        return Err(Error::Input("retract does not start from the coalgebra's space".into()));
    }
    if c.differential().images != r.big.d.images {
        return Err(Error::Input("retract differential differs from Δ_1".into()));
    }
    Ok(())
}

/// All `PT_k` summed at once: `F_1 = p`, and `F_k` applies each `D_r` and
/// distributes the leaves over the factors, with `F_m ∘ (−H)` on factors
/// receiving `m ≥ 2` leaves.
struct Summed<'a> {
    sh: Shifted<'a>,
    binary_only: bool,
    memo: HashMap<(usize, usize), Tensor>,
}

impl Summed<'_> {
    fn f(&mut self, k: usize, b: usize) -> Tensor {
        if k == 1 {
            return self.sh.leaf(b);
        }
        if let Some(t) = self.memo.get(&(k, b)) {
            return t.clone();
        }
        let mut total = Tensor::zero();
        let top = if self.binary_only { 2 } else { k };
        for r in 2..=top {
            let split = self.sh.op(r, b);
            if split.is_zero() {
                continue;
            }
            for comp in compositions(k, r) {
                let out = {
                    let mut factor = |slot: usize, x: usize| -> Tensor {
                        let m = comp[slot];
                        if m == 1 {
                            self.sh.leaf(x)
                        } else {
                            let h = self.sh.minus_h(x);
                            let mut acc = Tensor::zero();
                            for (&y, q) in h.iter() {
                                acc.add_scaled(&self.f(m, y), q);
                            }
                            acc
                        }
                    };
                    apply_factorwise(&split, |_| 0, &vec![0; r], &mut factor)
                };
                total.add_assign(&out);
            }
        }
        self.memo.insert((k, b), total.clone());
        total
    }
}

pub(crate) fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if n >= 1 { vec![vec![n]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Transferred A∞-structure `Δ'_k = Σ_{T∈PT_k} Δ_T` on the small complex,
/// with `Δ'_1` its differential.
pub fn transfer_ainf(c: &AInfCoalgebra, r: &HomotopyRetract, opts: &TransferOptions) -> Result<AInfCoalgebra> {
    check_compatible(c, r)?;
    let small = &r.small.space;
    let mut out = AInfCoalgebra::new(small.clone(), c.reduced);
    for y in 0..small.dim() {
        out.set_op(1, y, r.small.d.image(y).map_keys(|&z| vec![z]))?;
    }
    let cap = arity_cap(&c.space, opts);
    let mut summed = Summed { sh: Shifted { c, r }, binary_only: opts.binary_only, memo: HashMap::new() };
    for k in 2..=cap.top() {
        for y in 0..small.dim() {
            let incl = r.incl.image(y);
            let mut img = Tensor::zero();
            for (&b, q) in incl.iter() {
                img.add_scaled(&summed.f(k, b), q);
            }
            if k > cap.last {
                if !img.is_zero() {
                    return Err(cap.exceeded());
                }
                continue;
            }
            out.set_op(k, y, cobar_convert(k, &img, small.degrees()))?;
        }
    }
    Ok(out)
}
