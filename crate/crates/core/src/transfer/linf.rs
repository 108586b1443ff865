use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::Result;
use crate::graded::sign::koszul_of;
use crate::graded::{sign_rat, Rational, Vector, Word};
use crate::structures::{canonical_words, LInfAlgebra};
use crate::trees::{aut_order, planar_embedding, PlanarTree, RootedTree};

use super::retract::HomotopyRetract;
use super::{ainf::desuspension_sign, ArityCap, TransferOptions};

/// `q_k(sx_1, …, sx_k) = (−1)^k (−1)^{Σ_i (k−i)|x_i|} s ℓ_k(x_1, …, x_k)`:
/// the graded-symmetric degree −1 form of `ℓ_k` on the suspension. The
/// `(−1)^k` makes `q∘q = 0` equivalent to the Jacobi identities exactly as
/// `check_linf` states them. An involution up to `sx ↔ x`.
pub(crate) fn decalage(word: &[usize], degrees: &[i64]) -> i32 {
    let parity = if word.len() % 2 == 1 { -1 } else { 1 };
    parity * desuspension_sign(word, degrees)
}

/// Calls `f` on every basis word in the support of `v_1 ⊗ ⋯ ⊗ v_k`, with
/// the product of coefficients.
fn expand(args: &[&Vector], mut f: impl FnMut(&[usize], &Rational)) {
    fn rec(args: &[&Vector], word: &mut Vec<usize>, coeff: Rational, f: &mut dyn FnMut(&[usize], &Rational)) {
        if word.len() == args.len() {
            f(word, &coeff);
            return;
        }
        for (&i, c) in args[word.len()].iter() {
            word.push(i);
            rec(args, word, &coeff * c, f);
            word.pop();
        }
    }
    if args.iter().any(|v| v.is_zero()) {
        return;
    }
    rec(args, &mut Vec::new(), Rational::from_integer(1.into()), &mut f);
}

struct LieShifted<'a> {
    l: &'a LInfAlgebra,
    r: &'a HomotopyRetract,
}

impl LieShifted<'_> {
    fn q(&self, args: &[&Vector]) -> Vector {
        let mut out = Vector::zero();
        let degrees = self.l.space.degrees();
        expand(args, |w, c| {
            let b = self.l.bracket(w);
            if !b.is_zero() {
                out.add_scaled(&b, &(c * sign_rat(decalage(w, degrees))));
            }
        });
        out
    }

    /// Internal edge: `−H` with `H(sx) = −s h(x)`.
    fn edge(&self, v: &Vector) -> Vector {
        self.r.homotopy.apply(v)
    }

    fn eval_planar(&self, t: &PlanarTree, leaves: &[Vector]) -> Vector {
        match t {
            PlanarTree::Leaf => leaves[0].clone(),
            PlanarTree::Node(children) => {
                let mut values = Vec::with_capacity(children.len());
                let mut start = 0;
                for child in children {
                    let n = child.leaves();
                    let v = self.eval_planar(child, &leaves[start..start + n]);
                    values.push(if n == 1 { v } else { self.edge(&v) });
                    start += n;
                }
                self.q(&values.iter().collect::<Vec<_>>())
            }
        }
    }
}

/// Unordered set partitions of `items` into at least two blocks (exactly
/// two when `binary`), blocks listed by their least element.
fn partitions(items: &[usize], binary: bool) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize], binary: bool, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest.is_empty() {
            if acc.len() >= 2 {
                out.push(acc.clone());
            }
            return;
        }
        if binary && acc.len() == 2 {
            return;
        }
        let (first, others) = (rest[0], &rest[1..]);
        for mask in 0u64..(1 << others.len()) {
            let mut block = vec![first];
            let mut left = Vec::new();
            for (j, &x) in others.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    block.push(x);
                } else {
                    left.push(x);
                }
            }
            if acc.is_empty() && left.is_empty() {
                continue;
            }
            acc.push(block);
            rec(&left, binary, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, binary, &mut Vec::new(), &mut out);
    out
}

/// Sum over leaf-labelled trees, built by recursively partitioning the
/// leaves; each labelled tree arises exactly once.
struct Labelled<'a> {
    sh: &'a LieShifted<'a>,
    leaves: Vec<Vector>,
    degrees: Vec<i64>,
    binary: bool,
    memo: HashMap<Vec<usize>, Vector>,
}

impl Labelled<'_> {
    fn value(&mut self, set: &[usize]) -> Vector {
        if set.len() == 1 {
            return self.leaves[set[0]].clone();
        }
        if let Some(v) = self.memo.get(set) {
            return v.clone();
        }
        let mut total = Vector::zero();
        for blocks in partitions(set, self.binary) {
            let order: Vec<usize> = blocks
                .iter()
                .flatten()
                .map(|x| set.iter().position(|y| y == x).expect("block element"))
                .collect();
            let degs: Vec<i64> = set.iter().map(|&x| self.degrees[x]).collect();
            let sign = koszul_of(&order, &degs);
            let values: Vec<Vector> = blocks
                .iter()
                .map(|b| if b.len() == 1 { self.value(b) } else { self.sh.edge(&self.value(b)) })
                .collect();
            let q = self.sh.q(&values.iter().collect::<Vec<_>>());
            total.add_scaled(&q, &sign_rat(sign));
        }
        self.memo.insert(set.to_vec(), total.clone());
        total
    }
}

/// Arity above which brackets on a space in degrees `m ≤ |v| ≤ M`, `m ≥ 0`,
/// must vanish: a nonzero `ℓ_k` needs `k m + k − 2 ≤ M`.
pub fn lie_arity_bound(space: &crate::graded::GradedSpace) -> Option<usize> {
    let min = *space.degrees().iter().min()?;
    let max = *space.degrees().iter().max()?;
    if min < 0 {
        return None;
    }
    Some((((max + 2) / (min + 1)).max(2)) as usize)
}

fn check_compatible(l: &LInfAlgebra, r: &HomotopyRetract) -> Result<()> {
    use crate::error::Error;
    if l.space != r.big.space {
        return Err(Error::Input("retract does not start from the algebra's space".into()));
    }
    if l.differential().images != r.big.d.images {
        return Err(Error::Input("retract differential differs from ℓ_1".into()));
    }
    Ok(())
}

fn shifted_degrees(r: &HomotopyRetract, word: &[usize]) -> Vec<i64> {
    word.iter().map(|&y| r.small.space.degree(y) + 1).collect()
}

/// `ℓ_T` for a rooted tree: the canonical planar embedding with `i` on the
/// leaves, `h` on internal edges, `p` at the root and brackets at vertices,
/// precomposed with the graded symmetrization. Returned on canonical wedge
/// words of the small space, without the `1/|Aut T|` weight.
pub fn tree_map_lie(t: &RootedTree, l: &LInfAlgebra, r: &HomotopyRetract) -> Result<BTreeMap<Word, Vector>> {
    check_compatible(l, r)?;
    let k = t.leaves();
    let small = &r.small.space;
    let planar = planar_embedding(t);
    let sh = LieShifted { l, r };
    let mut out = BTreeMap::new();
    for word in canonical_words(small, k, true, |d| small.has_degree(d + k as i64 - 2)) {
        let degs = shifted_degrees(r, &word);
        let mut acc = Vector::zero();
        for order in crate::graded::sign::permutations(k) {
            let leaves: Vec<Vector> = order.iter().map(|&j| r.incl.image(word[j])).collect();
            let v = sh.eval_planar(&planar, &leaves);
            acc.add_scaled(&v, &sign_rat(koszul_of(&order, &degs)));
        }
        let value = r.proj.apply(&acc).scaled(&sign_rat(decalage(&word, small.degrees())));
        if !value.is_zero() {
            out.insert(word, value);
        }
    }
    Ok(out)
}

/// Transferred L∞-structure `ℓ'_k = Σ_{T∈T_k} ℓ_T/|Aut T|` on the small
/// complex, with `ℓ'_1` its differential.
pub fn transfer_linf(l: &LInfAlgebra, r: &HomotopyRetract, opts: &TransferOptions) -> Result<LInfAlgebra> {
    transfer_linf_filtered(l, r, opts, &|_| true)
}

/// [`transfer_linf`] restricted to the words accepted by `keep`; the caller
/// guarantees that every other word has a zero transferred bracket.
pub(crate) fn transfer_linf_filtered(
    l: &LInfAlgebra,
    r: &HomotopyRetract,
    opts: &TransferOptions,
    keep: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Result<LInfAlgebra> {
    check_compatible(l, r)?;
    let small = &r.small.space;
    let mut out = LInfAlgebra::new(small.clone());
    for y in 0..small.dim() {
        out.set_bracket(&[y], r.small.d.image(y))?;
    }
    let cap = ArityCap::new(opts.max_arity, lie_arity_bound(small));
    let sh = LieShifted { l, r };
    for k in 2..=cap.top() {
        let mut words = canonical_words(small, k, true, |d| small.has_degree(d + k as i64 - 2));
        words.retain(|w| keep(w));
        let values: Vec<(Word, Vector)> = words
            .into_par_iter()
            .map(|word| {
                let mut lab = Labelled {
                    sh: &sh,
                    leaves: word.iter().map(|&y| r.incl.image(y)).collect(),
                    degrees: shifted_degrees(r, &word),
                    binary: opts.binary_only,
                    memo: HashMap::new(),
                };
                let all: Vec<usize> = (0..k).collect();
                let v = r.proj.apply(&lab.value(&all)).scaled(&sign_rat(decalage(&word, small.degrees())));
                (word, v)
            })
            .collect();
        if k > cap.last {
            if values.iter().any(|(_, v)| !v.is_zero()) {
                return Err(cap.exceeded());
            }
            break;
        }
        for (word, v) in values {
            out.set_bracket(&word, v)?;
        }
    }
    Ok(out)
}

/// Same sum computed tree by tree, for cross-checking.
pub fn transfer_linf_by_trees(l: &LInfAlgebra, r: &HomotopyRetract, max_arity: usize) -> Result<LInfAlgebra> {
    let small = &r.small.space;
    let mut out = LInfAlgebra::new(small.clone());
    for y in 0..small.dim() {
        out.set_bracket(&[y], r.small.d.image(y))?;
    }
    for k in 2..=max_arity {
        let trees = crate::trees::enumerate_rooted(k, None)?;
        let maps: Vec<(u128, BTreeMap<Word, Vector>)> = trees
            .par_iter()
            .map(|t| Ok((aut_order(t), tree_map_lie(t, l, r)?)))
            .collect::<Result<_>>()?;
        let mut sum: BTreeMap<Word, Vector> = BTreeMap::new();
        for (aut, m) in maps {
            let w = Rational::new(1.into(), aut.into());
            for (word, v) in m {
                sum.entry(word).or_default().add_scaled(&v, &w);
            }
        }
        for (word, v) in sum {
            out.set_bracket(&word, v)?;
        }
    }
    Ok(out)
}
