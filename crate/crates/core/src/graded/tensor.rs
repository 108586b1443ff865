//! Multilinear operations on tensor words: tensor products of maps, the
//! unshuffle coproduct and symmetrization.

use super::sign::{koszul_of, permutations, shuffles, signature_of};
use super::{apply_factorwise, sign_rat, GradedMap, GradedSpace, Lin, Tensor, Word};
use crate::error::{Error, Result};

/// `(f_1 ⊗ … ⊗ f_k)(t)` for maps sending basis elements to tensors, with the
/// Koszul rule `(f⊗g)(x⊗y) = (−1)^{|g||x|} f(x)⊗g(y)`.
pub fn tensor_map(maps: &[&GradedMap<Word>], space: &GradedSpace, t: &Tensor) -> Result<Tensor> {
    for (w, _) in t.iter() {
        if w.len() != maps.len() {
            return Err(Error::Input(format!(
                "tensor word of length {} given to a {}-fold tensor map",
                w.len(),
                maps.len()
            )));
        }
    }
    let degrees: Vec<i64> = maps.iter().map(|m| m.degree).collect();
    Ok(apply_factorwise(t, |i| space.degree(i), &degrees, |slot, b| maps[slot].image(b)))
}

/// The identity as a map into length-one words.
pub fn identity_word_map(dim: usize) -> GradedMap<Word> {
    let mut m = GradedMap::zero(0);
    for i in 0..dim {
        m.set(i, Tensor::basis(vec![i]));
    }
    m
}

/// Element of `T(C) ⊗ T(C)`: pairs of words.
pub type TensorPair = Lin<(Word, Word)>;

fn unshuffle_range(word: &[usize], degrees: &[i64], lo: usize, hi: usize) -> TensorPair {
    let n = word.len();
    let degs: Vec<i64> = word.iter().map(|&b| degrees[b]).collect();
    let mut out = TensorPair::zero();
    for i in lo..=hi {
        for order in shuffles(i, n) {
            let s = signature_of(&order) * koszul_of(&order, &degs);
            let left = order[..i].iter().map(|&j| word[j]).collect();
            let right = order[i..].iter().map(|&j| word[j]).collect();
            out.add_term((left, right), sign_rat(s));
        }
    }
    out
}

/// Unshuffle coproduct `Σ_i Σ_{σ∈S(i,n−i)} ε_σ ε (a_σ(1)…a_σ(i)) ⊗ (…)`,
/// including the two trivial splittings.
pub fn unshuffle(word: &[usize], degrees: &[i64]) -> Result<TensorPair> {
    if word.is_empty() {
        return Err(Error::Input("unshuffle of the empty word".into()));
    }
    Ok(unshuffle_range(word, degrees, 0, word.len()))
}

/// Reduced unshuffle coproduct: only splittings with both sides nonempty.
pub fn reduced_unshuffle(word: &[usize], degrees: &[i64]) -> Result<TensorPair> {
    if word.is_empty() {
        return Err(Error::Input("unshuffle of the empty word".into()));
    }
    if word.len() == 1 {
        return Ok(TensorPair::zero());
    }
    Ok(unshuffle_range(word, degrees, 1, word.len() - 1))
}

/// `v_1∧…∧v_k ↦ Σ_{σ∈S_k} ε_σ ε v_σ(1)⊗…⊗v_σ(k)`. With `skew = false` the
/// signature is dropped (symmetric convention, used on suspended spaces).
pub fn symmetrize(word: &[usize], degrees: &[i64], skew: bool) -> Tensor {
    let degs: Vec<i64> = word.iter().map(|&b| degrees[b]).collect();
    let mut out = Tensor::zero();
    for order in permutations(word.len()) {
        let mut s = koszul_of(&order, &degs);
        if skew {
            s *= signature_of(&order);
        }
        out.add_term(order.iter().map(|&j| word[j]).collect(), sign_rat(s));
    }
    out
}

/// `(id^{⊗r} ⊗ f ⊗ id^{⊗t})` applied to a tensor, where `f` sends a basis
/// element to a tensor and sits at slot `r` of words of length `r + 1 + t`.
pub fn apply_at_slot(
    t: &Tensor,
    degrees: &[i64],
    slot: usize,
    map_degree: i64,
    f: impl Fn(usize) -> Tensor,
) -> Tensor {
    let mut out = Tensor::zero();
    for (w, c) in t.iter() {
        if slot >= w.len() {
            continue;
        }
        let img = f(w[slot]);
        if img.is_zero() {
            continue;
        }
        let passed: i64 = w[..slot].iter().map(|&b| degrees[b]).sum();
        let sign = if (map_degree * passed).rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
        for (iw, ic) in img.iter() {
            let mut nw = w[..slot].to_vec();
            nw.extend_from_slice(iw);
            nw.extend_from_slice(&w[slot + 1..]);
            out.add_term(nw, &sign * ic);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::rat;

    #[test]
    fn unshuffle_small_cases() {
        let t = unshuffle(&[0], &[2]).unwrap();
        assert_eq!(t.len(), 2);
        // n = 2, even degrees: ()(ab) + (a)(b) + (b)(a) + (ab)()
        let t = unshuffle(&[0, 1], &[2, 2]).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.coeff(&(vec![1], vec![0])), rat(-1));
        assert_eq!(t.coeff(&(vec![0], vec![1])), rat(1));
        assert!(unshuffle(&[], &[]).is_err());
    }

    #[test]
    fn symmetrize_cases() {
        assert_eq!(symmetrize(&[0], &[3], true), Tensor::basis(vec![0]));
        let even = symmetrize(&[0, 1], &[2, 2], false);
        assert_eq!(even.coeff(&vec![1, 0]), rat(1));
        // odd, odd with signature: ε_σ = −1, ε = −1
        let odd = symmetrize(&[0, 1], &[3, 3], true);
        assert_eq!(odd.coeff(&vec![0, 1]), rat(1));
        assert_eq!(odd.coeff(&vec![1, 0]), rat(1));
        let three = symmetrize(&[0, 1, 2], &[1, 2, 3], true);
        assert_eq!(three.len(), 6);
    }

    #[test]
    fn tensor_map_identity() {
        let space = GradedSpace::new([("x", 1), ("y", 2)]).unwrap();
        let id = identity_word_map(2);
        let t = Tensor::basis(vec![0, 1]);
        assert_eq!(tensor_map(&[&id, &id], &space, &t).unwrap(), t);
    }
}
