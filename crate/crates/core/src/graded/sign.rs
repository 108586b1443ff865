//! Permutation signatures, Koszul signs, shuffles and graded sorting.

use crate::error::{Error, Result};

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn check_perm(perm: &[usize]) -> Result<()> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::Input(format!("{perm:?} is not a permutation of 1..{n}")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// Koszul sign ε of rearranging `x_1 … x_n` into `x_{σ(1)} … x_{σ(n)}`
/// (1-based `perm[i] = σ(i+1)`), without the signature.
pub fn koszul_only(perm: &[usize], degrees: &[i64]) -> Result<i32> {
    if perm.len() != degrees.len() {
        return Err(Error::Input(format!(
            "permutation of length {} with {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    check_perm(perm)?;
    let mut s = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && odd(degrees[perm[i] - 1] * degrees[perm[j] - 1]) {
                s = -s;
            }
        }
    }
    Ok(s)
}

/// Signature ε_σ of a 1-based permutation.
pub fn signature(perm: &[usize]) -> Result<i32> {
    check_perm(perm)?;
    let mut s = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                s = -s;
            }
        }
    }
    Ok(s)
}

/// `ε_σ · ε`: the signature times the Koszul sign, i.e. the sign governing
/// graded skew-symmetric rearrangements.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i32> {
    Ok(signature(perm)? * koszul_only(perm, degrees)?)
}

/// Koszul sign of a 0-based rearrangement, for internal callers that
/// already know the input is valid.
pub(crate) fn koszul_of(order: &[usize], degrees: &[i64]) -> i32 {
    let mut s = 1;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] && odd(degrees[order[i]] * degrees[order[j]]) {
                s = -s;
            }
        }
    }
    s
}

pub(crate) fn signature_of(order: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                s = -s;
            }
        }
    }
    s
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The `(i, n−i)`-shuffles as 0-based orders: the first `i` entries are
/// increasing and so are the last `n−i`.
pub fn shuffles(i: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(start: usize, left: usize, n: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut order = chosen.clone();
            order.extend((0..n).filter(|x| !chosen.contains(x)));
            out.push(order);
            return;
        }
        for s in start..n {
            chosen.push(s);
            rec(s + 1, left - 1, n, chosen, out);
            chosen.pop();
        }
    }
    if i <= n {
        rec(0, i, n, &mut chosen, &mut out);
    }
    out
}

/// Sorts a word of graded symbols into canonical order by `rank`, using
/// adjacent transpositions. Each transposition of `a, b` costs
/// `(−1)^{|a||b|}`, times an extra `−1` when `skew` (exterior-style
/// symbols). Returns `None` when the word vanishes: an odd symbol repeated
/// in the commutative case, an even symbol repeated in the skew case.
pub fn sort_graded(
    factors: &[usize],
    degree: impl Fn(usize) -> i64,
    rank: impl Fn(usize) -> usize,
    skew: bool,
) -> Option<(i32, Vec<usize>)> {
    let mut w = factors.to_vec();
    let mut sign = 1;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && rank(w[j - 1]) > rank(w[j]) {
            if odd(degree(w[j - 1]) * degree(w[j])) {
                sign = -sign;
            }
            if skew {
                sign = -sign;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    for pair in w.windows(2) {
        if pair[0] == pair[1] {
            let d = degree(pair[0]);
            if odd(d) != skew {
                return None;
            }
        }
    }
    Some((sign, w))
}
