use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::sign::{koszul_of, shuffles, signature_of};
use crate::graded::{sign_rat, GradedMap, GradedSpace, Rational, Vector, Word};

use super::Violation;

/// A graded space with graded skew-symmetric brackets `ℓ_k` of degree `k − 2`,
/// stored on canonical wedge words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInfAlgebra {
    pub space: GradedSpace,
    ops: BTreeMap<usize, BTreeMap<Word, Vector>>,
}

impl LInfAlgebra {
    pub fn new(space: GradedSpace) -> Self {
        LInfAlgebra { space, ops: BTreeMap::new() }
    }

    /// Sets `ℓ_k(x_1, …, x_k)` for the given (not necessarily sorted)
    /// arguments; skew-symmetry determines the value on every reordering.
    pub fn set_bracket(&mut self, args: &[usize], value: Vector) -> Result<()> {
        let k = args.len();
        if k == 0 {
            return Err(Error::Input("brackets start at arity 1".into()));
        }
        let expected = self.space.word_degree(args) + k as i64 - 2;
        if let Some(d) = self.space.vector_degree(&value)? {
            if d != expected {
                return Err(Error::Degree(format!(
                    "ℓ_{k}({}) has degree {d}, expected {expected}",
                    self.fmt_args(args)
                )));
            }
        }
        let Some((sign, word)) = self.space.canonical_word(args, true) else {
            if value.is_zero() {
                return Ok(());
            }
            return Err(Error::Input(format!(
                "ℓ_{k}({}) is forced to vanish by skew-symmetry",
                self.fmt_args(args)
            )));
        };
        let value = value.scaled(&sign_rat(sign));
        let table = self.ops.entry(k).or_default();
        if value.is_zero() {
            table.remove(&word);
        } else {
            table.insert(word, value);
        }
        if table.is_empty() {
            self.ops.remove(&k);
        }
        Ok(())
    }

    fn fmt_args(&self, args: &[usize]) -> String {
        args.iter().map(|&i| self.space.name(i)).collect::<Vec<_>>().join(", ")
    }

    /// `ℓ_k` on basis arguments in any order.
    pub fn bracket(&self, args: &[usize]) -> Vector {
        let Some(table) = self.ops.get(&args.len()) else { return Vector::zero() };
        let Some((sign, word)) = self.space.canonical_word(args, true) else { return Vector::zero() };
        match table.get(&word) {
            Some(v) => v.scaled(&sign_rat(sign)),
            None => Vector::zero(),
        }
    }

    /// `ℓ_k` extended multilinearly to vectors.
    pub fn bracket_vectors(&self, args: &[&Vector]) -> Vector {
        let k = args.len();
        if !self.ops.contains_key(&k) || args.iter().any(|v| v.is_zero()) {
            return Vector::zero();
        }
        let mut out = Vector::zero();
        let supports: Vec<Vec<(usize, Rational)>> =
            args.iter().map(|v| v.iter().map(|(&i, c)| (i, c.clone())).collect()).collect();
        let mut idx = vec![0usize; k];
        loop {
            let word: Vec<usize> = (0..k).map(|j| supports[j][idx[j]].0).collect();
            let b = self.bracket(&word);
            if !b.is_zero() {
                let coeff: Rational = (0..k).map(|j| supports[j][idx[j]].1.clone()).product();
                out.add_scaled(&b, &coeff);
            }
            let mut j = k;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < supports[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().copied()
    }

    /// Stored nonzero brackets of arity `k`, keyed by canonical word.
    pub fn brackets_of_arity(&self, k: usize) -> impl Iterator<Item = (&Word, &Vector)> {
        self.ops.get(&k).into_iter().flat_map(|t| t.iter())
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_minimal(&self) -> bool {
        !self.ops.contains_key(&1)
    }

    /// `ℓ_1` as a map.
    pub fn differential(&self) -> GradedMap {
        let mut m = GradedMap::zero(-1);
        for x in 0..self.space.dim() {
            m.set(x, self.bracket(&[x]));
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.ops.keys().all(|&k| k == 1)
    }
}

/// Canonical wedge (`skew`) or monomial words of length `k` over `space`
/// whose total degree passes `keep`.
pub fn canonical_words(space: &GradedSpace, k: usize, skew: bool, keep: impl Fn(i64) -> bool) -> Vec<Word> {
    struct Walk<'a> {
        space: &'a GradedSpace,
        order: Vec<usize>,
        k: usize,
        skew: bool,
        keep: &'a dyn Fn(i64) -> bool,
        cur: Vec<usize>,
        out: Vec<Word>,
    }
    impl Walk<'_> {
        fn rec(&mut self, start: usize, deg: i64) {
            if self.cur.len() == self.k {
                if (self.keep)(deg) {
                    self.out.push(self.cur.clone());
                }
                return;
            }
            for pos in start..self.order.len() {
                let b = self.order[pos];
                let d = self.space.degree(b);
                // a repeated symbol survives only with the right parity
                if self.cur.last() == Some(&b) && ((d.rem_euclid(2) == 1) != self.skew) {
                    continue;
                }
                self.cur.push(b);
                self.rec(pos, deg + d);
                self.cur.pop();
            }
        }
    }
    let mut order: Vec<usize> = (0..space.dim()).collect();
    order.sort_by_key(|&i| space.rank(i));
    let mut walk = Walk { space, order, k, skew, keep: &keep, cur: Vec::new(), out: Vec::new() };
    walk.rec(0, 0);
    walk.out
}

/// The generalized Jacobi expression
/// `Σ_{i+j=n+1} Σ_{σ∈S(i,n−i)} ε_σ ε (−1)^{i(j−1)} ℓ_j(ℓ_i(x_σ(1), …), …)`.
pub fn jacobi(l: &LInfAlgebra, args: &[usize]) -> Vector {
    let n = args.len();
    let degs: Vec<i64> = args.iter().map(|&a| l.space.degree(a)).collect();
    let mut total = Vector::zero();
    for i in 1..=n {
        let j = n + 1 - i;
        if !l.ops.contains_key(&i) || !l.ops.contains_key(&j) {
            continue;
        }
        for order in shuffles(i, n) {
            let inner_args: Vec<usize> = order[..i].iter().map(|&p| args[p]).collect();
            let inner = l.bracket(&inner_args);
            if inner.is_zero() {
                continue;
            }
            let mut sign = signature_of(&order) * koszul_of(&order, &degs);
            if (i * (j - 1)) % 2 == 1 {
                sign = -sign;
            }
            let rest: Vec<Vector> = order[i..].iter().map(|&p| Vector::basis(args[p])).collect();
            let mut refs: Vec<&Vector> = vec![&inner];
            refs.extend(rest.iter());
            total.add_scaled(&l.bracket_vectors(&refs), &sign_rat(sign));
        }
    }
    total
}

/// Checks the generalized Jacobi identities for `n ≤ 2·max_arity − 1` on all
/// canonical wedge words whose output degree exists in the space.
pub fn check_linf(l: &LInfAlgebra) -> std::result::Result<(), Violation> {
    let bound = (2 * l.max_arity()).saturating_sub(1);
    for n in 1..=bound {
        let words = canonical_words(&l.space, n, true, |d| l.space.has_degree(d + n as i64 - 3));
        for w in words {
            let r = jacobi(l, &w);
            if !r.is_zero() {
                return Err(Violation {
                    arity: n,
                    element: w.iter().map(|&i| l.space.name(i)).collect::<Vec<_>>().join("∧"),
                    residual: l.space.fmt_vector(&r),
                });
            }
        }
    }
    Ok(())
}
