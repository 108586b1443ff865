use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::linalg::{rank, solve, Matrix};
use crate::graded::{concat, frac, rat, GradedSpace, Rational, Tensor, Vector, Word};
use crate::structures::{check_cocommutative, AInfCoalgebra};
use crate::transfer::{cobar_convert, coordinates, Complex, Decomposition};

/// Free graded Lie algebra `𝕃(W)` with a differential, elements stored as
/// their expansions in the tensor algebra `T(W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeDgl {
    pub gens: GradedSpace,
    d: BTreeMap<usize, Tensor>,
}

/// `[P, Q] = PQ − (−1)^{|P||Q|} QP` for homogeneous tensors.
pub fn lie_bracket(space: &GradedSpace, p: &Tensor, q: &Tensor) -> Tensor {
    let (Some(dp), Some(dq)) = (tensor_degree(space, p), tensor_degree(space, q)) else {
        return Tensor::zero();
    };
    let mut out = concat(p, q);
    let s = if (dp * dq) % 2 != 0 { rat(1) } else { rat(-1) };
    out.add_scaled(&concat(q, p), &s);
    out
}

fn tensor_degree(space: &GradedSpace, t: &Tensor) -> Option<i64> {
    t.keys().next().map(|w| space.word_degree(w))
}

/// Left-normed bracket `[[…[x_1, x_2], …], x_n]` of a word.
fn left_normed(space: &GradedSpace, w: &[usize]) -> Tensor {
    let mut acc = Tensor::basis(vec![w[0]]);
    for &x in &w[1..] {
        acc = lie_bracket(space, &acc, &Tensor::basis(vec![x]));
    }
    acc
}

fn right_normed(space: &GradedSpace, w: &[usize]) -> Tensor {
    let (&last, rest) = w.split_last().expect("nonempty word");
    rest.iter().rev().fold(Tensor::basis(vec![last]), |acc, &x| lie_bracket(space, &Tensor::basis(vec![x]), &acc))
}

fn fmt_right_normed(space: &GradedSpace, w: &[usize]) -> String {
    match w {
        [x] => space.name(*x).to_string(),
        [x, rest @ ..] => format!("[{},{}]", space.name(*x), fmt_right_normed(space, rest)),
        [] => String::new(),
    }
}

/// Distinct orderings of a sorted word, in lexicographic order.
fn orderings(sorted: &[usize]) -> Vec<Word> {
    fn rec(left: &mut Vec<usize>, cur: &mut Word, out: &mut Vec<Word>) {
        if left.is_empty() {
            out.push(cur.clone());
            return;
        }
        let mut i = 0;
        while i < left.len() {
            let x = left.remove(i);
            cur.push(x);
            rec(left, cur, out);
            cur.pop();
            left.insert(i, x);
            i += 1;
            while i < left.len() && left[i] == x {
                i += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut sorted.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Writes a Lie element as a combination of right-normed brackets
/// `[x_1,[x_2,…]]`, using the lexicographically first independent ones.
/// `None` when `t` is not Lie or a letter multiset has too many orderings.
pub fn fmt_lie(space: &GradedSpace, t: &Tensor) -> Option<String> {
    if !is_lie_element(space, t) {
        return None;
    }
    let mut groups: BTreeMap<Word, Tensor> = BTreeMap::new();
    for (w, c) in t.iter() {
        let mut key = w.clone();
        key.sort_unstable();
        groups.entry(key).or_default().add_term(w.clone(), c.clone());
    }
    let mut terms = Vec::new();
    for (letters, part) in groups {
        let words = orderings(&letters);
        if words.len() > 5040 {
            return None;
        }
        let rows: Vec<Word> = words.clone();
        let column = |e: &Tensor| rows.iter().map(|r| e.coeff(r)).collect::<Vec<Rational>>();
        let mut chosen: Vec<(Word, Vec<Rational>)> = Vec::new();
        for w in &words {
            let col = column(&right_normed(space, w));
            let mut cols: Vec<&Vec<Rational>> = chosen.iter().map(|(_, c)| c).collect();
            cols.push(&col);
            let m: Matrix = (0..rows.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            if rank(&m) > chosen.len() {
                chosen.push((w.clone(), col));
            }
        }
        let m: Matrix = (0..rows.len()).map(|i| chosen.iter().map(|(_, c)| c[i].clone()).collect()).collect();
        let x = solve(&m, &column(&part))?;
        for ((w, _), c) in chosen.iter().zip(x) {
            if !c.is_zero() {
                terms.push((c, fmt_right_normed(space, w)));
            }
        }
    }
    Some(crate::graded::fmt_sum(terms))
}

/// Whether a tensor lies in the free Lie algebra: by the Dynkin–Specht–Wever
/// criterion, a weight-`n` tensor `P` is Lie iff its left-normed bracketing
/// equals `n P`.
pub fn is_lie_element(space: &GradedSpace, t: &Tensor) -> bool {
    let mut by_weight: BTreeMap<usize, Tensor> = BTreeMap::new();
    for (w, c) in t.iter() {
        if w.is_empty() {
            return false;
        }
        by_weight.entry(w.len()).or_default().add_term(w.clone(), c.clone());
    }
    by_weight.into_iter().all(|(n, p)| {
        let mut theta = Tensor::zero();
        for (w, c) in p.iter() {
            theta.add_scaled(&left_normed(space, w), c);
        }
        theta == p.scaled(&rat(n as i64))
    })
}

impl FreeDgl {
    pub fn new(gens: GradedSpace) -> FreeDgl {
        FreeDgl { gens, d: BTreeMap::new() }
    }

    /// Sets `∂x`; it must be a Lie element of degree `|x| − 1`.
    pub fn set_d(&mut self, x: usize, value: Tensor) -> Result<()> {
        for w in value.keys() {
            let deg = self.gens.word_degree(w);
            if deg != self.gens.degree(x) - 1 {
                return Err(Error::Degree(format!(
                    "∂{} contains a term of degree {deg}, expected {}",
                    self.gens.name(x),
                    self.gens.degree(x) - 1
                )));
            }
        }
        if !is_lie_element(&self.gens, &value) {
            return Err(Error::Input(format!("∂{} is not a Lie element", self.gens.name(x))));
        }
        if value.is_zero() {
            self.d.remove(&x);
        } else {
            self.d.insert(x, value);
        }
        Ok(())
    }

    pub fn d_of(&self, x: usize) -> Tensor {
        self.d.get(&x).cloned().unwrap_or_default()
    }

    /// `∂` extended as a degree −1 derivation of the tensor algebra.
    pub fn d(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (w, c) in t.iter() {
            let mut passed = 0i64;
            for (i, &x) in w.iter().enumerate() {
                let dx = self.d_of(x);
                if !dx.is_zero() {
                    let sign = if passed % 2 != 0 { -c.clone() } else { c.clone() };
                    for (dw, dc) in dx.iter() {
                        let mut nw = w[..i].to_vec();
                        nw.extend_from_slice(dw);
                        nw.extend_from_slice(&w[i + 1..]);
                        out.add_term(nw, &sign * dc);
                    }
                }
                passed += self.gens.degree(x);
            }
        }
        out
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for x in 0..self.gens.dim() {
            let dd = self.d(&self.d_of(x));
            if !dd.is_zero() {
                let shown = if dd.len() <= 6 {
                    self.gens.fmt_tensor(&dd)
                } else {
                    format!("{} terms", dd.len())
                };
                return Err(Error::Axiom(format!("∂² ≠ 0 on {}: {shown}", self.gens.name(x))));
            }
        }
        Ok(())
    }

    /// Weight-`k` part of `∂x`.
    pub fn weight_part(&self, x: usize, k: usize) -> Tensor {
        self.d_of(x).filter(|w| w.len() == k)
    }

    /// Zero linear part.
    pub fn is_minimal(&self) -> bool {
        (0..self.gens.dim()).all(|x| self.weight_part(x, 1).is_zero())
    }

    pub fn differentials(&self) -> impl Iterator<Item = (usize, &Tensor)> {
        self.d.iter().map(|(&x, t)| (x, t))
    }
}

/// Quillen functor on a cocommutative A∞-coalgebra: `𝕃(s^{−1}C̄)` with
/// `∂(s^{−1}c) = Σ_k (s^{−1})^{⊗k} Δ_k(c)` up to the cobar signs. Generators
/// keep the names of `C̄`, degrees drop by one.
pub fn quillen(c: &AInfCoalgebra) -> Result<FreeDgl> {
    if !c.reduced {
        return Err(Error::Input("the Quillen functor takes the reduced coalgebra".into()));
    }
    if let Err(v) = check_cocommutative(c) {
        return Err(Error::Axiom(format!("not cocommutative: {v}")));
    }
    let mut out = FreeDgl::new(c.space.shifted(-1));
    for x in 0..c.space.dim() {
        let mut t = Tensor::zero();
        for k in c.arities() {
            t.add_assign(&cobar_convert(k, &c.op(k, x), c.space.degrees()));
        }
        out.set_d(x, t)?;
    }
    out.check_d_squared()?;
    Ok(out)
}

/// Quillen minimal model of `𝓛(C̄)` read off a decomposition
/// `C̄ = A ⊕ δA ⊕ H` of a differential graded coalgebra: with `λ(h) = s^{−1}h`,
/// `λ(a) = 0` and `λ(δa) = ½ Σ (−1)^{|a'|} [λ(a'), λ(a'')]` over `Δ̄a`,
/// `∂s^{−1}h = ½ Σ (−1)^{|h'|} [λ(h'), λ(h'')]` over `Δ̄h`.
pub fn quillen_differential_direct(c: &AInfCoalgebra, dec: &Decomposition) -> Result<FreeDgl> {
    if !c.reduced || !c.is_dgc() {
        return Err(Error::Input("expects a reduced differential graded coalgebra".into()));
    }
    let cx = Complex::new(c.space.clone(), c.differential())?;
    let coords = coordinates(&cx, dec);
    let h_space = GradedSpace::new(
        dec.h_names.iter().zip(&dec.h).map(|(n, v)| (n.clone(), c.space.degree(*v.keys().next().expect("nonzero")) - 1)),
    )?;
    let mut lam = Lambda { c, dec, coords: &coords, space: &h_space, memo: BTreeMap::new(), depth: 0 };
    let mut out = FreeDgl::new(h_space.clone());
    for (s, h) in dec.h.iter().enumerate() {
        let dh = lam.half_bracket(h)?;
        out.set_d(s, dh)?;
    }
    out.check_d_squared()?;
    Ok(out)
}

struct Lambda<'a> {
    c: &'a AInfCoalgebra,
    dec: &'a Decomposition,
    coords: &'a [(Vec<Rational>, Vec<Rational>, Vec<Rational>)],
    space: &'a GradedSpace,
    memo: BTreeMap<usize, Tensor>,
    depth: usize,
}

impl Lambda<'_> {
    /// `½ Σ (−1)^{|x'|} [λ(x'), λ(x'')]` over `Δ̄x`.
    fn half_bracket(&mut self, x: &Vector) -> Result<Tensor> {
        let mut split = Tensor::zero();
        for (&b, q) in x.iter() {
            split.add_scaled(&self.c.op(2, b), q);
        }
        let mut out = Tensor::zero();
        for (w, q) in split.iter() {
            let (l1, l2) = (self.basis(w[0])?, self.basis(w[1])?);
            let s = if self.c.space.degree(w[0]) % 2 != 0 { -q.clone() } else { q.clone() };
            out.add_scaled(&lie_bracket(self.space, &l1, &l2), &(s * frac(1, 2)));
        }
        Ok(out)
    }

    fn basis(&mut self, x: usize) -> Result<Tensor> {
        if let Some(t) = self.memo.get(&x) {
            return Ok(t.clone());
        }
        self.depth += 1;
        if self.depth > 4 * self.c.space.dim() + 8 {
            return Err(Error::Construction("λ recursion does not terminate".into()));
        }
        let (_, cda, ch) = &self.coords[x];
        let mut out = Tensor::zero();
        for (s, q) in ch.iter().enumerate() {
            out.add_term(vec![s], q.clone());
        }
        for (j, q) in cda.iter().enumerate() {
            if !q.is_zero() {
                let a = self.dec.a[j].clone();
                let t = self.half_bracket(&a)?;
                out.add_scaled(&t, q);
            }
        }
        self.depth -= 1;
        self.memo.insert(x, out.clone());
        Ok(out)
    }
}
