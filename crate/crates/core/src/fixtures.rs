//! Small hand-built structures shared by unit tests.

use crate::graded::{rat, GradedSpace, Tensor, Vector};
use crate::structures::{AInfCoalgebra, LInfAlgebra};

pub fn tensor(space: &GradedSpace, terms: &[(i64, &str)]) -> Tensor {
    terms
        .iter()
        .map(|&(c, w)| (w.split('|').map(|n| space.index_of(n).unwrap()).collect(), rat(c)))
        .collect()
}

/// Reduced dual coalgebra of Λ(a,b,c), dc = ab, written out by hand.
pub fn example_coalgebra(w_image: &[(i64, &str)]) -> AInfCoalgebra {
    let space = GradedSpace::new([("g", 3), ("h", 3), ("r", 5), ("s", 6), ("u", 8), ("v", 8), ("w", 11)]).unwrap();
    let mut c = AInfCoalgebra::new(space.clone(), true);
    let id = |n: &str| space.index_of(n).unwrap();
    c.set_op(1, id("s"), tensor(&space, &[(1, "r")])).unwrap();
    c.set_op(2, id("s"), tensor(&space, &[(1, "g|h"), (-1, "h|g")])).unwrap();
    c.set_op(2, id("u"), tensor(&space, &[(1, "g|r"), (-1, "r|g")])).unwrap();
    c.set_op(2, id("v"), tensor(&space, &[(1, "h|r"), (-1, "r|h")])).unwrap();
    c.set_op(2, id("w"), tensor(&space, w_image)).unwrap();
    c
}

pub const W_CORRECT: &[(i64, &str)] =
    &[(1, "g|v"), (1, "v|g"), (-1, "h|u"), (-1, "u|h"), (1, "s|r"), (1, "r|s")];
pub const W_PRINTED: &[(i64, &str)] =
    &[(1, "g|v"), (-1, "v|g"), (-1, "h|u"), (1, "u|h"), (1, "s|r"), (1, "r|s")];

pub fn example_lie() -> LInfAlgebra {
    let space = GradedSpace::new([("x'", 3), ("y'", 6), ("z'", 9), ("t'", 15)]).unwrap();
    let mut l = LInfAlgebra::new(space);
    l.set_bracket(&[0, 1], Vector::basis(2)).unwrap();
    l.set_bracket(&[1, 2], Vector::basis(3)).unwrap();
    l
}


/// `g ⊗ A` for the truncated free CDGA `A = Λ(x, y)/(weight > n)`,
/// `|x| = p`, `|y| = p − 1`, `dx = y`: a DGL quasi-isomorphic to `g` with
/// plenty of contractible pairs. `ℓ_1(z⊗a) = (−1)^{|z|} z⊗da` and
/// `[z⊗a, z'⊗a'] = (−1)^{|a||z'|}[z,z']⊗aa'`.
pub fn lie_tensor_truncated(g: &LInfAlgebra, p: i64, n: usize) -> LInfAlgebra {
    let x_odd = p % 2 != 0;
    // monomials x^i y^j of weight i + j ≤ n; the odd generator appears at most once
    let mut a = Vec::new();
    for w in 0..=n {
        for i in 0..=w {
            let j = w - i;
            if (x_odd && i > 1) || (!x_odd && j > 1) {
                continue;
            }
            a.push((i, j));
        }
    }
    let adeg = |&(i, j): &(usize, usize)| i as i64 * p + j as i64 * (p - 1);
    let aname = |&(i, j): &(usize, usize)| match (i, j) {
        (0, 0) => "1".to_string(),
        _ => format!("x{i}y{j}"),
    };
    let find = |m: (usize, usize)| a.iter().position(|&q| q == m);
    // (x^i y^j)(x^k y^l) = (−1)^{jk|x||y|} x^{i+k} y^{j+l}
    let mul = |m1: (usize, usize), m2: (usize, usize)| -> Option<(usize, i64)> {
        let pos = find((m1.0 + m2.0, m1.1 + m2.1))?;
        let odd = (m1.1 * m2.0) as i64 * p * (p - 1) % 2 != 0;
        Some((pos, if odd { -1 } else { 1 }))
    };
    let gs = &g.space;
    let idx = |zi: usize, ai: usize| zi * a.len() + ai;
    let mut basis = Vec::new();
    for zi in 0..gs.dim() {
        for m in &a {
            basis.push((format!("{}.{}", gs.name(zi), aname(m)), gs.degree(zi) + adeg(m)));
        }
    }
    let space = GradedSpace::new(basis).unwrap();
    let mut l = LInfAlgebra::new(space);
    for zi in 0..gs.dim() {
        for (ai, &(i, j)) in a.iter().enumerate() {
            if i == 0 {
                continue;
            }
            let Some(target) = find((i - 1, j + 1)) else { continue };
            let s = if gs.degree(zi) % 2 == 0 { 1 } else { -1 };
            l.set_bracket(&[idx(zi, ai)], Vector::single(idx(zi, target), rat(s * i as i64))).unwrap();
        }
    }
    for z1 in 0..gs.dim() {
        for z2 in 0..gs.dim() {
            let br = g.bracket(&[z1, z2]);
            if br.is_zero() {
                continue;
            }
            for (a1, &m1) in a.iter().enumerate() {
                for (a2, &m2) in a.iter().enumerate() {
                    if idx(z1, a1) > idx(z2, a2) {
                        continue;
                    }
                    let Some((prod, ms)) = mul(m1, m2) else { continue };
                    let s = if (adeg(&m1) * gs.degree(z2)) % 2 == 0 { ms } else { -ms };
                    let v: Vector = br.iter().map(|(&z, c)| (idx(z, prod), c * rat(s))).collect();
                    l.set_bracket(&[idx(z1, a1), idx(z2, a2)], v).unwrap();
                }
            }
        }
    }
    l
}

/// `sl_2` in degree 0 together with a graded nilpotent algebra
/// `[a, a] = c`, `[a, b] = e` with `|a| = |b| = 1`.
pub fn rich_lie() -> LInfAlgebra {
    let space = GradedSpace::new([("E", 0), ("F", 0), ("H", 0), ("a", 1), ("b", 1), ("c", 2), ("e", 2)]).unwrap();
    let mut l = LInfAlgebra::new(space);
    l.set_bracket(&[0, 1], Vector::basis(2)).unwrap();
    l.set_bracket(&[2, 0], Vector::single(0, rat(2))).unwrap();
    l.set_bracket(&[2, 1], Vector::single(1, rat(-2))).unwrap();
    l.set_bracket(&[3, 3], Vector::basis(5)).unwrap();
    l.set_bracket(&[3, 4], Vector::basis(6)).unwrap();
    l
}

pub fn example_x() -> crate::functors::Cdga {
    use crate::functors::Cdga;
    let mut b = Cdga::free(GradedSpace::new([("a", 3), ("b", 3), ("c", 5)]).unwrap());
    let ab = b.poly(&[(rat(1), &["a", "b"])]).unwrap();
    b.set_d(2, ab).unwrap();
    b
}

pub fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Random finite-dimensional simply connected CDGA. Generators are added in increasing
/// degree; a new generator is usually odd with a random differential hitting
/// a product of earlier ones, and even generators are truncated by a power.
pub fn random_cdga(rng: &mut impl rand::Rng, max_gens: usize) -> crate::functors::Cdga {
    random_algebra(rng, max_gens, true)
}

/// Random free simply connected CDGA built the same way, with no relations;
/// even generators may also have a differential.
pub fn random_sullivan(rng: &mut impl rand::Rng, max_gens: usize) -> crate::functors::Cdga {
    random_algebra(rng, max_gens, false)
}

fn random_algebra(rng: &mut impl rand::Rng, max_gens: usize, truncate: bool) -> crate::functors::Cdga {
    use crate::functors::Cdga;
    loop {
        let n = rng.gen_range(2..=max_gens);
        let mut degs: Vec<i64> = Vec::new();
        let mut targets: Vec<Option<Vec<usize>>> = Vec::new();
        for i in 0..n {
            let mut made = false;
            if i >= 2 && rng.gen_bool(0.75) {
                for _ in 0..10 {
                    let len = rng.gen_range(2..=3);
                    let mut w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..i)).collect();
                    w.sort();
                    let d: i64 = w.iter().map(|&j| degs[j]).sum();
                    let repeated_odd = w.windows(2).any(|p| p[0] == p[1] && degs[p[0]] % 2 != 0);
                    if (d % 2 == 0 || !truncate) && !repeated_odd && d > *degs.last().unwrap() && d <= 12 {
                        degs.push(d - 1);
                        targets.push(Some(w));
                        made = true;
                        break;
                    }
                }
            }
            if !made {
                let lo = degs.last().copied().unwrap_or(2);
                degs.push(rng.gen_range(lo..=lo + 2));
                targets.push(None);
            }
        }
        let space = GradedSpace::new(degs.iter().enumerate().map(|(i, &d)| (format!("e{i}"), d))).unwrap();
        let mut b = Cdga::free(space.clone());
        for x in 0..n {
            if truncate && degs[x] % 2 == 0 {
                b.add_relation(&vec![x; rng.gen_range(2..=3)]).unwrap();
            }
        }
        for x in 0..n {
            let Some(w) = &targets[x] else { continue };
            let lower: Vec<usize> = (0..x).collect();
            let mut cands = Vec::new();
            monomials_of_degree(&space, &lower, degs[x] + 1, &mut Vec::new(), 0, &mut cands);
            for _ in 0..20 {
                let mut p = Tensor::basis(w.clone());
                for c in &cands {
                    if rng.gen_bool(0.4) {
                        p.add_term(c.clone(), rat(rng.gen_range(-2..=2)));
                    }
                }
                let mut trial = b.clone();
                if trial.set_d(x, p).is_ok() && trial.validate().is_ok() {
                    b = trial;
                    break;
                }
            }
        }
        if b.validate().is_ok() {
            if !truncate {
                return b;
            }
            if let Ok(basis) = b.monomial_basis() {
                if basis.len() <= 20 {
                    return b;
                }
            }
        }
    }
}

fn monomials_of_degree(
    space: &GradedSpace,
    gens: &[usize],
    target: i64,
    cur: &mut Vec<usize>,
    start: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let deg = space.word_degree(cur);
    if deg == target && cur.len() >= 2 {
        out.push(cur.clone());
    }
    if deg >= target {
        return;
    }
    for i in start..gens.len() {
        let g = gens[i];
        if space.degree(g) % 2 != 0 && cur.last() == Some(&g) {
            continue;
        }
        cur.push(g);
        monomials_of_degree(space, gens, target, cur, i, out);
        cur.pop();
    }
}

/// Valid L∞-algebras with brackets up to arity 4: tensored Lie algebras and
/// their transfers to non-minimal retracts.
pub fn transferred_linf_instances() -> Vec<crate::structures::LInfAlgebra> {
    use crate::transfer::{homology_decomposition, retract_keeping, transfer_linf, Complex, TransferOptions};
    let opts = TransferOptions { max_arity: Some(4), binary_only: false };
    let mut out = Vec::new();
    for l in [
        lie_tensor_truncated(&example_lie(), 2, 2),
        lie_tensor_truncated(&rich_lie(), 2, 2),
        lie_tensor_truncated(&rich_lie(), 1, 3),
        lie_tensor_truncated(&rich_lie(), 3, 2),
    ] {
        let cx = Complex::new(l.space.clone(), l.differential()).unwrap();
        let dec = homology_decomposition(&cx);
        let n = dec.a.len();
        for keep in [vec![], vec![0], vec![1, 3], vec![0, 2, 5], (0..n).step_by(2).collect::<Vec<_>>()] {
            let keep: Vec<usize> = keep.into_iter().filter(|&j| j < n).collect();
            let r = retract_keeping(&cx, &dec, &keep).unwrap();
            out.push(transfer_linf(&l, &r, &opts).unwrap());
        }
        out.push(l);
    }
    out
}

/// `Λ(x, y, z, t)` with `dz = xy`, `dt = yz`, degrees 4, 7, 10, 16.
pub fn example_y() -> crate::functors::Cdga {
    let g = GradedSpace::new([("x", 4), ("y", 7), ("z", 10), ("t", 16)]).unwrap();
    let mut a = crate::functors::Cdga::free(g);
    a.set_d(2, Tensor::basis(vec![0, 1])).unwrap();
    a.set_d(3, Tensor::basis(vec![1, 2])).unwrap();
    a
}

/// `Λ(α7, β7, η13)/(βη)` with `dη = αβ`: its reduced dual coalgebra has
/// conilpotence 2.
pub fn example2_x() -> crate::functors::Cdga {
    let g = GradedSpace::new([("α", 7), ("β", 7), ("η", 13)]).unwrap();
    let mut b = crate::functors::Cdga::free(g);
    b.set_d(2, Tensor::basis(vec![0, 1])).unwrap();
    b.add_relation(&[1, 2]).unwrap();
    b
}

/// `Λ(u2, v4, w7)` with `dw = u⁴ + v²`.
pub fn example2_y() -> crate::functors::Cdga {
    let g = GradedSpace::new([("u", 2), ("v", 4), ("w", 7)]).unwrap();
    let mut a = crate::functors::Cdga::free(g);
    let mut dw = Tensor::basis(vec![0, 0, 0, 0]);
    dw.add_term(vec![1, 1], rat(1));
    a.set_d(2, dw).unwrap();
    a
}

/// `𝕃(a6, b6, c19)` with `∂c = [a, [a, b]]`.
pub fn example2_quillen() -> crate::functors::FreeDgl {
    use crate::functors::{lie_bracket, FreeDgl};
    let g = GradedSpace::new([("a", 6), ("b", 6), ("c", 19)]).unwrap();
    let ab = lie_bracket(&g, &Tensor::basis(vec![0]), &Tensor::basis(vec![1]));
    let aab = lie_bracket(&g, &Tensor::basis(vec![0]), &ab);
    let mut m = FreeDgl::new(g);
    m.set_d(2, aab).unwrap();
    m
}
