//! Shared inputs for the integration tests: the shipped model files and
//! random finite-dimensional algebras.

#![allow(dead_code)]

use homotopy_transfer::cli::{parse, Model};
use homotopy_transfer::functors::Cdga;
use homotopy_transfer::graded::{rat, GradedSpace, Tensor};
use homotopy_transfer::structures::{AInfCoalgebra, LInfAlgebra};
use homotopy_transfer::transfer::{homology_decomposition, retract_from_decomposition, transfer_ainf, Complex, TransferOptions};
use rand::Rng;

pub fn model(file: &str) -> Model {
    let path = format!("{}/../../models/{file}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn cdga(file: &str) -> Cdga {
    match model(file) {
        Model::Cdga(a) => a,
        m => panic!("{file} is a {} file", m.kind().name()),
    }
}

pub fn coalgebra(file: &str) -> AInfCoalgebra {
    match model(file) {
        Model::Dgc(c) | Model::Ainf(c) => c,
        m => panic!("{file} is a {} file", m.kind().name()),
    }
}

pub fn tensor(space: &GradedSpace, terms: &[(i64, &str)]) -> Tensor {
    terms
        .iter()
        .map(|&(c, w)| (w.split('|').map(|n| space.index_of(n).unwrap()).collect(), rat(c)))
        .collect()
}

/// Transfer to homology along the canonical decomposition.
pub fn to_homology(c: &AInfCoalgebra, opts: &TransferOptions) -> AInfCoalgebra {
    let cx = Complex::new(c.space.clone(), c.differential()).unwrap();
    let r = retract_from_decomposition(&cx, &homology_decomposition(&cx)).unwrap();
    transfer_ainf(c, &r, opts).unwrap()
}

/// All stored brackets as `(arguments, value)` pairs.
pub fn brackets(l: &LInfAlgebra) -> Vec<(Vec<usize>, homotopy_transfer::graded::Vector)> {
    let arities: Vec<usize> = l.arities().collect();
    arities
        .into_iter()
        .flat_map(|k| l.brackets_of_arity(k).map(|(w, v)| (w.clone(), v.clone())).collect::<Vec<_>>())
        .collect()
}

/// Random simply connected CDGA, built generator by generator in
/// increasing degree: most new generators are odd with a differential
/// hitting a product of earlier ones. With `truncate`, even generators get
/// a power relation so the algebra is finite dimensional; otherwise it is
/// free and even generators may have a differential too.
pub fn random_cdga(rng: &mut impl Rng, max_gens: usize, truncate: bool) -> Cdga {
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
            let mut cands = Vec::new();
            monomials_of_degree(&space, x, degs[x] + 1, &mut Vec::new(), 0, &mut cands);
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
        if b.validate().is_ok() && (!truncate || b.monomial_basis().is_ok_and(|m| m.len() <= 20)) {
            return b;
        }
    }
}

/// Monomials of length ≥ 2 and the given degree in the generators below `below`.
fn monomials_of_degree(space: &GradedSpace, below: usize, target: i64, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    let deg = space.word_degree(cur);
    if deg == target && cur.len() >= 2 {
        out.push(cur.clone());
    }
    if deg >= target {
        return;
    }
    for g in start..below {
        if space.degree(g) % 2 != 0 && cur.last() == Some(&g) {
            continue;
        }
        cur.push(g);
        monomials_of_degree(space, below, target, cur, g, out);
        cur.pop();
    }
}

/// `Λ(x, y)/(x³)` with `|x| = 2k`, `dy = c·x²`: the dual is a five dimensional
/// coalgebra with a nonzero differential.
pub fn random_truncated_pair(rng: &mut impl Rng) -> Cdga {
    let k = rng.gen_range(1..=4);
    let space = GradedSpace::new([("x".to_string(), 2 * k), ("y".to_string(), 4 * k - 1)]).unwrap();
    let mut b = Cdga::free(space);
    b.add_relation(&[0, 0, 0]).unwrap();
    let c = loop {
        let c = rng.gen_range(-3..=3);
        if c != 0 {
            break c;
        }
    };
    b.set_d(1, Tensor::basis(vec![0, 0]).scaled(&rat(c))).unwrap();
    b.validate().unwrap();
    b
}
