use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graded::{sign_rat, GradedMap, GradedSpace, Vector, Word};
use crate::structures::{iterated_coproduct, perturb, truncate, AInfCoalgebra, LInfAlgebra, MaurerCartanElement};
use crate::transfer::{
    degree_arity_bound, homology_decomposition, retract_from_decomposition, transfer_linf_filtered, Complex,
    HomotopyRetract, TransferOptions,
};

/// `Hom(C, L)` with basis the elementary maps `f_c^x` (`c ↦ x`, every other
/// basis element of `C` to 0), of degree `|x| − |c|`. The basis element
/// `f_c^x` is named `x@c`; enumeration is source-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub space: GradedSpace,
}

impl HomSpace {
    pub fn new(source: &GradedSpace, target: &GradedSpace) -> HomSpace {
        let mut basis = Vec::with_capacity(source.dim() * target.dim());
        for c in 0..source.dim() {
            for x in 0..target.dim() {
                basis.push((format!("{}@{}", target.name(x), source.name(c)), target.degree(x) - source.degree(c)));
            }
        }
        let space = GradedSpace::new(basis).expect("names of distinct pairs are distinct");
        HomSpace { source: source.clone(), target: target.clone(), space }
    }

    /// Index of `f_c^x`.
    pub fn index(&self, c: usize, x: usize) -> usize {
        c * self.target.dim() + x
    }

    /// `(c, x)` with `f = f_c^x`.
    pub fn pair(&self, f: usize) -> (usize, usize) {
        (f / self.target.dim(), f % self.target.dim())
    }

    /// `f_c^v` for a vector `v` of the target.
    pub fn with_values(&self, c: usize, v: &Vector) -> Vector {
        v.map_keys(|&x| self.index(c, x))
    }

    /// `f ↦ f ∘ g` for a degree `|g|` map `g: C' → C` given on bases, as a
    /// map `Hom(C, L) → Hom(C', L)`, times `(−1)^{|f||g|}` when `koszul`.
    fn precompose(&self, other: &HomSpace, g: &GradedMap, koszul: bool) -> GradedMap {
        // (f_c^x ∘ g)(c') = [g(c') : c] x
        let mut by_target: BTreeMap<usize, Vec<(usize, crate::graded::Rational)>> = BTreeMap::new();
        for (&c2, img) in &g.images {
            for (&c, q) in img.iter() {
                by_target.entry(c).or_default().push((c2, q.clone()));
            }
        }
        let mut m = GradedMap::zero(-g.degree);
        for f in 0..self.space.dim() {
            let (c, x) = self.pair(f);
            let odd = koszul && (self.space.degree(f) * g.degree) % 2 != 0;
            let img: Vector = by_target
                .get(&c)
                .into_iter()
                .flatten()
                .map(|(c2, q)| (other.index(*c2, x), if odd { -q.clone() } else { q.clone() }))
                .collect();
            m.set(f, img);
        }
        m
    }
}

/// `ℓ_1(f) = ℓ_1 ∘ f + (−1)^{|f|+1} f ∘ δ` on `Hom(C, L)`.
fn hom_differential(hom: &HomSpace, delta: &GradedMap, l1: &GradedMap) -> GradedMap {
    let pre = hom.precompose(hom, delta, false);
    let mut m = GradedMap::zero(-1);
    for f in 0..hom.space.dim() {
        let (c, x) = hom.pair(f);
        let mut img = hom.with_values(c, &l1.image(x));
        let s = if hom.space.degree(f) % 2 == 0 { -1 } else { 1 };
        img.add_scaled(&pre.image(f), &sign_rat(s));
        m.set(f, img);
    }
    m
}

/// Convolution L∞-algebra on `Hom(C, L)`: `ℓ_1` as above and
/// `ℓ_k(f_1, …, f_k) = ℓ_k ∘ (f_1 ⊗ ⋯ ⊗ f_k) ∘ Δ^{(k−1)}`. Uses the reduced
/// coproduct when `C` is reduced.
pub fn convolution_linf(c: &AInfCoalgebra, l: &LInfAlgebra) -> Result<(HomSpace, LInfAlgebra)> {
    let hom = HomSpace::new(&c.space, &l.space);
    let mut out = LInfAlgebra::new(hom.space.clone());
    let d = hom_differential(&hom, &c.differential(), &l.differential());
    for (&f, img) in &d.images {
        out.set_bracket(&[f], img.clone())?;
    }
    for arity in l.arities().filter(|&a| a >= 2) {
        let split = iterated_coproduct(c, arity - 1)?;
        let mut acc: BTreeMap<Word, Vector> = BTreeMap::new();
        let xs = ordered_tuples(l, arity);
        for (&src, t) in &split.images {
            for (cw, a) in t.iter() {
                for (xw, value) in &xs {
                    let fw: Word = cw.iter().zip(xw).map(|(&ci, &xi)| hom.index(ci, xi)).collect();
                    // only ordered tuples already in canonical order; every
                    // other ordering is determined by skew-symmetry
                    match hom.space.canonical_word(&fw, true) {
                        Some((1, sorted)) if sorted == fw => {}
                        _ => continue,
                    }
                    // (f_1 ⊗ ⋯ ⊗ f_k)(c_1 ⊗ ⋯ ⊗ c_k): f_j passes c_i for i < j
                    let mut e = 0i64;
                    for j in 0..arity {
                        for i in 0..j {
                            e += hom.space.degree(fw[j]) * c.space.degree(cw[i]);
                        }
                    }
                    let s = if e % 2 != 0 { -a.clone() } else { a.clone() };
                    acc.entry(fw).or_default().add_scaled(&hom.with_values(src, value), &s);
                }
            }
        }
        for (fw, v) in acc {
            out.set_bracket(&fw, v)?;
        }
    }
    Ok((hom, out))
}

/// Every ordered tuple of basis elements of `L` with nonzero `ℓ_k`.
fn ordered_tuples(l: &LInfAlgebra, k: usize) -> Vec<(Word, Vector)> {
    let n = l.space.dim();
    let mut out = Vec::new();
    let mut w = vec![0usize; k];
    loop {
        let v = l.bracket(&w);
        if !v.is_zero() {
            out.push((w.clone(), v));
        }
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            w[j] += 1;
            if w[j] < n {
                break;
            }
            w[j] = 0;
        }
    }
}

/// Convolution algebra of the reduced coalgebra, modelling based maps.
pub fn pointed_convolution(c: &AInfCoalgebra, l: &LInfAlgebra) -> Result<(HomSpace, LInfAlgebra)> {
    if !c.reduced {
        return Err(Error::Input("pointed mapping spaces need the reduced coalgebra".into()));
    }
    convolution_linf(c, l)
}

/// The retract `Hom(C, L) ⇄ Hom(H, L)` induced by `H ⇄ C`: precomposition
/// with `p`, with `i`, and `f ↦ (−1)^{|f|} f ∘ k`.
pub fn hom_retract(r: &HomotopyRetract, l: &LInfAlgebra) -> Result<(HomSpace, HomSpace, HomotopyRetract)> {
    let big = HomSpace::new(&r.big.space, &l.space);
    let small = HomSpace::new(&r.small.space, &l.space);
    let l1 = l.differential();
    let big_c = Complex::new(big.space.clone(), hom_differential(&big, &r.big.d, &l1))?;
    let small_c = Complex::new(small.space.clone(), hom_differential(&small, &r.small.d, &l1))?;
    let incl = small.precompose(&big, &r.proj, false);
    let proj = big.precompose(&small, &r.incl, false);
    let mut homotopy = big.precompose(&big, &r.homotopy, false);
    for f in 0..big.space.dim() {
        if big.space.degree(f) % 2 != 0 {
            let img = homotopy.image(f).neg();
            homotopy.set(f, img);
        }
    }
    homotopy.degree = 1;
    let hr = HomotopyRetract::new(big_c, small_c, incl, proj, homotopy)?;
    Ok((big, small, hr))
}

/// The transferred L∞-model on `Hom(H, L)`, together with the pieces it
/// was built from.
pub struct MappingModel {
    pub hom: HomSpace,
    pub convolution: LInfAlgebra,
    pub retract: HomotopyRetract,
    pub model: LInfAlgebra,
}

/// Decompose `C`, induce the retract on `Hom` and transfer the convolution
/// structure to `Hom(H, L)`. Arities above the degree bound of `C` vanish;
/// without one the option's cap applies.
pub fn mapping_space_model(c: &AInfCoalgebra, l: &LInfAlgebra, opts: &TransferOptions) -> Result<MappingModel> {
    let cx = Complex::new(c.space.clone(), c.differential())?;
    let r = retract_from_decomposition(&cx, &homology_decomposition(&cx))?;
    let (_, small, hr) = hom_retract(&r, l)?;
    let (_, conv) = convolution_linf(c, l)?;
    let mut opts = opts.clone();
    if opts.max_arity.is_none() {
        opts.max_arity = Some(degree_arity_bound(&c.space).unwrap_or(crate::transfer::DEFAULT_ARITY_CAP));
    }
    let cap = opts.max_arity.unwrap_or(crate::transfer::DEFAULT_ARITY_CAP);
    let arities: Vec<usize> = l.arities().filter(|&k| k >= 2).collect();
    let model = match reachable_sources(c, &r, &arities, cap)? {
        Some(reach) => {
            let keep = |w: &[usize]| {
                let mut sources: Word = w.iter().map(|&f| small.pair(f).0).collect();
                sources.sort_unstable();
                reach.contains(&sources)
            };
            transfer_linf_filtered(&conv, &hr, &opts, &keep)?
        }
        None => transfer_linf_filtered(&conv, &hr, &opts, &|_| true)?,
    };
    Ok(MappingModel { hom: small, convolution: conv, retract: hr, model })
}

/// Sorted multisets of `H`-indices, of size at most `cap`, that can label
/// the leaves of a transfer tree evaluated at some `i(h)`, judged on
/// supports only (so a superset of the true ones). A bracket on `Hom(H, L)`
/// whose arguments have sources outside this set vanishes. `None` when the
/// recursion through the homotopy does not close up.
fn reachable_sources(
    c: &AInfCoalgebra,
    r: &HomotopyRetract,
    arities: &[usize],
    cap: usize,
) -> Result<Option<BTreeSet<Word>>> {
    struct Reach<'a> {
        r: &'a HomotopyRetract,
        splittings: Vec<(usize, GradedMap<Word>)>,
        cap: usize,
        memo: HashMap<usize, BTreeSet<Word>>,
        active: BTreeSet<usize>,
        cyclic: bool,
    }
    impl Reach<'_> {
        fn slot(&mut self, y: usize) -> BTreeSet<Word> {
            let mut out: BTreeSet<Word> = self.r.proj.image(y).keys().map(|&h| vec![h]).collect();
            for &z in self.r.homotopy.image(y).keys().collect::<Vec<_>>() {
                out.extend(self.of(z));
            }
            out
        }

        fn of(&mut self, x: usize) -> BTreeSet<Word> {
            if let Some(s) = self.memo.get(&x) {
                return s.clone();
            }
            if !self.active.insert(x) {
                self.cyclic = true;
                return BTreeSet::new();
            }
            let mut out = BTreeSet::new();
            for j in 0..self.splittings.len() {
                let pieces: Vec<Word> = self.splittings[j].1.image(x).keys().cloned().collect();
                for w in pieces {
                    let mut acc: BTreeSet<Word> = [Word::new()].into();
                    for &y in &w {
                        let options = self.slot(y);
                        let mut next = BTreeSet::new();
                        for a in &acc {
                            for o in &options {
                                if a.len() + o.len() <= self.cap {
                                    let mut m = a.clone();
                                    m.extend_from_slice(o);
                                    m.sort_unstable();
                                    next.insert(m);
                                }
                            }
                        }
                        acc = next;
                        if acc.is_empty() {
                            break;
                        }
                    }
                    out.extend(acc);
                }
            }
            self.active.remove(&x);
            self.memo.insert(x, out.clone());
            out
        }
    }
    let splittings = arities
        .iter()
        .filter(|&&k| k <= cap)
        .map(|&k| Ok((k, iterated_coproduct(c, k - 1)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut reach = Reach { r, splittings, cap, memo: HashMap::new(), active: BTreeSet::new(), cyclic: false };
    let mut all = BTreeSet::new();
    for h in 0..r.small.space.dim() {
        for &x in r.incl.image(h).keys().collect::<Vec<_>>() {
            all.extend(reach.of(x));
        }
    }
    Ok(if reach.cyclic { None } else { Some(all) })
}

/// L∞-model of the component of `φ`: perturb by `φ`, then truncate.
pub fn component_model(model: &LInfAlgebra, phi: &MaurerCartanElement) -> Result<LInfAlgebra> {
    truncate(&perturb(model, phi)?)
}
