use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::functors::{cochain, dual_name, Cdga, Poly};
use crate::graded::{sign_rat, GradedSpace, Rational, Vector};
use crate::structures::{iterated_coproduct, AInfCoalgebra, LInfAlgebra};
use crate::transfer::{coordinates, Complex, Decomposition};

use super::HomSpace;

/// Name of the generator `v⊗h`.
fn bs_name(v: &str, h: &str) -> String {
    format!("{v}⊗{h}")
}

/// Reduced Brown–Szczarba algebra read off a mapping-space model: the
/// cochain algebra of an L∞-algebra on (a subspace of) `Hom(H, L)` whose
/// basis elements are elementary maps `x@h`. The generator dual to
/// `s f_h^x` becomes `v⊗h`, with `v` dual to `sx`, of degree `|v| − |h|`,
/// rescaled by `(−1)^{|h|(|h|+1)/2}`.
pub fn reduced_bs_cochain(model: &LInfAlgebra, hom: &HomSpace) -> Result<Cdga> {
    let c = cochain(model)?;
    let mut names = Vec::with_capacity(model.space.dim());
    let mut signs = Vec::with_capacity(model.space.dim());
    for f in 0..model.space.dim() {
        let name = model.space.name(f);
        let g = hom
            .space
            .index_of(name)
            .ok_or_else(|| Error::Unsupported(format!("`{name}` is not an elementary map of the Hom space")))?;
        let (h, x) = hom.pair(g);
        names.push(bs_name(&dual_name(hom.target.name(x)), hom.source.name(h)));
        let e = hom.source.degree(h);
        signs.push(if (e * (e + 1) / 2) % 2 != 0 { -1 } else { 1 });
    }
    rescaled(&c, &signs)?.renamed(&names)
}

/// The image of a free algebra under `x ↦ ε_x x` on generators.
fn rescaled(a: &Cdga, signs: &[i32]) -> Result<Cdga> {
    let mut out = a.clone();
    for x in 0..a.gens.dim() {
        let p: Poly = a
            .d_of(x)
            .iter()
            .map(|(w, q)| (w.clone(), q * sign_rat(signs[x] * w.iter().map(|&y| signs[y]).product::<i32>())))
            .collect();
        out.set_d(x, p)?;
    }
    Ok(out)
}

/// `d̂` on `Λ(V⊗H)` by the splitting recursion: `d(v⊗h)` is expanded from
/// `dv` and iterated coproducts of `h`; factors `v⊗a` vanish and factors
/// `v⊗δa` are replaced by the image of the rest of `d(v⊗a)`.
///
/// `c` is a differential graded coalgebra (reduced for the pointed model),
/// `dec` a decomposition `A ⊕ δA ⊕ H` of it and `y` a Sullivan algebra.
/// Generators are ordered `h`-major, matching [`reduced_bs_cochain`].
pub fn reduced_bs_direct(c: &AInfCoalgebra, dec: &Decomposition, y: &Cdga) -> Result<Cdga> {
    if !c.is_dgc() {
        return Err(Error::Unsupported("the splitting recursion needs a differential graded coalgebra".into()));
    }
    if !y.is_free() || !y.is_sullivan() {
        return Err(Error::Unsupported("the target model must be a Sullivan algebra".into()));
    }
    let cx = Complex::new(c.space.clone(), c.differential())?;
    let nv = y.gens.dim();
    let h_degrees: Vec<i64> = dec.h.iter().map(|h| cx.space.vector_degree(h).ok().flatten().unwrap_or(0)).collect();
    let mut basis = Vec::new();
    for (j, hn) in dec.h_names.iter().enumerate() {
        for v in 0..nv {
            basis.push((bs_name(y.gens.name(v), hn), y.gens.degree(v) - h_degrees[j]));
        }
    }
    let out = Cdga::free(GradedSpace::new(basis)?);
    let max_len = (0..nv).flat_map(|v| y.d_of(v).keys().map(|w| w.len()).collect::<Vec<_>>()).max().unwrap_or(1);
    let coproducts = (1..max_len)
        .map(|k| iterated_coproduct(c, k))
        .collect::<Result<Vec<_>>>()?;
    let rec = Recursion {
        c,
        y,
        out: &out,
        coords: coordinates(&cx, dec),
        dec,
        coproducts,
        nv,
        memo: RefCell::new(HashMap::new()),
    };
    let mut result = out.clone();
    for j in 0..dec.h.len() {
        for v in 0..nv {
            let p = rec.expand_vector(v, &dec.h[j], 0)?;
            result.set_d(j * nv + v, p)?;
        }
    }
    Ok(result)
}

struct Recursion<'a> {
    c: &'a AInfCoalgebra,
    y: &'a Cdga,
    out: &'a Cdga,
    dec: &'a Decomposition,
    /// `(A, δA, H)` coordinates of each basis element of `c`.
    coords: Vec<(Vec<Rational>, Vec<Rational>, Vec<Rational>)>,
    /// `Δ^{(k)}` for `k = 1, 2, …`.
    coproducts: Vec<crate::graded::GradedMap<crate::graded::Word>>,
    nv: usize,
    memo: RefCell<HashMap<(usize, usize), Poly>>,
}

impl Recursion<'_> {
    /// Image of the factor `v⊗x` for a basis element `x` of the coalgebra.
    fn factor(&self, v: usize, x: usize, depth: usize) -> Result<Poly> {
        let (_, da, h) = &self.coords[x];
        let mut p = Poly::zero();
        for (j, q) in h.iter().enumerate() {
            p.add_term(vec![j * self.nv + v], q.clone());
        }
        for (b, q) in da.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            // d(v⊗a) vanishes in the reduced model; with the transposed
            // coalgebra differential this gives v⊗δa = (−1)^{|v|} (dv-part)
            let e = self.expand_vector(v, &self.dec.a[b], depth + 1)?;
            let s = if self.y.gens.degree(v) % 2 != 0 { -1 } else { 1 };
            p.add_scaled(&e, &(q * sign_rat(s)));
        }
        Ok(p)
    }

    fn expand_vector(&self, v: usize, x: &Vector, depth: usize) -> Result<Poly> {
        let mut p = Poly::zero();
        for (&b, q) in x.iter() {
            p.add_scaled(&self.expand(v, b, depth)?, q);
        }
        Ok(p)
    }

    /// The `dv`-part of `d(v⊗x)`, with every factor replaced by its image.
    fn expand(&self, v: usize, x: usize, depth: usize) -> Result<Poly> {
        if let Some(p) = self.memo.borrow().get(&(v, x)) {
            return Ok(p.clone());
        }
        if depth > self.nv * (self.c.space.dim() + 1) {
            return Err(Error::Construction("the splitting recursion does not terminate".into()));
        }
        let mut out = Poly::zero();
        for (m, kappa) in self.y.d_of(v).iter() {
            let n = m.len();
            let pieces = if n == 1 {
                Poly::basis(vec![x])
            } else {
                self.coproducts[n - 2].image(x)
            };
            for (cs, mu) in pieces.iter() {
                // moving c^k past v_i for k < i
                let mut e = 0i64;
                for k in 0..n {
                    for i in k + 1..n {
                        e += self.c.space.degree(cs[k]) * self.y.gens.degree(m[i]);
                    }
                }
                let mut term = Poly::single(vec![], kappa * mu * sign_rat(if e % 2 != 0 { -1 } else { 1 }));
                for k in 0..n {
                    if term.is_zero() {
                        break;
                    }
                    term = self.out.mul(&term, &self.factor(m[k], cs[k], depth)?);
                }
                out.add_assign(&term);
            }
        }
        self.memo.borrow_mut().insert((v, x), out.clone());
        Ok(out)
    }
}

/// Quotient by the generators of nonpositive degree, for algebras without
/// degree-0 generators. This is the cochain side of truncating an L∞-model
/// whose degree-0 part is empty.
pub fn positive_part(a: &Cdga) -> Result<Cdga> {
    if !a.is_free() {
        return Err(Error::Unsupported("positive part of a non-free algebra".into()));
    }
    if a.gens.has_degree(0) {
        return Err(Error::Unsupported("degree-0 generators need the cycle truncation of the L∞-model".into()));
    }
    let keep: Vec<usize> = (0..a.gens.dim()).filter(|&x| a.gens.degree(x) > 0).collect();
    let mut index = vec![None; a.gens.dim()];
    for (i, &x) in keep.iter().enumerate() {
        index[x] = Some(i);
    }
    let space = GradedSpace::new(keep.iter().map(|&x| (a.gens.name(x).to_string(), a.gens.degree(x))))?;
    let mut out = Cdga::free(space);
    for (i, &x) in keep.iter().enumerate() {
        let mut p = Poly::zero();
        for (w, q) in a.d_of(x).iter() {
            if let Some(nw) = w.iter().map(|&g| index[g]).collect::<Option<Vec<_>>>() {
                p.add_term(nw, q.clone());
            }
        }
        out.set_d(i, p)?;
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::functors::{dual_coalgebra, linf_from_cdga};
    use crate::graded::rat;
    use crate::mapping::mapping_space_model;
    use crate::transfer::{homology_decomposition, TransferOptions};
    use rand::SeedableRng;

    fn both_routes(c: &AInfCoalgebra, y: &Cdga) -> (Cdga, Cdga) {
        let l = linf_from_cdga(y).unwrap();
        let m = mapping_space_model(c, &l, &TransferOptions::default()).unwrap();
        let from_model = reduced_bs_cochain(&m.model, &m.hom).unwrap();
        let cx = Complex::new(c.space.clone(), c.differential()).unwrap();
        let direct = reduced_bs_direct(c, &homology_decomposition(&cx), y).unwrap();
        (from_model, direct)
    }

    fn poly(a: &Cdga, terms: &[(i64, &[&str])]) -> Poly {
        let mut p = Poly::zero();
        for (c, names) in terms {
            let w: Vec<usize> = names.iter().map(|n| a.gens.index_of(n).unwrap()).collect();
            let (s, w) = a.gens.canonical_word(&w, false).unwrap();
            p.add_term(w, rat(*c * s as i64));
        }
        p
    }

    #[test]
    fn example_reduced_model() {
        let (from_model, direct) = both_routes(&example_coalgebra(W_CORRECT), &example_y());
        assert_eq!(from_model, direct);
        assert!(direct.validate().is_ok());
        let a = positive_part(&direct).unwrap();
        let table: Vec<(i64, Vec<&str>)> = vec![
            (1, vec!["x⊗g", "x⊗h"]),
            (2, vec!["z⊗u", "z⊗v"]),
            (4, vec!["y⊗g", "y⊗h"]),
            (5, vec!["t⊗w"]),
            (7, vec!["z⊗g", "z⊗h"]),
            (8, vec!["t⊗u", "t⊗v"]),
            (13, vec!["t⊗g", "t⊗h"]),
        ];
        assert_eq!(a.gens.dim(), 13);
        for (deg, names) in &table {
            let mut found: Vec<&str> = a.gens.basis_of_degree(*deg).iter().map(|&i| a.gens.name(i)).collect();
            found.sort();
            assert_eq!(&found, names, "degree {deg}");
        }
        let d = |n: &str| a.d_of(a.gens.index_of(n).unwrap());
        assert_eq!(d("t⊗w"), poly(&a, &[(1, &["y⊗g", "z⊗v"]), (-1, &["y⊗h", "z⊗u"])]));
        assert_eq!(d("t⊗u"), poly(&a, &[(-1, &["y⊗g", "x⊗g", "y⊗h"]), (1, &["y⊗g", "y⊗g", "x⊗h"])]));
        assert_eq!(d("t⊗v"), poly(&a, &[(-1, &["y⊗h", "y⊗h", "x⊗g"]), (1, &["y⊗h", "x⊗h", "y⊗g"])]));
        for n in ["x⊗g", "x⊗h", "z⊗u", "z⊗v", "y⊗g", "y⊗h", "z⊗g", "z⊗h", "t⊗g", "t⊗h"] {
            assert!(d(n).is_zero(), "d̂({n}) ≠ 0");
        }
    }

    #[test]
    fn closed_generators_stay_closed() {
        let y = Cdga::free(GradedSpace::new([("p", 3), ("q", 4)]).unwrap());
        let c = example_coalgebra(W_CORRECT);
        let cx = Complex::new(c.space.clone(), c.differential()).unwrap();
        let a = reduced_bs_direct(&c, &homology_decomposition(&cx), &y).unwrap();
        assert_eq!(a.gens.dim(), 10);
        assert!((0..10).all(|x| a.d_of(x).is_zero()));
    }

    #[test]
    fn routes_agree_on_random_pairs() {
        let (mut pairs, mut small, mut nonlinear, mut seed) = (0, 0, 0, 0);
        while pairs < 40 {
            seed += 1;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let b = random_cdga(&mut rng, 3);
            let dim = b.monomial_basis().unwrap().len();
            let y = random_sullivan(&mut rng, 4);
            if dim > 8 || (0..y.gens.dim()).all(|x| y.d_of(x).is_zero()) {
                continue;
            }
            pairs += 1;
            small += usize::from(dim <= 6);
            let dual = dual_coalgebra(&b).unwrap();
            for c in [&dual.reduced, &dual.full] {
                let (from_model, direct) = both_routes(c, &y);
                assert_eq!(from_model, direct, "seed {seed}, reduced: {}", c.reduced);
                assert!(direct.validate().is_ok(), "seed {seed}");
                if (0..direct.gens.dim()).any(|x| direct.d_of(x).keys().any(|w| w.len() >= 3)) {
                    nonlinear += 1;
                }
            }
        }
        assert!(small >= 5 && nonlinear >= 10, "{small} small algebras, {nonlinear} cubic differentials");
    }
}
