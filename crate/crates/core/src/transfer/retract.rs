use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::linalg::{kernel, rank, solve, Matrix};
use crate::graded::{GradedMap, GradedSpace, Rational, Vector};

/// A finite chain complex with a degree −1 differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub space: GradedSpace,
    pub d: GradedMap,
}

impl Complex {
    pub fn new(space: GradedSpace, d: GradedMap) -> Result<Complex> {
        if d.degree != -1 && !d.is_zero() {
            return Err(Error::Degree(format!("differential of degree {}", d.degree)));
        }
        d.check_degrees(&space, &space)?;
        let mut d = d;
        d.degree = -1;
        let c = Complex { space, d };
        for i in 0..c.space.dim() {
            if !c.d.apply(&c.d.image(i)).is_zero() {
                return Err(Error::Axiom(format!("d² ≠ 0 on `{}`", c.space.name(i))));
            }
        }
        Ok(c)
    }

    pub fn with_zero_differential(space: GradedSpace) -> Complex {
        Complex { space, d: GradedMap::zero(-1) }
    }

    /// Dimension of homology in each degree.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let mut degrees: Vec<i64> = self.space.degrees().to_vec();
        degrees.sort();
        degrees.dedup();
        for n in degrees {
            let here = self.space.basis_of_degree(n);
            let z = here.len() - rank(&self.matrix(n));
            let b = rank(&self.matrix(n + 1));
            if z > b {
                out.insert(n, z - b);
            }
        }
        out
    }

    /// Matrix of `d: C_n → C_{n−1}` (rows indexed by `C_{n−1}`).
    fn matrix(&self, n: i64) -> Matrix {
        let src = self.space.basis_of_degree(n);
        let dst = self.space.basis_of_degree(n - 1);
        let mut m: Matrix = vec![vec![Rational::zero(); src.len()]; dst.len()];
        for (col, &b) in src.iter().enumerate() {
            let img = self.d.image(b);
            for (row, &t) in dst.iter().enumerate() {
                m[row][col] = img.coeff(&t);
            }
        }
        m
    }
}

/// `C = A ⊕ δA ⊕ H`: a complement `A` of the cycles, its image `δA`, and a
/// complement `H` of the boundaries inside the cycles. Each `H` vector is
/// named after its echelon free column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub a: Vec<Vector>,
    pub da: Vec<Vector>,
    pub h: Vec<Vector>,
    pub h_names: Vec<String>,
}

fn in_span(vectors: &[Vector], v: &Vector, coords: &[usize]) -> bool {
    if vectors.is_empty() {
        return v.is_zero();
    }
    let m: Matrix = coords.iter().map(|c| vectors.iter().map(|u| u.coeff(c)).collect()).collect();
    let rhs: Vec<Rational> = coords.iter().map(|c| v.coeff(c)).collect();
    solve(&m, &rhs).is_some()
}

/// Exact echelon decomposition in declaration order.
pub fn homology_decomposition(c: &Complex) -> Decomposition {
    let mut degrees: Vec<i64> = c.space.degrees().to_vec();
    degrees.sort();
    degrees.dedup();
    let mut a = Vec::new();
    let mut cycles_by_degree: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    let mut boundaries_by_degree: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    for &n in &degrees {
        let here = c.space.basis_of_degree(n);
        let m = c.matrix(n);
        let z: Vec<Vector> = kernel(&m, here.len())
            .into_iter()
            .map(|col| here.iter().zip(col).map(|(&b, q)| (b, q)).collect())
            .collect();
        // A_n: basis elements completing the cycles, greedily
        let mut span = z.clone();
        for &b in &here {
            let e = Vector::basis(b);
            if !in_span(&span, &e, &here) {
                span.push(e.clone());
                boundaries_by_degree.entry(n - 1).or_default().push(c.d.apply(&e));
                a.push(e);
            }
        }
        cycles_by_degree.insert(n, z);
    }
    let da: Vec<Vector> = a.iter().map(|e| c.d.apply(e)).collect();
    let mut h = Vec::new();
    let mut h_names = Vec::new();
    for &n in &degrees {
        let here = c.space.basis_of_degree(n);
        let mut span = boundaries_by_degree.get(&n).cloned().unwrap_or_default();
        for z in cycles_by_degree.get(&n).into_iter().flatten() {
            if !in_span(&span, z, &here) {
                span.push(z.clone());
                // the free column of an echelon kernel vector is its last entry
                let pivot = *z.keys().last().expect("nonzero cycle");
                h_names.push(c.space.name(pivot).to_string());
                h.push(z.clone());
            }
        }
    }
    Decomposition { a, da, h, h_names }
}

/// `(big, small, incl, proj, homotopy)` with `id − incl∘proj = d h + h d`
/// and the side conditions `h∘incl = 0`, `proj∘h = 0`, `h∘h = 0`,
/// `proj∘incl = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyRetract {
    pub big: Complex,
    pub small: Complex,
    pub incl: GradedMap,
    pub proj: GradedMap,
    pub homotopy: GradedMap,
}

impl HomotopyRetract {
    pub fn new(big: Complex, small: Complex, incl: GradedMap, proj: GradedMap, homotopy: GradedMap) -> Result<Self> {
        let r = HomotopyRetract { big, small, incl, proj, homotopy };
        r.verify()?;
        Ok(r)
    }

    /// The identity retract of a complex onto itself.
    pub fn identity(c: &Complex) -> HomotopyRetract {
        let id = GradedMap::identity(c.space.dim());
        HomotopyRetract {
            big: c.clone(),
            small: c.clone(),
            incl: id.clone(),
            proj: id,
            homotopy: GradedMap::zero(1),
        }
    }

    pub fn verify(&self) -> Result<()> {
        let (big, small) = (&self.big.space, &self.small.space);
        self.incl.check_degrees(small, big)?;
        self.proj.check_degrees(big, small)?;
        self.homotopy.check_degrees(big, big)?;
        let fail = |what: &str, name: &str| Err(Error::Construction(format!("retract: {what} fails on `{name}`")));
        for x in 0..big.dim() {
            let e = Vector::basis(x);
            let h = self.homotopy.apply(&e);
            let mut lhs = e.clone();
            lhs.sub_assign(&self.incl.apply(&self.proj.apply(&e)));
            let mut rhs = self.big.d.apply(&h);
            rhs.add_assign(&self.homotopy.apply(&self.big.d.apply(&e)));
            if lhs != rhs {
                return fail("id − ip = dh + hd", big.name(x));
            }
            if !self.proj.apply(&h).is_zero() {
                return fail("p∘h = 0", big.name(x));
            }
            if !self.homotopy.apply(&h).is_zero() {
                return fail("h∘h = 0", big.name(x));
            }
            if self.proj.apply(&self.big.d.apply(&e)) != self.small.d.apply(&self.proj.apply(&e)) {
                return fail("p is a chain map", big.name(x));
            }
        }
        for y in 0..small.dim() {
            let e = Vector::basis(y);
            let i = self.incl.apply(&e);
            if !self.homotopy.apply(&i).is_zero() {
                return fail("h∘i = 0", small.name(y));
            }
            if self.proj.apply(&i) != e {
                return fail("p∘i = id", small.name(y));
            }
            if self.big.d.apply(&i) != self.incl.apply(&self.small.d.apply(&e)) {
                return fail("i is a chain map", small.name(y));
            }
        }
        Ok(())
    }
}

/// Coordinates of every basis element of `c` in the basis `A ∪ δA ∪ H`.
pub(crate) fn coordinates(c: &Complex, dec: &Decomposition) -> Vec<(Vec<Rational>, Vec<Rational>, Vec<Rational>)> {
    let all: Vec<&Vector> = dec.a.iter().chain(&dec.da).chain(&dec.h).collect();
    let n = c.space.dim();
    let m: Matrix = (0..n).map(|row| all.iter().map(|v| v.coeff(&row)).collect()).collect();
    (0..n)
        .map(|x| {
            let rhs: Vec<Rational> = (0..n).map(|row| if row == x { Rational::one() } else { Rational::zero() }).collect();
            let sol = solve(&m, &rhs).expect("decomposition spans the complex");
            let (na, nda) = (dec.a.len(), dec.da.len());
            (sol[..na].to_vec(), sol[na..na + nda].to_vec(), sol[na + nda..].to_vec())
        })
        .collect()
}

/// The retract onto `H` given by `p(a) = p(δa) = 0`, `p(h) = h`, `i(h) = h`,
/// `k(δa) = a` and `k(a) = k(h) = 0`.
pub fn retract_from_decomposition(c: &Complex, dec: &Decomposition) -> Result<HomotopyRetract> {
    retract_keeping(c, dec, &[])
}

/// Like [`retract_from_decomposition`], but the acyclic pairs `(a_j, δa_j)`
/// for `j` in `keep` stay in the small complex, which then has a nonzero
/// differential.
pub fn retract_keeping(c: &Complex, dec: &Decomposition, keep: &[usize]) -> Result<HomotopyRetract> {
    let coords = coordinates(c, dec);
    // small basis: kept a's, kept δa's, then H
    let mut small_vectors: Vec<(String, Vector)> = Vec::new();
    for &j in keep {
        let a = &dec.a[j];
        let pivot = *a.keys().next().expect("nonzero");
        small_vectors.push((c.space.name(pivot).to_string(), a.clone()));
        let da = &dec.da[j];
        let pivot = *da.keys().next().expect("nonzero");
        small_vectors.push((c.space.name(pivot).to_string(), da.clone()));
    }
    for (name, v) in dec.h_names.iter().zip(&dec.h) {
        small_vectors.push((name.clone(), v.clone()));
    }
    // a δa and a homology class may share a leading basis element
    let mut used = std::collections::HashSet::new();
    for (name, _) in small_vectors.iter_mut() {
        let base = name.clone();
        let mut n = 1;
        while !used.insert(name.clone()) {
            n += 1;
            *name = format!("{base}~{n}");
        }
    }
    let degree_of = |v: &Vector| c.space.degree(*v.keys().next().expect("nonzero"));
    let small_space = GradedSpace::new(small_vectors.iter().map(|(n, v)| (n.clone(), degree_of(v))))?;
    let mut incl = GradedMap::zero(0);
    for (i, (_, v)) in small_vectors.iter().enumerate() {
        incl.set(i, v.clone());
    }
    let mut small_d = GradedMap::zero(-1);
    for (pos, _) in keep.iter().enumerate() {
        small_d.set(2 * pos, Vector::basis(2 * pos + 1));
    }
    let h_offset = 2 * keep.len();
    let mut proj = GradedMap::zero(0);
    let mut homotopy = GradedMap::zero(1);
    for (x, (ca, cda, ch)) in coords.iter().enumerate() {
        let mut p = Vector::zero();
        for (s, q) in ch.iter().enumerate() {
            p.add_term(h_offset + s, q.clone());
        }
        let mut k = Vector::zero();
        for (j, q) in cda.iter().enumerate() {
            match keep.iter().position(|&kj| kj == j) {
                Some(pos) => p.add_term(2 * pos + 1, q.clone()),
                None => k.add_scaled(&dec.a[j], q),
            }
        }
        for (j, q) in ca.iter().enumerate() {
            if let Some(pos) = keep.iter().position(|&kj| kj == j) {
                p.add_term(2 * pos, q.clone());
            }
        }
        proj.set(x, p);
        homotopy.set(x, k);
    }
    let small = Complex::new(small_space, small_d)?;
    HomotopyRetract::new(c.clone(), small, incl, proj, homotopy)
}
