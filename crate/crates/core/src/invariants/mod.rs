//! Numeric invariants of rational homotopy types and the H-space test for
//! pointed mapping spaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::functors::{fmt_lie, Cdga, FreeDgl};
use crate::graded::linalg::{rank, Matrix};
use crate::graded::Vector;
use crate::mapping::mapping_space_model;
use crate::structures::{iterated_coproduct, AInfCoalgebra, LInfAlgebra};
use crate::transfer::TransferOptions;

/// A length invariant: a positive integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "∞"),
        }
    }
}

/// Value of an invariant with a human-readable witness: the element or
/// bracket realizing it, or a description of the vanishing sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub name: &'static str,
    pub value: Length,
    pub witness: String,
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}  ({})", self.name, self.value, self.witness)
    }
}

/// Least `n` with `d_n ≠ 0` on a minimal Sullivan algebra.
pub fn differential_length(a: &Cdga) -> Result<InvariantReport> {
    if !a.is_minimal() {
        return Err(Error::Unsupported("differential length is read off minimal Sullivan algebras only".into()));
    }
    let mut best: Option<(usize, usize)> = None;
    for x in 0..a.gens.dim() {
        if let Some(n) = a.d_of(x).keys().map(|w| w.len()).min() {
            if best.is_none_or(|(m, _)| n < m) {
                best = Some((n, x));
            }
        }
    }
    Ok(match best {
        Some((n, x)) => InvariantReport {
            name: "dl",
            value: Length::Finite(n),
            witness: format!("d_{n}({}) = {}", a.gens.name(x), a.fmt_poly(&a.d_part(x, n))),
        },
        None => InvariantReport { name: "dl", value: Length::Infinite, witness: "d = 0".into() },
    })
}

/// Least weight of a nonzero component of `∂` on a minimal free DGL.
pub fn bracket_length(m: &FreeDgl) -> Result<InvariantReport> {
    if !m.is_minimal() {
        return Err(Error::Unsupported("bracket length needs a differential with zero linear part".into()));
    }
    let mut best: Option<(usize, usize)> = None;
    for (x, t) in m.differentials() {
        if let Some(n) = t.keys().map(|w| w.len()).min() {
            if best.is_none_or(|(k, _)| n < k) {
                best = Some((n, x));
            }
        }
    }
    Ok(match best {
        Some((n, x)) => InvariantReport {
            name: "bl",
            value: Length::Finite(n),
            witness: {
                let part = m.weight_part(x, n);
                let shown = fmt_lie(&m.gens, &part).unwrap_or_else(|| m.gens.fmt_tensor(&part));
                format!("weight {n} part of ∂{} = {shown}", m.gens.name(x))
            },
        },
        None => InvariantReport { name: "bl", value: Length::Infinite, witness: "∂ = 0".into() },
    })
}

/// Longest nonzero iterated `ℓ_2`-bracket of a minimal L∞-algebra. On a
/// minimal algebra `ℓ_2` satisfies the Jacobi identity, so the `n`-fold
/// brackets span the `n`-th term of the lower central series, which is
/// spanned by right-normed brackets `[b_1, [b_2, …, b_n]]` of basis
/// elements. Higher brackets are ignored.
pub fn whitehead_length(l: &LInfAlgebra) -> Result<InvariantReport> {
    if !l.is_minimal() {
        return Err(Error::Unsupported("Whitehead length is read off minimal L∞-algebras only".into()));
    }
    let dim = l.space.dim();
    // current term: independent values with the right-normed word producing each
    let mut layer: Vec<(Vec<usize>, Vector)> = (0..dim).map(|b| (vec![b], Vector::basis(b))).collect();
    let mut n = 1;
    loop {
        let mut next: Vec<(Vec<usize>, Vector)> = Vec::new();
        for b in 0..dim {
            for (word, v) in &layer {
                let value = l.bracket_vectors(&[&Vector::basis(b), v]);
                if value.is_zero() {
                    continue;
                }
                let mut candidate: Vec<&Vector> = next.iter().map(|(_, u)| u).collect();
                candidate.push(&value);
                if span_rank(&candidate, dim) > next.len() {
                    let mut w = vec![b];
                    w.extend_from_slice(word);
                    next.push((w, value));
                }
            }
        }
        if next.is_empty() {
            let witness = if n == 1 {
                "ℓ_2 = 0".to_string()
            } else {
                let (word, value) = &layer[0];
                format!("{} = {}", right_normed(l, word), l.space.fmt_vector(value))
            };
            return Ok(InvariantReport { name: "Wl", value: Length::Finite(n), witness });
        }
        n += 1;
        if n > dim + 1 && same_span(&next, &layer, dim) {
            return Ok(InvariantReport {
                name: "Wl",
                value: Length::Infinite,
                witness: format!("the lower central series stabilizes at {} dimensions", next.len()),
            });
        }
        layer = next;
    }
}

fn span_rank(vectors: &[&Vector], dim: usize) -> usize {
    let m: Matrix = vectors.iter().map(|v| (0..dim).map(|i| v.coeff(&i)).collect()).collect();
    rank(&m)
}

fn same_span(a: &[(Vec<usize>, Vector)], b: &[(Vec<usize>, Vector)], dim: usize) -> bool {
    let all: Vec<&Vector> = a.iter().chain(b).map(|(_, v)| v).collect();
    a.len() == b.len() && span_rank(&all, dim) == a.len()
}

fn right_normed(l: &LInfAlgebra, word: &[usize]) -> String {
    match word {
        [] => String::new(),
        [b] => l.space.name(*b).to_string(),
        [b, rest @ ..] => format!("[{}, {}]", l.space.name(*b), right_normed(l, rest)),
    }
}

/// Least `n` with `Δ̄^{(n)} = 0` on a reduced differential graded coalgebra:
/// conilpotence 2 means every iterated coproduct `(Δ̄ ⊗ id)Δ̄` vanishes.
pub fn conilpotence(c: &AInfCoalgebra) -> Result<InvariantReport> {
    let n = crate::structures::conilpotence(c)?;
    let witness = if n == 0 {
        "C̄ = 0".to_string()
    } else {
        let m = iterated_coproduct(c, n - 1)?;
        let x = (0..c.space.dim()).find(|&x| !m.image(x).is_zero()).expect("a witness exists below the bound");
        format!("Δ̄^({})({}) = {}", n - 1, c.space.name(x), c.space.fmt_tensor(&m.image(x)))
    };
    Ok(InvariantReport { name: "conilpotence", value: Length::Finite(n), witness })
}

/// Evidence that the source has cone length 2.
#[derive(Clone, Debug)]
pub enum ConeLengthCertificate {
    /// A reduced coalgebra model with `Δ̄^{(2)} = 0`.
    Coalgebra(AInfCoalgebra),
    /// The generators `W₀` of a two-stage Quillen model `𝕃(W₀ ⊕ W₁)`
    /// with `∂W₀ = 0` and `∂W₁ ⊆ 𝕃(W₀)`.
    TwoStage(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    YesByTheorem,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::YesByTheorem => write!(f, "yes-by-theorem"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HSpaceReport {
    pub verdict: Verdict,
    pub bl: InvariantReport,
    pub wl: InvariantReport,
    pub trace: Vec<String>,
}

/// Whether every component of `map*(X, Y)` is rationally an H-space, by
/// the criterion `cl(X) = 2` and `Wl(Y) < bl(X)`. The answer is one-sided:
/// a failed hypothesis gives `Inconclusive`. With a coalgebra certificate
/// the vanishing of all brackets `ℓ'_k`, `k ≥ 2`, on `Hom(H̄, L)` is also
/// checked directly.
pub fn hspace_certificate(
    quillen_x: &FreeDgl,
    cl: &ConeLengthCertificate,
    l: &LInfAlgebra,
) -> Result<HSpaceReport> {
    let bl = bracket_length(quillen_x)?;
    let wl = whitehead_length(l)?;
    let mut trace = vec![bl.to_string(), wl.to_string(), "Wl counts binary brackets only".to_string()];
    let cl_holds = match cl {
        ConeLengthCertificate::Coalgebra(c) => {
            let report = conilpotence(c)?;
            trace.push(report.to_string());
            report.value <= Length::Finite(2)
        }
        ConeLengthCertificate::TwoStage(w0) => {
            let ok = two_stage(quillen_x, w0);
            trace.push(format!("two-stage filtration with W₀ of dimension {}: {}", w0.len(), if ok { "holds" } else { "fails" }));
            ok
        }
    };
    let verdict = if !cl_holds {
        trace.push("cl(X) = 2 is not certified".into());
        Verdict::Inconclusive
    } else if wl.value < bl.value {
        trace.push(format!("cl(X) = 2 and Wl(Y) = {} < bl(X) = {}", wl.value, bl.value));
        Verdict::YesByTheorem
    } else {
        trace.push(format!("Wl(Y) = {} is not below bl(X) = {}", wl.value, bl.value));
        Verdict::Inconclusive
    };
    if let (Verdict::YesByTheorem, ConeLengthCertificate::Coalgebra(c)) = (verdict, cl) {
        let m = mapping_space_model(c, l, &TransferOptions::default())?;
        if let Some(k) = m.model.arities().find(|&k| k >= 2) {
            return Err(Error::Construction(format!(
                "the hypotheses hold but ℓ'_{k} ≠ 0 on Hom(H̄, L); the coalgebra and the Quillen model do not describe the same space"
            )));
        }
        trace.push(format!("direct check: every ℓ'_k with k ≥ 2 vanishes on Hom(H̄, L) ({} basis elements)", m.hom.space.dim()));
    }
    Ok(HSpaceReport { verdict, bl, wl, trace })
}

/// `∂W₀ = 0` and `∂W₁` only involves letters from `W₀`.
fn two_stage(m: &FreeDgl, w0: &[usize]) -> bool {
    (0..m.gens.dim()).all(|x| {
        let d = m.d_of(x);
        if w0.contains(&x) {
            d.is_zero()
        } else {
            d.keys().all(|w| w.iter().all(|g| w0.contains(g)))
        }
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::fixtures::{example2_quillen, example2_x, example2_y, example_x, example_y, random_cdga, random_sullivan};
    use crate::functors::{dual_coalgebra, linf_from_cdga, quillen, Cdga};
    use crate::graded::GradedSpace;

    #[test]
    fn example_two_invariants() {
        let m = example2_quillen();
        let bl = bracket_length(&m).unwrap();
        assert_eq!(bl.value, Length::Finite(3));
        assert_eq!(m.weight_part(2, 3), m.d_of(2));
        assert_eq!(bl.witness, "weight 3 part of ∂c = [a,[a,b]]");

        let y = example2_y();
        let dl = differential_length(&y).unwrap();
        assert_eq!(dl.value, Length::Finite(2));
        assert!(dl.witness.starts_with("d_2(w)"), "{dl}");

        let l = linf_from_cdga(&y).unwrap();
        assert_eq!(whitehead_length(&l).unwrap().value, Length::Finite(2));

        let dual = dual_coalgebra(&example2_x()).unwrap();
        assert_eq!(dual.reduced.space.dim(), 5);
        assert_eq!(conilpotence(&dual.reduced).unwrap().value, Length::Finite(2));
        assert!(bracket_length(&quillen(&dual.reduced).unwrap()).is_err());
    }

    #[test]
    fn example_two_is_an_h_space() {
        let l = linf_from_cdga(&example2_y()).unwrap();
        let m = example2_quillen();
        let r = hspace_certificate(&m, &ConeLengthCertificate::TwoStage(vec![0, 1]), &l).unwrap();
        assert_eq!(r.verdict, Verdict::YesByTheorem);

        // the coalgebra route runs the direct vanishing check as well
        let dual = dual_coalgebra(&example2_x()).unwrap();
        let r = hspace_certificate(&m, &ConeLengthCertificate::Coalgebra(dual.reduced), &l).unwrap();
        assert_eq!(r.verdict, Verdict::YesByTheorem);
        assert!(r.trace.iter().any(|t| t.starts_with("direct check")));
    }

    #[test]
    fn failed_hypotheses_are_inconclusive() {
        let l = linf_from_cdga(&example2_y()).unwrap();
        let m = example2_quillen();
        // c is not a cycle, so {c} is not a W₀
        let r = hspace_certificate(&m, &ConeLengthCertificate::TwoStage(vec![2]), &l).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        // Wl(Y) = 3 is not below bl = 3
        let l3 = linf_from_cdga(&example_y()).unwrap();
        let r = hspace_certificate(&m, &ConeLengthCertificate::TwoStage(vec![0, 1]), &l3).unwrap();
        assert_eq!(r.wl.value, Length::Finite(3));
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn target_of_the_worked_example() {
        let y = example_y();
        assert_eq!(differential_length(&y).unwrap().value, Length::Finite(2));
        let wl = whitehead_length(&linf_from_cdga(&y).unwrap()).unwrap();
        assert_eq!(wl.value, Length::Finite(3));
        assert!(wl.witness.contains('['), "{wl}");
        let dual = dual_coalgebra(&example_x()).unwrap();
        assert!(conilpotence(&dual.reduced).unwrap().value > Length::Finite(2));
    }

    #[test]
    fn free_lie_algebras_have_infinite_whitehead_length() {
        // dw = 0 on generators of degrees 2, 4: the model is abelian
        let a = Cdga::free(GradedSpace::new([("u", 2), ("v", 4)]).unwrap());
        assert_eq!(whitehead_length(&linf_from_cdga(&a).unwrap()).unwrap().value, Length::Finite(1));
        assert_eq!(differential_length(&a).unwrap().value, Length::Infinite);
    }

    #[test]
    fn non_minimal_inputs_are_rejected() {
        let mut a = Cdga::free(GradedSpace::new([("x", 3), ("y", 4)]).unwrap());
        a.set_d(0, crate::graded::Tensor::basis(vec![1])).unwrap();
        assert!(differential_length(&a).is_err());
        assert!(whitehead_length(&linf_from_cdga(&a).unwrap()).is_err());
    }

    #[test]
    fn binary_trees_suffice_at_conilpotence_two() {
        let mut checked = 0;
        for seed in 0..400 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let b = random_cdga(&mut rng, 4);
            let Ok(dual) = dual_coalgebra(&b) else { continue };
            if crate::structures::conilpotence(&dual.reduced).unwrap() != 2 || dual.reduced.space.dim() > 6 {
                continue;
            }
            let l = linf_from_cdga(&random_sullivan(&mut rng, 4)).unwrap();
            let opts = |binary_only| TransferOptions { max_arity: Some(4), binary_only };
            let full = mapping_space_model(&dual.reduced, &l, &opts(false)).unwrap().model;
            let binary = mapping_space_model(&dual.reduced, &l, &opts(true)).unwrap().model;
            assert_eq!(full, binary, "seed {seed}");
            checked += 1;
            if checked == 12 {
                break;
            }
        }
        assert!(checked >= 10, "only {checked} instances");
    }
}
