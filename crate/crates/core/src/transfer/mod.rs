//! Homotopy retracts and the transfer of A∞ and L∞ structures along them.

mod ainf;
mod linf;
mod retract;

pub use ainf::{transfer_ainf, tree_map_coalgebra};
pub(crate) use ainf::cobar_convert;
pub(crate) use retract::coordinates;
pub use linf::{lie_arity_bound, transfer_linf, transfer_linf_by_trees, tree_map_lie};
pub(crate) use linf::{decalage, transfer_linf_filtered};
pub use crate::mapping::hom_retract;
pub use retract::{
    homology_decomposition, retract_from_decomposition, retract_keeping, Complex, Decomposition, HomotopyRetract,
};

use crate::error::Error;
use crate::graded::GradedSpace;

/// Arity used when no bound follows from the degrees.
pub const DEFAULT_ARITY_CAP: usize = 6;

#[derive(Clone, Debug, Default)]
pub struct TransferOptions {
    /// Highest arity to compute; overrides the degree bound.
    pub max_arity: Option<usize>,
    /// Keep only binary trees.
    pub binary_only: bool,
}

/// Largest arity that can be nonzero on a coalgebra concentrated in degrees
/// `m ≤ |c| ≤ M` with `m ≥ 2`: a nonzero `Δ_k` of degree `k − 2` needs
/// `km ≤ M + k − 2`, i.e. `k ≤ (M − 2)/(m − 1)`.
pub fn degree_arity_bound(space: &GradedSpace) -> Option<usize> {
    let min = *space.degrees().iter().min()?;
    let max = *space.degrees().iter().max()?;
    if min < 2 {
        return None;
    }
    Some((((max - 2) / (min - 1)).max(2)) as usize)
}

/// Highest arity kept. When neither the caller nor the degrees bound it,
/// the fallback cap is guarded: arity `last + 1` is computed as well and
/// must vanish.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ArityCap {
    pub last: usize,
    pub guarded: bool,
}

impl ArityCap {
    pub fn new(explicit: Option<usize>, derived: Option<usize>) -> ArityCap {
        match explicit.or(derived) {
            Some(last) => ArityCap { last, guarded: false },
            None => ArityCap { last: DEFAULT_ARITY_CAP, guarded: true },
        }
    }

    pub fn top(self) -> usize {
        self.last + usize::from(self.guarded)
    }

    pub fn exceeded(self) -> Error {
        Error::BoundExceeded(format!(
            "operations of arity {} do not vanish and no degree bound applies; pass an explicit arity cap",
            self.last + 1
        ))
    }
}

pub(crate) fn arity_cap(space: &GradedSpace, opts: &TransferOptions) -> ArityCap {
    ArityCap::new(opts.max_arity, degree_arity_bound(space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::graded::{GradedMap, Tensor, Vector};
    use crate::structures::{check_ainf, check_cocommutative, AInfCoalgebra};
    use crate::trees::enumerate_planar;

    fn complex_of(c: &AInfCoalgebra) -> Complex {
        Complex::new(c.space.clone(), c.differential()).unwrap()
    }

    fn minimal(c: &AInfCoalgebra) -> HomotopyRetract {
        let cx = complex_of(c);
        retract_from_decomposition(&cx, &homology_decomposition(&cx)).unwrap()
    }

    #[test]
    fn decomposition_of_example() {
        let c = example_coalgebra(W_CORRECT);
        let cx = complex_of(&c);
        let dec = homology_decomposition(&cx);
        let id = |n: &str| c.space.index_of(n).unwrap();
        assert_eq!(dec.a, vec![Vector::basis(id("s"))]);
        assert_eq!(dec.da, vec![Vector::basis(id("r"))]);
        assert_eq!(dec.h_names, ["g", "h", "u", "v", "w"]);
        let r = minimal(&c);
        assert_eq!(r.homotopy.image(id("r")), Vector::basis(id("s")));
        assert!(r.small.d.is_zero());
        assert_eq!(r.big.homology_dims(), r.small.homology_dims());
    }

    #[test]
    fn identity_retract_changes_nothing() {
        let c = example_coalgebra(W_CORRECT);
        let r = HomotopyRetract::identity(&complex_of(&c));
        let t = transfer_ainf(&c, &r, &TransferOptions::default()).unwrap();
        for k in 1..=degree_arity_bound(&c.space).unwrap() {
            for x in 0..c.space.dim() {
                assert_eq!(t.op(k, x), c.op(k, x), "arity {k}");
            }
        }
    }

    #[test]
    fn transferred_example_coalgebra() {
        let c = example_coalgebra(W_CORRECT);
        let r = minimal(&c);
        let t = transfer_ainf(&c, &r, &TransferOptions::default()).unwrap();
        let h = &t.space;
        let id = |n: &str| h.index_of(n).unwrap();
        assert_eq!(t.op(3, id("u")), tensor(h, &[(1, "g|g|h"), (-2, "g|h|g"), (1, "h|g|g")]));
        assert!(!t.op(3, id("v")).is_zero());
        assert_eq!(t.op(2, id("w")), tensor(h, &[(1, "g|v"), (1, "v|g"), (-1, "h|u"), (-1, "u|h")]));
        assert!(t.op(4, id("w")).is_zero() || check_ainf(&t).is_ok());
        assert_eq!(check_ainf(&t), Ok(()));
        assert_eq!(check_cocommutative(&t), Ok(()));
    }

    #[test]
    fn tree_sum_matches_summed_route() {
        let c = example_coalgebra(W_CORRECT);
        let r = minimal(&c);
        let t = transfer_ainf(&c, &r, &TransferOptions::default()).unwrap();
        for k in 2..=4 {
            let mut total = GradedMap::<Vec<usize>>::zero(k as i64 - 2);
            for tree in enumerate_planar(k, None).unwrap() {
                let m = tree_map_coalgebra(&tree, &c, &r).unwrap();
                for y in 0..t.space.dim() {
                    let mut img = total.image(y);
                    img.add_assign(&m.image(y));
                    total.set(y, img);
                }
            }
            for y in 0..t.space.dim() {
                assert_eq!(total.image(y), t.op(k, y), "arity {k}");
            }
        }
    }

    #[test]
    fn non_minimal_retracts_give_valid_structures() {
        let c = example_coalgebra(W_CORRECT);
        let cx = complex_of(&c);
        let dec = homology_decomposition(&cx);
        let r = retract_keeping(&cx, &dec, &[0]).unwrap();
        assert!(!r.small.d.is_zero());
        let t = transfer_ainf(&c, &r, &TransferOptions::default()).unwrap();
        assert_eq!(check_ainf(&t), Ok(()));
        assert_eq!(check_cocommutative(&t), Ok(()));
    }

    #[test]
    fn random_dual_coalgebras_transfer_to_valid_structures() {
        use crate::functors::dual_coalgebra;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut nontrivial = 0;
        for _ in 0..25 {
            let c = dual_coalgebra(&random_cdga(&mut rng, 4)).unwrap().reduced;
            let cx = complex_of(&c);
            let dec = homology_decomposition(&cx);
            let opts = TransferOptions { max_arity: Some(5), binary_only: false };
            let keeps: Vec<Vec<usize>> = (0..dec.a.len()).map(|j| vec![j]).chain([vec![]]).collect();
            for keep in keeps {
                let r = retract_keeping(&cx, &dec, &keep).unwrap();
                let t = transfer_ainf(&c, &r, &opts).unwrap();
                if (3..=5).any(|k| (0..t.space.dim()).any(|y| !t.op(k, y).is_zero())) {
                    nontrivial += 1;
                }
                assert_eq!(check_ainf(&t), Ok(()), "keeping {keep:?}");
                assert_eq!(check_cocommutative(&t), Ok(()), "keeping {keep:?}");
            }
        }
        assert!(nontrivial >= 5, "{nontrivial}");
    }

    #[test]
    fn arity_bound_from_degrees() {
        let c = example_coalgebra(W_CORRECT);
        assert_eq!(degree_arity_bound(&c.space), Some(4));
        let _ = Tensor::zero();
    }
}

#[cfg(test)]
mod lie_tests {
    use super::*;
    use crate::fixtures::*;
    use crate::structures::{check_linf, LInfAlgebra};

    fn complex_of(l: &LInfAlgebra) -> Complex {
        Complex::new(l.space.clone(), l.differential()).unwrap()
    }

    fn instances() -> Vec<LInfAlgebra> {
        vec![
            lie_tensor_truncated(&example_lie(), 2, 2),
            lie_tensor_truncated(&rich_lie(), 2, 2),
            lie_tensor_truncated(&rich_lie(), 1, 3),
            lie_tensor_truncated(&rich_lie(), 3, 2),
        ]
    }

    const OPTS: TransferOptions = TransferOptions { max_arity: Some(4), binary_only: false };

    #[test]
    fn tensored_lie_algebras_are_dgls() {
        assert_eq!(check_linf(&rich_lie()), Ok(()));
        for l in instances() {
            assert_eq!(check_linf(&l), Ok(()));
        }
    }

    #[test]
    fn minimal_transfer_recovers_the_lie_algebra() {
        for l in instances() {
            let cx = complex_of(&l);
            let r = retract_from_decomposition(&cx, &homology_decomposition(&cx)).unwrap();
            let t = transfer_linf(&l, &r, &OPTS).unwrap();
            assert_eq!(check_linf(&t), Ok(()));
            assert!(t.max_arity() <= 2);
        }
    }

    #[test]
    fn non_minimal_transfers_satisfy_jacobi() {
        for l in instances() {
            let cx = complex_of(&l);
            let dec = homology_decomposition(&cx);
            let n = dec.a.len();
            for keep in [vec![0], vec![1, 3], vec![0, 2, 5], (0..n).step_by(2).collect()] {
                let keep: Vec<usize> = keep.into_iter().filter(|&j| j < n).collect();
                let r = retract_keeping(&cx, &dec, &keep).unwrap();
                let t = transfer_linf(&l, &r, &OPTS).unwrap();
                assert_eq!(check_linf(&t), Ok(()), "keeping {keep:?}");
                let again = complex_of(&t);
                let r2 = retract_from_decomposition(&again, &homology_decomposition(&again)).unwrap();
                let t2 = transfer_linf(&t, &r2, &OPTS).unwrap();
                assert_eq!(check_linf(&t2), Ok(()), "second transfer after keeping {keep:?}");
            }
        }
    }

    #[test]
    fn tree_route_matches_partition_route() {
        let l = lie_tensor_truncated(&rich_lie(), 2, 2);
        let cx = complex_of(&l);
        let dec = homology_decomposition(&cx);
        let r = retract_keeping(&cx, &dec, &[0, 2]).unwrap();
        let fast = transfer_linf(&l, &r, &OPTS).unwrap();
        let slow = transfer_linf_by_trees(&l, &r, 4).unwrap();
        assert_eq!(fast, slow);
    }
}
