//! Passing between presentations: CDGAs, their dual coalgebras, Quillen
//! models and the cochain functor on L∞-algebras.

mod cdga;
mod cochain;
mod dual;
mod quillen;

pub use cdga::{Cdga, Poly};
pub use cochain::{cochain, linf_from_cdga};
pub(crate) use cochain::dual_name;
pub use dual::{dual_coalgebra, DualCoalgebra};
pub use quillen::{fmt_lie, is_lie_element, lie_bracket, quillen, quillen_differential_direct, FreeDgl};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::structures::{check_ainf, check_cocommutative};
    use rand::SeedableRng;

    #[test]
    fn dual_of_example_matches_hand_computation() {
        let dual = dual_coalgebra(&example_x()).unwrap();
        let names: Vec<&str> = dual.reduced.space.names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["<a>", "<b>", "<c>", "<a*b>", "<a*c>", "<b*c>", "<a*b*c>"]);
        let renamed = dual.renamed(&names_of(&["g", "h", "r", "s", "u", "v", "w"])).unwrap();
        assert_eq!(renamed.reduced, example_coalgebra(W_CORRECT));
        assert_eq!(check_ainf(&renamed.full), Ok(()));
    }

    fn names_of(list: &[&str]) -> Vec<String> {
        names(list)
    }

    #[test]
    fn trivial_algebra_has_zero_reduced_dual() {
        let b = Cdga::free(crate::graded::GradedSpace::empty());
        assert_eq!(dual_coalgebra(&b).unwrap().reduced.space.dim(), 0);
    }

    #[test]
    fn duals_of_random_algebras_are_cocommutative_dgcs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut with_differential = 0;
        for _ in 0..30 {
            let b = random_cdga(&mut rng, 4);
            let dual = dual_coalgebra(&b).unwrap();
            if !dual.reduced.differential().is_zero() {
                with_differential += 1;
            }
            for c in [&dual.full, &dual.reduced] {
                assert_eq!(check_ainf(c), Ok(()));
                assert_eq!(check_cocommutative(c), Ok(()));
            }
        }
        assert!(with_differential >= 10, "{with_differential}");
    }

    fn both_routes(c: &crate::structures::AInfCoalgebra) -> (FreeDgl, FreeDgl) {
        use crate::transfer::*;
        let cx = Complex::new(c.space.clone(), c.differential()).unwrap();
        let dec = homology_decomposition(&cx);
        let r = retract_from_decomposition(&cx, &dec).unwrap();
        let t = transfer_ainf(c, &r, &TransferOptions::default()).unwrap();
        (quillen(&t).unwrap(), quillen_differential_direct(c, &dec).unwrap())
    }

    #[test]
    fn quillen_model_of_a_cone_length_two_space() {
        let dual = dual_coalgebra(&crate::fixtures::example2_x()).unwrap();
        let (via_transfer, direct) = both_routes(&dual.reduced);
        assert_eq!(via_transfer, direct);
        let expected = crate::fixtures::example2_quillen();
        assert_eq!(direct.gens.degrees(), expected.gens.degrees());
        let (a, b, c) = (0, 1, 2);
        assert_eq!(direct.gens.names()[a], "<α>");
        assert_eq!(direct.gens.names()[b], "<β>");
        assert!(direct.d_of(a).is_zero() && direct.d_of(b).is_zero());
        assert_eq!(direct.d_of(c), expected.d_of(2));
    }

    #[test]
    fn lie_elements_print_as_brackets() {
        let m = crate::fixtures::example2_quillen();
        assert_eq!(fmt_lie(&m.gens, &m.d_of(2)).unwrap(), "[a,[a,b]]");
        let g = crate::graded::GradedSpace::new([("x", 3), ("y", 2)]).unwrap();
        let x = crate::graded::Tensor::basis(vec![0]);
        let y = crate::graded::Tensor::basis(vec![1]);
        let xx = lie_bracket(&g, &x, &x);
        let mut t = lie_bracket(&g, &y, &xx).scaled(&crate::graded::rat(-2));
        t.add_assign(&lie_bracket(&g, &x, &lie_bracket(&g, &x, &y)));
        let shown = fmt_lie(&g, &t).unwrap();
        // [y,[x,x]] = -2 [x,[x,y]] by Jacobi for odd x
        assert_eq!(shown, "5 [x,[x,y]]");
        assert!(fmt_lie(&g, &crate::graded::Tensor::basis(vec![0, 1])).is_none());
    }

    #[test]
    fn quillen_routes_agree_on_example() {
        let c = example_coalgebra(W_CORRECT);
        let (via_transfer, direct) = both_routes(&c);
        let w = direct.gens.index_of("w").unwrap();
        eprintln!("{}", direct.gens.fmt_tensor(&direct.d_of(w)));
        eprintln!("{}", via_transfer.gens.fmt_tensor(&via_transfer.d_of(w)));
        assert_eq!(via_transfer, direct);
        assert!(direct.is_minimal());
        assert!(!direct.weight_part(w, 2).is_zero());
    }

    #[test]
    fn quillen_routes_agree_on_random_coalgebras() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut cubic = 0;
        for _ in 0..25 {
            let c = dual_coalgebra(&random_cdga(&mut rng, 4)).unwrap().reduced;
            let (via_transfer, direct) = both_routes(&c);
            assert_eq!(via_transfer, direct);
            assert!(direct.is_minimal());
            if (0..direct.gens.dim()).any(|x| !direct.weight_part(x, 3).is_zero()) {
                cubic += 1;
            }
        }
        assert!(cubic >= 3, "{cubic}");
    }
}
