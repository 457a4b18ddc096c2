mod common;

use adamsplit::steenrod::{adem_reduce, admissible_basis, is_admissible, multiply, SteenrodElement};
use common::{dim_a_by_partitions, word_on_poly, Poly};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(1u32..6, 0..4)
}

fn poly_for(k: usize) -> Poly {
    // x1 x2 ... xk; A acts faithfully on it in degrees <= k
    std::iter::once(vec![1u32; k]).collect()
}

fn element_on_poly(x: &SteenrodElement, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for m in x.terms() {
        for mono in word_on_poly(m.exponents(), p) {
            if !out.insert(mono.clone()) {
                out.remove(&mono);
            }
        }
    }
    out
}

#[test]
fn dimensions_match_partition_count() {
    for d in 0..=40u32 {
        assert_eq!(admissible_basis(d).len(), dim_a_by_partitions(d as usize), "degree {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adem_reduction_is_idempotent(w in word()) {
        let r = adem_reduce(&w);
        for m in r.terms() {
            prop_assert!(is_admissible(m.exponents()));
            prop_assert_eq!(adem_reduce(m.exponents()), SteenrodElement::from_monomial(m.clone()));
        }
    }

    #[test]
    fn adem_reduction_preserves_the_action(w in word()) {
        let degree: u32 = w.iter().sum();
        let p = poly_for(degree.max(1) as usize);
        prop_assert_eq!(element_on_poly(&adem_reduce(&w), &p), word_on_poly(&w, &p));
    }

    #[test]
    fn multiplication_is_associative(a in word(), b in word(), c in word()) {
        let (x, y, z) = (adem_reduce(&a), adem_reduce(&b), adem_reduce(&c));
        prop_assert_eq!(multiply(&multiply(&x, &y), &z), multiply(&x, &multiply(&y, &z)));
    }
}
