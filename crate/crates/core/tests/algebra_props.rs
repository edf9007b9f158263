use idpart::hilbert::{inner, tensor_op, tensor_state, RandomSpec, StateVector, C64};
use idpart::observables::{equivalence_check, xi_dif, xi_id};
use idpart::permutation::{
    n_antisymmetrizer, n_symmetrizer, perm_operator, permutation_eigenvalue, permutator,
    Permutation, SymmetryClass,
};
use proptest::prelude::*;

/// Pascal's triangle, independent of the library's binomial.
fn pascal(n: usize, k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn product_state(factors: &[StateVector]) -> StateVector {
    factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| tensor_state(&acc, f).unwrap())
}

fn permutation_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::new(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot(
        dim in 1usize..8, seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0,
    ) {
        let mut s = RandomSpec::new(seed, 0).sampler();
        let (u, v, w) = (s.state(dim).unwrap(), s.state(dim).unwrap(), s.state(dim).unwrap());
        let a = C64::new(re, im);
        let lhs = inner(&u.scale(a).add_scaled(C64::new(1.0, 0.0), &v).unwrap(), &w).unwrap();
        let rhs = a.conj() * inner(&u, &w).unwrap() + inner(&v, &w).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + a.norm()));
        let sym = inner(&w, &u).unwrap().conj() - inner(&u, &w).unwrap();
        prop_assert!(sym.norm() <= 1e-15);
    }

    #[test]
    fn tensor_products_are_compatible(dim_a in 2usize..=4, dim_b in 2usize..=4, seed in any::<u64>()) {
        let mut s = RandomSpec::new(seed, 1).sampler();
        let (u, x) = (s.state(dim_a).unwrap(), s.state(dim_a).unwrap());
        let (v, y) = (s.state(dim_b).unwrap(), s.state(dim_b).unwrap());
        let (a, b) = (s.hermitian(dim_a).unwrap(), s.hermitian(dim_b).unwrap());
        let lhs = tensor_op(&a, &b).unwrap().apply(&tensor_state(&u, &v).unwrap()).unwrap();
        let rhs = tensor_state(&a.apply(&u).unwrap(), &b.apply(&v).unwrap()).unwrap();
        prop_assert!(lhs.max_deviation(&rhs).unwrap() <= 1e-12);
        let ip = inner(&tensor_state(&u, &v).unwrap(), &tensor_state(&x, &y).unwrap()).unwrap();
        let want = inner(&u, &x).unwrap() * inner(&v, &y).unwrap();
        prop_assert!((ip - want).norm() <= 1e-12);
    }

    #[test]
    fn perm_operators_form_a_representation(
        d in 2usize..=3, (sigma, tau) in (1usize..=4).prop_flat_map(|n| (permutation_strategy(n), permutation_strategy(n))),
    ) {
        let lhs = perm_operator(d, &sigma).unwrap().mul(&perm_operator(d, &tau).unwrap()).unwrap();
        let rhs = perm_operator(d, &sigma.compose(&tau).unwrap()).unwrap();
        prop_assert_eq!(lhs.max_deviation(&rhs).unwrap(), 0.0);
        prop_assert_eq!(sigma.compose(&tau).unwrap().sign(), sigma.sign() * tau.sign());
    }

    #[test]
    fn perm_operator_moves_slot_k_to_sigma_k(
        d in 2usize..=3, seed in any::<u64>(), sigma in (1usize..=4).prop_flat_map(permutation_strategy),
    ) {
        let mut s = RandomSpec::new(seed, 2).sampler();
        let n = sigma.n();
        let factors: Vec<StateVector> = (0..n).map(|_| s.state(d).unwrap()).collect();
        let mut moved = factors.clone();
        for (k, f) in factors.iter().enumerate() {
            moved[sigma.apply(k)] = f.clone();
        }
        let got = perm_operator(d, &sigma).unwrap().apply(&product_state(&factors)).unwrap();
        prop_assert!(got.max_deviation(&product_state(&moved)).unwrap() <= 1e-15);
    }

    #[test]
    fn symmetrized_states_are_pi_eigenvectors(dim in 2usize..=6, seed in any::<u64>(), fermi in any::<bool>()) {
        let cls = if fermi { SymmetryClass::Fermion } else { SymmetryClass::Boson };
        let mut s = RandomSpec::new(seed, 3).sampler();
        let (psi, phi) = s.orthogonal_pair(dim).unwrap();
        let x = xi_id(&psi, &phi, cls).unwrap();
        prop_assert_eq!(permutation_eigenvalue(&x.vector, 1e-12).unwrap(), Some(cls));
        let pi_x = permutator(dim).unwrap().apply(&x.vector).unwrap();
        prop_assert!(pi_x.max_deviation(&x.vector.scale(C64::new(cls.lambda_f64(), 0.0))).unwrap() <= 1e-12);
        // the unsymmetrized product is generically neither
        prop_assert_eq!(permutation_eigenvalue(&xi_dif(&psi, &phi).unwrap().vector, 1e-6).unwrap(), None);
    }

    #[test]
    fn equivalence_holds_for_orthogonal_pairs(dim in 2usize..=6, seed in any::<u64>()) {
        let mut s = RandomSpec::new(seed, 4).sampler();
        let (psi, phi) = s.orthogonal_pair(dim).unwrap();
        let (a, b) = (s.hermitian(dim).unwrap(), s.hermitian(dim).unwrap());
        let bose = equivalence_check(&psi, &phi, &a, &b, SymmetryClass::Boson).unwrap();
        let fermi = equivalence_check(&psi, &phi, &a, &b, SymmetryClass::Fermion).unwrap();
        prop_assert!(bose.pass && fermi.pass);
        prop_assert!((bose.lhs - fermi.lhs).abs() <= 1e-10);
    }
}

#[test]
fn n_particle_traces_match_binomials() {
    for d in 1..=4 {
        for n in 1..=4 {
            let s = n_symmetrizer(d, n).unwrap();
            let a = n_antisymmetrizer(d, n).unwrap();
            assert!((s.trace().re - pascal(d + n - 1, n) as f64).abs() < 1e-9, "S d={d} n={n}");
            assert!((a.trace().re - pascal(d, n) as f64).abs() < 1e-9, "A d={d} n={n}");
            assert!(s.idempotence_residual() <= 1e-12);
            assert!(a.idempotence_residual() <= 1e-12);
            if n >= 2 {
                assert!(s.mul(&a).unwrap().max_abs_entry() <= 1e-12);
            }
        }
    }
}
