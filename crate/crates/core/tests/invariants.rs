use edmcp_core::arith::{ldl_certify, rational};
use edmcp_core::construct::{
    bipartite_edge_factorize, dd_factorize, inductive_factorize, lrl_factorize, optimal_factorize,
};
use edmcp_core::edm::{
    build_an, build_bn, f_min, g_diag, g_jordan, null_basis, spectrum, w_vector,
};
use edmcp_core::factor::{dnn_check, gram, special_hypothesis_check, verify};
use edmcp_core::integer::{build_ei, ei_factor, jordan_sum_factorize, Compression};
use edmcp_core::{Atom, Rational, Scalar, SymMatrix};
use num_traits::Zero;
use proptest::prelude::*;

fn int(v: i64) -> Scalar {
    Scalar::from_int(v)
}

fn sqrt_7_5() -> Scalar {
    Scalar::sqrt_rational(&rational(7, 5)).unwrap()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    edmcp_core::arith::dot(a, b)
}

#[test]
fn an_eigenvectors() {
    for n in 3..=30 {
        let a = build_an(n).unwrap();
        let s = spectrum(n).unwrap();
        let w = w_vector(n);
        let l3 = Scalar::from(s.lambda3.clone());
        let aw = a.mul_vec(&w);
        assert!(aw.iter().zip(&w).all(|(x, y)| *x == &l3 * y), "n={n}");
        for v in null_basis(n) {
            assert!(a.mul_vec(&v).iter().all(Scalar::is_zero), "n={n}");
        }
    }
}

#[test]
fn an_eigenvalue_quadratic_and_trace() {
    for n in 3..=30i64 {
        let s = spectrum(n as usize).unwrap();
        let n2 = n * n;
        for l in [&s.lambda1, &s.lambda2] {
            let lhs = &(&int(180) * &(l * l)) - &(&int(30 * n * (n2 - 1)) * l);
            let lhs = &lhs - &int(n2 * (n2 - 1) * (n2 - 4));
            assert!(lhs.is_zero(), "n={n}");
        }
        let l3 = Scalar::from(s.lambda3.clone());
        let sum = &(&(&s.lambda1 * &s.lambda1) + &(&s.lambda2 * &s.lambda2)) + &(&l3 * &l3);
        assert_eq!(
            sum,
            Scalar::from(rational(n2 * (n2 - 1) * (2 * n2 - 3), 30)),
            "n={n}"
        );
    }
}

#[test]
fn an_has_rank_three() {
    for n in 3..=30 {
        let a = build_an(n).unwrap();
        assert_eq!(a.rank(), 3, "n={n}");
        assert_eq!(spectrum(n).unwrap().nullity, n - 3);
    }
}

#[test]
fn shift_ordering() {
    for n in 3..=30 {
        let (f, gj, gd) = (f_min(n), g_jordan(n), g_diag(n));
        assert!(f <= gj && gj < gd, "n={n}");
    }
    assert!(f_min(2) == g_jordan(2) && g_jordan(2) == g_diag(2));
    assert_eq!(f_min(3), g_jordan(3));
}

#[test]
fn bn_is_psd_with_kernel_w() {
    for n in 2..=20 {
        let b = build_bn(n).unwrap();
        let cert = ldl_certify(&b);
        assert!(cert.is_psd(), "n={n}");
        assert_eq!(cert.rank(), Some(n - 1), "n={n}");
        assert!(b.mul_vec(&w_vector(n)).iter().all(Scalar::is_zero));
    }
}

#[test]
fn optimal_factorizations_are_kernel_orthogonal() {
    for n in 2..=30 {
        let b = build_bn(n).unwrap();
        let f = optimal_factorize(n).unwrap();
        let w = w_vector(n);
        let report = verify(&b, &f, std::slice::from_ref(&w)).unwrap();
        assert!(report.passed(), "n={n}: {report:?}");
        for atom in f.atoms() {
            assert!(dot(atom.support(), &w).is_zero());
        }
        assert!(dnn_check(&gram(&f)).is_dnn());
    }
}

#[test]
fn inductive_factorizations_verify() {
    let q = sqrt_7_5();
    for n in 2..=30 {
        let f = inductive_factorize(n, &q).unwrap();
        let target = build_an(n)
            .unwrap()
            .add_diagonal(&(&q * &Scalar::from(f_min(n))));
        let report = verify(&target, &f, &[]).unwrap();
        assert!(report.passed(), "n={n}");
    }
}

#[test]
fn lrl_reconstructs_an() {
    for n in 3..=40 {
        let pair = lrl_factorize(n).unwrap();
        assert!(pair.check_inverse(), "n={n}");
        assert_eq!(pair.reconstruct(), build_an(n).unwrap(), "n={n}");
    }
}

#[test]
fn ei_grams_and_jordan_sum() {
    for n in 2..=30 {
        for i in 1..n {
            let e = build_ei(n, i).unwrap();
            let f = ei_factor(n, i).unwrap();
            assert!(verify(&e, &f, &[]).unwrap().passed(), "n={n} i={i}");
        }
    }
    for n in 2..=20 {
        let shift = Scalar::from(g_jordan(n));
        let target = build_an(n).unwrap().add_diagonal(&shift);
        for mode in [Compression::FourSquares, Compression::Repetition] {
            let f = jordan_sum_factorize(n, mode).unwrap();
            assert!(f.is_integral());
            assert!(verify(&target, &f, &[]).unwrap().passed(), "n={n}");
        }
    }
}

#[test]
fn dd_handles_diagonal_shift() {
    for n in 2..=15 {
        let a = build_an(n).unwrap().add_diagonal(&Scalar::from(g_diag(n)));
        let f = dd_factorize(&a).unwrap();
        assert!(verify(&a, &f, &[]).unwrap().passed(), "n={n}");
    }
}

#[test]
fn special_instance_is_m_matrix_after_sign_flip() {
    let a = SymMatrix::from_i64_rows(&[&[2, 0, 1, 1], &[0, 2, 1, 1], &[1, 1, 2, 0], &[1, 1, 0, 2]])
        .unwrap();
    let w = vec![int(1), int(1), int(-1), int(-1)];
    let lambda = int(0);
    assert!(special_hypothesis_check(&a, 2, &w, &lambda));
    let m = a.signed_split(2);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                assert!(!m.get(i, j).is_positive());
            }
        }
    }
    assert!(ldl_certify(&m).is_psd());
    let f = bipartite_edge_factorize(&a, 2, &w, &lambda).unwrap();
    assert!(verify(&a, &f, &[w]).unwrap().passed());
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (0i64..50, 1i64..12).prop_map(|(p, q)| rational(p, q))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..50, 1i64..12).prop_map(|(p, q)| rational(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_closure(n in 2usize..16, eps in small_rational()) {
        let eps = Scalar::from(eps);
        let mut f = optimal_factorize(n).unwrap();
        if eps.is_positive() {
            for i in 0..n {
                f.push(Atom::diagonal(n, i, eps.clone()).unwrap()).unwrap();
            }
        }
        let target = build_bn(n).unwrap().add_diagonal(&eps);
        prop_assert!(verify(&target, &f, &[]).unwrap().passed());
        prop_assert!(dnn_check(&target).is_dnn());
    }

    #[test]
    fn gram_round_trip(
        n in 1usize..6,
        raw in prop::collection::vec((positive_rational(), prop::collection::vec(positive_rational(), 6)), 1..6),
    ) {
        let atoms: Vec<Atom> = raw
            .into_iter()
            .map(|(w, c)| Atom::new(Scalar::from(w), c.into_iter().take(n).map(Scalar::from).collect()).unwrap())
            .collect();
        let f = edmcp_core::CpFactorization::from_atoms(n, atoms).unwrap();
        let g = gram(&f);
        prop_assert!(verify(&g, &f, &[]).unwrap().gram_matches);
        prop_assert!(dnn_check(&g).is_dnn());
    }
}
