use approx::assert_relative_eq;
use bilinear_control::matlie::{
    bracket, default_depth_cap, evaluate_at, lie_closure, matrix_exponential, so3_generators,
    Matrix, Vector,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn matrix(n: usize, scale: f64) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-scale..scale, n * n)
        .prop_map(move |v| DMatrix::from_row_slice(n, n, &v))
}

fn sized_triple() -> impl Strategy<Value = (Matrix, Matrix, Matrix)> {
    (1usize..5).prop_flat_map(|n| (matrix(n, 3.0), matrix(n, 3.0), matrix(n, 3.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric((a, b, _) in sized_triple()) {
        let ab = bracket(&a, &b).unwrap();
        let ba = bracket(&b, &a).unwrap();
        prop_assert_eq!(ab, -ba);
    }

    #[test]
    fn jacobi_identity((a, b, c) in sized_triple()) {
        let j = bracket(&a, &bracket(&b, &c).unwrap()).unwrap()
            + bracket(&b, &bracket(&c, &a).unwrap()).unwrap()
            + bracket(&c, &bracket(&a, &b).unwrap()).unwrap();
        let scale = a.norm() * b.norm() * c.norm();
        prop_assert!(j.norm() <= 1e-10 * scale.max(1.0), "{} vs {}", j.norm(), scale);
    }

    #[test]
    fn closure_dim_is_conjugation_invariant(
        a in matrix(3, 2.0),
        b in matrix(3, 2.0),
        g in matrix(3, 0.5),
        structured in 0usize..3,
    ) {
        // structured families have small closures, generic ones fill gl(3)
        let gens = match structured {
            0 => vec![&a - a.transpose(), &b - b.transpose()],
            1 => vec![Matrix::from_diagonal(&a.diagonal()), Matrix::from_diagonal(&b.diagonal())],
            _ => vec![a.clone(), b.clone()],
        };
        let g = g + Matrix::identity(3, 3) * 2.0;
        let gi = g.clone().try_inverse().unwrap();
        let conj: Vec<Matrix> = gens.iter().map(|m| &g * m * &gi).collect();
        let d1 = lie_closure(&gens, 1e-9, default_depth_cap(3)).unwrap();
        let d2 = lie_closure(&conj, 1e-9, default_depth_cap(3)).unwrap();
        prop_assert_eq!(d1.dim(), d2.dim());
        prop_assert!(d1.closure_defect() <= 1e-8);
    }

    #[test]
    fn exponential_group_law(a in matrix(3, 2.0), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = matrix_exponential(&a, s + t).unwrap();
        let rhs = matrix_exponential(&a, s).unwrap() * matrix_exponential(&a, t).unwrap();
        prop_assert!((&lhs - &rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn evaluation_rank_is_homogeneous(
        x in proptest::collection::vec(-2.0f64..2.0, 3),
        lambda in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0],
    ) {
        let x = Vector::from_vec(x);
        prop_assume!(x.norm() > 1e-3);
        let so3 = lie_closure(&so3_generators(), 1e-9, 18).unwrap();
        let d = lie_closure(&[Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, -1.0]))], 1e-9, 18).unwrap();
        for basis in [&so3, &d] {
            prop_assert_eq!(evaluate_at(basis, &x).unwrap().dim, evaluate_at(basis, &(&x * lambda)).unwrap().dim);
        }
    }
}

#[test]
fn exponential_matches_rotation_far_out() {
    let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    for t in [0.1, 1.0, 10.0, 70.7] {
        let e = matrix_exponential(&j, t).unwrap();
        let r = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert_relative_eq!(e, r, epsilon = 1e-12);
    }
}
