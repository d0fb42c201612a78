use plk_core::linalg::{
    dot, int, null_space, orthogonal_complement, rank, rref, subspace_intersection_dim, subspace_sum, Matrix, Subspace,
};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
            let rows = v.chunks(c).map(|row| row.iter().map(|&x| int(x)).collect()).collect();
            Matrix::from_rows(c, rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(5, 6)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_plus_nullity(m in matrix(5, 6)) {
        let kernel = null_space(&m);
        prop_assert_eq!(rank(&m) + kernel.len(), m.cols());
        for v in &kernel {
            for row in m.row_vectors() {
                prop_assert_eq!(dot(&row, v), int(0));
            }
        }
    }

    #[test]
    fn rref_transform_and_idempotence(m in matrix(5, 6)) {
        let r = rref(&m);
        prop_assert_eq!(r.transform.mul(&m).unwrap(), r.reduced.clone());
        prop_assert_eq!(rref(&r.reduced).reduced, r.reduced.clone());
        for (i, &p) in r.pivots.iter().enumerate() {
            for row in 0..m.rows() {
                prop_assert_eq!(r.reduced.get(row, p).clone(), int(i64::from(row == i)));
            }
        }
    }

    #[test]
    fn subspace_dimension_formulas(a in matrix(4, 5), b in matrix(4, 5)) {
        prop_assume!(a.cols() == b.cols());
        let n = a.cols();
        let sa = Subspace::span(n, a.row_vectors()).unwrap();
        let sb = Subspace::span(n, b.row_vectors()).unwrap();
        let sum = subspace_sum(&sa, &sb).unwrap();
        let meet = subspace_intersection_dim(&sa, &sb).unwrap();
        prop_assert_eq!(sum.dim() + meet, sa.dim() + sb.dim());
        prop_assert!(sa.is_subspace_of(&sum) && sb.is_subspace_of(&sum));
        let perp = orthogonal_complement(&sa);
        prop_assert_eq!(perp.dim() + sa.dim(), n);
        for u in perp.basis() {
            for v in sa.basis() {
                prop_assert_eq!(dot(u, v), int(0));
            }
        }
        prop_assert_eq!(orthogonal_complement(&perp), sa);
    }
}
