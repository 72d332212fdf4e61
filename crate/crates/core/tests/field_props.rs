use derived_hall::field::{FpMatrix, PrimeField, VectorIter};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = FpMatrix> {
    (prop::sample::select(vec![2u32, 3]), 1..=max_rows, 1..=max_cols).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c)
            .prop_map(move |data| FpMatrix::new(PrimeField::new(p).unwrap(), r, c, data).unwrap())
    })
}

fn brute_kernel_size(m: &FpMatrix) -> usize {
    VectorIter::new(m.field(), m.cols())
        .filter(|v| m.mul_vec(v).iter().all(|&x| x == 0))
        .count()
}

proptest! {
    #[test]
    fn rank_nullity_against_brute_force(m in matrix(4, 4)) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        for row in k.row_vecs() {
            prop_assert!(m.mul_vec(row).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(k.rank(), k.rows());
        let p = m.field().p() as usize;
        prop_assert_eq!(brute_kernel_size(&m), p.pow(k.rows() as u32));
    }

    #[test]
    fn solve_is_exact(m in matrix(4, 4)) {
        let field = m.field();
        for b in VectorIter::new(field, m.rows()) {
            let brute = VectorIter::new(field, m.cols()).any(|x| m.mul_vec(&x) == b);
            match m.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
                None => prop_assert!(!brute, "missed a solution for {:?}", b),
            }
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix(5, 5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let (r, pivots) = m.rref();
        prop_assert_eq!(r.rref().0, r.clone());
        prop_assert_eq!(pivots.len(), m.rank());
    }

    #[test]
    fn multiplication_is_associative(
        p in prop::sample::select(vec![2u32, 3, 5]),
        dims in (1usize..4, 1usize..4, 1usize..4, 1usize..4),
        seed in any::<u64>(),
    ) {
        let field = PrimeField::new(p).unwrap();
        let (a, b, c, d) = dims;
        let gen = |rows: usize, cols: usize, salt: u64| {
            let data = (0..rows * cols)
                .map(|i| ((seed.wrapping_mul(6364136223846793005).wrapping_add(salt * 1442695040888963407 + i as u64) >> 33) % p as u64) as u32)
                .collect();
            FpMatrix::new(field, rows, cols, data).unwrap()
        };
        let (x, y, z) = (gen(a, b, 1), gen(b, c, 2), gen(c, d, 3));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn invertible_iff_full_rank(m in matrix(3, 3)) {
        if m.is_square() {
            prop_assert_eq!(m.is_invertible(), m.rank() == m.rows());
        }
    }
}
