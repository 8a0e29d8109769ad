use nangle_core::exactla::{Matrix, PrimeField};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (prop_oneof![Just(2u32), Just(3u32)], 1usize..=8, 1usize..=8).prop_flat_map(|(p, r, c)| {
        proptest::collection::vec(0..p, r * c)
            .prop_map(move |data| Matrix::from_vec(PrimeField::new(p).unwrap(), r, c, data).unwrap())
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity(m in matrix_strategy()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rref_is_idempotent(m in matrix_strategy()) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert!(once.pivots.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(once.rank, once.pivots.len());
    }

    #[test]
    fn solutions_plus_kernel_solve(m in matrix_strategy(), seed in proptest::collection::vec(0u32..3, 8)) {
        let f = m.field();
        // A right-hand side in the column space, so a solution exists.
        let x: Vec<u32> = (0..m.cols()).map(|i| seed[i % seed.len()] % f.p()).collect();
        let b = Matrix::column(f, &m.mul_vec(&x));
        let sol = m.solve(&b).unwrap();
        let part = sol.particular.expect("consistent system");
        prop_assert_eq!(m.mul(&part), b.clone());
        for c in 0..sol.kernel.cols() {
            let shifted = part.add(&Matrix::column(f, &sol.kernel.col(c)));
            prop_assert_eq!(m.mul(&shifted), b.clone());
        }
    }

    #[test]
    fn inverse_round_trip(m in matrix_strategy()) {
        if m.is_square() {
            match m.invert().unwrap() {
                Some(inv) => {
                    let id = Matrix::identity(m.field(), m.rows());
                    prop_assert_eq!(m.mul(&inv), id.clone());
                    prop_assert_eq!(inv.mul(&m), id);
                }
                None => prop_assert!(m.rank() < m.rows()),
            }
        } else {
            prop_assert!(m.invert().is_err());
        }
    }
}

#[test]
fn rank_one_system_over_f2_by_enumeration() {
    let f = PrimeField::new(2).unwrap();
    let a = Matrix::from_rows(f, &[vec![1, 1], vec![0, 0]]);
    let b = Matrix::column(f, &[1, 0]);
    let solutions: Vec<[u32; 2]> = (0..4)
        .map(|i| [i & 1, i >> 1])
        .filter(|x| a.mul_vec(x) == [1, 0])
        .collect();
    let sol = a.solve(&b).unwrap();
    let part = sol.particular.unwrap().col(0);
    assert!(solutions.iter().any(|s| s[..] == part[..]));
    assert_eq!(sol.kernel.cols(), 1);
    assert_eq!(sol.kernel.col(0), vec![1, 1]);
}
