//! Gaussian elimination and products over any [`Field`].

use super::{Field, FieldError, Matrix};

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions");
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(a.get(i, l), b.get(l, j))))
    })
}

/// Row vector times matrix: `x · M`.
pub fn vec_mul<F: Field>(f: &F, x: &[F::Elem], m: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert_eq!(x.len(), m.rows(), "vector length");
    let mut out = vec![f.zero(); m.cols()];
    for (i, xi) in x.iter().enumerate() {
        if f.is_zero(xi) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let t = f.mul(xi, m.get(i, j));
            *o = f.add(o, &t);
        }
    }
    out
}

/// Reduces `rows` (a list of row vectors) in place to row echelon form and
/// returns the rank.
fn eliminate<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !f.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(&rows[rank][col]).expect("pivot is nonzero");
        let pivot_row: Vec<F::Elem> = rows[rank].iter().map(|x| f.mul(x, &inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if f.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut rows: Vec<Vec<F::Elem>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    eliminate(f, &mut rows, m.cols())
}

/// Rank of the columns of `m` indexed by `cols`. Panics on an out-of-range
/// index.
pub fn rank_of<F: Field>(f: &F, m: &Matrix<F::Elem>, cols: &[usize]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    assert!(cols.iter().all(|&c| c < m.cols()), "column index out of range");
    // eliminate on the transpose so that the selected columns become rows
    let mut rows: Vec<Vec<F::Elem>> = cols.iter().map(|&c| m.column(c)).collect();
    eliminate(f, &mut rows, m.rows())
}

/// Solves `M · x = y` for square invertible `M`.
pub fn solve_square<F: Field>(f: &F, m: &Matrix<F::Elem>, y: &[F::Elem]) -> Result<Vec<F::Elem>, FieldError> {
    let n = m.rows();
    if m.cols() != n {
        return Err(FieldError::Shape(format!("expected square matrix, got {}x{}", n, m.cols())));
    }
    if y.len() != n {
        return Err(FieldError::Shape(format!("right-hand side has length {}, expected {n}", y.len())));
    }
    let mut aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(y[i].clone());
            row
        })
        .collect();
    let rank = eliminate(f, &mut aug, n);
    if rank < n {
        return Err(FieldError::SingularMatrix { rank, dim: n });
    }
    // back substitution on the unit upper triangular system
    let mut x = vec![f.zero(); n];
    for i in (0..n).rev() {
        let mut acc = aug[i][n].clone();
        for j in i + 1..n {
            acc = f.sub(&acc, &f.mul(&aug[i][j], &x[j]));
        }
        x[i] = acc;
    }
    Ok(x)
}

/// Inverse of a square matrix by Gauss–Jordan elimination.
pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>, FieldError> {
    let n = m.rows();
    if m.cols() != n {
        return Err(FieldError::Shape(format!("expected square matrix, got {}x{}", n, m.cols())));
    }
    let mut aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            row
        })
        .collect();
    let rank = eliminate(f, &mut aug, n);
    if rank < n {
        return Err(FieldError::SingularMatrix { rank, dim: n });
    }
    for i in (0..n).rev() {
        for r in 0..i {
            if f.is_zero(&aug[r][i]) {
                continue;
            }
            let factor = aug[r][i].clone();
            let pivot = aug[i].clone();
            for (x, p) in aug[r].iter_mut().zip(&pivot).skip(i) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| aug[i][n + j].clone()))
}

/// Basis of the null space `{v : M · v = 0}`, from the reduced row echelon
/// form of `M`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ncols = m.cols();
    let mut rows: Vec<Vec<F::Elem>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let rank = eliminate(f, &mut rows, ncols);
    let pivots: Vec<usize> = rows[..rank]
        .iter()
        .map(|row| row.iter().position(|x| !f.is_zero(x)).expect("echelon row is nonzero"))
        .collect();
    for i in (0..rank).rev() {
        let pivot = rows[i].clone();
        for row in rows[..i].iter_mut() {
            let factor = row[pivots[i]].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![f.zero(); ncols];
            v[free] = f.one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = f.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Leftmost-first greedy basis: scans `candidates` in order and keeps each
/// column that raises the rank, stopping once `target` columns are kept.
pub fn greedy_independent_columns<F: Field>(
    f: &F,
    m: &Matrix<F::Elem>,
    candidates: &[usize],
    target: usize,
) -> Vec<usize> {
    // incremental echelon basis of the kept columns
    let mut basis: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let mut kept = Vec::new();
    for &c in candidates {
        if kept.len() == target {
            break;
        }
        let mut v = m.column(c);
        for (pc, b) in &basis {
            if f.is_zero(&v[*pc]) {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        if let Some(pc) = v.iter().position(|x| !f.is_zero(x)) {
            let inv = f.inv(&v[pc]).expect("nonzero");
            let v: Vec<F::Elem> = v.iter().map(|x| f.mul(x, &inv)).collect();
            basis.push((pc, v));
            kept.push(c);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BaseField, ExtField};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f13() -> BaseField {
        BaseField::prime(13).unwrap()
    }

    #[test]
    fn kernel_dimension_and_membership() {
        let f = f13();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rows in 1..5 {
            for cols in 1..7 {
                let m = Matrix::from_fn(rows, cols, |_, j| if j % 3 == 2 { 0 } else { f.random(&mut rng) });
                let ker = kernel(&f, &m);
                assert_eq!(ker.len(), cols - rank(&f, &m));
                for v in &ker {
                    let mv = vec_mul(&f, v, &m.transpose());
                    assert!(mv.iter().all(|x| *x == 0));
                }
            }
        }
    }

    #[test]
    fn rank_basics() {
        let f = f13();
        let id = identity(&f, 4);
        assert_eq!(rank_of(&f, &id, &[0, 1, 2, 3]), 4);
        assert_eq!(rank_of(&f, &id, &[]), 0);
        let dup = Matrix::from_rows(vec![vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(rank_of(&f, &dup, &[0, 1]), 1);
        assert_eq!(rank_of(&f, &dup, &[2]), 0);
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let f = f13();
        let y = vec![3, 7, 11];
        assert_eq!(solve_square(&f, &identity(&f, 3), &y).unwrap(), y);
        let d = Matrix::from_fn(3, 3, |i, j| if i == j { (i as u32) + 2 } else { 0 });
        let x = solve_square(&f, &d, &y).unwrap();
        for i in 0..3 {
            assert_eq!(x[i], f.div(&y[i], &((i as u32) + 2)).unwrap());
        }
        let sing = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(solve_square(&f, &sing, &[1, 1]), Err(FieldError::SingularMatrix { rank: 1, dim: 2 }));
        let rect = Matrix::from_rows(vec![vec![1, 2, 3]]);
        assert!(matches!(solve_square(&f, &rect, &[1]), Err(FieldError::Shape(_))));
    }

    #[test]
    fn solve_round_trip_over_extension() {
        let f = ExtField::with_degree(BaseField::binary(8).unwrap(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut solved = 0;
        while solved < 50 {
            let n = 1 + solved % 6;
            let m = Matrix::from_fn(n, n, |_, _| f.random(&mut rng));
            if rank(&f, &m) < n {
                continue;
            }
            let x: Vec<_> = (0..n).map(|_| f.random(&mut rng)).collect();
            let y = vec_mul(&f, &x, &m.transpose());
            assert_eq!(solve_square(&f, &m, &y).unwrap(), x);
            let inv = inverse(&f, &m).unwrap();
            assert_eq!(mul(&f, &m, &inv), identity(&f, n));
            solved += 1;
        }
    }

    #[test]
    fn greedy_columns_leftmost() {
        let f = f13();
        let m = Matrix::from_rows(vec![vec![1, 2, 0, 1], vec![0, 0, 1, 1]]);
        assert_eq!(greedy_independent_columns(&f, &m, &[0, 1, 2, 3], 2), vec![0, 2]);
        assert_eq!(greedy_independent_columns(&f, &m, &[1, 3, 0], 2), vec![1, 3]);
    }

    fn small_matrix() -> impl Strategy<Value = (Vec<u32>, usize, usize)> {
        (1usize..5, 1usize..8).prop_flat_map(|(r, c)| (prop::collection::vec(0u32..5, r * c), Just(r), Just(c)))
    }

    proptest! {
        #[test]
        fn rank_is_a_matroid_rank_function(
            (data, r, c) in small_matrix(),
            a in 0u32..256,
            b in 0u32..256,
        ) {
            let f = BaseField::prime(5).unwrap();
            let m = Matrix::new(r, c, data);
            let set = |mask: u32| (0..c).filter(|&j| mask >> j & 1 == 1).collect::<Vec<_>>();
            let (a, b) = (a & ((1 << c) - 1), b & ((1 << c) - 1));
            let ra = rank_of(&f, &m, &set(a));
            let rb = rank_of(&f, &m, &set(b));
            prop_assert!(ra <= set(a).len().min(r));
            // monotone
            prop_assert!(rank_of(&f, &m, &set(a & b)) <= ra);
            prop_assert!(ra <= rank_of(&f, &m, &set(a | b)));
            // submodular
            prop_assert!(rank_of(&f, &m, &set(a | b)) + rank_of(&f, &m, &set(a & b)) <= ra + rb);
        }
    }
}
