use num_traits::Zero;

use super::{ExactError, Rational};

/// Row-reduces `rows` in place and returns the pivot columns.
fn row_reduce(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = &*v - &f * pv;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the matrix whose rows are `vectors`, over the rationals.
pub fn rank_over_q(vectors: &[Vec<Rational>]) -> Result<usize, ExactError> {
    let first = vectors.first().ok_or(ExactError::EmptyInput)?;
    for v in vectors {
        if v.len() != first.len() {
            return Err(ExactError::DimensionMismatch(first.len(), v.len()));
        }
    }
    let mut rows = vectors.to_vec();
    Ok(row_reduce(&mut rows).len())
}

/// Solves `sum_k x_k * columns[k] = target` exactly. Returns `None` when the
/// system is inconsistent. Columns must be linearly independent.
pub fn solve_exact(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = columns.len();
    let dim = target.len();
    // augmented rows: one per coordinate
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    /// Independent oracle: largest k with a nonzero k x k minor.
    fn rank_by_minors(m: &[Vec<Rational>]) -> usize {
        fn det(m: &[Vec<Rational>]) -> Rational {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = Rational::zero();
            for j in 0..m.len() {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (r, c) = (m.len(), m[0].len());
        for k in (1..=r.min(c)).rev() {
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<Rational>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                    if !det(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn small_examples() {
        assert_eq!(rank_over_q(&[ints(&[1, 0]), ints(&[0, 1])]).unwrap(), 2);
        assert_eq!(rank_over_q(&[ints(&[2, 4]), ints(&[1, 2])]).unwrap(), 1);
        assert_eq!(rank_over_q(&[ints(&[1, 0, -1, 1]), ints(&[-1, 1, 0, -1])]).unwrap(), 2);
        assert_eq!(rank_over_q(&[ints(&[0, 0, 0])]).unwrap(), 0);
    }

    #[test]
    fn errors() {
        assert_eq!(rank_over_q(&[]), Err(ExactError::EmptyInput));
        assert_eq!(rank_over_q(&[ints(&[1, 2]), ints(&[1])]), Err(ExactError::DimensionMismatch(2, 1)));
    }

    #[test]
    fn solve_recovers_combination() {
        let cols = vec![ints(&[1, 1, 0]), ints(&[0, 1, 1])];
        let target = vec![rat(1, 2), rat(5, 6), rat(1, 3)];
        assert_eq!(solve_exact(&cols, &target).unwrap(), vec![rat(1, 2), rat(1, 3)]);
        assert!(solve_exact(&cols, &ints(&[1, 0, 1])).is_none());
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), c), r)
                .prop_map(|m| m.into_iter().map(|row| row.into_iter().map(|(n, d)| rat(n, d)).collect()).collect())
        })
    }

    proptest! {
        #[test]
        fn rank_matches_minor_oracle(m in matrix().prop_filter("small", |m| m.len() <= 4 && m[0].len() <= 4)) {
            prop_assert_eq!(rank_over_q(&m).unwrap(), rank_by_minors(&m));
        }

        #[test]
        fn rank_invariant_under_scaling_and_permutation(
            m in matrix(),
            scales in prop::collection::vec((1i64..=5, 1i64..=5, any::<bool>()), 6),
            seed in any::<u64>(),
        ) {
            let base = rank_over_q(&m).unwrap();
            let mut scaled: Vec<Vec<Rational>> = m
                .iter()
                .zip(&scales)
                .map(|(row, &(n, d, neg))| {
                    let f = if neg { rat(-n, d) } else { rat(n, d) };
                    row.iter().map(|v| v * &f).collect()
                })
                .collect();
            // deterministic shuffle
            let len = scaled.len();
            let mut s = seed;
            for i in (1..len).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                scaled.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(rank_over_q(&scaled).unwrap(), base);
        }
    }
}
