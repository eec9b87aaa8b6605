//! Small exact integer linear algebra: row Hermite normal form, Bareiss
//! determinants and rank, and exact rational solves.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i64>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Pivots are positive, entries above a pivot are reduced into
/// `[0, pivot)`, and zero rows are dropped, so the result is the unique
/// canonical basis of the row lattice.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();

    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        // Euclid on column `col` among rows pivot_row..
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m.len() {
                if m[r][col] != 0 && best.is_none_or(|b| m[r][col].abs() < m[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..m.len() {
                if m[r][col] != 0 {
                    let q = Integer::div_floor(&m[r][col], &m[pivot_row][col]);
                    let (head, tail) = m.split_at_mut(r);
                    axpy(&mut tail[0], -q, &head[pivot_row]);
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            m[pivot_row].iter_mut().for_each(|x| *x = -*x);
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    m.truncate(pivot_row);

    for &(pr, col) in &pivots {
        let p = m[pr][col];
        for r in 0..pr {
            let q = Integer::div_floor(&m[r][col], &p);
            if q != 0 {
                let (head, tail) = m.split_at_mut(pr);
                axpy(&mut head[r], -q, &tail[0]);
            }
        }
    }
    m
}

fn axpy(target: &mut [i64], factor: i64, source: &[i64]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t = t
            .checked_add(factor.checked_mul(*s).expect("integer overflow in lattice reduction"))
            .expect("integer overflow in lattice reduction");
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn bareiss_determinant(matrix: &[Vec<i64>]) -> i64 {
    let n = matrix.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][col] != 0 {
                let (f, g) = (a[i][col], a[r][col]);
                for j in col..ncols {
                    a[i][j] = a[i][j] * g - a[r][j] * f;
                }
                let gcd = a[i].iter().fold(0i128, |acc, &x| acc.gcd(&x));
                if gcd > 1 {
                    a[i].iter_mut().for_each(|x| *x /= gcd);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Solves the square system `a · x = b` by Gauss–Jordan elimination over
/// the rationals. Returns `None` if `a` is singular.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        m[col].iter_mut().for_each(|x| *x *= inv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Coefficients expressing `target` in terms of the rows of a Hermite
/// normal form `hnf`, or `None` if `target` is not in their rational span.
pub fn hnf_coordinates(hnf: &[Vec<i64>], target: &[Rational]) -> Option<Vec<Rational>> {
    let mut residual = target.to_vec();
    let mut coeffs = vec![Rational::zero(); hnf.len()];
    for (k, row) in hnf.iter().enumerate() {
        let col = row.iter().position(|&x| x != 0)?;
        // earlier pivots are already cleared, so this column determines coeff k
        let c = residual[col] / Rational::from_integer(row[col]);
        for (r, &x) in residual.iter_mut().zip(row) {
            *r -= c * Rational::from_integer(x);
        }
        coeffs[k] = c;
    }
    residual.iter().all(Zero::is_zero).then_some(coeffs)
}

pub fn gcd_all(values: impl IntoIterator<Item = i64>) -> i64 {
    values.into_iter().fold(0, |acc, x| acc.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det_by_permutations(m: &[Vec<i64>]) -> i64 {
        use itertools::Itertools;
        let n = m.len();
        (0..n)
            .permutations(n)
            .map(|p| {
                let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                sign * (0..n).map(|i| m[i][p[i]]).product::<i64>()
            })
            .sum()
    }

    #[test]
    fn hnf_of_fs4_generators() {
        let rows = vec![vec![-2, 2, 0, 0], vec![-1, 1, 1, -1], vec![-1, 1, -1, 1]];
        assert_eq!(hermite_normal_form(&rows), vec![vec![1, -1, 1, -1], vec![0, 0, 2, -2]]);
    }

    #[test]
    fn hnf_drops_zero_rows() {
        assert!(hermite_normal_form(&[vec![0, 0], vec![0, 0]]).is_empty());
        assert!(hermite_normal_form(&[]).is_empty());
    }

    #[test]
    fn hnf_coordinates_detects_non_members() {
        let hnf = vec![vec![1, -1, -1, 1], vec![0, 0, 2, -2]];
        let r = |x: i64| Rational::from_integer(x);
        let c = hnf_coordinates(&hnf, &[r(1), r(-1), r(1), r(-1)]).unwrap();
        assert_eq!(c, vec![r(1), r(1)]);
        let half = hnf_coordinates(&hnf, &[r(0), r(0), r(1), r(-1)]).unwrap();
        assert_eq!(half, vec![r(0), Rational::new(1, 2)]);
        assert!(hnf_coordinates(&hnf, &[r(1), r(0), r(0), r(0)]).is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_permutation_expansion(entries in proptest::collection::vec(-4i64..=4, 16), n in 0usize..=4) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            prop_assert_eq!(bareiss_determinant(&m), det_by_permutations(&m));
        }

        #[test]
        fn hnf_preserves_lattice(entries in proptest::collection::vec(-5i64..=5, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
            let h = hermite_normal_form(&rows);
            prop_assert_eq!(h.len(), rank(&rows));
            // every generator is an integral combination of the HNF rows
            for row in &rows {
                let target: Vec<Rational> = row.iter().map(|&x| Rational::from_integer(x)).collect();
                let c = hnf_coordinates(&h, &target).expect("generator in span");
                prop_assert!(c.iter().all(is_integral));
            }
            // idempotent
            prop_assert_eq!(hermite_normal_form(&h), h.clone());
        }
    }
}
