//! Dense exact linear algebra over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Row-major matrix of rationals.
pub type Matrix = Vec<Vec<Rational>>;

/// Solve `m · x = b` for a possibly overdetermined consistent system.
///
/// Returns `None` if the system is inconsistent or the solution is not
/// unique.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = m.len();
    if rows == 0 {
        return None;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][c].is_zero()) else {
            return None;
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][c].recip();
        for v in a[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in c..=cols {
                    let sub = &f * &a[pivot_row][k];
                    a[r][k] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    if a[cols..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| a[i][cols].clone()).collect())
}

/// Inverse of a square matrix.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in c..2 * n {
                    let sub = &f * &a[c][k];
                    a[r][k] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for r in c + 1..n {
            if !a[r][c].is_zero() {
                let f = &a[r][c] * &inv;
                for k in c..n {
                    let sub = &f * &a[c][k];
                    a[r][k] -= sub;
                }
            }
        }
    }
    det
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn transpose(m: &[Vec<Rational>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Absolute value of the determinant of the lattice spanned by integer rows
/// of length `n`, i.e. its covolume in `Z^n`; zero if the rows do not have
/// full rank.
pub fn lattice_det(rows: &[Vec<BigInt>], n: usize) -> BigInt {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let mut det = BigInt::one();
    let mut top = 0;
    for c in 0..n {
        // Euclid on column c among rows top..
        loop {
            let nonzero: Vec<usize> = (top..a.len()).filter(|&r| !a[r][c].is_zero()).collect();
            if nonzero.is_empty() {
                return BigInt::zero();
            }
            let p = *nonzero.iter().min_by_key(|&&r| a[r][c].abs()).unwrap();
            a.swap(top, p);
            if nonzero.len() == 1 {
                break;
            }
            for r in top + 1..a.len() {
                if !a[r][c].is_zero() {
                    let q = a[r][c].div_floor(&a[top][c]);
                    for k in c..n {
                        let sub = &q * &a[top][k];
                        a[r][k] -= sub;
                    }
                }
            }
        }
        det *= a[top][c].abs();
        top += 1;
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn solve_square_and_overdetermined() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[rat(5), rat(10)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        let b = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve(&b, &[rat(2), rat(3), rat(5)]), Some(vec![rat(2), rat(3)]));
        assert_eq!(solve(&b, &[rat(2), rat(3), rat(6)]), None);
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[1, 2, 0], &[0, 1, 4], &[5, 6, 0]]);
        assert_eq!(determinant(&a), rat(1 * (0 - 24) - 2 * (0 - 20)));
        let inv = inverse(&a).unwrap();
        let id: Vec<Vec<Rational>> = (0..3)
            .map(|i| mat_vec(&a, &transpose(&inv)[i]))
            .collect();
        assert_eq!(id, m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn lattice_covolume() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        // 2Z x 3Z generated redundantly
        let rows = vec![b(&[2, 0]), b(&[0, 3]), b(&[4, 6]), b(&[2, 3])];
        assert_eq!(lattice_det(&rows, 2), BigInt::from(6));
        assert_eq!(lattice_det(&[b(&[1, 1]), b(&[2, 2])], 2), BigInt::zero());
        assert_eq!(lattice_det(&[b(&[3, 1]), b(&[1, 2])], 2), BigInt::from(5));
    }
}
