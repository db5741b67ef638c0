use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};
use num::{One, Zero};

pub type Matrix<T> = Vec<Vec<T>>;

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NotSquare(n, row.len()));
        }
    }
    Ok(n)
}

/// Fraction-free determinant. Every intermediate division is exact.
pub fn bareiss_det(m: &[Vec<Poly>]) -> Result<Poly> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a = m.to_vec();
    let mut neg = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    neg = !neg;
                }
                None => return Ok(Poly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if neg { -d } else { d })
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}`.
pub fn kernel_q(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Rational::zero(); cols];
        x[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = -a[r][free].clone();
        }
        out.push(x);
    }
    out
}

/// Coefficients `c` with `sum c_i basis_i = v`, if `v` lies in the span.
pub fn solve_in_span(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let dim = v.len();
    // columns are basis vectors, augmented by v
    let mut a: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = a[r][k].clone();
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::super::rational::qi;
    use super::*;

    fn r(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|row| row.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn bareiss_needs_pivot_swap() {
        let m: Matrix<Poly> = vec![
            vec![Poly::zero(), Poly::int(1)],
            vec![Poly::int(1), Poly::zero()],
        ];
        assert_eq!(bareiss_det(&m).unwrap(), Poly::int(-1));
        assert!(bareiss_det(&[vec![Poly::one()], vec![Poly::one()]]).is_err());
        assert_eq!(bareiss_det(&[]).unwrap(), Poly::one());
    }

    #[test]
    fn rank_and_kernel() {
        let m = r(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_q(&m), 2);
        let k = kernel_q(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: Rational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn span_membership() {
        let b = r(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(solve_in_span(&b, &[qi(2), qi(3), qi(5)]), Some(vec![qi(2), qi(3)]));
        assert_eq!(solve_in_span(&b, &[qi(0), qi(0), qi(1)]), None);
    }
}
