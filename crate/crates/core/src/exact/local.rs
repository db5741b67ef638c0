use super::matrix::bareiss_det;
use super::poly::{Poly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};
use num::Zero;

pub fn t_valuation(p: &Poly) -> Option<u32> {
    p.valuation(Var::T)
}

/// Truncated power series in `t`, coefficient `k` at index `k`.
pub type TSeries = Vec<Rational>;

fn val(s: &TSeries) -> Option<usize> {
    s.iter().position(|c| !c.is_zero())
}

fn unit_inverse(u: &TSeries) -> TSeries {
    let n = u.len();
    let inv0 = u[0].recip();
    let mut out = vec![Rational::zero(); n];
    out[0] = inv0.clone();
    for k in 1..n {
        let mut acc = Rational::zero();
        for j in 1..=k {
            acc += &u[j] * &out[k - j];
        }
        out[k] = -acc * &inv0;
    }
    out
}

pub fn mul_trunc(a: &TSeries, b: &TSeries) -> TSeries {
    let n = a.len();
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += x * &b[j];
        }
    }
    out
}

pub fn to_series(p: &Poly, prec: usize) -> Result<TSeries> {
    let cs = p
        .to_univariate(Var::T)
        .ok_or_else(|| Error::Invalid("entries must be polynomials in t alone".into()))?;
    let mut s: TSeries = cs.into_iter().take(prec).collect();
    s.resize(prec, Rational::zero());
    Ok(s)
}

/// Local Smith form over Q[[t]] truncated at `t^prec`: `A V = U^-1 D`.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub prec: usize,
    /// (column, valuation) in pivot order
    pub pivots: Vec<(usize, u32)>,
    /// column transform, `v[row][col]`
    pub v: Vec<Vec<TSeries>>,
}

impl LocalSmith {
    pub fn valuations(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.pivots.iter().map(|p| p.1).collect();
        out.sort_unstable();
        out
    }

    /// Column `c` of the transform.
    pub fn column(&self, c: usize) -> Vec<TSeries> {
        self.v.iter().map(|row| row[c].clone()).collect()
    }
}

/// Smith elimination with minimal-valuation pivots. `extra` adds working
/// precision beyond the valuation of the determinant.
pub fn local_smith(m: &[Vec<Poly>], extra: usize) -> Result<LocalSmith> {
    let n = m.len();
    let det = bareiss_det(m)?;
    let d = t_valuation(&det).ok_or(Error::Invalid("degenerate matrix".into()))? as usize;
    let prec = d + 1 + extra;
    let mut a: Vec<Vec<TSeries>> = m
        .iter()
        .map(|row| row.iter().map(|p| to_series(p, prec)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut v: Vec<Vec<TSeries>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut s = vec![Rational::zero(); prec];
                    if r == c {
                        s[0] = Rational::from_integer(1.into());
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::with_capacity(n);
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    while !rows.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None;
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if let Some(x) = val(&a[r][c]) {
                    if best.map_or(true, |b| x < b.2) {
                        best = Some((ri, ci, x));
                    }
                }
            }
        }
        let Some((ri, ci, pv)) = best else {
            return Err(Error::Invalid("precision exhausted in local Smith form".into()));
        };
        let pr = rows.swap_remove(ri);
        let pc = cols.swap_remove(ci);
        let mut unit: TSeries = a[pr][pc][pv..].to_vec();
        unit.resize(prec, Rational::zero());
        let uinv = unit_inverse(&unit);
        let quotient = |s: &TSeries| {
            let mut f: TSeries = s[pv..].to_vec();
            f.resize(prec, Rational::zero());
            mul_trunc(&f, &uinv)
        };
        for &r in &rows {
            let f = quotient(&a[r][pc]);
            if f.iter().all(|c| c.is_zero()) {
                continue;
            }
            for &c in &cols {
                let sub = mul_trunc(&f, &a[pr][c]);
                for (x, y) in a[r][c].iter_mut().zip(sub) {
                    *x -= y;
                }
            }
        }
        for &c in &cols {
            let g = quotient(&a[pr][c]);
            if g.iter().all(|x| x.is_zero()) {
                continue;
            }
            for row in v.iter_mut() {
                let sub = mul_trunc(&g, &row[pc]);
                for (x, y) in row[c].iter_mut().zip(sub) {
                    *x -= y;
                }
            }
        }
        pivots.push((pc, pv as u32));
    }
    Ok(LocalSmith { prec, pivots, v })
}

/// Valuations in `t` of the invariant factors of a square matrix over Q[t],
/// localized at `t = 0`, ascending.
pub fn invariant_factor_t_valuations(m: &[Vec<Poly>]) -> Result<Vec<u32>> {
    Ok(local_smith(m, 0)?.valuations())
}
