//! Rational roots of univariate polynomials by Sturm isolation. Coefficient
//! vectors are ascending.

use super::rational::Rational;
use num::{One, Signed, Zero};

fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let f = &r[top] / lb;
        if !f.is_zero() {
            for (i, c) in b.iter().enumerate() {
                let d = &f * c;
                r[i + top - db] -= d;
            }
        }
        r.pop();
    }
    trim(r)
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
        .collect()
}

fn sturm_chain(p: &[Rational]) -> Vec<Vec<Rational>> {
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r: Vec<Rational> = rem(&chain[n - 2], &chain[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in chain {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_negative() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let fl = lo.floor();
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Distinct rational roots of a squarefree polynomial with rational coefficients.
pub fn squarefree_rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut p = trim(p.to_vec());
    let mut found = Vec::new();
    if p.len() < 2 {
        return found;
    }
    'restart: loop {
        if p.len() < 2 {
            break;
        }
        let n = p.len() - 1;
        if n == 1 {
            found.push(-&p[0] / &p[1]);
            break;
        }
        // integer-normalize to bound denominators of rational roots
        let mut l = num::BigInt::one();
        for c in &p {
            l = num::integer::lcm(l, c.denom().clone());
        }
        let ints: Vec<Rational> = p.iter().map(|c| c * Rational::from_integer(l.clone())).collect();
        let an = ints[n].abs();
        let tol = (&an * &an).recip();
        let lead = &p[n];
        let bound = Rational::one() + p[..n].iter().map(|c| (c / lead).abs()).max().unwrap_or_else(Rational::zero);
        let chain = sturm_chain(&p);
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let count = sign_changes(&chain, &a) - sign_changes(&chain, &b);
            if count == 0 {
                continue;
            }
            let cand = simplest_between(&a, &b);
            if eval(&p, &cand).is_zero() {
                found.push(cand.clone());
                p = deflate(&p, &cand);
                continue 'restart;
            }
            if count > 1 {
                let m = (&a + &b) / Rational::from_integer(2.into());
                stack.push((a, m.clone()));
                stack.push((m, b));
                continue;
            }
            // single root in (a, b]: bisect on sign until the width rules out
            // any rational with denominator dividing the leading coefficient
            let (mut a, mut b) = (a, b);
            if eval(&p, &b).is_zero() {
                found.push(b.clone());
                p = deflate(&p, &b);
                continue 'restart;
            }
            let sb = eval(&p, &b).is_positive();
            while &b - &a >= tol {
                let m = (&a + &b) / Rational::from_integer(2.into());
                let v = eval(&p, &m);
                if v.is_zero() {
                    found.push(m.clone());
                    p = deflate(&p, &m);
                    continue 'restart;
                }
                if v.is_positive() == sb {
                    b = m;
                } else {
                    a = m;
                }
                let cand = simplest_between(&a, &b);
                if eval(&p, &cand).is_zero() {
                    found.push(cand.clone());
                    p = deflate(&p, &cand);
                    continue 'restart;
                }
            }
        }
        break;
    }
    found.sort();
    found
}

fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    // synthetic division by (x - r)
    let n = p.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &carry * r;
        out[i] = carry.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn from_roots(rs: &[Rational]) -> Vec<Rational> {
        let mut p = vec![qi(1)];
        for r in rs {
            let mut next = vec![qi(0); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            p = next;
        }
        p
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&q(1, 3), &q(1, 2)), q(1, 2));
        assert_eq!(simplest_between(&q(-7, 3), &q(-2, 1)), qi(-2));
        assert_eq!(simplest_between(&q(3, 10), &q(4, 10)), q(1, 3));
    }

    #[test]
    fn finds_roots_with_large_denominators() {
        let rs = vec![q(275, 441), q(-1, 3), qi(4), q(550, 441), q(123456789, 987654321)];
        let mut p = from_roots(&rs);
        // an irreducible quadratic factor
        let mut with_quad = vec![qi(0); p.len() + 2];
        for (i, c) in p.iter().enumerate() {
            with_quad[i] += c * qi(2);
            with_quad[i + 2] += c;
        }
        p = with_quad;
        let mut expect = rs.clone();
        expect.sort();
        assert_eq!(squarefree_rational_roots(&p), expect);
    }
}
