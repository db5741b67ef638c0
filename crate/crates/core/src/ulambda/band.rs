use super::uelem::{UElement, UParams};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, Var};
use num::{One, Zero};
use std::collections::BTreeMap;

/// The value of `ef` on each row of a band algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// Mat_∞: `ef = fe = 1`
    Unit,
    /// Mat_{∞,s}: `(ef)_i = T_1(s - 2i)`
    Shifted { par: UParams, s: Rational },
    /// Mat_{∞,(i)}: `(ef)_i = 0`, all other rows 1
    Degenerate(i64),
}

/// Band matrices on the index window `[-w, w]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandAlgebra {
    pub window: i64,
    pub weights: Weights,
}

/// Finite combination of `1_i X^k` (X = e for k > 0, f for k < 0), keyed by
/// (row i, signed shift k). The column is `i + k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BandElement {
    pub terms: BTreeMap<(i64, i64), Rational>,
}

impl BandElement {
    pub fn zero() -> Self {
        BandElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, row: i64, shift: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((row, shift)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(row, shift));
        }
    }

    pub fn get(&self, row: i64, shift: i64) -> Rational {
        self.terms.get(&(row, shift)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &BandElement) -> BandElement {
        let mut r = self.clone();
        for ((i, k), c) in &o.terms {
            r.add_term(*i, *k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &BandElement) -> BandElement {
        let mut r = self.clone();
        for ((i, k), c) in &o.terms {
            r.add_term(*i, *k, -c.clone());
        }
        r
    }

    /// Entries with row and column inside `[-w, w]`.
    pub fn restrict(&self, w: i64) -> BandElement {
        BandElement {
            terms: self
                .terms
                .iter()
                .filter(|((i, k), _)| i.abs() <= w && (i + k).abs() <= w)
                .map(|(key, c)| (*key, c.clone()))
                .collect(),
        }
    }

    pub fn max_shift(&self) -> i64 {
        self.terms.keys().map(|(_, k)| k.abs()).max().unwrap_or(0)
    }
}

impl BandAlgebra {
    pub fn new(window: i64, weights: Weights) -> Self {
        BandAlgebra { window, weights }
    }

    pub fn weight(&self, i: i64) -> Rational {
        match &self.weights {
            Weights::Unit => Rational::one(),
            Weights::Shifted { par, s } => {
                let x = Poly::constant(s - Rational::from_integer((2 * i).into()));
                par.t1_at(&x).constant_value().expect("rational parameters")
            }
            Weights::Degenerate(d) => {
                if i == *d {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            }
        }
    }

    fn in_window(&self, i: i64) -> bool {
        i.abs() <= self.window
    }

    pub fn elem(&self, row: i64, shift: i64, c: Rational) -> Result<BandElement> {
        if !self.in_window(row) || !self.in_window(row + shift) {
            return Err(Error::WindowExhausted);
        }
        let mut e = BandElement::zero();
        e.add_term(row, shift, c);
        Ok(e)
    }

    fn prod_weights(&self, from: i64, n: i64, step: i64) -> Rational {
        let mut acc = Rational::one();
        for l in 0..n {
            acc *= self.weight(from + step * l);
        }
        acc
    }

    /// Scalar produced by `1_i X^k · 1_{i+k} Y^m`.
    fn join(&self, i: i64, k: i64, m: i64) -> Rational {
        if k >= 0 && m >= 0 || k <= 0 && m <= 0 {
            return Rational::one();
        }
        if k > 0 {
            let mm = -m;
            if k >= mm {
                self.prod_weights(i + k - mm, mm, 1)
            } else {
                self.prod_weights(i, k, 1)
            }
        } else {
            let kk = -k;
            if kk >= m {
                self.prod_weights(i - (kk - m) - 1, m, -1)
            } else {
                self.prod_weights(i - 1, kk, -1)
            }
        }
    }

    pub fn mul(&self, a: &BandElement, b: &BandElement) -> BandElement {
        let mut out = BandElement::zero();
        for ((i, k), x) in &a.terms {
            for ((j, m), y) in b.terms.range((i + k, i64::MIN)..=(i + k, i64::MAX)) {
                debug_assert_eq!(*j, i + k);
                let w = self.join(*i, *k, *m);
                if !w.is_zero() {
                    out.add_term(*i, k + m, x * y * w);
                }
            }
        }
        out
    }

    pub fn bracket(&self, a: &BandElement, b: &BandElement) -> BandElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// `e_l = 1_l e`
    pub fn e_at(&self, l: i64) -> Result<BandElement> {
        self.elem(l, 1, Rational::one())
    }

    /// `f_l = 1_{l+1} f`
    pub fn f_at(&self, l: i64) -> Result<BandElement> {
        self.elem(l + 1, -1, Rational::one())
    }
}

fn rational_at(p: &Poly, x: &Rational) -> Result<Rational> {
    p.eval(Var::H, x)
        .constant_value()
        .ok_or_else(|| Error::Unbound(format!("{:?}", p.vars())))
}

fn point(s: &Rational, i: i64) -> Rational {
    s - Rational::from_integer((2 * i).into())
}

fn check_support(x: &UElement, window: i64) -> Result<()> {
    let reach = x.parts().keys().map(|k| k.abs()).max().unwrap_or(0);
    if reach > 2 * window {
        return Err(Error::WindowExhausted);
    }
    Ok(())
}

/// φ_s: U_λ → Mat_{∞,s}, `p(h) ↦ (p(s - 2i))_i`, e and f kept.
pub fn phi_s(par: &UParams, x: &UElement, s: &Rational, window: i64) -> Result<(BandAlgebra, BandElement)> {
    check_support(x, window)?;
    let alg = BandAlgebra::new(window, Weights::Shifted { par: par.clone(), s: s.clone() });
    let mut out = BandElement::zero();
    for (&k, p) in x.parts() {
        for i in -window..=window {
            if (i + k).abs() > window {
                continue;
            }
            out.add_term(i, k, rational_at(p, &point(s, i + k))?);
        }
    }
    Ok((alg, out))
}

/// Ψ_s: Mat_{∞,s} → Mat_∞, `e ↦ (T_1(s - 2i))_i · e`.
pub fn psi_s(alg: &BandAlgebra, x: &BandElement) -> BandElement {
    let mut out = BandElement::zero();
    for ((i, k), c) in &x.terms {
        let w = if *k > 0 { alg.prod_weights(*i, *k, 1) } else { Rational::one() };
        out.add_term(*i, *k, c * w);
    }
    out
}

/// Γ_s = Ψ_s φ_s written out directly as a matrix in Mat_∞.
pub fn gamma_s(par: &UParams, x: &UElement, s: &Rational, window: i64) -> Result<BandElement> {
    check_support(x, window)?;
    let t1 = |i: i64| -> Result<Rational> {
        par.t1_at(&Poly::constant(point(s, i)))
            .constant_value()
            .ok_or_else(|| Error::Unbound("lambda".into()))
    };
    let mut out = BandElement::zero();
    for (&k, p) in x.parts() {
        for i in -window..=window {
            if (i + k).abs() > window {
                continue;
            }
            let mut c = rational_at(p, &point(s, i + k))?;
            for l in 0..k.max(0) {
                c *= t1(i + l)?;
            }
            out.add_term(i, k, c);
        }
    }
    Ok(out)
}

/// Standard cocycle of gl_∞ paired against the vacuum split at 0|1.
pub fn vacuum_cocycle(a: &BandElement, b: &BandElement) -> Rational {
    let mut acc = Rational::zero();
    for ((p, k), x) in &a.terms {
        let qq = p + k;
        let sign = if *p <= 0 && qq >= 1 {
            1
        } else if qq <= 0 && *p >= 1 {
            -1
        } else {
            continue;
        };
        let y = b.get(qq, -k);
        if !y.is_zero() {
            acc += x * y * Rational::from_integer(sign.into());
        }
    }
    acc
}

/// Outcome of the nested-bracket singular vector test.
#[derive(Clone, Debug)]
pub struct SingularCheck {
    pub i: i64,
    pub degenerate: bool,
    pub x: BandElement,
    /// x is nonzero and lies in the creation block (row >= 1, column <= 0)
    pub x_creates: bool,
    /// raising indices j with `e_j x v != 0`
    pub failures: Vec<i64>,
}

impl SingularCheck {
    pub fn singular(&self) -> bool {
        self.x_creates && self.failures.is_empty()
    }
}

/// Builds `x = [...[[f_0, f_1], f_2], ..., f_i]` (or the mirror for i < 0) in
/// Mat_{∞,(i)} and checks `e_j x v = 0` for every raising in the window.
/// With `degenerate = false` the same test runs in Mat_∞, where it must fail.
pub fn degenerate_singular_check(i: i64, window: i64, degenerate: bool) -> Result<SingularCheck> {
    if i.abs() + 2 > window {
        return Err(Error::WindowExhausted);
    }
    let alg = BandAlgebra::new(window, if degenerate { Weights::Degenerate(i) } else { Weights::Unit });
    let (from, to) = if i >= 0 { (0, i) } else { (i, 0) };
    let mut x = alg.f_at(from)?;
    for l in from + 1..=to {
        x = alg.bracket(&x, &alg.f_at(l)?);
    }
    let creates = |e: &BandElement| e.terms.keys().any(|(r, k)| *r >= 1 && r + k <= 0);
    let x_creates = !x.is_zero() && x.terms.keys().all(|(r, k)| *r >= 1 && r + k <= 0);
    let mut failures = Vec::new();
    for j in -window..window {
        let ej = alg.e_at(j)?;
        let br = alg.bracket(&ej, &x);
        // diagonal entries act by the zero highest weight; the central part
        // comes from the cocycle, which is a coboundary in the degenerate case
        let central = if degenerate { Rational::zero() } else { vacuum_cocycle(&ej, &x) };
        if creates(&br) || !central.is_zero() {
            failures.push(j);
        }
    }
    Ok(SingularCheck { i, degenerate, x, x_creates, failures })
}
