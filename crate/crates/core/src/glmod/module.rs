use crate::error::{Error, Result};
use crate::exact::{qi, Poly, Rational, Var};
use crate::young::Diagram;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector over the lowering variables `y_ij`, indexed `(i-1)*n + (j-1)`.
pub type YMono = Vec<u8>;

/// Matrix unit `E_ab` of gl(2n), 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct E(pub usize, pub usize);

/// Linear combination of matrix units.
pub type GlElem = Vec<(E, Rational)>;

pub fn bracket(x: E, y: E) -> GlElem {
    let mut out = Vec::new();
    if x.1 == y.0 {
        out.push((E(x.0, y.1), Rational::one()));
    }
    if y.1 == x.0 {
        out.push((E(y.0, x.1), -Rational::one()));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Lower(usize),
    Upper(usize),
    Levi,
}

/// Vector `m v` of the induced module, `m` a polynomial in the `y_ij` with
/// coefficients in Q[mu].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModElem {
    pub terms: BTreeMap<YMono, Poly>,
}

impl ModElem {
    pub fn zero() -> Self {
        ModElem::default()
    }

    pub fn monomial(m: YMono, c: Poly) -> Self {
        let mut e = ModElem::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: YMono, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &ModElem) -> ModElem {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &ModElem) -> ModElem {
        self.add(&o.scale(&Poly::int(-1)))
    }

    pub fn scale(&self, c: &Poly) -> ModElem {
        let mut r = ModElem::zero();
        for (m, x) in &self.terms {
            r.add_term(m.clone(), x * c);
        }
        r
    }

    /// Product in the polynomial algebra S(A_-).
    pub fn mul(&self, o: &ModElem) -> ModElem {
        let mut r = ModElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: YMono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32, nvars: usize) -> ModElem {
        let mut r = ModElem::monomial(vec![0; nvars], Poly::one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval_mu(&self, mu: &Rational) -> ModElem {
        let mut r = ModElem::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.eval(Var::MU, mu));
        }
        r
    }
}

impl fmt::Display for ModElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let n = (self.terms.keys().next().unwrap().len() as f64).sqrt() as usize;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = mono_name(m, n);
                match c.constant_value() {
                    Some(v) if v == Rational::one() => mono,
                    Some(v) if v == -Rational::one() => format!("-{mono}"),
                    _ => format!("({c})*{mono}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

pub fn mono_name(m: &YMono, n: usize) -> String {
    let mut parts = Vec::new();
    for (idx, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = format!("y{}{}", idx / n + 1, idx % n + 1);
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// gl(2n) with the maximal parabolic gl_n + A_+ + gl_n and the character
/// `chi_mu`. `trace_shift` adds a multiple of the trace to the character.
#[derive(Clone, Debug)]
pub struct GlContext {
    n: usize,
    trace_shift: Rational,
    /// `[[x_p, y_q], y_r]` as (q, r, coefficient, s) meaning `c * y_s`
    second: Vec<Vec<(usize, usize, Rational, usize)>>,
}

impl GlContext {
    pub fn new(n: usize) -> Self {
        GlContext::with_trace_shift(n, Rational::zero())
    }

    pub fn with_trace_shift(n: usize, trace_shift: Rational) -> Self {
        assert!(n >= 1, "n must be positive");
        let mut ctx = GlContext { n, trace_shift, second: vec![] };
        let nv = n * n;
        let mut second = vec![Vec::new(); nv];
        for (p, row) in second.iter_mut().enumerate() {
            for q in 0..nv {
                for (l, c) in bracket(ctx.upper_unit(p), ctx.lower_unit(q)) {
                    for r in 0..nv {
                        for (s, d) in bracket(l, ctx.lower_unit(r)) {
                            match ctx.classify(s) {
                                Part::Lower(si) => row.push((q, r, &c * &d, si)),
                                _ => unreachable!("[[A+,A-],A-] lies in A-"),
                            }
                        }
                    }
                }
            }
        }
        ctx.second = second;
        ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n * self.n
    }

    pub fn var(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    pub fn var_ij(&self, idx: usize) -> (usize, usize) {
        (idx / self.n + 1, idx % self.n + 1)
    }

    /// Grading of `y_ij`, equal to `i + j - 1`.
    pub fn deg(&self, idx: usize) -> usize {
        let (i, j) = self.var_ij(idx);
        i + j - 1
    }

    /// `y_ij = E_{n+i, n+1-j}`
    pub fn lower_unit(&self, idx: usize) -> E {
        let (i, j) = self.var_ij(idx);
        E(self.n + i, self.n + 1 - j)
    }

    /// `x_ij = E_{n+1-j, n+i}`, the transpose of `y_ij`.
    pub fn upper_unit(&self, idx: usize) -> E {
        let (i, j) = self.var_ij(idx);
        E(self.n + 1 - j, self.n + i)
    }

    pub fn classify(&self, e: E) -> Part {
        let n = self.n;
        match (e.0 > n, e.1 > n) {
            (true, false) => Part::Lower(self.var(e.0 - n, n + 1 - e.1)),
            (false, true) => Part::Upper(self.var(e.1 - n, n + 1 - e.0)),
            _ => Part::Levi,
        }
    }

    pub fn check_unit(&self, e: E) -> Result<()> {
        let m = 2 * self.n;
        if e.0 == 0 || e.1 == 0 || e.0 > m || e.1 > m {
            return Err(Error::Invalid(format!("E_{},{} out of range for gl({m})", e.0, e.1)));
        }
        Ok(())
    }

    /// `chi_mu(E_ab)`: `mu` on `E_mm` for `m <= n`, zero otherwise, plus the trace shift.
    pub fn chi(&self, e: E) -> Poly {
        if e.0 != e.1 {
            return Poly::zero();
        }
        let base = if e.0 <= self.n { Poly::var(Var::MU) } else { Poly::zero() };
        base + Poly::constant(self.trace_shift.clone())
    }

    pub fn level(&self, m: &YMono) -> usize {
        m.iter().enumerate().map(|(i, &e)| e as usize * self.deg(i)).sum()
    }

    /// gl_n + gl_n weight: multiplicities of row indices then column indices.
    pub fn weight(&self, m: &YMono) -> Vec<u32> {
        let mut w = vec![0u32; 2 * self.n];
        for (idx, &e) in m.iter().enumerate() {
            let (i, j) = self.var_ij(idx);
            w[i - 1] += e as u32;
            w[self.n + j - 1] += e as u32;
        }
        w
    }

    /// Monomials of the given level, descending lexicographic.
    pub fn basis(&self, level: usize) -> Vec<YMono> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.nvars()];
        self.fill(0, level, &mut cur, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    fn fill(&self, idx: usize, rest: usize, cur: &mut YMono, out: &mut Vec<YMono>) {
        if idx == self.nvars() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.deg(idx);
        for e in 0..=rest / d {
            cur[idx] = e as u8;
            self.fill(idx + 1, rest - e * d, cur, out);
        }
        cur[idx] = 0;
    }

    pub fn one(&self) -> ModElem {
        ModElem::monomial(vec![0; self.nvars()], Poly::one())
    }

    pub fn y(&self, i: usize, j: usize) -> ModElem {
        let mut m = vec![0; self.nvars()];
        m[self.var(i, j)] = 1;
        ModElem::monomial(m, Poly::one())
    }

    /// `det (y_ij)_{i,j in rows}` by Laplace expansion along the first row.
    fn minor(&self, rows: &[usize], cols: &[usize]) -> ModElem {
        if rows.is_empty() {
            return self.one();
        }
        let mut out = ModElem::zero();
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = self.minor(&rows[1..], &rest);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out = out.add(&self.y(rows[0], c).mul(&sub).scale(&Poly::int(sign)));
        }
        out
    }

    /// `Det_k = (-1)^(k(k-1)/2) det(y_ij)_{i,j <= k}`, so `Det_2 = y12 y21 - y11 y22`.
    pub fn det_element(&self, k: usize) -> Result<ModElem> {
        if k == 0 || k > self.n {
            return Err(Error::Invalid(format!("Det_{k} needs 1 <= k <= n = {}", self.n)));
        }
        let idx: Vec<usize> = (1..=k).collect();
        let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
        Ok(self.minor(&idx, &idx).scale(&Poly::int(sign)))
    }

    /// `(-1)^((k-1)(k-2)/2) det(y_ij)_{i,j = 2..k}`
    pub fn det_tilde(&self, k: usize) -> Result<ModElem> {
        if k < 1 || k > self.n {
            return Err(Error::Invalid(format!("k = {k} out of range")));
        }
        let idx: Vec<usize> = (2..=k).collect();
        let sign = if ((k - 1) * (k.saturating_sub(2)) / 2) % 2 == 0 { 1 } else { -1 };
        Ok(self.minor(&idx, &idx).scale(&Poly::int(sign)))
    }

    /// `prod Det_i^(l_i)`
    pub fn diagram_element(&self, d: &Diagram) -> Result<ModElem> {
        let mut out = self.one();
        for (&i, &l) in d.blocks() {
            out = out.mul(&self.det_element(i as usize)?.pow(l, self.nvars()));
        }
        Ok(out)
    }

    fn lower_combo(&self, g: &GlElem) -> Vec<(usize, Rational)> {
        g.iter()
            .map(|(e, c)| match self.classify(*e) {
                Part::Lower(i) => (i, c.clone()),
                _ => unreachable!("expected an A- element"),
            })
            .collect()
    }

    /// Derivation `ad_X` for `X` in the Levi part.
    fn ad_levi(&self, x: E, v: &ModElem) -> ModElem {
        let images: Vec<Vec<(usize, Rational)>> = (0..self.nvars())
            .map(|q| self.lower_combo(&bracket(x, self.lower_unit(q))))
            .collect();
        let mut out = ModElem::zero();
        for (m, c) in &v.terms {
            for (q, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                for (s, d) in &images[q] {
                    let mut k = m.clone();
                    k[q] -= 1;
                    k[*s] += 1;
                    out.add_term(k, c.scale(&(d * qi(e as i64))));
                }
            }
        }
        out
    }

    /// `x_p` acting as `mu d/dy_p + 1/2 sum [[x_p,y_q],y_r] d/dy_q d/dy_r`.
    pub fn apply_upper(&self, p: usize, v: &ModElem) -> ModElem {
        let mut out = ModElem::zero();
        let chi = self.chi(E(self.upper_unit(p).0, self.upper_unit(p).0))
            - self.chi(E(self.lower_unit(p).0, self.lower_unit(p).0));
        let half = Rational::new(1.into(), 2.into());
        for (m, c) in &v.terms {
            if m[p] > 0 {
                let mut k = m.clone();
                k[p] -= 1;
                out.add_term(k, &(c * &chi) * &Poly::int(m[p] as i64));
            }
            for (q, r, d, s) in &self.second[p] {
                let mult = if q == r {
                    (m[*q] as i64) * (m[*q] as i64 - 1)
                } else {
                    (m[*q] as i64) * (m[*r] as i64)
                };
                if mult == 0 {
                    continue;
                }
                let mut k = m.clone();
                k[*q] -= 1;
                k[*r] -= 1;
                k[*s] += 1;
                out.add_term(k, c.scale(&(d * &half * qi(mult))));
            }
        }
        out
    }

    /// Action of `E_ab` on `v`.
    pub fn act(&self, x: E, v: &ModElem) -> Result<ModElem> {
        self.check_unit(x)?;
        Ok(match self.classify(x) {
            Part::Lower(p) => {
                let mut m = vec![0; self.nvars()];
                m[p] = 1;
                v.mul(&ModElem::monomial(m, Poly::one()))
            }
            Part::Upper(p) => self.apply_upper(p, v),
            Part::Levi => self.ad_levi(x, v).add(&v.scale(&self.chi(x))),
        })
    }

    /// Action computed from `X (y m) v = [X,y] m v + y (X m v)` with the
    /// highest-weight base cases; slow, used as a cross-check.
    pub fn act_recursive(&self, x: E, v: &ModElem) -> Result<ModElem> {
        self.check_unit(x)?;
        let mut out = ModElem::zero();
        for (m, c) in &v.terms {
            let mut factors = Vec::new();
            for (q, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    factors.push(q);
                }
            }
            out = out.add(&self.act_word(x, &factors).scale(c));
        }
        Ok(out)
    }

    fn act_word(&self, x: E, word: &[usize]) -> ModElem {
        let Some((&first, rest)) = word.split_first() else {
            return match self.classify(x) {
                Part::Lower(p) => {
                    let mut m = vec![0; self.nvars()];
                    m[p] = 1;
                    ModElem::monomial(m, Poly::one())
                }
                Part::Upper(_) => ModElem::zero(),
                Part::Levi => {
                    if x.0 == x.1 {
                        self.one().scale(&self.chi(x))
                    } else {
                        ModElem::zero()
                    }
                }
            };
        };
        let mut out = ModElem::zero();
        for (z, c) in bracket(x, self.lower_unit(first)) {
            out = out.add(&self.act_word(z, rest).scale(&Poly::constant(c)));
        }
        let tail = self.act_word(x, rest);
        let mut m = vec![0; self.nvars()];
        m[first] = 1;
        out.add(&tail.mul(&ModElem::monomial(m, Poly::one())))
    }

    /// Simple raising generators `E_{m,m+1}`.
    pub fn simple_raising(&self) -> Vec<E> {
        (1..2 * self.n).map(|m| E(m, m + 1)).collect()
    }

    /// Simple lowering generators of the two gl_n blocks.
    pub fn levi_lowering(&self) -> Vec<E> {
        (1..2 * self.n).filter(|&m| m != self.n).map(|m| E(m + 1, m)).collect()
    }

    /// Simple raising generators of the two gl_n blocks.
    pub fn levi_raising(&self) -> Vec<E> {
        (1..2 * self.n).filter(|&m| m != self.n).map(|m| E(m, m + 1)).collect()
    }

    /// True when every simple raising generator kills `v` at `mu = mu0`
    /// (identically in `mu` when `mu0` is `None`).
    pub fn is_singular(&self, v: &ModElem, mu0: Option<&Rational>) -> bool {
        let v = match mu0 {
            Some(a) => v.eval_mu(a),
            None => v.clone(),
        };
        self.simple_raising().into_iter().all(|x| {
            let w = self.act(x, &v).expect("simple raising generators are in range");
            match mu0 {
                Some(a) => w.eval_mu(a).is_zero(),
                None => w.is_zero(),
            }
        })
    }

    /// Contravariant pairing `<m1 v, m2 v>` with `tau(E_ab) = E_ba`.
    pub fn pair(&self, m1: &ModElem, m2: &ModElem) -> Poly {
        let mut total = Poly::zero();
        for (m, c) in &m1.terms {
            let mut cur = m2.clone();
            for (p, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    cur = self.apply_upper(p, &cur);
                }
            }
            total += &(c * &cur.terms.get(&vec![0; self.nvars()]).cloned().unwrap_or_default());
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_maps() {
        let ctx = GlContext::new(3);
        let p = ctx.var(2, 3);
        assert_eq!(ctx.deg(p), 4);
        assert_eq!(ctx.lower_unit(p), E(5, 1));
        assert_eq!(ctx.upper_unit(p), E(1, 5));
        assert_eq!(ctx.classify(E(5, 1)), Part::Lower(p));
        assert_eq!(ctx.classify(E(1, 5)), Part::Upper(p));
        assert_eq!(ctx.classify(E(3, 4)), Part::Upper(ctx.var(1, 1)));
        assert!(ctx.act(E(7, 1), &ctx.one()).is_err());
    }

    #[test]
    fn basis_counts() {
        let ctx = GlContext::new(2);
        assert_eq!(ctx.basis(1), vec![vec![1, 0, 0, 0]]);
        assert_eq!(ctx.basis(2), vec![vec![2, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        let ctx = GlContext::new(5);
        let counts: Vec<usize> = (0..=5).map(|l| ctx.basis(l).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 6, 13, 24]);
    }

    #[test]
    fn det_two_sign() {
        let ctx = GlContext::new(2);
        let d2 = ctx.det_element(2).unwrap();
        let expect = ctx.y(1, 2).mul(&ctx.y(2, 1)).sub(&ctx.y(1, 1).mul(&ctx.y(2, 2)));
        assert_eq!(d2, expect);
        assert_eq!(d2.to_string(), "y12*y21 - y11*y22");
        assert_eq!(ctx.det_element(1).unwrap(), ctx.y(1, 1));
        assert!(ctx.det_element(3).is_err());
        for k in 1..=2 {
            let d = ctx.det_element(k).unwrap();
            assert!(d.terms.keys().all(|m| ctx.level(m) == k * k));
        }
    }

    #[test]
    fn e0_on_y11() {
        let ctx = GlContext::new(2);
        let e0 = E(2, 3);
        assert_eq!(ctx.act(e0, &ctx.y(1, 1)).unwrap(), ctx.one().scale(&Poly::var(Var::MU)));
    }

    #[test]
    fn simple_levi_raising_is_vector_field() {
        // E_{n-1,n} acts as -sum_s y_s1 d/dy_s2
        let ctx = GlContext::new(3);
        let v = ctx.y(1, 2).mul(&ctx.y(2, 1)).add(&ctx.y(3, 2).mul(&ctx.y(1, 2)));
        let got = ctx.act(E(2, 3), &v).unwrap();
        let expect = ctx
            .y(1, 1)
            .mul(&ctx.y(2, 1))
            .add(&ctx.y(3, 1).mul(&ctx.y(1, 2)))
            .add(&ctx.y(3, 2).mul(&ctx.y(1, 1)))
            .scale(&Poly::int(-1));
        assert_eq!(got, expect);
    }

    #[test]
    fn recursive_action_agrees() {
        let ctx = GlContext::new(2);
        for level in 1..=3 {
            for m in ctx.basis(level) {
                let v = ModElem::monomial(m, Poly::one());
                for a in 1..=4 {
                    for b in 1..=4 {
                        assert_eq!(
                            ctx.act(E(a, b), &v).unwrap(),
                            ctx.act_recursive(E(a, b), &v).unwrap(),
                            "E_{a}{b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singular_examples() {
        let ctx = GlContext::new(3);
        let d2 = ctx.det_element(2).unwrap();
        assert!(ctx.is_singular(&d2, Some(&qi(-1))));
        assert!(!ctx.is_singular(&d2, Some(&qi(0))));
        let y3 = ctx.y(1, 1).pow(3, ctx.nvars());
        assert!(ctx.is_singular(&y3, Some(&qi(2))));
        assert!(!ctx.is_singular(&ctx.y(1, 1), Some(&qi(1))));
        assert!(ctx.is_singular(&ctx.y(1, 1), Some(&qi(0))));
    }
}
