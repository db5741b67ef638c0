use super::rational::{fmt_rational, parse_rational, qi, Rational};
use super::roots::squarefree_rational_roots;
use crate::error::{Error, Result};
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub const NSYM: usize = 12;

/// Fixed symbol table. The order is the variable order used by the monomial
/// ordering: earlier symbols dominate.
pub const SYMBOLS: [&str; NSYM] = [
    "mu", "t", "a", "s", "h", "lambda", "beta", "chi", "chi1", "x", "y", "z",
];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub const MU: Var = Var(0);
    pub const T: Var = Var(1);
    pub const A: Var = Var(2);
    pub const S: Var = Var(3);
    pub const H: Var = Var(4);
    pub const LAMBDA: Var = Var(5);
    pub const BETA: Var = Var(6);
    pub const CHI: Var = Var(7);
    pub const CHI1: Var = Var(8);
    pub const X: Var = Var(9);
    pub const Y: Var = Var(10);
    pub const Z: Var = Var(11);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        SYMBOLS[self.index()]
    }

    pub fn parse(name: &str) -> Result<Var> {
        SYMBOLS
            .iter()
            .position(|s| *s == name)
            .map(|i| Var(i as u8))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over the symbol table, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub [u16; NSYM]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; NSYM])
    }

    pub fn var(v: Var, e: u16) -> Self {
        let mut m = Mono::one();
        m.0[v.index()] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..NSYM {
            r.0[i] += o.0[i];
        }
        r
    }

    pub fn divides(&self, o: &Mono) -> bool {
        (0..NSYM).all(|i| self.0[i] <= o.0[i])
    }

    /// `self / o`; caller checks divisibility.
    pub fn div(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..NSYM {
            r.0[i] -= o.0[i];
        }
        r
    }

    fn without(&self, v: Var) -> Mono {
        let mut r = *self;
        r.0[v.index()] = 0;
        r
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(SYMBOLS[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial with rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Mono::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(qi(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Mono::var(v, 1), Rational::one())
    }

    pub fn term(m: Mono, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// `v - c`
    pub fn linear(v: Var, c: &Rational) -> Self {
        Poly::var(v) - Poly::constant(c.clone())
    }

    pub fn from_univariate(v: Var, coeffs: &[Rational]) -> Self {
        let mut p = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            p.add_term(Mono::var(v, e as u16), c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.const_term())
        } else {
            None
        }
    }

    pub fn const_term(&self) -> Rational {
        self.terms.get(&Mono::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v) as u32).max()
    }

    pub fn vars(&self) -> Vec<Var> {
        (0..NSYM)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .map(|i| Var(i as u8))
            .collect()
    }

    pub fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Mono, c: &Rational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes a rational value for `v`.
    pub fn eval(&self, v: Var, val: &Rational) -> Poly {
        let mut pows: Vec<Rational> = vec![Rational::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while pows.len() <= e {
                let next = pows.last().unwrap() * val;
                pows.push(next);
            }
            out.add_term(m.without(v), c * &pows[e]);
        }
        out
    }

    /// Evaluates with every occurring variable bound.
    pub fn eval_all(&self, binding: &[(Var, Rational)]) -> Result<Rational> {
        let mut p = self.clone();
        for (v, x) in binding {
            p = p.eval(*v, x);
        }
        match p.constant_value() {
            Some(c) => Ok(c),
            None => Err(Error::Unbound(p.vars()[0].name().to_string())),
        }
    }

    /// Substitutes the polynomial `val` for `v`.
    pub fn subst(&self, v: Var, val: &Poly) -> Poly {
        let mut pows: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while pows.len() <= e {
                let next = pows.last().unwrap() * val;
                pows.push(next);
            }
            out += &pows[e].mul_term(&m.without(v), c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                let mut k = *m;
                k.0[v.index()] -= 1;
                out.add_term(k, c * qi(e as i64));
            }
        }
        out
    }

    /// Coefficients of powers of `v`, each a polynomial in the other symbols.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].add_term(m.without(v), c.clone());
        }
        out
    }

    /// Rational coefficient vector when `v` is the only symbol.
    pub fn to_univariate(&self, v: Var) -> Option<Vec<Rational>> {
        let cs = self.coeffs_in(v);
        cs.iter().map(|c| c.constant_value()).collect()
    }

    /// Exact division by leading terms; fails when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (dm, dc) = match d.leading() {
            Some((m, c)) => (*m, c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        if d.len() == 1 {
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return Err(Error::InexactDivision);
                }
                out.insert(m.div(&dm), c / &dc);
            }
            return Ok(Poly { terms: out });
        }
        let mut r = self.clone();
        let mut quo = Poly::zero();
        while let Some((m, c)) = r.leading() {
            if !dm.divides(m) {
                return Err(Error::InexactDivision);
            }
            let qm = m.div(&dm);
            let qc = c / &dc;
            r -= &d.mul_term(&qm, &qc);
            quo.add_term(qm, qc);
        }
        Ok(quo)
    }

    /// Division by a polynomial whose leading coefficient in `v` is a nonzero
    /// rational. Returns (quotient, remainder) with deg_v(remainder) < deg_v(d).
    pub fn divrem_in(&self, d: &Poly, v: Var) -> Result<(Poly, Poly)> {
        let dc = d.coeffs_in(v);
        let dd = dc.len() - 1;
        let lc = dc[dd]
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or(Error::InexactDivision)?;
        let inv = lc.recip();
        let mut rc = self.coeffs_in(v);
        let mut quo = Poly::zero();
        while rc.len() > dd && !rc.is_empty() {
            let top = rc.len() - 1;
            let lead = rc[top].scale(&inv);
            if !lead.is_zero() {
                let shift = top - dd;
                for (i, c) in dc.iter().enumerate() {
                    rc[i + shift] -= &(&lead * c);
                }
                quo += &(&lead * &Poly::var(v).pow(shift as u32));
            }
            rc.pop();
        }
        let mut rem = Poly::zero();
        for (e, c) in rc.iter().enumerate() {
            rem += &(c * &Poly::var(v).pow(e as u32));
        }
        Ok((quo, rem))
    }

    /// Multiplicity of the factor `(v - a)`.
    pub fn root_multiplicity(&self, v: Var, a: &Rational) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let shifted = self.subst(v, &(Poly::var(v) + Poly::constant(a.clone())));
        Ok(shifted
            .terms
            .keys()
            .map(|m| m.exp(v) as u32)
            .min()
            .unwrap_or(0))
    }

    /// Lowest power of `v` present; `None` for the zero polynomial.
    pub fn valuation(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v) as u32).min()
    }

    /// Leading coefficient (in the monomial order).
    pub fn lc(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic gcd of two univariate polynomials in `v`.
    pub fn gcd_univariate(&self, o: &Poly, v: Var) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem_in(&b, v)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Distinct rational roots of a univariate polynomial with multiplicities,
    /// ascending, plus the leftover factor without rational roots.
    pub fn rational_roots(&self, v: Var) -> Result<(Vec<(Rational, u32)>, Poly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let coeffs = self
            .to_univariate(v)
            .ok_or_else(|| Error::Invalid("expected a univariate polynomial".into()))?;
        let mut roots = Vec::new();
        let mut rest = self.clone();
        let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0) as u32;
        if low > 0 {
            roots.push((Rational::zero(), low));
            rest = rest.div_exact(&Poly::var(v).pow(low))?;
        }
        let sqfree = {
            let g = rest.gcd_univariate(&rest.derivative(v), v)?;
            rest.div_exact(&g)?
        };
        for r in squarefree_rational_roots(&sqfree.to_univariate(v).unwrap()) {
            let m = rest.root_multiplicity(v, &r)?;
            rest = rest.div_exact(&Poly::linear(v, &r).pow(m))?;
            roots.push((r, m));
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((roots, rest))
    }

    /// Parses the canonical display form, e.g. `3/2*mu^2*t - mu + 1`.
    pub fn parse(s: &str) -> Result<Poly> {
        let bad = || Error::Invalid(format!("cannot parse polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = Poly::zero();
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        pieces.push(cur);
        for piece in pieces {
            let (neg, body) = match piece.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let mut coeff = Rational::one();
            let mut mono = Mono::one();
            for factor in body.split('*') {
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor)?;
                } else {
                    let (name, e) = match factor.split_once('^') {
                        Some((n, e)) => (n, e.parse::<u16>().map_err(|_| bad())?),
                        None => (factor, 1),
                    };
                    mono.0[Var::parse(name)?.index()] += e;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}


impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut out = Poly::zero();
        for (m, c) in &small.terms {
            for (k, d) in &big.terms {
                out.add_term(m.mul(k), c * d);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                let g: fn(&Poly, &Poly) -> Poly = $body;
                g(self, o)
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                (&self).$f(o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                self.$f(&o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let mut r = a.clone();
    r += b;
    r
});
forward_binop!(Sub, sub, |a, b| {
    let mut r = a.clone();
    r -= b;
    r
});

impl Mul<Poly> for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Mul<&Poly> for Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        &self * o
    }
}

impl Mul<Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::q;
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn display_is_canonical_and_round_trips() {
        let x = p("1 - mu + 3/2*mu^2*t");
        assert_eq!(x.to_string(), "3/2*mu^2*t - mu + 1");
        assert_eq!(p(&x.to_string()), x);
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("-h^2 + h*t").to_string(), "t*h - h^2");
    }

    #[test]
    fn grlex_leading_term() {
        let x = p("mu + t^2 + mu*t");
        assert_eq!(x.leading().unwrap().0, &Mono([1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn exact_division() {
        let a = p("mu^2 - t^2");
        let b = p("mu - t");
        assert_eq!(a.div_exact(&b).unwrap(), p("mu + t"));
        assert!(p("mu^2 + 1").div_exact(&b).is_err());
    }

    #[test]
    fn multiplicity_and_roots() {
        let x = p("mu^3 - mu^2").scale(&qi(2));
        assert_eq!(x.root_multiplicity(Var::MU, &qi(0)).unwrap(), 2);
        assert_eq!(x.root_multiplicity(Var::MU, &qi(1)).unwrap(), 1);
        assert_eq!(x.root_multiplicity(Var::MU, &qi(2)).unwrap(), 0);
        let (roots, rest) = (p("mu - 1/2") * p("mu + 3").pow(2) * p("mu^2 + 1"))
            .rational_roots(Var::MU)
            .unwrap();
        assert_eq!(roots, vec![(qi(-3), 2), (q(1, 2), 1)]);
        assert_eq!(rest.monic(), p("mu^2 + 1"));
        assert!(Poly::zero().root_multiplicity(Var::MU, &qi(0)).is_err());
    }

    #[test]
    fn subst_and_derivative() {
        let x = p("h^2*t + h");
        assert_eq!(x.subst(Var::H, &p("h + 2*t")), p("h^2*t + 4*h*t^2 + 4*t^3 + h + 2*t"));
        assert_eq!(x.derivative(Var::H), p("2*h*t + 1"));
        assert_eq!(x.eval(Var::T, &qi(0)), p("h"));
    }

    #[test]
    fn divrem_with_parameters() {
        let x = p("h^3 + beta*h");
        let (qq, r) = x.divrem_in(&p("h - beta"), Var::H).unwrap();
        assert_eq!(&qq * &p("h - beta") + &r, x);
        assert_eq!(r.degree_in(Var::H), Some(0));
    }
}
