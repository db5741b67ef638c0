use crate::error::{Error, Result};
use crate::exact::{q, Poly, Rational, Var};
use std::collections::BTreeMap;
use std::fmt;

/// Parameters of U_λ(t): `ef = T_1(h)`, `fe = T_2(h)`, `[h,e] = 2te`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UParams {
    pub lambda: Poly,
    pub t: Poly,
}

impl UParams {
    pub fn new(lambda: Poly, t: Poly) -> Self {
        UParams { lambda, t }
    }

    /// U_λ itself (t = 1).
    pub fn at_one(lambda: Rational) -> Self {
        UParams::new(Poly::constant(lambda), Poly::one())
    }

    /// U_λ(t) with t kept symbolic.
    pub fn deformed(lambda: Poly) -> Self {
        UParams::new(lambda, Poly::var(Var::T))
    }

    /// c_λ = λ(λ+2)/2
    pub fn c(&self) -> Poly {
        (&self.lambda * &(&self.lambda + &Poly::int(2))).scale(&q(1, 2))
    }

    /// T_1 evaluated at `x`.
    pub fn t1_at(&self, x: &Poly) -> Poly {
        let inner = &(&self.t * x) - &(x * x).scale(&q(1, 2)) + self.c();
        inner.scale(&q(1, 2))
    }

    pub fn t2_at(&self, x: &Poly) -> Poly {
        self.t1_at(x) - &self.t * x
    }

    pub fn t1(&self) -> Poly {
        self.t1_at(&Poly::var(Var::H))
    }

    pub fn t2(&self) -> Poly {
        self.t2_at(&Poly::var(Var::H))
    }

    /// `p(h + 2kt)`
    pub fn shift(&self, p: &Poly, k: i64) -> Poly {
        if k == 0 {
            return p.clone();
        }
        let arg = Poly::var(Var::H) + self.t.scale(&Rational::from_integer((2 * k).into()));
        p.subst(Var::H, &arg)
    }

    /// Normal form of `X^a Y^b` (signed grades: positive = e, negative = f)
    /// as the polynomial standing to the right of the resulting power.
    fn join(&self, a: i64, b: i64) -> Poly {
        let h = Poly::var(Var::H);
        let shifted = |off: i64, i: i64| {
            &h + &self.t.scale(&Rational::from_integer((off + 2 * i).into()))
        };
        if a >= 0 && b >= 0 || a <= 0 && b <= 0 {
            return Poly::one();
        }
        let mut acc = Poly::one();
        if a > 0 {
            let m = -b;
            if a >= m {
                for i in 0..m {
                    acc = &acc * &self.t1_at(&shifted(0, -i));
                }
            } else {
                for i in 0..a {
                    acc = &acc * &self.t1_at(&shifted(-2 * (m - a), -i));
                }
            }
        } else {
            let k = -a;
            if k >= b {
                for i in 0..b {
                    acc = &acc * &self.t2_at(&shifted(0, i));
                }
            } else {
                for i in 0..k {
                    acc = &acc * &self.t2_at(&shifted(2 * (b - k), i));
                }
            }
        }
        acc
    }
}

/// Element of U_λ(t) in normal form: grade k maps to the polynomial `p` of
/// `e^k p(h)` (k > 0), `p(h)` (k = 0) or `f^{-k} p(h)` (k < 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UElement {
    parts: BTreeMap<i64, Poly>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement::default()
    }

    pub fn mono(grade: i64, p: Poly) -> Self {
        let mut u = UElement::zero();
        u.add_part(grade, p);
        u
    }

    pub fn poly(p: Poly) -> Self {
        UElement::mono(0, p)
    }

    pub fn one() -> Self {
        UElement::poly(Poly::one())
    }

    pub fn h() -> Self {
        UElement::poly(Poly::var(Var::H))
    }

    pub fn e(k: u32) -> Self {
        UElement::mono(k as i64, Poly::one())
    }

    pub fn f(k: u32) -> Self {
        UElement::mono(-(k as i64), Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &BTreeMap<i64, Poly> {
        &self.parts
    }

    pub fn part(&self, grade: i64) -> Poly {
        self.parts.get(&grade).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn homogeneous_grade(&self) -> Option<i64> {
        if self.parts.len() == 1 {
            self.parts.keys().next().copied()
        } else {
            None
        }
    }

    pub fn add_part(&mut self, grade: i64, p: Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.parts.entry(grade).or_insert_with(Poly::zero);
        *slot += &p;
        if slot.is_zero() {
            self.parts.remove(&grade);
        }
    }

    pub fn add(&self, o: &UElement) -> UElement {
        let mut r = self.clone();
        for (g, p) in &o.parts {
            r.add_part(*g, p.clone());
        }
        r
    }

    pub fn sub(&self, o: &UElement) -> UElement {
        self.add(&o.scale(&Poly::int(-1)))
    }

    /// Multiplication by a coefficient free of `h`.
    pub fn scale(&self, c: &Poly) -> UElement {
        let mut r = UElement::zero();
        for (g, p) in &self.parts {
            r.add_part(*g, p * c);
        }
        r
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> UElement {
        let mut r = UElement::zero();
        for (g, p) in &self.parts {
            r.add_part(*g, f(p));
        }
        r
    }

    pub fn eval(&self, v: Var, val: &Rational) -> UElement {
        self.map(|p| p.eval(v, val))
    }

    pub fn mul(&self, o: &UElement, par: &UParams) -> UElement {
        let mut r = UElement::zero();
        for (&a, p) in &self.parts {
            for (&b, qq) in &o.parts {
                let moved = par.shift(p, b);
                let joined = par.join(a, b);
                r.add_part(a + b, &(&joined * &moved) * qq);
            }
        }
        r
    }

    pub fn commutator(&self, o: &UElement, par: &UParams) -> UElement {
        self.mul(o, par).sub(&o.mul(self, par))
    }

    /// `(xy - yx)/t` for symbolic `t`.
    pub fn lie_bracket(&self, o: &UElement, par: &UParams) -> Result<UElement> {
        let c = self.commutator(o, par);
        let mut r = UElement::zero();
        for (g, p) in &c.parts {
            r.add_part(*g, p.div_exact(&par.t)?);
        }
        Ok(r)
    }

    /// Anti-automorphism exchanging e and f and fixing h.
    pub fn tau(&self, par: &UParams) -> UElement {
        let mut r = UElement::zero();
        for (&g, p) in &self.parts {
            r.add_part(-g, par.shift(p, -g));
        }
        r
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&g, p) in self.parts.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let gen = match g {
                0 => String::new(),
                1 => "e".into(),
                -1 => "f".into(),
                g if g > 0 => format!("e^{g}"),
                g => format!("f^{}", -g),
            };
            match (gen.is_empty(), p == &Poly::one()) {
                (true, _) => write!(f, "({p})")?,
                (false, true) => f.write_str(&gen)?,
                (false, false) => write!(f, "{gen}*({p})")?,
            }
        }
        Ok(())
    }
}

/// Rejects λ for which the roots `λ + 2` and `-λ` of T_1 differ by an even integer.
pub fn check_general_lambda(lambda: &Rational) -> Result<()> {
    let diff = lambda * Rational::from_integer(2.into()) + Rational::from_integer(2.into());
    let half = diff / Rational::from_integer(2.into());
    if half.is_integer() {
        return Err(Error::Invalid(format!(
            "lambda = {lambda} is degenerate: the roots of T_1 differ by an even integer"
        )));
    }
    Ok(())
}
