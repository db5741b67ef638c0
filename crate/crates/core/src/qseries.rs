//! Truncated power series in `q` with coefficients in Q[a].

use crate::error::{Error, Result};
use crate::exact::{Mono, Poly, Rational, Var};
use num::{One, Zero};
use serde::{Deserialize, Serialize};

/// Power series known through `q^order` inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    order: usize,
    coeffs: Vec<Poly>,
}

fn a_pow(c: u32) -> Poly {
    Poly::term(Mono::var(Var::A, c as u16), Rational::one())
}

impl Series {
    /// Coefficients past `order` are dropped, missing ones are zero.
    pub fn new(order: usize, mut coeffs: Vec<Poly>) -> Self {
        coeffs.resize(order + 1, Poly::zero());
        Series { order, coeffs }
    }

    pub fn from_ints(order: usize, cs: &[i64]) -> Self {
        Series::new(order, cs.iter().map(|&c| Poly::int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series::new(order, vec![])
    }

    pub fn one(order: usize) -> Self {
        Series::new(order, vec![Poly::one()])
    }

    /// `c * q^k`, zero when `k > order`.
    pub fn monomial(order: usize, k: usize, c: Poly) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut Poly {
        &mut self.coeffs[k]
    }

    fn check(&self, o: &Series) -> Result<()> {
        if self.order != o.order {
            return Err(Error::OrderMismatch(self.order, o.order));
        }
        Ok(())
    }

    pub fn add(&self, o: &Series) -> Result<Series> {
        self.check(o)?;
        Ok(Series {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, o: &Series) -> Result<Series> {
        self.check(o)?;
        Ok(Series {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn neg(&self) -> Series {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, o: &Series) -> Result<Series> {
        self.check(o)?;
        let n = self.order;
        let mut out = vec![Poly::zero(); n + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs[..=n - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += &(x * y);
                }
            }
        }
        Ok(Series { order: n, coeffs: out })
    }

    pub fn scale(&self, c: &Poly) -> Series {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Series {
        let mut coeffs = vec![Poly::zero(); k.min(self.order + 1)];
        coeffs.extend(self.coeffs.iter().take((self.order + 1).saturating_sub(k)).cloned());
        Series::new(self.order, coeffs)
    }

    /// Inverse; the constant term must be a nonzero rational.
    pub fn inv(&self) -> Result<Series> {
        let c0 = self.coeffs[0]
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NotInvertible)?;
        let inv0 = c0.recip();
        let mut out: Vec<Poly> = vec![Poly::constant(inv0.clone())];
        for k in 1..=self.order {
            let mut acc = Poly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out.push(acc.scale(&-inv0.clone()));
        }
        Ok(Series { order: self.order, coeffs: out })
    }

    /// Coefficientwise `d/da` followed by `a = 1`.
    pub fn d_da_at_one(&self) -> Series {
        let one = Rational::one();
        Series {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.derivative(Var::A).eval(Var::A, &one))
                .collect(),
        }
    }

    pub fn d_da(&self) -> Series {
        self.map(|c| c.derivative(Var::A))
    }

    pub fn eval_a(&self, a: &Rational) -> Series {
        self.map(|c| c.eval(Var::A, a))
    }

    pub fn subst_a(&self, p: &Poly) -> Series {
        self.map(|c| c.subst(Var::A, p))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Series {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiplies in place by `(1 - a^c q^g)^(-m)`.
    pub fn mul_factor(&mut self, f: &Factor) -> Result<()> {
        if f.mult == 0 {
            return Ok(());
        }
        if f.q_exp == 0 {
            return Err(Error::BadFactor(format!(
                "q-exponent 0 with multiplicity {}",
                f.mult
            )));
        }
        let g = f.q_exp as usize;
        if g > self.order {
            return Ok(());
        }
        let ac = a_pow(f.a_exp);
        for _ in 0..f.mult.unsigned_abs() {
            if f.mult > 0 {
                for k in g..=self.order {
                    if !self.coeffs[k - g].is_zero() {
                        let add = &self.coeffs[k - g] * &ac;
                        self.coeffs[k] += &add;
                    }
                }
            } else {
                for k in (g..=self.order).rev() {
                    if !self.coeffs[k - g].is_zero() {
                        let sub = &self.coeffs[k - g] * &ac;
                        self.coeffs[k] -= &sub;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Series> {
        let bad = || Error::Invalid("malformed series JSON".into());
        let order = v.get("order").and_then(|o| o.as_u64()).ok_or_else(bad)? as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(bad)?
            .iter()
            .map(|c| c.as_str().ok_or_else(bad).and_then(Poly::parse))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != order + 1 {
            return Err(bad());
        }
        Ok(Series { order, coeffs })
    }
}

/// `(1 - a^a_exp q^q_exp)^(-mult)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub a_exp: u32,
    pub q_exp: u32,
    pub mult: i64,
}

impl Factor {
    pub fn new(a_exp: u32, q_exp: u32, mult: i64) -> Self {
        Factor { a_exp, q_exp, mult }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductSpec {
    pub factors: Vec<Factor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<Factor>) -> Self {
        ProductSpec { factors }
    }

    /// Emits the factors produced by `rule(g)` for each q-exponent `1..=order`.
    pub fn generated(order: usize, rule: impl Fn(u32) -> Vec<(u32, i64)>) -> Self {
        let mut factors = Vec::new();
        for g in 1..=order as u32 {
            for (c, m) in rule(g) {
                factors.push(Factor::new(c, g, m));
            }
        }
        ProductSpec { factors }
    }

    pub fn inverted(&self) -> Self {
        ProductSpec {
            factors: self
                .factors
                .iter()
                .map(|f| Factor::new(f.a_exp, f.q_exp, -f.mult))
                .collect(),
        }
    }
}

pub fn series_from_product(spec: &ProductSpec, order: usize) -> Result<Series> {
    let mut s = Series::one(order);
    for f in &spec.factors {
        s.mul_factor(f)?;
    }
    Ok(s)
}

/// `1 / prod_{i>=1} (1 - q^i)^(e(i))` to the given order.
pub fn product_series(order: usize, e: impl Fn(u32) -> i64) -> Series {
    series_from_product(&ProductSpec::generated(order, |g| vec![(0, e(g))]), order)
        .expect("generated factors have positive q-exponent")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRow {
    pub k: usize,
    pub lhs: Poly,
    pub rhs: Poly,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub rows: Vec<CoeffRow>,
    pub pass: bool,
}

impl Comparison {
    pub fn first_mismatch(&self) -> Option<&CoeffRow> {
        self.rows.iter().find(|r| !r.matches)
    }
}

pub fn equals_to_order(x: &Series, y: &Series) -> Result<Comparison> {
    x.check(y)?;
    let rows: Vec<CoeffRow> = x
        .coeffs
        .iter()
        .zip(&y.coeffs)
        .enumerate()
        .map(|(k, (l, r))| CoeffRow {
            k,
            lhs: l.clone(),
            rhs: r.clone(),
            matches: l == r,
        })
        .collect();
    let pass = rows.iter().all(|r| r.matches);
    Ok(Comparison { rows, pass })
}
