use super::uelem::{check_general_lambda, UElement, UParams};
use crate::error::{Error, Result};
use crate::exact::{bareiss_det, Matrix, Poly, Rational, Var};
use num::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    GlLambda,
    Hyperboloid,
    Cone,
}

impl AlgebraKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gl-lambda" => Ok(AlgebraKind::GlLambda),
            "hyperboloid" => Ok(AlgebraKind::Hyperboloid),
            "cone" => Ok(AlgebraKind::Cone),
            _ => Err(Error::Invalid(format!("unknown algebra {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::GlLambda => "gl-lambda",
            AlgebraKind::Hyperboloid => "hyperboloid",
            AlgebraKind::Cone => "cone",
        }
    }

    pub fn is_leaf(self) -> bool {
        self != AlgebraKind::GlLambda
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complement generator `f^l h^j`, `j < l`.
pub type Gen = (u32, u32);
/// Ordered monomial in complement generators, nonincreasing.
pub type PbwMono = Vec<Gen>;
pub type Vector = BTreeMap<PbwMono, Poly>;

fn add_scaled(acc: &mut Vector, v: &Vector, c: &Poly) {
    for (m, x) in v {
        let slot = acc.entry(m.clone()).or_insert_with(Poly::zero);
        *slot += &(x * c);
        if slot.is_zero() {
            acc.remove(m);
        }
    }
}

pub fn gen_name(g: Gen) -> String {
    let f = if g.0 == 1 { "f".to_string() } else { format!("f^{}", g.0) };
    match g.1 {
        0 => f,
        1 => format!("{f}h"),
        j => format!("{f}h^{j}"),
    }
}

pub fn mono_label(m: &[Gen]) -> String {
    m.iter().map(|g| gen_name(*g)).collect::<Vec<_>>().join("*")
}

/// Parameters of a generalized Verma module. Unset values stay symbolic.
#[derive(Clone, Debug)]
pub struct GvmParams {
    pub kind: AlgebraKind,
    pub lambda: Poly,
    pub beta: Poly,
    pub chi_h: Poly,
    pub chi_one: Poly,
    pub max_level: usize,
}

impl GvmParams {
    pub fn new(kind: AlgebraKind) -> Self {
        GvmParams {
            kind,
            lambda: if kind == AlgebraKind::Cone { Poly::zero() } else { Poly::var(Var::LAMBDA) },
            beta: Poly::var(Var::BETA),
            chi_h: Poly::var(Var::CHI),
            chi_one: Poly::one(),
            max_level: 3,
        }
    }

    pub fn lambda(mut self, l: Rational) -> Self {
        self.lambda = Poly::constant(l);
        self
    }

    pub fn beta(mut self, b: Rational) -> Self {
        self.beta = Poly::constant(b);
        self
    }

    pub fn chi_h(mut self, c: Rational) -> Self {
        self.chi_h = Poly::constant(c);
        self
    }

    pub fn chi_one(mut self, c: Poly) -> Self {
        self.chi_one = c;
        self
    }

    pub fn max_level(mut self, l: usize) -> Self {
        self.max_level = l;
        self
    }
}

/// Induced module from the parabolic `g_{>=0} + n~_-` with a character on C[h].
pub struct GvmContext {
    kind: AlgebraKind,
    par: UParams,
    beta: Poly,
    max_level: usize,
    /// generators of n~_- in each degree, as monic polynomials in h
    pis: Vec<Poly>,
    chi_vals: RefCell<Vec<Poly>>,
    brackets: RefCell<HashMap<(UElement, UElement), UElement>>,
    acts: RefCell<HashMap<(UElement, PbwMono), Vector>>,
    mults: RefCell<HashMap<(Gen, PbwMono), Vector>>,
}

impl GvmContext {
    pub fn new(p: &GvmParams) -> Result<Self> {
        if p.kind == AlgebraKind::Cone && !p.lambda.is_zero() {
            return Err(Error::Invalid("the cone has lambda = 0".into()));
        }
        let par = if p.kind.is_leaf() {
            UParams::deformed(p.lambda.clone())
        } else {
            if let Some(l) = p.lambda.constant_value() {
                check_general_lambda(&l)?;
            }
            UParams::new(p.lambda.clone(), Poly::one())
        };
        let h = Poly::var(Var::H);
        let mut pis = vec![Poly::one()];
        for l in 1..=p.max_level.max(1) as i64 {
            let pi = if p.kind.is_leaf() {
                (&h - &p.beta).pow(l as u32)
            } else {
                let mut acc = Poly::one();
                for m in 0..l {
                    acc = &acc * &(&h - &p.beta - Poly::int(2 * m));
                }
                acc
            };
            pis.push(pi);
        }
        let ctx = GvmContext {
            kind: p.kind,
            par,
            beta: p.beta.clone(),
            max_level: p.max_level,
            pis,
            chi_vals: RefCell::new(vec![p.chi_one.clone(), p.chi_h.clone()]),
            brackets: RefCell::new(HashMap::new()),
            acts: RefCell::new(HashMap::new()),
            mults: RefCell::new(HashMap::new()),
        };
        ctx.check_parabolic()?;
        Ok(ctx)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn params(&self) -> &UParams {
        &self.par
    }

    pub fn pi(&self, l: usize) -> &Poly {
        &self.pis[l]
    }

    pub fn bracket(&self, x: &UElement, y: &UElement) -> UElement {
        let key = (x.clone(), y.clone());
        if let Some(r) = self.brackets.borrow().get(&key) {
            return r.clone();
        }
        let r = if self.kind.is_leaf() {
            x.lie_bracket(y, &self.par)
                .expect("commutators in U_lambda(t) are divisible by t")
                .eval(Var::T, &Rational::zero())
        } else {
            x.commutator(y, &self.par)
        };
        self.brackets.borrow_mut().insert(key, r.clone());
        r
    }

    /// Anti-automorphism exchanging e and f, fixing h.
    pub fn tau(&self, x: &UElement) -> UElement {
        let r = x.tau(&self.par);
        if self.kind.is_leaf() {
            r.eval(Var::T, &Rational::zero())
        } else {
            r
        }
    }

    fn divisible(&self, p: &Poly, l: usize) -> Result<bool> {
        Ok(p.divrem_in(&self.pis[l], Var::H)?.1.is_zero())
    }

    /// The chosen n~_- must be closed under brackets and stable under g_{>=0}.
    fn check_parabolic(&self) -> Result<()> {
        let h = Poly::var(Var::H);
        let top = self.pis.len() - 1;
        for l in 2..=top {
            for i in 1..=l / 2 {
                let j = l - i;
                for a in 0..2u32 {
                    for b in 0..2u32 {
                        let x = UElement::mono(-(i as i64), &self.pis[i] * &h.pow(a));
                        let y = UElement::mono(-(j as i64), &self.pis[j] * &h.pow(b));
                        let r = self.bracket(&x, &y).part(-(l as i64));
                        if !self.divisible(&r, l)? {
                            return Err(Error::Invalid(format!("n~_- not closed in degree {l}")));
                        }
                    }
                }
            }
            for a in 0..2u32 {
                let x = UElement::mono(1, h.pow(a));
                let y = UElement::mono(-(l as i64), self.pis[l].clone());
                let r = self.bracket(&x, &y).part(1 - l as i64);
                if !self.divisible(&r, l - 1)? {
                    return Err(Error::Invalid(format!("parabolic not stable in degree {l}")));
                }
            }
        }
        Ok(())
    }

    /// Monic generator of the degree-`l` part of the subalgebra generated by
    /// `f (h - beta) C[h]`, computed from brackets. Needs rational parameters.
    pub fn closure_generator(&self, l: usize) -> Result<Poly> {
        let h = Poly::var(Var::H);
        let mut gens = vec![Poly::one(), (&h - &self.beta)];
        for m in 2..=l {
            let mut g = Poly::zero();
            for i in 1..=m / 2 {
                let j = m - i;
                for a in 0..3u32 {
                    for b in 0..3u32 {
                        let x = UElement::mono(-(i as i64), &gens[i] * &h.pow(a));
                        let y = UElement::mono(-(j as i64), &gens[j] * &h.pow(b));
                        let r = self.bracket(&x, &y).part(-(m as i64));
                        if r.vars().iter().any(|v| *v != Var::H) {
                            return Err(Error::Invalid("closure needs rational parameters".into()));
                        }
                        g = if g.is_zero() { r.monic() } else { g.gcd_univariate(&r, Var::H)? };
                    }
                }
            }
            gens.push(g);
        }
        Ok(gens[l].clone())
    }

    /// The grade-0 part of `[e, f (h - beta) h^d]`; the character vanishes on it.
    pub fn constraint(&self, d: u32) -> Poly {
        let h = Poly::var(Var::H);
        let x = UElement::mono(-1, &(&h - &self.beta) * &h.pow(d));
        self.bracket(&UElement::e(1), &x).part(0)
    }

    /// χ(h^k), extended from χ(1), χ(h) through the constraints.
    pub fn chi_power(&self, k: usize) -> Poly {
        while self.chi_vals.borrow().len() <= k {
            let next = self.chi_vals.borrow().len();
            let c = self.constraint(next as u32 - 2);
            let coeffs = c.coeffs_in(Var::H);
            assert_eq!(coeffs.len(), next + 1, "constraint has degree d + 2");
            let lead = coeffs[next]
                .constant_value()
                .filter(|x| !x.is_zero())
                .expect("constraint has a rational leading coefficient");
            let vals = self.chi_vals.borrow();
            let mut acc = Poly::zero();
            for (i, ci) in coeffs.iter().enumerate().take(next) {
                acc -= &(ci * &vals[i]);
            }
            drop(vals);
            self.chi_vals.borrow_mut().push(acc.scale(&lead.recip()));
        }
        self.chi_vals.borrow()[k].clone()
    }

    /// The character on C[h].
    pub fn chi(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (k, c) in p.coeffs_in(Var::H).iter().enumerate() {
            if !c.is_zero() {
                acc += &(c * &self.chi_power(k));
            }
        }
        acc
    }

    pub fn gen_elem(g: Gen) -> UElement {
        UElement::mono(-(g.0 as i64), Poly::var(Var::H).pow(g.1))
    }

    pub fn basis(&self, level: usize) -> Vec<PbwMono> {
        fn rec(rem: u32, cap: Gen, cur: &mut PbwMono, out: &mut Vec<PbwMono>) {
            if rem == 0 {
                out.push(cur.clone());
                return;
            }
            for l in (1..=rem.min(cap.0)).rev() {
                for j in (0..l).rev() {
                    let g = (l, j);
                    if g > cap {
                        continue;
                    }
                    cur.push(g);
                    rec(rem - l, g, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(level as u32, (u32::MAX, u32::MAX), &mut Vec::new(), &mut out);
        out
    }

    /// Action of a Lie algebra element on `m v`.
    pub fn act(&self, x: &UElement, m: &[Gen]) -> Vector {
        let key = (x.clone(), m.to_vec());
        if let Some(r) = self.acts.borrow().get(&key) {
            return r.clone();
        }
        let mut out = Vector::new();
        for (&g, p) in x.parts() {
            let v = self.act_homog(g, p, m);
            add_scaled(&mut out, &v, &Poly::one());
        }
        self.acts.borrow_mut().insert(key, out.clone());
        out
    }

    fn act_homog(&self, g: i64, p: &Poly, m: &[Gen]) -> Vector {
        if g < 0 {
            let l = (-g) as usize;
            assert!(l < self.pis.len(), "degree {l} beyond the configured level bound");
            let (quo, rem) = p.divrem_in(&self.pis[l], Var::H).expect("monic divisor");
            let mut out = Vector::new();
            for (j, c) in rem.coeffs_in(Var::H).iter().enumerate() {
                if !c.is_zero() {
                    let v = self.mult_gen((l as u32, j as u32), m);
                    add_scaled(&mut out, &v, c);
                }
            }
            if !quo.is_zero() {
                let n = UElement::mono(g, &self.pis[l] * &quo);
                let v = self.act_nil(&n, g, m);
                add_scaled(&mut out, &v, &Poly::one());
            }
            out
        } else {
            self.act_nil(&UElement::mono(g, p.clone()), g, m)
        }
    }

    /// Action of an element of the parabolic: commute it to the vacuum.
    fn act_nil(&self, x: &UElement, g: i64, m: &[Gen]) -> Vector {
        let mut out = Vector::new();
        if m.is_empty() {
            if g == 0 {
                let c = self.chi(&x.part(0));
                if !c.is_zero() {
                    out.insert(vec![], c);
                }
            }
            return out;
        }
        let g1 = m[0];
        let rest = &m[1..];
        let br = self.bracket(x, &Self::gen_elem(g1));
        add_scaled(&mut out, &self.act(&br, rest), &Poly::one());
        let inner = self.act(x, rest);
        add_scaled(&mut out, &self.left_mul(g1, &inner), &Poly::one());
        out
    }

    fn left_mul(&self, g: Gen, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (m, c) in v {
            add_scaled(&mut out, &self.mult_gen(g, m), c);
        }
        out
    }

    /// `c · m v` rewritten in ordered monomials.
    fn mult_gen(&self, c: Gen, m: &[Gen]) -> Vector {
        if m.is_empty() || c >= m[0] {
            let mut mono = vec![c];
            mono.extend_from_slice(m);
            return Vector::from([(mono, Poly::one())]);
        }
        let key = (c, m.to_vec());
        if let Some(r) = self.mults.borrow().get(&key) {
            return r.clone();
        }
        let g1 = m[0];
        let rest = &m[1..];
        let mut out = self.left_mul(g1, &self.mult_gen(c, rest));
        let br = self.bracket(&Self::gen_elem(c), &Self::gen_elem(g1));
        add_scaled(&mut out, &self.act(&br, rest), &Poly::one());
        self.mults.borrow_mut().insert(key, out.clone());
        out
    }

    /// Contravariant pairing of two ordered monomials.
    pub fn pair(&self, a: &[Gen], b: &[Gen]) -> Poly {
        let mut v = Vector::from([(b.to_vec(), Poly::one())]);
        for g in a {
            let raise = self.tau(&Self::gen_elem(*g));
            let mut next = Vector::new();
            for (m, c) in &v {
                add_scaled(&mut next, &self.act(&raise, m), c);
            }
            v = next;
        }
        v.get(&Vec::new()).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn gram(&self, level: usize) -> Result<GvmGram> {
        if level > self.max_level {
            return Err(Error::Invalid(format!(
                "level {level} exceeds the configured bound {}",
                self.max_level
            )));
        }
        let basis = self.basis(level);
        let k = basis.len();
        let mut matrix: Matrix<Poly> = vec![vec![Poly::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                matrix[i][j] = self.pair(&basis[i], &basis[j]);
            }
        }
        let det = bareiss_det(&matrix)?;
        Ok(GvmGram { kind: self.kind, level, basis, matrix, det })
    }
}

#[derive(Clone, Debug)]
pub struct GvmGram {
    pub kind: AlgebraKind,
    pub level: usize,
    pub basis: Vec<PbwMono>,
    pub matrix: Matrix<Poly>,
    pub det: Poly,
}

impl GvmGram {
    pub fn is_symmetric(&self) -> bool {
        let k = self.matrix.len();
        (0..k).all(|i| (0..k).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "algebra": self.kind.name(),
            "level": self.level,
            "basis": self.basis.iter().map(|m| mono_label(m)).collect::<Vec<_>>(),
            "matrix": self.matrix.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "det": self.det.to_string(),
        });
        if let Some(vs) = univariate_var(&self.det) {
            if let Ok((roots, lc, s)) = crate::report::factored(&self.det, vs) {
                v["det_factored"] = serde_json::Value::from(s);
                v["lc"] = serde_json::Value::from(crate::report::rational_string(&lc));
                v["roots"] = crate::report::roots_json(vs.name(), &roots);
            }
        }
        v
    }
}

fn univariate_var(p: &Poly) -> Option<Var> {
    match p.vars().as_slice() {
        [v] => Some(*v),
        _ => None,
    }
}

/// Removes every power of `f` dividing `p`; returns the count and the cofactor.
pub fn strip_factor(p: &Poly, f: &Poly) -> (u32, Poly) {
    let mut cur = p.clone();
    let mut n = 0;
    if p.is_zero() {
        return (0, cur);
    }
    while let Ok(qt) = cur.div_exact(f) {
        cur = qt;
        n += 1;
    }
    (n, cur)
}
