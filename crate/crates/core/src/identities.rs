//! Registry of q-series identities: each id builds both sides as `Series`
//! and compares them coefficientwise.

use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, Var};
use crate::glmod::{irr_quotient_dims, jantzen, GlContext, GramTower};
use crate::qseries::{equals_to_order, series_from_product, CoeffRow, Comparison, ProductSpec, Series};
use crate::report::VerificationReport;
use crate::ulambda::delta_basis;
use crate::young::{enumerate, Diagram, DiagramFilter};
use num::Zero;
use serde::Deserialize;
use serde_json::Value;
use std::fmt;

/// Largest level at which brute-force Gram data is computed.
pub const FEASIBLE_LEVEL: usize = 5;

/// Left side used for the explicit two-factor identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eq15Lhs {
    /// `(1-q) / prod (1-q^s)^2`
    Product,
    /// `1/((1-q)(1-q^2)^2(1-q^3)^2...)`, the general form at `l = 2`
    General,
}

/// Character of `Det_i Det_j` used in the explicit two-factor sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eq15Chi {
    /// `(1-q^(j-i+1)) / (prod_{k<=i}(1-q^k) prod_{k<=j+1}(1-q^k))`
    Hook,
    /// numerator `(1-q^(j-i+1))...(1-q^j)` as typeset
    Printed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Euler10,
    Finite13 { n: u32 },
    Higher14 { l: u32 },
    Higher15 { lhs: Eq15Lhs, chi: Eq15Chi },
    All16,
    ChiNeg17,
    ChiNeg18 { l: u32 },
    Layer20 { k: u32, l: u32 },
    Layer22 { k: u32, l: u32 },
    LocalCh2,
    Chern1Ch3,
    Chern2Ch3,
    Global12Ch3,
    /// `printed` keeps the constant `1` on the right side as typeset
    Global11Ch3 { printed: bool },
    AppendixB,
}

pub const NAMES: &[&str] = &[
    "euler10",
    "finite13",
    "higher14",
    "higher15",
    "all16",
    "chi_neg17",
    "chi_neg18",
    "layer20",
    "layer22",
    "local_ch2",
    "chern1_ch3",
    "chern2_ch3",
    "global12_ch3",
    "global11_ch3",
    "appendixB",
];

fn get_u32(params: &serde_json::Map<String, Value>, key: &str) -> Result<u32> {
    let v = params
        .get(key)
        .ok_or_else(|| Error::Invalid(format!("missing parameter {key:?}")))?;
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .or_else(|| v.as_str().and_then(|s| s.trim().parse().ok()))
        .ok_or_else(|| Error::Invalid(format!("parameter {key:?} must be a nonnegative integer")))
}

fn get_str<'a>(params: &'a serde_json::Map<String, Value>, key: &str, default: &'a str) -> Result<&'a str> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_str()
            .ok_or_else(|| Error::Invalid(format!("parameter {key:?} must be a string"))),
    }
}

impl IdentityId {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::Euler10 => "euler10",
            IdentityId::Finite13 { .. } => "finite13",
            IdentityId::Higher14 { .. } => "higher14",
            IdentityId::Higher15 { .. } => "higher15",
            IdentityId::All16 => "all16",
            IdentityId::ChiNeg17 => "chi_neg17",
            IdentityId::ChiNeg18 { .. } => "chi_neg18",
            IdentityId::Layer20 { .. } => "layer20",
            IdentityId::Layer22 { .. } => "layer22",
            IdentityId::LocalCh2 => "local_ch2",
            IdentityId::Chern1Ch3 => "chern1_ch3",
            IdentityId::Chern2Ch3 => "chern2_ch3",
            IdentityId::Global12Ch3 => "global12_ch3",
            IdentityId::Global11Ch3 { .. } => "global11_ch3",
            IdentityId::AppendixB => "appendixB",
        }
    }

    pub fn params(&self) -> Vec<(String, String)> {
        let p = |k: &str, v: String| (k.to_string(), v);
        match self {
            IdentityId::Finite13 { n } => vec![p("n", n.to_string())],
            IdentityId::Higher14 { l } | IdentityId::ChiNeg18 { l } => vec![p("l", l.to_string())],
            IdentityId::Higher15 { lhs, chi } => vec![
                p("chi", if *chi == Eq15Chi::Hook { "hook" } else { "printed" }.into()),
                p("lhs", if *lhs == Eq15Lhs::Product { "product" } else { "general" }.into()),
            ],
            IdentityId::Layer20 { k, l } | IdentityId::Layer22 { k, l } => {
                vec![p("k", k.to_string()), p("l", l.to_string())]
            }
            IdentityId::Global11Ch3 { printed } => vec![p("printed", printed.to_string())],
            _ => vec![],
        }
    }

    /// Builds an id from its name and a JSON object of parameters.
    pub fn from_parts(name: &str, params: &serde_json::Map<String, Value>) -> Result<IdentityId> {
        let id = match name {
            "euler10" => IdentityId::Euler10,
            "finite13" => IdentityId::Finite13 { n: get_u32(params, "n")? },
            "higher14" => IdentityId::Higher14 { l: get_u32(params, "l")? },
            "higher15" => {
                let lhs = match get_str(params, "lhs", "product")? {
                    "product" => Eq15Lhs::Product,
                    "general" => Eq15Lhs::General,
                    other => return Err(Error::Invalid(format!("unknown lhs reading {other:?}"))),
                };
                let chi = match get_str(params, "chi", "hook")? {
                    "hook" => Eq15Chi::Hook,
                    "printed" => Eq15Chi::Printed,
                    other => return Err(Error::Invalid(format!("unknown chi reading {other:?}"))),
                };
                IdentityId::Higher15 { lhs, chi }
            }
            "all16" => IdentityId::All16,
            "chi_neg17" => IdentityId::ChiNeg17,
            "chi_neg18" => IdentityId::ChiNeg18 { l: get_u32(params, "l")? },
            "layer20" => IdentityId::Layer20 { k: get_u32(params, "k")?, l: get_u32(params, "l")? },
            "layer22" => IdentityId::Layer22 { k: get_u32(params, "k")?, l: get_u32(params, "l")? },
            "local_ch2" => IdentityId::LocalCh2,
            "chern1_ch3" => IdentityId::Chern1Ch3,
            "chern2_ch3" => IdentityId::Chern2Ch3,
            "global12_ch3" => IdentityId::Global12Ch3,
            "global11_ch3" => {
                let printed = match params.get("printed") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(Value::String(s)) if s == "true" || s == "false" => s == "true",
                    Some(_) => return Err(Error::Invalid("parameter \"printed\" must be a boolean".into())),
                };
                IdentityId::Global11Ch3 { printed }
            }
            "appendixB" => IdentityId::AppendixB,
            other => return Err(Error::UnknownIdentity(other.into())),
        };
        id.validate()?;
        Ok(id)
    }

    /// Parses `name` or `name(key=value,...)`; bare values bind to the
    /// parameters in order, e.g. `layer20(1,1)` or `finite13(3)`.
    pub fn parse(s: &str) -> Result<IdentityId> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            None => (s, ""),
            Some(i) => {
                let rest = s[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Invalid(format!("unbalanced parentheses in {s:?}")))?;
                (&s[..i], rest)
            }
        };
        let positional: &[&str] = match name {
            "finite13" => &["n"],
            "higher14" | "chi_neg18" => &["l"],
            "layer20" | "layer22" => &["k", "l"],
            "higher15" => &["lhs", "chi"],
            "global11_ch3" => &["printed"],
            _ => &[],
        };
        let mut params = serde_json::Map::new();
        for (i, arg) in args.split(',').map(str::trim).filter(|a| !a.is_empty()).enumerate() {
            let (k, v) = match arg.split_once('=') {
                Some((k, v)) => (k.trim().to_string(), v.trim()),
                None if name == "global11_ch3" && arg == "printed" => ("printed".into(), "true"),
                None => match positional.get(i) {
                    Some(k) => (k.to_string(), arg),
                    None => return Err(Error::Invalid(format!("unexpected argument {arg:?} for {name}"))),
                },
            };
            params.insert(k, Value::from(v));
        }
        IdentityId::from_parts(name, &params)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        match *self {
            IdentityId::Finite13 { n } if n == 0 => bad("finite13 needs n >= 1".into()),
            IdentityId::Higher14 { l } | IdentityId::ChiNeg18 { l } if l == 0 => {
                bad(format!("{} needs l >= 1", self.name()))
            }
            IdentityId::Layer20 { k, l } | IdentityId::Layer22 { k, l } => {
                if l == 0 {
                    return bad(format!("{} needs l >= 1", self.name()));
                }
                let low = layer_shift(self) as usize;
                if low > FEASIBLE_LEVEL {
                    return bad(format!(
                        "{}(k={k}, l={l}) starts at level {low}, beyond the feasible level {FEASIBLE_LEVEL}",
                        self.name()
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps = self.params();
        if ps.is_empty() {
            return f.write_str(self.name());
        }
        let args: Vec<String> = ps.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.name(), args.join(","))
    }
}

/// Lowest level of the layer, `l(k+l)^2` for the negative family and
/// `(k+l) l^2` for the nonnegative one.
fn layer_shift(id: &IdentityId) -> u32 {
    match *id {
        IdentityId::Layer20 { k, l } => l * (k + l) * (k + l),
        IdentityId::Layer22 { k, l } => (k + l) * l * l,
        _ => 0,
    }
}

/// Nonzero labels of the layer highest weight on simple coroots.
pub fn layer_highest_weight(id: &IdentityId) -> Vec<(String, i64)> {
    match *id {
        IdentityId::Layer20 { k, l } => vec![
            ("alpha_0".into(), -(k as i64) - 2 * l as i64),
            (format!("alpha_-{}", k + l), l as i64),
            (format!("alpha_{}", k + l), l as i64),
        ],
        IdentityId::Layer22 { k, l } => vec![
            ("alpha_0".into(), -(k as i64) - 2 * l as i64),
            (format!("alpha_-{l}"), (k + l) as i64),
            (format!("alpha_{l}"), (k + l) as i64),
        ],
        _ => vec![],
    }
}

/// Both sides of an identity, possibly at a reduced order.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: Series,
    pub rhs: Series,
    pub notes: Vec<String>,
}

fn product(order: usize, rule: impl Fn(u32) -> Vec<(u32, i64)>) -> Result<Series> {
    series_from_product(&ProductSpec::generated(order, rule), order)
}

/// `sum_d coeff(d) q^(weight(d) - shift) chi(d)^2` over diagrams accepted by `filter`.
fn diagram_sum(
    order: usize,
    shift: u32,
    filter: &DiagramFilter,
    coeff: impl Fn(&Diagram) -> Result<Poly>,
) -> Result<Series> {
    let mut acc = Series::zero(order);
    for d in enumerate(order as u32 + shift, filter) {
        let w = d.weight();
        assert!(w >= shift, "diagram {d} lies below the weight shift {shift}");
        let c = coeff(&d)?;
        if c.is_zero() {
            continue;
        }
        let at = (w - shift) as usize;
        let chi = d.chi_series(order - at, None)?;
        let sq = chi.mul(&chi)?;
        for i in 0..=order - at {
            let t = sq.coeff(i);
            if !t.is_zero() {
                *acc.coeff_mut(at + i) += &(t * &c);
            }
        }
    }
    Ok(acc)
}

fn unit(_: &Diagram) -> Result<Poly> {
    Ok(Poly::one())
}

fn mult_at_zero(d: &Diagram) -> Result<u32> {
    d.p_poly().root_multiplicity(Var::MU, &Rational::zero())
}

/// `sum` of multiplicities of the nonzero roots of `p_w`.
fn mult_off_zero(d: &Diagram) -> Result<u32> {
    let (roots, rest) = d.p_poly().rational_roots(Var::MU)?;
    if rest.degree_in(Var::MU).unwrap_or(0) > 0 {
        return Err(Error::Invalid(format!("p_w of {d} has irrational roots")));
    }
    Ok(roots.iter().filter(|(r, _)| !r.is_zero()).map(|(_, m)| m).sum())
}

/// `1/(1-q)...(1-q^k)`
fn qfact_inv(order: usize, k: u32) -> Result<Series> {
    product(order, |g| if g <= k { vec![(0, 1)] } else { vec![] })
}

/// `(1-q^lo)...(1-q^hi)`
fn qrange(order: usize, lo: u32, hi: u32) -> Result<Series> {
    product(order, |g| if g >= lo && g <= hi { vec![(0, -1)] } else { vec![] })
}

fn square(s: &Series) -> Result<Series> {
    s.mul(s)
}

/// `s_lambda(1, q, q^2, ...)` divided by `q^n(lambda)`, from the
/// Jacobi-Trudi determinant of complete symmetric functions.
pub fn jacobi_trudi_chi(d: &Diagram, order: usize) -> Result<Series> {
    let rows = d.partition();
    let n_lambda: usize = rows.iter().enumerate().map(|(i, r)| i * *r as usize).sum();
    let big = order + n_lambda;
    let h = |m: i64| -> Result<Series> {
        if m < 0 {
            Ok(Series::zero(big))
        } else {
            qfact_inv(big, m as u32)
        }
    };
    let len = rows.len();
    let mut m = vec![Vec::with_capacity(len); len];
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..len {
            row.push(h(rows[i] as i64 - i as i64 + j as i64)?);
        }
    }
    let det = series_det(&m)?;
    for k in 0..n_lambda {
        if !det.coeff(k).is_zero() {
            return Err(Error::Invalid(format!("principal specialization of {d} starts below q^{n_lambda}")));
        }
    }
    Ok(Series::new(order, det.coeffs()[n_lambda..].to_vec()))
}

fn series_det(m: &[Vec<Series>]) -> Result<Series> {
    let n = m.len();
    if n == 0 {
        return Ok(Series::one(0));
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let order = m[0][0].order();
    let mut acc = Series::zero(order);
    for j in 0..n {
        let minor: Vec<Vec<Series>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&series_det(&minor)?)?;
        acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// The `k_+`-th correction term: `d/da` at `a = 1` of
/// `prod_{i<=k} (1-q^i)^(-i) prod_{i>k} (1-q^i)^(-k) (1-aq^i)^(-(i-k))`.
pub fn kplus_term(order: usize, kp: u32) -> Result<Series> {
    let s = product(order, |i| {
        if i <= kp {
            vec![(0, i as i64)]
        } else {
            vec![(0, kp as i64), (1, (i - kp) as i64)]
        }
    })?;
    Ok(s.d_da_at_one())
}

/// `sum_{k_+=1..order}` of the correction terms; terms beyond `order` vanish
/// through `q^order`.
fn kplus_sum(order: usize) -> Result<Series> {
    let mut acc = Series::zero(order);
    for kp in 1..=order as u32 {
        let t = kplus_term(order, kp)?;
        for i in 0..=(kp as usize).min(order) {
            assert!(t.coeff(i).is_zero(), "k_+ = {kp} term is nonzero at q^{i}");
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// `prod_i prod_{j=i-1..2i-2} (1 - a^(scale*j) q^i)^(-1)`
fn chern_product(order: usize, scale: u32) -> Result<Series> {
    product(order, |i| (i - 1..=2 * i - 2).map(|j| (scale * j, 1)).collect())
}

/// Counts of PBW monomials in the generators `f^p h^j`, `j < p`, by grade and
/// total Chern class `sum (p + j - 1)`.
#[derive(Clone, Debug)]
pub struct ChernTable {
    /// `by_class[grade][class]`
    pub by_class: Vec<Vec<u64>>,
}

impl ChernTable {
    pub fn new(order: usize) -> Self {
        let gens: Vec<(u32, u32)> = (1..=order as u32).flat_map(|p| (0..p).map(move |j| (p, j))).collect();
        let top_class = 2 * order;
        let mut by_class = vec![vec![0u64; top_class + 1]; order + 1];
        fn rec(gens: &[(u32, u32)], start: usize, grade: usize, class: usize, order: usize, t: &mut Vec<Vec<u64>>) {
            t[grade][class] += 1;
            for (idx, &(p, j)) in gens.iter().enumerate().skip(start) {
                let g = grade + p as usize;
                if g > order {
                    break;
                }
                rec(gens, idx, g, class + (p + j - 1) as usize, order, t);
            }
        }
        rec(&gens, 0, 0, 0, order, &mut by_class);
        ChernTable { by_class }
    }

    /// `sum_k (sum_l a^C_{l,k}) q^k`
    pub fn generating_series(&self) -> Series {
        let order = self.by_class.len() - 1;
        let coeffs = self
            .by_class
            .iter()
            .map(|row| {
                let mut p = Poly::zero();
                for (c, n) in row.iter().enumerate() {
                    if *n > 0 {
                        p = &p + &(&Poly::var(Var::A).pow(c as u32) * &Poly::int(*n as i64));
                    }
                }
                p
            })
            .collect();
        Series::new(order, coeffs)
    }

    /// `sum_k C_k q^k` with `C_k = 2 sum_l C_{l,k}`.
    pub fn determinant_classes(&self) -> Series {
        let order = self.by_class.len() - 1;
        let coeffs = self
            .by_class
            .iter()
            .map(|row| {
                let total: u64 = row.iter().enumerate().map(|(c, n)| c as u64 * n).sum();
                Poly::int(2 * total as i64)
            })
            .collect();
        Series::new(order, coeffs)
    }
}

fn local_lhs(order: usize) -> Result<Series> {
    Ok(product(order, |g| vec![(1, g as i64)])?.d_da_at_one())
}

fn size_poly(d: &Diagram) -> Result<Poly> {
    Ok(Poly::int(d.size() as i64))
}

fn eq15_rhs(order: usize, chi: Eq15Chi) -> Result<Series> {
    let mut acc = Series::one(order);
    let mut k = 1u32;
    while (k * k) as usize <= order {
        let c = qfact_inv(order, k)?;
        acc = acc.add(&square(&c)?.shift((k * k) as usize))?;
        k += 1;
    }
    let mut j = 1u32;
    while (1 + j * j) as usize <= order {
        for i in 1..=j {
            let w = (i * i + j * j) as usize;
            if w > order {
                break;
            }
            let num = match chi {
                Eq15Chi::Hook => qrange(order, j - i + 1, j - i + 1)?,
                Eq15Chi::Printed => qrange(order, j - i + 1, j)?,
            };
            let c = num.mul(&qfact_inv(order, i)?)?.mul(&qfact_inv(order, j + 1)?)?;
            acc = acc.add(&square(&c)?.shift(w))?;
        }
        j += 1;
    }
    Ok(acc)
}

/// Layer dimensions `Ind_a^(l) / Ind_a^(l+1)` for levels `0..=max_level`
/// from the t-adic Smith form of the Gram matrices.
pub fn layer_dims(a: i64, l: u32, max_level: usize) -> Result<Vec<usize>> {
    if l == 0 {
        return Err(Error::Invalid("layer index starts at 1".into()));
    }
    let n = max_level.max(1);
    let levels = jantzen(&GlContext::new(n), &Rational::from_integer(a.into()), max_level)?;
    let mut out = vec![0usize];
    for lv in &levels {
        let at = |k: u32| lv.smith_dims.get(k as usize - 1).copied().unwrap_or(0);
        out.push(at(l) - at(l + 1));
    }
    Ok(out)
}

/// Builds both sides of `id` through `q^order`. Layer identities come back
/// at the largest order their brute-force side supports.
pub fn build_sides_with_notes(id: &IdentityId, order: usize) -> Result<Sides> {
    id.validate()?;
    let mut notes = Vec::new();
    let none = DiagramFilter::none();
    let (lhs, rhs) = match id {
        IdentityId::Euler10 => (
            product(order, |_| vec![(0, 1)])?,
            diagram_sum(order, 0, &DiagramFilter::tail_at_most(1, 1), unit)?,
        ),
        IdentityId::Finite13 { n } => {
            let n = *n;
            let lhs = qrange(order, n + 1, 2 * n)?.mul(&qfact_inv(order, n)?)?;
            let mut rhs = Series::zero(order);
            for k in 0..=n {
                let d = if k == 0 { Diagram::empty() } else { Diagram::det(k) };
                let c = d.chi_series(order, Some(n))?;
                rhs = rhs.add(&square(&c)?.shift((k * k) as usize))?;
            }
            (lhs, rhs)
        }
        IdentityId::Higher14 { l } => {
            let l = *l;
            (
                product(order, |i| vec![(0, i.min(l) as i64)])?,
                diagram_sum(order, 0, &DiagramFilter::tail_at_most(1, l), unit)?,
            )
        }
        IdentityId::Higher15 { lhs, chi } => {
            let left = match lhs {
                Eq15Lhs::Product => qrange(order, 1, 1)?.mul(&product(order, |_| vec![(0, 2)])?)?,
                Eq15Lhs::General => product(order, |i| vec![(0, i.min(2) as i64)])?,
            };
            let other = match lhs {
                Eq15Lhs::Product => product(order, |i| vec![(0, i.min(2) as i64)])?,
                Eq15Lhs::General => qrange(order, 1, 1)?.mul(&product(order, |_| vec![(0, 2)])?)?,
            };
            notes.push(format!(
                "the other left-side reading {} this one through q^{order}",
                if other == left { "agrees with" } else { "differs from" }
            ));
            if *chi == Eq15Chi::Printed {
                notes.push("Det_i Det_j character taken with the typeset numerator".into());
            }
            (left, eq15_rhs(order, *chi)?)
        }
        IdentityId::All16 => (
            product(order, |i| vec![(0, i as i64)])?,
            diagram_sum(order, 0, &none, unit)?,
        ),
        IdentityId::ChiNeg17 | IdentityId::ChiNeg18 { .. } => {
            let l = match id {
                IdentityId::ChiNeg18 { l } => *l,
                _ => 1,
            };
            let filter = DiagramFilter::tail_at_most(l + 1, 0);
            let mut lhs = Series::zero(order);
            for d in enumerate(order as u32, &filter) {
                let w = d.weight() as usize;
                let c = jacobi_trudi_chi(&d, order - w)?;
                lhs = lhs.add(&square(&Series::new(order, c.coeffs().to_vec()))?.shift(w))?;
            }
            notes.push("left side: Jacobi-Trudi characters; right side: hook-length characters".into());
            (lhs, diagram_sum(order, 0, &filter, unit)?)
        }
        IdentityId::Layer20 { k, l } | IdentityId::Layer22 { k, l } => {
            let (k, l) = (*k, *l);
            let shift = layer_shift(id);
            let eff = order.min(FEASIBLE_LEVEL - shift as usize);
            if eff < order {
                notes.push(format!(
                    "checked through q^{eff} only: brute-force levels stop at {FEASIBLE_LEVEL}, layer starts at level {shift}"
                ));
            }
            let (a, filter) = match id {
                IdentityId::Layer20 { .. } => (
                    -(k as i64),
                    DiagramFilter::tail_at_least(k + l, l).and(DiagramFilter::tail_at_most(k + l + 1, l)),
                ),
                _ => (
                    k as i64,
                    DiagramFilter::tail_at_least(l, k + l).and(DiagramFilter::tail_at_most(l + 1, k + l)),
                ),
            };
            let top = eff + shift as usize;
            let dims = layer_dims(a, l, top)?;
            for (lv, d) in dims.iter().enumerate().take(shift as usize) {
                if *d != 0 {
                    return Err(Error::Invalid(format!("layer {l} nonzero at level {lv} below its start")));
                }
            }
            let lhs = Series::new(eff, dims[shift as usize..].iter().map(|d| Poly::int(*d as i64)).collect());
            let hw: Vec<String> = layer_highest_weight(id).iter().map(|(c, v)| format!("{c}:{v}")).collect();
            notes.push(format!("a = {a}, highest weight {}", hw.join(" ")));
            (lhs, diagram_sum(eff, shift, &filter, unit)?)
        }
        IdentityId::LocalCh2 => (local_lhs(order)?, diagram_sum(order, 0, &none, size_poly)?),
        IdentityId::Chern1Ch3 => (chern_product(order, 1)?, ChernTable::new(order).generating_series()),
        IdentityId::Chern2Ch3 => (
            chern_product(order, 2)?.d_da_at_one(),
            ChernTable::new(order).determinant_classes(),
        ),
        IdentityId::Global12Ch3 => {
            let lhs = chern_product(order, 1)?.d_da_at_one();
            let central = diagram_sum(order, 0, &none, |d| Ok(Poly::int(mult_at_zero(d)? as i64)))?;
            let rhs = local_lhs(order)?.add(&kplus_sum(order)?.scale(&Poly::int(2)))?.sub(&central)?;
            notes.push(format!("k_+ sum truncated at k_+ <= {order}"));
            (lhs, rhs)
        }
        IdentityId::Global11Ch3 { printed } => {
            let lhs = chern_product(order, 2)?.d_da_at_one();
            let off_zero = diagram_sum(order, 0, &none, |d| Ok(Poly::int(mult_off_zero(d)? as i64)))?;
            let degree = diagram_sum(order, 0, &none, |d| {
                Ok(Poly::int(d.p_poly().degree_in(Var::MU).unwrap_or(0) as i64))
            })?;
            let two = Poly::int(2);
            let mut rhs = off_zero
                .scale(&two)
                .add(&local_lhs(order)?.scale(&two))?
                .sub(&degree.scale(&two))?
                .add(&kplus_sum(order)?.scale(&Poly::int(4)))?;
            if *printed {
                rhs = rhs.add(&Series::one(order))?;
                notes.push("right side keeps the typeset constant term 1".into());
            }
            notes.push(format!("k_+ sum truncated at k_+ <= {order}"));
            (lhs, rhs)
        }
        IdentityId::AppendixB => (
            product(order, |g| vec![(1, g as i64)])?,
            diagram_sum(order, 0, &none, |d| Ok(Poly::var(Var::A).pow(d.size())))?,
        ),
    };
    Ok(Sides { lhs, rhs, notes })
}

pub fn build_sides(id: &IdentityId, order: usize) -> Result<(Series, Series)> {
    let s = build_sides_with_notes(id, order)?;
    Ok((s.lhs, s.rhs))
}

pub fn verify(id: &IdentityId, order: usize) -> Result<VerificationReport> {
    let s = build_sides_with_notes(id, order)?;
    let comparison = equals_to_order(&s.lhs, &s.rhs)?;
    Ok(VerificationReport {
        id: id.name().into(),
        params: id.params(),
        order,
        comparison,
        notes: s.notes,
    })
}

fn int_rows(rows: impl Iterator<Item = (usize, i64, i64)>) -> Comparison {
    let rows: Vec<CoeffRow> = rows
        .map(|(k, l, r)| CoeffRow { k, lhs: Poly::int(l), rhs: Poly::int(r), matches: l == r })
        .collect();
    let pass = rows.iter().all(|r| r.matches);
    Comparison { rows, pass }
}

/// Coefficients of the negative-charge character against Gram ranks at
/// `mu = -l` in gl(2n), `n = max_level`.
pub fn negative_charge_ranks(l: u32, max_level: usize) -> Result<VerificationReport> {
    let id = if l == 1 { IdentityId::ChiNeg17 } else { IdentityId::ChiNeg18 { l } };
    let (_, rhs) = build_sides(&id, max_level)?;
    let ranks = irr_quotient_dims(
        &GlContext::new(max_level.max(1)),
        &Rational::from_integer((-(l as i64)).into()),
        max_level,
    );
    let coeff = |k: usize| rhs.coeff(k).constant_value().map(|c| c.to_integer()).unwrap_or_default();
    let comparison = int_rows((1..=max_level).map(|k| {
        (k, i64::try_from(coeff(k)).unwrap_or(i64::MAX), ranks[k - 1] as i64)
    }));
    Ok(VerificationReport {
        id: format!("{}_ranks", id.name()),
        params: vec![("l".into(), l.to_string()), ("n".into(), max_level.to_string())],
        order: max_level,
        comparison,
        notes: vec!["rhs: rank of the Gram matrix at mu = -l".into()],
    })
}

/// Local identity coefficients against the mu-degree of the Gram
/// determinant and against the delta-basis count `sum_w p(w)`.
pub fn local_degree_check(max_level: usize) -> Result<VerificationReport> {
    let (lhs, _) = build_sides(&IdentityId::LocalCh2, max_level)?;
    let mut tower = GramTower::new(GlContext::new(max_level.max(1)));
    let mut rows = Vec::new();
    for k in 1..=max_level {
        let c = lhs.coeff(k).constant_value().unwrap_or_else(Rational::zero).to_integer();
        let c = i64::try_from(c).unwrap_or(i64::MAX);
        let deg = tower.level(k).det()?.degree_in(Var::MU).unwrap_or(0) as i64;
        let delta: i64 = delta_basis(k as u32).iter().map(|w| w.len() as i64).sum();
        rows.push((k, c, deg));
        rows.push((k, c, delta));
    }
    Ok(VerificationReport {
        id: "local_ch2_degrees".into(),
        params: vec![("n".into(), max_level.to_string())],
        order: max_level,
        comparison: int_rows(rows.into_iter()),
        notes: vec!["two rows per level: mu-degree of the Gram determinant, then delta-basis count".into()],
    })
}

/// Diagram-route ingredients of the global identity against the Gram
/// determinant at each level: mu-degree, multiplicity of `mu = 0`, and the
/// total multiplicity of the nonzero roots.
pub fn global_ingredients_check(max_level: usize) -> Result<VerificationReport> {
    let none = DiagramFilter::none();
    let degree = diagram_sum(max_level, 0, &none, |d| {
        Ok(Poly::int(d.p_poly().degree_in(Var::MU).unwrap_or(0) as i64))
    })?;
    let central = diagram_sum(max_level, 0, &none, |d| Ok(Poly::int(mult_at_zero(d)? as i64)))?;
    let off = diagram_sum(max_level, 0, &none, |d| Ok(Poly::int(mult_off_zero(d)? as i64)))?;
    let int = |s: &Series, k: usize| -> i64 {
        i64::try_from(s.coeff(k).constant_value().unwrap_or_else(Rational::zero).to_integer()).unwrap_or(i64::MAX)
    };
    let mut tower = GramTower::new(GlContext::new(max_level.max(1)));
    let mut rows = Vec::new();
    for k in 1..=max_level {
        let det = tower.level(k).det()?;
        let deg = det.degree_in(Var::MU).unwrap_or(0) as i64;
        let zero = det.root_multiplicity(Var::MU, &Rational::zero())? as i64;
        let (roots, _) = det.rational_roots(Var::MU)?;
        let nonzero: i64 = roots.iter().filter(|(r, _)| !r.is_zero()).map(|(_, m)| *m as i64).sum();
        rows.push((k, int(&degree, k), deg));
        rows.push((k, int(&central, k), zero));
        rows.push((k, int(&off, k), nonzero));
    }
    Ok(VerificationReport {
        id: "global_ingredients".into(),
        params: vec![("n".into(), max_level.to_string())],
        order: max_level,
        comparison: int_rows(rows.into_iter()),
        notes: vec!["three rows per level: mu-degree, multiplicity at 0, nonzero multiplicities".into()],
    })
}

#[derive(Deserialize)]
struct ManifestEntry {
    id: String,
    #[serde(default)]
    params: serde_json::Map<String, Value>,
    order: usize,
}

pub fn parse_manifest(text: &str) -> Result<Vec<(IdentityId, usize)>> {
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("manifest: {e}")))?;
    entries
        .into_iter()
        .map(|e| Ok((IdentityId::from_parts(&e.id, &e.params)?, e.order)))
        .collect()
}

/// The run covering every registered identity.
pub fn default_manifest() -> Vec<(IdentityId, usize)> {
    let mut m = vec![(IdentityId::Euler10, 30)];
    m.extend((1..=4).map(|n| (IdentityId::Finite13 { n }, 25)));
    m.extend((2..=3).map(|l| (IdentityId::Higher14 { l }, 20)));
    m.push((IdentityId::Higher15 { lhs: Eq15Lhs::Product, chi: Eq15Chi::Hook }, 20));
    m.push((IdentityId::Higher15 { lhs: Eq15Lhs::General, chi: Eq15Chi::Hook }, 20));
    m.push((IdentityId::All16, 20));
    m.push((IdentityId::ChiNeg17, 20));
    m.extend((2..=3).map(|l| (IdentityId::ChiNeg18 { l }, 20)));
    m.push((IdentityId::Layer20 { k: 0, l: 1 }, 4));
    m.push((IdentityId::Layer20 { k: 1, l: 1 }, 1));
    m.extend((0..=2).map(|k| (IdentityId::Layer22 { k, l: 1 }, 5 - (k as usize + 1))));
    m.push((IdentityId::LocalCh2, 20));
    m.push((IdentityId::Chern1Ch3, 15));
    m.push((IdentityId::Chern2Ch3, 15));
    m.push((IdentityId::Global12Ch3, 12));
    m.push((IdentityId::Global11Ch3 { printed: false }, 12));
    m.push((IdentityId::AppendixB, 15));
    m
}

pub fn manifest_json(m: &[(IdentityId, usize)]) -> Value {
    Value::from(
        m.iter()
            .map(|(id, order)| {
                let params: serde_json::Map<String, Value> = id
                    .params()
                    .into_iter()
                    .map(|(k, v)| {
                        let v = match v.parse::<u64>() {
                            Ok(n) => Value::from(n),
                            Err(_) if v == "true" || v == "false" => Value::from(v == "true"),
                            Err(_) => Value::from(v),
                        };
                        (k, v)
                    })
                    .collect();
                serde_json::json!({ "id": id.name(), "params": params, "order": order })
            })
            .collect::<Vec<_>>(),
    )
}

/// Verifies every entry on worker threads; reports come back sorted by id.
pub fn verify_all(manifest: &[(IdentityId, usize)]) -> Result<Vec<VerificationReport>> {
    let mut results: Vec<(IdentityId, usize, Result<VerificationReport>)> = std::thread::scope(|s| {
        let handles: Vec<_> = manifest
            .iter()
            .map(|(id, order)| s.spawn(move || (id.clone(), *order, verify(id, *order))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    results.sort_by(|a, b| (a.0.to_string(), a.1).cmp(&(b.0.to_string(), b.1)));
    results.into_iter().map(|(_, _, r)| r).collect()
}
