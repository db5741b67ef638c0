use super::gram::GramTower;
use super::module::{GlContext, ModElem, YMono};
use crate::error::{Error, Result};
use crate::exact::{local_smith, mul_trunc, rank_q, to_series, Poly, Rational, TSeries, Var};
use crate::young::{enumerate, Diagram, DiagramFilter};
use num::Zero;
use std::collections::{BTreeMap, HashMap};

/// Incrementally reduced row space over Q.
#[derive(Default)]
struct Span {
    rows: Vec<(YMono, BTreeMap<YMono, Rational>)>,
}

impl Span {
    fn insert(&mut self, mut v: BTreeMap<YMono, Rational>) -> bool {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                for (m, x) in row {
                    let e = v.entry(m.clone()).or_insert_with(Rational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        v.remove(m);
                    }
                }
            }
        }
        let Some((pivot, lead)) = v.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        for x in v.values_mut() {
            *x *= &inv;
        }
        self.rows.push((pivot, v));
        true
    }
}

fn to_rational_vec(v: &ModElem) -> BTreeMap<YMono, Rational> {
    v.terms
        .iter()
        .map(|(m, c)| (m.clone(), c.constant_value().expect("closure vectors are mu-free")))
        .collect()
}

fn from_rational_vec(v: &BTreeMap<YMono, Rational>) -> ModElem {
    let mut e = ModElem::zero();
    for (m, c) in v {
        e.add_term(m.clone(), Poly::constant(c.clone()));
    }
    e
}

/// Level dimensions `0..=max_level` of the gl_n + gl_n submodule generated by
/// the Det-monomial of `d`, by closing under the simple Levi lowerings.
pub fn slice_dims(ctx: &GlContext, d: &Diagram, max_level: usize) -> Result<Vec<usize>> {
    let mut dims = vec![0; max_level + 1];
    let w0 = d.weight() as usize;
    if w0 > max_level {
        return Ok(dims);
    }
    let lowering = ctx.levi_lowering();
    let mut current: Vec<BTreeMap<YMono, Rational>> = vec![to_rational_vec(&ctx.diagram_element(d)?)];
    dims[w0] = 1;
    for level in w0 + 1..=max_level {
        let mut span = Span::default();
        for v in &current {
            let e = from_rational_vec(v);
            for x in &lowering {
                span.insert(to_rational_vec(&ctx.act(*x, &e)?));
            }
        }
        current = span.rows.into_iter().map(|r| r.1).collect();
        dims[level] = current.len();
        if current.is_empty() {
            break;
        }
    }
    Ok(dims)
}

/// Caches lowering-closure dimensions per diagram.
pub struct SliceCache {
    ctx: GlContext,
    max_level: usize,
    dims: HashMap<Diagram, Vec<usize>>,
}

impl SliceCache {
    pub fn new(ctx: GlContext, max_level: usize) -> Self {
        SliceCache { ctx, max_level, dims: HashMap::new() }
    }

    pub fn dim(&mut self, d: &Diagram, level: usize) -> Result<usize> {
        if level > self.max_level {
            return Err(Error::Invalid(format!("level {level} above cache bound {}", self.max_level)));
        }
        if !self.dims.contains_key(d) {
            let v = slice_dims(&self.ctx, d, self.max_level)?;
            self.dims.insert(d.clone(), v);
        }
        Ok(self.dims[d][level])
    }

    /// Diagrams that fit in `n` rows with weight at most `level`.
    pub fn diagrams(&self, level: usize) -> Vec<Diagram> {
        enumerate(level as u32, &DiagramFilter::none())
            .into_iter()
            .filter(|d| d.height() as usize <= self.ctx.n())
            .collect()
    }

    /// Root multiplicities of the level determinant predicted from
    /// `sum_w mult_a(p_w) * dim(L_w at level)`.
    pub fn predicted_roots(&mut self, level: usize) -> Result<BTreeMap<Rational, u32>> {
        let mut out: BTreeMap<Rational, u32> = BTreeMap::new();
        for d in self.diagrams(level) {
            let dim = self.dim(&d, level)? as u32;
            if dim == 0 {
                continue;
            }
            let (roots, _) = d.p_poly().rational_roots(Var::MU)?;
            for (r, m) in roots {
                *out.entry(r).or_insert(0) += m * dim;
            }
        }
        Ok(out)
    }

    /// `dim (V_level ∩ Ind_a^(k))` for `k = 1..` from diagram multiplicities.
    pub fn lemma14_dims(&mut self, a: &Rational, level: usize) -> Result<Vec<usize>> {
        let mut dims: Vec<usize> = Vec::new();
        for d in self.diagrams(level) {
            let m = d.p_poly().root_multiplicity(Var::MU, a)? as usize;
            if m == 0 {
                continue;
            }
            let dim = self.dim(&d, level)?;
            if dims.len() < m {
                dims.resize(m, 0);
            }
            for x in dims.iter_mut().take(m) {
                *x += dim;
            }
        }
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Ok(dims)
    }
}

/// `#{d_i >= k}` for `k = 1..max d_i`.
pub fn dims_from_valuations(vals: &[u32]) -> Vec<usize> {
    let top = vals.iter().copied().max().unwrap_or(0);
    (1..=top).map(|k| vals.iter().filter(|&&d| d >= k).count()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerCheck {
    pub k: u32,
    /// `#{d_i = k}`
    pub expected: usize,
    /// rank of the induced form on the k-th layer
    pub rank: usize,
    /// lifts pair to a multiple of `t^k`
    pub divisible: bool,
}

impl LayerCheck {
    pub fn ok(&self) -> bool {
        self.divisible && self.rank == self.expected
    }
}

#[derive(Clone, Debug)]
pub struct JantzenLevel {
    pub level: usize,
    pub valuations: Vec<u32>,
    pub smith_dims: Vec<usize>,
    pub lemma14_dims: Vec<usize>,
    pub det_multiplicity: u32,
    pub layers: Vec<LayerCheck>,
}

impl JantzenLevel {
    pub fn consistent(&self) -> bool {
        let total: usize = self.smith_dims.iter().sum();
        self.smith_dims == self.lemma14_dims
            && total == self.det_multiplicity as usize
            && self.layers.iter().all(|l| l.ok())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "valuations": self.valuations,
            "smith_dims": self.smith_dims,
            "lemma14_dims": self.lemma14_dims,
            "det_multiplicity": self.det_multiplicity,
            "layers": self.layers.iter().map(|l| serde_json::json!({
                "k": l.k, "expected": l.expected, "rank": l.rank, "divisible": l.divisible
            })).collect::<Vec<_>>(),
            "consistent": self.consistent(),
        })
    }
}

fn layer_checks_block(m: &[Vec<Poly>]) -> Result<(Vec<u32>, Vec<LayerCheck>)> {
    let probe = local_smith(m, 0)?;
    let top = probe.valuations().last().copied().unwrap_or(0) as usize;
    let ls = local_smith(m, top + 1)?;
    let vals = ls.valuations();
    let prec = ls.prec;
    let g: Vec<Vec<TSeries>> = m
        .iter()
        .map(|row| row.iter().map(|p| to_series(p, prec)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let gx = |col: &[TSeries]| -> Vec<TSeries> {
        g.iter()
            .map(|row| {
                let mut acc = vec![Rational::zero(); prec];
                for (x, y) in row.iter().zip(col) {
                    for (s, t) in acc.iter_mut().zip(mul_trunc(x, y)) {
                        *s += t;
                    }
                }
                acc
            })
            .collect()
    };
    let mut checks = Vec::new();
    for k in 1..=top as u32 {
        let lifts: Vec<Vec<TSeries>> = ls
            .pivots
            .iter()
            .filter(|p| p.1 >= k)
            .map(|p| ls.column(p.0))
            .collect();
        let images: Vec<Vec<TSeries>> = lifts.iter().map(|c| gx(c)).collect();
        let mut divisible = true;
        let mut form = vec![vec![Rational::zero(); lifts.len()]; lifts.len()];
        for (i, xi) in lifts.iter().enumerate() {
            for (j, gj) in images.iter().enumerate() {
                let mut acc = vec![Rational::zero(); prec];
                for (x, y) in xi.iter().zip(gj) {
                    for (s, t) in acc.iter_mut().zip(mul_trunc(x, y)) {
                        *s += t;
                    }
                }
                if acc[..k as usize].iter().any(|c| !c.is_zero()) {
                    divisible = false;
                }
                form[i][j] = acc[k as usize].clone();
            }
        }
        checks.push(LayerCheck {
            k,
            expected: vals.iter().filter(|&&d| d == k).count(),
            rank: rank_q(&form),
            divisible,
        });
    }
    Ok((vals, checks))
}

/// Both Jantzen computations at `mu = a`, levels `1..=max_level`.
pub fn jantzen(ctx: &GlContext, a: &Rational, max_level: usize) -> Result<Vec<JantzenLevel>> {
    let mut tower = GramTower::new(ctx.clone());
    let mut slices = SliceCache::new(ctx.clone(), max_level);
    let mut out = Vec::new();
    for level in 1..=max_level {
        let lg = tower.level(level).clone();
        let mut vals = Vec::new();
        let mut by_k: BTreeMap<u32, LayerCheck> = BTreeMap::new();
        for b in &lg.blocks {
            let at_a = b.eval(a);
            if rank_q(&at_a) == b.members.len() {
                vals.extend(std::iter::repeat(0).take(b.members.len()));
                continue;
            }
            let (bv, checks) = layer_checks_block(&b.shifted(a))?;
            vals.extend(bv);
            for c in checks {
                let e = by_k.entry(c.k).or_insert(LayerCheck { k: c.k, expected: 0, rank: 0, divisible: true });
                e.expected += c.expected;
                e.rank += c.rank;
                e.divisible &= c.divisible;
            }
        }
        vals.sort_unstable();
        let det = lg.det()?;
        out.push(JantzenLevel {
            level,
            smith_dims: dims_from_valuations(&vals),
            valuations: vals,
            lemma14_dims: slices.lemma14_dims(a, level)?,
            det_multiplicity: det.root_multiplicity(Var::MU, a)?,
            layers: by_k.into_values().collect(),
        });
    }
    Ok(out)
}

/// Per-level rank of the Gram matrix at `mu = a`.
pub fn irr_quotient_dims(ctx: &GlContext, a: &Rational, max_level: usize) -> Vec<usize> {
    let mut tower = GramTower::new(ctx.clone());
    (1..=max_level).map(|l| tower.level(l).rank_at(a)).collect()
}

/// Dimension of the joint kernel of the Levi simple raisings at a level.
pub fn levi_kernel_dim(ctx: &GlContext, level: usize) -> Result<usize> {
    let basis = ctx.basis(level);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for x in ctx.levi_raising() {
        let images: Vec<ModElem> = basis
            .iter()
            .map(|m| ctx.act(x, &ModElem::monomial(m.clone(), Poly::one())))
            .collect::<Result<_>>()?;
        let mut keys: Vec<YMono> = images.iter().flat_map(|e| e.terms.keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            rows.push(
                images
                    .iter()
                    .map(|e| e.terms.get(&k).and_then(|c| c.constant_value()).unwrap_or_else(Rational::zero))
                    .collect(),
            );
        }
    }
    Ok(basis.len() - rank_q(&rows))
}

