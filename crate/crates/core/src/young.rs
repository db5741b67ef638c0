//! Young diagrams built from blocks of columns: `l_i` columns of height `i`.

use crate::error::{Error, Result};
use crate::exact::{qi, Poly, Var};
use crate::qseries::{Factor, Series};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Diagram {
    blocks: BTreeMap<u32, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub partition: Vec<u32>,
    pub size: u32,
    pub weight: u32,
    pub height: u32,
    pub central: u32,
    /// cell count per diagonal `column - row`
    pub diagonals: BTreeMap<i64, u32>,
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram::default()
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (i, l) in blocks {
            assert!(i >= 1, "block height starts at 1");
            if l > 0 {
                *m.entry(i).or_insert(0) += l;
            }
        }
        Diagram { blocks: m }
    }

    /// `Det_k`
    pub fn det(k: u32) -> Self {
        Diagram::from_blocks([(k, 1)])
    }

    pub fn blocks(&self) -> &BTreeMap<u32, u32> {
        &self.blocks
    }

    pub fn l(&self, i: u32) -> u32 {
        self.blocks.get(&i).copied().unwrap_or(0)
    }

    /// Number of `Det` factors.
    pub fn factors(&self) -> u32 {
        self.blocks.values().sum()
    }

    /// Heights of the Det factors, ascending.
    pub fn factor_heights(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .flat_map(|(&i, &l)| std::iter::repeat(i).take(l as usize))
            .collect()
    }

    pub fn height(&self) -> u32 {
        self.blocks.keys().next_back().copied().unwrap_or(0)
    }

    /// Row lengths `lambda_i = sum_{j >= i} l_j`.
    pub fn partition(&self) -> Vec<u32> {
        (1..=self.height())
            .map(|i| self.blocks.range(i..).map(|(_, l)| l).sum())
            .collect()
    }

    /// Column heights, i.e. the conjugate partition.
    pub fn columns(&self) -> Vec<u32> {
        let mut cols = self.factor_heights();
        cols.reverse();
        cols
    }

    pub fn size(&self) -> u32 {
        self.blocks.iter().map(|(i, l)| i * l).sum()
    }

    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(|(i, l)| i * i * l).sum()
    }

    /// Cells as 1-based (row, column).
    pub fn cells(&self) -> Vec<(u32, u32)> {
        self.partition()
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |c| (r as u32 + 1, c)))
            .collect()
    }

    pub fn hook(&self, r: u32, c: u32) -> u32 {
        let rows = self.partition();
        let cols = self.columns();
        rows[r as usize - 1] - c + cols[c as usize - 1] - r + 1
    }

    pub fn stats(&self) -> Stats {
        let mut diagonals = BTreeMap::new();
        for (r, c) in self.cells() {
            *diagonals.entry(c as i64 - r as i64).or_insert(0) += 1;
        }
        Stats {
            partition: self.partition(),
            size: self.size(),
            weight: self.weight(),
            height: self.height(),
            central: diagonals.get(&0).copied().unwrap_or(0),
            diagonals,
        }
    }

    /// Monic `prod_{cells} (mu - (c - r))`.
    pub fn p_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (r, c) in self.cells() {
            p = &p * &Poly::linear(Var::MU, &qi(c as i64 - r as i64));
        }
        p
    }

    /// Same polynomial from the shifting rule: with factors in ascending
    /// height, the factor at position `i` of `L` contributes `p_k(mu - (L-1-i))`
    /// where `p_k = mu (mu+1) ... (mu+k-1)`.
    pub fn p_poly_technique1(&self) -> Poly {
        let hs = self.factor_heights();
        let len = hs.len() as i64;
        let mut p = Poly::one();
        for (i, &k) in hs.iter().enumerate() {
            let shift = len - 1 - i as i64;
            for j in 0..k as i64 {
                p = &p * &Poly::linear(Var::MU, &qi(shift - j));
            }
        }
        p
    }

    /// Normalized principal specialization: `prod 1/(1-q^hook)`, or with a
    /// rank `n`, `prod (1-q^(n+content))/(1-q^hook)`.
    pub fn chi_series(&self, order: usize, n: Option<u32>) -> Result<Series> {
        if let Some(n) = n {
            if self.height() > n {
                return Err(Error::TooTall { height: self.height() as usize, n: n as usize });
            }
        }
        let mut s = Series::one(order);
        for (r, c) in self.cells() {
            if let Some(n) = n {
                let g = (n as i64 + c as i64 - r as i64) as u32;
                s.mul_factor(&Factor::new(0, g, -1))?;
            }
            s.mul_factor(&Factor::new(0, self.hook(r, c), 1))?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks: serde_json::Map<String, serde_json::Value> = self
            .blocks
            .iter()
            .map(|(i, l)| (i.to_string(), serde_json::Value::from(*l)))
            .collect();
        serde_json::json!({ "blocks": blocks })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Diagram> {
        let bad = || Error::Invalid("malformed diagram JSON".into());
        let obj = v.get("blocks").and_then(|b| b.as_object()).ok_or_else(bad)?;
        let mut blocks = Vec::new();
        for (k, l) in obj {
            let i: u32 = k.parse().map_err(|_| bad())?;
            let l = l.as_u64().ok_or_else(bad)? as u32;
            if i == 0 {
                return Err(bad());
            }
            blocks.push((i, l));
        }
        Ok(Diagram::from_blocks(blocks))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(i, l)| if *l == 1 { format!("Det{i}") } else { format!("Det{i}^{l}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Constraint `min <= sum_{s >= from} l_s <= max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailBound {
    pub from: u32,
    pub min: Option<u32>,
    pub max: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramFilter {
    pub bounds: Vec<TailBound>,
}

impl DiagramFilter {
    pub fn none() -> Self {
        DiagramFilter::default()
    }

    pub fn tail_at_most(from: u32, max: u32) -> Self {
        DiagramFilter { bounds: vec![TailBound { from, min: None, max: Some(max) }] }
    }

    pub fn tail_at_least(from: u32, min: u32) -> Self {
        DiagramFilter { bounds: vec![TailBound { from, min: Some(min), max: None }] }
    }

    pub fn and(mut self, other: DiagramFilter) -> Self {
        self.bounds.extend(other.bounds);
        self
    }

    pub fn accepts(&self, d: &Diagram) -> bool {
        self.bounds.iter().all(|b| {
            let tail: u32 = d.blocks.range(b.from..).map(|(_, l)| l).sum();
            b.min.map_or(true, |m| tail >= m) && b.max.map_or(true, |m| tail <= m)
        })
    }
}

/// Diagrams of weight at most `max_weight` accepted by `filter`, ordered by
/// weight and then by block multiplicities.
pub fn enumerate(max_weight: u32, filter: &DiagramFilter) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut top = 1;
    while (top + 1) * (top + 1) <= max_weight {
        top += 1;
    }
    let mut cur = Vec::new();
    fill(1, top, max_weight, &mut cur, &mut out);
    out.retain(|d| filter.accepts(d));
    out.sort_by(|a, b| {
        a.weight()
            .cmp(&b.weight())
            .then_with(|| a.factor_heights().cmp(&b.factor_heights()))
    });
    out
}

fn fill(i: u32, top: u32, budget: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Diagram>) {
    if i > top {
        out.push(Diagram::from_blocks(cur.iter().copied()));
        return;
    }
    for l in 0..=budget / (i * i) {
        cur.push((i, l));
        fill(i + 1, top, budget - l * i * i, cur, out);
        cur.pop();
    }
}
