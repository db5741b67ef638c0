use super::module::{mono_name, GlContext, ModElem, YMono};
use crate::error::Result;
use crate::exact::{bareiss_det, rank_q, Matrix, Poly, Rational, Var};
use crate::report::{factored, roots_json};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct Block {
    pub weight: Vec<u32>,
    /// positions in the level basis
    pub members: Vec<usize>,
    pub matrix: Matrix<Poly>,
}

impl Block {
    pub fn det(&self) -> Result<Poly> {
        bareiss_det(&self.matrix)
    }

    pub fn eval(&self, mu: &Rational) -> Matrix<Rational> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.eval(Var::MU, mu).constant_value().expect("entries are polynomials in mu"))
                    .collect()
            })
            .collect()
    }

    /// Entries with `mu` replaced by `a + t`.
    pub fn shifted(&self, a: &Rational) -> Matrix<Poly> {
        let sub = Poly::var(Var::T) + Poly::constant(a.clone());
        self.matrix
            .iter()
            .map(|row| row.iter().map(|p| p.subst(Var::MU, &sub)).collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct LevelGram {
    pub level: usize,
    pub basis: Vec<YMono>,
    pub blocks: Vec<Block>,
    /// basis monomial -> (block, position in block)
    pub pos: HashMap<YMono, (usize, usize)>,
}

impl LevelGram {
    pub fn entry(&self, a: &YMono, b: &YMono) -> Poly {
        match (self.pos.get(a), self.pos.get(b)) {
            (Some(&(ba, ia)), Some(&(bb, ib))) if ba == bb => self.blocks[ba].matrix[ia][ib].clone(),
            _ => Poly::zero(),
        }
    }

    /// Gram matrix in basis order.
    pub fn full_matrix(&self) -> Matrix<Poly> {
        let n = self.basis.len();
        let mut m = vec![vec![Poly::zero(); n]; n];
        for b in &self.blocks {
            for (i, &gi) in b.members.iter().enumerate() {
                for (j, &gj) in b.members.iter().enumerate() {
                    m[gi][gj] = b.matrix[i][j].clone();
                }
            }
        }
        m
    }

    /// Product of block determinants.
    pub fn det(&self) -> Result<Poly> {
        let mut d = Poly::one();
        for b in &self.blocks {
            d = &d * &b.det()?;
        }
        Ok(d)
    }

    pub fn rank_at(&self, mu: &Rational) -> usize {
        self.blocks.iter().map(|b| rank_q(&b.eval(mu))).sum()
    }
}

/// Shapovalov Gram matrices of all levels up to the highest requested one.
/// Level `L` entries come from `<y_p m, b> = <m, x_p b>` and level `L - deg y_p`.
#[derive(Clone, Debug)]
pub struct GramTower {
    ctx: GlContext,
    levels: Vec<LevelGram>,
}

impl GramTower {
    pub fn new(ctx: GlContext) -> Self {
        let zero = vec![0u8; ctx.nvars()];
        let mut pos = HashMap::new();
        pos.insert(zero.clone(), (0, 0));
        let l0 = LevelGram {
            level: 0,
            basis: vec![zero.clone()],
            blocks: vec![Block {
                weight: ctx.weight(&zero),
                members: vec![0],
                matrix: vec![vec![Poly::one()]],
            }],
            pos,
        };
        GramTower { ctx, levels: vec![l0] }
    }

    pub fn ctx(&self) -> &GlContext {
        &self.ctx
    }

    pub fn level(&mut self, level: usize) -> &LevelGram {
        while self.levels.len() <= level {
            let next = self.build(self.levels.len());
            self.levels.push(next);
        }
        &self.levels[level]
    }

    fn build(&self, level: usize) -> LevelGram {
        let ctx = &self.ctx;
        let basis = ctx.basis(level);
        let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (i, m) in basis.iter().enumerate() {
            groups.entry(ctx.weight(m)).or_default().push(i);
        }
        let mut blocks = Vec::new();
        let mut pos = HashMap::new();
        for (bi, (weight, members)) in groups.into_iter().enumerate() {
            let k = members.len();
            let mut matrix = vec![vec![Poly::zero(); k]; k];
            for (i, &gi) in members.iter().enumerate() {
                let bm = &basis[gi];
                let p = bm.iter().position(|&e| e > 0).expect("positive level");
                let mut rest = bm.clone();
                rest[p] -= 1;
                let lower = &self.levels[level - ctx.deg(p)];
                for (j, &gj) in members.iter().enumerate().skip(i) {
                    let image = ctx.apply_upper(p, &ModElem::monomial(basis[gj].clone(), Poly::one()));
                    let mut acc = Poly::zero();
                    for (m, c) in &image.terms {
                        let g = lower.entry(&rest, m);
                        if !g.is_zero() {
                            acc += &(c * &g);
                        }
                    }
                    matrix[i][j] = acc.clone();
                    matrix[j][i] = acc;
                }
            }
            for (i, &gi) in members.iter().enumerate() {
                pos.insert(basis[gi].clone(), (bi, i));
            }
            blocks.push(Block { weight, members, matrix });
        }
        LevelGram { level, basis, blocks, pos }
    }

    pub fn report(&mut self, level: usize, with_matrix: bool) -> Result<GramReport> {
        let n = self.ctx.n();
        let lg = self.level(level);
        let det = lg.det()?;
        let (roots, lc, det_str) = factored(&det, Var::MU)?;
        Ok(GramReport {
            n,
            level,
            basis: lg.basis.iter().map(|m| mono_name(m, n)).collect(),
            matrix: if with_matrix { Some(lg.full_matrix()) } else { None },
            det,
            det_factored: det_str,
            lc,
            roots,
        })
    }
}

#[derive(Clone, Debug)]
pub struct GramReport {
    pub n: usize,
    pub level: usize,
    pub basis: Vec<String>,
    pub matrix: Option<Matrix<Poly>>,
    pub det: Poly,
    pub det_factored: String,
    pub lc: Rational,
    pub roots: Vec<(Rational, u32)>,
}

impl GramReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "n": self.n,
            "level": self.level,
            "basis": self.basis,
            "det": self.det_factored,
            "lc": crate::report::rational_string(&self.lc),
            "det_expanded": self.det.to_string(),
            "roots": roots_json("mu", &self.roots),
        });
        if let Some(m) = &self.matrix {
            v["matrix"] = serde_json::Value::from(
                m.iter()
                    .map(|row| row.iter().map(|p| p.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            );
        }
        v
    }
}
