use super::uelem::{check_general_lambda, UParams};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, Var};
use crate::glmod::{GlContext, GramTower};
use crate::qseries::{series_from_product, CoeffRow, Comparison, ProductSpec};
use crate::report::{rational_string, VerificationReport};
use num::Zero;

/// Generator `f^i δ_j` of the δ-basis, `j ∈ [-i+1, 0]`.
pub type DeltaGen = (u32, i64);

/// Ordered monomials of δ-generators of total degree `level`.
pub fn delta_basis(level: u32) -> Vec<Vec<DeltaGen>> {
    fn rec(rem: u32, cap: DeltaGen, cur: &mut Vec<DeltaGen>, out: &mut Vec<Vec<DeltaGen>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for i in (1..=rem.min(cap.0)).rev() {
            for j in (-(i as i64) + 1..=0).rev() {
                let g = (i, j);
                if g > cap {
                    continue;
                }
                cur.push(g);
                rec(rem - i, g, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(level, (u32::MAX, i64::MAX), &mut Vec::new(), &mut out);
    out
}

/// `∏_w ∏_m ∏_{l < i_m} T_1(s - 2 j_m - 2 l)` with `s` given as a polynomial.
pub fn delta_factor(par: &UParams, s: &Poly, level: u32) -> Poly {
    let mut acc = Poly::one();
    for w in delta_basis(level) {
        for (i, j) in w {
            for l in 0..i as i64 {
                let x = s - &Poly::int(2 * j + 2 * l);
                acc = &acc * &par.t1_at(&x);
            }
        }
    }
    acc
}

/// Zero order of the δ-factor at a root `s0` of T_1, via `s = s0 + t`.
pub fn zero_order_at(par: &UParams, s0: &Rational, level: u32) -> u32 {
    let s = Poly::var(Var::T) + Poly::constant(s0.clone());
    delta_factor(par, &s, level).valuation(Var::T).unwrap_or(0)
}

/// Checks the factorization of the Gram determinant through the band
/// realization: zero orders of the δ-factor at both roots of T_1 against
/// the μ-degree of the gl_∞ determinant and the local identity coefficient.
pub fn verify_eq29(n: usize, level: usize, s: &Rational, lambda: &Rational) -> Result<VerificationReport> {
    if level > n {
        return Err(Error::Invalid(format!("level {level} needs n >= level, got n = {n}")));
    }
    check_general_lambda(lambda)?;
    let par = UParams::at_one(lambda.clone());
    let two = Rational::from_integer(2.into());
    let roots = [lambda + &two, -lambda.clone()];
    let spec = ProductSpec::generated(level, |g| vec![(1, g as i64)]);
    let local = series_from_product(&spec, level)?.d_da_at_one();
    let mut tower = GramTower::new(GlContext::new(n));
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for k in 1..=level {
        let deg = tower.level(k).det()?.degree_in(Var::MU).unwrap_or(0) as i64;
        let orders: Vec<u32> = roots.iter().map(|r| zero_order_at(&par, r, k as u32)).collect();
        let q = local.coeff(k).clone();
        let lhs = Poly::int(orders[0] as i64);
        let rhs = Poly::int(deg);
        let matches = orders.iter().all(|o| Poly::int(*o as i64) == rhs) && rhs == q;
        rows.push(CoeffRow { k, lhs, rhs, matches });
    }
    let t1s = par.t1_at(&Poly::constant(s.clone())).constant_value().unwrap_or_else(Rational::zero);
    let f1 = delta_factor(&par, &Poly::constant(s.clone()), 1);
    if f1 != Poly::constant(t1s.clone()) {
        rows.push(CoeffRow { k: 1, lhs: f1, rhs: Poly::constant(t1s.clone()), matches: false });
    }
    let fs = delta_factor(&par, &Poly::constant(s.clone()), level as u32);
    notes.push(format!("factor at s: {}", fs));
    notes.push(format!("T_1(s) = {}", rational_string(&t1s)));
    if t1s.is_zero() {
        notes.push("s is exceptional: T_1(s) = 0".into());
    }
    let pass = rows.iter().all(|r| r.matches);
    Ok(VerificationReport {
        id: "eq29".into(),
        params: vec![
            ("n".into(), n.to_string()),
            ("level".into(), level.to_string()),
            ("s".into(), rational_string(s)),
            ("lambda".into(), rational_string(lambda)),
        ],
        order: level,
        comparison: Comparison { rows, pass },
        notes,
    })
}
