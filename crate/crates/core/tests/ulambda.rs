use proptest::prelude::*;
use vermaforge::exact::{q, qi, Poly, Rational, Var};
use vermaforge::glmod::{GlContext, GramTower};
use vermaforge::ulambda::*;

fn h() -> Poly {
    Poly::var(Var::H)
}

fn element() -> impl Strategy<Value = UElement> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(-3i64..=3, 1..=3)), 1..=3).prop_map(|parts| {
        let mut u = UElement::zero();
        for (g, cs) in parts {
            let p = Poly::from_univariate(Var::H, &cs.iter().map(|c| qi(*c)).collect::<Vec<_>>());
            u = u.add(&UElement::mono(g, p));
        }
        u
    })
}

fn gl(lambda: Rational, beta: Rational) -> GvmContext {
    GvmContext::new(&GvmParams::new(AlgebraKind::GlLambda).lambda(lambda).beta(beta)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn product_is_associative(x in element(), y in element(), z in element()) {
        let par = UParams::deformed(Poly::constant(q(5, 7)));
        let l = x.mul(&y, &par).mul(&z, &par);
        let r = x.mul(&y.mul(&z, &par), &par);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn tau_reverses_products(x in element(), y in element()) {
        let par = UParams::deformed(Poly::constant(q(5, 7)));
        prop_assert_eq!(x.mul(&y, &par).tau(&par), y.tau(&par).mul(&x.tau(&par), &par));
        prop_assert_eq!(x.tau(&par).tau(&par), x);
    }

    #[test]
    fn gamma_is_multiplicative(x in element(), y in element()) {
        let par = UParams::at_one(q(5, 7));
        let s = q(1, 3);
        let w = 12;
        let unit = BandAlgebra::new(w, Weights::Unit);
        let gx = gamma_s(&par, &x, &s, w).unwrap();
        let gy = gamma_s(&par, &y, &s, w).unwrap();
        let gxy = gamma_s(&par, &x.mul(&y, &par), &s, w).unwrap();
        let inner = w - gx.max_shift().max(gy.max_shift());
        prop_assert_eq!(unit.mul(&gx, &gy).restrict(inner), gxy.restrict(inner));
        // phi_s is multiplicative in the deformed band algebra, and Psi_s phi_s = Gamma_s
        let (alg, px) = phi_s(&par, &x, &s, w).unwrap();
        let (_, py) = phi_s(&par, &y, &s, w).unwrap();
        let (_, pxy) = phi_s(&par, &x.mul(&y, &par), &s, w).unwrap();
        prop_assert_eq!(alg.mul(&px, &py).restrict(inner), pxy.restrict(inner));
        prop_assert_eq!(psi_s(&alg, &px), gx);
    }
}

#[test]
fn tau_preserves_relations() {
    let par = UParams::deformed(Poly::var(Var::LAMBDA));
    let (e, f, hh) = (UElement::e(1), UElement::f(1), UElement::h());
    // ef = T_1(h), fe = T_2(h), he - eh = 2te
    let ef = e.mul(&f, &par);
    assert_eq!(f.tau(&par).mul(&e.tau(&par), &par), ef.tau(&par));
    assert_eq!(ef.tau(&par), UElement::poly(par.t1()));
    let comm = hh.commutator(&e, &par);
    let tcomm = e.tau(&par).commutator(&hh.tau(&par), &par);
    assert_eq!(comm.tau(&par), tcomm);
}

#[test]
fn gamma_of_ef() {
    let par = UParams::at_one(q(5, 7));
    let s = q(2, 5);
    let w = 6;
    let unit = BandAlgebra::new(w, Weights::Unit);
    let prod = unit.mul(&gamma_s(&par, &UElement::e(1), &s, w).unwrap(), &gamma_s(&par, &UElement::f(1), &s, w).unwrap());
    let direct = gamma_s(&par, &UElement::poly(par.t1()), &s, w).unwrap();
    assert_eq!(prod.restrict(w - 1), direct.restrict(w - 1));
    for i in -(w - 1)..w {
        let t1 = par.t1_at(&Poly::constant(&s - qi(2 * i))).constant_value().unwrap();
        assert_eq!(prod.get(i, 0), t1);
    }
}

/// Interpolating polynomial with `δ(s - 2m) = [m == j]` for `|m| <= r`.
fn delta(s: &Rational, j: i64, r: i64) -> Poly {
    let mut p = Poly::one();
    let xj = s - qi(2 * j);
    for m in -r..=r {
        if m != j {
            let xm = s - qi(2 * m);
            p = &p * &(&h() - &Poly::constant(xm.clone())).scale(&(&xj - &xm).recip());
        }
    }
    p
}

#[test]
fn delta_times_e_power() {
    let par = UParams::at_one(q(5, 7));
    let s = q(1, 3);
    let (w, r) = (8, 3);
    for i in 1..=3i64 {
        for j in -2..=1 {
            // δ e^i written with e on the left is e^i δ(h + 2i)
            let d = par.shift(&delta(&s, j, r), i);
            let g = gamma_s(&par, &UElement::mono(i, d), &s, w).unwrap();
            let mut expect = Rational::from_integer(1.into());
            for l in 0..i {
                expect *= par.t1_at(&Poly::constant(&s - qi(2 * j + 2 * l))).constant_value().unwrap();
            }
            for row in -r..=r {
                let want = if row == j { expect.clone() } else { qi(0) };
                assert_eq!(g.get(row, i), want, "i={i} j={j} row={row}");
            }
        }
    }
}

#[test]
fn character_extension_low_degree() {
    let p = GvmParams::new(AlgebraKind::GlLambda);
    let ctx = GvmContext::new(&p).unwrap();
    let c = ctx.params().c();
    let alpha = Poly::var(Var::BETA) - Poly::int(2);
    let chi_h = Poly::var(Var::CHI);
    // 3 χ(h²) - 2 c_λ = 2 (1 + α) χ(h)
    let lhs = ctx.chi_power(2).scale(&qi(3)) - c.scale(&qi(2));
    let rhs = (&(Poly::one() + alpha.clone()) * &chi_h).scale(&qi(2));
    assert_eq!(lhs, rhs);
    // χ([e, f (h-2)^{k-1}]) = α^{k-1} χ(h), with h^{k-1} f rewritten as f (h-2)^{k-1}
    for k in 1..=5u32 {
        let x = UElement::mono(-1, (&h() - &Poly::int(2)).pow(k - 1));
        let hk = ctx.bracket(&UElement::e(1), &x).part(0);
        assert_eq!(ctx.chi(&hk), &alpha.pow(k - 1) * &chi_h, "k={k}");
    }
    let hyp = GvmContext::new(&GvmParams::new(AlgebraKind::Hyperboloid)).unwrap();
    let expect = (&hyp.params().c() + &(&Poly::var(Var::BETA) * &chi_h)).scale(&q(2, 3));
    assert_eq!(hyp.chi_power(2), expect);
}

#[test]
fn higher_brackets_respect_the_character() {
    // χ vanishes on [e^2 p, n~_-^{(2)}] as well, not only on the defining constraints
    let ctx = gl(q(5, 7), q(1, 3));
    for a in 0..3u32 {
        for b in 0..3u32 {
            let x = UElement::mono(2, h().pow(a));
            let y = UElement::mono(-2, ctx.pi(2) * &h().pow(b));
            let c = ctx.bracket(&x, &y).part(0);
            assert!(ctx.chi(&c).is_zero(), "a={a} b={b}");
        }
    }
}

#[test]
fn lowering_subalgebra_has_codimension_l() {
    let hyp_params = GvmParams::new(AlgebraKind::Hyperboloid).lambda(q(5, 7)).beta(q(-2, 3)).max_level(4);
    let cone_params = GvmParams::new(AlgebraKind::Cone).beta(q(3, 2)).max_level(4);
    let gl_params = GvmParams::new(AlgebraKind::GlLambda).lambda(q(5, 7)).beta(q(1, 3)).max_level(4);
    for p in [gl_params, hyp_params, cone_params] {
        let ctx = GvmContext::new(&p).unwrap();
        for l in 1..=4 {
            let g = ctx.closure_generator(l).unwrap();
            assert_eq!(g.degree_in(Var::H), Some(l as u32), "{} l={l}", p.kind);
            assert_eq!(&g, ctx.pi(l), "{} l={l}", p.kind);
        }
    }
}

#[test]
fn gram_matrices_are_symmetric() {
    for p in [
        GvmParams::new(AlgebraKind::GlLambda).lambda(q(5, 7)).beta(q(1, 3)),
        GvmParams::new(AlgebraKind::Hyperboloid).lambda(q(5, 7)),
        GvmParams::new(AlgebraKind::Cone),
    ] {
        let ctx = GvmContext::new(&p).unwrap();
        for l in 1..=3 {
            let g = ctx.gram(l).unwrap();
            assert!(g.is_symmetric(), "{} level {l}", p.kind);
            assert_eq!(g.basis.len(), [1, 1, 3, 6][l]);
        }
    }
}

/// det Φ_k(μ) from the gl_∞ side with μ = χ/T_1(β), cleared of denominators.
fn predicted(level: usize, t1: &Rational) -> Poly {
    let mut tower = GramTower::new(GlContext::new(level));
    let d = tower.level(level).det().unwrap();
    d.subst(Var::MU, &Poly::var(Var::CHI).scale(&t1.recip()))
}

#[test]
fn gl_lambda_determinant_matches_gl_infinity() {
    let lambda = q(5, 7);
    for beta in [q(1, 3), q(-3, 2), q(4, 1)] {
        let ctx = gl(lambda.clone(), beta.clone());
        let t1 = ctx.params().t1_at(&Poly::constant(beta.clone())).constant_value().unwrap();
        for l in 1..=3 {
            let det = ctx.gram(l).unwrap().det;
            let pred = predicted(l, &t1);
            let ratio = det.lc() / pred.lc();
            assert_eq!(det, pred.scale(&ratio), "beta={beta} level {l}");
        }
    }
}

#[test]
fn exceptional_beta_gives_pure_powers() {
    let lambda = q(5, 7);
    for beta in [q(19, 7), q(-5, 7)] {
        let ctx = gl(lambda.clone(), beta.clone());
        assert!(ctx.params().t1_at(&Poly::constant(beta.clone())).is_zero());
        for (l, m) in [(1, 1u32), (2, 4), (3, 10)] {
            let det = ctx.gram(l).unwrap().det;
            let (n, rest) = strip_factor(&det, &Poly::var(Var::CHI));
            assert_eq!(n, m);
            assert!(rest.is_constant() && !rest.is_zero());
        }
    }
}

#[test]
fn character_on_one_does_not_matter() {
    let p = GvmParams::new(AlgebraKind::GlLambda).lambda(q(5, 7)).beta(q(1, 3));
    let with_one = GvmContext::new(&p).unwrap();
    let free = GvmContext::new(&p.clone().chi_one(Poly::var(Var::CHI1))).unwrap();
    for l in 1..=3 {
        assert_eq!(with_one.gram(l).unwrap().det, free.gram(l).unwrap().det);
    }
}

#[test]
fn hyperboloid_zero_set() {
    let lambda = q(5, 7);
    let ctx = GvmContext::new(&GvmParams::new(AlgebraKind::Hyperboloid).lambda(lambda.clone())).unwrap();
    let b = Poly::var(Var::BETA);
    let hyp = &(&b * &b) - &Poly::constant(&lambda * (&lambda + qi(2)));
    for (l, mc, mh) in [(1, 1, 0), (2, 3, 3), (3, 6, 12)] {
        let det = ctx.gram(l).unwrap().det;
        let (n1, rest) = strip_factor(&det, &Poly::var(Var::CHI));
        let (n2, rest) = strip_factor(&rest, &hyp);
        assert_eq!((n1, n2), (mc, mh), "level {l}");
        assert!(rest.is_constant() && !rest.is_zero());
    }
}

#[test]
fn cone_is_irreducible_off_the_axes() {
    let ctx = GvmContext::new(&GvmParams::new(AlgebraKind::Cone)).unwrap();
    for l in 1..=3 {
        let det = ctx.gram(l).unwrap().det;
        let (_, rest) = strip_factor(&det, &Poly::var(Var::CHI));
        let (_, rest) = strip_factor(&rest, &Poly::var(Var::BETA));
        assert!(rest.is_constant() && !rest.is_zero());
    }
}

#[test]
fn nested_brackets_are_singular_only_when_degenerate() {
    for i in -3..=3 {
        let c = degenerate_singular_check(i, 6, true).unwrap();
        assert!(c.singular(), "i={i}: {:?}", c.failures);
        let plain = degenerate_singular_check(i, 6, false).unwrap();
        assert!(!plain.singular(), "i={i}");
    }
}

#[test]
fn eq29_through_level_five() {
    let r = verify_eq29(5, 5, &q(1, 3), &q(5, 7)).unwrap();
    assert!(r.pass(), "{:?}", r.comparison);
    let lhs: Vec<String> = r.comparison.rows.iter().map(|r| r.lhs.to_string()).collect();
    assert_eq!(lhs, vec!["1", "4", "10", "26", "56"]);
}
