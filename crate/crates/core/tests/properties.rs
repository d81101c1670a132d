use proptest::prelude::*;

use sl2z::coalgebra::{algebra_residuals, two_site_generators, DeformedModel};
use sl2z::hamiltonians::{build, HamiltonianSpec};
use sl2z::phase_space::{bracket, bracket_of_gradients, CartesianState, Observable};

fn state() -> impl Strategy<Value = CartesianState> {
    let q = prop_oneof![-1.5..-0.3f64, 0.3..1.5f64];
    let p = -1.5..1.5f64;
    (q.clone(), q, p.clone(), p).prop_map(|(q1, q2, p1, p2)| CartesianState::new(q1, q2, p1, p2))
}

fn model() -> impl Strategy<Value = DeformedModel> {
    (-1.0..1.0f64, -1.0..2.0f64, -1.0..2.0f64).prop_map(|(z, b1, b2)| DeformedModel::new(z, b1, b2))
}

/// `{a, {b, c}}` with the outer gradient of the inner bracket taken by central differences.
fn nested(a: &Observable, b: &Observable, c: &Observable, x: &CartesianState) -> f64 {
    let h = 1e-5;
    let mut grad = [0.0; 4];
    for (i, g) in grad.iter_mut().enumerate() {
        let shifted = |s: f64| {
            let mut v = x.to_array();
            v[i] += s;
            bracket(b, c, &CartesianState::from_array(v)).unwrap()
        };
        *g = (shifted(h) - shifted(-h)) / (2.0 * h);
    }
    bracket_of_gradients(&a.grad(x).unwrap(), &grad)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_antisymmetric(m in model(), x in state()) {
        let g = two_site_generators(&m);
        let [a, b, c] = [&g.j_minus, &g.j_plus, &g.j_3];
        for (f, h) in [(a, b), (b, c), (c, a)] {
            let fh = bracket(f, h, &x).unwrap();
            let hf = bracket(h, f, &x).unwrap();
            prop_assert!(close(fh, -hf, 1e-14), "{fh} vs {hf}");
        }
    }

    #[test]
    fn bracket_obeys_leibniz(m in model(), x in state()) {
        let g = two_site_generators(&m);
        let (f, g2, h) = (g.j_minus.clone(), g.j_plus.clone(), g.j_3.clone());
        let product = &f * &g2;
        let lhs = bracket(&product, &h, &x).unwrap();
        let rhs = f.eval(&x).unwrap() * bracket(&g2, &h, &x).unwrap()
            + g2.eval(&x).unwrap() * bracket(&f, &h, &x).unwrap();
        prop_assert!(close(lhs, rhs, 1e-11), "{lhs} vs {rhs}");
    }

    #[test]
    fn deformed_relations_hold(m in model(), x in state()) {
        let r = algebra_residuals(&m, &x).unwrap();
        prop_assert!(r.max_bracket() < 1e-9, "{r:?}");
        prop_assert!(r.r4 < 1e-9, "{r:?}");
    }

    #[test]
    fn every_kind_commutes_with_casimir(m in model(), x in state()) {
        for spec in [
            HamiltonianSpec::free_i(),
            HamiltonianSpec::free_s(),
            HamiltonianSpec::isw(0.6),
            HamiltonianSpec::ikc(0.9),
            HamiltonianSpec::ssw(0.6),
        ] {
            let set = build(&m, &spec).unwrap();
            let v = bracket(&set.h, &set.c_z, &x).unwrap();
            let scale = 1.0 + set.h.eval(&x).unwrap().abs() * set.c_z.eval(&x).unwrap().abs();
            prop_assert!(v.abs() < 1e-10 * scale, "{:?}: {v}", spec.kind);
        }
    }

    #[test]
    fn ssw_is_superintegrable(m in model(), x in state()) {
        let set = build(&m, &HamiltonianSpec::ssw(0.6)).unwrap();
        let iz = set.i_z.as_ref().unwrap();
        let v = bracket(&set.h, iz, &x).unwrap();
        let scale = 1.0 + set.h.eval(&x).unwrap().abs() * iz.eval(&x).unwrap().abs();
        prop_assert!(v.abs() < 1e-10 * scale, "{v}");
    }

    #[test]
    fn generators_satisfy_jacobi(m in model(), x in state()) {
        let g = two_site_generators(&m);
        let [a, b, c] = [&g.j_minus, &g.j_plus, &g.j_3];
        let sum = nested(a, b, c, &x) + nested(b, c, a, &x) + nested(c, a, b, &x);
        let scale = nested(a, b, c, &x).abs() + nested(b, c, a, &x).abs() + nested(c, a, b, &x).abs();
        prop_assert!(sum.abs() < 1e-6 * (1.0 + scale), "{sum}");
    }
}
