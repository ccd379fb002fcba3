use gvir_core::cohomology::{delta1, delta2, kernel_basis, solve_coboundary, Cochain1, CoboundaryVerdict};
use gvir_core::expr::presets;
use gvir_core::{parse_expr, Algebra, AlgebraSpec, Rational, Window};
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn witt() -> Algebra<Rational> {
    Algebra::new(&AlgebraSpec::new(parse_expr(presets::WITT_F).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // δ₂ on [-5,5] reads ψ on [-10,10], which needs φ on [-20,20].
    #[test]
    fn delta2_after_delta1_vanishes(vals in prop::collection::vec(-50i64..50, 41)) {
        let alg = witt();
        let phi = Cochain1::from_fn(Window::new(-20, 20).unwrap(), |x| q(vals[(x + 20) as usize]));
        let (psi, poles) = delta1(&alg, &phi, Window::new(-10, 10).unwrap()).unwrap();
        prop_assert!(poles.is_empty());
        let d2 = delta2(&alg, &psi, Window::new(-5, 5).unwrap());
        prop_assert_eq!(d2.len(), 11 * 11 * 11);
        prop_assert!(d2.values().all(Zero::is_zero));
    }
}

#[test]
fn roundtrip_for_x_squared() {
    let alg = witt();
    let w = Window::new(-4, 4).unwrap();
    let phi = Cochain1::from_fn(w.doubled(), |x| q(x * x));
    let (psi, _) = delta1(&alg, &phi, w).unwrap();
    let CoboundaryVerdict::Solution(sol) = solve_coboundary(&alg, &psi, w) else {
        panic!("a coboundary must be solvable")
    };
    let (back, _) = delta1(&alg, &sol, w).unwrap();
    assert_eq!(back, psi);
}

#[test]
fn witt_kernel_spans_identity_cochain() {
    let alg = witt();
    let w = Window::new(-3, 3).unwrap();
    let basis = kernel_basis::<Rational, _>(&alg, w);
    assert!(!basis.is_empty());
    let target = Cochain1::from_fn(w.doubled(), q);
    // Each basis vector has a 1 at its own free coordinate and 0 at the
    // other free coordinates, so the coefficients can be read off directly.
    let free: Vec<i64> = basis
        .iter()
        .map(|b| *b.phi.iter().find(|(x, v)| **v == q(1) && basis.iter().filter(|o| !o.phi[x].is_zero()).count() == 1).unwrap().0)
        .collect();
    let mut combo = Cochain1::from_fn(w.doubled(), |_| q(0));
    for (b, x) in basis.iter().zip(&free) {
        let c = target.phi[x].clone();
        for (y, v) in &b.phi {
            *combo.phi.get_mut(y).unwrap() += c.clone() * v;
        }
    }
    assert_eq!(combo, target);
}

#[test]
fn non_coboundary_is_rejected_with_witness() {
    let alg = witt();
    let w = Window::new(-2, 2).unwrap();
    // The Virasoro cocycle restricted to the window.
    let psi = gvir_core::cohomology::Cochain2::from_fn(w, |i, j| if i + j == 0 { q(i * i * i - i) } else { q(0) })
        .unwrap();
    match solve_coboundary(&alg, &psi, w) {
        CoboundaryVerdict::Infeasible { combination, residual } => {
            assert!(!residual.is_zero());
            assert!(!combination.is_empty());
        }
        CoboundaryVerdict::Solution(_) => panic!("the Gelfand-Fuchs cocycle is not a coboundary"),
    }
}
