//! Extensions of a graded product: the phase space `T*A = A ⊕ A*`, the
//! double `A ⊕ A`, nilpotent deformations and lifted endomorphisms.
//!
//! Paired basis tuples are reported as flattened `(slot, index)` pairs with
//! slot `0` for the first component and `1` for the second. Only the plain
//! part of the structure function is used; `θ` has no dual here.

use crate::algebra::{Product, ProductExt};
use crate::element::{Element, PairedElement, PoleError};
use crate::endo::EndoSpec;
use crate::report::{sweep_tuples, CheckReport, Residual, Window};
use crate::scalar::{Dual, Scalar};

fn plain<S: Scalar>(e: Element<S>) -> Element<S> {
    e.without_theta()
}

/// `e_i ⋆ e'_j = −f(i, j−i) e'_{j−i}` extended bilinearly, i.e. the dual of
/// left multiplication under `⟨e'_a, e_b⟩ = δ_{a,b}`.
pub fn dual_left_action<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    x: &Element<S>,
    a: &Element<S>,
) -> Result<Element<S>, PoleError> {
    let mut out = Element::zero();
    for (i, c) in x.terms() {
        for (j, d) in a.terms() {
            let f = p.structure(i, j - i)?.0;
            out.add_term(j - i, -(c.clone() * d.clone() * f));
        }
    }
    Ok(out)
}

/// `⟨a, y⟩` for `a ∈ A*`, `y ∈ A`.
pub fn pairing<S: Scalar>(a: &Element<S>, y: &Element<S>) -> S {
    a.terms().fold(S::zero(), |acc, (x, c)| acc + c.clone() * y.coeff(x))
}

/// `(x, a) ⋆ (y, b) = (x⋆y, L*_x b)`.
///
/// The dual component acts trivially from the left; this is the
/// semidirect product of `A` with the dual of its left-regular module.
pub fn tstar_product<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    u: &PairedElement<S>,
    v: &PairedElement<S>,
) -> Result<PairedElement<S>, PoleError> {
    Ok(PairedElement::new(
        plain(p.star(&u.primal, &v.primal)?),
        dual_left_action(p, &u.primal, &v.dual)?,
    ))
}

/// `(x, a) ⋆₂ (y, b) = (x⋆y, x⋆b − y⋆a)` with both components in `A`.
pub fn double_product<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    u: &PairedElement<S>,
    v: &PairedElement<S>,
) -> Result<PairedElement<S>, PoleError> {
    Ok(PairedElement::new(
        plain(p.star(&u.primal, &v.primal)?),
        plain(p.star(&u.primal, &v.dual)? - p.star(&v.primal, &u.dual)?),
    ))
}

fn slot_basis<S: Scalar>(slot: i64, x: i64) -> PairedElement<S> {
    if slot == 0 {
        PairedElement::primal_basis(x)
    } else {
        PairedElement::dual_basis(x)
    }
}

/// All `(slot, index)^arity` tuples over `w`, flattened.
fn mixed_tuples(w: Window, arity: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<i64>| {
                [0, 1].into_iter().flat_map(move |s| {
                    let t = t.clone();
                    w.iter().map(move |x| {
                        let mut u = t.clone();
                        u.extend([s, x]);
                        u
                    })
                })
            })
            .collect();
    }
    out
}

fn lsym_paired<S: Scalar>(
    mul: &(dyn Fn(&PairedElement<S>, &PairedElement<S>) -> Result<PairedElement<S>, PoleError> + Sync),
    x: &PairedElement<S>,
    y: &PairedElement<S>,
    z: &PairedElement<S>,
) -> Result<PairedElement<S>, PoleError> {
    let assoc = |a: &PairedElement<S>, b: &PairedElement<S>, c: &PairedElement<S>| {
        Ok::<_, PoleError>(mul(&mul(a, b)?, c)? - mul(a, &mul(b, c)?)?)
    };
    Ok(assoc(x, y, z)? - assoc(y, x, z)?)
}

/// Left-symmetry of [`tstar_product`] on all mixed basis triples of `w`.
///
/// A triple `(e_x, e_y, e'_a)` is undefined whenever the transposed
/// `A`-triple `(x, y, a−x−y)` touches a pole: the dual identity is the
/// transpose of that one, so it is meaningless where the latter is.
pub fn check_tstar_lsa<S: Scalar, P: Product<S> + ?Sized>(p: &P, w: Window, cap: usize) -> CheckReport<S> {
    let mul = |u: &PairedElement<S>, v: &PairedElement<S>| tstar_product(p, u, v);
    sweep_tuples("tstar_lsa", w, mixed_tuples(w, 3), cap, |t| {
        if t[0] == 0 && t[2] == 0 && t[4] == 1 {
            let z = t[5] - t[1] - t[3];
            p.lsym_defect(&Element::basis(t[1]), &Element::basis(t[3]), &Element::basis(z))?;
        }
        let [x, y, z] = [0, 2, 4].map(|n| slot_basis::<S>(t[n], t[n + 1]));
        lsym_paired(&mul, &x, &y, &z).map(Residual::from)
    })
    .with_note("tuples are (slot, index) pairs; slot 1 is the dual copy")
}

/// Left-symmetry of [`double_product`] on all mixed basis triples of `w`.
///
/// Triples with a second-copy entry in one of the first two slots pick up
/// `2 z⋆(y⋆a) + (y⋆z)⋆a − y⋆(z⋆a)`, so this generally fails even when `A`
/// itself is left-symmetric.
pub fn check_double_lsa<S: Scalar, P: Product<S> + ?Sized>(p: &P, w: Window, cap: usize) -> CheckReport<S> {
    let mul = |u: &PairedElement<S>, v: &PairedElement<S>| double_product(p, u, v);
    sweep_tuples("double_lsa", w, mixed_tuples(w, 3), cap, |t| {
        let [x, y, z] = [0, 2, 4].map(|n| slot_basis::<S>(t[n], t[n + 1]));
        lsym_paired(&mul, &x, &y, &z).map(Residual::from)
    })
    .with_note("tuples are (slot, index) pairs; slot 1 is the second copy")
}

/// `x ⋆' y = x⋆y + nil·(ρ(x)⋆y)` over dual scalars.
pub struct Deformed<'a, P: ?Sized, T> {
    pub inner: &'a P,
    pub rho: &'a EndoSpec<Dual<T>>,
}

impl<T: Scalar, P: Product<Dual<T>> + ?Sized> Product<Dual<T>> for Deformed<'_, P, T> {
    fn basis(&self, i: i64, j: i64) -> Result<Element<Dual<T>>, PoleError> {
        let base = self.inner.basis(i, j)?;
        let rx = self.rho.apply_basis(i);
        let bent = self.inner.star(&rx, &Element::basis(j))?;
        Ok(base + bent.scale(&Dual::unit_nil()))
    }

    fn weights(&self) -> (Dual<T>, Dual<T>) {
        self.inner.weights()
    }
}

pub fn deform_product<'a, T: Scalar, P: Product<Dual<T>> + ?Sized>(
    inner: &'a P,
    rho: &'a EndoSpec<Dual<T>>,
) -> Deformed<'a, P, T> {
    Deformed { inner, rho }
}

/// `ρ₁(x, a) = (ρ(x), 0)` for `ρ = shift(x0)`; checks
/// `P⋆ρ₁Q − Q⋆ρ₁P = ρ₁(P⋆Q − Q⋆P)` on mixed basis pairs of `T*A`.
pub fn check_rho1_lift<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    w: Window,
    cap: usize,
    x0: i64,
) -> CheckReport<S> {
    let rho1 = |u: &PairedElement<S>| PairedElement::new(u.primal.shifted(x0), Element::zero());
    sweep_tuples("rho1_lift", w, mixed_tuples(w, 2), cap, |t| {
        let u = slot_basis::<S>(t[0], t[1]);
        let v = slot_basis::<S>(t[2], t[3]);
        let m = |a: &PairedElement<S>, b: &PairedElement<S>| tstar_product(p, a, b);
        let lhs = m(&u, &rho1(&v))? - m(&v, &rho1(&u))?;
        let rhs = rho1(&(m(&u, &v)? - m(&v, &u)?));
        Ok((lhs - rhs).into())
    })
    .with_note("tuples are (slot, index) pairs; slot 1 is the dual copy")
}

/// `ρ₂(x, a) = (ρ(x) + g·a, μ·x + ν·a)` on the double, with user constants.
#[derive(Debug, Clone)]
pub struct Rho2<S> {
    pub rho: EndoSpec<S>,
    pub g: S,
    pub mu: S,
    pub nu: S,
}

impl<S: Scalar> Rho2<S> {
    pub fn apply(&self, u: &PairedElement<S>) -> PairedElement<S> {
        PairedElement::new(
            self.rho.apply(&u.primal) + u.dual.scale(&self.g),
            u.primal.scale(&self.mu) + u.dual.scale(&self.nu),
        )
    }
}

/// Compatibility `P⋆₂ρ₂Q − Q⋆₂ρ₂P = ρ₂(P⋆₂Q − Q⋆₂P)` on mixed basis pairs.
pub fn check_rho2_compat<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    w: Window,
    cap: usize,
    rho2: &Rho2<S>,
) -> CheckReport<S> {
    sweep_tuples("rho2_compat", w, mixed_tuples(w, 2), cap, |t| {
        let u = slot_basis::<S>(t[0], t[1]);
        let v = slot_basis::<S>(t[2], t[3]);
        let m = |a: &PairedElement<S>, b: &PairedElement<S>| double_product(p, a, b);
        let lhs = m(&u, &rho2.apply(&v))? - m(&v, &rho2.apply(&u))?;
        let rhs = rho2.apply(&(m(&u, &v)? - m(&v, &u)?));
        Ok((lhs - rhs).into())
    })
    .with_note("tuples are (slot, index) pairs; slot 1 is the second copy")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::expr::{parse_expr, presets};
    use crate::identities::{check_quasi_assoc, Mode};
    use crate::scalar::parse_rational;
    use crate::spec::AlgebraSpec;
    use crate::{DualRational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn alg<S: Scalar>(f: &str, eps: &str) -> Algebra<S> {
        Algebra::new(&AlgebraSpec::new(parse_expr(f).unwrap()).with_eps(q(eps)))
    }

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn tstar_examples() {
        let witt = alg::<Rational>(presets::WITT_F, "0");
        let p = tstar_product(&witt, &PairedElement::primal_basis(1), &PairedElement::dual_basis(3)).unwrap();
        assert_eq!(p.dual, Element::monomial(2, q("2")));
        assert!(p.primal.is_zero());
        let d = tstar_product(&witt, &PairedElement::dual_basis(1), &PairedElement::primal_basis(3)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn pairing_consistency() {
        let k = alg::<Rational>(presets::KUPERSHMIDT_F, "1/3");
        for (i, j, kk) in [(1, 4, 3), (2, -1, -3), (0, 2, 2), (-2, 1, 3)] {
            let (ei, ej, ek) = (Element::basis(i), Element::basis(j), Element::basis(kk));
            let lhs = pairing(&dual_left_action(&k, &ei, &ej).unwrap(), &ek);
            let rhs = -pairing(&ej, &k.star(&ei, &ek).unwrap());
            assert_eq!(lhs, rhs, "({i},{j},{kk})");
        }
    }

    #[test]
    fn tstar_lsa_verdicts() {
        assert!(check_tstar_lsa(&alg::<Rational>(presets::WITT_F, "0"), w(-3, 3), 5).holds());
        assert!(check_tstar_lsa(&alg::<Rational>(presets::KUPERSHMIDT_F, "1/2"), w(-3, 3), 5).holds());
        assert!(check_tstar_lsa(&alg::<Rational>("i", "0"), w(-2, 2), 5).fails());
    }

    #[test]
    fn double_examples() {
        let witt = alg::<Rational>(presets::WITT_F, "0");
        let u = PairedElement::new(Element::basis(1), Element::basis(0));
        let v = PairedElement::new(Element::basis(2), Element::basis(0));
        let r = double_product(&witt, &u, &v).unwrap();
        assert_eq!(r, PairedElement::new(Element::monomial(3, q("-2")), Element::zero()));
        // Not left-symmetric even for Witt: with a in the second slot,
        // defect((0,e_a),(e_y,0),(e_z,0)) = (2ay + a²) e_{a+y+z} in the second copy.
        let r = check_double_lsa(&witt, w(-3, 3), 500);
        assert!(r.fails());
        let res = r.residual_at(&[1, 1, 0, 0, 0, 0]).unwrap();
        let Residual::Paired(pe) = res else { panic!("{res:?}") };
        assert_eq!(pe.dual, Element::monomial(1, q("1")));
    }

    #[test]
    fn deformation() {
        let witt = alg::<DualRational>(presets::WITT_F, "0");
        let rho = EndoSpec::Shift(2);
        let d = deform_product(&witt, &rho);
        let r = d.basis(1, 2).unwrap();
        assert_eq!(r.coeff(3), DualRational::real(q("-2")));
        assert_eq!(r.coeff(5), DualRational::new(q("0"), q("-2")));
        assert!(check_quasi_assoc(&d, w(-4, 4), 5, Mode::Element).holds());
        let zero = EndoSpec::zero();
        let d0 = deform_product(&witt, &zero);
        assert_eq!(d0.basis(3, -1).unwrap(), witt.basis(3, -1).unwrap());
    }

    #[test]
    fn rho1_examples() {
        assert!(check_rho1_lift(&alg::<Rational>(presets::WITT_F, "0"), w(-3, 3), 5, 2).holds());
        let k = alg::<Rational>(presets::KUPERSHMIDT_F, "1/2");
        let r = check_rho1_lift(&k, w(-3, 3), 50, 1);
        assert!(r.fails());
        let res = r.residual_at(&[0, 1, 0, 2]).unwrap();
        let Residual::Paired(pe) = res else { panic!("{res:?}") };
        assert_eq!(pe.primal.coeff(4), q("-1/6"));
        assert!(check_rho1_lift(&k, w(-3, 3), 5, 0).holds());
    }
}
