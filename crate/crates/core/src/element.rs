//! Graded elements `Σ c_x e_x + t θ` with finite support.

use std::collections::BTreeMap;
use std::fmt;


use crate::scalar::Scalar;

/// A structure-function value was undefined (division by a non-unit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, thiserror::Error)]
#[error("structure function undefined at ({i}, {j})")]
pub struct PoleError {
    pub i: i64,
    pub j: i64,
}

/// Finite linear combination of basis vectors `e_x` plus a central `θ` part.
///
/// Zero coefficients are never stored, so structural equality is algebraic
/// equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<S> {
    terms: BTreeMap<i64, S>,
    theta: S,
}

impl<S: Scalar> Default for Element<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
            theta: S::zero(),
        }
    }

    /// The basis vector `e_x`.
    pub fn basis(x: i64) -> Self {
        Self::monomial(x, S::one())
    }

    pub fn monomial(x: i64, c: S) -> Self {
        let mut e = Self::zero();
        e.add_term(x, c);
        e
    }

    /// The central element `θ`.
    pub fn theta_unit() -> Self {
        Self::central(S::one())
    }

    pub fn central(c: S) -> Self {
        Element {
            terms: BTreeMap::new(),
            theta: c,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, S)>>(terms: I, theta: S) -> Self {
        let mut e = Self::central(theta);
        for (x, c) in terms {
            e.add_term(x, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.theta.is_zero()
    }

    pub fn theta(&self) -> &S {
        &self.theta
    }

    /// Coefficient of `e_x` (zero when absent).
    pub fn coeff(&self, x: i64) -> S {
        self.terms.get(&x).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> + '_ {
        self.terms.iter().map(|(&x, c)| (x, c))
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c·e_x` in place, keeping the canonical form.
    pub fn add_term(&mut self, x: i64, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&x) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(x, sum);
                }
            }
            None => {
                self.terms.insert(x, c);
            }
        }
    }

    pub fn add_theta(&mut self, c: S) {
        self.theta = self.theta.clone() + c;
    }

    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (&x, v) in &other.terms {
            self.add_term(x, c.clone() * v.clone());
        }
        self.add_theta(c.clone() * other.theta.clone());
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Element<T> {
        Element::from_terms(self.terms.iter().map(|(&x, c)| (x, f(c))), f(&self.theta))
    }

    /// Moves every `e_x` to `e_{x+shift}`; `θ` is fixed.
    pub fn shifted(&self, shift: i64) -> Self {
        Element {
            terms: self.terms.iter().map(|(&x, c)| (x + shift, c.clone())).collect(),
            theta: self.theta.clone(),
        }
    }

    /// The same element with the `θ` coefficient removed.
    pub fn without_theta(&self) -> Self {
        Element {
            terms: self.terms.clone(),
            theta: S::zero(),
        }
    }
}

impl<S: Scalar> std::ops::Add for Element<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (x, c) in rhs.terms {
            self.add_term(x, c);
        }
        self.add_theta(rhs.theta);
        self
    }
}

impl<S: Scalar> std::ops::Sub for Element<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> std::ops::Neg for Element<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Element {
            terms: self.terms.into_iter().map(|(x, c)| (x, -c)).collect(),
            theta: -self.theta,
        }
    }
}

impl<S: Scalar> std::iter::Sum for Element<S> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, e| acc + e)
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (x, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*e[{x}]")?;
            first = false;
        }
        if !self.theta.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})*theta", self.theta)?;
        }
        Ok(())
    }
}

/// An element of `A ⊕ A` (or `A ⊕ A*`): two graded components.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedElement<S> {
    pub primal: Element<S>,
    pub dual: Element<S>,
}

impl<S: Scalar> PairedElement<S> {
    pub fn new(primal: Element<S>, dual: Element<S>) -> Self {
        PairedElement { primal, dual }
    }

    pub fn zero() -> Self {
        Self::new(Element::zero(), Element::zero())
    }

    pub fn primal_basis(x: i64) -> Self {
        Self::new(Element::basis(x), Element::zero())
    }

    pub fn dual_basis(x: i64) -> Self {
        Self::new(Element::zero(), Element::basis(x))
    }

    pub fn is_zero(&self) -> bool {
        self.primal.is_zero() && self.dual.is_zero()
    }
}

impl<S: Scalar> std::ops::Add for PairedElement<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.primal + rhs.primal, self.dual + rhs.dual)
    }
}

impl<S: Scalar> std::ops::Sub for PairedElement<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.primal - rhs.primal, self.dual - rhs.dual)
    }
}

impl<S: Scalar> fmt::Display for PairedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.primal, self.dual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::One;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = Element::monomial(3, r(2)) + Element::monomial(5, r(1));
        let b = Element::monomial(3, r(-2));
        let s = a + b;
        assert_eq!(s.support_len(), 1);
        assert_eq!(s.coeff(3), r(0));
        assert_eq!(s.coeff(5), Rational::one());
    }

    #[test]
    fn zero_scale_is_zero() {
        let a = Element::monomial(1, r(4)) + Element::central(r(3));
        assert!(a.scale(&r(0)).is_zero());
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn shift_keeps_theta() {
        let a = Element::monomial(1, r(4)) + Element::central(r(3));
        let s = a.shifted(2);
        assert_eq!(s.coeff(3), r(4));
        assert_eq!(s.theta(), &r(3));
    }
}
