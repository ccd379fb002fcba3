//! Graded products `e_i ⋆ e_j = f(i,j) e_{i+j} + f_θ(i,j) θ` and the
//! operations built from them.

use crate::element::{Element, PoleError};
use crate::expr::{eval_ast, ExprAst};
use crate::scalar::Scalar;
use crate::spec::AlgebraSpec;

/// Which half of the structure function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Plain,
    Theta,
}

/// A bilinear product given on basis vectors. `θ` annihilates on both sides.
pub trait Product<S: Scalar>: Sync {
    /// `e_i ⋆ e_j`.
    fn basis(&self, i: i64, j: i64) -> Result<Element<S>, PoleError>;

    /// Bracket weights `(a, b)` in `[x, y] = a x⋆y − b y⋆x`.
    fn weights(&self) -> (S, S) {
        (S::one(), S::one())
    }
}

/// Derived operations, available on every [`Product`].
pub trait ProductExt<S: Scalar>: Product<S> {
    /// `(f(i,j), f_θ(i,j))`, read off `e_i ⋆ e_j`.
    fn structure(&self, i: i64, j: i64) -> Result<(S, S), PoleError> {
        let e = self.basis(i, j)?;
        Ok((e.coeff(i + j), e.theta().clone()))
    }

    /// `g(i,j) = a f(i,j) − b f(j,i)` for both the plain and `θ` parts.
    fn g_from_f(&self, i: i64, j: i64) -> Result<(S, S), PoleError> {
        let (a, b) = self.weights();
        let (fp, ft) = self.structure(i, j)?;
        let (rp, rt) = self.structure(j, i)?;
        Ok((
            a.clone() * fp - b.clone() * rp,
            a * ft - b * rt,
        ))
    }

    fn star(&self, x: &Element<S>, y: &Element<S>) -> Result<Element<S>, PoleError> {
        let mut out = Element::zero();
        for (i, c) in x.terms() {
            for (j, d) in y.terms() {
                out.add_scaled(&(c.clone() * d.clone()), &self.basis(i, j)?);
            }
        }
        Ok(out)
    }

    fn bracket(&self, x: &Element<S>, y: &Element<S>) -> Result<Element<S>, PoleError> {
        let (a, b) = self.weights();
        Ok(self.star(x, y)?.scale(&a) - self.star(y, x)?.scale(&b))
    }

    /// `(x⋆y)⋆z − x⋆(y⋆z)`.
    fn associator(
        &self,
        x: &Element<S>,
        y: &Element<S>,
        z: &Element<S>,
    ) -> Result<Element<S>, PoleError> {
        Ok(self.star(&self.star(x, y)?, z)? - self.star(x, &self.star(y, z)?)?)
    }

    /// `(x,y,z) − (y,x,z)`; vanishes iff the product is left-symmetric there.
    fn lsym_defect(
        &self,
        x: &Element<S>,
        y: &Element<S>,
        z: &Element<S>,
    ) -> Result<Element<S>, PoleError> {
        Ok(self.associator(x, y, z)? - self.associator(y, x, z)?)
    }

    /// `x⋆[y,z] + y⋆[z,x] + z⋆[x,y]`.
    fn ternary_bracket(
        &self,
        x: &Element<S>,
        y: &Element<S>,
        z: &Element<S>,
    ) -> Result<Element<S>, PoleError> {
        Ok(self.star(x, &self.bracket(y, z)?)?
            + self.star(y, &self.bracket(z, x)?)?
            + self.star(z, &self.bracket(x, y)?)?)
    }
}

impl<S: Scalar, P: Product<S> + ?Sized> ProductExt<S> for P {}

/// The algebra described by an [`AlgebraSpec`], with `eps` substituted.
#[derive(Debug, Clone)]
pub struct Algebra<S> {
    f: ExprAst,
    f_theta: Option<ExprAst>,
    a: S,
    b: S,
    eps: S,
}

impl<S: Scalar> Algebra<S> {
    pub fn new(spec: &AlgebraSpec) -> Self {
        Algebra {
            f: spec.f.clone(),
            f_theta: spec.f_theta.clone(),
            a: S::from_rational(&spec.a),
            b: S::from_rational(&spec.b),
            eps: S::from_rational(&spec.eps),
        }
    }

    /// Overrides the substituted value of `eps` (e.g. with a dual number).
    pub fn with_eps(mut self, eps: S) -> Self {
        self.eps = eps;
        self
    }

    pub fn eps(&self) -> &S {
        &self.eps
    }

    pub fn has_theta(&self) -> bool {
        self.f_theta.is_some()
    }

    /// `f(i,j)` or `f_θ(i,j)`; `None` at a pole.
    pub fn eval_struct(&self, which: Part, i: i64, j: i64) -> Option<S> {
        match which {
            Part::Plain => eval_ast(&self.f, i, j, &self.eps),
            Part::Theta => match &self.f_theta {
                Some(t) => eval_ast(t, i, j, &self.eps),
                None => Some(S::zero()),
            },
        }
    }
}

impl<S: Scalar> Product<S> for Algebra<S> {
    fn basis(&self, i: i64, j: i64) -> Result<Element<S>, PoleError> {
        let pole = PoleError { i, j };
        let plain = self.eval_struct(Part::Plain, i, j).ok_or(pole)?;
        let theta = self.eval_struct(Part::Theta, i, j).ok_or(pole)?;
        Ok(Element::from_terms([(i + j, plain)], theta))
    }

    fn weights(&self) -> (S, S) {
        (self.a.clone(), self.b.clone())
    }
}

/// Product given by an explicit closure; handy for ad-hoc tables in tests.
pub struct FnProduct<F> {
    pub f: F,
}

impl<S: Scalar, F> Product<S> for FnProduct<F>
where
    F: Fn(i64, i64) -> Result<Element<S>, PoleError> + Sync,
{
    fn basis(&self, i: i64, j: i64) -> Result<Element<S>, PoleError> {
        (self.f)(i, j)
    }
}

/// Same underlying product with different bracket weights.
pub struct Reweighted<'a, P: ?Sized, S> {
    pub inner: &'a P,
    pub a: S,
    pub b: S,
}

impl<S: Scalar, P: Product<S> + ?Sized> Product<S> for Reweighted<'_, P, S> {
    fn basis(&self, i: i64, j: i64) -> Result<Element<S>, PoleError> {
        self.inner.basis(i, j)
    }

    fn weights(&self) -> (S, S) {
        (self.a.clone(), self.b.clone())
    }
}
