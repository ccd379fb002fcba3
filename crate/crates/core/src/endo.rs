//! Linear endomorphisms `Φ`, `ρ` of the graded algebra.

use std::collections::BTreeMap;

use crate::element::Element;
use crate::report::Window;
use crate::scalar::Scalar;

/// A linear map on elements.
///
/// `Shift(x0)` sends `e_x ↦ e_{x+x0}` and fixes `θ`. A `Table` lists the
/// image of each basis vector (absent entries map to zero) and scales `θ`.
#[derive(Debug, Clone, PartialEq)]
pub enum EndoSpec<S> {
    Shift(i64),
    Table {
        images: BTreeMap<i64, Element<S>>,
        theta: S,
    },
}

impl<S: Scalar> EndoSpec<S> {
    /// The identity map on `{e_x : x ∈ w}` (and on `θ`).
    pub fn identity_on(w: Window) -> Self {
        EndoSpec::Table {
            images: w.iter().map(|x| (x, Element::basis(x))).collect(),
            theta: S::one(),
        }
    }

    /// The zero map.
    pub fn zero() -> Self {
        EndoSpec::Table {
            images: BTreeMap::new(),
            theta: S::zero(),
        }
    }

    /// Table from `(source, target, coefficient)` triples: `e_source ↦ Σ c e_target`.
    pub fn from_entries<I: IntoIterator<Item = (i64, i64, S)>>(entries: I, theta: S) -> Self {
        let mut images: BTreeMap<i64, Element<S>> = BTreeMap::new();
        for (src, dst, c) in entries {
            images.entry(src).or_default().add_term(dst, c);
        }
        images.retain(|_, e| !e.is_zero());
        EndoSpec::Table { images, theta }
    }

    pub fn apply_basis(&self, x: i64) -> Element<S> {
        match self {
            EndoSpec::Shift(x0) => Element::basis(x + x0),
            EndoSpec::Table { images, .. } => images.get(&x).cloned().unwrap_or_default(),
        }
    }

    pub fn apply(&self, v: &Element<S>) -> Element<S> {
        match self {
            EndoSpec::Shift(x0) => v.shifted(*x0),
            EndoSpec::Table { images, theta } => {
                let mut out = Element::central(theta.clone() * v.theta().clone());
                for (x, c) in v.terms() {
                    if let Some(img) = images.get(&x) {
                        out.add_scaled(c, img);
                    }
                }
                out
            }
        }
    }
}
