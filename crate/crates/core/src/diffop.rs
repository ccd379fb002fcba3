//! Polynomial differential operators `Σ c·x^a·∂^b` and the algebra
//! `e_i = x^{i+1}∂` they generate under composition.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::report::{sweep, CheckReport, Residual, Window};
use crate::scalar::Scalar;

/// Normal-ordered operator: every `x` power sits left of every `∂` power.
/// Keys are `(xpow, dorder)`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<S> {
    terms: BTreeMap<(u32, u32), S>,
}

impl<S: Scalar> Default for DiffOp<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> DiffOp<S> {
    pub fn zero() -> Self {
        DiffOp {
            terms: BTreeMap::new(),
        }
    }

    /// `c·x^a·∂^b`.
    pub fn monomial(xpow: u32, dorder: u32, c: S) -> Self {
        let mut d = Self::zero();
        d.add_term(xpow, dorder, c);
        d
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, S::one())
    }

    pub fn d() -> Self {
        Self::monomial(0, 1, S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, xpow: u32, dorder: u32) -> S {
        self.terms.get(&(xpow, dorder)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &S)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn add_term(&mut self, xpow: u32, dorder: u32, c: S) {
        if c.is_zero() {
            return;
        }
        let key = (xpow, dorder);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (&(a, b), v) in &self.terms {
            out.add_term(a, b, c.clone() * v.clone());
        }
        out
    }

    /// Operator composition `self ∘ rhs`, re-normal-ordered via
    /// `∂^b ∘ x^c = Σ_m C(b,m)·c!/(c−m)!·x^{c−m}·∂^{b−m}`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c1) in &self.terms {
            for (&(p, q), c2) in &rhs.terms {
                let base = c1.clone() * c2.clone();
                for m in 0..=b.min(p) {
                    let k = binomial(b, m) * falling(p, m);
                    let k = S::from_rational(&BigRational::from_integer(k));
                    out.add_term(a + p - m, b - m + q, base.clone() * k);
                }
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t))
}

/// `dop_compose(A, B) = A ∘ B`.
pub fn dop_compose<S: Scalar>(a: &DiffOp<S>, b: &DiffOp<S>) -> DiffOp<S> {
    a.compose(b)
}

impl<S: Scalar> std::ops::Add for DiffOp<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for ((a, b), c) in rhs.terms {
            self.add_term(a, b, c);
        }
        self
    }
}

impl<S: Scalar> std::ops::Sub for DiffOp<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> std::ops::Neg for DiffOp<S> {
    type Output = Self;
    fn neg(self) -> Self {
        DiffOp {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for DiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&(a, b), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*x^{a}*d^{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("L_k basis index must be non-negative, got {0}")]
pub struct NegativeIndex(pub i64);

/// `e_i = x^{i+1}∂`, defined for `i ≥ 0`.
pub fn lk_basis<S: Scalar>(i: i64) -> Result<DiffOp<S>, NegativeIndex> {
    if i < 0 {
        return Err(NegativeIndex(i));
    }
    Ok(DiffOp::monomial(i as u32 + 1, 1, S::one()))
}

fn e<S: Scalar>(i: i64) -> DiffOp<S> {
    lk_basis(i).expect("suite indices are non-negative")
}

fn int<S: Scalar>(n: i64) -> S {
    S::from_i64(n)
}

/// Closed form `e_p⋆e_q = (q+1)e_{p+q} + e_{p+q+1}∂`.
pub fn lk_star_closed<S: Scalar>(p: i64, q: i64) -> Result<DiffOp<S>, NegativeIndex> {
    let _ = lk_basis::<S>(p)?;
    let _ = lk_basis::<S>(q)?;
    Ok(e::<S>(p + q).scale(&int(q + 1)) + e::<S>(p + q + 1).compose(&DiffOp::d()))
}

/// Closed form of `e_p⋆e_q⋆e_r`.
pub fn lk_triple_closed<S: Scalar>(p: i64, q: i64, r: i64) -> DiffOp<S> {
    let n = p + q + r;
    let d = DiffOp::d();
    e::<S>(n).scale(&int((r + 1) * (q + r + 1)))
        + e::<S>(n + 1).compose(&d).scale(&int(q + 2 * r + 3))
        + e::<S>(n + 2).compose(&d).compose(&d)
}

fn comm<S: Scalar>(a: &DiffOp<S>, b: &DiffOp<S>) -> DiffOp<S> {
    a.compose(b) - b.compose(a)
}

fn ternary<S: Scalar>(a: &DiffOp<S>, b: &DiffOp<S>, c: &DiffOp<S>) -> DiffOp<S> {
    a.compose(&comm(b, c)) + b.compose(&comm(c, a)) + c.compose(&comm(a, b))
}

/// Checks available in [`lk_suite`].
pub const LK_CHECKS: [&str; 9] = [
    "assoc",
    "closed",
    "commutator",
    "ternary",
    "filippov",
    "bremner",
    "derivation",
    "ops",
    "final",
];

/// Options for [`lk_suite`].
#[derive(Debug, Clone)]
pub struct LkOptions {
    pub pmax: i64,
    /// Bremner is a 7-index identity and gets its own, smaller range.
    pub bremner_pmax: i64,
    pub cap: usize,
    pub checks: Vec<String>,
}

impl LkOptions {
    pub fn new(pmax: i64) -> Self {
        LkOptions {
            pmax,
            bremner_pmax: 2,
            cap: crate::report::DEFAULT_CAP,
            checks: LK_CHECKS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Runs the selected `L_k` identities over all index tuples in `[0, pmax]`.
pub fn lk_suite<S: Scalar>(opts: &LkOptions) -> Vec<CheckReport<S>> {
    let w = Window { lo: 0, hi: opts.pmax.max(0) };
    let cap = opts.cap;
    let want = |name: &str| opts.checks.iter().any(|c| c == name);
    let mut out = Vec::new();
    let op = |d: DiffOp<S>| Ok(Residual::Operator(d));

    if want("assoc") {
        out.push(sweep("lk_assoc", w, 3, cap, |t| {
            let (p, q, r) = (e::<S>(t[0]), e(t[1]), e(t[2]));
            op(p.compose(&q).compose(&r) - p.compose(&q.compose(&r)))
        }));
    }
    if want("closed") {
        out.push(sweep("lk_product_closed", w, 2, cap, |t| {
            op(e::<S>(t[0]).compose(&e(t[1])) - lk_star_closed(t[0], t[1]).unwrap())
        }));
        out.push(sweep("lk_triple_closed", w, 3, cap, |t| {
            let lhs = e::<S>(t[0]).compose(&e(t[1]).compose(&e(t[2])));
            op(lhs - lk_triple_closed(t[0], t[1], t[2]))
        }));
    }
    if want("commutator") {
        out.push(sweep("lk_commutator", w, 2, cap, |t| {
            let expected = e::<S>(t[0] + t[1]).scale(&int(t[1] - t[0]));
            op(comm(&e(t[0]), &e(t[1])) - expected)
        }));
    }
    if want("ternary") {
        out.push(sweep("lk_ternary", w, 3, cap, |t| {
            op(ternary(&e::<S>(t[0]), &e(t[1]), &e(t[2])))
        }));
    }
    if want("filippov") {
        out.push(sweep("lk_filippov", w, 5, cap, |t| {
            let [a, b, c, d, f] = [0, 1, 2, 3, 4].map(|k| e::<S>(t[k]));
            let lhs = ternary(&a, &b, &ternary(&c, &d, &f));
            let rhs = ternary(&ternary(&a, &b, &c), &d, &f)
                + ternary(&c, &ternary(&a, &b, &d), &f)
                + ternary(&c, &d, &ternary(&a, &b, &f));
            op(lhs - rhs)
        }));
    }
    if want("bremner") {
        let wb = Window { lo: 0, hi: opts.bremner_pmax.max(0) };
        out.push(sweep("lk_bremner", wb, 7, cap, |t| {
            let v: Vec<DiffOp<S>> = t.iter().map(|&k| e(k)).collect();
            let lhs = ternary(&ternary(&v[0], &ternary(&v[1], &v[2], &v[3]), &v[4]), &v[5], &v[6]);
            let rhs = ternary(&ternary(&v[0], &v[1], &v[2]), &ternary(&v[3], &v[4], &v[5]), &v[6]);
            op(lhs - rhs)
        }));
    }
    if want("derivation") {
        out.push(sweep("lk_derivation", w, 3, cap, |t| {
            let (p, q, r) = (e::<S>(t[0]), e(t[1]), e(t[2]));
            let lhs = comm(&p, &q.compose(&r));
            op(lhs - q.compose(&comm(&p, &r)) - comm(&p, &q).compose(&r))
        }));
        // The three expanded displays for the pieces of the derivation rule.
        out.push(sweep("lk_derivation_displays", w, 3, cap, |t| {
            let (p, q, r) = (t[0], t[1], t[2]);
            let n = p + q + r;
            let d = DiffOp::d();
            let closed = |c0: i64, c1: i64| {
                e::<S>(n).scale(&int(c0)) + e::<S>(n + 1).compose(&d).scale(&int(c1))
            };
            let (ep, eq, er) = (e::<S>(p), e(q), e(r));
            let rhs = comm(&ep, &eq.compose(&er))
                - closed((r + 1) * (q + r + 1) - (p + 1) * (p + r + 1), q + r - 2 * p);
            let lhs1 = eq.compose(&comm(&ep, &er)) - closed((p + r + 1) * (r - p), r - p);
            let lhs2 = comm(&ep, &eq).compose(&er) - closed((r + 1) * (q - p), q - p);
            op(rhs + lhs1 + lhs2)
        }));
    }
    if want("ops") {
        out.extend(lk_ops(w, cap));
    }
    if want("final") {
        out.push(sweep("lk_final", w, 3, cap, |t| {
            let (p, q, r) = (e::<S>(t[0]), e(t[1]), e(t[2]));
            let lhs = comm(&p, &comm(&q, &r)) + comm(&r, &comm(&p, &q));
            let pr = comm(&p, &r);
            op(lhs - (q.compose(&pr) - pr.compose(&q)))
        }));
    }
    out
}

/// The multiplication-operator identities, evaluated on basis arguments
/// `(p, q, s)` with `L_a(x) = a∘x`, `R_a(x) = x∘a`.
fn lk_ops<S: Scalar>(w: Window, cap: usize) -> Vec<CheckReport<S>> {
    type Case<S> = fn(&DiffOp<S>, &DiffOp<S>, &DiffOp<S>) -> DiffOp<S>;
    let cases: Vec<(&str, Case<S>)> = vec![
        // [L_p, L_q] = L_[p,q]
        ("lk_ops_h1", |p, q, x| {
            p.compose(&q.compose(x)) - q.compose(&p.compose(x)) - comm(p, q).compose(x)
        }),
        // R_[p,q] = −[R_p, R_q]
        ("lk_ops_h2", |p, q, x| {
            let rr = x.compose(q).compose(p) - x.compose(p).compose(q);
            x.compose(&comm(p, q)) + rr
        }),
        // [L_p, R_q] = 0
        ("lk_ops_h3", |p, q, x| p.compose(&x.compose(q)) - p.compose(x).compose(q)),
        // printed middle form: e_p⋆[x, e_q] = 0
        ("lk_ops_h3_printed", |p, q, x| p.compose(&comm(x, q))),
        // printed: [R_p, L_q](x) = e_q⋆[e_p, x]
        ("lk_ops_h4_printed", |p, q, x| {
            let lhs = q.compose(x).compose(p) - q.compose(&x.compose(p));
            lhs - q.compose(&comm(p, x))
        }),
        // [R_p R_q + R_{p⋆q}](x) = x⋆[R_p(q) + R_q(p)]
        ("lk_ops_h5", |p, q, x| {
            let lhs = x.compose(q).compose(p) + x.compose(&p.compose(q));
            lhs - x.compose(&(q.compose(p) + p.compose(q)))
        }),
    ];
    cases
        .into_iter()
        .map(|(name, case)| {
            sweep(name, w, 3, cap, |t| {
                Ok(Residual::Operator(case(&e(t[0]), &e(t[1]), &e(t[2]))))
            })
        })
        .collect()
}
