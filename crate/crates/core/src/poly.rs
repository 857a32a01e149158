//! Exact multivariate polynomials over the rationals, graded by a
//! [`GradedGroup`].
//!
//! Terms are kept in a fixed graded-lexicographic order (total degree first,
//! then lexicographic on exponent vectors), so printed and serialized forms
//! are deterministic. The grading context pairs the group with the degrees
//! of the variables; [`RingCtx::component_basis`] enumerates the monomials
//! of a given degree, which is a finite set whenever all variable weights
//! are positive.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grading::{GradedGroup, GroupElement};
use crate::linalg::Rat;

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Grading context: the group together with the degrees of the variables.
#[derive(Debug)]
pub struct RingCtx {
    group: Arc<GradedGroup>,
    var_degrees: Vec<GroupElement>,
}

impl PartialEq for RingCtx {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.var_degrees == other.var_degrees
    }
}
impl Eq for RingCtx {}

impl RingCtx {
    pub fn new(group: Arc<GradedGroup>, var_degrees: Vec<GroupElement>) -> Arc<Self> {
        Arc::new(RingCtx { group, var_degrees })
    }

    pub fn group(&self) -> &Arc<GradedGroup> {
        &self.group
    }

    pub fn nvars(&self) -> usize {
        self.var_degrees.len()
    }

    pub fn var_degree(&self, i: usize) -> &GroupElement {
        &self.var_degrees[i]
    }

    pub fn var_degrees(&self) -> &[GroupElement] {
        &self.var_degrees
    }

    pub fn zero_degree(&self) -> GroupElement {
        self.group.zero()
    }

    pub fn degree_of(&self, m: &Monomial) -> GroupElement {
        assert_eq!(m.0.len(), self.nvars());
        let mut d = self.group.zero();
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                d = d.add(&self.var_degrees[i].scale(e as i64));
            }
        }
        d
    }

    /// All monomials of degree exactly `d`, in ascending monomial order.
    ///
    /// Finiteness needs every variable weight positive; the chain
    /// constructors guarantee that.
    pub fn component_basis(&self, d: &GroupElement) -> Result<Vec<Monomial>> {
        let n = self.nvars();
        let weight = self.group.free_weight(d)?;
        if weight.is_negative() {
            return Ok(Vec::new());
        }
        let var_weights: Vec<Rat> = self
            .var_degrees
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let w = self.group.free_weight(v)?;
                if !w.is_positive() {
                    return Err(Error::NonPositiveWeight(i));
                }
                Ok(w)
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        self.enumerate(d, 0, &var_weights, &mut exps, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        remaining: &GroupElement,
        i: usize,
        var_weights: &[Rat],
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == self.nvars() {
            if remaining.is_zero() {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let w = self
            .group
            .free_weight(remaining)
            .expect("rank checked by caller");
        if w.is_negative() {
            return;
        }
        // e_i is bounded by weight(remaining) / weight(x_i).
        let bound = num::ToPrimitive::to_u32(&(&w / &var_weights[i]).floor().to_integer())
            .expect("graded component bound exceeds u32");
        let mut rem = remaining.clone();
        for e in 0..=bound {
            exps[i] = e;
            self.enumerate(&rem, i + 1, var_weights, exps, out);
            rem = rem.sub(&self.var_degrees[i]);
        }
        exps[i] = 0;
    }
}

/// A polynomial with exact rational coefficients in a grading context.
///
/// The zero polynomial stores no terms. Coefficients are never zero.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<RingCtx>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(ctx: &Arc<RingCtx>) -> Self {
        Poly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<RingCtx>) -> Self {
        Poly::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &Arc<RingCtx>, c: Rat) -> Self {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.nvars()), c);
        }
        p
    }

    pub fn var(ctx: &Arc<RingCtx>, i: usize) -> Self {
        Poly::monomial(ctx, Monomial::var(ctx.nvars(), i, 1), Rat::one())
    }

    pub fn var_pow(ctx: &Arc<RingCtx>, i: usize, e: u32) -> Self {
        Poly::monomial(ctx, Monomial::var(ctx.nvars(), i, e), Rat::one())
    }

    pub fn monomial(ctx: &Arc<RingCtx>, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.0.len(), ctx.nvars());
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert!(same_ctx(&self.ctx, &other.ctx), "context mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => {
                    *acc += c;
                    if acc.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Poly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert!(same_ctx(&self.ctx, &other.ctx), "context mismatch");
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match terms.get_mut(&m) {
                    Some(acc) => {
                        *acc += c;
                        if acc.is_zero() {
                            terms.remove(&m);
                        }
                    }
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        Poly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// Substitute zero for variable `i`: terms containing it are dropped.
    pub fn substitute_zero(&self, i: usize) -> Poly {
        Poly {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms, if any. Zero is homogeneous of every
    /// degree, reported as `None` by `common_degree` but accepted everywhere.
    pub fn is_homogeneous(&self) -> Option<GroupElement> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let d = self.ctx.degree_of(first);
        for m in it {
            if self.ctx.degree_of(m) != d {
                return None;
            }
        }
        Some(d)
    }

    /// True when every term has degree `d` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, d: &GroupElement) -> bool {
        self.terms.keys().all(|m| self.ctx.degree_of(m) == *d)
    }

    /// Re-express in a larger context whose variables extend this one's.
    /// Exponent vectors are zero-padded; coefficients are unchanged.
    pub fn extend_to(&self, target: &Arc<RingCtx>) -> Poly {
        let pad = target.nvars() - self.ctx.nvars();
        Poly {
            ctx: Arc::clone(target),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat(0).take(pad));
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }
}

pub fn same_ctx(a: &Arc<RingCtx>, b: &Arc<RingCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() || !c.is_one() {
                write!(f, "{c}")?;
                if !m.is_one() {
                    write!(f, "*")?;
                }
            }
            let mut started = false;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if started {
                    write!(f, "*")?;
                }
                started = true;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn ctx_2_2() -> (Arc<RingCtx>, GroupElement) {
        let (g, vars, f) = GradedGroup::maximal_chain_grading(&[2, 2]).unwrap();
        (RingCtx::new(g, vars), f)
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![1, 2]);
        let c = Monomial(vec![0, 4]);
        assert!(a < b && b < c);
        let d = Monomial(vec![0, 2]);
        let e = Monomial(vec![1, 1]);
        assert!(d < e, "ties broken lexicographically");
    }

    #[test]
    fn degree_of_examples() {
        let (ctx, _) = ctx_2_2();
        let m = Monomial(vec![1, 2]); // x1 * x2^2
        assert_eq!(ctx.degree_of(&m).free_part(), &[int(4)]);
        assert!(ctx.degree_of(&Monomial::one(2)).is_zero());
    }

    #[test]
    fn homogeneity() {
        let (ctx, f_deg) = ctx_2_2();
        let f = Poly::var_pow(&ctx, 0, 2).add(&Poly::var(&ctx, 0).mul(&Poly::var_pow(&ctx, 1, 2)));
        assert_eq!(f.is_homogeneous(), Some(f_deg));
        let bad = Poly::var_pow(&ctx, 0, 2).add(&Poly::var(&ctx, 1));
        assert_eq!(bad.is_homogeneous(), None);
    }

    #[test]
    fn component_basis_at_f() {
        let (ctx, f_deg) = ctx_2_2();
        let basis = ctx.component_basis(&f_deg).unwrap();
        assert_eq!(
            basis,
            vec![
                Monomial(vec![2, 0]),
                Monomial(vec![1, 2]),
                Monomial(vec![0, 4])
            ]
        );
        // Degree zero component is the constants.
        let z = ctx.zero_degree();
        assert_eq!(ctx.component_basis(&z).unwrap(), vec![Monomial::one(2)]);
        // Negative weight: empty.
        let neg = f_deg.neg();
        assert!(ctx.component_basis(&neg).unwrap().is_empty());
    }

    #[test]
    fn component_basis_respects_torsion() {
        let (g, vars, _) = GradedGroup::maximal_chain_grading(&[3, 2]).unwrap();
        let ctx = RingCtx::new(g, vars);
        // x1 and x2 have equal weight 1/3 but different torsion, so the
        // component of deg(x1) is exactly {x1}.
        let d = ctx.var_degree(0).clone();
        assert_eq!(ctx.component_basis(&d).unwrap(), vec![Monomial(vec![1, 0])]);
    }

    #[test]
    fn arithmetic_basics() {
        let (ctx, _) = ctx_2_2();
        let x = Poly::var(&ctx, 0);
        let y = Poly::var(&ctx, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        let expect = x
            .mul(&x)
            .add(&x.mul(&y).scale(&rat(2, 1)))
            .add(&y.mul(&y));
        assert_eq!(sq, expect);
        assert!(s.sub(&s).is_zero());
        assert_eq!(sq.substitute_zero(0), y.mul(&y));
    }
}
