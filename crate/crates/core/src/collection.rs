//! The inductive exceptional collection for chain polynomials.
//!
//! For exponents `a_1, …, a_n` the tower holds one grading level per prefix:
//! the group `L_m`, the ring context, and the potential
//! `f_m = x_1^{a_1} + x_1 x_2^{a_2} + … + x_{m-1} x_m^{a_m}`. The functors
//! `psi : C_m -> C_{m+1}` and `phi : C_m -> C_{m+2}` are realized by their
//! explicit block matrices; writing `x = x_m`, `y = x_{m+1}`, `z = x_{m+2}`,
//! `b = a_{m+1}`, `c = a_{m+2}` (with `x = 1` at the bottom of the tower):
//!
//! ```text
//! psi F = ( F~1 ⊕ F~0(-y)  --[phi1  y; -x y^(b-1)  phi0]-->  F~0 ⊕ F~1(f-y)  --> … )
//! phi F = same blocks with g = x y^(b-1) + z^c in place of x y^(b-1)
//! ```
//!
//! The collection is `E^m = (psi_0 E^{m-1}, …, psi_{a_m-2} E^{m-1},
//! phi_0 E^{m-2}, …, phi_{a_{m-1}-1} E^{m-2})` seeded by `E^0 = (0 -> k -> 0)`.
//! All verification suites (exceptionality, strongness, semi-orthogonality,
//! Serre duality, the psi/phi dimension identities, and the cone triangle)
//! are exact computations over the rationals.

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grading::{GradedGroup, GroupElement};
use crate::linalg::Rat;
use crate::mf::{
    self, cone, hom_dim, is_strict_iso, MatrixFactorization, MfMorphism, PolyMat,
};
use crate::poly::{Poly, RingCtx};
use crate::report::{CheckReport, Violation};

/// One step of a recursion word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Psi(u32),
    Phi(u32),
}

/// Recursion word identifying an object of `E^n`; outermost functor first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label(pub Vec<Step>);

impl Label {
    pub fn root() -> Self {
        Label(Vec::new())
    }

    pub fn prefixed(&self, s: Step) -> Label {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(s);
        v.extend(self.0.iter().copied());
        Label(v)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            match s {
                Step::Psi(i) => write!(f, "psi{i}.")?,
                Step::Phi(j) => write!(f, "phi{j}.")?,
            }
        }
        write!(f, "E0")
    }
}

/// A member of the collection: its recursion word and the factorization.
#[derive(Clone, Debug)]
pub struct ExceptionalObject {
    pub label: Label,
    pub mf: MatrixFactorization,
}

/// Grading and ring data of one prefix level.
#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub ctx: Arc<RingCtx>,
    pub potential: Poly,
    pub pot_deg: GroupElement,
}

/// All levels `0..=n` of the chain recursion for one exponent vector.
#[derive(Clone, Debug)]
pub struct ChainTower {
    exponents: Vec<u32>,
    levels: Vec<ChainLevel>,
}

/// The chain polynomial `f_m` in a given context, `f_0 = 0`.
pub fn chain_polynomial(ctx: &Arc<RingCtx>, exponents: &[u32]) -> Poly {
    let mut f = Poly::zero(ctx);
    for (i, &a) in exponents.iter().enumerate() {
        let mut term = Poly::var_pow(ctx, i, a);
        if i > 0 {
            term = term.mul(&Poly::var(ctx, i - 1));
        }
        f = f.add(&term);
    }
    f
}

impl ChainTower {
    pub fn new(exponents: &[u32]) -> Result<Self> {
        let mut levels = Vec::with_capacity(exponents.len() + 1);
        for m in 0..=exponents.len() {
            let prefix = &exponents[..m];
            let (group, var_degs, f_deg) = GradedGroup::maximal_chain_grading(prefix)?;
            let ctx = RingCtx::new(group, var_degs);
            let potential = chain_polynomial(&ctx, prefix);
            levels.push(ChainLevel {
                ctx,
                potential,
                pot_deg: f_deg,
            });
        }
        Ok(ChainTower {
            exponents: exponents.to_vec(),
            levels,
        })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn top(&self) -> usize {
        self.exponents.len()
    }

    pub fn level(&self, m: usize) -> &ChainLevel {
        &self.levels[m]
    }

    /// The object `E^0 = (0 -> k -> 0)` at the bottom of the tower.
    pub fn base_object(&self) -> MatrixFactorization {
        let lvl = &self.levels[0];
        MatrixFactorization::new(
            Arc::clone(&lvl.ctx),
            lvl.potential.clone(),
            lvl.pot_deg.clone(),
            Vec::new(),
            vec![lvl.ctx.group().zero()],
            PolyMat::zero(&lvl.ctx, 1, 0),
            PolyMat::zero(&lvl.ctx, 0, 1),
        )
    }

    /// Re-express a level-`m` factorization over the level-`t` ring
    /// (extension of scalars along the prefix inclusion).
    fn extend_mf(&self, f: &MatrixFactorization, t: usize) -> MatrixFactorization {
        let tgt = &self.levels[t];
        let embed = |e: &GroupElement| GradedGroup::embed(e, tgt.ctx.group()).expect("prefix embed");
        MatrixFactorization::new(
            Arc::clone(&tgt.ctx),
            tgt.potential.clone(),
            tgt.pot_deg.clone(),
            f.twists1().iter().map(embed).collect(),
            f.twists0().iter().map(embed).collect(),
            f.phi1().extend_to(&tgt.ctx),
            f.phi0().extend_to(&tgt.ctx),
        )
    }

    /// The monomial `x_m y^k` over level `t`, where `y = x_{m+1}` and the
    /// `x_m` factor degenerates to 1 at the bottom (`m = 0` has no `x`).
    fn edge_monomial(&self, m: usize, t: usize, k: u32) -> Poly {
        let ctx = &self.levels[t].ctx;
        let y = Poly::var_pow(ctx, m, k);
        if m == 0 {
            y
        } else {
            y.mul(&Poly::var(ctx, m - 1))
        }
    }

    /// `psi F` for `F` over level `m`; lands in level `m+1`.
    pub fn psi(&self, m: usize, f: &MatrixFactorization) -> MatrixFactorization {
        let t = m + 1;
        assert!(t <= self.top(), "psi target level out of tower");
        let tgt = &self.levels[t];
        let b = self.exponents[m];
        let fe = self.extend_mf(f, t);
        let y_deg = tgt.ctx.var_degree(m).clone();
        let edge = self.edge_monomial(m, t, b - 1);
        self.two_block(tgt, &fe, &y_deg, &edge)
    }

    /// `phi F` for `F` over level `m`; lands in level `m+2`.
    pub fn phi(&self, m: usize, f: &MatrixFactorization) -> MatrixFactorization {
        let t = m + 2;
        assert!(t <= self.top(), "phi target level out of tower");
        let tgt = &self.levels[t];
        let b = self.exponents[m];
        let c = self.exponents[m + 1];
        let fe = self.extend_mf(f, t);
        let y_deg = tgt.ctx.var_degree(m).clone();
        let g = self
            .edge_monomial(m, t, b - 1)
            .add(&Poly::var_pow(&tgt.ctx, m + 1, c));
        self.two_block(tgt, &fe, &y_deg, &g)
    }

    /// Shared block construction: from an extended factorization `F~` and
    /// the corner polynomial `g` of degree `f - y`, build
    /// `(F~1 ⊕ F~0(-y) --[phi1 y; -g phi0]--> F~0 ⊕ F~1(f-y) --[phi0 -y; g phi1]--> …)`.
    fn two_block(
        &self,
        tgt: &ChainLevel,
        fe: &MatrixFactorization,
        y_deg: &GroupElement,
        g: &Poly,
    ) -> MatrixFactorization {
        let ctx = &tgt.ctx;
        let (r1, r0) = (fe.rank1(), fe.rank0());
        let fdeg = &tgt.pot_deg;
        let y_poly = {
            let i = ctx
                .var_degrees()
                .iter()
                .position(|d| d == y_deg)
                .expect("y is a variable of the target level");
            Poly::var(ctx, i)
        };
        let mut m1: Vec<GroupElement> = fe.twists1().to_vec();
        m1.extend(fe.twists0().iter().map(|t| t.sub(y_deg)));
        let mut m0: Vec<GroupElement> = fe.twists0().to_vec();
        m0.extend(fe.twists1().iter().map(|t| t.add(&fdeg.sub(y_deg))));
        let mut phi1 = PolyMat::zero(ctx, r0 + r1, r1 + r0);
        phi1.paste(0, 0, fe.phi1());
        phi1.paste_scalar_identity(0, r1, r0, &y_poly);
        phi1.paste_scalar_identity(r0, 0, r1, &g.neg());
        phi1.paste(r0, r1, fe.phi0());
        let mut phi0 = PolyMat::zero(ctx, r1 + r0, r0 + r1);
        phi0.paste(0, 0, fe.phi0());
        phi0.paste_scalar_identity(0, r0, r1, &y_poly.neg());
        phi0.paste_scalar_identity(r1, 0, r0, g);
        phi0.paste(r1, r0, fe.phi1());
        MatrixFactorization::new(
            Arc::clone(ctx),
            tgt.potential.clone(),
            fdeg.clone(),
            m1,
            m0,
            phi1,
            phi0,
        )
    }

    /// `psi_i F = (psi F)(-i y)[i]` without the index-range guard; the
    /// formula is meaningful for any `i >= 0` and the Hom identities
    /// quantify one step beyond the collection range.
    pub fn psi_twisted(&self, m: usize, f: &MatrixFactorization, i: u32) -> MatrixFactorization {
        let y = self.levels[m + 1].ctx.var_degree(m).clone();
        self.psi(m, f).twist(&y.scale(-(i as i64))).shift(i as i64)
    }

    /// `psi_i F` for `0 <= i <= a_{m+1} - 2`.
    pub fn psi_i(&self, m: usize, f: &MatrixFactorization, i: u32) -> Result<MatrixFactorization> {
        let b = self.exponents[m];
        if b < 2 || i > b - 2 {
            return Err(Error::IndexOutOfRange {
                index: i as i64,
                min: 0,
                max: b as i64 - 2,
            });
        }
        Ok(self.psi_twisted(m, f, i))
    }

    /// `phi_j F = (phi F)(-j y + (1-c) z)[c + j - 1]` for `0 <= j <= a_{m+1} - 1`.
    pub fn phi_j(&self, m: usize, f: &MatrixFactorization, j: u32) -> Result<MatrixFactorization> {
        let b = self.exponents[m];
        if j > b - 1 {
            return Err(Error::IndexOutOfRange {
                index: j as i64,
                min: 0,
                max: b as i64 - 1,
            });
        }
        let c = self.exponents[m + 1];
        let ctx = &self.levels[m + 2].ctx;
        let y = ctx.var_degree(m).clone();
        let z = ctx.var_degree(m + 1).clone();
        let tw = y.scale(-(j as i64)).add(&z.scale(1 - c as i64));
        Ok(self.phi(m, f).twist(&tw).shift(c as i64 + j as i64 - 1))
    }

    /// Functor `psi` on morphisms: block-diagonal extension.
    pub fn psi_on_morphism(&self, m: usize, alpha: &MfMorphism) -> MfMorphism {
        let t = m + 1;
        let tgt = &self.levels[t].ctx;
        let src_obj = self.psi(m, alpha.source());
        let tgt_obj = self.psi(m, alpha.target());
        let a1e = alpha.a1().extend_to(tgt);
        let a0e = alpha.a0().extend_to(tgt);
        let mut a1 = PolyMat::zero(tgt, tgt_obj.rank1(), src_obj.rank1());
        a1.paste(0, 0, &a1e);
        a1.paste(a1e.nrows(), a1e.ncols(), &a0e);
        let mut a0 = PolyMat::zero(tgt, tgt_obj.rank0(), src_obj.rank0());
        a0.paste(0, 0, &a0e);
        a0.paste(a0e.nrows(), a0e.ncols(), &a1e);
        MfMorphism::new(src_obj, tgt_obj, a1, a0)
    }

    /// Functor `phi` on morphisms.
    pub fn phi_on_morphism(&self, m: usize, alpha: &MfMorphism) -> MfMorphism {
        let t = m + 2;
        let tgt = &self.levels[t].ctx;
        let src_obj = self.phi(m, alpha.source());
        let tgt_obj = self.phi(m, alpha.target());
        let a1e = alpha.a1().extend_to(tgt);
        let a0e = alpha.a0().extend_to(tgt);
        let mut a1 = PolyMat::zero(tgt, tgt_obj.rank1(), src_obj.rank1());
        a1.paste(0, 0, &a1e);
        a1.paste(a1e.nrows(), a1e.ncols(), &a0e);
        let mut a0 = PolyMat::zero(tgt, tgt_obj.rank0(), src_obj.rank0());
        a0.paste(0, 0, &a0e);
        a0.paste(a0e.nrows(), a0e.ncols(), &a1e);
        MfMorphism::new(src_obj, tgt_obj, a1, a0)
    }

    pub fn psi_i_on_morphism(&self, m: usize, alpha: &MfMorphism, i: u32) -> MfMorphism {
        let y = self.levels[m + 1].ctx.var_degree(m).clone();
        self.psi_on_morphism(m, alpha)
            .twist(&y.scale(-(i as i64)))
            .shift(i as i64)
    }

    pub fn phi_j_on_morphism(&self, m: usize, alpha: &MfMorphism, j: u32) -> MfMorphism {
        let c = self.exponents[m + 1];
        let ctx = &self.levels[m + 2].ctx;
        let y = ctx.var_degree(m).clone();
        let z = ctx.var_degree(m + 1).clone();
        let tw = y.scale(-(j as i64)).add(&z.scale(1 - c as i64));
        self.phi_on_morphism(m, alpha)
            .twist(&tw)
            .shift(c as i64 + j as i64 - 1)
    }

    /// The canonical non-zero map `lambda_i : psi_i E -> psi_{i+1} E` for
    /// `0 <= i <= a_{m+1} - 3`, built from the displayed blocks
    /// `[0 1; x y^{b-2} 0]` / `[0 -1; -x y^{b-2} 0]`.
    pub fn canonical_lambda(&self, m: usize, e: &MatrixFactorization, i: u32) -> Result<MfMorphism> {
        let b = self.exponents[m];
        if b < 3 || i > b - 3 {
            return Err(Error::IndexOutOfRange {
                index: i as i64,
                min: 0,
                max: b as i64 - 3,
            });
        }
        let t = m + 1;
        let ctx = &self.levels[t].ctx;
        let src = self.psi(m, e);
        let tgt = self.psi_twisted(m, e, 1);
        let fe = self.extend_mf(e, t);
        let (r1, r0) = (fe.rank1(), fe.rank0());
        let corner = self.edge_monomial(m, t, b - 2);
        let mut a1 = PolyMat::zero(ctx, tgt.rank1(), src.rank1());
        a1.paste_scalar_identity(0, r1, r0, &Poly::one(ctx));
        a1.paste_scalar_identity(r0, 0, r1, &corner);
        let mut a0 = PolyMat::zero(ctx, tgt.rank0(), src.rank0());
        a0.paste_scalar_identity(0, r0, r1, &Poly::one(ctx).neg());
        a0.paste_scalar_identity(r1, 0, r0, &corner.neg());
        let lambda0 = MfMorphism::new(src, tgt, a1, a0);
        let y = ctx.var_degree(m).clone();
        Ok(lambda0.twist(&y.scale(-(i as i64))).shift(i as i64))
    }

    /// The canonical non-zero map
    /// `sigma_j : psi_{c-2} psi_j F -> phi_j F` for `0 <= j <= a_{m+1} - 2`,
    /// from `sigma : psi^2 F -> (phi F)(-z)[1]` with unit corner blocks.
    pub fn canonical_sigma(&self, m: usize, f: &MatrixFactorization, j: u32) -> Result<MfMorphism> {
        let b = self.exponents[m];
        let c = self.exponents[m + 1];
        if b < 2 || j > b - 2 {
            return Err(Error::IndexOutOfRange {
                index: j as i64,
                min: 0,
                max: b as i64 - 2,
            });
        }
        if c < 2 {
            return Err(Error::IndexOutOfRange {
                index: c as i64 - 2,
                min: 0,
                max: -1,
            });
        }
        let t = m + 2;
        let ctx = &self.levels[t].ctx;
        let fe = self.extend_mf(f, t);
        let (r1, r0) = (fe.rank1(), fe.rank0());
        let psi2 = self.psi(m + 1, &self.psi(m, f));
        let z = ctx.var_degree(m + 1).clone();
        let tgt0 = self.phi(m, f).twist(&z.neg()).shift(1);
        let zpow = Poly::var_pow(ctx, m + 1, c - 1);
        // Source component blocks: [F1 (r1), F0(-y) (r0), F0(-z) (r0), F1(f-y-z) (r1)].
        let one = Poly::one(ctx);
        let mut a1 = PolyMat::zero(ctx, tgt0.rank1(), psi2.rank1());
        a1.paste_scalar_identity(0, r1 + r0, r0, &one);
        a1.paste_scalar_identity(r0, 0, r1, &zpow);
        a1.paste_scalar_identity(r0, r1 + 2 * r0, r1, &one);
        // Source 0-blocks: [F0 (r0), F1(f-y) (r1), F1(f-z) (r1), F0(f-y-z) (r0)].
        // The degree-0 component carries the sign the odd shift of the
        // target introduces; without it the squares anticommute.
        let mut a0 = PolyMat::zero(ctx, tgt0.rank0(), psi2.rank0());
        a0.paste_scalar_identity(0, r0 + r1, r1, &one.neg());
        a0.paste_scalar_identity(r1, 0, r0, &zpow.neg());
        a0.paste_scalar_identity(r1, r0 + 2 * r1, r0, &one.neg());
        let sigma = MfMorphism::new(psi2, tgt0, a1, a0);
        let y = ctx.var_degree(m).clone();
        let tw = z.scale(-(c as i64 - 2)).add(&y.scale(-(j as i64)));
        Ok(sigma.twist(&tw).shift(c as i64 + j as i64 - 2))
    }

    /// The canonical non-zero map
    /// `theta : psi_{c-2} psi_{b-2} F -> phi_{b-1} F`, from
    /// `theta : psi^2 F -> (phi F)(-y-z)[2]`.
    pub fn canonical_theta(&self, m: usize, f: &MatrixFactorization) -> Result<MfMorphism> {
        let b = self.exponents[m];
        let c = self.exponents[m + 1];
        if b < 2 || c < 2 {
            return Err(Error::IndexOutOfRange {
                index: b.min(c) as i64 - 2,
                min: 0,
                max: -1,
            });
        }
        let t = m + 2;
        let ctx = &self.levels[t].ctx;
        let fe = self.extend_mf(f, t);
        let (r1, r0) = (fe.rank1(), fe.rank0());
        let psi2 = self.psi(m + 1, &self.psi(m, f));
        let y = ctx.var_degree(m).clone();
        let z = ctx.var_degree(m + 1).clone();
        let tgt0 = self.phi(m, f).twist(&y.add(&z).neg()).shift(2);
        let one = Poly::one(ctx);
        let zpow = Poly::var_pow(ctx, m + 1, c - 1);
        let xy = self.edge_monomial(m, t, b - 2);
        // a1 rows: [F1(f-y-z) (r1), F0(f-2y-z) (r0)];
        // cols: [F1 (r1), F0(-y) (r0), F0(-z) (r0), F1(f-y-z) (r1)].
        let mut a1 = PolyMat::zero(ctx, tgt0.rank1(), psi2.rank1());
        a1.paste_scalar_identity(0, r1 + 2 * r0, r1, &one);
        a1.paste_scalar_identity(r1, r1, r0, &zpow.neg());
        a1.paste_scalar_identity(r1, r1 + r0, r0, &xy);
        // a0 rows: [F0(f-y-z) (r0), F1(2f-2y-z) (r1)];
        // cols: [F0 (r0), F1(f-y) (r1), F1(f-z) (r1), F0(f-y-z) (r0)].
        let mut a0 = PolyMat::zero(ctx, tgt0.rank0(), psi2.rank0());
        a0.paste_scalar_identity(0, r0 + 2 * r1, r0, &one);
        a0.paste_scalar_identity(r0, r0, r1, &zpow.neg());
        a0.paste_scalar_identity(r0, r0 + r1, r1, &xy);
        let theta = MfMorphism::new(psi2, tgt0, a1, a0);
        let tw = y.scale(-(b as i64 - 2)).add(&z.scale(-(c as i64 - 2)));
        Ok(theta.twist(&tw).shift(b as i64 + c as i64 - 4))
    }

    /// Serre functor `(−)(−x⃗)[n]` at the top level: twist by minus the sum
    /// of all variable degrees, then shift by the number of variables.
    pub fn serre_twist(&self, f: &MatrixFactorization) -> MatrixFactorization {
        let n = self.top();
        let ctx = &self.levels[n].ctx;
        let mut xsum = ctx.group().zero();
        for v in ctx.var_degrees() {
            xsum = xsum.add(v);
        }
        f.twist(&xsum.neg()).shift(n as i64)
    }

    /// All levels of the collection recursion, `E^{-1}` omitted:
    /// element `m` is `E^m`.
    pub fn build_levels(&self) -> Vec<Vec<ExceptionalObject>> {
        let n = self.top();
        let mut levels: Vec<Vec<ExceptionalObject>> = Vec::with_capacity(n + 1);
        levels.push(vec![ExceptionalObject {
            label: Label::root(),
            mf: self.base_object(),
        }]);
        for m in 1..=n {
            let mut out = Vec::new();
            let b = self.exponents[m - 1];
            for i in 0..=b - 2 {
                for obj in &levels[m - 1] {
                    out.push(ExceptionalObject {
                        label: obj.label.prefixed(Step::Psi(i)),
                        mf: self.psi_i(m - 1, &obj.mf, i).expect("index in range"),
                    });
                }
            }
            if m >= 2 {
                let b_prev = self.exponents[m - 2];
                for j in 0..=b_prev - 1 {
                    for obj in &levels[m - 2] {
                        out.push(ExceptionalObject {
                            label: obj.label.prefixed(Step::Phi(j)),
                            mf: self.phi_j(m - 2, &obj.mf, j).expect("index in range"),
                        });
                    }
                }
            }
            levels.push(out);
        }
        levels
    }

    pub fn build_collection(&self) -> Collection {
        let levels = self.build_levels();
        Collection {
            tower: self.clone(),
            levels,
        }
    }
}

/// Length of `E^n` by the recursion
/// `nu_m = (a_m - 1) nu_{m-1} + a_{m-1} nu_{m-2}`, `nu_{-1} = 0`, `nu_0 = 1`.
pub fn milnor_number(exponents: &[u32]) -> u64 {
    let mut prev2: u64 = 0; // nu_{-1}
    let mut prev1: u64 = 1; // nu_0
    for m in 1..=exponents.len() {
        let am = exponents[m - 1] as u64;
        let am_prev = if m >= 2 { exponents[m - 2] as u64 } else { 0 };
        let cur = (am - 1) * prev1 + am_prev * prev2;
        prev2 = prev1;
        prev1 = cur;
    }
    prev1
}

/// Milnor number of the transposed polynomial by the weight product
/// `prod_i (1/q_i - 1)` where `a_i q_i + q_{i+1} = 1` and `a_n q_n = 1`.
/// Only defined for `a_n >= 2`.
pub fn milnor_by_weights(exponents: &[u32]) -> Result<u64> {
    if exponents.is_empty() {
        return Ok(1);
    }
    let n = exponents.len();
    if exponents[n - 1] < 2 {
        return Err(Error::ExponentTooSmall(exponents[n - 1]));
    }
    let mut weights = vec![Rat::zero(); n];
    weights[n - 1] = Rat::new(1.into(), (exponents[n - 1] as i64).into());
    for i in (0..n - 1).rev() {
        let next = weights[i + 1].clone();
        weights[i] = (Rat::one() - next) / Rat::from_integer((exponents[i] as i64).into());
    }
    let mut mu = Rat::one();
    for q in &weights {
        mu *= q.recip() - Rat::one();
    }
    assert!(mu.is_integer(), "weight product must be an integer");
    Ok(num::ToPrimitive::to_u64(&mu.to_integer()).expect("milnor number fits u64"))
}

/// A built collection together with all intermediate levels of its
/// recursion.
#[derive(Clone, Debug)]
pub struct Collection {
    tower: ChainTower,
    levels: Vec<Vec<ExceptionalObject>>,
}

impl Collection {
    pub fn tower(&self) -> &ChainTower {
        &self.tower
    }

    pub fn objects(&self) -> &[ExceptionalObject] {
        self.levels.last().expect("at least level 0")
    }

    pub fn level_objects(&self, m: usize) -> &[ExceptionalObject] {
        &self.levels[m]
    }

    /// Mutable access to the recursion levels, for corruption-style tests.
    pub fn levels_mut(&mut self) -> &mut Vec<Vec<ExceptionalObject>> {
        &mut self.levels
    }

    pub fn len(&self) -> usize {
        self.objects().len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects().is_empty()
    }
}

/// The full table of Hom dimensions between collection members over a
/// common shift window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTensor {
    pub window: (i64, i64),
    /// `dims[s][t][(l - window.0) as usize]`
    pub dims: Vec<Vec<Vec<usize>>>,
}

impl HomTensor {
    pub fn dim(&self, s: usize, t: usize, l: i64) -> usize {
        if l < self.window.0 || l > self.window.1 {
            return 0;
        }
        self.dims[s][t][(l - self.window.0) as usize]
    }

    pub fn shifts(&self) -> impl Iterator<Item = i64> {
        self.window.0..=self.window.1
    }

    /// Sum of Hom dimensions at shift zero (the dimension of the
    /// endomorphism algebra of the tilting object).
    pub fn end_algebra_dim(&self) -> usize {
        let n = self.dims.len();
        (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .map(|(s, t)| self.dim(s, t, 0))
            .sum()
    }
}

/// Compute the full Hom tensor of a collection, fanning pairs out to the
/// rayon pool. Entries outside a pair's own window are zero by the weight
/// bound and are not computed.
pub fn hom_tensor(c: &Collection) -> Result<HomTensor> {
    let objs = c.objects();
    let n = objs.len();
    let mut lo = 0i64;
    let mut hi = 0i64;
    let mut windows = vec![vec![(0i64, -1i64); n]; n];
    for s in 0..n {
        for t in 0..n {
            let w = mf::shift_window(&objs[s].mf, &objs[t].mf);
            windows[s][t] = w;
            if w.0 <= w.1 {
                lo = lo.min(w.0);
                hi = hi.max(w.1);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .collect();
    let computed: Result<Vec<Vec<usize>>> = pairs
        .par_iter()
        .map(|&(s, t)| {
            let w = windows[s][t];
            let mut dims = vec![0usize; (hi - lo + 1) as usize];
            for l in w.0..=w.1 {
                dims[(l - lo) as usize] = hom_dim(&objs[s].mf, &objs[t].mf, l)?;
            }
            Ok(dims)
        })
        .collect();
    let computed = computed?;
    let mut dims = vec![vec![Vec::new(); n]; n];
    for (k, &(s, t)) in pairs.iter().enumerate() {
        dims[s][t] = computed[k].clone();
    }
    Ok(HomTensor {
        window: (lo, hi),
        dims,
    })
}

/// Each object is exceptional: scalar endomorphisms and no self-Exts.
pub fn verify_exceptional(c: &Collection, tensor: &HomTensor) -> CheckReport {
    let mut rep = CheckReport::new("exceptional");
    for (s, _obj) in c.objects().iter().enumerate() {
        for l in tensor.shifts() {
            let d = tensor.dim(s, s, l);
            let expected = usize::from(l == 0);
            rep.check(d == expected, || Violation {
                source: s,
                target: s,
                shift: l,
                dimension: d,
                note: format!("expected {expected}"),
            });
        }
    }
    rep
}

/// Strongness: no morphisms of non-zero degree between any two members.
pub fn verify_strong(c: &Collection, tensor: &HomTensor) -> CheckReport {
    let mut rep = CheckReport::new("strong");
    let n = c.len();
    for s in 0..n {
        for t in 0..n {
            for l in tensor.shifts() {
                if l == 0 {
                    continue;
                }
                let d = tensor.dim(s, t, l);
                rep.check(d == 0, || Violation {
                    source: s,
                    target: t,
                    shift: l,
                    dimension: d,
                    note: "non-zero degree morphism".into(),
                });
            }
        }
    }
    rep
}

/// Semi-orthogonality: no morphisms from later members to earlier ones.
pub fn verify_semiorthogonal(c: &Collection, tensor: &HomTensor) -> CheckReport {
    let mut rep = CheckReport::new("semiorthogonal");
    let n = c.len();
    for s in 0..n {
        for t in 0..s {
            for l in tensor.shifts() {
                let d = tensor.dim(s, t, l);
                rep.check(d == 0, || Violation {
                    source: s,
                    target: t,
                    shift: l,
                    dimension: d,
                    note: "backwards morphism".into(),
                });
            }
        }
    }
    rep
}

/// All pairwise Hom dimensions lie in {0, 1}.
pub fn verify_hom_dims_binary(c: &Collection, tensor: &HomTensor) -> CheckReport {
    let mut rep = CheckReport::new("hom-dims-binary");
    let n = c.len();
    for s in 0..n {
        for t in 0..n {
            for l in tensor.shifts() {
                let d = tensor.dim(s, t, l);
                rep.check(d <= 1, || Violation {
                    source: s,
                    target: t,
                    shift: l,
                    dimension: d,
                    note: "dimension above 1".into(),
                });
            }
        }
    }
    rep
}

/// Serre duality: `hom(A, B, l) = hom(B, S(A), -l)` with
/// `S = (−)(−x⃗)[n]`, over all pairs and window shifts.
pub fn verify_serre(c: &Collection, tensor: &HomTensor) -> Result<CheckReport> {
    let mut rep = CheckReport::new("serre");
    let objs = c.objects();
    let n = objs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .collect();
    let results: Result<Vec<Vec<Violation>>> = pairs
        .par_iter()
        .map(|&(s, t)| {
            let mut out = Vec::new();
            let serre = c.tower.serre_twist(&objs[s].mf);
            for l in tensor.shifts() {
                let lhs = tensor.dim(s, t, l);
                let rhs = hom_dim(&objs[t].mf, &serre, -l)?;
                if lhs != rhs {
                    out.push(Violation {
                        source: s,
                        target: t,
                        shift: l,
                        dimension: lhs,
                        note: format!("serre dual gives {rhs}"),
                    });
                }
            }
            Ok(out)
        })
        .collect();
    for vs in results? {
        for v in vs {
            rep.push(v);
        }
    }
    Ok(rep)
}

/// The triangle `phi F(-z) --z--> phi F -> psi^2 F -> [1]`: instantiates
/// the explicit comparison morphism `alpha : psi^2 F -> Cone(z)` and checks
/// it is a strict two-sided isomorphism of factorizations.
pub fn triangle_check(tower: &ChainTower, m: usize, f: &MatrixFactorization) -> Result<CheckReport> {
    let mut rep = CheckReport::new("triangle");
    let t = m + 2;
    assert!(t <= tower.top());
    let ctx = &tower.level(t).ctx;
    let c_exp = tower.exponents()[m + 1];
    let fe_r1 = f.rank1();
    let fe_r0 = f.rank0();
    let psi2 = tower.psi(m + 1, &tower.psi(m, f));
    let phif = tower.phi(m, f);
    let z_deg = ctx.var_degree(m + 1).clone();
    let z_poly = Poly::var(ctx, m + 1);
    let src = phif.twist(&z_deg.neg());
    let zmul = MfMorphism::new(
        src.clone(),
        phif.clone(),
        {
            let mut a = PolyMat::zero(ctx, phif.rank1(), src.rank1());
            a.paste_scalar_identity(0, 0, src.rank1(), &z_poly);
            a
        },
        {
            let mut a = PolyMat::zero(ctx, phif.rank0(), src.rank0());
            a.paste_scalar_identity(0, 0, src.rank0(), &z_poly);
            a
        },
    );
    for e in zmul.validate() {
        rep.fail_note(format!("z-multiplication morphism invalid: {e}"));
    }
    let cone_z = cone(&zmul);
    for e in cone_z.validate() {
        rep.fail_note(format!("cone fails validation: {e}"));
    }
    for e in psi2.validate() {
        rep.fail_note(format!("psi^2 fails validation: {e}"));
    }
    // alpha_1 = I with z^{c-1} I_{r1} in block (3,0);
    // alpha_0 = diag(I, I, -I, -I) with -z^{c-1} I_{r0} in block (3,0).
    let zpow = Poly::var_pow(ctx, m + 1, c_exp - 1);
    let mut a1 = PolyMat::identity(ctx, psi2.rank1());
    a1.paste_scalar_identity(fe_r1 + 2 * fe_r0, 0, fe_r1, &zpow);
    let mut a0 = PolyMat::zero(ctx, psi2.rank0(), psi2.rank0());
    a0.paste_scalar_identity(0, 0, fe_r0, &Poly::one(ctx));
    a0.paste_scalar_identity(fe_r0, fe_r0, fe_r1, &Poly::one(ctx));
    a0.paste_scalar_identity(fe_r0 + fe_r1, fe_r0 + fe_r1, fe_r1, &Poly::one(ctx).neg());
    a0.paste_scalar_identity(fe_r0 + 2 * fe_r1, fe_r0 + 2 * fe_r1, fe_r0, &Poly::one(ctx).neg());
    a0.paste_scalar_identity(fe_r0 + 2 * fe_r1, 0, fe_r0, &zpow.neg());
    let alpha = MfMorphism::new(psi2, cone_z, a1, a0);
    for e in alpha.validate() {
        rep.fail_note(format!("alpha fails morphism validation: {e}"));
    }
    if rep.passed {
        if !is_strict_iso(&alpha)? {
            rep.fail_note("alpha is not a strict two-sided isomorphism".into());
        }
    }
    rep.checked += 1;
    Ok(rep)
}

/// Dimension identities of the psi functor: for `E, F` at level `m-1`,
/// `0 <= i < j <= a_m - 2`:
/// `hom(psi_i E, psi_j F, l) = hom(E, F, l)` if `j = i + 1`, else `0`.
pub fn lemma_psi_part(tower: &ChainTower, levels: &[Vec<ExceptionalObject>], m: usize) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lemma-psi-part");
    let b = tower.exponents()[m - 1];
    if b < 2 {
        return Ok(rep);
    }
    let prev = &levels[m - 1];
    struct Task {
        sm: MatrixFactorization,
        tm: MatrixFactorization,
        em: MatrixFactorization,
        fm: MatrixFactorization,
        expect_equal: bool,
        tag: (usize, usize, u32, u32),
    }
    let mut tasks = Vec::new();
    for (se, e) in prev.iter().enumerate() {
        for (sf, f) in prev.iter().enumerate() {
            for i in 0..=b - 2 {
                for jj in i + 1..=b - 2 {
                    tasks.push(Task {
                        sm: tower.psi_i(m - 1, &e.mf, i)?,
                        tm: tower.psi_i(m - 1, &f.mf, jj)?,
                        em: e.mf.clone(),
                        fm: f.mf.clone(),
                        expect_equal: jj == i + 1,
                        tag: (se, sf, i, jj),
                    });
                }
            }
        }
    }
    let results: Result<Vec<Vec<Violation>>> = tasks
        .par_iter()
        .map(|task| {
            let mut out = Vec::new();
            let wl = mf::shift_window(&task.sm, &task.tm);
            let wr = mf::shift_window(&task.em, &task.fm);
            let lo = wl.0.min(wr.0);
            let hi = wl.1.max(wr.1);
            for l in lo..=hi {
                let lhs = hom_dim(&task.sm, &task.tm, l)?;
                let rhs = if task.expect_equal {
                    hom_dim(&task.em, &task.fm, l)?
                } else {
                    0
                };
                if lhs != rhs {
                    out.push(Violation {
                        source: task.tag.0,
                        target: task.tag.1,
                        shift: l,
                        dimension: lhs,
                        note: format!(
                            "psi_{} -> psi_{}: expected {rhs}",
                            task.tag.2, task.tag.3
                        ),
                    });
                }
            }
            Ok(out)
        })
        .collect();
    for vs in results? {
        for v in vs {
            rep.push(v);
        }
        rep.checked += 1;
    }
    Ok(rep)
}

/// Dimension identities across the psi/phi boundary: for `E` at level `m-1`
/// and `F` at level `m-2`, `0 <= i <= a_m - 2`, `0 <= j <= a_{m-1} - 1`:
/// `hom(psi_i E, phi_j F, l) = hom(E, psi_j F, l)` if `i = a_m - 2`, else `0`,
/// where `psi_j F` is the raw twist-shift formula (the index may exceed the
/// collection range by one).
pub fn lemma_last(tower: &ChainTower, levels: &[Vec<ExceptionalObject>], m: usize) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lemma-last");
    if m < 2 {
        return Ok(rep);
    }
    let b = tower.exponents()[m - 1];
    let b_prev = tower.exponents()[m - 2];
    let prev = &levels[m - 1];
    let prev2 = &levels[m - 2];
    struct Task {
        sm: MatrixFactorization,
        tm: MatrixFactorization,
        em: MatrixFactorization,
        fm: MatrixFactorization,
        expect_equal: bool,
        tag: (usize, usize, u32, u32),
    }
    let mut tasks = Vec::new();
    for (se, e) in prev.iter().enumerate() {
        for (sf, f) in prev2.iter().enumerate() {
            for i in 0..=b - 2 {
                for j in 0..=b_prev - 1 {
                    tasks.push(Task {
                        sm: tower.psi_i(m - 1, &e.mf, i)?,
                        tm: tower.phi_j(m - 2, &f.mf, j)?,
                        em: e.mf.clone(),
                        fm: tower.psi_twisted(m - 2, &f.mf, j),
                        expect_equal: i == b - 2,
                        tag: (se, sf, i, j),
                    });
                }
            }
        }
    }
    let results: Result<Vec<Vec<Violation>>> = tasks
        .par_iter()
        .map(|task| {
            let mut out = Vec::new();
            let wl = mf::shift_window(&task.sm, &task.tm);
            let wr = mf::shift_window(&task.em, &task.fm);
            let lo = wl.0.min(wr.0);
            let hi = wl.1.max(wr.1);
            for l in lo..=hi {
                let lhs = hom_dim(&task.sm, &task.tm, l)?;
                let rhs = if task.expect_equal {
                    hom_dim(&task.em, &task.fm, l)?
                } else {
                    0
                };
                if lhs != rhs {
                    out.push(Violation {
                        source: task.tag.0,
                        target: task.tag.1,
                        shift: l,
                        dimension: lhs,
                        note: format!(
                            "psi_{} -> phi_{}: expected {rhs}",
                            task.tag.2, task.tag.3
                        ),
                    });
                }
            }
            Ok(out)
        })
        .collect();
    for vs in results? {
        for v in vs {
            rep.push(v);
        }
        rep.checked += 1;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn chain_polynomial_examples() {
        let tower = ChainTower::new(&[2, 2]).unwrap();
        let lvl = tower.level(2);
        // x1^2 + x1 x2^2, homogeneous of degree f.
        assert_eq!(lvl.potential.num_terms(), 2);
        assert_eq!(lvl.potential.is_homogeneous(), Some(lvl.pot_deg.clone()));
        let t0 = ChainTower::new(&[]).unwrap();
        assert!(t0.level(0).potential.is_zero());
        let t1 = ChainTower::new(&[3]).unwrap();
        assert_eq!(t1.level(1).potential.num_terms(), 1);
    }

    #[test]
    fn base_objects_validate() {
        let tower = ChainTower::new(&[2, 2]).unwrap();
        let e0 = tower.base_object();
        assert!(e0.validate().is_empty());
        assert_eq!(e0.rank1(), 0);
        assert_eq!(e0.rank0(), 1);
        let psi_e0 = tower.psi(0, &e0);
        assert!(psi_e0.validate().is_empty());
        assert_eq!(psi_e0.rank1(), 1);
        // psi E^0 = (S(-x1) --x1--> S --x1^{a_1-1}--> S(f-x1)).
        assert_eq!(psi_e0.phi1()[(0, 0)], Poly::var(&tower.level(1).ctx, 0));
        assert_eq!(
            psi_e0.phi0()[(0, 0)],
            Poly::var_pow(&tower.level(1).ctx, 0, 1)
        );
        let phi_e0 = tower.phi(0, &e0);
        assert!(phi_e0.validate().is_empty());
        // Second map of phi E^0 is x1^{a_1-1} + x2^{a_2} = x1 + x2^2.
        let ctx2 = &tower.level(2).ctx;
        let expect = Poly::var(ctx2, 0).add(&Poly::var_pow(ctx2, 1, 2));
        assert_eq!(phi_e0.phi0()[(0, 0)], expect);
    }

    #[test]
    fn psi_doubles_rank() {
        let tower = ChainTower::new(&[2, 2, 2]).unwrap();
        let e0 = tower.base_object();
        let a = tower.psi(0, &e0);
        let b = tower.psi(1, &a);
        assert_eq!((b.rank1(), b.rank0()), (2, 2));
        assert!(b.validate().is_empty());
    }

    #[test]
    fn psi_commutes_with_twist_and_shift() {
        let tower = ChainTower::new(&[3, 2]).unwrap();
        let e0 = tower.base_object();
        let f = tower.psi(0, &e0);
        let y = tower.level(1).ctx.var_degree(0).clone();
        let lhs = tower.psi(1, &f.twist(&y).shift(1));
        let y2 = GradedGroup::embed(&y, tower.level(2).ctx.group()).unwrap();
        let rhs = tower.psi(1, &f).twist(&y2).shift(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn collection_lengths() {
        for (exps, len) in [
            (vec![2u32, 2], 3usize),
            (vec![3], 2),
            (vec![2, 2, 2], 5),
            (vec![3, 3], 7),
            (vec![3, 2, 2], 9),
        ] {
            let tower = ChainTower::new(&exps).unwrap();
            let c = tower.build_collection();
            assert_eq!(c.len(), len, "length for {exps:?}");
            assert_eq!(milnor_number(&exps) as usize, len);
            for obj in c.objects() {
                assert!(obj.mf.validate().is_empty(), "object {} invalid", obj.label);
            }
        }
    }

    #[test]
    fn milnor_formulas_agree() {
        for exps in [
            vec![2u32],
            vec![3],
            vec![5],
            vec![2, 2],
            vec![2, 3],
            vec![3, 2],
            vec![3, 3],
            vec![2, 2, 2],
            vec![3, 2, 2],
            vec![2, 1, 2],
        ] {
            let rec = milnor_number(&exps);
            let wgt = milnor_by_weights(&exps).unwrap();
            assert_eq!(rec, wgt, "mismatch for {exps:?}");
        }
        assert_eq!(milnor_number(&[2]), 1);
        assert_eq!(milnor_number(&[3, 3]), 7);
        assert!(matches!(
            milnor_by_weights(&[2, 1]),
            Err(Error::ExponentTooSmall(1))
        ));
    }

    #[test]
    fn collection_order_matches_recursion() {
        let tower = ChainTower::new(&[3]).unwrap();
        let c = tower.build_collection();
        let labels: Vec<String> = c.objects().iter().map(|o| o.label.to_string()).collect();
        assert_eq!(labels, vec!["psi0.E0", "psi1.E0"]);
        let tower = ChainTower::new(&[2, 2]).unwrap();
        let c = tower.build_collection();
        let labels: Vec<String> = c.objects().iter().map(|o| o.label.to_string()).collect();
        assert_eq!(labels, vec!["psi0.psi0.E0", "phi0.E0", "phi1.E0"]);
    }

    #[test]
    fn index_guards() {
        let tower = ChainTower::new(&[3, 2]).unwrap();
        let e0 = tower.base_object();
        assert!(tower.psi_i(0, &e0, 1).is_ok());
        assert!(matches!(
            tower.psi_i(0, &e0, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(tower.phi_j(0, &e0, 2).is_ok());
        assert!(matches!(
            tower.phi_j(0, &e0, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn serre_twist_shape() {
        let tower = ChainTower::new(&[2]).unwrap();
        let e0 = tower.base_object();
        let obj = tower.psi(0, &e0);
        let s = tower.serre_twist(&obj);
        // One variable: twist by -x1 and shift once.
        let x1 = tower.level(1).ctx.var_degree(0).clone();
        assert_eq!(s, obj.twist(&x1.neg()).shift(1));
        let zero = MatrixFactorization::zero_object(
            &tower.level(1).ctx,
            tower.level(1).potential.clone(),
            tower.level(1).pot_deg.clone(),
        );
        assert!(tower.serre_twist(&zero).is_zero_object());
    }

    #[test]
    fn weights_example_2_2() {
        let tower = ChainTower::new(&[2, 2]).unwrap();
        let ctx = &tower.level(2).ctx;
        let g = ctx.group();
        assert_eq!(
            g.free_weight(ctx.var_degree(0)).unwrap(),
            Rat::new(int(1), int(2))
        );
        assert_eq!(
            g.free_weight(ctx.var_degree(1)).unwrap(),
            Rat::new(int(1), int(4))
        );
    }
}
