//! Finitely generated abelian grading groups in canonical form.
//!
//! A group is presented by generators and integer relations and reduced,
//! through one fixed Smith normal form, to `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k`
//! with `d_1 | d_2 | …`. Elements are stored in canonical coordinates
//! (free integer vector plus reduced torsion residues), so equality and
//! hashing are structural.
//!
//! The distinguished construction is [`GradedGroup::maximal_chain_grading`]:
//! the maximal grading `L_n` of the chain polynomial
//! `f_n = x_1^{a_1} + x_1 x_2^{a_2} + … + x_{n-1} x_n^{a_n}`, presented as
//! `(Zx_1 ⊕ … ⊕ Zx_n ⊕ Zf) / ⟨f − a_1 x_1, f − x_{i−1} − a_i x_i⟩`.
//! It has rank one; the free coordinate is sign-normalized so that `f` is
//! positive, and all variable weights are checked to be positive.

use std::fmt;
use std::sync::Arc;

use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Int, IntMat, Rat};

/// A presentation by generators and relations. Rows of `relations` are
/// relation vectors in generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relations: IntMat,
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relations: Vec<Vec<i64>>) -> Self {
        assert!(generator_count >= 1, "need at least one generator");
        let rel = if relations.is_empty() {
            IntMat::zero(0, generator_count)
        } else {
            let m = IntMat::from_rows(relations);
            assert_eq!(m.ncols(), generator_count);
            m
        };
        GroupPresentation {
            generator_count,
            relations: rel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum RowKind {
    /// Coordinate killed by an invariant factor 1.
    Unit,
    /// Coordinate lives in Z/d; index into `torsion_invariants`.
    Torsion(usize),
    /// Free coordinate; index into the free part.
    Free(usize),
}

/// A finitely generated abelian group in canonical form.
#[derive(Clone, Debug)]
pub struct GradedGroup {
    presentation: GroupPresentation,
    rank: usize,
    torsion_invariants: Vec<Int>,
    /// Unimodular map from generator coordinates to pre-canonical
    /// coordinates (rows classified by `row_kind`).
    reduction: IntMat,
    /// Inverse of `reduction`; lifts canonical coordinates back to a
    /// generator-coordinate representative.
    section: IntMat,
    row_kind: Vec<RowKind>,
    /// Free part of the normalizing element (the one of weight 1), when set.
    normalizer_free: Option<Vec<Int>>,
    /// For groups built by `maximal_chain_grading`: the exponent vector.
    chain_exponents: Option<Vec<u32>>,
}

impl PartialEq for GradedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
            && self.normalizer_free == other.normalizer_free
            && self.chain_exponents == other.chain_exponents
    }
}
impl Eq for GradedGroup {}

impl GradedGroup {
    /// Canonicalize a presentation. The group is the cokernel of the
    /// transpose of the relation matrix.
    pub fn from_presentation(p: GroupPresentation) -> Self {
        let g = p.generator_count;
        let r = p.relations.nrows();
        // Columns of `a` are the relation vectors.
        let mut a = IntMat::zero(g, r);
        for i in 0..r {
            for j in 0..g {
                a[(j, i)] = p.relations[(i, j)].clone();
            }
        }
        let snf = smith_normal_form(&a);
        let k = g.min(r);
        let mut row_kind = Vec::with_capacity(g);
        let mut torsion_invariants = Vec::new();
        let mut rank = 0;
        for i in 0..g {
            let d = if i < k { snf.d[(i, i)].clone() } else { Int::zero() };
            if d.is_one() {
                row_kind.push(RowKind::Unit);
            } else if d.is_zero() {
                row_kind.push(RowKind::Free(rank));
                rank += 1;
            } else {
                row_kind.push(RowKind::Torsion(torsion_invariants.len()));
                torsion_invariants.push(d);
            }
        }
        let section = snf.u.unimodular_inverse();
        GradedGroup {
            presentation: p,
            rank,
            torsion_invariants,
            reduction: snf.u,
            section,
            row_kind,
            normalizer_free: None,
            chain_exponents: None,
        }
    }

    /// The maximal grading of the chain polynomial with the given exponents.
    ///
    /// Generator order is `x_1, …, x_n, f`. Returns the group together with
    /// the degrees of the variables and of the potential. Accepts `n = 0`
    /// (the group is `Zf`). Requires every exponent positive and, for
    /// `n ≥ 1`, `a_1 ≥ 2`.
    pub fn maximal_chain_grading(
        exponents: &[u32],
    ) -> Result<(Arc<GradedGroup>, Vec<GroupElement>, GroupElement)> {
        for &a in exponents {
            if a < 1 {
                return Err(Error::NonPositiveExponent(a));
            }
        }
        if let Some(&a1) = exponents.first() {
            if a1 < 2 {
                return Err(Error::FirstExponentTooSmall(a1));
            }
        }
        let n = exponents.len();
        let gens = n + 1;
        let mut relations = Vec::with_capacity(n);
        for (i, &ai) in exponents.iter().enumerate() {
            // f - x_{i-1} - a_i x_i  (the x_{i-1} term is absent for i = 0).
            let mut row = vec![0i64; gens];
            row[gens - 1] = 1;
            row[i] -= ai as i64;
            if i > 0 {
                row[i - 1] -= 1;
            }
            relations.push(row);
        }
        let mut group = GradedGroup::from_presentation(GroupPresentation::new(gens, relations));
        group.chain_exponents = Some(exponents.to_vec());
        if group.rank != 1 {
            return Err(Error::RankError(group.rank));
        }

        // Sign-normalize the free coordinate so that f is positive.
        let mut f_gen = vec![Int::zero(); gens];
        f_gen[gens - 1] = Int::one();
        let (f_free, _) = group.canonicalize(&f_gen);
        if f_free[0].is_zero() {
            return Err(Error::RankError(group.rank));
        }
        if f_free[0].is_negative() {
            group.negate_free_row(0);
        }
        let (f_free, _) = group.canonicalize(&f_gen);
        group.normalizer_free = Some(f_free);

        let group = Arc::new(group);
        let f_deg = group.element_from_generators(&f_gen);
        let mut var_degrees = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = vec![Int::zero(); gens];
            v[i] = Int::one();
            var_degrees.push(group.element_from_generators(&v));
        }
        for (i, d) in var_degrees.iter().enumerate() {
            if !group.free_weight(d)?.is_positive() {
                return Err(Error::NonPositiveWeight(i));
            }
        }
        Ok((group, var_degrees, f_deg))
    }

    /// Overrides the weight normalization so that `free_weight(e) = 1`.
    /// Only meaningful on rank-1 groups built from a raw presentation.
    pub fn with_normalizer(mut self, generator_coords: &[i64]) -> Result<Self> {
        let coords: Vec<Int> = generator_coords.iter().map(|&x| Int::from(x)).collect();
        let (free, _) = self.canonicalize(&coords);
        if self.rank != 1 {
            return Err(Error::RankError(self.rank));
        }
        if free[0].is_negative() {
            self.negate_free_row(0);
            let (free, _) = self.canonicalize(&coords);
            self.normalizer_free = Some(free);
        } else {
            self.normalizer_free = Some(free);
        }
        Ok(self)
    }

    fn negate_free_row(&mut self, free_idx: usize) {
        let row = self
            .row_kind
            .iter()
            .position(|k| *k == RowKind::Free(free_idx))
            .expect("free row exists");
        for j in 0..self.reduction.ncols() {
            let x = -self.reduction[(row, j)].clone();
            self.reduction[(row, j)] = x;
        }
        for i in 0..self.section.nrows() {
            let x = -self.section[(i, row)].clone();
            self.section[(i, row)] = x;
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_invariants(&self) -> &[Int] {
        &self.torsion_invariants
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generator_count
    }

    pub fn chain_exponents(&self) -> Option<&[u32]> {
        self.chain_exponents.as_deref()
    }

    /// Canonical coordinates (free part, torsion residues) of a
    /// generator-coordinate vector.
    fn canonicalize(&self, gen_coords: &[Int]) -> (Vec<Int>, Vec<Int>) {
        assert_eq!(gen_coords.len(), self.generator_count());
        let pre = self.reduction.mul_vec(gen_coords);
        let mut free = vec![Int::zero(); self.rank];
        let mut torsion = vec![Int::zero(); self.torsion_invariants.len()];
        for (i, kind) in self.row_kind.iter().enumerate() {
            match kind {
                RowKind::Unit => {}
                RowKind::Free(f) => free[*f] = pre[i].clone(),
                RowKind::Torsion(t) => {
                    torsion[*t] = pre[i].mod_floor(&self.torsion_invariants[*t]);
                }
            }
        }
        (free, torsion)
    }

    /// Lift canonical coordinates to some generator-coordinate
    /// representative (a section of the quotient map).
    fn lift(&self, free: &[Int], torsion: &[Int]) -> Vec<Int> {
        let g = self.generator_count();
        let mut pre = vec![Int::zero(); g];
        for (i, kind) in self.row_kind.iter().enumerate() {
            match kind {
                RowKind::Unit => {}
                RowKind::Free(f) => pre[i] = free[*f].clone(),
                RowKind::Torsion(t) => pre[i] = torsion[*t].clone(),
            }
        }
        self.section.mul_vec(&pre)
    }

    pub fn element_from_generators(self: &Arc<Self>, gen_coords: &[Int]) -> GroupElement {
        let (free, torsion) = self.canonicalize(gen_coords);
        GroupElement {
            group: Arc::clone(self),
            free,
            torsion,
        }
    }

    pub fn element_from_generators_i64(self: &Arc<Self>, gen_coords: &[i64]) -> GroupElement {
        let coords: Vec<Int> = gen_coords.iter().map(|&x| Int::from(x)).collect();
        self.element_from_generators(&coords)
    }

    pub fn zero(self: &Arc<Self>) -> GroupElement {
        GroupElement {
            group: Arc::clone(self),
            free: vec![Int::zero(); self.rank],
            torsion: vec![Int::zero(); self.torsion_invariants.len()],
        }
    }

    /// Element from canonical coordinates.
    pub fn element_from_canonical(self: &Arc<Self>, free: Vec<Int>, torsion: Vec<Int>) -> GroupElement {
        assert_eq!(free.len(), self.rank);
        assert_eq!(torsion.len(), self.torsion_invariants.len());
        let torsion = torsion
            .into_iter()
            .zip(&self.torsion_invariants)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        GroupElement {
            group: Arc::clone(self),
            free,
            torsion,
        }
    }

    /// Normalized projection to the free quotient: linear, with the
    /// normalizer mapped to 1. Requires rank 1.
    pub fn free_weight(&self, e: &GroupElement) -> Result<Rat> {
        if self.rank != 1 {
            return Err(Error::RankError(self.rank));
        }
        let f = self
            .normalizer_free
            .as_ref()
            .ok_or(Error::RankError(self.rank))?;
        if f[0].is_zero() {
            return Err(Error::RankError(self.rank));
        }
        Ok(Rat::new(e.free[0].clone(), f[0].clone()))
    }

    /// Inclusion into the grading group of the one-step-longer chain.
    ///
    /// Maps `x_i ↦ x_i` and `f ↦ f`. Errors unless both groups are chain
    /// gradings and the exponents of `self` are a prefix of the target's.
    pub fn embed(e: &GroupElement, target: &Arc<GradedGroup>) -> Result<GroupElement> {
        let src = &e.group;
        let (Some(se), Some(te)) = (src.chain_exponents(), target.chain_exponents()) else {
            return Err(Error::GroupMismatch);
        };
        if se.len() > te.len() || &te[..se.len()] != se {
            return Err(Error::GroupMismatch);
        }
        let gens = src.lift(&e.free, &e.torsion);
        let n_src = se.len();
        let n_tgt = te.len();
        let mut out = vec![Int::zero(); n_tgt + 1];
        out[..n_src].clone_from_slice(&gens[..n_src]);
        out[n_tgt] = gens[n_src].clone();
        Ok(target.element_from_generators(&out))
    }
}

/// An element of a [`GradedGroup`] in canonical coordinates.
#[derive(Clone)]
pub struct GroupElement {
    group: Arc<GradedGroup>,
    free: Vec<Int>,
    torsion: Vec<Int>,
}

impl GroupElement {
    pub fn group(&self) -> &Arc<GradedGroup> {
        &self.group
    }

    pub fn free_part(&self) -> &[Int] {
        &self.free
    }

    pub fn torsion_part(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &GroupElement) {
        assert!(
            Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group,
            "elements of different groups"
        );
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        self.same_group(other);
        let free = self
            .free
            .iter()
            .zip(&other.free)
            .map(|(a, b)| a + b)
            .collect();
        let torsion = self
            .torsion
            .iter()
            .zip(&other.torsion)
            .zip(&self.group.torsion_invariants)
            .map(|((a, b), d)| (a + b).mod_floor(d))
            .collect();
        GroupElement {
            group: Arc::clone(&self.group),
            free,
            torsion,
        }
    }

    pub fn neg(&self) -> GroupElement {
        let free = self.free.iter().map(|a| -a).collect();
        let torsion = self
            .torsion
            .iter()
            .zip(&self.group.torsion_invariants)
            .map(|(a, d)| (-a).mod_floor(d))
            .collect();
        GroupElement {
            group: Arc::clone(&self.group),
            free,
            torsion,
        }
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        let k = Int::from(k);
        let free = self.free.iter().map(|a| a * &k).collect();
        let torsion = self
            .torsion
            .iter()
            .zip(&self.group.torsion_invariants)
            .map(|(a, d)| (a * &k).mod_floor(d))
            .collect();
        GroupElement {
            group: Arc::clone(&self.group),
            free,
            torsion,
        }
    }

    pub fn free_weight(&self) -> Result<Rat> {
        self.group.free_weight(self)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.free == other.free && self.torsion == other.torsion
    }
}
impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.free.hash(state);
        self.torsion.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.free
            .cmp(&other.free)
            .then_with(|| self.torsion.cmp(&other.torsion))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.free.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        if !self.torsion.is_empty() {
            write!(f, ";")?;
            for (i, x) in self.torsion.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn chain_2_2_canonical_coords() {
        let (g, vars, f) = GradedGroup::maximal_chain_grading(&[2, 2]).unwrap();
        assert_eq!(g.rank(), 1);
        assert!(g.torsion_invariants().is_empty());
        assert_eq!(vars[1].free_part(), &[int(1)]);
        assert_eq!(vars[0].free_part(), &[int(2)]);
        assert_eq!(f.free_part(), &[int(4)]);
        // f = a_1 x_1 holds in the group.
        assert_eq!(vars[0].scale(2), f);
    }

    #[test]
    fn chain_empty_is_z() {
        let (g, vars, f) = GradedGroup::maximal_chain_grading(&[]).unwrap();
        assert_eq!(g.rank(), 1);
        assert!(vars.is_empty());
        assert_eq!(f.free_part(), &[int(1)]);
    }

    #[test]
    fn chain_single_exponent() {
        let (g, vars, f) = GradedGroup::maximal_chain_grading(&[2]).unwrap();
        assert_eq!(g.rank(), 1);
        assert_eq!(vars[0].free_part(), &[int(1)]);
        assert_eq!(f.free_part(), &[int(2)]);
    }

    #[test]
    fn chain_3_2_has_torsion() {
        let (g, vars, f) = GradedGroup::maximal_chain_grading(&[3, 2]).unwrap();
        assert_eq!(g.rank(), 1);
        assert_eq!(g.torsion_invariants(), &[int(2)]);
        // Both variables have weight 1/3 but differ by 2-torsion.
        assert_eq!(g.free_weight(&vars[0]).unwrap(), Rat::new(int(1), int(3)));
        assert_eq!(g.free_weight(&vars[1]).unwrap(), Rat::new(int(1), int(3)));
        assert_ne!(vars[0], vars[1]);
        assert_eq!(g.free_weight(&f).unwrap(), Rat::one());
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(matches!(
            GradedGroup::maximal_chain_grading(&[0]),
            Err(Error::NonPositiveExponent(0))
        ));
        assert!(matches!(
            GradedGroup::maximal_chain_grading(&[1, 2]),
            Err(Error::FirstExponentTooSmall(1))
        ));
    }

    #[test]
    fn embed_generator_chase() {
        let (g1, v1, f1) = GradedGroup::maximal_chain_grading(&[2]).unwrap();
        let (g2, v2, f2) = GradedGroup::maximal_chain_grading(&[2, 2]).unwrap();
        let _ = g1;
        // f in L_1 has coordinate 2; its image in L_2 has coordinate 4.
        assert_eq!(GradedGroup::embed(&f1, &g2).unwrap(), f2);
        assert_eq!(GradedGroup::embed(&v1[0], &g2).unwrap(), v2[0]);
        let zero = f1.sub(&f1);
        assert!(GradedGroup::embed(&zero, &g2).unwrap().is_zero());
    }

    #[test]
    fn embed_rejects_non_prefix() {
        let (_, _, f1) = GradedGroup::maximal_chain_grading(&[3]).unwrap();
        let (g2, _, _) = GradedGroup::maximal_chain_grading(&[2, 2]).unwrap();
        assert!(matches!(
            GradedGroup::embed(&f1, &g2),
            Err(Error::GroupMismatch)
        ));
    }

    #[test]
    fn free_weights_2_2() {
        let (g, vars, f) = GradedGroup::maximal_chain_grading(&[2, 2]).unwrap();
        assert_eq!(g.free_weight(&vars[0]).unwrap(), Rat::new(int(1), int(2)));
        assert_eq!(g.free_weight(&vars[1]).unwrap(), Rat::new(int(1), int(4)));
        assert_eq!(g.free_weight(&f).unwrap(), Rat::one());
        assert!(g.free_weight(&f.sub(&f)).unwrap().is_zero());
    }

    #[test]
    fn weights_positive_small_sweep() {
        // rank(L_n) = 1 and positive weights across a small sweep.
        for a1 in 2..=5u32 {
            for a2 in 1..=5u32 {
                for a3 in 1..=5u32 {
                    let (g, vars, _) =
                        GradedGroup::maximal_chain_grading(&[a1, a2, a3]).unwrap();
                    assert_eq!(g.rank(), 1);
                    for v in &vars {
                        assert!(g.free_weight(v).unwrap().is_positive());
                    }
                }
            }
        }
    }
}
