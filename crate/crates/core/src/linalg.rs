//! Exact integer and rational linear algebra.
//!
//! Two workhorses live here: Smith normal form over the integers, used to
//! canonicalize group presentations, and a fraction-free row echelon form
//! over the rationals, used for every Hom-space dimension count. Row
//! reduction clears denominators row-wise and eliminates by integer
//! cross-multiplication with gcd normalization, so intermediate values stay
//! integral; pivots are chosen by a fixed deterministic rule so bases are
//! reproducible across runs and thread counts.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().map(Int::from).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Int::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination. Exact.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Int::zero();
                };
                for j in 0..n {
                    let tmp = a[(k, j)].clone();
                    a[(k, j)] = a[(p, j)].clone();
                    a[(p, j)] = tmp;
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = Int::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Inverse of a unimodular integer matrix.
    ///
    /// Panics if the matrix is not square with determinant ±1.
    pub fn unimodular_inverse(&self) -> IntMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let det = self.det();
        assert!(
            det.clone().abs().is_one(),
            "matrix is not unimodular (det = {det})"
        );
        // Gauss-Jordan over the rationals; entries of the result are integral.
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rat::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .expect("unimodular matrix must have full rank");
            a.swap(col, p);
            inv.swap(col, p);
            let piv = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= piv.clone();
                inv[col][j] /= piv.clone();
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let d = &f * &a[col][j];
                    a[i][j] -= d;
                    let d = &f * &inv[col][j];
                    inv[i][j] -= d;
                }
            }
        }
        let mut out = IntMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                assert!(inv[i][j].is_integer(), "inverse is not integral");
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let k = self.d.nrows().min(self.d.ncols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form of an integer matrix. Total: any integer matrix,
/// including empty and zero matrices, has one.
pub fn smith_normal_form(m: &IntMat) -> SmithNormalForm {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut a = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let k = rows.min(cols);
    let mut t = 0;
    while t < k {
        // Deterministic pivot: entry of minimal absolute value in the
        // trailing submatrix, first in row-major order on ties.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => a[(i, j)].clone().abs() < a[(pi, pj)].clone().abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[(i, t)], &a[(t, t)]);
                if !q.is_zero() {
                    row_sub(&mut a, &mut u, i, t, &q);
                }
                if !a[(i, t)].is_zero() {
                    // Remainder became the smaller entry; promote it.
                    swap_rows(&mut a, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[(t, j)], &a[(t, t)]);
                if !q.is_zero() {
                    col_sub(&mut a, &mut v, j, t, &q);
                }
                if !a[(t, j)].is_zero() {
                    swap_cols(&mut a, &mut v, t, j);
                    dirty = true;
                }
            }
            if !dirty
                && (t + 1..rows).all(|i| a[(i, t)].is_zero())
                && (t + 1..cols).all(|j| a[(t, j)].is_zero())
            {
                break;
            }
        }
        t += 1;
    }

    // Sign-normalize the diagonal.
    for i in 0..k {
        if a[(i, i)].is_negative() {
            negate_row(&mut a, &mut u, i);
        }
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    loop {
        let mut fixed = true;
        for i in 0..k.saturating_sub(1) {
            let di = a[(i, i)].clone();
            let dj = a[(i + 1, i + 1)].clone();
            if di.is_zero() && !dj.is_zero() {
                // Zero must come last in the chain.
                swap_rows(&mut a, &mut u, i, i + 1);
                swap_cols(&mut a, &mut v, i, i + 1);
                fixed = false;
                continue;
            }
            if di.is_zero() || dj.is_zero() || (&dj % &di).is_zero() {
                continue;
            }
            // Standard gcd/lcm repair: add column i+1 to column i, then
            // re-diagonalize the 2x2 block.
            col_add(&mut a, &mut v, i, i + 1);
            let g = di.gcd(&dj);
            let l = (&di / &g) * &dj;
            // Row reduce: row_{i+1} -= (dj/g as multiplier solving Bezout).
            // Work out explicitly: block is [[di, 0], [dj, dj]] after the
            // column op. Use Bezout s*di + t*dj = g.
            let e = di.extended_gcd(&dj);
            // e.gcd = e.x*di + e.y*dj
            // Row op: row_i := e.x*row_i + e.y*row_{i+1}
            row_combine(&mut a, &mut u, i, i + 1, &e.x, &e.y);
            // Now clear the off-diagonal entries of the 2x2 block.
            let q = &a[(i + 1, i)] / &a[(i, i)];
            row_sub(&mut a, &mut u, i + 1, i, &q);
            let q = &a[(i, i + 1)] / &a[(i, i)];
            col_sub(&mut a, &mut v, i + 1, i, &q);
            if a[(i + 1, i + 1)].is_negative() {
                negate_row(&mut a, &mut u, i + 1);
            }
            debug_assert_eq!(a[(i, i)], g);
            debug_assert_eq!(a[(i + 1, i + 1)], l);
            fixed = false;
        }
        if fixed {
            break;
        }
    }

    SmithNormalForm { u, d: a, v }
}

fn swap_rows(a: &mut IntMat, u: &mut IntMat, r0: usize, r1: usize) {
    if r0 == r1 {
        return;
    }
    for j in 0..a.ncols() {
        let tmp = a[(r0, j)].clone();
        a[(r0, j)] = a[(r1, j)].clone();
        a[(r1, j)] = tmp;
    }
    for j in 0..u.ncols() {
        let tmp = u[(r0, j)].clone();
        u[(r0, j)] = u[(r1, j)].clone();
        u[(r1, j)] = tmp;
    }
}

fn swap_cols(a: &mut IntMat, v: &mut IntMat, c0: usize, c1: usize) {
    if c0 == c1 {
        return;
    }
    for i in 0..a.nrows() {
        let tmp = a[(i, c0)].clone();
        a[(i, c0)] = a[(i, c1)].clone();
        a[(i, c1)] = tmp;
    }
    for i in 0..v.nrows() {
        let tmp = v[(i, c0)].clone();
        v[(i, c0)] = v[(i, c1)].clone();
        v[(i, c1)] = tmp;
    }
}

/// row_i -= q * row_t
fn row_sub(a: &mut IntMat, u: &mut IntMat, i: usize, t: usize, q: &Int) {
    for j in 0..a.ncols() {
        let d = q * &a[(t, j)];
        a[(i, j)] -= d;
    }
    for j in 0..u.ncols() {
        let d = q * &u[(t, j)];
        u[(i, j)] -= d;
    }
}

/// col_j -= q * col_t
fn col_sub(a: &mut IntMat, v: &mut IntMat, j: usize, t: usize, q: &Int) {
    for i in 0..a.nrows() {
        let d = q * &a[(i, t)];
        a[(i, j)] -= d;
    }
    for i in 0..v.nrows() {
        let d = q * &v[(i, t)];
        v[(i, j)] -= d;
    }
}

/// col_i += col_j
fn col_add(a: &mut IntMat, v: &mut IntMat, i: usize, j: usize) {
    for r in 0..a.nrows() {
        let d = a[(r, j)].clone();
        a[(r, i)] += d;
    }
    for r in 0..v.nrows() {
        let d = v[(r, j)].clone();
        v[(r, i)] += d;
    }
}

/// row_i := x*row_i + y*row_j (must keep u unimodular; used with Bezout pairs
/// followed by a compensating update of row_j implicit in the caller's qs).
fn row_combine(a: &mut IntMat, u: &mut IntMat, i: usize, j: usize, x: &Int, y: &Int) {
    // To stay unimodular we perform [[x, y], [-dj/g, di/g]] on rows (i, j);
    // the caller guarantees x*di + y*dj = g.
    let di = a[(i, i)].clone();
    let dj = a[(j, j)].clone();
    let g = &di * x + &dj * y;
    let s = -(&dj / &g);
    let t = &di / &g;
    for c in 0..a.ncols() {
        let ai = a[(i, c)].clone();
        let aj = a[(j, c)].clone();
        a[(i, c)] = x * &ai + y * &aj;
        a[(j, c)] = &s * &ai + &t * &aj;
    }
    for c in 0..u.ncols() {
        let ui = u[(i, c)].clone();
        let uj = u[(j, c)].clone();
        u[(i, c)] = x * &ui + y * &uj;
        u[(j, c)] = &s * &ui + &t * &uj;
    }
}

fn negate_row(a: &mut IntMat, u: &mut IntMat, i: usize) {
    for j in 0..a.ncols() {
        let x = -a[(i, j)].clone();
        a[(i, j)] = x;
    }
    for j in 0..u.ncols() {
        let x = -u[(i, j)].clone();
        u[(i, j)] = x;
    }
}

/// Division rounded to nearest, so remainders satisfy |r| <= |b|/2.
fn div_nearest(a: &Int, b: &Int) -> Int {
    let (mut q, r) = a.div_rem(b);
    let two_r = r.abs() * Int::from(2);
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Row echelon form over Q with integer rows.
///
/// Rows are stored as primitive integer vectors with positive leading
/// coefficient, ordered by pivot column. Insertion order does not affect the
/// row space, and all reductions are deterministic.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// (pivot column, row), sorted by pivot column.
    rows: Vec<(usize, Vec<Int>)>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Rat>>>(cols: usize, rows: I) -> Self {
        let mut e = Echelon::new(cols);
        for r in rows {
            e.insert(&r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Insert a row; returns true if it enlarged the row space.
    pub fn insert(&mut self, row: &[Rat]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut v = clear_denominators(row);
        self.reduce_int(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        normalize_primitive(&mut v);
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    /// Reduce an integer vector by the echelon rows (fraction-free: scales
    /// the vector as needed and re-normalizes to primitive form at the end).
    fn reduce_int(&self, v: &mut Vec<Int>) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let g = v[*p].gcd(&row[*p]);
            let scale = &row[*p] / &g;
            let factor = &v[*p] / &g;
            for j in 0..self.cols {
                let t = &v[j] * &scale - &row[j] * &factor;
                v[j] = t;
            }
        }
    }

    /// Does the vector lie in the row space?
    pub fn contains(&self, row: &[Rat]) -> bool {
        let mut v = clear_denominators(row);
        self.reduce_int(&mut v);
        v.iter().all(|x| x.is_zero())
    }

    /// Residue of a rational vector modulo the row space, eliminating pivot
    /// coordinates in pivot order.
    pub fn residue(&self, row: &[Rat]) -> Vec<Rat> {
        let mut v = row.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = &v[*p] / Rat::from_integer(r[*p].clone());
            for j in 0..self.cols {
                if r[j].is_zero() {
                    continue;
                }
                let d = &f * Rat::from_integer(r[j].clone());
                v[j] -= d;
            }
        }
        v
    }

    /// The echelon rows themselves as rational vectors (a basis of the row
    /// space).
    pub fn spanning_rows(&self) -> Vec<Vec<Rat>> {
        self.rows
            .iter()
            .map(|(_, r)| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect()
    }

    /// Basis of the solution space of (rows as equations) x = 0.
    ///
    /// Deterministic: one vector per free column in ascending column order,
    /// normalized to a primitive integer vector whose free coordinate is
    /// positive.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let pivot_set: std::collections::BTreeMap<usize, usize> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (*p, i))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[free] = Rat::one();
            // Back-substitute from the bottom row upward.
            for (p, row) in self.rows.iter().rev() {
                let mut acc = Rat::zero();
                for j in p + 1..self.cols {
                    if row[j].is_zero() || x[j].is_zero() {
                        continue;
                    }
                    acc += Rat::from_integer(row[j].clone()) * &x[j];
                }
                x[*p] = -acc / Rat::from_integer(row[*p].clone());
            }
            normalize_primitive_rat(&mut x);
            basis.push(x);
        }
        basis
    }
}

fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn normalize_primitive(v: &mut [Int]) {
    let mut g = Int::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    let lead_negative = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if lead_negative {
        g = -g;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

fn normalize_primitive_rat(v: &mut [Rat]) {
    let ints = clear_denominators(v);
    let mut w: Vec<Int> = ints;
    normalize_primitive(&mut w);
    for (x, y) in v.iter_mut().zip(w) {
        *x = Rat::from_integer(y);
    }
}

/// Rank of a dense rational matrix given as rows.
pub fn rank(cols: usize, rows: impl IntoIterator<Item = Vec<Rat>>) -> usize {
    Echelon::from_rows(cols, rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMat) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U*M*V != D");
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        let k = s.d.nrows().min(s.d.ncols());
        for i in 0..k {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero() || i >= k);
                }
            }
            assert!(!s.d[(i, i)].is_negative());
        }
        for i in 0..k.saturating_sub(1) {
            let a = &s.d[(i, i)];
            let b = &s.d[(i + 1, i + 1)];
            if !a.is_zero() {
                assert!((b % a).is_zero(), "divisibility chain broken");
            } else {
                assert!(b.is_zero());
            }
        }
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        check_snf(&m);
        assert_eq!(s.d[(0, 0)], int(1));
        assert_eq!(s.d[(1, 1)], int(6));
    }

    #[test]
    fn snf_identity_one() {
        let m = IntMat::from_rows(vec![vec![1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d[(0, 0)], int(1));
        check_snf(&m);
    }

    #[test]
    fn snf_zero() {
        let m = IntMat::from_rows(vec![vec![0, 0], vec![0, 0]]);
        let s = smith_normal_form(&m);
        assert!(s.d[(0, 0)].is_zero() && s.d[(1, 1)].is_zero());
        check_snf(&m);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMat::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12]]);
        check_snf(&m);
        let s = smith_normal_form(&m);
        assert_eq!(s.d[(0, 0)], int(2));
        // Known invariant factors of this classic example: 2, 6.
        assert_eq!(s.d[(1, 1)], int(6));
    }

    #[test]
    fn echelon_nullspace() {
        // x + y + z = 0, x - z = 0  =>  kernel spanned by (1, -2, 1).
        let rows = vec![
            vec![rat(1, 1), rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(0, 1), rat(-1, 1)],
        ];
        let e = Echelon::from_rows(3, rows);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![rat(1, 1), rat(-2, 1), rat(1, 1)]);
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new(3);
        e.insert(&[rat(1, 2), rat(1, 1), rat(0, 1)]);
        e.insert(&[rat(0, 1), rat(1, 3, ), rat(1, 1)]);
        assert!(e.contains(&[rat(1, 1), rat(4, 1), rat(6, 1)]));
        assert!(!e.contains(&[rat(0, 1), rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = IntMat::from_rows(vec![vec![2, 3], vec![1, 2]]);
        let inv = m.unimodular_inverse();
        assert_eq!(m.mul(&inv), IntMat::identity(2));
    }
}
