//! Integer matrix normal forms and kernels.
//!
//! Row-style Hermite normal form with nonnegative pivots is the canonical
//! presentation for sublattices of `Z^d`, so lattice equality is structural.
//! All arithmetic is arbitrary precision; unimodular transforms blow up entry
//! sizes quickly even on small inputs.

use crate::angle::ExactAngle;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&v| BigInt::from(v))
            })
            .collect();
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.get_mut(c, r) = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.get(k, c);
                    *out.get_mut(r, c) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&r| !m.get(r, k).is_zero());
                match swap {
                    None => return BigInt::zero(),
                    Some(r) => {
                        for c in 0..n {
                            let tmp = m.get(k, c).clone();
                            *m.get_mut(k, c) = m.get(r, c).clone();
                            *m.get_mut(r, c) = tmp;
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    *m.get_mut(i, j) = v;
                }
                *m.get_mut(i, k) = BigInt::zero();
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols() {
        let tmp = m.get(a, c).clone();
        *m.get_mut(a, c) = m.get(b, c).clone();
        *m.get_mut(b, c) = tmp;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m.get(r, c).clone();
        *m.get_mut(r, c) = v;
    }
}

/// row_i -= q * row_j
fn submul_row(m: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for c in 0..m.cols() {
        let v = m.get(i, c) - q * m.get(j, c);
        *m.get_mut(i, c) = v;
    }
}

/// Replace rows (p, i) by the unimodular gcd combination that puts
/// gcd(h[p][col], h[i][col]) at (p, col) and 0 at (i, col). When the pivot
/// already divides the entry this is a plain shear, so row p never changes
/// in that case and elimination always makes progress.
fn gcd_rows(h: &mut IntMatrix, u: &mut IntMatrix, p: usize, i: usize, col: usize) {
    let a = h.get(p, col).clone();
    let b = h.get(i, col).clone();
    if b.is_zero() {
        return;
    }
    if a.is_zero() {
        swap_rows(h, p, i);
        swap_rows(u, p, i);
        return;
    }
    if (&b % &a).is_zero() {
        let q = &b / &a;
        submul_row(h, i, p, &q);
        submul_row(u, i, p, &q);
        return;
    }
    let e = a.extended_gcd(&b);
    let (g, s, t) = (e.gcd, e.x, e.y);
    let ag = &a / &g;
    let bg = &b / &g;
    let apply = |m: &mut IntMatrix| {
        for c in 0..m.cols() {
            let rp = m.get(p, c).clone();
            let ri = m.get(i, c).clone();
            *m.get_mut(p, c) = &s * &rp + &t * &ri;
            *m.get_mut(i, c) = -&bg * rp + &ag * ri;
        }
    };
    apply(h);
    apply(u);
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * M = H`,
/// `det(U) = ±1`, pivots positive, entries above each pivot reduced into
/// `[0, pivot)`, and zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row == h.rows() {
            break;
        }
        let found = (pivot_row..h.rows()).find(|&r| !h.get(r, col).is_zero());
        let Some(first) = found else { continue };
        swap_rows(&mut h, pivot_row, first);
        swap_rows(&mut u, pivot_row, first);
        for r in pivot_row + 1..h.rows() {
            gcd_rows(&mut h, &mut u, pivot_row, r, col);
        }
        if h.get(pivot_row, col).is_negative() {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.get(r, col).div_floor(&pivot);
            submul_row(&mut h, r, pivot_row, &q);
            submul_row(&mut u, r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `U * M * V = S`, `S` diagonal
/// with nonnegative entries `d_1 | d_2 | ...`, and `U`, `V` unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());

    let mut k = 0;
    while k < n {
        // Move some nonzero entry into (k, k).
        let mut found = None;
        'search: for r in k..s.rows() {
            for c in k..s.cols() {
                if !s.get(r, c).is_zero() {
                    found = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((r, c)) = found else { break };
        swap_rows(&mut s, k, r);
        swap_rows(&mut u, k, r);
        // Column swap on s is a row swap on v^T; keep v as cols transform.
        if c != k {
            for rr in 0..s.rows() {
                let tmp = s.get(rr, k).clone();
                *s.get_mut(rr, k) = s.get(rr, c).clone();
                *s.get_mut(rr, c) = tmp;
            }
            for rr in 0..v.rows() {
                let tmp = v.get(rr, k).clone();
                *v.get_mut(rr, k) = v.get(rr, c).clone();
                *v.get_mut(rr, c) = tmp;
            }
        }
        loop {
            for r in k + 1..s.rows() {
                gcd_rows(&mut s, &mut u, k, r, k);
            }
            let col_done = (k + 1..s.cols()).all(|c| s.get(k, c).is_zero());
            if col_done {
                break;
            }
            // Clear the pivot row with column operations (work on transposes).
            let mut st = s.transpose();
            let mut vt = v.transpose();
            for r in k + 1..st.rows() {
                gcd_rows(&mut st, &mut vt, k, r, k);
            }
            s = st.transpose();
            v = vt.transpose();
        }
        if s.get(k, k).is_negative() {
            negate_row(&mut s, k);
            negate_row(&mut u, k);
        }
        k += 1;
    }

    // Enforce the divisibility chain d_i | d_{i+1} with explicit 2x2 block
    // transforms: diag(a,b) -> diag(gcd, lcm). Both rows and both columns
    // touched here are zero outside the block, so there is no fill-in, and
    // each fix strictly decreases d_i, which bounds the loop.
    loop {
        let mut changed = false;
        for i in 0..n.saturating_sub(1) {
            let a = s.get(i, i).clone();
            let b = s.get(i + 1, i + 1).clone();
            debug_assert!(!(a.is_zero() && !b.is_zero()), "zeros trail after diagonalization");
            if a.is_zero() || b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let ag = &a / &g;
            let bg = &b / &g;
            // Rows: [x, y; -b/g, a/g], determinant 1.
            let row_transform = |m: &mut IntMatrix| {
                for c in 0..m.cols() {
                    let ri = m.get(i, c).clone();
                    let rj = m.get(i + 1, c).clone();
                    *m.get_mut(i, c) = &x * &ri + &y * &rj;
                    *m.get_mut(i + 1, c) = -&bg * ri + &ag * rj;
                }
            };
            row_transform(&mut s);
            row_transform(&mut u);
            // Columns: C_i += C_{i+1}, then C_{i+1} -= (y*b/g) * C_i.
            let shear = &y * &b / &g;
            let col_transform = |m: &mut IntMatrix| {
                for r in 0..m.rows() {
                    let add = m.get(r, i + 1).clone();
                    *m.get_mut(r, i) += add;
                    let sub = &shear * m.get(r, i);
                    *m.get_mut(r, i + 1) -= sub;
                }
            };
            col_transform(&mut s);
            col_transform(&mut v);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    (s, u, v)
}

/// A sublattice of `Z^d`, stored as a full-row-rank basis in Hermite normal
/// form so that equality of lattices is equality of representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Sublattice {
    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: vec![] }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut row = vec![BigInt::zero(); dim];
                row[i] = BigInt::one();
                row
            })
            .collect();
        Self { dim, basis }
    }

    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), dim, "generator dimension mismatch");
        }
        if gens.is_empty() {
            return Self::zero(dim);
        }
        let m = IntMatrix::new(
            gens.len(),
            dim,
            gens.iter().flat_map(|g| g.iter().cloned()).collect(),
        );
        let (h, _) = hermite_normal_form(&m);
        let basis = (0..h.rows())
            .map(|r| h.row(r))
            .filter(|row| row.iter().any(|v| !v.is_zero()))
            .collect();
        Self { dim, basis }
    }

    pub fn from_generators_i64(dim: usize, gens: &[Vec<i64>]) -> Self {
        let gens: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.basis.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim);
        let mut rem: Vec<BigInt> = v.to_vec();
        let mut coords = vec![BigInt::zero(); self.basis.len()];
        for (i, row) in self.basis.iter().enumerate() {
            let pivot_col = row.iter().position(|x| !x.is_zero())?;
            let (q, r) = rem[pivot_col].div_rem(&row[pivot_col]);
            if !r.is_zero() {
                return None;
            }
            for (c, b) in row.iter().enumerate() {
                rem[c] -= &q * b;
            }
            coords[i] = q;
        }
        rem.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.contains(&v)
    }

    /// Ambient vector of the given basis coordinates.
    pub fn from_coordinates(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.rank());
        let mut out = vec![BigInt::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += c * b;
            }
        }
        out
    }

    /// Direct sum `self ⊕ other` inside `Z^{dim+dim'}`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let dim = self.dim + other.dim;
        let mut gens = Vec::new();
        for row in &self.basis {
            let mut v = row.clone();
            v.extend(std::iter::repeat_with(BigInt::zero).take(other.dim));
            gens.push(v);
        }
        for row in &other.basis {
            let mut v: Vec<BigInt> = std::iter::repeat_with(BigInt::zero)
                .take(self.dim)
                .collect();
            v.extend(row.iter().cloned());
            gens.push(v);
        }
        Self::from_generators(dim, &gens)
    }
}

/// Kernel `{v : M v = 0}` of an integer matrix as a saturated sublattice of
/// `Z^cols`, basis in HNF.
pub fn integer_kernel(m: &IntMatrix) -> Sublattice {
    // Rows of U aligned with zero rows of H = HNF(M^T) span the kernel.
    let (h, u) = hermite_normal_form(&m.transpose());
    let mut gens = Vec::new();
    for r in 0..h.rows() {
        if (0..h.cols()).all(|c| h.get(r, c).is_zero()) {
            gens.push(u.row(r));
        }
    }
    Sublattice::from_generators(m.cols(), &gens)
}

/// The lattice `{a ∈ Z^d : Σ_j a_j · M[r][j] = 0 in the circle group, for
/// every row r}`.
///
/// Irrational coefficient parts must vanish exactly; rational parts must sum
/// to an integer, which introduces one slack column per row.
pub fn rational_kernel_mod1(rows: &[Vec<ExactAngle>], d: usize) -> Sublattice {
    for row in rows {
        assert_eq!(row.len(), d, "row dimension mismatch");
    }
    let n_slack = rows.len();
    let mut eq_rows: Vec<Vec<BigRational>> = Vec::new();
    // One exact equation per (row, symbol).
    for row in rows {
        let mut symbols: Vec<String> = Vec::new();
        for entry in row {
            for sym in entry.coeffs().keys() {
                if !symbols.contains(sym) {
                    symbols.push(sym.clone());
                }
            }
        }
        for sym in symbols {
            let mut eq = vec![BigRational::zero(); d + n_slack];
            for (j, entry) in row.iter().enumerate() {
                if let Some(c) = entry.coeffs().get(&sym) {
                    eq[j] = c.clone();
                }
            }
            eq_rows.push(eq);
        }
    }
    // One mod-1 equation per row: rational parts plus slack k_r.
    for (r, row) in rows.iter().enumerate() {
        let mut eq = vec![BigRational::zero(); d + n_slack];
        for (j, entry) in row.iter().enumerate() {
            eq[j] = entry.rational_part().clone();
        }
        eq[d + r] = -BigRational::one();
        eq_rows.push(eq);
    }
    if eq_rows.is_empty() {
        return Sublattice::full(d);
    }
    // Clear denominators row by row.
    let mut int_rows: Vec<BigInt> = Vec::new();
    for eq in &eq_rows {
        let mut lcm = BigInt::one();
        for v in eq {
            lcm = lcm.lcm(v.denom());
        }
        for v in eq {
            int_rows.push((v * BigRational::from_integer(lcm.clone())).to_integer());
        }
    }
    let m = IntMatrix::new(eq_rows.len(), d + n_slack, int_rows);
    let kernel = integer_kernel(&m);
    // Project to the first d coordinates; the projection is injective on the
    // kernel because a = 0 forces the slack to vanish.
    let gens: Vec<Vec<BigInt>> = kernel
        .basis()
        .iter()
        .map(|v| v[..d].to_vec())
        .collect();
    Sublattice::from_generators(d, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{ExactAngle, IrrationalBasis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, IntMatrix::identity(2));
        let z = IntMatrix::zero(2, 2);
        let (h, u) = hermite_normal_form(&z);
        assert!(h.is_zero());
        assert!(u.is_unimodular());
    }

    #[test]
    fn hnf_defining_equations() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        // Row-echelon with positive pivots.
        assert!(h.get(1, 0).is_zero());
        assert!(h.get(0, 0) > &BigInt::zero());
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        let (s, u, v) = smith_normal_form(&m);
        assert_eq!(u.mul(&m).mul(&v), s);
        assert_eq!(s.get(0, 0), &big(2));
        assert_eq!(s.get(1, 1), &big(4));
        assert!(u.is_unimodular() && v.is_unimodular());

        let id = IntMatrix::identity(3);
        let (s, _, _) = smith_normal_form(&id);
        assert_eq!(s, id);

        let z = IntMatrix::from_rows_i64(&[vec![0]]);
        let (s, _, _) = smith_normal_form(&z);
        assert!(s.get(0, 0).is_zero());
    }

    #[test]
    fn random_normal_forms_satisfy_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..4);
            let data: Vec<BigInt> = (0..rows * cols)
                .map(|_| big(rng.gen_range(-9..=9)))
                .collect();
            let m = IntMatrix::new(rows, cols, data);
            let (h, u) = hermite_normal_form(&m);
            assert_eq!(u.mul(&m), h);
            assert!(u.is_unimodular());
            let (s, u, v) = smith_normal_form(&m);
            assert_eq!(u.mul(&m).mul(&v), s);
            assert!(u.is_unimodular());
            assert!(v.is_unimodular());
            for i in 0..rows.min(cols) {
                for j in 0..cols.min(rows) {
                    if i != j {
                        assert!(s.get(i, j).is_zero());
                    }
                }
                assert!(!s.get(i, i).is_negative());
                if i + 1 < rows.min(cols) {
                    let a = s.get(i, i);
                    let b = s.get(i + 1, i + 1);
                    if !a.is_zero() {
                        assert!((b % a).is_zero(), "divisibility chain");
                    } else {
                        assert!(b.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let m = IntMatrix::from_rows_i64(&[vec![1, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rank(), 1);
        assert!(k.contains_i64(&[-2, 1]));

        let k = integer_kernel(&IntMatrix::identity(3));
        assert!(k.is_trivial());

        let m = IntMatrix::from_rows_i64(&[vec![2, 4], vec![1, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rank(), 1);
        assert!(k.contains_i64(&[-2, 1]));
        for row in k.basis() {
            assert!(m.mul_vec(row).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn kernel_is_saturated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let rows = rng.gen_range(1..3);
            let cols = rng.gen_range(2..5);
            let data: Vec<BigInt> = (0..rows * cols)
                .map(|_| big(rng.gen_range(-9..=9)))
                .collect();
            let m = IntMatrix::new(rows, cols, data);
            let k = integer_kernel(&m);
            for row in k.basis() {
                for p in [2i64, 3, 5, 7] {
                    let p = big(p);
                    if row.iter().all(|v| (v % &p).is_zero()) {
                        let divided: Vec<BigInt> = row.iter().map(|v| v / &p).collect();
                        assert!(k.contains(&divided), "kernel must be saturated");
                    }
                }
            }
        }
    }

    #[test]
    fn rational_kernel_examples() {
        let half = ExactAngle::rational(1, 2).unwrap();
        let k = rational_kernel_mod1(&[vec![half.clone(), half]], 2);
        assert!(k.contains_i64(&[1, 1]));
        assert!(k.contains_i64(&[0, 2]));
        assert!(!k.contains_i64(&[1, 0]));

        let basis = IrrationalBasis::new(vec![("beta".into(), 0.4142135623730951)]).unwrap();
        let beta = ExactAngle::generator(&basis, "beta").unwrap();
        let k = rational_kernel_mod1(&[vec![beta, ExactAngle::zero()]], 2);
        assert_eq!(k.rank(), 1);
        assert!(k.contains_i64(&[0, 1]));
        assert!(!k.contains_i64(&[1, 0]));

        let k = rational_kernel_mod1(&[vec![ExactAngle::zero(), ExactAngle::zero()]], 2);
        assert!(k.is_full());
    }

    #[test]
    fn rational_kernel_matches_brute_force() {
        let basis = IrrationalBasis::new(vec![
            ("beta".into(), 0.4142135623730951),
            ("gamma".into(), 0.7182818284590451),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let random_angle = |rng: &mut ChaCha8Rng| {
            let r = ExactAngle::rational(rng.gen_range(0..6), rng.gen_range(1..=6)).unwrap();
            match rng.gen_range(0..3) {
                0 => r,
                1 => r
                    .checked_add(&ExactAngle::generator(&basis, "beta").unwrap())
                    .unwrap(),
                _ => r
                    .checked_add(
                        &ExactAngle::generator(&basis, "gamma")
                            .unwrap()
                            .scale(rng.gen_range(-2..=2)),
                    )
                    .unwrap(),
            }
        };
        for _ in 0..20 {
            let d = rng.gen_range(2..=3usize);
            let n_rows = rng.gen_range(1..=2usize);
            let rows: Vec<Vec<ExactAngle>> = (0..n_rows)
                .map(|_| (0..d).map(|_| random_angle(&mut rng)).collect())
                .collect();
            let k = rational_kernel_mod1(&rows, d);
            // Brute force over the box |a_i| <= 6.
            let mut coords = vec![-6i64; d];
            loop {
                let a = coords.clone();
                let mut in_kernel = true;
                for row in &rows {
                    let mut acc = ExactAngle::zero();
                    for (j, entry) in row.iter().enumerate() {
                        acc = acc.checked_add(&entry.scale(a[j])).unwrap();
                    }
                    if !acc.is_zero() {
                        in_kernel = false;
                        break;
                    }
                }
                assert_eq!(
                    k.contains_i64(&a),
                    in_kernel,
                    "disagreement at {a:?} for rows {rows:?}"
                );
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    coords[i] += 1;
                    if coords[i] <= 6 {
                        break;
                    }
                    coords[i] = -6;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
        }
    }
}
