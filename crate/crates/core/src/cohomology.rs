//! 2-cocycles and bicharacters on `Z^l`: antisymmetrization, bicharacter
//! representatives, centre, vanishing-on-centre normalization, quotient
//! bicharacters, and simplicity of the associated twisted group algebra.
//!
//! Cocycles are presented as bicharacter plus coboundary of a boxed
//! 1-cochain. Every cohomology class on `Z^l` has a bicharacter
//! representative, so the presentation loses nothing while keeping
//! evaluation exact.

use crate::angle::{AngleError, ExactAngle};
use crate::lattice::{rational_kernel_mod1, smith_normal_form, IntMatrix, Sublattice};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("vector has length {got}, expected rank {expected}")]
    Rank { got: usize, expected: usize },
    #[error("evaluation at {0:?} is outside the cochain box")]
    OutOfBox(Vec<i64>),
    #[error("cocycles are not cohomologous (skew parts differ)")]
    NotCohomologous,
    #[error("cochain recursion inconsistent at {0:?}")]
    RecursionInconsistent(Vec<i64>),
    #[error(transparent)]
    Angle(#[from] AngleError),
}

/// A bicharacter of `Z^l`, presented by its pairing matrix on the standard
/// generators: `ω(p,q) = Σ_{i,j} p_i q_j · pairing[i][j]` in turns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicharacter {
    rank: usize,
    pairing: Vec<Vec<ExactAngle>>,
}

impl Bicharacter {
    pub fn new(pairing: Vec<Vec<ExactAngle>>) -> Self {
        let rank = pairing.len();
        for row in &pairing {
            assert_eq!(row.len(), rank, "pairing matrix must be square");
        }
        Self { rank, pairing }
    }

    pub fn trivial(rank: usize) -> Self {
        Self::new(vec![vec![ExactAngle::zero(); rank]; rank])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pairing(&self) -> &Vec<Vec<ExactAngle>> {
        &self.pairing
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExactAngle {
        &self.pairing[i][j]
    }

    pub fn is_trivial(&self) -> bool {
        self.pairing.iter().flatten().all(ExactAngle::is_zero)
    }

    pub fn eval_big(&self, p: &[BigInt], q: &[BigInt]) -> Result<ExactAngle, CocycleError> {
        if p.len() != self.rank || q.len() != self.rank {
            return Err(CocycleError::Rank {
                got: p.len().max(q.len()),
                expected: self.rank,
            });
        }
        let mut acc = ExactAngle::zero();
        for (i, pi) in p.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                if qj.is_zero() {
                    continue;
                }
                let term = self.pairing[i][j].scale_big(&(pi * qj));
                acc = acc.checked_add(&term)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, p: &[i64], q: &[i64]) -> Result<ExactAngle, CocycleError> {
        let pb: Vec<BigInt> = p.iter().map(|&v| BigInt::from(v)).collect();
        let qb: Vec<BigInt> = q.iter().map(|&v| BigInt::from(v)).collect();
        self.eval_big(&pb, &qb)
    }

    /// The antisymmetric bicharacter `ωω*` with matrix `M − Mᵀ`.
    pub fn skew(&self) -> Bicharacter {
        let pairing = (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| {
                        self.pairing[i][j]
                            .checked_sub(&self.pairing[j][i])
                            .expect("pairing entries share a basis")
                    })
                    .collect()
            })
            .collect();
        Bicharacter::new(pairing)
    }
}

/// A normalised 1-cochain on `Z^l`, known on a finite box of vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCochain {
    rank: usize,
    values: BTreeMap<Vec<i64>, ExactAngle>,
}

impl OneCochain {
    pub fn new(rank: usize, mut values: BTreeMap<Vec<i64>, ExactAngle>) -> Self {
        for v in values.keys() {
            assert_eq!(v.len(), rank, "cochain key dimension mismatch");
        }
        // Normalised: value at 0 is 0.
        values.insert(vec![0; rank], ExactAngle::zero());
        Self { rank, values }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &BTreeMap<Vec<i64>, ExactAngle> {
        &self.values
    }

    pub fn eval(&self, m: &[i64]) -> Result<ExactAngle, CocycleError> {
        if m.len() != self.rank {
            return Err(CocycleError::Rank {
                got: m.len(),
                expected: self.rank,
            });
        }
        if m.iter().all(|&v| v == 0) {
            return Ok(ExactAngle::zero());
        }
        self.values
            .get(m)
            .cloned()
            .ok_or_else(|| CocycleError::OutOfBox(m.to_vec()))
    }
}

/// A presented 2-cocycle on `Z^l`: `σ(p,q) = base(p,q) + b(p) + b(q) − b(p+q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    base: Bicharacter,
    cochain: Option<OneCochain>,
}

impl Cocycle2 {
    pub fn new(base: Bicharacter, cochain: Option<OneCochain>) -> Self {
        if let Some(b) = &cochain {
            assert_eq!(b.rank(), base.rank(), "cochain rank mismatch");
        }
        Self { base, cochain }
    }

    pub fn from_bicharacter(base: Bicharacter) -> Self {
        Self::new(base, None)
    }

    pub fn trivial(rank: usize) -> Self {
        Self::from_bicharacter(Bicharacter::trivial(rank))
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn base(&self) -> &Bicharacter {
        &self.base
    }

    pub fn cochain(&self) -> Option<&OneCochain> {
        self.cochain.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        self.base.is_trivial()
            && self
                .cochain
                .as_ref()
                .map_or(true, |b| b.values().values().all(ExactAngle::is_zero))
    }

    pub fn eval(&self, p: &[i64], q: &[i64]) -> Result<ExactAngle, CocycleError> {
        let mut acc = self.base.eval(p, q)?;
        if let Some(b) = &self.cochain {
            let sum: Vec<i64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
            acc = acc
                .checked_add(&b.eval(p)?)?
                .checked_add(&b.eval(q)?)?
                .checked_sub(&b.eval(&sum)?)?;
        }
        Ok(acc)
    }

    /// `σ*(g,h) = −σ(h,g)`.
    pub fn star(&self) -> Cocycle2 {
        let rank = self.rank();
        let pairing = (0..rank)
            .map(|i| (0..rank).map(|j| self.base.entry(j, i).neg()).collect())
            .collect();
        let cochain = self.cochain.as_ref().map(|b| {
            OneCochain::new(
                rank,
                b.values()
                    .iter()
                    .map(|(k, v)| (k.clone(), v.neg()))
                    .collect(),
            )
        });
        Cocycle2::new(Bicharacter::new(pairing), cochain)
    }

    /// The antisymmetric bicharacter `σσ*`; the coboundary part cancels.
    pub fn antisymmetrize(&self) -> Bicharacter {
        self.base.skew()
    }
}

/// Whether two presented cocycles are cohomologous: `σσ* = ττ*`.
pub fn is_cohomologous(a: &Cocycle2, b: &Cocycle2) -> bool {
    a.rank() == b.rank() && a.antisymmetrize() == b.antisymmetrize()
}

/// The lower-triangular bicharacter whose skew form equals the given
/// antisymmetric pairing.
pub fn lower_triangular_representative(skew: &Bicharacter) -> Bicharacter {
    let rank = skew.rank();
    let pairing = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    if i >= j {
                        skew.entry(i, j).clone()
                    } else {
                        ExactAngle::zero()
                    }
                })
                .collect()
        })
        .collect();
    Bicharacter::new(pairing)
}

/// The lower-triangular bicharacter representative of the class of `σ`:
/// `ω(e_i,e_j) = (σσ*)(e_i,e_j)` for `i ≥ j`, trivial otherwise.
pub fn bicharacter_from_cocycle(sigma: &Cocycle2) -> Bicharacter {
    lower_triangular_representative(&sigma.antisymmetrize())
}

/// The centre `Z_ω = {a : (ωω*)(a,b) = 0 for all b}` as a sublattice of
/// `Z^l`.
pub fn centre(omega: &Bicharacter) -> Sublattice {
    let skew = omega.skew();
    // Row r imposes (ωω*)(a, e_r) = 0, i.e. Σ_j a_j skew[j][r] = 0 in turns.
    let rows: Vec<Vec<ExactAngle>> = (0..omega.rank())
        .map(|r| (0..omega.rank()).map(|j| skew.entry(j, r).clone()).collect())
        .collect();
    rational_kernel_mod1(&rows, omega.rank())
}

/// A bicharacter on a finitely generated abelian group presented by
/// generators with order annotations (`0` marks an infinite-order generator).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBicharacter {
    orders: Vec<BigInt>,
    pairing: Vec<Vec<ExactAngle>>,
}

impl QuotientBicharacter {
    pub fn new(orders: Vec<BigInt>, pairing: Vec<Vec<ExactAngle>>) -> Self {
        assert_eq!(orders.len(), pairing.len());
        for row in &pairing {
            assert_eq!(row.len(), orders.len());
        }
        Self { orders, pairing }
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn pairing(&self) -> &Vec<Vec<ExactAngle>> {
        &self.pairing
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    pub fn is_trivial_group(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn eval(&self, p: &[BigInt], q: &[BigInt]) -> Result<ExactAngle, CocycleError> {
        if p.len() != self.orders.len() || q.len() != self.orders.len() {
            return Err(CocycleError::Rank {
                got: p.len().max(q.len()),
                expected: self.orders.len(),
            });
        }
        let mut acc = ExactAngle::zero();
        for (i, pi) in p.iter().enumerate() {
            for (j, qj) in q.iter().enumerate() {
                if pi.is_zero() || qj.is_zero() {
                    continue;
                }
                acc = acc.checked_add(&self.pairing[i][j].scale_big(&(pi * qj)))?;
            }
        }
        Ok(acc)
    }

    fn skew_entry(&self, i: usize, j: usize) -> ExactAngle {
        self.pairing[i][j]
            .checked_sub(&self.pairing[j][i])
            .expect("pairing entries share a basis")
    }

    /// Simplicity of the twisted group algebra of this bicharacter: the
    /// skew form pairs every nonidentity element nontrivially with some
    /// generator. Equivalently, the mod-1 kernel of the skew pairing equals
    /// the relation lattice of the presentation.
    pub fn twisted_group_algebra_simple(&self) -> bool {
        let n = self.generator_count();
        if n == 0 {
            return true;
        }
        let rows: Vec<Vec<ExactAngle>> = (0..n)
            .map(|r| (0..n).map(|j| self.skew_entry(j, r)).collect())
            .collect();
        let kernel = rational_kernel_mod1(&rows, n);
        // The relation lattice always sits inside the kernel; simplicity is
        // the reverse inclusion.
        kernel.basis().iter().all(|v| {
            v.iter().zip(&self.orders).all(|(coord, order)| {
                if order.is_zero() {
                    coord.is_zero()
                } else {
                    (coord % order).is_zero()
                }
            })
        })
    }
}

/// Result of normalizing a bicharacter to vanish on its centre.
#[derive(Debug, Clone)]
pub struct CentreNormalization {
    /// Cohomologous bicharacter on `Z^l` that vanishes whenever either
    /// argument lies in the centre.
    pub omega_prime: Bicharacter,
    /// The centre `Z_ω`.
    pub centre: Sublattice,
    /// The descended bicharacter on `Z^l / Z_ω`.
    pub quotient: QuotientBicharacter,
    /// Coordinate change into the adapted basis: `x_f = U · x_e`.
    to_adapted: IntMatrix,
    /// Orders of all adapted generators (before dropping trivial ones).
    orders_full: Vec<BigInt>,
    /// Indices of adapted generators kept in the quotient presentation.
    kept: Vec<usize>,
}

impl CentreNormalization {
    /// Image of an ambient vector in the quotient presentation: adapted
    /// coordinates reduced modulo the generator orders.
    pub fn quotient_coords(&self, p: &[BigInt]) -> Vec<BigInt> {
        let adapted = self.to_adapted.mul_vec(p);
        self.kept
            .iter()
            .map(|&i| {
                let o = &self.orders_full[i];
                if o.is_zero() {
                    adapted[i].clone()
                } else {
                    adapted[i].mod_floor(o)
                }
            })
            .collect()
    }
}

/// Replace `ω` by a cohomologous bicharacter `ω′` vanishing on `Z_ω` in each
/// coordinate, together with the descended bicharacter on `Z^l / Z_ω`.
pub fn vanish_on_centre_normalize(omega: &Bicharacter) -> CentreNormalization {
    let l = omega.rank();
    let z = centre(omega);
    let skew = omega.skew();

    // Adapted basis from the SNF of the centre inclusion, as columns.
    let r = z.rank();
    let (orders_full, f_cols, u) = if r == 0 {
        (
            vec![BigInt::zero(); l],
            IntMatrix::identity(l),
            IntMatrix::identity(l),
        )
    } else {
        let mut data = Vec::with_capacity(l * r);
        for row in 0..l {
            for gen in z.basis() {
                data.push(gen[row].clone());
            }
        }
        let c = IntMatrix::new(l, r, data);
        let (s, u, _v) = smith_normal_form(&c);
        let mut orders = vec![BigInt::zero(); l];
        for (i, order) in orders.iter_mut().enumerate().take(r.min(l)) {
            *order = s.get(i, i).clone();
        }
        // f_i are the columns of U^{-1}; invert via HNF (U unimodular).
        let (h, w) = crate::lattice::hermite_normal_form(&u);
        debug_assert_eq!(h, IntMatrix::identity(l));
        (orders, w, u)
    };

    // Skew values in the adapted basis: P_f = Fᵀ (M − Mᵀ) F.
    let f_basis: Vec<Vec<BigInt>> = (0..l)
        .map(|i| (0..l).map(|row| f_cols.get(row, i).clone()).collect())
        .collect();
    let skew_f: Vec<Vec<ExactAngle>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    skew.eval_big(&f_basis[i], &f_basis[j])
                        .expect("rank checked")
                })
                .collect()
        })
        .collect();

    // Lower-triangular representative in the adapted basis; entries against
    // finite-order generators are automatically compatible with the orders.
    let pairing_f: Vec<Vec<ExactAngle>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    if i >= j {
                        skew_f[i][j].clone()
                    } else {
                        ExactAngle::zero()
                    }
                })
                .collect()
        })
        .collect();

    // Pull back to the standard basis: M_e = Uᵀ P_f U.
    let u_cols: Vec<Vec<BigInt>> = (0..l)
        .map(|c| (0..l).map(|r| u.get(r, c).clone()).collect())
        .collect();
    let pairing_e: Vec<Vec<ExactAngle>> = (0..l)
        .map(|a| {
            (0..l)
                .map(|b| {
                    let mut acc = ExactAngle::zero();
                    for i in 0..l {
                        for j in 0..l {
                            let coeff = &u_cols[a][i] * &u_cols[b][j];
                            if coeff.is_zero() {
                                continue;
                            }
                            acc = acc
                                .checked_add(&pairing_f[i][j].scale_big(&coeff))
                                .expect("shared basis");
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let omega_prime = Bicharacter::new(pairing_e);

    let kept: Vec<usize> = (0..l).filter(|&i| !orders_full[i].is_one()).collect();
    let q_pairing: Vec<Vec<ExactAngle>> = kept
        .iter()
        .map(|&i| kept.iter().map(|&j| pairing_f[i][j].clone()).collect())
        .collect();
    let q_orders: Vec<BigInt> = kept.iter().map(|&i| orders_full[i].clone()).collect();
    let quotient = QuotientBicharacter::new(q_orders, q_pairing);

    CentreNormalization {
        omega_prime,
        centre: z,
        quotient,
        to_adapted: u,
        orders_full,
        kept,
    }
}

/// The coboundary cocycle `δ¹b` of a boxed 1-cochain.
pub fn coboundary(b: OneCochain) -> Cocycle2 {
    let rank = b.rank();
    Cocycle2::new(Bicharacter::trivial(rank), Some(b))
}

/// Reconstruct the 1-cochain `b` with `δ¹b = ρ − ω` on the box, normalised
/// to vanish at `0` and at each generator, by induction over generators.
pub fn flatten_to_constant(
    rho: &Cocycle2,
    omega: &Bicharacter,
    box_bound: i64,
) -> Result<OneCochain, CocycleError> {
    let l = rho.rank();
    if omega.rank() != l {
        return Err(CocycleError::Rank {
            got: omega.rank(),
            expected: l,
        });
    }
    if !is_cohomologous(rho, &Cocycle2::from_bicharacter(omega.clone())) {
        return Err(CocycleError::NotCohomologous);
    }
    assert!(box_bound >= 0);
    let ctilde = |p: &[i64], q: &[i64]| -> Result<ExactAngle, CocycleError> {
        Ok(rho.eval(p, q)?.checked_sub(&omega.eval(p, q)?)?)
    };

    let mut values: BTreeMap<Vec<i64>, ExactAngle> = BTreeMap::new();
    values.insert(vec![0; l], ExactAngle::zero());
    // Extend axis by axis: at stage i, walk the i-th coordinate away from the
    // hyperplane m_i = 0 where b is already known.
    for i in 0..l {
        let mut points: Vec<Vec<i64>> = values.keys().cloned().collect();
        points.sort();
        for base in points {
            let mut gi = vec![0i64; l];
            gi[i] = 1;
            for step in 1..=box_bound {
                let mut m = base.clone();
                m[i] = step;
                let mut prev = m.clone();
                prev[i] = step - 1;
                // b(m) = b(m − g_i) − c̃(g_i, m − g_i)
                let v = values[&prev].checked_sub(&ctilde(&gi, &prev)?)?;
                values.insert(m, v);

                let mut m = base.clone();
                m[i] = -step;
                let mut next = m.clone();
                next[i] = -step + 1;
                // b(m) = b(m + g_i) + c̃(g_i, m)
                let v = values[&next].checked_add(&ctilde(&gi, &m)?)?;
                values.insert(m, v);
            }
        }
    }
    let b = OneCochain::new(l, values);

    // Post-hoc verification: δ¹b = ρ − ω wherever p, q, p+q are in the box.
    let in_box = |v: &[i64]| v.iter().all(|&x| x.abs() <= box_bound);
    for p in b.values().keys() {
        for q in b.values().keys() {
            let sum: Vec<i64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
            if !in_box(&sum) {
                continue;
            }
            let delta = b
                .eval(p)?
                .checked_add(&b.eval(q)?)?
                .checked_sub(&b.eval(&sum)?)?;
            if delta != ctilde(p, q)? {
                return Err(CocycleError::RecursionInconsistent(p.clone()));
            }
        }
    }
    Ok(b)
}

/// Finitely supported function on `Z^l` with complex coefficients.
pub type GroupFn = BTreeMap<Vec<i64>, Complex64>;

/// The canonical trace `f ↦ f(0)` on the twisted group algebra.
pub fn trace_canonical(f: &GroupFn) -> Complex64 {
    f.iter()
        .find(|(k, _)| k.iter().all(|&v| v == 0))
        .map(|(_, v)| *v)
        .unwrap_or(Complex64::ZERO)
}

/// Twisted convolution of finitely supported functions on `Z^l`:
/// `(f ∗ g)(p) = Σ_q e^{2πi σ(q, p−q)} f(q) g(p−q)`.
pub fn group_convolve(f: &GroupFn, g: &GroupFn, sigma: &Cocycle2) -> Result<GroupFn, CocycleError> {
    let mut out = GroupFn::new();
    for (p, fv) in f {
        for (q, gv) in g {
            let sum: Vec<i64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
            let w = crate::angle::unit_phase(&sigma.eval(p, q)?) * fv * gv;
            let entry = out.entry(sum).or_insert(Complex64::ZERO);
            *entry += w;
        }
    }
    out.retain(|_, v| *v != Complex64::ZERO);
    Ok(out)
}

/// Turn a list of `(vector, coefficient)` pairs into a group function.
pub fn group_fn_from(parts: &[(Vec<i64>, Complex64)]) -> GroupFn {
    let mut out = GroupFn::new();
    for (k, v) in parts {
        let entry = out.entry(k.clone()).or_insert(Complex64::ZERO);
        *entry += v;
    }
    out.retain(|_, v| *v != Complex64::ZERO);
    out
}

/// Convenience: the `n`-th unit vector of `Z^l` as `i64`s.
pub fn unit_vec(l: usize, n: usize) -> Vec<i64> {
    let mut v = vec![0i64; l];
    v[n] = 1;
    v
}

/// Convenience: `i64` slice to `BigInt` vector.
pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Render a `BigInt` vector with `i64` entries where possible (for reports).
pub fn to_i64_lossy(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()
}
