//! Groupoid elements of product shift systems, the degree cocycle, twisted
//! convolution of finitely supported functions, and the character-valued
//! 1-cocycle driving the spectral action.
//!
//! An element is a reduced triple `(x, p, y)` with a certificate
//! `(m, n) ∈ N^k × N^k` satisfying `m − n = p` and `T^m x = T^n y`; the
//! certificate is kept minimal so that structural equality of triples is
//! element equality.

use crate::angle::{unit_phase, AngleError, AngleVector, ExactAngle};
use crate::cohomology::{Cocycle2, CocycleError};
use crate::graph::{
    compute_p_t, label_sum, EpPoint, Graph, GraphError, ProductSystem,
};
use crate::lattice::Sublattice;
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("elements are not composable: source and range differ")]
    NotComposable,
    #[error("no certificate: ({0:?}) is not a groupoid element")]
    NotGroupoidElement(Vec<i64>),
    #[error("point has {got} components, system has rank {expected}")]
    RankMismatch { got: usize, expected: usize },
    #[error("displacement {0:?} is outside the periodicity group")]
    OutsidePeriodicityGroup(Vec<i64>),
    #[error("the labeled crossed-product cocycle needs a labeled graph times the unit loop")]
    WrongSystemShape,
    #[error("source of the element differs from the base point")]
    BasePointMismatch,
    #[error("character dimension {got} differs from the centre rank {expected}")]
    CharacterDimension { got: usize, expected: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Angle(#[from] AngleError),
}

/// A reduced groupoid element `(x, p, y)` of a product system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupoidElem {
    range_pt: Vec<EpPoint>,
    disp: Vec<i64>,
    source_pt: Vec<EpPoint>,
    cert_m: Vec<usize>,
    cert_n: Vec<usize>,
}

fn minimal_certificate(x: &EpPoint, y: &EpPoint, p: i64) -> Option<(usize, usize)> {
    let lcm = num_integer::lcm(x.period(), y.period());
    let bound = x.prefix().len() + y.prefix().len() + p.unsigned_abs() as usize + lcm + 1;
    let start = 0.max(-p) as usize;
    (start..=start + bound)
        .find(|&n| x.shift((n as i64 + p) as usize) == y.shift(n))
        .map(|n| ((n as i64 + p) as usize, n))
}

impl GroupoidElem {
    /// Build `(x, p, y)`, computing the minimal certificate or failing if the
    /// triple is not in the groupoid.
    pub fn new(
        system: &ProductSystem,
        x: Vec<EpPoint>,
        p: Vec<i64>,
        y: Vec<EpPoint>,
    ) -> Result<Self, GroupoidError> {
        let k = system.rank();
        if x.len() != k || y.len() != k || p.len() != k {
            return Err(GroupoidError::RankMismatch {
                got: x.len().max(y.len()).max(p.len()),
                expected: k,
            });
        }
        let mut cert_m = Vec::with_capacity(k);
        let mut cert_n = Vec::with_capacity(k);
        for i in 0..k {
            let (m, n) = minimal_certificate(&x[i], &y[i], p[i])
                .ok_or_else(|| GroupoidError::NotGroupoidElement(p.clone()))?;
            cert_m.push(m);
            cert_n.push(n);
        }
        Ok(Self {
            range_pt: x,
            disp: p,
            source_pt: y,
            cert_m,
            cert_n,
        })
    }

    pub fn unit(system: &ProductSystem, x: Vec<EpPoint>) -> Result<Self, GroupoidError> {
        let k = system.rank();
        GroupoidElem::new(system, x.clone(), vec![0; k], x)
    }

    pub fn range(&self) -> &[EpPoint] {
        &self.range_pt
    }

    pub fn source(&self) -> &[EpPoint] {
        &self.source_pt
    }

    /// The degree cocycle `c(x, p, y) = p`.
    pub fn degree(&self) -> &[i64] {
        &self.disp
    }

    pub fn certificate(&self) -> (&[usize], &[usize]) {
        (&self.cert_m, &self.cert_n)
    }

    pub fn is_unit(&self) -> bool {
        self.disp.iter().all(|&p| p == 0) && self.range_pt == self.source_pt
    }

    pub fn inverse(&self) -> Self {
        Self {
            range_pt: self.source_pt.clone(),
            disp: self.disp.iter().map(|&p| -p).collect(),
            source_pt: self.range_pt.clone(),
            cert_m: self.cert_n.clone(),
            cert_n: self.cert_m.clone(),
        }
    }

    pub fn compose(
        &self,
        other: &Self,
        system: &ProductSystem,
    ) -> Result<Self, GroupoidError> {
        if self.source_pt != other.range_pt {
            return Err(GroupoidError::NotComposable);
        }
        let p = self
            .disp
            .iter()
            .zip(&other.disp)
            .map(|(a, b)| a + b)
            .collect();
        GroupoidElem::new(
            system,
            self.range_pt.clone(),
            p,
            other.source_pt.clone(),
        )
    }

    /// Validity of the stored certificate (used by tests).
    pub fn certificate_valid(&self) -> bool {
        self.range_pt
            .iter()
            .zip(&self.source_pt)
            .zip(self.cert_m.iter().zip(&self.cert_n))
            .all(|((x, y), (&m, &n))| x.shift(m) == y.shift(n))
    }
}

/// Membership in the interior of the isotropy: a loop whose displacement
/// lies in the periodicity group.
pub fn in_isotropy_interior(
    system: &ProductSystem,
    elem: &GroupoidElem,
) -> Result<bool, GroupoidError> {
    let p_t = compute_p_t(system)?;
    Ok(elem.range_pt == elem.source_pt && p_t.contains_i64(elem.degree()))
}

/// A continuous 2-cocycle on the groupoid, in one of the two presentations
/// the pipeline accepts.
#[derive(Debug, Clone)]
pub enum CocycleSpec {
    /// Pullback of a `Z^k` cocycle through the degree map:
    /// `σ(α,β) = ρ(c(α), c(β))`.
    Degree(Cocycle2),
    /// The crossed-product cocycle of a labeled rank-1 system times the unit
    /// loop: `σ(α,β) = (Z-degree of α) · h̃(β)`.
    LabelCrossed,
}

impl CocycleSpec {
    pub fn trivial(rank: usize) -> Self {
        CocycleSpec::Degree(Cocycle2::trivial(rank))
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            CocycleSpec::Degree(c) => c.is_trivial(),
            CocycleSpec::LabelCrossed => false,
        }
    }

    pub fn validate(&self, system: &ProductSystem) -> Result<(), GroupoidError> {
        match self {
            CocycleSpec::Degree(c) => {
                if c.rank() != system.rank() {
                    return Err(GroupoidError::RankMismatch {
                        got: c.rank(),
                        expected: system.rank(),
                    });
                }
                Ok(())
            }
            CocycleSpec::LabelCrossed => crossed_shape(system).map(|_| ()),
        }
    }
}

/// The `(labeled graph, unit loop)` shape required by the crossed-product
/// cocycle.
pub fn crossed_shape(system: &ProductSystem) -> Result<(&Graph, &crate::graph::EdgeLabeling), GroupoidError> {
    if system.rank() != 2 {
        return Err(GroupoidError::WrongSystemShape);
    }
    let z = system.component(1);
    let loop_ok = z.vertex_count() == 1
        && z.edge_count() == 1
        && z.edge(0).origin == z.edge(0).terminus;
    let labeling = system.labeling(0).ok_or(GroupoidError::WrongSystemShape)?;
    if !loop_ok {
        return Err(GroupoidError::WrongSystemShape);
    }
    Ok((system.component(0), labeling))
}

/// The label 1-cocycle `h̃` of a labeled graph, evaluated on the first
/// coordinate of an element through its certificate:
/// `h̃(x, p, y) = ℓ(x(0,m)) − ℓ(y(0,n))`.
pub fn h_tilde_elem(
    graph: &Graph,
    labeling: &crate::graph::EdgeLabeling,
    elem: &GroupoidElem,
    coord: usize,
) -> Result<ExactAngle, GroupoidError> {
    let x = &elem.range_pt[coord];
    let y = &elem.source_pt[coord];
    let m = elem.cert_m[coord];
    let n = elem.cert_n[coord];
    Ok(label_sum(labeling, &x.initial_word(graph, m))
        .checked_sub(&label_sum(labeling, &y.initial_word(graph, n)))?)
}

/// Evaluate the 2-cocycle on a composable pair.
pub fn eval_sigma(
    spec: &CocycleSpec,
    system: &ProductSystem,
    alpha: &GroupoidElem,
    beta: &GroupoidElem,
) -> Result<ExactAngle, GroupoidError> {
    if alpha.source_pt != beta.range_pt {
        return Err(GroupoidError::NotComposable);
    }
    match spec {
        CocycleSpec::Degree(rho) => Ok(rho.eval(alpha.degree(), beta.degree())?),
        CocycleSpec::LabelCrossed => {
            let (graph, labeling) = crossed_shape(system)?;
            let m = alpha.degree()[1];
            Ok(h_tilde_elem(graph, labeling, beta, 0)?.scale(m))
        }
    }
}

/// Finitely supported function on the groupoid with complex coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TwistedFn {
    support: HashMap<GroupoidElem, Complex64>,
}

impl TwistedFn {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(elem: GroupoidElem, coeff: Complex64) -> Self {
        let mut f = Self::default();
        f.add(elem, coeff);
        f
    }

    pub fn add(&mut self, elem: GroupoidElem, coeff: Complex64) {
        use std::collections::hash_map::Entry;
        match self.support.entry(elem) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == Complex64::ZERO {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if coeff != Complex64::ZERO {
                    v.insert(coeff);
                }
            }
        }
    }

    pub fn get(&self, elem: &GroupoidElem) -> Complex64 {
        self.support.get(elem).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupoidElem, &Complex64)> {
        self.support.iter()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.support
            .values()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient difference, as a cheap distance for tests.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (k, v) in &self.support {
            d = d.max((v - other.get(k)).norm());
        }
        for (k, v) in &other.support {
            d = d.max((v - self.get(k)).norm());
        }
        d
    }
}

/// Twisted convolution `(f ∗ g)(γ) = Σ σ(ζ, ζ⁻¹γ) f(ζ) g(ζ⁻¹γ)` over the
/// finite supports.
pub fn convolve(
    f: &TwistedFn,
    g: &TwistedFn,
    spec: &CocycleSpec,
    system: &ProductSystem,
) -> Result<TwistedFn, GroupoidError> {
    let mut out = TwistedFn::zero();
    for (alpha, a) in f.iter() {
        for (beta, b) in g.iter() {
            if alpha.source_pt != beta.range_pt {
                continue;
            }
            let gamma = alpha.compose(beta, system)?;
            let w = unit_phase(&eval_sigma(spec, system, alpha, beta)?);
            out.add(gamma, w * a * b);
        }
    }
    Ok(out)
}

/// The involution `f*(γ) = conj(σ(γ, γ⁻¹)) · conj(f(γ⁻¹))`.
pub fn involution(
    f: &TwistedFn,
    spec: &CocycleSpec,
    system: &ProductSystem,
) -> Result<TwistedFn, GroupoidError> {
    let mut out = TwistedFn::zero();
    for (alpha, v) in f.iter() {
        let gamma = alpha.inverse();
        let phase = unit_phase(&eval_sigma(spec, system, &gamma, alpha)?);
        out.add(gamma, phase.conj() * v.conj());
    }
    Ok(out)
}

/// Restriction to the interior of the isotropy.
pub fn conditional_expectation(
    f: &TwistedFn,
    system: &ProductSystem,
) -> Result<TwistedFn, GroupoidError> {
    let p_t = compute_p_t(system)?;
    let mut out = TwistedFn::zero();
    for (elem, v) in f.iter() {
        if elem.range_pt == elem.source_pt && p_t.contains_i64(elem.degree()) {
            out.add(elem.clone(), *v);
        }
    }
    Ok(out)
}

/// The character value `τ_γ^σ(p)` for `p` in the periodicity group:
/// `σ(γ, (y,p,y)) + σ(γ(y,p,y), γ⁻¹) − σ(γ, γ⁻¹)` in turns.
pub fn tau(
    spec: &CocycleSpec,
    system: &ProductSystem,
    gamma: &GroupoidElem,
    p: &[i64],
) -> Result<ExactAngle, GroupoidError> {
    tau_with(spec, system, &compute_p_t(system)?, gamma, p)
}

/// `tau` against a precomputed periodicity lattice.
pub fn tau_with(
    spec: &CocycleSpec,
    system: &ProductSystem,
    p_t: &Sublattice,
    gamma: &GroupoidElem,
    p: &[i64],
) -> Result<ExactAngle, GroupoidError> {
    if !p_t.contains_i64(p) {
        return Err(GroupoidError::OutsidePeriodicityGroup(p.to_vec()));
    }
    let y = gamma.source_pt.clone();
    let loop_p = GroupoidElem::new(system, y.clone(), p.to_vec(), y)?;
    let inv = gamma.inverse();
    let first = eval_sigma(spec, system, gamma, &loop_p)?;
    let shifted = gamma.compose(&loop_p, system)?;
    let second = eval_sigma(spec, system, &shifted, &inv)?;
    let third = eval_sigma(spec, system, gamma, &inv)?;
    Ok(first.checked_add(&second)?.checked_sub(&third)?)
}

/// One step of the spectral action: move the base point along `γ` and
/// translate the character by `τ_γ` on the given centre generators.
pub fn theta_apply(
    spec: &CocycleSpec,
    system: &ProductSystem,
    gamma: &GroupoidElem,
    basepoint: &[EpPoint],
    chi: &AngleVector,
    centre_basis: &[Vec<i64>],
) -> Result<(Vec<EpPoint>, AngleVector), GroupoidError> {
    if gamma.source() != basepoint {
        return Err(GroupoidError::BasePointMismatch);
    }
    if chi.dim() != centre_basis.len() {
        return Err(GroupoidError::CharacterDimension {
            got: chi.dim(),
            expected: centre_basis.len(),
        });
    }
    let p_t = compute_p_t(system)?;
    let shift = AngleVector(
        centre_basis
            .iter()
            .map(|z| tau_with(spec, system, &p_t, gamma, z))
            .collect::<Result<_, _>>()?,
    );
    Ok((gamma.range().to_vec(), chi.checked_add(&shift)?))
}

/// Embed `(g, n) ∈ G_T × Z` into the groupoid of the product with the unit
/// loop: `((x, m, y), n) ↦ ((x,·), (m, n), (y,·))`.
pub fn product_with_z(
    rank1_system: &ProductSystem,
    crossed_system: &ProductSystem,
    elem: &GroupoidElem,
    n: i64,
) -> Result<GroupoidElem, GroupoidError> {
    if rank1_system.rank() != 1 {
        return Err(GroupoidError::RankMismatch {
            got: rank1_system.rank(),
            expected: 1,
        });
    }
    let loop_graph = crossed_system.component(1);
    let loop_pt = EpPoint::from_cycle(loop_graph, vec![0])?;
    GroupoidElem::new(
        crossed_system,
        vec![elem.range_pt[0].clone(), loop_pt.clone()],
        vec![elem.disp[0], n],
        vec![elem.source_pt[0].clone(), loop_pt],
    )
}

/// All elements of the truncation: points with bounded prefix/cycle data and
/// displacements bounded by `degree_bound`.
pub fn enumerate_elements(
    system: &ProductSystem,
    prefix_bound: usize,
    cycle_bound: usize,
    degree_bound: i64,
) -> Vec<GroupoidElem> {
    let per_component: Vec<Vec<EpPoint>> = system
        .components()
        .iter()
        .map(|(g, _)| crate::graph::enumerate_points(g, prefix_bound, cycle_bound))
        .collect();
    // Per component, all (x, p, y) with a certificate.
    let mut component_triples: Vec<Vec<(EpPoint, i64, EpPoint)>> = Vec::new();
    for points in &per_component {
        let mut triples = Vec::new();
        for x in points {
            for y in points {
                for p in -degree_bound..=degree_bound {
                    if minimal_certificate(x, y, p).is_some() {
                        triples.push((x.clone(), p, y.clone()));
                    }
                }
            }
        }
        component_triples.push(triples);
    }
    let mut out = Vec::new();
    let mut index = vec![0usize; component_triples.len()];
    'outer: loop {
        let mut x = Vec::new();
        let mut p = Vec::new();
        let mut y = Vec::new();
        for (i, triples) in component_triples.iter().enumerate() {
            let (xi, pi, yi) = &triples[index[i]];
            x.push(xi.clone());
            p.push(*pi);
            y.push(yi.clone());
        }
        out.push(GroupoidElem::new(system, x, p, y).expect("triple has a certificate"));
        let mut i = 0;
        loop {
            if i == index.len() {
                break 'outer;
            }
            index[i] += 1;
            if index[i] < component_triples[i].len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::IrrationalBasis;
    use crate::graph::EdgeLabeling;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_cycle() -> Graph {
        Graph::new(
            vec!["v0".into(), "v1".into(), "v2".into()],
            vec![
                ("e0".into(), "v1".into(), "v0".into()),
                ("e1".into(), "v2".into(), "v1".into()),
                ("e2".into(), "v0".into(), "v2".into()),
            ],
        )
        .unwrap()
    }

    fn quarter_labeled_crossed() -> ProductSystem {
        let g = three_cycle();
        let labeling = EdgeLabeling::new(
            &g,
            vec![
                ExactAngle::rational(1, 4).unwrap(),
                ExactAngle::zero(),
                ExactAngle::zero(),
            ],
        )
        .unwrap();
        ProductSystem::crossed_product(g, labeling)
    }

    fn small_truncation(system: &ProductSystem) -> Vec<GroupoidElem> {
        enumerate_elements(system, 2, 3, 3)
    }

    #[test]
    fn compose_inverse_degree_basics() {
        let system = ProductSystem::single(three_cycle());
        let g = system.component(0);
        let x = EpPoint::from_cycle(g, vec![0, 1, 2]).unwrap();
        let tx = x.shift(1);
        let t2x = x.shift(2);
        let a = GroupoidElem::new(&system, vec![x.clone()], vec![1], vec![tx.clone()]).unwrap();
        let b = GroupoidElem::new(&system, vec![tx.clone()], vec![1], vec![t2x.clone()]).unwrap();
        let ab = a.compose(&b, &system).unwrap();
        assert_eq!(ab.degree(), &[2]);
        assert_eq!(ab.range(), &[x.clone()][..]);
        assert_eq!(ab.source(), &[t2x][..]);

        let unit = GroupoidElem::unit(&system, vec![tx.clone()]).unwrap();
        assert_eq!(a.compose(&unit, &system).unwrap(), a);
        let back = a.compose(&a.inverse(), &system).unwrap();
        assert_eq!(back, GroupoidElem::unit(&system, vec![x.clone()]).unwrap());
        assert_eq!(a.inverse().inverse(), a);
        assert_eq!(a.inverse().degree(), &[-1]);

        let loop3 = GroupoidElem::new(&system, vec![x.clone()], vec![3], vec![x.clone()]).unwrap();
        assert_eq!(loop3.degree(), &[3]);
        assert_eq!(loop3.certificate(), (&[3usize][..], &[0usize][..]));
        assert!(GroupoidElem::new(&system, vec![x.clone()], vec![1], vec![x]).is_err());
    }

    #[test]
    fn groupoid_axioms_on_truncation() {
        let system = quarter_labeled_crossed();
        let elems = small_truncation(&system);
        assert!(!elems.is_empty());
        for e in &elems {
            assert!(e.certificate_valid());
            let unit_r = GroupoidElem::unit(&system, e.range().to_vec()).unwrap();
            let unit_s = GroupoidElem::unit(&system, e.source().to_vec()).unwrap();
            assert_eq!(unit_r.compose(e, &system).unwrap(), *e);
            assert_eq!(e.compose(&unit_s, &system).unwrap(), *e);
            assert_eq!(e.compose(&e.inverse(), &system).unwrap(), unit_r);
        }
        // Associativity on composable triples from a sample.
        let sample: Vec<_> = elems.iter().take(40).collect();
        for a in &sample {
            for b in &sample {
                if a.source() != b.range() {
                    continue;
                }
                for c in &sample {
                    if b.source() != c.range() {
                        continue;
                    }
                    let left = a
                        .compose(b, &system)
                        .unwrap()
                        .compose(c, &system)
                        .unwrap();
                    let right = a
                        .compose(&b.compose(c, &system).unwrap(), &system)
                        .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn isotropy_interior_membership() {
        let system = ProductSystem::single(three_cycle());
        let g = system.component(0);
        let x = EpPoint::from_cycle(g, vec![0, 1, 2]).unwrap();
        let unit = GroupoidElem::unit(&system, vec![x.clone()]).unwrap();
        assert!(in_isotropy_interior(&system, &unit).unwrap());
        let loop3 = GroupoidElem::new(&system, vec![x.clone()], vec![3], vec![x.clone()]).unwrap();
        assert!(in_isotropy_interior(&system, &loop3).unwrap());

        let fig8 = Graph::new(
            vec!["v".into()],
            vec![
                ("a".into(), "v".into(), "v".into()),
                ("b".into(), "v".into(), "v".into()),
            ],
        )
        .unwrap();
        let system = ProductSystem::single(fig8);
        let g = system.component(0);
        let a_inf = EpPoint::from_cycle(g, vec![0]).unwrap();
        let loop1 = GroupoidElem::new(&system, vec![a_inf.clone()], vec![1], vec![a_inf]).unwrap();
        assert!(!in_isotropy_interior(&system, &loop1).unwrap());
    }

    #[test]
    fn sigma_evaluation_examples() {
        let system = quarter_labeled_crossed();
        let spec = CocycleSpec::LabelCrossed;
        spec.validate(&system).unwrap();
        let elems = small_truncation(&system);
        // Units are normalised.
        for e in elems.iter().take(20) {
            let unit_r = GroupoidElem::unit(&system, e.range().to_vec()).unwrap();
            let unit_s = GroupoidElem::unit(&system, e.source().to_vec()).unwrap();
            assert!(eval_sigma(&spec, &system, &unit_r, e).unwrap().is_zero());
            assert!(eval_sigma(&spec, &system, e, &unit_s).unwrap().is_zero());
        }
        // A pair with Z-degree 2 against a full graph cycle of label 1/4
        // gives 2 * 3 * (1/12)… directly: h̃(loop of length 3) = 1/4.
        let g = system.component(0);
        let x = EpPoint::from_cycle(g, vec![0, 1, 2]).unwrap();
        let loop_pt = EpPoint::from_cycle(system.component(1), vec![0]).unwrap();
        let alpha = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![0, 2],
            vec![x.clone(), loop_pt.clone()],
        )
        .unwrap();
        let beta = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![3, 0],
            vec![x, loop_pt],
        )
        .unwrap();
        let value = eval_sigma(&spec, &system, &alpha, &beta).unwrap();
        assert_eq!(value, ExactAngle::rational(1, 2).unwrap());

        // Degree pullback with pairing [[0, 1/3], [0, 0]].
        let third = ExactAngle::rational(1, 3).unwrap();
        let rho = Cocycle2::from_bicharacter(crate::cohomology::Bicharacter::new(vec![
            vec![ExactAngle::zero(), third.clone()],
            vec![ExactAngle::zero(), ExactAngle::zero()],
        ]));
        let spec = CocycleSpec::Degree(rho);
        let g = system.component(0);
        let x = EpPoint::from_cycle(g, vec![0, 1, 2]).unwrap();
        let loop_pt = EpPoint::from_cycle(system.component(1), vec![0]).unwrap();
        let a = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![1, 0],
            vec![x.shift(1), loop_pt.clone()],
        )
        .unwrap();
        let b = GroupoidElem::new(
            &system,
            vec![x.shift(1), loop_pt.clone()],
            vec![0, 1],
            vec![x.shift(1), loop_pt],
        )
        .unwrap();
        assert_eq!(eval_sigma(&spec, &system, &a, &b).unwrap(), third);
    }

    #[test]
    fn cocycle_identity_on_truncation() {
        let system = quarter_labeled_crossed();
        let elems = small_truncation(&system);
        let sample: Vec<_> = elems.iter().take(30).collect();
        for spec in [
            CocycleSpec::LabelCrossed,
            CocycleSpec::trivial(2),
        ] {
            for a in &sample {
                for b in &sample {
                    if a.source() != b.range() {
                        continue;
                    }
                    let ab = a.compose(b, &system).unwrap();
                    for c in &sample {
                        if b.source() != c.range() {
                            continue;
                        }
                        let bc = b.compose(c, &system).unwrap();
                        let lhs = eval_sigma(&spec, &system, a, b)
                            .unwrap()
                            .checked_add(&eval_sigma(&spec, &system, &ab, c).unwrap())
                            .unwrap();
                        let rhs = eval_sigma(&spec, &system, a, &bc)
                            .unwrap()
                            .checked_add(&eval_sigma(&spec, &system, b, c).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs, "2-cocycle identity");
                    }
                }
            }
        }
    }

    #[test]
    fn convolution_delta_rules() {
        let system = quarter_labeled_crossed();
        let spec = CocycleSpec::LabelCrossed;
        let g = system.component(0);
        let x = EpPoint::from_cycle(g, vec![0, 1, 2]).unwrap();
        let loop_pt = EpPoint::from_cycle(system.component(1), vec![0]).unwrap();
        let alpha = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![1, 1],
            vec![x.shift(1), loop_pt.clone()],
        )
        .unwrap();
        let beta = GroupoidElem::new(
            &system,
            vec![x.shift(1), loop_pt.clone()],
            vec![1, 0],
            vec![x.shift(2), loop_pt.clone()],
        )
        .unwrap();
        let one = Complex64::new(1.0, 0.0);
        let f = TwistedFn::delta(alpha.clone(), one);
        let gfn = TwistedFn::delta(beta.clone(), one);
        let conv = convolve(&f, &gfn, &spec, &system).unwrap();
        assert_eq!(conv.support_len(), 1);
        let gamma = alpha.compose(&beta, &system).unwrap();
        let expected = unit_phase(&eval_sigma(&spec, &system, &alpha, &beta).unwrap());
        assert!((conv.get(&gamma) - expected).norm() < 1e-12);

        // Non-composable deltas convolve to zero.
        let misaligned = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![0, 0],
            vec![x.clone(), loop_pt.clone()],
        )
        .unwrap();
        let h = TwistedFn::delta(misaligned, one);
        let conv = convolve(&f, &h, &spec, &system).unwrap();
        assert_eq!(conv.support_len(), 0);

        // The unit-space indicator over the source acts as a right identity.
        let mut unit_ind = TwistedFn::zero();
        for pt in crate::graph::enumerate_points(g, 1, 3) {
            let u = GroupoidElem::unit(&system, vec![pt, loop_pt.clone()]).unwrap();
            unit_ind.add(u, one);
        }
        let conv = convolve(&f, &unit_ind, &spec, &system).unwrap();
        assert!(conv.distance(&f) < 1e-12);
    }

    #[test]
    fn involution_properties() {
        let system = quarter_labeled_crossed();
        let spec = CocycleSpec::LabelCrossed;
        let elems = small_truncation(&system);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let random_fn = |rng: &mut ChaCha8Rng| {
            let mut f = TwistedFn::zero();
            for _ in 0..6 {
                let e = elems[rng.gen_range(0..elems.len())].clone();
                f.add(
                    e,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
            f
        };
        for _ in 0..10 {
            let f = random_fn(&mut rng);
            let g = random_fn(&mut rng);
            let double = involution(&involution(&f, &spec, &system).unwrap(), &spec, &system)
                .unwrap();
            assert!(double.distance(&f) < 1e-9, "involution is an involution");
            let lhs = involution(&convolve(&f, &g, &spec, &system).unwrap(), &spec, &system)
                .unwrap();
            let rhs = convolve(
                &involution(&g, &spec, &system).unwrap(),
                &involution(&f, &spec, &system).unwrap(),
                &spec,
                &system,
            )
            .unwrap();
            assert!(lhs.distance(&rhs) < 1e-9, "anti-homomorphism");
        }
        // Real unit-space functions are fixed.
        let g = system.component(0);
        let loop_pt = EpPoint::from_cycle(system.component(1), vec![0]).unwrap();
        let mut f = TwistedFn::zero();
        for pt in crate::graph::enumerate_points(g, 1, 3).into_iter().take(3) {
            let u = GroupoidElem::unit(&system, vec![pt, loop_pt.clone()]).unwrap();
            f.add(u, Complex64::new(0.5, 0.0));
        }
        let starred = involution(&f, &spec, &system).unwrap();
        assert!(starred.distance(&f) < 1e-12);
    }

    #[test]
    fn conditional_expectation_restricts_to_isotropy() {
        let system = quarter_labeled_crossed();
        let g = system.component(0);
        let x = EpPoint::from_cycle(g, vec![0, 1, 2]).unwrap();
        let loop_pt = EpPoint::from_cycle(system.component(1), vec![0]).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let iso = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![3, 1],
            vec![x.clone(), loop_pt.clone()],
        )
        .unwrap();
        let moving = GroupoidElem::new(
            &system,
            vec![x.clone(), loop_pt.clone()],
            vec![1, 0],
            vec![x.shift(1), loop_pt.clone()],
        )
        .unwrap();
        let mut f = TwistedFn::zero();
        f.add(iso.clone(), one);
        f.add(moving.clone(), 2.0 * one);
        let phi = conditional_expectation(&f, &system).unwrap();
        assert_eq!(phi.support_len(), 1);
        assert!((phi.get(&iso) - one).norm() < 1e-12);
        // Idempotent and sup-norm contractive; identity on isotropy support.
        let phi2 = conditional_expectation(&phi, &system).unwrap();
        assert!(phi2.distance(&phi) < 1e-12);
        assert!(phi.sup_norm() <= f.sup_norm());
    }

    #[test]
    fn tau_examples_and_identities() {
        let system = quarter_labeled_crossed();
        let spec = CocycleSpec::LabelCrossed;
        let trivial = CocycleSpec::trivial(2);
        let p_t = compute_p_t(&system).unwrap();
        let elems = small_truncation(&system);

        for gamma in elems.iter().take(25) {
            // Trivial cocycle gives zero.
            assert!(tau_with(&trivial, &system, &p_t, gamma, &[3, 1])
                .unwrap()
                .is_zero());
            // Units give zero.
            let unit = GroupoidElem::unit(&system, gamma.range().to_vec()).unwrap();
            assert!(tau_with(&spec, &system, &p_t, &unit, &[3, 1])
                .unwrap()
                .is_zero());
        }

        // The crossed-product cocycle satisfies
        // tau_{(x,(m,n),y)}(p1, p2) = n*h̃(y, p1, y) + p2*h̃(y, -m, x).
        let g = system.component(0);
        let labeling = system.labeling(0).unwrap();
        for gamma in elems.iter().take(40) {
            for p in [[3i64, 0], [0, 1], [3, 1], [-3, 2]] {
                let direct = tau_with(&spec, &system, &p_t, gamma, &p).unwrap();
                let y = &gamma.source()[0];
                let loop_y = GroupoidElem::new(
                    &system,
                    vec![y.clone(), gamma.source()[1].clone()],
                    vec![p[0], 0],
                    vec![y.clone(), gamma.source()[1].clone()],
                )
                .unwrap();
                let hy = h_tilde_elem(g, labeling, &loop_y, 0).unwrap();
                let hinv = h_tilde_elem(g, labeling, &gamma.inverse(), 0).unwrap();
                let expect = hy
                    .scale(gamma.degree()[1])
                    .checked_add(&hinv.scale(p[1]))
                    .unwrap();
                assert_eq!(direct, expect, "closed form of tau");
            }
        }

        // Out-of-lattice displacement is rejected.
        let gamma = &elems[0];
        assert!(matches!(
            tau_with(&spec, &system, &p_t, gamma, &[1, 0]),
            Err(GroupoidError::OutsidePeriodicityGroup(_))
        ));
    }

    #[test]
    fn product_with_z_embedding() {
        let g = three_cycle();
        let labeling = EdgeLabeling::trivial(&g);
        let rank1 = ProductSystem::single(g.clone());
        let crossed = ProductSystem::crossed_product(g, labeling);
        let base = rank1.component(0);
        let x = EpPoint::from_cycle(base, vec![0, 1, 2]).unwrap();
        let unit = GroupoidElem::unit(&rank1, vec![x.clone()]).unwrap();
        let embedded = product_with_z(&rank1, &crossed, &unit, 0).unwrap();
        assert!(embedded.is_unit());
        let a = GroupoidElem::new(&rank1, vec![x.clone()], vec![1], vec![x.shift(1)]).unwrap();
        let ea = product_with_z(&rank1, &crossed, &a, 2).unwrap();
        assert_eq!(ea.degree(), &[1, 2]);
        // Composition is respected.
        let b = GroupoidElem::new(&rank1, vec![x.shift(1)], vec![2], vec![x.clone()]).unwrap();
        let eb = product_with_z(&rank1, &crossed, &b, -1).unwrap();
        let ab = a.compose(&b, &rank1).unwrap();
        let eab = product_with_z(&rank1, &crossed, &ab, 1).unwrap();
        assert_eq!(ea.compose(&eb, &crossed).unwrap(), eab);
    }
}
