//! Exact arithmetic in the circle group, written additively in turns.
//!
//! An angle `a` stands for the unit complex number `e^{2πia}`. Values are a
//! reduced rational in `[0,1)` plus a rational combination of declared formal
//! irrational generators, so equality and the zero test are decidable under
//! the declared-independence contract of [`IrrationalBasis`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("incompatible irrational bases ({left} vs {right})")]
    BasisMismatch { left: String, right: String },
    #[error("unknown irrational symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate irrational symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("cannot parse angle `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("angle vector has dimension {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
}

/// Ordered list of formal irrational generators with numeric approximations
/// in turns.
///
/// Contract (asserted, not verified): the generators together with 1 are
/// linearly independent over the rationals, and each approximation is within
/// 1e-12 of the intended real.
#[derive(Debug, Clone)]
pub struct IrrationalBasis {
    inner: Arc<BasisInner>,
}

#[derive(Debug, PartialEq)]
struct BasisInner {
    generators: Vec<(String, f64)>,
}

impl IrrationalBasis {
    pub fn new(generators: Vec<(String, f64)>) -> Result<Self, AngleError> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &generators {
            if !seen.insert(name.clone()) {
                return Err(AngleError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Self {
            inner: Arc::new(BasisInner { generators }),
        })
    }

    pub fn empty() -> Self {
        Self {
            inner: Arc::new(BasisInner { generators: vec![] }),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.inner.generators.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.inner.generators.iter().map(|(s, _)| s.as_str())
    }

    pub fn approx_of(&self, symbol: &str) -> Option<f64> {
        self.inner
            .generators
            .iter()
            .find(|(s, _)| s == symbol)
            .map(|(_, v)| *v)
    }

    fn describe(&self) -> String {
        self.symbols().collect::<Vec<_>>().join(",")
    }

    /// Resolve a common basis for a binary operation. Empty bases are
    /// compatible with everything; two nonempty bases must agree.
    fn merge(a: &Self, b: &Self) -> Result<Self, AngleError> {
        if a.is_empty() {
            return Ok(b.clone());
        }
        if b.is_empty() || a == b {
            return Ok(a.clone());
        }
        Err(AngleError::BasisMismatch {
            left: a.describe(),
            right: b.describe(),
        })
    }
}

impl PartialEq for IrrationalBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for IrrationalBasis {}

/// An element of the circle group in additive "turns" coordinates.
///
/// Structural equality: two angles are equal iff their reduced rational parts
/// and irrational coefficient maps are equal.
#[derive(Debug, Clone)]
pub struct ExactAngle {
    rational: BigRational,
    coeffs: BTreeMap<String, BigRational>,
    basis: IrrationalBasis,
}

impl PartialEq for ExactAngle {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational && self.coeffs == other.coeffs
    }
}

impl Eq for ExactAngle {}

impl std::hash::Hash for ExactAngle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rational.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for ExactAngle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactAngle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rational
            .cmp(&other.rational)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

fn reduce_mod_one(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl ExactAngle {
    pub fn zero() -> Self {
        Self {
            rational: BigRational::zero(),
            coeffs: BTreeMap::new(),
            basis: IrrationalBasis::empty(),
        }
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Self {
            rational: reduce_mod_one(&r),
            coeffs: BTreeMap::new(),
            basis: IrrationalBasis::empty(),
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::Parse {
                input: format!("{num}/{den}"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Self::from_big_rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// The angle `1·sym` for a declared generator.
    pub fn generator(basis: &IrrationalBasis, symbol: &str) -> Result<Self, AngleError> {
        Self::with_parts(
            basis,
            BigRational::zero(),
            [(symbol.to_string(), BigRational::one())].into(),
        )
    }

    pub fn with_parts(
        basis: &IrrationalBasis,
        rational: BigRational,
        coeffs: BTreeMap<String, BigRational>,
    ) -> Result<Self, AngleError> {
        let mut clean = BTreeMap::new();
        for (sym, c) in coeffs {
            if basis.approx_of(&sym).is_none() {
                return Err(AngleError::UnknownSymbol(sym));
            }
            if !c.is_zero() {
                clean.insert(sym, c);
            }
        }
        let basis = if clean.is_empty() {
            IrrationalBasis::empty()
        } else {
            basis.clone()
        };
        Ok(Self {
            rational: reduce_mod_one(&rational),
            coeffs: clean,
            basis,
        })
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coeffs(&self) -> &BTreeMap<String, BigRational> {
        &self.coeffs
    }

    pub fn basis(&self) -> &IrrationalBasis {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeffs.is_empty()
    }

    pub fn has_irrational_part(&self) -> bool {
        !self.coeffs.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AngleError> {
        let basis = IrrationalBasis::merge(&self.basis, &other.basis)?;
        let mut coeffs = self.coeffs.clone();
        for (sym, c) in &other.coeffs {
            let entry = coeffs.entry(sym.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(sym);
            }
        }
        let basis = if coeffs.is_empty() {
            IrrationalBasis::empty()
        } else {
            basis
        };
        Ok(Self {
            rational: reduce_mod_one(&(&self.rational + &other.rational)),
            coeffs,
            basis,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            rational: reduce_mod_one(&(-&self.rational)),
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), -c)).collect(),
            basis: self.basis.clone(),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AngleError> {
        self.checked_add(&other.neg())
    }

    pub fn scale_big(&self, n: &BigInt) -> Self {
        let n = BigRational::from_integer(n.clone());
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .filter_map(|(s, c)| {
                let c = c * &n;
                (!c.is_zero()).then(|| (s.clone(), c))
            })
            .collect();
        let basis = if coeffs.is_empty() {
            IrrationalBasis::empty()
        } else {
            self.basis.clone()
        };
        Self {
            rational: reduce_mod_one(&(&self.rational * &n)),
            coeffs,
            basis,
        }
    }

    pub fn scale(&self, n: i64) -> Self {
        self.scale_big(&BigInt::from(n))
    }

    /// Numeric value in `[0,1)` using the basis approximations.
    pub fn approx(&self) -> f64 {
        let mut v = self.rational.numer().to_string().parse::<f64>().unwrap()
            / self.rational.denom().to_string().parse::<f64>().unwrap();
        for (sym, c) in &self.coeffs {
            let a = self.basis.approx_of(sym).unwrap_or(0.0);
            let cf = c.numer().to_string().parse::<f64>().unwrap()
                / c.denom().to_string().parse::<f64>().unwrap();
            v += cf * a;
        }
        v.rem_euclid(1.0)
    }

    /// Parse an angle string like `"1/4"`, `"1/4 + 1/1*sqrt2"`, or
    /// `"0/1 - 2/3*beta"` against a declared basis.
    pub fn parse(input: &str, basis: &IrrationalBasis) -> Result<Self, AngleError> {
        let err = |reason: &str| AngleError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut rational = BigRational::zero();
        let mut coeffs: BTreeMap<String, BigRational> = BTreeMap::new();
        let mut rest = input.trim();
        if rest.is_empty() {
            return Err(err("empty string"));
        }
        let mut sign = BigInt::one();
        let mut first = true;
        while !rest.is_empty() {
            if !first {
                if let Some(tail) = rest.strip_prefix('+') {
                    sign = BigInt::one();
                    rest = tail.trim_start();
                } else if let Some(tail) = rest.strip_prefix('-') {
                    sign = -BigInt::one();
                    rest = tail.trim_start();
                } else {
                    return Err(err("expected `+` or `-` between terms"));
                }
            } else if let Some(tail) = rest.strip_prefix('-') {
                sign = -BigInt::one();
                rest = tail.trim_start();
            }
            first = false;
            let term_end = rest
                .find(|c| c == '+' || c == '-')
                .unwrap_or(rest.len());
            let term = rest[..term_end].trim();
            rest = rest[term_end..].trim_start();
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (frac_str, sym) = match term.split_once('*') {
                Some((f, s)) => (f.trim(), Some(s.trim())),
                None => (term, None),
            };
            let (num_str, den_str) = match frac_str.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (frac_str, "1"),
            };
            let num: BigInt = num_str.parse().map_err(|_| err("bad numerator"))?;
            let den: BigInt = den_str.parse().map_err(|_| err("bad denominator"))?;
            if den.is_zero() {
                return Err(err("zero denominator"));
            }
            let value = BigRational::new(&sign * num, den);
            match sym {
                None => rational += value,
                Some(s) => {
                    if s.is_empty() {
                        return Err(err("empty symbol"));
                    }
                    if basis.approx_of(s).is_none() {
                        return Err(AngleError::UnknownSymbol(s.to_string()));
                    }
                    let entry = coeffs.entry(s.to_string()).or_insert_with(BigRational::zero);
                    *entry += value;
                }
            }
        }
        Self::with_parts(basis, rational, coeffs)
    }
}

impl fmt::Display for ExactAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.rational.numer(), self.rational.denom())?;
        for (sym, c) in &self.coeffs {
            if c.is_negative() {
                write!(f, " - {}/{}*{}", -c.numer(), c.denom(), sym)?;
            } else {
                write!(f, " + {}/{}*{}", c.numer(), c.denom(), sym)?;
            }
        }
        Ok(())
    }
}

impl Serialize for ExactAngle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The unit complex number `e^{2πia}`; the one place where exact angles are
/// handed to floating point.
pub fn unit_phase(a: &ExactAngle) -> num_complex::Complex64 {
    num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * a.approx())
}

/// Fixed-length vector of angles; a point of a `d`-torus or the value of a
/// character on a fixed generating set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AngleVector(pub Vec<ExactAngle>);

impl AngleVector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![ExactAngle::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AngleError> {
        if self.dim() != other.dim() {
            return Err(AngleError::Dimension {
                got: other.dim(),
                expected: self.dim(),
            });
        }
        let entries = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(Self(entries))
    }
}
