//! Weights, weighted integer tuples, the star action, and valuation helpers.
//!
//! A [`WeightedTuple`] is an integer coordinate vector bound to a list of
//! positive integer [`Weights`]. Scalars act on tuples coordinate-wise via
//! `lambda ⋆ x = (lambda^{q_0} x_0, ..., lambda^{q_n} x_n)`; this module
//! provides that action for rational scalars ([`star`]) and for signed
//! radical scalars ([`star_radical`]).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An ordered tuple of positive integer weights with its cached gcd.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weights {
    q: Vec<u32>,
    r: u32,
}

impl Weights {
    pub fn new(q: Vec<u32>) -> Result<Self> {
        if q.is_empty() || q.contains(&0) {
            return Err(Error::InvalidWeights);
        }
        let r = q.iter().fold(0u32, |acc, &w| acc.gcd(&w));
        Ok(Weights { q, r })
    }

    /// gcd of all the weights (the `r` of the normalization theory).
    pub fn gcd(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.q
    }

    /// True iff every leave-one-out gcd of the weights equals 1.
    pub fn is_well_formed(&self) -> bool {
        (0..self.q.len()).all(|skip| {
            self.q
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u32, |acc, (_, &w)| acc.gcd(&w))
                == 1
        })
    }
}

impl std::fmt::Display for Weights {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.q.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An integer coordinate vector bound to a weight tuple; the raw
/// representative of a point. The all-zero tuple is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedTuple {
    weights: Weights,
    coords: Vec<BigInt>,
}

impl WeightedTuple {
    pub fn new(weights: Weights, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::ArityMismatch {
                want: weights.len(),
                got: coords.len(),
            });
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroTuple);
        }
        Ok(WeightedTuple { weights, coords })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Indices of nonzero coordinates together with the gcd of their weights.
    pub fn support(&self) -> Support {
        let indices: Vec<usize> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect();
        let gcd = indices
            .iter()
            .fold(0u32, |acc, &i| acc.gcd(&self.weights.as_slice()[i]));
        Support { indices, gcd }
    }
}

impl std::fmt::Display for WeightedTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// The support of a tuple: nonzero coordinate positions and the gcd `r_S`
/// of their weights. `r_S` governs sign twists and the granularity of
/// fractional exponents in absolute normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    pub indices: Vec<usize>,
    pub gcd: u32,
}

/// A tuple scaled into the rationals; produced by the star action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTuple {
    weights: Weights,
    coords: Vec<BigRational>,
}

impl RationalTuple {
    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Converts back to an integral tuple, or `None` if any coordinate has
    /// a nontrivial denominator.
    pub fn into_integral(self) -> Option<WeightedTuple> {
        if !self.is_integral() {
            return None;
        }
        let coords = self.coords.into_iter().map(|c| c.to_integer()).collect();
        Some(WeightedTuple {
            weights: self.weights,
            coords,
        })
    }
}

/// The star action by a nonzero rational scalar: coordinate `i` becomes
/// `lambda^{q_i} x_i`, computed exactly.
pub fn star(lambda: &BigRational, t: &WeightedTuple) -> Result<RationalTuple> {
    if lambda.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let coords = t
        .coords()
        .iter()
        .zip(t.weights().as_slice())
        .map(|(x, &q)| {
            if x.is_zero() {
                BigRational::zero()
            } else {
                pow_rational(lambda, q) * BigRational::from(x.clone())
            }
        })
        .collect();
    Ok(RationalTuple {
        weights: t.weights().clone(),
        coords,
    })
}

fn pow_rational(lambda: &BigRational, q: u32) -> BigRational {
    let numer = lambda.numer().pow(q);
    let denom = lambda.denom().pow(q);
    BigRational::new(numer, denom)
}

/// A signed radical scalar `(-1)^{k·q_i/r_S} · ∏_p p^{e_p}` with rational
/// exponents `e_p`. Exponents may be negative (division).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadicalScalar {
    /// Sign class `k ∈ {0,1}`; the induced sign on coordinate `i` is
    /// `(-1)^{k·q_i/r_S}` over the support of the tuple acted on.
    pub sign_class: u8,
    /// prime → nonzero rational exponent
    pub exponents: BTreeMap<BigUint, Ratio<i64>>,
}

impl RadicalScalar {
    pub fn identity() -> Self {
        RadicalScalar::default()
    }
}

/// The star action by a radical scalar. Each nonzero coordinate is
/// multiplied by `sign^{q_i/r_S} · ∏_p p^{q_i·e_p}`; every `q_i·e_p` must be
/// an integer on the support or the result would leave the rationals.
pub fn star_radical(s: &RadicalScalar, t: &WeightedTuple) -> Result<RationalTuple> {
    let sup = t.support();
    let mut coords = Vec::with_capacity(t.coords().len());
    for (i, x) in t.coords().iter().enumerate() {
        if x.is_zero() {
            coords.push(BigRational::zero());
            continue;
        }
        let q = t.weights().as_slice()[i];
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, e) in &s.exponents {
            let scaled = *e * Ratio::from_integer(q as i64);
            if !scaled.is_integer() {
                return Err(Error::NonRationalResult);
            }
            let exp = scaled.to_integer();
            if exp >= 0 {
                num *= p.pow(exp as u32);
            } else {
                den *= p.pow((-exp) as u32);
            }
        }
        let mut value = BigRational::new(BigInt::from(num), BigInt::from(den)) * BigRational::from(x.clone());
        if s.sign_class % 2 == 1 && (q / sup.gcd) % 2 == 1 {
            value = -value;
        }
        coords.push(value);
    }
    Ok(RationalTuple {
        weights: t.weights().clone(),
        coords,
    })
}

/// Largest `e` with `p^e` dividing `x`. Undefined for `x = 0`.
pub fn valuation(x: &BigInt, p: &BigUint) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p = BigInt::from(p.clone());
    let mut n = x.abs();
    let mut e = 0u64;
    loop {
        let (quot, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return Ok(e);
        }
        n = quot;
        e += 1;
    }
}
