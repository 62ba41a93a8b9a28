//! Weighted GCDs, normalization over Q and over the algebraic closure,
//! sign twists, canonical forms, and the orbit/twist equivalence tests.
//!
//! The weighted gcd of a tuple is the largest integer `d` with `d^{q_i}`
//! dividing every coordinate; the absolute weighted gcd allows radical
//! scalars `∏ p^{α_p}` whose exponents are multiples of `1/r_S`, where
//! `r_S` is the gcd of the weights on the support. Normalization divides
//! the respective gcd out through the star action. Normalized forms are
//! unique up to a sign class; [`canonical`] fixes a deterministic
//! representative.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::tuple::{star_radical, valuation, RadicalScalar, WeightedTuple};

/// A positive real number stored exactly as a finite map
/// prime → positive rational exponent; the empty map is 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactoredRadical {
    factors: BTreeMap<BigUint, Ratio<i64>>,
}

impl FactoredRadical {
    pub fn one() -> Self {
        FactoredRadical::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, Ratio<i64>> {
        &self.factors
    }

    /// The scalar that multiplies by this radical.
    pub fn scalar(&self) -> RadicalScalar {
        RadicalScalar {
            sign_class: 0,
            exponents: self.factors.clone(),
        }
    }

    /// The scalar that divides by this radical.
    pub fn inverse_scalar(&self) -> RadicalScalar {
        RadicalScalar {
            sign_class: 0,
            exponents: self.factors.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        }
    }

    pub fn approx(&self) -> f64 {
        self.factors
            .iter()
            .map(|(p, e)| {
                let p = p.to_f64().unwrap_or(f64::MAX);
                let e = *e.numer() as f64 / *e.denom() as f64;
                p.powf(e)
            })
            .product()
    }
}

impl std::fmt::Display for FactoredRadical {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("{}^({})", p, e))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// The residual sign ambiguity of normalization: `k = 0` is the identity,
/// `k = 1` multiplies coordinate `i` by `(-1)^{q_i/r_S}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignClass {
    pub k: u8,
}

impl SignClass {
    pub fn identity() -> Self {
        SignClass { k: 0 }
    }

    pub fn flip() -> Self {
        SignClass { k: 1 }
    }
}

/// The scalar removed from a tuple by normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Removed {
    Rational(BigUint),
    Radical(FactoredRadical),
}

/// A normalized representative together with the scalar that was divided
/// out and whether the canonical sign convention has been applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPoint {
    pub tuple: WeightedTuple,
    pub removed: Removed,
    pub canonical_sign_applied: bool,
}

/// Largest positive integer `d` with `d^{q_i}` dividing `x_i` for every
/// nonzero coordinate.
pub fn wgcd(t: &WeightedTuple) -> BigUint {
    let g = support_gcd_of_coords(t);
    if g.is_one() {
        return BigUint::one();
    }
    let mut d = BigUint::one();
    for (p, _) in factorize(&g) {
        let e = min_valuation_ratio(t, &p)
            .map(|m| m.floor().to_integer())
            .unwrap_or(0);
        if e > 0 {
            d *= p.pow(e as u32);
        }
    }
    d
}

/// Largest radical `∏ p^{α_p}` (exponents multiples of `1/r_S`) whose
/// weighted powers divide the coordinates.
pub fn abs_wgcd(t: &WeightedTuple) -> FactoredRadical {
    let g = support_gcd_of_coords(t);
    if g.is_one() {
        return FactoredRadical::one();
    }
    let rs = t.support().gcd as i64;
    let mut factors = BTreeMap::new();
    for (p, _) in factorize(&g) {
        if let Some(m) = min_valuation_ratio(t, &p) {
            let steps = (m * Ratio::from_integer(rs)).floor().to_integer();
            if steps > 0 {
                factors.insert(p, Ratio::new(steps, rs));
            }
        }
    }
    FactoredRadical { factors }
}

fn support_gcd_of_coords(t: &WeightedTuple) -> BigUint {
    use num_integer::Integer;
    t.coords()
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigUint::zero(), |acc, c| acc.gcd(c.magnitude()))
}

/// min over nonzero coordinates of `v_p(x_i) / q_i`.
fn min_valuation_ratio(t: &WeightedTuple, p: &BigUint) -> Option<Ratio<i64>> {
    t.coords()
        .iter()
        .zip(t.weights().as_slice())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, &q)| Ratio::new(valuation(c, p).unwrap() as i64, q as i64))
        .min()
}

/// Divides out the weighted gcd; the result is integral with `wgcd = 1`.
pub fn normalize(t: &WeightedTuple) -> NormalizedPoint {
    let d = wgcd(t);
    let tuple = if d.is_one() {
        t.clone()
    } else {
        let scalar = RadicalScalar {
            sign_class: 0,
            exponents: factorize(&d)
                .into_iter()
                .map(|(p, e)| (p, Ratio::from_integer(-(e as i64))))
                .collect(),
        };
        star_radical(&scalar, t)
            .expect("integer exponents")
            .into_integral()
            .expect("wgcd divides every weighted power")
    };
    NormalizedPoint {
        tuple,
        removed: Removed::Rational(d),
        canonical_sign_applied: false,
    }
}

/// Divides out the absolute weighted gcd; the result is integral with
/// `abs_wgcd = 1`.
pub fn normalize_abs(t: &WeightedTuple) -> NormalizedPoint {
    let r = abs_wgcd(t);
    let tuple = if r.is_one() {
        t.clone()
    } else {
        star_radical(&r.inverse_scalar(), t)
            .expect("exponents are multiples of 1/r_S")
            .into_integral()
            .expect("abs_wgcd divides every weighted power")
    };
    NormalizedPoint {
        tuple,
        removed: Removed::Radical(r),
        canonical_sign_applied: false,
    }
}

/// Multiplies coordinate `i` by `(-1)^{k·q_i/r_S}`; weighted gcds are
/// unchanged.
pub fn sign_twist(t: &WeightedTuple, c: SignClass) -> WeightedTuple {
    if c.k.is_multiple_of(2) {
        return t.clone();
    }
    let scalar = RadicalScalar {
        sign_class: 1,
        exponents: BTreeMap::new(),
    };
    star_radical(&scalar, t)
        .expect("sign-only scalar")
        .into_integral()
        .expect("sign-only scalar keeps integrality")
}

/// Which notion of equivalence a canonical form represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Rational,
    Absolute,
}

/// Normalizes (per `mode`) and applies the sign class making the first
/// nonzero coordinate with odd `q_i/r_S` positive. Canonical forms are
/// equal exactly when the inputs lie in the same orbit.
pub fn canonical(t: &WeightedTuple, mode: Mode) -> NormalizedPoint {
    let mut n = match mode {
        Mode::Rational => normalize(t),
        Mode::Absolute => normalize_abs(t),
    };
    let sup = n.tuple.support();
    // the q_i/r_S over the support are coprime, so an odd one exists
    let pivot = sup
        .indices
        .iter()
        .find(|&&i| (n.tuple.weights().as_slice()[i] / sup.gcd) % 2 == 1);
    if let Some(&i) = pivot {
        if n.tuple.coords()[i].is_negative() {
            n.tuple = sign_twist(&n.tuple, SignClass::flip());
        }
    }
    n.canonical_sign_applied = true;
    n
}

/// True iff `a` and `b` represent the same rational point (same orbit up
/// to the root-of-unity sign class).
pub fn same_point(a: &WeightedTuple, b: &WeightedTuple) -> Result<bool> {
    if a.weights() != b.weights() {
        return Err(Error::WeightsMismatch);
    }
    Ok(canonical(a, Mode::Rational).tuple == canonical(b, Mode::Rational).tuple)
}

/// True iff `a` and `b` are equivalent over the algebraic closure but lie
/// in different rational orbits.
pub fn is_twist(a: &WeightedTuple, b: &WeightedTuple) -> Result<bool> {
    if a.weights() != b.weights() {
        return Err(Error::WeightsMismatch);
    }
    let abs_equal = canonical(a, Mode::Absolute).tuple == canonical(b, Mode::Absolute).tuple;
    Ok(abs_equal && !same_point(a, b)?)
}
