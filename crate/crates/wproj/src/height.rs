//! Exact weighted heights, absolute heights, bounded-height enumeration,
//! and bounded twist enumeration.
//!
//! Heights are stored exactly as `base^{1/root}` pairs and compared by
//! integer cross-exponentiation; floating point is display-only. The
//! enumeration kernel scans the coordinate box `|x_i| <= floor(c^{q_i})`
//! and keeps canonical representatives, so every point below the bound is
//! emitted exactly once.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::normal::{canonical, normalize, normalize_abs, wgcd, Mode, NormalizedPoint, Removed};
use crate::tuple::{star_radical, RadicalScalar, WeightedTuple, Weights};

/// The exact real number `base^{1/root}`.
#[derive(Debug, Clone)]
pub struct HeightValue {
    base: BigUint,
    root: u32,
}

impl HeightValue {
    pub fn new(base: BigUint, root: u32) -> Self {
        assert!(root >= 1, "root must be positive");
        HeightValue { base, root }
    }

    pub fn one() -> Self {
        HeightValue {
            base: BigUint::one(),
            root: 1,
        }
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    /// Display-only decimal approximation.
    pub fn approx(&self) -> f64 {
        approx_root(&self.base, self.root)
    }
}

fn approx_root(base: &BigUint, root: u32) -> f64 {
    if base.is_zero() {
        return 0.0;
    }
    let bits = base.bits();
    if bits <= 1000 {
        if let Some(b) = base.to_f64() {
            if b.is_finite() {
                return b.powf(1.0 / root as f64);
            }
        }
    }
    // base ~ m * 2^shift with m holding the top bits
    let shift = bits.saturating_sub(64);
    let m = (base >> shift).to_f64().unwrap_or(f64::MAX);
    ((m.ln() + shift as f64 * std::f64::consts::LN_2) / root as f64).exp()
}

/// Exact three-way comparison via integer cross-exponentiation.
pub fn cmp_height(a: &HeightValue, b: &HeightValue) -> Ordering {
    let m = (a.root as u64).lcm(&(b.root as u64));
    let ea = (m / a.root as u64) as u32;
    let eb = (m / b.root as u64) as u32;
    a.base.pow(ea).cmp(&b.base.pow(eb))
}

impl PartialEq for HeightValue {
    fn eq(&self, other: &Self) -> bool {
        cmp_height(self, other) == Ordering::Equal
    }
}

impl Eq for HeightValue {}

impl PartialOrd for HeightValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeightValue {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_height(self, other)
    }
}

impl std::fmt::Display for HeightValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.root == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}^(1/{})", self.base, self.root)
        }
    }
}

/// max over nonzero coordinates of `|x_i|^{1/q_i}` of an already
/// normalized tuple; ties keep the smallest index.
pub(crate) fn max_coord_height(t: &WeightedTuple) -> HeightValue {
    let mut best: Option<HeightValue> = None;
    for (x, &q) in t.coords().iter().zip(t.weights().as_slice()) {
        if x.is_zero() {
            continue;
        }
        let cand = HeightValue::new(x.magnitude().clone(), q);
        match &best {
            Some(b) if cmp_height(&cand, b) != Ordering::Greater => {}
            _ => best = Some(cand),
        }
    }
    best.expect("tuple has a nonzero coordinate")
}

/// Weighted height: normalizes, then takes the weighted maximum of the
/// coordinate magnitudes.
pub fn height(t: &WeightedTuple) -> HeightValue {
    max_coord_height(&normalize(t).tuple)
}

/// Absolute weighted height: the same maximum after absolute
/// normalization; minimal among all twists.
pub fn abs_height(t: &WeightedTuple) -> HeightValue {
    max_coord_height(&normalize_abs(t).tuple)
}

fn coordinate_box(w: &Weights, c: &BigRational) -> Vec<i64> {
    let num = c.numer().magnitude();
    let den = c.denom().magnitude();
    w.as_slice()
        .iter()
        .map(|&q| {
            if c.is_negative() || c.is_zero() {
                return 0;
            }
            let b = num.pow(q) / den.pow(q);
            b.to_i64().expect("height bound too large for enumeration")
        })
        .collect()
}

fn is_canonical_rep(w: &Weights, coords: &[BigInt]) -> Option<WeightedTuple> {
    if coords.iter().all(|c| c.is_zero()) {
        return None;
    }
    let t = WeightedTuple::new(w.clone(), coords.to_vec()).ok()?;
    if !wgcd(&t).is_one() {
        return None;
    }
    let sup = t.support();
    let pivot = sup
        .indices
        .iter()
        .find(|&&i| (w.as_slice()[i] / sup.gcd) % 2 == 1);
    if let Some(&i) = pivot {
        if t.coords()[i].is_negative() {
            return None;
        }
    }
    Some(t)
}

fn collect_tail(
    w: &Weights,
    bounds: &[i64],
    prefix: &mut Vec<BigInt>,
    out: &mut Vec<NormalizedPoint>,
) {
    let idx = prefix.len();
    if idx == bounds.len() {
        if let Some(t) = is_canonical_rep(w, prefix) {
            out.push(NormalizedPoint {
                tuple: t,
                removed: Removed::Rational(BigUint::one()),
                canonical_sign_applied: true,
            });
        }
        return;
    }
    let b = bounds[idx];
    for x in -b..=b {
        prefix.push(BigInt::from(x));
        collect_tail(w, bounds, prefix, out);
        prefix.pop();
    }
}

fn collect_for_first(w: &Weights, bounds: &[i64], x0: i64) -> Vec<NormalizedPoint> {
    let mut out = Vec::new();
    let mut prefix = vec![BigInt::from(x0)];
    collect_tail(w, bounds, &mut prefix, &mut out);
    out
}

/// Sequential enumeration of every canonical normalized point of height
/// at most `c`, in lexicographic coordinate order.
pub fn enumerate_bounded_seq(w: &Weights, c: &BigRational) -> Vec<NormalizedPoint> {
    let bounds = coordinate_box(w, c);
    let b0 = bounds[0];
    (-b0..=b0)
        .flat_map(|x0| collect_for_first(w, &bounds, x0))
        .collect()
}

/// Enumeration of every canonical normalized point of height at most `c`,
/// in deterministic lexicographic coordinate order. Partitions on the
/// first coordinate when the `parallel` feature is enabled; the output
/// order is identical either way.
pub fn enumerate_bounded(w: &Weights, c: &BigRational) -> Vec<NormalizedPoint> {
    #[cfg(feature = "parallel")]
    fn imp(w: &Weights, c: &BigRational) -> Vec<NormalizedPoint> {
        let bounds = coordinate_box(w, c);
        let b0 = bounds[0];
        (-b0..=b0)
            .into_par_iter()
            .map(|x0| collect_for_first(w, &bounds, x0))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    fn imp(w: &Weights, c: &BigRational) -> Vec<NormalizedPoint> {
        enumerate_bounded_seq(w, c)
    }
    imp(w, c)
}

/// An exact upper bound for twist enumeration: either a stored height or
/// a positive rational.
#[derive(Debug, Clone)]
pub enum HeightBound {
    Value(HeightValue),
    Rational(BigRational),
}

/// true iff `∏ p^{k_p/rs} · h <= bound`, decided in exact integer
/// arithmetic after raising both sides to lcm of the involved roots.
fn scaled_le(exps: &[(u64, u32)], rs: u32, h: &HeightValue, bound: &HeightBound) -> bool {
    let base_lcm = (rs as u64).lcm(&(h.root as u64));
    match bound {
        HeightBound::Value(b) => {
            let l = base_lcm.lcm(&(b.root as u64));
            let mut lhs = h.base.pow((l / h.root as u64) as u32);
            for &(p, k) in exps {
                lhs *= BigUint::from(p).pow((l * k as u64 / rs as u64) as u32);
            }
            lhs <= b.base.pow((l / b.root as u64) as u32)
        }
        HeightBound::Rational(c) => {
            if c.is_negative() || c.is_zero() {
                return false;
            }
            let l = base_lcm;
            let mut lhs = h.base.pow((l / h.root as u64) as u32);
            for &(p, k) in exps {
                lhs *= BigUint::from(p).pow((l * k as u64 / rs as u64) as u32);
            }
            lhs * c.denom().magnitude().pow(l as u32)
                <= c.numer().magnitude().pow(l as u32)
        }
    }
}

fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn admissible_exponent_vectors(
    rs: u32,
    h: &HeightValue,
    bound: &HeightBound,
) -> Vec<Vec<(u64, u32)>> {
    let mut primes = Vec::new();
    if rs >= 2 {
        let mut p = 2u64;
        loop {
            if is_small_prime(p) {
                if !scaled_le(&[(p, 1)], rs, h, bound) {
                    break;
                }
                primes.push(p);
            }
            p += 1;
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<(u64, u32)> = Vec::new();
    dfs(&primes, 0, rs, h, bound, &mut cur, &mut out);
    out
}

fn dfs(
    primes: &[u64],
    from: usize,
    rs: u32,
    h: &HeightValue,
    bound: &HeightBound,
    cur: &mut Vec<(u64, u32)>,
    out: &mut Vec<Vec<(u64, u32)>>,
) {
    out.push(cur.clone());
    for (i, &p) in primes.iter().enumerate().skip(from) {
        for k in 1..rs {
            cur.push((p, k));
            if scaled_le(cur, rs, h, bound) {
                dfs(primes, i + 1, rs, h, bound, cur, out);
                cur.pop();
            } else {
                cur.pop();
                break;
            }
        }
    }
}

/// All canonical rational points equivalent to `t` over the algebraic
/// closure with height at most `bound`, sorted by height then
/// lexicographically by coordinates. Empty when `bound` is below the
/// absolute height of `t`.
pub fn twists_up_to(t: &WeightedTuple, bound: &HeightBound) -> Vec<NormalizedPoint> {
    let pbar = canonical(t, Mode::Absolute);
    let h = max_coord_height(&pbar.tuple);
    if !scaled_le(&[], 1, &h, bound) {
        return Vec::new();
    }
    let rs = pbar.tuple.support().gcd;
    let vectors = admissible_exponent_vectors(rs, &h, bound);
    let mut points: Vec<(HeightValue, NormalizedPoint)> = vectors
        .into_iter()
        .map(|exps| {
            let scalar = RadicalScalar {
                sign_class: 0,
                exponents: exps
                    .iter()
                    .map(|&(p, k)| (BigUint::from(p), Ratio::new(k as i64, rs as i64)))
                    .collect::<BTreeMap<_, _>>(),
            };
            let scaled = star_radical(&scalar, &pbar.tuple)
                .expect("exponents are multiples of 1/r_S")
                .into_integral()
                .expect("positive exponents keep integrality");
            let point = canonical(&scaled, Mode::Rational);
            (max_coord_height(&point.tuple), point)
        })
        .collect();
    points.sort_by(|(ha, pa), (hb, pb)| {
        cmp_height(ha, hb).then_with(|| pa.tuple.coords().cmp(pb.tuple.coords()))
    });
    points.into_iter().map(|(_, p)| p).collect()
}
