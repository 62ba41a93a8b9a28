//! Presets tying weighted points to hyperelliptic-curve moduli: genus 2
//! Igusa invariants and genus 3 octavic invariants, plus the halved-weight
//! reinterpretation of the genus 2 space.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::tuple::{WeightedTuple, Weights};

/// A named weight system with an optional coordinate that must not vanish
/// (discriminant-type condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliPreset {
    pub name: &'static str,
    weights: Weights,
    pub nonvanishing_index: Option<usize>,
}

impl ModuliPreset {
    pub fn weights(&self) -> &Weights {
        &self.weights
    }
}

pub const PRESET_NAMES: [&str; 4] = [
    "genus2-igusa",
    "genus2-half",
    "genus3-octavic",
    "genus3-octavic-extended",
];

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ModuliPreset> {
    let (weights, nonvanishing) = match name {
        "genus2-igusa" => (vec![2, 4, 6, 10], Some(3)),
        "genus2-half" => (vec![1, 2, 3, 5], Some(3)),
        "genus3-octavic" => (vec![2, 3, 4, 5, 6, 7], None),
        "genus3-octavic-extended" => (vec![2, 3, 4, 5, 6, 7, 8], None),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let name = PRESET_NAMES
        .iter()
        .find(|&&n| n == name)
        .expect("name matched above");
    Ok(ModuliPreset {
        name,
        weights: Weights::new(weights).expect("preset weights are valid"),
        nonvanishing_index: nonvanishing,
    })
}

/// Validates a coordinate list against a preset and binds it to the
/// preset's weights.
pub fn moduli_point(preset: &ModuliPreset, coords: Vec<BigInt>) -> Result<WeightedTuple> {
    if coords.len() != preset.weights.len() {
        return Err(Error::ArityMismatch {
            want: preset.weights.len(),
            got: coords.len(),
        });
    }
    if let Some(i) = preset.nonvanishing_index {
        if coords[i].is_zero() {
            return Err(Error::DegenerateModuli { index: i });
        }
    }
    WeightedTuple::new(preset.weights.clone(), coords)
}

/// Reinterprets a tuple over weights (2,4,6,10) under the halved weights
/// (1,2,3,5), preserving the coordinates bit for bit.
pub fn reinterpret_half(t: &WeightedTuple) -> Result<WeightedTuple> {
    let source = Weights::new(vec![2, 4, 6, 10]).expect("valid");
    if t.weights() != &source {
        return Err(Error::WeightsMismatch);
    }
    let halved = Weights::new(vec![1, 2, 3, 5]).expect("valid");
    WeightedTuple::new(halved, t.coords().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::{cmp_height, height, HeightValue};
    use crate::normal::{canonical, normalize, sign_twist, Mode, SignClass};
    use crate::tuple::star;
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::One;
    use std::cmp::Ordering;

    fn coords(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn preset_lookup() {
        assert_eq!(preset("genus2-igusa").unwrap().weights().as_slice(), &[2, 4, 6, 10]);
        assert_eq!(preset("genus2-half").unwrap().weights().as_slice(), &[1, 2, 3, 5]);
        assert_eq!(
            preset("genus3-octavic").unwrap().weights().as_slice(),
            &[2, 3, 4, 5, 6, 7]
        );
        assert_eq!(
            preset("genus3-octavic-extended").unwrap().weights().as_slice(),
            &[2, 3, 4, 5, 6, 7, 8]
        );
        assert!(matches!(preset("genus4"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn moduli_point_validation() {
        let g2 = preset("genus2-igusa").unwrap();
        assert!(moduli_point(&g2, coords(&[240, 1620, 119_880, 46_656])).is_ok());
        assert_eq!(
            moduli_point(&g2, coords(&[1, 2, 3, 0])),
            Err(Error::DegenerateModuli { index: 3 })
        );
        assert_eq!(
            moduli_point(&g2, coords(&[1, 2, 3])),
            Err(Error::ArityMismatch { want: 4, got: 3 })
        );

        let g3 = preset("genus3-octavic-extended").unwrap();
        let two = BigInt::from(2);
        let seven = BigInt::from(7);
        let p = vec![
            -two.pow(3) * 5 * 7,
            BigInt::zero(),
            two.pow(10) * seven.pow(4),
            BigInt::zero(),
            two.pow(15) * seven.pow(6),
            BigInt::zero(),
            -two.pow(19) * 5 * seven.pow(8),
        ];
        assert!(moduli_point(&g3, p).is_ok());
    }

    #[test]
    fn reinterpret_preserves_coordinates() {
        let g2 = preset("genus2-igusa").unwrap();
        let t = moduli_point(&g2, coords(&[240, 1620, 119_880, 46_656])).unwrap();
        let h = reinterpret_half(&t).unwrap();
        assert_eq!(h.weights().as_slice(), &[1, 2, 3, 5]);
        assert_eq!(h.coords(), t.coords());

        let wrong = moduli_point(&preset("genus2-half").unwrap(), coords(&[1, 2, 3, 4])).unwrap();
        assert_eq!(reinterpret_half(&wrong), Err(Error::WeightsMismatch));
    }

    #[test]
    fn sign_twins_merge_under_halved_weights() {
        // (-1) star under (1,2,3,5) produces exactly the sign-twin pattern
        let g2 = preset("genus2-half").unwrap();
        let t = moduli_point(&g2, coords(&[7, 11, 13, 17])).unwrap();
        let neg = star(&(-BigRational::one()), &t).unwrap().into_integral().unwrap();
        assert_eq!(neg.coords(), coords(&[-7, 11, -13, -17]).as_slice());
        assert!(crate::normal::same_point(&t, &neg).unwrap());
    }

    #[test]
    fn sign_twin_pairing_and_uniqueness() {
        // genus2: every normalized full-support tuple pairs with its twin
        let g2 = preset("genus2-igusa").unwrap();
        let t = moduli_point(&g2, coords(&[3, 5, 7, 11])).unwrap();
        let twin = sign_twist(&t, SignClass::flip());
        assert_ne!(t, twin);
        assert_eq!(wgcd_of(&t), wgcd_of(&twin));
        assert_eq!(
            canonical(&t, Mode::Rational).tuple,
            canonical(&twin, Mode::Rational).tuple
        );

        // genus3 (gcd 1, full support): normalization is already unique
        let g3 = preset("genus3-octavic").unwrap();
        let t = moduli_point(&g3, coords(&[3, 5, 7, 11, 13, 17])).unwrap();
        let lam = BigRational::from(BigInt::from(2));
        let scaled = star(&lam, &t).unwrap().into_integral().unwrap();
        assert_eq!(normalize(&scaled).tuple, normalize(&t).tuple);
    }

    fn wgcd_of(t: &WeightedTuple) -> BigUint {
        crate::normal::wgcd(t)
    }

    #[test]
    fn halved_heights_square() {
        // |x|^{1/(q/2)} = (|x|^{1/q})^2, checked exactly through cmp_height
        // on a tuple normalized under both weight systems
        let g2 = preset("genus2-igusa").unwrap();
        let t = moduli_point(&g2, coords(&[7, 11, 13, 17])).unwrap();
        let h = height(&t); // sqrt(7)
        let hh = height(&reinterpret_half(&t).unwrap()); // 7
        let squared = HeightValue::new(h.base().pow(2), h.root());
        assert_eq!(cmp_height(&hh, &squared), Ordering::Equal);
    }
}
