//! JSON encodings for exact numbers.
//!
//! A standalone field element is
//! `{ "basis": ["1","sqrt2"], "hints": [1.0,1.4142135623730951], "coords": [["1","2"],["0","1"]] }`
//! with each coordinate a `[numerator, denominator]` pair of decimal strings.
//! Containers that share one basis store a [`BasisJson`] block once and bare
//! coordinate lists per number.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, FieldElement, Rational, RealBasis, Vec2};

pub type RationalJson = [String; 2];
pub type CoordsJson = Vec<RationalJson>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BasisJson {
    pub basis: Vec<String>,
    pub hints: Vec<f64>,
}

impl BasisJson {
    pub fn from_basis(b: &RealBasis) -> Self {
        BasisJson {
            basis: b.labels().to_vec(),
            hints: b.hints().to_vec(),
        }
    }

    pub fn to_basis(&self) -> Result<Arc<RealBasis>, ExactError> {
        RealBasis::from_parts(self.basis.clone(), self.hints.clone())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldElementJson {
    pub basis: Vec<String>,
    pub hints: Vec<f64>,
    pub coords: CoordsJson,
}

pub fn rational_to_json(q: &Rational) -> RationalJson {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn rational_from_json(pair: &RationalJson) -> Result<Rational, ExactError> {
    let n = BigInt::from_str(&pair[0]).map_err(|e| ExactError::Parse(format!("{:?}: {e}", pair[0])))?;
    let d = BigInt::from_str(&pair[1]).map_err(|e| ExactError::Parse(format!("{:?}: {e}", pair[1])))?;
    if d == BigInt::from(0) {
        return Err(ExactError::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

pub fn coords_to_json(x: &FieldElement) -> CoordsJson {
    x.coords().iter().map(rational_to_json).collect()
}

pub fn coords_from_json(basis: &Arc<RealBasis>, coords: &[RationalJson]) -> Result<FieldElement, ExactError> {
    let cs = coords.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>()?;
    FieldElement::new(basis.clone(), cs)
}

pub fn vec2_to_json(v: &Vec2) -> [CoordsJson; 2] {
    [coords_to_json(&v.x), coords_to_json(&v.y)]
}

pub fn vec2_from_json(basis: &Arc<RealBasis>, v: &[CoordsJson; 2]) -> Result<Vec2, ExactError> {
    Ok(Vec2::new(coords_from_json(basis, &v[0])?, coords_from_json(basis, &v[1])?))
}

impl FieldElementJson {
    pub fn from_element(x: &FieldElement) -> Self {
        let b = BasisJson::from_basis(x.basis());
        FieldElementJson {
            basis: b.basis,
            hints: b.hints,
            coords: coords_to_json(x),
        }
    }

    pub fn to_element(&self) -> Result<FieldElement, ExactError> {
        let basis = RealBasis::from_parts(self.basis.clone(), self.hints.clone())?;
        coords_from_json(&basis, &self.coords)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldElementJson::from_element(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FieldElementJson::deserialize(d)?
            .to_element()
            .map_err(serde::de::Error::custom)
    }
}

/// Moves a list of independently parsed elements onto one shared basis.
/// All elements must carry identical bases.
pub fn unify_basis(xs: Vec<FieldElement>) -> Result<(Arc<RealBasis>, Vec<FieldElement>), ExactError> {
    let first = xs.first().ok_or(ExactError::EmptyInput)?.basis().clone();
    let out = xs
        .into_iter()
        .map(|x| {
            if **x.basis() == *first {
                FieldElement::new(first.clone(), x.coords().to_vec())
            } else {
                Err(ExactError::BasisMismatch)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((first, out))
}
