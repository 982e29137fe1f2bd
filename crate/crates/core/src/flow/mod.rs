//! Straight-line flow on translation surfaces and first return maps to a
//! transversal section.
//!
//! Orbits are followed in floating point. Every edge crossing also records
//! which polygon points the accumulated translation is made of, so the exact
//! position of a landing is `start + sum(counts * points) + time * direction`
//! and can be recomputed in the field once the combinatorics are known.

mod engine;
mod returnmap;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::json::{vec2_from_json, vec2_to_json, BasisJson, CoordsJson};
use crate::exactnum::{merge_bases, ExactError, FieldElement, RealBasis, Vec2};
use crate::iet::IetError;
use crate::surface::SurfaceError;

pub use engine::{trace, Crossing, Trajectory, TrajectorySegment};
pub(crate) use engine::Engine;
pub use returnmap::{first_return_map, first_return_map_float, return_times_vector, FloatReturnMap, ReturnMapResult};

/// Float snap tolerance for vertex hits, relative to the surface diameter.
pub const SNAP_TOLERANCE: f64 = 1e-12;

/// Crossing budget of a single trajectory.
pub const MAX_EVENTS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("the orbit hits a cone point at time {0}")]
    SingularOrbit(f64),
    #[error("more than {0} crossings without finishing")]
    TimeBudgetExceeded(usize),
    #[error("the flow does not return to the section within {0} crossings")]
    NoReturn(usize),
    #[error("cannot certify the section cut points: {0}")]
    SingularSection(String),
    #[error("section piece {0} is not transversal to the flow")]
    NotTransversal(usize),
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("point is not on the surface: {0}")]
    NotOnSurface(String),
    #[error("exact mode needs {0}")]
    Unrepresentable(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Iet(#[from] IetError),
}

/// Arithmetic used for outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// A flow direction; the vector is also the velocity, so times scale
/// inversely with its length.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    vector: Vec2,
    float: [f64; 2],
}

impl Direction {
    pub fn new(vector: Vec2) -> Result<Self, FlowError> {
        if vector.is_zero() {
            return Err(FlowError::ZeroDirection);
        }
        let float = vector.to_f64();
        Ok(Direction { vector, float })
    }

    pub fn vertical(basis: &Arc<RealBasis>) -> Self {
        Direction::new(Vec2::from_rationals(basis, crate::exactnum::rat(0, 1), crate::exactnum::rat(1, 1))).expect("nonzero")
    }

    pub fn vector(&self) -> &Vec2 {
        &self.vector
    }

    pub fn to_f64(&self) -> [f64; 2] {
        self.float
    }

    /// Angle in radians.
    pub fn angle(&self) -> f64 {
        self.float[1].atan2(self.float[0])
    }
}

/// An oriented segment of a section inside polygon `poly`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionPiece {
    pub poly: usize,
    pub start: Vec2,
    pub end: Vec2,
}

/// A transversal made of pieces laid end to end: piece `k` covers
/// `[offset_k, offset_k + len_k)` of the section coordinate. A loop
/// identifies the two ends; its seam sits at coordinate `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pieces: Vec<SectionPiece>,
    is_loop: bool,
}

impl Section {
    pub fn new(pieces: Vec<SectionPiece>, is_loop: bool) -> Self {
        Section { pieces, is_loop }
    }

    /// A single horizontal segment from `(x0, y)` to `(x1, y)`.
    pub fn horizontal(poly: usize, x0: FieldElement, x1: FieldElement, y: FieldElement, is_loop: bool) -> Self {
        Section::new(
            vec![SectionPiece {
                poly,
                start: Vec2::new(x0, y.clone()),
                end: Vec2::new(x1, y),
            }],
            is_loop,
        )
    }

    pub fn pieces(&self) -> &[SectionPiece] {
        &self.pieces
    }

    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    pub fn lengths_f(&self) -> Vec<f64> {
        self.pieces
            .iter()
            .map(|p| {
                let [ax, ay] = p.start.to_f64();
                let [bx, by] = p.end.to_f64();
                (bx - ax).hypot(by - ay)
            })
            .collect()
    }

    pub fn total_length_f(&self) -> f64 {
        self.lengths_f().iter().sum()
    }

    /// Exact piece lengths; every piece must be horizontal or vertical.
    pub fn lengths(&self) -> Result<Vec<FieldElement>, FlowError> {
        self.pieces
            .iter()
            .map(|p| {
                let d = &p.end - &p.start;
                let l = if d.y.is_zero() {
                    d.x
                } else if d.x.is_zero() {
                    d.y
                } else {
                    return Err(FlowError::Unrepresentable("axis-parallel section pieces".into()));
                };
                Ok(if l.is_positive()? { l } else { -&l })
            })
            .collect()
    }

    pub fn total_length(&self) -> Result<FieldElement, FlowError> {
        let ls = self.lengths()?;
        let mut acc = FieldElement::zero(ls[0].basis());
        for l in &ls {
            acc = &acc + l;
        }
        Ok(acc)
    }

    pub fn rebase(&self, target: &Arc<RealBasis>) -> Result<Section, ExactError> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(SectionPiece {
                    poly: p.poly,
                    start: p.start.rebase(target)?,
                    end: p.end.rebase(target)?,
                })
            })
            .collect::<Result<_, ExactError>>()?;
        Ok(Section::new(pieces, self.is_loop))
    }

    pub fn to_json(&self) -> SectionJson {
        let basis = self.pieces.first().map_or_else(RealBasis::rational, |p| p.start.basis().clone());
        SectionJson {
            basis: BasisJson::from_basis(&basis),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceJson {
                    poly: p.poly,
                    start: vec2_to_json(&p.start),
                    end: vec2_to_json(&p.end),
                })
                .collect(),
            is_loop: self.is_loop,
        }
    }

    pub fn from_json(j: &SectionJson) -> Result<Section, FlowError> {
        let basis = j.basis.to_basis()?;
        let pieces = j
            .pieces
            .iter()
            .map(|p| {
                Ok(SectionPiece {
                    poly: p.poly,
                    start: vec2_from_json(&basis, &p.start)?,
                    end: vec2_from_json(&basis, &p.end)?,
                })
            })
            .collect::<Result<Vec<_>, ExactError>>()?;
        if pieces.is_empty() {
            return Err(FlowError::SingularSection("section has no pieces".into()));
        }
        Ok(Section::new(pieces, j.is_loop))
    }
}

/// `{ "basis": .., "hints": .., "pieces": [{"poly": 0, "start": [x, y], "end": [x, y]}], "loop": true }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionJson {
    #[serde(flatten)]
    pub basis: BasisJson,
    pub pieces: Vec<PieceJson>,
    #[serde(rename = "loop", default)]
    pub is_loop: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub poly: usize,
    pub start: [CoordsJson; 2],
    pub end: [CoordsJson; 2],
}

/// Common basis of a surface, a direction and a section.
pub(crate) fn working_basis(
    surface: &crate::surface::TranslationSurface,
    direction: &Direction,
    section: Option<&Section>,
) -> Result<Arc<RealBasis>, ExactError> {
    let mut xs = vec![
        FieldElement::zero(surface.basis()),
        direction.vector.x.clone(),
        direction.vector.y.clone(),
    ];
    if let Some(s) = section {
        for p in &s.pieces {
            xs.push(p.start.x.clone());
        }
    }
    Ok(merge_bases(xs)?.0)
}
