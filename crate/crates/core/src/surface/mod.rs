//! Translation surfaces: the polygon-and-gluing model, rational billiard
//! unfolding, IET suspensions and the built-in example surfaces.

mod builders;
mod cyclotomic;
mod fig1;
pub mod io;
mod model;
mod unfold;

use thiserror::Error;

use crate::exactnum::ExactError;
use crate::iet::IetError;

pub use builders::{build_hv_surface, build_slitted_torus, suspend, unit_torus, SlitPair, SlittedTorus, Suspension};
pub use fig1::{
    fig1_basis, fig1_default, fig1_from_json, search_fig1, Fig1Params, Fig1Search, FIG1_DEFAULT_JSON, FIG1_DEFAULT_SEED,
};
pub use model::{
    cross_sign, sweep_contains, sweep_contains_f, Corner, EdgeRef, Polygon, TranslationSurface, VertexClass,
};
pub use unfold::{coxeter_group, unfold, CoxeterGroup, GroupElement, RationalPolygon};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("angle {0} is not a rational multiple of pi in (0, 2pi)")]
    NonRationalAngle(String),
    #[error("cone angle excess {0}pi*2 is odd; the gluing is inconsistent")]
    NonIntegerGenus(usize),
    #[error("edge {1} of polygon {0} is not paired")]
    UnpairedEdge(usize, usize),
    #[error("edge {1} of polygon {0} is paired more than once")]
    EdgePairedTwice(usize, usize),
    #[error("polygon {0} has no edge {1}")]
    NoSuchEdge(usize, usize),
    #[error("edges ({0},{1}) and ({2},{3}) are not related by a translation")]
    NonTranslationPairing(usize, usize, usize, usize),
    #[error("edge {0} has zero length")]
    DegenerateEdge(usize),
    #[error("the polygons do not form a connected surface")]
    Disconnected,
    #[error("permutation is reducible")]
    ReducibleInput,
    #[error("height {0} is not positive")]
    NonPositiveHeight(usize),
    #[error("slits {0} and {1} intersect")]
    OverlappingSlits(usize, usize),
    #[error("slit {0} leaves the unit square or touches its horizontal sides")]
    SlitOutsideSquare(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad polygon: {0}")]
    BadPolygon(String),
    #[error("not representable in one basis: {0}")]
    Unrepresentable(String),
    #[error("malformed surface data: {0}")]
    Format(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Iet(#[from] IetError),
}
