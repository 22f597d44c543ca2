//! Exact matching distance between two-parameter persistence modules.
//!
//! Modules are given either as direct sums of rectangles or as graded
//! presentations over the two-element field. The distance is the supremum,
//! over positive-slope lines, of the weighted bottleneck distance between the
//! restricted barcodes; it is computed exactly by maximizing over a finite set
//! of candidate lines.
//!
//! All algorithms are generic over [`Scalar`]; [`Rational`] gives exact
//! answers and `f64` is used for sampling.

pub mod barcode;
pub mod bottleneck;
pub mod error;
pub mod exact;
pub mod format;
pub mod geometry;
pub mod grid;
pub mod module;
pub mod scalar;
mod scaled;
pub mod switch;

pub use barcode::{restrict_module, restrict_presentation, restrict_rect, Bar, Diagram};
pub use bottleneck::{bottleneck, bottleneck_bruteforce, bottleneck_distance, MatchingWitness, Realizer};
pub use error::{Error, Result};
pub use exact::{
    candidate_lines, horizontal_cost, matching_distance, matching_distance_with, restricted_distance, vertical_cost,
    weighted_bottleneck, CandidateOptions, CandidateSet, DistanceResult, Restriction, SwitchPolicy,
};
pub use grid::{restricted_max, scan, scan_max, write_csv, GridSpec, HeatmapRow, LineFamily, Scan};
pub use format::{format_number, parse_module, parse_number, write_module};
pub use geometry::{line_through, line_through_infinite, line_with_direction, Line, Point, ProjPoint, PushRegion, Side};
pub use module::{lub_closure, Generator, Presentation, Rect, Relation, TwoParamModule};
pub use scalar::{ExactScalar, Extended, Scalar};
pub use switch::{pruned_switch_points, switch_points, SwitchPointSet};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

pub type ExactPoint = Point<Rational>;
pub type ExactLine = Line<Rational>;
pub type ExactModule = TwoParamModule<Rational>;
pub type ExactDiagram = Diagram<Rational>;
pub type FloatLine = Line<f64>;
pub type FloatModule = TwoParamModule<f64>;
pub type FloatDiagram = Diagram<f64>;
