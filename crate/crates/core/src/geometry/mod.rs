//! Metrics, charts, curvature and ambient constructions for the deformed
//! spaces and the constant-curvature Cayley–Klein spaces.

mod ambient;
mod charts;
mod metric;
mod signature;
mod transform;

pub use ambient::{ambient_embed, AmbientPoint, Embedding};
pub use charts::{polar_chart, MetricChart};
pub use metric::{
    brioschi_oracle, cartesian_metric, gaussian_curvature, metric_field, MetricFamily, BRIOSCHI_STEP,
};
pub use signature::{ChartKind, CkSignature, SpaceTag};
pub use transform::{cartesian_to_polar, polar_to_cartesian, PolarState};
