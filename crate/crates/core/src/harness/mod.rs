//! Monte-Carlo driver and the analysis built on top of it.

mod analyze;
mod distance;
mod io;
mod plot;
mod run;
mod stats;

pub use analyze::{analyze, AnalysisResult, GroupAnalysis, GroupKey, LambdaEntry, SlopeEntry};
pub use distance::{graph_distance, matching_graph_distance, DistanceReport};
pub use io::{read_csv, write_csv, ExperimentConfig, OneOrMany};
pub use plot::plot_svg;
pub use run::{point_seed, prepare, run_point, scan, Counts, PointSpec, Prepared, RunRecord, StopRule};
pub use stats::{
    fit_slope, lambda_factor, log_grid, pseudothreshold, wilson_interval, Crossing, Curve, LambdaEstimate, Threshold,
};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::decoder::{DecodeError, GraphError};
use crate::dem::DecomposeError;
use crate::layout::{InterfaceConfig, LayoutError};

/// The p at which suppression factors are compared by default.
pub const LAMBDA_P: f64 = 3.45e-3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("{cfg}: {source}")]
    Decompose {
        cfg: InterfaceConfig,
        #[source]
        source: DecomposeError,
    },
    #[error("{cfg}: {source}")]
    Graph {
        cfg: InterfaceConfig,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("{0}")]
    Analysis(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
}
