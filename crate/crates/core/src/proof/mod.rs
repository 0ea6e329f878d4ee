//! The upper-bound machinery run on concrete graphs.
//!
//! Stages, in pipeline order: a rainbow vertex partition, the most popular
//! inherited vertex order, the family-refinement loop, the red/blue digraph
//! with its source-part selection, and finally the block-by-block embedding
//! of `T` back into the host.

mod digraph;
mod embed;
mod ordering;
mod pipeline;
mod procedure;
mod rainbow;

pub use digraph::{colour_digraph, select_a, verify_selection, ArcColour, ASelection, ColouredArc, ColouredDigraph};
pub use embed::{embed_tree, EmbedFailure, EmbedOutcome, EmbeddingCertificate, StepProvenance, Zone};
pub use ordering::{popular_ordering, PopularOrdering};
pub use pipeline::{run_pipeline, ConstantsSpec, PipelineConfig, ProcedureSummary, FLAG_NOT_T_FREE, PipelineReport, SparseReport, StructuredReport, ThresholdCheck};
pub use procedure::{
    refine_families, BSize, Branch, ConstantsMode, OutcomeKind, ProcedureConfig, ProcedureOutcome, SparseCheck, TraceStep,
};
pub use rainbow::{rainbow_partition, RainbowResult, RainbowStrategy, EMBEDDING_LIMIT};
