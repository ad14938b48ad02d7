pub mod analysis;
pub mod cli;
pub mod graph;
pub mod ingest;
pub mod model;
pub mod query;
pub(crate) mod render;
pub mod serialize;
pub mod validate;
pub mod vocab;
