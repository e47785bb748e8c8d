//! Reference checker, instance generator and bundled fixtures.

pub mod fixtures;
pub mod generator;
pub mod oracle;

pub use generator::{generate_instance, GeneratedInstance, GeneratorParams, Planted};
pub use oracle::{Oracle, OracleVerdict, OracleWitness, Target};
