//! Reading and writing policy documents and analysis reports.

pub mod parse;
pub mod render;
pub mod serialize;

pub use parse::{is_identifier, parse_model};
pub use render::{render_csv, render_text, write_report, Format, Report};
pub use serialize::{load_policy, serialize_model, write_document};
