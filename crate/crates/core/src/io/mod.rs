mod geojson;
mod report;
mod svg;

pub use geojson::{
    parse_instance, parse_raw, read_path_document, write_instance, write_path_document, Frame, EARTH_RADIUS_M,
};
pub use report::{report_csv, REPORT_COLUMNS};
pub use svg::render_svg;

use crate::model::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{}", schema_message(.message, .feature, .offset))]
    Schema {
        message: String,
        feature: Option<String>,
        /// Byte offset of the offending feature in the document.
        offset: Option<usize>,
    },
    #[error("{0}")]
    Invalid(ValidationReport),
}

fn schema_message(message: &str, feature: &Option<String>, offset: &Option<usize>) -> String {
    let mut s = String::from("input schema error");
    if let Some(f) = feature {
        s.push_str(&format!(" in feature '{f}'"));
    }
    if let Some(o) = offset {
        s.push_str(&format!(" at byte {o}"));
    }
    s.push_str(": ");
    s.push_str(message);
    s
}
