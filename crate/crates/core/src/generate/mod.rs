//! Mechanical enumeration of unsafe control actions from the guide-word
//! catalog and expansion of loss-scenario skeletons from a causal-factor
//! taxonomy.

mod scenarios;
mod taxonomy;
mod ucas;

use thiserror::Error;

use crate::model::EntityId;

pub use scenarios::{control_loop, expand_loss_scenarios, ControlLoop, Expansion};
pub use taxonomy::{default_taxonomy, Taxonomy, MERGED_FACTOR_LABEL};
pub use ucas::{enumerate_uca_candidates, render_uca_text, UcaTemplate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("model has {0} integrity error(s); refusing to generate")]
    InvalidModel(usize),
    #[error("unknown reference \"{0}\"")]
    Dangling(EntityId),
}

pub(crate) fn ensure_valid(model: &crate::model::AnalysisModel) -> Result<(), GenerateError> {
    let errors = crate::model::validate_integrity(model)
        .iter()
        .filter(|d| d.is_error())
        .count();
    if errors > 0 {
        Err(GenerateError::InvalidModel(errors))
    } else {
        Ok(())
    }
}
