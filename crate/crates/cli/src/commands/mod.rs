pub mod bias;
pub mod classes;
pub mod embed;
pub mod ingest;
pub mod morphology;
pub mod phonology;
pub mod pipeline;
pub mod subjects;

use slanglex::morphology::SegmenterParams;

use crate::args::SegmenterArgs;
use crate::error::{CliError, CliResult};

pub fn segmenter_params(a: &SegmenterArgs, seed: u64) -> CliResult<SegmenterParams> {
    if !(a.split_penalty >= 0.0 && a.split_penalty.is_finite()) {
        return Err(CliError::Usage(format!(
            "--split-penalty must be non-negative, got {}",
            a.split_penalty
        )));
    }
    if a.max_iters == 0 {
        return Err(CliError::Usage("--max-iters must be at least 1".into()));
    }
    Ok(SegmenterParams {
        split_penalty: a.split_penalty,
        max_iters: a.max_iters,
        seed,
        split_hyphens: !a.keep_hyphens,
    })
}
