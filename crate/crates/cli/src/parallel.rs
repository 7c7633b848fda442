//! Worker pool for screen-hit sampling.
//!
//! Chunks are fixed by the sample count alone and collected in chunk order,
//! so the worker count only changes wall-clock time.

use epr_dds_core::numerics::{chunk_plan, draw_stream, merge_streams, JointDensity, SampleBatch};
use epr_dds_core::Error as ModelError;
use rayon::prelude::*;

use crate::args::Family;
use crate::error::{CliError, CliResult};

pub fn sample_with_workers<D>(density: &D, n: usize, seed: u64, workers: usize) -> CliResult<SampleBatch>
where
    D: JointDensity + Sync + ?Sized,
{
    if n == 0 {
        return Err(ModelError::EmptySample.into());
    }
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let plan: Vec<(u64, usize)> = chunk_plan(n).collect();
    let draws = pool.install(|| {
        plan.par_iter()
            .map(|&(stream, count)| draw_stream(density, seed, stream, count))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(merge_streams(seed, draws))
}

pub fn sample_family(family: &Family, n: usize, seed: u64, workers: usize) -> CliResult<SampleBatch> {
    match family {
        Family::Theta(p) => sample_with_workers(p, n, seed, workers),
        Family::Asym(p) => sample_with_workers(p, n, seed, workers),
    }
}
