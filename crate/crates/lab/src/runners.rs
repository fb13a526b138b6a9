//! Parallel drivers. Each returns exactly what the sequential routine of
//! `entropy-core` returns for the same seed; only the scheduling differs.

use entropy_core::covering::{CandidateStream, Staircase, covering_bounds_on, single_cover_at};
use entropy_core::functionals::{MeanWidth, PaperConstants, mean_width_partial};
use entropy_core::lab::{
    ConjectureProbe, DualityReport, Sampler, body_seed, duality_report, probe_one,
};
use entropy_core::{Body, OracleTolerance};
use rayon::prelude::*;

use crate::error::{LabError, Result};

/// A pool of `workers` threads, or one per available core.
pub fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(LabError::Input("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build()
        .map_err(|e| LabError::Input(format!("thread pool: {e}")))
}

/// [`entropy_core::covering::staircase`] with the grid points in parallel.
pub fn staircase_parallel(
    k: &Body,
    t_body: &Body,
    grid: &[f64],
    budget: usize,
    seed: u64,
) -> Result<Staircase> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::Input(
            "grid must be nonempty and strictly ascending".into(),
        ));
    }
    let tol = OracleTolerance::default();
    let stream = CandidateStream::build(k, budget, seed, &tol)?;
    let estimates = grid
        .par_iter()
        .map(|&t| covering_bounds_on(k, t_body, t, &stream, &tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Staircase::from_estimates(
        &estimates,
        single_cover_at(k, t_body),
    )?)
}

/// One body of a duality batch with its own resolution grid.
#[derive(Debug, Clone)]
pub struct DualityJob {
    pub body: Body,
    pub grid: Vec<f64>,
}

/// Reports for every job; job `i` runs with seed `body_seed(seed, i)`.
pub fn duality_batch(
    jobs: &[DualityJob],
    alphas: &[f64],
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<Vec<DualityReport>> {
    jobs.par_iter()
        .enumerate()
        .map(|(i, j)| {
            Ok(duality_report(
                &j.body,
                &j.grid,
                alphas,
                consts,
                budget,
                body_seed(seed, i),
            )?)
        })
        .collect()
}

/// Bodies `0..count` of a sampler, each drawn with `body_seed(seed, i)`.
pub fn sample_bodies(sampler: &Sampler, count: usize, seed: u64) -> Result<Vec<Body>> {
    sampler.validate()?;
    (0..count)
        .into_par_iter()
        .map(|i| Ok(sampler.sample(body_seed(seed, i))?.body))
        .collect()
}

/// [`entropy_core::lab::geometric_lemma_probe`] with the bodies in parallel.
pub fn probe_parallel(
    sampler: &Sampler,
    count: usize,
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<ConjectureProbe> {
    consts.validate()?;
    sampler.validate()?;
    let records = (0..count)
        .into_par_iter()
        .map(|i| probe_one(sampler, i, budget, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConjectureProbe::from_records(
        sampler.clone(),
        records,
        consts,
        budget,
        seed,
    ))
}

/// Mean width from `blocks` independent blocks of `per_block` directions,
/// merged in block order.
pub fn mean_width_parallel(
    a: &Body,
    blocks: u64,
    per_block: usize,
    seed: u64,
) -> Option<MeanWidth> {
    let parts: Vec<MeanWidth> = (0..blocks)
        .into_par_iter()
        .map(|b| mean_width_partial(a, per_block, seed, b))
        .collect();
    let mut it = parts.into_iter();
    let first = it.next()?;
    Some(it.fold(first, |acc, m| acc.merge(&m)))
}
