//! Rayon-backed evaluation. Work is split by series index `j` or by scan
//! point and always collected in index order, so results do not depend on the
//! thread count.

use rayon::prelude::*;
use zerogap_core::moments::{GapConfig, MomentEvaluator};
use zerogap_core::optimize::SeriesBackend;
use zerogap_core::ratio::{GapSeries, RatioReport};
use zerogap_core::rational::Rational;
use zerogap_core::Result;

/// Builds the series with one evaluator (and one set of caches) per worker.
pub fn build_series(cfg: &GapConfig) -> Result<GapSeries> {
    let (d_parts, terms) = rayon::join(
        || MomentEvaluator::new(cfg)?.d_parts(),
        || {
            (0..=cfg.truncation())
                .into_par_iter()
                .map_init(
                    || MomentEvaluator::new(cfg),
                    |ev, j| match ev {
                        Ok(ev) => ev.series_term(j),
                        Err(e) => Err(e.clone()),
                    },
                )
                .collect::<Result<Vec<_>>>()
        },
    );
    GapSeries::from_parts(cfg.clone(), d_parts?, terms?)
}

pub fn eval_points(series: &GapSeries, points: &[Rational]) -> Result<Vec<RatioReport>> {
    points.par_iter().map(|c| series.f_series(c)).collect()
}

pub fn max_admissible(
    series: &GapSeries,
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<RatioReport> {
    series.max_admissible_c_with(lo, hi, tol, |grid| eval_points(series, grid))
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Parallel;

impl SeriesBackend for Parallel {
    fn build(&mut self, cfg: &GapConfig) -> Result<GapSeries> {
        build_series(cfg)
    }

    fn max_admissible(
        &mut self,
        series: &GapSeries,
        lo: &Rational,
        hi: &Rational,
        tol: &Rational,
    ) -> Result<RatioReport> {
        max_admissible(series, lo, hi, tol)
    }
}
