//! Deterministic coordinate search over monomial pairs
//! `P_0 = x^{d0}`, `P_2 = t·x^{d2}` and over `r`, maximizing the certified
//! admissible `c`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::moments::GapConfig;
use crate::poly::Polynomial;
use crate::ratio::{GapSeries, RatioReport};
use crate::rational::{format_rational, int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub r_values: Vec<u32>,
    pub p0_degrees: Vec<u32>,
    pub p2_degrees: Vec<u32>,
    /// Closed interval for the `P_2` coefficient.
    pub p2_coeff_range: (Rational, Rational),
    /// Starting coefficient; defaults to 0 when the range contains it, else
    /// the lower end.
    pub p2_initial: Option<Rational>,
    /// Coefficient probes are rounded to multiples of this.
    pub coeff_resolution: Rational,
    pub golden_steps: u32,
    /// Maximum number of candidate configurations evaluated.
    pub budget: u32,
    pub eta: Rational,
    pub truncation: u32,
    pub precision: u32,
    /// Scan interval for `c/π` and bisection tolerance.
    pub c_lo: Rational,
    pub c_hi: Rational,
    pub tol: Rational,
}

impl FamilySpec {
    /// A spec with the given lists and range and default settings elsewhere.
    pub fn new(
        r_values: Vec<u32>,
        p0_degrees: Vec<u32>,
        p2_degrees: Vec<u32>,
        range: (Rational, Rational),
    ) -> Self {
        Self {
            r_values,
            p0_degrees,
            p2_degrees,
            p2_coeff_range: range,
            p2_initial: None,
            coeff_resolution: ratio(1, 10),
            golden_steps: 12,
            budget: 64,
            eta: ratio(1, 2),
            truncation: GapConfig::DEFAULT_TRUNCATION,
            precision: GapConfig::DEFAULT_PRECISION,
            c_lo: int(2),
            c_hi: int(4),
            tol: ratio(1, 10_000),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.budget < 1 {
            return fail("budget must be at least 1");
        }
        if self.r_values.is_empty() || self.p0_degrees.is_empty() || self.p2_degrees.is_empty() {
            return fail("r and degree lists must be nonempty");
        }
        if self.r_values.contains(&0) {
            return fail("r must be at least 1");
        }
        let (lo, hi) = &self.p2_coeff_range;
        if lo > hi {
            return fail("empty P2 coefficient range");
        }
        if let Some(t) = &self.p2_initial {
            if t < lo || t > hi {
                return fail("initial P2 coefficient outside its range");
            }
        }
        if !self.coeff_resolution.is_positive() {
            return fail("coefficient resolution must be positive");
        }
        if !self.c_lo.is_positive() || self.c_lo >= self.c_hi || !self.tol.is_positive() {
            return fail("need 0 < c_lo < c_hi and tol > 0");
        }
        if !self.eta.is_positive() || self.eta > ratio(1, 2) || self.precision == 0 {
            return fail("eta must lie in (0, 1/2] and precision must be positive");
        }
        Ok(())
    }

    fn initial_coeff(&self) -> Rational {
        let (lo, hi) = &self.p2_coeff_range;
        match &self.p2_initial {
            Some(t) => t.clone(),
            None if lo <= &Rational::zero() && &Rational::zero() <= hi => Rational::zero(),
            None => lo.clone(),
        }
    }
}

/// One monomial candidate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub r: u32,
    pub p0_degree: u32,
    pub p2_degree: u32,
    pub p2_coeff: Rational,
}

impl Candidate {
    pub fn summary(&self) -> String {
        format!(
            "r={} p0=x^{} p2={}x^{}",
            self.r,
            self.p0_degree,
            format_rational(&self.p2_coeff),
            self.p2_degree
        )
    }

    fn total_degree(&self) -> u32 {
        self.p0_degree
            + if self.p2_coeff.is_zero() {
                0
            } else {
                self.p2_degree
            }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub candidate: Candidate,
    /// Largest certified `c/π`, if any scan point was admissible.
    pub c_star: Option<Rational>,
    pub best_so_far: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_config: GapConfig,
    pub best_candidate: Candidate,
    pub best_report: RatioReport,
    pub evaluations: u32,
    pub trace: Vec<TraceEntry>,
}

/// How the search obtains series and scans them; lets a std caller plug in
/// parallel evaluation.
pub trait SeriesBackend {
    fn build(&mut self, cfg: &GapConfig) -> Result<GapSeries>;

    fn max_admissible(
        &mut self,
        series: &GapSeries,
        lo: &Rational,
        hi: &Rational,
        tol: &Rational,
    ) -> Result<RatioReport> {
        series.max_admissible_c(lo, hi, tol)
    }
}

/// Builds every series on the calling thread.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl SeriesBackend for Sequential {
    fn build(&mut self, cfg: &GapConfig) -> Result<GapSeries> {
        GapSeries::new(cfg.clone())
    }
}

pub fn optimize(spec: &FamilySpec) -> Result<SearchResult> {
    optimize_with(spec, &mut Sequential)
}

pub fn optimize_with<B: SeriesBackend>(spec: &FamilySpec, backend: &mut B) -> Result<SearchResult> {
    spec.validate()?;
    let mut search = Search {
        spec,
        backend,
        unit_series: BTreeMap::new(),
        seen: BTreeMap::new(),
        trace: Vec::new(),
        best: None,
    };
    let mut current = Candidate {
        r: spec.r_values[0],
        p0_degree: spec.p0_degrees[0],
        p2_degree: spec.p2_degrees[0],
        p2_coeff: spec.initial_coeff(),
    };
    search.evaluate(&current)?;

    loop {
        let before = search.best_key();
        for r in &spec.r_values {
            search.evaluate(&Candidate {
                r: *r,
                ..current.clone()
            })?;
        }
        current = search.best_candidate().unwrap_or(current);
        for d in &spec.p0_degrees {
            search.evaluate(&Candidate {
                p0_degree: *d,
                ..current.clone()
            })?;
        }
        current = search.best_candidate().unwrap_or(current);
        for d in &spec.p2_degrees {
            search.evaluate(&Candidate {
                p2_degree: *d,
                ..current.clone()
            })?;
        }
        current = search.best_candidate().unwrap_or(current);
        search.golden(&current)?;
        current = search.best_candidate().unwrap_or(current);
        if search.exhausted() || search.best_key() == before {
            break;
        }
    }

    let evaluations = search.seen.len() as u32;
    let trace = search.trace;
    let (cand, report) = search.best.ok_or(Error::NoAdmissiblePoint)?;
    Ok(SearchResult {
        best_config: candidate_config(spec, &cand)?,
        best_candidate: cand,
        best_report: report,
        evaluations,
        trace,
    })
}

fn candidate_config(spec: &FamilySpec, cand: &Candidate) -> Result<GapConfig> {
    let p0 = Polynomial::monomial(cand.p0_degree as usize, int(1));
    let p2 = Polynomial::monomial(cand.p2_degree as usize, cand.p2_coeff.clone());
    GapConfig::new(cand.r, spec.eta.clone(), p0, p2)?
        .with_truncation(spec.truncation)
        .with_precision(spec.precision)
}

struct Search<'a, B> {
    spec: &'a FamilySpec,
    backend: &'a mut B,
    /// Series with unit coefficients, per `(r, d0, d2)`.
    unit_series: BTreeMap<(u32, u32, u32), GapSeries>,
    seen: BTreeMap<Candidate, Option<Rational>>,
    trace: Vec<TraceEntry>,
    best: Option<(Candidate, RatioReport)>,
}

impl<B: SeriesBackend> Search<'_, B> {
    fn exhausted(&self) -> bool {
        self.seen.len() as u32 >= self.spec.budget
    }

    fn best_key(&self) -> Option<(Rational, Candidate)> {
        self.best
            .as_ref()
            .map(|(c, r)| (r.c_multiple.clone(), c.clone()))
    }

    fn best_candidate(&self) -> Option<Candidate> {
        self.best.as_ref().map(|(c, _)| c.clone())
    }

    /// Certified `c*/π` of a candidate; repeated candidates are free.
    fn evaluate(&mut self, cand: &Candidate) -> Result<Option<Rational>> {
        if let Some(v) = self.seen.get(cand) {
            return Ok(v.clone());
        }
        if self.exhausted() {
            return Ok(None);
        }
        let key = (cand.r, cand.p0_degree, cand.p2_degree);
        if !self.unit_series.contains_key(&key) {
            let unit = Candidate {
                p2_coeff: Rational::one(),
                ..cand.clone()
            };
            let series = self.backend.build(&candidate_config(self.spec, &unit)?)?;
            self.unit_series.insert(key, series);
        }
        let series = self.unit_series[&key].rescaled(&Rational::one(), &cand.p2_coeff);
        let report = match series {
            Ok(s) => {
                let (lo, hi, tol) = (&self.spec.c_lo, &self.spec.c_hi, &self.spec.tol);
                match self.backend.max_admissible(&s, lo, hi, tol) {
                    Ok(rep) => Some(rep),
                    Err(Error::NoAdmissiblePoint) => None,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::DegenerateNormalizer) => None,
            Err(e) => return Err(e),
        };
        let c_star = report.as_ref().map(|r| r.c_multiple.clone());
        if let Some(rep) = report {
            debug_assert!(rep.admissible);
            let better = match &self.best {
                None => true,
                Some((bc, br)) => {
                    rep.c_multiple > br.c_multiple
                        || (rep.c_multiple == br.c_multiple
                            && cand.total_degree() < bc.total_degree())
                }
            };
            if better {
                self.best = Some((cand.clone(), rep));
            }
        }
        self.seen.insert(cand.clone(), c_star.clone());
        self.trace.push(TraceEntry {
            candidate: cand.clone(),
            c_star: c_star.clone(),
            best_so_far: self.best.as_ref().map(|(_, r)| r.c_multiple.clone()),
        });
        Ok(c_star)
    }

    fn round(&self, t: &Rational) -> Rational {
        let res = &self.spec.coeff_resolution;
        let (lo, hi) = &self.spec.p2_coeff_range;
        let v = (t / res).round() * res;
        v.max(lo.clone()).min(hi.clone())
    }

    /// Golden-section maximization of `c*` in the `P_2` coefficient.
    fn golden(&mut self, base: &Candidate) -> Result<()> {
        let (mut a, mut b) = self.spec.p2_coeff_range.clone();
        if a == b {
            return Ok(());
        }
        // 1/φ to ten digits
        let inv_phi = Rational::new(6_180_339_887i64.into(), 10_000_000_000i64.into());
        let at = |t: Rational| Candidate {
            p2_coeff: t,
            ..base.clone()
        };
        for _ in 0..self.spec.golden_steps {
            if self.exhausted() {
                break;
            }
            let span = &b - &a;
            let x1 = self.round(&(&b - &span * &inv_phi));
            let x2 = self.round(&(&a + &span * &inv_phi));
            if x1 >= x2 {
                break;
            }
            let f1 = self.evaluate(&at(x1.clone()))?;
            let f2 = self.evaluate(&at(x2.clone()))?;
            if f1 < f2 {
                a = x1;
            } else {
                b = x2;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small_spec() -> FamilySpec {
        let mut s = FamilySpec::new(vec![2], vec![3, 5], vec![4], (int(-3), int(3)));
        s.truncation = 8;
        s.precision = 30;
        s.golden_steps = 4;
        s.coeff_resolution = ratio(1, 4);
        s.c_lo = ratio(1, 2);
        s.c_hi = int(5);
        s.tol = ratio(1, 100);
        s
    }

    #[test]
    fn validation() {
        let mut s = small_spec();
        assert!(s.validate().is_ok());
        s.budget = 0;
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.p0_degrees.clear();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.p2_initial = Some(int(9));
        assert!(s.validate().is_err());
    }

    #[test]
    fn budget_one_evaluates_once() {
        let mut s = small_spec();
        s.budget = 1;
        let res = optimize(&s).unwrap();
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.evaluations, 1);
        assert_eq!(res.best_candidate.p2_coeff, int(0));
        assert_eq!(res.best_candidate.p0_degree, 3);
    }

    #[test]
    fn trace_is_monotone_and_certified() {
        let s = small_spec();
        let res = optimize(&s).unwrap();
        assert!(res.best_report.admissible);
        assert!(res.evaluations <= s.budget);
        let bests: Vec<_> = res.trace.iter().map(|t| t.best_so_far.clone()).collect();
        assert!(bests.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            bests.last().unwrap().as_ref(),
            Some(&res.best_report.c_multiple)
        );
        let first = res.trace[0].c_star.clone().unwrap();
        assert!(res.best_report.c_multiple >= first);
        let again = optimize(&s).unwrap();
        assert_eq!(again.trace, res.trace);
    }
}
