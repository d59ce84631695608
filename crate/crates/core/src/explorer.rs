//! Sweeps and minimal-slack searches over one-parameter and random domain
//! families.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry2d::{recenter, CenteringMode, DomainSpec2D};
use crate::inequalities::{run_suite, CheckEntry, CheckId, CheckReport, SuiteConfig};

/// Random Fourier domains: number of cosine/sine mode pairs.
pub const FOURIER_MODES: usize = 4;
/// Reject a random domain when `min r ≤ MIN_RADIUS_FRACTION · a0`.
pub const MIN_RADIUS_FRACTION: f64 = 0.2;
/// Reject a random domain when `max r / min r` exceeds this.
pub const MAX_ASPECT: f64 = 5.0;
/// Parameter tolerance of the golden-section refinement.
pub const GOLDEN_TOL: f64 = 1e-4;
const MAX_REJECTIONS: usize = 10_000;

/// `steps` equally spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        Self { start, stop, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return alloc::vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.stop } else { self.start + h * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `Ellipse(a, 1/a)` for `a` on the grid.
    Ellipse { grid: Grid },
    /// `PerturbedDisk(1, ε, m)` for `ε` on the grid.
    PerturbedDisk { grid: Grid, waves: u32 },
    /// `a0 = 1` plus random coefficients uniform in `[-bound, bound]`,
    /// recentered at the volume centroid.
    FourierRandom { count: usize, bound: f64, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ellipse { .. } => "ellipse",
            Family::PerturbedDisk { .. } => "pdisk",
            Family::FourierRandom { .. } => "fourier-random",
        }
    }

    /// Parameter value at which the family contains the disk.
    pub fn ball_parameter(&self) -> Option<f64> {
        match self {
            Family::Ellipse { .. } => Some(1.0),
            Family::PerturbedDisk { .. } => Some(0.0),
            Family::FourierRandom { .. } => None,
        }
    }

    fn member(&self, param: f64) -> DomainSpec2D {
        match *self {
            Family::Ellipse { .. } => DomainSpec2D::ellipse(param, 1.0 / param),
            Family::PerturbedDisk { waves, .. } => DomainSpec2D::perturbed_disk(1.0, param, waves),
            Family::FourierRandom { .. } => unreachable!("random families have no continuous parameter"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub checks: Vec<CheckId>,
    pub suite: SuiteConfig,
}

impl FamilySpec {
    pub fn new(family: Family, checks: Vec<CheckId>) -> Self {
        Self { family, checks, suite: SuiteConfig::default() }
    }

    pub fn with_suite(mut self, suite: SuiteConfig) -> Self {
        self.suite = suite;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let grid_ok = |g: &Grid| g.steps >= 1 && g.start.is_finite() && g.stop.is_finite() && g.start <= g.stop;
        match &self.family {
            Family::Ellipse { grid } if !grid_ok(grid) || grid.start <= 0.0 => {
                Err(Error::InvalidArgument("ellipse grid must be increasing and positive".into()))
            }
            Family::PerturbedDisk { grid, waves }
                if !grid_ok(grid) || *waves == 0 || grid.start <= -1.0 || grid.stop >= 1.0 =>
            {
                Err(Error::InvalidArgument("pdisk grid must lie in (-1, 1) with m >= 1".into()))
            }
            Family::FourierRandom { count, bound, .. } if *count == 0 || !(*bound > 0.0) => {
                Err(Error::InvalidArgument("fourier-random needs count >= 1 and bound > 0".into()))
            }
            _ if self.checks.is_empty() => Err(Error::InvalidArgument("no checks selected".into())),
            _ => Ok(()),
        }
    }
}

/// One member of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub index: usize,
    /// Grid value, or the sample index for random families.
    pub param: f64,
    pub spec: DomainSpec2D,
}

fn random_fourier(rng: &mut ChaCha8Rng, bound: f64) -> Result<DomainSpec2D> {
    for _ in 0..MAX_REJECTIONS {
        let mut cos = Vec::with_capacity(FOURIER_MODES);
        let mut sin = Vec::with_capacity(FOURIER_MODES);
        for _ in 0..FOURIER_MODES {
            cos.push(rng.random_range(-bound..=bound));
            sin.push(rng.random_range(-bound..=bound));
        }
        let spec = DomainSpec2D::fourier(1.0, cos, sin);
        if spec.validate().is_err() {
            continue;
        }
        let (lo, hi) = spec.radius_range();
        if lo <= MIN_RADIUS_FRACTION || hi / lo > MAX_ASPECT {
            continue;
        }
        return recenter(&spec, CenteringMode::Volume);
    }
    Err(Error::InvalidArgument(format!("no admissible random domain after {MAX_REJECTIONS} draws")))
}

/// The family members in deterministic order.
pub fn instances(fam: &FamilySpec) -> Result<Vec<Instance>> {
    fam.validate()?;
    match fam.family {
        Family::Ellipse { grid } | Family::PerturbedDisk { grid, .. } => Ok(grid
            .values()
            .into_iter()
            .enumerate()
            .map(|(index, param)| Instance { index, param, spec: fam.family.member(param) })
            .collect()),
        Family::FourierRandom { count, bound, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|index| Ok(Instance { index, param: index as f64, spec: random_fourier(&mut rng, bound)? }))
                .collect()
        }
    }
}

/// Results for one family member.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub param: f64,
    pub domain: String,
    /// Per-check outcomes, or the error that stopped the whole row.
    pub checks: core::result::Result<Vec<CheckEntry>, Error>,
}

impl SweepRow {
    pub fn report(&self, id: CheckId) -> Option<&CheckReport> {
        self.checks.as_ref().ok()?.iter().find(|e| e.id == id)?.report()
    }
}

pub fn evaluate_instance(inst: &Instance, fam: &FamilySpec) -> SweepRow {
    let checks = run_suite(&inst.spec, &fam.checks, &fam.suite).map(|r| r.checks);
    SweepRow { index: inst.index, param: inst.param, domain: inst.spec.to_string(), checks }
}

/// One row per family member, in parameter (or sample) order.
pub fn sweep(fam: &FamilySpec) -> Result<Vec<SweepRow>> {
    Ok(instances(fam)?.iter().map(|i| evaluate_instance(i, fam)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinSlack {
    pub param: f64,
    pub slack: f64,
    pub report: CheckReport,
    /// The grid slacks were not unimodal; `param` is the grid minimum.
    pub non_unimodal: bool,
    pub evaluations: usize,
}

fn slack_at(fam: &FamilySpec, check: CheckId, param: f64) -> Result<CheckReport> {
    let spec = fam.family.member(param);
    let suite = run_suite(&spec, &[check], &fam.suite)?;
    let entry = suite.checks.into_iter().next().ok_or_else(|| Error::MissingSpectrum(check.as_str().into()))?;
    entry.outcome
}

/// Locates the family member with the smallest slack for `check`: a grid
/// scan, then golden-section refinement on the bracket around the grid
/// minimum.
pub fn min_slack(fam: &FamilySpec, check: CheckId) -> Result<MinSlack> {
    let grid = match fam.family {
        Family::Ellipse { grid } | Family::PerturbedDisk { grid, .. } => grid,
        Family::FourierRandom { .. } => {
            return Err(Error::InvalidArgument("min_slack needs a one-parameter family".into()))
        }
    };
    fam.validate()?;
    let params = grid.values();
    let reports = params.iter().map(|p| slack_at(fam, check, *p)).collect::<Result<Vec<_>>>()?;
    let slacks: Vec<f64> = reports.iter().map(|r| r.slack).collect();
    let mut evaluations = slacks.len();
    let best = (0..slacks.len()).min_by(|&i, &j| slacks[i].total_cmp(&slacks[j])).unwrap();

    let scale = slacks.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let noise = 1e-9 * scale.max(f64::MIN_POSITIVE);
    let descending = slacks[..=best].windows(2).all(|w| w[1] <= w[0] + noise);
    let ascending = slacks[best..].windows(2).all(|w| w[1] >= w[0] - noise);
    if !(descending && ascending) || params.len() < 3 {
        return Ok(MinSlack {
            param: params[best],
            slack: slacks[best],
            report: reports[best].clone(),
            non_unimodal: !(descending && ascending),
            evaluations,
        });
    }

    let mut lo = params[best.saturating_sub(1)];
    let mut hi = params[(best + 1).min(params.len() - 1)];
    let ratio = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut r1 = slack_at(fam, check, x1)?;
    let mut r2 = slack_at(fam, check, x2)?;
    evaluations += 2;
    while hi - lo > GOLDEN_TOL {
        if r1.slack <= r2.slack {
            hi = x2;
            x2 = x1;
            r2 = r1;
            x1 = hi - ratio * (hi - lo);
            r1 = slack_at(fam, check, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            r1 = r2;
            x2 = lo + ratio * (hi - lo);
            r2 = slack_at(fam, check, x2)?;
        }
        evaluations += 1;
    }
    // compare the interior estimate against the bracket ends
    let mut best_param = params[best];
    let mut best_report = reports[best].clone();
    for (p, r) in [(x1, r1), (x2, r2)] {
        if r.slack < best_report.slack {
            best_param = p;
            best_report = r;
        }
    }
    let lo_end = slack_at(fam, check, lo)?;
    let hi_end = slack_at(fam, check, hi)?;
    evaluations += 2;
    for (p, r) in [(lo, lo_end), (hi, hi_end)] {
        if r.slack < best_report.slack {
            best_param = p;
            best_report = r;
        }
    }
    Ok(MinSlack { param: best_param, slack: best_report.slack, report: best_report, non_unimodal: false, evaluations })
}
