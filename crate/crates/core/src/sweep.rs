//! Exhaustive enumeration of the strategy-mixture simplex on a regular grid
//! and the geometry of the classical region in the `(F2, F3)` plane.
//!
//! Grid points are exact integer compositions of `p` scaled by `1/p` at
//! emission, so the simplex-sum invariant never drifts. The classical region
//! is the triangle with vertices `(F3, F2) = (0, 1/2), (1, 0), (1, 1)`;
//! distances to it are computed analytically, with the grid sweep serving as
//! a consistency check.

use crate::error::{Error, Result};
use crate::quantum::FactsTriple;
use crate::strategies::{classical_inequality, facts_of_mixture, MixturePoint};

/// Optional restriction of the sweep to one face of the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneRestriction {
    AlphaZero,
    BetaZero,
    GammaZero,
    DeltaZero,
}

impl PlaneRestriction {
    pub fn label(self) -> &'static str {
        match self {
            PlaneRestriction::AlphaZero => "alpha=0",
            PlaneRestriction::BetaZero => "beta=0",
            PlaneRestriction::GammaZero => "gamma=0",
            PlaneRestriction::DeltaZero => "delta=0",
        }
    }
}

/// Resolution and optional plane restriction of a simplex sweep. `p` is the
/// inverse step, so the grid spacing is `Δp = 1/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub p: u32,
    pub restriction: Option<PlaneRestriction>,
}

impl GridSpec {
    pub fn new(p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidResolution);
        }
        Ok(Self { p, restriction: None })
    }

    pub fn restricted(p: u32, restriction: PlaneRestriction) -> Result<Self> {
        Ok(Self { restriction: Some(restriction), ..Self::new(p)? })
    }

    /// Grid spacing `1/p`.
    pub fn step(self) -> f64 {
        1.0 / self.p as f64
    }

    /// Number of grid points: `C(p+3, 3)` for the full simplex, `C(p+2, 2)`
    /// on a restricting plane.
    pub fn point_count(self) -> u64 {
        let p = self.p as u64;
        match self.restriction {
            None => (p + 1) * (p + 2) * (p + 3) / 6,
            Some(_) => (p + 1) * (p + 2) / 2,
        }
    }
}

/// Every mixture on the grid, in ascending lexicographic order of the integer
/// composition `(a, b, c)` with `d` implied.
pub fn simplex_grid(spec: GridSpec) -> Result<impl Iterator<Item = MixturePoint>> {
    if spec.p == 0 {
        return Err(Error::InvalidResolution);
    }
    let p = spec.p;
    let restriction = spec.restriction;
    let scale = move |k: u32| k as f64 / p as f64;

    // The full grid walks three free indices; a restricted grid walks two.
    let mut x = 0u32;
    let mut y = 0u32;
    let mut z = 0u32;
    let mut exhausted = false;

    Ok(std::iter::from_fn(move || {
        if exhausted {
            return None;
        }
        let composition = match restriction {
            None => [x, y, z, p - x - y - z],
            Some(PlaneRestriction::AlphaZero) => [0, x, y, p - x - y],
            Some(PlaneRestriction::BetaZero) => [x, 0, y, p - x - y],
            Some(PlaneRestriction::GammaZero) => [x, y, 0, p - x - y],
            Some(PlaneRestriction::DeltaZero) => [x, y, p - x - y, 0],
        };
        let point = MixturePoint::new(
            scale(composition[0]),
            scale(composition[1]),
            scale(composition[2]),
            scale(composition[3]),
        )
        .expect("grid point is a valid mixture");

        if restriction.is_none() && z < p - x - y {
            z += 1;
        } else if y < p - x {
            y += 1;
            z = 0;
        } else if x < p {
            x += 1;
            y = 0;
            z = 0;
        } else {
            exhausted = true;
        }
        Some(point)
    }))
}

/// One grid point mapped into facts space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub mixture: MixturePoint,
    pub facts: FactsTriple,
    /// Signed classical-inequality margin `F3 − |2 F2 − 1|`.
    pub margin: f64,
}

/// Maps every grid point into facts space, preserving grid order.
pub fn sweep_facts(spec: GridSpec) -> Result<Vec<SweepRecord>> {
    Ok(simplex_grid(spec)?
        .map(|mixture| {
            let facts = facts_of_mixture(&mixture);
            let margin = classical_inequality(facts.f2, facts.f3).margin;
            SweepRecord { mixture, facts, margin }
        })
        .collect())
}

/// Location of a facts target relative to the classical region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionReport {
    pub target: FactsTriple,
    /// Whether the target's `F1` equals the protocol-enforced value 1.
    pub f1_is_unit: bool,
    /// Whether `(F2, F3)` satisfies the classical inequality.
    pub inside: bool,
    pub inequality_margin: f64,
    /// Exact distance from the target to the classical triangle in the
    /// `(F2, F3)` plane; zero inside.
    pub euclidean_distance: f64,
    /// Smallest distance from the target to any sweep record, as a grid
    /// consistency check. At grid spacing `Δp` it can undershoot the exact
    /// distance by at most `Δp`.
    pub sweep_min_distance: f64,
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (apx, apy) = (p.0 - a.0, p.1 - a.1);
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let t = ((apx * abx + apy * aby) / (abx * abx + aby * aby)).clamp(0.0, 1.0);
    let (dx, dy) = (p.0 - (a.0 + t * abx), p.1 - (a.1 + t * aby));
    (dx * dx + dy * dy).sqrt()
}

/// Distance from `(f2, f3)` to the classical triangle boundary; callers
/// handle the inside case.
fn distance_to_region(f2: f64, f3: f64) -> f64 {
    // Vertices in (F3, F2) coordinates.
    let apex = (0.0, 0.5);
    let low = (1.0, 0.0);
    let high = (1.0, 1.0);
    let p = (f3, f2);
    point_segment_distance(p, apex, high)
        .min(point_segment_distance(p, apex, low))
        .min(point_segment_distance(p, low, high))
}

/// Locates a facts target relative to the classical region: analytically via
/// the inequality and triangle geometry, plus the grid sweep cross-check.
pub fn region_report(target: FactsTriple, spec: GridSpec) -> Result<RegionReport> {
    let check = classical_inequality(target.f2, target.f3);
    let euclidean_distance =
        if check.satisfied { 0.0 } else { distance_to_region(target.f2, target.f3) };

    let mut sweep_min_distance = f64::INFINITY;
    for record in sweep_facts(spec)? {
        let d = ((record.facts.f2 - target.f2).powi(2)
            + (record.facts.f3 - target.f3).powi(2))
        .sqrt();
        sweep_min_distance = sweep_min_distance.min(d);
    }

    Ok(RegionReport {
        target,
        f1_is_unit: (target.f1 - 1.0).abs() <= 1e-9,
        inside: check.satisfied,
        inequality_margin: check.margin,
        euclidean_distance,
        sweep_min_distance,
    })
}
