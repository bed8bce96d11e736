//! Counting functions over a census and exponential-growth fits.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::census::{CensusSnapshot, OrbitRecord};
use crate::error::{GeoError, Result};
use crate::group::{format_coset, CosetId, CosetScheme};
use crate::hyperbolic::angular_distance;

/// The set of unit vectors at the base fibre within `half_angle` of `base_angle`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    base_angle: f64,
    half_angle: f64,
}

impl SectorSpec {
    pub fn new(base_angle: f64, half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle <= PI) || !base_angle.is_finite() {
            return Err(GeoError::InvalidSector(half_angle));
        }
        Ok(Self {
            base_angle,
            half_angle,
        })
    }

    /// The whole fibre.
    pub fn full() -> Self {
        Self {
            base_angle: 0.0,
            half_angle: PI,
        }
    }

    pub fn base_angle(&self) -> f64 {
        self.base_angle
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn is_full(&self) -> bool {
        self.half_angle >= PI
    }

    /// Closed membership: vectors on the boundary count.
    pub fn contains(&self, angle: f64) -> bool {
        self.is_full() || angular_distance(angle, self.base_angle) <= self.half_angle
    }

    pub fn describe(&self) -> String {
        if self.is_full() {
            "full".into()
        } else {
            format!("J({:.6},{:.6})", self.base_angle, self.half_angle)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub grid: Vec<f64>,
    pub counts: Vec<u64>,
    pub filter: String,
}

impl CountSeries {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn count_at(&self, t: f64) -> Option<u64> {
        self.grid
            .iter()
            .position(|&g| g == t)
            .map(|i| self.counts[i])
    }
}

/// `n + 1` evenly spaced values from `start` to `end`.
pub fn uniform_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![start];
    }
    (0..=n)
        .map(|i| start + (end - start) * i as f64 / n as f64)
        .collect()
}

fn check_grid(census: &CensusSnapshot, grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| w[1] < w[0]) || grid.iter().any(|t| !t.is_finite()) {
        return Err(GeoError::InvalidArgument(
            "t grid must be finite and nondecreasing".into(),
        ));
    }
    if let Some(&max) = grid.last() {
        if max > census.radius {
            return Err(GeoError::GridExceedsCensus {
                requested: max,
                radius: census.radius,
                deficit: max - census.radius,
            });
        }
    }
    Ok(())
}

/// Staircase counts of the records passing `keep`, using the displacement order.
fn staircase<F: Fn(&OrbitRecord) -> bool>(
    census: &CensusSnapshot,
    grid: &[f64],
    keep: F,
) -> Vec<u64> {
    let mut counts = Vec::with_capacity(grid.len());
    let mut idx = 0;
    let mut acc = 0u64;
    for &t in grid {
        while idx < census.records.len() && census.records[idx].displacement <= t {
            if keep(&census.records[idx]) {
                acc += 1;
            }
            idx += 1;
        }
        counts.push(acc);
    }
    counts
}

/// `N(t)`: number of nontrivial orbit points within distance `t`.
pub fn count_arcs(census: &CensusSnapshot, grid: &[f64]) -> Result<CountSeries> {
    check_grid(census, grid)?;
    Ok(CountSeries {
        grid: grid.to_vec(),
        counts: staircase(census, grid, |_| true),
        filter: "all".into(),
    })
}

/// Loops leaving within `start` and arriving within `end`.
pub fn count_sector(
    census: &CensusSnapshot,
    start: &SectorSpec,
    end: &SectorSpec,
    grid: &[f64],
) -> Result<CountSeries> {
    check_grid(census, grid)?;
    Ok(CountSeries {
        grid: grid.to_vec(),
        counts: staircase(census, grid, |r| {
            start.contains(r.outgoing) && end.contains(r.incoming)
        }),
        filter: format!("out={} in={}", start.describe(), end.describe()),
    })
}

/// Per-coset staircases in the order of [`CosetScheme::cosets`].
pub fn count_by_coset(
    census: &CensusSnapshot,
    scheme: &CosetScheme,
    grid: &[f64],
) -> Result<Vec<(CosetId, CountSeries)>> {
    check_grid(census, grid)?;
    scheme.validate(census.genus)?;
    let genus = census.genus;
    let cosets = scheme.cosets(genus);
    let positions: Vec<usize> = census
        .records
        .iter()
        .map(|r| scheme.position(&scheme.coset_of_homology(&r.homology), genus))
        .collect();
    let mut counts = vec![vec![0u64; grid.len()]; cosets.len()];
    let mut acc = vec![0u64; cosets.len()];
    let mut idx = 0;
    for (gi, &t) in grid.iter().enumerate() {
        while idx < census.records.len() && census.records[idx].displacement <= t {
            acc[positions[idx]] += 1;
            idx += 1;
        }
        for (c, row) in counts.iter_mut().enumerate() {
            row[gi] = acc[c];
        }
    }
    Ok(cosets
        .into_iter()
        .zip(counts)
        .map(|(id, counts)| {
            let filter = format!("coset {} {}", scheme.describe(), format_coset(&id));
            (
                id,
                CountSeries {
                    grid: grid.to_vec(),
                    counts,
                    filter,
                },
            )
        })
        .collect())
}

/// Share of each coset among loops of length `≤ t`; `None` when there are none.
pub fn coset_shares(
    census: &CensusSnapshot,
    scheme: &CosetScheme,
    t: f64,
) -> Result<Option<Vec<f64>>> {
    let series = count_by_coset(census, scheme, &[t])?;
    let total: u64 = series.iter().map(|(_, s)| s.counts[0]).sum();
    if total == 0 {
        return Ok(None);
    }
    Ok(Some(
        series
            .iter()
            .map(|(_, s)| s.counts[0] as f64 / total as f64)
            .collect(),
    ))
}

/// Proportion of loops whose lift closes in the cover defined by `scheme`.
pub fn cover_lift_proportion(
    census: &CensusSnapshot,
    scheme: &CosetScheme,
    grid: &[f64],
) -> Result<Vec<Option<f64>>> {
    let by_coset = count_by_coset(census, scheme, grid)?;
    Ok((0..grid.len())
        .map(|i| {
            let total: u64 = by_coset.iter().map(|(_, s)| s.counts[i]).sum();
            (total > 0).then(|| by_coset[0].1.counts[i] as f64 / total as f64)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub h_estimate: f64,
    pub a_estimate: f64,
    pub window: (f64, f64),
    pub residual: f64,
    pub points: usize,
    /// Percentile band for `a` from the residual bootstrap, when computed.
    pub a_band: Option<(f64, f64)>,
}

fn window_points(series: &CountSeries, window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = window;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(GeoError::DegenerateWindow(format!("[{lo}, {hi}]")));
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &c) in series.grid.iter().zip(&series.counts) {
        if t >= lo && t <= hi {
            if c == 0 {
                return Err(GeoError::DegenerateWindow(format!("zero count at t = {t}")));
            }
            ts.push(t);
            ys.push((c as f64).ln());
        }
    }
    if ts.len() < 5 {
        return Err(GeoError::DegenerateWindow(format!(
            "{} grid points in [{lo}, {hi}], need at least 5",
            ts.len()
        )));
    }
    Ok((ts, ys))
}

/// Least-squares line `y = c + h t`; returns `(h, c)`.
fn least_squares(ts: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    let h = sxy / sxx;
    (h, my - h * mt)
}

/// Fits `count ≈ a·e^{h t}` on the grid points inside `window`.
///
/// `h` is the least-squares slope of `log count`; `a` is the geometric mean of
/// `count·e^{−h t}`, which coincides with the exponential of the intercept.
pub fn fit_asymptotics(series: &CountSeries, window: (f64, f64)) -> Result<AsymptoticFit> {
    let (ts, ys) = window_points(series, window)?;
    let (h, c) = least_squares(&ts, &ys);
    if h.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(GeoError::DegenerateWindow(format!(
            "fitted growth rate {h} is not positive"
        )));
    }
    let log_a = ts.iter().zip(&ys).map(|(t, y)| y - h * t).sum::<f64>() / ts.len() as f64;
    let residual = (ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| (y - c - h * t).powi(2))
        .sum::<f64>()
        / ts.len() as f64)
        .sqrt();
    Ok(AsymptoticFit {
        h_estimate: h,
        a_estimate: log_a.exp(),
        window,
        residual,
        points: ts.len(),
        a_band: None,
    })
}

pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// Fit plus a 95% percentile band for `a` from resampling log-scale residuals
/// with replacement.
pub fn fit_with_bootstrap(
    series: &CountSeries,
    window: (f64, f64),
    resamples: usize,
    seed: u64,
) -> Result<AsymptoticFit> {
    let mut fit = fit_asymptotics(series, window)?;
    let (ts, ys) = window_points(series, window)?;
    let (h, c) = least_squares(&ts, &ys);
    let residuals: Vec<f64> = ts.iter().zip(&ys).map(|(t, y)| y - c - h * t).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut estimates: Vec<f64> = (0..resamples)
        .map(|_| {
            let yb: Vec<f64> = ts
                .iter()
                .map(|t| c + h * t + residuals[rng.random_range(0..residuals.len())])
                .collect();
            let (_, cb) = least_squares(&ts, &yb);
            cb.exp()
        })
        .collect();
    estimates.sort_by(f64::total_cmp);
    if !estimates.is_empty() {
        let pick = |q: f64| estimates[((q * (estimates.len() - 1) as f64).round()) as usize];
        fit.a_band = Some((pick(0.025), pick(0.975)));
    }
    Ok(fit)
}

/// One row of a sector-constant table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub start: SectorSpec,
    pub end: SectorSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub row: ProfileRow,
    pub count: u64,
    /// `count·e^{−t}` (the entropy is 1 in curvature −1).
    pub a_estimate: f64,
    /// `a_estimate / (θ θ′)`.
    pub normalized: f64,
}

pub fn sector_constant_profile(
    census: &CensusSnapshot,
    rows: &[ProfileRow],
    t: f64,
) -> Result<Vec<ProfileEntry>> {
    rows.iter()
        .map(|row| {
            let s = count_sector(census, &row.start, &row.end, &[t])?;
            let count = s.counts[0];
            let a = count as f64 * (-t).exp();
            Ok(ProfileEntry {
                row: *row,
                count,
                a_estimate: a,
                normalized: a / (row.start.half_angle() * row.end.half_angle()),
            })
        })
        .collect()
}

/// Writes series as long-format CSV rows `t,count,filter`.
pub fn write_series_csv<W: Write>(
    series: &[CountSeries],
    out: W,
    comments: &[String],
) -> std::io::Result<()> {
    let mut out = out;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "count", "filter"])?;
    for s in series {
        for (t, c) in s.grid.iter().zip(&s.counts) {
            w.write_record([format!("{t:.6}"), c.to_string(), s.filter.clone()])?;
        }
    }
    w.flush()
}

/// Two-column whitespace-separated `t count` data for external plotting.
pub fn write_plot_data<W: Write>(series: &CountSeries, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# {}", series.filter)?;
    for (t, c) in series.grid.iter().zip(&series.counts) {
        writeln!(out, "{t:.6} {c}")?;
    }
    Ok(())
}
