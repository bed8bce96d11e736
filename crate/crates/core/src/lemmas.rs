//! Empirical checks of the inclusion and scaling lemmas over a census.
//!
//! Loops correspond to census records: the loop for `γ` leaves 0 in the
//! outgoing direction and returns in the incoming direction. `Γ_{θ,θ′}(t)`
//! collects loops leaving within `θ′` of `v₀′` and returning within `θ` of
//! `v₀` with length near `t`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    box_reach, flows_into, gamma_star_alpha_membership, gamma_star_membership, gamma_t_membership,
    hopf_inverse, mu_bar, ps_measure, sampled_box_intersection, theta_one, BoxParameters, FlowBox,
    HopfCoordinate,
};
use crate::census::{CensusSnapshot, OrbitRecord};
use crate::error::{GeoError, Result};
use crate::hyperbolic::{angular_distance, BoundaryArc, MoebiusMap, ARC_TOL};
use crate::stats::uniform_grid;

/// `t` values checked by default: 4 to 12 in steps of 1/2.
pub fn default_t_list() -> Vec<f64> {
    uniform_grid(4.0, 12.0, 16)
}

/// Window over which the inclusion lemmas must hold without violations.
pub const CHECK_WINDOW: (f64, f64) = (10.0, 12.0);

const REACH_SAMPLES: usize = 9;
const REACH_SAFETY: f64 = 0.05;

fn in_sector(angle: f64, base: f64, half: f64) -> bool {
    angular_distance(angle, base) <= half + ARC_TOL
}

/// Records that can belong to `Γ(t)` for these parameters: the 1-Lipschitz
/// bound gives `d ≥ t − α`, and the box reaches bound `d` from above.
fn candidates<'a>(
    census: &'a CensusSnapshot,
    t: f64,
    params: &BoxParameters,
    upper_margin: f64,
) -> Result<&'a [OrbitRecord]> {
    let hi = t + upper_margin;
    if hi > census.radius {
        return Err(GeoError::GridExceedsCensus {
            requested: hi,
            radius: census.radius,
            deficit: hi - census.radius,
        });
    }
    let recs = &census.records;
    let lo = recs.partition_point(|r| r.displacement < t - params.alpha - 1e-9);
    let end = recs.partition_point(|r| r.displacement <= hi);
    Ok(&recs[lo..end])
}

/// Upper displacement margin for `Γ(t)`: base points of the leading box and
/// of the target box lie within this distance of 0 combined.
pub fn displacement_margin(params: &BoxParameters) -> f64 {
    let reach = |b: FlowBox| box_reach(&b.past, &b.future, (0.0, b.length), REACH_SAMPLES);
    reach(params.leading_box()) + reach(params.target_box()) + REACH_SAFETY
}

/// The census radius needed to check `t_max`.
pub fn required_radius(params: &BoxParameters, t_max: f64) -> f64 {
    t_max + displacement_margin(params)
}

fn transition(rows: &[(f64, u64)]) -> Option<f64> {
    let mut t0 = None;
    for &(t, v) in rows.iter().rev() {
        if v > 0 {
            break;
        }
        t0 = Some(t);
    }
    t0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionRow {
    pub t: f64,
    pub candidates: usize,
    /// `|Γ_{ρ,ρ′}(t)|`, members of it missing from `Γ*_{θ,θ′}(t)`.
    pub vis1_subset: usize,
    pub vis1_violations: u64,
    /// Sector loops with length in `[t − α, t]`, and those missing from `Γ_{θ,θ′}(t)`.
    pub vis2_loops: usize,
    pub vis2_violations: u64,
    /// `|Γ_{θ,ρ′}(t)|` and members whose loop leaves the `θ′`/`θ` sectors or
    /// whose length is outside `[t − 2ε, t + 2ε]`.
    pub vis3_members: usize,
    pub vis3_violations: u64,
    pub vis3_max_excess: Option<f64>,
    pub vis3_within_four_eps: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub params: BoxParameters,
    pub rho: f64,
    pub rho_prime: f64,
    /// Whether `ρ < θ` and `ρ′ < θ′`.
    pub nested: bool,
    pub theta_one: f64,
    pub diameter_condition: bool,
    pub displacement_margin: f64,
    pub rows: Vec<InclusionRow>,
    pub t0_vis1: Option<f64>,
    pub t0_vis2: Option<f64>,
    pub t0_vis3: Option<f64>,
    pub window: (f64, f64),
    pub window_violations: u64,
    /// Total membership of the three sets inside the window; zero means the
    /// check was vacuous.
    pub window_members: usize,
    pub pass: bool,
}

pub fn verify_inclusion_lemmas(
    census: &CensusSnapshot,
    params: &BoxParameters,
    rho: f64,
    rho_prime: f64,
    t_list: &[f64],
) -> Result<InclusionReport> {
    params.validate()?;
    // ρ ≥ θ is allowed and reported; the inclusions are then expected to fail.
    let nested = rho < params.theta && rho_prime < params.theta_prime;
    let small = params.with_angles(rho, rho_prime)?;
    let mixed = params.with_angles(params.theta, rho_prime)?;
    let margin = displacement_margin(params);
    let eps = params.epsilon;
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let cands = candidates(census, t, params, margin)?;
        let mut row = InclusionRow {
            t,
            candidates: cands.len(),
            vis1_subset: 0,
            vis1_violations: 0,
            vis2_loops: 0,
            vis2_violations: 0,
            vis3_members: 0,
            vis3_violations: 0,
            vis3_max_excess: None,
            vis3_within_four_eps: true,
        };
        for r in cands {
            let g = &r.map;
            if gamma_t_membership(g, t, &small) {
                row.vis1_subset += 1;
                if !gamma_star_membership(g, t, params) {
                    row.vis1_violations += 1;
                }
            }
            let sector_loop = in_sector(r.outgoing, params.base_prime, params.theta_prime)
                && in_sector(r.incoming, params.base, params.theta);
            if sector_loop && r.displacement >= t - params.alpha && r.displacement <= t {
                row.vis2_loops += 1;
                if !gamma_t_membership(g, t, params) {
                    row.vis2_violations += 1;
                }
            }
            if gamma_t_membership(g, t, &mixed) {
                row.vis3_members += 1;
                let excess = r.displacement - t;
                row.vis3_max_excess = Some(row.vis3_max_excess.map_or(excess, |m| m.max(excess)));
                if excess > 4.0 * eps {
                    row.vis3_within_four_eps = false;
                }
                if !sector_loop || excess.abs() > 2.0 * eps {
                    row.vis3_violations += 1;
                }
            }
        }
        rows.push(row);
    }
    let series = |f: fn(&InclusionRow) -> u64| -> Vec<(f64, u64)> {
        rows.iter().map(|r| (r.t, f(r))).collect()
    };
    let in_window = |r: &&InclusionRow| r.t >= CHECK_WINDOW.0 && r.t <= CHECK_WINDOW.1;
    let window_violations = rows
        .iter()
        .filter(in_window)
        .map(|r| r.vis1_violations + r.vis2_violations + r.vis3_violations)
        .sum();
    let window_members = rows
        .iter()
        .filter(in_window)
        .map(|r| r.vis1_subset + r.vis2_loops + r.vis3_members)
        .sum();
    Ok(InclusionReport {
        params: *params,
        rho,
        rho_prime,
        nested,
        theta_one: theta_one(eps),
        diameter_condition: params.satisfies_diameter_condition(),
        displacement_margin: margin,
        t0_vis1: transition(&series(|r| r.vis1_violations)),
        t0_vis2: transition(&series(|r| r.vis2_violations)),
        t0_vis3: transition(&series(|r| r.vis3_violations)),
        rows,
        window: CHECK_WINDOW,
        window_violations,
        window_members,
        pass: window_violations == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub t: f64,
    pub gamma_t: usize,
    pub gamma_star: usize,
    pub gamma_star_alpha: usize,
    /// Extremes of `m̄(S^γ) / (ε² e^{−t} μ(P′) μ(F))` over `Γ*`.
    pub box_ratio_range: Option<(f64, f64)>,
    /// Extremes of `μ(γF) / (e^{−d(0,γ0)} μ(F))` over `Γ*`.
    pub mass_ratio_range: Option<(f64, f64)>,
    pub out_of_bounds: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullBranchReport {
    pub elements: usize,
    pub samples: usize,
    pub inside: usize,
    pub disagreements: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub params: BoxParameters,
    pub bound: (f64, f64),
    pub rows: Vec<ScalingRow>,
    pub full_branch: FullBranchReport,
    pub out_of_bounds: u64,
    pub inconclusive: bool,
    pub pass: bool,
}

fn widen(range: Option<(f64, f64)>, v: f64) -> Option<(f64, f64)> {
    Some(range.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))))
}

/// For `γ ∈ Γ*`, compares `m̄(S^γ) = ε² μ̄(P′ × γF)` and `μ(γF)` with their
/// predicted sizes, and checks by flowing sampled vectors that
/// `B′ ∩ φ^{−(t+2ε^{3/2})} γ_* B^{α+4ε^{3/2}}` equals `S^γ`.
pub fn verify_scaling_lemma(
    census: &CensusSnapshot,
    params: &BoxParameters,
    t_list: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ScalingReport> {
    params.validate()?;
    let eps = params.epsilon;
    let bound = ((-5.0 * eps).exp(), (5.0 * eps).exp());
    let arcs = params.arcs();
    let (mu_p_prime, mu_f) = (ps_measure(&arcs.p_prime), ps_measure(&arcs.f));
    let margin = displacement_margin(params);
    let mut rows = Vec::with_capacity(t_list.len());
    let mut branch_elements: Vec<(f64, MoebiusMap)> = Vec::new();
    let mut out_of_bounds = 0;
    for &t in t_list {
        let mut row = ScalingRow {
            t,
            gamma_t: 0,
            gamma_star: 0,
            gamma_star_alpha: 0,
            box_ratio_range: None,
            mass_ratio_range: None,
            out_of_bounds: 0,
        };
        for r in candidates(census, t, params, margin)? {
            let g = &r.map;
            if !gamma_t_membership(g, t, params) {
                continue;
            }
            row.gamma_t += 1;
            if !gamma_star_membership(g, t, params) {
                continue;
            }
            row.gamma_star += 1;
            let gf = arcs.f.image(g);
            let m = eps * eps * mu_bar(&arcs.p_prime, &gf)?;
            let box_ratio = m / (eps * eps * (-t).exp() * mu_p_prime * mu_f);
            let mass_ratio = ps_measure(&gf) / ((-r.displacement).exp() * mu_f);
            row.box_ratio_range = widen(row.box_ratio_range, box_ratio);
            row.mass_ratio_range = widen(row.mass_ratio_range, mass_ratio);
            for v in [box_ratio, mass_ratio] {
                if !(v >= bound.0 && v <= bound.1) {
                    row.out_of_bounds += 1;
                }
            }
            if gamma_star_alpha_membership(g, t, params) {
                row.gamma_star_alpha += 1;
                branch_elements.push((t, *g));
            }
        }
        out_of_bounds += row.out_of_bounds;
        rows.push(row);
    }
    let full_branch = full_branch_check(params, &branch_elements, samples, seed)?;
    let inconclusive = rows.iter().all(|r| r.gamma_star == 0);
    Ok(ScalingReport {
        params: *params,
        bound,
        rows,
        pass: !inconclusive && out_of_bounds == 0 && full_branch.disagreements == 0,
        full_branch,
        out_of_bounds,
        inconclusive,
    })
}

fn full_branch_check(
    params: &BoxParameters,
    elements: &[(f64, MoebiusMap)],
    samples: usize,
    seed: u64,
) -> Result<FullBranchReport> {
    let mut report = FullBranchReport {
        elements: elements.len(),
        samples: 0,
        inside: 0,
        disagreements: 0,
    };
    if elements.is_empty() {
        return Ok(report);
    }
    let eps = params.epsilon;
    let e32 = eps.powf(1.5);
    let arcs = params.arcs();
    let lead = params.leading_box();
    let target = FlowBox::new(arcs.p, arcs.f, params.alpha + 4.0 * e32)?;
    let s_len = eps * eps;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let (t, g) = &elements[k % elements.len()];
        let gf = arcs.f.image(g);
        // Half the samples from S^γ, half from a neighbourhood of it.
        let (xi_arc, eta_arc, s_range) = if k % 2 == 0 {
            (arcs.p_prime, gf, (0.0, s_len))
        } else {
            (
                BoundaryArc::new(arcs.p_prime.center(), 1.5 * arcs.p_prime.half_width())?,
                BoundaryArc::new(
                    gf.center(),
                    (3.0 * gf.half_width()).min(arcs.f_prime.half_width()),
                )?,
                (-0.5 * s_len, 1.5 * s_len),
            )
        };
        let hc = HopfCoordinate {
            past: xi_arc.point_at(rng.random::<f64>()),
            future: eta_arc.point_at(rng.random::<f64>()),
            s: rng.random_range(s_range.0..s_range.1),
        };
        let in_s = arcs.p_prime.contains(&hc.past)
            && gf.contains(&hc.future)
            && (0.0..=s_len).contains(&hc.s);
        let w = hopf_inverse(&hc)?;
        let in_lhs = lead.contains_tangent(&w) && flows_into(&w, t + 2.0 * e32, g, &target);
        report.samples += 1;
        report.inside += in_s as usize;
        if in_s != in_lhs {
            report.disagreements += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub t: f64,
    pub checked: usize,
    pub members: usize,
    pub disagreements: u64,
}

/// Compares the s-interval criterion with [`sampled_box_intersection`] on up
/// to `n` candidates at `t`: every member of `Γ(t)` first, then a seeded
/// sample of non-members.
pub fn gamma_t_oracle_agreement(
    census: &CensusSnapshot,
    params: &BoxParameters,
    t: f64,
    n: usize,
    seed: u64,
) -> Result<OracleReport> {
    params.validate()?;
    let cands = candidates(census, t, params, displacement_margin(params))?;
    let (members, mut others): (Vec<&OrbitRecord>, Vec<&OrbitRecord>) = cands
        .iter()
        .partition(|r| gamma_t_membership(&r.map, t, params));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fill = n.saturating_sub(members.len()).min(others.len());
    for k in 0..fill {
        let j = rng.random_range(k..others.len());
        others.swap(k, j);
    }
    let mut report = OracleReport {
        t,
        checked: 0,
        members: 0,
        disagreements: 0,
    };
    let (lead, target) = (params.leading_box(), params.target_box());
    for r in members.iter().take(n).chain(&others[..fill]) {
        let criterion = gamma_t_membership(&r.map, t, params);
        let sampled = sampled_box_intersection(&r.map, t, &lead, &target, ORACLE_SAMPLES);
        report.checked += 1;
        report.members += criterion as usize;
        if criterion != sampled {
            report.disagreements += 1;
        }
    }
    Ok(report)
}

const ORACLE_SAMPLES: usize = 64;
