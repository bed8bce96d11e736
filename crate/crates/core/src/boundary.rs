//! Boundary dynamics at the basepoint 0: Hopf coordinates, the
//! Patterson–Sullivan density, the Bowen–Margulis pair measure and the
//! flow boxes used by the counting argument.
//!
//! In curvature −1 with basepoint 0 the PS measure `μ₀` is normalized
//! angular measure and the critical exponent is 1. A flow box is
//! `H⁻¹(P × F × [0, ℓ])`. Membership of `γ` in `Γ(t)` is decided by the
//! s-interval criterion: with the leading box `(P′, F′, ε²)` and target box
//! `(P, F, α)`, `γ ∈ Γ(t)` iff `P′ ∩ γP` and `F′ ∩ γF` are nonempty and some
//! `ξ ∈ P′ ∩ γP` has `b^γ_ξ − t ∈ [−α, ε²]`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::hyperbolic::{
    angular_distance, busemann, canonical_angle, geodesic_endpoints, geodesic_flow, horocycle_gap,
    hyp_distance, tangent_on_geodesic, BoundaryArc, BoundaryPoint, MoebiusMap, UnitTangent,
};
use crate::quadrature::{
    adaptive_simpson, adaptive_simpson_2d, composite_simpson, composite_simpson_2d, QUAD_TOL,
};
use crate::stats::SectorSpec;

/// Critical exponent of the surface group in curvature −1.
pub const PS_EXPONENT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfCoordinate {
    pub past: BoundaryPoint,
    pub future: BoundaryPoint,
    pub s: f64,
}

/// `H(v) = (v⁻, v⁺, b(π v, v⁻))`.
pub fn hopf_forward(v: &UnitTangent) -> Result<HopfCoordinate> {
    let (past, future) = geodesic_endpoints(v);
    if past.distance(&future) < 1e-14 {
        return Err(GeoError::DegenerateGeodesic);
    }
    Ok(HopfCoordinate {
        past,
        future,
        s: busemann(&v.base(), &past),
    })
}

pub fn hopf_inverse(hc: &HopfCoordinate) -> Result<UnitTangent> {
    let w = tangent_on_geodesic(&hc.past, &hc.future)?;
    let s0 = busemann(&w.base(), &hc.past);
    Ok(geodesic_flow(&w, hc.s - s0))
}

/// `(F, P)`: forward and backward endpoints of the radial geodesics through
/// the sector at 0.
pub fn future_past_arcs(spec: &SectorSpec) -> (BoundaryArc, BoundaryArc) {
    let theta = spec.half_angle();
    let f = BoundaryArc::new(BoundaryPoint::new(spec.base_angle()), theta)
        .expect("sector half-angle is in (0, π]");
    let p = BoundaryArc::new(BoundaryPoint::new(spec.base_angle() + PI), theta)
        .expect("sector half-angle is in (0, π]");
    (f, p)
}

/// `μ₀(A)` = angular width / 2π.
pub fn ps_measure(arc: &BoundaryArc) -> f64 {
    arc.length() / TAU
}

/// Radon–Nikodym derivative `dμ_{γ0}/dμ₀(ξ) = e^{−b(γ0, ξ)}`.
pub fn ps_density(gamma: &MoebiusMap, xi: &BoundaryPoint) -> f64 {
    (-PS_EXPONENT * busemann(&gamma.orbit_point(), xi)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsTransformCheck {
    /// `μ₀(γ⁻¹A)` from the endpoints of the image arc.
    pub image_mass: f64,
    /// `∫_A e^{−b(γ0, ξ)} dμ₀(ξ)` by adaptive quadrature.
    pub quadrature: f64,
    pub relative_error: f64,
}

/// Checks `μ₀(γ⁻¹A) = ∫_A e^{−b(γ0, ξ)} dμ₀(ξ)`.
pub fn ps_transform_check(gamma: &MoebiusMap, arc: &BoundaryArc) -> PsTransformCheck {
    let image_mass = ps_measure(&arc.image(&gamma.inverse()));
    let z = gamma.orbit_point();
    let start = arc.center().angle() - arc.half_width();
    let density = |a: f64| (-PS_EXPONENT * busemann(&z, &BoundaryPoint::new(a))).exp() / TAU;
    let rough = composite_simpson(&density, start, start + arc.length(), 8);
    let tol = (QUAD_TOL * 1e-3 * rough.abs()).max(1e-300);
    let quadrature = adaptive_simpson(&density, start, start + arc.length(), tol);
    PsTransformCheck {
        image_mass,
        quadrature,
        relative_error: (image_mass - quadrature).abs() / image_mass.abs().max(1e-300),
    }
}

fn check_disjoint(p: &BoundaryArc, f: &BoundaryArc) -> Result<()> {
    if p.is_full() || f.is_full() || !p.is_disjoint(f) {
        return Err(GeoError::OverlappingArcs);
    }
    Ok(())
}

fn pair_density(x: f64, y: f64) -> f64 {
    let gap = horocycle_gap(&BoundaryPoint::new(x), &BoundaryPoint::new(y))
        .expect("disjoint arcs never share a point");
    (PS_EXPONENT * gap).exp() / (TAU * TAU)
}

/// `μ̄(P × F) = ∫_P ∫_F e^{β(ξ,η)} dμ₀(ξ) dμ₀(η)` for disjoint arcs.
pub fn mu_bar(p: &BoundaryArc, f: &BoundaryArc) -> Result<f64> {
    check_disjoint(p, f)?;
    let (ps, fs) = (p.start(), f.start());
    let (xs, ys) = ((ps, ps + p.length()), (fs, fs + f.length()));
    // Tiny image arcs carry tiny mass, so the tolerance is relative.
    let rough = composite_simpson_2d(&pair_density, xs, ys, 4);
    let tol = (QUAD_TOL * 1e-2)
        .min(QUAD_TOL * 1e-2 * rough.abs())
        .max(1e-300);
    Ok(adaptive_simpson_2d(&pair_density, xs, ys, tol))
}

/// Fixed `n × n` composite Simpson version of [`mu_bar`], for self-convergence checks.
pub fn mu_bar_fixed(p: &BoundaryArc, f: &BoundaryArc, n: usize) -> Result<f64> {
    check_disjoint(p, f)?;
    let (ps, fs) = (p.start(), f.start());
    Ok(composite_simpson_2d(
        &pair_density,
        (ps, ps + p.length()),
        (fs, fs + f.length()),
        n,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowBox {
    pub past: BoundaryArc,
    pub future: BoundaryArc,
    pub length: f64,
}

impl FlowBox {
    pub fn new(past: BoundaryArc, future: BoundaryArc, length: f64) -> Result<Self> {
        check_disjoint(&past, &future)?;
        if !(length >= 0.0 && length.is_finite()) {
            return Err(GeoError::InvalidBox(format!(
                "box length {length} is negative"
            )));
        }
        Ok(Self {
            past,
            future,
            length,
        })
    }

    /// Hopf-coordinate membership; boundary points count.
    pub fn contains(&self, hc: &HopfCoordinate) -> bool {
        self.past.contains(&hc.past)
            && self.future.contains(&hc.future)
            && hc.s >= -1e-12
            && hc.s <= self.length + 1e-12
    }

    pub fn contains_tangent(&self, v: &UnitTangent) -> bool {
        hopf_forward(v).is_ok_and(|hc| self.contains(&hc))
    }
}

/// `m̄(B) = μ̄(P × F) · ℓ`.
pub fn box_mass(b: &FlowBox) -> Result<f64> {
    Ok(mu_bar(&b.past, &b.future)? * b.length)
}

/// `b^γ_ξ = b_ξ(γ0, 0)`.
pub fn b_gamma(xi: &BoundaryPoint, gamma: &MoebiusMap) -> f64 {
    busemann(&gamma.orbit_point(), xi)
}

/// Range of `ξ ↦ b^γ_ξ` over a closed arc. The function is extremal at the
/// boundary directions of `γ0` and its antipode, so endpoints and those two
/// points suffice.
pub fn b_gamma_range(arc: &BoundaryArc, gamma: &MoebiusMap) -> (f64, f64) {
    let z = gamma.orbit_point();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut visit = |a: f64| {
        let b = busemann(&z, &BoundaryPoint::new(a));
        lo = lo.min(b);
        hi = hi.max(b);
    };
    visit(arc.start());
    visit(arc.end());
    if !z.is_origin() {
        for a in [z.arg(), z.arg() + PI] {
            if arc.contains_angle(a) {
                visit(a);
            }
        }
    }
    (lo, hi)
}

/// Flow-box scales and the two base directions `v₀` (target box) and `v₀′`
/// (leading box).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxParameters {
    pub epsilon: f64,
    pub alpha: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub base: f64,
    pub base_prime: f64,
}

pub const DEFAULT_EPSILON: f64 = 0.1;

impl BoxParameters {
    pub fn new(
        epsilon: f64,
        alpha: f64,
        theta: f64,
        theta_prime: f64,
        base: f64,
        base_prime: f64,
    ) -> Result<Self> {
        let p = Self {
            epsilon,
            alpha,
            theta,
            theta_prime,
            base,
            base_prime,
        };
        p.validate()?;
        Ok(p)
    }

    /// `ε = 0.1`, `α = 3ε/2`, `θ = θ′ = 0.9 θ₁(ε)`, both base directions 0.
    pub fn defaults() -> Self {
        let eps = DEFAULT_EPSILON;
        let th = 0.9 * theta_one(eps);
        Self {
            epsilon: eps,
            alpha: 1.5 * eps,
            theta: th,
            theta_prime: th,
            base: 0.0,
            base_prime: 0.0,
        }
    }

    /// Wide sectors `θ = θ′ = 0.2` with the default `ε`, `α`. These violate the
    /// diameter condition but make the `Γ` sets nonempty at census radii.
    pub fn wide() -> Self {
        Self {
            theta: 0.2,
            theta_prime: 0.2,
            ..Self::defaults()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GeoError::InvalidBox(m));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon {} must be positive", self.epsilon));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.5 * self.epsilon + 1e-15) {
            return bad(format!("alpha {} must lie in (0, 3·epsilon/2]", self.alpha));
        }
        for (name, th) in [("theta", self.theta), ("theta_prime", self.theta_prime)] {
            if !(th > 0.0 && th < FRAC_PI_2) {
                return bad(format!(
                    "{name} {th} must lie in (0, π/2) so P and F are disjoint"
                ));
            }
        }
        if !(self.base.is_finite() && self.base_prime.is_finite()) {
            return bad("base angles must be finite".into());
        }
        Ok(())
    }

    /// Same parameters with the sector half-angles replaced.
    pub fn with_angles(&self, theta: f64, theta_prime: f64) -> Result<Self> {
        let p = Self {
            theta,
            theta_prime,
            ..*self
        };
        p.validate()?;
        Ok(p)
    }

    /// Whether `θ, θ′ < θ₁(ε)`.
    pub fn satisfies_diameter_condition(&self) -> bool {
        let t1 = theta_one(self.epsilon);
        self.theta < t1 && self.theta_prime < t1
    }

    pub fn arcs(&self) -> BoxArcs {
        let arc = |c: f64, w: f64| BoundaryArc::new(BoundaryPoint::new(c), w).expect("validated");
        BoxArcs {
            f: arc(self.base, self.theta),
            p: arc(self.base + PI, self.theta),
            f_prime: arc(self.base_prime, self.theta_prime),
            p_prime: arc(self.base_prime + PI, self.theta_prime),
        }
    }

    /// `B^α_θ = H⁻¹(P × F × [0, α])`.
    pub fn target_box(&self) -> FlowBox {
        let a = self.arcs();
        FlowBox::new(a.p, a.f, self.alpha).expect("validated")
    }

    /// `B^{ε²}_{θ′} = H⁻¹(P′ × F′ × [0, ε²])`.
    pub fn leading_box(&self) -> FlowBox {
        let a = self.arcs();
        FlowBox::new(a.p_prime, a.f_prime, self.epsilon * self.epsilon).expect("validated")
    }

    /// `S_θ = H⁻¹(P × F × [0, ε²])`.
    pub fn s_theta_box(&self) -> FlowBox {
        let a = self.arcs();
        FlowBox::new(a.p, a.f, self.epsilon * self.epsilon).expect("validated")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxArcs {
    pub p: BoundaryArc,
    pub f: BoundaryArc,
    pub p_prime: BoundaryArc,
    pub f_prime: BoundaryArc,
}

/// Largest distance from 0 of a base point of `H⁻¹(P × F × [s₀, s₁])`,
/// maximized over a sample grid that includes all corners.
pub fn box_reach(past: &BoundaryArc, future: &BoundaryArc, s_range: (f64, f64), n: usize) -> f64 {
    let n = n.max(2);
    let mut reach: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let xi = past.point_at(i as f64 / (n - 1) as f64);
            let eta = future.point_at(j as f64 / (n - 1) as f64);
            for s in [s_range.0, s_range.1] {
                if let Ok(v) = hopf_inverse(&HopfCoordinate {
                    past: xi,
                    future: eta,
                    s,
                }) {
                    reach = reach.max(hyp_distance(
                        &crate::hyperbolic::DiskPoint::ORIGIN,
                        &v.base(),
                    ));
                }
            }
        }
    }
    reach
}

/// Sampled diameter of the base points of `H⁻¹(P × F × {0})` for the sector of
/// half-angle `theta` at base direction 0.
pub fn box_diameter(theta: f64, n: usize) -> f64 {
    let n = n.max(2);
    let f = BoundaryArc::new(BoundaryPoint::new(0.0), theta).expect("positive half-angle");
    let p = BoundaryArc::new(BoundaryPoint::new(PI), theta).expect("positive half-angle");
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let hc = HopfCoordinate {
                past: p.point_at(i as f64 / (n - 1) as f64),
                future: f.point_at(j as f64 / (n - 1) as f64),
                s: 0.0,
            };
            if let Ok(v) = hopf_inverse(&hc) {
                pts.push(v.base());
            }
        }
    }
    let mut diam: f64 = 0.0;
    for (k, a) in pts.iter().enumerate() {
        for b in &pts[k + 1..] {
            diam = diam.max(hyp_distance(a, b));
        }
    }
    diam
}

const DIAMETER_SAMPLES: usize = 17;

/// `θ₁(ε)`: supremum of half-angles whose box base set has diameter `< ε/2`,
/// by bisection on the sampled diameter.
pub fn theta_one(epsilon: f64) -> f64 {
    let target = 0.5 * epsilon;
    let (mut lo, mut hi) = (0.0, FRAC_PI_2 - 1e-9);
    if box_diameter(hi, DIAMETER_SAMPLES) < target {
        return hi;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if box_diameter(mid, DIAMETER_SAMPLES) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Whether `B^{lead}` meets `φ^{−t} γ_* B^{target}`, by the s-interval criterion.
pub fn box_intersection_nonempty(
    gamma: &MoebiusMap,
    t: f64,
    lead: &FlowBox,
    target: &FlowBox,
) -> bool {
    let g_past = target.past.image(gamma);
    let g_future = target.future.image(gamma);
    if lead.future.intersect(&g_future).is_empty() {
        return false;
    }
    let (lo, hi) = (t - target.length, t + lead.length);
    lead.past.intersect(&g_past).iter().any(|piece| {
        let (bmin, bmax) = b_gamma_range(piece, gamma);
        bmax >= lo && bmin <= hi
    })
}

/// `γ ∈ Γ_{θ,θ′}(t)`.
pub fn gamma_t_membership(gamma: &MoebiusMap, t: f64, params: &BoxParameters) -> bool {
    box_intersection_nonempty(gamma, t, &params.leading_box(), &params.target_box())
}

/// Arc inclusions `γF ⊂ F′` and `γ⁻¹P′ ⊂ P`.
pub fn gamma_star_inclusions(gamma: &MoebiusMap, params: &BoxParameters) -> bool {
    let a = params.arcs();
    a.f_prime.contains_arc(&a.f.image(gamma))
        && a.p.contains_arc(&a.p_prime.image(&gamma.inverse()))
}

/// `γ ∈ Γ*_{θ,θ′}(t)`.
pub fn gamma_star_membership(gamma: &MoebiusMap, t: f64, params: &BoxParameters) -> bool {
    gamma_star_inclusions(gamma, params) && gamma_t_membership(gamma, t, params)
}

/// `γ ∈ Γ*(t, α)`: a `Γ*` element for which `S_θ` meets `γ_* φ^{−t} B^α_θ`.
pub fn gamma_star_alpha_membership(gamma: &MoebiusMap, t: f64, params: &BoxParameters) -> bool {
    gamma_star_membership(gamma, t, params)
        && box_intersection_nonempty(gamma, t, &params.s_theta_box(), &params.target_box())
}

/// Whether `φ^t w ∈ γ_* B`, evaluated by flowing, pulling back and recomputing
/// Hopf coordinates.
pub fn flows_into(w: &UnitTangent, t: f64, gamma: &MoebiusMap, target: &FlowBox) -> bool {
    let u = gamma.inverse().push_tangent(&geodesic_flow(w, t));
    target.contains_tangent(&u)
}

/// Tangent-sampling decision of `B^{lead} ∩ φ^{−t} γ_* B^{target} ≠ ∅`.
///
/// For each sampled `ξ ∈ P′ ∩ γP` (dense, plus endpoints and the extremal
/// directions) and one `η ∈ F′ ∩ γF`, the vector `w₀ = H⁻¹(ξ, η, 0)` is flowed
/// and pulled back, and the Hopf time `s₀` of the result is read off. The
/// segment `{φ^σ w₀ : σ ∈ [0, ℓ_lead]}` meets the target iff
/// `s₀ ∈ [−ℓ_lead, ℓ_target]`.
pub fn sampled_box_intersection(
    gamma: &MoebiusMap,
    t: f64,
    lead: &FlowBox,
    target: &FlowBox,
    samples: usize,
) -> bool {
    let g_inv = gamma.inverse();
    let futures = lead.future.intersect(&target.future.image(gamma));
    let Some(fpiece) = futures.first() else {
        return false;
    };
    let eta = fpiece.point_at(0.5);
    let z = gamma.orbit_point();
    for piece in lead.past.intersect(&target.past.image(gamma)) {
        let mut angles: Vec<f64> = (0..=samples)
            .map(|k| piece.point_at(k as f64 / samples as f64).angle())
            .collect();
        if !z.is_origin() {
            angles.extend(
                [z.arg(), z.arg() + PI]
                    .into_iter()
                    .filter(|&a| piece.contains_angle(a)),
            );
        }
        for a in angles {
            let xi = BoundaryPoint::new(a);
            let Ok(w0) = hopf_inverse(&HopfCoordinate {
                past: xi,
                future: eta,
                s: 0.0,
            }) else {
                continue;
            };
            let u = g_inv.push_tangent(&geodesic_flow(&w0, t));
            let Ok(hu) = hopf_forward(&u) else {
                continue;
            };
            let tol = 1e-9;
            // Endpoints of the pulled-back vector are γ⁻¹ξ, γ⁻¹η, which lie in
            // the target arcs by construction of the pieces; only time is open.
            if hu.s >= -lead.length - tol && hu.s <= target.length + tol {
                return true;
            }
        }
    }
    false
}

/// Angle at 0 between direction `a` and the arc centre.
pub fn offset_from(arc: &BoundaryArc, a: f64) -> f64 {
    angular_distance(arc.center().angle(), canonical_angle(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::DiskPoint;

    #[test]
    fn hopf_of_radial_vector() {
        let hc = hopf_forward(&UnitTangent::at_origin(0.0)).unwrap();
        assert!((hc.past.angle() - PI).abs() < 1e-15);
        assert!(hc.future.angle().abs() < 1e-15);
        assert_eq!(hc.s, 0.0);
    }

    #[test]
    fn hopf_inverse_rejects_degenerate() {
        let xi = BoundaryPoint::new(1.0);
        assert!(hopf_inverse(&HopfCoordinate {
            past: xi,
            future: xi,
            s: 0.0
        })
        .is_err());
    }

    #[test]
    fn arcs_of_sector() {
        let (f, p) = future_past_arcs(&SectorSpec::new(0.0, PI / 4.0).unwrap());
        assert_eq!(f.center().angle(), 0.0);
        assert!((p.center().angle() - PI).abs() < 1e-15);
        assert_eq!(f.half_width(), PI / 4.0);
        let (f, p) = future_past_arcs(&SectorSpec::full());
        assert!(f.is_full() && p.is_full());
    }

    #[test]
    fn ps_masses() {
        assert_eq!(ps_measure(&BoundaryArc::full_circle()), 1.0);
        let half = BoundaryArc::new(BoundaryPoint::new(0.3), PI / 2.0).unwrap();
        assert!((ps_measure(&half) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ps_rule_for_a_translation() {
        let g = MoebiusMap::translation(2.0);
        let arc = BoundaryArc::new(BoundaryPoint::new(0.4), 0.7).unwrap();
        let c = ps_transform_check(&g, &arc);
        assert!(c.relative_error < 1e-9, "{c:?}");
    }

    #[test]
    fn overlapping_arcs_rejected() {
        let a = BoundaryArc::new(BoundaryPoint::new(0.0), 0.5).unwrap();
        let b = BoundaryArc::new(BoundaryPoint::new(0.6), 0.5).unwrap();
        assert_eq!(mu_bar(&a, &b), Err(GeoError::OverlappingArcs));
    }

    #[test]
    fn zero_length_box_has_no_mass() {
        let a = BoundaryArc::new(BoundaryPoint::new(0.0), 0.3).unwrap();
        let b = BoundaryArc::new(BoundaryPoint::new(PI), 0.3).unwrap();
        assert_eq!(box_mass(&FlowBox::new(b, a, 0.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn b_gamma_of_identity() {
        for k in 0..6 {
            assert_eq!(
                b_gamma(&BoundaryPoint::new(k as f64), &MoebiusMap::IDENTITY),
                0.0
            );
        }
    }

    #[test]
    fn identity_is_in_gamma_zero() {
        let p = BoxParameters::defaults();
        assert!(gamma_t_membership(&MoebiusMap::IDENTITY, 0.0, &p));
    }

    #[test]
    fn box_parameter_validation() {
        assert!(BoxParameters::new(0.1, 0.2, 0.01, 0.01, 0.0, 0.0).is_err());
        assert!(BoxParameters::new(0.1, 0.1, 1.6, 0.01, 0.0, 0.0).is_err());
        assert!(BoxParameters::new(-0.1, 0.1, 0.01, 0.01, 0.0, 0.0).is_err());
        assert!(BoxParameters::defaults().satisfies_diameter_condition());
        assert!(!BoxParameters::wide().satisfies_diameter_condition());
    }

    #[test]
    fn translation_far_from_sectors_is_not_in_gamma_star() {
        // Moves 0 along π/2, away from the default sectors around 0.
        let g = MoebiusMap::rotation(FRAC_PI_2)
            .compose(&MoebiusMap::translation(8.0))
            .compose(&MoebiusMap::rotation(-FRAC_PI_2));
        assert!(!gamma_star_inclusions(&g, &BoxParameters::defaults()));
    }

    #[test]
    fn reach_of_thin_box_is_small() {
        let a = BoxParameters::defaults();
        let b = a.target_box();
        let r = box_reach(&b.past, &b.future, (0.0, b.length), 5);
        assert!(r < 0.3, "{r}");
        assert!(hyp_distance(&DiskPoint::ORIGIN, &DiskPoint::ORIGIN) == 0.0);
    }
}
