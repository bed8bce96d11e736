//! Poincaré-disk model of the hyperbolic plane.
//!
//! Isometries are stored as real unit-determinant matrices acting on the upper
//! half-plane and are transported to the disk through the Cayley map
//! `w -> (w - i)/(w + i)`, which sends `i` to the origin. Under this convention
//! `cosh d(0, g·0) = (a² + b² + c² + d²)/2`.
//!
//! Busemann functions are normalized at the origin:
//! `busemann(q, ξ) = lim_{t→∞} d(q, c(t)) − t` where `c` is the ray from 0
//! towards ξ. The value is negative for points ahead of the horocycle through
//! the origin.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};

/// Default tolerance for geometric comparisons.
pub const GEOM_TOL: f64 = 1e-9;

/// Slack used by closed arc-membership tests to absorb angle canonicalization.
pub const ARC_TOL: f64 = 1e-12;

/// Reduces an angle to `[0, 2π)`.
pub fn canonical_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Minimal distance between two angles on the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = canonical_angle(a - b);
    d.min(TAU - d)
}

/// Counter-clockwise offset from `from` to `to`, in `[0, 2π)`.
pub fn ccw_offset(from: f64, to: f64) -> f64 {
    canonical_angle(to - from)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    x: f64,
    y: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || x * x + y * y >= 1.0 {
            return Err(GeoError::OutsideDisk { x, y });
        }
        Ok(Self { x, y })
    }

    /// Point at hyperbolic distance `dist` from the origin in direction `angle`.
    pub fn from_polar_hyperbolic(dist: f64, angle: f64) -> Self {
        let r = (0.5 * dist).tanh();
        Self {
            x: r * angle.cos(),
            y: r * angle.sin(),
        }
    }

    /// Used for images of valid points under isometries, which stay in the disk
    /// up to rounding at displacements far beyond the census radii.
    pub(crate) fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn arg(&self) -> f64 {
        canonical_angle(self.y.atan2(self.x))
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

/// A point of the ideal boundary, stored as its angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        Self {
            angle: canonical_angle(angle),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.im.atan2(z.re))
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    pub fn antipode(&self) -> Self {
        Self::new(self.angle + PI)
    }

    pub fn distance(&self, other: &BoundaryPoint) -> f64 {
        angular_distance(self.angle, other.angle)
    }
}

/// Closed boundary arc `center ± half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryArc {
    center: BoundaryPoint,
    half_width: f64,
}

impl BoundaryArc {
    pub fn new(center: BoundaryPoint, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= PI) {
            return Err(GeoError::InvalidArc(half_width));
        }
        Ok(Self { center, half_width })
    }

    pub fn full_circle() -> Self {
        Self {
            center: BoundaryPoint::new(0.0),
            half_width: PI,
        }
    }

    /// Arc running counter-clockwise from `start` over `length` radians.
    pub fn from_ccw(start: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= TAU) {
            return Err(GeoError::InvalidArc(0.5 * length));
        }
        Ok(Self {
            center: BoundaryPoint::new(start + 0.5 * length),
            half_width: 0.5 * length,
        })
    }

    pub fn center(&self) -> BoundaryPoint {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn length(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn start(&self) -> f64 {
        canonical_angle(self.center.angle - self.half_width)
    }

    pub fn end(&self) -> f64 {
        canonical_angle(self.center.angle + self.half_width)
    }

    pub fn is_full(&self) -> bool {
        self.half_width >= PI
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        self.is_full() || angular_distance(self.center.angle, angle) <= self.half_width + ARC_TOL
    }

    pub fn contains(&self, p: &BoundaryPoint) -> bool {
        self.contains_angle(p.angle)
    }

    /// Point at `fraction ∈ [0, 1]` of the way from start to end.
    pub fn point_at(&self, fraction: f64) -> BoundaryPoint {
        BoundaryPoint::new(self.center.angle - self.half_width + fraction * self.length())
    }

    pub fn contains_arc(&self, other: &BoundaryArc) -> bool {
        if self.is_full() {
            return true;
        }
        if other.is_full() {
            return false;
        }
        let mut off = ccw_offset(self.start(), other.start());
        if off > TAU - ARC_TOL {
            off = 0.0;
        }
        off + other.length() <= self.length() + ARC_TOL
    }

    /// Intersection of two closed arcs; at most two pieces. Pieces of zero
    /// length (arcs touching at an endpoint) are dropped.
    pub fn intersect(&self, other: &BoundaryArc) -> Vec<BoundaryArc> {
        if self.is_full() {
            return vec![*other];
        }
        if other.is_full() {
            return vec![*self];
        }
        let s1 = self.start();
        let e1 = s1 + self.length();
        let s2 = s1 + ccw_offset(s1, other.start());
        let mut pieces = Vec::with_capacity(2);
        for shift in [0.0, -TAU] {
            let lo = s1.max(s2 + shift);
            let hi = e1.min(s2 + shift + other.length());
            if hi > lo {
                if let Ok(arc) = BoundaryArc::from_ccw(lo, hi - lo) {
                    pieces.push(arc);
                }
            }
        }
        pieces
    }

    pub fn is_disjoint(&self, other: &BoundaryArc) -> bool {
        if self.contains_angle(other.start()) || other.contains_angle(self.start()) {
            return false;
        }
        self.intersect(other).is_empty()
    }

    /// Image of the arc under an orientation-preserving isometry.
    pub fn image(&self, m: &MoebiusMap) -> BoundaryArc {
        if self.is_full() {
            return *self;
        }
        let s = m.apply_boundary(&BoundaryPoint::new(self.start()));
        let e = m.apply_boundary(&BoundaryPoint::new(self.end()));
        let len = ccw_offset(s.angle, e.angle);
        match BoundaryArc::from_ccw(s.angle, len) {
            Ok(arc) if arc.contains(&m.apply_boundary(&self.center)) => arc,
            _ => BoundaryArc::full_circle(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitTangent {
    base: DiskPoint,
    direction: f64,
}

impl UnitTangent {
    pub fn new(base: DiskPoint, direction: f64) -> Self {
        Self {
            base,
            direction: canonical_angle(direction),
        }
    }

    pub fn at_origin(direction: f64) -> Self {
        Self::new(DiskPoint::ORIGIN, direction)
    }

    pub fn base(&self) -> DiskPoint {
        self.base
    }

    pub fn direction(&self) -> f64 {
        self.direction
    }
}

/// Orientation-preserving isometry given by a unit-determinant real matrix,
/// identified up to global sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    m: [f64; 4],
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        m: [1.0, 0.0, 0.0, 1.0],
    };

    /// Normalizes to unit determinant and canonical sign.
    pub fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0 && det.is_finite()) {
            return Err(GeoError::InvalidArgument(format!(
                "matrix determinant {det} is not positive"
            )));
        }
        Ok(Self::normalized([a, b, c, d]))
    }

    /// Reassembles a stored matrix without renormalizing, so persisted values
    /// round-trip bit for bit.
    pub fn from_raw(m: [f64; 4]) -> Self {
        Self { m }
    }

    fn normalized(mut m: [f64; 4]) -> Self {
        let det = m[0] * m[3] - m[1] * m[2];
        if det != 1.0 {
            let s = 1.0 / det.sqrt();
            for x in &mut m {
                *x *= s;
            }
        }
        let mut lead = 0;
        for i in 1..4 {
            if m[i].abs() > m[lead].abs() {
                lead = i;
            }
        }
        if m[lead] < 0.0 {
            for x in &mut m {
                *x = -*x;
            }
        }
        Self { m }
    }

    /// Rotation of the disk about the origin by `angle`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self::normalized([c, s, -s, c])
    }

    /// Hyperbolic translation by `dist` along the real diameter, towards `+1`.
    pub fn translation(dist: f64) -> Self {
        let e = (0.5 * dist).exp();
        Self::normalized([e, 0.0, 0.0, 1.0 / e])
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn determinant(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    /// Matrix product `self · other` (apply `other` first), renormalized.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Self::normalized([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn inverse(&self) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        Self::normalized([d, -b, -c, a])
    }

    /// Disk coefficients `(α, β)` of `z -> (αz + β)/(β̄z + ᾱ)`, from the Cayley
    /// conjugate of the matrix; `compose` and the disk action agree.
    pub fn disk_coefficients(&self) -> (Complex64, Complex64) {
        let [a, b, c, d] = self.m;
        (
            Complex64::new(0.5 * (a + d), 0.5 * (b - c)),
            Complex64::new(0.5 * (a - d), -0.5 * (b + c)),
        )
    }

    pub fn apply(&self, z: &DiskPoint) -> DiskPoint {
        DiskPoint::from_complex(self.apply_complex(z.to_complex()))
    }

    pub(crate) fn apply_complex(&self, z: Complex64) -> Complex64 {
        let (alpha, beta) = self.disk_coefficients();
        (alpha * z + beta) / (beta.conj() * z + alpha.conj())
    }

    pub fn apply_boundary(&self, xi: &BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint::from_complex(self.apply_complex(xi.to_complex()))
    }

    /// Complex derivative of the disk action at `z`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let (alpha, beta) = self.disk_coefficients();
        let den = beta.conj() * z + alpha.conj();
        1.0 / (den * den)
    }

    /// Pushes a unit tangent vector forward by the isometry.
    pub fn push_tangent(&self, v: &UnitTangent) -> UnitTangent {
        let z = v.base.to_complex();
        UnitTangent::new(
            DiskPoint::from_complex(self.apply_complex(z)),
            v.direction + self.derivative(z).arg(),
        )
    }

    /// `g·0`.
    pub fn orbit_point(&self) -> DiskPoint {
        let (alpha, beta) = self.disk_coefficients();
        DiskPoint::from_complex(beta / alpha.conj())
    }

    /// `d(0, g·0)` from the trace formula.
    pub fn displacement(&self) -> f64 {
        let s: f64 = self.m.iter().map(|x| x * x).sum();
        (0.5 * s).max(1.0).acosh()
    }

    /// `cosh d(0, g·0)`, cheaper than [`MoebiusMap::displacement`] for pruning.
    pub fn cosh_displacement(&self) -> f64 {
        0.5 * self.m.iter().map(|x| x * x).sum::<f64>()
    }

    /// Translation length `2 arccosh(|tr|/2)`; zero for elliptic or parabolic maps.
    pub fn translation_length(&self) -> f64 {
        let t = 0.5 * self.trace().abs();
        if t <= 1.0 {
            0.0
        } else {
            2.0 * t.acosh()
        }
    }

    /// Entrywise distance to `other` minimized over the sign ambiguity.
    pub fn projective_distance(&self, other: &MoebiusMap) -> f64 {
        let plus = (0..4)
            .map(|i| (self.m[i] - other.m[i]).abs())
            .fold(0.0, f64::max);
        let minus = (0..4)
            .map(|i| (self.m[i] + other.m[i]).abs())
            .fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.projective_distance(&Self::IDENTITY) < tol
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

pub fn apply_moebius(m: &MoebiusMap, z: &DiskPoint) -> DiskPoint {
    m.apply(z)
}

/// Hyperbolic distance in the disk, computed as `2 asinh(|z−w| / sqrt((1−|z|²)(1−|w|²)))`.
pub fn hyp_distance(z: &DiskPoint, w: &DiskPoint) -> f64 {
    let dz = z.to_complex() - w.to_complex();
    let den = ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr())).sqrt();
    2.0 * (dz.norm() / den).asinh()
}

/// Busemann function normalized at the origin: `log(|ξ − q|² / (1 − |q|²))`.
pub fn busemann(q: &DiskPoint, xi: &BoundaryPoint) -> f64 {
    let (z, u) = (q.to_complex(), xi.to_complex());
    let r2 = q.norm_sqr();
    if r2 == 0.0 {
        return 0.0;
    }
    // |z - u|² directly: expanding it cancels badly near the boundary.
    (z - u).norm_sqr().ln() - (-r2).ln_1p()
}

/// Unit tangent at the point of the geodesic `past → future` closest to the
/// origin, pointing towards `future`.
pub fn tangent_on_geodesic(past: &BoundaryPoint, future: &BoundaryPoint) -> Result<UnitTangent> {
    let sep = past.distance(future);
    if sep < 1e-14 {
        return Err(GeoError::DegenerateGeodesic);
    }
    let pz = past.to_complex();
    let fz = future.to_complex();
    let direction = (fz - pz).arg();
    // Closest approach of the geodesic to 0 lies on the bisector of the short arc.
    let r = ((PI - sep) / 4.0).tan();
    let mid = pz + fz;
    let base = if mid.norm() < 1e-300 || r == 0.0 {
        DiskPoint::ORIGIN
    } else {
        DiskPoint::from_complex(mid / mid.norm() * r)
    };
    Ok(UnitTangent::new(base, direction))
}

/// Distance between the horocycles through the origin centred at ξ and η,
/// `−(b(q, ξ) + b(q, η))` for any `q` on the geodesic joining them. Nonnegative,
/// zero for antipodal points, unbounded as η → ξ.
pub fn horocycle_gap(xi: &BoundaryPoint, eta: &BoundaryPoint) -> Result<f64> {
    let q = tangent_on_geodesic(xi, eta)?.base;
    Ok(-(busemann(&q, xi) + busemann(&q, eta)))
}

/// Backward and forward endpoints `(v⁻, v⁺)` of the geodesic through `v`.
pub fn geodesic_endpoints(v: &UnitTangent) -> (BoundaryPoint, BoundaryPoint) {
    let z = v.base.to_complex();
    let u = Complex64::from_polar(1.0, v.direction);
    let lift = |w: Complex64| (w + z) / (1.0 + z.conj() * w);
    (
        BoundaryPoint::from_complex(lift(-u)),
        BoundaryPoint::from_complex(lift(u)),
    )
}

/// Geodesic flow for time `t` (negative times flow backwards).
pub fn geodesic_flow(v: &UnitTangent, t: f64) -> UnitTangent {
    if t == 0.0 {
        return *v;
    }
    let z = v.base.to_complex();
    let w = Complex64::from_polar((0.5 * t).tanh(), v.direction);
    let den = 1.0 + z.conj() * w;
    let p = (w + z) / den;
    UnitTangent::new(DiskPoint::from_complex(p), v.direction - 2.0 * den.arg())
}

/// Direction in which the loop represented by `m` leaves the base fibre,
/// `arg(g·0)`.
pub fn outgoing_angle(orbit_point: &DiskPoint) -> Result<f64> {
    if orbit_point.is_origin() {
        return Err(GeoError::TrivialLoop);
    }
    Ok(orbit_point.arg())
}

/// Outgoing and incoming directions at the base fibre of the loop lifted as
/// the geodesic `0 → g·0`. The terminal tangent is translated back by `g⁻¹`,
/// giving `arg(g⁻¹·0) + π`.
pub fn direction_angles(m: &MoebiusMap) -> Result<(f64, f64)> {
    let (alpha, beta) = m.disk_coefficients();
    if beta.norm() < 1e-15 {
        return Err(GeoError::TrivialLoop);
    }
    let (aa, ab) = (alpha.arg(), beta.arg());
    Ok((canonical_angle(ab + aa), canonical_angle(ab - aa)))
}
