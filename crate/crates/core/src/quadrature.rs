//! Adaptive Simpson quadrature and a fixed-node composite rule.

/// Default absolute tolerance for [`adaptive_simpson`].
pub const QUAD_TOL: f64 = 1e-9;
const MAX_DEPTH: u32 = 48;
const NOISE_FLOOR: f64 = 1e-10;

/// Adaptive Simpson integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Integrands evaluated near the ideal boundary carry relative noise far
    // above machine precision; refining below it never converges.
    let floor = NOISE_FLOOR * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= (15.0 * tol).max(floor) {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Iterated adaptive Simpson over `[a, b] × [c, d]`. The inner tolerance is
/// scaled so the outer error budget is `tol`.
pub fn adaptive_simpson_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    tol: f64,
) -> f64 {
    let inner_tol = 0.5 * tol / (b - a).abs().max(1e-300);
    let g = |x: f64| adaptive_simpson(&|y| f(x, y), c, d, inner_tol);
    adaptive_simpson(&g, a, b, 0.5 * tol)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Tensor-product composite Simpson rule with `n × n` panels.
pub fn composite_simpson_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    n: usize,
) -> f64 {
    composite_simpson(&|x| composite_simpson(&|y| f(x, y), c, d, n), a, b, n)
}
