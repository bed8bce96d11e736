//! Independent oracles shared by the integration suites and the acceptance
//! target.
#![allow(dead_code)]

use geoloop::group::{GroupPresentation, Letter, Word};
use geoloop::hyperbolic::{hyp_distance, BoundaryPoint, DiskPoint, MoebiusMap};

/// Distinct orbit points of `Γ` lie at least the generator displacement
/// (about 3.06) apart; anything closer than this is the same element.
pub const SAME_POINT: f64 = 1.0;

/// Orbit points with `0 < d(0, g0) ≤ t` over all reduced words of length
/// `≤ max_len`, deduplicated by hyperbolic distance.
pub fn brute_force_count(g: &GroupPresentation, t: f64, max_len: usize) -> usize {
    fn sweep(
        g: &GroupPresentation,
        m: MoebiusMap,
        last: Letter,
        depth: usize,
        t: f64,
        out: &mut Vec<(f64, DiskPoint)>,
    ) {
        let d = m.displacement();
        if last != 0 && d <= t && d > 1e-6 {
            out.push((d, m.orbit_point()));
        }
        if depth == 0 {
            return;
        }
        for l in g.letters() {
            if l != -last {
                sweep(g, m.compose(g.generator(l).unwrap()), l, depth - 1, t, out);
            }
        }
    }
    let mut pts = Vec::new();
    sweep(g, MoebiusMap::IDENTITY, 0, max_len, t, &mut pts);
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut uniq: Vec<(f64, DiskPoint)> = Vec::new();
    for (d, p) in pts {
        let lo = uniq.partition_point(|q| q.0 < d - SAME_POINT);
        if !uniq[lo..]
            .iter()
            .any(|q| hyp_distance(&p, &q.1) < SAME_POINT)
        {
            uniq.push((d, p));
        }
    }
    uniq.len()
}

/// Smallest sweep length `L ≥ start` with `count(L) = count(L + 1)`, and that count.
pub fn stabilized_brute_force(g: &GroupPresentation, t: f64, start: usize) -> (usize, usize) {
    let mut len = start;
    let mut prev = brute_force_count(g, t, len);
    loop {
        let next = brute_force_count(g, t, len + 1);
        if next == prev {
            return (len, prev);
        }
        len += 1;
        prev = next;
    }
}

/// Dehn's algorithm for the genus-`g` surface relator: a word is trivial iff
/// repeatedly replacing more than half of a cyclic relator by the inverse of
/// the rest (and freely reducing) ends at the empty word.
pub fn dehn_trivial(relator: &Word, w: &Word) -> bool {
    let r = relator.letters();
    let n = r.len();
    let mut rels: Vec<Vec<Letter>> = Vec::new();
    let inv: Vec<Letter> = r.iter().rev().map(|&l| -l).collect();
    for base in [r.to_vec(), inv] {
        for k in 0..n {
            rels.push((0..n).map(|i| base[(k + i) % n]).collect());
        }
    }
    let half = n / 2 + 1;
    let mut cur: Vec<Letter> = w.letters().to_vec();
    'outer: loop {
        cur = free_reduce(&cur);
        if cur.is_empty() {
            return true;
        }
        // Work cyclically: a trivial word has a trivial cyclic reduction.
        while cur.len() >= 2 && cur[0] == -cur[cur.len() - 1] {
            cur.remove(0);
            cur.pop();
        }
        if cur.is_empty() {
            return true;
        }
        let m = cur.len();
        for rel in &rels {
            for start in 0..m {
                let mut k = 0;
                while k < n && k < m && cur[(start + k) % m] == rel[k] {
                    k += 1;
                }
                if k >= half {
                    // Replace cur[start..start+k] (cyclically) by rel[k..]⁻¹.
                    let rest: Vec<Letter> = rel[k..].iter().rev().map(|&l| -l).collect();
                    let mut next = Vec::with_capacity(m - k + rest.len());
                    next.extend_from_slice(&rest);
                    for i in k..m {
                        next.push(cur[(start + i) % m]);
                    }
                    cur = next;
                    continue 'outer;
                }
            }
        }
        return false;
    }
}

pub fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// `d(q, c(T)) − T` along the ray from 0 toward `xi`.
pub fn truncated_busemann(q: &DiskPoint, xi: &BoundaryPoint, big_t: f64) -> f64 {
    let c = DiskPoint::from_polar_hyperbolic(big_t, xi.angle());
    hyp_distance(q, &c) - big_t
}

/// Golden-section minimization on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn random_map<R: rand::Rng>(rng: &mut R, max_dist: f64) -> MoebiusMap {
    use std::f64::consts::TAU;
    MoebiusMap::rotation(rng.random_range(0.0..TAU))
        .compose(&MoebiusMap::translation(rng.random_range(0.0..max_dist)))
        .compose(&MoebiusMap::rotation(rng.random_range(0.0..TAU)))
}

pub fn random_point<R: rand::Rng>(rng: &mut R, max_dist: f64) -> DiskPoint {
    use std::f64::consts::TAU;
    DiskPoint::from_polar_hyperbolic(rng.random_range(0.0..max_dist), rng.random_range(0.0..TAU))
}

pub fn random_word<R: rand::Rng>(rng: &mut R, genus: usize, len: usize) -> Word {
    let rank = 2 * genus as i8;
    let mut v: Vec<Letter> = Vec::with_capacity(len);
    while v.len() < len {
        let mut l = rng.random_range(1..=rank);
        if rng.random_bool(0.5) {
            l = -l;
        }
        if v.last() != Some(&-l) {
            v.push(l);
        }
    }
    Word::new(v).unwrap()
}
