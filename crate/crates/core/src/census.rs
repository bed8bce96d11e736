//! Orbit census: every `γ` with `d(0, γ·0) ≤ t`, deduplicated by matrix.
//!
//! Expansion is best-first in the key `(displacement, a, b, c, d)`. Every
//! non-identity element of the polygon group has a generator neighbour strictly
//! closer to the origin (the reflection of its tile across the side the
//! geodesic back to 0 leaves through), so each element is first discovered from
//! its lowest-key neighbour. Words are therefore canonical: they do not depend
//! on the radius, the slack, or on whether a census was extended from a smaller
//! one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::hash::Hasher;

use rustc_hash::{FxHashMap, FxHashSet, FxHasher};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::GeoError;
use crate::group::{GroupPresentation, HomologyVector, Letter, Word};
use crate::hyperbolic::{direction_angles, DiskPoint, MoebiusMap};

pub const DEFAULT_SLACK: f64 = 4.0;
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// Max-norm tolerance, in hyperboloid coordinates of the orbit point, under
/// which two matrices are the same element. Distinct orbit points are at least
/// twice the inradius apart, and Euclidean distance on the hyperboloid bounds
/// hyperbolic distance from above, so this cannot merge distinct elements.
pub const DEDUP_TOL: f64 = 0.5;
const CELL: f64 = 4.0;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Geometry(#[from] GeoError),
    #[error(
        "record budget of {limit} elements exceeded while expanding displacement {reached:.4}"
    )]
    BudgetExceeded {
        limit: usize,
        reached: f64,
        partial: Box<CensusSnapshot>,
    },
    #[error("census belongs to a different presentation")]
    PresentationMismatch,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a census file")]
    BadMagic,
    #[error("unsupported census format version {0}")]
    UnsupportedVersion(u32),
    #[error("census checksum mismatch (file corrupt or truncated)")]
    ChecksumMismatch,
    #[error("malformed census: {0}")]
    Malformed(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub word: Word,
    pub map: MoebiusMap,
    pub orbit_point: DiskPoint,
    pub displacement: f64,
    pub outgoing: f64,
    pub incoming: f64,
    pub homology: HomologyVector,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedupStats {
    /// Elements indexed, including the identity and the frontier beyond `t`.
    pub indexed: u64,
    pub expanded: u64,
    pub generated: u64,
    pub duplicates: u64,
    pub pruned: u64,
    pub probes: u64,
    /// New elements found with a key below the one being expanded; always 0 for
    /// the polygon groups, where expansion order is monotone.
    pub late_discoveries: u64,
    pub max_word_length: u64,
}

impl DedupStats {
    pub const FIELDS: usize = 8;

    pub fn to_array(&self) -> [u64; Self::FIELDS] {
        [
            self.indexed,
            self.expanded,
            self.generated,
            self.duplicates,
            self.pruned,
            self.probes,
            self.late_discoveries,
            self.max_word_length,
        ]
    }

    pub fn from_array(a: [u64; Self::FIELDS]) -> Self {
        Self {
            indexed: a[0],
            expanded: a[1],
            generated: a[2],
            duplicates: a[3],
            pruned: a[4],
            probes: a[5],
            late_discoveries: a[6],
            max_word_length: a[7],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSnapshot {
    pub presentation: [u8; 8],
    /// Digest of the producing run configuration; zero when not supplied.
    pub config: [u8; 8],
    pub genus: usize,
    pub radius: f64,
    pub slack: f64,
    pub partial: bool,
    pub records: Vec<OrbitRecord>,
    pub stats: DedupStats,
}

impl CensusSnapshot {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Orbit count including the identity.
    pub fn raw_orbit_count(&self) -> usize {
        self.records.len() + 1
    }

    pub fn max_displacement(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.displacement)
    }

    /// Number of records with displacement `≤ t` (records are sorted).
    pub fn count_within(&self, t: f64) -> usize {
        self.records.partition_point(|r| r.displacement <= t)
    }

    /// Observed `[min, max]` of displacement / word length.
    pub fn quasi_isometry_interval(&self) -> Option<(f64, f64)> {
        self.records.iter().fold(None, |acc, r| {
            let q = r.displacement / r.word.len() as f64;
            Some(match acc {
                None => (q, q),
                Some((lo, hi)) => (f64::min(lo, q), f64::max(hi, q)),
            })
        })
    }
}

/// Coordinates `(X, Y, T)` of `g·0` on the hyperboloid `T² − X² − Y² = 1`,
/// read off from `g gᵀ`.
pub fn hyperboloid_point(m: &MoebiusMap) -> [f64; 3] {
    let [a, b, c, d] = m.entries();
    [
        0.5 * (a * a + b * b - c * c - d * d),
        -(a * c + b * d),
        0.5 * (a * a + b * b + c * c + d * d),
    ]
}

/// Hash key of the quantization cell holding the orbit point of `m`.
/// The key is quadratic in the entries, so `m` and `−m` share it.
pub fn dedup_key(m: &MoebiusMap) -> u64 {
    let p = hyperboloid_point(m);
    cell_hash([cell_of(p[0]), cell_of(p[1]), cell_of(p[2])])
}

fn cell_of(x: f64) -> i64 {
    (x / CELL).floor() as i64
}

fn cell_hash(c: [i64; 3]) -> u64 {
    let mut h = FxHasher::default();
    for v in c {
        h.write_i64(v);
    }
    h.finish()
}

/// Quantized-cell index of group elements with chaining and neighbour probing.
///
/// Orbit points rather than matrix entries are compared: products of length `n`
/// at displacement `d` carry entry drift growing like `e^{3d/2}`, which at the
/// census frontier exceeds any entrywise tolerance below the gap between
/// distinct elements, while the orbit point drifts by `O(e^{d})·ε` in
/// hyperbolic distance only.
#[derive(Default)]
pub struct DedupIndex {
    mats: Vec<[f64; 4]>,
    next: Vec<u32>,
    heads: FxHashMap<u64, u32>,
    probes: u64,
}

const NIL: u32 = u32::MAX;

impl DedupIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            mats: Vec::with_capacity(n),
            next: Vec::with_capacity(n),
            heads: FxHashMap::with_capacity_and_hasher(n, Default::default()),
            probes: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrix(&self, id: u32) -> MoebiusMap {
        MoebiusMap::from_raw(self.mats[id as usize])
    }

    pub fn probes(&self) -> u64 {
        self.probes
    }

    /// Looks up an element whose orbit point lies within [`DEDUP_TOL`].
    pub fn find(&mut self, m: &MoebiusMap) -> Option<u32> {
        let p = hyperboloid_point(m);
        let mut choices = [[0i64; 2]; 3];
        let mut counts = [1usize; 3];
        for i in 0..3 {
            let c = cell_of(p[i]);
            choices[i][0] = c;
            let frac = p[i] / CELL - c as f64;
            let tol = DEDUP_TOL / CELL;
            if frac < tol {
                choices[i][1] = c - 1;
                counts[i] = 2;
            } else if frac > 1.0 - tol {
                choices[i][1] = c + 1;
                counts[i] = 2;
            }
        }
        for i0 in 0..counts[0] {
            for i1 in 0..counts[1] {
                for i2 in 0..counts[2] {
                    let key = cell_hash([choices[0][i0], choices[1][i1], choices[2][i2]]);
                    self.probes += 1;
                    let mut cur = self.heads.get(&key).copied().unwrap_or(NIL);
                    while cur != NIL {
                        let q = hyperboloid_point(&MoebiusMap::from_raw(self.mats[cur as usize]));
                        if (0..3).all(|k| (q[k] - p[k]).abs() < DEDUP_TOL) {
                            return Some(cur);
                        }
                        cur = self.next[cur as usize];
                    }
                }
            }
        }
        None
    }

    /// Inserts without checking for an existing match.
    pub fn push(&mut self, m: &MoebiusMap) -> u32 {
        let id = self.mats.len() as u32;
        let key = dedup_key(m);
        let head = self.heads.insert(key, id).unwrap_or(NIL);
        self.mats.push(m.entries());
        self.next.push(head);
        id
    }

    /// Returns `(id, true)` for a new element, `(existing, false)` otherwise.
    pub fn insert_if_absent(&mut self, m: &MoebiusMap) -> (u32, bool) {
        match self.find(m) {
            Some(id) => (id, false),
            None => (self.push(m), true),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct HeapKey {
    disp: f64,
    m: [f64; 4],
    id: u32,
}

impl HeapKey {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.disp
            .total_cmp(&other.disp)
            .then_with(|| self.m[0].total_cmp(&other.m[0]))
            .then_with(|| self.m[1].total_cmp(&other.m[1]))
            .then_with(|| self.m[2].total_cmp(&other.m[2]))
            .then_with(|| self.m[3].total_cmp(&other.m[3]))
    }
}

impl PartialEq for HeapKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    // Reversed so that `BinaryHeap` pops the smallest key.
    fn cmp(&self, other: &Self) -> Ordering {
        other.cmp_key(self).then_with(|| other.id.cmp(&self.id))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub radius: f64,
    pub slack: f64,
    /// Maximum number of indexed elements (frontier included).
    pub budget: usize,
}

impl CensusOptions {
    pub fn new(radius: f64, slack: f64) -> Self {
        Self {
            radius,
            slack,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self) -> Result<(), GeoError> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(GeoError::InvalidArgument(format!(
                "census radius must be positive, got {}",
                self.radius
            )));
        }
        if !(self.slack >= 0.0 && self.slack.is_finite()) {
            return Err(GeoError::InvalidArgument(format!(
                "slack must be nonnegative, got {}",
                self.slack
            )));
        }
        Ok(())
    }
}

struct Enumerator<'a> {
    p: &'a GroupPresentation,
    index: DedupIndex,
    disp: Vec<f64>,
    parent: Vec<u32>,
    letter: Vec<Letter>,
    /// Words of seeded elements whose parents are not tracked.
    seeded_words: FxHashMap<u32, Word>,
    heap: BinaryHeap<HeapKey>,
    stats: DedupStats,
}

impl<'a> Enumerator<'a> {
    fn new(p: &'a GroupPresentation) -> Self {
        let mut e = Self {
            p,
            index: DedupIndex::new(),
            disp: Vec::new(),
            parent: Vec::new(),
            letter: Vec::new(),
            seeded_words: FxHashMap::default(),
            heap: BinaryHeap::new(),
            stats: DedupStats::default(),
        };
        e.add(MoebiusMap::IDENTITY, 0.0, NIL, 0);
        e
    }

    fn add(&mut self, m: MoebiusMap, d: f64, parent: u32, letter: Letter) -> u32 {
        let id = self.index.push(&m);
        self.disp.push(d);
        self.parent.push(parent);
        self.letter.push(letter);
        self.heap.push(HeapKey {
            disp: d,
            m: m.entries(),
            id,
        });
        id
    }

    fn run(&mut self, opts: &CensusOptions) -> Result<(), f64> {
        let limit = opts.radius + opts.slack;
        let letters = self.p.letters();
        let gens: Vec<MoebiusMap> = letters
            .iter()
            .map(|&l| *self.p.generator(l).expect("presentation letters are valid"))
            .collect();
        while let Some(top) = self.heap.pop() {
            self.stats.expanded += 1;
            let base = self.index.matrix(top.id);
            let back = -self.letter[top.id as usize];
            for (&l, g) in letters.iter().zip(&gens) {
                if l == back {
                    continue;
                }
                self.stats.generated += 1;
                let m = base.compose(g);
                let d = m.displacement();
                if d > limit {
                    self.stats.pruned += 1;
                    continue;
                }
                if self.index.find(&m).is_some() {
                    self.stats.duplicates += 1;
                    continue;
                }
                if self.index.len() >= opts.budget {
                    return Err(top.disp);
                }
                let key = HeapKey {
                    disp: d,
                    m: m.entries(),
                    id: 0,
                };
                if key.cmp_key(&top) == Ordering::Less {
                    self.stats.late_discoveries += 1;
                }
                self.add(m, d, top.id, l);
            }
        }
        Ok(())
    }

    fn word_of(&self, id: u32) -> Word {
        let mut letters = Vec::new();
        let mut cur = id;
        while cur != 0 {
            if let Some(w) = self.seeded_words.get(&cur) {
                let mut full = w.letters().to_vec();
                letters.reverse();
                full.extend(letters);
                return Word::from_reduced(full);
            }
            letters.push(self.letter[cur as usize]);
            cur = self.parent[cur as usize];
        }
        letters.reverse();
        Word::from_reduced(letters)
    }

    /// `reached` is set when the budget stopped the run at that displacement;
    /// the snapshot then only keeps the range the slack certifies.
    fn snapshot(mut self, opts: &CensusOptions, reached: Option<f64>) -> CensusSnapshot {
        let radius = match reached {
            Some(r) => (r - opts.slack).clamp(0.0, opts.radius),
            None => opts.radius,
        };
        let mut records: Vec<OrbitRecord> = (1..self.index.len() as u32)
            .filter(|&id| self.disp[id as usize] <= radius)
            .map(|id| {
                let map = self.index.matrix(id);
                let word = self.word_of(id);
                make_record(self.p, word, map, self.disp[id as usize])
            })
            .collect();
        records.sort_by(|a, b| {
            a.displacement
                .total_cmp(&b.displacement)
                .then_with(|| a.word.len().cmp(&b.word.len()))
                .then_with(|| a.word.cmp(&b.word))
        });
        self.stats.indexed = self.index.len() as u64;
        self.stats.probes = self.index.probes();
        self.stats.max_word_length = records
            .iter()
            .map(|r| r.word.len() as u64)
            .max()
            .unwrap_or(0);
        CensusSnapshot {
            presentation: self.p.fingerprint(),
            config: [0; 8],
            genus: self.p.genus(),
            radius,
            slack: opts.slack,
            partial: reached.is_some(),
            records,
            stats: self.stats,
        }
    }
}

fn make_record(
    p: &GroupPresentation,
    word: Word,
    map: MoebiusMap,
    displacement: f64,
) -> OrbitRecord {
    let (outgoing, incoming) =
        direction_angles(&map).expect("non-identity elements move the origin");
    let homology = p.abelianize(&word).expect("census words use valid letters");
    OrbitRecord {
        orbit_point: map.orbit_point(),
        word,
        map,
        displacement,
        outgoing,
        incoming,
        homology,
    }
}

pub fn enumerate_orbit(
    p: &GroupPresentation,
    radius: f64,
    slack: f64,
) -> Result<CensusSnapshot, CensusError> {
    enumerate_orbit_with(p, &CensusOptions::new(radius, slack))
}

pub fn enumerate_orbit_with(
    p: &GroupPresentation,
    opts: &CensusOptions,
) -> Result<CensusSnapshot, CensusError> {
    opts.validate()?;
    let mut e = Enumerator::new(p);
    match e.run(opts) {
        Ok(()) => Ok(e.snapshot(opts, None)),
        Err(reached) => Err(CensusError::BudgetExceeded {
            limit: opts.budget,
            reached,
            partial: Box::new(e.snapshot(opts, Some(reached))),
        }),
    }
}

/// Extends a stored census to a larger radius by re-expanding its records.
/// The result equals a fresh run at the new radius.
pub fn extend_census(
    p: &GroupPresentation,
    snapshot: &CensusSnapshot,
    opts: &CensusOptions,
) -> Result<CensusSnapshot, CensusError> {
    opts.validate()?;
    if snapshot.presentation != p.fingerprint() {
        return Err(CensusError::PresentationMismatch);
    }
    if snapshot.partial {
        return Err(GeoError::InvalidArgument("cannot extend a partial census".into()).into());
    }
    if opts.radius < snapshot.radius {
        return Err(GeoError::InvalidArgument(format!(
            "new radius {} is below the stored radius {}",
            opts.radius, snapshot.radius
        ))
        .into());
    }
    let mut e = Enumerator::new(p);
    let mut seen = FxHashSet::default();
    for r in &snapshot.records {
        if !seen.insert(r.word.clone()) {
            return Err(CensusError::Malformed("duplicate word in census".into()));
        }
        let id = e.add(r.map, r.displacement, 0, 0);
        e.seeded_words.insert(id, r.word.clone());
    }
    match e.run(opts) {
        Ok(()) => Ok(e.snapshot(opts, None)),
        Err(reached) => Err(CensusError::BudgetExceeded {
            limit: opts.budget,
            reached,
            partial: Box::new(e.snapshot(opts, Some(reached))),
        }),
    }
}
