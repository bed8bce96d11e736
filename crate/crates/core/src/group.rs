//! Cocompact surface groups from the regular `4g`-gon side pairing.
//!
//! The fundamental polygon is centred at the origin with interior angle `2π/4g`,
//! so all `4g` corners form one vertex cycle. Sides are labelled
//! `a₁ b₁ a₁⁻¹ b₁⁻¹ … a_g b_g a_g⁻¹ b_g⁻¹` counter-clockwise starting from the side
//! whose midpoint lies on the positive real axis.
//!
//! Letters are signed generator indices `±(k+1)`; words multiply left to right,
//! so `evaluate(w) = g_{w₁} · g_{w₂} ⋯`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{GeoError, Result};
use crate::hyperbolic::MoebiusMap;

pub type Letter = i8;

/// A freely reduced word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word, cancelling adjacent inverse pairs. Zero letters are invalid.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(GeoError::InvalidGenerator {
                    index: 0,
                    generators: 0,
                });
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Self { letters: out })
    }

    /// Wraps letters already known to be reduced and nonzero.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        Self { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(other.letters.iter()).copied())
            .expect("letters of valid words are nonzero")
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `a b a⁻¹ b⁻¹` for single letters `a`, `b`.
    pub fn commutator(a: Letter, b: Letter) -> Word {
        Word::new([a, b, -a, -b]).expect("nonzero letters")
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1]) && !self.letters.contains(&0)
    }
}

/// Display name of a signed letter: `a b c d` (inverses upper-case) in genus 2,
/// `a1 b1 a2 …` otherwise.
pub fn letter_name(genus: usize, letter: Letter) -> String {
    let k = (letter.unsigned_abs() - 1) as usize;
    let base = if genus == 2 {
        ["a", "b", "c", "d"][k].to_string()
    } else {
        format!(
            "{}{}",
            if k.is_multiple_of(2) { "a" } else { "b" },
            k / 2 + 1
        )
    };
    if letter < 0 {
        base.to_uppercase()
    } else {
        base
    }
}

/// Renders a word with [`letter_name`]; the empty word prints as `1`.
pub fn format_word(genus: usize, w: &Word) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let sep = if genus == 2 { "" } else { "." };
    w.letters
        .iter()
        .map(|&l| letter_name(genus, l))
        .collect::<Vec<_>>()
        .join(sep)
}

/// Parses the output of [`format_word`].
pub fn parse_word(genus: usize, s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(Word::empty());
    }
    let names: Vec<(String, Letter)> = (1..=(2 * genus) as i8)
        .flat_map(|k| [k, -k])
        .map(|l| (letter_name(genus, l), l))
        .collect();
    let lookup = |tok: &str| {
        names
            .iter()
            .find(|(n, _)| n == tok)
            .map(|(_, l)| *l)
            .ok_or_else(|| GeoError::InvalidArgument(format!("unknown generator `{tok}`")))
    };
    let letters: Vec<Letter> = if genus == 2 {
        s.chars()
            .map(|c| lookup(&c.to_string()))
            .collect::<Result<_>>()?
    } else {
        s.split('.').map(lookup).collect::<Result<_>>()?
    };
    Word::new(letters)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyVector {
    pub exponents: Vec<i32>,
}

impl HomologyVector {
    pub fn zero(rank: usize) -> Self {
        Self {
            exponents: vec![0; rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

impl Add for &HomologyVector {
    type Output = HomologyVector;

    fn add(self, rhs: &HomologyVector) -> HomologyVector {
        HomologyVector {
            exponents: self
                .exponents
                .iter()
                .zip(&rhs.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Exponent-sum vector of a word in a rank-`2·genus` free abelian group.
pub fn abelianize(w: &Word, genus: usize) -> Result<HomologyVector> {
    let mut h = HomologyVector::zero(2 * genus);
    for &l in w.letters() {
        let k = l.unsigned_abs() as usize;
        if k == 0 || k > 2 * genus {
            return Err(GeoError::InvalidGenerator {
                index: l as i32,
                generators: 2 * genus,
            });
        }
        h.exponents[k - 1] += l.signum() as i32;
    }
    Ok(h)
}

/// A homomorphism `H₁(M, ℤ) → ∏ ℤ/mᵢ`, whose kernel is the finite-index
/// subgroup `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CosetScheme {
    /// Reduction of every exponent mod `modulus`; index `modulus^(2g)`.
    ModM { modulus: u32 },
    /// `images[k]` is the image of generator `k`, one residue per modulus.
    Homomorphism {
        moduli: Vec<u32>,
        images: Vec<Vec<i64>>,
    },
}

/// Coset of `G` in `H₁(M, ℤ)`, given by its residues in the codomain.
pub type CosetId = Vec<u32>;

impl CosetScheme {
    pub fn mod_m(modulus: u32) -> Self {
        CosetScheme::ModM { modulus }
    }

    /// Index-2 scheme recording the parity of the first generator.
    pub fn index_two(genus: usize) -> Self {
        let mut images = vec![vec![0]; 2 * genus];
        images[0] = vec![1];
        CosetScheme::Homomorphism {
            moduli: vec![2],
            images,
        }
    }

    /// The trivial scheme: index 1, every loop closes in the cover.
    pub fn trivial() -> Self {
        CosetScheme::Homomorphism {
            moduli: vec![],
            images: vec![],
        }
    }

    pub fn validate(&self, genus: usize) -> Result<()> {
        match self {
            CosetScheme::ModM { modulus } => {
                if *modulus == 0 {
                    return Err(GeoError::InvalidScheme("modulus must be positive".into()));
                }
                if (*modulus as f64).powi(2 * genus as i32) > 1e9 {
                    return Err(GeoError::InvalidScheme("index too large".into()));
                }
            }
            CosetScheme::Homomorphism { moduli, images } => {
                if moduli.contains(&0) {
                    return Err(GeoError::InvalidScheme("moduli must be positive".into()));
                }
                if moduli.iter().map(|&m| m as f64).product::<f64>() > 1e9 {
                    return Err(GeoError::InvalidScheme("index too large".into()));
                }
                if !moduli.is_empty() {
                    if images.len() != 2 * genus {
                        return Err(GeoError::InvalidScheme(format!(
                            "expected {} generator images, got {}",
                            2 * genus,
                            images.len()
                        )));
                    }
                    if images.iter().any(|im| im.len() != moduli.len()) {
                        return Err(GeoError::InvalidScheme(
                            "each image needs one residue per modulus".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Moduli of the codomain factors.
    pub fn moduli(&self, genus: usize) -> Vec<u32> {
        match self {
            CosetScheme::ModM { modulus } => vec![*modulus; 2 * genus],
            CosetScheme::Homomorphism { moduli, .. } => moduli.clone(),
        }
    }

    pub fn index(&self, genus: usize) -> usize {
        self.moduli(genus).iter().map(|&m| m as usize).product()
    }

    pub fn coset_of_homology(&self, h: &HomologyVector) -> CosetId {
        match self {
            CosetScheme::ModM { modulus } => h
                .exponents
                .iter()
                .map(|&e| e.rem_euclid(*modulus as i32) as u32)
                .collect(),
            CosetScheme::Homomorphism { moduli, images } => moduli
                .iter()
                .enumerate()
                .map(|(j, &m)| {
                    let s: i64 = h
                        .exponents
                        .iter()
                        .zip(images)
                        .map(|(&e, im)| e as i64 * im[j])
                        .sum();
                    s.rem_euclid(m as i64) as u32
                })
                .collect(),
        }
    }

    pub fn coset_of(&self, w: &Word, genus: usize) -> Result<CosetId> {
        Ok(self.coset_of_homology(&abelianize(w, genus)?))
    }

    /// Mixed-radix position of a coset in [`CosetScheme::cosets`].
    pub fn position(&self, id: &CosetId, genus: usize) -> usize {
        let mut pos = 0usize;
        for (&r, &m) in id.iter().zip(&self.moduli(genus)) {
            pos = pos * m as usize + r as usize;
        }
        pos
    }

    /// All cosets in lexicographic order; the identity coset comes first.
    pub fn cosets(&self, genus: usize) -> Vec<CosetId> {
        let moduli = self.moduli(genus);
        let mut out = vec![Vec::new()];
        for &m in &moduli {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..m).map(move |r| {
                        let mut p = prefix.clone();
                        p.push(r);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn describe(&self) -> String {
        match self {
            CosetScheme::ModM { modulus } => format!("mod-{modulus}"),
            CosetScheme::Homomorphism { moduli, .. } if moduli.is_empty() => "trivial".into(),
            CosetScheme::Homomorphism { moduli, .. } => format!("hom{moduli:?}"),
        }
    }
}

pub fn format_coset(id: &CosetId) -> String {
    let parts: Vec<String> = id.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(","))
}

/// A group element with its matrix and the orbit data used by the census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub word: Word,
    pub map: MoebiusMap,
}

impl GroupElement {
    pub fn displacement(&self) -> f64 {
        self.map.displacement()
    }
}

/// Side pairing presentation of a closed orientable surface group.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    genus: usize,
    relator: Word,
    generators: Vec<MoebiusMap>,
    inverses: Vec<MoebiusMap>,
    inradius: f64,
}

/// Interior angle of the regular `n`-gon centred at 0 whose side midpoints lie
/// at hyperbolic distance `inradius`.
pub fn regular_polygon_angle(n: usize, inradius: f64) -> f64 {
    let x0 = (0.5 * inradius).tanh();
    let c = (1.0 + x0 * x0) / (2.0 * x0);
    let r = (1.0 - x0 * x0) / (2.0 * x0);
    let s = (PI / n as f64).sin();
    let cos_radii = 1.0 - 2.0 * (c / r).powi(2) * s * s;
    if cos_radii <= -1.0 {
        return 0.0;
    }
    PI - cos_radii.acos()
}

/// Inradius of the regular `n`-gon with the given interior angle, by bisection.
pub fn solve_inradius(n: usize, interior_angle: f64) -> Result<f64> {
    let euclid = PI * (n as f64 - 2.0) / n as f64;
    if !(interior_angle > 0.0 && interior_angle < euclid) {
        return Err(GeoError::InvalidArgument(format!(
            "no hyperbolic regular {n}-gon has interior angle {interior_angle}"
        )));
    }
    // Bisect down to adjacent floats: generator errors are amplified by e^{d/2}
    // in long products, so the loose stopping rule is not enough for dedup.
    let (mut lo, mut hi) = (1e-9, 40.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if regular_polygon_angle(n, mid) > interior_angle {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Isometry carrying side `from` onto side `to` of the regular `n`-gon and the
/// polygon onto its neighbour across side `to`.
fn side_pairing(n: usize, inradius: f64, from: usize, to: usize) -> MoebiusMap {
    let mid = |k: usize| TAU * k as f64 / n as f64;
    MoebiusMap::rotation(mid(to))
        .compose(&MoebiusMap::translation(2.0 * inradius))
        .compose(&MoebiusMap::rotation(PI - mid(from)))
}

pub fn build_genus_two_group() -> GroupPresentation {
    build_surface_group(2).expect("genus 2 is valid")
}

pub fn build_surface_group(genus: usize) -> Result<GroupPresentation> {
    if genus < 2 {
        return Err(GeoError::InvalidArgument(format!(
            "genus must be at least 2, got {genus}"
        )));
    }
    let n = 4 * genus;
    let inradius = solve_inradius(n, TAU / n as f64)?;
    let mut generators = Vec::with_capacity(2 * genus);
    let mut relator = Vec::with_capacity(n);
    for j in 0..genus {
        // a_j carries side 4j+2 onto side 4j, b_j carries side 4j+1 onto side 4j+3.
        generators.push(side_pairing(n, inradius, 4 * j + 2, 4 * j));
        generators.push(side_pairing(n, inradius, 4 * j + 1, 4 * j + 3));
        let (a, b) = ((2 * j + 1) as Letter, (2 * j + 2) as Letter);
        relator.extend([a, b, -a, -b]);
    }
    let inverses = generators.iter().map(|g| g.inverse()).collect();
    Ok(GroupPresentation {
        genus,
        relator: Word::from_reduced(relator),
        generators,
        inverses,
        inradius,
    })
}

impl GroupPresentation {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn sides(&self) -> usize {
        4 * self.genus
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Hyperbolic distance from the origin to each side midpoint.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn generator_maps(&self) -> &[MoebiusMap] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.rank() as Letter)
            .map(|l| letter_name(self.genus, l))
            .collect()
    }

    /// All letters in expansion order `1, -1, 2, -2, …`.
    pub fn letters(&self) -> Vec<Letter> {
        (1..=self.rank() as Letter).flat_map(|k| [k, -k]).collect()
    }

    pub fn generator(&self, letter: Letter) -> Result<&MoebiusMap> {
        let k = letter.unsigned_abs() as usize;
        if k == 0 || k > self.rank() {
            return Err(GeoError::InvalidGenerator {
                index: letter as i32,
                generators: self.rank(),
            });
        }
        Ok(if letter > 0 {
            &self.generators[k - 1]
        } else {
            &self.inverses[k - 1]
        })
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<MoebiusMap> {
        let mut m = MoebiusMap::IDENTITY;
        for &l in w.letters() {
            m = m.compose(self.generator(l)?);
        }
        Ok(m)
    }

    pub fn element(&self, w: &Word) -> Result<GroupElement> {
        Ok(GroupElement {
            word: w.clone(),
            map: self.evaluate_word(w)?,
        })
    }

    pub fn abelianize(&self, w: &Word) -> Result<HomologyVector> {
        abelianize(w, self.genus)
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word(self.genus, w)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let w = parse_word(self.genus, s)?;
        Ok(w)
    }

    /// Projective distance of the relator product from the identity.
    pub fn relator_residual(&self) -> f64 {
        self.evaluate_word(&self.relator)
            .expect("relator letters are valid")
            .projective_distance(&MoebiusMap::IDENTITY)
    }

    /// Common generator displacement `d(0, g·0) = 2·inradius`.
    pub fn generator_displacement(&self) -> f64 {
        self.generators[0].displacement()
    }

    /// Sum of the interior angles recomputed from the polygon geometry.
    pub fn vertex_angle_sum(&self) -> f64 {
        self.sides() as f64 * regular_polygon_angle(self.sides(), self.inradius)
    }

    /// Short digest of the genus, relator and generator matrices.
    pub fn fingerprint(&self) -> [u8; 8] {
        let mut h = Sha256::new();
        h.update((self.genus as u64).to_le_bytes());
        for &l in self.relator.letters() {
            h.update([l as u8]);
        }
        for g in &self.generators {
            for x in g.entries() {
                h.update(x.to_le_bytes());
            }
        }
        let digest = h.finalize();
        let mut out = [0u8; 8];
        out.copy_from_slice(&digest[..8]);
        out
    }

    pub fn fingerprint_hex(&self) -> String {
        hex_encode(&self.fingerprint())
    }

    pub fn dump(&self) -> PresentationDump {
        PresentationDump {
            genus: self.genus,
            relator: self.format_word(&self.relator),
            relator_residual: self.relator_residual(),
            inradius: self.inradius,
            vertex_angle_sum: self.vertex_angle_sum(),
            fingerprint: self.fingerprint_hex(),
            generators: self
                .generators
                .iter()
                .zip(self.generator_names())
                .map(|(g, name)| GeneratorDump {
                    name,
                    matrix: g.entries(),
                    displacement: g.displacement(),
                    translation_length: g.translation_length(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.dump()).expect("dump is serializable")
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{} | {}>",
            self.generator_names().join(", "),
            self.format_word(&self.relator)
        )
    }
}

pub(crate) fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorDump {
    pub name: String,
    pub matrix: [f64; 4],
    pub displacement: f64,
    pub translation_length: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationDump {
    pub genus: usize,
    pub relator: String,
    pub relator_residual: f64,
    pub inradius: f64,
    pub vertex_angle_sum: f64,
    pub fingerprint: String,
    pub generators: Vec<GeneratorDump>,
}
