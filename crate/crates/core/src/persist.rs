//! Census container, format version 1. All integers and floats little-endian.
//!
//! ```text
//! header   magic "GLCENSUS" | version u32 | flags u32 (bit 0: partial)
//!          presentation [u8; 8] | config [u8; 8] | genus u32 | word capacity u32
//!          radius f64 | slack f64 | record count u64 | stats u64 × 8
//! record   displacement, x, y, outgoing, incoming, a, b, c, d: f64
//!          homology i32 × 2·genus | word length u16 | letters i8 × capacity
//! trailer  SHA-256 of every preceding byte
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::census::{CensusError, CensusSnapshot, DedupStats, OrbitRecord};
use crate::group::{format_word, HomologyVector, Word};
use crate::hyperbolic::{DiskPoint, MoebiusMap};

pub const MAGIC: &[u8; 8] = b"GLCENSUS";
pub const FORMAT_VERSION: u32 = 1;
/// Fixed letter capacity per record.
pub const WORD_CAPACITY: usize = 64;

const HEADER_LEN: usize = 8 + 4 + 4 + 8 + 8 + 4 + 4 + 8 + 8 + 8 + 8 * DedupStats::FIELDS;
const CHECKSUM_LEN: usize = 32;

fn record_len(genus: usize) -> usize {
    9 * 8 + 4 * 2 * genus + 2 + WORD_CAPACITY
}

pub fn encode_census(s: &CensusSnapshot) -> Result<Vec<u8>, CensusError> {
    let rank = 2 * s.genus;
    let mut out = Vec::with_capacity(HEADER_LEN + s.len() * record_len(s.genus) + CHECKSUM_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(s.partial as u32).to_le_bytes());
    out.extend_from_slice(&s.presentation);
    out.extend_from_slice(&s.config);
    out.extend_from_slice(&(s.genus as u32).to_le_bytes());
    out.extend_from_slice(&(WORD_CAPACITY as u32).to_le_bytes());
    out.extend_from_slice(&s.radius.to_le_bytes());
    out.extend_from_slice(&s.slack.to_le_bytes());
    out.extend_from_slice(&(s.len() as u64).to_le_bytes());
    for v in s.stats.to_array() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for r in &s.records {
        if r.word.len() > WORD_CAPACITY {
            return Err(CensusError::Malformed(format!(
                "word of length {} exceeds the record capacity {WORD_CAPACITY}",
                r.word.len()
            )));
        }
        if r.homology.exponents.len() != rank {
            return Err(CensusError::Malformed("homology rank mismatch".into()));
        }
        let [a, b, c, d] = r.map.entries();
        for v in [
            r.displacement,
            r.orbit_point.x(),
            r.orbit_point.y(),
            r.outgoing,
            r.incoming,
            a,
            b,
            c,
            d,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for &e in &r.homology.exponents {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out.extend_from_slice(&(r.word.len() as u16).to_le_bytes());
        let mut letters = [0u8; WORD_CAPACITY];
        for (slot, &l) in letters.iter_mut().zip(r.word.letters()) {
            *slot = l as u8;
        }
        out.extend_from_slice(&letters);
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], CensusError> {
        let end = self.pos + N;
        let bytes = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| CensusError::Malformed("unexpected end of data".into()))?;
        self.pos = end;
        Ok(bytes.try_into().expect("slice has length N"))
    }

    fn u16(&mut self) -> Result<u16, CensusError> {
        Ok(u16::from_le_bytes(self.take()?))
    }

    fn u32(&mut self) -> Result<u32, CensusError> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn i32(&mut self) -> Result<i32, CensusError> {
        Ok(i32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64, CensusError> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64, CensusError> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn decode_census(bytes: &[u8]) -> Result<CensusSnapshot, CensusError> {
    if bytes.len() < MAGIC.len() + 4 {
        return Err(CensusError::ChecksumMismatch);
    }
    if &bytes[..8] != MAGIC {
        return Err(CensusError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(CensusError::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER_LEN + CHECKSUM_LEN {
        return Err(CensusError::ChecksumMismatch);
    }
    let (body, checksum) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    if Sha256::digest(body).as_slice() != checksum {
        return Err(CensusError::ChecksumMismatch);
    }
    let mut r = Reader { buf: body, pos: 12 };
    let flags = r.u32()?;
    let presentation = r.take::<8>()?;
    let config = r.take::<8>()?;
    let genus = r.u32()? as usize;
    let capacity = r.u32()? as usize;
    if capacity != WORD_CAPACITY || genus < 2 {
        return Err(CensusError::Malformed("unexpected record layout".into()));
    }
    let radius = r.f64()?;
    let slack = r.f64()?;
    let count = r.u64()? as usize;
    let mut stats = [0u64; DedupStats::FIELDS];
    for v in &mut stats {
        *v = r.u64()?;
    }
    if body.len() != HEADER_LEN + count * record_len(genus) {
        return Err(CensusError::Malformed(
            "record count does not match length".into(),
        ));
    }
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        let mut f = [0.0; 9];
        for v in &mut f {
            *v = r.f64()?;
        }
        let exponents = (0..2 * genus)
            .map(|_| r.i32())
            .collect::<Result<Vec<_>, _>>()?;
        let len = r.u16()? as usize;
        let letters = r.take::<WORD_CAPACITY>()?;
        if len > WORD_CAPACITY {
            return Err(CensusError::Malformed(
                "word length exceeds capacity".into(),
            ));
        }
        let word = Word::new(letters[..len].iter().map(|&b| b as i8))
            .map_err(|e| CensusError::Malformed(e.to_string()))?;
        let orbit_point =
            DiskPoint::new(f[1], f[2]).map_err(|e| CensusError::Malformed(e.to_string()))?;
        records.push(OrbitRecord {
            word,
            map: MoebiusMap::from_raw([f[5], f[6], f[7], f[8]]),
            orbit_point,
            displacement: f[0],
            outgoing: f[3],
            incoming: f[4],
            homology: HomologyVector { exponents },
        });
    }
    Ok(CensusSnapshot {
        presentation,
        config,
        genus,
        radius,
        slack,
        partial: flags & 1 == 1,
        records,
        stats: DedupStats::from_array(stats),
    })
}

pub fn save_census(path: &Path, s: &CensusSnapshot) -> Result<(), CensusError> {
    let bytes = encode_census(s)?;
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    f.sync_all()?;
    Ok(())
}

pub fn load_census(path: &Path) -> Result<CensusSnapshot, CensusError> {
    decode_census(&fs::read(path)?)
}

/// CSV export with one row per record. `comments` are written first as
/// `# ` lines.
pub fn export_csv<W: Write>(
    s: &CensusSnapshot,
    mut out: W,
    comments: &[String],
) -> Result<(), CensusError> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "word".to_string(),
        "displacement".into(),
        "outgoing_angle".into(),
        "incoming_angle".into(),
    ];
    header.extend((1..=2 * s.genus).map(|k| format!("h{k}")));
    w.write_record(&header)?;
    for r in &s.records {
        let mut row = vec![
            format_word(s.genus, &r.word),
            format!("{:.12}", r.displacement),
            format!("{:.12}", r.outgoing),
            format!("{:.12}", r.incoming),
        ];
        row.extend(r.homology.exponents.iter().map(|e| e.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
