use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance block embedded in every output file.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_fingerprint: String,
}

impl Meta {
    pub fn comments(&self) -> Vec<String> {
        vec![
            format!("{} {}", self.tool, self.version),
            format!("command {}", self.command),
            format!("config {}", self.config_fingerprint),
        ]
    }
}

/// Digest of the resolved configuration. The output directory is excluded
/// so relocating a run does not change it.
pub fn fingerprint(cfg: &RunConfig) -> [u8; 8] {
    let mut c = cfg.clone();
    c.output.dir = PathBuf::new();
    let text = toml::to_string(&c).expect("configuration serializes");
    let digest = Sha256::digest(text.as_bytes());
    let mut out = [0u8; 8];
    out.copy_from_slice(&digest[..8]);
    out
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Sink {
    pub dir: PathBuf,
    pub meta: Meta,
}

impl Sink {
    pub fn new(cfg: &RunConfig, command: &str) -> anyhow::Result<Self> {
        fs::create_dir_all(&cfg.output.dir)
            .map_err(|e| anyhow::anyhow!("cannot create {}: {e}", cfg.output.dir.display()))?;
        Ok(Self {
            dir: cfg.output.dir.clone(),
            meta: Meta {
                tool: "geoloop",
                version: VERSION,
                command: command.to_string(),
                config_fingerprint: hex(&fingerprint(cfg)),
            },
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn create(&self, name: &str) -> anyhow::Result<(PathBuf, BufWriter<fs::File>)> {
        let path = self.path(name);
        let f = fs::File::create(&path)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
        Ok((path, BufWriter::new(f)))
    }

    /// Writes `{"meta": …, "<key>": value}` with a trailing newline.
    pub fn json<T: Serialize>(&self, name: &str, key: &str, value: &T) -> anyhow::Result<PathBuf> {
        let mut doc = serde_json::Map::new();
        doc.insert("meta".into(), serde_json::to_value(&self.meta)?);
        doc.insert(key.into(), serde_json::to_value(value)?);
        let (path, mut w) = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        w.flush()?;
        Ok(path)
    }
}

/// Gnuplot script plotting each data file on a log scale.
pub fn gnuplot_script(title: &str, data: &[(String, String)], out: &Path) -> String {
    let mut s = String::new();
    s.push_str("set terminal pngcairo size 900,600\n");
    s.push_str(&format!("set output '{}'\n", out.display()));
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str("set xlabel 't'\nset ylabel 'count'\nset logscale y\nset key left top\n");
    let plots: Vec<String> = data
        .iter()
        .map(|(file, label)| format!("'{file}' using 1:2 with lines title '{label}'"))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s
}
