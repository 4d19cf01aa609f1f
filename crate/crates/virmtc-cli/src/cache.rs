//! On-disk cache of fusion rings and exact S kernels, keyed by (p, q, schema).
//!
//! A cache file that fails to parse, carries another stamp, or does not fit the
//! model is ignored and rewritten. Outputs never depend on whether it was hit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use virmtc::exactmath::{CycloNumber, ExactMatrix};
use virmtc::fusion::{FusionRing, MinimalRing};
use virmtc::minimal_model::MinimalModel;
use virmtc::modular_data::ModularData;
use virmtc::subcat::Ambient;
use virmtc::Error;

pub const SCHEMA_VERSION: u32 = 1;
const STAMP: &str = concat!("virmtc ", env!("CARGO_PKG_VERSION"));

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    stamp: String,
    p: i64,
    q: i64,
    fusion: FusionRing,
    #[serde(rename = "S_kernel")]
    s_kernel: Vec<Vec<CycloNumber>>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// VIRMTC_CACHE overrides the platform cache directory; "off" or "" disables caching.
    pub fn from_env(disabled: bool) -> Self {
        if disabled {
            return Cache { dir: None };
        }
        let dir = match std::env::var_os("VIRMTC_CACHE") {
            Some(v) if v.is_empty() || v == "off" => None,
            Some(v) => Some(PathBuf::from(v)),
            None => dirs::cache_dir().map(|d| d.join("virmtc")),
        };
        Cache { dir }
    }

    fn path(&self, m: &MinimalModel) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        Some(dir.join(format!("v{SCHEMA_VERSION}")).join(format!("{}_{}.json", m.p(), m.q())))
    }

    pub fn ambient(&self, m: &MinimalModel) -> Result<Ambient, Error> {
        let Some(path) = self.path(m) else {
            return Ok(Ambient::new(*m));
        };
        if let Some(amb) = load(&path, m) {
            return Ok(amb);
        }
        let amb = Ambient::new(*m);
        // a cache that cannot be written is not an error
        let _ = store(&path, &amb);
        Ok(amb)
    }
}

fn load(path: &Path, m: &MinimalModel) -> Option<Ambient> {
    let text = fs::read_to_string(path).ok()?;
    let e: Entry = serde_json::from_str(&text).ok()?;
    if e.schema != SCHEMA_VERSION || e.stamp != STAMP || (e.p, e.q) != (m.p(), m.q()) {
        return None;
    }
    let ring = MinimalRing::from_ring(m, e.fusion).ok()?;
    let kernel = ExactMatrix::from_rows(e.s_kernel).ok()?;
    let md = ModularData::with_kernel(m, kernel).ok()?;
    Ambient::from_parts(ring, md).ok()
}

fn store(path: &Path, amb: &Ambient) -> std::io::Result<()> {
    let k = amb.modular_data().s_kernel();
    let entry = Entry {
        schema: SCHEMA_VERSION,
        stamp: STAMP.into(),
        p: amb.model().p(),
        q: amb.model().q(),
        fusion: amb.ring().ring().clone(),
        s_kernel: (0..k.rows()).map(|i| k.row(i).to_vec()).collect(),
    };
    fs::create_dir_all(path.parent().expect("cache path has a parent"))?;
    // write-then-rename so concurrent runs never see a torn file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&entry)?)?;
    fs::rename(tmp, path)
}
