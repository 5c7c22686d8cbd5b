use super::CliError;
use crate::construction::{build_generator_in, make_params, AlphaPolicy, GeneratorMatrix};
use crate::field::{BaseField, ExtField};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn shard_filename(index: usize) -> String {
    format!("shard_{index:03}.bin")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    /// `prime:<p>` or `gf2:<s>`.
    pub base: String,
    /// Extension modulus, constant term first.
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    pub field: FieldDescriptor,
    pub alphas: Vec<u32>,
    pub original_length: u64,
    pub stripe_count: u64,
    /// CRC-32 of the original file.
    pub checksum: u32,
    pub shard_filenames: Vec<String>,
}

impl Manifest {
    pub fn describe(gm: &GeneratorMatrix, original_length: u64, stripe_count: u64, checksum: u32) -> Self {
        let p = gm.params();
        Manifest {
            format_version: FORMAT_VERSION,
            n: p.n(),
            k: p.k(),
            r: p.r(),
            delta: p.delta(),
            field: FieldDescriptor { base: p.base().to_string(), modulus: gm.field().modulus().to_vec() },
            alphas: p.alphas().to_vec(),
            original_length,
            stripe_count,
            checksum,
            shard_filenames: (0..p.n()).map(shard_filename).collect(),
        }
    }

    /// Re-validates every field and rebuilds the generator.
    pub fn generator(&self) -> Result<GeneratorMatrix, CliError> {
        let bad = |msg: String| CliError::Integrity(format!("manifest: {msg}"));
        if self.format_version != FORMAT_VERSION {
            return Err(bad(format!("unsupported format_version {}", self.format_version)));
        }
        let base: BaseField = self.field.base.parse().map_err(|e| bad(format!("{e}")))?;
        let params =
            make_params(self.n, self.k, self.r, self.delta, base.clone(), AlphaPolicy::Explicit(self.alphas.clone()))
                .map_err(|e| bad(e.to_string()))?;
        let field = ExtField::new(base, self.field.modulus.clone()).map_err(|e| bad(e.to_string()))?;
        let gm = build_generator_in(&params, field).map_err(|e| bad(e.to_string()))?;
        if self.shard_filenames.len() != self.n {
            return Err(bad(format!("{} shard names for n = {}", self.shard_filenames.len(), self.n)));
        }
        if let Some(name) = self.shard_filenames.iter().find(|s| s.contains(['/', '\\']) || s.as_str() == "..") {
            return Err(bad(format!("shard name {name:?} is not a plain file name")));
        }
        let capacity = self.stripe_count as u128
            * (self.k * gm.field().degree()) as u128
            * u128::from(gm.params().base().data_bits());
        if capacity < u128::from(self.original_length) * 8 {
            return Err(bad(format!("{} stripes cannot hold {} bytes", self.stripe_count, self.original_length)));
        }
        Ok(gm)
    }

    /// Bytes per shard: `stripe_count · e · bytes_per_symbol`.
    pub fn shard_len(&self, gm: &GeneratorMatrix) -> u64 {
        self.stripe_count * (gm.field().degree() * gm.params().base().bytes_per_symbol()) as u64
    }

    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Integrity(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}
