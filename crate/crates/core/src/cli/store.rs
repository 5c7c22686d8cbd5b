//! Shard directories: encoding a file, decoding it back, repairing shards.
//!
//! Stripe `s` holds `k·e` base symbols of the file (`k` extension symbols of
//! `e` coefficients each, constant term first) and contributes coded symbol
//! `i` to shard `i`. Every base symbol is stored as `bytes_per_symbol`
//! little-endian bytes.

use super::manifest::{shard_filename, Manifest};
use super::pack::{pack_bits, unpack_bits};
use super::CliError;
use crate::codec::{encode, CodecError, Decoder, LocalRepairPlan, Message, RepairPath};
use crate::construction::{build_generator, CodeParams, GeneratorMatrix};
use crate::field::{linalg, ExtElem, ExtField};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::io(path, e))
}

fn symbol_bytes(field: &ExtField) -> usize {
    field.degree() * field.base().bytes_per_symbol()
}

fn put_symbol(out: &mut Vec<u8>, s: &ExtElem, bps: usize) {
    for c in s.coeffs() {
        out.extend_from_slice(&c.to_le_bytes()[..bps]);
    }
}

fn get_symbol(field: &ExtField, bytes: &[u8], index: usize) -> Result<ExtElem, CliError> {
    let bps = field.base().bytes_per_symbol();
    let coeffs =
        bytes.chunks_exact(bps).map(|c| c.iter().rev().fold(0u32, |acc, &b| acc << 8 | u32::from(b))).collect();
    field.elem(coeffs).map_err(|e| CliError::Integrity(format!("{}: {e}", shard_filename(index))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeOutcome {
    pub manifest: Manifest,
}

/// Encodes `input` into `out_dir` (created if needed) as `n` shards plus a
/// manifest.
pub fn encode_file(input: &Path, out_dir: &Path, params: &CodeParams) -> Result<EncodeOutcome, CliError> {
    let data = read_file(input)?;
    let gm = build_generator(params)?;
    let field = gm.field();
    let base = field.base();
    let (k, n, e) = (params.k(), params.n(), field.degree());
    let per_stripe = k * e;

    let mut symbols = pack_bits(&data, base.data_bits());
    let stripe_count = symbols.len().div_ceil(per_stripe);
    symbols.resize(stripe_count * per_stripe, 0);

    let codewords: Vec<Vec<ExtElem>> = symbols
        .par_chunks(per_stripe)
        .map(|stripe| {
            let msg: Vec<ExtElem> =
                stripe.chunks(e).map(|c| field.elem(c.to_vec()).expect("packed symbols fit")).collect();
            let msg = Message::new(&gm, msg).expect("k symbols per stripe");
            encode(&gm, &msg).expect("message length checked").into_symbols()
        })
        .collect();

    let bps = base.bytes_per_symbol();
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let manifest = Manifest::describe(&gm, data.len() as u64, stripe_count as u64, crc32fast::hash(&data));
    (0..n).into_par_iter().try_for_each(|i| {
        let mut shard = Vec::with_capacity(stripe_count * symbol_bytes(field));
        for cw in &codewords {
            put_symbol(&mut shard, &cw[i], bps);
        }
        write_file(&out_dir.join(&manifest.shard_filenames[i]), &shard)
    })?;
    manifest.save(out_dir)?;
    Ok(EncodeOutcome { manifest })
}

/// Shards present with the expected length. Anything else counts as lost.
fn intact_shards(dir: &Path, manifest: &Manifest, gm: &GeneratorMatrix) -> Vec<bool> {
    let want = manifest.shard_len(gm);
    manifest
        .shard_filenames
        .iter()
        .map(|name| std::fs::metadata(dir.join(name)).is_ok_and(|m| m.is_file() && m.len() == want))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Shards that were read.
    pub read: Vec<usize>,
    pub missing: Vec<usize>,
    pub length: u64,
}

/// Rebuilds the original file from the shards in `dir` and checks its CRC.
pub fn decode_dir(dir: &Path, output: &Path) -> Result<DecodeOutcome, CliError> {
    let manifest = Manifest::load(dir)?;
    let gm = manifest.generator()?;
    let field = gm.field();
    let intact = intact_shards(dir, &manifest, &gm);
    let available: Vec<usize> = (0..manifest.n).filter(|&i| intact[i]).collect();
    let missing: Vec<usize> = (0..manifest.n).filter(|&i| !intact[i]).collect();
    let decoder = Decoder::new(&gm, &available).map_err(|e| match e {
        CodecError::RankDeficient { rank, k, .. } => CliError::Insufficient(format!(
            "surviving shards {available:?} have rank {rank} < k = {k} (missing {missing:?})"
        )),
        other => CliError::Integrity(other.to_string()),
    })?;

    let shards: BTreeMap<usize, Vec<u8>> = decoder
        .pivots()
        .iter()
        .map(|&i| Ok((i, read_file(&dir.join(&manifest.shard_filenames[i]))?)))
        .collect::<Result<_, CliError>>()?;
    let sb = symbol_bytes(field);
    let stripes: Vec<Vec<u32>> = (0..manifest.stripe_count as usize)
        .into_par_iter()
        .map(|s| {
            let mut symbols = BTreeMap::new();
            for (&i, bytes) in &shards {
                symbols.insert(i, get_symbol(field, &bytes[s * sb..(s + 1) * sb], i)?);
            }
            let msg = decoder.decode_with(|i| symbols[&i].clone());
            Ok(msg.into_symbols().into_iter().flat_map(ExtElem::into_coeffs).collect())
        })
        .collect::<Result<_, CliError>>()?;
    let symbols: Vec<u32> = stripes.into_iter().flatten().collect();
    let data = unpack_bits(&symbols, field.base().data_bits(), manifest.original_length as usize);
    if data.len() as u64 != manifest.original_length {
        return Err(CliError::Integrity("decoded data is shorter than original_length".into()));
    }
    let crc = crc32fast::hash(&data);
    if crc != manifest.checksum {
        return Err(CliError::Integrity(format!(
            "checksum mismatch: manifest {:08x}, decoded {crc:08x}",
            manifest.checksum
        )));
    }
    write_file(output, &data)?;
    Ok(DecodeOutcome { read: decoder.pivots().to_vec(), missing, length: manifest.original_length })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOutcome {
    pub rebuilt: Vec<usize>,
    /// Every shard read, in the order read.
    pub read: Vec<usize>,
    pub path: RepairPath,
}

/// Rewrites the shards in `targets`, whether or not they currently exist.
///
/// Targets are handled per repair group from the group's own survivors. If
/// a group has lost more than `δ - 1` shards the repair fails with an
/// insufficient-shards error, unless `allow_global` is set, in which case
/// that group is rebuilt through a full decode.
pub fn repair_shards(dir: &Path, targets: &[usize], allow_global: bool) -> Result<Vec<RepairOutcome>, CliError> {
    let manifest = Manifest::load(dir)?;
    let gm = manifest.generator()?;
    let params = gm.params();
    if let Some(&t) = targets.iter().find(|&&t| t >= params.n()) {
        return Err(CliError::Params(format!("shard index {t} out of range for n = {}", params.n())));
    }
    let intact = intact_shards(dir, &manifest, &gm);
    let usable = |i: usize| intact[i] && !targets.contains(&i);

    let mut by_group: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &t in targets {
        let g = by_group.entry(params.group_of(t)).or_default();
        if !g.contains(&t) {
            g.push(t);
        }
    }
    let mut outcomes = Vec::new();
    for (group, mut group_targets) in by_group {
        group_targets.sort_unstable();
        let outcome = match LocalRepairPlan::new(&gm, group, &group_targets, usable) {
            Ok(plan) => repair_local_group(dir, &manifest, &gm, &plan)?,
            Err(CodecError::TooManyLocalErasures { erased, tolerated, .. }) => {
                if !allow_global {
                    return Err(CliError::Insufficient(format!(
                        "repair group {group} has lost {erased} shards, local repair tolerates {tolerated}"
                    )));
                }
                let available: Vec<usize> = (0..params.n()).filter(|&i| usable(i)).collect();
                repair_global(dir, &manifest, &gm, &available, &group_targets)?
            }
            Err(e) => return Err(CliError::Params(e.to_string())),
        };
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

fn repair_local_group(
    dir: &Path,
    manifest: &Manifest,
    gm: &GeneratorMatrix,
    plan: &LocalRepairPlan,
) -> Result<RepairOutcome, CliError> {
    let field = gm.field();
    let sb = symbol_bytes(field);
    let bps = field.base().bytes_per_symbol();
    let sources: Vec<Vec<u8>> =
        plan.reads().iter().map(|&i| read_file(&dir.join(&manifest.shard_filenames[i]))).collect::<Result<_, _>>()?;
    let per_stripe: Vec<Vec<ExtElem>> = (0..manifest.stripe_count as usize)
        .into_par_iter()
        .map(|s| {
            let vals = sources
                .iter()
                .zip(plan.reads())
                .map(|(bytes, &i)| get_symbol(field, &bytes[s * sb..(s + 1) * sb], i))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(plan.apply(&vals))
        })
        .collect::<Result<_, CliError>>()?;
    write_rebuilt(dir, manifest, plan.targets(), &per_stripe, bps)?;
    Ok(RepairOutcome { rebuilt: plan.targets().to_vec(), read: plan.reads().to_vec(), path: RepairPath::Local })
}

fn repair_global(
    dir: &Path,
    manifest: &Manifest,
    gm: &GeneratorMatrix,
    available: &[usize],
    targets: &[usize],
) -> Result<RepairOutcome, CliError> {
    let field = gm.field();
    let decoder = Decoder::new(gm, available).map_err(|e| CliError::Insufficient(e.to_string()))?;
    let sb = symbol_bytes(field);
    let bps = field.base().bytes_per_symbol();
    let cols = gm.matrix().select_columns(targets);
    let sources: BTreeMap<usize, Vec<u8>> = decoder
        .pivots()
        .iter()
        .map(|&i| Ok((i, read_file(&dir.join(&manifest.shard_filenames[i]))?)))
        .collect::<Result<_, CliError>>()?;
    let per_stripe: Vec<Vec<ExtElem>> = (0..manifest.stripe_count as usize)
        .into_par_iter()
        .map(|s| {
            let mut symbols = BTreeMap::new();
            for (&i, bytes) in &sources {
                symbols.insert(i, get_symbol(field, &bytes[s * sb..(s + 1) * sb], i)?);
            }
            let msg = decoder.decode_with(|i| symbols[&i].clone());
            Ok(linalg::vec_mul(field, msg.symbols(), &cols))
        })
        .collect::<Result<_, CliError>>()?;
    write_rebuilt(dir, manifest, targets, &per_stripe, bps)?;
    Ok(RepairOutcome { rebuilt: targets.to_vec(), read: decoder.pivots().to_vec(), path: RepairPath::Global })
}

fn write_rebuilt(
    dir: &Path,
    manifest: &Manifest,
    targets: &[usize],
    per_stripe: &[Vec<ExtElem>],
    bps: usize,
) -> Result<(), CliError> {
    for (j, &t) in targets.iter().enumerate() {
        let mut shard = Vec::new();
        for stripe in per_stripe {
            put_symbol(&mut shard, &stripe[j], bps);
        }
        write_file(&dir.join(&manifest.shard_filenames[t]), &shard)?;
    }
    Ok(())
}
