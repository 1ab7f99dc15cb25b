//! Full model dumps. Layout (all integers and floats little-endian):
//!
//! ```text
//! magic        8 bytes   "SENSEFRG"
//! version      u32       format version (1)
//! manifest     u32 n, then n bytes of UTF-8 `key: value` lines
//! vocab_size   u64       V
//! vocabulary   V times:  u32 byte length, UTF-8 token, u64 count
//! global       V*dim     f32, row-major
//! output       V*dim     f32, row-major
//! has_senses   u8        1 when K > 1
//! senses       V*K*dim   f32, row (w, k) at index w*K + k
//! has_clusters u8        1 for MSSG models
//! centroids    V*K*dim   f64
//! counts       V*K       u64
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::manifest::{Format, ModelManifest, FORMAT_VERSION};
use super::Include;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::mssg::{Clusters, ModelKind, SenseModel};
use crate::sgns::EmbeddingTable;

pub const MAGIC: &[u8; 8] = b"SENSEFRG";

const MAX_TOKEN_BYTES: u32 = 1 << 20;

pub(crate) fn write_model<W: Write>(model: &SenseModel, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let manifest = ModelManifest::new(model, Format::Binary, Include::Both, model.vocab().len());
    let manifest = manifest.to_string();
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&(manifest.len() as u32).to_le_bytes())?;
    out.write_all(manifest.as_bytes())?;
    out.write_all(&(model.vocab().len() as u64).to_le_bytes())?;
    for (token, count) in model.vocab().entries() {
        out.write_all(&(token.len() as u32).to_le_bytes())?;
        out.write_all(token.as_bytes())?;
        out.write_all(&count.to_le_bytes())?;
    }
    write_f32s(&mut out, model.global().as_slice())?;
    write_f32s(&mut out, model.output().as_slice())?;
    match model.senses() {
        Some(s) => {
            out.write_all(&[1])?;
            write_f32s(&mut out, s.as_slice())?;
        }
        None => out.write_all(&[0])?,
    }
    match model.clusters() {
        Some(c) => {
            out.write_all(&[1])?;
            for v in &c.centroids {
                out.write_all(&v.to_le_bytes())?;
            }
            for n in &c.counts {
                out.write_all(&n.to_le_bytes())?;
            }
        }
        None => out.write_all(&[0])?,
    }
    out.flush()?;
    Ok(())
}

fn write_f32s<W: Write>(out: &mut W, values: &[f32]) -> Result<()> {
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a model written by [`write_model`]. Errors carry line 0: binary
/// files have no lines.
pub(crate) fn read_model(path: &Path) -> Result<SenseModel> {
    let file = File::open(path)?;
    let file_len = file.metadata()?.len();
    let mut inp = Reader {
        inner: BufReader::new(file),
        consumed: 0,
    };
    let mut magic = [0u8; 8];
    inp.bytes(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not a senseforge binary model"));
    }
    let version = inp.u32()?;
    if version != FORMAT_VERSION {
        return Err(bad(format!("unsupported format version {version}")));
    }
    let n = inp.u32()? as u64;
    if n > file_len {
        return Err(bad("manifest length exceeds file size"));
    }
    let mut text = vec![0u8; n as usize];
    inp.bytes(&mut text)?;
    let text = String::from_utf8(text).map_err(|_| bad("manifest is not UTF-8"))?;
    let manifest: ModelManifest = text.parse()?;
    let (dim, k) = (manifest.dim, manifest.senses);
    if dim == 0 || k == 0 || dim != manifest.config.dim {
        return Err(bad("manifest has inconsistent dimensions"));
    }

    let v = inp.u64()?;
    if v != manifest.vocab_size as u64 || v > file_len {
        return Err(bad("vocabulary size does not match the manifest"));
    }
    let mut entries = Vec::with_capacity(v as usize);
    for _ in 0..v {
        let len = inp.u32()?;
        if len > MAX_TOKEN_BYTES {
            return Err(bad("vocabulary token is too long"));
        }
        let mut token = vec![0u8; len as usize];
        inp.bytes(&mut token)?;
        let token = String::from_utf8(token).map_err(|_| bad("vocabulary token is not UTF-8"))?;
        entries.push((token, inp.u64()?));
    }
    let vocab = Vocabulary::from_counts(entries.clone(), 1);
    if vocab.entries() != entries.as_slice()
        || entries
            .iter()
            .enumerate()
            .any(|(i, (t, _))| vocab.id(t) != Some(i as u32))
    {
        return Err(bad(
            "vocabulary is not in canonical order or has duplicates",
        ));
    }

    let v = v as usize;
    let multi = k > 1;
    let mssg = manifest.kind == ModelKind::Mssg;
    if !mssg && multi {
        return Err(bad("only MSSG models have more than one sense"));
    }
    let mut expected = 4 * (2 * v * dim) as u64 + 2;
    if multi {
        expected += 4 * (v * k * dim) as u64;
    }
    if mssg {
        expected += 8 * (v * k * dim) as u64 + 8 * (v * k) as u64;
    }
    if file_len.checked_sub(inp.consumed) != Some(expected) {
        return Err(bad("file size does not match the manifest"));
    }

    let global = EmbeddingTable::from_vec(dim, inp.f32s(v * dim)?);
    let output = EmbeddingTable::from_vec(dim, inp.f32s(v * dim)?);
    let senses = match inp.u8()? {
        1 if multi => Some(EmbeddingTable::from_vec(dim, inp.f32s(v * k * dim)?)),
        0 if !multi => None,
        _ => return Err(bad("sense table flag disagrees with the manifest")),
    };
    let clusters = match inp.u8()? {
        1 if mssg => {
            let mut c = Clusters::new(v, k, dim);
            for x in c.centroids.iter_mut() {
                *x = f64::from_le_bytes(inp.array()?);
            }
            for n in c.counts.iter_mut() {
                *n = u64::from_le_bytes(inp.array()?);
            }
            Some(c)
        }
        0 if !mssg => None,
        _ => return Err(bad("cluster flag disagrees with the manifest")),
    };
    Ok(SenseModel::from_parts(
        vocab,
        manifest.config,
        manifest.kind,
        global,
        output,
        senses,
        clusters,
    ))
}

fn bad(message: impl Into<String>) -> Error {
    Error::load(0, message)
}

struct Reader<R> {
    inner: R,
    consumed: u64,
}

impl<R: Read> Reader<R> {
    fn bytes(&mut self, buf: &mut [u8]) -> Result<()> {
        self.inner.read_exact(buf).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => bad("file is truncated"),
            _ => e.into(),
        })?;
        self.consumed += buf.len() as u64;
        Ok(())
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.bytes(&mut buf)?;
        Ok(buf)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let mut out = Vec::with_capacity(n);
        let mut buf = vec![0u8; 4 * n.min(1 << 16)];
        while out.len() < n {
            let take = (n - out.len()).min(1 << 16);
            let chunk = &mut buf[..4 * take];
            self.bytes(chunk)?;
            out.extend(
                chunk
                    .chunks_exact(4)
                    .map(|b| f32::from_le_bytes(b.try_into().unwrap())),
            );
        }
        Ok(out)
    }
}
