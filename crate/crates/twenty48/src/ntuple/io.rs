//! Binary network file format.
//!
//! Little-endian layout:
//!
//! ```text
//! magic "NTNW" | version u32 | c u8 | g u8 | tuple count u16
//! per tuple: n u8 | n cell indices u8 | redundant flag u8 | fold parent u16 (0xFFFF = none)
//! per tuple, per stage: 16^n weights as f32        (tuple-major, then stage-major)
//! crc32 u32 over everything above
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{ALPHABET, Architecture, NTupleNetwork, NtupleError, TupleDef, TupleShape};

const MAGIC: &[u8; 4] = b"NTNW";
const VERSION: u32 = 1;
const NO_PARENT: u16 = 0xFFFF;
const CHUNK_WEIGHTS: usize = 16 * 1024;

struct CrcWriter<W: Write> {
    inner: W,
    hasher: crc32fast::Hasher,
}

impl<W: Write> CrcWriter<W> {
    fn new(inner: W) -> Self {
        CrcWriter { inner, hasher: crc32fast::Hasher::new() }
    }
}

impl<W: Write> Write for CrcWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

struct CrcReader<R: Read> {
    inner: R,
    hasher: crc32fast::Hasher,
}

impl<R: Read> CrcReader<R> {
    fn new(inner: R) -> Self {
        CrcReader { inner, hasher: crc32fast::Hasher::new() }
    }

    fn read_exact_hashed(&mut self, buf: &mut [u8]) -> std::io::Result<()> {
        self.inner.read_exact(buf)?;
        self.hasher.update(buf);
        Ok(())
    }
}

/// Serialise a network to any writer.
pub fn write_network<W: Write>(net: &NTupleNetwork, writer: W) -> Result<(), NtupleError> {
    let mut w = CrcWriter::new(writer);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[ALPHABET as u8, net.stage_bits()])?;
    let arch = net.arch();
    w.write_all(&(arch.tuples.len() as u16).to_le_bytes())?;
    for t in &arch.tuples {
        w.write_all(&[t.shape.len() as u8])?;
        w.write_all(&t.shape.cells)?;
        w.write_all(&[t.redundant as u8])?;
        w.write_all(&t.fold_parent.unwrap_or(NO_PARENT).to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(CHUNK_WEIGHTS * 4);
    for i in 0..arch.tuples.len() {
        let table = net.table(i);
        buf.clear();
        for k in 0..table.len() {
            buf.extend_from_slice(&table.get(k).to_le_bytes());
            if buf.len() >= CHUNK_WEIGHTS * 4 {
                w.write_all(&buf)?;
                buf.clear();
            }
        }
        w.write_all(&buf)?;
    }
    let crc = w.hasher.clone().finalize();
    w.write_all(&crc.to_le_bytes())?;
    w.flush()?;
    Ok(())
}

/// Deserialise a network from any reader, verifying structure and checksum.
pub fn read_network<R: Read>(reader: R) -> Result<NTupleNetwork, NtupleError> {
    let mut r = CrcReader::new(reader);
    let mut magic = [0u8; 4];
    r.read_exact_hashed(&mut magic)?;
    if &magic != MAGIC {
        return Err(NtupleError::Format("bad magic bytes".into()));
    }
    let mut v4 = [0u8; 4];
    r.read_exact_hashed(&mut v4)?;
    let version = u32::from_le_bytes(v4);
    if version != VERSION {
        return Err(NtupleError::Format(format!("unsupported version {version}")));
    }
    let mut hdr = [0u8; 2];
    r.read_exact_hashed(&mut hdr)?;
    let (c, stage_bits) = (hdr[0], hdr[1]);
    if c as usize != ALPHABET {
        return Err(NtupleError::Format(format!("unsupported alphabet size {c}")));
    }
    if stage_bits > 4 {
        return Err(NtupleError::Format(format!("stage exponent {stage_bits} out of range")));
    }
    let mut cnt = [0u8; 2];
    r.read_exact_hashed(&mut cnt)?;
    let tuple_count = u16::from_le_bytes(cnt) as usize;
    if tuple_count == 0 {
        return Err(NtupleError::Format("no tuples".into()));
    }

    let mut tuples = Vec::with_capacity(tuple_count);
    for _ in 0..tuple_count {
        let mut n = [0u8; 1];
        r.read_exact_hashed(&mut n)?;
        let mut cells = vec![0u8; n[0] as usize];
        r.read_exact_hashed(&mut cells)?;
        let mut tail = [0u8; 3];
        r.read_exact_hashed(&mut tail)?;
        let parent = u16::from_le_bytes([tail[1], tail[2]]);
        tuples.push(TupleDef {
            shape: TupleShape::new(cells)?,
            redundant: tail[0] != 0,
            fold_parent: if parent == NO_PARENT { None } else { Some(parent) },
        });
    }
    let arch = Architecture::new(derive_name(&tuples), tuples)?;

    let net = NTupleNetwork::zeroed(arch, stage_bits);
    let mut buf = vec![0u8; CHUNK_WEIGHTS * 4];
    for i in 0..net.arch().tuples.len() {
        let table = net.table(i);
        let mut k = 0usize;
        while k < table.len() {
            let take = (table.len() - k).min(CHUNK_WEIGHTS);
            let bytes = &mut buf[..take * 4];
            r.read_exact_hashed(bytes)?;
            for (j, w) in bytes.chunks_exact(4).enumerate() {
                let bits = u32::from_le_bytes([w[0], w[1], w[2], w[3]]);
                if bits != 0 {
                    table.set(k + j, f32::from_bits(bits));
                }
            }
            k += take;
        }
    }

    let expected = r.hasher.clone().finalize();
    let mut crc = [0u8; 4];
    r.inner.read_exact(&mut crc)?;
    if u32::from_le_bytes(crc) != expected {
        return Err(NtupleError::CrcMismatch);
    }
    Ok(net)
}

/// Architecture label reconstructed from tuple shapes (the file stores
/// geometry, not names): shape labels joined in first-appearance order.
fn derive_name(tuples: &[TupleDef]) -> String {
    let mut labels: Vec<&str> = Vec::new();
    for t in tuples {
        let l = t.shape.kind.label();
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    labels.join("-")
}

pub fn save(net: &NTupleNetwork, path: &Path) -> Result<(), NtupleError> {
    write_network(net, BufWriter::new(File::create(path)?))
}

pub fn load(path: &Path) -> Result<NTupleNetwork, NtupleError> {
    read_network(BufReader::new(File::open(path)?))
}
