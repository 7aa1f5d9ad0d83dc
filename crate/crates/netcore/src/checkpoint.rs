use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::params::{ParamSet, TensorSpec};
use crate::{Error, Result};

const FORMAT_VERSION: &str = "1";

/// Writes a parameter checkpoint: a human-readable manifest header (name,
/// shape, offset per tensor) followed by the raw little-endian 8-byte floats
/// in manifest order. The round trip is bit-exact.
///
/// ```text
/// paramset 1
/// tensor actor/l0/w 64x41 0
/// ...
/// end
/// <8 * len raw bytes>
/// ```
pub fn write_checkpoint<W: Write>(params: &ParamSet, mut w: W) -> Result<()> {
    writeln!(w, "paramset {FORMAT_VERSION}")?;
    for t in params.manifest() {
        let shape = t
            .shape
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("x");
        writeln!(w, "tensor {} {} {}", t.name, shape, t.offset)?;
    }
    writeln!(w, "end")?;
    for v in params.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_checkpoint<R: Read>(r: R) -> Result<ParamSet> {
    let mut reader = BufReader::new(r);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    let mut header = line.split_whitespace();
    if header.next() != Some("paramset") || header.next() != Some(FORMAT_VERSION) {
        return Err(Error::Checkpoint("bad magic or version".into()));
    }

    let mut manifest = Vec::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Err(Error::Checkpoint("missing end marker".into()));
        }
        let trimmed = line.trim_end();
        if trimmed == "end" {
            break;
        }
        let mut parts = trimmed.split_whitespace();
        if parts.next() != Some("tensor") {
            return Err(Error::Checkpoint(format!("unexpected line: {trimmed}")));
        }
        let name = parts
            .next()
            .ok_or_else(|| Error::Checkpoint("tensor missing name".into()))?
            .to_string();
        let shape: Vec<usize> = parts
            .next()
            .ok_or_else(|| Error::Checkpoint("tensor missing shape".into()))?
            .split('x')
            .map(|d| {
                d.parse()
                    .map_err(|_| Error::Checkpoint(format!("bad shape in {name}")))
            })
            .collect::<Result<_>>()?;
        let offset: usize = parts
            .next()
            .ok_or_else(|| Error::Checkpoint("tensor missing offset".into()))?
            .parse()
            .map_err(|_| Error::Checkpoint(format!("bad offset in {name}")))?;
        manifest.push(TensorSpec { name, shape, offset });
    }

    let total: usize = manifest.iter().map(TensorSpec::count).sum();
    let mut raw = vec![0u8; total * 8];
    reader
        .read_exact(&mut raw)
        .map_err(|_| Error::Checkpoint("truncated payload".into()))?;
    let mut trailing = [0u8; 1];
    if reader.read(&mut trailing)? != 0 {
        return Err(Error::Checkpoint("trailing bytes after payload".into()));
    }
    let values = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ParamSet::new(values, manifest)
}

pub fn write_checkpoint_file<P: AsRef<Path>>(params: &ParamSet, path: P) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    write_checkpoint(params, &mut f)?;
    f.sync_all()?;
    Ok(())
}

pub fn read_checkpoint_file<P: AsRef<Path>>(path: P) -> Result<ParamSet> {
    read_checkpoint(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::ActorCritic;

    #[test]
    fn round_trip_is_bit_exact() {
        let ac = ActorCritic::with_hidden(5, 3, &[8, 8]);
        let params = ac.init_params(123);
        let mut buf = Vec::new();
        write_checkpoint(&params, &mut buf).unwrap();
        let back = read_checkpoint(&buf[..]).unwrap();
        assert_eq!(params.values(), back.values());
        assert_eq!(params.manifest(), back.manifest());
        assert_eq!(params.checksum(), back.checksum());
    }

    #[test]
    fn truncated_payload_is_an_error() {
        let ac = ActorCritic::with_hidden(2, 1, &[3]);
        let params = ac.init_params(0);
        let mut buf = Vec::new();
        write_checkpoint(&params, &mut buf).unwrap();
        buf.truncate(buf.len() - 5);
        assert!(read_checkpoint(&buf[..]).is_err());
    }

    #[test]
    fn bad_magic_is_an_error() {
        assert!(read_checkpoint(&b"not a checkpoint\n"[..]).is_err());
    }
}
