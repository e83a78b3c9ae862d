//! Sketch state files.
//!
//! Layout: the magic bytes `RWSK`, a little-endian `u32` format version, a
//! little-endian `u64` payload length, then the bincode encoding of a
//! [`FrozenWalker`] (configuration, degree table and sketch contents).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use streamwalk::FrozenWalker;

pub const MAGIC: &[u8; 4] = b"RWSK";
pub const VERSION: u32 = 1;

pub fn write_state<W: Write>(mut out: W, walker: &FrozenWalker) -> Result<()> {
    let payload = bincode::serialize(walker).context("encoding sketch state")?;
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(payload.len() as u64).to_le_bytes())?;
    out.write_all(&payload)?;
    out.flush()?;
    Ok(())
}

pub fn read_state<R: Read>(mut input: R) -> Result<FrozenWalker> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic).context("reading state header")?;
    if &magic != MAGIC {
        bail!("not a sketch state file (bad magic {magic:?})");
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != VERSION {
        bail!("unsupported state version {version}, expected {VERSION}");
    }
    let mut len = [0u8; 8];
    input.read_exact(&mut len)?;
    let len = u64::from_le_bytes(len);
    let mut payload = Vec::new();
    input.take(len).read_to_end(&mut payload)?;
    if payload.len() as u64 != len {
        bail!("truncated state: expected {len} payload bytes, found {}", payload.len());
    }
    bincode::deserialize(&payload).context("decoding sketch state")
}

pub fn save(path: &Path, walker: &FrozenWalker) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_state(BufWriter::new(file), walker)
}

pub fn load(path: &Path) -> Result<FrozenWalker> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_state(BufReader::new(file)).with_context(|| format!("loading {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use streamwalk::{Algorithm, Update, WalkerConfig};

    fn walker() -> FrozenWalker {
        let cfg = WalkerConfig::new(Algorithm::Wr, 3, 2, 1.0, 9);
        FrozenWalker::build(cfg, [Update::arc(0, 1), Update::arc(1, 2), Update::arc(2, 0)]).unwrap()
    }

    #[test]
    fn header_layout() {
        let mut buf = Vec::new();
        write_state(&mut buf, &walker()).unwrap();
        assert_eq!(&buf[..4], b"RWSK");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), VERSION);
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()) as usize, buf.len() - 16);
        assert_eq!(read_state(&buf[..]).unwrap(), walker());
    }

    #[test]
    fn rejects_corrupt_files() {
        let mut buf = Vec::new();
        write_state(&mut buf, &walker()).unwrap();
        assert!(read_state(&buf[..buf.len() - 1]).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_state(&bad[..]).is_err());
        let mut newer = buf;
        newer[4] = 2;
        assert!(read_state(&newer[..]).is_err());
    }
}
