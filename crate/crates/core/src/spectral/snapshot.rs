//! Binary field snapshots.
//!
//! Layout, all little-endian: the magic bytes `FBL1`, `n: u32`,
//! `length: f64`, `count: u16`, then `count` names each as a `u16` byte
//! length followed by UTF-8, then for every field its `n²` physical samples
//! as `f64` in row-major order (`x₁` fastest).

use std::io::{Read, Write};
use std::sync::Arc;

use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"FBL1";

pub struct Snapshot {
    pub grid: Arc<Grid>,
    pub fields: Vec<(String, SpectralField)>,
}

impl Snapshot {
    pub fn field(&self, name: &str) -> Option<&SpectralField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

pub fn write_snapshot<W: Write>(out: &mut W, fields: &[(&str, &SpectralField)]) -> Result<()> {
    let grid = fields
        .first()
        .map(|(_, f)| f.grid().clone())
        .ok_or_else(|| Error::Format("snapshot needs at least one field".into()))?;
    if fields.iter().any(|(_, f)| !f.grid().same_as(&grid)) {
        return Err(Error::GridMismatch);
    }
    out.write_all(MAGIC)?;
    out.write_all(&(grid.n() as u32).to_le_bytes())?;
    out.write_all(&grid.length().to_le_bytes())?;
    out.write_all(&(fields.len() as u16).to_le_bytes())?;
    for (name, _) in fields {
        let bytes = name.as_bytes();
        let len = u16::try_from(bytes.len()).map_err(|_| Error::Format("field name too long".into()))?;
        out.write_all(&len.to_le_bytes())?;
        out.write_all(bytes)?;
    }
    let mut buf = Vec::with_capacity(grid.len() * 8);
    for (_, f) in fields {
        buf.clear();
        for v in f.samples() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

fn take<const N: usize, R: Read>(input: &mut R) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    input
        .read_exact(&mut b)
        .map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    Ok(b)
}

pub fn read_snapshot<R: Read>(input: &mut R) -> Result<Snapshot> {
    if &take::<4, _>(input)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(take(input)?) as usize;
    let length = f64::from_le_bytes(take(input)?);
    let count = u16::from_le_bytes(take(input)?) as usize;
    let grid = Grid::new(n, length)?;
    let mut names = Vec::with_capacity(count);
    for _ in 0..count {
        let len = u16::from_le_bytes(take(input)?) as usize;
        let mut raw = vec![0u8; len];
        input
            .read_exact(&mut raw)
            .map_err(|e| Error::Format(format!("truncated name: {e}")))?;
        names.push(String::from_utf8(raw).map_err(|_| Error::Format("name is not UTF-8".into()))?);
    }
    let mut raw = vec![0u8; grid.len() * 8];
    let mut fields = Vec::with_capacity(count);
    for name in names {
        input
            .read_exact(&mut raw)
            .map_err(|e| Error::Format(format!("truncated samples of `{name}`: {e}")))?;
        let samples: Vec<f64> = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of eight")))
            .collect();
        fields.push((name, SpectralField::from_samples(&grid, &samples)?));
    }
    Ok(Snapshot { grid, fields })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn round_trip_is_bit_exact_on_samples() {
        let g = make_grid(8, 3.0).unwrap();
        let a = SpectralField::from_fn(&g, |x, y| (x * 2.0).sin() * y.cos());
        let b = SpectralField::from_fn(&g, |x, _| x.cos());
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, &[("theta", &a), ("omega", &b)]).unwrap();
        assert_eq!(&bytes[..4], b"FBL1");
        assert_eq!(bytes.len(), 4 + 4 + 8 + 2 + (2 + 5) * 2 + 2 * 64 * 8);
        let snap = read_snapshot(&mut bytes.as_slice()).unwrap();
        assert_eq!(snap.grid.n(), 8);
        assert_eq!(snap.grid.length(), 3.0);
        let back = snap.field("theta").unwrap();
        for (x, y) in a.samples().iter().zip(back.samples()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_snapshot(&mut b"NOPE".as_slice()).is_err());
        assert!(read_snapshot(&mut b"FBL1\x08\x00".as_slice()).is_err());
    }
}
