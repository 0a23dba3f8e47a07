//! Binary field snapshots.
//!
//! Little-endian layout, version 1:
//!
//! | bytes | content                                    |
//! |-------|--------------------------------------------|
//! | 8     | magic `ALTNSNAP`                           |
//! | 4     | version, u32                               |
//! | 24    | intervals per axis, 3 × u64                |
//! | 8     | time t, f64                                |
//! | 8     | γ, f64                                     |
//! | 8     | R, f64                                     |
//! | 40·L  | ρ, m₁, m₂, m₃, E, each L = Π(N_a + 1) f64s |
//!
//! Arrays are in storage order (k fastest).

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::ConservedField;

pub const MAGIC: [u8; 8] = *b"ALTNSNAP";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n: [usize; 3],
    pub t: f64,
    pub gamma: f64,
    pub r_gas: f64,
    pub field: ConservedField,
}

fn node_count(n: [usize; 3]) -> usize {
    n.iter().map(|&k| k + 1).product()
}

pub fn write_snapshot<W: Write>(w: &mut W, s: &Snapshot) -> Result<()> {
    if s.field.len() != node_count(s.n) {
        return Err(Error::Format(format!(
            "field has {} nodes, grid {:?} needs {}",
            s.field.len(),
            s.n,
            node_count(s.n)
        )));
    }
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for k in s.n {
        w.write_all(&(k as u64).to_le_bytes())?;
    }
    for x in [s.t, s.gamma, s.r_gas] {
        w.write_all(&x.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(8 * s.field.len());
    for c in s.field.components() {
        buf.clear();
        for x in c {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_array<const K: usize, R: Read>(r: &mut R) -> Result<[u8; K]> {
    let mut b = [0u8; K];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_snapshot<R: Read>(r: &mut R) -> Result<Snapshot> {
    if read_array::<8, _>(r)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array(r)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut n = [0usize; 3];
    for k in &mut n {
        *k = usize::try_from(u64::from_le_bytes(read_array(r)?))
            .map_err(|_| Error::Format("grid size overflows".into()))?;
    }
    let t = f64::from_le_bytes(read_array(r)?);
    let gamma = f64::from_le_bytes(read_array(r)?);
    let r_gas = f64::from_le_bytes(read_array(r)?);
    let len = n
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k + 1))
        .ok_or_else(|| Error::Format("grid size overflows".into()))?;
    let mut bytes = vec![0u8; 8 * len];
    let mut comps: [Vec<f64>; 5] = Default::default();
    for c in &mut comps {
        r.read_exact(&mut bytes)?;
        *c = bytes
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect();
    }
    Ok(Snapshot {
        n,
        t,
        gamma,
        r_gas,
        field: ConservedField::from_components(comps),
    })
}

pub fn save_snapshot(path: &Path, s: &Snapshot) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_snapshot(&mut w, s)?;
    w.flush()?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    read_snapshot(&mut std::io::BufReader::new(std::fs::File::open(path)?))
}
