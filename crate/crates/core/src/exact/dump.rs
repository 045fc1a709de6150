use std::io::{Read, Write};

use num_complex::Complex64;

use super::{enumeration_dimension, StateVector};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::wavefunction::Sector;

const NO_SECTOR: u32 = u32::MAX;

/// Writes `N1, N2, sector` (u32), dimension (u64), then `(re, im)` f64
/// pairs in rank order, all little-endian.
pub fn write_dump<W: Write>(sv: &StateVector, mut w: W) -> Result<()> {
    let l = sv.lattice();
    w.write_all(&(l.n1() as u32).to_le_bytes())?;
    w.write_all(&(l.n2() as u32).to_le_bytes())?;
    let sector = sv.sector().map_or(NO_SECTOR, |s| s.index() as u32);
    w.write_all(&sector.to_le_bytes())?;
    w.write_all(&(sv.dimension() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * sv.dimension());
    for z in sv.amplitudes() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_dump<R: Read>(mut r: R) -> Result<StateVector> {
    let n1 = read_u32(&mut r)? as usize;
    let n2 = read_u32(&mut r)? as usize;
    let sector = match read_u32(&mut r)? {
        NO_SECTOR => None,
        s => Some(Sector::from_index(s as usize).ok_or_else(|| Error::Format(format!("bad sector {s}")))?),
    };
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let dim = u64::from_le_bytes(b);
    let lattice = LatticeSpec::new(n1, n2).map_err(|e| Error::Format(e.to_string()))?;
    if enumeration_dimension(&lattice) != dim as u128 {
        return Err(Error::Format(format!("dimension {dim} does not match {lattice}")));
    }
    let mut raw = vec![0u8; 16 * dim as usize];
    r.read_exact(&mut raw)?;
    let amps: Vec<Complex64> = raw
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after amplitudes".into()));
    }
    let sv = StateVector::from_amplitudes(lattice, sector, amps.clone())?;
    // keep stored values bit-exact
    Ok(StateVector {
        amplitudes: amps,
        ..sv
    })
}
