//! Binary frames for density and Wigner grids.
//!
//! Every frame is a 32-byte little-endian header followed by IEEE-754
//! doubles; frames can be concatenated in one file.
//!
//! ```text
//! RDG1  magic[4] version:u32 n:u64 time:f64 scenario:u64
//!       xs[n], then ρ column-major as (re, im) pairs
//! WIG1  magic[4] nx:u32 np:u32 reserved:u32 time:f64 scenario:u64
//!       xs[nx], ps[np], then W column-major
//! ```
//!
//! `scenario` is the first eight bytes of the SHA-256 of `(a, d, λ, σ)`
//! as little-endian doubles.

use std::io::{self, Read, Write};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::spatial::{RelativeDensityGrid, SpatialScenario};
use crate::wigner::WignerGrid;

pub const DENSITY_MAGIC: [u8; 4] = *b"RDG1";
pub const WIGNER_MAGIC: [u8; 4] = *b"WIG1";
pub const DENSITY_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

pub fn scenario_hash(scn: &SpatialScenario) -> u64 {
    let mut hasher = Sha256::new();
    for v in [scn.a(), scn.d(), scn.lambda(), scn.recoil_sigma()] {
        hasher.update(v.to_le_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

pub fn write_density<W: Write>(out: &mut W, grid: &RelativeDensityGrid) -> io::Result<()> {
    let n = grid.len();
    out.write_all(&DENSITY_MAGIC)?;
    out.write_all(&DENSITY_VERSION.to_le_bytes())?;
    out.write_all(&(n as u64).to_le_bytes())?;
    out.write_all(&grid.time().to_le_bytes())?;
    out.write_all(&scenario_hash(grid.scenario()).to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * (n + 2 * n * n));
    grid.xs().iter().for_each(|x| buf.extend(x.to_le_bytes()));
    for j in 0..n {
        for i in 0..n {
            let v = grid.get(i, j);
            buf.extend(v.re.to_le_bytes());
            buf.extend(v.im.to_le_bytes());
        }
    }
    out.write_all(&buf)
}

pub fn write_wigner<W: Write>(out: &mut W, grid: &WignerGrid) -> io::Result<()> {
    let (nx, np) = (grid.xs().len(), grid.ps().len());
    let too_long = |_| io::Error::new(io::ErrorKind::InvalidInput, "grid too long for a WIG1 header");
    out.write_all(&WIGNER_MAGIC)?;
    out.write_all(&u32::try_from(nx).map_err(too_long)?.to_le_bytes())?;
    out.write_all(&u32::try_from(np).map_err(too_long)?.to_le_bytes())?;
    out.write_all(&0u32.to_le_bytes())?;
    out.write_all(&grid.time().to_le_bytes())?;
    out.write_all(&scenario_hash(grid.scenario()).to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * (nx + np + nx * np));
    grid.xs().iter().for_each(|x| buf.extend(x.to_le_bytes()));
    grid.ps().iter().for_each(|p| buf.extend(p.to_le_bytes()));
    for ip in 0..np {
        for ix in 0..nx {
            buf.extend(grid.get(ix, ip).to_le_bytes());
        }
    }
    out.write_all(&buf)
}

/// A decoded RDG1 frame; `values` is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFrame {
    pub time: f64,
    pub scenario_hash: u64,
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// A decoded WIG1 frame; `values` is row-major in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerFrame {
    pub time: f64,
    pub scenario_hash: u64,
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<f64>,
}

fn bad(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

/// Reads a header, or `None` at a clean end of input.
fn read_header<R: Read>(input: &mut R, magic: [u8; 4]) -> io::Result<Option<[u8; HEADER_LEN]>> {
    let mut header = [0u8; HEADER_LEN];
    let mut filled = 0;
    while filled < HEADER_LEN {
        match input.read(&mut header[filled..])? {
            0 if filled == 0 => return Ok(None),
            0 => return Err(bad("truncated header")),
            k => filled += k,
        }
    }
    if header[..4] != magic {
        return Err(bad(format!("bad magic {:?}", &header[..4])));
    }
    Ok(Some(header))
}

fn field<const N: usize>(header: &[u8], at: usize) -> [u8; N] {
    header[at..at + N].try_into().expect("field within header")
}

fn read_doubles<R: Read>(input: &mut R, count: usize) -> io::Result<Vec<f64>> {
    let bytes = count.checked_mul(8).ok_or_else(|| bad("frame size overflows"))?;
    let mut buf = Vec::new();
    input.take(bytes as u64).read_to_end(&mut buf)?;
    if buf.len() != bytes {
        return Err(bad("truncated payload"));
    }
    Ok(buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn read_density_frames<R: Read>(mut input: R) -> io::Result<Vec<DensityFrame>> {
    let mut frames = Vec::new();
    while let Some(h) = read_header(&mut input, DENSITY_MAGIC)? {
        let version = u32::from_le_bytes(field(&h, 4));
        if version != DENSITY_VERSION {
            return Err(bad(format!("unsupported RDG1 version {version}")));
        }
        let n = usize::try_from(u64::from_le_bytes(field(&h, 8))).map_err(|_| bad("grid too long"))?;
        let xs = read_doubles(&mut input, n)?;
        let raw = read_doubles(
            &mut input,
            2 * n.checked_mul(n).ok_or_else(|| bad("grid too long"))?,
        )?;
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, pair) in raw.chunks_exact(2).enumerate() {
            let (j, i) = (k / n, k % n);
            values[i * n + j] = Complex64::new(pair[0], pair[1]);
        }
        frames.push(DensityFrame {
            time: f64::from_le_bytes(field(&h, 16)),
            scenario_hash: u64::from_le_bytes(field(&h, 24)),
            xs,
            values,
        });
    }
    Ok(frames)
}

pub fn read_wigner_frames<R: Read>(mut input: R) -> io::Result<Vec<WignerFrame>> {
    let mut frames = Vec::new();
    while let Some(h) = read_header(&mut input, WIGNER_MAGIC)? {
        let nx = u32::from_le_bytes(field(&h, 4)) as usize;
        let np = u32::from_le_bytes(field(&h, 8)) as usize;
        let xs = read_doubles(&mut input, nx)?;
        let ps = read_doubles(&mut input, np)?;
        let raw = read_doubles(&mut input, nx * np)?;
        let mut values = vec![0.0; nx * np];
        for (k, v) in raw.into_iter().enumerate() {
            let (ip, ix) = (k / nx, k % nx);
            values[ix * np + ip] = v;
        }
        frames.push(WignerFrame {
            time: f64::from_le_bytes(field(&h, 16)),
            scenario_hash: u64::from_le_bytes(field(&h, 24)),
            xs,
            ps,
            values,
        });
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::coherent_distribution;
    use crate::grid::linspace;
    use crate::spatial::frozen_density;
    use crate::wigner::wigner_transform;

    fn density(t: f64) -> RelativeDensityGrid {
        let scn = SpatialScenario::new(0.25, 0.08, 1.0, 0.5).unwrap();
        let field = coherent_distribution(3.0, 1e-12).unwrap();
        frozen_density(&scn, &field, t, &linspace(-0.5, 0.5, 101)).unwrap()
    }

    #[test]
    fn density_round_trip_with_two_frames() {
        let (g0, g1) = (density(0.0), density(2.0));
        let mut bytes = Vec::new();
        write_density(&mut bytes, &g0).unwrap();
        write_density(&mut bytes, &g1).unwrap();
        assert_eq!(&bytes[..4], b"RDG1");
        assert_eq!(bytes.len(), 2 * (HEADER_LEN + 8 * (101 + 2 * 101 * 101)));

        let frames = read_density_frames(bytes.as_slice()).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[1].time, 2.0);
        assert_eq!(frames[0].xs, g0.xs());
        assert_eq!(frames[1].values, g1.values());
        assert_eq!(frames[0].scenario_hash, scenario_hash(g0.scenario()));
    }

    #[test]
    fn payload_is_column_major() {
        let scn = SpatialScenario::single_packet(0.1, 1.0, 0.0).unwrap();
        let g = RelativeDensityGrid::from_fn(vec![0.0, 1.0], 0.0, scn, |x, xp| Complex64::new(x, 10.0 * xp))
            .unwrap();
        let mut bytes = Vec::new();
        write_density(&mut bytes, &g).unwrap();
        let doubles: Vec<f64> = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        // xs, then (0,0), (1,0), (0,1), (1,1)
        assert_eq!(doubles, vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 10.0, 1.0, 10.0]);
    }

    #[test]
    fn wigner_round_trip() {
        let g = density(0.0);
        let w = wigner_transform(&g, &linspace(-40.0, 40.0, 17)).unwrap();
        let mut bytes = Vec::new();
        write_wigner(&mut bytes, &w).unwrap();
        assert_eq!(&bytes[..4], b"WIG1");
        let frames = read_wigner_frames(bytes.as_slice()).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].xs, w.xs());
        assert_eq!(frames[0].ps, w.ps());
        assert_eq!(frames[0].values, w.values());
    }

    #[test]
    fn hash_depends_on_every_parameter() {
        let base = SpatialScenario::new(0.25, 0.025, 1.0, 0.5).unwrap();
        let h = scenario_hash(&base);
        assert_eq!(h, scenario_hash(&base));
        for other in [
            SpatialScenario::new(0.3, 0.025, 1.0, 0.5),
            SpatialScenario::new(0.25, 0.02, 1.0, 0.5),
            SpatialScenario::new(0.25, 0.025, 2.0, 0.5),
            SpatialScenario::new(0.25, 0.025, 1.0, 0.6),
        ] {
            assert_ne!(h, scenario_hash(&other.unwrap()));
        }
    }

    #[test]
    fn corrupt_input_is_rejected() {
        let mut bytes = Vec::new();
        write_density(&mut bytes, &density(0.0)).unwrap();
        assert!(read_wigner_frames(bytes.as_slice()).is_err());
        assert!(read_density_frames(&bytes[..bytes.len() - 3]).is_err());
        assert!(read_density_frames(&bytes[..10]).is_err());
        assert!(read_density_frames(&[][..]).unwrap().is_empty());
    }
}
