//! Compact little-endian binary dump of instance coordinates.
//!
//! Layout: 8-byte magic, the JSON spec length (u64) and bytes, then `x`,
//! `y` and `noise` as row-major f64, then the planted image as u64.

use std::io::{Read, Write};

use ndarray::Array2;

use super::{Instance, InstanceSpec, Permutation};
use crate::error::{invalid, Result};

const MAGIC: &[u8; 8] = b"PLNTINS1";

pub fn write_instance<W: Write>(inst: &Instance, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    let spec = serde_json::to_vec(&inst.spec)?;
    w.write_all(&(spec.len() as u64).to_le_bytes())?;
    w.write_all(&spec)?;
    for m in [&inst.x, &inst.y, &inst.noise] {
        for v in m.iter() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    for &j in inst.planted.as_slice() {
        w.write_all(&(j as u64).to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_instance<R: Read>(mut r: R) -> Result<Instance> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(invalid("not an instance dump"));
    }
    let len = read_u64(&mut r)? as usize;
    let mut spec = vec![0u8; len];
    r.read_exact(&mut spec)?;
    let spec: InstanceSpec = serde_json::from_slice(&spec)?;
    spec.validate()?;
    let (n, d) = (spec.n, spec.d);
    let read_matrix = |r: &mut R| -> Result<Array2<f64>> {
        let mut data = Vec::with_capacity(n * d);
        for _ in 0..n * d {
            data.push(f64::from_bits(read_u64(r)?));
        }
        Ok(Array2::from_shape_vec((n, d), data).expect("length matches shape"))
    };
    let x = read_matrix(&mut r)?;
    let y = read_matrix(&mut r)?;
    let noise = read_matrix(&mut r)?;
    let image = (0..n)
        .map(|_| read_u64(&mut r).map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance {
        spec,
        x,
        y,
        noise,
        planted: Permutation::new(image)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generate_instance;

    #[test]
    fn round_trip_is_bit_exact() {
        let inst = generate_instance(17, 3, 0.37, 11).unwrap();
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        let back = read_instance(buf.as_slice()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_instance(&b"NOTADUMP........"[..]).is_err());
    }
}
