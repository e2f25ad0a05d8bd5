//! Flat binary checkpoints for [`Mlp`] parameters.
//!
//! Layout (all integers and reals little-endian):
//!
//! ```text
//! magic            8 bytes   "EBGANIDS"
//! format version   u32       currently 1
//! leaky slope      f64
//! layer count      u32
//! per layer:
//!   out dim        u32
//!   in dim         u32
//!   weights        out·in × f64, row-major
//!   bias           out × f64
//!   sn flag        u8        0 or 1
//!   u              out × f64 (only when sn flag = 1)
//! ```
//!
//! The spectral-norm estimate σ̂ is not stored: it is recomputed from the
//! persisted `u` as ‖Wᵀu‖ on load. The training loop applies the same
//! refresh when it finishes, so a model held in memory and its reloaded
//! checkpoint score inputs bit-identically.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::{Array1, Array2};

use super::mlp::{AffineLayer, Mlp, SnState};
use super::sn::refresh_sigma;
use crate::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"EBGANIDS";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Upper bound on a stored layer dimension; guards allocation against
/// corrupt headers.
const MAX_DIM: u32 = 1_000_000;

/// Serialize `net` into the flat binary layout.
pub fn write_mlp(net: &Mlp, w: &mut dyn Write) -> Result<()> {
    w.write_all(CHECKPOINT_MAGIC)?;
    w.write_u32::<LittleEndian>(CHECKPOINT_VERSION)?;
    w.write_f64::<LittleEndian>(net.slope)?;
    w.write_u32::<LittleEndian>(net.layers.len() as u32)?;
    for layer in &net.layers {
        w.write_u32::<LittleEndian>(layer.out_dim() as u32)?;
        w.write_u32::<LittleEndian>(layer.in_dim() as u32)?;
        for &v in layer.weight.iter() {
            w.write_f64::<LittleEndian>(v)?;
        }
        for &v in layer.bias.iter() {
            w.write_f64::<LittleEndian>(v)?;
        }
        match &layer.sn {
            None => w.write_u8(0)?,
            Some(sn) => {
                w.write_u8(1)?;
                for &v in sn.u.iter() {
                    w.write_f64::<LittleEndian>(v)?;
                }
            }
        }
    }
    Ok(())
}

fn read_f64_vec(r: &mut dyn Read, n: usize) -> Result<Vec<f64>> {
    let mut buf = vec![0.0f64; n];
    r.read_f64_into::<LittleEndian>(&mut buf)?;
    if buf.iter().any(|v| !v.is_finite()) {
        return Err(Error::Artifact("checkpoint contains non-finite values".into()));
    }
    Ok(buf)
}

/// Deserialize a checkpoint written by [`write_mlp`] and refresh every
/// spectral-norm estimate from its stored `u`. Rejects any bytes left
/// over after the network.
pub fn read_mlp(r: &mut dyn Read) -> Result<Mlp> {
    let net = read_mlp_stream(r)?;
    expect_end(r)?;
    Ok(net)
}

/// Reject any further bytes in the stream.
pub(crate) fn expect_end(r: &mut dyn Read) -> Result<()> {
    let mut trailer = [0u8; 1];
    if r.read(&mut trailer)? != 0 {
        return Err(Error::Artifact("trailing bytes after checkpoint".into()));
    }
    Ok(())
}

/// Like [`read_mlp`] but stops exactly at the end of the network,
/// leaving the rest of the stream untouched so several networks can be
/// stored back to back.
pub(crate) fn read_mlp_stream(r: &mut dyn Read) -> Result<Mlp> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(Error::Artifact("not a model checkpoint (bad magic)".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::Artifact(format!(
            "unsupported checkpoint version {version} (expected {CHECKPOINT_VERSION})"
        )));
    }
    let slope = r.read_f64::<LittleEndian>()?;
    if !slope.is_finite() || slope < 0.0 {
        return Err(Error::Artifact(format!("invalid activation slope {slope}")));
    }
    let layer_count = r.read_u32::<LittleEndian>()?;
    if layer_count == 0 || layer_count > 1024 {
        return Err(Error::Artifact(format!(
            "implausible layer count {layer_count}"
        )));
    }

    let mut layers = Vec::with_capacity(layer_count as usize);
    let mut prev_out: Option<u32> = None;
    for index in 0..layer_count {
        let out = r.read_u32::<LittleEndian>()?;
        let inp = r.read_u32::<LittleEndian>()?;
        if out == 0 || inp == 0 || out > MAX_DIM || inp > MAX_DIM {
            return Err(Error::Artifact(format!(
                "implausible dimensions {out}×{inp} at layer {index}"
            )));
        }
        if let Some(prev) = prev_out {
            if prev != inp {
                return Err(Error::Artifact(format!(
                    "layer {index} expects {inp} inputs but the previous layer yields {prev}"
                )));
            }
        }
        prev_out = Some(out);

        let weight = Array2::from_shape_vec(
            (out as usize, inp as usize),
            read_f64_vec(r, out as usize * inp as usize)?,
        )
        .expect("shape matches buffer length");
        let bias = Array1::from_vec(read_f64_vec(r, out as usize)?);
        let mut layer = AffineLayer::from_parts(weight, bias);

        match r.read_u8()? {
            0 => {}
            1 => {
                let u = Array1::from_vec(read_f64_vec(r, out as usize)?);
                let norm = u.dot(&u).sqrt();
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(Error::Artifact(format!(
                        "stored spectral-norm vector at layer {index} has norm {norm}"
                    )));
                }
                layer.sn = Some(SnState {
                    u,
                    sigma: 1.0,
                    degenerate: false,
                });
                refresh_sigma(&mut layer);
            }
            flag => {
                return Err(Error::Artifact(format!(
                    "invalid spectral-norm flag {flag} at layer {index}"
                )));
            }
        }
        layers.push(layer);
    }

    Ok(Mlp::from_layers(layers, slope))
}

pub fn save_mlp(net: &Mlp, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_mlp(net, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn load_mlp(path: &Path) -> Result<Mlp> {
    let mut file = std::fs::File::open(path).map_err(|e| {
        Error::Artifact(format!("cannot open checkpoint {}: {e}", path.display()))
    })?;
    read_mlp(&mut file)
}
