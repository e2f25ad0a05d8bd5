//! On-disk form of trained networks.
//!
//! A discriminator checkpoint is its encoder and decoder stored back to
//! back in the binary network format; a generator checkpoint is its
//! network followed by a mode byte (0 masked-rewrite, 1 noise-only) and
//! the latent width as a little-endian u32. Both formats are rejected
//! on trailing bytes.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{Discriminator, Generator, GeneratorMode};
use crate::neural::checkpoint::{expect_end, read_mlp_stream};
use crate::neural::write_mlp;
use crate::{Error, Result};

pub fn write_discriminator(disc: &Discriminator, w: &mut dyn Write) -> Result<()> {
    write_mlp(&disc.encoder, w)?;
    write_mlp(&disc.decoder, w)
}

pub fn read_discriminator(r: &mut dyn Read) -> Result<Discriminator> {
    let encoder = read_mlp_stream(r)?;
    let decoder = read_mlp_stream(r)?;
    expect_end(r)?;
    Discriminator::from_parts(encoder, decoder)
}

pub fn save_discriminator(disc: &Discriminator, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_discriminator(disc, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn load_discriminator(path: &Path) -> Result<Discriminator> {
    let mut file = std::fs::File::open(path).map_err(|e| {
        Error::Artifact(format!("cannot open checkpoint {}: {e}", path.display()))
    })?;
    read_discriminator(&mut file)
}

pub fn write_generator(gen: &Generator, w: &mut dyn Write) -> Result<()> {
    write_mlp(&gen.net, w)?;
    w.write_u8(match gen.mode {
        GeneratorMode::MaskedRewrite => 0,
        GeneratorMode::NoiseOnly => 1,
    })?;
    w.write_u32::<LittleEndian>(gen.latent_dim as u32)?;
    Ok(())
}

pub fn read_generator(r: &mut dyn Read) -> Result<Generator> {
    let net = read_mlp_stream(r)?;
    let mode = match r.read_u8()? {
        0 => GeneratorMode::MaskedRewrite,
        1 => GeneratorMode::NoiseOnly,
        flag => {
            return Err(Error::Artifact(format!("invalid generator mode byte {flag}")));
        }
    };
    let latent_dim = r.read_u32::<LittleEndian>()? as usize;
    expect_end(r)?;
    Generator::from_parts(net, latent_dim, mode)
}

pub fn save_generator(gen: &Generator, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_generator(gen, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn load_generator(path: &Path) -> Result<Generator> {
    let mut file = std::fs::File::open(path).map_err(|e| {
        Error::Artifact(format!("cannot open checkpoint {}: {e}", path.display()))
    })?;
    read_generator(&mut file)
}
