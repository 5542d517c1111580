//! Little-endian fixed-width helpers shared by the binary dump formats.
//!
//! Every dump starts with an 8-byte magic followed by a `u32` version.
//! Arrays are written as raw `u32` sequences; their lengths are either
//! implied by earlier header fields or stored as a preceding `u64`.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::{Error, Result};

/// Upper bound on array lengths accepted from a dump, to fail fast on
/// corrupted headers instead of attempting a huge allocation.
const MAX_ARRAY_LEN: u64 = 1 << 36;

pub fn write_header<W: Write>(w: &mut W, magic: &[u8; 8], version: u32) -> Result<()> {
    w.write_all(magic)?;
    w.write_u32::<LittleEndian>(version)?;
    Ok(())
}

pub fn read_header<R: Read>(r: &mut R, magic: &[u8; 8], version: u32) -> Result<()> {
    let mut found = [0u8; 8];
    r.read_exact(&mut found)?;
    if &found != magic {
        return Err(Error::Format(format!(
            "expected magic {:?}, found {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(&found)
        )));
    }
    let v = r.read_u32::<LittleEndian>()?;
    if v != version {
        return Err(Error::Format(format!("unsupported version {v}, expected {version}")));
    }
    Ok(())
}

pub fn write_u32<W: Write>(w: &mut W, value: u32) -> Result<()> {
    w.write_u32::<LittleEndian>(value)?;
    Ok(())
}

pub fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    Ok(r.read_u32::<LittleEndian>()?)
}

pub fn write_u64<W: Write>(w: &mut W, value: u64) -> Result<()> {
    w.write_u64::<LittleEndian>(value)?;
    Ok(())
}

pub fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    Ok(r.read_u64::<LittleEndian>()?)
}

pub fn write_u32s<W: Write>(w: &mut W, values: &[u32]) -> Result<()> {
    for &v in values {
        w.write_u32::<LittleEndian>(v)?;
    }
    Ok(())
}

pub fn read_u32s<R: Read>(r: &mut R, len: u64) -> Result<Vec<u32>> {
    if len > MAX_ARRAY_LEN {
        return Err(Error::Format(format!("array length {len} is implausible")));
    }
    let mut out = vec![0u32; len as usize];
    r.read_u32_into::<LittleEndian>(&mut out)?;
    Ok(out)
}

/// Writes a `u64` length prefix followed by the values.
pub fn write_vec<W: Write>(w: &mut W, values: &[u32]) -> Result<()> {
    write_u64(w, values.len() as u64)?;
    write_u32s(w, values)
}

pub fn read_vec<R: Read>(r: &mut R) -> Result<Vec<u32>> {
    let len = read_u64(r)?;
    read_u32s(r, len)
}
