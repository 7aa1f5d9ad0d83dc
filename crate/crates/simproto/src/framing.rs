use crate::{Error, Result};

/// 4-byte big-endian unsigned length prefix followed by the payload.
pub fn frame(payload: &[u8]) -> Result<Vec<u8>> {
    if payload.len() >= u32::MAX as usize {
        return Err(Error::PayloadTooLarge(payload.len()));
    }
    let mut out = Vec::with_capacity(4 + payload.len());
    out.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    out.extend_from_slice(payload);
    Ok(out)
}

/// Validates and strips the length prefix of exactly one frame.
pub fn unframe(framed: &[u8]) -> Result<&[u8]> {
    if framed.len() < 4 {
        return Err(Error::Truncated {
            need: 4,
            have: framed.len(),
        });
    }
    let declared = u32::from_be_bytes(framed[..4].try_into().expect("4 bytes")) as usize;
    let actual = framed.len() - 4;
    if actual < declared {
        return Err(Error::Truncated {
            need: declared,
            have: actual,
        });
    }
    if actual > declared {
        return Err(Error::LengthMismatch { declared, actual });
    }
    Ok(&framed[4..])
}
