use super::CodecError;
use crate::backend::BackendId;
use crate::dictionary::{Dictionary, Mode};

pub const MAGIC: &[u8; 4] = b"PCA0";
pub const VERSION: u8 = 1;
/// Magic, version, mode and backend id; stored outside the backend.
pub const PREFIX_LEN: usize = 7;
/// Counts stored at the start of the (possibly wrapped) body.
pub const BODY_HEADER_LEN: usize = 21;
pub const HEADER_LEN: usize = PREFIX_LEN + BODY_HEADER_LEN;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub mode: Mode,
    pub backend: BackendId,
    pub n_entries: u32,
    pub nvar: u32,
    pub amax: u32,
    pub tf: bool,
    pub index_count: u64,
}

impl Header {
    pub fn for_dictionary(
        dict: &Dictionary,
        mode: Mode,
        backend: BackendId,
        index_count: u64,
    ) -> Result<Header, CodecError> {
        let too_big = |what: &str| CodecError::HeaderMismatch(format!("{what} exceeds 32 bits"));
        Ok(Header {
            mode,
            backend,
            n_entries: u32::try_from(dict.len()).map_err(|_| too_big("entry count"))?,
            nvar: u32::try_from(dict.nvar()).map_err(|_| too_big("variable count"))?,
            amax: dict.amax(),
            tf: dict.has_postfix(),
            index_count,
        })
    }

    pub fn prefix_bytes(&self) -> [u8; PREFIX_LEN] {
        let mut b = [0; PREFIX_LEN];
        b[..4].copy_from_slice(MAGIC);
        b[4] = VERSION;
        b[5] = self.mode.code();
        b[6] = self.backend.code();
        b
    }

    pub fn body_bytes(&self) -> [u8; BODY_HEADER_LEN] {
        let mut b = [0; BODY_HEADER_LEN];
        b[0..4].copy_from_slice(&self.n_entries.to_le_bytes());
        b[4..8].copy_from_slice(&self.nvar.to_le_bytes());
        b[8..12].copy_from_slice(&self.amax.to_le_bytes());
        b[12] = self.tf as u8;
        b[13..21].copy_from_slice(&self.index_count.to_le_bytes());
        b
    }

    /// Reads and validates the counts at the start of an unwrapped body.
    pub fn read_body(body: &[u8], mode: Mode, backend: BackendId) -> Result<Header, CodecError> {
        let b: &[u8; BODY_HEADER_LEN] = body
            .get(..BODY_HEADER_LEN)
            .and_then(|s| s.try_into().ok())
            .ok_or(CodecError::TruncatedHeader)?;
        let u32_at = |i: usize| u32::from_le_bytes(b[i..i + 4].try_into().unwrap());
        let tf = match b[12] {
            0 => false,
            1 => true,
            t => return Err(CodecError::HeaderMismatch(format!("TF flag is {t}"))),
        };
        let header = Header {
            mode,
            backend,
            n_entries: u32_at(0),
            nvar: u32_at(4),
            amax: u32_at(8),
            tf,
            index_count: u64::from_le_bytes(b[13..21].try_into().unwrap()),
        };
        if header.nvar > header.n_entries {
            return Err(CodecError::HeaderMismatch(format!(
                "NVAR {} exceeds N {}",
                header.nvar, header.n_entries
            )));
        }
        if (header.n_entries == 0) != (header.index_count == 0) {
            return Err(CodecError::HeaderMismatch(format!(
                "{} entries but {} indices",
                header.n_entries, header.index_count
            )));
        }
        Ok(header)
    }
}

/// Validates the unwrapped prefix and returns the mode and backend.
pub fn read_prefix(image: &[u8]) -> Result<(Mode, BackendId), CodecError> {
    if image.len() < MAGIC.len() || &image[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    if image.len() < PREFIX_LEN {
        return Err(CodecError::TruncatedHeader);
    }
    if image[4] != VERSION {
        return Err(CodecError::UnsupportedVersion(image[4]));
    }
    let mode = Mode::from_code(image[5]).ok_or(CodecError::UnknownMode(image[5]))?;
    let backend = BackendId::from_code(image[6])?;
    Ok((mode, backend))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let h = Header {
            mode: Mode::Pca2,
            backend: BackendId::Deflate,
            n_entries: 0x0102_0304,
            nvar: 5,
            amax: 6,
            tf: true,
            index_count: 0x1122_3344_5566_7788,
        };
        assert_eq!(h.prefix_bytes(), *b"PCA0\x01\x02\x01");
        let body = h.body_bytes();
        assert_eq!(&body[..4], [4, 3, 2, 1]);
        assert_eq!(body[12], 1);
        assert_eq!(
            &body[13..],
            [0x88, 0x77, 0x66, 0x55, 0x44, 0x33, 0x22, 0x11]
        );
        assert_eq!(
            Header::read_body(&body, Mode::Pca2, BackendId::Deflate),
            Ok(h)
        );
        assert_eq!(
            read_prefix(&h.prefix_bytes()),
            Ok((Mode::Pca2, BackendId::Deflate))
        );
    }

    #[test]
    fn short_body() {
        assert_eq!(
            Header::read_body(&[0; 20], Mode::Pca0, BackendId::None),
            Err(CodecError::TruncatedHeader)
        );
    }
}
