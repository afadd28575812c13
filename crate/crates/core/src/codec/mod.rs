//! The container: a fixed header, the dictionary in three column parts, and
//! the bit-packed prefix-order index stream.
//!
//! ```text
//! "PCA0" version mode backend          7 bytes, never backend-wrapped
//! n_entries nvar amax (u32 LE) tf (u8) index_count (u64 LE)
//! Part N | Part A | Part T | payload
//! ```

pub mod bits;
mod header;
mod parts;
mod stream;

use thiserror::Error;

use crate::backend::{self, BackendError, BackendId};
use crate::dictionary::{self, DictError, Dictionary, Mode};
use crate::normalizer::NormalizedProgram;
use crate::reader::OpTable;

pub use bits::{index_width, pack_indices, unpack_indices};
pub use header::{Header, BODY_HEADER_LEN, HEADER_LEN, MAGIC, PREFIX_LEN, VERSION};
pub use parts::{deserialize_dictionary, serialize_dictionary};
pub use stream::{decode_term_stream, encode_term_stream, DecodedTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("not a PCA container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown mode {0}")]
    UnknownMode(u8),
    #[error("container header is truncated")]
    TruncatedHeader,
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("dictionary is truncated")]
    TruncatedDictionary,
    #[error("dictionary entry {index}: {reason}")]
    NameDecodeError { index: usize, reason: String },
    #[error("dictionary entry {index}: fixity code {code} out of range")]
    FixityOutOfRange { index: usize, code: u8 },
    #[error("dictionary entry {index}: {reason}")]
    BadEntry { index: usize, reason: String },
    #[error("index {index} out of range for a dictionary of {len} entries")]
    IndexOutOfRange { index: u64, len: usize },
    #[error("no dictionary entry for {0}")]
    MissingEntry(String),
    #[error("payload is truncated: {needed} bytes needed, {available} present")]
    TruncatedPayload { needed: u64, available: u64 },
    #[error("index stream ends inside a term")]
    TruncatedStream,
    #[error("{extra} unexpected bytes after the payload")]
    TrailingGarbage { extra: u64 },
    #[error(transparent)]
    Backend(#[from] BackendError),
}

impl From<DictError> for CodecError {
    fn from(e: DictError) -> Self {
        match e {
            DictError::MissingEntry(what) => CodecError::MissingEntry(what),
            DictError::IndexOutOfRange { index, len } => CodecError::IndexOutOfRange { index, len },
            DictError::DuplicateEntry { index, text, arity } => CodecError::BadEntry {
                index,
                reason: format!("duplicate entry {text}/{arity}"),
            },
        }
    }
}

/// Everything STEPs 1–3 produce for one program, before the backend.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub header: Header,
    pub dict: Dictionary,
    pub indices: Vec<u32>,
    /// Parts N, A and T, concatenated.
    pub parts: Vec<u8>,
    pub payload: Vec<u8>,
}

impl Encoding {
    /// The container with `backend` applied to everything after the prefix.
    pub fn to_image(&self, backend: BackendId) -> Vec<u8> {
        let header = Header {
            backend,
            ..self.header
        };
        let mut body = Vec::with_capacity(BODY_HEADER_LEN + self.parts.len() + self.payload.len());
        body.extend_from_slice(&header.body_bytes());
        body.extend_from_slice(&self.parts);
        body.extend_from_slice(&self.payload);
        let mut image = header.prefix_bytes().to_vec();
        image.extend(backend::wrap(&body, backend));
        image
    }
}

pub fn encode(program: &NormalizedProgram, mode: Mode) -> Result<Encoding, CodecError> {
    let dict = dictionary::build(program, mode);
    let indices = encode_term_stream(program, &dict, mode)?;
    let header = Header::for_dictionary(&dict, mode, BackendId::None, indices.len() as u64)?;
    let parts = serialize_dictionary(&dict, &header)?;
    let payload = pack_indices(&indices, dict.len())?;
    Ok(Encoding {
        header,
        dict,
        indices,
        parts,
        payload,
    })
}

pub fn compress(
    program: &NormalizedProgram,
    mode: Mode,
    backend: BackendId,
) -> Result<Vec<u8>, CodecError> {
    Ok(encode(program, mode)?.to_image(backend))
}

/// Parses a container back into a program. The operator table is rebuilt
/// by replaying the `op/3` directives of the decoded terms.
pub fn decompress(image: &[u8]) -> Result<NormalizedProgram, CodecError> {
    let (mode, backend) = header::read_prefix(image)?;
    let body = backend::unwrap(&image[PREFIX_LEN..], backend)?;
    let header = Header::read_body(&body, mode, backend)?;
    let rest = &body[BODY_HEADER_LEN..];
    let (dict, used) = deserialize_dictionary(rest, &header)?;
    let payload = &rest[used..];
    let indices = unpack_indices(payload, dict.len(), header.index_count)?;
    let needed = bits::packed_len(header.index_count, index_width(dict.len() as u64));
    if payload.len() as u64 > needed {
        return Err(CodecError::TrailingGarbage {
            extra: payload.len() as u64 - needed,
        });
    }
    let decoded = decode_term_stream(&indices, &dict)?;
    let mut ops = OpTable::standard();
    let mut terms = Vec::with_capacity(decoded.len());
    let mut var_names = Vec::with_capacity(decoded.len());
    let mut max_vars = 0;
    for d in decoded {
        ops.apply_directive(&d.term);
        max_vars = max_vars.max(d.var_names.len());
        terms.push(d.term);
        var_names.push(d.var_names);
    }
    Ok(NormalizedProgram {
        terms,
        var_names,
        ops,
        max_vars,
    })
}
