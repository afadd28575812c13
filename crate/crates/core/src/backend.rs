//! Optional general-purpose compression of the container body.

use std::fmt;
use std::str::FromStr;

use flate2::{Compress, Compression, Decompress, FlushCompress, FlushDecompress, Status};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendId {
    None,
    /// Raw RFC 1951 deflate, no zlib or gzip framing.
    Deflate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("unknown backend id {0}")]
    UnknownBackend(u8),
    #[error("corrupt backend stream: {0}")]
    CorruptBackendStream(String),
}

impl BackendId {
    pub fn code(self) -> u8 {
        match self {
            BackendId::None => 0,
            BackendId::Deflate => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<BackendId, BackendError> {
        match code {
            0 => Ok(BackendId::None),
            1 => Ok(BackendId::Deflate),
            _ => Err(BackendError::UnknownBackend(code)),
        }
    }
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendId::None => "none",
            BackendId::Deflate => "deflate",
        })
    }
}

impl FromStr for BackendId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(BackendId::None),
            "deflate" => Ok(BackendId::Deflate),
            _ => Err(format!("unknown backend `{s}` (expected none or deflate)")),
        }
    }
}

pub fn wrap(body: &[u8], id: BackendId) -> Vec<u8> {
    match id {
        BackendId::None => body.to_vec(),
        BackendId::Deflate => deflate(body),
    }
}

pub fn unwrap(data: &[u8], id: BackendId) -> Result<Vec<u8>, BackendError> {
    match id {
        BackendId::None => Ok(data.to_vec()),
        BackendId::Deflate => inflate(data),
    }
}

fn deflate(body: &[u8]) -> Vec<u8> {
    let mut c = Compress::new(Compression::best(), false);
    let mut out = Vec::with_capacity(body.len() / 2 + 64);
    loop {
        if out.len() == out.capacity() {
            out.reserve(out.capacity().max(64));
        }
        let consumed = c.total_in() as usize;
        let status = c
            .compress_vec(&body[consumed..], &mut out, FlushCompress::Finish)
            .expect("deflate of an in-memory buffer cannot fail");
        if status == Status::StreamEnd {
            return out;
        }
    }
}

fn inflate(data: &[u8]) -> Result<Vec<u8>, BackendError> {
    let mut d = Decompress::new(false);
    let mut out = Vec::with_capacity(data.len() * 3 + 64);
    loop {
        if out.len() == out.capacity() {
            out.reserve(out.capacity());
        }
        let (before_in, before_out) = (d.total_in(), d.total_out());
        let status = d
            .decompress_vec(&data[before_in as usize..], &mut out, FlushDecompress::None)
            .map_err(|e| BackendError::CorruptBackendStream(e.to_string()))?;
        if status == Status::StreamEnd {
            break;
        }
        if d.total_in() == before_in && d.total_out() == before_out {
            return Err(BackendError::CorruptBackendStream(
                "truncated deflate stream".into(),
            ));
        }
    }
    if d.total_in() as usize != data.len() {
        return Err(BackendError::CorruptBackendStream(
            "data after end of deflate stream".into(),
        ));
    }
    Ok(out)
}
