//! Per-step size accounting for one program.
//!
//! Sizes 1 and 2 are accounting views, not emitted formats: both pair the
//! index stream with a naive dictionary (length-prefixed names for every
//! entry, 4-byte arity, 1-byte fixity) under the full header. Size 1 spends
//! whole bytes on each index, size 2 packs indices at `w` bits. Size 3 is
//! the real container without a backend, size 4 the deflated one.

use serde::Serialize;

use crate::backend::BackendId;
use crate::codec::{self, index_width, CodecError, Encoding, HEADER_LEN};
use crate::dictionary::{Dictionary, Mode};
use crate::normalizer::{nf0_text, normalize, NormalizedProgram};
use crate::reader::{read_program, ReadError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub file: String,
    pub size_pp: u64,
    pub size_nf0: u64,
    pub size1: u64,
    pub size2: u64,
    pub size3: u64,
    pub size4: u64,
    pub n_entries: u64,
    pub nvar: u64,
    pub index_count: u64,
    /// `[nf0, size1, .., size4]` over `size_pp`.
    pub ratios_pp: [f64; 5],
    /// The same sizes over `size_nf0`.
    pub ratios_nf0: [f64; 5],
}

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

fn varint_len(mut n: u64) -> u64 {
    let mut len = 1;
    while n >= 0x80 {
        n >>= 7;
        len += 1;
    }
    len
}

/// Dictionary bytes without the STEP-3 optimizations.
pub fn naive_dictionary_size(dict: &Dictionary) -> u64 {
    dict.entries()
        .iter()
        .map(|e| {
            let len = e.text.len() as u64;
            varint_len(len) + len + 4 + 1
        })
        .sum()
}

/// Bytes per index when every index takes whole bytes.
pub fn byte_index_width(n_entries: usize) -> u64 {
    (index_width(n_entries as u64) as u64).div_ceil(8)
}

fn ratio(size: u64, base: u64) -> f64 {
    if base == 0 {
        0.0
    } else {
        size as f64 / base as f64
    }
}

/// Sizes of an already normalized program whose source took `size_pp` bytes.
pub fn report_for(
    file: &str,
    size_pp: u64,
    program: &NormalizedProgram,
) -> Result<StatsReport, CodecError> {
    let size_nf0 = nf0_text(program).len() as u64;
    let enc: Encoding = codec::encode(program, Mode::Pca0)?;
    let naive = naive_dictionary_size(&enc.dict);
    let count = enc.indices.len() as u64;
    let header = HEADER_LEN as u64;
    let size1 = header + naive + count * byte_index_width(enc.dict.len());
    let size2 = header + naive + enc.payload.len() as u64;
    let size3 = enc.to_image(BackendId::None).len() as u64;
    let size4 = enc.to_image(BackendId::Deflate).len() as u64;
    let sizes = [size_nf0, size1, size2, size3, size4];
    Ok(StatsReport {
        file: file.to_owned(),
        size_pp,
        size_nf0,
        size1,
        size2,
        size3,
        size4,
        n_entries: enc.dict.len() as u64,
        nvar: enc.dict.nvar() as u64,
        index_count: count,
        ratios_pp: sizes.map(|s| ratio(s, size_pp)),
        ratios_nf0: sizes.map(|s| ratio(s, size_nf0)),
    })
}

pub fn report(file: &str, source: &str) -> Result<StatsReport, StatsError> {
    let program = normalize(read_program(source)?);
    Ok(report_for(file, source.len() as u64, &program)?)
}

impl StatsReport {
    /// Aligned text table: one row per step, sizes and both ratio forms.
    pub fn render(&self) -> String {
        let rows = [
            ("PP", self.size_pp),
            ("NF0", self.size_nf0),
            ("1", self.size1),
            ("2", self.size2),
            ("3", self.size3),
            ("4", self.size4),
        ];
        let mut out = format!(
            "{}\n{:<6}{:>12}{:>10}{:>10}\n",
            self.file, "step", "bytes", "vs PP", "vs NF0"
        );
        for (name, size) in rows {
            out.push_str(&format!(
                "{:<6}{:>12}{:>10.3}{:>10.3}\n",
                name,
                size,
                ratio(size, self.size_pp),
                ratio(size, self.size_nf0)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_accounting() {
        let src = "p(a,B,f(c,d,e)).";
        let r = report("ex.pl", src).unwrap();
        assert_eq!(r.index_count, 7);
        // One byte per index: 7 bytes of payload against 15 bytes of text.
        assert_eq!(r.index_count * byte_index_width(7), 7);
        assert_eq!(r.size_nf0, 17);
        // Naive dictionary: 7 one-byte names, each 1 + 1 + 4 + 1 bytes.
        assert_eq!(r.size1, 28 + 49 + 7);
        assert_eq!(r.size2, 28 + 49 + 3);
        assert_eq!(r.size3, 46);
        assert!(r.size3 <= r.size2);
    }

    #[test]
    fn comments_shrink_step_zero() {
        let r = report(
            "c.pl",
            "% a long comment about nothing at all\np(X) :- q(X).\n",
        )
        .unwrap();
        assert!(r.ratios_pp[0] < 1.0);
        let r = report("d.pl", "p(A):-q(A).\n").unwrap();
        assert_eq!(r.ratios_pp[0], 1.0);
    }

    #[test]
    fn empty_source() {
        let r = report("e.pl", "").unwrap();
        assert_eq!(r.size3, HEADER_LEN as u64);
        assert_eq!(r.ratios_pp, [0.0; 5]);
    }

    #[test]
    fn render_has_every_step() {
        let text = report("x.pl", "a.").unwrap().render();
        for step in [
            "PP", "NF0", "\n1 ", "\n2 ", "\n3 ", "\n4 ", "vs PP", "vs NF0",
        ] {
            assert!(text.contains(step), "{step} missing from\n{text}");
        }
    }

    #[test]
    fn varints() {
        assert_eq!(varint_len(0), 1);
        assert_eq!(varint_len(127), 1);
        assert_eq!(varint_len(128), 2);
        assert_eq!(varint_len(16383), 2);
        assert_eq!(varint_len(16384), 3);
    }
}
