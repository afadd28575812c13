//! Dictionary serialization as three column parts: names (N), arities (A)
//! and fixities (T).

use super::bits::{bits_for, packed_len, BitReader, BitWriter};
use super::{CodecError, Header};
use crate::dictionary::{is_variable_text, parse_symbol, DictEntry, Dictionary, Mode, Symbol};
use crate::normalizer::var_name;
use crate::reader::Fixity;

fn check_agreement(dict: &Dictionary, header: &Header) -> Result<(), CodecError> {
    let mismatch = |what: &str, h: u64, d: u64| {
        Err(CodecError::HeaderMismatch(format!(
            "header {what} is {h}, dictionary has {d}"
        )))
    };
    if header.n_entries as usize != dict.len() {
        return mismatch("N", header.n_entries as u64, dict.len() as u64);
    }
    if header.nvar as usize != dict.nvar() {
        return mismatch("NVAR", header.nvar as u64, dict.nvar() as u64);
    }
    if header.amax != dict.amax() {
        return mismatch("AMAX", header.amax as u64, dict.amax() as u64);
    }
    if header.tf != dict.has_postfix() {
        return mismatch("TF", header.tf as u64, dict.has_postfix() as u64);
    }
    Ok(())
}

fn fixity_width(header: &Header) -> u32 {
    if header.tf {
        2
    } else {
        1
    }
}

/// Parts N, A and T of `dict`. In PCA₀ mode the variable names are left
/// out of Part N since the reader regenerates them.
pub fn serialize_dictionary(dict: &Dictionary, header: &Header) -> Result<Vec<u8>, CodecError> {
    check_agreement(dict, header)?;
    let entries = dict.entries();
    let skip = match header.mode {
        Mode::Pca0 => {
            if let Some(i) = (0..dict.nvar()).find(|&i| entries[i].text != var_name(i)) {
                return Err(CodecError::HeaderMismatch(format!(
                    "variable entry {i} is `{}`, not a canonical name",
                    entries[i].text
                )));
            }
            dict.nvar()
        }
        Mode::Pca2 => 0,
    };
    let mut out = Vec::new();
    for e in &entries[skip..] {
        leb128::write::unsigned(&mut out, e.text.len() as u64).expect("writing to a Vec");
        out.extend_from_slice(e.text.as_bytes());
    }
    let wa = bits_for(header.amax as u64);
    if wa > 0 {
        let mut w = BitWriter::new();
        for e in entries {
            w.write(e.arity as u64, wa);
        }
        out.extend(w.finish());
    }
    let wt = fixity_width(header);
    let mut w = BitWriter::new();
    for e in entries {
        w.write(e.fixity.code() as u64, wt);
    }
    out.extend(w.finish());
    Ok(out)
}

/// Inverse of [`serialize_dictionary`]; also returns the number of bytes
/// the three parts occupied.
pub fn deserialize_dictionary(
    bytes: &[u8],
    header: &Header,
) -> Result<(Dictionary, usize), CodecError> {
    let n = header.n_entries as u64;
    let nvar = header.nvar as u64;
    let implicit = match header.mode {
        Mode::Pca0 => nvar,
        Mode::Pca2 => 0,
    };
    let wa = bits_for(header.amax as u64);
    let wt = fixity_width(header);
    // Every stored name takes at least its length byte; checking up front
    // bounds the work a hostile header can ask for.
    let minimum = (n - implicit) + packed_len(n, wa) + packed_len(n, wt);
    if (bytes.len() as u64) < minimum {
        return Err(CodecError::TruncatedDictionary);
    }

    let mut pos = 0usize;
    let mut texts = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        if (i as u64) < implicit {
            texts.push(var_name(i));
            continue;
        }
        let mut cursor = &bytes[pos..];
        let len = leb128::read::unsigned(&mut cursor).map_err(|e| match e {
            leb128::read::Error::IoError(_) => CodecError::TruncatedDictionary,
            leb128::read::Error::Overflow => CodecError::NameDecodeError {
                index: i,
                reason: "name length overflows".into(),
            },
        })?;
        pos = bytes.len() - cursor.len();
        let end = usize::try_from(len)
            .ok()
            .and_then(|len| pos.checked_add(len))
            .filter(|&end| end <= bytes.len())
            .ok_or(CodecError::TruncatedDictionary)?;
        let text =
            std::str::from_utf8(&bytes[pos..end]).map_err(|e| CodecError::NameDecodeError {
                index: i,
                reason: format!("invalid UTF-8: {e}"),
            })?;
        texts.push(text.to_owned());
        pos = end;
    }

    let mut column = |width: u32| -> Result<Vec<u64>, CodecError> {
        let len = packed_len(n, width) as usize;
        let part = bytes
            .get(pos..pos + len)
            .ok_or(CodecError::TruncatedDictionary)?;
        pos += len;
        let mut r = BitReader::new(part);
        Ok((0..n)
            .map(|_| r.read(width).expect("length checked"))
            .collect())
    };
    let arities = column(wa)?;
    let fixities = column(wt)?;

    let mut entries = Vec::with_capacity(n as usize);
    for (i, ((text, arity), code)) in texts.into_iter().zip(arities).zip(fixities).enumerate() {
        let fixity = Fixity::from_code(code as u8).ok_or(CodecError::FixityOutOfRange {
            index: i,
            code: code as u8,
        })?;
        let bad = |reason: String| CodecError::BadEntry { index: i, reason };
        if arity > header.amax as u64 {
            return Err(bad(format!("arity {arity} exceeds AMAX {}", header.amax)));
        }
        if (i as u64) < nvar {
            if !is_variable_text(&text) {
                return Err(CodecError::NameDecodeError {
                    index: i,
                    reason: format!("`{text}` is not a variable name"),
                });
            }
            if arity != 0 || fixity != Fixity::Prefix {
                return Err(bad("variable entry with arity or fixity".into()));
            }
        } else {
            match parse_symbol(&text) {
                None => {
                    return Err(CodecError::NameDecodeError {
                        index: i,
                        reason: format!("`{text}` does not read as one atom or number"),
                    })
                }
                Some(Symbol::Atom(_)) => {}
                Some(_) if arity > 0 => {
                    return Err(bad(format!("number `{text}` with arity {arity}")))
                }
                Some(_) => {}
            }
        }
        entries.push(DictEntry {
            text,
            arity: arity as u32,
            fixity,
        });
    }
    let dict = Dictionary::from_entries(entries, nvar as usize)?;
    Ok((dict, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendId;
    use crate::dictionary::build;
    use crate::normalizer::normalize;
    use crate::reader::read_program;

    fn dict_and_header(src: &str, mode: Mode) -> (Dictionary, Header) {
        let dict = build(&normalize(read_program(src).unwrap()), mode);
        let header = Header::for_dictionary(&dict, mode, BackendId::None, 1).unwrap();
        (dict, header)
    }

    #[test]
    fn example_parts() {
        let (dict, header) = dict_and_header("p(a,B,f(c,d,e)).", Mode::Pca0);
        let bytes = serialize_dictionary(&dict, &header).unwrap();
        let mut expected = Vec::new();
        for name in ["p", "a", "f", "c", "d", "e"] {
            expected.push(1);
            expected.extend(name.as_bytes());
        }
        expected.extend([0x33, 0x00, 0x00]);
        assert_eq!(bytes, expected);
        assert_eq!(
            deserialize_dictionary(&bytes, &header).unwrap(),
            (dict, bytes.len())
        );
    }

    #[test]
    fn empty_dictionary_has_empty_parts() {
        let (dict, header) = dict_and_header("", Mode::Pca0);
        assert_eq!(
            serialize_dictionary(&dict, &header).unwrap(),
            Vec::<u8>::new()
        );
    }

    #[test]
    fn postfix_entry_widens_part_t() {
        let (dict, header) = dict_and_header(":- op(200, xf, ++). x ++ .", Mode::Pca0);
        assert!(header.tf);
        assert_eq!(header.amax, 3);
        let bytes = serialize_dictionary(&dict, &header).unwrap();
        let n = dict.len() as u64;
        let names: usize = dict.entries().iter().map(|e| 1 + e.text.len()).sum();
        assert_eq!(
            bytes.len() as u64,
            names as u64 + packed_len(n, 2) + packed_len(n, 2)
        );
        assert_eq!(deserialize_dictionary(&bytes, &header).unwrap().0, dict);
    }

    #[test]
    fn variables_cost_no_name_bytes_in_pca0() {
        let (dict, header) = dict_and_header("p(X, Y).", Mode::Pca0);
        assert_eq!(header.nvar, 2);
        let bytes = serialize_dictionary(&dict, &header).unwrap();
        // name `p` only, then arities (2 bits x 3) and fixities (1 bit x 3).
        assert_eq!(bytes, [1, b'p', 0b0000_1000, 0]);
        let (back, _) = deserialize_dictionary(&bytes, &header).unwrap();
        assert_eq!(back.entries()[0].text, "A");
        assert_eq!(back.entries()[1].text, "B");
    }

    #[test]
    fn pca2_stores_variable_names() {
        let (dict, header) = dict_and_header("p(Xs, _).", Mode::Pca2);
        let bytes = serialize_dictionary(&dict, &header).unwrap();
        assert_eq!(&bytes[..6], [2, b'X', b's', 1, b'_', 1]);
        assert_eq!(deserialize_dictionary(&bytes, &header).unwrap().0, dict);
    }

    #[test]
    fn header_must_agree() {
        let (dict, mut header) = dict_and_header("p(a).", Mode::Pca0);
        header.amax = 2;
        assert!(matches!(
            serialize_dictionary(&dict, &header),
            Err(CodecError::HeaderMismatch(_))
        ));
    }

    #[test]
    fn bad_names() {
        let (dict, header) = dict_and_header("p(a).", Mode::Pca0);
        let bytes = serialize_dictionary(&dict, &header).unwrap();
        let mut v = bytes.clone();
        v[1] = 0xFF;
        assert!(matches!(
            deserialize_dictionary(&v, &header),
            Err(CodecError::NameDecodeError { index: 0, .. })
        ));
        let mut v = bytes.clone();
        v[1] = b'P';
        assert!(matches!(
            deserialize_dictionary(&v, &header),
            Err(CodecError::NameDecodeError { index: 0, .. })
        ));
        let mut v = bytes;
        v[1] = b'1';
        assert!(matches!(
            deserialize_dictionary(&v, &header),
            Err(CodecError::BadEntry { index: 0, .. })
        ));
    }

    #[test]
    fn duplicate_entry() {
        let (dict, header) = dict_and_header("f(a, b).", Mode::Pca0);
        let mut v = serialize_dictionary(&dict, &header).unwrap();
        v[5] = b'a';
        assert!(matches!(
            deserialize_dictionary(&v, &header),
            Err(CodecError::BadEntry { index: 2, .. })
        ));
    }
}
