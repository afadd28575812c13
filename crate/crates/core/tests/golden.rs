//! Checked-in containers must be reproduced byte for byte.
//!
//! Run with `PCA_BLESS=1` to rewrite the files after an intentional format
//! change.

use std::fs;
use std::path::PathBuf;

use pca::backend::BackendId;
use pca::codec::{compress, decompress};
use pca::dictionary::Mode;
use pca::normalizer::normalize;
use pca::reader::read_program;

const EXAMPLE_SOURCE: &str = "p(a,B,f(c,d,e)).";

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cases() -> Vec<(&'static str, String)> {
    let operators = fs::read_to_string(golden_dir().join("operators.pl")).unwrap();
    vec![
        ("empty.pca", String::new()),
        ("example.pca", EXAMPLE_SOURCE.to_owned()),
        ("operators.pca", operators),
    ]
}

fn image_of(source: &str) -> Vec<u8> {
    let program = normalize(read_program(source).unwrap());
    compress(&program, Mode::Pca0, BackendId::None).unwrap()
}

#[test]
fn containers_match_checked_in_bytes() {
    let bless = std::env::var_os("PCA_BLESS").is_some();
    for (file, source) in cases() {
        let path = golden_dir().join(file);
        let image = image_of(&source);
        if bless {
            fs::write(&path, &image).unwrap();
        }
        let golden = fs::read(&path).unwrap();
        assert_eq!(image, golden, "{file}");
        let expected = normalize(read_program(&source).unwrap());
        assert_eq!(decompress(&golden).unwrap().terms, expected.terms, "{file}");
    }
}

#[test]
fn example_container_layout() {
    let golden = fs::read(golden_dir().join("example.pca")).unwrap();
    let mut expected = b"PCA0\x01\x00\x00".to_vec();
    expected.extend([
        7, 0, 0, 0, 1, 0, 0, 0, 3, 0, 0, 0, 0, 7, 0, 0, 0, 0, 0, 0, 0,
    ]);
    expected.extend(b"\x01p\x01a\x01f\x01c\x01d\x01e");
    expected.extend([0x33, 0x00, 0x00, 0x28, 0x39, 0x70]);
    assert_eq!(golden, expected);
}

#[test]
fn empty_container_layout() {
    let golden = fs::read(golden_dir().join("empty.pca")).unwrap();
    let mut expected = b"PCA0\x01\x00\x00".to_vec();
    expected.extend([0u8; 21]);
    assert_eq!(golden, expected);
}

#[test]
fn operator_container_uses_two_bit_fixity() {
    let golden = fs::read(golden_dir().join("operators.pca")).unwrap();
    assert_eq!(&golden[..7], b"PCA0\x01\x00\x00");
    // tf byte: a postfix operator is present.
    assert_eq!(golden[19], 1);
}
