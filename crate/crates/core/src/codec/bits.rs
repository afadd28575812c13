//! MSB-first bit streams and fixed-width index packing.

use super::CodecError;

/// Bits needed to store values `0..=max`; 0 when `max` is 0.
pub fn bits_for(max: u64) -> u32 {
    u64::BITS - max.leading_zeros()
}

/// Index width for a dictionary of `n` entries: `max(1, ceil(log2 n))`.
pub fn index_width(n: u64) -> u32 {
    bits_for(n.saturating_sub(1)).max(1)
}

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    used: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn write(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0);
        for i in (0..width).rev() {
            if self.used == 0 {
                self.bytes.push(0);
            }
            let bit = ((value >> i) & 1) as u8;
            *self.bytes.last_mut().unwrap() |= bit << (7 - self.used);
            self.used = (self.used + 1) % 8;
        }
    }

    /// The written bytes; unused bits of the last byte are zero.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    bit: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, bit: 0 }
    }

    pub fn remaining(&self) -> u64 {
        self.bytes.len() as u64 * 8 - self.bit
    }

    /// Reads `width` bits as an unsigned value, or `None` if too few remain.
    pub fn read(&mut self, width: u32) -> Option<u64> {
        if self.remaining() < width as u64 {
            return None;
        }
        let mut value = 0u64;
        for _ in 0..width {
            let byte = self.bytes[(self.bit / 8) as usize];
            let bit = (byte >> (7 - self.bit % 8)) & 1;
            value = (value << 1) | bit as u64;
            self.bit += 1;
        }
        Some(value)
    }
}

/// Byte length of `count` values at `width` bits each.
pub fn packed_len(count: u64, width: u32) -> u64 {
    (count * width as u64).div_ceil(8)
}

/// Packs `indices` at the width implied by a dictionary of `n` entries.
pub fn pack_indices(indices: &[u32], n: usize) -> Result<Vec<u8>, CodecError> {
    let width = index_width(n as u64);
    let mut w = BitWriter::new();
    for &i in indices {
        if i as usize >= n {
            return Err(CodecError::IndexOutOfRange {
                index: i as u64,
                len: n,
            });
        }
        w.write(i as u64, width);
    }
    Ok(w.finish())
}

/// Inverse of [`pack_indices`]. Padding bits after the last index are
/// ignored; values are not range-checked here.
pub fn unpack_indices(bytes: &[u8], n: usize, count: u64) -> Result<Vec<u32>, CodecError> {
    let width = index_width(n as u64);
    if (bytes.len() as u64) < packed_len(count, width) {
        return Err(CodecError::TruncatedPayload {
            needed: packed_len(count, width),
            available: bytes.len() as u64,
        });
    }
    let mut r = BitReader::new(bytes);
    (0..count)
        .map(|_| Ok(r.read(width).expect("length checked") as u32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: build a '0'/'1' string and cut it into bytes.
    fn naive_pack(indices: &[u32], width: u32) -> Vec<u8> {
        let mut s: String = indices
            .iter()
            .map(|i| format!("{:0w$b}", i, w = width as usize))
            .collect();
        while !s.len().is_multiple_of(8) {
            s.push('0');
        }
        (0..s.len())
            .step_by(8)
            .map(|k| u8::from_str_radix(&s[k..k + 8], 2).unwrap())
            .collect()
    }

    #[test]
    fn widths() {
        assert_eq!(index_width(0), 1);
        assert_eq!(index_width(1), 1);
        assert_eq!(index_width(2), 1);
        assert_eq!(index_width(3), 2);
        assert_eq!(index_width(4), 2);
        assert_eq!(index_width(7), 3);
        assert_eq!(index_width(8), 3);
        assert_eq!(index_width(9), 4);
        assert_eq!(bits_for(0), 0);
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(4), 3);
    }

    #[test]
    fn example_stream_packs_into_three_bytes() {
        let idx = [1, 2, 0, 3, 4, 5, 6];
        let packed = pack_indices(&idx, 7).unwrap();
        assert_eq!(packed, naive_pack(&idx, 3));
        assert_eq!(packed, [0x28, 0x39, 0x70]);
        assert_eq!(unpack_indices(&packed, 7, 7).unwrap(), idx);
    }

    #[test]
    fn four_entry_example() {
        assert_eq!(pack_indices(&[3, 0, 2, 1], 4).unwrap(), [0xC9]);
        assert_eq!(unpack_indices(&[0xC9], 4, 4).unwrap(), [3, 0, 2, 1]);
        assert!(matches!(
            unpack_indices(&[0xC9], 4, 5),
            Err(CodecError::TruncatedPayload { .. })
        ));
        assert_eq!(pack_indices(&[], 4).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn out_of_range_index() {
        assert!(matches!(
            pack_indices(&[4], 4),
            Err(CodecError::IndexOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn bit_writer_mixed_widths() {
        let mut w = BitWriter::new();
        w.write(1, 1);
        w.write(0, 0);
        w.write(0xABCD, 16);
        w.write(u64::MAX, 64);
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read(1), Some(1));
        assert_eq!(r.read(0), Some(0));
        assert_eq!(r.read(16), Some(0xABCD));
        assert_eq!(r.read(64), Some(u64::MAX));
        assert_eq!(r.remaining(), 7);
        assert_eq!(r.read(8), None);
    }

    proptest! {
        #[test]
        fn pack_matches_oracle_and_round_trips(
            (n, idx) in (1usize..(1 << 20)).prop_flat_map(|n| (Just(n), prop::collection::vec(0..n as u32, 0..64)))
        ) {
            let packed = pack_indices(&idx, n).unwrap();
            prop_assert_eq!(&packed, &naive_pack(&idx, index_width(n as u64)));
            prop_assert_eq!(unpack_indices(&packed, n, idx.len() as u64).unwrap(), idx);
        }
    }
}
