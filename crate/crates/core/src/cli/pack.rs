//! Bytes to base-field symbols and back.

/// Splits `data` into `bits`-wide symbols, least significant bit first. The
/// final symbol is zero-padded.
pub fn pack_bits(data: &[u8], bits: u32) -> Vec<u32> {
    assert!((1..=31).contains(&bits), "symbol width {bits}");
    if bits == 8 {
        return data.iter().map(|&b| u32::from(b)).collect();
    }
    let mask = (1u64 << bits) - 1;
    let mut out = Vec::with_capacity((data.len() * 8).div_ceil(bits as usize));
    let (mut acc, mut have) = (0u64, 0u32);
    for &b in data {
        acc |= u64::from(b) << have;
        have += 8;
        while have >= bits {
            out.push((acc & mask) as u32);
            acc >>= bits;
            have -= bits;
        }
    }
    if have > 0 {
        out.push(acc as u32);
    }
    out
}

/// Inverse of [`pack_bits`]: concatenates the low `bits` bits of each symbol
/// and returns the first `len` bytes.
pub fn unpack_bits(symbols: &[u32], bits: u32, len: usize) -> Vec<u8> {
    assert!((1..=31).contains(&bits), "symbol width {bits}");
    if bits == 8 {
        return symbols.iter().take(len).map(|&s| s as u8).collect();
    }
    let mask = (1u64 << bits) - 1;
    let mut out = Vec::with_capacity(len);
    let (mut acc, mut have) = (0u64, 0u32);
    for &s in symbols {
        if out.len() == len {
            break;
        }
        acc |= (u64::from(s) & mask) << have;
        have += bits;
        while have >= 8 && out.len() < len {
            out.push(acc as u8);
            acc >>= 8;
            have -= 8;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_layouts() {
        assert_eq!(pack_bits(&[0xAB, 0xCD], 8), vec![0xAB, 0xCD]);
        assert_eq!(pack_bits(&[0xAB, 0xCD], 4), vec![0xB, 0xA, 0xD, 0xC]);
        assert_eq!(pack_bits(&[0xAB, 0xCD], 16), vec![0xCDAB]);
        // 3-bit symbols of 0b1010_1011: 011, 101, 10 (+ padding)
        assert_eq!(pack_bits(&[0xAB], 3), vec![0b011, 0b101, 0b010]);
        assert!(pack_bits(&[], 3).is_empty());
    }

    proptest! {
        #[test]
        fn round_trip(data in prop::collection::vec(any::<u8>(), 0..64), bits in 1u32..=30) {
            let symbols = pack_bits(&data, bits);
            prop_assert!(symbols.iter().all(|&s| s < 1 << bits));
            prop_assert_eq!(unpack_bits(&symbols, bits, data.len()), data);
        }
    }
}
