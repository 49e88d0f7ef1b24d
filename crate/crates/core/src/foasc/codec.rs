use crate::algebra::bitlen;

use super::FoascError;

/// Mixed-radix digit layout shared by level points, ring vectors and
/// randomness descriptors.
///
/// A value is a flat sequence of digits, digit `c` lying in `[0, radix_c)`.
/// On the wire each digit takes `ceil(bitlen(radix - 1) / 8)` bytes,
/// little-endian, concatenated with no length prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codec {
    segments: Vec<(u64, usize)>,
}

impl Codec {
    pub fn empty() -> Self {
        Self {
            segments: Vec::new(),
        }
    }

    /// `count` digits of the same radix.
    pub fn uniform(radix: u64, count: usize) -> Self {
        Self::empty().then(radix, count)
    }

    pub fn then(mut self, radix: u64, count: usize) -> Self {
        assert!(radix >= 1, "radix must be positive");
        if count > 0 {
            match self.segments.last_mut() {
                Some((r, c)) if *r == radix => *c += count,
                _ => self.segments.push((radix, count)),
            }
        }
        self
    }

    pub fn segments(&self) -> &[(u64, usize)] {
        &self.segments
    }

    /// Number of digits.
    pub fn len(&self) -> usize {
        self.segments.iter().map(|(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radices(&self) -> impl Iterator<Item = u64> + '_ {
        self.segments
            .iter()
            .flat_map(|&(r, c)| std::iter::repeat_n(r, c))
    }

    /// `log2` of the number of representable values.
    pub fn log2_size(&self) -> f64 {
        self.segments
            .iter()
            .map(|&(r, c)| c as f64 * (r as f64).log2())
            .sum()
    }

    /// Number of representable values, `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        self.segments.iter().try_fold(1u128, |acc, &(r, c)| {
            (r as u128)
                .checked_pow(c as u32)
                .and_then(|x| acc.checked_mul(x))
        })
    }

    /// Bits with each digit written in `bitlen(radix - 1)` bits.
    pub fn packed_bits(&self) -> u64 {
        self.segments
            .iter()
            .map(|&(r, c)| c as u64 * bitlen(r - 1) as u64)
            .sum()
    }

    pub fn byte_len(&self) -> usize {
        self.segments.iter().map(|&(r, c)| c * digit_bytes(r)).sum()
    }

    pub fn validate(&self, digits: &[u64]) -> Result<(), FoascError> {
        if digits.len() != self.len() {
            return Err(FoascError::MalformedValue(format!(
                "expected {} digits, got {}",
                self.len(),
                digits.len()
            )));
        }
        for (pos, (d, r)) in digits.iter().zip(self.radices()).enumerate() {
            if *d >= r {
                return Err(FoascError::MalformedValue(format!(
                    "digit {pos} = {d} out of range for radix {r}"
                )));
            }
        }
        Ok(())
    }

    pub fn encode(&self, digits: &[u64], out: &mut Vec<u8>) -> Result<(), FoascError> {
        self.validate(digits)?;
        for (d, r) in digits.iter().zip(self.radices()) {
            out.extend_from_slice(&d.to_le_bytes()[..digit_bytes(r)]);
        }
        Ok(())
    }

    pub fn to_bytes(&self, digits: &[u64]) -> Result<Vec<u8>, FoascError> {
        let mut out = Vec::with_capacity(self.byte_len());
        self.encode(digits, &mut out)?;
        Ok(out)
    }

    /// Decodes exactly `byte_len()` bytes.
    pub fn decode(&self, bytes: &[u8]) -> Result<Vec<u64>, FoascError> {
        if bytes.len() != self.byte_len() {
            return Err(FoascError::MalformedValue(format!(
                "expected {} bytes, got {}",
                self.byte_len(),
                bytes.len()
            )));
        }
        let mut digits = Vec::with_capacity(self.len());
        let mut pos = 0;
        for r in self.radices() {
            let w = digit_bytes(r);
            let mut buf = [0u8; 8];
            buf[..w].copy_from_slice(&bytes[pos..pos + w]);
            digits.push(u64::from_le_bytes(buf));
            pos += w;
        }
        self.validate(&digits)?;
        Ok(digits)
    }

    /// Mixed-radix index with the first digit most significant.
    pub fn index_of(&self, digits: &[u64]) -> u128 {
        digits
            .iter()
            .zip(self.radices())
            .fold(0u128, |acc, (&d, r)| acc * r as u128 + d as u128)
    }

    /// Inverse of [`Codec::index_of`].
    pub fn from_index(&self, mut idx: u128) -> Vec<u64> {
        let radices: Vec<u64> = self.radices().collect();
        let mut digits = vec![0; radices.len()];
        for (slot, &r) in digits.iter_mut().zip(&radices).rev() {
            *slot = (idx % r as u128) as u64;
            idx /= r as u128;
        }
        digits
    }

    /// Compact human-readable layout, e.g. `Z7^3` or `Z4^3 x Z2^2`.
    pub fn describe(&self) -> String {
        if self.segments.is_empty() {
            return "{}".into();
        }
        self.segments
            .iter()
            .map(|(r, c)| format!("Z{r}^{c}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

fn digit_bytes(radix: u64) -> usize {
    (bitlen(radix - 1) as usize).div_ceil(8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        let c = Codec::uniform(4, 3).then(2, 7);
        assert_eq!(c.len(), 10);
        assert_eq!(c.packed_bits(), 3 * 2 + 7);
        assert_eq!(c.byte_len(), 10);
        assert!((c.log2_size() - 13.0).abs() < 1e-12);
        assert_eq!(Codec::uniform(256, 1).byte_len(), 1);
        assert_eq!(Codec::uniform(257, 1).byte_len(), 2);
        assert_eq!(Codec::uniform(1, 4).byte_len(), 0);
    }

    #[test]
    fn decode_rejects_bad_input() {
        let c = Codec::uniform(7, 2);
        assert!(c.decode(&[1]).is_err());
        assert!(c.decode(&[1, 7]).is_err());
        assert_eq!(c.decode(&[1, 6]).unwrap(), vec![1, 6]);
    }

    #[test]
    fn index_is_most_significant_first() {
        let c = Codec::uniform(3, 2);
        assert_eq!(c.index_of(&[1, 2]), 5);
        assert_eq!(c.from_index(5), vec![1, 2]);
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(radices in prop::collection::vec(2u64..70000, 1..6), seed in any::<u64>()) {
            let codec = radices.iter().fold(Codec::empty(), |c, &r| c.then(r, 1));
            let digits: Vec<u64> = radices.iter().enumerate()
                .map(|(i, &r)| seed.rotate_left(i as u32 * 7) % r).collect();
            let bytes = codec.to_bytes(&digits).unwrap();
            prop_assert_eq!(bytes.len(), codec.byte_len());
            prop_assert_eq!(codec.decode(&bytes).unwrap(), digits.clone());
            prop_assert_eq!(codec.from_index(codec.index_of(&digits)), digits);
        }
    }
}
