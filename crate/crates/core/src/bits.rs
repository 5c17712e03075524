//! Basis-state labels as fixed-width bitstrings (`"01"` is index 1 on two bits).

use crate::error::{Error, Result};

pub fn to_bitstring(value: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|i| if (value >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bitstring(s: &str, width: usize) -> Result<usize> {
    if s.len() != width || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::InvalidBitstring(s.to_string()));
    }
    Ok(s.chars().fold(0, |acc, c| (acc << 1) | usize::from(c == '1')))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for v in 0..16 {
            assert_eq!(parse_bitstring(&to_bitstring(v, 4), 4).unwrap(), v);
        }
        assert_eq!(to_bitstring(2, 2), "10");
        assert!(parse_bitstring("012", 3).is_err());
        assert!(parse_bitstring("01", 3).is_err());
    }
}
