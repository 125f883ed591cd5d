//! Exact rational scalars for lattice coefficients.
//!
//! Coefficients that appear in Möbius vectors and signal specs are small exact
//! rationals: a 64-bit numerator/denominator pair is ample (the largest
//! magnitudes are products of factorials of block counts at q ≤ 8). All
//! construction goes through checked arithmetic; overflow is an error, never a
//! silent wrap. In serialized form a rational is a string such as `"2"` or
//! `"-1/3"`.

use crate::error::{Error, Result};
use num_rational::Ratio;

/// Exact rational coefficient.
pub type Rat = Ratio<i64>;

/// Parse `"p"` or `"p/q"` into a rational (whitespace tolerated).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {text:?}")))?;
    let d: i64 = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {text:?}")))?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Canonical string form: `"p"` when the denominator is one, else `"p/q"`.
pub fn rat_to_string(r: &Rat) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter: (de)serialize a [`Rat`] as its canonical string form.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Serialize a rational as a string.
    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    /// Deserialize a rational from a string.
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        for s in ["0", "2", "-1", "1/3", "-7/4", "6/4"] {
            let r = parse_rat(s).unwrap();
            let printed = rat_to_string(&r);
            assert_eq!(parse_rat(&printed).unwrap(), r);
        }
        assert_eq!(rat_to_string(&parse_rat("6/4").unwrap()), "3/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/2/3").is_err());
    }
}
