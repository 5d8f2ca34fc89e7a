use std::fmt;

use serde::{Serialize, Serializer};

/// A non-negative value with exactly two decimal places, stored as
/// hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed2(u64);

impl Fixed2 {
    pub fn from_hundredths(h: u64) -> Self {
        Fixed2(h)
    }

    pub fn hundredths(self) -> u64 {
        self.0
    }

    /// `num / den` rounded half-up to two decimals, computed exactly.
    ///
    /// Panics if `den` is zero.
    pub fn from_ratio(num: u64, den: u64) -> Self {
        assert!(den > 0, "ratio with zero denominator");
        let num = u128::from(num) * 200 + u128::from(den);
        let den = u128::from(den) * 2;
        Fixed2(u64::try_from(num / den).expect("ratio overflows"))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Fixed2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

impl Serialize for Fixed2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}
