use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer mode vector `m = (m1, m2)` labelling `E_m = exp(i(m1 p + m2 q))`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeVector {
    pub m1: i64,
    pub m2: i64,
}

impl ModeVector {
    pub const ZERO: Self = Self { m1: 0, m2: 0 };

    pub const fn new(m1: i64, m2: i64) -> Self {
        Self { m1, m2 }
    }

    /// Planar cross product `m × n = m1 n2 − m2 n1`.
    pub const fn cross(self, other: Self) -> i64 {
        self.m1 * other.m2 - self.m2 * other.m1
    }

    /// Max-norm `max(|m1|, |m2|)`.
    pub fn norm_inf(self) -> u64 {
        self.m1.unsigned_abs().max(self.m2.unsigned_abs())
    }

    pub const fn is_zero(self) -> bool {
        self.m1 == 0 && self.m2 == 0
    }
}

impl From<(i64, i64)> for ModeVector {
    fn from((m1, m2): (i64, i64)) -> Self {
        Self { m1, m2 }
    }
}

impl fmt::Display for ModeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m1, self.m2)
    }
}

impl Add for ModeVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.m1 + rhs.m1, self.m2 + rhs.m2)
    }
}

impl Sub for ModeVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.m1 - rhs.m1, self.m2 - rhs.m2)
    }
}

impl Neg for ModeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.m1, -self.m2)
    }
}

impl Mul<ModeVector> for i64 {
    type Output = ModeVector;
    fn mul(self, rhs: ModeVector) -> ModeVector {
        ModeVector::new(self * rhs.m1, self * rhs.m2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_antisymmetric() {
        let m = ModeVector::new(3, -2);
        let n = ModeVector::new(1, 5);
        assert_eq!(m.cross(n), 17);
        assert_eq!(n.cross(m), -17);
        assert_eq!(m.cross(m), 0);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = vec![
            ModeVector::new(1, -1),
            ModeVector::new(-1, 2),
            ModeVector::new(-1, -3),
            ModeVector::new(0, 0),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ModeVector::new(-1, -3),
                ModeVector::new(-1, 2),
                ModeVector::new(0, 0),
                ModeVector::new(1, -1),
            ]
        );
    }

    #[test]
    fn arithmetic() {
        let m = ModeVector::new(2, -1);
        assert_eq!(m + m, 2 * m);
        assert_eq!(m - m, ModeVector::ZERO);
        assert_eq!(-m, ModeVector::new(-2, 1));
        assert_eq!(m.norm_inf(), 2);
    }
}
