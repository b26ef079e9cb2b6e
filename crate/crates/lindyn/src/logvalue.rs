//! Sign-tagged natural-log representation of reals.
//!
//! The binomial sums in the asymptotics module span thousands of orders of
//! magnitude, so no raw exponential is ever formed: addition goes through
//! log-sum-exp with sign handling and multiplication adds logs.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    /// -1, 0, or 1; zero pairs with a log magnitude of -inf.
    pub sign: i8,
    /// Natural log of the magnitude.
    pub ln: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln: f64::NEG_INFINITY,
    };

    pub fn new(sign: i8, ln: f64) -> LogValue {
        if sign == 0 || ln == f64::NEG_INFINITY {
            LogValue::ZERO
        } else {
            LogValue { sign, ln }
        }
    }

    pub fn from_f64(x: f64) -> LogValue {
        if x == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                ln: x.abs().ln(),
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn neg(self) -> LogValue {
        LogValue::new(-self.sign, self.ln)
    }

    pub fn mul(self, other: LogValue) -> LogValue {
        LogValue::new(self.sign * other.sign, self.ln + other.ln)
    }

    pub fn add(self, other: LogValue) -> LogValue {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.ln >= other.ln {
            (self, other)
        } else {
            (other, self)
        };
        let d = small.ln - big.ln; // <= 0
        if big.sign == small.sign {
            LogValue::new(big.sign, big.ln + d.exp().ln_1p())
        } else {
            let inner = -((-d.exp()).ln_1p()); // -ln(1 - e^d) >= 0
            if d == 0.0 {
                LogValue::ZERO
            } else {
                LogValue::new(big.sign, big.ln - inner)
            }
        }
    }

    pub fn sub(self, other: LogValue) -> LogValue {
        self.add(other.neg())
    }

    /// Sign of the comparison with another value.
    pub fn cmp_value(self, other: LogValue) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.sign, other.sign) {
            (a, b) if a > b => Ordering::Greater,
            (a, b) if a < b => Ordering::Less,
            (0, 0) => Ordering::Equal,
            (1, 1) => self.ln.total_cmp(&other.ln),
            _ => other.ln.total_cmp(&self.ln),
        }
    }
}
