use std::fmt;

/// Power of `eps` counted in thirds: `EpsPower(5)` is `eps^(5/3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EpsPower(pub i32);

impl EpsPower {
    pub const ZERO: EpsPower = EpsPower(0);

    pub fn thirds(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 3.0
    }

    /// `eps^(thirds/3)`.
    pub fn of(self, eps: f64) -> f64 {
        eps.powf(self.value())
    }
}

impl fmt::Display for EpsPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 3 == 0 {
            write!(f, "{}", self.0 / 3)
        } else {
            write!(f, "{}/3", self.0)
        }
    }
}
