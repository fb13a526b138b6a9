use crate::Error;

/// The unspecified constants of the duality argument, made concrete.
///
/// `c0` enters `ψ` through the mean-width estimate, `c2` is the dilation
/// constant of the first-step covering inequality (`small_c2` its
/// counterpart in the reverse direction), `c2_prime` the constant of the
/// variant using `N(D, K°)`. `r0` starts both recurrences.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PaperConstants {
    #[cfg_attr(feature = "serde", serde(rename = "C0"))]
    pub c0: f64,
    #[cfg_attr(feature = "serde", serde(rename = "C2"))]
    pub c2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "c2"))]
    pub small_c2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "C2prime"))]
    pub c2_prime: f64,
    pub eps: f64,
    #[cfg_attr(feature = "serde", serde(rename = "R0"))]
    pub r0: f64,
}

impl Default for PaperConstants {
    fn default() -> Self {
        Self {
            c0: 1.0,
            c2: 1.0,
            small_c2: 1.0,
            c2_prime: 1.0,
            eps: 1.0,
            r0: 100.0,
        }
    }
}

impl PaperConstants {
    pub fn validate(&self) -> Result<(), Error> {
        let fields = [
            ("C0", self.c0),
            ("C2", self.c2),
            ("c2", self.small_c2),
            ("C2prime", self.c2_prime),
            ("eps", self.eps),
            ("R0", self.r0),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and positive",
                });
            }
        }
        if self.r0 < 16.0 {
            return Err(Error::InvalidParameter {
                name: "R0",
                reason: "must be at least 16",
            });
        }
        Ok(())
    }

    pub fn with_r0(self, r0: f64) -> Self {
        Self { r0, ..self }
    }

    /// FNV-1a over the bit patterns of all fields; stable across platforms.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in [
            self.c0,
            self.c2,
            self.small_c2,
            self.c2_prime,
            self.eps,
            self.r0,
        ] {
            for b in v.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}
