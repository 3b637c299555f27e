use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three system shapes with dedicated Bloch decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    #[serde(rename = "2x2")]
    TwoQubit,
    #[serde(rename = "3x3")]
    TwoQutrit,
    #[serde(rename = "2x2x2")]
    ThreeQubit,
}

impl System {
    pub const ALL: [System; 3] = [System::TwoQubit, System::TwoQutrit, System::ThreeQubit];

    pub fn dims(self) -> &'static [usize] {
        match self {
            System::TwoQubit => &[2, 2],
            System::TwoQutrit => &[3, 3],
            System::ThreeQubit => &[2, 2, 2],
        }
    }

    pub fn dim(self) -> usize {
        self.dims().iter().product()
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        match dims {
            [2, 2] => Ok(System::TwoQubit),
            [3, 3] => Ok(System::TwoQutrit),
            [2, 2, 2] => Ok(System::ThreeQubit),
            _ => Err(Error::UnsupportedShape(dims.to_vec())),
        }
    }

    /// Value of `‖T‖` on product states; the entanglement measure is `‖T‖` minus this.
    pub fn product_norm(self) -> f64 {
        match self {
            System::TwoQubit | System::ThreeQubit => 1.0,
            System::TwoQutrit => 3.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            System::TwoQubit => "2x2",
            System::TwoQutrit => "3x3",
            System::ThreeQubit => "2x2x2",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2x2" => Ok(System::TwoQubit),
            "3x3" => Ok(System::TwoQutrit),
            "2x2x2" => Ok(System::ThreeQubit),
            other => Err(Error::OutOfRange(format!("unknown system {other:?}"))),
        }
    }
}
