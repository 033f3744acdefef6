//! Unit conversions for the quantities the toolkit exchanges with users.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::NVParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Gauss,
    Tesla,
    MilliTesla,
    VoltPerCm,
    VoltPerMeter,
    /// Non-axial strain/field expressed as a frequency, `d_perp * field`.
    PerpFrequencyHz,
    /// Axial strain/field expressed as a frequency, `d_par * field`.
    AxialFrequencyHz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Magnetic,
    Electric,
}

impl Unit {
    fn dimension(self) -> Dimension {
        match self {
            Unit::Gauss | Unit::Tesla | Unit::MilliTesla => Dimension::Magnetic,
            _ => Dimension::Electric,
        }
    }

    /// Value of one unit in the canonical unit of its dimension (G or V/cm).
    fn to_canonical(self, p: &NVParams) -> f64 {
        match self {
            Unit::Gauss => 1.0,
            Unit::Tesla => 1e4,
            Unit::MilliTesla => 10.0,
            Unit::VoltPerCm => 1.0,
            Unit::VoltPerMeter => 1e-2,
            Unit::PerpFrequencyHz => 1.0 / p.d_perp,
            Unit::AxialFrequencyHz => 1.0 / p.d_par,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::Gauss => "G",
            Unit::Tesla => "T",
            Unit::MilliTesla => "mT",
            Unit::VoltPerCm => "V/cm",
            Unit::VoltPerMeter => "V/m",
            Unit::PerpFrequencyHz => "Hz(perp)",
            Unit::AxialFrequencyHz => "Hz(axial)",
        };
        f.write_str(s)
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "G" | "gauss" => Unit::Gauss,
            "T" | "tesla" => Unit::Tesla,
            "mT" | "millitesla" => Unit::MilliTesla,
            "V/cm" => Unit::VoltPerCm,
            "V/m" => Unit::VoltPerMeter,
            "Hz(perp)" | "hz-perp" => Unit::PerpFrequencyHz,
            "Hz(axial)" | "hz-axial" => Unit::AxialFrequencyHz,
            other => {
                return Err(Error::UnsupportedConversion {
                    from: other.to_string(),
                    to: "?".to_string(),
                })
            }
        })
    }
}

/// Converts `value` between units of the same dimension. Frequency views of
/// electric/strain fields go through the Stark coefficients in `p`.
pub fn convert_units(value: f64, from: Unit, to: Unit, p: &NVParams) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::UnsupportedConversion {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.to_canonical(p) / to.to_canonical(p))
}
