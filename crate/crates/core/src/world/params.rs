use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which sensor observation model the network uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Deterministic observation model; inconsistent data is impossible evidence.
    Basic,
    /// Soft observation model with confidences in positive and negative data.
    Modified,
    /// Adds a working/defective status parent to every observation, unlinked over time.
    Invalidator,
    /// Status nodes linked over time by degradation and recovery.
    Chain,
    /// As `Chain`, but a defective sensor still reports correctly with probability `x`.
    Intermittent,
    /// Linked status with distinct ghost, wrong-direction and missing-data defects.
    Extended,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Basic,
        Variant::Modified,
        Variant::Invalidator,
        Variant::Chain,
        Variant::Intermittent,
        Variant::Extended,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::Modified => "modified",
            Variant::Invalidator => "invalidator",
            Variant::Chain => "chain",
            Variant::Intermittent => "intermittent",
            Variant::Extended => "extended",
        }
    }

    /// Whether the network carries sensor status nodes.
    pub fn has_status(self) -> bool {
        !matches!(self, Variant::Basic | Variant::Modified)
    }

    /// Whether successive status nodes of a sensor are linked.
    pub fn links_status(self) -> bool {
        matches!(
            self,
            Variant::Chain | Variant::Intermittent | Variant::Extended
        )
    }

    pub fn status_states(self) -> &'static [&'static str] {
        match self {
            Variant::Extended => &super::EXTENDED_STATUS_STATES,
            _ => &super::STATUS_STATES,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant {s:?}")))
    }
}

/// Parameters of the sensor observation and status models.
///
/// Only the parameters the variant uses need to be present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorModelParams {
    pub variant: Variant,
    /// Confidence in positive (crossing) data.
    pub conf1: Option<f64>,
    /// Confidence in negative (no crossing) data.
    pub conf2: Option<f64>,
    /// Prior probability a sensor is working.
    pub conf: Option<f64>,
    /// Per-interval probability a working sensor becomes defective.
    pub degradation: Option<f64>,
    /// Per-interval probability a defective sensor recovers.
    pub recovery: Option<f64>,
    /// Probability a defective sensor still reports the actual crossing.
    pub leak: Option<f64>,
}

impl SensorModelParams {
    fn empty(variant: Variant) -> Self {
        SensorModelParams {
            variant,
            conf1: None,
            conf2: None,
            conf: None,
            degradation: None,
            recovery: None,
            leak: None,
        }
    }

    pub fn basic() -> Self {
        Self::empty(Variant::Basic)
    }

    pub fn modified(conf1: f64, conf2: f64) -> Self {
        SensorModelParams {
            conf1: Some(conf1),
            conf2: Some(conf2),
            ..Self::empty(Variant::Modified)
        }
    }

    pub fn invalidator(conf: f64) -> Self {
        SensorModelParams {
            conf: Some(conf),
            ..Self::empty(Variant::Invalidator)
        }
    }

    pub fn chain(conf: f64, degradation: f64, recovery: f64) -> Self {
        SensorModelParams {
            conf: Some(conf),
            degradation: Some(degradation),
            recovery: Some(recovery),
            ..Self::empty(Variant::Chain)
        }
    }

    pub fn intermittent(conf: f64, degradation: f64, recovery: f64, leak: f64) -> Self {
        SensorModelParams {
            leak: Some(leak),
            variant: Variant::Intermittent,
            ..Self::chain(conf, degradation, recovery)
        }
    }

    pub fn extended(conf: f64, degradation: f64, recovery: f64) -> Self {
        SensorModelParams {
            variant: Variant::Extended,
            ..Self::chain(conf, degradation, recovery)
        }
    }

    /// Names of the parameters `variant` reads.
    pub fn required(variant: Variant) -> &'static [&'static str] {
        match variant {
            Variant::Basic => &[],
            Variant::Modified => &["conf1", "conf2"],
            Variant::Invalidator => &["conf"],
            Variant::Chain | Variant::Extended => &["conf", "d", "X"],
            Variant::Intermittent => &["conf", "d", "X", "x"],
        }
    }

    fn slot(&self, name: &str) -> Option<f64> {
        match name {
            "conf1" => self.conf1,
            "conf2" => self.conf2,
            "conf" => self.conf,
            "d" => self.degradation,
            "X" => self.recovery,
            "x" => self.leak,
            _ => None,
        }
    }

    /// Fetches a parameter the variant requires, checking its range.
    pub fn get(&self, name: &'static str) -> Result<f64> {
        let value = self.slot(name).ok_or(Error::MissingParameter {
            param: name,
            variant: self.variant.name(),
        })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ParameterRange { param: name, value });
        }
        Ok(value)
    }

    pub fn validate(&self) -> Result<()> {
        for &p in Self::required(self.variant) {
            self.get(p)?;
        }
        for param in ["conf1", "conf2", "conf", "d", "X", "x"] {
            if let Some(value) = self.slot(param) {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::ParameterRange { param, value });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_parameters_are_required() {
        let mut p = SensorModelParams::modified(0.99, 0.99);
        assert!(p.validate().is_ok());
        p.conf2 = None;
        assert_eq!(
            p.validate().unwrap_err(),
            Error::MissingParameter {
                param: "conf2",
                variant: "modified"
            }
        );
        assert!(SensorModelParams::basic().validate().is_ok());
        let mut p = SensorModelParams::intermittent(0.99, 0.01, 0.0, 0.2);
        assert!(p.validate().is_ok());
        p.leak = None;
        assert!(p.validate().is_err());
    }

    #[test]
    fn parameters_must_be_probabilities() {
        let p = SensorModelParams::chain(0.99, 1.2, 0.0);
        assert_eq!(
            p.validate().unwrap_err(),
            Error::ParameterRange {
                param: "d",
                value: 1.2
            }
        );
        let mut p = SensorModelParams::basic();
        p.conf = Some(-0.1);
        assert!(p.validate().is_err());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("fancy".parse::<Variant>().is_err());
    }
}
