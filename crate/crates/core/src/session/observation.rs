use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::world::obs;

/// A sensor's reported crossing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    #[default]
    Nc,
    Dir1,
    Dir2,
}

impl Reading {
    pub fn index(self) -> usize {
        match self {
            Reading::Nc => obs::NC,
            Reading::Dir1 => obs::DIR1,
            Reading::Dir2 => obs::DIR2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Reading::Nc => "nc",
            Reading::Dir1 => "dir1",
            Reading::Dir2 => "dir2",
        }
    }

    /// Likelihood vector `conf` on this reading and `(1 - conf) / 2` on the others.
    pub fn likelihood(self, conf: f64) -> Vec<f64> {
        let mut l = vec![(1.0 - conf) / 2.0; 3];
        l[self.index()] = conf;
        l
    }
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Reading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nc" => Ok(Reading::Nc),
            "dir1" => Ok(Reading::Dir1),
            "dir2" => Ok(Reading::Dir2),
            _ => Err(Error::Config(format!(
                "unknown reading {s:?}; expected nc, dir1 or dir2"
            ))),
        }
    }
}

/// Readings received for one transition, keyed by sensor id.
///
/// Sensors that are not mentioned report `nc`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObservationSet {
    readings: BTreeMap<String, Reading>,
}

impl ObservationSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, sensor: impl Into<String>, reading: Reading) -> Self {
        self.set(sensor, reading);
        self
    }

    pub fn set(&mut self, sensor: impl Into<String>, reading: Reading) {
        self.readings.insert(sensor.into(), reading);
    }

    pub fn reading(&self, sensor: &str) -> Reading {
        self.readings.get(sensor).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Reading)> + '_ {
        self.readings.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, Reading)> for ObservationSet {
    fn from_iter<I: IntoIterator<Item = (S, Reading)>>(iter: I) -> Self {
        ObservationSet {
            readings: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}
