//! Scenario files: a versioned TOML document describing the world, the sensor model
//! and the readings received in each interval.

use std::collections::BTreeMap;

use beamdbn::session::{ObservationSet, Reading};
use beamdbn::world::{Layout, ObjectSpec, SensorModelParams, Variant};
use serde::Deserialize;

/// The only scenario schema this build understands.
pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_CONF: f64 = 0.99;
pub const DEFAULT_DEGRADATION: f64 = 0.01;
pub const DEFAULT_RECOVERY: f64 = 0.0;
pub const DEFAULT_LEAK: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Semantic(String),
}

impl From<beamdbn::Error> for ScenarioError {
    fn from(e: beamdbn::Error) -> Self {
        ScenarioError::Semantic(e.to_string())
    }
}

/// Sensor model choices; anything left out falls back to a default when resolved.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSettings {
    pub variant: Option<Variant>,
    pub conf1: Option<f64>,
    pub conf2: Option<f64>,
    pub conf: Option<f64>,
    #[serde(rename = "d")]
    pub degradation: Option<f64>,
    #[serde(rename = "X")]
    pub recovery: Option<f64>,
    #[serde(rename = "x")]
    pub leak: Option<f64>,
}

impl ModelSettings {
    /// Values set in `over` win over `self`; unset values take the defaults.
    pub fn resolve(&self, over: &ModelSettings) -> beamdbn::Result<SensorModelParams> {
        let pick = |a: Option<f64>, b: Option<f64>, default: f64| a.or(b).unwrap_or(default);
        let conf1 = pick(over.conf1, self.conf1, DEFAULT_CONF);
        let conf2 = pick(over.conf2, self.conf2, DEFAULT_CONF);
        let conf = pick(over.conf, self.conf, DEFAULT_CONF);
        let d = pick(over.degradation, self.degradation, DEFAULT_DEGRADATION);
        let x_rec = pick(over.recovery, self.recovery, DEFAULT_RECOVERY);
        let leak = pick(over.leak, self.leak, DEFAULT_LEAK);
        let params = match over.variant.or(self.variant).unwrap_or(Variant::Modified) {
            Variant::Basic => SensorModelParams::basic(),
            Variant::Modified => SensorModelParams::modified(conf1, conf2),
            Variant::Invalidator => SensorModelParams::invalidator(conf),
            Variant::Chain => SensorModelParams::chain(conf, d, x_rec),
            Variant::Intermittent => SensorModelParams::intermittent(conf, d, x_rec, leak),
            Variant::Extended => SensorModelParams::extended(conf, d, x_rec),
        };
        params.validate()?;
        Ok(params)
    }
}

/// A status report injected once the session has reached interval `at`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEvent {
    pub at: u32,
    pub sensor: String,
    pub confidence: f64,
}

/// Which series to trace. Empty lists mean every object, and every sensor when the
/// variant models sensor status.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default)]
    pub objects: Vec<String>,
    #[serde(default)]
    pub status: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub name: Option<String>,
    pub layout: Layout,
    pub objects: Vec<ObjectSpec>,
    pub model: ModelSettings,
    /// Readings for intervals 1, 2, ...; sensors left out read `nc`.
    pub observations: Vec<ObservationSet>,
    pub reports: Vec<ReportEvent>,
    pub output: OutputSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: u32,
    name: Option<String>,
    layout: RawLayout,
    objects: Vec<RawObject>,
    #[serde(default)]
    model: ModelSettings,
    #[serde(default)]
    observations: Vec<BTreeMap<String, Reading>>,
    #[serde(default)]
    reports: Vec<ReportEvent>,
    #[serde(default)]
    output: OutputSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayout {
    regions: Vec<String>,
    adjacency: Vec<(String, String)>,
    sensors: Vec<RawSensor>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSensor {
    id: String,
    left: String,
    right: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    id: String,
    mobility: f64,
    #[serde(default)]
    initial: Initial,
}

#[derive(Deserialize, Default)]
#[serde(untagged)]
enum Initial {
    /// Only `"uniform"` is accepted.
    #[default]
    #[serde(skip)]
    Uniform,
    Keyword(String),
    List(Vec<f64>),
    Map(BTreeMap<String, f64>),
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn semantic(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Semantic(msg.into())
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        ScenarioError::Syntax {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(semantic(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }

    let layout = Layout::new(
        raw.layout.regions,
        raw.layout.adjacency,
        raw.layout
            .sensors
            .into_iter()
            .map(|s| (s.id, s.left, s.right)),
    )?;

    let m = layout.region_count();
    let mut objects = Vec::with_capacity(raw.objects.len());
    for obj in raw.objects {
        let initial = match obj.initial {
            Initial::Uniform => vec![1.0 / m as f64; m],
            Initial::Keyword(k) if k == "uniform" => vec![1.0 / m as f64; m],
            Initial::Keyword(k) => {
                return Err(semantic(format!(
                    "object {:?}: unknown initial keyword {k:?}",
                    obj.id
                )))
            }
            Initial::List(p) => p,
            Initial::Map(map) => {
                let mut p = vec![0.0; m];
                for (region, prob) in map {
                    p[layout.region_index(&region)?] = prob;
                }
                p
            }
        };
        let spec = ObjectSpec::new(obj.id, obj.mobility, initial)?;
        spec.validate(&layout)?;
        objects.push(spec);
    }
    if objects.is_empty() {
        return Err(semantic("at least one object is required"));
    }

    let params = raw.model.resolve(&ModelSettings::default())?;

    let mut observations = Vec::with_capacity(raw.observations.len());
    for (k, row) in raw.observations.into_iter().enumerate() {
        for sensor in row.keys() {
            layout.sensor_index(sensor).map_err(|_| {
                semantic(format!(
                    "observation {} names unknown sensor {sensor:?}",
                    k + 1
                ))
            })?;
        }
        observations.push(row.into_iter().collect());
    }

    for r in &raw.reports {
        layout.sensor_index(&r.sensor)?;
        if r.at as usize > observations.len() {
            return Err(semantic(format!(
                "report for {} at interval {} is past the last interval {}",
                r.sensor,
                r.at,
                observations.len()
            )));
        }
        if !(0.0..=1.0).contains(&r.confidence) {
            return Err(semantic(format!(
                "report confidence {} is outside [0, 1]",
                r.confidence
            )));
        }
        if !params.variant.links_status() {
            return Err(beamdbn::Error::NoStatusChain(params.variant.name()).into());
        }
    }
    for id in &raw.output.objects {
        if !objects.iter().any(|o| &o.id == id) {
            return Err(beamdbn::Error::UnknownObject(id.clone()).into());
        }
    }
    for id in &raw.output.status {
        layout.sensor_index(id)?;
    }

    Ok(ScenarioConfig {
        name: raw.name,
        layout,
        objects,
        model: raw.model,
        observations,
        reports: raw.reports,
        output: raw.output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
schema_version = 1

[layout]
regions = ["R1", "R2", "R3"]
adjacency = [["R1", "R2"], ["R2", "R3"]]
sensors = [
    { id = "LB1", left = "R1", right = "R2" },
    { id = "LB2", left = "R2", right = "R3" },
]

[[objects]]
id = "obj1"
mobility = 0.1
"#;

    #[test]
    fn omitted_sensor_reads_nc() {
        let text = format!("{BASE}\n[[observations]]\nLB1 = \"dir1\"\n\n[[observations]]\n");
        let cfg = parse_scenario(&text).unwrap();
        assert_eq!(cfg.observations.len(), 2);
        assert_eq!(cfg.observations[0].reading("LB1"), Reading::Dir1);
        assert_eq!(cfg.observations[0].reading("LB2"), Reading::Nc);
        assert_eq!(cfg.observations[1].reading("LB1"), Reading::Nc);
        assert_eq!(cfg.objects[0].initial, vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn defaults_to_modified() {
        let cfg = parse_scenario(BASE).unwrap();
        let p = cfg.model.resolve(&ModelSettings::default()).unwrap();
        assert_eq!(p, SensorModelParams::modified(0.99, 0.99));
        let over = ModelSettings {
            variant: Some(Variant::Chain),
            recovery: Some(0.2),
            ..Default::default()
        };
        assert_eq!(
            cfg.model.resolve(&over).unwrap(),
            SensorModelParams::chain(0.99, 0.01, 0.2)
        );
    }

    #[test]
    fn initial_as_map_or_list() {
        let text = BASE.replace("mobility = 0.1", "mobility = 0.1\ninitial = { R2 = 1.0 }");
        assert_eq!(
            parse_scenario(&text).unwrap().objects[0].initial,
            vec![0.0, 1.0, 0.0]
        );
        let text = BASE.replace(
            "mobility = 0.1",
            "mobility = 0.1\ninitial = [0.5, 0.5, 0.0]",
        );
        assert_eq!(
            parse_scenario(&text).unwrap().objects[0].initial,
            vec![0.5, 0.5, 0.0]
        );
        let text = BASE.replace(
            "mobility = 0.1",
            "mobility = 0.1\ninitial = [0.5, 0.6, 0.0]",
        );
        assert!(matches!(
            parse_scenario(&text),
            Err(ScenarioError::Semantic(_))
        ));
    }

    #[test]
    fn sensor_between_non_adjacent_regions() {
        let text = BASE.replace(
            r#"left = "R2", right = "R3""#,
            r#"left = "R1", right = "R3""#,
        );
        match parse_scenario(&text) {
            Err(ScenarioError::Semantic(msg)) => assert!(msg.contains("not adjacent"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let text = format!("{BASE}\n[[observations]]\nLB1 = dir1\n");
        match parse_scenario(&text) {
            Err(ScenarioError::Syntax { line, .. }) => assert_eq!(line, 17),
            other => panic!("{other:?}"),
        }
        let text = format!("{BASE}\n[[observations]]\nLB1 = \"sideways\"\n");
        assert!(matches!(
            parse_scenario(&text),
            Err(ScenarioError::Syntax { line: 17, .. })
        ));
    }

    #[test]
    fn semantic_errors() {
        let unknown = format!("{BASE}\n[[observations]]\nLB7 = \"dir1\"\n");
        let version = BASE.replace("schema_version = 1", "schema_version = 2");
        let report = format!("{BASE}\n[[reports]]\nat = 0\nsensor = \"LB1\"\nconfidence = 1.0\n");
        let range = format!("{BASE}\n[model]\nvariant = \"modified\"\nconf1 = 1.5\n");
        for text in [unknown, version, report, range] {
            assert!(
                matches!(parse_scenario(&text), Err(ScenarioError::Semantic(_))),
                "{text}"
            );
        }
    }
}
