use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A light-beam sensor separating two adjacent regions.
///
/// A crossing from `left` to `right` is reported as `dir1`, the reverse as `dir2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sensor {
    pub id: String,
    pub left: usize,
    pub right: usize,
}

/// Regions, their adjacency, and the sensors between them.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    regions: Vec<String>,
    neighbors: Vec<BTreeSet<usize>>,
    sensors: Vec<Sensor>,
}

impl Layout {
    /// Builds a layout from region ids, undirected adjacency edges and
    /// `(sensor id, left region, right region)` triples.
    pub fn new<R, E, S>(regions: R, adjacency: E, sensors: S) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: Into<String>,
        E: IntoIterator<Item = (String, String)>,
        S: IntoIterator<Item = (String, String, String)>,
    {
        let regions: Vec<String> = regions.into_iter().map(Into::into).collect();
        if regions.is_empty() {
            return Err(Error::Config("layout has no regions".into()));
        }
        for (i, r) in regions.iter().enumerate() {
            if regions[..i].contains(r) {
                return Err(Error::Config(format!("region {r:?} declared twice")));
            }
        }
        let find = |name: &str| {
            regions
                .iter()
                .position(|r| r == name)
                .ok_or_else(|| Error::UnknownRegion(name.to_string()))
        };

        let mut neighbors = vec![BTreeSet::new(); regions.len()];
        for (a, b) in adjacency {
            let (ia, ib) = (find(&a)?, find(&b)?);
            if ia == ib {
                return Err(Error::Config(format!(
                    "region {a:?} cannot be adjacent to itself"
                )));
            }
            neighbors[ia].insert(ib);
            neighbors[ib].insert(ia);
        }

        let mut out: Vec<Sensor> = Vec::new();
        for (id, left, right) in sensors {
            if out.iter().any(|s| s.id == id) {
                return Err(Error::Config(format!("sensor {id:?} declared twice")));
            }
            let (l, r) = (find(&left)?, find(&right)?);
            if l == r {
                return Err(Error::Config(format!(
                    "sensor {id:?} must separate two distinct regions"
                )));
            }
            if !neighbors[l].contains(&r) {
                return Err(Error::Config(format!(
                    "sensor {id:?} spans {left:?} and {right:?}, which are not adjacent"
                )));
            }
            out.push(Sensor {
                id,
                left: l,
                right: r,
            });
        }
        Ok(Layout {
            regions,
            neighbors,
            sensors: out,
        })
    }

    /// `m` regions `R1..Rm` in a row with sensor `LBi` between `Ri` and `Ri+1`.
    pub fn linear(m: usize) -> Result<Self> {
        let regions: Vec<String> = (1..=m).map(|i| format!("R{i}")).collect();
        let edges: Vec<(String, String)> = regions
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        let sensors = edges
            .iter()
            .enumerate()
            .map(|(i, (a, b))| (format!("LB{}", i + 1), a.clone(), b.clone()));
        Layout::new(regions.clone(), edges.clone(), sensors)
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn region_index(&self, id: &str) -> Result<usize> {
        self.regions
            .iter()
            .position(|r| r == id)
            .ok_or_else(|| Error::UnknownRegion(id.to_string()))
    }

    pub fn neighbors(&self, region: usize) -> &BTreeSet<usize> {
        &self.neighbors[region]
    }

    pub fn sensors(&self) -> &[Sensor] {
        &self.sensors
    }

    pub fn sensor_index(&self, id: &str) -> Result<usize> {
        self.sensors
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| Error::UnknownSensor(id.to_string()))
    }
}

/// Tolerance on an initial distribution summing to one.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

/// One tracked object.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectSpec {
    pub id: String,
    /// Probability of moving to an adjacent region during one interval.
    pub mobility: f64,
    /// Distribution over regions at the first interval.
    pub initial: Vec<f64>,
}

impl ObjectSpec {
    pub fn new(id: impl Into<String>, mobility: f64, initial: Vec<f64>) -> Result<Self> {
        let spec = ObjectSpec {
            id: id.into(),
            mobility,
            initial,
        };
        if !(0.0..=1.0).contains(&spec.mobility) {
            return Err(Error::ParameterRange {
                param: "mobility",
                value: spec.mobility,
            });
        }
        if spec.initial.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Config(format!(
                "object {:?} has a negative initial probability",
                spec.id
            )));
        }
        let sum: f64 = spec.initial.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(Error::Config(format!(
                "initial distribution of object {:?} sums to {sum}",
                spec.id
            )));
        }
        Ok(spec)
    }

    /// Uniform initial position over `regions` regions.
    pub fn uniform(id: impl Into<String>, mobility: f64, regions: usize) -> Result<Self> {
        ObjectSpec::new(id, mobility, vec![1.0 / regions as f64; regions])
    }

    /// Object known to start in `region`.
    pub fn at(id: impl Into<String>, mobility: f64, regions: usize, region: usize) -> Result<Self> {
        let mut initial = vec![0.0; regions];
        initial[region] = 1.0;
        ObjectSpec::new(id, mobility, initial)
    }

    /// Checks the spec against a layout: distribution length and reachable neighbours.
    pub fn validate(&self, layout: &Layout) -> Result<()> {
        if self.initial.len() != layout.region_count() {
            return Err(Error::Config(format!(
                "object {:?} has {} initial probabilities for {} regions",
                self.id,
                self.initial.len(),
                layout.region_count()
            )));
        }
        Ok(())
    }
}
