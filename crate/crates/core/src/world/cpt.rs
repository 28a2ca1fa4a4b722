//! Node templates compiled from the domain configuration.

use crate::error::{Error, Result};

use super::{Layout, ObjectSpec, SensorModelParams, Variant};

/// A conditional table, row-major over `parent_cards ++ [child_card]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    pub parent_cards: Vec<usize>,
    pub child_card: usize,
    pub table: Vec<f64>,
}

impl Cpt {
    fn zeros(parent_cards: Vec<usize>, child_card: usize) -> Self {
        let rows: usize = parent_cards.iter().product();
        Cpt {
            table: vec![0.0; rows * child_card],
            parent_cards,
            child_card,
        }
    }

    pub fn prior(dist: Vec<f64>) -> Self {
        Cpt {
            parent_cards: Vec::new(),
            child_card: dist.len(),
            table: dist,
        }
    }

    pub fn row_count(&self) -> usize {
        self.parent_cards.iter().product()
    }

    fn row_index(&self, parents: &[usize]) -> usize {
        debug_assert_eq!(parents.len(), self.parent_cards.len());
        parents
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&s, &c)| acc * c + s)
    }

    pub fn row(&self, parents: &[usize]) -> &[f64] {
        let r = self.row_index(parents);
        &self.table[r * self.child_card..(r + 1) * self.child_card]
    }

    fn row_mut(&mut self, parents: &[usize]) -> &mut [f64] {
        let r = self.row_index(parents);
        &mut self.table[r * self.child_card..(r + 1) * self.child_card]
    }

    pub fn prob(&self, parents: &[usize], child: usize) -> f64 {
        self.row(parents)[child]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.table.chunks(self.child_card)
    }
}

/// Observed crossing states.
pub mod obs {
    pub const NC: usize = 0;
    pub const DIR1: usize = 1;
    pub const DIR2: usize = 2;
}

/// Actual crossing states.
pub mod act {
    pub const NC: usize = 0;
    pub const DIR1: usize = 1;
    pub const DIR2: usize = 2;
    pub const BOTH: usize = 3;
}

/// Status states; the extended variant splits `DEF` into the three defect kinds.
pub mod status {
    pub const WORK: usize = 0;
    pub const DEF: usize = 1;
    pub const DEF_GHOST: usize = 1;
    pub const DEF_DIR: usize = 2;
    pub const DEF_MISS: usize = 3;
}

/// Prior over `[stat, move]`.
pub fn motion_prior(obj: &ObjectSpec) -> Cpt {
    Cpt::prior(vec![1.0 - obj.mobility, obj.mobility])
}

/// `P(OBJ(T+1) | OBJ(T), MOTION(T))`.
///
/// Stationary objects stay put; moving objects go to an adjacent region chosen uniformly.
pub fn transition_cpt(layout: &Layout, obj: &ObjectSpec) -> Result<Cpt> {
    let m = layout.region_count();
    let mut cpt = Cpt::zeros(vec![m, 2], m);
    for r in 0..m {
        cpt.row_mut(&[r, 0])[r] = 1.0;
        let nbrs = layout.neighbors(r);
        if nbrs.is_empty() {
            if obj.mobility > 0.0 {
                return Err(Error::Config(format!(
                    "object {:?} has mobility {} but region {:?} has no neighbours",
                    obj.id,
                    obj.mobility,
                    layout.regions()[r]
                )));
            }
            // unreachable row when mobility is 0; keep it a distribution
            cpt.row_mut(&[r, 1])[r] = 1.0;
            continue;
        }
        let share = 1.0 / nbrs.len() as f64;
        for &n in nbrs {
            cpt.row_mut(&[r, 1])[n] = share;
        }
    }
    Ok(cpt)
}

/// Crossing made by one object moving `from -> to` over `sensor`: +1, -1 or 0.
fn crossing(layout: &Layout, sensor: usize, from: usize, to: usize) -> i8 {
    let s = &layout.sensors()[sensor];
    if (from, to) == (s.left, s.right) {
        1
    } else if (from, to) == (s.right, s.left) {
        -1
    } else {
        0
    }
}

/// Actual-crossing state for a set of per-object crossings.
pub fn aggregate_crossings(crossings: impl IntoIterator<Item = i8>) -> usize {
    let (mut pos, mut neg) = (false, false);
    for c in crossings {
        pos |= c > 0;
        neg |= c < 0;
    }
    match (pos, neg) {
        (true, true) => act::BOTH,
        (true, false) => act::DIR1,
        (false, true) => act::DIR2,
        (false, false) => act::NC,
    }
}

/// Deterministic `P(BC-ACT | OBJ_1(T), OBJ_1(T+1), ..., OBJ_N(T), OBJ_N(T+1))`.
pub fn bc_act_cpt(layout: &Layout, sensor: usize, objects: &[ObjectSpec]) -> Result<Cpt> {
    if sensor >= layout.sensors().len() {
        return Err(Error::UnknownSensor(format!("#{sensor}")));
    }
    let m = layout.region_count();
    let n = objects.len();
    let mut cpt = Cpt::zeros(vec![m; 2 * n], 4);
    let mut parents = vec![0usize; 2 * n];
    for _ in 0..cpt.row_count() {
        let state = aggregate_crossings(
            parents
                .chunks(2)
                .map(|p| crossing(layout, sensor, p[0], p[1])),
        );
        cpt.row_mut(&parents)[state] = 1.0;
        for d in (0..parents.len()).rev() {
            parents[d] += 1;
            if parents[d] < m {
                break;
            }
            parents[d] = 0;
        }
    }
    Ok(cpt)
}

fn working_row(actual: usize) -> [f64; 3] {
    match actual {
        act::NC => [1.0, 0.0, 0.0],
        act::DIR1 => [0.0, 1.0, 0.0],
        act::DIR2 => [0.0, 0.0, 1.0],
        _ => [0.0, 0.5, 0.5],
    }
}

/// Defective row in which the correct report has probability `correct` and the
/// remaining mass is split over the two incorrect reports.
fn defective_row(actual: usize, correct: f64) -> [f64; 3] {
    if actual == act::BOTH {
        return [1.0 / 3.0; 3];
    }
    let mut row = [(1.0 - correct) / 2.0; 3];
    row[actual] = correct;
    row
}

fn extended_row(actual: usize, defect: usize) -> [f64; 3] {
    match defect {
        status::DEF_GHOST if actual == act::NC => [0.0, 0.5, 0.5],
        status::DEF_DIR => match actual {
            act::DIR1 => [0.0, 0.0, 1.0],
            act::DIR2 => [0.0, 1.0, 0.0],
            _ => working_row(actual),
        },
        status::DEF_MISS => [1.0, 0.0, 0.0],
        _ => working_row(actual),
    }
}

/// `P(BC-OBS | BC-ACT)`, or `P(BC-OBS | BC-ACT, BC-INV)` for variants with status nodes.
pub fn bc_obs_cpt(params: &SensorModelParams) -> Result<Cpt> {
    params.validate()?;
    let cpt = match params.variant {
        Variant::Basic => {
            let mut cpt = Cpt::zeros(vec![4], 3);
            for a in 0..4 {
                cpt.row_mut(&[a]).copy_from_slice(&working_row(a));
            }
            cpt
        }
        Variant::Modified => {
            let c1 = params.get("conf1")?;
            let c2 = params.get("conf2")?;
            let (miss1, miss2) = ((1.0 - c1) / 2.0, (1.0 - c2) / 2.0);
            let mut cpt = Cpt::zeros(vec![4], 3);
            cpt.row_mut(&[act::NC]).copy_from_slice(&[c2, miss2, miss2]);
            cpt.row_mut(&[act::DIR1])
                .copy_from_slice(&[miss1, c1, miss1]);
            cpt.row_mut(&[act::DIR2])
                .copy_from_slice(&[miss1, miss1, c1]);
            cpt.row_mut(&[act::BOTH])
                .copy_from_slice(&[1.0 - c1, c1 / 2.0, c1 / 2.0]);
            cpt
        }
        Variant::Invalidator | Variant::Chain | Variant::Intermittent => {
            let correct = match params.variant {
                Variant::Intermittent => params.get("x")?,
                _ => 0.0,
            };
            let mut cpt = Cpt::zeros(vec![4, 2], 3);
            for a in 0..4 {
                cpt.row_mut(&[a, status::WORK])
                    .copy_from_slice(&working_row(a));
                cpt.row_mut(&[a, status::DEF])
                    .copy_from_slice(&defective_row(a, correct));
            }
            cpt
        }
        Variant::Extended => {
            let mut cpt = Cpt::zeros(vec![4, 4], 3);
            for a in 0..4 {
                for s in 0..4 {
                    cpt.row_mut(&[a, s]).copy_from_slice(&extended_row(a, s));
                }
            }
            cpt
        }
    };
    Ok(cpt)
}

fn status_params(params: &SensorModelParams) -> Result<()> {
    params.validate()?;
    if !params.variant.has_status() {
        return Err(Error::NoStatusNodes(params.variant.name()));
    }
    Ok(())
}

/// Prior over the sensor status states at the first interval.
pub fn bc_inv_prior(params: &SensorModelParams) -> Result<Cpt> {
    status_params(params)?;
    status_prior(params.variant, params.get("conf")?)
}

/// Prior placing `working` on the working state and spreading the rest over defects.
pub fn status_prior(variant: Variant, working: f64) -> Result<Cpt> {
    if !(0.0..=1.0).contains(&working) {
        return Err(Error::ParameterRange {
            param: "conf",
            value: working,
        });
    }
    let defects = variant.status_states().len() - 1;
    let mut dist = vec![(1.0 - working) / defects as f64; defects + 1];
    dist[status::WORK] = working;
    Ok(Cpt::prior(dist))
}

/// `P(BC-INV(T+1) | BC-INV(T))`.
pub fn bc_inv_chain_cpt(params: &SensorModelParams) -> Result<Cpt> {
    status_params(params)?;
    if !params.variant.links_status() {
        return Err(Error::NoStatusChain(params.variant.name()));
    }
    let d = params.get("d")?;
    let x = params.get("X")?;
    let k = params.variant.status_states().len();
    let defects = (k - 1) as f64;
    let mut cpt = Cpt::zeros(vec![k], k);
    {
        let row = cpt.row_mut(&[status::WORK]);
        row[status::WORK] = 1.0 - d;
        row[1..].iter_mut().for_each(|p| *p = d / defects);
    }
    for s in 1..k {
        let row = cpt.row_mut(&[s]);
        row[status::WORK] = x;
        row[s] = 1.0 - x;
    }
    Ok(cpt)
}
