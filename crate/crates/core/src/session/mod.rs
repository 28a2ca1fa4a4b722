//! The unrolled network for one monitored scenario.
//!
//! Each call to [`Session::advance`] adds one interval: new object and motion nodes,
//! the transition links, one actual-crossing and one observed-crossing node per
//! sensor (plus a status node for variants that model sensor status), and the
//! sensor readings as evidence. Queries are answered exactly by variable elimination
//! over the whole history, so beliefs about earlier intervals keep being revised.

mod observation;
mod trace;

use crate::error::{Error, Result};
use crate::factor::{
    self, evidence_probability, posterior, DiscreteVariable, Evidence, Finding, Network, NodeKind,
    VarId,
};
use crate::world::{
    bc_act_cpt, bc_inv_chain_cpt, bc_inv_prior, bc_obs_cpt, motion_prior, status_prior,
    transition_cpt, Cpt, Layout, ObjectSpec, SensorModelParams, ACT_STATES, MOTION_STATES,
    OBS_STATES,
};

pub use observation::{ObservationSet, Reading};
pub use trace::{BeliefTrace, TraceColumn, TraceEntry};

/// How sensor readings enter the network.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ObservationMode {
    /// Each observed-crossing node is fixed to the reported state.
    #[default]
    Hard,
    /// Each reading enters as a likelihood: `conf` on the reported state and
    /// `(1 - conf) / 2` on each other state.
    Virtual { conf: f64 },
}

/// An external report of a sensor's status.
#[derive(Clone, Debug, PartialEq)]
pub struct StatusReport {
    pub sensor: usize,
    pub time: u32,
    /// Probability the sensor is working.
    pub confidence: f64,
}

#[derive(Clone, Debug)]
pub struct Session {
    layout: Layout,
    objects: Vec<ObjectSpec>,
    params: SensorModelParams,
    mode: ObservationMode,
    time: u32,
    net: Network,
    evidence: Evidence,
    reports: Vec<StatusReport>,
    /// Probability of all evidence so far.
    evidence_mass: f64,
    /// Per interval, the probability of its readings given all earlier ones.
    step_likelihoods: Vec<f64>,
}

fn variable(id: VarId, states: &[impl AsRef<str>]) -> Result<DiscreteVariable> {
    DiscreteVariable::new(id, states.iter().map(|s| s.as_ref().to_string()))
}

impl Session {
    pub fn new(
        layout: Layout,
        objects: Vec<ObjectSpec>,
        params: SensorModelParams,
    ) -> Result<Self> {
        Session::with_mode(layout, objects, params, ObservationMode::Hard)
    }

    pub fn with_mode(
        layout: Layout,
        objects: Vec<ObjectSpec>,
        params: SensorModelParams,
        mode: ObservationMode,
    ) -> Result<Self> {
        params.validate()?;
        if let ObservationMode::Virtual { conf } = mode {
            if !(0.0..=1.0).contains(&conf) {
                return Err(Error::ParameterRange {
                    param: "conf",
                    value: conf,
                });
            }
        }
        for (i, obj) in objects.iter().enumerate() {
            obj.validate(&layout)?;
            if objects[..i].iter().any(|o| o.id == obj.id) {
                return Err(Error::Config(format!("object {:?} declared twice", obj.id)));
            }
            transition_cpt(&layout, obj)?;
        }

        let mut session = Session {
            layout,
            objects,
            params,
            mode,
            time: 0,
            net: Network::new(),
            evidence: Evidence::new(),
            reports: Vec::new(),
            evidence_mass: 1.0,
            step_likelihoods: Vec::new(),
        };
        let regions = session.layout.regions().to_vec();
        for (i, obj) in session.objects.iter().enumerate() {
            let i = i as u32;
            session.net.add_node(
                variable(VarId::obj(i, 0), &regions)?,
                vec![],
                obj.initial.clone(),
            )?;
            session.net.add_node(
                variable(VarId::motion(i, 0), &MOTION_STATES)?,
                vec![],
                motion_prior(obj).table,
            )?;
        }
        if session.params.variant.has_status() {
            let prior = bc_inv_prior(&session.params)?;
            for s in 0..session.layout.sensors().len() as u32 {
                session.add_cpt(VarId::bc_inv(s, 0), vec![], prior.clone())?;
            }
        }
        Ok(session)
    }

    fn add_cpt(&mut self, id: VarId, parents: Vec<VarId>, cpt: Cpt) -> Result<()> {
        let var = match id.kind {
            NodeKind::Obj => variable(id, self.layout.regions())?,
            NodeKind::Motion => variable(id, &MOTION_STATES)?,
            NodeKind::BcAct => variable(id, &ACT_STATES)?,
            NodeKind::BcObs => variable(id, &OBS_STATES)?,
            NodeKind::BcInv => variable(id, self.params.variant.status_states())?,
            NodeKind::Aux => return Err(Error::UnknownVariable(id)),
        };
        self.net.add_node(var, parents, cpt.table)
    }

    /// Adds object, motion and (if modelled) status nodes for interval `t`, linked to `t - 1`.
    fn add_world_nodes(&mut self, t: u32) -> Result<()> {
        for i in 0..self.objects.len() {
            let obj = &self.objects[i];
            let (trans, motion) = (transition_cpt(&self.layout, obj)?, motion_prior(obj));
            let i = i as u32;
            self.add_cpt(
                VarId::obj(i, t),
                vec![VarId::obj(i, t - 1), VarId::motion(i, t - 1)],
                trans,
            )?;
            self.add_cpt(VarId::motion(i, t), vec![], motion)?;
        }
        let variant = self.params.variant;
        if variant.has_status() {
            for s in 0..self.layout.sensors().len() as u32 {
                if variant.links_status() {
                    let chain = bc_inv_chain_cpt(&self.params)?;
                    self.add_cpt(VarId::bc_inv(s, t), vec![VarId::bc_inv(s, t - 1)], chain)?;
                } else {
                    self.add_cpt(VarId::bc_inv(s, t), vec![], bc_inv_prior(&self.params)?)?;
                }
            }
        }
        Ok(())
    }

    /// Adds one interval and enters `obs` as evidence.
    ///
    /// If the readings are impossible under the model the session is left unchanged and
    /// [`Error::ImpossibleEvidence`] is returned.
    pub fn advance(&mut self, obs: &ObservationSet) -> Result<()> {
        for (sensor, _) in obs.iter() {
            self.layout.sensor_index(sensor)?;
        }
        let mut next = self.clone();
        next.time += 1;
        let t = next.time;
        next.add_world_nodes(t)?;

        let obs_cpt = bc_obs_cpt(&next.params)?;
        let with_status = next.params.variant.has_status();
        for s in 0..next.layout.sensors().len() {
            let s_id = s as u32;
            let act_parents: Vec<VarId> = (0..next.objects.len() as u32)
                .flat_map(|i| [VarId::obj(i, t - 1), VarId::obj(i, t)])
                .collect();
            let act = bc_act_cpt(&next.layout, s, &next.objects)?;
            next.add_cpt(VarId::bc_act(s_id, t), act_parents, act)?;

            let mut obs_parents = vec![VarId::bc_act(s_id, t)];
            if with_status {
                obs_parents.push(VarId::bc_inv(s_id, t));
            }
            next.add_cpt(VarId::bc_obs(s_id, t), obs_parents, obs_cpt.clone())?;

            let reading = obs.reading(&next.layout.sensors()[s].id);
            let finding = match next.mode {
                ObservationMode::Hard => Finding::Hard(reading.index()),
                ObservationMode::Virtual { conf } => Finding::Virtual(reading.likelihood(conf)),
            };
            next.evidence.set(VarId::bc_obs(s_id, t), finding);
        }

        next.commit_evidence()?;
        *self = next;
        Ok(())
    }

    /// Recomputes the evidence probability; fails if it is zero.
    fn commit_evidence(&mut self) -> Result<()> {
        let mass = evidence_probability(&self.net, &self.evidence)?;
        if mass == 0.0 {
            return Err(Error::ImpossibleEvidence);
        }
        if self.step_likelihoods.len() < self.time as usize {
            self.step_likelihoods.push(mass / self.evidence_mass);
        }
        self.evidence_mass = mass;
        Ok(())
    }

    /// Replaces the sensor's status node at the current interval with a parentless node
    /// whose prior is `(confidence, 1 - confidence)`; later status nodes chain from it.
    pub fn inject_status_report(&mut self, sensor: &str, time: u32, confidence: f64) -> Result<()> {
        let variant = self.params.variant;
        if !variant.links_status() {
            return Err(Error::NoStatusChain(variant.name()));
        }
        if time != self.time {
            return Err(Error::ReportTime {
                requested: time,
                current: self.time,
            });
        }
        let s = self.layout.sensor_index(sensor)?;
        let prior = status_prior(variant, confidence)?;
        let mut next = self.clone();
        next.net
            .replace_cpt(VarId::bc_inv(s as u32, time), vec![], prior.table)?;
        next.commit_evidence()?;
        next.reports.push(StatusReport {
            sensor: s,
            time,
            confidence,
        });
        *self = next;
        Ok(())
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn objects(&self) -> &[ObjectSpec] {
        &self.objects
    }

    pub fn params(&self) -> &SensorModelParams {
        &self.params
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn evidence(&self) -> &Evidence {
        &self.evidence
    }

    pub fn reports(&self) -> &[StatusReport] {
        &self.reports
    }

    /// Probability of all readings entered so far.
    pub fn evidence_probability(&self) -> f64 {
        self.evidence_mass
    }

    /// For each interval `1..=T`, the probability of its readings given the earlier ones.
    pub fn step_likelihoods(&self) -> &[f64] {
        &self.step_likelihoods
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o.id == id)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    fn check_time(&self, t: u32) -> Result<()> {
        if t > self.time {
            return Err(Error::FutureTime {
                requested: t,
                current: self.time,
            });
        }
        Ok(())
    }

    /// The network and evidence as they stood at the end of interval `eval_time`.
    pub fn view_at(&self, eval_time: u32) -> Result<(Network, Evidence)> {
        self.check_time(eval_time)?;
        if eval_time == self.time {
            return Ok((self.net.clone(), self.evidence.clone()));
        }
        let net = self.net.restricted(|v| v.time <= eval_time)?;
        let evidence = self.evidence.filtered(|v| v.time <= eval_time);
        Ok((net, evidence))
    }

    /// Posterior marginal of `node` given the evidence up to interval `eval_time`.
    pub fn beliefs(&self, node: VarId, eval_time: u32) -> Result<Vec<f64>> {
        let (net, evidence) = self.view_at(eval_time)?;
        factor::marginal(&net, &evidence, node)
    }

    /// Posterior marginal of `node` given all evidence so far.
    pub fn smoothed(&self, node: VarId) -> Result<Vec<f64>> {
        factor::marginal(&self.net, &self.evidence, node)
    }

    /// Posterior over a sensor's status states at interval `time`, given all evidence.
    pub fn sensor_status(&self, sensor: &str, time: u32) -> Result<Vec<f64>> {
        if !self.params.variant.has_status() {
            return Err(Error::NoStatusNodes(self.params.variant.name()));
        }
        self.check_time(time)?;
        let s = self.layout.sensor_index(sensor)?;
        self.smoothed(VarId::bc_inv(s as u32, time))
    }

    /// Distribution of the number of objects in `region` at interval `time`, from the
    /// joint posterior over every object's position.
    pub fn occupancy(&self, region: &str, time: u32) -> Result<Vec<f64>> {
        let r = self.layout.region_index(region)?;
        self.check_time(time)?;
        let n = self.objects.len();
        let mut counts = vec![0.0; n + 1];
        if n == 0 {
            counts[0] = 1.0;
            return Ok(counts);
        }
        let query: Vec<VarId> = (0..n as u32).map(|i| VarId::obj(i, time)).collect();
        let joint = posterior(&self.net, &self.evidence, &query)?;
        let m = self.layout.region_count();
        for (idx, p) in joint.table().iter().enumerate() {
            // row-major, last object fastest
            let mut rest = idx;
            let mut count = 0;
            for _ in 0..n {
                count += (rest % m == r) as usize;
                rest /= m;
            }
            counts[count] += p;
        }
        Ok(counts)
    }

    /// The network extended `horizon` intervals past the current one with object, motion
    /// and status nodes only, together with the current evidence.
    pub fn forecast(&self, horizon: u32) -> Result<(Network, Evidence)> {
        let mut ext = self.clone();
        for t in self.time + 1..=self.time + horizon {
            ext.add_world_nodes(t)?;
        }
        Ok((ext.net, ext.evidence))
    }

    /// Predicted position marginals for every object at intervals `T+1..=T+horizon`,
    /// indexed `[object][step - 1]`.
    pub fn predict(&self, horizon: u32) -> Result<Vec<Vec<Vec<f64>>>> {
        let (net, evidence) = self.forecast(horizon)?;
        (0..self.objects.len() as u32)
            .map(|i| {
                (1..=horizon)
                    .map(|k| factor::marginal(&net, &evidence, VarId::obj(i, self.time + k)))
                    .collect()
            })
            .collect()
    }

    /// Predicted status marginals of a sensor at intervals `T+1..=T+horizon`.
    pub fn predict_status(&self, sensor: &str, horizon: u32) -> Result<Vec<Vec<f64>>> {
        if !self.params.variant.has_status() {
            return Err(Error::NoStatusNodes(self.params.variant.name()));
        }
        let s = self.layout.sensor_index(sensor)? as u32;
        let (net, evidence) = self.forecast(horizon)?;
        (1..=horizon)
            .map(|k| factor::marginal(&net, &evidence, VarId::bc_inv(s, self.time + k)))
            .collect()
    }

    /// Re-evaluates a node series after every interval `1..=T`.
    pub fn trace_series(&self, kind: NodeKind, entity: u32) -> Result<BeliefTrace> {
        let probe = VarId::new(kind, entity, 0);
        let states = match kind {
            NodeKind::Obj => self.layout.regions().to_vec(),
            NodeKind::Motion => MOTION_STATES.iter().map(|s| s.to_string()).collect(),
            NodeKind::BcAct => ACT_STATES.iter().map(|s| s.to_string()).collect(),
            NodeKind::BcObs => OBS_STATES.iter().map(|s| s.to_string()).collect(),
            NodeKind::BcInv => self
                .params
                .variant
                .status_states()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            NodeKind::Aux => return Err(Error::UnknownVariable(probe)),
        };
        let mut trace = BeliefTrace::new(probe.series_name(), states);
        for eval_time in 1..=self.time {
            let (net, evidence) = self.view_at(eval_time)?;
            let mut entries = Vec::new();
            for t in 0..=eval_time {
                let id = VarId::new(kind, entity, t);
                if !net.contains(id) {
                    continue;
                }
                let belief = factor::marginal(&net, &evidence, id)?;
                entries.push(TraceEntry { time: t, belief });
            }
            if entries.is_empty() {
                return Err(Error::UnknownVariable(probe));
            }
            trace.columns.push(TraceColumn { eval_time, entries });
        }
        Ok(trace)
    }

    /// Position beliefs of one object over time, re-evaluated after every interval.
    pub fn belief_trace(&self, object: &str) -> Result<BeliefTrace> {
        let i = self.object_index(object)?;
        self.trace_series(NodeKind::Obj, i as u32)
    }

    /// Status beliefs of one sensor over time, re-evaluated after every interval.
    pub fn status_trace(&self, sensor: &str) -> Result<BeliefTrace> {
        if !self.params.variant.has_status() {
            return Err(Error::NoStatusNodes(self.params.variant.name()));
        }
        let s = self.layout.sensor_index(sensor)?;
        self.trace_series(NodeKind::BcInv, s as u32)
    }

    /// Number of nodes of each kind currently in the network.
    pub fn node_count(&self, kind: NodeKind) -> usize {
        self.net.ids().filter(|v| v.kind == kind).count()
    }
}
