//! Networks with executive-defined, time-varying topology.
//!
//! A network holds one executive component and a set of child components.
//! The executive is a base component whose p-state determines the network
//! topology: the set of children, the influencers of every child, of the
//! executive and of the network output, and the coupling functions that
//! turn influencer values into inputs.
//!
//! Inside a topology the reserved names [`NETWORK`] and [`EXECUTIVE`] refer
//! to the enclosing network (its input, when used as an influencer) and to
//! its executive.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::any::Any;
use core::fmt;

use crate::base::{BaseComponent, BaseModel};
use crate::component::{child_path, Component, ComponentFactory};
use crate::error::KernelError;
use crate::time::HyTime;
use crate::trace::{Context, TraceKind};
use crate::value::{FlowValue, Value};

/// Influencer name standing for the enclosing network.
pub const NETWORK: &str = "#net";
/// Name of the executive inside its network.
pub const EXECUTIVE: &str = "#exec";

type ContinuousMap = dyn Fn(&[&FlowValue]) -> Value + Send + Sync;
type DiscreteMap = dyn Fn(&[&FlowValue]) -> Option<Value> + Send + Sync;

/// A coupling function, split into a continuous map and a discrete map.
///
/// The discrete map only runs when at least one influencer carries a
/// discrete value, so an all-null tuple always yields a null discrete part.
#[derive(Clone)]
pub struct Coupling {
    continuous: Arc<ContinuousMap>,
    discrete: Arc<DiscreteMap>,
}

impl Coupling {
    pub fn new<C, D>(continuous: C, discrete: D) -> Self
    where
        C: Fn(&[&FlowValue]) -> Value + Send + Sync + 'static,
        D: Fn(&[&FlowValue]) -> Option<Value> + Send + Sync + 'static,
    {
        Coupling {
            continuous: Arc::new(continuous),
            discrete: Arc::new(discrete),
        }
    }

    /// Constant `(unit, ∅)`.
    pub fn null() -> Self {
        Coupling::new(|_| Value::Unit, |_| None)
    }

    /// Passes the first influencer through unchanged.
    pub fn first() -> Self {
        Coupling::new(
            |vs| vs.first().map(|v| v.continuous.clone()).unwrap_or_default(),
            |vs| vs.first().and_then(|v| v.discrete.clone()),
        )
    }

    /// Continuous parts as a list; discrete part is the first non-null one.
    pub fn gather() -> Self {
        Coupling::new(
            |vs| Value::List(vs.iter().map(|v| v.continuous.clone()).collect()),
            |vs| vs.iter().find_map(|v| v.discrete.clone()),
        )
    }

    pub fn apply(&self, inputs: &[&FlowValue]) -> FlowValue {
        let continuous = (self.continuous)(inputs);
        let discrete = if inputs.iter().any(|v| v.discrete.is_some()) {
            (self.discrete)(inputs)
        } else {
            None
        };
        FlowValue {
            continuous,
            discrete,
        }
    }
}

impl fmt::Debug for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Coupling")
    }
}

/// Influencer sequence plus coupling for one destination.
#[derive(Clone, Debug)]
pub struct Link {
    pub influencers: Vec<String>,
    pub coupling: Coupling,
}

impl Default for Link {
    fn default() -> Self {
        Link {
            influencers: Vec::new(),
            coupling: Coupling::null(),
        }
    }
}

/// Composition and coupling of a network at one executive p-state.
#[derive(Clone, Debug, Default)]
pub struct Topology {
    components: BTreeMap<String, String>,
    inputs: BTreeMap<String, Link>,
    output: Link,
}

impl Topology {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds component `name` built from model key `model`.
    pub fn component(mut self, name: impl Into<String>, model: impl Into<String>) -> Self {
        self.components.insert(name.into(), model.into());
        self
    }

    /// Sets the influencers and input coupling of a child or of [`EXECUTIVE`].
    pub fn input(
        mut self,
        target: impl Into<String>,
        influencers: &[&str],
        coupling: Coupling,
    ) -> Self {
        self.inputs.insert(
            target.into(),
            Link {
                influencers: influencers.iter().map(|s| String::from(*s)).collect(),
                coupling,
            },
        );
        self
    }

    /// Sets the network influencers and output coupling.
    pub fn output(mut self, influencers: &[&str], coupling: Coupling) -> Self {
        self.output = Link {
            influencers: influencers.iter().map(|s| String::from(*s)).collect(),
            coupling,
        };
        self
    }

    /// Child names mapped to model keys.
    pub fn components(&self) -> &BTreeMap<String, String> {
        &self.components
    }

    pub fn input_link(&self, target: &str) -> Option<&Link> {
        self.inputs.get(target)
    }

    pub fn output_link(&self) -> &Link {
        &self.output
    }

    /// Influencers of `target`; [`NETWORK`] gives the network influencers.
    pub fn influencers(&self, target: &str) -> &[String] {
        if target == NETWORK {
            &self.output.influencers
        } else {
            self.inputs
                .get(target)
                .map(|l| l.influencers.as_slice())
                .unwrap_or(&[])
        }
    }

    /// Equal composition and influencer sequences. Couplings are opaque and
    /// not compared.
    pub fn same_structure(&self, other: &Topology) -> bool {
        self.components == other.components
            && self.output.influencers == other.output.influencers
            && self.inputs.len() == other.inputs.len()
            && self
                .inputs
                .iter()
                .zip(other.inputs.iter())
                .all(|((a, la), (b, lb))| a == b && la.influencers == lb.influencers)
    }

    pub fn describe(&self) -> Value {
        let names = |v: &[String]| Value::List(v.iter().map(|s| Value::text(s.as_str())).collect());
        Value::record([
            (
                "components",
                Value::Record(
                    self.components
                        .iter()
                        .map(|(n, m)| (n.clone(), Value::text(m.as_str())))
                        .collect(),
                ),
            ),
            (
                "influencers",
                Value::Record(
                    self.inputs
                        .iter()
                        .map(|(n, l)| (n.clone(), names(&l.influencers)))
                        .chain(core::iter::once((
                            String::from(NETWORK),
                            names(&self.output.influencers),
                        )))
                        .collect(),
                ),
            ),
        ])
    }
}

/// A violated topology constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologyViolation {
    /// The network itself is listed as a component.
    NetworkInComposition,
    /// The executive is listed as a component.
    ExecutiveInComposition,
    /// The network is one of its own output influencers.
    NetworkInfluencesOutput,
    /// A network output influencer is neither a component nor the executive.
    UnknownOutputInfluencer { name: String },
    /// An input link targets a name that is neither a component nor the executive.
    UnknownInputTarget { target: String },
    /// An input influencer is not a component, the executive or the network.
    UnknownInfluencer { target: String, name: String },
}

impl TopologyViolation {
    /// Number of the violated constraint in the list of network topology
    /// constraints: 1–3 are the structural ones, 4 and 5 the domains of the
    /// network output and component input functions.
    pub fn constraint(&self) -> u8 {
        match self {
            TopologyViolation::NetworkInComposition => 1,
            TopologyViolation::ExecutiveInComposition => 2,
            TopologyViolation::NetworkInfluencesOutput => 3,
            TopologyViolation::UnknownOutputInfluencer { .. } => 4,
            TopologyViolation::UnknownInputTarget { .. }
            | TopologyViolation::UnknownInfluencer { .. } => 5,
        }
    }
}

impl fmt::Display for TopologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constraint {}: ", self.constraint())?;
        match self {
            TopologyViolation::NetworkInComposition => f.write_str("network listed as a component"),
            TopologyViolation::ExecutiveInComposition => {
                f.write_str("executive listed as a component")
            }
            TopologyViolation::NetworkInfluencesOutput => {
                f.write_str("network listed among its own output influencers")
            }
            TopologyViolation::UnknownOutputInfluencer { name } => {
                write!(f, "unknown network output influencer `{name}`")
            }
            TopologyViolation::UnknownInputTarget { target } => {
                write!(f, "input link for unknown component `{target}`")
            }
            TopologyViolation::UnknownInfluencer { target, name } => {
                write!(f, "unknown influencer `{name}` of `{target}`")
            }
        }
    }
}

/// Checks the structural constraints, returning the first violation in
/// constraint order.
pub fn validate_topology(top: &Topology) -> Result<(), TopologyViolation> {
    if top.components.contains_key(NETWORK) {
        return Err(TopologyViolation::NetworkInComposition);
    }
    if top.components.contains_key(EXECUTIVE) {
        return Err(TopologyViolation::ExecutiveInComposition);
    }
    if top.output.influencers.iter().any(|n| n == NETWORK) {
        return Err(TopologyViolation::NetworkInfluencesOutput);
    }
    let known = |n: &str| n == EXECUTIVE || top.components.contains_key(n);
    if let Some(name) = top.output.influencers.iter().find(|n| !known(n)) {
        return Err(TopologyViolation::UnknownOutputInfluencer { name: name.clone() });
    }
    for (target, link) in &top.inputs {
        if !known(target) {
            return Err(TopologyViolation::UnknownInputTarget {
                target: target.clone(),
            });
        }
        if let Some(name) = link.influencers.iter().find(|n| *n != NETWORK && !known(n)) {
            return Err(TopologyViolation::UnknownInfluencer {
                target: target.clone(),
                name: name.clone(),
            });
        }
    }
    Ok(())
}

/// A base model extended with a topology function.
pub trait ExecutiveModel: BaseModel {
    fn topology(&self, p: &Self::State) -> Topology;
}

/// Component interface of an executive: a base component that also
/// reports the topology for its current p-state.
pub trait DynExecutive: Component {
    fn topology(&self) -> Topology;
}

pub struct ExecutiveComponent<M: ExecutiveModel> {
    base: BaseComponent<M>,
}

impl<M: ExecutiveModel> ExecutiveComponent<M> {
    pub fn new(model: M) -> Result<Self, KernelError> {
        Self::new_at(model, HyTime::ZERO)
    }

    pub fn new_at(model: M, created_at: HyTime) -> Result<Self, KernelError> {
        Ok(ExecutiveComponent {
            base: BaseComponent::new_at(model, created_at)?,
        })
    }

    pub fn base(&self) -> &BaseComponent<M> {
        &self.base
    }

    /// `γ(p)` for the current p-state.
    pub fn topology(&self) -> Topology {
        self.base.model().topology(self.base.shared())
    }
}

impl<M: ExecutiveModel> Component for ExecutiveComponent<M> {
    fn path(&self) -> &str {
        self.base.path()
    }

    fn set_path(&mut self, path: String) {
        self.base.set_path(path)
    }

    fn next_time(&self) -> HyTime {
        self.base.next_time()
    }

    fn output(&mut self, t: HyTime, ctx: &mut Context<'_>) -> Result<(), KernelError> {
        self.base.output(t, ctx)
    }

    fn value(&self) -> Result<&FlowValue, KernelError> {
        self.base.value()
    }

    fn transition(
        &mut self,
        t: HyTime,
        x: &FlowValue,
        ctx: &mut Context<'_>,
    ) -> Result<(), KernelError> {
        self.base.transition(t, x, ctx)
    }

    fn snapshot(&self) -> Value {
        self.base.snapshot()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

impl<M: ExecutiveModel> DynExecutive for ExecutiveComponent<M> {
    fn topology(&self) -> Topology {
        ExecutiveComponent::topology(self)
    }
}

/// Runtime of a network: executive, current children and cached topology.
pub struct NetworkComponent {
    path: String,
    executive: Box<dyn DynExecutive>,
    children: BTreeMap<String, Box<dyn Component>>,
    topology: Topology,
    factory: Arc<dyn ComponentFactory>,
    v: Option<FlowValue>,
}

impl NetworkComponent {
    /// Builds the network and instantiates the children of the executive's
    /// initial topology at `created_at`.
    pub fn new(
        executive: Box<dyn DynExecutive>,
        factory: Arc<dyn ComponentFactory>,
        created_at: HyTime,
    ) -> Result<Self, KernelError> {
        let mut net = NetworkComponent {
            path: String::new(),
            executive,
            children: BTreeMap::new(),
            topology: Topology::new(),
            factory,
            v: None,
        };
        let top = net.executive.topology();
        net.validate(&top)?;
        for (name, model) in top.components() {
            let child = net.instantiate(name, model, created_at)?;
            net.children.insert(name.clone(), child);
        }
        net.topology = top;
        net.set_path(String::new());
        Ok(net)
    }

    pub fn with_path(mut self, path: impl Into<String>) -> Self {
        self.set_path(path.into());
        self
    }

    /// Topology in force for the current instant.
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn executive(&self) -> &dyn DynExecutive {
        &*self.executive
    }

    pub fn child(&self, name: &str) -> Option<&dyn Component> {
        self.children.get(name).map(|c| &**c)
    }

    pub fn child_names(&self) -> impl Iterator<Item = &str> {
        self.children.keys().map(String::as_str)
    }

    fn validate(&self, top: &Topology) -> Result<(), KernelError> {
        validate_topology(top).map_err(|violation| KernelError::InvalidTopology {
            path: self.path.clone(),
            violation,
        })
    }

    fn instantiate(
        &self,
        name: &str,
        model: &str,
        created_at: HyTime,
    ) -> Result<Box<dyn Component>, KernelError> {
        let mut child = self.factory.build(model, created_at).map_err(|e| match e {
            KernelError::UnknownModel { model, .. } => KernelError::UnknownModel {
                path: child_path(&self.path, name),
                model,
            },
            other => other,
        })?;
        child.set_path(child_path(&self.path, name));
        Ok(child)
    }

    /// Value of influencer `name`; `x` stands in for the network itself.
    fn influencer_value<'a>(
        &'a self,
        name: &str,
        x: Option<&'a FlowValue>,
    ) -> Result<&'a FlowValue, KernelError> {
        match name {
            NETWORK => Ok(x.expect("validated: network only influences inputs")),
            EXECUTIVE => self.executive.value(),
            _ => self
                .children
                .get(name)
                .expect("validated: influencer is a child")
                .value(),
        }
    }

    fn coupled(
        &self,
        link: Option<&Link>,
        x: Option<&FlowValue>,
    ) -> Result<FlowValue, KernelError> {
        let Some(link) = link else {
            return Ok(FlowValue::null());
        };
        let values = link
            .influencers
            .iter()
            .map(|n| self.influencer_value(n, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(link.coupling.apply(&values))
    }

    /// Replaces the topology with the executive's current one, creating and
    /// dropping children as needed.
    fn reconcile(&mut self, t: HyTime, ctx: &mut Context<'_>) -> Result<(), KernelError> {
        let top = self.executive.topology();
        self.validate(&top)?;
        if !top.same_structure(&self.topology) {
            ctx.emit(t, &self.path, TraceKind::TopologyChange, || {
                Value::record([("from", self.topology.describe()), ("to", top.describe())])
            });
        }
        let components = top.components();
        self.children.retain(|name, _| {
            components.contains_key(name)
                && self.topology.components().get(name) == components.get(name)
        });
        for (name, model) in components {
            if !self.children.contains_key(name) {
                let child = self.instantiate(name, model, t)?;
                self.children.insert(name.clone(), child);
            }
        }
        self.topology = top;
        Ok(())
    }
}

impl Component for NetworkComponent {
    fn path(&self) -> &str {
        &self.path
    }

    fn set_path(&mut self, path: String) {
        self.executive.set_path(child_path(&path, EXECUTIVE));
        for (name, child) in self.children.iter_mut() {
            child.set_path(child_path(&path, name));
        }
        self.path = path;
    }

    fn next_time(&self) -> HyTime {
        self.children
            .values()
            .map(|c| c.next_time())
            .fold(self.executive.next_time(), HyTime::min)
    }

    /// Refreshes the output of every child and of the executive, then
    /// applies the network output coupling.
    fn output(&mut self, t: HyTime, ctx: &mut Context<'_>) -> Result<(), KernelError> {
        for child in self.children.values_mut() {
            child.output(t, ctx)?;
        }
        self.executive.output(t, ctx)?;
        let v = self.coupled(Some(&self.topology.output), None)?;
        ctx.emit(t, &self.path, TraceKind::Output, || v.to_value());
        self.v = Some(v);
        Ok(())
    }

    fn value(&self) -> Result<&FlowValue, KernelError> {
        self.v
            .as_ref()
            .ok_or_else(|| KernelError::ValueBeforeOutput {
                path: self.path.clone(),
            })
    }

    /// Children first, executive last; the executive's new topology only
    /// applies from `t + ε` on.
    fn transition(
        &mut self,
        t: HyTime,
        x: &FlowValue,
        ctx: &mut Context<'_>,
    ) -> Result<(), KernelError> {
        // nothing inside is imminent and every coupled input would be null
        if t != self.next_time() && x.discrete.is_none() {
            return Ok(());
        }
        let mut inputs = Vec::with_capacity(self.children.len());
        for name in self.children.keys() {
            let xi = self.coupled(self.topology.input_link(name), Some(x))?;
            inputs.push((name.clone(), xi));
        }
        let exec_input = self.coupled(self.topology.input_link(EXECUTIVE), Some(x))?;

        for (name, xi) in &inputs {
            let child = self.children.get_mut(name).expect("child exists");
            child.transition(t, xi, ctx)?;
        }
        self.executive.transition(t, &exec_input, ctx)?;
        self.reconcile(t, ctx)?;

        ctx.emit(t, &self.path, TraceKind::Transition, || {
            Value::record([
                ("input", x.to_value()),
                (
                    "children",
                    Value::List(
                        self.children
                            .keys()
                            .map(|n| Value::text(n.as_str()))
                            .collect(),
                    ),
                ),
            ])
        });
        Ok(())
    }

    fn snapshot(&self) -> Value {
        Value::record([
            ("path", Value::text(self.path.as_str())),
            (
                "v",
                self.v.as_ref().map(FlowValue::to_value).unwrap_or_default(),
            ),
            ("executive", self.executive.snapshot()),
            (
                "children",
                Value::List(self.children.values().map(|c| c.snapshot()).collect()),
            ),
            ("topology", self.topology.describe()),
        ])
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
