//! Named, parameterized model builders.

use hysim_core::{Component, KernelError};
use thiserror::Error;

use crate::models::active_client::{self, ActiveClientParams};
use crate::models::dyntopo::{self, DyntopoParams};
use crate::models::mm2::{self, Mm2Params};
use crate::models::sampling::{self, SamplingParams};
use crate::params::{ParamError, ParamSpec, Params};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("unknown model `{name}` (available: {available})")]
    UnknownModel { name: String, available: String },
    #[error("model `{model}`: {source}")]
    Param {
        model: String,
        #[source]
        source: ParamError,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Builder = fn(&Params, u64) -> Result<Box<dyn Component>, BuildError>;

#[derive(Clone, Copy)]
pub struct ModelEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub build: Builder,
}

#[derive(Clone, Default)]
pub struct ModelRegistry {
    entries: Vec<ModelEntry>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Panics if the name is taken.
    pub fn register(&mut self, entry: ModelEntry) {
        assert!(
            self.get(entry.name).is_none(),
            "model `{}` registered twice",
            entry.name
        );
        self.entries.push(entry);
    }

    pub fn get(&self, name: &str) -> Option<&ModelEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[ModelEntry] {
        &self.entries
    }

    pub fn build(
        &self,
        name: &str,
        given: &[(String, String)],
        seed: u64,
    ) -> Result<Box<dyn Component>, BuildError> {
        let entry = self.get(name).ok_or_else(|| BuildError::UnknownModel {
            name: name.into(),
            available: self
                .entries
                .iter()
                .map(|e| e.name)
                .collect::<Vec<_>>()
                .join(", "),
        })?;
        let params = Params::parse(entry.params, given).map_err(|source| BuildError::Param {
            model: name.into(),
            source,
        })?;
        (entry.build)(&params, seed)
    }
}

fn param_error(model: &str) -> impl Fn(ParamError) -> BuildError + '_ {
    move |source| BuildError::Param {
        model: model.into(),
        source,
    }
}

fn build_mm2(p: &Params, seed: u64) -> Result<Box<dyn Component>, BuildError> {
    let params = Mm2Params::from_params(p).map_err(param_error("mm2"))?;
    Ok(Box::new(mm2::build(params, seed)?))
}

fn build_active_client(p: &Params, seed: u64) -> Result<Box<dyn Component>, BuildError> {
    let params = ActiveClientParams::from_params(p).map_err(param_error("active-client"))?;
    Ok(Box::new(active_client::build(params, seed)?))
}

fn build_sampling(p: &Params, _seed: u64) -> Result<Box<dyn Component>, BuildError> {
    let params = SamplingParams::from_params(p).map_err(param_error("sampling-demo"))?;
    Ok(Box::new(sampling::build(params)?))
}

fn build_dyntopo(p: &Params, _seed: u64) -> Result<Box<dyn Component>, BuildError> {
    let params = DyntopoParams::from_params(p).map_err(param_error("dyntopo"))?;
    Ok(Box::new(dyntopo::build(params)?))
}

impl ModelRegistry {
    /// The four example models.
    pub fn with_examples() -> Self {
        let mut r = Self::empty();
        r.register(ModelEntry {
            name: "mm2",
            summary: "one FIFO queue feeding two servers that wait on a condition",
            params: mm2::PARAMS,
            build: build_mm2,
        });
        r.register(ModelEntry {
            name: "active-client",
            summary: "clients as processes created on arrival and removed on departure",
            params: active_client::PARAMS,
            build: build_active_client,
        });
        r.register(ModelEntry {
            name: "sampling-demo",
            summary: "two samplers reading the exact flow t^2 at their own periods",
            params: sampling::PARAMS,
            build: build_sampling,
        });
        r.register(ModelEntry {
            name: "dyntopo",
            summary: "network whose executive reroutes a pulse source at a switch time",
            params: dyntopo::PARAMS,
            build: build_dyntopo,
        });
        r
    }
}
