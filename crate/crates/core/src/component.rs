use alloc::boxed::Box;
use alloc::string::String;
use core::any::Any;

use crate::error::KernelError;
use crate::time::HyTime;
use crate::trace::Context;
use crate::value::{FlowValue, Value};

/// The modular interface shared by base, executive and network components.
///
/// A coordinator drives a component through `next_time`, then `output` at
/// that instant, then `transition` at the same instant. `transition` may
/// also be called on a non-imminent component; it returns without effect
/// unless the input carries a discrete value.
pub trait Component: Send + Any {
    fn path(&self) -> &str;

    fn set_path(&mut self, path: String);

    fn next_time(&self) -> HyTime;

    fn output(&mut self, t: HyTime, ctx: &mut Context<'_>) -> Result<(), KernelError>;

    fn value(&self) -> Result<&FlowValue, KernelError>;

    fn transition(
        &mut self,
        t: HyTime,
        x: &FlowValue,
        ctx: &mut Context<'_>,
    ) -> Result<(), KernelError>;

    /// Full observable state, for trace payloads and state comparisons.
    fn snapshot(&self) -> Value;

    fn as_any(&self) -> &dyn Any;
}

/// Builds components by model key; networks use it to instantiate the
/// components their executive adds.
pub trait ComponentFactory: Send + Sync {
    fn build(&self, model: &str, created_at: HyTime) -> Result<Box<dyn Component>, KernelError>;
}

/// Joins a parent path and a child name with `/`.
pub(crate) fn child_path(parent: &str, name: &str) -> String {
    let mut path = String::with_capacity(parent.len() + name.len() + 1);
    if !parent.is_empty() {
        path.push_str(parent);
        path.push('/');
    }
    path.push_str(name);
    path
}
