use crate::component::Component;
use crate::error::KernelError;
use crate::time::HyTime;
use crate::trace::Context;
use crate::value::FlowValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Summary {
    /// Number of output/transition rounds executed.
    pub steps: u64,
    /// Clock value that ended the loop; `+∞` when the model went passive.
    pub final_clock: HyTime,
}

/// Drives a closed component until its next time reaches `end`.
///
/// Each round computes the output at the current clock before the
/// transition at the same clock. Events scheduled exactly at `end` are not
/// executed.
pub fn run_simulation(
    component: &mut dyn Component,
    end: HyTime,
    ctx: &mut Context<'_>,
) -> Result<Summary, KernelError> {
    let input = FlowValue::null();
    let mut steps = 0;
    let mut clock = component.next_time();
    while clock < end {
        component.output(clock, ctx)?;
        component.transition(clock, &input, ctx)?;
        steps += 1;
        let next = component.next_time();
        if next <= clock {
            return Err(KernelError::NonMonotonicClock {
                previous: clock,
                next,
            });
        }
        clock = next;
    }
    Ok(Summary {
        steps,
        final_clock: clock,
    })
}
