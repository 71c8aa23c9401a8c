use std::process::ExitCode;

use hysim::cli::main_with;
use hysim::ModelRegistry;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SIM_LOG", "off")).init();
    main_with(
        std::env::args_os().collect(),
        &ModelRegistry::with_examples(),
    )
}
