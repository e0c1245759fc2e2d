use serde::Serialize;

use crate::input::InputDigest;

/// Everything needed to reproduce an output: the command, its resolved
/// options, the seed, digests of the inputs and the tool version.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<O: Serialize> {
    pub command: &'static str,
    pub options: O,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub tool_version: &'static str,
}

impl<O: Serialize> RunManifest<O> {
    pub fn new(command: &'static str, options: O, seed: Option<u64>, inputs: Vec<InputDigest>) -> Self {
        RunManifest {
            command,
            options,
            seed,
            inputs,
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }
}
