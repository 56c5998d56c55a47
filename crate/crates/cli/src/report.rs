//! Report envelope shared by every subcommand.
//!
//! Reports are deterministic for fixed inputs and seed: histograms use
//! ordered maps, element lists are sorted, and wall-clock timings are only
//! attached when explicitly requested with `--timings`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::schema::CtxJson;

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ctx: Option<CtxJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn new(command: String) -> Report {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            ctx: None,
            seed: None,
            inputs: Value::Null,
            results: Value::Null,
            timings_ms: None,
        }
    }

    pub fn print(&self) {
        println!("{}", serde_json::to_string_pretty(self).expect("report serializes"));
    }
}

/// Accumulates per-phase wall time; dropped silently unless enabled.
pub struct Phases {
    enabled: bool,
    current: Option<(String, Instant)>,
    out: BTreeMap<String, u64>,
}

impl Phases {
    pub fn new(enabled: bool) -> Phases {
        Phases { enabled, current: None, out: BTreeMap::new() }
    }

    pub fn start(&mut self, name: &str) {
        self.finish();
        self.current = Some((name.to_string(), Instant::now()));
    }

    fn finish(&mut self) {
        if let Some((name, started)) = self.current.take() {
            *self.out.entry(name).or_insert(0) += started.elapsed().as_millis() as u64;
        }
    }

    pub fn into_map(mut self) -> Option<BTreeMap<String, u64>> {
        self.finish();
        if self.enabled {
            Some(self.out)
        } else {
            None
        }
    }
}
