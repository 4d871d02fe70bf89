//! Entity state machines, the protocol phases, and the instrumented bus
//! they communicate over.

pub mod bus;
pub mod config;
pub mod store;
mod system;
pub mod wire;

pub use bus::{Addr, Fault, FaultKind, Phase, SimBus, Traffic};
pub use config::ScenarioConfig;
pub use store::{RecordStore, StoredRecord};
pub use system::{
    run_scenario, sample_message, AccessOutcome, AccessReport, DpState, InState, IssueReport,
    RsuState, ScenarioReport, System, TaState, TraceOutcome, UpdateReport, UploadReport,
    SCENARIO_ACCIDENT,
};
