//! Case table, per-case certificate pipelines and report rendering.
//!
//! Each runnable case replays the corresponding chain of computations as an
//! ordered list of certificate steps. MACHINE_CHECKED steps recompute their
//! values here; EXTERNAL steps record the citation they rest on and are never
//! recomputed. Reports are reproducible bit-for-bit given (case, seed).

mod report;
mod sampling;
mod reduction;
mod pipeline;
mod table;

pub use report::{CaseReport, Cert, CertificateStep, StepKind, Verdict};
pub use reduction::{run_reduction, ReductionCase};
pub use pipeline::{run_case_8_32, run_theorem_pipeline};
pub use table::{case_table, list_cases, run_case, CaseRow, CaseStatus};
