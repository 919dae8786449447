//! Command-line front end.
//!
//! Exit codes: `0` success, `2` configuration or argument error, `3` model
//! or geometry error. Failures print one JSON object
//! `{"error": {"kind", "message", ...}}` on standard output.

mod commands;
pub mod config;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use commands::{
    fk_record, grasp_report, plan_record, sweep_rows, trace_rows, FacetRecord, GraspReport,
    GraspSceneSpec, SweepRow, TraceRow,
};
pub use config::{OutputFormat, RunConfig};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_MODEL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "morphtip",
    version,
    about = "Origami morphing-fingertip kinematics and grasp analysis"
)]
pub struct Cli {
    /// JSON run configuration; defaults apply to anything omitted
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Facet angle for a servo angle
    Fk {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Servo angle for a facet angle
    Ik {
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Plan a primitive (flat, convex:<deg>, concave:<deg>, tilted:<deg>,<deg>)
    Plan {
        primitive: String,
        /// Emit the quasi-static transition from this primitive
        #[arg(long)]
        from: Option<String>,
    },
    /// Servo sweep of the facet angle
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        step: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed pointer-top loop through the eight extreme tilt poses
    TracePointer {
        #[arg(long)]
        psi_max: Option<f64>,
        #[arg(long)]
        segments: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contact, closure and stability report for a scene file
    Grasp {
        #[arg(long)]
        scene: PathBuf,
    },
}

/// A failed command, ready to print.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: i32,
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            kind: "config".into(),
            message: message.into(),
            step: None,
            witness: None,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wrap<'a> {
            error: &'a Failure,
        }
        serde_json::to_string(&Wrap { error: self }).expect("serializable")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams(_) => EXIT_CONFIG,
            _ => EXIT_MODEL,
        };
        let step = match &e {
            Error::AtStep { step, .. } => Some(*step),
            _ => None,
        };
        let witness = match &e {
            Error::Penetration { witness, .. } => {
                Some([format::round_sig(witness[0]), format::round_sig(witness[1])])
            }
            _ => None,
        };
        Self {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
            step,
            witness,
        }
    }
}

/// Result of one invocation: exit code and standard-output text.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                },
                _ => Outcome {
                    code: EXIT_CONFIG,
                    stdout: Failure::config(e.to_string()).to_json() + "\n",
                },
            };
        }
    };
    match commands::execute(&cli) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: f.to_json() + "\n",
        },
    }
}
