use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The slider would pass inside its hinge, or the crank leaves its
    /// admissible half-turn.
    #[error("mechanism out of range at theta = {theta_deg:.6} deg: {reason}")]
    OutOfRange { theta_deg: f64, reason: String },

    /// Requested angle lies outside the attainable interval.
    #[error(
        "{what} = {requested_deg:.6} deg unreachable, attainable [{min_deg:.6}, {max_deg:.6}] deg"
    )]
    Unreachable {
        what: &'static str,
        requested_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },

    /// Trajectory step that failed validation.
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("object penetrates a profile by {depth:.3e} mm at ({}, {})", witness[0], witness[1])]
    Penetration { witness: [f64; 2], depth: f64 },

    #[error("object unsupported at lateral offset {offset:.6} mm")]
    Unsupported { offset: f64 },

    #[error("degenerate contact set: {0}")]
    Degenerate(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::OutOfRange { .. } => "out_of_range",
            Error::Unreachable { .. } => "unreachable",
            Error::AtStep { source, .. } => source.kind(),
            Error::Penetration { .. } => "penetration",
            Error::Unsupported { .. } => "unsupported",
            Error::Degenerate(_) => "degenerate",
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}
