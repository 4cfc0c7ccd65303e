use std::fmt;
use std::path::Path;

use credrank::anomaly::AnomalyError;
use credrank::artifacts::ArtifactError;
use credrank::corpus::IngestError;
use credrank::credibility::{ConfigError, CredibilityError};
use credrank::evaluation::EvalError;
use credrank::pipeline::PipelineError;
use credrank::synth::SynthError;

/// Failure class; decides the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Config,
    Input,
    Invariant,
    Internal,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Config => 2,
            Kind::Input => 3,
            Kind::Invariant => 4,
            Kind::Internal => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Config => "config",
            Kind::Input => "input",
            Kind::Invariant => "invariant",
            Kind::Internal => "internal",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Kind::Config, message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(Kind::Input, message)
    }

    /// Output-side I/O failure.
    pub fn write(path: &Path, e: impl fmt::Display) -> Self {
        Self::new(Kind::Internal, format!("cannot write {}: {e}", path.display()))
    }

    pub fn read(path: &Path, e: impl fmt::Display) -> Self {
        Self::input(format!("cannot read {}: {e}", path.display()))
    }

    /// The single-line JSON written to stderr.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "error": self.message,
            "kind": self.kind.name(),
            "exit_code": self.kind.exit_code(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::config(e.to_string())
    }
}

impl From<CredibilityError> for CliError {
    fn from(e: CredibilityError) -> Self {
        let kind = match &e {
            CredibilityError::Config(_) | CredibilityError::UnknownDomain(_) => Kind::Config,
            CredibilityError::Partition(_) | CredibilityError::ProfileAfterReference { .. } => Kind::Input,
            CredibilityError::Invariant(_) | CredibilityError::ScaledOutOfRange(_) => Kind::Invariant,
            CredibilityError::ChunkCount { .. } => Kind::Internal,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Credibility(c) => c.into(),
            other => CliError::config(other.to_string()),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ArtifactError> for CliError {
    fn from(e: ArtifactError) -> Self {
        match e {
            ArtifactError::Credibility(c) => c.into(),
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        let kind = match e {
            EvalError::ZeroQ => Kind::Config,
            _ => Kind::Input,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<AnomalyError> for CliError {
    fn from(e: AnomalyError) -> Self {
        let kind = match e {
            AnomalyError::ZeroTopK | AnomalyError::ZeroCutoff | AnomalyError::UnknownCriterion(_) => Kind::Config,
            _ => Kind::Input,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        let kind = match e {
            SynthError::Spec(_) | SynthError::UnknownDomain(_) => Kind::Config,
            _ => Kind::Internal,
        };
        CliError::new(kind, e.to_string())
    }
}
