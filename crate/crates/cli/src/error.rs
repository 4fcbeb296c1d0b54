use outage_core::analytics::AnalyticsError;
use outage_core::engine::EngineError;
use outage_core::network::NetworkError;
use outage_core::wind::WindError;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad or inconsistent user input: files, flags, config.
    Input,
    /// Failure not attributable to the inputs (output I/O, optimizer, mismatched replay).
    Internal,
}

#[derive(Debug, thiserror::Error)]
#[error("{kind}: {message}")]
pub struct CliError {
    pub class: ErrorClass,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        Self { class: ErrorClass::Input, kind: kind.into(), message: message.into() }
    }

    pub fn internal(kind: &str, message: impl Into<String>) -> Self {
        Self { class: ErrorClass::Internal, kind: kind.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Input => EXIT_INPUT,
            ErrorClass::Internal => EXIT_INTERNAL,
        }
    }

    pub fn output_io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self::internal("Io", format!("{}: {e}", path.display()))
    }
}

/// Variant name from the derived Debug form, e.g. `TimestampMismatch`.
fn variant_name(debug: &str) -> String {
    debug.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string()
}

impl From<WindError> for CliError {
    fn from(e: WindError) -> Self {
        Self::input(&variant_name(&format!("{e:?}")), e.to_string())
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::Wind(w) => w.into(),
            e => Self::input(&variant_name(&format!("{e:?}")), e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        let kind = variant_name(&format!("{e:?}"));
        match e {
            EngineError::DegenerateUniform(_) => Self::internal(&kind, e.to_string()),
            e => Self::input(&kind, e.to_string()),
        }
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::Engine(e) => e.into(),
            AnalyticsError::Wind(e) => e.into(),
            AnalyticsError::Network(e) => e.into(),
            AnalyticsError::Optimizer(_) => Self::internal("Optimizer", e.to_string()),
            e => Self::input(&variant_name(&format!("{e:?}")), e.to_string()),
        }
    }
}
