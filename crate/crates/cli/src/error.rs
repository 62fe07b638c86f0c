use strlink::covers::CoverError;
use strlink::cyclo::CycloError;
use strlink::knotforge::ForgeError;
use strlink::lambda::LambdaError;
use strlink::seifert::SeifertError;
use strlink::witt::WittError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("resource cap reached: {0}")]
    Resource(String),
    #[error("verdict FAIL")]
    Failed,
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed => 1,
            CliError::Validation { .. } => 2,
            CliError::Resource(_) => 3,
            CliError::Io(_) => 2,
        }
    }

    pub fn invalid(field: &str, message: impl ToString) -> Self {
        CliError::Validation {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn cyclo_is_resource(e: &CycloError) -> bool {
    matches!(e, CycloError::PrecisionExhausted(_))
}

fn seifert_is_resource(e: &SeifertError) -> bool {
    matches!(e, SeifertError::Cyclo(c) if cyclo_is_resource(c))
}

fn witt_is_resource(e: &WittError) -> bool {
    matches!(e, WittError::Cyclo(c) if cyclo_is_resource(c))
}

fn cover_is_resource(e: &CoverError) -> bool {
    matches!(e, CoverError::ResourceCap { .. })
}

/// Attaches the offending field to a library error, sorting resource caps
/// from validation failures.
pub trait Context<T> {
    fn field(self, field: &str) -> Result<T>;
}

macro_rules! context {
    ($ty:ty, $pred:expr) => {
        impl<T> Context<T> for std::result::Result<T, $ty> {
            fn field(self, field: &str) -> Result<T> {
                self.map_err(|e| {
                    let resource: fn(&$ty) -> bool = $pred;
                    if resource(&e) {
                        CliError::Resource(e.to_string())
                    } else {
                        CliError::invalid(field, e)
                    }
                })
            }
        }
    };
}

context!(CycloError, cyclo_is_resource);
context!(SeifertError, seifert_is_resource);
context!(WittError, witt_is_resource);
context!(CoverError, cover_is_resource);
context!(
    ForgeError,
    |e| matches!(e, ForgeError::Seifert(s) if seifert_is_resource(s))
);
context!(LambdaError, |e| match e {
    LambdaError::Cover(c) => cover_is_resource(c),
    LambdaError::Witt(w) => witt_is_resource(w),
    LambdaError::Seifert(s) => seifert_is_resource(s),
    _ => false,
});
context!(serde_json::Error, |_| false);
