//! Wire types for the HTTP API. Programs travel in their JSON document form
//! and scenes as frame lists — exactly the shapes used on disk, so clients
//! can pass files through unchanged.

use serde::{Deserialize, Serialize};
use vizfilter_core::codec::ProgramDoc;
use vizfilter_core::interpreter::Announcement;
use vizfilter_core::registry::TargetSpec;
use vizfilter_core::scene::SceneFrame;
use vizfilter_core::ErrorClass;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegistryResponse {
    pub targets: Vec<TargetSpec>,
}

/// A program in every form a caller might want: document, canonical text,
/// spoken-style summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProgramView {
    pub program: ProgramDoc,
    pub text: String,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParseRequest {
    pub text: String,
}

/// Program input for operations that accept one ready-made: inline document,
/// program text, or the name of a library entry. Exactly one must be set.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProgramSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub program: Option<ProgramDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateRequest {
    #[serde(flatten)]
    pub source: ProgramSource,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnsupportedSlot {
    /// Zero-based chain index.
    pub chain: usize,
    /// Zero-based item index, innermost first.
    pub item: usize,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suggestions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateResponse {
    pub valid: bool,
    pub program: ProgramView,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structural: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unsupported: Vec<UnsupportedSlot>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRequest {
    #[serde(flatten)]
    pub source: ProgramSource,
    pub frames: Vec<SceneFrame>,
    /// Brief announcements (no container or frame-position clauses).
    #[serde(default)]
    pub brief: bool,
    /// Heartbeat interval for suppressed repeats; 0 emits every frame.
    #[serde(default)]
    pub debounce: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResponse {
    pub announcements: Vec<Announcement>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExploreRequest {
    pub frames: Vec<SceneFrame>,
    /// Frame to explore; defaults to the first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ListedItemView {
    pub id: String,
    pub display: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExploreResponse {
    pub frame_id: String,
    pub items: Vec<ListedItemView>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub frames: Vec<SceneFrame>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    /// Id of the listed item to build a program for.
    pub select: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AskMode {
    #[default]
    Offline,
    Llm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AskRequest {
    pub question: String,
    #[serde(default)]
    pub mode: AskMode,
    /// Program the question modifies, if any: inline or by library name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<ProgramDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AskOutcome {
    Program,
    Refusal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AskResponse {
    pub outcome: AskOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub program: Option<ProgramView>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
    /// Slots the registry cannot serve; present means the program is not
    /// runnable as-is.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unsupported: Vec<UnsupportedSlot>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyRequest {
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyResponse {
    /// Every text kind the whole string satisfies.
    pub kinds: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub most_specific: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LibraryItem {
    pub name: String,
    /// Seconds since the Unix epoch, when the filesystem reports it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LibraryListResponse {
    pub programs: Vec<LibraryItem>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaveRequest {
    #[serde(flatten)]
    pub source: ProgramSource,
    #[serde(default)]
    pub force: bool,
}

/// Failure class on the wire; mirrors the exit-code table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiErrorClass {
    Syntax,
    UnsupportedTarget,
    Scene,
    Library,
    Llm,
    Internal,
}

impl From<ErrorClass> for ApiErrorClass {
    fn from(class: ErrorClass) -> Self {
        match class {
            ErrorClass::Syntax => ApiErrorClass::Syntax,
            ErrorClass::UnsupportedTarget => ApiErrorClass::UnsupportedTarget,
            ErrorClass::Scene => ApiErrorClass::Scene,
            ErrorClass::Library => ApiErrorClass::Library,
            ErrorClass::Llm => ApiErrorClass::Llm,
            ErrorClass::Internal => ApiErrorClass::Internal,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiError {
    pub class: ApiErrorClass,
    pub message: String,
    /// Byte offset into the program text, for syntax errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suggestions: Vec<String>,
}

/// Every non-2xx response carries this body.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ApiError,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_round_trip_as_snake_case() {
        let body = ErrorBody {
            error: ApiError {
                class: ApiErrorClass::UnsupportedTarget,
                message: "unknown target `foo`".into(),
                offset: None,
                suggestions: vec!["book".into()],
            },
        };
        let json = serde_json::to_string(&body).unwrap();
        assert!(json.contains("\"unsupported_target\""), "{json}");
        let back: ErrorBody = serde_json::from_str(&json).unwrap();
        assert_eq!(back.error.class, ApiErrorClass::UnsupportedTarget);
    }

    #[test]
    fn program_source_flattens_into_requests() {
        let req: RunRequest = serde_json::from_str(
            r#"{ "text": "find number on bus", "frames": [] }"#,
        )
        .unwrap();
        assert_eq!(req.source.text.as_deref(), Some("find number on bus"));
        assert!(!req.brief);
        assert_eq!(req.debounce, 0);
    }

    #[test]
    fn ask_mode_defaults_to_offline() {
        let req: AskRequest =
            serde_json::from_str(r#"{ "question": "What does this bottle say?" }"#).unwrap();
        assert_eq!(req.mode, AskMode::Offline);
        assert!(req.prior.is_none() && req.prior_name.is_none());
    }
}
