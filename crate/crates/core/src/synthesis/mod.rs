//! Program synthesis: from a selected example item in a scene graph, and
//! from natural-language questions (chat-request plumbing plus a
//! deterministic offline rule engine).

mod graph;
mod nl;
mod offline;

pub use graph::{
    build_scene_graph, generate_from_selection, list_items, ListedItem, SceneGraph, SceneNode,
};
pub use nl::{
    build_nl_request, parse_chat_response, parse_nl_response, ChatMessage, NLOutcome, NLRequest,
    FOLLOWUP_PREFIX, FUNCTION_NAME, SYSTEM_MESSAGE,
};
pub use offline::{offline_synthesize, REFUSAL_TEXT};
