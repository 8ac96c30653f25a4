//! Visual-information filtering programs: a small `find`/`on` language over
//! detected objects and text, an interpreter with containment-based chain
//! execution, and two program synthesizers (selection over a scene graph and
//! natural-language questions).

pub mod ast;
pub mod codec;
pub mod color;
pub mod error;
pub mod geometry;
pub mod interpreter;
pub mod library;
pub mod parse;
pub mod ppm;
pub mod print;
pub mod recognizers;
pub mod registry;
pub mod scene;
pub mod synthesis;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod validate;

pub use ast::{
    Adjective, ColorName, FindChain, Item, Location, Program, PropertyKind, SizeExtreme, Target,
    TextKind,
};
pub use codec::{decode_program, decode_program_json, encode_program, encode_program_json, ItemDoc, ProgramDoc};
pub use color::{extract_dominant_colors, name_color, reference_colors};
pub use error::{Error, ErrorClass, Result};
pub use geometry::{frame_position_phrase, majority_contains, quadrant_label, BBox};
pub use interpreter::{
    all_matches, apply_adjective, render_messages, run_chain, run_program, run_sequence,
    AdjectiveMiss, Announcement, ChainResult, ExecutionMatch, RenderStyle, RunResult,
};
pub use library::{default_library_dir, Library, LibraryEntry};
pub use ppm::Raster;
pub use recognizers::{classify_text, most_specific, recognize, TextMatch};
pub use parse::parse_program;
pub use print::{print_program, summarize};
pub use registry::{Registry, TargetKind, TargetSpec};
pub use scene::{
    load_scene, scene_from_json, validate_frames, DetKind, DetectQuery, Detection,
    DetectorBackend, FixtureBackend, SceneFrame,
};
pub use synthesis::{
    build_nl_request, build_scene_graph, generate_from_selection, list_items, offline_synthesize,
    parse_chat_response, parse_nl_response, ChatMessage, ListedItem, NLOutcome, NLRequest,
    SceneGraph, SceneNode,
};
pub use validate::{repair_program, validate_program, SlotRef, ValidationReport};
