//! Route handlers. Each one is a thin adapter: decode the request, call the
//! core crate, shape the reply.

use std::sync::Arc;
use std::time::UNIX_EPOCH;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::Json;
use vizfilter_api::{
    AskMode, AskOutcome, AskRequest, AskResponse, ClassifyRequest, ClassifyResponse,
    ExploreRequest, ExploreResponse, GenerateRequest, Health, LibraryItem, LibraryListResponse,
    ListedItemView, ParseRequest, ProgramSource, ProgramView, RegistryResponse, RunRequest,
    RunResponse, SaveRequest, UnsupportedSlot, ValidateRequest, ValidateResponse,
};
use vizfilter_core::ast::Program;
use vizfilter_core::codec::{decode_program, encode_program};
use vizfilter_core::interpreter::{run_sequence, RenderStyle};
use vizfilter_core::parse::parse_program;
use vizfilter_core::print::{print_program, summarize};
use vizfilter_core::recognizers::{classify_text, most_specific};
use vizfilter_core::registry::Registry;
use vizfilter_core::scene::{validate_frames, FixtureBackend, SceneFrame};
use vizfilter_core::synthesis::{
    build_nl_request, build_scene_graph, generate_from_selection, list_items, offline_synthesize,
    parse_nl_response, NLOutcome,
};
use vizfilter_core::validate::{repair_program, validate_program};
use vizfilter_core::Error;

use crate::error::ApiFailure;
use crate::llm;
use crate::AppState;

fn view(program: &Program) -> ProgramView {
    ProgramView {
        program: encode_program(program),
        text: print_program(program),
        summary: summarize(program),
    }
}

fn unsupported_slots(program: &Program, registry: &Registry) -> Vec<UnsupportedSlot> {
    repair_program(program, registry)
        .into_iter()
        .map(|(slot, suggestions)| UnsupportedSlot {
            chain: slot.chain,
            item: slot.item,
            name: slot.name,
            suggestions,
        })
        .collect()
}

/// Materialize a program from whichever source the request set.
fn resolve_source(state: &AppState, source: ProgramSource) -> Result<Program, ApiFailure> {
    match (source.program, source.text, source.name) {
        (Some(doc), None, None) => Ok(decode_program(&doc, state.registry)?),
        (None, Some(text), None) => Ok(parse_program(&text, state.registry)?),
        (None, None, Some(name)) => load_named(state, &name),
        _ => Err(ApiFailure::usage("set exactly one of `program`, `text`, `name`")),
    }
}

fn load_named(state: &AppState, name: &str) -> Result<Program, ApiFailure> {
    if !state.library.contains(name)? {
        return Err(ApiFailure::not_found(format!("no program named {name:?}")));
    }
    Ok(state.library.load(name, state.registry)?)
}

/// Reject programs the interpreter cannot execute, naming the first problem.
fn ensure_runnable(program: &Program, registry: &Registry) -> Result<(), ApiFailure> {
    let report = validate_program(program, registry);
    if report.ok() {
        return Ok(());
    }
    if let Some(message) = report.structural.first() {
        return Err(Error::InvalidProgram(message.clone()).into());
    }
    let (slot, suggestions) = repair_program(program, registry).remove(0);
    Err(Error::UnknownTarget { name: slot.name, suggestions }.into())
}

fn checked_frames(frames: &[SceneFrame]) -> Result<(), ApiFailure> {
    if frames.is_empty() {
        return Err(ApiFailure::usage("`frames` must not be empty"));
    }
    validate_frames(frames)?;
    Ok(())
}

fn pick_frame<'f>(
    frames: &'f [SceneFrame],
    wanted: Option<&str>,
) -> Result<&'f SceneFrame, ApiFailure> {
    match wanted {
        None => Ok(&frames[0]),
        Some(id) => frames
            .iter()
            .find(|f| f.frame_id == id)
            .ok_or_else(|| Error::Scene(format!("no frame with id {id:?}")).into()),
    }
}

pub async fn health() -> Json<Health> {
    Json(Health { status: "ok".into(), version: env!("CARGO_PKG_VERSION").into() })
}

pub async fn registry(State(state): State<Arc<AppState>>) -> Json<RegistryResponse> {
    Json(RegistryResponse { targets: state.registry.iter().cloned().collect() })
}

pub async fn parse(
    State(state): State<Arc<AppState>>,
    Json(req): Json<ParseRequest>,
) -> Result<Json<ProgramView>, ApiFailure> {
    let program = parse_program(&req.text, state.registry)?;
    Ok(Json(view(&program)))
}

pub async fn validate(
    State(state): State<Arc<AppState>>,
    Json(req): Json<ValidateRequest>,
) -> Result<Json<ValidateResponse>, ApiFailure> {
    let program = resolve_source(&state, req.source)?;
    let report = validate_program(&program, state.registry);
    Ok(Json(ValidateResponse {
        valid: report.ok(),
        program: view(&program),
        structural: report.structural,
        unsupported: unsupported_slots(&program, state.registry),
    }))
}

pub async fn run(
    State(state): State<Arc<AppState>>,
    Json(req): Json<RunRequest>,
) -> Result<Json<RunResponse>, ApiFailure> {
    let program = resolve_source(&state, req.source)?;
    ensure_runnable(&program, state.registry)?;
    checked_frames(&req.frames)?;
    let style = if req.brief { RenderStyle::Brief } else { RenderStyle::Full };
    let backend = FixtureBackend::new(state.registry);
    let announcements =
        run_sequence(&program, &req.frames, &backend, state.registry, req.debounce, style)?;
    Ok(Json(RunResponse { announcements }))
}

pub async fn explore(
    Json(req): Json<ExploreRequest>,
) -> Result<Json<ExploreResponse>, ApiFailure> {
    checked_frames(&req.frames)?;
    let frame = pick_frame(&req.frames, req.frame.as_deref())?;
    let graph = build_scene_graph(frame);
    let items = list_items(&graph)
        .into_iter()
        .map(|item| ListedItemView { id: item.id, display: item.display })
        .collect();
    Ok(Json(ExploreResponse {
        frame_id: frame.frame_id.clone(),
        items,
        warnings: graph.warnings.clone(),
    }))
}

pub async fn generate(
    Json(req): Json<GenerateRequest>,
) -> Result<Json<ProgramView>, ApiFailure> {
    checked_frames(&req.frames)?;
    let frame = pick_frame(&req.frames, req.frame.as_deref())?;
    let graph = build_scene_graph(frame);
    let program = generate_from_selection(&graph, &req.select)?;
    Ok(Json(view(&program)))
}

pub async fn ask(
    State(state): State<Arc<AppState>>,
    Json(req): Json<AskRequest>,
) -> Result<Json<AskResponse>, ApiFailure> {
    let prior = match (req.prior, req.prior_name) {
        (Some(doc), None) => Some(decode_program(&doc, state.registry)?),
        (None, Some(name)) => Some(load_named(&state, &name)?),
        (None, None) => None,
        _ => return Err(ApiFailure::usage("set at most one of `prior`, `prior_name`")),
    };
    let outcome = match req.mode {
        AskMode::Offline => offline_synthesize(&req.question, prior.as_ref(), state.registry),
        AskMode::Llm => {
            let Some(config) = &state.llm else {
                return Err(ApiFailure::llm("no LLM endpoint configured"));
            };
            let request = build_nl_request(&req.question, prior.as_ref(), state.registry)?;
            let reply = llm::complete(&state.http, config, &request).await?;
            parse_nl_response(&reply, state.registry)?
        }
    };
    Ok(Json(match outcome {
        NLOutcome::Program(program) => AskResponse {
            outcome: AskOutcome::Program,
            unsupported: unsupported_slots(&program, state.registry),
            program: Some(view(&program)),
            refusal: None,
        },
        NLOutcome::Refusal(text) => AskResponse {
            outcome: AskOutcome::Refusal,
            program: None,
            refusal: Some(text),
            unsupported: Vec::new(),
        },
    }))
}

pub async fn classify(Json(req): Json<ClassifyRequest>) -> Json<ClassifyResponse> {
    Json(ClassifyResponse {
        kinds: classify_text(&req.text).into_iter().map(|k| k.name().to_owned()).collect(),
        most_specific: most_specific(&req.text).map(|k| k.name().to_owned()),
    })
}

pub async fn lib_list(
    State(state): State<Arc<AppState>>,
) -> Result<Json<LibraryListResponse>, ApiFailure> {
    let programs = state
        .library
        .list()?
        .into_iter()
        .map(|entry| LibraryItem {
            name: entry.name,
            modified: entry
                .modified
                .and_then(|t| t.duration_since(UNIX_EPOCH).ok())
                .map(|d| d.as_secs()),
        })
        .collect();
    Ok(Json(LibraryListResponse { programs }))
}

pub async fn lib_show(
    State(state): State<Arc<AppState>>,
    Path(name): Path<String>,
) -> Result<Json<ProgramView>, ApiFailure> {
    let program = load_named(&state, &name)?;
    Ok(Json(view(&program)))
}

pub async fn lib_save(
    State(state): State<Arc<AppState>>,
    Path(name): Path<String>,
    Json(req): Json<SaveRequest>,
) -> Result<(StatusCode, Json<ProgramView>), ApiFailure> {
    let existed = state.library.contains(&name)?;
    if existed && !req.force {
        return Err(ApiFailure::conflict(format!(
            "program {name:?} already exists (set `force` to replace it)"
        )));
    }
    let program = resolve_source(&state, req.source)?;
    state.library.save(&name, &program, req.force)?;
    let stored = state.library.load(&name, state.registry)?;
    let status = if existed { StatusCode::OK } else { StatusCode::CREATED };
    Ok((status, Json(view(&stored))))
}

pub async fn lib_delete(
    State(state): State<Arc<AppState>>,
    Path(name): Path<String>,
) -> Result<StatusCode, ApiFailure> {
    if !state.library.contains(&name)? {
        return Err(ApiFailure::not_found(format!("no program named {name:?}")));
    }
    state.library.delete(&name)?;
    Ok(StatusCode::NO_CONTENT)
}
