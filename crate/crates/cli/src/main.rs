//! `vizfilter` — find/on filtering programs from the command line. Every
//! subcommand talks to a service: the one named by `--server` (or
//! `VIZFILTER_SERVER`), else an in-process one on an ephemeral port.
//!
//! Exit codes: 0 ok, 1 usage or library trouble, 2 program syntax, 3
//! unsupported target, 4 scene I/O, 5 LLM transport.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use vizfilter_api::{
    ApiErrorClass, AskMode, AskOutcome, AskRequest, ExploreRequest, ExploreResponse,
    GenerateRequest, ListedItemView, ProgramSource, ProgramView, RunRequest, SaveRequest,
    UnsupportedSlot, ValidateRequest,
};
use vizfilter_client::{Client, ClientError};
use vizfilter_core::codec::ProgramDoc;
use vizfilter_core::library::default_library_dir;
use vizfilter_core::scene::{load_scene, SceneFrame};
use vizfilter_service::{spawn_ephemeral, AppState, LlmConfig};

#[derive(Parser)]
#[command(name = "vizfilter", version, about = "Filter scenes with find/on programs")]
struct Cli {
    /// Service to talk to (e.g. http://127.0.0.1:4000); default is an
    /// in-process service.
    #[arg(long, global = true, env = "VIZFILTER_SERVER")]
    server: Option<String>,

    /// Program library directory for the in-process service
    /// (default: $VIZFILTER_LIB, else the user config directory).
    #[arg(long = "lib", global = true, value_name = "DIR")]
    lib_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// A program argument: literal text, `@FILE` (text or JSON document), or
/// `lib:NAME` for a saved program.
const PROGRAM_HELP: &str = "Program text, @FILE, or lib:NAME";

#[derive(Subcommand)]
enum Command {
    /// Parse and check a program, printing its spoken summary.
    Validate {
        #[arg(value_name = "PROGRAM", help = PROGRAM_HELP)]
        program: String,
    },
    /// Run a program against a scene file, one announcement line per frame.
    Run {
        #[arg(value_name = "PROGRAM", help = PROGRAM_HELP)]
        program: String,
        scene: PathBuf,
        /// Shorter announcements (no container or frame-position clauses).
        #[arg(long)]
        brief: bool,
        /// Heartbeat interval for suppressed repeats (0 emits every frame).
        #[arg(long, value_name = "N", default_value_t = 0)]
        debounce: usize,
        /// Run a single frame of the scene.
        #[arg(long, value_name = "ID")]
        frame: Option<String>,
    },
    /// List a scene's items and build a program from a selected one.
    Explore {
        scene: PathBuf,
        /// Item to select (id or list number); prompts when absent.
        #[arg(long, value_name = "ITEM")]
        select: Option<String>,
        /// Store the generated program in the library.
        #[arg(long, value_name = "NAME")]
        save: Option<String>,
        #[arg(long, value_name = "ID")]
        frame: Option<String>,
    },
    /// Turn a question into a program (offline rules by default).
    Ask {
        question: String,
        /// Use the deterministic offline rules (the default).
        #[arg(long, conflicts_with = "llm")]
        offline: bool,
        /// Use the configured LLM endpoint.
        #[arg(long)]
        llm: bool,
        /// Saved program the question modifies.
        #[arg(long, value_name = "NAME")]
        modify: Option<String>,
        /// Store the resulting program in the library.
        #[arg(long, value_name = "NAME")]
        save: Option<String>,
    },
    /// Manage the program library.
    Lib {
        #[command(subcommand)]
        action: LibAction,
    },
    /// Report which text kinds a string satisfies.
    Classify {
        text: String,
        /// Also print every satisfied kind, not just the most specific.
        #[arg(long)]
        all: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:4000")]
        addr: String,
    },
}

#[derive(Subcommand)]
enum LibAction {
    /// Store a program under a name.
    Save {
        name: String,
        #[arg(value_name = "PROGRAM", help = PROGRAM_HELP)]
        program: String,
        /// Replace an existing program of the same name.
        #[arg(long)]
        force: bool,
    },
    /// List stored program names.
    List,
    /// Print a stored program and its summary.
    Show { name: String },
    /// Remove a stored program.
    Delete { name: String },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Failure {
        let code = match &e {
            ClientError::Api { error, .. } => match error.class {
                ApiErrorClass::Syntax => 2,
                ApiErrorClass::UnsupportedTarget => 3,
                ApiErrorClass::Scene => 4,
                ApiErrorClass::Library => 1,
                ApiErrorClass::Llm => 5,
                ApiErrorClass::Internal => 1,
            },
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<vizfilter_core::Error> for Failure {
    fn from(e: vizfilter_core::Error) -> Failure {
        use vizfilter_core::ErrorClass;
        let code = match e.class() {
            ErrorClass::Syntax => 2,
            ErrorClass::UnsupportedTarget => 3,
            ErrorClass::Scene => 4,
            ErrorClass::Library | ErrorClass::Internal => 1,
            ErrorClass::Llm => 5,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match runtime.block_on(dispatch(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

async fn dispatch(cli: Cli) -> Result<(), Failure> {
    if let Command::Serve { addr } = &cli.command {
        return serve(addr, cli.lib_dir.clone()).await;
    }
    let client = connect(&cli).await?;
    match cli.command {
        Command::Validate { program } => cmd_validate(&client, &program).await,
        Command::Run { program, scene, brief, debounce, frame } => {
            cmd_run(&client, &program, &scene, brief, debounce, frame.as_deref()).await
        }
        Command::Explore { scene, select, save, frame } => {
            cmd_explore(&client, &scene, select.as_deref(), save.as_deref(), frame).await
        }
        Command::Ask { question, llm, modify, save, .. } => {
            cmd_ask(&client, &question, llm, modify, save.as_deref()).await
        }
        Command::Lib { action } => cmd_lib(&client, action).await,
        Command::Classify { text, all } => cmd_classify(&client, &text, all).await,
        Command::Serve { .. } => unreachable!("handled above"),
    }
}

/// Connect to `--server`, or spawn an in-process service. The spawned task
/// lives as long as the runtime, which is the whole command.
async fn connect(cli: &Cli) -> Result<Client, Failure> {
    if let Some(server) = &cli.server {
        return Ok(Client::new(server.clone()));
    }
    let lib_dir = cli.lib_dir.clone().unwrap_or_else(default_library_dir);
    let state = Arc::new(AppState::new(lib_dir, LlmConfig::from_env())?);
    let (addr, _handle) = spawn_ephemeral(state)
        .await
        .map_err(|e| Failure::usage(format!("cannot start service: {e}")))?;
    Ok(Client::new(format!("http://{addr}")))
}

async fn serve(addr: &str, lib_dir: Option<PathBuf>) -> Result<(), Failure> {
    let lib_dir = lib_dir.unwrap_or_else(default_library_dir);
    let state = Arc::new(AppState::new(lib_dir, LlmConfig::from_env())?);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Failure::usage(format!("cannot bind {addr}: {e}")))?;
    let local = listener.local_addr().map_err(|e| Failure::usage(e.to_string()))?;
    eprintln!("listening on http://{local}");
    vizfilter_service::serve(listener, state)
        .await
        .map_err(|e| Failure::usage(format!("server stopped: {e}")))
}

/// Decode a program argument: `lib:NAME`, `@FILE` (JSON document or text),
/// or literal program text.
fn program_source(arg: &str) -> Result<ProgramSource, Failure> {
    if let Some(name) = arg.strip_prefix("lib:") {
        return Ok(ProgramSource { name: Some(name.to_owned()), ..Default::default() });
    }
    if let Some(path) = arg.strip_prefix('@') {
        let contents = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{path}: {e}")))?;
        if contents.trim_start().starts_with('{') {
            let doc: ProgramDoc = serde_json::from_str(&contents)
                .map_err(|e| Failure { code: 2, message: format!("{path}: {e}") })?;
            return Ok(ProgramSource { program: Some(doc), ..Default::default() });
        }
        return Ok(ProgramSource { text: Some(contents.trim().to_owned()), ..Default::default() });
    }
    Ok(ProgramSource { text: Some(arg.to_owned()), ..Default::default() })
}

fn load_frames(scene: &std::path::Path, frame: Option<&str>) -> Result<Vec<SceneFrame>, Failure> {
    let mut frames = load_scene(scene)?;
    if let Some(id) = frame {
        frames.retain(|f| f.frame_id == id);
        if frames.is_empty() {
            return Err(Failure { code: 4, message: format!("no frame with id {id:?}") });
        }
    }
    Ok(frames)
}

fn print_view(view: &ProgramView) {
    println!("{}", view.text);
    println!("{}", view.summary);
}

fn print_unsupported(slots: &[UnsupportedSlot]) {
    for slot in slots {
        let suggestions = if slot.suggestions.is_empty() {
            String::new()
        } else {
            format!(" (did you mean: {}?)", slot.suggestions.join(", "))
        };
        eprintln!(
            "unsupported target `{}` in chain {}, item {}{suggestions}",
            slot.name,
            slot.chain + 1,
            slot.item + 1
        );
    }
}

async fn cmd_validate(client: &Client, program: &str) -> Result<(), Failure> {
    let source = program_source(program)?;
    let report = client.validate(&ValidateRequest { source }).await?;
    if report.valid {
        println!("{}", report.program.summary);
        return Ok(());
    }
    for problem in &report.structural {
        eprintln!("invalid program: {problem}");
    }
    print_unsupported(&report.unsupported);
    Err(Failure { code: 3, message: "program has unsupported parts".into() })
}

async fn cmd_run(
    client: &Client,
    program: &str,
    scene: &std::path::Path,
    brief: bool,
    debounce: usize,
    frame: Option<&str>,
) -> Result<(), Failure> {
    let source = program_source(program)?;
    let frames = load_frames(scene, frame)?;
    let response = client.run(&RunRequest { source, frames, brief, debounce }).await?;
    for a in response.announcements {
        println!("{}\t{}", a.frame_id, a.text);
    }
    Ok(())
}

/// Match a selection against the listed items: a list number or an item id.
fn find_selection<'i>(items: &'i [ListedItemView], wanted: &str) -> Option<&'i ListedItemView> {
    if let Ok(number) = wanted.trim().parse::<usize>() {
        if (1..=items.len()).contains(&number) {
            return Some(&items[number - 1]);
        }
        return None;
    }
    items.iter().find(|item| item.id == wanted.trim())
}

/// Prompt on stderr and read selections from stdin until one matches.
fn prompt_selection<'i>(items: &'i [ListedItemView]) -> Result<&'i ListedItemView, Failure> {
    let stdin = std::io::stdin();
    let mut line = String::new();
    loop {
        eprint!("Select an item (number or id): ");
        let _ = std::io::stderr().flush();
        line.clear();
        let read = stdin
            .lock()
            .read_line(&mut line)
            .map_err(|e| Failure::usage(format!("cannot read selection: {e}")))?;
        if read == 0 {
            return Err(Failure::usage("no selection made"));
        }
        if line.trim().is_empty() {
            continue;
        }
        match find_selection(items, &line) {
            Some(item) => return Ok(item),
            None => eprintln!("no item {:?}", line.trim()),
        }
    }
}

fn print_items(response: &ExploreResponse) {
    for warning in &response.warnings {
        eprintln!("warning: {warning}");
    }
    for (i, item) in response.items.iter().enumerate() {
        println!("{}. {}", i + 1, item.display);
    }
}

async fn cmd_explore(
    client: &Client,
    scene: &std::path::Path,
    select: Option<&str>,
    save: Option<&str>,
    frame: Option<String>,
) -> Result<(), Failure> {
    let frames = load_frames(scene, frame.as_deref())?;
    let listing = client.explore(&ExploreRequest { frames: frames.clone(), frame: None }).await?;
    print_items(&listing);
    if listing.items.is_empty() {
        return Err(Failure::usage("scene has no items to select"));
    }
    let chosen = match select {
        Some(wanted) => find_selection(&listing.items, wanted)
            .ok_or_else(|| Failure::usage(format!("no item {wanted:?}")))?,
        None => prompt_selection(&listing.items)?,
    };
    let view = client
        .generate(&GenerateRequest { frames, frame: None, select: chosen.id.clone() })
        .await?;
    print_view(&view);
    if let Some(name) = save {
        save_program(client, name, &view).await?;
    }
    Ok(())
}

async fn save_program(client: &Client, name: &str, view: &ProgramView) -> Result<(), Failure> {
    let source = ProgramSource { program: Some(view.program.clone()), ..Default::default() };
    client.library_save(name, &SaveRequest { source, force: false }).await?;
    eprintln!("saved as {name}");
    Ok(())
}

async fn cmd_ask(
    client: &Client,
    question: &str,
    llm: bool,
    modify: Option<String>,
    save: Option<&str>,
) -> Result<(), Failure> {
    let request = AskRequest {
        question: question.to_owned(),
        mode: if llm { AskMode::Llm } else { AskMode::Offline },
        prior: None,
        prior_name: modify,
    };
    let response = client.ask(&request).await?;
    match response.outcome {
        AskOutcome::Refusal => {
            println!("{}", response.refusal.unwrap_or_default());
            Ok(())
        }
        AskOutcome::Program => {
            let view = response
                .program
                .ok_or_else(|| Failure::usage("server sent no program"))?;
            print_view(&view);
            if !response.unsupported.is_empty() {
                print_unsupported(&response.unsupported);
                return Err(Failure { code: 3, message: "program has unsupported parts".into() });
            }
            if let Some(name) = save {
                save_program(client, name, &view).await?;
            }
            Ok(())
        }
    }
}

async fn cmd_lib(client: &Client, action: LibAction) -> Result<(), Failure> {
    match action {
        LibAction::Save { name, program, force } => {
            let source = program_source(&program)?;
            client.library_save(&name, &SaveRequest { source, force }).await?;
            eprintln!("saved as {name}");
            Ok(())
        }
        LibAction::List => {
            for item in client.library_list().await?.programs {
                println!("{}", item.name);
            }
            Ok(())
        }
        LibAction::Show { name } => {
            let view = client.library_show(&name).await?;
            print_view(&view);
            Ok(())
        }
        LibAction::Delete { name } => {
            client.library_delete(&name).await?;
            Ok(())
        }
    }
}

async fn cmd_classify(client: &Client, text: &str, all: bool) -> Result<(), Failure> {
    let response = client.classify(text).await?;
    println!("{}", response.most_specific.as_deref().unwrap_or("text"));
    if all {
        println!("all: {}", response.kinds.join(", "));
    }
    Ok(())
}
