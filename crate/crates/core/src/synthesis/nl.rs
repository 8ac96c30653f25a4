//! Question-mode plumbing for a function-calling chat API: building the
//! request (system message, few-shot history, function schema with enums
//! drawn from the live registry) and decoding the reply into a program.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ast::{Adjective, Program};
use crate::codec::{decode_program, encode_program, ItemDoc, ProgramDoc};
use crate::error::{Error, Result};
use crate::registry::Registry;

pub const FUNCTION_NAME: &str = "interpret_object_query";
pub const SYSTEM_MESSAGE: &str =
    "Use the interpret_object_query function to interpret questions about objects.";
/// Prefix for follow-up user turns that modify an existing program.
pub const FOLLOWUP_PREFIX: &str = "Modify the previous program: ";

/// The canned example conversation sent with every request. Each user
/// question is paired with the exact reply we want for it, so the model
/// answers in the same shape.
static FEWSHOT: LazyLock<Vec<ChatMessage>> = LazyLock::new(|| {
    serde_json::from_str(include_str!("../../data/nl_fewshot.json"))
        .expect("bundled few-shot history is valid JSON")
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    fn new(role: &str, content: impl Into<String>) -> ChatMessage {
        ChatMessage {
            role: role.into(),
            content: content.into(),
        }
    }
}

/// A ready-to-send question interpretation request: the function schema plus
/// the full message list (system, few-shot history, optional prior program,
/// user question).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NLRequest {
    pub function: serde_json::Value,
    pub messages: Vec<ChatMessage>,
}

impl NLRequest {
    /// The chat-completions request body for this question.
    pub fn chat_body(&self, model: &str) -> serde_json::Value {
        json!({
            "model": model,
            "messages": self.messages,
            "functions": [self.function],
            "function_call": { "name": FUNCTION_NAME },
        })
    }
}

/// How a reply was understood: a program, or the model answering in natural
/// language instead (typically to ask for clarification).
#[derive(Debug, Clone, PartialEq)]
pub enum NLOutcome {
    Program(Program),
    Refusal(String),
}

fn function_spec(registry: &Registry) -> Result<serde_json::Value> {
    let objects = registry.names();
    if objects.is_empty() {
        return Err(Error::Registry(
            "cannot build a question request over an empty registry".into(),
        ));
    }
    Ok(json!({
        "name": FUNCTION_NAME,
        "description": "Interprets queries about specified objects, and optionally their attributes. Attributes must be paired with an object.",
        "parameters": {
            "type": "object",
            "properties": {
                "query_items": {
                    "type": "array",
                    "description": "A list of object targets with an optional descriptor, from most to least specific. If no close match is found, use 'any object'.",
                    "items": {
                        "type": "object",
                        "properties": {
                            "object": { "type": "string", "enum": objects },
                            "descriptor": { "type": "string", "enum": Adjective::all_names() },
                        },
                    },
                },
            },
            "required": ["query_items"],
        },
    }))
}

/// The `{"query": [...]}` JSON used for assistant turns that restate an
/// existing program (the shape the few-shot replies use).
fn program_reply_json(program: &Program) -> String {
    let doc = encode_program(program);
    serde_json::to_string(&json!({ "query": doc.chains })).expect("programs serialize")
}

/// Assemble the request for a question. With `prior`, the request becomes a
/// follow-up: the prior program is restated as the last assistant turn and
/// the user turn is prefixed accordingly.
pub fn build_nl_request(
    question: &str,
    prior: Option<&Program>,
    registry: &Registry,
) -> Result<NLRequest> {
    let function = function_spec(registry)?;
    let question = question
        .strip_prefix(FOLLOWUP_PREFIX)
        .unwrap_or(question)
        .trim();
    let mut messages = Vec::with_capacity(FEWSHOT.len() + 3);
    messages.push(ChatMessage::new("system", SYSTEM_MESSAGE));
    messages.extend(FEWSHOT.iter().cloned());
    match prior {
        Some(program) => {
            messages.push(ChatMessage::new("assistant", program_reply_json(program)));
            messages.push(ChatMessage::new(
                "user",
                format!("{FOLLOWUP_PREFIX}{question}"),
            ));
        }
        None => messages.push(ChatMessage::new("user", question)),
    }
    Ok(NLRequest { function, messages })
}

/// Pull the reply text out of a chat-completions response body: the function
/// call arguments if the model called the function, else the plain message
/// content (how refusals arrive).
pub fn parse_chat_response(body: &str) -> Result<String> {
    let value: serde_json::Value = serde_json::from_str(body)
        .map_err(|e| Error::Llm(format!("malformed chat response: {e}")))?;
    let message = &value["choices"][0]["message"];
    if let Some(arguments) = message["function_call"]["arguments"].as_str() {
        return Ok(arguments.to_owned());
    }
    if let Some(content) = message["content"].as_str() {
        return Ok(content.to_owned());
    }
    Err(Error::Llm(
        "chat response has neither a function call nor content".into(),
    ))
}

/// Strip a markdown code fence if the reply is wrapped in one.
fn strip_fences(text: &str) -> &str {
    let Some(rest) = text.strip_prefix("```") else {
        return text;
    };
    let rest = rest.split_once('\n').map_or("", |(_, body)| body);
    let rest = rest.trim_end();
    rest.strip_suffix("```").unwrap_or(rest).trim()
}

/// Interpret a model reply. JSON in the expected `query`/`query_items` shape
/// becomes a program (unresolvable object names survive as unsupported
/// slots); anything that is not JSON is treated as the model answering in
/// natural language. JSON in the wrong shape is an error.
pub fn parse_nl_response(body: &str, registry: &Registry) -> Result<NLOutcome> {
    let text = strip_fences(body.trim());
    let Ok(value) = serde_json::from_str::<serde_json::Value>(text) else {
        return Ok(NLOutcome::Refusal(text.to_owned()));
    };
    let chains_value = value
        .get("query")
        .or_else(|| value.get("query_items"))
        .ok_or_else(|| Error::Llm("reply JSON has neither `query` nor `query_items`".into()))?;
    let chains: Vec<Vec<ItemDoc>> = serde_json::from_value(chains_value.clone())
        .map_err(|e| Error::Llm(format!("reply query is not a list of item lists: {e}")))?;
    let doc = ProgramDoc { name: None, chains };
    let program =
        decode_program(&doc, registry).map_err(|e| Error::Llm(format!("reply program: {e}")))?;
    Ok(NLOutcome::Program(program))
}
