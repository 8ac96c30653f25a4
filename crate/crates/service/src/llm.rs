//! Chat-completion transport for question mode: one POST, strict timeout,
//! no retries. Interpretation of the reply lives in the core crate.

use std::time::Duration;

use vizfilter_core::synthesis::NLRequest;
use vizfilter_core::{Error, Result};

#[derive(Debug, Clone)]
pub struct LlmConfig {
    /// Full chat-completions URL.
    pub url: String,
    pub token: Option<String>,
    pub model: String,
}

impl LlmConfig {
    /// Reads `VIZFILTER_LLM_URL` / `VIZFILTER_LLM_TOKEN` (and an optional
    /// `VIZFILTER_LLM_MODEL`); no URL means question mode is offline-only.
    pub fn from_env() -> Option<LlmConfig> {
        let url = std::env::var("VIZFILTER_LLM_URL").ok().filter(|v| !v.is_empty())?;
        Some(LlmConfig {
            url,
            token: std::env::var("VIZFILTER_LLM_TOKEN").ok().filter(|v| !v.is_empty()),
            model: std::env::var("VIZFILTER_LLM_MODEL")
                .ok()
                .filter(|v| !v.is_empty())
                .unwrap_or_else(|| "gpt-4".to_owned()),
        })
    }
}

/// Sends the assembled request and returns the raw reply body (function-call
/// arguments or message content).
pub async fn complete(
    http: &reqwest::Client,
    config: &LlmConfig,
    request: &NLRequest,
) -> Result<String> {
    let mut post = http
        .post(&config.url)
        .timeout(Duration::from_secs(30))
        .json(&request.chat_body(&config.model));
    if let Some(token) = &config.token {
        post = post.bearer_auth(token);
    }
    let response = post.send().await.map_err(|e| Error::Llm(format!("request failed: {e}")))?;
    let status = response.status();
    let text = response
        .text()
        .await
        .map_err(|e| Error::Llm(format!("response read failed: {e}")))?;
    if !status.is_success() {
        return Err(Error::Llm(format!("endpoint returned {status}: {text}")));
    }
    vizfilter_core::synthesis::parse_chat_response(&text)
}
