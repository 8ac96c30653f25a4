//! Async HTTP client for the service. One method per route; errors keep the
//! server's failure class so callers can map them onto exit codes.

use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Serialize;
use vizfilter_api::{
    ApiError, AskRequest, AskResponse, ClassifyRequest, ClassifyResponse, ErrorBody,
    ExploreRequest, ExploreResponse, GenerateRequest, Health, LibraryListResponse, ParseRequest,
    ProgramView, RegistryResponse, RunRequest, RunResponse, SaveRequest, ValidateRequest,
    ValidateResponse,
};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("cannot reach server: {0}")]
    Transport(#[from] reqwest::Error),

    /// The server answered with an error body.
    #[error("{}", .error.message)]
    Api { status: u16, error: ApiError },

    #[error("unexpected response: {0}")]
    Decode(String),
}

pub type Result<T, E = ClientError> = std::result::Result<T, E>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// A client for the service at `base`, e.g. `http://127.0.0.1:4000`.
    pub fn new(base: impl Into<String>) -> Client {
        let mut base = base.into();
        while base.ends_with('/') {
            base.pop();
        }
        let http = reqwest::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .expect("default client configuration is valid");
        Client { base, http }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    async fn decode<T: DeserializeOwned>(response: reqwest::Response) -> Result<T> {
        let status = response.status();
        let text = response.text().await?;
        if status.is_success() {
            if text.is_empty() {
                // () decodes from JSON null for bodyless replies.
                return serde_json::from_str("null")
                    .map_err(|e| ClientError::Decode(e.to_string()));
            }
            return serde_json::from_str(&text).map_err(|e| ClientError::Decode(e.to_string()));
        }
        match serde_json::from_str::<ErrorBody>(&text) {
            Ok(body) => Err(ClientError::Api { status: status.as_u16(), error: body.error }),
            Err(_) => Err(ClientError::Decode(format!("status {status}: {text}"))),
        }
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        Self::decode(self.http.get(format!("{}{path}", self.base)).send().await?).await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        Self::decode(self.http.post(format!("{}{path}", self.base)).json(body).send().await?)
            .await
    }

    pub async fn health(&self) -> Result<Health> {
        self.get("/v1/health").await
    }

    pub async fn registry(&self) -> Result<RegistryResponse> {
        self.get("/v1/registry").await
    }

    pub async fn parse(&self, text: impl Into<String>) -> Result<ProgramView> {
        self.post("/v1/programs/parse", &ParseRequest { text: text.into() }).await
    }

    pub async fn validate(&self, request: &ValidateRequest) -> Result<ValidateResponse> {
        self.post("/v1/programs/validate", request).await
    }

    pub async fn run(&self, request: &RunRequest) -> Result<RunResponse> {
        self.post("/v1/run", request).await
    }

    pub async fn explore(&self, request: &ExploreRequest) -> Result<ExploreResponse> {
        self.post("/v1/explore", request).await
    }

    pub async fn generate(&self, request: &GenerateRequest) -> Result<ProgramView> {
        self.post("/v1/explore/generate", request).await
    }

    pub async fn ask(&self, request: &AskRequest) -> Result<AskResponse> {
        self.post("/v1/ask", request).await
    }

    pub async fn classify(&self, text: impl Into<String>) -> Result<ClassifyResponse> {
        self.post("/v1/classify", &ClassifyRequest { text: text.into() }).await
    }

    pub async fn library_list(&self) -> Result<LibraryListResponse> {
        self.get("/v1/library").await
    }

    pub async fn library_show(&self, name: &str) -> Result<ProgramView> {
        self.get(&format!("/v1/library/{name}")).await
    }

    pub async fn library_save(&self, name: &str, request: &SaveRequest) -> Result<ProgramView> {
        Self::decode(
            self.http
                .put(format!("{}/v1/library/{name}", self.base))
                .json(request)
                .send()
                .await?,
        )
        .await
    }

    pub async fn library_delete(&self, name: &str) -> Result<()> {
        Self::decode(
            self.http.delete(format!("{}/v1/library/{name}", self.base)).send().await?,
        )
        .await
    }
}
