//! Client ↔ service round trips over a real localhost socket.

use std::path::PathBuf;
use std::sync::Arc;

use vizfilter_api::{ApiErrorClass, ProgramSource, RunRequest, SaveRequest};
use vizfilter_client::{Client, ClientError};
use vizfilter_core::scene::load_scene;
use vizfilter_service::{spawn_ephemeral, AppState};

async fn start() -> (Client, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let state = Arc::new(AppState::new(dir.path(), None).unwrap());
    let (addr, _handle) = spawn_ephemeral(state).await.unwrap();
    (Client::new(format!("http://{addr}")), dir)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[tokio::test]
async fn parse_and_run_against_a_live_server() {
    let (client, _dir) = start().await;
    assert_eq!(client.health().await.unwrap().status, "ok");

    let view = client.parse("find number on bus").await.unwrap();
    assert_eq!(view.text, "find NUMBER on BUS");

    let frames = load_scene(fixture("bus_two.json")).unwrap();
    let run = client
        .run(&RunRequest {
            source: ProgramSource { text: Some("find number on bus".into()), ..Default::default() },
            frames,
            brief: false,
            debounce: 0,
        })
        .await
        .unwrap();
    assert_eq!(
        run.announcements[0].text,
        "Found number 73 on bus, left of frame, found number 21 on bus, right of frame."
    );
}

#[tokio::test]
async fn library_lifecycle_and_error_classes() {
    let (client, _dir) = start().await;

    let save = SaveRequest {
        source: ProgramSource { text: Some("find number on bus".into()), ..Default::default() },
        force: false,
    };
    let stored = client.library_save("bus-route", &save).await.unwrap();
    assert_eq!(stored.text, "find NUMBER on BUS");

    let listed = client.library_list().await.unwrap();
    assert_eq!(listed.programs[0].name, "bus-route");

    let collision = client.library_save("bus-route", &save).await.unwrap_err();
    match collision {
        ClientError::Api { status, error } => {
            assert_eq!(status, 409);
            assert_eq!(error.class, ApiErrorClass::Library);
        }
        other => panic!("expected API error, got {other:?}"),
    }

    client.library_delete("bus-route").await.unwrap();
    let missing = client.library_show("bus-route").await.unwrap_err();
    match missing {
        ClientError::Api { status, error } => {
            assert_eq!(status, 404);
            assert_eq!(error.class, ApiErrorClass::Library);
        }
        other => panic!("expected API error, got {other:?}"),
    }

    let syntax = client.parse("bus on number").await.unwrap_err();
    match syntax {
        ClientError::Api { status, error } => {
            assert_eq!(status, 400);
            assert_eq!(error.class, ApiErrorClass::Syntax);
            assert!(error.offset.is_some());
        }
        other => panic!("expected API error, got {other:?}"),
    }
}
