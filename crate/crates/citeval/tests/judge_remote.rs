//! Remote judge backend against a local chat-completion stub.

mod common;

use std::sync::Arc;

use citeval::judge::{parse_judge_output, JudgeBackend, JudgeError, RemoteJudge};

use common::{start_server, StubResponse};

fn completion_body(content: &str) -> String {
    serde_json::json!({
        "choices": [{"message": {"role": "assistant", "content": content}}]
    })
    .to_string()
}

#[tokio::test]
async fn remote_judge_round_trip() {
    let addr = start_server(Arc::new(|path: &str, body: &str| {
        assert_eq!(path, "/v1/chat/completions");
        // the prompt rides in messages[0].content at temperature 0
        let request: serde_json::Value = serde_json::from_str(body).expect("json body");
        assert_eq!(request["temperature"], 0.0);
        assert_eq!(request["model"], "judge-model");
        let prompt = request["messages"][0]["content"].as_str().unwrap();
        assert!(prompt.contains("CLAIM"));
        StubResponse {
            content_type: "application/json",
            ..StubResponse::of(
                200,
                &completion_body("SCORE: 1\nEXPLANATION: the source supports it"),
            )
        }
    }))
    .await;

    let judge = RemoteJudge::new(
        &format!("http://{addr}/v1/chat/completions"),
        "judge-model",
        Some("test-key".into()),
    );
    let raw = judge
        .complete("CLAIM section goes here")
        .await
        .expect("completion succeeds");
    let verdict = parse_judge_output(&raw).unwrap();
    assert!(verdict.score);
    assert_eq!(verdict.explanation, "the source supports it");
}

#[tokio::test]
async fn server_error_is_transport_failure() {
    let addr = start_server(Arc::new(|_: &str, _: &str| StubResponse::of(500, "down"))).await;
    let judge = RemoteJudge::new(&format!("http://{addr}/chat"), "m", None);
    let err = judge.complete("p").await.unwrap_err();
    assert!(matches!(err, JudgeError::Transport(_)));
    assert!(err.is_retryable());
}

#[tokio::test]
async fn malformed_completion_is_transport_failure() {
    let addr = start_server(Arc::new(|_: &str, _: &str| StubResponse {
        content_type: "application/json",
        ..StubResponse::of(200, "{\"unexpected\": true}")
    }))
    .await;
    let judge = RemoteJudge::new(&format!("http://{addr}/chat"), "m", None);
    let err = judge.complete("p").await.unwrap_err();
    assert!(matches!(err, JudgeError::Transport(_)));
}

#[tokio::test]
async fn unreachable_endpoint_is_transport_failure() {
    let judge = RemoteJudge::new("http://127.0.0.1:1/chat", "m", None).with_timeout_ms(500);
    let err = judge.complete("p").await.unwrap_err();
    assert!(matches!(err, JudgeError::Transport(_)));
}
