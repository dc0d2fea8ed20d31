use std::collections::BTreeSet;

use patspec_client::mock::{MockBehavior, MockServer};
use patspec_client::{ClientError, EndpointConfig, GenClient, GenParams, GenerationRequest};
use patspec_core::corpus::{ClaimFeature, ComponentPair, FigureNumber, TrainingSample};
use patspec_core::enrich::tag_text;

fn client_for(server: &MockServer) -> GenClient {
    let mut config = EndpointConfig::new(&server.base_url(), "mock-model");
    config.backoff_ms = 1;
    GenClient::new(config).unwrap()
}

fn request(id: &str, prompt: &str, n: u32) -> GenerationRequest {
    GenerationRequest::new(id, prompt, n).unwrap()
}

fn valid_sample(id: &str) -> TrainingSample {
    let pairs = vec![ComponentPair::new("processor", "102").unwrap()];
    let target = "FIG. 1 shows a processor 102.";
    let figs: BTreeSet<_> = [FigureNumber::plain(1)].into();
    let enriched = tag_text(target, &pairs, &figs);
    TrainingSample::new(
        id,
        ClaimFeature::new(1, 0, "a processor").unwrap(),
        "<ctx></ctx>",
        "FIG. 1 is a diagram.",
        "",
        pairs,
        0,
        1,
        target,
        &enriched,
        FigureNumber::plain(1),
    )
    .unwrap()
}

#[test]
fn mock_echoes_the_prompt() {
    let server = MockServer::start(MockBehavior::default()).unwrap();
    let client = client_for(&server);
    let result = client.generate(&request("s1", "hello prompt", 1)).unwrap();
    assert_eq!(result.candidates, vec!["hello prompt"]);
    assert_eq!(result.sample_id, "s1");
}

#[test]
fn persistent_500_exhausts_attempts() {
    let server = MockServer::start(MockBehavior {
        always_fail: true,
        ..Default::default()
    })
    .unwrap();
    let client = client_for(&server);
    let err = client.generate(&request("s1", "x", 1)).unwrap_err();
    match err {
        ClientError::EndpointUnreachable { attempts, .. } => assert_eq!(attempts, 3),
        other => panic!("unexpected error {other:?}"),
    }
    assert_eq!(server.request_count(), 3, "three tries total");
}

#[test]
fn transient_500_recovers() {
    let server = MockServer::start(MockBehavior {
        fail_first: 2,
        ..Default::default()
    })
    .unwrap();
    let client = client_for(&server);
    let result = client.generate(&request("s1", "retry me", 1)).unwrap();
    assert_eq!(result.candidates, vec!["retry me"]);
    assert_eq!(server.request_count(), 3);
}

#[test]
fn n_candidates_are_returned() {
    let server = MockServer::start(MockBehavior::default()).unwrap();
    let client = client_for(&server);
    let result = client.generate(&request("s1", "multi", 4)).unwrap();
    assert_eq!(result.candidates.len(), 4);
    assert!(result.candidates.iter().all(|c| c == "multi"));
}

#[test]
fn zero_candidates_is_invalid() {
    assert!(matches!(
        GenerationRequest::new("s", "p", 0),
        Err(ClientError::InvalidRequest { .. })
    ));
}

#[test]
fn batch_output_order_matches_input_order() {
    let server = MockServer::start(MockBehavior {
        delay_ms_max: 40,
        ..Default::default()
    })
    .unwrap();
    let client = client_for(&server);
    let requests: Vec<GenerationRequest> = (0..10)
        .map(|i| request(&format!("s{i}"), &format!("prompt {i}"), 1))
        .collect();
    let results = client.generate_batch(&requests, 3);
    assert_eq!(results.len(), 10);
    for (i, result) in results.iter().enumerate() {
        let r = result.as_ref().unwrap();
        assert_eq!(r.sample_id, format!("s{i}"));
        assert_eq!(r.candidates[0], format!("prompt {i}"));
    }
}

#[test]
fn concurrency_one_is_sequential() {
    let server = MockServer::start(MockBehavior::default()).unwrap();
    let client = client_for(&server);
    let requests: Vec<GenerationRequest> =
        (0..4).map(|i| request(&format!("s{i}"), "p", 1)).collect();
    let results = client.generate_batch(&requests, 1);
    assert!(results.iter().all(Result::is_ok));
    assert_eq!(server.request_count(), 4);
}

#[test]
fn batch_records_are_byte_identical_across_runs() {
    let server = MockServer::start(MockBehavior {
        delay_ms_max: 15,
        ..Default::default()
    })
    .unwrap();
    let client = client_for(&server);
    let requests: Vec<GenerationRequest> = (0..6)
        .map(|i| request(&format!("s{i}"), &format!("text {i}"), 2))
        .collect();
    let run = |client: &GenClient| -> Vec<u8> {
        let mut bytes = Vec::new();
        for (req, outcome) in requests.iter().zip(client.generate_batch(&requests, 3)) {
            let record = patspec_client::GenRecord::from_outcome(&req.sample_id, &outcome);
            bytes.extend(serde_json::to_vec(&record).unwrap());
            bytes.push(b'\n');
        }
        bytes
    };
    assert_eq!(run(&client), run(&client));
}

#[test]
fn invalid_samples_are_rejected_without_requests() {
    let server = MockServer::start(MockBehavior::default()).unwrap();
    let client = client_for(&server);
    let good = valid_sample("good1");
    let mut bad = valid_sample("bad1");
    bad.target_enriched = "<cn>unbalanced".into();
    let outcomes = client.generate_for_samples(
        &[good.clone(), bad, valid_sample("good2")],
        "Write the paragraph.",
        &GenParams {
            n_candidates: 1,
            ..Default::default()
        },
        2,
    );
    assert_eq!(outcomes.len(), 3);
    assert!(outcomes[0].1.is_ok());
    assert!(matches!(outcomes[1].1, Err(ClientError::InvalidSample { .. })));
    assert!(outcomes[2].1.is_ok());
    // only the two valid samples hit the endpoint
    assert_eq!(server.request_count(), 2);
    // the echoed prompt is the assembled input
    let echoed = &outcomes[0].1.as_ref().unwrap().candidates[0];
    assert!(echoed.contains("<cf>a processor</cf>"));
    assert!(echoed.starts_with("Write the paragraph."));
}

#[test]
fn unreachable_endpoint_errors() {
    let mut config = EndpointConfig::new("http://127.0.0.1:1", "m");
    config.backoff_ms = 1;
    config.timeout_secs = 2;
    let client = GenClient::new(config).unwrap();
    let err = client.generate(&request("s", "p", 1)).unwrap_err();
    assert!(matches!(
        err,
        ClientError::EndpointUnreachable { .. } | ClientError::Timeout { .. }
    ));
}

#[test]
fn audit_log_records_attempts() {
    let dir = tempfile::tempdir().unwrap();
    let audit_path = dir.path().join("audit.jsonl");
    let server = MockServer::start(MockBehavior {
        fail_first: 1,
        ..Default::default()
    })
    .unwrap();
    let mut config = EndpointConfig::new(&server.base_url(), "mock-model");
    config.backoff_ms = 1;
    config.audit_path = Some(audit_path.clone());
    let client = GenClient::new(config).unwrap();
    client.generate(&request("s1", "audited", 1)).unwrap();
    let body = std::fs::read_to_string(&audit_path).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 2, "one line per attempt");
    assert!(lines[0].contains("http status 500"));
    assert!(lines[1].contains("\"outcome\":\"ok\""));
}
