mod common;

use std::fs;

use common::Fixture;
use serde_json::Value;
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use topicatlas_cli::load::{load_matching_corpus, load_model};
use topicatlas_cli::serve::{handle, serve, ServeState};

fn state(f: &Fixture, docs: bool) -> ServeState {
    let st = ServeState::new(fs::read(&f.graph).unwrap()).unwrap();
    if !docs {
        return st;
    }
    let model = load_model(&f.model()).unwrap();
    let corpus = load_matching_corpus(&model, &f.records, 0).unwrap();
    st.with_documents(&model, &corpus)
}

fn json(body: &[u8]) -> Value {
    serde_json::from_slice(body).unwrap()
}

#[test]
fn graph_is_served_byte_for_byte() {
    let f = Fixture::new();
    let st = state(&f, false);
    let r = handle(&st, "/api/graph");
    assert_eq!(r.status, 200);
    assert_eq!(r.content_type, "application/json");
    assert_eq!(r.body, fs::read(&f.graph).unwrap());
    assert_eq!(handle(&st, "/api/graph"), r);
}

#[test]
fn topic_detail_lists_edges_heaviest_first() {
    let f = Fixture::new();
    let st = state(&f, false);
    for id in ["w0", "w1", "w2", "d0", "d1", "d2"] {
        let r = handle(&st, &format!("/api/topic/{id}"));
        assert_eq!(r.status, 200, "{id}");
        let v = json(&r.body);
        assert_eq!(v["id"], id);
        let edges = v["edges"].as_array().unwrap();
        assert_eq!(v["degree"].as_u64().unwrap() as usize, edges.len());
        let weights: Vec<f64> = edges.iter().map(|e| e["weight"].as_f64().unwrap()).collect();
        assert!(weights.windows(2).all(|w| w[0] >= w[1]));
        for e in edges {
            assert!(e["src"] == id || e["dst"] == id);
            assert_ne!(e["other"], id);
        }
        if id.starts_with('d') {
            assert_eq!(v["kind"], "doc");
            assert_eq!(v["top_docs"].as_array().unwrap().len(), 5);
            assert_eq!(v["indicative_words"].as_array().unwrap().len(), 10);
        } else {
            assert_eq!(v["kind"], "word");
            assert!(v["indicative_words"].as_array().unwrap().is_empty());
        }
    }
}

#[test]
fn bad_topic_ids() {
    let f = Fixture::new();
    let st = state(&f, false);
    assert_eq!(handle(&st, "/api/topic/w999").status, 404);
    assert_eq!(handle(&st, "/api/topic/d3").status, 404);
    for bad in ["x1", "w", "w-1", "", "d1x", "%FF"] {
        assert_eq!(handle(&st, &format!("/api/topic/{bad}")).status, 400, "{bad:?}");
    }
    assert_eq!(handle(&st, "/api/nothing").status, 404);
}

#[test]
fn document_endpoint_needs_a_corpus() {
    let f = Fixture::new();
    assert_eq!(handle(&state(&f, false), "/api/doc/d000").status, 404);

    let st = state(&f, true);
    let r = handle(&st, "/api/doc/d000");
    assert_eq!(r.status, 200);
    let v = json(&r.body);
    assert_eq!(v["id"], "d000");
    let theta: Vec<f64> = v["theta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(theta.len(), 3);
    assert!((theta.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    assert!(!v["snippet"].as_str().unwrap().is_empty());
    assert_eq!(handle(&st, "/api/doc/nope").status, 404);
    assert_eq!(handle(&st, "/api/doc/").status, 400);

    // titles appear next to a DocTopic's top documents
    let topic = json(&handle(&st, "/api/topic/d0").body);
    assert!(topic["top_docs"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["title"].is_string()));
}

#[test]
fn static_files_stay_inside_the_ui_directory() {
    let f = Fixture::new();
    let ui = f.dir.path().join("ui");
    fs::create_dir(&ui).unwrap();
    fs::write(ui.join("index.html"), "<p>ui</p>").unwrap();
    fs::write(ui.join("app.js"), "1").unwrap();
    let st = state(&f, false).with_ui(ui);
    let r = handle(&st, "/");
    assert_eq!((r.status, r.body.as_slice()), (200, b"<p>ui</p>".as_slice()));
    assert!(handle(&st, "/app.js").content_type.contains("javascript"));
    assert_eq!(handle(&st, "/../records.jsonl").status, 400);
    assert_eq!(handle(&st, "/%2e%2e/records.jsonl").status, 400);
    assert_eq!(handle(&st, "/missing.css").status, 404);

    let bare = state(&f, false);
    assert_eq!(handle(&bare, "/").status, 200);
    assert_eq!(handle(&bare, "/app.js").status, 404);
}

async fn get(addr: std::net::SocketAddr, method: &str, path: &str) -> (u16, Vec<u8>) {
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let req = format!("{method} {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n");
    stream.write_all(req.as_bytes()).await.unwrap();
    let mut raw = Vec::new();
    stream.read_to_end(&mut raw).await.unwrap();
    let split = raw.windows(4).position(|w| w == b"\r\n\r\n").unwrap();
    let head = String::from_utf8_lossy(&raw[..split]).to_string();
    let status = head.split(' ').nth(1).unwrap().parse().unwrap();
    (status, raw[split + 4..].to_vec())
}

#[tokio::test]
async fn answers_over_http() {
    let f = Fixture::new();
    let st = state(&f, false);
    let expected = fs::read(&f.graph).unwrap();
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let server = tokio::spawn(serve(st, listener));

    let (status, body) = get(addr, "GET", "/api/graph").await;
    assert_eq!(status, 200);
    assert_eq!(body, expected);
    let (status, _) = get(addr, "GET", "/api/topic/w999").await;
    assert_eq!(status, 404);
    let (status, _) = get(addr, "POST", "/api/graph").await;
    assert_eq!(status, 405);
    server.abort();
}
