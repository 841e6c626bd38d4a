//! Read-only HTTP access to a topic graph.
//!
//! All routing lives in [`handle`], a pure function from a request path to
//! a reply; the axum layer only adapts it.

use std::collections::HashMap;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use percent_encoding::percent_decode_str;
use serde_json::{json, Value};
use topicatlas::topicweb::{parse_graph, round_sig, theta_hat_row, GraphDocument, NodeId};

use crate::load::{LoadedCorpus, LoadedModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub status: u16,
    pub content_type: String,
    pub body: Vec<u8>,
}

impl Reply {
    fn json(status: u16, value: &Value) -> Self {
        let mut body = serde_json::to_vec(value).expect("json value serializes");
        body.push(b'\n');
        Self {
            status,
            content_type: "application/json".into(),
            body,
        }
    }

    fn error(status: u16, message: impl Into<String>) -> Self {
        Self::json(status, &json!({ "error": message.into() }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocEntry {
    pub snippet: String,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ServeState {
    graph_bytes: Vec<u8>,
    graph: GraphDocument,
    docs: Option<HashMap<String, DocEntry>>,
    ui_dir: Option<PathBuf>,
}

impl ServeState {
    /// Validates the graph; the bytes are served verbatim.
    pub fn new(graph_bytes: Vec<u8>) -> anyhow::Result<Self> {
        let graph = parse_graph(&graph_bytes).context("graph file failed validation")?;
        Ok(Self {
            graph_bytes,
            graph,
            docs: None,
            ui_dir: None,
        })
    }

    /// Enables `/api/doc/{id}` and document titles in topic details.
    pub fn with_documents(mut self, model: &LoadedModel, corpus: &LoadedCorpus) -> Self {
        let alpha = &model.model.params.alpha;
        let docs = corpus
            .corpus
            .documents()
            .iter()
            .zip(&model.model.summaries)
            .enumerate()
            .map(|(i, (doc, summary))| {
                let theta = theta_hat_row(alpha, summary).into_iter().map(round_sig).collect();
                (
                    doc.id.clone(),
                    DocEntry {
                        snippet: corpus.snippet(i),
                        theta,
                    },
                )
            })
            .collect();
        self.docs = Some(docs);
        self
    }

    pub fn with_ui(mut self, dir: PathBuf) -> Self {
        self.ui_dir = Some(dir);
        self
    }
}

fn decode(segment: &str) -> Option<String> {
    percent_decode_str(segment).decode_utf8().ok().map(|s| s.into_owned())
}

/// Routes a GET request path.
pub fn handle(state: &ServeState, path: &str) -> Reply {
    if path == "/api/graph" {
        return Reply {
            status: 200,
            content_type: "application/json".into(),
            body: state.graph_bytes.clone(),
        };
    }
    if let Some(raw) = path.strip_prefix("/api/topic/") {
        return match decode(raw) {
            Some(id) => topic(state, &id),
            None => Reply::error(400, "topic id is not valid UTF-8"),
        };
    }
    if let Some(raw) = path.strip_prefix("/api/doc/") {
        return match decode(raw) {
            Some(id) if !id.is_empty() => doc(state, &id),
            _ => Reply::error(400, "malformed document id"),
        };
    }
    if path == "/api" || path.starts_with("/api/") {
        return Reply::error(404, format!("no such endpoint: {path}"));
    }
    static_file(state, path)
}

fn topic(state: &ServeState, id: &str) -> Reply {
    if id.parse::<NodeId>().is_err() {
        return Reply::error(400, format!("malformed topic id {id:?}; expected w<k> or d<k>"));
    }
    let Some(node) = state.graph.node(id) else {
        return Reply::error(404, format!("unknown topic {id}"));
    };
    let edges: Vec<Value> = state
        .graph
        .incident_edges(id)
        .into_iter()
        .map(|e| {
            let other = if e.src == id { &e.dst } else { &e.src };
            json!({
                "cooccurrence": e.cooccurrence,
                "dst": e.dst,
                "kind": e.kind,
                "other": other,
                "src": e.src,
                "weight": e.weight,
            })
        })
        .collect();
    let top_docs: Vec<Value> = node
        .top_docs
        .iter()
        .map(|d| {
            let mut v = json!({ "doc": d.doc, "weight": d.weight });
            if let Some(entry) = state.docs.as_ref().and_then(|docs| docs.get(&d.doc)) {
                v["title"] = json!(entry.snippet);
            }
            v
        })
        .collect();
    let indicative: &[String] = if node.kind == "doc" { &node.keywords } else { &[] };
    Reply::json(
        200,
        &json!({
            "degree": edges.len(),
            "dominance": node.dominance,
            "edges": edges,
            "id": node.id,
            "indicative_words": indicative,
            "keywords": node.keywords,
            "kind": node.kind,
            "top_docs": top_docs,
        }),
    )
}

fn doc(state: &ServeState, id: &str) -> Reply {
    let Some(docs) = &state.docs else {
        return Reply::error(404, "no corpus loaded; start the server with --model and --corpus");
    };
    match docs.get(id) {
        Some(entry) => Reply::json(
            200,
            &json!({ "id": id, "snippet": entry.snippet, "theta": entry.theta }),
        ),
        None => Reply::error(404, format!("unknown document {id:?}")),
    }
}

const PLACEHOLDER: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>topicatlas</title></head>
<body>
<h1>topicatlas</h1>
<p>No UI bundle configured (pass <code>--ui DIR</code>). The API is available:</p>
<ul>
<li><a href=\"/api/graph\">/api/graph</a></li>
<li>/api/topic/{id}, e.g. <code>w0</code> or <code>d0</code></li>
<li>/api/doc/{id}</li>
</ul>
</body></html>
";

fn static_file(state: &ServeState, path: &str) -> Reply {
    let Some(root) = &state.ui_dir else {
        return if path == "/" || path == "/index.html" {
            Reply {
                status: 200,
                content_type: "text/html; charset=utf-8".into(),
                body: PLACEHOLDER.as_bytes().to_vec(),
            }
        } else {
            Reply::error(404, format!("not found: {path}"))
        };
    };
    let Some(rel) = decode(path.trim_start_matches('/')) else {
        return Reply::error(400, "path is not valid UTF-8");
    };
    let rel = if rel.is_empty() { "index.html".to_owned() } else { rel };
    let rel_path = Path::new(&rel);
    if !rel_path.components().all(|c| matches!(c, Component::Normal(_))) {
        return Reply::error(400, "path escapes the UI directory");
    }
    let full = root.join(rel_path);
    match std::fs::read(&full) {
        Ok(body) => Reply {
            status: 200,
            content_type: mime_guess::from_path(&full).first_or_octet_stream().to_string(),
            body,
        },
        Err(_) => Reply::error(404, format!("not found: {path}")),
    }
}

async fn respond(state: Arc<ServeState>, method: Method, uri: Uri) -> Response {
    if method != Method::GET && method != Method::HEAD {
        return (StatusCode::METHOD_NOT_ALLOWED, "read-only service\n").into_response();
    }
    let reply = handle(&state, uri.path());
    let status = StatusCode::from_u16(reply.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, reply.content_type)], reply.body).into_response()
}

pub fn router(state: Arc<ServeState>) -> Router {
    Router::new().fallback(move |method: Method, uri: Uri| respond(state.clone(), method, uri))
}

pub async fn serve(state: ServeState, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(Arc::new(state))).await
}
