//! Deterministic offline mock endpoint speaking just enough of the
//! chat-completions wire format for tests and dry runs. Every candidate
//! echoes the prompt text, so output content is a pure function of the
//! request.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

#[derive(Debug, Clone, Default)]
pub struct MockBehavior {
    /// Respond 500 to this many requests before behaving.
    pub fail_first: usize,
    /// Respond 500 to everything.
    pub always_fail: bool,
    /// Per-request pseudo-random delay in 0..max, keyed by request index.
    pub delay_ms_max: u64,
}

pub struct MockServer {
    addr: SocketAddr,
    requests: Arc<AtomicUsize>,
    shutdown: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    pub fn start(behavior: MockBehavior) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let requests = Arc::new(AtomicUsize::new(0));
        let shutdown = Arc::new(AtomicBool::new(false));
        let handle = {
            let requests = Arc::clone(&requests);
            let shutdown = Arc::clone(&shutdown);
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if shutdown.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let behavior = behavior.clone();
                    let requests = Arc::clone(&requests);
                    std::thread::spawn(move || {
                        let _ = handle_connection(stream, &behavior, &requests);
                    });
                }
            })
        };
        Ok(Self {
            addr,
            requests,
            shutdown,
            handle: Some(handle),
        })
    }

    /// Base URL to hand to an [`crate::EndpointConfig`].
    pub fn base_url(&self) -> String {
        format!("http://{}/v1", self.addr)
    }

    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        // unblock the accept loop
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

fn handle_connection(
    stream: TcpStream,
    behavior: &MockBehavior,
    requests: &AtomicUsize,
) -> std::io::Result<()> {
    stream.set_read_timeout(Some(Duration::from_secs(10)))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some(value) = line
            .to_ascii_lowercase()
            .strip_prefix("content-length:")
            .map(|v| v.trim().to_string())
        {
            content_length = value.parse().unwrap_or(0);
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    let index = requests.fetch_add(1, Ordering::SeqCst);

    if behavior.delay_ms_max > 0 {
        // splitmix-style scramble keyed by arrival index
        let mut z = (index as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        std::thread::sleep(Duration::from_millis(z % behavior.delay_ms_max));
    }

    let mut stream = stream;
    let fail = behavior.always_fail || index < behavior.fail_first;
    if fail || !request_line.starts_with("POST") || !request_line.contains("/chat/completions") {
        let status = if fail {
            "HTTP/1.1 500 Internal Server Error"
        } else {
            "HTTP/1.1 404 Not Found"
        };
        let body = b"{\"error\":\"mock failure\"}";
        write!(
            stream,
            "{status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
            body.len()
        )?;
        stream.write_all(body)?;
        return Ok(());
    }

    let parsed: serde_json::Value = serde_json::from_slice(&body).unwrap_or_default();
    let n = parsed["n"].as_u64().unwrap_or(1).max(1);
    let model = parsed["model"].as_str().unwrap_or("mock").to_string();
    let prompt = extract_prompt(&parsed);
    let choices: Vec<serde_json::Value> = (0..n)
        .map(|i| {
            serde_json::json!({
                "index": i,
                "message": {"role": "assistant", "content": prompt},
                "finish_reason": "stop"
            })
        })
        .collect();
    let response = serde_json::json!({
        "id": format!("mock-{index}"),
        "object": "chat.completion",
        "model": model,
        "choices": choices,
    });
    let body = serde_json::to_vec(&response)?;
    write!(
        stream,
        "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    )?;
    stream.write_all(&body)?;
    Ok(())
}

/// The concatenated text parts of the first message.
fn extract_prompt(body: &serde_json::Value) -> String {
    let Some(content) = body["messages"][0]["content"].as_array() else {
        return body["messages"][0]["content"].as_str().unwrap_or("").to_string();
    };
    content
        .iter()
        .filter_map(|part| {
            if part["type"].as_str() == Some("text") {
                part["text"].as_str()
            } else {
                None
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}
