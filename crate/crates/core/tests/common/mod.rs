//! A scripted chat-completion server on a local port.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

pub const DEMO_ANSWER: &str = "Generated Path: [[5, 5], [26, 9], [25, 23], [20, 20]]";

#[derive(Clone, Debug)]
pub struct Request {
    pub authorization: Option<String>,
    pub body: serde_json::Value,
}

/// Replies to each POST from a queue of `(status, content)` pairs; once the
/// queue is empty every reply is `(200, default_content)`.
pub struct FixtureServer {
    pub base_url: String,
    requests: Arc<Mutex<Vec<Request>>>,
    served: Arc<AtomicUsize>,
}

impl FixtureServer {
    pub fn start(script: Vec<(u16, String)>, default_content: &str) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base_url = format!("http://{}/v1", listener.local_addr().unwrap());
        let requests = Arc::new(Mutex::new(Vec::new()));
        let served = Arc::new(AtomicUsize::new(0));
        let script = Arc::new(Mutex::new(VecDeque::from(script)));
        let default_content = default_content.to_string();
        {
            let (requests, served) = (requests.clone(), served.clone());
            thread::spawn(move || {
                for stream in listener.incoming() {
                    let Ok(stream) = stream else { continue };
                    let (requests, served, script) = (requests.clone(), served.clone(), script.clone());
                    let default_content = default_content.clone();
                    thread::spawn(move || {
                        let Some(req) = read_request(&stream) else { return };
                        requests.lock().unwrap().push(req);
                        served.fetch_add(1, Ordering::SeqCst);
                        let (status, content) =
                            script.lock().unwrap().pop_front().unwrap_or((200, default_content));
                        write_response(stream, status, &content);
                    });
                }
            });
        }
        Self { base_url, requests, served }
    }

    pub fn request_count(&self) -> usize {
        self.served.load(Ordering::SeqCst)
    }

    pub fn requests(&self) -> Vec<Request> {
        self.requests.lock().unwrap().clone()
    }
}

fn read_request(stream: &TcpStream) -> Option<Request> {
    let mut reader = BufReader::new(stream);
    let mut line = String::new();
    reader.read_line(&mut line).ok()?;
    let mut length = 0usize;
    let mut authorization = None;
    loop {
        line.clear();
        reader.read_line(&mut line).ok()?;
        let header = line.trim_end();
        if header.is_empty() {
            break;
        }
        let (name, value) = header.split_once(':')?;
        match name.to_ascii_lowercase().as_str() {
            "content-length" => length = value.trim().parse().ok()?,
            "authorization" => authorization = Some(value.trim().to_string()),
            _ => {}
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body).ok()?;
    Some(Request { authorization, body: serde_json::from_slice(&body).ok()? })
}

fn write_response(mut stream: TcpStream, status: u16, content: &str) {
    let body = if status == 200 {
        serde_json::json!({"choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]}).to_string()
    } else {
        content.to_string()
    };
    let reply = format!(
        "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    let _ = stream.write_all(reply.as_bytes());
    let _ = stream.flush();
}
