//! Scripted HTTP server for exercising the link checker offline.
//!
//! A script has one rule per line: `pattern status [body]`. The pattern is
//! matched against the request path; `*` matches any run of characters.
//! The first matching rule wins and unmatched paths get 404.

use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use regex::Regex;

#[derive(Debug, thiserror::Error)]
pub enum StubError {
    #[error("script line {line}: {message}")]
    Script { line: usize, message: String },
    #[error("cannot bind stub server: {0}")]
    Bind(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
struct Rule {
    pattern: Regex,
    status: u16,
    body: String,
}

fn glob_regex(pattern: &str) -> Regex {
    let body: Vec<String> = pattern.split('*').map(regex::escape).collect();
    Regex::new(&format!("^{}$", body.join(".*"))).expect("escaped glob is a valid regex")
}

fn parse_script(script: &str) -> Result<Vec<Rule>, StubError> {
    let mut rules = Vec::new();
    for (n, line) in script.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| StubError::Script { line: n + 1, message: message.into() };
        let mut parts = line.splitn(3, char::is_whitespace);
        let pattern = parts.next().ok_or_else(|| err("missing pattern"))?;
        let status: u16 = parts
            .next()
            .ok_or_else(|| err("missing status"))?
            .parse()
            .map_err(|_| err("status is not a number"))?;
        if !(100..600).contains(&status) {
            return Err(err("status out of range"));
        }
        let body = parts.next().unwrap_or("").trim().to_owned();
        rules.push(Rule { pattern: glob_regex(pattern), status, body });
    }
    Ok(rules)
}

pub struct StubServer {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    hits: Arc<AtomicUsize>,
    handle: Option<JoinHandle<()>>,
}

impl StubServer {
    pub fn start(script: &str) -> Result<Self, StubError> {
        let rules = Arc::new(parse_script(script)?);
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let hits = Arc::new(AtomicUsize::new(0));
        let (stop2, hits2) = (stop.clone(), hits.clone());
        let handle = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if stop2.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                hits2.fetch_add(1, Ordering::SeqCst);
                let rules = rules.clone();
                std::thread::spawn(move || {
                    let _ = serve(stream, &rules);
                });
            }
        });
        Ok(StubServer { addr, stop, hits, handle: Some(handle) })
    }

    /// `http://127.0.0.1:{port}` without a trailing slash.
    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}/{}", self.base_url(), path.trim_start_matches('/'))
    }

    /// Connections accepted so far.
    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn reason(status: u16) -> &'static str {
    match status {
        200 => "OK",
        301 => "Moved Permanently",
        302 => "Found",
        404 => "Not Found",
        405 => "Method Not Allowed",
        410 => "Gone",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    }
}

fn serve(stream: TcpStream, rules: &[Rule]) -> std::io::Result<()> {
    stream.set_read_timeout(Some(Duration::from_secs(5)))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
            break;
        }
    }
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or("GET");
    let target = parts.next().unwrap_or("/");
    // Absolute-form targets come from clients talking to a proxy.
    let path = match target.split_once("://") {
        Some((_, rest)) => rest.find('/').map_or("/", |i| &rest[i..]),
        None => target,
    };
    let (status, body) = rules
        .iter()
        .find(|r| r.pattern.is_match(path))
        .map_or((404, ""), |r| (r.status, r.body.as_str()));
    let mut out = stream;
    write!(
        out,
        "HTTP/1.1 {status} {}\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        reason(status),
        body.len()
    )?;
    if method != "HEAD" {
        out.write_all(body.as_bytes())?;
    }
    out.flush()
}
