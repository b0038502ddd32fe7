use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;
use url::Url;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FetchPolicy {
    #[default]
    OfflineOnly,
    FetchIfMissing,
}

#[derive(Debug, Clone)]
pub struct FetcherConfig {
    pub corpus_dir: PathBuf,
    pub policy: FetchPolicy,
    /// Minimum spacing between two requests to the same host.
    pub delay: Duration,
    pub timeout: Duration,
    pub user_agent: String,
}

impl FetcherConfig {
    pub fn offline(corpus_dir: impl Into<PathBuf>) -> Self {
        Self {
            corpus_dir: corpus_dir.into(),
            policy: FetchPolicy::OfflineOnly,
            delay: Duration::from_secs(2),
            timeout: Duration::from_secs(30),
            user_agent: concat!("patglass/", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("{0} is not in the corpus and fetching is disabled")]
    NotCached(String),
    #[error("request for {url} failed: {reason}")]
    Http { url: String, reason: String },
    #[error(transparent)]
    Local(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub html: String,
    pub from_cache: bool,
}

/// Serves patent pages from the corpus directory, optionally downloading and
/// caching pages that are not there yet.
#[derive(Debug)]
pub struct Fetcher {
    config: FetcherConfig,
    agent: ureq::Agent,
    last_request: Mutex<HashMap<String, Instant>>,
}

/// Rejects anything that is not an absolute http(s) URL with a host.
pub fn validate_url(raw: &str) -> Result<Url> {
    let bad = |reason: &str| Error::BadUrl {
        url: raw.to_string(),
        reason: reason.to_string(),
    };
    let url = Url::parse(raw.trim()).map_err(|e| bad(&e.to_string()))?;
    if !matches!(url.scheme(), "http" | "https") {
        return Err(bad("scheme must be http or https"));
    }
    if url.host_str().map_or(true, str::is_empty) {
        return Err(bad("missing host"));
    }
    Ok(url)
}

/// File name of a URL's cached page: hex SHA-256 of the normalized URL.
pub fn cache_key(url: &Url) -> String {
    let digest = Sha256::digest(url.as_str().as_bytes());
    format!("{}.html", hex::encode(digest))
}

impl Fetcher {
    pub fn new(config: FetcherConfig) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout(config.timeout)
            .user_agent(&config.user_agent)
            .build();
        Self {
            config,
            agent,
            last_request: Mutex::new(HashMap::new()),
        }
    }

    pub fn cache_path(&self, url: &Url) -> PathBuf {
        self.config.corpus_dir.join(cache_key(url))
    }

    pub fn fetch_or_load(&self, raw_url: &str) -> std::result::Result<Fetched, FetchError> {
        let url = validate_url(raw_url)?;
        let path = self.cache_path(&url);
        if path.is_file() {
            let html = read_lossy(&path)?;
            return Ok(Fetched {
                html,
                from_cache: true,
            });
        }
        if self.config.policy == FetchPolicy::OfflineOnly {
            return Err(FetchError::NotCached(raw_url.to_string()));
        }
        self.wait_turn(url.host_str().unwrap_or_default());
        let html = self.download(&url)?;
        store_atomically(&self.config.corpus_dir, &path, html.as_bytes())?;
        Ok(Fetched {
            html,
            from_cache: false,
        })
    }

    fn download(&self, url: &Url) -> std::result::Result<String, FetchError> {
        let http = |reason: String| FetchError::Http {
            url: url.to_string(),
            reason,
        };
        let response = self
            .agent
            .get(url.as_str())
            .call()
            .map_err(|e| http(e.to_string()))?;
        let mut body = Vec::new();
        response
            .into_reader()
            .take(64 * 1024 * 1024)
            .read_to_end(&mut body)
            .map_err(|e| http(e.to_string()))?;
        Ok(String::from_utf8_lossy(&body).into_owned())
    }

    /// Blocks until this host's next request slot. Slots are reserved under the
    /// lock, so concurrent workers hitting one host are spaced by `delay`.
    fn wait_turn(&self, host: &str) {
        let wait = {
            let mut last = self.last_request.lock().expect("rate limiter poisoned");
            let now = Instant::now();
            let slot = match last.get(host) {
                Some(prev) => (*prev + self.config.delay).max(now),
                None => now,
            };
            last.insert(host.to_string(), slot);
            slot.saturating_duration_since(now)
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}

fn read_lossy(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => String::from_utf8_lossy(e.as_bytes()).into_owned(),
    })
}

fn store_atomically(dir: &Path, path: &Path, bytes: &[u8]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension("html.part");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Write};
    use std::net::TcpListener;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    /// Minimal HTTP server answering every request with `body`.
    fn serve(body: &'static str) -> (String, Arc<AtomicUsize>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let hits = Arc::new(AtomicUsize::new(0));
        let counter = hits.clone();
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                let mut stream = stream.unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut line = String::new();
                while reader.read_line(&mut line).unwrap() > 0 {
                    if line == "\r\n" {
                        break;
                    }
                    line.clear();
                }
                counter.fetch_add(1, Ordering::SeqCst);
                let status = if body.is_empty() { "404 Not Found" } else { "200 OK" };
                write!(
                    stream,
                    "HTTP/1.1 {status}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                )
                .unwrap();
            }
        });
        (format!("http://{addr}"), hits)
    }

    fn config(dir: &Path, policy: FetchPolicy) -> FetcherConfig {
        FetcherConfig {
            policy,
            delay: Duration::from_millis(0),
            timeout: Duration::from_secs(5),
            ..FetcherConfig::offline(dir)
        }
    }

    #[test]
    fn malformed_urls_are_rejected() {
        for raw in ["not a url", "ftp://example.com/x", "file:///etc/passwd", "http://"] {
            assert!(validate_url(raw).is_err(), "{raw} accepted");
        }
        assert!(validate_url("https://patents.google.com/patent/US1/en").is_ok());
    }

    #[test]
    fn cache_key_is_filesystem_safe() {
        let url = validate_url("https://patents.google.com/patent/US11485676B2/en").unwrap();
        let key = cache_key(&url);
        assert_eq!(key.len(), 64 + ".html".len());
        assert!(key.trim_end_matches(".html").bytes().all(|b| b.is_ascii_hexdigit()));
    }

    #[test]
    fn offline_cache_hit_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let fetcher = Fetcher::new(config(dir.path(), FetchPolicy::OfflineOnly));
        let url = "https://patents.google.com/patent/US1/en";
        assert!(matches!(
            fetcher.fetch_or_load(url),
            Err(FetchError::NotCached(_))
        ));
        let path = fetcher.cache_path(&validate_url(url).unwrap());
        fs::write(&path, "<html>cached</html>").unwrap();
        let got = fetcher.fetch_or_load(url).unwrap();
        assert_eq!(got.html, "<html>cached</html>");
        assert!(got.from_cache);
    }

    #[test]
    fn fetch_if_missing_caches_then_serves_from_cache() {
        let (base, hits) = serve("<html><body>page</body></html>");
        let dir = tempfile::tempdir().unwrap();
        let fetcher = Fetcher::new(config(dir.path(), FetchPolicy::FetchIfMissing));
        let url = format!("{base}/patent/US2/en");
        let first = fetcher.fetch_or_load(&url).unwrap();
        assert!(!first.from_cache);
        let second = fetcher.fetch_or_load(&url).unwrap();
        assert!(second.from_cache);
        assert_eq!(first.html.as_bytes(), second.html.as_bytes());
        assert_eq!(hits.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn http_errors_are_reported() {
        let (base, _) = serve("");
        let dir = tempfile::tempdir().unwrap();
        let fetcher = Fetcher::new(config(dir.path(), FetchPolicy::FetchIfMissing));
        let err = fetcher.fetch_or_load(&format!("{base}/missing")).unwrap_err();
        assert!(matches!(err, FetchError::Http { .. }));
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn requests_to_one_host_are_spaced() {
        let (base, _) = serve("ok");
        let dir = tempfile::tempdir().unwrap();
        let fetcher = Fetcher::new(FetcherConfig {
            delay: Duration::from_millis(150),
            ..config(dir.path(), FetchPolicy::FetchIfMissing)
        });
        let start = Instant::now();
        for i in 0..3 {
            fetcher.fetch_or_load(&format!("{base}/p{i}")).unwrap();
        }
        assert!(start.elapsed() >= Duration::from_millis(300));
    }
}
