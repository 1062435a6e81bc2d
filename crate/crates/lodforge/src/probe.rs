//! HTTP link prober.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use lodforge_core::audit::links::{LinkProber, ProbeOutcome};

/// Probes with HEAD, retrying with GET when the server refuses HEAD.
#[derive(Debug, Clone)]
pub struct HttpProber {
    pub workers: usize,
    pub timeout: Duration,
}

impl Default for HttpProber {
    fn default() -> Self {
        HttpProber { workers: 4, timeout: Duration::from_secs(10) }
    }
}

impl HttpProber {
    fn agent(&self) -> ureq::Agent {
        ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .max_redirects(0)
            .max_redirects_will_error(false)
            .build()
            .into()
    }

    fn probe_one(agent: &ureq::Agent, url: &str) -> ProbeOutcome {
        let head = agent.head(url).call();
        let result = match head {
            Ok(r) if r.status().as_u16() == 405 || r.status().as_u16() == 501 => agent.get(url).call(),
            other => other,
        };
        match result {
            Ok(r) => ProbeOutcome::status(url, r.status().as_u16()),
            Err(e) => ProbeOutcome::failed(url, e.to_string()),
        }
    }
}

impl LinkProber for HttpProber {
    fn probe_all(&self, urls: &[String]) -> Vec<ProbeOutcome> {
        let agent = self.agent();
        let next = AtomicUsize::new(0);
        let mut results: Vec<(usize, ProbeOutcome)> = std::thread::scope(|scope| {
            let workers: Vec<_> = (0..self.workers.clamp(1, urls.len().max(1)))
                .map(|_| {
                    scope.spawn(|| {
                        let mut done = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::SeqCst);
                            let Some(url) = urls.get(i) else { break };
                            done.push((i, Self::probe_one(&agent, url)));
                        }
                        done
                    })
                })
                .collect();
            workers.into_iter().flat_map(|w| w.join().expect("probe worker panicked")).collect()
        });
        results.sort_by_key(|(i, _)| *i);
        results.into_iter().map(|(_, o)| o).collect()
    }
}
