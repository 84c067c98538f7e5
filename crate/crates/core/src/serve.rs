//! HTTP front end for [`Api`] on a local socket.

use std::io::Read;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread;

use tiny_http::{Header, Method, Request, Server};

use crate::api::{Api, Response};
use crate::error::{Error, Result};

const MAX_BODY: u64 = 1 << 20;

pub struct ApiServer {
    server: Arc<Server>,
    api: Arc<Api>,
}

impl ApiServer {
    /// Binds `addr`; port 0 picks a free port.
    pub fn bind(addr: &str, api: Api) -> Result<Self> {
        let server = Server::http(addr).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(ApiServer {
            server: Arc::new(server),
            api: Arc::new(api),
        })
    }

    pub fn local_addr(&self) -> Option<SocketAddr> {
        self.server.server_addr().to_ip()
    }

    /// Serves until the process exits. Reads run on `workers` threads;
    /// mutations are serialized by the session lock.
    pub fn run(self, workers: usize) {
        let handles: Vec<_> = (0..workers.max(1))
            .map(|_| {
                let server = Arc::clone(&self.server);
                let api = Arc::clone(&self.api);
                thread::spawn(move || {
                    for req in server.incoming_requests() {
                        respond(&api, req);
                    }
                })
            })
            .collect();
        for h in handles {
            let _ = h.join();
        }
    }

    /// Serves on background threads and returns the address.
    pub fn spawn(self, workers: usize) -> Option<SocketAddr> {
        let addr = self.local_addr();
        thread::spawn(move || self.run(workers));
        addr
    }
}

fn respond(api: &Api, mut req: Request) {
    let mut body = Vec::new();
    let read = req.as_reader().take(MAX_BODY).read_to_end(&mut body);
    let method = match req.method() {
        Method::Get => "GET",
        Method::Post => "POST",
        Method::Put => "PUT",
        Method::Delete => "DELETE",
        Method::Patch => "PATCH",
        Method::Head => "HEAD",
        _ => "OTHER",
    };
    let resp = match read {
        Ok(_) => api.handle(method, req.url(), &body),
        Err(e) => Response {
            status: 400,
            content_type: "text/plain",
            body: format!("unreadable body: {e}").into_bytes(),
        },
    };
    let header = Header::from_bytes("Content-Type", resp.content_type).expect("static header");
    let out = tiny_http::Response::from_data(resp.body)
        .with_status_code(resp.status)
        .with_header(header);
    let _ = req.respond(out);
}
