use std::io::{self, ErrorKind};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use super::{
    codes, ConfigInfo, Exchange, Frame, FrameError, MsgType, SimError, Transcript, HEADER_LEN,
};
use crate::foasc::{Database, FoascInstance, RingVec};

/// One server: its position, the public instance and its copy of the
/// database. It never learns `i` or `aux`.
#[derive(Debug, Clone)]
pub struct ServerNode {
    pub server_id: usize,
    pub instance: FoascInstance,
    pub database: Arc<Database>,
}

impl ServerNode {
    pub fn new(server_id: usize, instance: FoascInstance, database: Arc<Database>) -> Self {
        Self {
            server_id,
            instance,
            database,
        }
    }

    pub fn config(&self) -> ConfigInfo {
        ConfigInfo {
            protocol: self.instance.protocol().to_string(),
            digest: self.instance.digest(),
            server_id: self.server_id as u32,
        }
    }

    /// Stateless reply to a single frame.
    pub fn handle(&self, frame: &Frame) -> Frame {
        match frame.kind {
            MsgType::Hello => Frame::new(MsgType::Config, self.config().encode()),
            MsgType::Config => match ConfigInfo::decode(&frame.payload) {
                Some(c) if c.digest == self.instance.digest() => {
                    Frame::new(MsgType::Config, self.config().encode())
                }
                Some(_) => Frame::error(codes::PARAM_MISMATCH, "parameter digest differs"),
                None => Frame::error(codes::MALFORMED, "malformed CONFIG payload"),
            },
            MsgType::Query => match self.instance.answer_bytes(&self.database, &frame.payload) {
                Ok(a) => Frame::new(MsgType::Answer, a),
                Err(e) => Frame::error(codes::MALFORMED, &e.to_string()),
            },
            MsgType::Answer | MsgType::Error => {
                Frame::error(codes::UNEXPECTED, "servers accept HELLO, CONFIG and QUERY")
            }
        }
    }
}

fn handle_connection(node: &ServerNode, mut stream: TcpStream) {
    let _ = stream.set_nodelay(true);
    loop {
        let reply = match Frame::read_from(&mut stream) {
            Ok(frame) => node.handle(&frame),
            Err(FrameError::UnknownType(t)) => {
                Frame::error(codes::UNKNOWN_TYPE, &format!("unknown type 0x{t:02x}"))
            }
            Err(FrameError::Io(_)) => return,
            Err(e) => {
                let _ = Frame::error(codes::MALFORMED, &e.to_string()).write_to(&mut stream);
                return;
            }
        };
        if reply.write_to(&mut stream).is_err() {
            return;
        }
    }
}

/// Accepts connections until `stop` is set, one thread per connection.
pub fn serve(
    node: Arc<ServerNode>,
    listener: TcpListener,
    stop: Arc<AtomicBool>,
) -> io::Result<()> {
    for stream in listener.incoming() {
        if stop.load(Ordering::SeqCst) {
            break;
        }
        match stream {
            Ok(s) => {
                let node = Arc::clone(&node);
                thread::spawn(move || handle_connection(&node, s));
            }
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// A server running on a background thread.
#[derive(Debug)]
pub struct ServerHandle {
    pub addr: SocketAddr,
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<io::Result<()>>>,
}

impl ServerHandle {
    pub fn endpoint(&self) -> String {
        self.addr.to_string()
    }

    pub fn shutdown(&mut self) {
        if let Some(t) = self.thread.take() {
            self.stop.store(true, Ordering::SeqCst);
            let _ = TcpStream::connect(self.addr);
            let _ = t.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

pub fn spawn_server(node: ServerNode, bind: &str) -> io::Result<ServerHandle> {
    let listener = TcpListener::bind(bind)?;
    let addr = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&stop);
    let node = Arc::new(node);
    let thread = thread::spawn(move || serve(node, listener, flag));
    Ok(ServerHandle {
        addr,
        stop,
        thread: Some(thread),
    })
}

/// `:port` means loopback.
pub fn parse_endpoint(s: &str) -> Result<String, SimError> {
    let s = s.trim();
    let full = if s.starts_with(':') {
        format!("127.0.0.1{s}")
    } else {
        s.to_string()
    };
    match full.rsplit_once(':') {
        Some((host, port)) if !host.is_empty() && port.parse::<u16>().is_ok() => Ok(full),
        _ => Err(SimError::BadEndpoint(s.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClientOptions {
    pub timeout: Duration,
}

impl Default for ClientOptions {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(5),
        }
    }
}

fn io_error(server: usize, endpoint: &str, e: io::Error) -> SimError {
    match e.kind() {
        ErrorKind::TimedOut | ErrorKind::WouldBlock => SimError::Timeout {
            server,
            endpoint: endpoint.to_string(),
        },
        _ => SimError::Unreachable {
            server,
            endpoint: endpoint.to_string(),
            reason: e.to_string(),
        },
    }
}

fn frame_error(server: usize, endpoint: &str, e: FrameError) -> SimError {
    match e {
        FrameError::Io(io) => io_error(server, endpoint, io),
        other => SimError::Frame(other),
    }
}

fn expect(server: usize, frame: Frame, kind: MsgType) -> Result<Frame, SimError> {
    if let Some((code, message)) = frame.error_parts() {
        return Err(SimError::Remote {
            server,
            code,
            message,
        });
    }
    if frame.kind != kind {
        return Err(SimError::Unexpected(frame.kind));
    }
    Ok(frame)
}

fn exchange(
    inst: &FoascInstance,
    server: usize,
    endpoint: &str,
    query: Vec<u8>,
    options: &ClientOptions,
) -> Result<(Exchange, RingVec), SimError> {
    let addr = endpoint
        .to_socket_addrs()
        .map_err(|e| io_error(server, endpoint, e))?
        .next()
        .ok_or_else(|| SimError::BadEndpoint(endpoint.to_string()))?;
    let mut stream = TcpStream::connect_timeout(&addr, options.timeout)
        .map_err(|e| io_error(server, endpoint, e))?;
    stream.set_read_timeout(Some(options.timeout))?;
    stream.set_write_timeout(Some(options.timeout))?;
    let _ = stream.set_nodelay(true);
    let mut roundtrip = |frame: Frame| -> Result<Frame, SimError> {
        frame
            .write_to(&mut stream)
            .map_err(|e| io_error(server, endpoint, e))?;
        Frame::read_from(&mut stream).map_err(|e| frame_error(server, endpoint, e))
    };

    let hello = Frame::new(MsgType::Hello, Vec::new());
    let config = expect(server, roundtrip(hello.clone())?, MsgType::Config)?;
    let info = ConfigInfo::decode(&config.payload).ok_or(SimError::Unexpected(MsgType::Config))?;
    if info.digest != inst.digest() || info.protocol != inst.protocol() {
        return Err(SimError::ParamDigestMismatch { server });
    }
    let handshake = hello.wire_len() + config.wire_len();

    let query_payload = query.len();
    let t0 = Instant::now();
    let reply = expect(
        server,
        roundtrip(Frame::new(MsgType::Query, query))?,
        MsgType::Answer,
    )?;
    let elapsed = t0.elapsed();
    let answer = RingVec(inst.ring_codec().decode(&reply.payload)?);
    Ok((
        Exchange {
            server,
            query_payload,
            answer_payload: reply.payload.len(),
            framing: 2 * HEADER_LEN,
            handshake,
            elapsed,
        },
        answer,
    ))
}

/// HELLO round trip: the server's protocol id, digest and position.
pub fn fetch_config(
    server: usize,
    endpoint: &str,
    options: &ClientOptions,
) -> Result<ConfigInfo, SimError> {
    let addr = endpoint
        .to_socket_addrs()
        .map_err(|e| io_error(server, endpoint, e))?
        .next()
        .ok_or_else(|| SimError::BadEndpoint(endpoint.to_string()))?;
    let mut stream = TcpStream::connect_timeout(&addr, options.timeout)
        .map_err(|e| io_error(server, endpoint, e))?;
    stream.set_read_timeout(Some(options.timeout))?;
    stream.set_write_timeout(Some(options.timeout))?;
    Frame::new(MsgType::Hello, Vec::new())
        .write_to(&mut stream)
        .map_err(|e| io_error(server, endpoint, e))?;
    let reply = Frame::read_from(&mut stream).map_err(|e| frame_error(server, endpoint, e))?;
    let reply = expect(server, reply, MsgType::Config)?;
    ConfigInfo::decode(&reply.payload).ok_or(SimError::Unexpected(MsgType::Config))
}

/// Sends each `q_j` to endpoint `j` concurrently, then reconstructs.
pub fn client_retrieve(
    endpoints: &[String],
    inst: &FoascInstance,
    i: usize,
    seed: u64,
    options: &ClientOptions,
) -> Result<(bool, Transcript), SimError> {
    if endpoints.len() != inst.k() {
        return Err(SimError::EndpointCount {
            expected: inst.k(),
            got: endpoints.len(),
        });
    }
    let start = Instant::now();
    let (queries, aux) = inst.query_gen(i, seed)?;
    let level = inst.level_codec();
    let payloads = queries
        .iter()
        .map(|q| level.to_bytes(&q.0))
        .collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<(Exchange, RingVec), SimError>> = thread::scope(|s| {
        let handles: Vec<_> = endpoints
            .iter()
            .zip(payloads)
            .enumerate()
            .map(|(j, (ep, q))| s.spawn(move || exchange(inst, j, ep, q, options)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("exchange thread panicked"))
            .collect()
    });
    let mut exchanges = Vec::with_capacity(results.len());
    let mut answers = Vec::with_capacity(results.len());
    for r in results {
        let (e, a) = r?;
        exchanges.push(e);
        answers.push(a);
    }
    let bit = inst.reconstruct(&aux, &answers)?;
    Ok((
        bit,
        Transcript {
            protocol: inst.protocol().to_string(),
            exchanges,
            client_time: start.elapsed(),
        },
    ))
}
