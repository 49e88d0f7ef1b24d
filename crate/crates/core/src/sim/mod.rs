//! Multi-server execution: an in-process simulator with exact byte
//! accounting, a framed TCP transport, and a communication benchmark.

mod bench;
mod dbfile;
mod frame;
mod inprocess;
mod net;

pub use bench::{bench, lower_bound_bits, BenchRow, BenchTable};
pub use dbfile::{read_database, write_database};
pub use frame::{codes, ConfigInfo, Frame, FrameError, MsgType, HEADER_LEN, MAGIC, MAX_PAYLOAD};
pub use inprocess::{run_inprocess, run_inprocess_with, InprocessRun, RunOptions};
pub use net::{
    client_retrieve, fetch_config, parse_endpoint, serve, spawn_server, ClientOptions,
    ServerHandle, ServerNode,
};

use std::io;
use std::time::Duration;

use thiserror::Error;

use crate::foasc::FoascError;
use crate::protocols::ProtocolError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Foasc(#[from] FoascError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("payload size varied with the database for n = {0}")]
    PayloadVaries(usize),
    #[error("database file: {0}")]
    DbFormat(String),
    #[error("server {server} ({endpoint}) timed out")]
    Timeout { server: usize, endpoint: String },
    #[error("server {server} ({endpoint}) unreachable: {reason}")]
    Unreachable {
        server: usize,
        endpoint: String,
        reason: String,
    },
    #[error("server {server} reports a different parameter digest")]
    ParamDigestMismatch { server: usize },
    #[error("server {server} returned error {code}: {message}")]
    Remote {
        server: usize,
        code: u8,
        message: String,
    },
    #[error("unexpected {0:?} frame")]
    Unexpected(MsgType),
    #[error("expected {expected} endpoints, got {got}")]
    EndpointCount { expected: usize, got: usize },
    #[error("invalid endpoint {0:?}")]
    BadEndpoint(String),
    #[error("retrieved {got} but x_i = {expected}")]
    WrongBit { expected: bool, got: bool },
}

/// Byte counts for one server in one retrieval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exchange {
    pub server: usize,
    pub query_payload: usize,
    pub answer_payload: usize,
    /// Header bytes of the QUERY and ANSWER frames.
    pub framing: usize,
    /// HELLO and CONFIG frames, zero in process.
    pub handshake: usize,
    pub elapsed: Duration,
}

/// Everything a retrieval put on the wire; `aux` never leaves the client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub protocol: String,
    pub exchanges: Vec<Exchange>,
    pub client_time: Duration,
}

impl Transcript {
    pub fn payload_bytes(&self) -> usize {
        self.exchanges
            .iter()
            .map(|e| e.query_payload + e.answer_payload)
            .sum()
    }

    pub fn framing_bytes(&self) -> usize {
        self.exchanges.iter().map(|e| e.framing + e.handshake).sum()
    }

    /// Payload bytes per server, ignoring timing.
    pub fn payload_profile(&self) -> Vec<(usize, usize, usize)> {
        self.exchanges
            .iter()
            .map(|e| (e.server, e.query_payload, e.answer_payload))
            .collect()
    }
}
