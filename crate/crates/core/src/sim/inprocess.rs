use std::sync::Arc;
use std::time::{Duration, Instant};

use super::{Exchange, Frame, MsgType, ServerNode, SimError, Transcript};
use crate::foasc::{Database, FoascError, FoascInstance, RingVec};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Fail with [`SimError::WrongBit`] unless the result equals `x_i`.
    pub assert_bit: bool,
    /// Feeds answer `order[j]` to the reconstruction in slot `j`.
    pub answer_order: Option<Vec<usize>>,
}

#[derive(Debug)]
pub struct InprocessRun {
    pub outcome: Result<bool, FoascError>,
    pub transcript: Transcript,
    /// Total time spent inside server answer computations.
    pub server_time: Duration,
}

/// One retrieval with every message passed through the wire framing, so
/// byte counts match the TCP transport exactly.
pub fn run_inprocess_with(
    inst: &FoascInstance,
    x: &Database,
    i: usize,
    seed: u64,
    options: &RunOptions,
) -> Result<InprocessRun, SimError> {
    let start = Instant::now();
    let (queries, aux) = inst.query_gen(i, seed)?;
    let level = inst.level_codec();
    let ring = inst.ring_codec();
    let mut exchanges = Vec::with_capacity(queries.len());
    let mut answers = Vec::with_capacity(queries.len());
    let mut server_time = Duration::ZERO;
    let db = Arc::new(x.clone());
    for (j, q) in queries.iter().enumerate() {
        let node = ServerNode::new(j, inst.clone(), Arc::clone(&db));
        let qframe = Frame::new(MsgType::Query, level.to_bytes(&q.0)?).encode();
        let t0 = Instant::now();
        let (received, _) = Frame::decode(&qframe)?;
        let reply = node.handle(&received);
        let elapsed = t0.elapsed();
        server_time += elapsed;
        let aframe = reply.encode();
        let (reply, _) = Frame::decode(&aframe)?;
        if let Some((code, message)) = reply.error_parts() {
            return Err(SimError::Remote {
                server: j,
                code,
                message,
            });
        }
        answers.push(RingVec(ring.decode(&reply.payload)?));
        exchanges.push(Exchange {
            server: j,
            query_payload: qframe.len() - super::HEADER_LEN,
            answer_payload: aframe.len() - super::HEADER_LEN,
            framing: 2 * super::HEADER_LEN,
            handshake: 0,
            elapsed,
        });
    }
    if let Some(order) = &options.answer_order {
        answers = order
            .iter()
            .map(|&j| answers[j % answers.len()].clone())
            .collect();
    }
    let outcome = inst.reconstruct(&aux, &answers);
    let transcript = Transcript {
        protocol: inst.protocol().to_string(),
        exchanges,
        client_time: start.elapsed().saturating_sub(server_time),
    };
    if options.assert_bit {
        if let Ok(bit) = outcome {
            if bit != x.get(i) {
                return Err(SimError::WrongBit {
                    expected: x.get(i),
                    got: bit,
                });
            }
        }
    }
    Ok(InprocessRun {
        outcome,
        transcript,
        server_time,
    })
}

/// Retrieves `x_i` and checks the result.
pub fn run_inprocess(
    inst: &FoascInstance,
    x: &Database,
    i: usize,
    seed: u64,
) -> Result<(bool, Transcript), SimError> {
    let run = run_inprocess_with(
        inst,
        x,
        i,
        seed,
        &RunOptions {
            assert_bit: true,
            answer_order: None,
        },
    )?;
    Ok((run.outcome?, run.transcript))
}
