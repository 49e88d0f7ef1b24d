use std::io::{self, Read, Write};

use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"PIR1";
pub const HEADER_LEN: usize = 9;
/// Frames larger than this are refused before allocation.
pub const MAX_PAYLOAD: usize = 64 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum MsgType {
    Query = 0x01,
    Answer = 0x02,
    Error = 0x03,
    Hello = 0x04,
    Config = 0x05,
}

impl MsgType {
    pub fn from_byte(b: u8) -> Option<Self> {
        Some(match b {
            0x01 => MsgType::Query,
            0x02 => MsgType::Answer,
            0x03 => MsgType::Error,
            0x04 => MsgType::Hello,
            0x05 => MsgType::Config,
            _ => return None,
        })
    }
}

/// Codes carried in the first payload byte of an ERROR frame.
pub mod codes {
    pub const UNKNOWN_TYPE: u8 = 1;
    pub const MALFORMED: u8 = 2;
    pub const PARAM_MISMATCH: u8 = 3;
    pub const UNEXPECTED: u8 = 4;
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unknown message type 0x{0:02x}")]
    UnknownType(u8),
    #[error("payload of {0} bytes exceeds limit")]
    TooLarge(usize),
    #[error("frame truncated: need {need} bytes, have {have}")]
    Truncated { need: usize, have: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub kind: MsgType,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(kind: MsgType, payload: Vec<u8>) -> Self {
        Self { kind, payload }
    }

    pub fn error(code: u8, message: &str) -> Self {
        let mut payload = vec![code];
        payload.extend_from_slice(message.as_bytes());
        Self::new(MsgType::Error, payload)
    }

    /// `(code, message)` of an ERROR frame.
    pub fn error_parts(&self) -> Option<(u8, String)> {
        if self.kind != MsgType::Error || self.payload.is_empty() {
            return None;
        }
        Some((
            self.payload[0],
            String::from_utf8_lossy(&self.payload[1..]).into_owned(),
        ))
    }

    pub fn wire_len(&self) -> usize {
        HEADER_LEN + self.payload.len()
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.wire_len());
        out.extend_from_slice(&MAGIC);
        out.push(self.kind as u8);
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Parses one frame from the front of `buf`; returns it with the number
    /// of bytes consumed.
    pub fn decode(buf: &[u8]) -> Result<(Frame, usize), FrameError> {
        if buf.len() < HEADER_LEN {
            return Err(FrameError::Truncated {
                need: HEADER_LEN,
                have: buf.len(),
            });
        }
        let (raw, len) = parse_header(buf[..HEADER_LEN].try_into().expect("header length"))?;
        let end = HEADER_LEN + len;
        if buf.len() < end {
            return Err(FrameError::Truncated {
                need: end,
                have: buf.len(),
            });
        }
        let kind = MsgType::from_byte(raw).ok_or(FrameError::UnknownType(raw))?;
        Ok((Frame::new(kind, buf[HEADER_LEN..end].to_vec()), end))
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Frame, FrameError> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header)?;
        let (raw, len) = parse_header(&header)?;
        let mut payload = vec![0u8; len];
        r.read_exact(&mut payload).map_err(|e| match e.kind() {
            io::ErrorKind::UnexpectedEof => FrameError::Truncated { need: len, have: 0 },
            _ => FrameError::Io(e),
        })?;
        // the payload is consumed first so the stream stays aligned
        let kind = MsgType::from_byte(raw).ok_or(FrameError::UnknownType(raw))?;
        Ok(Frame::new(kind, payload))
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(&self.encode())?;
        w.flush()
    }
}

fn parse_header(h: &[u8; HEADER_LEN]) -> Result<(u8, usize), FrameError> {
    let magic: [u8; 4] = h[..4].try_into().expect("four bytes");
    if magic != MAGIC {
        return Err(FrameError::BadMagic(magic));
    }
    let len = u32::from_le_bytes(h[5..9].try_into().expect("four bytes")) as usize;
    if len > MAX_PAYLOAD {
        return Err(FrameError::TooLarge(len));
    }
    Ok((h[4], len))
}

/// CONFIG payload: protocol id, 32-byte parameter digest, server id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigInfo {
    pub protocol: String,
    pub digest: [u8; 32],
    pub server_id: u32,
}

impl ConfigInfo {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = vec![self.protocol.len() as u8];
        out.extend_from_slice(self.protocol.as_bytes());
        out.extend_from_slice(&self.digest);
        out.extend_from_slice(&self.server_id.to_le_bytes());
        out
    }

    pub fn decode(buf: &[u8]) -> Option<Self> {
        let (&len, rest) = buf.split_first()?;
        let len = len as usize;
        if rest.len() != len + 36 {
            return None;
        }
        let protocol = String::from_utf8(rest[..len].to_vec()).ok()?;
        let digest = rest[len..len + 32].try_into().ok()?;
        let server_id = u32::from_le_bytes(rest[len + 32..].try_into().ok()?);
        Some(Self {
            protocol,
            digest,
            server_id,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kind() -> impl Strategy<Value = MsgType> {
        prop_oneof![
            Just(MsgType::Query),
            Just(MsgType::Answer),
            Just(MsgType::Error),
            Just(MsgType::Hello),
            Just(MsgType::Config),
        ]
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(k in kind(), payload in proptest::collection::vec(any::<u8>(), 0..300)) {
            let f = Frame::new(k, payload);
            let bytes = f.encode();
            let (g, used) = Frame::decode(&bytes).unwrap();
            prop_assert_eq!(used, bytes.len());
            prop_assert_eq!(&g, &f);
            let h = Frame::read_from(&mut bytes.as_slice()).unwrap();
            prop_assert_eq!(h, f);
        }
    }

    #[test]
    fn header_layout() {
        let bytes = Frame::new(MsgType::Answer, vec![7, 8, 9]).encode();
        assert_eq!(
            bytes,
            vec![b'P', b'I', b'R', b'1', 0x02, 3, 0, 0, 0, 7, 8, 9]
        );
    }

    #[test]
    fn unknown_type_is_rejected() {
        let mut bytes = Frame::new(MsgType::Hello, vec![]).encode();
        bytes[4] = 0x09;
        assert!(matches!(
            Frame::decode(&bytes),
            Err(FrameError::UnknownType(9))
        ));
    }

    #[test]
    fn truncation_is_detected() {
        let bytes = Frame::new(MsgType::Query, vec![1, 2, 3, 4]).encode();
        assert!(matches!(
            Frame::decode(&bytes[..bytes.len() - 1]),
            Err(FrameError::Truncated { .. })
        ));
        assert!(matches!(
            Frame::decode(&bytes[..4]),
            Err(FrameError::Truncated { .. })
        ));
    }

    #[test]
    fn config_round_trip() {
        let c = ConfigInfo {
            protocol: "cgks".into(),
            digest: [5; 32],
            server_id: 2,
        };
        assert_eq!(ConfigInfo::decode(&c.encode()), Some(c));
        assert_eq!(ConfigInfo::decode(&[3, b'a']), None);
    }
}
