//! Binary agent container.
//!
//! Layout (little endian): magic `NTNF`, `u32` version, metadata string,
//! board shape, mode, sigma, symmetry tables, tuple definitions, TCL
//! configuration, `f64` weights, touched-flag words, TCL accumulators, and a
//! trailing CRC32 over every preceding byte.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::Symmetry;
use crate::ntuple::network::{NTupleNetwork, NetConfig, NetMode, Sigma};
use crate::ntuple::tcl::{TclConfig, Transfer};

pub const MAGIC: &[u8; 4] = b"NTNF";
pub const FORMAT_VERSION: u32 = 1;

struct CrcWriter<W: Write> {
    inner: W,
    crc: crc32fast::Hasher,
}

impl<W: Write> CrcWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> Result<()> {
        self.crc.update(bytes);
        self.inner.write_all(bytes)?;
        Ok(())
    }
    fn u8(&mut self, v: u8) -> Result<()> {
        self.put(&[v])
    }
    fn u32(&mut self, v: u32) -> Result<()> {
        self.put(&v.to_le_bytes())
    }
    fn u64(&mut self, v: u64) -> Result<()> {
        self.put(&v.to_le_bytes())
    }
    fn f64s(&mut self, v: &[f64]) -> Result<()> {
        self.u64(v.len() as u64)?;
        for x in v {
            self.put(&x.to_le_bytes())?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| Error::Format("unexpected end of data".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self, limit: usize) -> Result<usize> {
        let n = self.u64()? as usize;
        if n > limit {
            return Err(Error::Format(format!("array length {n} exceeds remaining data")));
        }
        Ok(n)
    }
    fn f64s(&mut self) -> Result<Vec<f64>> {
        let n = self.len((self.buf.len() - self.pos) / 8)?;
        (0..n).map(|_| self.f64()).collect()
    }
}

impl NTupleNetwork {
    /// Writes the network in the `NTNF` container format.
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut w = CrcWriter { inner: w, crc: crc32fast::Hasher::new() };
        w.put(MAGIC)?;
        w.u32(FORMAT_VERSION)?;
        w.u32(self.meta().len() as u32)?;
        w.put(self.meta().as_bytes())?;
        w.u32(self.num_cells() as u32)?;
        w.u32(self.alphabet() as u32)?;
        match self.mode() {
            NetMode::Value => {
                w.u8(0)?;
                w.u32(0)?;
            }
            NetMode::Action { n_actions } => {
                w.u8(1)?;
                w.u32(n_actions as u32)?;
            }
        }
        w.u8(match self.sigma() {
            Sigma::Identity => 0,
            Sigma::Tanh => 1,
        })?;
        w.u8(self.use_symmetry() as u8)?;
        w.u32(self.symmetries().len() as u32)?;
        for s in self.symmetries() {
            w.put(&s.cell_src)?;
            w.u32(s.action_map.len() as u32)?;
            for &a in &s.action_map {
                w.put(&a.to_le_bytes())?;
            }
        }
        w.u32(self.num_tuples() as u32)?;
        for t in self.tuples() {
            w.u32(t.len() as u32)?;
            for c in t.cells() {
                w.u8(c as u8)?;
            }
        }
        match self.tcl() {
            None => w.u8(0)?,
            Some(tcl) => {
                w.u8(1)?;
                match tcl.config.transfer {
                    Transfer::Identity => {
                        w.u8(0)?;
                        w.put(&0f64.to_le_bytes())?;
                    }
                    Transfer::Exp { beta } => {
                        w.u8(1)?;
                        w.put(&beta.to_le_bytes())?;
                    }
                }
                w.put(&tcl.config.init.to_le_bytes())?;
            }
        }
        w.f64s(self.weights())?;
        w.u64(self.touched_words().len() as u64)?;
        for &t in self.touched_words() {
            w.u64(t)?;
        }
        if let Some(tcl) = self.tcl() {
            w.f64s(&tcl.net)?;
            w.f64s(&tcl.abs)?;
        }
        let crc = w.crc.finalize();
        w.inner.write_all(&crc.to_le_bytes())?;
        w.inner.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_to(&mut v).expect("writing to memory cannot fail");
        v
    }

    /// Parses a container; the checksum is verified before anything else,
    /// so a damaged or truncated stream never yields a partial network.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(Error::Checksum { stored: 0, computed: crc32fast::hash(bytes) });
        }
        let (payload, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        let computed = crc32fast::hash(payload);
        if stored != computed {
            return Err(Error::Checksum { stored, computed });
        }
        let mut c = Cursor { buf: payload, pos: 0 };
        if c.take(4)? != MAGIC {
            return Err(Error::Format("missing NTNF magic".into()));
        }
        let version = c.u32()?;
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch { found: version, expected: FORMAT_VERSION });
        }
        let meta_len = c.u32()? as usize;
        let meta = String::from_utf8(c.take(meta_len)?.to_vec()).map_err(|_| Error::Format("metadata is not UTF-8".into()))?;
        let num_cells = c.u32()? as usize;
        let alphabet = c.u32()? as usize;
        let mode = match (c.u8()?, c.u32()? as usize) {
            (0, _) => NetMode::Value,
            (1, n_actions) => NetMode::Action { n_actions },
            (m, _) => return Err(Error::Format(format!("unknown mode tag {m}"))),
        };
        let sigma = match c.u8()? {
            0 => Sigma::Identity,
            1 => Sigma::Tanh,
            t => return Err(Error::Format(format!("unknown sigma tag {t}"))),
        };
        let use_symmetry = c.u8()? != 0;
        let n_sym = c.u32()? as usize;
        let mut symmetries = Vec::new();
        for _ in 0..n_sym {
            let cell_src = c.take(num_cells)?.to_vec();
            let n = c.u32()? as usize;
            let action_map = (0..n).map(|_| c.u16()).collect::<Result<Vec<_>>>()?;
            symmetries.push(Symmetry { cell_src, action_map });
        }
        let m = c.u32()? as usize;
        let mut tuples = Vec::new();
        for _ in 0..m {
            let n = c.u32()? as usize;
            tuples.push(c.take(n)?.iter().map(|&x| x as usize).collect());
        }
        let tcl = match c.u8()? {
            0 => None,
            _ => {
                let kind = c.u8()?;
                let beta = c.f64()?;
                let init = c.f64()?;
                let transfer = if kind == 0 { Transfer::Identity } else { Transfer::Exp { beta } };
                Some(TclConfig { transfer, init })
            }
        };
        let mut net = NTupleNetwork::new(NetConfig { tuples, alphabet, num_cells, mode, sigma, symmetries, use_symmetry, tcl })?;
        let weights = c.f64s()?;
        let n_words = c.len((payload.len() - c.pos) / 8)?;
        let touched = (0..n_words).map(|_| c.u64()).collect::<Result<Vec<_>>>()?;
        let tcl_arrays = if tcl.is_some() { Some((c.f64s()?, c.f64s()?)) } else { None };
        if c.pos != payload.len() {
            return Err(Error::Format("trailing bytes after TCL arrays".into()));
        }
        net.restore(weights, touched, tcl_arrays, meta)?;
        Ok(net)
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = File::create(path)?;
        self.write_to(BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameState;
    use crate::games::TicTacToe;
    use crate::ntuple::horizon::{EligibilityHorizon, EligibilityMode};

    fn trained_net() -> NTupleNetwork {
        let mut net =
            NTupleNetwork::for_game(&TicTacToe, vec![(0..9).collect(), vec![0, 4, 8]], false, Sigma::Tanh, true, Some(TclConfig::exp(2.7)))
                .unwrap();
        net.set_meta("game=tictactoe\nalgorithm=td-farl");
        let s = TicTacToe.state_from_str("X...O....");
        let mut hz = EligibilityHorizon::new(0, 0.0, EligibilityMode::Et);
        hz.push(net.activation(&s).unwrap());
        net.td_lambda_update(&mut hz, 0.7, 1.0, true, false);
        net
    }

    #[test]
    fn round_trip_is_exact() {
        let net = trained_net();
        let back = NTupleNetwork::from_bytes(&net.to_bytes()).unwrap();
        assert_eq!(back, net);
        let s: GameState = TicTacToe.state_from_str("X...O....");
        assert_eq!(back.value(&s).to_bits(), net.value(&s).to_bits());
    }

    #[test]
    fn truncated_stream_fails_checksum() {
        let bytes = trained_net().to_bytes();
        for cut in [0, 3, 10, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(NTupleNetwork::from_bytes(&bytes[..cut]), Err(Error::Checksum { .. })), "cut {cut}");
        }
    }

    #[test]
    fn flipped_bit_fails_checksum() {
        let mut bytes = trained_net().to_bytes();
        bytes[40] ^= 1;
        assert!(matches!(NTupleNetwork::from_bytes(&bytes), Err(Error::Checksum { .. })));
    }

    #[test]
    fn version_is_checked() {
        let mut bytes = trained_net().to_bytes();
        bytes[4] = 9;
        let n = bytes.len();
        let crc = crc32fast::hash(&bytes[..n - 4]);
        bytes[n - 4..].copy_from_slice(&crc.to_le_bytes());
        assert!(matches!(NTupleNetwork::from_bytes(&bytes), Err(Error::VersionMismatch { found: 9, expected: 1 })));
    }
}
