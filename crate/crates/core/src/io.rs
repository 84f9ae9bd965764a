//! File formats: binary and CSV traces, packed bitstreams.
//!
//! Binary trace: `CTRC`, u32 version, f64 dt_ns, u64 count, then `count`
//! f64 samples. Bitstream: `BITS`, u32 version, u64 length in bits, then the
//! packed MSB-first bytes. All integers and floats are little-endian.

use std::fmt::Write as _;

use crate::bits::BitStream;
use crate::error::{Error, Result};
use crate::waveform::Waveform;

pub const TRACE_MAGIC: &[u8; 4] = b"CTRC";
pub const BITS_MAGIC: &[u8; 4] = b"BITS";
pub const FORMAT_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "t_ns,value";

const HEADER_LEN: usize = 4 + 4 + 8 + 8;
const BITS_HEADER_LEN: usize = 4 + 4 + 8;

pub fn trace_to_bytes(w: &Waveform) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * w.len());
    out.extend_from_slice(TRACE_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&w.dt_ns.to_le_bytes());
    out.extend_from_slice(&(w.len() as u64).to_le_bytes());
    for v in &w.samples {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(Error::Format(format!("{} file is truncated", self.what)));
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
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

    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(Error::Format(format!("not a {} file (bad magic)", self.what)));
        }
        let version = self.u32()?;
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported {} version {version}", self.what)));
        }
        Ok(())
    }
}

pub fn trace_from_bytes(buf: &[u8]) -> Result<Waveform> {
    let mut r = Reader { buf, what: "trace" };
    r.header(TRACE_MAGIC)?;
    let dt = r.f64()?;
    let count = r.u64()?;
    let expected = count.checked_mul(8).filter(|&n| n == r.buf.len() as u64);
    if expected.is_none() {
        return Err(Error::Format(format!(
            "trace declares {count} samples but carries {} payload bytes",
            r.buf.len()
        )));
    }
    let samples = (0..count).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    Waveform::new(dt, samples).map_err(|e| Error::Format(e.to_string()))
}

/// `t_ns,value` rows with 17 significant digits, so reading back is exact.
pub fn trace_to_csv(w: &Waveform) -> String {
    let mut out = String::with_capacity(48 * (w.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (k, v) in w.samples.iter().enumerate() {
        let _ = writeln!(out, "{:.16e},{:.16e}", w.time_ns(k), v);
    }
    out
}

/// Reads a CSV trace. The step is recovered from the first two time stamps,
/// so at least two rows are required.
pub fn trace_from_csv(text: &str) -> Result<Waveform> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::Format(format!("CSV trace must start with `{CSV_HEADER}`"))),
    }
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (row, line) in lines.enumerate() {
        let parsed = line.split_once(',').and_then(|(t, v)| {
            let t: f64 = t.trim().parse().ok()?;
            let v: f64 = v.trim().parse().ok()?;
            Some((t, v))
        });
        let (t, v) = parsed.ok_or_else(|| Error::Format(format!("bad CSV row {}: `{line}`", row + 2)))?;
        times.push(t);
        samples.push(v);
    }
    if times.len() < 2 {
        return Err(Error::Format("CSV trace needs at least two rows to fix the step".into()));
    }
    let dt = times[1] - times[0];
    Waveform::new(dt, samples).map_err(|e| Error::Format(e.to_string()))
}

/// Binary if the data starts with the trace magic, CSV otherwise.
pub fn trace_from_any(buf: &[u8]) -> Result<Waveform> {
    if buf.starts_with(TRACE_MAGIC) {
        trace_from_bytes(buf)
    } else {
        let text = std::str::from_utf8(buf).map_err(|_| Error::Format("trace is neither CTRC nor UTF-8 CSV".into()))?;
        trace_from_csv(text)
    }
}

pub fn bits_to_bytes(b: &BitStream) -> Vec<u8> {
    let mut out = Vec::with_capacity(BITS_HEADER_LEN + b.as_bytes().len());
    out.extend_from_slice(BITS_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(b.len() as u64).to_le_bytes());
    out.extend_from_slice(b.as_bytes());
    out
}

pub fn bits_from_bytes(buf: &[u8]) -> Result<BitStream> {
    let mut r = Reader { buf, what: "bitstream" };
    r.header(BITS_MAGIC)?;
    let len = r.u64()?;
    let len = usize::try_from(len).map_err(|_| Error::Format("bitstream too long".into()))?;
    if r.buf.len() != len.div_ceil(8) {
        return Err(Error::Format(format!(
            "bitstream declares {len} bits but carries {} bytes",
            r.buf.len()
        )));
    }
    BitStream::from_packed(r.buf.to_vec(), len).map_err(|e| Error::Format(e.to_string()))
}

/// `bit,t_ns,value` rows: one per bit, stamped at the bit start.
pub fn bits_to_csv(b: &BitStream, bitrate_gbps: f64) -> String {
    let mut out = String::from("bit,t_ns,value\n");
    for (k, v) in b.iter().enumerate() {
        let _ = writeln!(out, "{k},{:.6},{}", k as f64 / bitrate_gbps, v as u8);
    }
    out
}
