use std::io::{Seek, SeekFrom, Write};

pub const WAV_HEADER_LEN: usize = 44;

/// `round_half_away_from_zero(s * 32767)` after clamping to [-1, 1].
#[inline]
pub fn quantize(s: f32) -> i16 {
    (f64::from(s).clamp(-1.0, 1.0) * 32767.0).round() as i16
}

/// Interleaved little-endian 16-bit PCM.
pub fn encode_pcm16(frames: &[[f32; 2]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(frames.len() * 4);
    for f in frames {
        out.extend_from_slice(&quantize(f[0]).to_le_bytes());
        out.extend_from_slice(&quantize(f[1]).to_le_bytes());
    }
    out
}

fn header(sample_rate: u32, data_len: u32) -> [u8; WAV_HEADER_LEN] {
    let mut h = [0u8; WAV_HEADER_LEN];
    let channels: u16 = 2;
    let bits: u16 = 16;
    let block_align = channels * bits / 8;
    h[0..4].copy_from_slice(b"RIFF");
    h[4..8].copy_from_slice(&(36 + data_len).to_le_bytes());
    h[8..12].copy_from_slice(b"WAVE");
    h[12..16].copy_from_slice(b"fmt ");
    h[16..20].copy_from_slice(&16u32.to_le_bytes());
    h[20..22].copy_from_slice(&1u16.to_le_bytes());
    h[22..24].copy_from_slice(&channels.to_le_bytes());
    h[24..28].copy_from_slice(&sample_rate.to_le_bytes());
    h[28..32].copy_from_slice(&(sample_rate * u32::from(block_align)).to_le_bytes());
    h[32..34].copy_from_slice(&block_align.to_le_bytes());
    h[34..36].copy_from_slice(&bits.to_le_bytes());
    h[36..40].copy_from_slice(b"data");
    h[40..44].copy_from_slice(&data_len.to_le_bytes());
    h
}

/// A complete stereo 16-bit WAV file in memory.
pub fn wav_bytes(frames: &[[f32; 2]], sample_rate: u32) -> Vec<u8> {
    let data = encode_pcm16(frames);
    let mut out = header(sample_rate, data.len() as u32).to_vec();
    out.extend_from_slice(&data);
    out
}

/// Streams blocks into a stereo 16-bit PCM WAV, patching the sizes on
/// [`WavWriter::finish`].
pub struct WavWriter<W: Write + Seek> {
    inner: W,
    sample_rate: u32,
    data_len: u32,
}

impl<W: Write + Seek> WavWriter<W> {
    pub fn new(mut inner: W, sample_rate: u32) -> std::io::Result<Self> {
        inner.write_all(&header(sample_rate, 0))?;
        Ok(WavWriter {
            inner,
            sample_rate,
            data_len: 0,
        })
    }

    pub fn write_frames(&mut self, frames: &[[f32; 2]]) -> std::io::Result<()> {
        let bytes = encode_pcm16(frames);
        self.inner.write_all(&bytes)?;
        self.data_len += bytes.len() as u32;
        Ok(())
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.inner.seek(SeekFrom::Start(0))?;
        self.inner
            .write_all(&header(self.sample_rate, self.data_len))?;
        self.inner.seek(SeekFrom::End(0))?;
        self.inner.flush()?;
        Ok(self.inner)
    }
}
