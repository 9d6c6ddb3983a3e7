//! Little-endian field encoding shared by the binary formats.

use std::path::Path;

use isoforge_core::Matrix;

use crate::error::{Error, Result};

#[derive(Default)]
pub(crate) struct Writer {
    pub buf: Vec<u8>,
}

impl Writer {
    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.bytes(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }

    pub fn f64(&mut self, v: f64) {
        self.bytes(&v.to_le_bytes());
    }

    pub fn count(&mut self, n: usize) {
        self.u32(u32::try_from(n).expect("counts fit in 32 bits"));
    }

    pub fn matrix(&mut self, m: &Matrix) {
        for &v in m.as_slice() {
            self.f64(v);
        }
    }
}

pub(crate) struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8], path: &'a Path) -> Self {
        Self { data, pos: 0, path }
    }

    pub fn path(&self) -> &'a Path {
        self.path
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let Some(end) = end else {
            return Err(Error::Truncation {
                path: self.path.to_path_buf(),
                expected: (self.pos as u64).saturating_add(n as u64),
                found: self.data.len() as u64,
            });
        };
        let out = &self.data[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        self.array().map(u32::from_le_bytes)
    }

    pub fn u64(&mut self) -> Result<u64> {
        self.array().map(u64::from_le_bytes)
    }

    pub fn f64(&mut self) -> Result<f64> {
        self.array().map(f64::from_le_bytes)
    }

    pub fn count(&mut self) -> Result<usize> {
        Ok(self.u32()? as usize)
    }

    /// A `rows × cols` block of f64 values. The size is checked before
    /// allocating so a corrupt header cannot request gigabytes.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> Result<Matrix> {
        let bytes = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(8))
            .ok_or_else(|| Error::format(self.path, "block size overflows"))?;
        let raw = self.take(bytes)?;
        let data = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(Matrix::from_vec(rows, cols, data)?)
    }

    pub fn expect_magic(&mut self, magic: &[u8]) -> Result<()> {
        let found = self.data.get(..magic.len());
        if found != Some(magic) {
            return Err(Error::format(self.path, format!("bad magic, expected {:?}", String::from_utf8_lossy(magic))));
        }
        self.pos = magic.len();
        Ok(())
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::format(
                self.path,
                format!("{} trailing bytes after the last field", self.data.len() - self.pos),
            ));
        }
        Ok(())
    }
}
