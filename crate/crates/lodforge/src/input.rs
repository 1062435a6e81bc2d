//! Opening input files, transparently decompressing gzip.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Wrap `reader`, decompressing when the stream starts with the gzip magic bytes.
pub fn decompressing<R: Read + 'static>(reader: R) -> io::Result<Box<dyn BufRead>> {
    let mut buffered = BufReader::new(reader);
    let head = buffered.fill_buf()?;
    if head.starts_with(&GZIP_MAGIC) {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(buffered))))
    } else {
        Ok(Box::new(buffered))
    }
}

pub fn open(path: &Path) -> io::Result<Box<dyn BufRead>> {
    decompressing(File::open(path)?)
}

/// Whole file as UTF-8 text, decompressed if needed.
pub fn read_text(path: &Path) -> io::Result<String> {
    let mut s = String::new();
    open(path)?.read_to_string(&mut s)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use flate2::write::GzEncoder;
    use flate2::Compression;
    use std::io::Write;

    #[test]
    fn plain_and_gzip() {
        let mut out = String::new();
        decompressing(io::Cursor::new(b"<collection/>".to_vec())).unwrap().read_to_string(&mut out).unwrap();
        assert_eq!(out, "<collection/>");

        let mut enc = GzEncoder::new(Vec::new(), Compression::default());
        enc.write_all(b"<collection/>").unwrap();
        let gz = enc.finish().unwrap();
        let mut out = String::new();
        decompressing(io::Cursor::new(gz)).unwrap().read_to_string(&mut out).unwrap();
        assert_eq!(out, "<collection/>");
    }
}
