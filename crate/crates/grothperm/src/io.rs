//! Plain-text emitters: ASCII PGM (P2) images and CSV tables.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};

/// A grayscale image with 8-bit samples, row-major from the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub comments: Vec<String>,
}

impl Pgm {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Invalid(format!("{} pixels for a {width}x{height} image", pixels.len())));
        }
        Ok(Pgm { width, height, pixels, comments: Vec::new() })
    }

    pub fn with_comment(mut self, c: impl Into<String>) -> Self {
        self.comments.push(c.into());
        self
    }

    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "P2")?;
        for c in &self.comments {
            for line in c.lines() {
                writeln!(out, "# {line}")?;
            }
        }
        writeln!(out, "{} {}", self.width, self.height)?;
        writeln!(out, "255")?;
        for row in self.pixels.chunks(self.width.max(1)) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut comments = Vec::new();
        let mut tokens = Vec::new();
        for (k, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse { line: k + 1, msg: e.to_string() })?;
            let (body, comment) = match line.find('#') {
                Some(at) => (&line[..at], Some(line[at + 1..].trim_start().to_string())),
                None => (line.as_str(), None),
            };
            comments.extend(comment);
            tokens.extend(body.split_whitespace().map(|t| (k + 1, t.to_string())));
        }
        let mut it = tokens.into_iter();
        match it.next() {
            Some((_, m)) if m == "P2" => {}
            Some((line, m)) => return Err(Error::Parse { line, msg: format!("bad magic {m:?}") }),
            None => return Err(Error::Empty),
        }
        let mut num = |what: &str| -> Result<usize> {
            let (line, t) = it.next().ok_or_else(|| Error::Parse { line: 0, msg: format!("missing {what}") })?;
            t.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} {t:?}") })
        };
        let (width, height, max) = (num("width")?, num("height")?, num("maxval")?);
        if max == 0 || max > 255 {
            return Err(Error::Parse { line: 0, msg: format!("unsupported maxval {max}") });
        }
        let mut pixels = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            let v = num("pixel")?;
            if v > max {
                return Err(Error::Parse { line: 0, msg: format!("pixel {v} above maxval") });
            }
            pixels.push(v as u8);
        }
        if it.next().is_some() {
            return Err(Error::Parse { line: 0, msg: "trailing data".into() });
        }
        Ok(Pgm { width, height, pixels, comments })
    }
}

/// Writes a CSV header row followed by rows of already-formatted fields.
pub fn write_csv<W: Write, I, R>(mut out: W, header: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[String]>,
{
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.as_ref().join(","))?;
    }
    Ok(())
}

/// Parses a CSV with a header row into the header and rows of fields.
pub fn read_csv<R: BufRead>(input: R) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(h) => h.map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?,
        None => return Err(Error::Empty),
    };
    let header: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Parse { line: k + 2, msg: e.to_string() })?;
        if line.is_empty() {
            continue;
        }
        let row: Vec<String> = line.split(',').map(str::to_string).collect();
        if row.len() != header.len() {
            return Err(Error::Parse { line: k + 2, msg: format!("expected {} fields, found {}", header.len(), row.len()) });
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let img = Pgm::new(3, 2, vec![0, 128, 255, 7, 8, 9]).unwrap().with_comment("max-cell normalization");
        let mut buf = Vec::new();
        img.write(&mut buf).unwrap();
        assert!(buf.starts_with(b"P2\n# max-cell"));
        assert_eq!(Pgm::read(&buf[..]).unwrap(), img);
    }

    #[test]
    fn pgm_rejects() {
        assert!(Pgm::new(2, 2, vec![0; 3]).is_err());
        assert!(Pgm::read(&b"P5\n1 1\n255\n0\n"[..]).is_err());
        assert!(Pgm::read(&b"P2\n2 1\n255\n0\n"[..]).is_err());
        assert!(Pgm::read(&b"P2\n1 1\n255\n300\n"[..]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["n", "f"], vec![vec!["4".to_string(), "0.21621".to_string()]]).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "n,f\n4,0.21621\n");
        let (h, rows) = read_csv(&buf[..]).unwrap();
        assert_eq!(h, ["n", "f"]);
        assert_eq!(rows, vec![vec!["4", "0.21621"]]);
    }
}
