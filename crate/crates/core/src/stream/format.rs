//! Text stream format.
//!
//! One record per line. Insertion-only streams use `u v`; turnstile streams
//! use `u v +1` or `u v -1`. Lines starting with `#` and blank lines are
//! skipped. Vertex count, orientation and model are not stored in the file.

use std::io::{BufRead, Write};

use super::{Mode, Model, Update, VertexId};
use crate::error::{Error, Result};

/// Lazily parses updates from a reader, one line at a time.
pub struct UpdateReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    mode: Mode,
    model: Model,
}

impl<R: BufRead> UpdateReader<R> {
    pub fn new(reader: R, mode: Mode, model: Model) -> Self {
        UpdateReader { lines: reader.lines(), line_no: 0, mode, model }
    }

    fn parse_line(&self, line: &str) -> Result<Option<Update>> {
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            return Ok(None);
        }
        let err = |reason: String| Error::Parse { line: self.line_no, reason };
        let fields: Vec<&str> = body.split_whitespace().collect();
        let vertex = |s: &str| -> Result<VertexId> {
            s.parse::<u32>().map(VertexId).map_err(|_| err(format!("invalid vertex id {s:?}")))
        };
        let delta = match (self.model, fields.len()) {
            (Model::Insertion, 2) => 1,
            (Model::Insertion, 3) | (Model::Turnstile, 3) => match fields[2] {
                "+1" | "1" => 1,
                "-1" if self.model == Model::Turnstile => -1,
                "-1" => return Err(err("deletion in an insertion-only stream".into())),
                other => return Err(err(format!("invalid delta {other:?}"))),
            },
            (Model::Turnstile, _) => return Err(err(format!("expected `u v +1|-1`, got {body:?}"))),
            (Model::Insertion, _) => return Err(err(format!("expected `u v`, got {body:?}"))),
        };
        Ok(Some(Update { tail: vertex(fields[0])?, head: vertex(fields[1])?, delta, orientation: self.mode }))
    }
}

impl<R: BufRead> Iterator for UpdateReader<R> {
    type Item = Result<Update>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let line = match line {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::Parse { line: self.line_no, reason: e.to_string() })),
            };
            match self.parse_line(&line) {
                Ok(Some(u)) => return Some(Ok(u)),
                Ok(None) => continue,
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// Parses a whole stream into memory.
pub fn parse_stream<R: BufRead>(reader: R, mode: Mode, model: Model) -> Result<Vec<Update>> {
    UpdateReader::new(reader, mode, model).collect()
}

/// Writes updates in the text format for `model`.
pub fn write_stream<W: Write>(mut out: W, updates: &[Update], model: Model) -> std::io::Result<()> {
    for u in updates {
        match model {
            Model::Insertion => writeln!(out, "{} {}", u.tail, u.head)?,
            Model::Turnstile => {
                let sign = if u.delta < 0 { "-1" } else { "+1" };
                writeln!(out, "{} {} {}", u.tail, u.head, sign)?
            }
        }
    }
    Ok(())
}
