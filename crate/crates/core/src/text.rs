//! Text format for multi-segments and supports.
//!
//! ```text
//! multisegment := block (";" block)*
//! block        := label ":" seglist | seglist
//! seglist      := "{}" | seg ("+" seg)*
//! seg          := "[" half "," half "]"
//! half         := signed integer | signed odd integer "/2"
//! ```
//!
//! An omitted label means `rho`; with more than one block every block must
//! be labeled. Whitespace is ignored between tokens. A support may also be
//! written as a point list, `rho:{0,1,1,3/2}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::multiseg::{MultiSegment, Support};
use crate::segment::{CuspidalLabel, Segment};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    pub(crate) fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(pos);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    pub(crate) fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(f) => format!("'{f}'"),
                None => "end of input".to_string(),
            };
            Err(self.error(format!("expected '{c}', found {found}")))
        }
    }

    /// An optional `label ":"` prefix.
    pub(crate) fn label(&mut self) -> Option<CuspidalLabel> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len: usize = rest
            .chars()
            .take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.'))
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return None;
        }
        let after = rest[len..].trim_start();
        if !after.starts_with(':') {
            return None;
        }
        let label = CuspidalLabel::new(&rest[..len]);
        self.pos += rest.len() - after.len() + 1;
        Some(label)
    }

    fn digits(&mut self) -> Option<&'a str> {
        let rest = &self.src[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        (len > 0).then(|| {
            self.pos += len;
            &rest[..len]
        })
    }

    pub(crate) fn integer(&mut self) -> Result<i64> {
        let start = self.pos();
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let digits = self.digits().ok_or_else(|| self.error("expected a number"))?;
        let v: i64 = digits
            .parse()
            .map_err(|_| self.error_at(start, "number out of range"))?;
        Ok(if neg { -v } else { v })
    }

    pub(crate) fn half(&mut self) -> Result<HalfInt> {
        let start = self.pos();
        let n = self.integer()?;
        if self.src[self.pos..].starts_with('/') {
            self.pos += 1;
            match self.digits() {
                Some("2") => {}
                _ => return Err(self.error("only the denominator 2 is allowed")),
            }
            if n % 2 == 0 {
                return Err(self.error_at(start, format!("{n}/2 is not in lowest terms")));
            }
            Ok(HalfInt::from_twice(n))
        } else {
            Ok(HalfInt::from_int(n))
        }
    }
}

enum BlockBody {
    Segments(Vec<Segment>),
    Points(Vec<HalfInt>),
}

fn block_body(cur: &mut Cursor<'_>, rho: &CuspidalLabel, allow_points: bool) -> Result<BlockBody> {
    if cur.eat('{') {
        if cur.eat('}') {
            return Ok(BlockBody::Segments(Vec::new()));
        }
        if !allow_points {
            return Err(cur.error("expected '}'"));
        }
        let mut points = vec![cur.half()?];
        while cur.eat(',') {
            points.push(cur.half()?);
        }
        cur.expect('}')?;
        return Ok(BlockBody::Points(points));
    }
    let mut segs = Vec::new();
    loop {
        let start = cur.pos();
        cur.expect('[')?;
        let b = cur.half()?;
        cur.expect(',')?;
        let e = cur.half()?;
        cur.expect(']')?;
        let seg = Segment::new(rho.clone(), b, e).map_err(|err| {
            let Error::Constraint(msg) = err else { return err };
            cur.error_at(start, msg)
        })?;
        segs.push(seg);
        if !cur.eat('+') {
            break;
        }
    }
    Ok(BlockBody::Segments(segs))
}

/// Parse `block (";" block)*`, calling `body` for each block.
pub(crate) fn parse_blocks<T>(
    src: &str,
    mut body: impl FnMut(&mut Cursor<'_>, CuspidalLabel) -> Result<T>,
) -> Result<Vec<T>> {
    let mut cur = Cursor::new(src);
    if cur.at_end() {
        return Err(cur.error("empty input"));
    }
    let mut out = Vec::new();
    let mut unlabeled = None;
    loop {
        let start = cur.pos();
        let rho = match cur.label() {
            Some(l) => l,
            None => {
                unlabeled.get_or_insert(start);
                CuspidalLabel::default()
            }
        };
        out.push(body(&mut cur, rho)?);
        if !cur.eat(';') {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    if let (Some(pos), true) = (unlabeled, out.len() > 1) {
        return Err(cur.error_at(pos, "every block must be labeled when there is more than one"));
    }
    Ok(out)
}

pub fn parse_multisegment(src: &str) -> Result<MultiSegment> {
    let blocks = parse_blocks(src, |cur, rho| match block_body(cur, &rho, false)? {
        BlockBody::Segments(s) => Ok(s),
        BlockBody::Points(_) => unreachable!(),
    })?;
    Ok(MultiSegment::new(blocks.into_iter().flatten()))
}

/// Parse either a point list or a multi-segment (taking its support).
pub fn parse_support(src: &str) -> Result<Support> {
    let blocks = parse_blocks(src, |cur, rho| {
        Ok(match block_body(cur, &rho, true)? {
            BlockBody::Segments(s) => MultiSegment::new(s).support(),
            BlockBody::Points(p) => Support::from_points(p.into_iter().map(|x| (rho.clone(), x))),
        })
    })?;
    Ok(blocks.into_iter().fold(Support::default(), |acc, s| acc + s))
}

impl FromStr for MultiSegment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_multisegment(s)
    }
}

impl FromStr for Support {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_support(s)
    }
}

impl fmt::Display for MultiSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut prev: Option<&CuspidalLabel> = None;
        for s in self.segments() {
            match prev {
                Some(r) if r == s.rho() => f.write_str("+")?,
                Some(_) => write!(f, "; {}:", s.rho())?,
                None => write!(f, "{}:", s.rho())?,
            }
            write!(f, "{s}")?;
            prev = Some(s.rho());
        }
        Ok(())
    }
}
