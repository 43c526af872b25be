//! Job files:
//!
//! ```text
//! ring { vars=[x,y,z]; center=[x,y]; field=Q; }
//! ideal I = [x^2+y^2, x*y, y^3];
//! element w = x^2+y^2;
//! matrix A = [[x^2, y^3], [y, -x]];
//! run matfac ideal=I w=w
//! ```
//!
//! `#` starts a comment. `field` is `Q` or `Fp <p>`. Polynomials are parsed
//! once the ring block has been read.

use std::collections::BTreeMap;

use locres::parse::parse_poly;
use locres::{Error, Field, Poly, PolyMatrix, Result, RingSpec};

#[derive(Clone, Debug)]
pub struct RunLine {
    pub command: String,
    pub options: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub ring: RingSpec,
    pub ideals: BTreeMap<String, Vec<Poly>>,
    pub elements: BTreeMap<String, Poly>,
    pub matrices: BTreeMap<String, PolyMatrix>,
    pub run: Option<RunLine>,
    pub warnings: Vec<String>,
}

impl JobSpec {
    pub fn ideal(&self, name: &str) -> Result<&[Poly]> {
        self.ideals
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Domain(format!("no ideal named {name}")))
    }

    pub fn element(&self, name: &str) -> Result<&Poly> {
        self.elements
            .get(name)
            .ok_or_else(|| Error::Domain(format!("no element named {name}")))
    }

    pub fn matrix(&self, name: &str) -> Result<&PolyMatrix> {
        self.matrices
            .get(name)
            .ok_or_else(|| Error::Domain(format!("no matrix named {name}")))
    }
}

/// A piece of source text with the position of its first character.
#[derive(Clone, Debug)]
struct Span {
    text: String,
    line: usize,
    col: usize,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

impl Cursor {
    fn new(src: &str) -> Cursor {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and comments; with `newlines = false` stops at a
    /// line break.
    fn skip(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() && (newlines || c != '\n') {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col, msg)
    }

    fn ident(&mut self) -> Result<Span> {
        self.skip(true);
        let (line, col) = (self.line, self.col);
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' && !s.is_empty() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(self.err("expected a name"));
        }
        Ok(Span { text: s, line, col })
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip(true);
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected '{want}', found '{c}'"))),
            None => Err(self.err(format!("expected '{want}', found end of input"))),
        }
    }

    /// Text up to one of `stops` at bracket depth zero.
    fn until(&mut self, stops: &[char]) -> Span {
        self.skip(true);
        let (line, col) = (self.line, self.col);
        let mut s = String::new();
        let mut depth = 0i32;
        while let Some(c) = self.peek() {
            if depth == 0 && stops.contains(&c) {
                break;
            }
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                '#' => break,
                _ => {}
            }
            s.push(c);
            self.bump();
        }
        Span {
            text: s.trim_end().to_string(),
            line,
            col,
        }
    }

    /// `[ item, item, .. ]` with items cut at depth zero.
    fn list(&mut self) -> Result<Vec<Span>> {
        self.expect('[')?;
        let mut items = Vec::new();
        loop {
            self.skip(true);
            if self.peek() == Some(']') {
                self.bump();
                return Ok(items);
            }
            let item = self.until(&[',', ']']);
            if item.text.is_empty() {
                return Err(perr(item.line, item.col, "empty list item"));
            }
            items.push(item);
            self.skip(true);
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(']') => {}
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
    }

    fn end_statement(&mut self) -> Result<()> {
        self.skip(false);
        match self.peek() {
            Some(';') | Some('\n') => {
                self.bump();
                Ok(())
            }
            None => Ok(()),
            Some(c) => Err(self.err(format!("unexpected '{c}' after statement"))),
        }
    }
}

fn poly_at(span: &Span, ring: &RingSpec) -> Result<Poly> {
    parse_poly(&span.text, ring).map_err(|e| match e {
        Error::Parse { col, msg, .. } => perr(span.line, span.col + col - 1, msg),
        other => other,
    })
}

struct RingBlock {
    vars: Vec<String>,
    center: Vec<String>,
    field: Field,
    at: (usize, usize),
}

fn ring_block(cur: &mut Cursor) -> Result<RingBlock> {
    let at = (cur.line, cur.col);
    cur.expect('{')?;
    let (mut vars, mut center, mut field) = (None, None, Field::Rational);
    loop {
        cur.skip(true);
        if cur.peek() == Some('}') {
            cur.bump();
            break;
        }
        let key = cur.ident()?;
        cur.expect('=')?;
        match key.text.as_str() {
            "vars" => vars = Some(cur.list()?.into_iter().map(|s| s.text).collect::<Vec<_>>()),
            "center" => center = Some(cur.list()?.into_iter().map(|s| s.text).collect::<Vec<_>>()),
            "field" => {
                let v = cur.until(&[';', '}']);
                let parts: Vec<&str> = v.text.split_whitespace().collect();
                field = match parts.as_slice() {
                    ["Q"] => Field::Rational,
                    ["Fp", p] => Field::Prime(p.parse().map_err(|_| perr(v.line, v.col, "bad prime"))?),
                    _ => return Err(perr(v.line, v.col, format!("unknown field '{}'", v.text))),
                };
            }
            other => return Err(perr(key.line, key.col, format!("unknown ring key '{other}'"))),
        }
        cur.skip(true);
        if cur.peek() == Some(';') {
            cur.bump();
        }
    }
    let vars = vars.ok_or_else(|| perr(at.0, at.1, "ring block without vars"))?;
    let center = center.unwrap_or_else(|| vars.clone());
    Ok(RingBlock { vars, center, field, at })
}

/// Builds the ring, moving center variables to the front when needed.
fn build_ring(b: RingBlock, warnings: &mut Vec<String>) -> Result<RingSpec> {
    for v in &b.center {
        if !b.vars.contains(v) {
            return Err(perr(b.at.0, b.at.1, format!("center variable {v} is not declared")));
        }
    }
    let c = b.center.len();
    let mut names = b.vars.clone();
    if names[..c.min(names.len())] != b.center[..] {
        let rest: Vec<String> = b.vars.iter().filter(|v| !b.center.contains(v)).cloned().collect();
        names = b.center.iter().cloned().chain(rest).collect();
        warnings.push(format!("center is not a prefix of vars; variables reordered to [{}]", names.join(", ")));
    }
    RingSpec::from_names(names, c, b.field).map_err(|e| perr(b.at.0, b.at.1, e.to_string()))
}

enum Decl {
    Ideal(Span, Vec<Span>),
    Element(Span, Span),
    Matrix(Span, Vec<Vec<Span>>, (usize, usize)),
}

pub fn parse_job(text: &str) -> Result<JobSpec> {
    let mut cur = Cursor::new(text);
    let mut warnings = Vec::new();
    let mut ring = None;
    let mut decls = Vec::new();
    let mut run = None;
    loop {
        cur.skip(true);
        if cur.peek().is_none() {
            break;
        }
        let kw = cur.ident()?;
        match kw.text.as_str() {
            "ring" => {
                if ring.is_some() {
                    return Err(perr(kw.line, kw.col, "second ring block"));
                }
                ring = Some(build_ring(ring_block(&mut cur)?, &mut warnings)?);
                cur.skip(false);
                if cur.peek() == Some(';') {
                    cur.bump();
                }
            }
            "ideal" => {
                let name = cur.ident()?;
                cur.expect('=')?;
                let (line, col) = (cur.line, cur.col);
                let items = cur.list()?;
                if items.is_empty() {
                    return Err(perr(line, col, format!("ideal {} has no generators", name.text)));
                }
                cur.end_statement()?;
                decls.push(Decl::Ideal(name, items));
            }
            "element" => {
                let name = cur.ident()?;
                cur.expect('=')?;
                let body = cur.until(&[';', '\n']);
                if body.text.is_empty() {
                    return Err(perr(body.line, body.col, "empty element"));
                }
                cur.end_statement()?;
                decls.push(Decl::Element(name, body));
            }
            "matrix" => {
                let name = cur.ident()?;
                cur.expect('=')?;
                cur.skip(true);
                let at = (cur.line, cur.col);
                let outer = cur.list()?;
                let mut rows = Vec::new();
                for row in outer {
                    let mut inner = Cursor::new(&row.text);
                    (inner.line, inner.col) = (row.line, row.col);
                    rows.push(inner.list()?);
                }
                cur.end_statement()?;
                decls.push(Decl::Matrix(name, rows, at));
            }
            "run" => {
                if run.is_some() {
                    return Err(perr(kw.line, kw.col, "second run line"));
                }
                let command = cur.ident()?.text;
                let mut options = Vec::new();
                loop {
                    cur.skip(false);
                    match cur.peek() {
                        None | Some('\n') | Some(';') => break,
                        _ => {}
                    }
                    let key = cur.ident()?;
                    cur.expect('=')?;
                    let v = cur.until(&[' ', '\t', '\n', ';']);
                    options.push((key.text, v.text));
                }
                cur.end_statement()?;
                run = Some(RunLine { command, options });
            }
            other => return Err(perr(kw.line, kw.col, format!("unknown statement '{other}'"))),
        }
    }
    let ring = ring.ok_or_else(|| perr(1, 1, "missing ring block"))?;
    let mut seen: Vec<String> = Vec::new();
    let mut fresh = |name: &Span| {
        if seen.contains(&name.text) {
            return Err(perr(name.line, name.col, format!("duplicate name {}", name.text)));
        }
        seen.push(name.text.clone());
        Ok(())
    };
    let (mut ideals, mut elements, mut matrices) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for d in decls {
        match d {
            Decl::Ideal(name, items) => {
                fresh(&name)?;
                let gens = items.iter().map(|s| poly_at(s, &ring)).collect::<Result<Vec<_>>>()?;
                ideals.insert(name.text, gens);
            }
            Decl::Element(name, body) => {
                fresh(&name)?;
                elements.insert(name.text, poly_at(&body, &ring)?);
            }
            Decl::Matrix(name, rows, at) => {
                fresh(&name)?;
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|s| poly_at(s, &ring)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len() || r.is_empty()) {
                    return Err(perr(at.0, at.1, format!("matrix {} is not rectangular", name.text)));
                }
                matrices.insert(name.text, PolyMatrix::from_rows(rows));
            }
        }
    }
    Ok(JobSpec {
        ring,
        ideals,
        elements,
        matrices,
        run,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# the example ideal\nring { vars=[x,y]; center=[x,y]; field=Q; }\nideal I = [x^2+y^2, x*y, y^3]\nelement w = x^2+y^2;\nmatrix A = [[x, -y], [y, x]]\nrun matfac ideal=I w=w\n";

    #[test]
    fn sample_job() {
        let j = parse_job(SAMPLE).unwrap();
        assert_eq!(j.ideal("I").unwrap().len(), 3);
        assert_eq!(j.matrix("A").unwrap().rows, 2);
        let run = j.run.unwrap();
        assert_eq!(run.command, "matfac");
        assert_eq!(run.options, vec![("ideal".into(), "I".into()), ("w".into(), "w".into())]);
        assert!(j.warnings.is_empty());
    }

    #[test]
    fn diagnostics() {
        let e = parse_job("ring { vars=[x,y]; }\nideal I = []\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_job("ring { vars=[x,y]; }\nelement w = x\nelement w = y\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_job("ring { vars=[x,y]; }\nelement w = x+q\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 15, .. }), "{e:?}");
        assert!(parse_job("ideal I = [x]\n").is_err());
    }

    #[test]
    fn center_reordering() {
        let j = parse_job("ring { vars=[y,x]; center=[x]; field=Fp 7; }\nelement w = x*y\n").unwrap();
        assert_eq!(j.ring.names, vec!["x", "y"]);
        assert_eq!(j.ring.c, 1);
        assert_eq!(j.warnings.len(), 1);
    }
}
