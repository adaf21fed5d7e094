//! Resolution graphs from polynomials through an external Singular process,
//! with recorded outputs so that the known polynomials need no binary.
//!
//! The bundled script prints a small line format, which is all we parse:
//!
//! ```text
//! resolution 1
//! vertex <id> <euler>
//! edge <id> <id>
//! arrow <id> <vertex id> <mult>
//! root <id>
//! end
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{adjunction_residuals, direct_and_order, validate_graph};
use crate::io::document::{ArrowEntry, DocumentFormat, GraphDocument, Id, VertexEntry, SCHEMA_VERSION};

/// Template for the Singular script; `{{POLY}}` is replaced by the
/// validated polynomial. Vertices of the resolution graph with a negative
/// diagonal entry are exceptional divisors, those with a zero diagonal
/// entry are strict transforms of branches.
pub const SCRIPT_TEMPLATE: &str = r#"LIB "alexpoly.lib";
ring r = 0, (x,y), ds;
poly f = {{POLY}};
intmat G = resolutiongraph(f);
int n = nrows(G);
int i; int j;
print("resolution 1");
for (i = 1; i <= n; i++) {
  if (G[i,i] < 0) { print("vertex " + string(i) + " " + string(-G[i,i])); }
}
for (i = 1; i <= n; i++) {
  for (j = i + 1; j <= n; j++) {
    if (G[i,j] != 0 && G[i,i] < 0 && G[j,j] < 0) { print("edge " + string(i) + " " + string(j)); }
  }
}
for (i = 1; i <= n; i++) {
  if (G[i,i] == 0) {
    for (j = 1; j <= n; j++) {
      if (j != i && G[i,j] != 0) { print("arrow b" + string(i) + " " + string(j) + " 1"); }
    }
  }
}
print("root 1");
print("end");
quit;
"#;

const FIXTURES: [(&str, &str); 3] = [
    ("(y^2+x^3)*(x^2+y^3)", include_str!("../fixtures/singular/two_cusps.txt")),
    ("(y^2-x^3)^2+x^5*y", include_str!("../fixtures/singular/two_pairs.txt")),
    ("y", include_str!("../fixtures/singular/smooth.txt")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Recorded outputs only; unknown polynomials fail with `BinaryMissing`.
    Fixture,
    /// Always run the binary.
    Live,
    /// Recorded output when there is one, the binary otherwise.
    Auto,
}

#[derive(Debug, Clone)]
pub struct AdapterConfig {
    pub binary: PathBuf,
    pub timeout: Duration,
    pub mode: Mode,
}

impl Default for AdapterConfig {
    fn default() -> Self {
        AdapterConfig {
            binary: PathBuf::from("Singular"),
            timeout: Duration::from_secs(60),
            mode: Mode::Auto,
        }
    }
}

/// One run of the external binary and what it printed.
#[derive(Debug, Clone)]
pub struct CasInvocation {
    pub binary: PathBuf,
    pub script: String,
    pub polynomial: String,
    pub timeout: Duration,
    pub stdout: String,
    pub stderr: String,
}

/// The polynomial with whitespace removed, if it is a polynomial in `x`
/// and `y` with integer coefficients built from `+ - * ^` and parentheses.
pub fn normalize_polynomial(poly: &str) -> Result<String> {
    let s: String = poly.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = PolyParser { s: s.as_bytes(), pos: 0 };
    p.expr()?;
    if p.pos != p.s.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(s)
}

struct PolyParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::SyntaxError { line: 1, column: self.pos + 1, message: format!("polynomial: {what}") }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<()> {
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        self.term()?;
        while matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
            self.term()?;
        }
        Ok(())
    }

    fn term(&mut self) -> Result<()> {
        self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.power()?;
        }
        Ok(())
    }

    fn power(&mut self) -> Result<()> {
        self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if !self.digits() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
        }
        Ok(())
    }

    fn digits(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn atom(&mut self) -> Result<()> {
        match self.peek() {
            Some(b'x' | b'y') => {
                self.pos += 1;
                Ok(())
            }
            Some(b'(') => {
                self.pos += 1;
                self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(())
            }
            Some(c) if c.is_ascii_digit() => {
                self.digits();
                Ok(())
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end")),
        }
    }
}

/// Parses the line format into a graph document.
pub fn parse_resolution(text: &str) -> Result<GraphDocument> {
    let cas = |line: usize, msg: &str| Error::CasError(format!("line {line}: {msg}"));
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut arrows = Vec::new();
    let mut root = None;
    let mut header = false;
    let mut ended = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        if ended {
            return Err(cas(line, "content after `end`"));
        }
        let words: Vec<&str> = raw.split_whitespace().collect();
        let int = |w: &str| w.parse::<i64>().map_err(|_| cas(line, &format!("`{w}` is not an integer")));
        match words.as_slice() {
            ["resolution", "1"] if !header => header = true,
            _ if !header => return Err(cas(line, "expected `resolution 1`")),
            ["vertex", id, euler] => {
                vertices.push(VertexEntry { id: Id::from(*id), euler: int(euler)? })
            }
            ["edge", a, b] => edges.push((Id::from(*a), Id::from(*b))),
            ["arrow", id, v, mult] => arrows.push(ArrowEntry {
                id: Id::from(*id),
                vertex: Id::from(*v),
                mult: Some(int(mult)?),
            }),
            ["root", id] => root = Some(Id::from(*id)),
            ["end"] => ended = true,
            _ => return Err(cas(line, &format!("unrecognised line `{raw}`"))),
        }
    }
    if !ended {
        return Err(Error::CasError("output ended without `end`".into()));
    }
    let root = root.ok_or_else(|| Error::CasError("no root line".into()))?;
    let doc = GraphDocument {
        schema_version: SCHEMA_VERSION,
        vertices,
        edges,
        arrows,
        root,
        branch_order: None,
        metadata: Default::default(),
    };
    // Round trip through the document checks for duplicate and dangling ids.
    GraphDocument::parse(&doc.to_text(DocumentFormat::Json), DocumentFormat::Json)
        .map_err(|e| Error::CasError(e.to_string()))
}

/// Every returned graph must pass validation and satisfy adjunction.
fn check_consistent(doc: &GraphDocument) -> Result<()> {
    let g = doc.to_graph()?;
    let inconsistent = |e: Error| Error::InconsistentResolution(e.to_string());
    validate_graph(&g).map_err(inconsistent)?;
    let dg = direct_and_order(&g).map_err(inconsistent)?;
    if let Some(v) = adjunction_residuals(&dg).iter().position(|&r| r != (0, 0)) {
        return Err(Error::InconsistentResolution(format!(
            "adjunction fails at vertex {}",
            dg.name(v)
        )));
    }
    Ok(())
}

pub fn fixture(normalized: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(p, _)| *p == normalized).map(|&(_, text)| text)
}

/// Writes the script to a temporary file, runs the binary on it and
/// collects its output, killing it after the timeout.
pub fn invoke(polynomial: &str, cfg: &AdapterConfig) -> Result<CasInvocation> {
    if cfg.timeout.is_zero() {
        return Err(Error::CasError("timeout must be positive".into()));
    }
    let polynomial = normalize_polynomial(polynomial)?;
    let script = SCRIPT_TEMPLATE.replace("{{POLY}}", &polynomial);
    let mut file = tempfile::Builder::new()
        .suffix(".sing")
        .tempfile()
        .map_err(|e| Error::Io(e.to_string()))?;
    file.write_all(script.as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
    let mut child = Command::new(&cfg.binary)
        .args(["-q", "--no-rc", "--no-warn"])
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::BinaryMissing(cfg.binary.display().to_string()),
            _ => Error::CasError(e.to_string()),
        })?;
    let drain = |mut r: Box<dyn Read + Send>| {
        thread::spawn(move || {
            let mut s = String::new();
            let _ = r.read_to_string(&mut s);
            s
        })
    };
    let out = drain(Box::new(child.stdout.take().expect("piped stdout")));
    let err = drain(Box::new(child.stderr.take().expect("piped stderr")));
    let start = Instant::now();
    let status = loop {
        match child.try_wait().map_err(|e| Error::CasError(e.to_string()))? {
            Some(status) => break status,
            None if start.elapsed() > cfg.timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::CasError(format!("timed out after {:?}", cfg.timeout)));
            }
            None => thread::sleep(Duration::from_millis(10)),
        }
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    if !status.success() {
        return Err(Error::CasError(format!("exit status {status}: {}", stderr.trim())));
    }
    Ok(CasInvocation { binary: cfg.binary.clone(), script, polynomial, timeout: cfg.timeout, stdout, stderr })
}

/// Graph document of the curve `poly = 0` at the origin.
pub fn resolve_polynomial(poly: &str, cfg: &AdapterConfig) -> Result<GraphDocument> {
    let normalized = normalize_polynomial(poly)?;
    let recorded = match cfg.mode {
        Mode::Live => None,
        Mode::Fixture | Mode::Auto => fixture(&normalized),
    };
    let text = match (recorded, cfg.mode) {
        (Some(text), _) => text.to_string(),
        (None, Mode::Fixture) => {
            return Err(Error::BinaryMissing(format!(
                "{} (fixture mode, nothing recorded for `{normalized}`)",
                cfg.binary.display()
            )))
        }
        (None, _) => invoke(&normalized, cfg)?.stdout,
    };
    let mut doc = parse_resolution(&text)?;
    check_consistent(&doc)?;
    doc.metadata.insert("polynomial".into(), serde_json::Value::String(normalized));
    doc.metadata.insert(
        "source".into(),
        serde_json::Value::String(if recorded.is_some() { "fixture" } else { "singular" }.into()),
    );
    Ok(doc)
}
