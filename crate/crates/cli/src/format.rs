//! Text formats for algebras and modules.
//!
//! An algebra file is a sequence of `[section]` blocks; `#` starts a comment.
//!
//! ```text
//! [field]
//! char = 101
//!
//! [quiver]
//! vertices = 1 2 3
//! a: 1 -> 2
//! b: 2 -> 3
//!
//! [relations]
//! b*a = 0
//!
//! [options]
//! truncation = 3
//! ```
//!
//! Paths are written right to left: `b*a` means "first a, then b". A relation
//! is a sum of `[coeff] path` terms separated by `+` or `-`, set equal to `0`
//! or to another such sum. Tokens are separated by whitespace, except that
//! `=` stands on its own. `[options]` may be omitted for a quiver without
//! arrows.
//!
//! Instead of `[quiver]`, a `[table]` section gives structure constants:
//!
//! ```text
//! [table]
//! vertices = 1 2
//! basis = e1 e2 a
//! idempotent 1 = e1
//! idempotent 2 = e2
//! e1 . e1 = e1
//! e1 . a = a
//! a . e2 = a
//! e2 . e2 = e2
//! ```
//!
//! `x . y = z` means "x then y" equals z; products not listed are zero.
//!
//! A module file lists vertex dimensions and one matrix per arrow (or per
//! radical basis label for table algebras). Matrices are `dims[target] x
//! dims[source]`, rows separated by `;`; missing entries mean zero.
//!
//! ```text
//! [dims]
//! 1 = 1
//! 2 = 1
//!
//! [act]
//! a = 1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use deloop_core::algebra::{Algebra, AlgebraError, Arrow, QuiverPresentation, Relation, Sparse};
use deloop_core::linalg::{Fp, Matrix};
use deloop_core::modrep::{Module, ModuleError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("invalid module: {0}")]
    Module(#[from] ModuleError),
}

fn syntax<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax { line, col, msg: msg.into() })
}

#[derive(Clone, Copy, Debug)]
struct Tok<'a> {
    col: usize,
    text: &'a str,
}

struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
}

impl Line<'_> {
    fn end_col(&self) -> usize {
        self.toks.last().map_or(1, |t| t.col + t.text.chars().count())
    }

    fn err<T>(&self, i: usize, msg: impl Into<String>) -> Result<T, FormatError> {
        let col = self.toks.get(i).map_or_else(|| self.end_col(), |t| t.col);
        syntax(self.no, col, msg)
    }
}

struct Section<'a> {
    name: String,
    line: usize,
    lines: Vec<Line<'a>>,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in body.char_indices().enumerate() {
        if c.is_whitespace() || c == '=' {
            if let Some((s, sc)) = start.take() {
                out.push(Tok { col: sc + 1, text: &body[s..i] });
            }
            if c == '=' {
                out.push(Tok { col: col + 1, text: &body[i..i + 1] });
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, sc)) = start {
        out.push(Tok { col: sc + 1, text: &body[s..] });
    }
    out
}

fn sections(text: &str) -> Result<Vec<Section<'_>>, FormatError> {
    let mut out: Vec<Section<'_>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks = tokenize(raw);
        let Some(first) = toks.first() else { continue };
        if first.text.starts_with('[') {
            if toks.len() != 1 || !first.text.ends_with(']') || first.text.len() < 3 {
                return syntax(no, first.col, "malformed section header");
            }
            let name = first.text[1..first.text.len() - 1].to_string();
            if out.iter().any(|s| s.name == name) {
                return syntax(no, first.col, format!("duplicate section [{name}]"));
            }
            out.push(Section { name, line: no, lines: Vec::new() });
            continue;
        }
        match out.last_mut() {
            Some(s) => s.lines.push(Line { no, toks }),
            None => return syntax(no, first.col, "content before the first section"),
        }
    }
    Ok(out)
}

fn take_section<'a>(secs: &mut Vec<Section<'a>>, name: &str) -> Option<Section<'a>> {
    secs.iter().position(|s| s.name == name).map(|i| secs.remove(i))
}

/// `key = value...`; returns the value tokens.
fn key_values<'a, 'b>(line: &'b Line<'a>, key: &str) -> Result<&'b [Tok<'a>], FormatError> {
    if line.toks.len() < 2 || line.toks[0].text != key || line.toks[1].text != "=" {
        return line.err(0, format!("expected `{key} = ...`"));
    }
    Ok(&line.toks[2..])
}

fn single_number(line: &Line<'_>, key: &str) -> Result<u64, FormatError> {
    let vals = key_values(line, key)?;
    if vals.len() != 1 {
        return line.err(2, format!("`{key}` takes one number"));
    }
    vals[0].text.parse().or_else(|_| line.err(2, format!("`{}` is not a number", vals[0].text)))
}

fn is_number(s: &str) -> bool {
    s.parse::<i64>().is_ok()
}

/// Terms `[coeff] name` separated by `+`/`-`, starting at token `from` and
/// stopping before `stop` (or the end).
fn parse_terms(line: &Line<'_>, from: usize, stop: usize) -> Result<Vec<(i64, String)>, FormatError> {
    let mut out = Vec::new();
    let mut i = from;
    let mut sign = 1i64;
    let mut expect_term = true;
    while i < stop {
        let t = line.toks[i].text;
        if t == "+" || t == "-" {
            // between terms, or a single leading minus
            let leading = expect_term && out.is_empty() && i == from && t == "-";
            if !expect_term || leading {
                sign = if t == "-" { -1 } else { 1 };
                expect_term = true;
                i += 1;
                continue;
            }
            return line.err(i, format!("unexpected `{t}`"));
        }
        if !expect_term {
            return line.err(i, "expected `+` or `-` between terms");
        }
        let (coeff, name_at) = if is_number(t) {
            let c: i64 = t.parse().unwrap();
            (c, i + 1)
        } else {
            (1, i)
        };
        if name_at >= stop {
            // a bare number is only allowed as the literal zero side
            if coeff == 0 && out.is_empty() && name_at == from + 1 && sign == 1 {
                return Ok(out);
            }
            return line.err(name_at, "expected a name after the coefficient");
        }
        let name = line.toks[name_at].text;
        if is_number(name) || name == "+" || name == "-" {
            return line.err(name_at, format!("expected a name, found `{name}`"));
        }
        out.push((sign * coeff, name.to_string()));
        sign = 1;
        expect_term = false;
        i = name_at + 1;
    }
    if expect_term {
        return line.err(stop, "expected a term");
    }
    Ok(out)
}

fn write_terms(out: &mut String, terms: &[(i64, String)]) {
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (k, (c, name)) in terms.iter().enumerate() {
        let (neg, abs) = (*c < 0, c.unsigned_abs());
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        if abs != 1 {
            let _ = write!(out, "{abs} ");
        }
        out.push_str(name);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSource {
    Quiver(QuiverPresentation),
    Table(Algebra),
}

/// A parsed algebra file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub field: Fp,
    pub source: AlgebraSource,
}

impl AlgebraFile {
    pub fn from_quiver(field: Fp, q: QuiverPresentation) -> AlgebraFile {
        AlgebraFile { field, source: AlgebraSource::Quiver(q) }
    }

    /// Table form of any algebra, with the opposite flag applied.
    pub fn from_algebra(alg: &Algebra) -> AlgebraFile {
        AlgebraFile { field: alg.field(), source: AlgebraSource::Table(alg.materialize()) }
    }

    pub fn algebra(&self) -> Result<Algebra, FormatError> {
        match &self.source {
            AlgebraSource::Quiver(q) => Ok(Algebra::from_quiver(q, self.field)?),
            AlgebraSource::Table(a) => Ok(a.clone()),
        }
    }

    pub fn parse(text: &str) -> Result<AlgebraFile, FormatError> {
        let mut secs = sections(text)?;
        let field_sec = match take_section(&mut secs, "field") {
            Some(s) => s,
            None => return syntax(1, 1, "missing [field] section"),
        };
        let field = parse_field(&field_sec)?;
        let source = match (take_section(&mut secs, "quiver"), take_section(&mut secs, "table")) {
            (Some(q), None) => {
                let rels = take_section(&mut secs, "relations");
                let opts = take_section(&mut secs, "options");
                AlgebraSource::Quiver(parse_quiver(&q, rels.as_ref(), opts.as_ref())?)
            }
            (None, Some(t)) => AlgebraSource::Table(parse_table(&t, field)?),
            (Some(_), Some(t)) => return syntax(t.line, 1, "give either [quiver] or [table], not both"),
            (None, None) => return syntax(field_sec.line, 1, "missing [quiver] or [table] section"),
        };
        if let Some(s) = secs.first() {
            return syntax(s.line, 1, format!("unexpected section [{}]", s.name));
        }
        Ok(AlgebraFile { field, source })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("[field]\nchar = {}\n", self.field.modulus());
        match &self.source {
            AlgebraSource::Quiver(q) => write_quiver(&mut out, q),
            AlgebraSource::Table(a) => write_table(&mut out, a),
        }
        out
    }
}

fn parse_field(sec: &Section<'_>) -> Result<Fp, FormatError> {
    let [line] = sec.lines.as_slice() else {
        return syntax(sec.line, 1, "[field] holds exactly one line `char = p`");
    };
    let p = single_number(line, "char")?;
    match u32::try_from(p).ok().and_then(|p| Fp::new(p).ok()) {
        Some(f) => Ok(f),
        None => line.err(2, format!("{p} is not a supported prime")),
    }
}

fn parse_vertices(line: &Line<'_>) -> Result<Vec<String>, FormatError> {
    let vals = key_values(line, "vertices")?;
    if vals.is_empty() {
        return line.err(2, "no vertices");
    }
    let mut names: Vec<String> = Vec::new();
    for (i, t) in vals.iter().enumerate() {
        if names.iter().any(|n| n == t.text) {
            return line.err(i + 2, format!("duplicate vertex `{}`", t.text));
        }
        names.push(t.text.to_string());
    }
    Ok(names)
}

fn parse_quiver(
    sec: &Section<'_>,
    rels: Option<&Section<'_>>,
    opts: Option<&Section<'_>>,
) -> Result<QuiverPresentation, FormatError> {
    let Some((first, rest)) = sec.lines.split_first() else {
        return syntax(sec.line, 1, "[quiver] needs a `vertices = ...` line");
    };
    let vertices = parse_vertices(first)?;
    let vertex = |line: &Line<'_>, i: usize| -> Result<usize, FormatError> {
        match vertices.iter().position(|v| v == line.toks[i].text) {
            Some(v) => Ok(v),
            None => line.err(i, format!("unknown vertex `{}`", line.toks[i].text)),
        }
    };
    let mut arrows: Vec<(String, usize, usize)> = Vec::new();
    for line in rest {
        // `name: s -> t`, the colon may stand apart
        let t = &line.toks;
        let (name, at) = match t.first().map(|x| x.text) {
            Some(x) if x.ends_with(':') && x.len() > 1 => (&x[..x.len() - 1], 1),
            Some(x) if t.get(1).map(|y| y.text) == Some(":") => (x, 2),
            _ => return line.err(0, "expected `name: source -> target`"),
        };
        if t.len() != at + 3 || t[at + 1].text != "->" {
            return line.err(at, "expected `name: source -> target`");
        }
        if name.contains('*') || is_number(name) {
            return line.err(0, format!("`{name}` cannot be an arrow name"));
        }
        if arrows.iter().any(|a| a.0 == name) {
            return line.err(0, format!("duplicate arrow `{name}`"));
        }
        arrows.push((name.to_string(), vertex(line, at)?, vertex(line, at + 2)?));
    }
    let mut truncation = None;
    if let Some(o) = opts {
        for line in &o.lines {
            if truncation.is_some() {
                return line.err(0, "duplicate option");
            }
            truncation = Some(single_number(line, "truncation")? as usize);
        }
    }
    let mut q = QuiverPresentation::new(vertices, 0);
    for (name, s, t) in &arrows {
        q.add_arrow(name, *s, *t);
    }
    if let Some(r) = rels {
        for line in &r.lines {
            q.relations.push(parse_relation(line, &q)?);
        }
    }
    q.truncation = match truncation {
        Some(l) => l,
        None if q.arrows.is_empty() => 2,
        None => return syntax(sec.line, 1, "missing [options] section with `truncation = L`"),
    };
    Ok(q)
}

fn parse_relation(line: &Line<'_>, q: &QuiverPresentation) -> Result<Relation, FormatError> {
    let eq = match line.toks.iter().position(|t| t.text == "=") {
        Some(i) => i,
        None => return line.err(line.toks.len(), "a relation needs `=`"),
    };
    let mut terms = parse_terms(line, 0, eq)?;
    let rhs = parse_terms(line, eq + 1, line.toks.len())?;
    terms.extend(rhs.into_iter().map(|(c, p)| (-c, p)));
    let mut out = Vec::new();
    for (c, path) in terms {
        // `b*a`: the rightmost arrow comes first
        let mut arrows = Vec::new();
        for name in path.split('*').rev() {
            match q.arrow_index(name) {
                Some(a) => arrows.push(a),
                None => {
                    let i = line.toks.iter().position(|t| t.text.split('*').any(|n| n == name)).unwrap_or(0);
                    return line.err(i, format!("unknown arrow `{name}`"));
                }
            }
        }
        let tok = line.toks.iter().position(|t| t.text == path).unwrap_or(0);
        if arrows.windows(2).any(|w| q.arrows[w[0]].target != q.arrows[w[1]].source) {
            return line.err(tok, format!("`{path}` is not a path"));
        }
        let ends = (q.arrows[arrows[0]].source, q.arrows[*arrows.last().unwrap()].target);
        if let Some((_, first)) = out.first() {
            let first: &Vec<usize> = first;
            if (q.arrows[first[0]].source, q.arrows[*first.last().unwrap()].target) != ends {
                return line.err(tok, format!("`{path}` is not parallel to the other terms"));
            }
        }
        out.push((c, arrows));
    }
    Ok(out)
}

fn write_quiver(out: &mut String, q: &QuiverPresentation) {
    let _ = writeln!(out, "\n[quiver]\nvertices = {}", q.vertices.join(" "));
    for Arrow { name, source, target } in &q.arrows {
        let _ = writeln!(out, "{name}: {} -> {}", q.vertices[*source], q.vertices[*target]);
    }
    if !q.relations.is_empty() {
        out.push_str("\n[relations]\n");
        for r in &q.relations {
            let terms: Vec<(i64, String)> = r.iter().map(|(c, p)| (*c, q.path_label(p))).collect();
            write_terms(out, &terms);
            out.push_str(" = 0\n");
        }
    }
    let _ = writeln!(out, "\n[options]\ntruncation = {}", q.truncation);
}

fn parse_table(sec: &Section<'_>, field: Fp) -> Result<Algebra, FormatError> {
    let mut lines = sec.lines.iter();
    let (Some(vl), Some(bl)) = (lines.next(), lines.next()) else {
        return syntax(sec.line, 1, "[table] starts with `vertices = ...` and `basis = ...`");
    };
    let vertices = parse_vertices(vl)?;
    let basis: Vec<String> = key_values(bl, "basis")?.iter().map(|t| t.text.to_string()).collect();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, b) in basis.iter().enumerate() {
        if is_number(b) || matches!(b.as_str(), "+" | "-" | "." | "=") {
            return bl.err(i + 2, format!("`{b}` cannot be a basis label"));
        }
        if index.insert(b.as_str(), i).is_some() {
            return bl.err(i + 2, format!("duplicate basis label `{b}`"));
        }
    }
    let label = |line: &Line<'_>, i: usize| -> Result<usize, FormatError> {
        match line.toks.get(i).and_then(|t| index.get(t.text)) {
            Some(&b) => Ok(b),
            None => line.err(i, "expected a basis label"),
        }
    };
    let mut idem: Vec<Option<usize>> = vec![None; vertices.len()];
    let d = basis.len();
    let mut table: Vec<Vec<Sparse>> = vec![vec![Vec::new(); d]; d];
    let mut seen = vec![vec![false; d]; d];
    for line in lines {
        let t = &line.toks;
        if t.first().map(|x| x.text) == Some("idempotent") {
            if t.len() != 4 || t[2].text != "=" {
                return line.err(0, "expected `idempotent vertex = label`");
            }
            let Some(v) = vertices.iter().position(|v| v == t[1].text) else {
                return line.err(1, format!("unknown vertex `{}`", t[1].text));
            };
            if idem[v].is_some() {
                return line.err(1, "idempotent given twice");
            }
            idem[v] = Some(label(line, 3)?);
            continue;
        }
        if t.len() < 5 || t[1].text != "." || t[3].text != "=" {
            return line.err(0, "expected `x . y = terms`");
        }
        let (i, j) = (label(line, 0)?, label(line, 2)?);
        if seen[i][j] {
            return line.err(0, "product given twice");
        }
        seen[i][j] = true;
        let mut acc = vec![0u32; d];
        for (c, name) in parse_terms(line, 4, t.len())? {
            let Some(&k) = index.get(name.as_str()) else {
                let at = t.iter().position(|x| x.text == name).unwrap_or(4);
                return line.err(at, format!("unknown basis label `{name}`"));
            };
            acc[k] = field.add(acc[k], field.from_i64(c));
        }
        table[i][j] = acc.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect();
    }
    let mut vs = Vec::with_capacity(vertices.len());
    for (v, e) in idem.iter().enumerate() {
        match e {
            Some(e) => vs.push(*e),
            None => return syntax(sec.line, 1, format!("no idempotent for vertex `{}`", vertices[v])),
        }
    }
    Ok(Algebra::from_table(field, basis, table, vs, vertices)?)
}

fn write_table(out: &mut String, a: &Algebra) {
    let f = a.field();
    let _ = writeln!(out, "\n[table]\nvertices = {}\nbasis = {}", a.vertex_names().join(" "), a.labels().join(" "));
    for v in 0..a.num_vertices() {
        let _ = writeln!(out, "idempotent {} = {}", a.vertex_name(v), a.label(a.idempotent(v)));
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let prod = a.mul_basis(i, j);
            if prod.is_empty() {
                continue;
            }
            let terms: Vec<(i64, String)> = prod.iter().map(|&(k, c)| (f.to_signed(c), a.label(k).to_string())).collect();
            let _ = write!(out, "{} . {} = ", a.label(i), a.label(j));
            write_terms(out, &terms);
            out.push('\n');
        }
    }
}

/// Which generators a module file names: arrows for quiver algebras, all
/// radical basis elements otherwise.
fn action_keys(alg: &Algebra) -> Vec<(String, usize)> {
    match alg.arrows() {
        Some(arrows) => arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.clone(), alg.arrow_basis_index(i).expect("arrows are basis elements")))
            .collect(),
        None => alg.radical().iter().map(|&b| (alg.label(b).to_string(), b)).collect(),
    }
}

pub fn parse_module(text: &str, alg: &Algebra) -> Result<Module, FormatError> {
    let f = alg.field();
    let mut secs = sections(text)?;
    let mut dims = vec![0usize; alg.num_vertices()];
    if let Some(ds) = take_section(&mut secs, "dims") {
        let mut seen = vec![false; dims.len()];
        for line in &ds.lines {
            let Some(v) = line.toks.first().and_then(|t| alg.vertex_index(t.text)) else {
                return line.err(0, "expected `vertex = dimension` with a known vertex");
            };
            if seen[v] {
                return line.err(0, "dimension given twice");
            }
            seen[v] = true;
            dims[v] = single_number(line, line.toks[0].text)? as usize;
        }
    }
    let keys = action_keys(alg);
    let mut mats: Vec<Option<Matrix>> = vec![None; keys.len()];
    if let Some(acts) = take_section(&mut secs, "act") {
        for line in &acts.lines {
            let Some(k) = line.toks.first().and_then(|t| keys.iter().position(|(n, _)| n == t.text)) else {
                return line.err(0, "expected `name = rows` for a known arrow or basis label");
            };
            if mats[k].is_some() {
                return line.err(0, "matrix given twice");
            }
            let b = keys[k].1;
            let (r, c) = (dims[alg.target(b)], dims[alg.source(b)]);
            let vals = key_values(line, line.toks[0].text)?;
            let mut rows: Vec<Vec<u32>> = vec![Vec::new()];
            for (i, t) in vals.iter().enumerate() {
                if t.text == ";" {
                    rows.push(Vec::new());
                    continue;
                }
                match t.text.parse::<i64>() {
                    Ok(x) => rows.last_mut().unwrap().push(f.from_i64(x)),
                    Err(_) => return line.err(i + 2, format!("`{}` is not a number", t.text)),
                }
            }
            if rows.len() == 1 && rows[0].is_empty() {
                rows.clear();
            }
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return line.err(0, format!("`{}` must be a {r}x{c} matrix", keys[k].0));
            }
            mats[k] = Some(Matrix::from_vec(f, r, c, rows.concat()));
        }
    }
    if let Some(s) = secs.first() {
        return syntax(s.line, 1, format!("unexpected section [{}]", s.name));
    }
    let full: Vec<Matrix> = keys
        .iter()
        .zip(mats)
        .map(|((_, b), m)| m.unwrap_or_else(|| Matrix::zeros(f, dims[alg.target(*b)], dims[alg.source(*b)])))
        .collect();
    if alg.arrows().is_some() {
        Ok(Module::from_arrows(alg, dims, &full)?)
    } else {
        Ok(Module::new(alg, dims, full)?)
    }
}

pub fn module_to_text(m: &Module) -> String {
    let alg = m.algebra();
    let mut out = String::from("[dims]\n");
    for v in 0..alg.num_vertices() {
        let _ = writeln!(out, "{} = {}", alg.vertex_name(v), m.dims()[v]);
    }
    out.push_str("\n[act]\n");
    for (name, b) in action_keys(alg) {
        let a = m.act(b);
        if a.is_zero() {
            continue;
        }
        let rows: Vec<String> = (0..a.rows())
            .map(|i| a.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        let _ = writeln!(out, "{name} = {}", rows.join(" ; "));
    }
    out
}
