//! Line-oriented text format for structures.
//!
//! ```text
//! [dim]
//! 3
//! [chart]
//! x y z
//! [frame]
//! labels xi e1 e2
//! vector xi = dz
//! vector e1 = dx + x*z*dy - 2*y*dz
//! vector e2 = dy
//! [metric]
//! g xi xi = 1
//! g e1 e2 = 1
//! [phi]
//! phi e1 = e1
//! phi e2 = -e2
//! [eta]
//! eta xi = 1
//! ```
//!
//! Lie algebras use `bracket a b = ...` lines instead of `vector`. The first
//! label must be `xi`. Unlisted components are zero; `#` starts a comment.

use std::collections::BTreeMap;

use crate::frame::{FrameKind, FrameSpec, FrameVector, MetricComponents};
use crate::linalg::Mat;
use crate::scalar::{parse_with_names, AlgNum, Chart, Monomial, Scalar, ScalarError};
use crate::structure::{verify_almost_paracontact, ParacontactStructure};

use super::CatalogError;

const SECTIONS: [&str; 7] = ["name", "dim", "chart", "frame", "metric", "phi", "eta"];

#[derive(Clone, Debug, PartialEq)]
pub enum FrameDecl {
    /// `(i, j, [e_i, e_j])` for a Lie algebra.
    Brackets(Vec<(usize, usize, Vec<AlgNum>)>),
    /// Coordinate coefficients `vectors[i][c]` of each frame vector.
    Vectors(Vec<Vec<Scalar>>),
}

/// A parsed document, before any mathematical validation.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureDocument {
    pub name: Option<String>,
    pub labels: Vec<String>,
    pub chart: Option<Chart>,
    pub frame: FrameDecl,
    pub metric: Mat<AlgNum>,
    pub phi: Mat<AlgNum>,
    pub eta: Vec<AlgNum>,
}

/// Head words with their offsets, offset of the right-hand side, and the right-hand side.
type Assignment<'a> = (Vec<(usize, &'a str)>, usize, &'a str);

struct Line<'a> {
    number: usize,
    text: &'a str,
    // byte offset of `text` in the raw line
    offset: usize,
}

impl<'a> Line<'a> {
    fn err(&self, at: usize, message: impl Into<String>) -> CatalogError {
        CatalogError::Parse { line: self.number, column: self.offset + at + 1, message: message.into() }
    }

    fn words(&self) -> Vec<(usize, &'a str)> {
        words(self.text)
    }

    /// Splits `head = rhs`, returning the words of the head and the rhs with
    /// its offset.
    fn assignment(&self) -> Result<Assignment<'a>, CatalogError> {
        let eq = self.text.find('=').ok_or_else(|| self.err(self.text.len(), "expected '='"))?;
        let rhs_start = eq + 1;
        let rhs = &self.text[rhs_start..];
        if rhs.trim().is_empty() {
            return Err(self.err(rhs_start, "missing right-hand side"));
        }
        Ok((words(&self.text[..eq]), rhs_start, rhs))
    }

    fn scalar(&self, rhs_start: usize, rhs: &str, names: &[String]) -> Result<Scalar, CatalogError> {
        parse_with_names(rhs, names).map_err(|e| {
            let (pos, msg) = match &e {
                ScalarError::Syntax { position, .. }
                | ScalarError::UnknownCoordinate { position, .. }
                | ScalarError::NonRationalRate { position } => (*position, e.to_string()),
                ScalarError::ChartMismatch(_) => (0, e.to_string()),
            };
            self.err(rhs_start + pos, msg)
        })
    }
}

fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn split_sections(text: &str) -> Result<BTreeMap<&'static str, Vec<Line<'_>>>, CatalogError> {
    let mut sections: BTreeMap<&'static str, Vec<Line<'_>>> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let offset = content.len() - content.trim_start().len();
        let line = Line { number: idx + 1, text: trimmed, offset };
        if let Some(inner) = trimmed.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| line.err(trimmed.len(), "expected ']'"))?.trim();
            let key = SECTIONS
                .iter()
                .find(|s| **s == name)
                .ok_or_else(|| line.err(1, format!("unknown section '{name}'")))?;
            if sections.contains_key(key) {
                return Err(line.err(0, format!("section [{name}] appears twice")));
            }
            sections.insert(key, Vec::new());
            current = Some(key);
            continue;
        }
        let key = current.ok_or_else(|| line.err(0, "content before the first section header"))?;
        sections.get_mut(key).expect("section registered").push(line);
    }
    Ok(sections)
}

/// Splits a Scalar that is linear in `symbols` into per-symbol coefficients.
fn linear_coefficients(s: &Scalar, symbols: &[String]) -> Result<Vec<Scalar>, String> {
    let mut parts: Vec<Vec<Monomial>> = vec![Vec::new(); symbols.len()];
    for m in s.monomials() {
        let mut exps = m.exponents.clone();
        if let Some(sym) = exps.rates.keys().find(|k| symbols.contains(k)) {
            return Err(format!("'{sym}' cannot appear inside exp()"));
        }
        let present: Vec<&String> = exps.powers.keys().filter(|k| symbols.contains(k)).collect();
        let which = match present.as_slice() {
            [one] if exps.powers[*one] == 1 => (*one).clone(),
            [] => return Err(format!("term '{}' has no frame symbol", Scalar::from_monomial(m.clone()))),
            _ => return Err(format!("term '{}' is not linear in the frame symbols", Scalar::from_monomial(m.clone()))),
        };
        exps.powers.remove(&which);
        let k = symbols.iter().position(|x| *x == which).expect("symbol present");
        parts[k].push(Monomial { coeff: m.coeff, exponents: exps });
    }
    Ok(parts.into_iter().map(Scalar::from_monomials).collect())
}

fn constant_of(line: &Line<'_>, at: usize, s: &Scalar, what: &str) -> Result<AlgNum, CatalogError> {
    s.as_constant().ok_or_else(|| line.err(at, format!("{what} must be a constant, got {s}")))
}

pub fn parse_document(text: &str) -> Result<StructureDocument, CatalogError> {
    let sections = split_sections(text)?;
    let last_line = text.lines().count().max(1);
    let missing = |what: &str| CatalogError::Parse { line: last_line, column: 1, message: format!("missing section [{what}]") };

    let name = match sections.get("name") {
        Some(lines) if lines.len() == 1 => Some(lines[0].text.to_string()),
        Some(lines) if lines.len() > 1 => return Err(lines[1].err(0, "[name] takes a single line")),
        _ => None,
    };

    let chart = match sections.get("chart") {
        Some(lines) => {
            let mut coords = Vec::new();
            for line in lines {
                for (at, w) in line.words() {
                    if coords.iter().any(|c: &String| c == w) {
                        return Err(line.err(at, format!("coordinate '{w}' repeated")));
                    }
                    if !w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || w.starts_with(|c: char| c.is_ascii_digit()) {
                        return Err(line.err(at, format!("invalid coordinate name '{w}'")));
                    }
                    coords.push(w.to_string());
                }
            }
            Some(Chart::new(coords))
        }
        None => None,
    };
    let coords: Vec<String> = chart.as_ref().map(|c| c.coords().to_vec()).unwrap_or_default();

    let frame_lines = sections.get("frame").ok_or_else(|| missing("frame"))?;
    let header = frame_lines.first().ok_or_else(|| CatalogError::Parse {
        line: last_line,
        column: 1,
        message: "frame section is empty".into(),
    })?;
    let words = header.words();
    if words.first().map(|w| w.1) != Some("labels") {
        return Err(header.err(0, "frame section must start with 'labels xi ...'"));
    }
    let labels: Vec<String> = words[1..].iter().map(|(_, w)| w.to_string()).collect();
    if labels.first().map(String::as_str) != Some("xi") {
        return Err(header.err(words.get(1).map_or(header.text.len(), |w| w.0), "the first label must be 'xi'"));
    }
    for (k, (at, w)) in words[1..].iter().enumerate() {
        if labels[..k].contains(&w.to_string()) {
            return Err(header.err(*at, format!("label '{w}' repeated")));
        }
        if coords.contains(&w.to_string()) || w.starts_with(|c: char| c.is_ascii_digit()) || w == &"sqrt2" || w == &"exp" {
            return Err(header.err(*at, format!("label '{w}' clashes with a reserved or coordinate name")));
        }
    }
    let dim = labels.len();
    if dim.is_multiple_of(2) {
        return Err(header.err(0, format!("frame dimension must be odd, got {dim}")));
    }
    if let Some(lines) = sections.get("dim") {
        let line = lines.first().ok_or_else(|| missing("dim contents"))?;
        let d: usize = line.text.parse().map_err(|_| line.err(0, "expected a positive integer"))?;
        if d != dim {
            return Err(line.err(0, format!("dimension {d} does not match the {dim} frame labels")));
        }
    }
    let index = |line: &Line<'_>, at: usize, w: &str| {
        labels.iter().position(|l| l == w).ok_or_else(|| line.err(at, format!("unknown frame label '{w}'")))
    };

    let body = &frame_lines[1..];
    if body.is_empty() && chart.is_some() {
        return Err(header.err(0, "coordinate frame needs 'vector' lines"));
    }
    let frame = if chart.is_some() {
        let dnames: Vec<String> = coords.iter().map(|c| format!("d{c}")).collect();
        let mut names = coords.clone();
        names.extend(dnames.iter().cloned());
        let mut vectors: Vec<Option<Vec<Scalar>>> = vec![None; dim];
        for line in body {
            let (head, rhs_start, rhs) = line.assignment()?;
            match head.as_slice() {
                [(_, "vector"), (at, l)] => {
                    let i = index(line, *at, l)?;
                    if vectors[i].is_some() {
                        return Err(line.err(*at, format!("vector {l} defined twice")));
                    }
                    let s = line.scalar(rhs_start, rhs, &names)?;
                    let coeffs = linear_coefficients(&s, &dnames).map_err(|m| line.err(rhs_start, m))?;
                    vectors[i] = Some(coeffs);
                }
                [(at, "bracket"), ..] => return Err(line.err(*at, "coordinate frames take 'vector' lines only")),
                _ => return Err(line.err(0, "expected 'vector <label> = ...'")),
            }
        }
        let vectors = vectors
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| header.err(0, format!("no vector given for {}", labels[i]))))
            .collect::<Result<Vec<_>, _>>()?;
        FrameDecl::Vectors(vectors)
    } else {
        let mut brackets = Vec::new();
        let mut seen = Vec::new();
        for line in body {
            let (head, rhs_start, rhs) = line.assignment()?;
            match head.as_slice() {
                [(_, "bracket"), (a_at, a), (b_at, b)] => {
                    let i = index(line, *a_at, a)?;
                    let j = index(line, *b_at, b)?;
                    if i == j {
                        return Err(line.err(*b_at, "a bracket needs two distinct labels"));
                    }
                    let key = (i.min(j), i.max(j));
                    if seen.contains(&key) {
                        return Err(line.err(*a_at, format!("bracket [{a}, {b}] defined twice")));
                    }
                    seen.push(key);
                    let s = line.scalar(rhs_start, rhs, &labels)?;
                    let coeffs = if s.is_zero() {
                        vec![Scalar::zero(); dim]
                    } else {
                        linear_coefficients(&s, &labels).map_err(|m| line.err(rhs_start, m))?
                    };
                    let consts = coeffs
                        .iter()
                        .map(|c| constant_of(line, rhs_start, c, "a structure constant"))
                        .collect::<Result<Vec<_>, _>>()?;
                    brackets.push((i, j, consts));
                }
                [(at, "vector"), ..] => return Err(line.err(*at, "'vector' lines need a [chart] section")),
                _ => return Err(line.err(0, "expected 'bracket <label> <label> = ...'")),
            }
        }
        FrameDecl::Brackets(brackets)
    };

    let mut metric = Mat::<AlgNum>::zeros(dim, dim);
    let mut metric_set = vec![false; dim * dim];
    for line in sections.get("metric").ok_or_else(|| missing("metric"))? {
        let (head, rhs_start, rhs) = line.assignment()?;
        let [(_, "g"), (a_at, a), (b_at, b)] = head.as_slice() else {
            return Err(line.err(0, "expected 'g <label> <label> = value'"));
        };
        let (i, j) = (index(line, *a_at, a)?, index(line, *b_at, b)?);
        let v = constant_of(line, rhs_start, &line.scalar(rhs_start, rhs, &coords)?, "a metric component")?;
        if metric_set[i * dim + j] {
            return Err(line.err(*a_at, format!("g({a}, {b}) given twice")));
        }
        metric_set[i * dim + j] = true;
        metric_set[j * dim + i] = true;
        metric.set(i, j, v.clone());
        metric.set(j, i, v);
    }

    let mut phi = Mat::<AlgNum>::zeros(dim, dim);
    let mut phi_set = vec![false; dim];
    if let Some(lines) = sections.get("phi") {
        let mut names = labels.clone();
        names.extend(coords.iter().cloned());
        for line in lines {
            let (head, rhs_start, rhs) = line.assignment()?;
            let [(_, "phi"), (at, a)] = head.as_slice() else {
                return Err(line.err(0, "expected 'phi <label> = ...'"));
            };
            let j = index(line, *at, a)?;
            if phi_set[j] {
                return Err(line.err(*at, format!("phi {a} given twice")));
            }
            phi_set[j] = true;
            let s = line.scalar(rhs_start, rhs, &names)?;
            if s.is_zero() {
                continue;
            }
            let coeffs = linear_coefficients(&s, &labels).map_err(|m| line.err(rhs_start, m))?;
            for (k, c) in coeffs.iter().enumerate() {
                let v = c.as_constant().ok_or_else(|| CatalogError::VariablePhi {
                    location: format!("line {}: phi {a}, component {}", line.number, labels[k]),
                    value: c.to_string(),
                })?;
                phi.set(k, j, v);
            }
        }
    }

    let mut eta = vec![AlgNum::zero(); dim];
    let mut eta_set = vec![false; dim];
    if let Some(lines) = sections.get("eta") {
        for line in lines {
            let (head, rhs_start, rhs) = line.assignment()?;
            let [(_, "eta"), (at, a)] = head.as_slice() else {
                return Err(line.err(0, "expected 'eta <label> = value'"));
            };
            let i = index(line, *at, a)?;
            if eta_set[i] {
                return Err(line.err(*at, format!("eta {a} given twice")));
            }
            eta_set[i] = true;
            eta[i] = constant_of(line, rhs_start, &line.scalar(rhs_start, rhs, &coords)?, "an eta component")?;
        }
    }

    Ok(StructureDocument { name, labels, chart, frame, metric, phi, eta })
}

impl StructureDocument {
    /// Builds the structure and applies the ingestion gates: the Jacobi
    /// identity, `η = g(·, ξ)`, and the almost paracontact axioms.
    pub fn build(&self) -> Result<ParacontactStructure, CatalogError> {
        let frame = match &self.frame {
            FrameDecl::Brackets(b) => {
                let f = FrameSpec::constant_algebra(self.labels.clone(), b.iter().cloned())?;
                if let Some(v) = f.verify_jacobi().into_iter().next() {
                    let (i, j, k) = v.triple;
                    let l = |x: usize| self.labels[x].clone();
                    return Err(CatalogError::Jacobi { triple: (l(i), l(j), l(k)), jacobiator: f.render(&v.jacobiator) });
                }
                f
            }
            FrameDecl::Vectors(v) => {
                let chart = self.chart.clone().expect("coordinate frame has a chart");
                FrameSpec::coordinate_frame(self.labels.clone(), chart, v.clone())?
            }
        };
        let metric = MetricComponents::new(self.metric.clone())?;
        let name = self.name.clone().unwrap_or_else(|| "document".to_string());
        let s = ParacontactStructure::new(name, frame, metric, self.phi.clone(), self.eta.clone())?;
        let report = verify_almost_paracontact(&s);
        if let Some(fail) = report.failures().next() {
            let w = fail.witness.as_ref().expect("failed checks carry witnesses");
            return Err(CatalogError::NotAlmostParacontact {
                check: fail.name.clone(),
                location: w.location.clone(),
                value: w.value.to_string(),
            });
        }
        Ok(s)
    }
}

pub fn load_document(text: &str) -> Result<ParacontactStructure, CatalogError> {
    parse_document(text)?.build()
}

/// Prints a structure in the document format; `load_document` inverts it.
pub fn print_document(s: &ParacontactStructure) -> String {
    let frame = s.frame();
    let labels = frame.labels();
    let dim = s.dim();
    let mut out = String::new();
    out.push_str(&format!("[name]\n{}\n[dim]\n{dim}\n", s.name()));
    match frame.kind() {
        FrameKind::ConstantAlgebra => {
            out.push_str(&format!("[frame]\nlabels {}\n", labels.join(" ")));
            for i in 0..dim {
                for j in i + 1..dim {
                    let b = frame.lie_bracket(i, j);
                    if !b.is_zero() {
                        out.push_str(&format!("bracket {} {} = {}\n", labels[i], labels[j], frame.render(&b)));
                    }
                }
            }
        }
        FrameKind::CoordinateFrame { chart, vectors, .. } => {
            out.push_str(&format!("[chart]\n{}\n", chart.coords().join(" ")));
            out.push_str(&format!("[frame]\nlabels {}\n", labels.join(" ")));
            let dlabels: Vec<String> = chart.coords().iter().map(|c| format!("d{c}")).collect();
            for (i, label) in labels.iter().enumerate() {
                let v = FrameVector::new(vectors.column(i));
                out.push_str(&format!("vector {label} = {}\n", v.render(&dlabels)));
            }
        }
    }
    out.push_str("[metric]\n");
    for i in 0..dim {
        for j in i..dim {
            let v = s.metric().get(i, j);
            if !v.is_zero() {
                out.push_str(&format!("g {} {} = {v}\n", labels[i], labels[j]));
            }
        }
    }
    out.push_str("[phi]\n");
    for (j, label) in labels.iter().enumerate() {
        let col = s.phi_column(j);
        if !col.is_zero() {
            out.push_str(&format!("phi {label} = {}\n", frame.render(&col)));
        }
    }
    out.push_str("[eta]\n");
    for (i, v) in s.eta().iter().enumerate() {
        if !v.is_zero() {
            out.push_str(&format!("eta {} = {v}\n", labels[i]));
        }
    }
    out
}
