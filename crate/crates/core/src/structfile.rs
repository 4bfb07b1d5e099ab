//! Line-oriented text format for structure equations and structures.
//!
//! ```text
//! # comment
//! name F2
//! dim 5
//! param r = 1
//! param a
//! de2 = r : 1 2 ; 3*r : 3 4 ; 3*r^2 : 3 5
//! de5 = -2 : 1 4 ; -2 : 2 3
//! eta = 1 : 5
//! omega1 = 1 : 1 2 ; 1 : 3 4
//! ```
//!
//! Omitted `deN` lines mean `deN = 0`. A term is `coefficient : indices`;
//! coefficients use the polynomial grammar of [`crate::scalars::parse_poly`].
//! SU(2) forms are `eta`, `omega1..omega3`; SU(3) forms are `F`, `psi_plus`,
//! `psi_minus`.

use crate::exterior::Form;
use crate::liealg::LieAlgebra;
use crate::scalars::{parse_poly, parse_rational, Poly, Rational};
use crate::structures::{SU2Structure, SU3Structure};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureFile {
    pub name: Option<String>,
    pub dim: usize,
    /// Declared parameters; `None` keeps the parameter symbolic.
    pub params: BTreeMap<String, Option<Rational>>,
    /// Differentials as written, before binding parameters.
    pub d: Vec<Form<Poly>>,
    pub su2: Option<SU2Structure<Poly>>,
    pub su3: Option<SU3Structure<Poly>>,
}

impl StructureFile {
    pub fn bindings(&self) -> BTreeMap<String, Rational> {
        self.params.iter().filter_map(|(k, v)| v.clone().map(|v| (k.clone(), v))).collect()
    }

    /// The algebra with bound parameters substituted.
    pub fn algebra(&self) -> LieAlgebra<Poly> {
        LieAlgebra::new(self.d.clone()).expect("validated on parse").subst(&self.bindings())
    }

    pub fn su2_bound(&self) -> Option<SU2Structure<Poly>> {
        let b = self.bindings();
        self.su2.as_ref().map(|s| s.map(|c| c.subst(&b)))
    }

    pub fn su3_bound(&self) -> Option<SU3Structure<Poly>> {
        let b = self.bindings();
        self.su3.as_ref().map(|s| s.map(|c| c.subst(&b)))
    }
}

const SU2_KEYS: [&str; 4] = ["eta", "omega1", "omega2", "omega3"];
const SU3_KEYS: [&str; 3] = ["F", "psi_plus", "psi_minus"];

fn form_degree(key: &str) -> Option<usize> {
    match key {
        "eta" => Some(1),
        "omega1" | "omega2" | "omega3" | "F" => Some(2),
        "psi_plus" | "psi_minus" => Some(3),
        _ => None,
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> FileError {
        FileError { line: self.no, column: offset + 1, message: message.into() }
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Byte offset of `part` inside `whole` (both from the same allocation).
fn offset_in(whole: &str, part: &str) -> usize {
    part.as_ptr() as usize - whole.as_ptr() as usize
}

fn parse_terms(
    line: &Line<'_>,
    body: &str,
    dim: usize,
    degree: usize,
    params: &BTreeMap<String, Option<Rational>>,
) -> Result<Form<Poly>, FileError> {
    let mut form = Form::zero(dim);
    if body.trim() == "0" {
        return Ok(form);
    }
    for term in body.split(';') {
        let start = offset_in(line.text, term);
        let (coef, idx) = term.split_once(':').ok_or_else(|| line.err(start, "expected 'coefficient : indices'"))?;
        let coef_start = offset_in(line.text, coef) + (coef.len() - coef.trim_start().len());
        let c = parse_poly(coef.trim()).map_err(|e| line.err(coef_start + e.column - 1, e.message))?;
        for v in c.variables() {
            if c.depends_on(v) && !params.contains_key(v) {
                return Err(line.err(coef_start, format!("undeclared parameter '{v}'")));
            }
        }
        let mut indices = Vec::new();
        let idx_start = offset_in(line.text, idx);
        for tok in idx.split_whitespace() {
            let col = offset_in(line.text, tok);
            let i: usize = tok.parse().map_err(|_| line.err(col, format!("bad index '{tok}'")))?;
            if i == 0 || i > dim {
                return Err(line.err(col, format!("index {i} outside 1..{dim}")));
            }
            if indices.last().is_some_and(|&p| p >= i) {
                return Err(line.err(col, "indices must be strictly increasing"));
            }
            indices.push(i);
        }
        if indices.len() != degree {
            return Err(line.err(idx_start, format!("expected {degree} indices, got {}", indices.len())));
        }
        form = form + Form::term(dim, c, &indices);
    }
    Ok(form)
}

pub fn parse_structure_file(text: &str) -> Result<StructureFile, FileError> {
    let mut name = None;
    let mut dim: Option<usize> = None;
    let mut params: BTreeMap<String, Option<Rational>> = BTreeMap::new();
    let mut d: BTreeMap<usize, Form<Poly>> = BTreeMap::new();
    let mut forms: BTreeMap<String, Form<Poly>> = BTreeMap::new();
    let mut last_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line = Line { no: no + 1, text: raw };
        last_line = no + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let content = content.trim();
        if let Some(rest) = content.strip_prefix("name ") {
            name = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = content.strip_prefix("dim ") {
            if dim.is_some() {
                return Err(line.err(lead, "duplicate 'dim'"));
            }
            let n: usize = rest.trim().parse().map_err(|_| line.err(lead + 4, "dim must be an integer"))?;
            if !(1..=crate::exterior::MAX_DIM).contains(&n) {
                return Err(line.err(lead + 4, format!("dim must be in 1..={}", crate::exterior::MAX_DIM)));
            }
            dim = Some(n);
            continue;
        }
        if let Some(rest) = content.strip_prefix("param ") {
            let (key, value) = match rest.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (rest.trim(), None),
            };
            if !is_ident(key) {
                return Err(line.err(lead + 6, format!("bad parameter name '{key}'")));
            }
            if params.contains_key(key) {
                return Err(line.err(lead + 6, format!("duplicate parameter '{key}'")));
            }
            let value = match value {
                Some(v) => Some(parse_rational(v).ok_or_else(|| line.err(offset_in(raw, v), format!("bad rational '{v}'")))?),
                None => None,
            };
            params.insert(key.to_string(), value);
            continue;
        }
        let (key, body) = content.split_once('=').ok_or_else(|| line.err(lead, "expected 'key = terms'"))?;
        let key = key.trim();
        let n = dim.ok_or_else(|| line.err(lead, "'dim' must come before forms"))?;
        if let Some(k) = key.strip_prefix("de").and_then(|k| k.parse::<usize>().ok()) {
            if k == 0 || k > n {
                return Err(line.err(lead, format!("de{k} outside 1..{n}")));
            }
            if d.contains_key(&k) {
                return Err(line.err(lead, format!("duplicate 'de{k}'")));
            }
            d.insert(k, parse_terms(&line, body, n, 2, &params)?);
        } else if let Some(deg) = form_degree(key) {
            if forms.contains_key(key) {
                return Err(line.err(lead, format!("duplicate '{key}'")));
            }
            forms.insert(key.to_string(), parse_terms(&line, body, n, deg, &params)?);
        } else {
            return Err(line.err(lead, format!("unknown key '{key}'")));
        }
    }
    let end = Line { no: last_line.max(1), text: "" };
    let dim = dim.ok_or_else(|| end.err(0, "missing 'dim'"))?;
    let d: Vec<Form<Poly>> = (1..=dim).map(|k| d.remove(&k).unwrap_or_else(|| Form::zero(dim))).collect();
    let take = |keys: &[&str], forms: &BTreeMap<String, Form<Poly>>| -> Result<Option<Vec<Form<Poly>>>, FileError> {
        let present: Vec<&str> = keys.iter().copied().filter(|k| forms.contains_key(*k)).collect();
        if present.is_empty() {
            return Ok(None);
        }
        if present.len() != keys.len() {
            return Err(end.err(0, format!("incomplete structure: need all of {}", keys.join(", "))));
        }
        Ok(Some(keys.iter().map(|k| forms[*k].clone()).collect()))
    };
    let su2 = take(&SU2_KEYS, &forms)?.map(|v| SU2Structure {
        eta: v[0].clone(),
        omega1: v[1].clone(),
        omega2: v[2].clone(),
        omega3: v[3].clone(),
    });
    let su3 = take(&SU3_KEYS, &forms)?.map(|v| SU3Structure { f: v[0].clone(), psi_plus: v[1].clone(), psi_minus: v[2].clone() });
    if su2.is_some() && dim != 5 {
        return Err(end.err(0, "an SU(2)-structure needs dim 5"));
    }
    if su3.is_some() && dim != 6 {
        return Err(end.err(0, "an SU(3)-structure needs dim 6"));
    }
    Ok(StructureFile { name, dim, params, d, su2, su3 })
}

fn render_terms(f: &Form<Poly>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.terms()
        .map(|(m, c)| {
            let idx: Vec<String> = crate::exterior::mask_indices(m).iter().map(|i| i.to_string()).collect();
            format!("{c} : {}", idx.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}

pub fn render(file: &StructureFile) -> String {
    let mut out = String::new();
    if let Some(n) = &file.name {
        let _ = writeln!(out, "name {n}");
    }
    let _ = writeln!(out, "dim {}", file.dim);
    for (k, v) in &file.params {
        match v {
            Some(v) => writeln!(out, "param {k} = {v}"),
            None => writeln!(out, "param {k}"),
        }
        .expect("string write");
    }
    for (i, f) in file.d.iter().enumerate() {
        if !f.is_zero() {
            let _ = writeln!(out, "de{} = {}", i + 1, render_terms(f));
        }
    }
    if let Some(s) = &file.su2 {
        for (n, f) in s.named() {
            let _ = writeln!(out, "{n} = {}", render_terms(f));
        }
    }
    if let Some(s) = &file.su3 {
        for (n, f) in s.named() {
            let _ = writeln!(out, "{n} = {}", render_terms(f));
        }
    }
    out
}

/// Text for an algebra (and optional SU(2)-structure) whose parameters are
/// already substituted; bound values are recorded as `param` lines.
pub fn render_structure_file(
    name: &str,
    params: &BTreeMap<String, Rational>,
    algebra: &LieAlgebra<Poly>,
    su2: Option<&SU2Structure<Poly>>,
) -> String {
    let mut declared: BTreeMap<String, Option<Rational>> = params.iter().map(|(k, v)| (k.clone(), Some(v.clone()))).collect();
    for f in algebra.differentials() {
        for (_, c) in f.terms() {
            for v in c.variables() {
                if c.depends_on(v) {
                    declared.entry(v.clone()).or_insert(None);
                }
            }
        }
    }
    render(&StructureFile {
        name: Some(name.to_string()),
        dim: algebra.dim(),
        params: declared,
        d: algebra.differentials().to_vec(),
        su2: su2.cloned(),
        su3: None,
    })
}

/// The rational algebra when every parameter is bound.
pub fn rational_algebra(file: &StructureFile) -> Option<LieAlgebra<Rational>> {
    file.algebra().try_map(|c| c.as_rational().ok_or(())).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dump, family, params, FamilyId};
    use crate::scalars::rat;

    #[test]
    fn parses_example() {
        let text = "name F2\ndim 5\nparam r = 1\nde2 = r : 1 2 ; 3*r : 3 4 ; 3*r^2 : 3 5\nde5 = -2 : 1 4 ; -2 : 2 3\n";
        let f = parse_structure_file(text).unwrap();
        assert_eq!(f.dim, 5);
        let g = f.algebra();
        let expected = family(FamilyId::F2, &params(&[("r", rat(1, 1))])).unwrap().algebra;
        assert_eq!(g.de(2), expected.de(2));
        assert!(g.de(3).is_zero());
    }

    #[test]
    fn diagnostics() {
        let e = parse_structure_file("dim 5\nde2 = 3*q : 1 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse_structure_file("dim 5\nparam r\nde2 = 3*r^ : 1 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.column >= 7);
        let e = parse_structure_file("dim 5\nde2 = 1 : 2 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 13));
        let e = parse_structure_file("dim 5\nfoo = 1 : 1 2\n").unwrap_err();
        assert!(e.message.contains("unknown key"));
        let e = parse_structure_file("dim 5\neta = 1 : 5\n").unwrap_err();
        assert!(e.message.contains("incomplete"));
        assert!(parse_structure_file("de1 = 1 : 1 2\n").is_err());
    }

    #[test]
    fn catalog_round_trip() {
        for id in FamilyId::ALL {
            let e = family(id, &Default::default()).unwrap();
            let text = dump(&e);
            let f = parse_structure_file(&text).unwrap_or_else(|err| panic!("{id}: {err}\n{text}"));
            assert_eq!(f.algebra(), e.algebra, "{id}");
            assert_eq!(f.su2_bound().unwrap(), e.structure);
        }
        let e = family(FamilyId::F7, &params(&[("a", rat(1, 2)), ("r", rat(3, 1))])).unwrap();
        let f = parse_structure_file(&dump(&e)).unwrap();
        assert_eq!(f.algebra(), e.algebra);
        assert_eq!(f.bindings(), e.params);
    }
}
