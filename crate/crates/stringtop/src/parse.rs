//! The `.alg` presentation format: sectioned key-value text describing a
//! Sullivan algebra, a finite duality algebra, or a classifying-space
//! presentation. Polynomials are written over the declared generator names
//! with integer or rational coefficients, `^` for powers, `*` optional.
//!
//! ```text
//! kind: sullivan
//! name: s2-sullivan
//!
//! [generators]
//! x = 2
//! y = 3
//!
//! [differential]
//! y = x^2
//! ```
//!
//! The serializer emits exactly this shape, and parsing its output returns
//! the identical presentation.

use crate::cdga::{CdgaVerdict, FreeCdga, Monomial, Poly};
use crate::fixtures::BgPresentation;
use crate::graded::Degree;
use crate::pd::FinitePdAlgebra;
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Validation { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line, col, msg: msg.into() }
    }
}

/// A parsed presentation file.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraFile {
    Sullivan { name: String, truncation: Option<Degree>, algebra: FreeCdga },
    FinitePd { name: String, truncation: Option<Degree>, algebra: FinitePdAlgebra },
    Bg { truncation: Option<Degree>, presentation: BgPresentation },
}

impl AlgebraFile {
    pub fn name(&self) -> &str {
        match self {
            AlgebraFile::Sullivan { name, .. } => name,
            AlgebraFile::FinitePd { name, .. } => name,
            AlgebraFile::Bg { presentation, .. } => &presentation.name,
        }
    }

    pub fn truncation(&self) -> Option<Degree> {
        match self {
            AlgebraFile::Sullivan { truncation, .. } => *truncation,
            AlgebraFile::FinitePd { truncation, .. } => *truncation,
            AlgebraFile::Bg { truncation, .. } => *truncation,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraFile::Sullivan { .. } => "sullivan",
            AlgebraFile::FinitePd { .. } => "finite-pd",
            AlgebraFile::Bg { .. } => "bg",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Caret,
    Star,
    Plus,
    Minus,
    Slash,
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(BigInt::from_str(&text).unwrap()), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            let tok = match c {
                '^' => Tok::Caret,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '/' => Tok::Slash,
                other => {
                    return Err(ParseError::at(
                        line_no,
                        col,
                        format!("unexpected character {other:?}"),
                    ))
                }
            };
            out.push((tok, col));
            i += 1;
        }
    }
    Ok(out)
}

/// Generic polynomial over named symbols: list of (coefficient, [(name, exponent)]).
type RawPoly = Vec<(Rat, Vec<(String, u32)>)>;

fn parse_poly(line: &str, line_no: usize) -> Result<RawPoly, ParseError> {
    let toks = lex_line(line, line_no)?;
    let mut out: RawPoly = Vec::new();
    let mut i = 0;
    let mut sign = Rat::one();
    let mut expect_term = true;
    while i < toks.len() {
        // sign prefix
        loop {
            match toks.get(i) {
                Some((Tok::Plus, _)) => {
                    i += 1;
                }
                Some((Tok::Minus, _)) => {
                    sign = -sign;
                    i += 1;
                }
                _ => break,
            }
        }
        if i >= toks.len() {
            if expect_term {
                let col = toks.last().map(|(_, c)| *c).unwrap_or(1);
                return Err(ParseError::at(line_no, col, "dangling sign"));
            }
            break;
        }
        // coefficient
        let mut coeff = sign.clone();
        sign = Rat::one();
        let mut saw_anything = false;
        if let Some((Tok::Int(n), _)) = toks.get(i) {
            let mut c = Rat::from_integer(n.clone());
            i += 1;
            if let Some((Tok::Slash, _)) = toks.get(i) {
                match toks.get(i + 1) {
                    Some((Tok::Int(d), col)) => {
                        if d.is_zero() {
                            return Err(ParseError::at(line_no, *col, "zero denominator"));
                        }
                        c /= Rat::from_integer(d.clone());
                        i += 2;
                    }
                    other => {
                        let col = other.map(|(_, c)| *c).unwrap_or(0);
                        return Err(ParseError::at(line_no, col, "expected denominator"));
                    }
                }
            }
            coeff *= c;
            saw_anything = true;
            if let Some((Tok::Star, _)) = toks.get(i) {
                i += 1;
            }
        }
        // factors
        let mut factors: Vec<(String, u32)> = Vec::new();
        while let Some((Tok::Ident(name), _)) = toks.get(i) {
            let name = name.clone();
            i += 1;
            let mut exp = 1u32;
            if let Some((Tok::Caret, _)) = toks.get(i) {
                match toks.get(i + 1) {
                    Some((Tok::Int(n), col)) => {
                        exp = u32::try_from(n.clone()).map_err(|_| {
                            ParseError::at(line_no, *col, "exponent out of range")
                        })?;
                        i += 2;
                    }
                    other => {
                        let col = other.map(|(_, c)| *c).unwrap_or(0);
                        return Err(ParseError::at(line_no, col, "expected exponent"));
                    }
                }
            }
            factors.push((name, exp));
            saw_anything = true;
            if let Some((Tok::Star, _)) = toks.get(i) {
                i += 1;
            }
        }
        if !saw_anything {
            let col = toks.get(i).map(|(_, c)| *c).unwrap_or(1);
            return Err(ParseError::at(line_no, col, "expected a term"));
        }
        out.push((coeff, factors));
        expect_term = false;
        // next term must start with +/-
        if i < toks.len() {
            match toks[i] {
                (Tok::Plus, _) | (Tok::Minus, _) => {}
                (_, col) => return Err(ParseError::at(line_no, col, "expected + or -")),
            }
        }
    }
    Ok(out)
}

fn raw_to_poly(
    raw: &RawPoly,
    algebra_gens: &[(String, Degree)],
    line_no: usize,
) -> Result<Poly, ParseError> {
    let gens: Vec<crate::cdga::Generator> = algebra_gens
        .iter()
        .map(|(name, degree)| crate::cdga::Generator { name: name.clone(), degree: *degree })
        .collect();
    let n = gens.len();
    let mut poly = Poly::zero();
    for (coeff, factors) in raw {
        // validate exponents of odd generators before multiplying out
        let mut exps = vec![0u32; n];
        for (name, e) in factors {
            let idx = algebra_gens.iter().position(|(gn, _)| gn == name).ok_or_else(|| {
                ParseError::Validation {
                    line: line_no,
                    msg: format!("unknown generator {name}"),
                }
            })?;
            exps[idx] += e;
        }
        for (i, g) in gens.iter().enumerate() {
            if g.degree % 2 != 0 && exps[i] > 1 {
                return Err(ParseError::Validation {
                    line: line_no,
                    msg: format!("odd generator {} appears with exponent {}", g.name, exps[i]),
                });
            }
        }
        // multiply the written factors in order, so reorderings into
        // canonical form pick up their Koszul signs
        let mut term = Poly::term(Monomial::one(n), coeff.clone());
        for (name, e) in factors {
            let idx = algebra_gens.iter().position(|(gn, _)| gn == name).unwrap();
            term = term.mul(&Poly::generator(n, idx).pow(*e, &gens), &gens);
        }
        poly = poly.add(&term);
    }
    Ok(poly)
}

fn raw_to_combo(raw: &RawPoly, line_no: usize) -> Result<Vec<(String, Rat)>, ParseError> {
    let mut out = Vec::new();
    for (coeff, factors) in raw {
        if coeff.is_zero() {
            continue;
        }
        match factors.as_slice() {
            [(name, 1)] => out.push((name.clone(), coeff.clone())),
            [] => {
                return Err(ParseError::Validation {
                    line: line_no,
                    msg: "constant terms are not basis labels; write 0 for the zero value"
                        .to_string(),
                })
            }
            _ => {
                return Err(ParseError::Validation {
                    line: line_no,
                    msg: "expected a linear combination of basis labels".to_string(),
                })
            }
        }
    }
    Ok(out)
}

struct RawFile {
    top: BTreeMap<String, (String, usize)>,
    sections: BTreeMap<String, Vec<(String, usize)>>,
}

fn split_sections(text: &str) -> Result<RawFile, ParseError> {
    let mut top = BTreeMap::new();
    let mut sections: BTreeMap<String, Vec<(String, usize)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                ParseError::at(line_no, line.len(), "unterminated section header")
            })?;
            let name = name.trim().to_string();
            sections.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        match &current {
            None => {
                let (key, value) = line.split_once(':').ok_or_else(|| {
                    ParseError::at(line_no, 1, "expected `key: value` before any section")
                })?;
                top.insert(key.trim().to_string(), (value.trim().to_string(), line_no));
            }
            Some(section) => {
                sections.get_mut(section).unwrap().push((line.to_string(), line_no));
            }
        }
    }
    Ok(RawFile { top, sections })
}

fn split_assignment(line: &str, line_no: usize) -> Result<(&str, &str), ParseError> {
    line.split_once('=')
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or_else(|| ParseError::at(line_no, 1, "expected `lhs = rhs`"))
}

/// Parses an algebra presentation and runs the kind's validity check.
pub fn parse_algebra(text: &str) -> Result<AlgebraFile, ParseError> {
    let raw = split_sections(text)?;
    let kind = raw
        .top
        .get("kind")
        .ok_or_else(|| ParseError::Invalid("missing `kind:` entry".to_string()))?
        .0
        .clone();
    let name = raw.top.get("name").map(|(v, _)| v.clone()).unwrap_or_else(|| "unnamed".to_string());
    let truncation = match raw.top.get("truncation") {
        Some((v, line)) => Some(v.parse::<Degree>().map_err(|_| {
            ParseError::Validation { line: *line, msg: "truncation must be an integer".into() }
        })?),
        None => None,
    };
    match kind.as_str() {
        "sullivan" => {
            let gens = parse_generator_section(&raw, "generators")?;
            let mut differential = Vec::new();
            if let Some(lines) = raw.sections.get("differential") {
                for (line, line_no) in lines {
                    let (lhs, rhs) = split_assignment(line, *line_no)?;
                    let rawp = parse_poly(rhs, *line_no)?;
                    let poly = raw_to_poly(&rawp, &gens, *line_no)?;
                    differential.push((lhs.to_string(), poly, *line_no));
                }
            }
            let algebra = FreeCdga::new(
                gens.clone(),
                differential.iter().map(|(n, p, _)| (n.clone(), p.clone())).collect(),
            )
            .map_err(|e| ParseError::Invalid(format!("{e}")))?;
            match algebra.check_cdga(i32::MAX - 2) {
                CdgaVerdict::Pass => {}
                CdgaVerdict::Fail { generator, d_squared } => {
                    return Err(ParseError::Invalid(format!(
                        "d\u{b2}({generator}) = {d_squared} \u{2260} 0"
                    )))
                }
            }
            Ok(AlgebraFile::Sullivan { name, truncation, algebra })
        }
        "finite-pd" => {
            let basis = parse_generator_section(&raw, "basis")?;
            let dimension = raw
                .top
                .get("dimension")
                .ok_or_else(|| ParseError::Invalid("missing `dimension:`".to_string()))
                .and_then(|(v, line)| {
                    v.parse::<Degree>().map_err(|_| ParseError::Validation {
                        line: *line,
                        msg: "dimension must be an integer".into(),
                    })
                })?;
            let fundamental = raw
                .top
                .get("fundamental-class")
                .ok_or_else(|| ParseError::Invalid("missing `fundamental-class:`".to_string()))?
                .0
                .clone();
            let unit = match raw.sections.get("unit") {
                Some(lines) if lines.len() == 1 => lines[0].0.trim().to_string(),
                Some(lines) if lines.is_empty() => {
                    return Err(ParseError::Invalid("empty [unit] section".to_string()))
                }
                Some(lines) => {
                    return Err(ParseError::Validation {
                        line: lines[1].1,
                        msg: "the [unit] section holds exactly one label".into(),
                    })
                }
                None => return Err(ParseError::Invalid("missing [unit] section".to_string())),
            };
            let mut products = Vec::new();
            if let Some(lines) = raw.sections.get("multiplication") {
                for (line, line_no) in lines {
                    let (lhs, rhs) = split_assignment(line, *line_no)?;
                    let toks = lex_line(lhs, *line_no)?;
                    let labels: Vec<String> = toks
                        .iter()
                        .filter_map(|(t, _)| match t {
                            Tok::Ident(s) => Some(s.clone()),
                            _ => None,
                        })
                        .collect();
                    if labels.len() != 2 {
                        return Err(ParseError::at(
                            *line_no,
                            1,
                            "multiplication keys are pairs `a * b`",
                        ));
                    }
                    let rawp = parse_poly(rhs, *line_no)?;
                    let combo = raw_to_combo(&rawp, *line_no)?;
                    products.push(((labels[0].clone(), labels[1].clone()), combo));
                }
            }
            let mut differential = Vec::new();
            if let Some(lines) = raw.sections.get("differential") {
                for (line, line_no) in lines {
                    let (lhs, rhs) = split_assignment(line, *line_no)?;
                    let rawp = parse_poly(rhs, *line_no)?;
                    let combo = raw_to_combo(&rawp, *line_no)?;
                    differential.push((lhs.to_string(), combo));
                }
            }
            let algebra = FinitePdAlgebra::new(
                &name,
                basis,
                &unit,
                dimension,
                &fundamental,
                products,
                differential,
            )
            .map_err(|e| ParseError::Invalid(format!("{e}")))?;
            Ok(AlgebraFile::FinitePd { name, truncation, algebra })
        }
        "bg" => {
            let degrees_line = raw
                .top
                .get("degrees")
                .ok_or_else(|| ParseError::Invalid("missing `degrees:`".to_string()))?;
            let degrees: Result<Vec<Degree>, _> = degrees_line
                .0
                .split(',')
                .map(|s| s.trim().parse::<Degree>())
                .collect();
            let degrees = degrees.map_err(|_| ParseError::Validation {
                line: degrees_line.1,
                msg: "degrees must be a comma-separated list of integers".into(),
            })?;
            let presentation =
                BgPresentation::new(&name, degrees).map_err(ParseError::Invalid)?;
            Ok(AlgebraFile::Bg { truncation, presentation })
        }
        other => Err(ParseError::Invalid(format!(
            "unknown kind {other:?}; expected sullivan, finite-pd, or bg"
        ))),
    }
}

fn parse_generator_section(
    raw: &RawFile,
    section: &str,
) -> Result<Vec<(String, Degree)>, ParseError> {
    let lines = raw
        .sections
        .get(section)
        .ok_or_else(|| ParseError::Invalid(format!("missing [{section}] section")))?;
    let mut out = Vec::new();
    for (line, line_no) in lines {
        let (lhs, rhs) = split_assignment(line, *line_no)?;
        let degree = rhs.parse::<Degree>().map_err(|_| ParseError::Validation {
            line: *line_no,
            msg: format!("degree of {lhs} must be an integer"),
        })?;
        out.push((lhs.to_string(), degree));
    }
    Ok(out)
}

/// Canonical serialization; parsing the output reproduces the presentation.
pub fn serialize_algebra(file: &AlgebraFile) -> String {
    let mut out = String::new();
    match file {
        AlgebraFile::Sullivan { name, truncation, algebra } => {
            out.push_str("kind: sullivan\n");
            out.push_str(&format!("name: {name}\n"));
            if let Some(n) = truncation {
                out.push_str(&format!("truncation: {n}\n"));
            }
            out.push_str("\n[generators]\n");
            for g in algebra.generators() {
                out.push_str(&format!("{} = {}\n", g.name, g.degree));
            }
            let nontrivial: Vec<usize> = (0..algebra.generators().len())
                .filter(|&i| !algebra.d_value(i).is_zero())
                .collect();
            if !nontrivial.is_empty() {
                out.push_str("\n[differential]\n");
                for i in nontrivial {
                    out.push_str(&format!(
                        "{} = {}\n",
                        algebra.generators()[i].name,
                        algebra.d_value(i).display(algebra.generators())
                    ));
                }
            }
        }
        AlgebraFile::FinitePd { name, truncation, algebra } => {
            out.push_str("kind: finite-pd\n");
            out.push_str(&format!("name: {name}\n"));
            out.push_str(&format!("dimension: {}\n", algebra.dimension()));
            out.push_str(&format!("fundamental-class: {}\n", algebra.fundamental_label()));
            if let Some(n) = truncation {
                out.push_str(&format!("truncation: {n}\n"));
            }
            out.push_str("\n[basis]\n");
            let basis = algebra.basis();
            let mut all: Vec<(Degree, String)> = Vec::new();
            for d in basis.degrees() {
                for l in basis.labels(d) {
                    all.push((d, l.clone()));
                }
            }
            for (d, l) in &all {
                out.push_str(&format!("{l} = {d}\n"));
            }
            out.push_str("\n[unit]\n");
            out.push_str(&format!("{}\n", basis.label(0, algebra.unit_index())));
            out.push_str("\n[multiplication]\n");
            let table = algebra.to_table();
            for (i, (da, la)) in all.iter().enumerate() {
                for (db, lb) in all.iter().skip(i) {
                    if *da == 0 || *db == 0 {
                        continue;
                    }
                    let ia = basis.index_of(*da, la).unwrap();
                    let ib = basis.index_of(*db, lb).unwrap();
                    let value = table.mul_basis(*da, ia, *db, ib);
                    let rendered = if value.is_empty() {
                        "0".to_string()
                    } else {
                        value
                            .iter()
                            .map(|(k, c)| {
                                let l = basis.label(da + db, *k);
                                if c.is_one() {
                                    l.to_string()
                                } else {
                                    format!("{c}*{l}")
                                }
                            })
                            .collect::<Vec<_>>()
                            .join(" + ")
                    };
                    out.push_str(&format!("{la} * {lb} = {rendered}\n"));
                }
            }
            if !algebra.differential().is_zero() {
                out.push_str("\n[differential]\n");
                for (d, l) in &all {
                    let i = basis.index_of(*d, l).unwrap();
                    let image = algebra.differential().block(*d).column(i);
                    let terms: Vec<String> = image
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| {
                            let tl = basis.label(d + 1, k);
                            if c.is_one() {
                                tl.to_string()
                            } else {
                                format!("{c}*{tl}")
                            }
                        })
                        .collect();
                    if !terms.is_empty() {
                        out.push_str(&format!("{l} = {}\n", terms.join(" + ")));
                    }
                }
            }
        }
        AlgebraFile::Bg { truncation, presentation } => {
            out.push_str("kind: bg\n");
            out.push_str(&format!("name: {}\n", presentation.name));
            let degrees: Vec<String> =
                presentation.degrees.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("degrees: {}\n", degrees.join(", ")));
            if let Some(n) = truncation {
                out.push_str(&format!("truncation: {n}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const S2_SULLIVAN: &str = "\
kind: sullivan
name: s2-sullivan

[generators]
x = 2
y = 3

[differential]
y = x^2
";

    const S3_PD: &str = "\
kind: finite-pd
name: s3
dimension: 3
fundamental-class: x

[basis]
1 = 0
x = 3

[unit]
1

[multiplication]
x * x = 0
";

    #[test]
    fn sullivan_file_parses() {
        let f = parse_algebra(S2_SULLIVAN).unwrap();
        match &f {
            AlgebraFile::Sullivan { algebra, .. } => {
                assert_eq!(algebra.generators().len(), 2);
                assert!(!algebra.d_value(1).is_zero());
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn finite_pd_file_parses() {
        let f = parse_algebra(S3_PD).unwrap();
        match &f {
            AlgebraFile::FinitePd { algebra, .. } => {
                assert_eq!(algebra.dimension(), 3);
                assert!(algebra.check_poincare_duality().unwrap().passed());
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn degree_violation_reported() {
        let bad = "\
kind: sullivan
name: bad

[generators]
x = 2
y = 3

[differential]
y = x
";
        let err = parse_algebra(bad).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("does not raise degree"), "{msg}");
    }

    #[test]
    fn syntax_error_carries_position() {
        let bad = "\
kind: sullivan
name: bad

[generators]
x = 2

[differential]
x = x ?
";
        match parse_algebra(bad).unwrap_err() {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 8);
                assert!(col > 1);
            }
            e => panic!("expected syntax error, got {e}"),
        }
    }

    #[test]
    fn round_trip_is_identity() {
        for text in [S2_SULLIVAN, S3_PD] {
            let first = parse_algebra(text).unwrap();
            let emitted = serialize_algebra(&first);
            let second = parse_algebra(&emitted).unwrap();
            assert_eq!(first, second);
            assert_eq!(emitted, serialize_algebra(&second));
        }
        let bg = "kind: bg\nname: bs1\ndegrees: 2\n";
        let first = parse_algebra(bg).unwrap();
        let second = parse_algebra(&serialize_algebra(&first)).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn rational_coefficients_and_optional_star() {
        let text = "\
kind: sullivan
name: coeffs

[generators]
a = 3
b = 3
c = 5

[differential]
c = 1/2 a b - 2*b*a
";
        let f = parse_algebra(text).unwrap();
        match f {
            AlgebraFile::Sullivan { algebra, .. } => {
                // ba = −ab, so the value is (1/2 + 2)·ab
                let d = algebra.d_value(2);
                let rendered = d.display(algebra.generators());
                assert_eq!(rendered, "5/2*a*b");
            }
            _ => panic!("wrong kind"),
        }
    }
}
