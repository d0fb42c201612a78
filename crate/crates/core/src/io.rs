//! The line-oriented `.crn` text format.
//!
//! ```text
//! # comment
//! species A B                      # optional; fixes species order
//! reaction r1: 2 A + B -> 0        # `0` is the zero complex
//! kinetics r1: A=0.5, B=1          # unlisted species have order 0
//! rate r1: 2.5                     # optional; all or none
//! block b1: r1, r2                 # optional decomposition
//! ```
//!
//! Reactions without a `kinetics` line get mass-action orders (their
//! reactant complex). Decimals are read exactly: `0.36` is `9/25`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{Signed, Zero};

use crate::decomposition::{decomposition_from_labels, Decomposition, DecompositionError};
use crate::kinetics::{KineticOrderMatrix, RateVector};
use crate::linalg::{format_rational, parse_rational, Matrix, Rational};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrnError {
    /// 1-based; 0 when the error is not tied to a line.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for CrnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for CrnError {}

/// A parsed `.crn` file.
#[derive(Debug, Clone)]
pub struct CrnDocument {
    pub network: Network,
    pub kinetics: KineticOrderMatrix,
    pub rates: Option<RateVector>,
    /// Named blocks of reaction labels, in file order.
    pub blocks: Vec<(String, Vec<String>)>,
}

impl CrnDocument {
    /// The decomposition given by `block` lines, if any.
    pub fn decomposition(&self) -> Option<Result<Decomposition, DecompositionError>> {
        if self.blocks.is_empty() {
            return None;
        }
        let labels: Vec<Vec<String>> = self.blocks.iter().map(|(_, b)| b.clone()).collect();
        Some(decomposition_from_labels(&self.network, &labels))
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, at: &str, message: impl Into<String>) -> CrnError {
        // `at` is a subslice of `text` whenever possible.
        let offset = (at.as_ptr() as usize).checked_sub(self.text.as_ptr() as usize).filter(|o| *o <= self.text.len());
        CrnError {
            line: self.number,
            column: offset.map_or(1, |o| self.text[..o].chars().count() + 1),
            message: message.into(),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-' | '[' | ']'))
}

fn is_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
}

/// Splits `head: rest`, checking the label.
fn labelled<'a>(line: &Line<'a>, body: &'a str, what: &str) -> Result<(&'a str, &'a str), CrnError> {
    let Some((label, rest)) = body.split_once(':') else {
        return Err(line.error(body, format!("expected `{what} <label>: ...`")));
    };
    let label = label.trim();
    if !is_label(label) {
        return Err(line.error(body.trim_start(), format!("invalid label `{label}`")));
    }
    Ok((label, rest))
}

fn parse_term<'a>(line: &Line<'a>, term: &'a str) -> Result<(Rational, &'a str), CrnError> {
    let parts: Vec<&str> = term.split_whitespace().collect();
    let (coef, name) = match parts.as_slice() {
        [name] if is_identifier(name) => (Rational::from_integer(1.into()), *name),
        [glued] => {
            let split = glued.find(|c: char| c.is_alphabetic() || c == '_').unwrap_or(glued.len());
            let (c, n) = glued.split_at(split);
            let coef = parse_rational(c).map_err(|_| line.error(glued, format!("invalid term `{glued}`")))?;
            (coef, n)
        }
        [c, name] => {
            let coef = parse_rational(c).map_err(|_| line.error(c, format!("invalid coefficient `{c}`")))?;
            (coef, *name)
        }
        _ => return Err(line.error(term.trim_start(), format!("invalid term `{}`", term.trim()))),
    };
    if !is_identifier(name) {
        return Err(line.error(name, format!("invalid species name `{name}`")));
    }
    if coef.is_negative() {
        return Err(line.error(term.trim_start(), "complex coefficients must be nonnegative"));
    }
    Ok((coef, name))
}

fn parse_combo<'a>(line: &Line<'a>, text: &'a str) -> Result<Vec<(Rational, &'a str)>, CrnError> {
    if text.trim().is_empty() {
        return Err(line.error(text, "empty complex; write `0` for the zero complex"));
    }
    if text.trim() == "0" {
        return Ok(Vec::new());
    }
    text.split('+')
        .map(|term| if term.trim().is_empty() { Err(line.error(term, "empty term")) } else { parse_term(line, term) })
        .collect()
}

struct RawReaction {
    line: usize,
    column: usize,
    label: String,
    lhs: Vec<(Rational, String)>,
    rhs: Vec<(Rational, String)>,
}

pub fn parse_crn(text: &str) -> Result<CrnDocument, CrnError> {
    let mut declared: Option<Vec<String>> = None;
    let mut species_order: Vec<String> = Vec::new();
    let mut reactions: Vec<RawReaction> = Vec::new();
    let mut kinetics_lines: BTreeMap<String, (usize, usize, Vec<(String, Rational)>)> = BTreeMap::new();
    let mut rate_lines: BTreeMap<String, (usize, usize, f64)> = BTreeMap::new();
    let mut blocks: Vec<(String, Vec<String>, usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let code = raw.split('#').next().unwrap_or("");
        if code.trim().is_empty() {
            continue;
        }
        let line = Line { number: i + 1, text: raw };
        let trimmed = code.trim_start();
        let (keyword, body) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        match keyword {
            "species" => {
                if declared.is_some() {
                    return Err(line.error(trimmed, "species declared twice"));
                }
                let mut names = Vec::new();
                for name in body.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                    if !is_identifier(name) {
                        return Err(line.error(name, format!("invalid species name `{name}`")));
                    }
                    if names.contains(&name.to_string()) {
                        return Err(line.error(name, format!("species `{name}` declared twice")));
                    }
                    names.push(name.to_string());
                }
                if !reactions.is_empty() {
                    return Err(line.error(trimmed, "species must be declared before reactions"));
                }
                declared = Some(names);
            }
            "reaction" => {
                let (label, rest) = labelled(&line, body, "reaction")?;
                let Some((lhs, rhs)) = rest.split_once("->") else {
                    return Err(line.error(rest.trim_start(), "expected `->`"));
                };
                let lhs = parse_combo(&line, lhs)?;
                let rhs = parse_combo(&line, rhs)?;
                for (_, name) in lhs.iter().chain(&rhs) {
                    if let Some(decl) = &declared {
                        if !decl.iter().any(|s| s == name) {
                            return Err(line.error(name, format!("undeclared species `{name}`")));
                        }
                    } else if !species_order.iter().any(|s| s == name) {
                        species_order.push(name.to_string());
                    }
                }
                if reactions.iter().any(|r| r.label == label) {
                    return Err(line.error(label, format!("duplicate reaction label `{label}`")));
                }
                let column = line.error(label, "").column;
                reactions.push(RawReaction {
                    line: line.number,
                    column,
                    label: label.to_string(),
                    lhs: lhs.into_iter().map(|(c, s)| (c, s.to_string())).collect(),
                    rhs: rhs.into_iter().map(|(c, s)| (c, s.to_string())).collect(),
                });
            }
            "kinetics" => {
                let (label, rest) = labelled(&line, body, "kinetics")?;
                let mut entries = Vec::new();
                for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
                    let Some((name, value)) = item.split_once('=') else {
                        return Err(line.error(item.trim_start(), "expected `<species>=<order>`"));
                    };
                    let name = name.trim();
                    if !is_identifier(name) {
                        return Err(line.error(item.trim_start(), format!("invalid species name `{name}`")));
                    }
                    let v = parse_rational(value)
                        .map_err(|_| line.error(value.trim_start(), format!("invalid order `{}`", value.trim())))?;
                    if entries.iter().any(|(n, _): &(String, Rational)| n == name) {
                        return Err(line.error(item.trim_start(), format!("order of `{name}` given twice")));
                    }
                    entries.push((name.to_string(), v));
                }
                let column = line.error(label, "").column;
                if kinetics_lines.insert(label.to_string(), (line.number, column, entries)).is_some() {
                    return Err(line.error(label, format!("kinetics for `{label}` given twice")));
                }
            }
            "rate" => {
                let (label, rest) = labelled(&line, body, "rate")?;
                let value = rest.trim();
                let k = value
                    .parse::<f64>()
                    .ok()
                    .or_else(|| parse_rational(value).ok().map(|r| crate::linalg::to_f64(&r)))
                    .ok_or_else(|| line.error(rest.trim_start(), format!("invalid rate `{value}`")))?;
                if !(k > 0.0 && k.is_finite()) {
                    return Err(line.error(rest.trim_start(), format!("rate must be positive, got `{value}`")));
                }
                let column = line.error(label, "").column;
                if rate_lines.insert(label.to_string(), (line.number, column, k)).is_some() {
                    return Err(line.error(label, format!("rate for `{label}` given twice")));
                }
            }
            "block" => {
                let (name, rest) = labelled(&line, body, "block")?;
                let members: Vec<String> =
                    rest.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
                if members.is_empty() {
                    return Err(line.error(rest, format!("block `{name}` is empty")));
                }
                let column = line.error(name, "").column;
                blocks.push((name.to_string(), members, line.number, column));
            }
            other => return Err(line.error(trimmed, format!("unknown keyword `{other}`"))),
        }
    }

    if reactions.is_empty() {
        return Err(CrnError { line: 0, column: 0, message: "no reactions".into() });
    }
    let species = declared.unwrap_or(species_order);
    let mut builder = Network::builder().species(species.iter());
    for r in &reactions {
        builder = builder.reaction(
            &r.label,
            r.lhs.iter().map(|(c, s)| (s.as_str(), c.clone())),
            r.rhs.iter().map(|(c, s)| (s.as_str(), c.clone())),
        );
    }
    let network = builder.build().map_err(|e| {
        // Point at the reaction involved when the error names one.
        let message = e.to_string();
        let at = reactions.iter().rev().find(|r| message.contains(&format!("`{}`", r.label)));
        match at {
            Some(r) => CrnError { line: r.line, column: r.column, message },
            None => CrnError { line: 0, column: 0, message },
        }
    })?;

    let index: HashMap<&str, usize> = species.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut rows = Vec::new();
    for (q, r) in reactions.iter().enumerate() {
        let row = match kinetics_lines.remove(&r.label) {
            Some((line, column, entries)) => {
                let mut row = vec![Rational::zero(); species.len()];
                for (name, v) in entries {
                    let Some(&j) = index.get(name.as_str()) else {
                        return Err(CrnError {
                            line,
                            column,
                            message: format!("unknown species `{name}` in kinetics"),
                        });
                    };
                    row[j] = v;
                }
                row
            }
            None => network.complex(network.reaction(q).reactant).to_vec(),
        };
        rows.push(row);
    }
    if let Some((label, (line, column, _))) = kinetics_lines.into_iter().next() {
        return Err(CrnError { line, column, message: format!("kinetics for unknown reaction `{label}`") });
    }
    let kinetics = KineticOrderMatrix::new(Matrix::from_rows(species.len(), rows).expect("rows have species length"));

    let rates = if rate_lines.is_empty() {
        None
    } else {
        let mut values = Vec::new();
        for r in &reactions {
            match rate_lines.remove(&r.label) {
                Some((_, _, k)) => values.push(k),
                None => {
                    return Err(CrnError {
                        line: r.line,
                        column: r.column,
                        message: format!("rates given for some reactions but not `{}`", r.label),
                    })
                }
            }
        }
        if let Some((label, (line, column, _))) = rate_lines.into_iter().next() {
            return Err(CrnError { line, column, message: format!("rate for unknown reaction `{label}`") });
        }
        Some(RateVector::new(values).expect("rates checked positive"))
    };

    for (_, members, line, column) in &blocks {
        if let Some(m) = members.iter().find(|m| network.reaction_index(m).is_none()) {
            return Err(CrnError {
                line: *line,
                column: *column,
                message: format!("block names unknown reaction `{m}`"),
            });
        }
    }
    let doc = CrnDocument { network, kinetics, rates, blocks: blocks.into_iter().map(|(n, m, _, _)| (n, m)).collect() };
    if let Some(Err(e)) = doc.decomposition() {
        return Err(CrnError { line: 0, column: 0, message: format!("blocks are not a decomposition: {e}") });
    }
    Ok(doc)
}

fn render_combo(species: &[String], coefficients: &[Rational]) -> String {
    let terms: Vec<String> = species
        .iter()
        .zip(coefficients)
        .filter(|(_, c)| !c.is_zero())
        .map(
            |(s, c)| {
                if *c == Rational::from_integer(1.into()) {
                    s.clone()
                } else {
                    format!("{} {s}", format_rational(c))
                }
            },
        )
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Canonical text: species line, reactions, explicit kinetics for every
/// reaction, rates and blocks when present.
pub fn render_crn(doc: &CrnDocument) -> String {
    let net = &doc.network;
    let mut out = String::new();
    out.push_str(&format!("species {}\n", net.species().join(" ")));
    for r in net.reactions() {
        out.push_str(&format!(
            "reaction {}: {} -> {}\n",
            r.label,
            render_combo(net.species(), net.complex(r.reactant)),
            render_combo(net.species(), net.complex(r.product))
        ));
    }
    for (q, r) in net.reactions().iter().enumerate() {
        let entries: Vec<String> = net
            .species()
            .iter()
            .zip(doc.kinetics.row(q))
            .filter(|(_, v)| !v.is_zero())
            .map(|(s, v)| format!("{s}={}", format_rational(v)))
            .collect();
        out.push_str(&format!("kinetics {}: {}\n", r.label, entries.join(", ")));
    }
    if let Some(rates) = &doc.rates {
        for (r, k) in net.reactions().iter().zip(rates.values()) {
            out.push_str(&format!("rate {}: {k:?}\n", r.label));
        }
    }
    for (name, members) in &doc.blocks {
        out.push_str(&format!("block {name}: {}\n", members.join(", ")));
    }
    out
}

/// Reads a decomposition file: `block <name>: <label>, ...` lines and
/// comments only. Labels are checked against `network`; the partition
/// property is left to [`decomposition_from_labels`].
pub fn parse_blocks(text: &str, network: &Network) -> Result<Vec<(String, Vec<String>)>, CrnError> {
    let mut blocks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let code = raw.split('#').next().unwrap_or("");
        if code.trim().is_empty() {
            continue;
        }
        let line = Line { number: i + 1, text: raw };
        let trimmed = code.trim_start();
        let Some(body) = trimmed.strip_prefix("block").filter(|b| b.starts_with(char::is_whitespace)) else {
            return Err(line.error(trimmed, "expected `block <name>: <label>, ...`"));
        };
        let (name, rest) = labelled(&line, body, "block")?;
        let mut members = Vec::new();
        for m in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if network.reaction_index(m).is_none() {
                return Err(line.error(m, format!("unknown reaction `{m}`")));
            }
            members.push(m.to_string());
        }
        if members.is_empty() {
            return Err(line.error(rest, format!("block `{name}` is empty")));
        }
        blocks.push((name.to_string(), members));
    }
    if blocks.is_empty() {
        return Err(CrnError { line: 0, column: 0, message: "no blocks".into() });
    }
    Ok(blocks)
}

/// Reads a point file: whitespace- or comma-separated values, one per
/// species in order, or `Species=value` pairs. `#` starts a comment.
pub fn parse_point(text: &str, species: &[String]) -> Result<Vec<f64>, CrnError> {
    let tokens: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| {
            l.split('#').next().unwrap_or("").split(|c: char| c.is_whitespace() || c == ',').map(move |t| (i + 1, t))
        })
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let err = |line: usize, message: String| CrnError { line, column: 1, message };
    let value = |line: usize, v: &str| v.parse::<f64>().map_err(|_| err(line, format!("invalid number `{v}`")));
    if tokens.iter().any(|(_, t)| t.contains('=')) {
        let mut x = vec![None; species.len()];
        for (line, t) in &tokens {
            let Some((name, v)) = t.split_once('=') else {
                return Err(err(*line, format!("expected `Species=value`, got `{t}`")));
            };
            let Some(j) = species.iter().position(|s| s == name) else {
                return Err(err(*line, format!("unknown species `{name}`")));
            };
            x[j] = Some(value(*line, v)?);
        }
        x.into_iter()
            .enumerate()
            .map(|(j, v)| v.ok_or_else(|| err(0, format!("no value for species `{}`", species[j]))))
            .collect()
    } else {
        if tokens.len() != species.len() {
            return Err(err(0, format!("expected {} values, found {}", species.len(), tokens.len())));
        }
        tokens.iter().map(|(line, t)| value(*line, t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    #[test]
    fn one_reaction_with_kinetics() {
        let doc = parse_crn("reaction r1: M5 -> M1\nkinetics r1: M5=1").unwrap();
        assert_eq!(doc.network.reaction_count(), 1);
        assert_eq!(doc.network.species(), &["M5".to_string(), "M1".to_string()]);
    }

    #[test]
    fn decimals_are_exact() {
        let doc = parse_crn("reaction r1: A -> B\nreaction r2: B -> A\nkinetics r2: B=0.36").unwrap();
        assert_eq!(doc.kinetics.row(1)[1], ratio(9, 25));
        // r1 defaults to mass action.
        assert_eq!(doc.kinetics.row(0)[0], ratio(1, 1));
    }

    #[test]
    fn self_loop_reports_its_line() {
        let err = parse_crn("# header\nreaction r1: A -> A\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn syntax_errors_have_columns() {
        let err = parse_crn("reaction r1: A => B").unwrap_err();
        assert_eq!((err.line, err.column), (1, 14));
        let err = parse_crn("reaction r1: A -> B\nkinetics r1: A=x").unwrap_err();
        assert_eq!((err.line, err.column), (2, 16));
        let err = parse_crn("reactions r1: A -> B").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn zero_complex_and_coefficients() {
        let doc = parse_crn("reaction r1: 0 -> 2 A + 1/2 B\nreaction r2: 2A + 0.5 B -> 0").unwrap();
        assert_eq!(doc.network.complex_count(), 2);
        let text = render_crn(&doc);
        assert!(text.contains("reaction r1: 0 -> 2 A + 1/2 B"), "{text}");
    }

    #[test]
    fn partial_rates_are_rejected() {
        let err = parse_crn("reaction r1: A -> B\nreaction r2: B -> A\nrate r1: 1").unwrap_err();
        assert!(err.message.contains("r2"));
    }

    #[test]
    fn blocks_must_partition() {
        let text = "reaction r1: A -> B\nreaction r2: B -> A\nblock b1: r1";
        assert!(parse_crn(text).is_err());
        let text = "reaction r1: A -> B\nreaction r2: B -> A\nblock b1: r1\nblock b2: r2";
        let doc = parse_crn(text).unwrap();
        assert_eq!(doc.decomposition().unwrap().unwrap().len(), 2);
    }

    #[test]
    fn points_by_name_or_position() {
        let species = vec!["A".to_string(), "B".to_string()];
        assert_eq!(parse_point("1.5 2", &species).unwrap(), vec![1.5, 2.0]);
        assert_eq!(parse_point("B=2\nA=1.5", &species).unwrap(), vec![1.5, 2.0]);
        assert!(parse_point("1", &species).is_err());
    }
}
