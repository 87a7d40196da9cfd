//! Well-known modal reduction principles and their correspondents in the
//! three relational languages, regenerated and compared with a stored copy.

use serde::Serialize;

use crate::correspond::{correspondent, parse_rel_inequality, CorrespondError, Lang, RelInequality, Row};
use crate::syntax::{Mrp, SyntaxError};

/// Stored reference table.
pub const GOLDEN: &str = include_str!("../fixtures/catalogue.txt");

/// Property name and axiom of every catalogued mrp.
pub const AXIOMS: [(&str, &str); 13] = [
    ("Reflexivity", "p <= dia p"),
    ("Reflexivity", "box p <= p"),
    ("Transitivity", "dia dia p <= dia p"),
    ("Transitivity", "box p <= box box p"),
    ("Symmetry", "p <= box dia p"),
    ("Symmetry", "dia box p <= p"),
    ("Seriality", "box p <= dia p"),
    ("Partial functionality", "dia p <= box p"),
    ("Euclideanness", "dia p <= box dia p"),
    ("Euclideanness", "dia box p <= box p"),
    ("Confluence", "dia box p <= box dia p"),
    ("Denseness", "dia p <= dia dia p"),
    ("Denseness", "box box p <= box p"),
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogueError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Correspond(#[from] CorrespondError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogueRow {
    pub property: String,
    pub axiom: String,
    pub row: Row,
    pub krel: RelInequalityText,
    pub grel: RelInequalityText,
    pub prel: RelInequalityText,
}

/// Inequality kept both as a value and in printed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelInequalityText {
    #[serde(skip)]
    pub value: RelInequality,
    pub ascii: String,
    pub unicode: String,
}

impl From<RelInequality> for RelInequalityText {
    fn from(value: RelInequality) -> Self {
        RelInequalityText { ascii: value.to_string(), unicode: value.to_unicode(), value }
    }
}

impl CatalogueRow {
    pub fn line(&self) -> String {
        let row = match self.row {
            Row::A => "a",
            Row::B => "b",
        };
        format!("{} | {} | {} | {} | {} | {}", self.property, self.axiom, row, self.krel.ascii, self.grel.ascii, self.prel.ascii)
    }

    pub fn unicode_line(&self) -> String {
        format!(
            "{:<22} {:<24} {} │ {:<30} │ {:<30} │ {}",
            self.property,
            self.axiom,
            self.row,
            self.krel.unicode,
            self.grel.unicode,
            self.prel.unicode
        )
    }
}

/// Computes every row of the catalogue from the axiom list.
pub fn regenerate() -> Result<Vec<CatalogueRow>, CatalogueError> {
    let mut out = Vec::new();
    for (property, axiom) in AXIOMS {
        let mrp = Mrp::parse(axiom)?;
        let k = correspondent(&mrp, Lang::KRel)?;
        let g = correspondent(&mrp, Lang::GRel)?;
        let p = correspondent(&mrp, Lang::PRel)?;
        for ((row, ki), ((_, gi), (_, pi))) in k.into_iter().zip(g.into_iter().zip(p)) {
            out.push(CatalogueRow {
                property: property.to_string(),
                axiom: axiom.to_string(),
                row,
                krel: ki.into(),
                grel: gi.into(),
                prel: pi.into(),
            });
        }
    }
    Ok(out)
}

/// Reads the `property | axiom | row | KRel | GRel | PRel` format.
pub fn parse_table(text: &str) -> Result<Vec<CatalogueRow>, CatalogueError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| CatalogueError::Format { line: i + 1, message };
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        if cells.len() != 6 {
            return Err(err(format!("expected 6 cells, found {}", cells.len())));
        }
        let row = match cells[2] {
            "a" => Row::A,
            "b" => Row::B,
            other => return Err(err(format!("row must be `a` or `b`, found `{other}`"))),
        };
        let ineq = |text: &str, lang| parse_rel_inequality(text, Some(lang)).map_err(|e| err(e.to_string()));
        out.push(CatalogueRow {
            property: cells[0].to_string(),
            axiom: cells[1].to_string(),
            row,
            krel: ineq(cells[3], Lang::KRel)?.into(),
            grel: ineq(cells[4], Lang::GRel)?.into(),
            prel: ineq(cells[5], Lang::PRel)?.into(),
        });
    }
    Ok(out)
}

/// Mismatches between generated and reference rows, compared as terms.
pub fn diff(generated: &[CatalogueRow], reference: &[CatalogueRow]) -> Vec<String> {
    let mut out = Vec::new();
    let key = |r: &CatalogueRow| (r.axiom.clone(), r.row);
    for g in generated {
        match reference.iter().find(|r| key(r) == key(g)) {
            None => out.push(format!("{} {}: missing from reference", g.axiom, g.row)),
            Some(r) => {
                for (lang, a, b) in [("KRel", &g.krel, &r.krel), ("GRel", &g.grel, &r.grel), ("PRel", &g.prel, &r.prel)] {
                    if a.value != b.value {
                        out.push(format!("{} {} {lang}: generated `{}`, reference `{}`", g.axiom, g.row, a.ascii, b.ascii));
                    }
                }
                if r.property != g.property {
                    out.push(format!("{} {}: property `{}` vs `{}`", g.axiom, g.row, g.property, r.property));
                }
            }
        }
    }
    for r in reference {
        if !generated.iter().any(|g| key(g) == key(r)) {
            out.push(format!("{} {}: not generated", r.axiom, r.row));
        }
    }
    out
}
