//! Named mesh entity subsets and the selector mini-language.
//!
//! Selector grammar:
//!
//! ```text
//! selector := "all"
//!           | "vertices in (" predicate ")"
//!           | "vertices of group " integer
//!           | "cells of group " integer
//! predicate := comparison { ("&" | "|") comparison }
//! comparison := coord ("<" | ">" | "<=" | ">=") number
//! coord := "x" | "y" | "z"
//! ```
//!
//! `vertices of group N` selects the vertices of all cells carrying group id
//! N; it is the form used for conductor interface regions.

use crate::error::{Error, Result};
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Cell,
    Facet,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmpOp {
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Cmp { coord: usize, op: CmpOp, value: f64 },
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

impl Predicate {
    fn eval(&self, p: &[f64]) -> bool {
        match self {
            Predicate::Cmp { coord, op, value } => {
                let x = p[*coord];
                match op {
                    CmpOp::Lt => x < *value,
                    CmpOp::Gt => x > *value,
                    CmpOp::Le => x <= *value,
                    CmpOp::Ge => x >= *value,
                }
            }
            Predicate::And(a, b) => a.eval(p) && b.eval(p),
            Predicate::Or(a, b) => a.eval(p) || b.eval(p),
        }
    }

    fn max_coord(&self) -> usize {
        match self {
            Predicate::Cmp { coord, .. } => *coord,
            Predicate::And(a, b) | Predicate::Or(a, b) => a.max_coord().max(b.max_coord()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegionSelector {
    All,
    VerticesIn(Predicate),
    VerticesOfGroup(i32),
    CellsOfGroup(i32),
}

impl RegionSelector {
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if s == "all" {
            return Ok(RegionSelector::All);
        }
        if let Some(rest) = s.strip_prefix("cells of group") {
            let id: i32 = rest.trim().parse().map_err(|_| Error::SelectorSyntax(
                format!("bad group id in '{}'", text),
            ))?;
            return Ok(RegionSelector::CellsOfGroup(id));
        }
        if let Some(rest) = s.strip_prefix("vertices of group") {
            let id: i32 = rest.trim().parse().map_err(|_| Error::SelectorSyntax(
                format!("bad group id in '{}'", text),
            ))?;
            return Ok(RegionSelector::VerticesOfGroup(id));
        }
        if let Some(rest) = s.strip_prefix("vertices in") {
            let rest = rest.trim();
            if !rest.starts_with('(') || !rest.ends_with(')') {
                return Err(Error::SelectorSyntax(format!(
                    "expected parenthesized predicate in '{}'",
                    text
                )));
            }
            let pred = parse_predicate(&rest[1..rest.len() - 1])?;
            return Ok(RegionSelector::VerticesIn(pred));
        }
        Err(Error::SelectorSyntax(format!("unrecognized selector '{}'", text)))
    }
}

fn parse_predicate(text: &str) -> Result<Predicate> {
    let mut toks = tokenize(text)?;
    toks.reverse(); // pop from the back
    let mut acc = parse_comparison(&mut toks, text)?;
    while let Some(tok) = toks.pop() {
        let rhs = parse_comparison(&mut toks, text)?;
        acc = match tok.as_str() {
            "&" => Predicate::And(Box::new(acc), Box::new(rhs)),
            "|" => Predicate::Or(Box::new(acc), Box::new(rhs)),
            other => {
                return Err(Error::SelectorSyntax(format!(
                    "expected '&' or '|', found '{}' in '{}'",
                    other, text
                )))
            }
        };
    }
    Ok(acc)
}

fn parse_comparison(toks: &mut Vec<String>, text: &str) -> Result<Predicate> {
    let err = |msg: &str| Error::SelectorSyntax(format!("{} in '{}'", msg, text));
    let coord = match toks.pop().as_deref() {
        Some("x") => 0,
        Some("y") => 1,
        Some("z") => 2,
        _ => return Err(err("expected coordinate x, y or z")),
    };
    let op = match toks.pop().as_deref() {
        Some("<") => CmpOp::Lt,
        Some(">") => CmpOp::Gt,
        Some("<=") => CmpOp::Le,
        Some(">=") => CmpOp::Ge,
        _ => return Err(err("expected comparison operator")),
    };
    let value: f64 = toks
        .pop()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err("expected number"))?;
    Ok(Predicate::Cmp { coord, op, value })
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '&' || c == '|' {
            toks.push(c.to_string());
            i += 1;
        } else if c == '<' || c == '>' {
            if i + 1 < chars.len() && chars[i + 1] == '=' {
                toks.push(format!("{}=", c));
                i += 2;
            } else {
                toks.push(c.to_string());
                i += 1;
            }
        } else if c.is_alphabetic() {
            toks.push(c.to_string());
            i += 1;
        } else if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
            let start = i;
            i += 1;
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || chars[i] == 'e'
                    || chars[i] == 'E'
                    || ((chars[i] == '-' || chars[i] == '+')
                        && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            toks.push(chars[start..i].iter().collect());
        } else {
            return Err(Error::SelectorSyntax(format!(
                "unexpected character '{}' in '{}'",
                c, text
            )));
        }
    }
    Ok(toks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub name: String,
    pub kind: RegionKind,
    /// Sorted, unique entity ids: cell ids, vertex ids, or indices into
    /// `mesh.boundary_facets()`.
    pub ids: Vec<usize>,
}

impl Region {
    /// Sorted unique vertex ids covered by the region.
    pub fn vertices(&self, mesh: &Mesh) -> Vec<usize> {
        let mut verts: Vec<usize> = match self.kind {
            RegionKind::Vertex => self.ids.clone(),
            RegionKind::Facet => {
                let facets = mesh.boundary_facets();
                self.ids
                    .iter()
                    .flat_map(|&f| facets[f].vertices.iter().copied())
                    .collect()
            }
            RegionKind::Cell => self
                .ids
                .iter()
                .flat_map(|&c| mesh.cell(c).1.iter().copied())
                .collect(),
        };
        verts.sort_unstable();
        verts.dedup();
        verts
    }
}

pub fn select_region(
    mesh: &Mesh,
    name: &str,
    selector: &RegionSelector,
    kind: RegionKind,
) -> Result<Region> {
    let ids: Vec<usize> = match selector {
        RegionSelector::All => {
            if kind != RegionKind::Cell {
                return Err(Error::SelectorSyntax(format!(
                    "selector 'all' requires cell kind (region '{}')",
                    name
                )));
            }
            mesh.volume_cells()
        }
        RegionSelector::CellsOfGroup(g) => {
            if kind != RegionKind::Cell {
                return Err(Error::SelectorSyntax(format!(
                    "'cells of group' requires cell kind (region '{}')",
                    name
                )));
            }
            mesh.volume_cells()
                .into_iter()
                .filter(|&c| mesh.cell_group_ids[c] == *g)
                .collect()
        }
        RegionSelector::VerticesOfGroup(g) => {
            if kind != RegionKind::Vertex {
                return Err(Error::SelectorSyntax(format!(
                    "'vertices of group' requires vertex kind (region '{}')",
                    name
                )));
            }
            let mut verts: Vec<usize> = mesh
                .volume_cells()
                .into_iter()
                .filter(|&c| mesh.cell_group_ids[c] == *g)
                .flat_map(|c| mesh.cell(c).1.to_vec())
                .collect();
            verts.sort_unstable();
            verts.dedup();
            verts
        }
        RegionSelector::VerticesIn(pred) => {
            if pred.max_coord() >= mesh.dim {
                let names = ["x", "y", "z"];
                return Err(Error::UnknownCoordinate(names[pred.max_coord()].into()));
            }
            match kind {
                RegionKind::Vertex => (0..mesh.n_vertices())
                    .filter(|&v| pred.eval(mesh.vertex(v)))
                    .collect(),
                RegionKind::Facet => mesh
                    .boundary_facets()
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.vertices.iter().all(|&v| pred.eval(mesh.vertex(v))))
                    .map(|(i, _)| i)
                    .collect(),
                RegionKind::Cell => {
                    return Err(Error::SelectorSyntax(format!(
                        "'vertices in' selectors produce vertex or facet regions (region '{}')",
                        name
                    )))
                }
            }
        }
    };
    if ids.is_empty() {
        return Err(Error::EmptyRegion(name.to_string()));
    }
    Ok(Region {
        name: name.to_string(),
        kind,
        ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_block_mesh;

    #[test]
    fn all_selects_volume_cells() {
        let m = generate_block_mesh(&[1.0; 3], &[3, 3, 3], &[0.0; 3]).unwrap();
        let r = select_region(&m, "Omega", &RegionSelector::parse("all").unwrap(), RegionKind::Cell)
            .unwrap();
        assert_eq!(r.ids.len(), 8);
    }

    #[test]
    fn paper_facet_selector() {
        let m = generate_block_mesh(&[0.1, 0.1, 0.1], &[3, 3, 3], &[0.05, 0.05, 0.05]).unwrap();
        let sel = RegionSelector::parse("vertices in (x < 0.00001)").unwrap();
        let r = select_region(&m, "Left", &sel, RegionKind::Facet).unwrap();
        // The x=0 plane of a 2x2x2 block has 4 boundary facets.
        assert_eq!(r.ids.len(), 4);
        for &v in &r.vertices(&m) {
            assert!(m.vertex(v)[0].abs() < 1e-12);
        }
    }

    #[test]
    fn empty_selection_is_an_error() {
        let m = generate_block_mesh(&[1.0], &[3], &[0.0]).unwrap();
        let sel = RegionSelector::parse("vertices in (x > 1e9)").unwrap();
        let r = select_region(&m, "Nowhere", &sel, RegionKind::Vertex);
        assert!(matches!(r, Err(Error::EmptyRegion(_))));
    }

    #[test]
    fn unknown_coordinate_is_an_error() {
        let m = generate_block_mesh(&[1.0], &[3], &[0.0]).unwrap();
        let sel = RegionSelector::parse("vertices in (z < 0.5)").unwrap();
        assert!(matches!(
            select_region(&m, "r", &sel, RegionKind::Vertex),
            Err(Error::UnknownCoordinate(_))
        ));
    }

    #[test]
    fn selection_is_idempotent() {
        let m = generate_block_mesh(&[1.0, 1.0], &[4, 4], &[0.0, 0.0]).unwrap();
        let sel = RegionSelector::parse("vertices in (x < 0.0 | y > 0.2)").unwrap();
        let a = select_region(&m, "r", &sel, RegionKind::Vertex).unwrap();
        let b = select_region(&m, "r", &sel, RegionKind::Vertex).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn compound_predicate() {
        let m = generate_block_mesh(&[1.0, 1.0], &[3, 3], &[0.5, 0.5]).unwrap();
        let sel = RegionSelector::parse("vertices in (x < 0.1 & y < 0.1)").unwrap();
        let r = select_region(&m, "corner", &sel, RegionKind::Vertex).unwrap();
        assert_eq!(r.ids, vec![0]);
    }

    #[test]
    fn cells_of_group() {
        let mut m = generate_block_mesh(&[1.0, 1.0], &[3, 3], &[0.0, 0.0]).unwrap();
        m.cell_group_ids[2] = 7;
        let sel = RegionSelector::parse("cells of group 7").unwrap();
        let r = select_region(&m, "g", &sel, RegionKind::Cell).unwrap();
        assert_eq!(r.ids, vec![2]);
    }

    #[test]
    fn selector_syntax_errors() {
        assert!(RegionSelector::parse("vertices in (q < 1)").is_err());
        assert!(RegionSelector::parse("vertices in x < 1").is_err());
        assert!(RegionSelector::parse("nonsense").is_err());
    }
}
