//! Quivers, path expressions and algebra presentations (JSON).
//!
//! Paths compose left to right: the path `[a, b]` means "a then b".

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, usize, usize)>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (name, s, t) in &arrows {
            if *s >= vertices.len() || *t >= vertices.len() {
                return Err(Error::Presentation(format!(
                    "arrow {name} references a missing vertex"
                )));
            }
            if seen.insert(name.clone(), ()).is_some() {
                return Err(Error::Presentation(format!("duplicate arrow name {name}")));
            }
        }
        Ok(Quiver {
            vertices,
            arrows: arrows
                .into_iter()
                .map(|(name, source, target)| Arrow {
                    name,
                    source,
                    target,
                })
                .collect(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Checks composability; returns the end vertex.
    pub fn path_end(&self, path: &Path) -> Result<usize> {
        let mut at = path.start;
        for &a in &path.arrows {
            let arr = &self.arrows[a];
            if arr.source != at {
                return Err(Error::Presentation(format!(
                    "path is not composable at arrow {}",
                    arr.name
                )));
            }
            at = arr.target;
        }
        Ok(at)
    }

    pub fn path_name(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            format!("e_{}", self.vertices[path.start])
        } else {
            path.arrows
                .iter()
                .map(|&a| self.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// A path in a quiver; an empty arrow list is the lazy path at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn lazy(v: usize) -> Self {
        Path {
            start: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Formal `F_p`-linear combination of paths sharing source and target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathExpr {
    pub terms: Vec<(u32, Path)>,
}

impl PathExpr {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges equal paths and drops zero coefficients.
    pub fn normalized(mut self, field: PrimeField) -> Self {
        let mut acc: BTreeMap<Path, u32> = BTreeMap::new();
        for (c, p) in self.terms.drain(..) {
            let e = acc.entry(p).or_insert(0);
            *e = field.add(*e, c);
        }
        PathExpr {
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(p, c)| (c, p))
                .collect(),
        }
    }

    /// Source and target vertices; errors if the terms disagree.
    pub fn endpoints(&self, quiver: &Quiver) -> Result<Option<(usize, usize)>> {
        let mut ends = None;
        for (_, p) in &self.terms {
            let e = (p.start, quiver.path_end(p)?);
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(Error::Presentation(
                        "relation mixes paths with different endpoints".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(ends)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| w[0].1.len() == w[1].1.len())
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(c, p)| format!("{c}*{}", quiver.path_name(p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub quiver: Quiver,
    pub relations: Vec<PathExpr>,
    pub potential: Option<PathExpr>,
    pub field: PrimeField,
    pub degree_bound: usize,
}

impl AlgebraPresentation {
    pub fn default_degree_bound(num_vertices: usize) -> usize {
        2 * num_vertices + 2
    }

    /// Relations used to build the algebra: the explicit ones plus the
    /// cyclic derivatives of the potential, if any.
    pub fn all_relations(&self) -> Result<Vec<PathExpr>> {
        let mut rels = self.relations.clone();
        if self.potential.is_some() {
            rels.extend(jacobi_relations(self)?);
        }
        Ok(rels)
    }
}

/// Cyclic derivatives `d_a W`: for each occurrence of `a` in a cycle of `W`,
/// rotate it to the front, delete it, and add the remaining path with the
/// cycle's coefficient.
pub fn jacobi_relations(p: &AlgebraPresentation) -> Result<Vec<PathExpr>> {
    let w = p.potential.as_ref().ok_or(Error::NoPotential)?;
    let q = &p.quiver;
    let mut out = Vec::new();
    for a in 0..q.arrows.len() {
        let mut terms = Vec::new();
        for (c, cycle) in &w.terms {
            let len = cycle.arrows.len();
            for k in 0..len {
                if cycle.arrows[k] != a {
                    continue;
                }
                let rest: Vec<usize> = (1..len).map(|j| cycle.arrows[(k + j) % len]).collect();
                terms.push((
                    *c,
                    Path {
                        start: q.arrows[a].target,
                        arrows: rest,
                    },
                ));
            }
        }
        let expr = PathExpr { terms }.normalized(p.field);
        if !expr.is_zero() {
            out.push(expr);
        }
    }
    Ok(out)
}

// JSON file format.

#[derive(Debug, Deserialize, Serialize)]
struct ArrowSpec {
    name: String,
    source: serde_json::Value,
    target: serde_json::Value,
}

#[derive(Debug, Deserialize, Serialize)]
struct TermSpec {
    coeff: serde_json::Value,
    path: Vec<String>,
    #[serde(default)]
    vertex: Option<serde_json::Value>,
}

#[derive(Debug, Deserialize, Serialize)]
struct PresentationFile {
    field: u32,
    #[serde(default)]
    degree_bound: Option<usize>,
    vertices: Vec<serde_json::Value>,
    arrows: Vec<ArrowSpec>,
    #[serde(default)]
    relations: Vec<Vec<TermSpec>>,
    #[serde(default)]
    potential: Option<Vec<TermSpec>>,
    #[serde(default)]
    params: BTreeMap<String, i64>,
}

fn label(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Evaluates coefficients such as `3`, `"-lambda"` or `"2*lambda"`.
fn eval_coeff(
    v: &serde_json::Value,
    params: &BTreeMap<String, i64>,
    field: PrimeField,
) -> Result<u32> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|x| field.reduce(x))
            .ok_or_else(|| Error::Presentation(format!("non-integer coefficient {n}"))),
        serde_json::Value::String(s) => {
            let s = s.replace(' ', "");
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s.trim_start_matches('+').to_string()),
            };
            let mut value: i64 = 1;
            for factor in body.split('*') {
                if let Ok(k) = factor.parse::<i64>() {
                    value *= k;
                } else if let Some(&k) = params.get(factor) {
                    value *= k;
                } else {
                    return Err(Error::Presentation(format!(
                        "unknown coefficient factor '{factor}'"
                    )));
                }
            }
            Ok(field.reduce(if neg { -value } else { value }))
        }
        other => Err(Error::Presentation(format!("bad coefficient {other}"))),
    }
}

pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation> {
    let file: PresentationFile = serde_json::from_str(text)
        .map_err(|e| Error::Presentation(format!("line {}: {e}", e.line())))?;
    let field = PrimeField::new(file.field)?;
    let vertices: Vec<String> = file.vertices.iter().map(label).collect();
    let vindex = |v: &serde_json::Value| -> Result<usize> {
        let l = label(v);
        vertices
            .iter()
            .position(|x| *x == l)
            .ok_or_else(|| Error::Presentation(format!("unknown vertex {l}")))
    };
    let mut arrows = Vec::new();
    for a in &file.arrows {
        arrows.push((a.name.clone(), vindex(&a.source)?, vindex(&a.target)?));
    }
    let quiver = Quiver::new(vertices.clone(), arrows)?;

    let parse_terms = |terms: &[TermSpec]| -> Result<PathExpr> {
        let mut out = Vec::new();
        for t in terms {
            let c = eval_coeff(&t.coeff, &file.params, field)?;
            let mut ids = Vec::new();
            for name in &t.path {
                ids.push(
                    quiver
                        .arrow_index(name)
                        .ok_or_else(|| Error::Presentation(format!("unknown arrow {name}")))?,
                );
            }
            let start = match (ids.first(), &t.vertex) {
                (Some(&a), _) => quiver.arrows[a].source,
                (None, Some(v)) => vindex(v)?,
                (None, None) => {
                    return Err(Error::Presentation(
                        "empty path needs a \"vertex\" field".into(),
                    ))
                }
            };
            let path = Path { start, arrows: ids };
            quiver.path_end(&path)?;
            out.push((c, path));
        }
        let e = PathExpr { terms: out };
        e.endpoints(&quiver)?;
        Ok(e)
    };

    let mut relations = Vec::new();
    for r in &file.relations {
        let e = parse_terms(r)?.normalized(field);
        if e.is_zero() {
            return Err(Error::Presentation("relation is zero".into()));
        }
        relations.push(e);
    }
    let potential = match &file.potential {
        None => None,
        Some(terms) => {
            let mut cycles = Vec::new();
            for t in terms {
                let single = parse_terms(std::slice::from_ref(t))?;
                let (c, p) = single.terms.into_iter().next().expect("one term");
                if p.arrows.is_empty() || quiver.path_end(&p)? != p.start {
                    return Err(Error::Presentation(format!(
                        "potential term {} is not a cycle",
                        quiver.path_name(&p)
                    )));
                }
                cycles.push((c, p));
            }
            // Cycles are compared up to rotation only through their derivatives;
            // keep the terms as written.
            Some(PathExpr { terms: cycles })
        }
    };
    let degree_bound = file
        .degree_bound
        .unwrap_or_else(|| AlgebraPresentation::default_degree_bound(vertices.len()));
    Ok(AlgebraPresentation {
        quiver,
        relations,
        potential,
        field,
        degree_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = r#"{"field": 2, "vertices": [1, 2],
        "arrows": [{"name": "a", "source": 1, "target": 2}]}"#;

    #[test]
    fn parses_a2() {
        let p = parse_presentation(A2).unwrap();
        assert_eq!(p.quiver.arrows.len(), 1);
        assert_eq!(p.quiver.num_vertices(), 2);
        assert_eq!(p.degree_bound, 6);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn rejects_non_cycle_potential() {
        let text = r#"{"field": 3, "vertices": [1, 2],
            "arrows": [{"name": "a", "source": 1, "target": 2}],
            "potential": [{"coeff": 1, "path": ["a"]}]}"#;
        assert!(matches!(
            parse_presentation(text),
            Err(Error::Presentation(_))
        ));
    }

    #[test]
    fn rejects_unknown_arrow_and_bad_syntax() {
        let text = r#"{"field": 3, "vertices": [1],
            "arrows": [], "relations": [[{"coeff": 1, "path": ["zz"]}]]}"#;
        assert!(parse_presentation(text).is_err());
        assert!(parse_presentation("{ not json").is_err());
    }

    #[test]
    fn three_cycle_derivatives() {
        let text = r#"{"field": 5, "vertices": [1, 2, 3],
            "arrows": [{"name": "a", "source": 1, "target": 2},
                       {"name": "b", "source": 2, "target": 3},
                       {"name": "c", "source": 3, "target": 1}],
            "potential": [{"coeff": 1, "path": ["a", "b", "c"]}]}"#;
        let p = parse_presentation(text).unwrap();
        let rels = jacobi_relations(&p).unwrap();
        let names: Vec<String> = rels.iter().map(|r| r.display(&p.quiver)).collect();
        assert_eq!(names, vec!["1*b*c", "1*c*a", "1*a*b"]);
    }

    #[test]
    fn zero_potential_has_no_relations() {
        let text = r#"{"field": 5, "vertices": [1],
            "arrows": [{"name": "x", "source": 1, "target": 1}],
            "potential": [{"coeff": 1, "path": ["x","x"]}, {"coeff": -1, "path": ["x","x"]}]}"#;
        let mut p = parse_presentation(text).unwrap();
        p.potential = p.potential.map(|w| w.normalized(p.field));
        assert!(jacobi_relations(&p).unwrap().is_empty());
        p.potential = None;
        assert!(matches!(jacobi_relations(&p), Err(Error::NoPotential)));
    }

    #[test]
    fn coefficient_expressions() {
        let f = PrimeField::new(5).unwrap();
        let mut params = BTreeMap::new();
        params.insert("lambda".to_string(), 2);
        let ev = |s: &str| eval_coeff(&serde_json::json!(s), &params, f).unwrap();
        assert_eq!(ev("lambda"), 2);
        assert_eq!(ev("-lambda"), 3);
        assert_eq!(ev("3*lambda"), 1);
        assert_eq!(ev("-1"), 4);
    }
}

/// A vertex bijection `p` with `a[i][j] = b[p[i]][p[j]]` between arrow
/// multiplicity matrices, if one exists.
pub fn quiver_isomorphism(a: &[Vec<usize>], b: &[Vec<usize>]) -> Option<Vec<usize>> {
    fn extend(a: &[Vec<usize>], b: &[Vec<usize>], p: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = p.len();
        if i == a.len() {
            return true;
        }
        for c in 0..b.len() {
            if used[c] || a[i][i] != b[c][c] {
                continue;
            }
            if (0..i).any(|k| a[i][k] != b[c][p[k]] || a[k][i] != b[p[k]][c]) {
                continue;
            }
            p.push(c);
            used[c] = true;
            if extend(a, b, p, used) {
                return true;
            }
            used[c] = false;
            p.pop();
        }
        false
    }
    if a.len() != b.len() {
        return None;
    }
    let mut p = Vec::new();
    let mut used = vec![false; b.len()];
    extend(a, b, &mut p, &mut used).then_some(p)
}
