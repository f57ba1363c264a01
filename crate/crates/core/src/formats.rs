//! Plain-text structure files.
//!
//! Every file starts with a header keyword; `#` starts a comment and blank
//! lines are ignored. Element and vertex indices are 0-based.
//!
//! ```text
//! group <n>              n rows of n indices, element 0 the identity
//! semigroup <n>          n rows of n indices
//! rband <l> <r>
//! bigraph <L> <R>        then lines `<l> <r> [label]`
//! semilattice <n>        n rows of the meet table
//! rees                   then a group block or `include <file>`,
//!                        then `matrix <rows> <cols>`; `.` is zero
//! sss                    a semilattice block, one `component <a>` block
//!                        per element (group, semigroup or rband), and
//!                        `connector <a> <b>` followed by an image line
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bigraph::{BipartiteGraph, GraphError, LabelledBipartiteGraph};
use crate::finsemi::{BandError, FiniteSemigroup, RectangularBand, SemigroupError};
use crate::groups::{FiniteGroup, GroupError};
use crate::rees::{ReesError, ReesMatrixSemigroup, SandwichMatrix};
use crate::semilat::{Semilattice, SemilatticeError, SssError, StrongSemilattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Band(#[from] BandError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rees(#[from] ReesError),
    #[error(transparent)]
    Semilattice(#[from] SemilatticeError),
    #[error(transparent)]
    Strong(#[from] SssError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid structure: {0}")]
    Validation(#[from] ValidationError),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self::Parse { line, message: message.into() }
    }
}

macro_rules! invalid {
    ($e:expr) => {
        $e.map_err(|e| FormatError::Validation(e.into()))
    };
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Group(FiniteGroup),
    Semigroup(FiniteSemigroup),
    RectangularBand(RectangularBand),
    Bigraph(BipartiteGraph),
    LabelledBigraph(LabelledBipartiteGraph),
    Rees(ReesMatrixSemigroup),
    Semilattice(Semilattice),
    Strong(StrongSemilattice),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Group(_) => "group",
            Structure::Semigroup(_) => "semigroup",
            Structure::RectangularBand(_) => "rband",
            Structure::Bigraph(_) | Structure::LabelledBigraph(_) => "bigraph",
            Structure::Rees(_) => "rees",
            Structure::Semilattice(_) => "semilattice",
            Structure::Strong(_) => "sss",
        }
    }

    /// The underlying semigroup, for structures that are semigroups.
    pub fn as_semigroup(&self) -> Option<FiniteSemigroup> {
        match self {
            Structure::Group(g) => Some(FiniteSemigroup::from_group(g)),
            Structure::Semigroup(s) => Some(s.clone()),
            Structure::RectangularBand(b) => Some(b.to_semigroup()),
            Structure::Rees(r) => Some(r.to_semigroup()),
            Structure::Semilattice(y) => Some(y.as_semigroup()),
            Structure::Strong(s) => Some(s.flatten()),
            Structure::Bigraph(_) | Structure::LabelledBigraph(_) => None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Structure::Group(g) => write_table(&mut out, &format!("group {}", g.order()), &g.table_rows()),
            Structure::Semigroup(s) => write_table(&mut out, &format!("semigroup {}", s.order()), &s.table_rows()),
            Structure::RectangularBand(b) => writeln!(out, "rband {} {}", b.left_size(), b.right_size()).expect("string"),
            Structure::Bigraph(g) => {
                writeln!(out, "bigraph {} {}", g.left_size(), g.right_size()).expect("string");
                for (l, r) in g.edges() {
                    writeln!(out, "{l} {r}").expect("string");
                }
            }
            Structure::LabelledBigraph(g) => {
                writeln!(out, "bigraph {} {}", g.graph().left_size(), g.graph().right_size()).expect("string");
                for (l, r, label) in g.labelled_edges() {
                    writeln!(out, "{l} {r} {label}").expect("string");
                }
            }
            Structure::Rees(s) => {
                out.push_str("rees\n");
                write_table(&mut out, &format!("group {}", s.group().order()), &s.group().table_rows());
                let m = s.matrix();
                writeln!(out, "matrix {} {}", m.rows(), m.cols()).expect("string");
                for row in m.to_rows() {
                    let cells: Vec<String> = row.iter().map(|e| e.map_or_else(|| ".".to_string(), |g| g.to_string())).collect();
                    writeln!(out, "{}", cells.join(" ")).expect("string");
                }
            }
            Structure::Semilattice(y) => write_table(&mut out, &format!("semilattice {}", y.order()), &y.table_rows()),
            Structure::Strong(s) => {
                out.push_str("sss\n");
                let y = s.lattice();
                write_table(&mut out, &format!("semilattice {}", y.order()), &y.table_rows());
                for (alpha, c) in s.components().iter().enumerate() {
                    writeln!(out, "component {alpha}").expect("string");
                    write_table(&mut out, &format!("semigroup {}", c.order()), &c.table_rows());
                }
                for ((alpha, beta), images) in s.proper_connectors() {
                    writeln!(out, "connector {alpha} {beta}").expect("string");
                    writeln!(out, "{}", join(&images)).expect("string");
                }
            }
        }
        out
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn write_table(out: &mut String, header: &str, rows: &[Vec<usize>]) {
    writeln!(out, "{header}").expect("string");
    for row in rows {
        writeln!(out, "{}", join(row)).expect("string");
    }
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        let last_line = text.lines().count().max(1);
        Self { lines, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&(usize, Vec<&'a str>)> {
        self.lines.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), FormatError> {
        let line = self.lines.get(self.pos).cloned().ok_or_else(|| FormatError::at(self.last_line, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(line)
    }

    fn done(&self) -> Result<(), FormatError> {
        match self.peek() {
            Some((line, tokens)) => Err(FormatError::at(*line, format!("unexpected trailing content {:?}", tokens.join(" ")))),
            None => Ok(()),
        }
    }

    /// A header `keyword a b ...` with `arity` numeric arguments.
    fn header(&mut self, keyword: &str, arity: usize) -> Result<(usize, Vec<usize>), FormatError> {
        let (line, tokens) = self.next(&format!("`{keyword}`"))?;
        if tokens[0] != keyword {
            return Err(FormatError::at(line, format!("expected `{keyword}`, found `{}`", tokens[0])));
        }
        if tokens.len() != arity + 1 {
            return Err(FormatError::at(line, format!("`{keyword}` takes {arity} argument(s)")));
        }
        Ok((line, numbers(line, &tokens[1..])?))
    }

    fn table(&mut self, n: usize) -> Result<Vec<Vec<usize>>, FormatError> {
        (0..n)
            .map(|_| {
                let (line, tokens) = self.next("a table row")?;
                if tokens.len() != n {
                    return Err(FormatError::at(line, format!("expected {n} entries, found {}", tokens.len())));
                }
                numbers(line, &tokens)
            })
            .collect()
    }
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<usize>, FormatError> {
    tokens
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| FormatError::at(line, format!("`{t}` is not a non-negative integer"))))
        .collect()
}

/// Parses a structure file; `include` paths are resolved against `base_dir`.
pub fn parse_str(text: &str, base_dir: Option<&Path>) -> Result<Structure, FormatError> {
    let mut lines = Lines::new(text);
    let keyword = lines.peek().map(|(_, t)| t[0]).ok_or_else(|| FormatError::at(1, "empty file"))?;
    let structure = match keyword {
        "group" => Structure::Group(group_block(&mut lines)?),
        "semigroup" => Structure::Semigroup(semigroup_block(&mut lines)?),
        "rband" => Structure::RectangularBand(rband_block(&mut lines)?),
        "bigraph" => bigraph_block(&mut lines)?,
        "semilattice" => Structure::Semilattice(semilattice_block(&mut lines)?),
        "rees" => Structure::Rees(rees_block(&mut lines, base_dir)?),
        "sss" => Structure::Strong(sss_block(&mut lines)?),
        other => {
            let line = lines.peek().map_or(1, |l| l.0);
            return Err(FormatError::at(line, format!("unknown structure kind `{other}`")));
        }
    };
    lines.done()?;
    Ok(structure)
}

pub fn parse_file(path: &Path) -> Result<Structure, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    parse_str(&text, path.parent())
}

fn group_block(lines: &mut Lines) -> Result<FiniteGroup, FormatError> {
    let (_, args) = lines.header("group", 1)?;
    let rows = lines.table(args[0])?;
    invalid!(FiniteGroup::from_table(&rows))
}

fn semigroup_block(lines: &mut Lines) -> Result<FiniteSemigroup, FormatError> {
    let (_, args) = lines.header("semigroup", 1)?;
    let rows = lines.table(args[0])?;
    invalid!(FiniteSemigroup::from_table(&rows))
}

fn rband_block(lines: &mut Lines) -> Result<RectangularBand, FormatError> {
    let (_, args) = lines.header("rband", 2)?;
    invalid!(RectangularBand::new(args[0], args[1]))
}

fn semilattice_block(lines: &mut Lines) -> Result<Semilattice, FormatError> {
    let (_, args) = lines.header("semilattice", 1)?;
    let rows = lines.table(args[0])?;
    invalid!(Semilattice::from_table(&rows))
}

fn bigraph_block(lines: &mut Lines) -> Result<Structure, FormatError> {
    let (_, args) = lines.header("bigraph", 2)?;
    let mut plain = Vec::new();
    let mut labelled = Vec::new();
    while lines.peek().is_some() {
        let (line, tokens) = lines.next("an edge")?;
        match tokens.len() {
            2 | 3 => {
                let ends = numbers(line, &tokens[..2])?;
                if tokens.len() == 3 {
                    labelled.push((ends[0], ends[1], tokens[2].to_string()));
                } else {
                    plain.push((ends[0], ends[1]));
                }
                if !plain.is_empty() && !labelled.is_empty() {
                    return Err(FormatError::at(line, "either every edge carries a label or none does"));
                }
            }
            _ => return Err(FormatError::at(line, "an edge line is `<l> <r> [label]`")),
        }
    }
    if labelled.is_empty() {
        Ok(Structure::Bigraph(invalid!(BipartiteGraph::new(args[0], args[1], &plain))?))
    } else {
        Ok(Structure::LabelledBigraph(invalid!(LabelledBipartiteGraph::new(args[0], args[1], &labelled))?))
    }
}

fn rees_block(lines: &mut Lines, base_dir: Option<&Path>) -> Result<ReesMatrixSemigroup, FormatError> {
    lines.header("rees", 0)?;
    let (line, tokens) = lines.peek().cloned().ok_or_else(|| FormatError::at(lines.last_line, "expected a group block or `include`"))?;
    let group = if tokens[0] == "include" {
        lines.next("include")?;
        if tokens.len() != 2 {
            return Err(FormatError::at(line, "`include` takes one path"));
        }
        let path = base_dir.map_or_else(|| PathBuf::from(tokens[1]), |d| d.join(tokens[1]));
        match parse_file(&path)? {
            Structure::Group(g) => g,
            other => return Err(FormatError::at(line, format!("included file holds a {}, expected a group", other.kind()))),
        }
    } else {
        group_block(lines)?
    };
    let (_, args) = lines.header("matrix", 2)?;
    let (rows, cols) = (args[0], args[1]);
    let mut matrix = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (line, tokens) = lines.next("a matrix row")?;
        if tokens.len() != cols {
            return Err(FormatError::at(line, format!("expected {cols} entries, found {}", tokens.len())));
        }
        let row = tokens
            .iter()
            .map(|&t| if t == "." { Ok(None) } else { numbers(line, &[t]).map(|v| Some(v[0])) })
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    let matrix = invalid!(SandwichMatrix::new(matrix))?;
    invalid!(ReesMatrixSemigroup::new(group, matrix))
}

fn component_block(lines: &mut Lines) -> Result<FiniteSemigroup, FormatError> {
    let (line, tokens) = lines.peek().cloned().ok_or_else(|| FormatError::at(lines.last_line, "expected a component block"))?;
    match tokens[0] {
        "group" => Ok(FiniteSemigroup::from_group(&group_block(lines)?)),
        "semigroup" => semigroup_block(lines),
        "rband" => Ok(rband_block(lines)?.to_semigroup()),
        other => Err(FormatError::at(line, format!("a component is a group, semigroup or rband, not `{other}`"))),
    }
}

fn sss_block(lines: &mut Lines) -> Result<StrongSemilattice, FormatError> {
    lines.header("sss", 0)?;
    let lattice = semilattice_block(lines)?;
    let mut components: Vec<Option<FiniteSemigroup>> = vec![None; lattice.order()];
    let mut connectors = Vec::new();
    while let Some((line, tokens)) = lines.peek().cloned() {
        match tokens[0] {
            "component" => {
                let (_, args) = lines.header("component", 1)?;
                let slot = components.get_mut(args[0]).ok_or_else(|| FormatError::at(line, format!("component {} is not in the semilattice", args[0])))?;
                if slot.is_some() {
                    return Err(FormatError::at(line, format!("component {} given twice", args[0])));
                }
                *slot = Some(component_block(lines)?);
            }
            "connector" => {
                let (_, args) = lines.header("connector", 2)?;
                let (line, tokens) = lines.next("a connector image line")?;
                connectors.push(((args[0], args[1]), numbers(line, &tokens)?));
            }
            other => return Err(FormatError::at(line, format!("expected `component` or `connector`, found `{other}`"))),
        }
    }
    let components = components
        .into_iter()
        .enumerate()
        .map(|(alpha, c)| c.ok_or_else(|| FormatError::at(lines.last_line, format!("component {alpha} is missing"))))
        .collect::<Result<Vec<_>, _>>()?;
    invalid!(StrongSemilattice::new(lattice, components, connectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rees::tests::small_rees;

    #[test]
    fn group_file() {
        let s = parse_str("# the cyclic group of order 2\ngroup 2\n0 1\n1 0\n", None).unwrap();
        assert_eq!(s, Structure::Group(FiniteGroup::cyclic(2)));
    }

    #[test]
    fn rees_file_with_zero_entries() {
        let text = "rees\ngroup 2\n0 1\n1 0\nmatrix 2 2\n0 .\n. 0\n";
        let Structure::Rees(r) = parse_str(text, None).unwrap() else { panic!("not rees") };
        assert_eq!(r, ReesMatrixSemigroup::brandt(FiniteGroup::cyclic(2), 2));
    }

    #[test]
    fn non_regular_matrix_is_a_validation_error() {
        let text = "rees\ngroup 1\n0\nmatrix 2 2\n0 0\n. .\n";
        assert_eq!(parse_str(text, None), Err(FormatError::Validation(ValidationError::Rees(ReesError::ZeroRow(1)))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse_str("group 2\n0 1\n1\n", None), Err(FormatError::at(3, "expected 2 entries, found 1")));
        assert_eq!(parse_str("\n\nmonoid 3\n", None), Err(FormatError::at(3, "unknown structure kind `monoid`")));
        assert_eq!(parse_str("group 1\n0\n0\n", None), Err(FormatError::at(3, "unexpected trailing content \"0\"")));
        assert!(matches!(parse_str("rband 2 x", None), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(parse_str("bigraph 2 2\n0 0 a\n1 1\n", None), Err(FormatError::Parse { line: 3, .. })));
    }

    #[test]
    fn include_resolves_relative_to_the_file() {
        let dir = std::env::temp_dir().join(format!("semicat-formats-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("z3.group"), Structure::Group(FiniteGroup::cyclic(3)).to_text()).unwrap();
        std::fs::write(dir.join("row.rees"), "rees\ninclude z3.group\nmatrix 1 2\n0 1\n").unwrap();
        let Structure::Rees(r) = parse_file(&dir.join("row.rees")).unwrap() else { panic!("not rees") };
        assert_eq!(r.group(), &FiniteGroup::cyclic(3));
        assert_eq!(r.order(), 7);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn sss_file() {
        let text = "sss\nsemilattice 2\n0 0\n0 1\ncomponent 0\ngroup 2\n0 1\n1 0\ncomponent 1\ngroup 2\n0 1\n1 0\nconnector 1 0\n0 1\n";
        let Structure::Strong(s) = parse_str(text, None).unwrap() else { panic!("not sss") };
        assert_eq!(s.order(), 4);
        assert!(matches!(
            parse_str(&text.replace("connector 1 0\n0 1\n", "connector 1 0\n1 0\n"), None),
            Err(FormatError::Validation(ValidationError::Strong(SssError::ConnectorNotHomomorphism { .. })))
        ));
    }

    #[test]
    fn round_trips() {
        let structures = vec![
            Structure::Group(FiniteGroup::symmetric(3)),
            Structure::RectangularBand(RectangularBand::new(2, 3).unwrap()),
            Structure::Semigroup(RectangularBand::new(2, 2).unwrap().to_semigroup()),
            Structure::Bigraph(BipartiteGraph::new(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap()),
            Structure::LabelledBigraph(LabelledBipartiteGraph::new(2, 2, &[(0, 0, "a".into()), (1, 1, "b".into())]).unwrap()),
            Structure::Semilattice(Semilattice::chain(3)),
            Structure::Strong(crate::semilat::tests::two_chain_z2()),
        ];
        for s in structures {
            assert_eq!(parse_str(&s.to_text(), None).as_ref(), Ok(&s), "{}", s.to_text());
        }
    }

    proptest::proptest! {
        #[test]
        fn rees_round_trips(r in small_rees()) {
            let s = Structure::Rees(r);
            proptest::prop_assert_eq!(parse_str(&s.to_text(), None), Ok(s));
        }
    }
}
