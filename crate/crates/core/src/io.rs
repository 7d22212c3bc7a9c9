//! On-disk manifests for generator maps and the certificate report.
//!
//! A manifest is a directory:
//!
//! ```text
//! manifest.txt     header, dimension, construction, generator file list
//! graph.txt        the defining graph
//! assignment.txt   vertex -> axes (1-based), slice constructions only
//! slices.txt       vertex -> S, S+, S-, slice constructions only
//! gen_<k>.elem     one element file per generator
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dyadic::{Dyadic, GeometryError, Point, Rectangle};
use crate::embedding::{
    Construction, EmbeddingError, GeneratorMap, PingPongCertificate, SliceFamily, SliceSpec,
    Witness,
};
use crate::nv::{Element, NvError};
use crate::raag::{DAssignment, Graph, RaagError};

pub const MANIFEST_FILE: &str = "manifest.txt";
const MANIFEST_HEADER: &str = "nv-raag-manifest";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}, line {line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Element { path: PathBuf, source: NvError },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: RaagError },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_graph(path: &Path) -> Result<Graph, IoError> {
    read_file(path)?.parse().map_err(|source| IoError::Graph {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_element(path: &Path) -> Result<Element, IoError> {
    read_file(path)?.parse().map_err(|source| IoError::Element {
        path: path.to_path_buf(),
        source,
    })
}

fn axes_text(axes: &BTreeSet<usize>) -> String {
    axes.iter()
        .map(|a| (a + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn point_text(p: &Point) -> String {
    p.0.iter()
        .map(Dyadic::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn generator_file(k: usize) -> String {
    format!("gen_{}.elem", k + 1)
}

/// Writes `map` into `dir` (created if missing).
pub fn write_manifest(map: &GeneratorMap, dir: &Path) -> Result<(), IoError> {
    fs::create_dir_all(dir).map_err(|source| IoError::File {
        path: dir.to_path_buf(),
        source,
    })?;
    let graph = map.graph();
    let mut m = String::new();
    writeln!(m, "{MANIFEST_HEADER}").unwrap();
    writeln!(m, "dimension {}", map.dim()).unwrap();
    writeln!(
        m,
        "complementary-edges {}",
        graph.complementary_edges().len()
    )
    .unwrap();
    writeln!(m, "graph graph.txt").unwrap();
    match map.construction() {
        Construction::Slices { assignment, family } => {
            writeln!(m, "construction slices").unwrap();
            writeln!(m, "slice-depth {}", family.depth).unwrap();
            writeln!(m, "base-point {}", point_text(&family.base_point)).unwrap();
            let mut a = String::new();
            let mut s = String::new();
            for v in 0..graph.len() {
                writeln!(a, "{} {}", graph.name(v), axes_text(&assignment.sets[v])).unwrap();
                let spec = &family.slices[v];
                writeln!(
                    s,
                    "{} axes={} slice={} plus={} minus={}",
                    graph.name(v),
                    axes_text(&spec.axes),
                    spec.slice,
                    spec.plus,
                    spec.minus
                )
                .unwrap();
            }
            write_file(&dir.join("assignment.txt"), &a)?;
            write_file(&dir.join("slices.txt"), &s)?;
        }
        Construction::Assembled {
            central,
            active_region,
            central_region,
        } => {
            writeln!(m, "construction assembled").unwrap();
            writeln!(m, "active-region {active_region}").unwrap();
            writeln!(m, "central-region {central_region}").unwrap();
            for &v in central {
                writeln!(m, "central {}", graph.name(v)).unwrap();
            }
        }
        Construction::Abelian => writeln!(m, "construction abelian").unwrap(),
    }
    for (k, g) in map.generators().iter().enumerate() {
        let file = generator_file(k);
        writeln!(m, "generator {} {file}", graph.name(k)).unwrap();
        write_file(&dir.join(&file), &g.to_string())?;
    }
    write_file(&dir.join("graph.txt"), &graph.to_string())?;
    write_file(&dir.join(MANIFEST_FILE), &m)
}

struct Lines {
    path: PathBuf,
    items: Vec<(usize, String)>,
}

impl Lines {
    fn read(path: PathBuf) -> Result<Self, IoError> {
        let text = read_file(&path)?;
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Ok(Lines { path, items })
    }

    fn err(&self, line: usize, message: impl Into<String>) -> IoError {
        IoError::Format {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }
}

fn parse_axes(text: &str, dim: usize) -> Option<BTreeSet<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&a| a >= 1 && a <= dim)
                .map(|a| a - 1)
        })
        .collect()
}

fn parse_point(tokens: &[&str]) -> Result<Point, GeometryError> {
    tokens
        .iter()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map(Point)
}

/// Reads a manifest directory back into a [`GeneratorMap`].
pub fn read_manifest(dir: &Path) -> Result<GeneratorMap, IoError> {
    let lines = Lines::read(dir.join(MANIFEST_FILE))?;
    let mut dim = None;
    let mut graph_file = None;
    let mut construction = None;
    let mut depth = None;
    let mut base_point = None;
    let mut active = None;
    let mut central_region = None;
    let mut central_names = Vec::new();
    let mut generators: Vec<(String, String)> = Vec::new();
    let Some((first_no, first)) = lines.items.first() else {
        return Err(lines.err(0, "empty manifest"));
    };
    if first != MANIFEST_HEADER {
        return Err(lines.err(*first_no, format!("expected {MANIFEST_HEADER:?}")));
    }
    for (no, line) in &lines.items[1..] {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || lines.err(*no, format!("unrecognised line {line:?}"));
        match toks.as_slice() {
            ["dimension", d] => dim = Some(d.parse::<usize>().map_err(|_| bad())?),
            ["complementary-edges", _] => {}
            ["graph", f] => graph_file = Some(f.to_string()),
            ["construction", c] => construction = Some(c.to_string()),
            ["slice-depth", d] => depth = Some(d.parse::<u32>().map_err(|_| bad())?),
            ["base-point", rest @ ..] => {
                base_point = Some(parse_point(rest).map_err(|e| lines.err(*no, e.to_string()))?)
            }
            ["active-region", r] => {
                active = Some(
                    r.parse::<Rectangle>()
                        .map_err(|e| lines.err(*no, e.to_string()))?,
                )
            }
            ["central-region", r] => {
                central_region = Some(
                    r.parse::<Rectangle>()
                        .map_err(|e| lines.err(*no, e.to_string()))?,
                )
            }
            ["central", name] => central_names.push(name.to_string()),
            ["generator", name, file] => generators.push((name.to_string(), file.to_string())),
            _ => return Err(bad()),
        }
    }
    let dim = dim.ok_or_else(|| lines.err(0, "missing dimension"))?;
    let graph = read_graph(&dir.join(graph_file.ok_or_else(|| lines.err(0, "missing graph"))?))?;
    if generators.len() != graph.len() {
        return Err(lines.err(0, "generator list does not match the graph"));
    }
    let mut elements = Vec::with_capacity(graph.len());
    for (v, (name, file)) in generators.iter().enumerate() {
        if graph.name(v) != name {
            return Err(lines.err(0, format!("generator {name:?} out of vertex order")));
        }
        elements.push(read_element(&dir.join(file))?);
    }
    let vertex = |name: &str| {
        graph
            .vertex(name)
            .ok_or_else(|| lines.err(0, format!("unknown vertex {name:?}")))
    };
    let construction = match construction.as_deref() {
        Some("slices") => {
            let depth = depth.ok_or_else(|| lines.err(0, "missing slice-depth"))?;
            let base_point = base_point.ok_or_else(|| lines.err(0, "missing base-point"))?;
            let (assignment, slices) = read_slice_data(dir, &graph, dim)?;
            Construction::Slices {
                assignment,
                family: SliceFamily {
                    depth,
                    slices,
                    base_point,
                },
            }
        }
        Some("assembled") => Construction::Assembled {
            central: central_names
                .iter()
                .map(|n| vertex(n))
                .collect::<Result<_, _>>()?,
            active_region: active.ok_or_else(|| lines.err(0, "missing active-region"))?,
            central_region: central_region.ok_or_else(|| lines.err(0, "missing central-region"))?,
        },
        Some("abelian") => Construction::Abelian,
        _ => return Err(lines.err(0, "missing or unknown construction")),
    };
    Ok(GeneratorMap::new(graph, dim, elements, construction)?)
}

fn read_slice_data(
    dir: &Path,
    graph: &Graph,
    dim: usize,
) -> Result<(DAssignment, Vec<SliceSpec>), IoError> {
    let a = Lines::read(dir.join("assignment.txt"))?;
    let mut sets = vec![None; graph.len()];
    for (no, line) in &a.items {
        let (name, axes) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| a.err(*no, "expected `<vertex> <axes>`"))?;
        let v = graph
            .vertex(name)
            .ok_or_else(|| a.err(*no, format!("unknown vertex {name:?}")))?;
        sets[v] = Some(parse_axes(axes.trim(), dim).ok_or_else(|| a.err(*no, "bad axis list"))?);
    }
    let sets = sets
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| a.err(0, "some vertex has no axes"))?;

    let s = Lines::read(dir.join("slices.txt"))?;
    let mut specs = vec![None; graph.len()];
    for (no, line) in &s.items {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let field = |key: &str| {
            toks.iter()
                .find_map(|t| t.strip_prefix(key))
                .ok_or_else(|| s.err(*no, format!("missing {key}")))
        };
        let rect = |key: &str| -> Result<Rectangle, IoError> {
            field(key)?
                .parse()
                .map_err(|e: GeometryError| s.err(*no, e.to_string()))
        };
        let name = toks.first().ok_or_else(|| s.err(*no, "empty line"))?;
        let v = graph
            .vertex(name)
            .ok_or_else(|| s.err(*no, format!("unknown vertex {name:?}")))?;
        let axes = parse_axes(field("axes=")?, dim).ok_or_else(|| s.err(*no, "bad axis list"))?;
        let spec =
            SliceSpec::with_division(axes, rect("slice=")?, rect("plus=")?, rect("minus=")?)?;
        specs[v] = Some(spec);
    }
    let specs = specs
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| s.err(0, "some vertex has no slice"))?;
    Ok((DAssignment { dim, sets }, specs))
}

fn witness_text(w: &Witness, graph: &Graph) -> String {
    let gen = |g: usize, inv: bool| format!("{}{}", graph.name(g), if inv { "^-1" } else { "" });
    match w {
        Witness::Fragment {
            generator,
            inverse,
            source,
            fragment,
            target,
        } => format!(
            "generator={} source={source} fragment={fragment} target={target}",
            gen(*generator, *inverse)
        ),
        Witness::Coverage {
            generator,
            source,
            covered,
            target,
        } => format!(
            "generator={} source={source} covered={covered} target={target} target-measure={}",
            gen(*generator, false),
            target.measure()
        ),
        Witness::BasePointInSlice { generator, point } => format!(
            "generator={} base-point={} in-slice",
            gen(*generator, false),
            point_text(point)
        ),
        Witness::BasePointImage {
            generator,
            inverse,
            image,
            target,
        } => format!(
            "generator={} image={} target={target}",
            gen(*generator, *inverse),
            point_text(image)
        ),
    }
}

/// Key/value report, one condition per line.
pub fn certificate_report(cert: &PingPongCertificate, graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "certificate {}",
        if cert.is_valid() { "valid" } else { "invalid" }
    )
    .unwrap();
    writeln!(out, "base-point {}", point_text(&cert.base_point)).unwrap();
    for (name, c) in cert.conditions() {
        let status = if c.holds() { "pass" } else { "fail" };
        writeln!(out, "{name} {status} checks={}", c.checks).unwrap();
        if let Some(w) = &c.witness {
            writeln!(out, "{name}-witness {}", witness_text(w, graph)).unwrap();
        }
    }
    out
}
