//! JSON file formats for algebras, congruences and maps.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, Signature, Symbol};
use crate::config::Caps;
use crate::subdirect::SubproductAlgebra;
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    size: usize,
    signature: Vec<Symbol>,
    tables: BTreeMap<String, Vec<i64>>,
}

/// 1-based line of the first occurrence of `needle` at or after byte `from`.
fn line_of(text: &str, needle: &str, from: usize) -> Option<usize> {
    let from = from.min(text.len());
    text[from..]
        .find(needle)
        .map(|off| text[..from + off].matches('\n').count() + 1)
}

fn diag(origin: &str, line: Option<usize>, msg: impl std::fmt::Display) -> Error {
    match line {
        Some(l) => Error::Parse(format!("{origin}:{l}: {msg}")),
        None => Error::Parse(format!("{origin}: {msg}")),
    }
}

/// Parses and validates an algebra; `origin` names the source in diagnostics.
pub fn parse_algebra(text: &str, origin: &str) -> Result<FiniteAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text)
        .map_err(|e| diag(origin, Some(e.line()), format_args!("column {}: {e}", e.column())))?;
    let tables_at = text.find("\"tables\"").unwrap_or(0);
    let sig_at = text.find("\"signature\"").unwrap_or(0);
    if file.size == 0 {
        return Err(diag(origin, line_of(text, "\"size\"", 0), "size must be positive"));
    }
    let signature = Signature::new(file.signature.iter().map(|s| (s.name.clone(), s.arity)))
        .map_err(|e| diag(origin, line_of(text, "\"signature\"", 0), e))?;
    let mut tables = Vec::with_capacity(signature.len());
    for sym in signature.symbols() {
        let key = format!("\"{}\"", sym.name);
        let line = line_of(text, &key, tables_at);
        let raw = file
            .tables
            .get(&sym.name)
            .ok_or_else(|| diag(origin, line_of(text, &key, sig_at), format_args!("no table for `{}`", sym.name)))?;
        let expected = file.size.checked_pow(sym.arity as u32).unwrap_or(usize::MAX);
        if raw.len() != expected {
            return Err(diag(
                origin,
                line,
                format_args!(
                    "table `{}` has {} entries; arity {} over size {} needs {}",
                    sym.name,
                    raw.len(),
                    sym.arity,
                    file.size,
                    expected
                ),
            ));
        }
        let mut table = Vec::with_capacity(raw.len());
        for (i, &v) in raw.iter().enumerate() {
            if v < 0 || v as usize >= file.size {
                return Err(diag(
                    origin,
                    line,
                    format_args!("table `{}` entry {i} is {v}, outside 0..{}", sym.name, file.size),
                ));
            }
            table.push(v as u32);
        }
        tables.push(table);
    }
    if let Some(extra) = file.tables.keys().find(|k| signature.index_of(k).is_none()) {
        return Err(diag(
            origin,
            line_of(text, &format!("\"{extra}\""), tables_at),
            format_args!("table `{extra}` has no symbol in the signature"),
        ));
    }
    FiniteAlgebra::new(file.name, file.size, signature, tables)
}

pub fn algebra_to_json(a: &FiniteAlgebra) -> String {
    let file = AlgebraFile {
        name: a.name().to_string(),
        size: a.size(),
        signature: a.signature().symbols().to_vec(),
        tables: a
            .signature()
            .symbols()
            .iter()
            .zip(a.tables())
            .map(|(s, t)| (s.name.clone(), t.iter().map(|&v| v as i64).collect()))
            .collect(),
    };
    // one table per line keeps diagnostics line-addressable
    let mut out = String::from("{\n");
    out += &format!("  \"name\": {},\n", serde_json::to_string(&file.name).expect("string"));
    out += &format!("  \"size\": {},\n", file.size);
    out += &format!(
        "  \"signature\": {},\n",
        serde_json::to_string(&file.signature).expect("symbols")
    );
    out += "  \"tables\": {\n";
    let n = file.tables.len();
    for (i, (k, v)) in file.tables.iter().enumerate() {
        out += &format!(
            "    {}: {}{}\n",
            serde_json::to_string(k).expect("string"),
            serde_json::to_string(v).expect("ints"),
            if i + 1 < n { "," } else { "" }
        );
    }
    out += "  }\n}\n";
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    parse_algebra(&read(path)?, &path.display().to_string())
}

/// A congruence file: a block list such as `[[0,2],[1,3]]`, checked against `size`.
pub fn parse_partition(text: &str, size: usize, origin: &str) -> Result<Partition> {
    let blocks: Vec<Vec<usize>> = serde_json::from_str(text)
        .map_err(|e| diag(origin, Some(e.line()), e))?;
    let p = Partition::from_blocks(size, &blocks).map_err(|e| diag(origin, None, e))?;
    let covered: usize = blocks.iter().map(Vec::len).sum();
    if covered != size {
        return Err(diag(
            origin,
            None,
            format_args!("blocks cover {covered} of {size} elements"),
        ));
    }
    Ok(p)
}

pub fn load_partition(path: &Path, size: usize) -> Result<Partition> {
    parse_partition(&read(path)?, size, &path.display().to_string())
}

/// A map file: a JSON array `[f(0), f(1), …]`.
pub fn parse_map(text: &str, origin: &str) -> Result<Vec<usize>> {
    serde_json::from_str(text).map_err(|e| diag(origin, Some(e.line()), e))
}

pub fn load_map(path: &Path) -> Result<Vec<usize>> {
    parse_map(&read(path)?, &path.display().to_string())
}

/// A file path (relative to `base`) or the name of a built-in algebra.
pub fn resolve_algebra(spec: &str, base: &Path) -> Result<FiniteAlgebra> {
    let path = base.join(spec);
    if path.is_file() {
        return load_algebra(&path);
    }
    crate::zoo::builtin(spec).ok_or_else(|| {
        Error::Io(format!("`{spec}` is neither a file nor a built-in algebra ({})", crate::zoo::BUILTIN_NAMES.join(", ")))
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubproductFile {
    factors: Vec<String>,
    #[serde(default)]
    generators: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    elements: Option<Vec<Vec<usize>>>,
}

/// A subproduct file: `{"factors": [...], "generators": [[...]]}` or with `"elements"`.
///
/// Factor entries are resolved with [`resolve_algebra`] relative to `base`.
pub fn parse_subproduct(text: &str, base: &Path, origin: &str, caps: &Caps) -> Result<SubproductAlgebra> {
    let file: SubproductFile = serde_json::from_str(text).map_err(|e| diag(origin, Some(e.line()), e))?;
    let factors = file.factors.iter().map(|f| resolve_algebra(f, base)).collect::<Result<Vec<_>>>()?;
    match (file.generators, file.elements) {
        (Some(g), None) => SubproductAlgebra::generated(factors, &g, caps),
        (None, Some(e)) => SubproductAlgebra::from_elements(factors, &e, caps),
        _ => Err(diag(origin, None, "give exactly one of `generators` and `elements`")),
    }
}

pub fn load_subproduct(path: &Path, caps: &Caps) -> Result<SubproductAlgebra> {
    let base = path.parent().unwrap_or(Path::new("."));
    parse_subproduct(&read(path)?, base, &path.display().to_string(), caps)
}

/// Writes a subproduct as an `elements` file naming its factors.
pub fn subproduct_to_json(c: &SubproductAlgebra, factor_names: &[String]) -> String {
    let value = serde_json::json!({
        "factors": factor_names,
        "elements": c.tuples().collect::<Vec<_>>(),
    });
    serde_json::to_string(&value).expect("plain data")
}
