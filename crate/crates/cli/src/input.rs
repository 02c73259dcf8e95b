//! Group spec files and grading lists.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use goldman_core::{AbelianGroup, GroupElement, GroupSpec};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    generators: Option<usize>,
    #[serde(default)]
    relations: Vec<Vec<i64>>,
    form: Option<Vec<Vec<i64>>>,
    names: Option<Vec<String>>,
    surface: Option<SurfaceFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    genus: usize,
    boundary: usize,
}

/// Where the group comes from and, for surfaces, (genus, boundary).
#[derive(Debug)]
pub struct Loaded {
    pub group: AbelianGroup,
    pub surface: Option<(usize, usize)>,
}

pub fn parse_spec(text: &str, origin: &str) -> Result<Loaded> {
    let f: SpecFile = serde_json::from_str(text).map_err(|e| {
        anyhow!("{origin}:{}:{}: parse error: {}", e.line(), e.column(), e)
    })?;
    if let Some(s) = f.surface {
        if f.generators.is_some() || f.form.is_some() || !f.relations.is_empty() || f.names.is_some() {
            bail!("{origin}: \"surface\" cannot be combined with generators, relations, form or names");
        }
        let spec = GroupSpec::surface(s.genus, s.boundary).with_context(|| format!("{origin}: invalid surface"))?;
        return Ok(Loaded { group: AbelianGroup::new(spec), surface: Some((s.genus, s.boundary)) });
    }
    let n = f.generators.ok_or_else(|| anyhow!("{origin}: missing \"generators\" (or \"surface\")"))?;
    let form = f.form.ok_or_else(|| anyhow!("{origin}: missing \"form\""))?;
    let spec = match f.names {
        Some(names) => GroupSpec::with_names(n, f.relations, form, names),
        None => GroupSpec::new(n, f.relations, form),
    }
    .map_err(|e| anyhow!("{origin}: validation failed: {e}"))?;
    Ok(Loaded { group: AbelianGroup::new(spec), surface: None })
}

pub fn load_spec(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_spec(&text, &path.display().to_string())
}

pub fn surface(arg: &str) -> Result<Loaded> {
    let (g, r) = arg
        .split_once(',')
        .ok_or_else(|| anyhow!("--surface expects g,r (e.g. 2,3), got '{arg}'"))?;
    let g: usize = g.trim().parse().with_context(|| format!("bad genus '{g}'"))?;
    let r: usize = r.trim().parse().with_context(|| format!("bad boundary count '{r}'"))?;
    let spec = GroupSpec::surface(g, r).map_err(|e| anyhow!("invalid surface: {e}"))?;
    Ok(Loaded { group: AbelianGroup::new(spec), surface: Some((g, r)) })
}

/// One grading: `0`, generator coordinates `1:0:-2`, or a combination of
/// generator names such as `A1+2B1-C3`.
pub fn parse_element(h: &AbelianGroup, tok: &str) -> Result<GroupElement> {
    let tok = tok.trim();
    if tok == "0" {
        return Ok(h.zero());
    }
    if tok.contains(':') || tok.parse::<i64>().is_ok() {
        let coords = tok
            .split(':')
            .map(|c| c.trim().parse::<i64>().with_context(|| format!("bad coordinate '{c}' in '{tok}'")))
            .collect::<Result<Vec<_>>>()?;
        return h.element(&coords).map_err(|e| anyhow!("grading '{tok}': {e}"));
    }
    let mut coords = vec![0i64; h.n_generators()];
    let mut rest = tok;
    while !rest.is_empty() {
        let sign = match rest.as_bytes()[0] {
            b'-' => -1,
            _ => 1,
        };
        if rest.starts_with(['+', '-']) {
            rest = &rest[1..];
        }
        let digits = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let k: i64 = if digits == 0 { 1 } else { rest[..digits].parse()? };
        rest = &rest[digits..];
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let name = &rest[..end];
        let i = h
            .spec()
            .generator_index(name)
            .ok_or_else(|| anyhow!("grading '{tok}': unknown generator '{name}' (have {})", h.spec().names().join(", ")))?;
        coords[i] += sign * k;
        rest = &rest[end..];
    }
    h.element(&coords).map_err(|e| anyhow!("grading '{tok}': {e}"))
}

pub enum Gradings {
    Default,
    AllInBox,
    List(Vec<GroupElement>),
}

pub fn parse_gradings(h: &AbelianGroup, arg: Option<&str>) -> Result<Gradings> {
    match arg {
        None => Ok(Gradings::Default),
        Some("all") => Ok(Gradings::AllInBox),
        Some(list) => {
            let mut out: Vec<GroupElement> = Vec::new();
            for tok in list.split(',') {
                let z = parse_element(h, tok)?;
                if !out.contains(&z) {
                    out.push(z);
                }
            }
            Ok(Gradings::List(out))
        }
    }
}
