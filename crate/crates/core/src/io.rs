//! JSON interchange for groups, subgroups, modules, morphisms, sequences and
//! chains, plus the shared resolver for catalog names and file paths.
//!
//! A reference is either a catalog name or a path; names win when the
//! string has no path separator. Anywhere a reference is accepted, an
//! inline JSON object is accepted too.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{self, NamedInstance};
use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime};
use crate::groups::{FiniteGroup, Subgroup};
use crate::reps::{Module, Morphism, ShortExactSequence};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<ElementRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleJson {
    pub group: Value,
    pub p: u32,
    pub dim: usize,
    pub generator_action: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: Value,
    pub target: Value,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SesJson {
    pub inj: Value,
    pub surj: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub group: Value,
    pub elements: Vec<ElementRef>,
}

fn json_err(what: impl Into<String>) -> impl FnOnce(serde_json::Error) -> Error {
    let what = what.into();
    move |source| Error::Json { what, source }
}

fn resolve_element(g: &FiniteGroup, e: &ElementRef) -> Result<usize> {
    match e {
        ElementRef::Index(i) if *i < g.order() => Ok(*i),
        ElementRef::Index(i) => Err(Error::InvalidGroup(format!("element {i} out of range"))),
        ElementRef::Name(n) => {
            g.element_by_name(n).ok_or_else(|| Error::InvalidGroup(format!("no element named {n:?}")))
        }
    }
}

fn matrix_rows(p: Prime, rows: &[Vec<i64>], dim_rows: usize, dim_cols: usize, what: &str) -> Result<FpMatrix> {
    if rows.len() != dim_rows {
        return Err(Error::Dimension(format!("{what}: {} rows, expected {dim_rows}", rows.len())));
    }
    if dim_rows == 0 {
        return Ok(FpMatrix::zeros(p, 0, dim_cols));
    }
    let m = FpMatrix::from_rows(p, rows)?;
    if m.cols() != dim_cols {
        return Err(Error::Dimension(format!("{what}: {} columns, expected {dim_cols}", m.cols())));
    }
    Ok(m)
}

fn signed_rows(m: &FpMatrix) -> Vec<Vec<i64>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({
        "order": g.order(),
        "table": g.table_rows(),
        "generators": g.generators(),
        "names": g.names(),
    })
}

pub fn module_to_json(m: &Module) -> Value {
    let g = m.group();
    let action: BTreeMap<String, Vec<Vec<i64>>> = g
        .generators()
        .iter()
        .map(|&s| (g.name(s).to_string(), signed_rows(m.action(s))))
        .collect();
    json!({
        "group": group_to_json(g),
        "p": m.p(),
        "dim": m.dim(),
        "generator_action": action,
    })
}

pub fn morphism_to_json(f: &Morphism) -> Value {
    json!({
        "source": module_to_json(f.source()),
        "target": module_to_json(f.target()),
        "matrix": signed_rows(f.matrix()),
    })
}

pub fn ses_to_json(s: &ShortExactSequence) -> Value {
    json!({ "inj": morphism_to_json(s.inj()), "surj": morphism_to_json(s.surj()) })
}

pub fn subgroup_to_json(h: &Subgroup) -> Value {
    json!({ "group": group_to_json(h.parent()), "elements": h.elements() })
}

/// Resolves references relative to a base directory.
#[derive(Clone, Debug)]
pub struct Resolver {
    base: PathBuf,
}

impl Default for Resolver {
    fn default() -> Self {
        Resolver { base: PathBuf::from(".") }
    }
}

impl Resolver {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Resolver { base: base.into() }
    }

    fn path(&self, r: &str) -> PathBuf {
        let p = Path::new(r);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    /// Loads a reference as a catalog entry or a parsed JSON document, with
    /// the resolver to use for references nested inside it.
    fn load(&self, r: &str) -> Result<Loaded> {
        if !r.contains('/') && !r.contains(std::path::MAIN_SEPARATOR) {
            match catalog::get_example(r) {
                Ok(inst) => return Ok(Loaded::Named(inst)),
                Err(e) if !self.path(r).exists() => return Err(e),
                Err(_) => {}
            }
        }
        let path = self.path(r);
        let text = std::fs::read_to_string(&path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let value: Value = serde_json::from_str(&text).map_err(json_err(path.display().to_string()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| self.base.clone());
        Ok(Loaded::Json(value, Resolver { base }))
    }

    fn with_value<T>(
        &self,
        v: &Value,
        from_named: impl FnOnce(NamedInstance) -> Result<T>,
        from_json: impl FnOnce(&Resolver, &Value) -> Result<T>,
    ) -> Result<T> {
        match v {
            Value::String(r) => match self.load(r)? {
                Loaded::Named(inst) => from_named(inst),
                Loaded::Json(v, res) => from_json(&res, &v),
            },
            other => from_json(self, other),
        }
    }

    pub fn group(&self, r: &str) -> Result<Arc<FiniteGroup>> {
        self.group_value(&Value::String(r.into()))
    }

    pub fn group_value(&self, v: &Value) -> Result<Arc<FiniteGroup>> {
        self.with_value(
            v,
            |inst| match inst {
                NamedInstance::Group(g) => Ok(g),
                NamedInstance::Module(m) => Ok(Arc::clone(m.group())),
                NamedInstance::Subgroup(h) => Ok(Arc::clone(h.as_group())),
                other => Err(Error::Invalid(format!("expected a group, found a {}", other.kind()))),
            },
            |_, v| {
                let gj: GroupJson = serde_json::from_value(v.clone()).map_err(json_err("group"))?;
                parse_group(gj)
            },
        )
    }

    pub fn subgroup(&self, r: &str) -> Result<Subgroup> {
        self.subgroup_value(&Value::String(r.into()))
    }

    pub fn subgroup_value(&self, v: &Value) -> Result<Subgroup> {
        self.with_value(
            v,
            |inst| match inst {
                NamedInstance::Subgroup(h) => Ok(h),
                NamedInstance::Group(g) => Ok(Subgroup::full(g)),
                other => Err(Error::Invalid(format!("expected a subgroup, found a {}", other.kind()))),
            },
            |res, v| {
                let sj: SubgroupJson = serde_json::from_value(v.clone()).map_err(json_err("subgroup"))?;
                let g = res.group_value(&sj.group)?;
                let elems = sj.elements.iter().map(|e| resolve_element(&g, e)).collect::<Result<Vec<_>>>()?;
                Subgroup::new(g, elems)
            },
        )
    }

    pub fn module(&self, r: &str) -> Result<Module> {
        self.module_value(&Value::String(r.into()))
    }

    pub fn module_value(&self, v: &Value) -> Result<Module> {
        self.with_value(
            v,
            |inst| match inst {
                NamedInstance::Module(m) => Ok(m),
                other => Err(Error::Invalid(format!("expected a module, found a {}", other.kind()))),
            },
            |res, v| {
                let mj: ModuleJson = serde_json::from_value(v.clone()).map_err(json_err("module"))?;
                let g = res.group_value(&mj.group)?;
                let p = Prime::new(mj.p)?;
                let known: Vec<&str> = g.generator_names();
                if let Some(extra) = mj.generator_action.keys().find(|k| !known.contains(&k.as_str())) {
                    return Err(Error::InvalidModule(format!("{extra:?} is not a generator of the group")));
                }
                let images = known
                    .iter()
                    .map(|name| {
                        let rows = mj
                            .generator_action
                            .get(*name)
                            .ok_or_else(|| Error::InvalidModule(format!("no action given for generator {name:?}")))?;
                        matrix_rows(p, rows, mj.dim, mj.dim, name)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Module::from_generators(g, p, mj.dim, images)
            },
        )
    }

    pub fn morphism_value(&self, v: &Value) -> Result<Morphism> {
        self.with_value(
            v,
            |inst| Err(Error::Invalid(format!("expected a morphism, found a {}", inst.kind()))),
            |res, v| {
                let fj: MorphismJson = serde_json::from_value(v.clone()).map_err(json_err("morphism"))?;
                let source = res.module_value(&fj.source)?;
                let target = res.module_value(&fj.target)?;
                let m = matrix_rows(source.prime(), &fj.matrix, target.dim(), source.dim(), "morphism")?;
                Morphism::new(source, target, m)
            },
        )
    }

    pub fn morphism(&self, r: &str) -> Result<Morphism> {
        self.morphism_value(&Value::String(r.into()))
    }

    pub fn ses(&self, r: &str) -> Result<ShortExactSequence> {
        self.with_value(
            &Value::String(r.into()),
            |inst| match inst {
                NamedInstance::Ses(s) => Ok(s),
                other => Err(Error::Invalid(format!("expected a sequence, found a {}", other.kind()))),
            },
            |res, v| {
                let sj: SesJson = serde_json::from_value(v.clone()).map_err(json_err("sequence"))?;
                ShortExactSequence::new(res.morphism_value(&sj.inj)?, res.morphism_value(&sj.surj)?)
            },
        )
    }

    /// A chain file is `{"maps": [<morphism>, ...]}` or a bare array.
    pub fn chain(&self, r: &str) -> Result<Vec<Morphism>> {
        self.with_value(
            &Value::String(r.into()),
            |inst| match inst {
                NamedInstance::Chain(c) => Ok(c),
                other => Err(Error::Invalid(format!("expected a chain, found a {}", other.kind()))),
            },
            |res, v| {
                let maps = match v {
                    Value::Array(a) => a,
                    Value::Object(o) => o
                        .get("maps")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Invalid("chain object needs a \"maps\" array".into()))?,
                    _ => return Err(Error::Invalid("chain must be an object or array".into())),
                };
                maps.iter().map(|m| res.morphism_value(m)).collect()
            },
        )
    }
}

enum Loaded {
    Named(NamedInstance),
    Json(Value, Resolver),
}

pub fn parse_group(gj: GroupJson) -> Result<Arc<FiniteGroup>> {
    if let Some(n) = gj.order {
        if n != gj.table.len() {
            return Err(Error::InvalidGroup(format!("order {n} but table has {} rows", gj.table.len())));
        }
    }
    // Generators may be given by name, so build once with names to resolve them.
    let provisional = FiniteGroup::from_table(gj.table.clone(), None, gj.names.clone())?;
    let gens = gj
        .generators
        .as_ref()
        .map(|gs| gs.iter().map(|e| resolve_element(&provisional, e)).collect::<Result<Vec<_>>>())
        .transpose()?;
    Ok(Arc::new(FiniteGroup::from_table(gj.table, gens, gj.names)?))
}

/// Classifies a JSON document by its keys and validates it.
pub fn validate_document(res: &Resolver, v: &Value) -> Result<&'static str> {
    let has = |k: &str| v.get(k).is_some();
    if v.is_array() || has("maps") {
        let maps = match v {
            Value::Array(a) => a.clone(),
            _ => v["maps"].as_array().cloned().unwrap_or_default(),
        };
        let maps = maps.iter().map(|m| res.morphism_value(m)).collect::<Result<Vec<_>>>()?;
        crate::triangles::Chain::new(maps)?;
        Ok("chain")
    } else if has("inj") {
        let sj: SesJson = serde_json::from_value(v.clone()).map_err(json_err("sequence"))?;
        ShortExactSequence::new(res.morphism_value(&sj.inj)?, res.morphism_value(&sj.surj)?)?;
        Ok("ses")
    } else if has("matrix") {
        res.morphism_value(v)?;
        Ok("morphism")
    } else if has("generator_action") {
        res.module_value(v)?;
        Ok("module")
    } else if has("elements") {
        res.subgroup_value(v)?;
        Ok("subgroup")
    } else if has("table") {
        res.group_value(v)?;
        Ok("group")
    } else {
        Err(Error::Invalid("unrecognized document".into()))
    }
}

/// Loads and validates a file, returning its kind.
pub fn validate_file(path: &Path) -> Result<&'static str> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let v: Value = serde_json::from_str(&text).map_err(json_err(path.display().to_string()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    validate_document(&Resolver::new(base), &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn catalog_names_resolve() {
        let r = Resolver::default();
        assert_eq!(r.module("klein4.v").unwrap().dim(), 2);
        assert_eq!(r.group("klein4").unwrap().order(), 4);
        assert_eq!(r.subgroup("klein4.H").unwrap().order(), 2);
        assert_eq!(r.chain("klein4.chain").unwrap().len(), 2);
        assert!(r.ses("c2.nonsplit_ses").is_ok());
        assert!(matches!(r.module("nope"), Err(Error::UnknownExample { .. })));
    }

    #[test]
    fn group_json_infers_identity() {
        // Identity placed at index 1.
        let v = json!({"table": [[1, 0], [0, 1]]});
        let g = Resolver::default().group_value(&v).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.generators(), &[0]);
    }

    #[test]
    fn module_json_by_generator_name() {
        let v = json!({
            "group": "klein4", "p": 2, "dim": 2,
            "generator_action": {"g": [[1, 0], [1, 1]], "h": [[1, 0], [0, 1]]}
        });
        let m = Resolver::default().module_value(&v).unwrap();
        assert_eq!(m, catalog::module("klein4.v").unwrap());

        let bad = json!({
            "group": "klein4", "p": 2, "dim": 2,
            "generator_action": {"g": [[1, 1], [0, 1]], "h": [[1, 0], [1, 1]]}
        });
        // g and h as given do not commute.
        assert!(matches!(Resolver::default().module_value(&bad), Err(Error::InvalidModule(_))));
        let missing = json!({"group": "klein4", "p": 2, "dim": 1, "generator_action": {"g": [[1]]}});
        assert!(Resolver::default().module_value(&missing).is_err());
    }

    #[test]
    fn broken_intertwiner_rejected() {
        let v = json!({"source": "klein4.k", "target": "klein4.v", "matrix": [[1], [0]]});
        assert!(matches!(Resolver::default().morphism_value(&v), Err(Error::NotIntertwining(_))));
        let v = json!({"source": "klein4.k", "target": "klein4.v", "matrix": [[0], [1]]});
        assert!(Resolver::default().morphism_value(&v).is_ok());
    }

    #[test]
    fn files_resolve_relative_to_their_directory() {
        let dir = std::env::temp_dir().join(format!("relstab-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let m = module_to_json(&catalog::module("klein4.v_prime").unwrap());
        std::fs::write(dir.join("vp.json"), m.to_string()).unwrap();
        let f = json!({"source": "klein4.k", "target": "./vp.json", "matrix": [[0], [0], [1]]});
        std::fs::write(dir.join("socle.json"), f.to_string()).unwrap();
        let chain = json!({"maps": ["./socle.json"]});
        std::fs::write(dir.join("chain.json"), chain.to_string()).unwrap();
        let r = Resolver::default();
        let loaded = r.chain(dir.join("chain.json").to_str().unwrap()).unwrap();
        assert_eq!(loaded[0].target(), &catalog::module("klein4.v_prime").unwrap());
        assert_eq!(validate_file(&dir.join("chain.json")).unwrap(), "chain");
        assert_eq!(validate_file(&dir.join("vp.json")).unwrap(), "module");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    fn catalog_modules() -> Vec<Module> {
        catalog::names().iter().filter_map(|n| catalog::module(n).ok()).collect()
    }

    proptest! {
        #[test]
        fn module_json_round_trip(idx in 0usize..10, twist in 0usize..3) {
            let mods = catalog_modules();
            let mut m = mods[idx % mods.len()].clone();
            for _ in 0..twist {
                m = crate::reps::direct_sum(&m, &crate::reps::dual(&m)).unwrap();
            }
            let text = module_to_json(&m).to_string();
            let back = Resolver::default().module_value(&serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back.group().generators(), m.group().generators());
            prop_assert_eq!(back.group().names(), m.group().names());
            prop_assert_eq!(back, m);
        }
    }
}
