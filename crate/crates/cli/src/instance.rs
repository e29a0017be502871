//! The JSON instance format: named objects, maps, categories, functors,
//! transformations, anafunctors and crossed modules over one ambient.
//!
//! Declarations may only refer to earlier kinds (objects before maps before
//! categories, and so on). Every structure is validated as it is loaded;
//! errors carry the file and the JSON path of the offending declaration.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use anacat::ambient::{pullback, Ambient, Arr, Obj, Structure};
use anacat::ana::{alpha, AnaTransformation, Anafunctor};
use anacat::instances::{CrossedModule, FiniteGroup};
use anacat::internal::{BaseChange, Cat, InternalCategory, InternalFunctor, NaturalTransformation};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{file}: {source}")]
    Io { file: String, source: std::io::Error },
    #[error("{file}:{line}:{column}: {message}")]
    Syntax { file: String, line: usize, column: usize, message: String },
    #[error("{at}: undeclared {kind} `{name}`")]
    Dangling { at: String, kind: &'static str, name: String },
    #[error("{at}: {message}")]
    Invalid { at: String, message: String },
}

impl LoadError {
    /// Validator failures, as opposed to unreadable or ill-formed files.
    pub fn is_validation(&self) -> bool {
        matches!(self, LoadError::Invalid { .. })
    }
}

type Result<T> = std::result::Result<T, LoadError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default = "finset")]
    ambient: String,
    #[serde(default)]
    groups: BTreeMap<String, RawGroup>,
    #[serde(default)]
    objects: BTreeMap<String, RawObject>,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
    #[serde(default)]
    categories: BTreeMap<String, RawCategory>,
    #[serde(default)]
    functors: BTreeMap<String, RawFunctor>,
    #[serde(default)]
    transformations: BTreeMap<String, RawTransformation>,
    #[serde(default)]
    anafunctors: BTreeMap<String, RawAnafunctor>,
    #[serde(default)]
    ana_transformations: BTreeMap<String, RawAnaTransformation>,
    #[serde(default)]
    crossed_modules: BTreeMap<String, RawCrossedModule>,
    /// Arrows making up a `custom:<file>` pretopology.
    #[serde(default)]
    covers: Vec<RawMap>,
}

fn finset() -> String {
    "finset".into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupRef {
    Name(String),
    Inline(RawGroup),
}

/// `{"size": n}` in FinSet, `{"group": G}` or `{"order", "mul"}` in FinGrp,
/// `{"size": n, "action": [[..]]}` in FinGSet (a missing action is trivial).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    size: Option<usize>,
    action: Option<Vec<Vec<usize>>>,
    group: Option<GroupRef>,
    order: Option<usize>,
    mul: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    dom: String,
    cod: String,
    table: Vec<usize>,
}

/// A declared map by name, a bare table between known ends, or an inline
/// declaration.
#[derive(Deserialize)]
#[serde(untagged)]
enum MapRef {
    Name(String),
    Table(Vec<usize>),
    Inline(RawMap),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    obj: String,
    arr: String,
    s: MapRef,
    t: MapRef,
    e: MapRef,
    m: RawComposition,
}

/// Every composable pair `[g, f, g∘f]`, listed exactly once.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComposition {
    pairs: Vec<[usize; 3]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctor {
    dom: String,
    cod: String,
    f0: MapRef,
    f1: MapRef,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransformation {
    src: String,
    tgt: String,
    component: MapRef,
}

/// Either the image of a declared functor, or a cover `u: U → X₀` with the
/// functor `X[U] → Y` given by `f0` on cover points and `f1` as quadruples
/// `[p₁, p₂, x, y]` sending the arrow `x: u p₁ → u p₂` to `y`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnafunctor {
    src: String,
    tgt: String,
    functor: Option<String>,
    cover: Option<MapRef>,
    f0: Option<Vec<usize>>,
    f1: Option<Vec<[usize; 4]>>,
}

/// Components as triples `[p, q, y]` over pairs of cover points with
/// `u p = v q`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnaTransformation {
    src: String,
    tgt: String,
    component: Vec<[usize; 3]>,
}

/// `t: G → H` with `action[h][g]`; a missing action is trivial.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrossedModule {
    g: GroupRef,
    h: GroupRef,
    t: Vec<usize>,
    action: Option<Vec<Vec<usize>>>,
}

/// A fully resolved and validated instance file.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ambient: Ambient,
    pub objects: BTreeMap<String, Obj>,
    pub maps: BTreeMap<String, Arr>,
    pub categories: BTreeMap<String, Cat>,
    pub functors: BTreeMap<String, InternalFunctor>,
    pub transformations: BTreeMap<String, NaturalTransformation>,
    pub anafunctors: BTreeMap<String, Anafunctor>,
    pub ana_transformations: BTreeMap<String, AnaTransformation>,
    pub crossed_modules: BTreeMap<String, CrossedModule>,
    pub covers: Vec<Arr>,
}

impl Instance {
    pub fn load(path: &Path) -> Result<Self> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { file: file.clone(), source })?;
        Self::parse(&file, &text)
    }

    pub fn parse(file: &str, text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| LoadError::Syntax {
            file: file.into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Loader::new(file).resolve(raw)
    }
}

struct Loader {
    file: String,
    groups: HashMap<String, Arc<FiniteGroup>>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &'static str, name: &str, at: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| LoadError::Dangling { at: at.into(), kind, name: name.into() })
}

impl Loader {
    fn new(file: &str) -> Self {
        Self { file: file.into(), groups: HashMap::new() }
    }

    fn at(&self, path: impl std::fmt::Display) -> String {
        format!("{}: {path}", self.file)
    }

    fn invalid(&self, path: impl std::fmt::Display, message: impl std::fmt::Display) -> LoadError {
        LoadError::Invalid { at: self.at(path), message: message.to_string() }
    }

    fn resolve(mut self, raw: RawFile) -> Result<Instance> {
        for (name, g) in &raw.groups {
            let group = self.inline_group(g, &format!("groups.{name}"))?;
            self.groups.insert(name.clone(), Arc::new(group));
        }
        let ambient = self.ambient(&raw.ambient)?;
        let mut objects = BTreeMap::new();
        for (name, o) in &raw.objects {
            objects.insert(name.clone(), self.object(&ambient, o, &format!("objects.{name}"))?);
        }
        let mut maps = BTreeMap::new();
        for (name, m) in &raw.maps {
            maps.insert(name.clone(), self.map(&objects, m, &format!("maps.{name}"))?);
        }
        let refs = Refs { objects: &objects, maps: &maps };
        let mut categories = BTreeMap::new();
        for (name, c) in &raw.categories {
            categories.insert(name.clone(), self.category(&refs, c, &format!("categories.{name}"))?);
        }
        let mut functors = BTreeMap::new();
        for (name, f) in &raw.functors {
            functors.insert(name.clone(), self.functor(&refs, &categories, f, &format!("functors.{name}"))?);
        }
        let mut transformations = BTreeMap::new();
        for (name, t) in &raw.transformations {
            let path = format!("transformations.{name}");
            let src = lookup(&functors, "functor", &t.src, &self.at(&path))?;
            let tgt = lookup(&functors, "functor", &t.tgt, &self.at(&path))?;
            let comp = self.map_ref(&refs, &t.component, src.dom().obj(), src.cod().arr(), &path)?;
            let nt = NaturalTransformation::new(src.clone(), tgt.clone(), comp).map_err(|e| self.invalid(&path, e))?;
            transformations.insert(name.clone(), nt);
        }
        let mut anafunctors = BTreeMap::new();
        for (name, a) in &raw.anafunctors {
            let path = format!("anafunctors.{name}");
            anafunctors.insert(name.clone(), self.anafunctor(&refs, &categories, &functors, a, &path)?);
        }
        let mut ana_transformations = BTreeMap::new();
        for (name, t) in &raw.ana_transformations {
            let path = format!("ana_transformations.{name}");
            ana_transformations.insert(name.clone(), self.ana_transformation(&anafunctors, t, &path)?);
        }
        let mut crossed_modules = BTreeMap::new();
        for (name, x) in &raw.crossed_modules {
            let path = format!("crossed_modules.{name}");
            let g = self.group(&x.g, &format!("{path}.g"))?;
            let h = self.group(&x.h, &format!("{path}.h"))?;
            let action = x.action.clone().unwrap_or_else(|| vec![(0..g.order()).collect(); h.order()]);
            let xm = CrossedModule::new((*g).clone(), (*h).clone(), x.t.clone(), action)
                .map_err(|e| self.invalid(&path, e))?;
            xm.validate().map_err(|v| self.invalid(&path, v))?;
            crossed_modules.insert(name.clone(), xm);
        }
        let covers = raw
            .covers
            .iter()
            .enumerate()
            .map(|(i, m)| self.map(&objects, m, &format!("covers[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            ambient,
            objects,
            maps,
            categories,
            functors,
            transformations,
            anafunctors,
            ana_transformations,
            crossed_modules,
            covers,
        })
    }

    fn ambient(&self, tag: &str) -> Result<Ambient> {
        match tag {
            "finset" => Ok(Ambient::FinSet),
            "fingrp" => Ok(Ambient::FinGrp),
            _ => match tag.strip_prefix("fingset:") {
                Some(g) => Ok(Ambient::FinGSet(self.named_group(g, "ambient")?)),
                None => Err(self.invalid("ambient", format!("unknown ambient `{tag}`"))),
            },
        }
    }

    fn inline_group(&self, g: &RawGroup, path: &str) -> Result<FiniteGroup> {
        if g.mul.len() != g.order {
            return Err(self.invalid(path, format!("order {} but {} rows in the table", g.order, g.mul.len())));
        }
        FiniteGroup::from_table(g.mul.clone()).map_err(|e| self.invalid(path, e))
    }

    fn named_group(&self, name: &str, path: &str) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        FiniteGroup::builtin(name)
            .map(Arc::new)
            .ok_or_else(|| LoadError::Dangling { at: self.at(path), kind: "group", name: name.into() })
    }

    fn group(&self, g: &GroupRef, path: &str) -> Result<Arc<FiniteGroup>> {
        match g {
            GroupRef::Name(name) => self.named_group(name, path),
            GroupRef::Inline(raw) => self.inline_group(raw, path).map(Arc::new),
        }
    }

    fn object(&self, ambient: &Ambient, o: &RawObject, path: &str) -> Result<Obj> {
        let wrong = |what: &str| self.invalid(path, format!("{what} is not allowed in {}", ambient.name()));
        match ambient {
            Ambient::FinSet => {
                if o.action.is_some() || o.group.is_some() || o.order.is_some() || o.mul.is_some() {
                    return Err(wrong("group structure"));
                }
                let size = o.size.ok_or_else(|| self.invalid(path, "missing `size`"))?;
                Ok(Obj::set(size))
            }
            Ambient::FinGrp => {
                if o.size.is_some() || o.action.is_some() {
                    return Err(wrong("`size` or `action`"));
                }
                let group = match (&o.group, o.order, &o.mul) {
                    (Some(g), None, None) => self.group(g, path)?,
                    (None, Some(order), Some(mul)) => {
                        Arc::new(self.inline_group(&RawGroup { order, mul: mul.clone() }, path)?)
                    }
                    _ => return Err(self.invalid(path, "give either `group` or both `order` and `mul`")),
                };
                Ok(Obj::group_arc(group))
            }
            Ambient::FinGSet(group) => {
                if o.group.is_some() || o.order.is_some() || o.mul.is_some() {
                    return Err(wrong("a group table"));
                }
                let size = o.size.ok_or_else(|| self.invalid(path, "missing `size`"))?;
                let action = o.action.clone().unwrap_or_else(|| vec![(0..size).collect(); group.order()]);
                if action.iter().any(|row| row.len() != size) {
                    return Err(self.invalid(path, format!("action rows must have {size} entries")));
                }
                Obj::gset(group.clone(), action).map_err(|e| self.invalid(path, e))
            }
        }
    }

    fn map(&self, objects: &BTreeMap<String, Obj>, m: &RawMap, path: &str) -> Result<Arr> {
        let dom = lookup(objects, "object", &m.dom, &self.at(path))?;
        let cod = lookup(objects, "object", &m.cod, &self.at(path))?;
        Arr::new(dom.clone(), cod.clone(), m.table.clone()).map_err(|e| self.invalid(path, e))
    }

    /// A map that must run `dom → cod`.
    fn map_ref(&self, refs: &Refs<'_>, m: &MapRef, dom: &Obj, cod: &Obj, path: &str) -> Result<Arr> {
        let arr = match m {
            MapRef::Name(name) => lookup(refs.maps, "map", name, &self.at(path))?.clone(),
            MapRef::Table(table) => Arr::new(dom.clone(), cod.clone(), table.clone()).map_err(|e| self.invalid(path, e))?,
            MapRef::Inline(raw) => self.map(refs.objects, raw, path)?,
        };
        if arr.dom() != dom || arr.cod() != cod {
            return Err(self.invalid(path, "map has the wrong domain or codomain"));
        }
        Ok(arr)
    }

    fn category(&self, refs: &Refs<'_>, c: &RawCategory, path: &str) -> Result<Cat> {
        let obj = lookup(refs.objects, "object", &c.obj, &self.at(path))?;
        let arr = lookup(refs.objects, "object", &c.arr, &self.at(path))?;
        let s = self.map_ref(refs, &c.s, arr, obj, &format!("{path}.s"))?;
        let t = self.map_ref(refs, &c.t, arr, obj, &format!("{path}.t"))?;
        let e = self.map_ref(refs, &c.e, obj, arr, &format!("{path}.e"))?;
        let composable = pullback(&s, &t).map_err(|e| self.invalid(path, e))?;
        let mpath = format!("{path}.m");
        let mut table: Vec<Option<usize>> = vec![None; composable.len()];
        for (i, &[g, f, r]) in c.m.pairs.iter().enumerate() {
            let z = composable
                .locate(g, f)
                .ok_or_else(|| self.invalid(format!("{mpath}.pairs[{i}]"), format!("({g}, {f}) is not composable")))?;
            if table[z].replace(r).is_some() {
                return Err(self.invalid(format!("{mpath}.pairs[{i}]"), format!("({g}, {f}) is listed twice")));
            }
        }
        if let Some(z) = table.iter().position(Option::is_none) {
            let (g, f) = composable.components(z);
            return Err(self.invalid(&mpath, format!("composable pair ({g}, {f}) is not listed")));
        }
        let table: Vec<usize> = table.into_iter().flatten().collect();
        InternalCategory::with_composition(obj.clone(), arr.clone(), s, t, e, |g, f| {
            table[composable.locate(g, f).expect("composable")]
        })
        .map(Arc::new)
        .map_err(|e| self.invalid(path, e))
    }

    fn functor(
        &self,
        refs: &Refs<'_>,
        categories: &BTreeMap<String, Cat>,
        f: &RawFunctor,
        path: &str,
    ) -> Result<InternalFunctor> {
        let dom = lookup(categories, "category", &f.dom, &self.at(path))?;
        let cod = lookup(categories, "category", &f.cod, &self.at(path))?;
        let f0 = self.map_ref(refs, &f.f0, dom.obj(), cod.obj(), &format!("{path}.f0"))?;
        let f1 = self.map_ref(refs, &f.f1, dom.arr(), cod.arr(), &format!("{path}.f1"))?;
        InternalFunctor::new(dom.clone(), cod.clone(), f0, f1).map_err(|e| self.invalid(path, e))
    }

    fn anafunctor(
        &self,
        refs: &Refs<'_>,
        categories: &BTreeMap<String, Cat>,
        functors: &BTreeMap<String, InternalFunctor>,
        a: &RawAnafunctor,
        path: &str,
    ) -> Result<Anafunctor> {
        let src = lookup(categories, "category", &a.src, &self.at(path))?;
        let tgt = lookup(categories, "category", &a.tgt, &self.at(path))?;
        if let Some(name) = &a.functor {
            if a.cover.is_some() || a.f0.is_some() || a.f1.is_some() {
                return Err(self.invalid(path, "`functor` excludes `cover`, `f0` and `f1`"));
            }
            let f = lookup(functors, "functor", name, &self.at(path))?;
            if f.dom() != src || f.cod() != tgt {
                return Err(self.invalid(path, format!("functor `{name}` does not run between `{}` and `{}`", a.src, a.tgt)));
            }
            return Ok(alpha(f));
        }
        let (Some(cover), Some(f0), Some(f1)) = (&a.cover, &a.f0, &a.f1) else {
            return Err(self.invalid(path, "give either `functor` or all of `cover`, `f0` and `f1`"));
        };
        let cpath = format!("{path}.cover");
        let cover = match cover {
            MapRef::Table(t) if matches!(src.obj().structure(), Structure::Set) => {
                self.map_ref(refs, cover, &Obj::set(t.len()), src.obj(), &cpath)?
            }
            MapRef::Table(_) => return Err(self.invalid(&cpath, "outside FinSet the cover needs a named domain")),
            MapRef::Name(name) => lookup(refs.maps, "map", name, &self.at(&cpath))?.clone(),
            MapRef::Inline(raw) => self.map(refs.objects, raw, &cpath)?,
        };
        if cover.cod() != src.obj() {
            return Err(self.invalid(&cpath, "cover does not land in the objects of the source"));
        }
        let bc = BaseChange::new(src, &cover).map_err(|e| self.invalid(&cpath, e))?;
        let x = bc.cat();
        let f0 = Arr::new(x.obj().clone(), tgt.obj().clone(), f0.clone()).map_err(|e| self.invalid(format!("{path}.f0"), e))?;
        let mut table: Vec<Option<usize>> = vec![None; x.arr().size()];
        for (i, &[p1, p2, h, y]) in f1.iter().enumerate() {
            let at = format!("{path}.f1[{i}]");
            let z = bc
                .locate(p1, p2, h)
                .ok_or_else(|| self.invalid(&at, format!("({p1}, {p2}, {h}) is not an arrow over the cover")))?;
            if table[z].replace(y).is_some() {
                return Err(self.invalid(&at, format!("({p1}, {p2}, {h}) is listed twice")));
            }
        }
        if let Some(z) = table.iter().position(Option::is_none) {
            let (p1, p2, h) = bc.components(z);
            return Err(self.invalid(format!("{path}.f1"), format!("arrow ({p1}, {p2}, {h}) has no image")));
        }
        let f1 = Arr::new(x.arr().clone(), tgt.arr().clone(), table.into_iter().flatten().collect())
            .map_err(|e| self.invalid(format!("{path}.f1"), e))?;
        let functor = InternalFunctor::new(x.clone(), tgt.clone(), f0, f1).map_err(|e| self.invalid(path, e))?;
        Anafunctor::assemble(src.clone(), tgt.clone(), cover, functor).map_err(|e| self.invalid(path, e))
    }

    fn ana_transformation(
        &self,
        anafunctors: &BTreeMap<String, Anafunctor>,
        t: &RawAnaTransformation,
        path: &str,
    ) -> Result<AnaTransformation> {
        let src = lookup(anafunctors, "anafunctor", &t.src, &self.at(path))?;
        let tgt = lookup(anafunctors, "anafunctor", &t.tgt, &self.at(path))?;
        if src.src() != tgt.src() || src.tgt() != tgt.tgt() {
            return Err(self.invalid(path, format!("`{}` and `{}` are not parallel", t.src, t.tgt)));
        }
        let domain = pullback(src.cover(), tgt.cover()).map_err(|e| self.invalid(path, e))?;
        let mut table: Vec<Option<usize>> = vec![None; domain.len()];
        for (i, &[p, q, y]) in t.component.iter().enumerate() {
            let at = format!("{path}.component[{i}]");
            let z = domain.locate(p, q).ok_or_else(|| self.invalid(&at, format!("({p}, {q}) lie over different objects")))?;
            if table[z].replace(y).is_some() {
                return Err(self.invalid(&at, format!("({p}, {q}) is listed twice")));
            }
        }
        if let Some(z) = table.iter().position(Option::is_none) {
            let (p, q) = domain.components(z);
            return Err(self.invalid(format!("{path}.component"), format!("no component at ({p}, {q})")));
        }
        let comp = Arr::new(domain.apex.clone(), src.tgt().arr().clone(), table.into_iter().flatten().collect())
            .map_err(|e| self.invalid(format!("{path}.component"), e))?;
        AnaTransformation::new(src.clone(), tgt.clone(), comp).map_err(|e| self.invalid(path, e))
    }
}

struct Refs<'a> {
    objects: &'a BTreeMap<String, Obj>,
    maps: &'a BTreeMap<String, Arr>,
}
