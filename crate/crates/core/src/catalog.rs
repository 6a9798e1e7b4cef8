//! Named built-in instances: the Klein four group and its modules `v`, `v′`,
//! `Ind_H^G(k)`, the exact sequences over `C2` and `C3`, and a chain.
//!
//! Names are stable strings and part of the CLI contract.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime};
use crate::groups::{cyclic, direct_product, subgroup_closure, FiniteGroup, Subgroup};
use crate::reps::{direct_sum, induce, regular_module, trivial_module, Module, Morphism, ShortExactSequence};

#[derive(Clone, Debug)]
pub enum NamedInstance {
    Group(Arc<FiniteGroup>),
    Subgroup(Subgroup),
    Module(Module),
    Ses(ShortExactSequence),
    Chain(Vec<Morphism>),
}

impl NamedInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            NamedInstance::Group(_) => "group",
            NamedInstance::Subgroup(_) => "subgroup",
            NamedInstance::Module(_) => "module",
            NamedInstance::Ses(_) => "ses",
            NamedInstance::Chain(_) => "chain",
        }
    }

    /// Re-runs the payload's own validation.
    pub fn validate(&self) -> Result<()> {
        match self {
            NamedInstance::Group(g) => {
                FiniteGroup::from_table(g.table_rows(), Some(g.generators().to_vec()), Some(g.names().to_vec()))
                    .map(|_| ())
            }
            NamedInstance::Subgroup(h) => Subgroup::new(Arc::clone(h.parent()), h.elements().iter().copied()).map(|_| ()),
            NamedInstance::Module(m) => m.validate(),
            NamedInstance::Ses(s) => {
                for m in [s.left(), s.middle(), s.right()] {
                    m.validate()?;
                }
                Morphism::new(s.left().clone(), s.middle().clone(), s.inj().matrix().clone())?;
                Morphism::new(s.middle().clone(), s.right().clone(), s.surj().matrix().clone())?;
                ShortExactSequence::new(s.inj().clone(), s.surj().clone()).map(|_| ())
            }
            NamedInstance::Chain(maps) => {
                for f in maps {
                    f.source().validate()?;
                    f.target().validate()?;
                    Morphism::new(f.source().clone(), f.target().clone(), f.matrix().clone())?;
                }
                crate::triangles::Chain::new(maps.clone()).map(|_| ())
            }
        }
    }
}

pub const NAMES: &[&str] = &[
    "c2",
    "c2.k",
    "c2.regular",
    "c2.nonsplit_ses",
    "c2.split_ses",
    "c3",
    "c3.k",
    "c3.j2",
    "c3.regular",
    "c3.jordan_ses",
    "klein4",
    "klein4.H",
    "klein4.k",
    "klein4.v",
    "klein4.v_prime",
    "klein4.w_ind",
    "klein4.regular",
    "klein4.chain",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

fn gf(p: u32) -> Prime {
    Prime::new(p).expect("catalog primes are prime")
}

fn mat(p: u32, rows: &[&[i64]]) -> FpMatrix {
    FpMatrix::from_rows(gf(p), rows).expect("catalog matrices are rectangular")
}

/// `C2`, elements `e, x`.
pub fn c2() -> Arc<FiniteGroup> {
    static G: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    Arc::clone(G.get_or_init(|| Arc::new(cyclic(2).expect("order 2"))))
}

/// `C3`, elements `e, x, x^2`.
pub fn c3() -> Arc<FiniteGroup> {
    static G: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    Arc::clone(G.get_or_init(|| Arc::new(cyclic(3).expect("order 3"))))
}

/// `<g,h : g² = h² = e, gh = hg>` as `C2 × C2`: `e = 0, h = 1, g = 2, gh = 3`,
/// generators `[g, h]`.
pub fn klein4() -> Arc<FiniteGroup> {
    static G: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    Arc::clone(G.get_or_init(|| {
        let c = cyclic(2).expect("order 2");
        let prod = direct_product(&c, &c).expect("product");
        let names = ["e", "h", "g", "gh"].map(String::from).to_vec();
        Arc::new(prod.relabelled(vec![2, 1], names).expect("relabel"))
    }))
}

fn klein_h() -> Subgroup {
    subgroup_closure(&klein4(), &[1]).expect("<h>")
}

fn klein_module(dim: usize, g: FpMatrix, h: FpMatrix) -> Module {
    Module::from_generators(klein4(), gf(2), dim, vec![g, h]).expect("catalog module is valid")
}

fn klein_v() -> Module {
    klein_module(2, mat(2, &[&[1, 0], &[1, 1]]), FpMatrix::identity(gf(2), 2))
}

/// Basis `(a, c, b)`: `g` sends `a ↦ a + b`, `h` sends `c ↦ c + b`, `b` is the socle.
fn klein_v_prime() -> Module {
    klein_module(
        3,
        mat(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]),
        mat(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 1, 1]]),
    )
}

fn c3_j2() -> Module {
    Module::from_generators(c3(), gf(3), 2, vec![mat(3, &[&[1, 0], &[1, 1]])]).expect("Jordan block")
}

fn nonsplit_c2() -> ShortExactSequence {
    let k = trivial_module(c2(), gf(2));
    let kc2 = regular_module(c2(), gf(2));
    let inj = Morphism::new(k.clone(), kc2.clone(), mat(2, &[&[1], &[1]])).expect("norm element");
    let surj = Morphism::new(kc2, k, mat(2, &[&[1, 1]])).expect("augmentation");
    ShortExactSequence::new(inj, surj).expect("exact")
}

fn split_c2() -> ShortExactSequence {
    let k = trivial_module(c2(), gf(2));
    let kk = direct_sum(&k, &k).expect("sum");
    let inj = Morphism::new(k.clone(), kk.clone(), mat(2, &[&[1], &[0]])).expect("inclusion");
    let surj = Morphism::new(kk, k, mat(2, &[&[0, 1]])).expect("projection");
    ShortExactSequence::new(inj, surj).expect("exact")
}

fn jordan_c3() -> ShortExactSequence {
    let k = trivial_module(c3(), gf(3));
    let j2 = c3_j2();
    let inj = Morphism::new(k.clone(), j2.clone(), mat(3, &[&[0], &[1]])).expect("socle");
    let surj = Morphism::new(j2, k, mat(3, &[&[1, 0]])).expect("top");
    ShortExactSequence::new(inj, surj).expect("exact")
}

/// `k → v → v′`: the socle of `k` into the bottom of `v`, then `v` onto the
/// `g`-string `a ↦ b` of `v′`.
fn klein_chain() -> Vec<Morphism> {
    let k = trivial_module(klein4(), gf(2));
    let v = klein_v();
    let vp = klein_v_prime();
    let first = Morphism::new(k, v.clone(), mat(2, &[&[0], &[1]])).expect("socle of v");
    let second = Morphism::new(v, vp, mat(2, &[&[1, 0], &[0, 0], &[0, 1]])).expect("v into v′");
    vec![first, second]
}

pub fn get_example(name: &str) -> Result<NamedInstance> {
    use NamedInstance as N;
    let inst = match name {
        "c2" => N::Group(c2()),
        "c2.k" => N::Module(trivial_module(c2(), gf(2))),
        "c2.regular" => N::Module(regular_module(c2(), gf(2))),
        "c2.nonsplit_ses" => N::Ses(nonsplit_c2()),
        "c2.split_ses" => N::Ses(split_c2()),
        "c3" => N::Group(c3()),
        "c3.k" => N::Module(trivial_module(c3(), gf(3))),
        "c3.j2" => N::Module(c3_j2()),
        "c3.regular" => N::Module(regular_module(c3(), gf(3))),
        "c3.jordan_ses" => N::Ses(jordan_c3()),
        "klein4" => N::Group(klein4()),
        "klein4.H" => N::Subgroup(klein_h()),
        "klein4.k" => N::Module(trivial_module(klein4(), gf(2))),
        "klein4.v" => N::Module(klein_v()),
        "klein4.v_prime" => N::Module(klein_v_prime()),
        "klein4.w_ind" => {
            let h = klein_h();
            let k_h = trivial_module(Arc::clone(h.as_group()), gf(2));
            N::Module(induce(&klein4(), &h, &k_h)?)
        }
        "klein4.regular" => N::Module(regular_module(klein4(), gf(2))),
        "klein4.chain" => N::Chain(klein_chain()),
        _ => {
            return Err(Error::UnknownExample {
                name: name.to_string(),
                known: NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(inst)
}

fn wrong_kind(name: &str, want: &str, got: &NamedInstance) -> Error {
    Error::Invalid(format!("{name:?} is a {}, not a {want}", got.kind()))
}

pub fn module(name: &str) -> Result<Module> {
    match get_example(name)? {
        NamedInstance::Module(m) => Ok(m),
        other => Err(wrong_kind(name, "module", &other)),
    }
}

pub fn group(name: &str) -> Result<Arc<FiniteGroup>> {
    match get_example(name)? {
        NamedInstance::Group(g) => Ok(g),
        other => Err(wrong_kind(name, "group", &other)),
    }
}

pub fn subgroup(name: &str) -> Result<Subgroup> {
    match get_example(name)? {
        NamedInstance::Subgroup(h) => Ok(h),
        other => Err(wrong_kind(name, "subgroup", &other)),
    }
}

pub fn ses(name: &str) -> Result<ShortExactSequence> {
    match get_example(name)? {
        NamedInstance::Ses(s) => Ok(s),
        other => Err(wrong_kind(name, "short exact sequence", &other)),
    }
}

pub fn chain(name: &str) -> Result<Vec<Morphism>> {
    match get_example(name)? {
        NamedInstance::Chain(c) => Ok(c),
        other => Err(wrong_kind(name, "chain", &other)),
    }
}
