#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relstab_core::groups::{cyclic, FiniteGroup};
use relstab_core::homs::hom_basis;
use relstab_core::reps::{direct_sum, dual, regular_module, tensor, trivial_module};
use relstab_core::{catalog, FpMatrix, Module, Morphism, Prime};

pub fn gf(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

pub fn m(name: &str) -> Module {
    catalog::module(name).unwrap()
}

/// `C_p` acting on GF(p)^n by a single Jordan block.
pub fn jordan(p: u32, n: usize) -> Module {
    let g = Arc::new(cyclic(p as usize).unwrap());
    let mut j = FpMatrix::identity(gf(p), n);
    for i in 1..n {
        j.set(i, i - 1, 1);
    }
    Module::from_generators(g, gf(p), n, vec![j]).unwrap()
}

pub fn klein_pool() -> Vec<Module> {
    let (k, v, vp) = (m("klein4.k"), m("klein4.v"), m("klein4.v_prime"));
    vec![
        k.clone(),
        v.clone(),
        vp.clone(),
        dual(&vp),
        m("klein4.w_ind"),
        m("klein4.regular"),
        direct_sum(&k, &v).unwrap(),
        direct_sum(&k, &k).unwrap(),
    ]
}

pub fn c3_pool() -> Vec<Module> {
    vec![m("c3.k"), m("c3.j2"), m("c3.regular"), direct_sum(&m("c3.k"), &m("c3.j2")).unwrap()]
}

pub fn c5_pool() -> Vec<Module> {
    (1..=5).map(|n| jordan(5, n)).collect()
}

/// Small modules over several groups and primes.
pub fn mixed_pool() -> Vec<Module> {
    let mut out = klein_pool();
    out.extend(c3_pool());
    out.extend(c5_pool());
    out.push(m("c2.k"));
    out.push(m("c2.regular"));
    let c2 = catalog::group("c2").unwrap();
    out.push(tensor(&regular_module(c2.clone(), gf(2)), &trivial_module(c2, gf(2))).unwrap());
    out
}

pub fn pick<T: Clone>(pool: &[T], idx: usize) -> T {
    pool[idx % pool.len()].clone()
}

/// A pseudo-random element of `Hom(a, b)` determined by `seed`.
pub fn hom_from_seed(a: &Module, b: &Module, seed: u64) -> Morphism {
    let hb = hom_basis(a, b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<u32> = (0..hb.dim()).map(|_| rng.gen_range(0..a.p())).collect();
    hb.combination(&coeffs)
}

pub fn same_group(a: &Module, b: &Module) -> bool {
    a.group() == b.group() && a.p() == b.p()
}

pub fn group_of(m: &Module) -> Arc<FiniteGroup> {
    m.group().clone()
}
