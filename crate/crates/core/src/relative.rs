//! Relative projectivity with respect to a fixed module `w`.
//!
//! Everything is driven by the evaluation map `ε_X: w⊗w*⊗X → X` (the
//! canonical w-projective cover) and the coevaluation `X → w⊗w*⊗X`. A map
//! is zero in the relatively stable category iff it factors through `ε` of
//! its target, which turns every "factors through some w-projective"
//! question into a single linear system.

use crate::error::{Error, Result};
use crate::ff::FpMatrix;
use crate::homs::{factors_through, has_section, hom_basis};
use crate::reps::{dual, tensor, tensor_maps, Module, Morphism, ShortExactSequence};

#[derive(Clone, Debug)]
pub struct RelativeContext {
    w: Module,
    w_dual: Module,
    /// `w ⊗ w*`
    ww: Module,
}

impl RelativeContext {
    pub fn new(w: Module) -> Self {
        let w_dual = dual(&w);
        let ww = tensor(&w, &w_dual).expect("w and w* share a group");
        RelativeContext { w, w_dual, ww }
    }

    pub fn w(&self) -> &Module {
        &self.w
    }

    pub fn w_dual(&self) -> &Module {
        &self.w_dual
    }

    /// `w ⊗ w* ⊗ X`, basis `(a, φ, x)` at `(a·dim w + φ)·dim X + x`.
    pub fn cover_object(&self, x: &Module) -> Result<Module> {
        tensor(&self.ww, x)
    }

    /// Evaluation `a ⊗ φ ⊗ x ↦ φ(a)·x`.
    pub fn counit(&self, x: &Module) -> Result<Morphism> {
        let source = self.cover_object(x)?;
        let (dw, dx) = (self.w.dim(), x.dim());
        let mut m = FpMatrix::zeros(x.prime(), dx, dw * dw * dx);
        for a in 0..dw {
            for l in 0..dx {
                m.set(l, (a * dw + a) * dx + l, 1);
            }
        }
        let f = Morphism::from_parts(source, x.clone(), m);
        debug_assert!(f.intertwines_everywhere());
        Ok(f)
    }

    /// Coevaluation `x ↦ Σ_i e_i ⊗ e_i* ⊗ x`.
    pub fn unit(&self, x: &Module) -> Result<Morphism> {
        let target = self.cover_object(x)?;
        let (dw, dx) = (self.w.dim(), x.dim());
        let mut m = FpMatrix::zeros(x.prime(), dw * dw * dx, dx);
        for i in 0..dw {
            for l in 0..dx {
                m.set((i * dw + i) * dx + l, l, 1);
            }
        }
        let f = Morphism::from_parts(x.clone(), target, m);
        debug_assert!(f.intertwines_everywhere());
        Ok(f)
    }

    fn require_nonzero_w(&self) -> Result<()> {
        if self.w.dim() == 0 {
            return Err(Error::Invalid("w = 0: the counit is not an epimorphism".into()));
        }
        Ok(())
    }

    /// `Ω_w(X) = ker ε_X` with its inclusion into `w⊗w*⊗X`.
    pub fn omega(&self, x: &Module) -> Result<(Module, Morphism)> {
        self.require_nonzero_w()?;
        self.counit(x)?.kernel()
    }

    /// `Ω_w⁻¹(X) = coker(X → w⊗w*⊗X)` with the projection.
    pub fn omega_inv(&self, x: &Module) -> Result<(Module, Morphism)> {
        self.require_nonzero_w()?;
        self.unit(x)?.cokernel()
    }

    /// `0 → Ω_w(X) → w⊗w*⊗X → X → 0`.
    pub fn cover_sequence(&self, x: &Module) -> Result<ShortExactSequence> {
        let (_, incl) = self.omega(x)?;
        ShortExactSequence::new(incl, self.counit(x)?)
    }

    /// `0 → X → w⊗w*⊗X → Ω_w⁻¹(X) → 0`.
    pub fn hull_sequence(&self, x: &Module) -> Result<ShortExactSequence> {
        let (_, proj) = self.omega_inv(x)?;
        ShortExactSequence::new(self.unit(x)?, proj)
    }

    /// A section of the counit, present iff `X` is w-projective.
    pub fn projectivity_witness(&self, x: &Module) -> Result<Option<Morphism>> {
        has_section(&self.counit(x)?)
    }

    pub fn is_relatively_projective(&self, x: &Module) -> Result<bool> {
        Ok(self.projectivity_witness(x)?.is_some())
    }

    /// Section of `id_w ⊗ surj`, present iff the sequence is w-split. The
    /// sequence is exact, so this is equivalent to `id_w ⊗ inj` having a
    /// retraction.
    pub fn w_split_witness(&self, ses: &ShortExactSequence) -> Result<Option<Morphism>> {
        let surj_w = tensor_maps(&self.w.identity_map(), ses.surj())?;
        has_section(&surj_w)
    }

    pub fn is_w_split(&self, ses: &ShortExactSequence) -> Result<bool> {
        Ok(self.w_split_witness(ses)?.is_some())
    }

    /// A lift of `f` through the cover of its target, present iff `f` is
    /// zero in the relatively stable category.
    pub fn stable_zero_witness(&self, f: &Morphism) -> Result<Option<Morphism>> {
        factors_through(f, &self.counit(f.target())?)
    }

    pub fn is_stably_zero(&self, f: &Morphism) -> Result<bool> {
        Ok(self.stable_zero_witness(f)?.is_some())
    }

    /// `f ~ g` in the quotient category.
    pub fn stably_equal(&self, f: &Morphism, g: &Morphism) -> Result<bool> {
        self.is_stably_zero(&f.sub(g)?)
    }

    /// Independent matrices spanning the maps `A → B` that factor through
    /// the cover of `B`.
    pub fn projective_maps(&self, a: &Module, b: &Module) -> Result<Vec<FpMatrix>> {
        a.check_compatible(b)?;
        let eps = self.counit(b)?;
        let lifts = hom_basis(a, eps.source())?;
        let p = a.prime();
        let columns = lifts
            .matrices()
            .iter()
            .map(|g| eps.matrix().mul(g).map(|m| m.flatten()))
            .collect::<Result<Vec<_>>>()?;
        let span = FpMatrix::from_columns(p, a.dim() * b.dim(), &columns).column_space();
        (0..span.cols())
            .map(|c| FpMatrix::from_vec(p, b.dim(), a.dim(), span.column(c)))
            .collect()
    }

    /// Representatives of a basis of the stable hom space `(A, B)_w`.
    pub fn stable_hom_basis(&self, a: &Module, b: &Module) -> Result<Vec<Morphism>> {
        let hom = hom_basis(a, b)?;
        let proj = self.projective_maps(a, b)?;
        let p = a.prime();
        let len = a.dim() * b.dim();
        let mut columns: Vec<Vec<u32>> = proj.iter().map(FpMatrix::flatten).collect();
        columns.extend(hom.matrices().iter().map(FpMatrix::flatten));
        let pivots = FpMatrix::from_columns(p, len, &columns).rref().pivots;
        let hom_maps = hom.morphisms();
        Ok(pivots
            .into_iter()
            .filter(|&c| c >= proj.len())
            .map(|c| hom_maps[c - proj.len()].clone())
            .collect())
    }

    /// `dim Hom(A,B) − dim {ε_B ∘ g}`.
    pub fn stable_hom_dim(&self, a: &Module, b: &Module) -> Result<usize> {
        let hom = hom_basis(a, b)?.dim();
        let proj = self.projective_maps(a, b)?.len();
        debug_assert!(proj <= hom);
        Ok(hom - proj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::homs::{is_summand_bruteforce, DEFAULT_SEARCH_BOUND};
    use crate::reps::{regular_module, trivial_module};

    fn m(name: &str) -> Module {
        catalog::module(name).unwrap()
    }

    fn ctx(name: &str) -> RelativeContext {
        RelativeContext::new(m(name))
    }

    #[test]
    fn counit_examples() {
        let k = m("klein4.k");
        let vp = m("klein4.v_prime");
        let eps = RelativeContext::new(k.clone()).counit(&vp).unwrap();
        assert!(eps.is_isomorphism());
        assert!(eps.matrix().is_identity());

        let c = ctx("klein4.v");
        let eps = c.counit(&k).unwrap();
        assert_eq!(eps.source().dim(), 4);
        assert_eq!(eps.rank(), 1);
        // Entry for (a_i, φ_j, x_l) into x_l is δ_ij.
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(eps.matrix().get(0, i * 2 + j), u32::from(i == j));
            }
        }
    }

    #[test]
    fn unit_examples() {
        let k = m("klein4.k");
        let vp = m("klein4.v_prime");
        assert!(RelativeContext::new(k.clone()).unit(&vp).unwrap().is_isomorphism());

        let c = ctx("klein4.v");
        let eta = c.unit(&k).unwrap();
        assert!(eta.is_injective());
        assert_eq!(eta.rank(), 1);
        // ε∘η = (dim w)·id = 0 over GF(2) for the 2-dimensional v.
        let comp = c.counit(&k).unwrap().after(&eta).unwrap();
        assert!(comp.is_zero());
        let c3 = RelativeContext::new(m("c3.j2"));
        let k3 = m("c3.k");
        let comp3 = c3.counit(&k3).unwrap().after(&c3.unit(&k3).unwrap()).unwrap();
        assert_eq!(comp3.matrix().get(0, 0), 2);
    }

    #[test]
    fn omega_examples() {
        let vp = m("klein4.v_prime");
        let k = m("klein4.k");
        let trivial = RelativeContext::new(k.clone());
        assert_eq!(trivial.omega(&vp).unwrap().0.dim(), 0);
        assert_eq!(trivial.omega_inv(&vp).unwrap().0.dim(), 0);

        let c = ctx("klein4.v");
        let (om, incl) = c.omega(&k).unwrap();
        om.validate().unwrap();
        assert_eq!(om.dim(), 3);
        assert!(c.counit(&k).unwrap().after(&incl).unwrap().is_zero());

        let (omi, proj) = c.omega_inv(&k).unwrap();
        omi.validate().unwrap();
        assert_eq!(omi.dim(), 3);
        assert!(proj.after(&c.unit(&k).unwrap()).unwrap().is_zero());

        let zero = Module::zero(std::sync::Arc::clone(k.group()), k.prime());
        assert_eq!(c.omega(&zero).unwrap().0.dim(), 0);

        let wzero = RelativeContext::new(zero);
        assert!(wzero.omega(&k).is_err());
        assert!(wzero.omega_inv(&k).is_err());
    }

    #[test]
    fn projectivity_examples() {
        let k = m("klein4.k");
        let v = m("klein4.v");
        let vp = m("klein4.v_prime");
        let trivial = RelativeContext::new(k.clone());
        for x in [&k, &v, &vp] {
            assert!(trivial.is_relatively_projective(x).unwrap());
        }
        let c = ctx("klein4.v");
        assert!(c.is_relatively_projective(&v).unwrap());
        assert!(!c.is_relatively_projective(&k).unwrap());
        let vv = tensor(&v, &dual(&v)).unwrap();
        assert!(!is_summand_bruteforce(&k, &vv, DEFAULT_SEARCH_BOUND).unwrap());
    }

    #[test]
    fn w_split_examples() {
        let nonsplit = catalog::ses("c2.nonsplit_ses").unwrap();
        let split = catalog::ses("c2.split_ses").unwrap();
        let c2 = std::sync::Arc::clone(nonsplit.left().group());
        let p = nonsplit.prime();
        let regular = RelativeContext::new(regular_module(std::sync::Arc::clone(&c2), p));
        let trivial = RelativeContext::new(trivial_module(c2, p));
        assert!(regular.is_w_split(&nonsplit).unwrap());
        assert!(!trivial.is_w_split(&nonsplit).unwrap());
        assert!(trivial.is_w_split(&split).unwrap());
        assert!(regular.is_w_split(&split).unwrap());
    }

    #[test]
    fn stably_zero_examples() {
        let c = ctx("klein4.w_ind");
        let k = m("klein4.k");
        let vp = m("klein4.v_prime");
        assert!(c.is_stably_zero(&Morphism::zero(k.clone(), vp.clone()).unwrap()).unwrap());
        let chain = catalog::chain("klein4.chain").unwrap();
        let socle = chain[1].after(&chain[0]).unwrap();
        assert!(c.is_stably_zero(&socle).unwrap());
        assert!(!c.is_stably_zero(&k.identity_map()).unwrap());
    }

    #[test]
    fn stable_hom_examples() {
        let k = m("klein4.k");
        let v = m("klein4.v");
        let vp = m("klein4.v_prime");
        let trivial = RelativeContext::new(k.clone());
        for (a, b) in [(&k, &k), (&v, &vp), (&vp, &vp)] {
            assert_eq!(trivial.stable_hom_dim(a, b).unwrap(), 0);
        }
        let c = ctx("klein4.v");
        assert_eq!(c.stable_hom_dim(&k, &k).unwrap(), 1);
        assert_eq!(c.stable_hom_dim(&k, &vp).unwrap(), 0);
        assert_eq!(c.stable_hom_basis(&k, &k).unwrap().len(), 1);

        let c2 = std::sync::Arc::new(crate::groups::cyclic(2).unwrap());
        let p = k.prime();
        let reg = RelativeContext::new(regular_module(std::sync::Arc::clone(&c2), p));
        let k2 = trivial_module(c2, p);
        assert_eq!(reg.stable_hom_dim(&k2, &k2).unwrap(), 1);
    }

    #[test]
    fn cover_sequence_is_w_split() {
        for w in ["klein4.k", "klein4.v", "klein4.v_prime", "klein4.w_ind"] {
            let c = ctx(w);
            for x in ["klein4.k", "klein4.v", "klein4.v_prime"] {
                let x = m(x);
                let ses = c.cover_sequence(&x).unwrap();
                assert_eq!(ses.left().dim(), c.w().dim().pow(2) * x.dim() - x.dim());
                assert!(c.is_w_split(&ses).unwrap());
                assert!(c.is_w_split(&c.hull_sequence(&x).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn split_side_matches_retraction_side() {
        let seqs = [
            catalog::ses("c2.nonsplit_ses").unwrap(),
            catalog::ses("c2.split_ses").unwrap(),
        ];
        for w in ["c2.k", "c2.regular"] {
            let c = ctx(w);
            for s in &seqs {
                let inj_w = tensor_maps(&c.w().identity_map(), s.inj()).unwrap();
                let retracts = crate::homs::has_retraction(&inj_w).unwrap().is_some();
                assert_eq!(c.is_w_split(s).unwrap(), retracts);
            }
        }
        let c = ctx("klein4.w_ind");
        let s = c.cover_sequence(&m("klein4.v")).unwrap();
        let inj_w = tensor_maps(&c.w().identity_map(), s.inj()).unwrap();
        assert!(crate::homs::has_retraction(&inj_w).unwrap().is_some());
    }

    #[test]
    fn stably_zero_is_an_ideal() {
        let c = ctx("klein4.w_ind");
        let chain = catalog::chain("klein4.chain").unwrap();
        let socle = chain[1].after(&chain[0]).unwrap();
        let vp = m("klein4.v_prime");
        for g in hom_basis(&vp, &vp).unwrap().morphisms() {
            assert!(c.is_stably_zero(&g.after(&socle).unwrap()).unwrap());
        }
        let k = m("klein4.k");
        for h in hom_basis(&k, &k).unwrap().morphisms() {
            assert!(c.is_stably_zero(&socle.after(&h).unwrap()).unwrap());
        }
    }

    #[test]
    fn w_tensor_objects_are_projective() {
        for w in ["klein4.v", "klein4.v_prime"] {
            let c = ctx(w);
            for y in ["klein4.k", "klein4.v"] {
                let wy = tensor(c.w(), &m(y)).unwrap();
                assert!(c.is_relatively_projective(&wy).unwrap());
                assert_eq!(c.stable_hom_dim(&wy, &wy).unwrap(), 0);
                assert!(c.is_stably_zero(&wy.identity_map()).unwrap());
            }
        }
    }
}
