//! Finite-dimensional kG-modules as matrix representations, morphisms between
//! them, and the functors the relative theory is built from.
//!
//! Conventions: matrices act on coordinate columns; the tensor basis
//! `e_i ⊗ f_j` sits at index `i·dim N + j`; induced modules are ordered
//! transversal-major.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime};
use crate::groups::{coset_transversal, FiniteGroup, Subgroup};

/// A representation: one invertible `dim × dim` matrix per group element.
#[derive(Clone)]
pub struct Module {
    group: Arc<FiniteGroup>,
    p: Prime,
    dim: usize,
    action: Arc<[FpMatrix]>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim == other.dim
            && (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && self.action == other.action
    }
}

impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module")
            .field("p", &self.p.get())
            .field("dim", &self.dim)
            .field("group_order", &self.group.order())
            .finish()
    }
}

impl Module {
    /// Builds a module from the action of every group element and checks
    /// the homomorphism property on all pairs.
    pub fn new(group: Arc<FiniteGroup>, p: Prime, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        let m = Self::from_parts(group, p, dim, action);
        m.validate()?;
        Ok(m)
    }

    /// Builds a module from the images of the group's generators (in
    /// generator order). Other elements are evaluated along a Cayley-graph
    /// spanning tree, then the full homomorphism property is checked.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        p: Prime,
        dim: usize,
        images: Vec<FpMatrix>,
    ) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::InvalidModule(format!(
                "{} generator images for {} generators",
                images.len(),
                group.generators().len()
            )));
        }
        for (i, m) in images.iter().enumerate() {
            check_square(m, p, dim, &format!("generator {}", group.name(group.generators()[i])))?;
        }
        let mut action = vec![FpMatrix::identity(p, dim); group.order()];
        for (elem, gi, prev) in group.cayley_tree() {
            action[elem] = images[gi].mul(&action[prev])?;
        }
        let m = Self::from_parts(group, p, dim, action);
        m.validate()?;
        for (gi, &g) in m.group.generators().iter().enumerate() {
            if m.action[g] != images[gi] {
                return Err(Error::InvalidModule(format!(
                    "generator {} is assigned two different matrices",
                    m.group.name(g)
                )));
            }
        }
        Ok(m)
    }

    pub(crate) fn from_parts(group: Arc<FiniteGroup>, p: Prime, dim: usize, action: Vec<FpMatrix>) -> Self {
        Module { group, p, dim, action: action.into() }
    }

    /// Re-checks every module invariant.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.action.len() != g.order() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for a group of order {}",
                self.action.len(),
                g.order()
            )));
        }
        for (a, m) in self.action.iter().enumerate() {
            check_square(m, self.p, self.dim, g.name(a))?;
        }
        if !self.action[g.identity()].is_identity() {
            return Err(Error::InvalidModule("identity does not act as I".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.action[a].mul(&self.action[b])? != self.action[g.mul(a, b)] {
                    return Err(Error::InvalidModule(format!(
                        "ρ({})ρ({}) ≠ ρ({}·{})",
                        g.name(a),
                        g.name(b),
                        g.name(a),
                        g.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn p(&self) -> u32 {
        self.p.get()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &FpMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.action
    }

    /// Action matrices of the group's generators, in generator order.
    pub fn generator_actions(&self) -> impl Iterator<Item = &FpMatrix> {
        self.group.generators().iter().map(|&g| &self.action[g])
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Errors unless both modules live over the same group in the same characteristic.
    pub fn check_compatible(&self, other: &Module) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Characteristic(self.p(), other.p()));
        }
        if !Arc::ptr_eq(&self.group, &other.group) && self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn zero(group: Arc<FiniteGroup>, p: Prime) -> Self {
        let n = group.order();
        Self::from_parts(group, p, 0, vec![FpMatrix::zeros(p, 0, 0); n])
    }

    pub fn identity_map(&self) -> Morphism {
        Morphism::from_parts(self.clone(), self.clone(), FpMatrix::identity(self.p, self.dim))
    }

    /// Submodule spanned by the (independent, invariant) columns of `basis`,
    /// with its inclusion.
    pub fn submodule(&self, basis: &FpMatrix) -> Result<(Module, Morphism)> {
        if basis.rows() != self.dim || basis.rank() != basis.cols() {
            return Err(Error::Invalid("submodule basis must have independent columns".into()));
        }
        let left_inv = basis
            .transpose()
            .solve_matrix(&FpMatrix::identity(self.p, basis.cols()))?
            .map(|x| x.transpose())
            .expect("full column rank has a left inverse");
        let mut action = Vec::with_capacity(self.group.order());
        for g in self.action.iter() {
            let moved = g.mul(basis)?;
            let local = left_inv.mul(&moved)?;
            if basis.mul(&local)? != moved {
                return Err(Error::Invalid("span is not invariant under the group".into()));
            }
            action.push(local);
        }
        let sub = Module::from_parts(Arc::clone(&self.group), self.p, basis.cols(), action);
        let incl = Morphism::from_parts(sub.clone(), self.clone(), basis.clone());
        Ok((sub, incl))
    }

    /// Quotient by the invariant subspace spanned by the columns of `basis`,
    /// with the projection.
    pub fn quotient(&self, basis: &FpMatrix) -> Result<(Module, Morphism)> {
        if basis.rows() != self.dim {
            return Err(Error::Dimension("quotient basis has wrong length".into()));
        }
        // Rows of `proj` span the annihilator of the subspace.
        let proj = basis.transpose().nullspace().transpose();
        let q = proj.rows();
        let right_inv = proj
            .solve_matrix(&FpMatrix::identity(self.p, q))?
            .expect("full row rank has a right inverse");
        let mut action = Vec::with_capacity(self.group.order());
        for g in self.action.iter() {
            if !proj.mul(&g.mul(basis)?)?.is_zero() {
                return Err(Error::Invalid("subspace is not invariant under the group".into()));
            }
            action.push(proj.mul(g)?.mul(&right_inv)?);
        }
        let quot = Module::from_parts(Arc::clone(&self.group), self.p, q, action);
        let pr = Morphism::from_parts(self.clone(), quot.clone(), proj);
        Ok((quot, pr))
    }
}

fn check_square(m: &FpMatrix, p: Prime, dim: usize, what: &str) -> Result<()> {
    if m.prime() != p {
        return Err(Error::Characteristic(p.get(), m.p()));
    }
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::InvalidModule(format!(
            "action of {what} is {}x{}, expected {dim}x{dim}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// A kG-linear map, stored as a `dim(target) × dim(source)` matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Module,
    target: Module,
    matrix: FpMatrix,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({} -> {}) {:?}", self.source.dim, self.target.dim, self.matrix)
    }
}

impl Morphism {
    /// Checks shapes and the intertwining relation on every generator.
    pub fn new(source: Module, target: Module, matrix: FpMatrix) -> Result<Self> {
        source.check_compatible(&target)?;
        if matrix.prime() != source.prime() {
            return Err(Error::Characteristic(source.p(), matrix.p()));
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Dimension(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let f = Self::from_parts(source, target, matrix);
        f.check_intertwines()?;
        Ok(f)
    }

    pub(crate) fn from_parts(source: Module, target: Module, matrix: FpMatrix) -> Self {
        Morphism { source, target, matrix }
    }

    fn check_intertwines(&self) -> Result<()> {
        let g = self.source.group();
        for &s in g.generators() {
            let lhs = self.matrix.mul(self.source.action(s))?;
            let rhs = self.target.action(s).mul(&self.matrix)?;
            if lhs != rhs {
                return Err(Error::NotIntertwining(format!(
                    "fails for generator {}",
                    g.name(s)
                )));
            }
        }
        Ok(())
    }

    /// Checks intertwining on every group element, not just generators.
    pub fn intertwines_everywhere(&self) -> bool {
        (0..self.source.group().order()).all(|g| {
            self.matrix.mul(self.source.action(g)).ok()
                == self.target.action(g).mul(&self.matrix).ok()
        })
    }

    pub fn zero(source: Module, target: Module) -> Result<Self> {
        source.check_compatible(&target)?;
        let m = FpMatrix::zeros(source.prime(), target.dim(), source.dim());
        Ok(Self::from_parts(source, target, m))
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.target != self.source {
            return Err(Error::Dimension("morphisms are not composable".into()));
        }
        Ok(Self::from_parts(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix)?))
    }

    fn same_ends(&self, other: &Morphism) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("morphisms have different source or target".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.same_ends(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)?))
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.same_ends(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix)?))
    }

    pub fn scale(&self, c: u32) -> Morphism {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_injective()
    }

    /// Kernel as a submodule of the source, with its inclusion.
    pub fn kernel(&self) -> Result<(Module, Morphism)> {
        self.source.submodule(&self.matrix.nullspace())
    }

    /// Cokernel as a quotient of the target, with the projection.
    pub fn cokernel(&self) -> Result<(Module, Morphism)> {
        self.target.quotient(&self.matrix.column_space())
    }
}

/// `0 → x → y → z → 0` with exactness checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSequence {
    inj: Morphism,
    surj: Morphism,
}

impl ShortExactSequence {
    pub fn new(inj: Morphism, surj: Morphism) -> Result<Self> {
        if inj.target() != surj.source() {
            return Err(Error::NotExact("middle terms differ".into()));
        }
        if !inj.is_injective() {
            return Err(Error::NotExact("first map is not injective".into()));
        }
        if !surj.is_surjective() {
            return Err(Error::NotExact("second map is not surjective".into()));
        }
        if !surj.after(&inj)?.is_zero() {
            return Err(Error::NotExact("composite is nonzero".into()));
        }
        if inj.target().dim() != inj.source().dim() + surj.target().dim() {
            return Err(Error::NotExact("dimensions are not additive".into()));
        }
        Ok(ShortExactSequence { inj, surj })
    }

    pub fn inj(&self) -> &Morphism {
        &self.inj
    }

    pub fn surj(&self) -> &Morphism {
        &self.surj
    }

    pub fn left(&self) -> &Module {
        self.inj.source()
    }

    pub fn middle(&self) -> &Module {
        self.inj.target()
    }

    pub fn right(&self) -> &Module {
        self.surj.target()
    }

    pub fn prime(&self) -> Prime {
        self.inj.source().prime()
    }
}

/// `k`: every element acts as `[1]`.
pub fn trivial_module(group: Arc<FiniteGroup>, p: Prime) -> Module {
    let n = group.order();
    Module::from_parts(group, p, 1, vec![FpMatrix::identity(p, 1); n])
}

/// `kG` with `g` permuting the basis `{e_x}` by `e_x ↦ e_{gx}`.
pub fn regular_module(group: Arc<FiniteGroup>, p: Prime) -> Module {
    let n = group.order();
    let action = (0..n)
        .map(|g| {
            let mut m = FpMatrix::zeros(p, n, n);
            for x in 0..n {
                m.set(group.mul(g, x), x, 1);
            }
            m
        })
        .collect();
    Module::from_parts(group, p, n, action)
}

pub fn tensor(m: &Module, n: &Module) -> Result<Module> {
    m.check_compatible(n)?;
    let action = m
        .actions()
        .iter()
        .zip(n.actions())
        .map(|(a, b)| a.kronecker(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(Module::from_parts(Arc::clone(m.group()), m.prime(), m.dim() * n.dim(), action))
}

/// `f ⊗ g` on tensor products.
pub fn tensor_maps(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    let source = tensor(f.source(), g.source())?;
    let target = tensor(f.target(), g.target())?;
    Ok(Morphism::from_parts(source, target, f.matrix().kronecker(g.matrix())?))
}

/// `M*` with `g` acting as the transpose of `ρ(g⁻¹)`.
pub fn dual(m: &Module) -> Module {
    let g = m.group();
    let action = (0..g.order()).map(|a| m.action(g.inverse(a)).transpose()).collect();
    Module::from_parts(Arc::clone(g), m.prime(), m.dim(), action)
}

/// `M ⊕ N` with the `M` block first.
pub fn direct_sum(m: &Module, n: &Module) -> Result<Module> {
    m.check_compatible(n)?;
    let action = m
        .actions()
        .iter()
        .zip(n.actions())
        .map(|(a, b)| a.block_diag(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(Module::from_parts(Arc::clone(m.group()), m.prime(), m.dim() + n.dim(), action))
}

/// `M₁ ⊕ … ⊕ M_r`; the empty sum is not representable without a group.
pub fn direct_sum_all(parts: &[Module]) -> Result<Module> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| direct_sum(&acc, m))
}

/// Canonical inclusions `M → M⊕N ← N`.
pub fn sum_inclusions(m: &Module, n: &Module) -> Result<(Morphism, Morphism)> {
    let s = direct_sum(m, n)?;
    let p = m.prime();
    let mut i1 = FpMatrix::zeros(p, s.dim(), m.dim());
    i1.paste(0, 0, &FpMatrix::identity(p, m.dim()));
    let mut i2 = FpMatrix::zeros(p, s.dim(), n.dim());
    i2.paste(m.dim(), 0, &FpMatrix::identity(p, n.dim()));
    Ok((Morphism::from_parts(m.clone(), s.clone(), i1), Morphism::from_parts(n.clone(), s, i2)))
}

/// Canonical projections `M ← M⊕N → N`.
pub fn sum_projections(m: &Module, n: &Module) -> Result<(Morphism, Morphism)> {
    let s = direct_sum(m, n)?;
    let p = m.prime();
    let mut p1 = FpMatrix::zeros(p, m.dim(), s.dim());
    p1.paste(0, 0, &FpMatrix::identity(p, m.dim()));
    let mut p2 = FpMatrix::zeros(p, n.dim(), s.dim());
    p2.paste(0, m.dim(), &FpMatrix::identity(p, n.dim()));
    Ok((Morphism::from_parts(s.clone(), m.clone(), p1), Morphism::from_parts(s, n.clone(), p2)))
}

/// Restriction to a subgroup, re-packaged over the subgroup's standalone group.
pub fn restrict(m: &Module, h: &Subgroup) -> Result<Module> {
    if h.parent().as_ref() != m.group().as_ref() {
        return Err(Error::GroupMismatch);
    }
    let action = h.elements().iter().map(|&a| m.action(a).clone()).collect();
    Ok(Module::from_parts(Arc::clone(h.as_group()), m.prime(), m.dim(), action))
}

/// `Ind_H^G(M)` on the basis `(t_i, m)` at index `i·dim M + m`, with
/// `g·(t_i ⊗ m) = t_j ⊗ (h·m)` for `g·t_i = t_j·h`.
pub fn induce(g: &Arc<FiniteGroup>, h: &Subgroup, m: &Module) -> Result<Module> {
    if h.parent().as_ref() != g.as_ref() {
        return Err(Error::GroupMismatch);
    }
    if m.group().as_ref() != h.as_group().as_ref() {
        return Err(Error::GroupMismatch);
    }
    let reps = coset_transversal(g, h)?;
    let mut coset_of = vec![0usize; g.order()];
    for (j, &t) in reps.iter().enumerate() {
        for &x in h.elements() {
            coset_of[g.mul(t, x)] = j;
        }
    }
    let d = m.dim();
    let n = reps.len() * d;
    let p = m.prime();
    let action = (0..g.order())
        .map(|a| {
            let mut mat = FpMatrix::zeros(p, n, n);
            for (i, &t) in reps.iter().enumerate() {
                let x = g.mul(a, t);
                let j = coset_of[x];
                let hh = g.mul(g.inverse(reps[j]), x);
                let local = h.local_index(hh).expect("coset factorization lands in H");
                mat.paste(j * d, i * d, m.action(local));
            }
            mat
        })
        .collect();
    Ok(Module::from_parts(Arc::clone(g), p, n, action))
}
