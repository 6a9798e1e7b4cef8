//! Hom_kG spaces and the linear-algebra tests built on them: sections,
//! retractions, factorizations, an exhaustive summand oracle and Fitting
//! decomposition.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{combine, FpMatrix, Prime};
use crate::reps::{Module, Morphism};

/// Default bound on the number of candidates an exhaustive oracle may visit.
pub const DEFAULT_SEARCH_BOUND: u64 = 1 << 20;

/// A basis of `Hom_kG(source, target)`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    source: Module,
    target: Module,
    basis: Vec<FpMatrix>,
    /// Column `j` is the row-major flattening of `basis[j]`.
    flat: FpMatrix,
}

impl HomBasis {
    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrices(&self) -> &[FpMatrix] {
        &self.basis
    }

    pub fn morphisms(&self) -> Vec<Morphism> {
        self.basis
            .iter()
            .map(|m| Morphism::from_parts(self.source.clone(), self.target.clone(), m.clone()))
            .collect()
    }

    /// The morphism `Σ coeffs[j] · basis[j]`.
    pub fn combination(&self, coeffs: &[u32]) -> Morphism {
        let m = combine(
            self.source.prime(),
            self.target.dim(),
            self.source.dim(),
            coeffs,
            &self.basis,
        );
        Morphism::from_parts(self.source.clone(), self.target.clone(), m)
    }

    /// Unique coordinates of `m` in this basis, or `None` if `m` is not an intertwiner.
    pub fn coordinates(&self, m: &FpMatrix) -> Option<Vec<u32>> {
        if m.rows() != self.target.dim() || m.cols() != self.source.dim() {
            return None;
        }
        self.flat.solve(&m.flatten()).ok().flatten()
    }
}

/// Basis of all `T` with `T·ρ_A(g) = ρ_B(g)·T`.
///
/// `A` is spun up from a few seed vectors into a basis `u_j`, each either a
/// seed or `ρ_A(g)·u_i` for an earlier `u_i`. An intertwiner is then fixed by
/// the images of the seeds, and `T(u_j)` is a known linear function `L_j` of
/// those images. The remaining conditions `ρ_B(g)·T(u_j) = T(ρ_A(g)·u_j)`
/// are imposed block by block on a shrinking solution space.
pub fn hom_basis(a: &Module, b: &Module) -> Result<HomBasis> {
    a.check_compatible(b)?;
    let p = a.prime();
    let (m, n) = (b.dim(), a.dim());
    let gens = a.group().generators();

    // Spin-up: provenance[j] = None for a seed, Some((gen position, i)) for ρ(g)·u_i.
    let mut ech = Echelon::new(p);
    let mut vectors: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut provenance: Vec<Option<(usize, usize)>> = Vec::with_capacity(n);
    let mut seeds = 0;
    for e in 0..n {
        let mut unit = vec![0u32; n];
        unit[e] = 1;
        if !ech.insert(&unit) {
            continue;
        }
        vectors.push(unit);
        provenance.push(None);
        seeds += 1;
        let mut next = vectors.len() - 1;
        while next < vectors.len() {
            for (gi, &g) in gens.iter().enumerate() {
                let img = a.action(g).apply(&vectors[next]);
                if ech.insert(&img) {
                    vectors.push(img);
                    provenance.push(Some((gi, next)));
                }
            }
            next += 1;
        }
    }
    debug_assert_eq!(vectors.len(), n);

    let unknowns = seeds * m;
    let mut lin: Vec<FpMatrix> = Vec::with_capacity(n);
    let mut seed = 0;
    for prov in &provenance {
        lin.push(match *prov {
            None => {
                let mut l = FpMatrix::zeros(p, m, unknowns);
                l.paste(0, seed * m, &FpMatrix::identity(p, m));
                seed += 1;
                l
            }
            Some((gi, i)) => b.action(gens[gi]).mul(&lin[i])?,
        });
    }

    let u = FpMatrix::from_columns(p, n, &vectors);
    let u_inv = u.inverse().ok_or_else(|| Error::Invalid("spin-up basis is singular".into()))?;
    // Constraint rows, compressed to their row space whenever they pile up.
    let mut system = FpMatrix::zeros(p, 0, unknowns);
    for &g in gens {
        let coords = u_inv.mul(a.action(g))?.mul(&u)?;
        let bg = b.action(g);
        for j in 0..n {
            // ρ_B(g)·L_j − Σ_k coords[k][j]·L_k
            let mut block = bg.mul(&lin[j])?;
            for (k, lk) in lin.iter().enumerate() {
                let c = coords.get(k, j);
                if c != 0 {
                    block = block.sub(&lk.scale(c))?;
                }
            }
            if block.is_zero() {
                continue;
            }
            system = system.vstack(&block)?;
            if system.rows() > 2 * unknowns.max(1) {
                system = system.row_space();
            }
        }
    }
    let span = system.nullspace();

    // T·U = [L_j·x]_j, so T = [L_j·x]_j · U⁻¹.
    let images = lin.iter().map(|l| l.mul(&span)).collect::<Result<Vec<_>>>()?;
    let identity_basis = u_inv.is_identity();
    let basis = (0..span.cols())
        .map(|c| {
            let mut tu = FpMatrix::zeros(p, m, n);
            for (j, img) in images.iter().enumerate() {
                for i in 0..m {
                    tu.set(i, j, img.get(i, c));
                }
            }
            if identity_basis {
                tu
            } else {
                tu.mul(&u_inv).expect("shape")
            }
        })
        .collect::<Vec<_>>();
    let flat = FpMatrix::from_columns(p, m * n, &basis.iter().map(FpMatrix::flatten).collect::<Vec<_>>());
    Ok(HomBasis { source: a.clone(), target: b.clone(), basis, flat })
}

/// Incrementally maintained row-echelon basis for membership tests.
struct Echelon {
    p: Prime,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn new(p: Prime) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the stored vectors.
    fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let f = v[*pc];
            if f != 0 {
                let nf = p.neg(f);
                for (e, &r) in v.iter_mut().zip(row) {
                    *e = p.add(*e, p.mul(nf, r));
                }
            }
        }
        let Some(pc) = v.iter().position(|&e| e != 0) else {
            return false;
        };
        let inv = p.inv(v[pc]);
        for e in v.iter_mut() {
            *e = p.mul(*e, inv);
        }
        self.rows.push((pc, v));
        true
    }
}

/// Finds `x` in `basis`'s span with `Σ x_j · image(basis_j) = goal`, where
/// `image` is linear; returns the combined morphism.
fn solve_in_span(
    basis: &HomBasis,
    goal: &FpMatrix,
    image: impl Fn(&FpMatrix) -> Result<FpMatrix>,
) -> Result<Option<Morphism>> {
    let p = goal.prime();
    let len = goal.rows() * goal.cols();
    let columns = basis
        .matrices()
        .iter()
        .map(|t| image(t).map(|x| x.flatten()))
        .collect::<Result<Vec<_>>>()?;
    let system = FpMatrix::from_columns(p, len, &columns);
    Ok(system.solve(&goal.flatten())?.map(|x| basis.combination(&x)))
}

/// A kG-map `s` with `f∘s = id`, if one exists.
pub fn has_section(f: &Morphism) -> Result<Option<Morphism>> {
    let hb = hom_basis(f.target(), f.source())?;
    let id = FpMatrix::identity(f.source().prime(), f.target().dim());
    let s = solve_in_span(&hb, &id, |t| f.matrix().mul(t))?;
    debug_assert!(s.as_ref().map_or(true, |s| f.after(s).unwrap().matrix().is_identity()));
    Ok(s)
}

/// A kG-map `r` with `r∘f = id`, if one exists.
pub fn has_retraction(f: &Morphism) -> Result<Option<Morphism>> {
    let hb = hom_basis(f.target(), f.source())?;
    let id = FpMatrix::identity(f.source().prime(), f.source().dim());
    let r = solve_in_span(&hb, &id, |t| t.mul(f.matrix()))?;
    debug_assert!(r.as_ref().map_or(true, |r| r.after(f).unwrap().matrix().is_identity()));
    Ok(r)
}

/// A kG-map `h: A → B` with `g∘h = f` for `f: A → C`, `g: B → C`.
pub fn factors_through(f: &Morphism, g: &Morphism) -> Result<Option<Morphism>> {
    if f.target() != g.target() {
        return Err(Error::Dimension("factors_through needs a common target".into()));
    }
    let hb = hom_basis(f.source(), g.source())?;
    let h = solve_in_span(&hb, f.matrix(), |t| g.matrix().mul(t))?;
    debug_assert!(h.as_ref().map_or(true, |h| g.after(h).unwrap() == *f));
    Ok(h)
}

/// Maps `i: X → Y`, `r: Y → X` with `r∘i = id_X`.
#[derive(Clone, Debug)]
pub struct SummandWitness {
    pub inclusion: Morphism,
    pub retraction: Morphism,
}

/// Searches for `i: X → Y`, `r: Y → X` with `r∘i = id_X`.
///
/// The condition is bilinear. The smaller of the two hom spaces is
/// enumerated exhaustively; for each candidate the other factor is found (or
/// ruled out) by an exact linear solve.
fn split_pair_bruteforce(x: &Module, y: &Module, bound: u64) -> Result<Option<(Morphism, Morphism)>> {
    let p = x.prime();
    let into = hom_basis(x, y)?;
    let back = hom_basis(y, x)?;
    let enumerate_inclusions = into.dim() <= back.dim();
    let free = into.dim().min(back.dim());
    let size = (p.get() as f64).powi(free as i32);
    if size > bound as f64 {
        return Err(Error::OracleInfeasible { size, bound });
    }
    let size = (p.get() as u64).pow(free as u32);

    // products[j][k] = back_j ∘ into_k
    let products: Vec<Vec<FpMatrix>> = back
        .matrices()
        .iter()
        .map(|r| into.matrices().iter().map(|i| r.mul(i)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let dx = x.dim();
    let goal = FpMatrix::identity(p, dx).flatten();

    let found = (0..size).into_par_iter().find_map_first(|idx| {
        let fixed = digits(idx, p.get(), free);
        // Columns of the linear system for the other factor's coordinates.
        let columns: Vec<Vec<u32>> = if enumerate_inclusions {
            products.iter().map(|row| combine(p, dx, dx, &fixed, row).flatten()).collect()
        } else {
            (0..into.dim())
                .map(|k| {
                    let col: Vec<FpMatrix> = products.iter().map(|row| row[k].clone()).collect();
                    combine(p, dx, dx, &fixed, &col).flatten()
                })
                .collect()
        };
        let system = FpMatrix::from_columns(p, dx * dx, &columns);
        let other = system.solve(&goal).expect("shapes agree")?;
        Some(if enumerate_inclusions { (fixed, other) } else { (other, fixed) })
    });
    Ok(found.map(|(ci, cr)| (into.combination(&ci), back.combination(&cr))))
}

/// A summand of `X` with its inclusion and projection.
#[derive(Clone, Debug)]
pub struct Piece {
    pub module: Module,
    pub inclusion: Morphism,
    pub projection: Morphism,
}

/// Image of an idempotent `e` of `X`, with `inclusion ∘ projection = e`.
fn image_piece(e: &Morphism) -> Result<Piece> {
    let basis = e.matrix().column_space();
    let (module, inclusion) = e.source().submodule(&basis)?;
    let proj = basis
        .solve_matrix(e.matrix())?
        .ok_or_else(|| Error::Invalid("idempotent image is not spanned by its columns".into()))?;
    let projection = Morphism::new(e.source().clone(), module.clone(), proj)?;
    Ok(Piece { module, inclusion, projection })
}

/// Splits `X` into indecomposable summands, finding idempotents of `End(X)`
/// by exhaustive enumeration.
pub fn indecomposable_summands(x: &Module, bound: u64) -> Result<Vec<Piece>> {
    if x.dim() == 0 {
        return Ok(Vec::new());
    }
    let p = x.prime();
    let end = hom_basis(x, x)?;
    let size = (p.get() as f64).powi(end.dim() as i32);
    if size > bound as f64 {
        return Err(Error::OracleInfeasible { size, bound });
    }
    let size = (p.get() as u64).pow(end.dim() as u32);
    let n = x.dim();
    let idempotent = (0..size).into_par_iter().find_map_first(|idx| {
        let e = combine(p, n, n, &digits(idx, p.get(), end.dim()), end.matrices());
        let trivial = e.is_zero() || e.is_identity();
        (!trivial && e.mul(&e).expect("square") == e).then_some(e)
    });
    let Some(e) = idempotent else {
        return Ok(vec![Piece { module: x.clone(), inclusion: x.identity_map(), projection: x.identity_map() }]);
    };
    let e = Morphism::new(x.clone(), x.clone(), e)?;
    let complement = x.identity_map().sub(&e)?;
    let mut out = Vec::new();
    for half in [e, complement] {
        let outer = image_piece(&half)?;
        for inner in indecomposable_summands(&outer.module, bound)? {
            out.push(Piece {
                module: inner.module,
                inclusion: outer.inclusion.after(&inner.inclusion)?,
                projection: inner.projection.after(&outer.projection)?,
            });
        }
    }
    Ok(out)
}

/// Exhaustive test whether `X` is a direct summand of `Y`.
///
/// `X` is split into indecomposables by an exhaustive idempotent search.
/// Each piece is then split off `Y` in turn by [`split_pair_bruteforce`],
/// continuing in the kernel of the retraction; by Krull–Schmidt the choice
/// of complement at each step does not matter. Errors with
/// [`Error::OracleInfeasible`] when any enumerated space has more than
/// `bound` elements. A witness is re-verified before it is returned.
pub fn summand_witness_bruteforce(x: &Module, y: &Module, bound: u64) -> Result<Option<SummandWitness>> {
    x.check_compatible(y)?;
    let p = x.prime();
    // Current complement `C ⊂ Y` with `into_y: C → Y`, `onto_c: Y → C`.
    let mut into_y = y.identity_map();
    let mut onto_c = y.identity_map();
    let mut inclusion = FpMatrix::zeros(p, y.dim(), x.dim());
    let mut retraction = FpMatrix::zeros(p, x.dim(), y.dim());
    for piece in indecomposable_summands(x, bound)? {
        let c = into_y.source().clone();
        let Some((i, r)) = split_pair_bruteforce(&piece.module, &c, bound)? else {
            return Ok(None);
        };
        inclusion = inclusion.add(&into_y.after(&i)?.after(&piece.projection)?.matrix().clone())?;
        retraction = retraction.add(piece.inclusion.after(&r)?.after(&onto_c)?.matrix())?;
        // Continue in ker r, projecting along the image of i.
        let (next, kappa) = r.kernel()?;
        let along = c.identity_map().sub(&i.after(&r)?)?;
        let q = kappa
            .matrix()
            .solve_matrix(along.matrix())?
            .ok_or_else(|| Error::Invalid("complement projection failed".into()))?;
        onto_c = Morphism::new(c, next, q)?.after(&onto_c)?;
        into_y = into_y.after(&kappa)?;
    }
    let inclusion = Morphism::new(x.clone(), y.clone(), inclusion)?;
    let retraction = Morphism::new(y.clone(), x.clone(), retraction)?;
    if !retraction.after(&inclusion)?.matrix().is_identity() {
        return Err(Error::Invalid("summand witness failed re-verification".into()));
    }
    Ok(Some(SummandWitness { inclusion, retraction }))
}

pub fn is_summand_bruteforce(x: &Module, y: &Module, bound: u64) -> Result<bool> {
    Ok(summand_witness_bruteforce(x, y, bound)?.is_some())
}

/// Base-`p` digits of `idx`, least significant first.
pub(crate) fn digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((idx % p as u64) as u32);
        idx /= p as u64;
    }
    out
}

/// Column bases of `ker φⁿ` (where φ is nilpotent) and `im φⁿ` (where φ is
/// invertible), `n = dim M`.
#[derive(Clone, Debug)]
pub struct FittingParts {
    pub nilpotent: FpMatrix,
    pub invertible: FpMatrix,
}

pub fn fitting_decomposition(phi: &Morphism) -> Result<FittingParts> {
    if phi.source() != phi.target() {
        return Err(Error::Dimension("Fitting decomposition needs an endomorphism".into()));
    }
    let power = phi.matrix().pow(phi.source().dim() as u64)?;
    Ok(FittingParts { nilpotent: power.nullspace(), invertible: power.column_space() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::reps::{direct_sum, regular_module, sum_inclusions, sum_projections, trivial_module};
    use std::sync::Arc;

    fn gf(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn module(name: &str) -> Module {
        catalog::module(name).unwrap()
    }

    /// Equations `T·A − B·T = 0` in the row-major entries of `T`.
    fn commutant_equations(a: &FpMatrix, b: &FpMatrix, p: Prime) -> FpMatrix {
        let (m, n) = (b.rows(), a.rows());
        let mut e = FpMatrix::zeros(p, m * n, m * n);
        for i in 0..m {
            for j in 0..n {
                let row = i * n + j;
                for k in 0..n {
                    let col = i * n + k;
                    e.set(row, col, p.add(e.get(row, col), a.get(k, j)));
                }
                for k in 0..m {
                    let col = k * n + j;
                    e.set(row, col, p.sub(e.get(row, col), b.get(i, k)));
                }
            }
        }
        e
    }

    /// Dimension of the commutant, from all group elements stacked at once.
    fn commutant_dim(a: &Module, b: &Module) -> usize {
        let p = a.prime();
        let mut eqs = FpMatrix::zeros(p, 0, a.dim() * b.dim());
        for g in 0..a.group().order() {
            eqs = eqs.vstack(&commutant_equations(a.action(g), b.action(g), p)).unwrap();
        }
        eqs.nullspace().cols()
    }

    /// Counts intertwiners by enumerating every matrix over GF(2).
    fn enumerate_hom_dim(a: &Module, b: &Module) -> usize {
        let cells = a.dim() * b.dim();
        let count = (0..1u64 << cells)
            .filter(|&bits| {
                let t = FpMatrix::from_vec(gf(2), b.dim(), a.dim(), digits(bits, 2, cells)).unwrap();
                (0..a.group().order())
                    .all(|g| t.mul(a.action(g)).unwrap() == b.action(g).mul(&t).unwrap())
            })
            .count();
        count.trailing_zeros() as usize
    }

    #[test]
    fn hom_examples() {
        let k = module("klein4.k");
        let v = module("klein4.v");
        let vp = module("klein4.v_prime");
        assert_eq!(hom_basis(&k, &k).unwrap().dim(), 1);
        assert_eq!(hom_basis(&k, &vp).unwrap().dim(), 1);
        let hb = hom_basis(&v, &vp).unwrap();
        assert_eq!(hb.dim(), enumerate_hom_dim(&v, &vp));
        for f in hb.morphisms() {
            assert!(f.intertwines_everywhere());
        }
    }

    #[test]
    fn hom_dims_match_enumeration() {
        let names = ["klein4.k", "klein4.v", "klein4.v_prime", "klein4.w_ind"];
        let mut mods: Vec<Module> = names.iter().map(|n| module(n)).collect();
        let k4 = Arc::clone(mods[0].group());
        mods.push(crate::reps::dual(&module("klein4.v_prime")));
        mods.push(regular_module(k4, gf(2)));
        for a in &mods {
            for b in &mods {
                if a.dim() * b.dim() <= 9 {
                    assert_eq!(hom_basis(a, b).unwrap().dim(), enumerate_hom_dim(a, b));
                }
            }
        }
    }

    #[test]
    fn hom_dims_match_commutant() {
        let mut mods: Vec<Module> = ["klein4.k", "klein4.v", "klein4.v_prime", "klein4.w_ind", "klein4.regular"]
            .iter()
            .map(|n| module(n))
            .collect();
        mods.push(crate::reps::dual(&module("klein4.v_prime")));
        mods.push(direct_sum(&module("klein4.v"), &module("klein4.k")).unwrap());
        for a in &mods {
            for b in &mods {
                assert_eq!(hom_basis(a, b).unwrap().dim(), commutant_dim(a, b));
            }
        }
        let wrapped = crate::constructions::wrap_ses(gf(3), &catalog::ses("c3.jordan_ses").unwrap()).unwrap();
        let c3: Vec<Module> = vec![wrapped.module.clone(), wrapped.w_rel.clone()];
        for a in &c3 {
            for b in &c3 {
                let hb = hom_basis(a, b).unwrap();
                assert_eq!(hb.dim(), commutant_dim(a, b));
                assert!(hb.morphisms().iter().all(Morphism::intertwines_everywhere));
            }
        }
    }

    #[test]
    fn indecomposable_pieces() {
        let (k, v) = (module("klein4.k"), module("klein4.v"));
        let x = crate::reps::direct_sum_all(&[k.clone(), v.clone(), k.clone()]).unwrap();
        let pieces = indecomposable_summands(&x, DEFAULT_SEARCH_BOUND).unwrap();
        let mut dims: Vec<usize> = pieces.iter().map(|pc| pc.module.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);
        let mut total = Morphism::zero(x.clone(), x.clone()).unwrap();
        for pc in &pieces {
            assert!(pc.projection.after(&pc.inclusion).unwrap().matrix().is_identity());
            total = total.add(&pc.inclusion.after(&pc.projection).unwrap()).unwrap();
        }
        assert!(total.matrix().is_identity());
        for name in ["klein4.regular", "klein4.v_prime", "klein4.w_ind"] {
            assert_eq!(indecomposable_summands(&module(name), DEFAULT_SEARCH_BOUND).unwrap().len(), 1);
        }
    }

    #[test]
    fn peeling_handles_repeated_summands() {
        let (k, v) = (module("klein4.k"), module("klein4.v"));
        let kk = direct_sum(&k, &k).unwrap();
        let kkk = crate::reps::direct_sum_all(&[k.clone(), k.clone(), k.clone()]).unwrap();
        assert!(is_summand_bruteforce(&kk, &kkk, DEFAULT_SEARCH_BOUND).unwrap());
        assert!(!is_summand_bruteforce(&kkk, &kk, DEFAULT_SEARCH_BOUND).unwrap());
        let kv = direct_sum(&k, &v).unwrap();
        assert!(!is_summand_bruteforce(&kk, &kv, DEFAULT_SEARCH_BOUND).unwrap());
        let vkv = crate::reps::direct_sum_all(&[v.clone(), k.clone(), v.clone()]).unwrap();
        let w = summand_witness_bruteforce(&kv, &vkv, DEFAULT_SEARCH_BOUND).unwrap().unwrap();
        assert!(w.retraction.after(&w.inclusion).unwrap().matrix().is_identity());
    }

    #[test]
    fn coordinates_are_unique() {
        let v = module("klein4.v");
        let hb = hom_basis(&v, &v).unwrap();
        for (j, m) in hb.matrices().iter().enumerate() {
            let c = hb.coordinates(m).unwrap();
            assert_eq!(c.iter().filter(|&&x| x != 0).count(), 1);
            assert_eq!(c[j], 1);
        }
        let not_hom = FpMatrix::from_rows(gf(2), &[[0i64, 1], [0, 0]]).unwrap();
        assert!(hb.coordinates(&not_hom).is_none());
    }

    #[test]
    fn section_examples() {
        let v = module("klein4.v");
        let s = has_section(&v.identity_map()).unwrap().unwrap();
        assert!(s.matrix().is_identity());

        let ses = catalog::ses("c2.nonsplit_ses").unwrap();
        assert!(has_section(ses.surj()).unwrap().is_none());

        let k = module("klein4.k");
        let (pr, _) = sum_projections(&k, &k).unwrap();
        let s = has_section(&pr).unwrap().unwrap();
        assert!(pr.after(&s).unwrap().matrix().is_identity());
    }

    #[test]
    fn retraction_examples() {
        let v = module("klein4.v");
        assert!(has_retraction(&v.identity_map()).unwrap().unwrap().matrix().is_identity());

        let ses = catalog::ses("c2.nonsplit_ses").unwrap();
        assert!(has_retraction(ses.inj()).unwrap().is_none());

        let k = module("klein4.k");
        let (i1, _) = sum_inclusions(&k, &v).unwrap();
        let r = has_retraction(&i1).unwrap().unwrap();
        assert!(r.after(&i1).unwrap().matrix().is_identity());
    }

    #[test]
    fn factorization_examples() {
        let vp = module("klein4.v_prime");
        let chain = catalog::chain("klein4.chain").unwrap();
        let socle = chain[1].after(&chain[0]).unwrap();
        assert_eq!(socle.matrix().column(0), vec![0, 0, 1]);
        let h = factors_through(&socle, &chain[1]).unwrap().unwrap();
        assert_eq!(chain[1].after(&h).unwrap(), socle);

        let f = socle.clone();
        assert_eq!(factors_through(&f, &vp.identity_map()).unwrap().unwrap(), f);

        let ses = catalog::ses("c2.nonsplit_ses").unwrap();
        let id_k = ses.right().identity_map();
        assert!(factors_through(&id_k, ses.surj()).unwrap().is_none());

        let k = module("klein4.k");
        assert!(factors_through(&k.identity_map(), &socle).is_err());
    }

    #[test]
    fn summand_examples() {
        let k = module("klein4.k");
        let v = module("klein4.v");
        let vp = module("klein4.v_prime");
        assert!(!is_summand_bruteforce(&v, &vp, DEFAULT_SEARCH_BOUND).unwrap());
        let kv = direct_sum(&k, &v).unwrap();
        let w = summand_witness_bruteforce(&k, &kv, DEFAULT_SEARCH_BOUND).unwrap().unwrap();
        assert!(w.retraction.after(&w.inclusion).unwrap().matrix().is_identity());
        assert!(!is_summand_bruteforce(&k, &v, DEFAULT_SEARCH_BOUND).unwrap());
        assert!(is_summand_bruteforce(&vp, &vp, DEFAULT_SEARCH_BOUND).unwrap());
    }

    #[test]
    fn summand_bound_is_enforced() {
        let k = module("klein4.k");
        let big = crate::reps::direct_sum_all(&vec![k.clone(); 6]).unwrap();
        let err = is_summand_bruteforce(&k, &big, 8).unwrap_err();
        assert!(matches!(err, Error::OracleInfeasible { .. }));
    }

    #[test]
    fn fitting_examples() {
        let vp = module("klein4.v_prime");
        let id = fitting_decomposition(&vp.identity_map()).unwrap();
        assert_eq!((id.nilpotent.cols(), id.invertible.cols()), (0, 3));
        let zero = Morphism::zero(vp.clone(), vp.clone()).unwrap();
        let z = fitting_decomposition(&zero).unwrap();
        assert_eq!((z.nilpotent.cols(), z.invertible.cols()), (3, 0));

        let k = trivial_module(Arc::clone(vp.group()), gf(2));
        let kk = direct_sum(&k, &k).unwrap();
        let e = FpMatrix::from_rows(gf(2), &[[1i64, 0], [0, 0]]).unwrap();
        let phi = Morphism::new(kk.clone(), kk, e).unwrap();
        let f = fitting_decomposition(&phi).unwrap();
        assert_eq!((f.nilpotent.cols(), f.invertible.cols()), (1, 1));
        assert_eq!(f.nilpotent.hstack(&f.invertible).unwrap().rank(), 2);
    }

    #[test]
    fn fitting_parts_complementary_on_endomorphisms() {
        let vp = module("klein4.v_prime");
        let hb = hom_basis(&vp, &vp).unwrap();
        for idx in 0..(1u64 << hb.dim()) {
            let phi = hb.combination(&digits(idx, 2, hb.dim()));
            let f = fitting_decomposition(&phi).unwrap();
            assert_eq!(f.nilpotent.cols() + f.invertible.cols(), 3);
            assert_eq!(f.nilpotent.hstack(&f.invertible).unwrap().rank(), 3);
            // φ is nilpotent on the kernel part and invertible on the image part.
            let on_nil = phi.matrix().pow(3).unwrap().mul(&f.nilpotent).unwrap();
            assert!(on_nil.is_zero());
            assert_eq!(phi.matrix().mul(&f.invertible).unwrap().rank(), f.invertible.cols());
        }
    }
}
