//! Wrapping a short exact sequence of kG-modules into a k[G×C_p]-module
//! whose relative projectivity with respect to `G` detects splitting, and
//! the combinatorial identities behind the splitting argument.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime};
use crate::groups::{cyclic, direct_product, FiniteGroup, Subgroup};
use crate::homs::has_section;
use crate::relative::RelativeContext;
use crate::reps::{induce, trivial_module, Module, ShortExactSequence};

#[derive(Clone, Debug)]
pub struct WrapResult {
    /// `G × C_p`, with `(g, h^r)` at index `g·p + r`.
    pub big_group: Arc<FiniteGroup>,
    /// `G × {e}` inside `big_group`.
    pub base: Subgroup,
    pub module: Module,
    /// The nilpotent shift `s`; the generator `h` of `C_p` acts as `I + s`.
    pub shift: FpMatrix,
    /// `Ind_{G×e}^{G×C_p}(k)`, the module relative projectivity is tested against.
    pub w_rel: Module,
}

/// Builds the k[G×C_p]-module on `x^{p−1} ⊕ y ⊕ z^{p−1}`.
///
/// The shift moves `x_i → x_{i+1}` and `z_j → z_{j+1}` by the identity,
/// `x_{p−1} → y` by the injection, `y → z_1` by the surjection and kills
/// `z_{p−1}`. `(g, h^r)` acts as `ρ(g)·(I + s)^r`.
pub fn wrap_ses(p: Prime, ses: &ShortExactSequence) -> Result<WrapResult> {
    if ses.prime() != p {
        return Err(Error::Characteristic(p.get(), ses.prime().get()));
    }
    let pp = p.get() as usize;
    let g = ses.left().group();
    let (x, y, z) = (ses.left(), ses.middle(), ses.right());
    let (dx, dy, dz) = (x.dim(), y.dim(), z.dim());
    let y_off = (pp - 1) * dx;
    let z_off = y_off + dy;
    let n = z_off + (pp - 1) * dz;

    let mut shift = FpMatrix::zeros(p, n, n);
    for i in 0..pp.saturating_sub(2) {
        shift.paste((i + 1) * dx, i * dx, &FpMatrix::identity(p, dx));
        shift.paste(z_off + (i + 1) * dz, z_off + i * dz, &FpMatrix::identity(p, dz));
    }
    shift.paste(y_off, (pp - 2) * dx, ses.inj().matrix());
    shift.paste(z_off, y_off, ses.surj().matrix());

    let step = FpMatrix::identity(p, n).add(&shift)?;
    let mut steps = vec![FpMatrix::identity(p, n)];
    for r in 1..pp {
        steps.push(steps[r - 1].mul(&step)?);
    }

    let cp = cyclic(pp)?;
    let big = Arc::new(direct_product(g, &cp)?);
    let mut action = Vec::with_capacity(big.order());
    for a in 0..g.order() {
        let mut rho = FpMatrix::zeros(p, n, n);
        for i in 0..pp - 1 {
            rho.paste(i * dx, i * dx, x.action(a));
            rho.paste(z_off + i * dz, z_off + i * dz, z.action(a));
        }
        rho.paste(y_off, y_off, y.action(a));
        for s in &steps {
            action.push(rho.mul(s)?);
        }
    }
    let module = Module::new(Arc::clone(&big), p, n, action)?;

    let base = Subgroup::new(Arc::clone(&big), (0..g.order()).map(|a| a * pp))?;
    let w_rel = induce(&big, &base, &trivial_module(Arc::clone(base.as_group()), p))?;
    Ok(WrapResult { big_group: big, base, module, shift, w_rel })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WrapLemmaReport {
    pub split: bool,
    pub rel_proj: bool,
    pub agree: bool,
}

/// Compares splitting of `ses` with `G`-projectivity of its wrapped module.
pub fn verify_wrap_lemma(p: Prime, ses: &ShortExactSequence) -> Result<WrapLemmaReport> {
    let wrapped = wrap_ses(p, ses)?;
    let split = has_section(ses.surj())?.is_some();
    let rel_proj = RelativeContext::new(wrapped.w_rel).is_relatively_projective(&wrapped.module)?;
    Ok(WrapLemmaReport { split, rel_proj, agree: split == rel_proj })
}

/// Row `n` of Pascal's triangle mod `p`, by the additive recursion.
pub fn pascal_row_mod(n: usize, p: Prime) -> Vec<u32> {
    let mut row = vec![1u32];
    for _ in 0..n {
        let mut next = vec![1u32; row.len() + 1];
        for i in 1..row.len() {
            next[i] = p.add(row[i - 1], row[i]);
        }
        row = next;
    }
    row
}

/// `C(p−1, i) ≡ (−1)^i (mod p)` for `0 ≤ i ≤ p−1`.
pub fn verify_binomial_claim(p: u32) -> Result<bool> {
    let p = Prime::new(p)?;
    let row = pascal_row_mod(p.get() as usize - 1, p);
    Ok(row.iter().enumerate().all(|(i, &c)| c == if i % 2 == 0 { 1 } else { p.get() - 1 }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    pub closed_form_ok: bool,
    pub final_sum_ok: bool,
}

/// `θ_{r,s}` for `r = 1..p` (first index mod p) and `s = 1..p−1`, each a
/// coefficient vector over the free symbols `θ_{1,1}, …, θ_{p,1}`.
fn theta_table(p: Prime) -> Vec<Vec<Vec<u32>>> {
    let n = p.get() as usize;
    // table[s-1][r-1]
    let mut table = vec![vec![vec![0u32; n]; n]; n - 1];
    for r in 0..n {
        table[0][r][r] = 1;
    }
    // θ_{r+1,s+1} = θ_{r,s} − θ_{r+1,s}
    for s in 0..n.saturating_sub(2) {
        for r in 0..n {
            let next = (r + 1) % n;
            let v = (0..n).map(|j| p.sub(table[s][r][j], table[s][next][j])).collect();
            table[s + 1][next] = v;
        }
    }
    table
}

/// Checks the alternating closed form
/// `θ_{r,s} = Σ_{i=0}^{k} (−1)^i C(k,i) θ_{r−k+i, s−k}` and that
/// `θ_{p,p−1} − θ_{1,p−1}` is the all-ones vector, i.e. `Σ_i θ_{i,1}`.
pub fn verify_theta_identity(p: u32) -> Result<ThetaReport> {
    let p = Prime::new(p)?;
    let n = p.get() as usize;
    let table = theta_table(p);
    let at = |r: isize, s: usize| &table[s - 1][r.rem_euclid(n as isize) as usize];

    let mut closed_form_ok = true;
    for s in 1..n {
        for k in 0..s {
            let binom = pascal_row_mod(k, p);
            for r in 0..n as isize {
                let mut acc = vec![0u32; n];
                for (i, &c) in binom.iter().enumerate() {
                    let c = if i % 2 == 0 { c } else { p.neg(c) };
                    let term = at(r - k as isize + i as isize, s - k);
                    for (a, &t) in acc.iter_mut().zip(term) {
                        *a = p.add(*a, p.mul(c, t));
                    }
                }
                closed_form_ok &= acc == *at(r, s);
            }
        }
    }

    let top = at(n as isize - 1, n - 1);
    let bottom = at(0, n - 1);
    let diff: Vec<u32> = top.iter().zip(bottom).map(|(&a, &b)| p.sub(a, b)).collect();
    let final_sum_ok = diff.iter().all(|&c| c == 1);
    Ok(ThetaReport { closed_form_ok, final_sum_ok })
}

/// Enumerates every scalar table `θ_{r,s}` over GF(p) satisfying the
/// commuting relations `θ_{r,s} = θ_{r+1,s} + θ_{r+1,s+1}` and checks the
/// same two identities on each. Also returns the number of solutions, which
/// is `p^p` when the first column parametrizes the solution space.
pub fn theta_bruteforce(p: u32, bound: u64) -> Result<(ThetaReport, u64)> {
    let p = Prime::new(p)?;
    let n = p.get() as usize;
    let cells = n * (n - 1);
    let size = (p.get() as f64).powi(cells as i32);
    if size > bound as f64 {
        return Err(Error::OracleInfeasible { size, bound });
    }
    let q = p.get() as u64;
    // cell (r, s), both 0-based, at index s*n + r
    let get = |t: &[u32], r: usize, s: usize| t[s * n + r % n];
    let mut report = ThetaReport { closed_form_ok: true, final_sum_ok: true };
    let mut solutions = 0u64;
    let mut table = vec![0u32; cells];
    for idx in 0..q.pow(cells as u32) {
        let mut x = idx;
        for c in table.iter_mut() {
            *c = (x % q) as u32;
            x /= q;
        }
        let satisfies = (0..n.saturating_sub(2)).all(|s| {
            (0..n).all(|r| get(&table, r, s) == p.add(get(&table, r + 1, s), get(&table, r + 1, s + 1)))
        });
        if !satisfies {
            continue;
        }
        solutions += 1;
        for s in 0..n - 1 {
            for k in 0..=s {
                for r in 0..n {
                    // C(k, i) via the multiplicative formula over the integers.
                    let mut binom = 1i64;
                    let mut acc = 0u32;
                    for i in 0..=k {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        let term = get(&table, r + n * k + i - k, s - k);
                        acc = p.add(acc, p.mul(p.reduce(sign * binom), term));
                        binom = binom * (k - i) as i64 / (i + 1) as i64;
                    }
                    report.closed_form_ok &= acc == get(&table, r, s);
                }
            }
        }
        let sum = (0..n).fold(0, |a, r| p.add(a, get(&table, r, 0)));
        report.final_sum_ok &= p.sub(get(&table, n - 1, n - 2), get(&table, 0, n - 2)) == sum;
    }
    Ok((report, solutions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::groups::Subgroup;
    use crate::reps::{direct_sum_all, restrict};

    fn gf(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn wrap_examples() {
        let nonsplit = catalog::ses("c2.nonsplit_ses").unwrap();
        let w = wrap_ses(gf(2), &nonsplit).unwrap();
        assert_eq!(w.module.dim(), 4);
        assert_eq!(w.big_group.order(), 4);

        let split = catalog::ses("c2.split_ses").unwrap();
        let w = wrap_ses(gf(2), &split).unwrap();
        assert_eq!(w.module.dim(), 4);
        assert_eq!(w.shift.rank(), 2);

        let jordan = catalog::ses("c3.jordan_ses").unwrap();
        let w = wrap_ses(gf(3), &jordan).unwrap();
        assert_eq!(w.module.dim(), 6);
        assert_eq!(w.big_group.order(), 9);

        assert!(matches!(wrap_ses(gf(3), &split), Err(Error::Characteristic(3, 2))));
    }

    #[test]
    fn wrap_invariants() {
        for (p, name) in [(2, "c2.nonsplit_ses"), (2, "c2.split_ses"), (3, "c3.jordan_ses")] {
            let ses = catalog::ses(name).unwrap();
            let w = wrap_ses(gf(p), &ses).unwrap();
            w.module.validate().unwrap();
            assert!(w.shift.pow(p as u64).unwrap().is_zero());
            let h = w.big_group.generators().last().copied().unwrap();
            let one_plus_s = FpMatrix::identity(gf(p), w.module.dim()).add(&w.shift).unwrap();
            assert_eq!(w.module.action(h), &one_plus_s);

            let res = restrict(&w.module, &w.base).unwrap();
            let mut parts = vec![ses.left().clone(); p as usize - 1];
            parts.push(ses.middle().clone());
            parts.extend(vec![ses.right().clone(); p as usize - 1]);
            assert_eq!(res.actions(), direct_sum_all(&parts).unwrap().actions());
            assert_eq!(w.w_rel.dim(), p as usize);
            let full = Subgroup::full(Arc::clone(&w.big_group));
            assert_eq!(restrict(&w.w_rel, &full).unwrap().dim(), p as usize);
        }
    }

    #[test]
    fn wrap_lemma_examples() {
        let r = verify_wrap_lemma(gf(2), &catalog::ses("c2.nonsplit_ses").unwrap()).unwrap();
        assert_eq!(r, WrapLemmaReport { split: false, rel_proj: false, agree: true });
        let r = verify_wrap_lemma(gf(2), &catalog::ses("c2.split_ses").unwrap()).unwrap();
        assert_eq!(r, WrapLemmaReport { split: true, rel_proj: true, agree: true });
        let r = verify_wrap_lemma(gf(3), &catalog::ses("c3.jordan_ses").unwrap()).unwrap();
        assert_eq!(r, WrapLemmaReport { split: false, rel_proj: false, agree: true });
    }

    #[test]
    fn binomial_examples() {
        assert!(verify_binomial_claim(2).unwrap());
        assert_eq!(pascal_row_mod(4, gf(5)), vec![1, 4, 1, 4, 1]);
        assert!(verify_binomial_claim(5).unwrap());
        assert!(verify_binomial_claim(97).unwrap());
        assert!(matches!(verify_binomial_claim(9), Err(Error::NotPrime(9))));
        // Only row p−1 alternates.
        assert_eq!(pascal_row_mod(3, gf(5)), vec![1, 3, 3, 1]);
    }

    #[test]
    fn theta_examples() {
        for p in [2, 3, 7] {
            let r = verify_theta_identity(p).unwrap();
            assert!(r.closed_form_ok && r.final_sum_ok, "p = {p}");
        }
        assert!(verify_theta_identity(1).is_err());
    }

    #[test]
    fn theta_p2_by_hand() {
        // θ_{2,1} − θ_{1,1} = (−1, 1) ≡ (1, 1) mod 2.
        let table = theta_table(gf(2));
        assert_eq!(table.len(), 1);
        assert_eq!(table[0], vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn theta_bruteforce_agrees() {
        for p in [2u32, 3] {
            let (report, solutions) = theta_bruteforce(p, 1 << 20).unwrap();
            assert!(report.closed_form_ok && report.final_sum_ok);
            assert_eq!(solutions, (p as u64).pow(p));
        }
        assert!(matches!(theta_bruteforce(5, 1 << 20), Err(Error::OracleInfeasible { .. })));
    }
}
