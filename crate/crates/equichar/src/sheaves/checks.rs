//! Independent trace enumerations used to cross-check the matrix
//! constructions of coinduction and pushforward.

use super::ops::hom_to_target_base;
use super::sheaf::EquivariantSheaf;
use super::SheafError;
use crate::arith::{points_of, Morphism, WElem, WeilLevelGroup};
use crate::cyclotomic::{CycloElem, CycloMatrix, Rat};
use crate::groups::GroupHom;
use num_bigint::BigInt;

/// Coinduction along a plain finite-group homomorphism, with no Frobenius
/// in sight: kernel invariants, then induction over the left cosets of
/// the image. Returns one matrix per target-group element, plus the
/// invariant dimension.
pub fn coinduced_rep_plain(
    alpha: &GroupHom,
    rho: &[CycloMatrix],
) -> Result<(Vec<CycloMatrix>, usize), SheafError> {
    let g1 = &alpha.source;
    let g2 = &alpha.target;
    if rho.len() != g1.order() || rho.is_empty() {
        return Err(SheafError::RepDimMismatch);
    }
    let n = rho[0].conductor();
    let d = rho[0].rows();
    let kernel = alpha.kernel();
    // averaging projector over the kernel
    let mut proj = CycloMatrix::zero(n, d, d)?;
    for &t in &kernel {
        proj = proj.add(&rho[t])?;
    }
    let inv_order = Rat::new(BigInt::from(1), BigInt::from(kernel.len() as i64));
    proj = proj.scale_rat(&inv_order);
    let basis = proj.column_space_basis()?;
    let linv = super::rep::left_inverse(&basis)?;
    let d0 = basis.cols();
    let image = alpha.image();
    // left-coset representatives of the image in the target
    let mut cosets: Vec<usize> = Vec::new();
    let mut marked = vec![false; g2.order()];
    for s in g2.elements() {
        if marked[s] {
            continue;
        }
        cosets.push(s);
        for &i in &image {
            marked[g2.mul(s, i)] = true;
        }
    }
    let pre_of = |i: usize| g1.elements().find(|&t| alpha.apply(t) == i).unwrap();
    let resolve = |z: usize| -> (usize, usize) {
        for (idx, &s) in cosets.iter().enumerate() {
            let residue = g2.mul(g2.inv(s), z);
            if image.binary_search(&residue).is_ok() {
                return (idx, pre_of(residue));
            }
        }
        unreachable!("coset representatives partition the group")
    };
    let dim = cosets.len() * d0;
    let mut out = Vec::with_capacity(g2.order());
    for g in g2.elements() {
        let mut m = CycloMatrix::zero(n, dim, dim)?;
        for (col, &s) in cosets.iter().enumerate() {
            let (row, u) = resolve(g2.mul(g, s));
            let block = super::rep::restrict_operator(&rho[u], &basis, &linv)?;
            for i in 0..d0 {
                for j in 0..d0 {
                    m.set(row * d0 + i, col * d0 + j, block.get(i, j).clone());
                }
            }
        }
        out.push(m);
    }
    Ok((out, d0))
}

/// Both sides of the kernel-weighted trace identity for plain
/// coinduction: the left side is #kernel times the trace on the
/// constructed module, the right side the raw double sum over coset
/// representatives and preimages of the conjugated element.
pub fn coinduced_trace_check(
    alpha: &GroupHom,
    rho: &[CycloMatrix],
    g: usize,
) -> Result<(CycloElem, CycloElem), SheafError> {
    let (coind, _) = coinduced_rep_plain(alpha, rho)?;
    let g1 = &alpha.source;
    let g2 = &alpha.target;
    let n = rho[0].conductor();
    let kernel_size = alpha.kernel().len() as i64;
    let lhs = coind[g]
        .trace()?
        .scale(&Rat::new(BigInt::from(kernel_size), BigInt::from(1)));
    let image = alpha.image();
    let mut rhs = CycloElem::zero(n)?;
    let mut marked = vec![false; g2.order()];
    for s in g2.elements() {
        if marked[s] {
            continue;
        }
        for &i in &image {
            marked[g2.mul(s, i)] = true;
        }
        let conj = g2.mul(g2.inv(s), g2.mul(g, s));
        for t in g1.elements() {
            if alpha.apply(t) == conj {
                rhs = rhs.checked_add(&rho[t].trace()?)?;
            }
        }
    }
    Ok((lhs, rhs))
}

fn w_conjugate(w: &WeilLevelGroup, s: WElem, h: WElem) -> WElem {
    w.mul(w.inv(s), w.mul(h, s))
}

/// The raw coset-and-preimage enumeration of the trace of an element on
/// a pushforward stalk: for each source closed point above the target
/// point, average over its kernel the traces at preimages of the
/// conjugates of the element by coset representatives of the image.
pub fn pushforward_stalk_trace(
    f: &Morphism,
    l: &EquivariantSheaf,
    iy: usize,
    h: WElem,
) -> Result<CycloElem, SheafError> {
    if *l.base() != f.source {
        return Err(SheafError::BaseSetMismatch);
    }
    let tgt_points = points_of(&f.target);
    let pdy = &tgt_points[iy];
    let wy = &pdy.group;
    let n = l.conductor();
    let mut total = CycloElem::zero(n)?;
    for (ix, pdx) in l.points().iter().enumerate() {
        let (jy, phi) =
            hom_to_target_base(f, pdx.basepoint, &pdx.group, &pdx.embedding, &tgt_points)?;
        if jy != iy {
            continue;
        }
        let wx = &pdx.group;
        let r_frob = phi.w0_image.1;
        let kernel_size = phi
            .kernel_map
            .iter()
            .filter(|&&k| k == wy.kernel.identity())
            .count() as i64;
        let mut image: Vec<usize> = phi.kernel_map.clone();
        image.sort_unstable();
        image.dedup();
        let mut point_sum = CycloElem::zero(n)?;
        for b in 0..r_frob {
            let mut marked = vec![false; wy.kernel.order()];
            for kappa in wy.kernel.elements() {
                if marked[kappa] {
                    continue;
                }
                for &a in &image {
                    marked[wy.kernel.mul(kappa, wy.theta_pow(a, b))] = true;
                }
                let conj = w_conjugate(wy, (kappa, b), h);
                if conj.1.rem_euclid(r_frob) != 0 {
                    continue;
                }
                let jt = conj.1 / r_frob;
                for k in wx.kernel.elements() {
                    if phi.apply(wy, (k, jt)) == conj {
                        point_sum = point_sum.checked_add(&l.stalk(ix).trace((k, jt))?)?;
                    }
                }
            }
        }
        total = total.checked_add(
            &point_sum.scale(&Rat::new(BigInt::from(1), BigInt::from(kernel_size))),
        )?;
    }
    Ok(total)
}
