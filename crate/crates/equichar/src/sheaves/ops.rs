//! The operations on sheaves: pullback, pushforward, tensor, dual,
//! twists, adjunctions, Mackey decomposition, inertia invariants, and
//! dimension-zero nearby cycles.

use super::rep::WeilRep;
use super::sheaf::{EquivariantSheaf, VirtualClass};
use super::SheafError;
use crate::arith::{
    point_hom, points_of, BaseField, GaloisGSet, InertiaData, Morphism, PointData, SplitHom,
    WElem, WeilEmbedding, WeilLevelGroup,
};
use crate::cyclotomic::CycloMatrix;
use crate::groups::{double_cosets, FiniteGroup, GroupHom};

/// How a coinduced representation was assembled: the invariant-subspace
/// basis and the deterministic coset transversal of the image.
#[derive(Clone, Debug)]
pub struct CoinductionData {
    /// basis of the kernel-invariants inside the source stalk (dim × d0)
    pub basis: CycloMatrix,
    pub sub_dim: usize,
    /// left-coset representatives (κ, b) of the image, b in 0..r_frob
    pub cosets: Vec<WElem>,
    pub identity_coset: usize,
}

/// Coinduce a representation along a split homomorphism into `wy`:
/// invariants under the kernel, then induction along the deterministic
/// coset transversal of the image, with Frobenius blocks determined by
/// how the image is permuted.
pub fn coinduce(
    phi: &SplitHom,
    wy: &WeilLevelGroup,
    rep: &WeilRep,
) -> Result<(WeilRep, CoinductionData), SheafError> {
    let wx = &rep.group;
    if !phi.validate(wx, wy) {
        return Err(SheafError::HomNotValid);
    }
    let r_frob = phi.w0_image.1;
    if r_frob < 1 {
        return Err(SheafError::HomNotValid);
    }
    let ky = &wy.kernel;
    // kernel of phi inside the source kernel
    let kernel: Vec<usize> = wx
        .kernel
        .elements()
        .filter(|&k| phi.kernel_map[k] == ky.identity())
        .collect();
    // image of the source kernel, a subgroup of the target kernel
    let mut image: Vec<usize> = phi.kernel_map.clone();
    image.sort_unstable();
    image.dedup();
    // least source-kernel preimage of each image element
    let pre_of = |a: usize| -> usize {
        wx.kernel
            .elements()
            .find(|&k| phi.kernel_map[k] == a)
            .expect("element of the image")
    };
    // K-part of phi(w0)^t
    let c_part = |t: i64| -> usize { wy.pow(phi.w0_image, t).0 };
    let in_image = |e: WElem| -> Option<WElem> {
        if e.1.rem_euclid(r_frob) != 0 {
            return None;
        }
        let t = e.1 / r_frob;
        let a = ky.mul(e.0, ky.inv(c_part(t)));
        if image.binary_search(&a).is_ok() {
            Some((pre_of(a), t))
        } else {
            None
        }
    };
    // invariants under the kernel
    let (basis, inv_rep) = rep.invariants(&kernel)?;
    let d0 = inv_rep.dim;
    let _ = basis;
    // left-coset representatives of the image: for each b in 0..r_frob,
    // least representatives of K_y / theta^b(image)
    let mut cosets: Vec<WElem> = Vec::new();
    for b in 0..r_frob {
        let mut marked = vec![false; ky.order()];
        for kappa in ky.elements() {
            if marked[kappa] {
                continue;
            }
            cosets.push((kappa, b));
            for &a in &image {
                marked[ky.mul(kappa, wy.theta_pow(a, b))] = true;
            }
        }
    }
    let resolve = |z: WElem| -> (usize, WElem) {
        let b = z.1.rem_euclid(r_frob);
        for (idx, &s) in cosets.iter().enumerate() {
            if s.1 != b {
                continue;
            }
            let residue = wy.mul(wy.inv(s), z);
            if let Some(u) = in_image(residue) {
                return (idx, u);
            }
        }
        unreachable!("coset representatives partition the group")
    };
    let identity_coset = resolve(wy.identity()).0;
    let dim = cosets.len() * d0;
    let block_matrix = |w: WElem| -> Result<CycloMatrix, SheafError> {
        let mut m = CycloMatrix::zero(rep.conductor, dim, dim)?;
        for (col, &s) in cosets.iter().enumerate() {
            let (row, u) = resolve(wy.mul(w, s));
            let block = inv_rep.value(u)?;
            for i in 0..d0 {
                for j in 0..d0 {
                    m.set(row * d0 + i, col * d0 + j, block.get(i, j).clone());
                }
            }
        }
        Ok(m)
    };
    let rho = ky
        .elements()
        .map(|k| block_matrix((k, 0)))
        .collect::<Result<Vec<_>, _>>()?;
    let frob = block_matrix((ky.identity(), 1))?;
    let out = WeilRep::new(wy.clone(), rep.conductor, rho, frob)?;
    let basis = rep.invariants(&kernel)?.0;
    Ok((out, CoinductionData { basis, sub_dim: d0, cosets, identity_coset }))
}

fn locate(points: &[PointData], p: usize) -> usize {
    points
        .iter()
        .position(|pd| pd.points.binary_search(&p).is_ok())
        .expect("every geometric point lies in a closed point")
}

/// The isomorphism W(p) → W(b) induced by a path t with b·t = p,
/// in split coordinates on both sides.
fn transport_hom(
    x: &GaloisGSet,
    t: (usize, usize, i64),
    wp: &WeilLevelGroup,
    ep: &WeilEmbedding,
    wb: &WeilLevelGroup,
    eb: &WeilEmbedding,
) -> Result<SplitHom, SheafError> {
    let mut kernel_map = Vec::with_capacity(ep.kernel_pairs.len());
    for &(g, q) in &ep.kernel_pairs {
        let s = x.transport_stab(t, (g, q, 0));
        let (k, j) = eb
            .split_of(x, wb, s)
            .ok_or(SheafError::NotInStabilizer)?;
        debug_assert_eq!(j, 0);
        kernel_map.push(k);
    }
    let w0p = (ep.w0_pair.0, ep.w0_pair.1, wp.frob_step);
    let w0_image = eb
        .split_of(x, wb, x.transport_stab(t, w0p))
        .ok_or(SheafError::NotInStabilizer)?;
    Ok(SplitHom { kernel_map, w0_image })
}

/// The homomorphism from the stabilizer of a source basepoint into the
/// stabilizer of the *basepoint* of the target closed point below it
/// (the raw point homomorphism composed with path transport).
pub(super) fn hom_to_target_base(
    f: &Morphism,
    xbar: usize,
    wx: &WeilLevelGroup,
    ex: &WeilEmbedding,
    target_points: &[PointData],
) -> Result<(usize, SplitHom), SheafError> {
    let ybar = f.apply(xbar);
    let iy = locate(target_points, ybar);
    let pd = &target_points[iy];
    let (wimg, eimg) = crate::arith::weil_group_at(&f.target, ybar)?;
    let phi1 = point_hom(f, xbar, wx, ex, &wimg, &eimg)?;
    let t = f
        .target
        .connect_path(pd.basepoint, ybar)
        .expect("basepoint lies in the same closed point");
    let psi = transport_hom(&f.target, t, &wimg, &eimg, &pd.group, &pd.embedding)?;
    let phi = phi1.then(&psi, &pd.group);
    if !phi.validate(wx, &pd.group) {
        return Err(SheafError::HomNotValid);
    }
    Ok((iy, phi))
}

/// Restriction of a sheaf along a morphism: each source stalk is the
/// target stalk composed with the point homomorphism.
pub fn pullback(f: &Morphism, l: &EquivariantSheaf) -> Result<EquivariantSheaf, SheafError> {
    if *l.base() != f.target {
        return Err(SheafError::BaseSetMismatch);
    }
    let src_points = points_of(&f.source);
    let mut stalks = Vec::with_capacity(src_points.len());
    for pd in &src_points {
        let (iy, phi) =
            hom_to_target_base(f, pd.basepoint, &pd.group, &pd.embedding, l.points())?;
        let st = l.stalk(iy);
        let wy = &st.group;
        let rho = pd
            .group
            .kernel
            .elements()
            .map(|k| st.value(phi.apply(wy, (k, 0))))
            .collect::<Result<Vec<_>, _>>()?;
        let frob = st.value(phi.w0_image)?;
        stalks.push(WeilRep::new(pd.group.clone(), l.conductor(), rho, frob)?);
    }
    EquivariantSheaf::new(f.source.clone(), l.conductor(), stalks)
}

/// Bookkeeping for one pushforward stalk: which source closed points
/// contribute, through which homomorphism, at which block offset.
#[derive(Clone, Debug)]
pub struct PushforwardData {
    pub summands: Vec<(usize, SplitHom, CoinductionData, usize)>,
}

/// Pushforward: the stalk over each target closed point is the direct sum,
/// over source closed points above it, of the coinduction of the source
/// stalk along the point homomorphism.
pub fn pushforward_with_data(
    f: &Morphism,
    l: &EquivariantSheaf,
) -> Result<(EquivariantSheaf, Vec<PushforwardData>), SheafError> {
    if *l.base() != f.source {
        return Err(SheafError::BaseSetMismatch);
    }
    let tgt_points = points_of(&f.target);
    // target closed point of each source closed point
    let mut plan: Vec<Vec<usize>> = vec![Vec::new(); tgt_points.len()];
    for (ix, pd) in l.points().iter().enumerate() {
        plan[locate(&tgt_points, f.apply(pd.basepoint))].push(ix);
    }
    let mut stalks = Vec::with_capacity(tgt_points.len());
    let mut data = Vec::with_capacity(tgt_points.len());
    for (iy, pdy) in tgt_points.iter().enumerate() {
        let mut acc = WeilRep::zero(pdy.group.clone(), l.conductor())?;
        let mut summands = Vec::new();
        for &ix in &plan[iy] {
            let pdx = &l.points()[ix];
            let (iy2, phi) =
                hom_to_target_base(f, pdx.basepoint, &pdx.group, &pdx.embedding, &tgt_points)?;
            debug_assert_eq!(iy2, iy);
            let (rep, cd) = coinduce(&phi, &pdy.group, l.stalk(ix))?;
            let offset = acc.dim;
            acc = acc.direct_sum(&rep)?;
            summands.push((ix, phi, cd, offset));
        }
        stalks.push(acc);
        data.push(PushforwardData { summands });
    }
    let sheaf = EquivariantSheaf::new(f.target.clone(), l.conductor(), stalks)?;
    Ok((sheaf, data))
}

pub fn pushforward(f: &Morphism, l: &EquivariantSheaf) -> Result<EquivariantSheaf, SheafError> {
    Ok(pushforward_with_data(f, l)?.0)
}

/// Extension by zero along a clopen inclusion (injective on points, with
/// an isomorphism of groups): the pushforward, which leaves image stalks
/// unchanged and puts zero elsewhere.
pub fn extend_by_zero(
    f: &Morphism,
    l: &EquivariantSheaf,
) -> Result<EquivariantSheaf, SheafError> {
    let mut seen = vec![false; f.target.size()];
    for p in 0..f.source.size() {
        let v = f.apply(p);
        if seen[v] {
            return Err(SheafError::NotClopen);
        }
        seen[v] = true;
    }
    if !(f.alpha.is_injective() && f.alpha.is_surjective()) || f.frob_degree != 1 {
        return Err(SheafError::NotClopen);
    }
    pushforward(f, l)
}

pub fn tensor(
    l: &EquivariantSheaf,
    m: &EquivariantSheaf,
) -> Result<EquivariantSheaf, SheafError> {
    if l.base() != m.base() {
        return Err(SheafError::BaseSetMismatch);
    }
    let stalks = l
        .stalks()
        .iter()
        .zip(m.stalks())
        .map(|(a, b)| a.tensor(b))
        .collect::<Result<Vec<_>, _>>()?;
    EquivariantSheaf::new(l.base().clone(), l.conductor(), stalks)
}

pub fn dual(l: &EquivariantSheaf) -> Result<EquivariantSheaf, SheafError> {
    l.map_stalks(|s| s.dual())
}

/// Internal hom at dimension zero: dual(L) ⊗ M.
pub fn internal_hom(
    l: &EquivariantSheaf,
    m: &EquivariantSheaf,
) -> Result<EquivariantSheaf, SheafError> {
    tensor(&dual(l)?, m)
}

pub fn tate_twist(l: &EquivariantSheaf, n: i64) -> Result<EquivariantSheaf, SheafError> {
    l.map_stalks(|s| s.tate_twist(n))
}

/// Invariants and coinvariants under a theta-stable normal subgroup of the
/// kernel, with the canonical map between them (an isomorphism in
/// characteristic zero).
pub fn invariants_coinvariants(
    rep: &WeilRep,
    sub: &[usize],
) -> Result<(WeilRep, WeilRep, CycloMatrix), SheafError> {
    let d = rep.dim;
    let n = rep.conductor;
    if d == 0 {
        return Ok((rep.clone(), rep.clone(), CycloMatrix::zero(n, 0, 0)?));
    }
    let (inv_basis, inv) = rep.invariants(sub)?;
    // span of the (rho(n) - 1)-images
    let id = CycloMatrix::identity(n, d)?;
    let mut stacked = CycloMatrix::zero(n, d, 0)?;
    for &s in sub {
        stacked = join_columns(&stacked, &rep.rho(s).sub(&id)?)?;
    }
    let w = stacked.column_space_basis()?;
    let c = w.cols();
    // complete to a basis of the whole space with standard vectors
    let mut full = w.clone();
    for i in 0..d {
        if full.cols() == d {
            break;
        }
        let mut e = CycloMatrix::zero(n, d, 1)?;
        e.set(i, 0, crate::cyclotomic::CycloElem::one(n)?);
        let cand = join_columns(&full, &e)?;
        if cand.rank()? == cand.cols() {
            full = cand;
        }
    }
    let full_inv = full.inverse()?;
    let quotient_block = |op: &CycloMatrix| -> Result<CycloMatrix, SheafError> {
        let t = full_inv.mul(&op.mul(&full)?)?;
        let mut out = CycloMatrix::zero(n, d - c, d - c)?;
        for i in 0..d - c {
            for j in 0..d - c {
                out.set(i, j, t.get(c + i, c + j).clone());
            }
        }
        Ok(out)
    };
    let rho = rep
        .group
        .kernel
        .elements()
        .map(|k| quotient_block(rep.rho(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let frob = quotient_block(rep.frob())?;
    let coinv = WeilRep::new(rep.group.clone(), n, rho, frob)?;
    // canonical map: invariant vectors read in quotient coordinates
    let coords = full_inv.mul(&inv_basis)?;
    let mut canonical = CycloMatrix::zero(n, d - c, inv.dim)?;
    for i in 0..d - c {
        for j in 0..inv.dim {
            canonical.set(i, j, coords.get(c + i, j).clone());
        }
    }
    Ok((inv, coinv, canonical))
}

fn join_columns(a: &CycloMatrix, b: &CycloMatrix) -> Result<CycloMatrix, SheafError> {
    let mut out = CycloMatrix::zero(a.conductor(), a.rows(), a.cols() + b.cols())?;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).clone());
        }
        for j in 0..b.cols() {
            out.set(i, a.cols() + j, b.get(i, j).clone());
        }
    }
    Ok(out)
}

/// The K-group expression computing inertia cohomology on a local base:
/// for V = [F] − [G], returns
/// [F^{K_I}] − [F^{K_I}(−1)] − [G^{K_I}] + [G^{K_I}(−1)].
pub fn inertia_invariants_class(v: &VirtualClass) -> Result<VirtualClass, SheafError> {
    if v.base.base.kind != crate::arith::FieldKind::Local {
        return Err(SheafError::LocalBaseRequired);
    }
    let invariants_sheaf = |s: &EquivariantSheaf| -> Result<EquivariantSheaf, SheafError> {
        s.map_stalks(|st| {
            let marker = st.group.inertia.clone();
            Ok(st.invariants(&marker)?.1)
        })
    };
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for f in &v.plus {
        let fi = invariants_sheaf(f)?;
        minus.push(tate_twist(&fi, -1)?);
        plus.push(fi);
    }
    for g in &v.minus {
        let gi = invariants_sheaf(g)?;
        plus.push(tate_twist(&gi, -1)?);
        minus.push(gi);
    }
    VirtualClass::new(v.base.clone(), v.conductor, plus, minus)
}

/// Dimension-zero nearby cycles: coinduce a representation of a
/// finite-index subgroup (the total stabilizer of a point finite over the
/// base) to the intermediate subgroup generated by its image and the full
/// inertia marker, then relabel the result over the unramified extension:
/// the residue degree is multiplied by the inclusion's Frobenius
/// multiplier and the Frobenius step is kept.
pub fn nearby_cycles_point(
    w1: &WeilLevelGroup,
    incl: &SplitHom,
    rep: &WeilRep,
) -> Result<(WeilLevelGroup, WeilRep), SheafError> {
    let w3 = rep.group.clone();
    if !incl.validate(&w3, w1) || !incl.is_injective_on_kernel() {
        return Err(SheafError::NotSubgroupInclusion);
    }
    let u = incl.w0_image.1;
    if u < 1 {
        return Err(SheafError::NotSubgroupInclusion);
    }
    // subgroup of the target kernel generated by the image and the inertia
    let mut gens: Vec<usize> = incl.kernel_map.clone();
    gens.extend(w1.inertia.iter().copied());
    let elems = w1.kernel.subgroup_generated(&gens);
    let pos = |k: usize| -> Result<usize, SheafError> {
        elems.binary_search(&k).map_err(|_| SheafError::NotSubgroupInclusion)
    };
    let m = elems.len();
    let mut table = vec![vec![0usize; m]; m];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            table[i][j] = pos(w1.kernel.mul(a, b))?;
        }
    }
    let k2 = FiniteGroup::from_table(table).map_err(SheafError::Group)?;
    // theta: conjugation by the image of the subgroup's Frobenius lift
    let c = incl.w0_image;
    let theta2 = elems
        .iter()
        .map(|&k| {
            let conj = w1.mul(w1.mul(c, (k, 0)), w1.inv(c));
            debug_assert_eq!(conj.1, 0);
            pos(conj.0)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inertia2 = w1
        .inertia
        .iter()
        .map(|&k| pos(k))
        .collect::<Result<Vec<_>, _>>()?;
    let base2 = BaseField::new(
        w1.base.p,
        w1.base.f * u as u32,
        w1.base.kind,
    )
    .map_err(SheafError::Arith)?;
    let w2 = WeilLevelGroup::new(k2, theta2, w1.frob_step, inertia2, base2)
        .map_err(SheafError::Arith)?;
    let phi2 = SplitHom {
        kernel_map: incl
            .kernel_map
            .iter()
            .map(|&k| pos(k))
            .collect::<Result<Vec<_>, _>>()?,
        w0_image: (w2.kernel.identity(), 1),
    };
    let (out, _) = coinduce(&phi2, &w2, rep)?;
    Ok((w2, out))
}

/// Base change of a shriek-pushforward along another morphism with the
/// same target decomposes over double cosets of the two image subgroups:
/// returns the pulled-back pushforward and the per-coset summands built
/// from the fiber-product squares. The caller compares them as classes.
pub fn mackey_decompose(
    f: &Morphism,
    g: &Morphism,
    l: &EquivariantSheaf,
) -> Result<(VirtualClass, Vec<EquivariantSheaf>), SheafError> {
    if f.target != g.target {
        return Err(SheafError::TargetMismatch);
    }
    if f.frob_degree != 1 || g.frob_degree != 1 {
        return Err(SheafError::TargetMismatch);
    }
    let tgt = &f.target;
    let h = &tgt.group;
    let im_alpha = f.alpha.image();
    let im_beta = g.alpha.image();
    let reps = double_cosets(h, &im_beta, &im_alpha).map_err(SheafError::Group)?;
    let lhs = pullback(g, &pushforward(f, l)?)?;
    let mut summands = Vec::new();
    for &(r, _) in &reps {
        summands.push(mackey_summand(f, g, l, r)?);
    }
    Ok((VirtualClass::from_sheaf(lhs), summands))
}

/// One Mackey summand: the fiber product of f with (translation by r after
/// g), pulled back to it and pushed to the source of g.
pub fn mackey_summand(
    f: &Morphism,
    g: &Morphism,
    l: &EquivariantSheaf,
    r: usize,
) -> Result<EquivariantSheaf, SheafError> {
    let tgt = &f.target;
    let h = &tgt.group;
    let gg = &f.source.group;
    let hh = &g.source.group;
    // fiber group: pairs with alpha(g1) = r^{-1}·beta(h1)·r
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g1 in gg.elements() {
        for h1 in hh.elements() {
            if f.alpha.apply(g1) == h.conjugate(g.alpha.apply(h1), h.inv(r)) {
                pairs.push((g1, h1));
            }
        }
    }
    let pair_pos = |p: (usize, usize)| pairs.binary_search(&p).expect("subgroup closure");
    let n = pairs.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, &(a1, a2)) in pairs.iter().enumerate() {
        for (j, &(b1, b2)) in pairs.iter().enumerate() {
            table[i][j] = pair_pos((gg.mul(a1, b1), hh.mul(a2, b2)));
        }
    }
    let pair_group = FiniteGroup::from_table(table).map_err(SheafError::Group)?;
    // fiber points: (x, y') with f(x) = g(y')·r
    let mut points: Vec<(usize, usize)> = Vec::new();
    for x in 0..f.source.size() {
        for yp in 0..g.source.size() {
            if f.apply(x) == tgt.act(g.apply(yp), r) {
                points.push((x, yp));
            }
        }
    }
    let pt_pos = |p: (usize, usize)| points.binary_search(&p).expect("componentwise action");
    let action: Vec<Vec<usize>> = points
        .iter()
        .map(|&(x, yp)| {
            pairs
                .iter()
                .map(|&(g1, h1)| pt_pos((f.source.act(x, g1), g.source.act(yp, h1))))
                .collect()
        })
        .collect();
    let frobenius: Vec<usize> = points
        .iter()
        .map(|&(x, yp)| pt_pos((f.source.frob(x, 1), g.source.frob(yp, 1))))
        .collect();
    let inertia = match (f.source.inertia(), g.source.inertia()) {
        (None, None) => None,
        (Some(a), Some(b)) => {
            if a.group != b.group || a.frob_twist != b.frob_twist {
                return Err(SheafError::InertiaMismatch);
            }
            let act: Vec<Vec<usize>> = points
                .iter()
                .map(|&(x, yp)| {
                    a.group
                        .elements()
                        .map(|q| pt_pos((f.source.inertia_act(x, q), g.source.inertia_act(yp, q))))
                        .collect()
                })
                .collect();
            Some(InertiaData {
                group: a.group.clone(),
                action: act,
                frob_twist: a.frob_twist.clone(),
            })
        }
        _ => return Err(SheafError::InertiaMismatch),
    };
    let fiber = GaloisGSet::new(
        pair_group.clone(),
        points.len(),
        action,
        frobenius,
        inertia,
        tgt.base,
    )
    .map_err(SheafError::Arith)?;
    let alpha1 = GroupHom::new(
        pair_group.clone(),
        gg.clone(),
        pairs.iter().map(|&(g1, _)| g1).collect(),
    )
    .map_err(SheafError::Group)?;
    let alpha2 = GroupHom::new(
        pair_group,
        hh.clone(),
        pairs.iter().map(|&(_, h1)| h1).collect(),
    )
    .map_err(SheafError::Group)?;
    let pr1 = Morphism::new(
        fiber.clone(),
        f.source.clone(),
        alpha1,
        points.iter().map(|&(x, _)| x).collect(),
        1,
    )
    .map_err(SheafError::Arith)?;
    let pr2 = Morphism::new(
        fiber,
        g.source.clone(),
        alpha2,
        points.iter().map(|&(_, yp)| yp).collect(),
        1,
    )
    .map_err(SheafError::Arith)?;
    pushforward(&pr2, &pullback(&pr1, l)?)
}

/// Result of checking the adjunction between pullback and pushforward for
/// a quotient morphism (surjective group map, fibers = kernel orbits).
#[derive(Clone, Debug, PartialEq)]
pub struct AdjunctionReport {
    pub quotient_ok: bool,
    pub free_action: bool,
    pub unit_invertible: bool,
    pub counit_invertible: bool,
    pub counit_equivariant: bool,
}

/// Check the unit K → pushforward(pullback K) and the counit
/// pullback(pushforward L) → L stalkwise, reporting invertibility.
pub fn adjunction_check(
    f: &Morphism,
    k: &EquivariantSheaf,
    l: &EquivariantSheaf,
) -> Result<AdjunctionReport, SheafError> {
    let mut report = AdjunctionReport {
        quotient_ok: false,
        free_action: false,
        unit_invertible: false,
        counit_invertible: false,
        counit_equivariant: false,
    };
    // hypotheses: surjective group map, surjective on points, fibers are
    // orbits of the kernel
    let kernel = f.alpha.kernel();
    let mut hit = vec![false; f.target.size()];
    for p in 0..f.source.size() {
        hit[f.apply(p)] = true;
    }
    let quotient_ok = f.alpha.is_surjective()
        && f.frob_degree == 1
        && hit.iter().all(|&b| b)
        && (0..f.source.size()).all(|p| {
            (0..f.source.size()).all(|p2| {
                let same_fiber = f.apply(p) == f.apply(p2);
                let same_orbit = kernel.iter().any(|&nn| f.source.act(p, nn) == p2);
                same_fiber == same_orbit
            })
        });
    report.quotient_ok = quotient_ok;
    if !quotient_ok {
        return Ok(report);
    }
    report.free_action = (0..f.source.size())
        .all(|p| kernel.iter().all(|&nn| nn == f.source.group.identity() || f.source.act(p, nn) != p));
    // unit: in these coordinates the canonical map is the identity, so
    // invertibility is exact stalkwise equality
    let pp = pushforward(f, &pullback(f, k)?)?;
    report.unit_invertible = pp
        .stalks()
        .iter()
        .zip(k.stalks())
        .all(|(a, b)| a == b);
    // counit: project each pulled-back pushforward stalk onto the
    // identity-coset block of its own summand
    let (pf, data) = pushforward_with_data(f, l)?;
    let pb = pullback(f, &pf)?;
    let tgt_points = points_of(&f.target);
    let mut all_square = true;
    let mut all_equivariant = true;
    for (ix, pdx) in l.points().iter().enumerate() {
        let iy = locate(&tgt_points, f.apply(pdx.basepoint));
        let entry = data[iy]
            .summands
            .iter()
            .find(|(sx, _, _, _)| *sx == ix)
            .expect("source point contributes to its image");
        let (_, _, cd, offset) = entry;
        let dl = l.stalk(ix).dim;
        let dpb = pb.stalk(ix).dim;
        let n = l.conductor();
        let mut c = CycloMatrix::zero(n, dl, dpb)?;
        let col0 = offset + cd.identity_coset * cd.sub_dim;
        for i in 0..dl {
            for j in 0..cd.sub_dim {
                c.set(i, col0 + j, cd.basis.get(i, j).clone());
            }
        }
        // equivariance of the counit in these coordinates
        let src_rep = l.stalk(ix);
        let pb_rep = pb.stalk(ix);
        for kx in pdx.group.kernel.elements() {
            if c.mul(pb_rep.rho(kx))? != src_rep.rho(kx).mul(&c)? {
                all_equivariant = false;
            }
        }
        if c.mul(pb_rep.frob())? != src_rep.frob().mul(&c)? {
            all_equivariant = false;
        }
        if dl != dpb || (dl > 0 && c.det()?.is_zero()) {
            all_square = false;
        }
    }
    report.counit_equivariant = all_equivariant;
    report.counit_invertible = all_square && all_equivariant;
    Ok(report)
}
