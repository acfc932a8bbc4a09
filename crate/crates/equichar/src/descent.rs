//! Untwisting g-twisted Frobenius traces by descent along a cyclic torsor.

use crate::arith::{ArithError, BaseField, GaloisGSet, InertiaData, Morphism};
use crate::compat::{check_compatibility, CompatError, CompatSystem, CompatWitness};
use crate::cyclotomic::{CycloElem, CycloError};
use crate::groups::{FiniteGroup, GroupError, GroupHom};
use crate::sheaves::{pullback, pushforward, EquivariantSheaf, SheafError};
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DescentError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error("sheaf does not live on the descent source")]
    WrongBase,
    #[error("the twisted element does not stabilize the point")]
    NotStabilizing,
}

/// The cyclic-quotient untwisting setup for a group element g and a base
/// extension degree m: a torsor cover of the descended set, with the two
/// morphisms whose pull-push composite performs the untwisting.
#[derive(Clone, Debug)]
pub struct DescentDatum {
    pub m: i64,
    pub g: usize,
    pub n_g: usize,
    /// (points of X) × ℤ/n_g with the free diagonal ℤ/n_g-action
    pub cover: GaloisGSet,
    /// the quotient, carrying the trivial group
    pub target: GaloisGSet,
    /// projection of the cover onto X, twisting the group through g-powers
    pub d: Morphism,
    /// the torsor quotient map
    pub e: Morphism,
    orbit_of: Vec<usize>,
}

/// Build the descent datum: the cover has points (x, i), i mod n_g, with
/// Frobenius (Φ^m, shift) over the degree-m extension of the base, and
/// ℤ/n_g acting diagonally through g. The quotient inherits the induced
/// Frobenius and inertia.
pub fn build_descent(x: &GaloisGSet, m: i64, g: usize) -> Result<DescentDatum, DescentError> {
    if m < 1 {
        return Err(DescentError::Arith(ArithError::ZeroExtensionDegree));
    }
    let n_g = x.group.element_order(g);
    let nx = x.size();
    let idx = |p: usize, i: usize| p * n_g + i;
    // diagonal ℤ/n_g-action: (x, i)·1 = (x·g, i+1)
    let action: Vec<Vec<usize>> = (0..nx * n_g)
        .map(|c| {
            let (p, i) = (c / n_g, c % n_g);
            (0..n_g)
                .map(|s| {
                    let mut q = p;
                    for _ in 0..s {
                        q = x.act(q, g);
                    }
                    idx(q, (i + s) % n_g)
                })
                .collect()
        })
        .collect();
    let frobenius: Vec<usize> = (0..nx * n_g)
        .map(|c| {
            let (p, i) = (c / n_g, c % n_g);
            idx(x.frob(p, m), (i + 1) % n_g)
        })
        .collect();
    let inertia = x.inertia().map(|inert| InertiaData {
        group: inert.group.clone(),
        action: (0..nx * n_g)
            .map(|c| {
                let (p, i) = (c / n_g, c % n_g);
                inert.group.elements().map(|q| idx(x.inertia_act(p, q), i)).collect()
            })
            .collect(),
        frob_twist: inert.group.elements().map(|q| x.twist_pow(q, m)).collect(),
    });
    let cover_base = BaseField::new(x.base.p, x.base.f * m as u32, x.base.kind)?;
    let shift_group = FiniteGroup::cyclic(n_g);
    let cover = GaloisGSet::new(
        shift_group.clone(),
        nx * n_g,
        action,
        frobenius,
        inertia.clone(),
        cover_base,
    )?;
    // quotient by the (free) diagonal action
    let mut orbit_of = vec![usize::MAX; nx * n_g];
    let mut reps = Vec::new();
    for c in 0..nx * n_g {
        if orbit_of[c] != usize::MAX {
            continue;
        }
        let id = reps.len();
        for s in 0..n_g {
            orbit_of[cover.act(c, s)] = id;
        }
        reps.push(c);
    }
    let qn = reps.len();
    let q_frob: Vec<usize> = reps.iter().map(|&c| orbit_of[cover.frob(c, 1)]).collect();
    let q_inertia = inertia.as_ref().map(|inert| InertiaData {
        group: inert.group.clone(),
        action: reps
            .iter()
            .map(|&c| {
                inert
                    .group
                    .elements()
                    .map(|q| orbit_of[cover.inertia_act(c, q)])
                    .collect()
            })
            .collect(),
        frob_twist: inert.frob_twist.clone(),
    });
    let target = GaloisGSet::new(
        FiniteGroup::trivial(),
        qn,
        (0..qn).map(|p| vec![p]).collect(),
        q_frob,
        q_inertia,
        cover_base,
    )?;
    // d = (pr₁, s ↦ g^s)
    let mut pow = x.group.identity();
    let g_powers: Vec<usize> = (0..n_g)
        .map(|_| {
            let cur = pow;
            pow = x.group.mul(pow, g);
            cur
        })
        .collect();
    let i_g = GroupHom::new(shift_group.clone(), x.group.clone(), g_powers)?;
    let d = Morphism::new(
        cover.clone(),
        x.clone(),
        i_g,
        (0..nx * n_g).map(|c| c / n_g).collect(),
        m,
    )?;
    let e = Morphism::new(
        cover.clone(),
        target.clone(),
        GroupHom::new(shift_group, FiniteGroup::trivial(), vec![0; n_g])?,
        orbit_of.clone(),
        1,
    )?;
    Ok(DescentDatum { m, g, n_g, cover, target, d, e, orbit_of })
}

impl DescentDatum {
    /// Target point below the fiber-0 copy of a source point.
    pub fn descended_point(&self, p: usize) -> usize {
        self.orbit_of[p * self.n_g]
    }
}

/// The untwisting functor: restrict to the cover, then descend along the
/// torsor quotient.
pub fn untwist(datum: &DescentDatum, l: &EquivariantSheaf) -> Result<EquivariantSheaf, DescentError> {
    if *l.base() != datum.d.target {
        return Err(DescentError::WrongBase);
    }
    Ok(pushforward(&datum.e, &pullback(&datum.d, l)?)?)
}

fn triple_pow(
    x: &GaloisGSet,
    t: (usize, usize, i64),
    j: i64,
) -> (usize, usize, i64) {
    let step = if j >= 0 { t } else { x.triple_inv(t) };
    let mut acc = (x.group.identity(), x.inertia_group().identity(), 0i64);
    for _ in 0..j.unsigned_abs() {
        acc = x.triple_mul(acc, step);
    }
    acc
}

/// Both sides of the untwisting trace identity at a point: the
/// (g, inertia, degree-m)-twisted trace upstairs against the plain
/// Frobenius trace on the descended object, both raised to the j-th power.
pub fn scholie_check_with(
    datum: &DescentDatum,
    l: &EquivariantSheaf,
    untwisted: &EquivariantSheaf,
    xbar: usize,
    q: usize,
    j: i64,
) -> Result<(CycloElem, CycloElem), DescentError> {
    let x = l.base();
    if !x.stabilizes(xbar, datum.g, q, datum.m) {
        return Err(DescentError::NotStabilizing);
    }
    let tj = triple_pow(x, (datum.g, q, datum.m), j);
    let lhs = l.trace_at(xbar, tj)?;
    let wbar = datum.descended_point(xbar);
    let rhs = untwisted.trace_at(wbar, (datum.target.group.identity(), tj.1, j))?;
    Ok((lhs, rhs))
}

pub fn scholie_check(
    datum: &DescentDatum,
    l: &EquivariantSheaf,
    xbar: usize,
    q: usize,
    j: i64,
) -> Result<(CycloElem, CycloElem), DescentError> {
    let untwisted = untwist(datum, l)?;
    scholie_check_with(datum, l, &untwisted, xbar, q, j)
}

/// Verdict of the untwisting compatibility criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentVerdict {
    pub compatible: bool,
    pub witness: Option<(i64, usize, CompatWitness)>,
}

/// A family is compatible exactly when every untwisted family is: check
/// all (m, g) with m up to the window-forced bound and report the first
/// failing pair with its inner witness.
pub fn descent_criterion(s: &CompatSystem) -> Result<DescentVerdict, DescentError> {
    let base = s.base()?;
    let max_dim: usize = s
        .objects
        .iter()
        .map(|v| v.points().iter().enumerate().map(|(i, _)| v.dim_at(i)).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let window = (2 * max_dim).max(1) as i64;
    let lcm_orders = base
        .group
        .elements()
        .map(|g| base.group.element_order(g) as i64)
        .fold(1i64, |a, b| a.lcm(&b));
    let m_bound = lcm_orders * window;
    for m in 1..=m_bound {
        for g in base.group.elements() {
            let datum = build_descent(&base, m, g)?;
            let mut objects = Vec::with_capacity(s.objects.len());
            for v in &s.objects {
                let plus = v
                    .plus
                    .iter()
                    .map(|sh| untwist(&datum, sh))
                    .collect::<Result<Vec<_>, _>>()?;
                let minus = v
                    .minus
                    .iter()
                    .map(|sh| untwist(&datum, sh))
                    .collect::<Result<Vec<_>, _>>()?;
                objects.push(crate::sheaves::VirtualClass::new(
                    datum.target.clone(),
                    v.conductor,
                    plus,
                    minus,
                )?);
            }
            let sub = CompatSystem::new(s.sigmas.clone(), objects)?;
            let verdict = check_compatibility(&sub)?;
            if !verdict.compatible {
                return Ok(DescentVerdict {
                    compatible: false,
                    witness: verdict.witness.map(|w| (m, g, w)),
                });
            }
        }
    }
    Ok(DescentVerdict { compatible: true, witness: None })
}
