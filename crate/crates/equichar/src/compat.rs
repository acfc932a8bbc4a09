//! Compatibility of trace systems across embeddings, with truncated
//! criteria and closure-under-operations harnesses.

use crate::arith::{ArithError, FieldKind, GaloisGSet, Morphism, SplitHom, WeilLevelGroup};
use crate::cyclotomic::{CycloElem, CycloError, FieldAut};
use crate::groups::GroupError;
use crate::sheaves::{
    dual, extend_by_zero, inertia_invariants_class, nearby_cycles_point, pullback, pushforward,
    tate_twist, tensor, EquivariantSheaf, SheafError, VirtualClass, WeilRep,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CompatError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error("system is empty")]
    EmptySystem,
    #[error("objects do not share a base set and conductor")]
    BaseMismatch,
    #[error("index sets of embeddings and objects differ")]
    IndexMismatch,
    #[error("the local check requires a local base")]
    LocalBaseRequired,
    #[error("stalk group does not match the inclusion source")]
    StalkGroupMismatch,
    #[error(transparent)]
    Descent(#[from] Box<crate::descent::DescentError>),
}

/// A family of virtual classes on one base, each tagged with the field
/// embedding through which its traces are read.
#[derive(Clone, Debug)]
pub struct CompatSystem {
    pub sigmas: Vec<FieldAut>,
    pub objects: Vec<VirtualClass>,
}

impl CompatSystem {
    pub fn new(sigmas: Vec<FieldAut>, objects: Vec<VirtualClass>) -> Result<CompatSystem, CompatError> {
        if sigmas.len() != objects.len() {
            return Err(CompatError::IndexMismatch);
        }
        if objects.is_empty() {
            return Err(CompatError::EmptySystem);
        }
        let first = &objects[0];
        for v in &objects {
            if v.base != first.base || v.conductor != first.conductor {
                return Err(CompatError::BaseMismatch);
            }
        }
        for s in &sigmas {
            if s.conductor() != first.conductor {
                return Err(CompatError::BaseMismatch);
            }
        }
        Ok(CompatSystem { sigmas, objects })
    }

    pub fn base(&self) -> Result<GaloisGSet, CompatError> {
        self.objects.first().map(|v| v.base.clone()).ok_or(CompatError::EmptySystem)
    }

    pub fn conductor(&self) -> u64 {
        self.objects[0].conductor
    }

    pub fn subsystem(&self, indices: &[usize]) -> Result<CompatSystem, CompatError> {
        CompatSystem::new(
            indices.iter().map(|&i| self.sigmas[i].clone()).collect(),
            indices.iter().map(|&i| self.objects[i].clone()).collect(),
        )
    }
}

/// First mismatch found by the untwisted comparison, with both untwisted
/// values.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatWitness {
    pub point: usize,
    pub k: usize,
    pub j: i64,
    pub lambda: (usize, usize),
    pub left: CycloElem,
    pub right: CycloElem,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatVerdict {
    pub compatible: bool,
    pub witness: Option<CompatWitness>,
}

impl CompatVerdict {
    fn ok() -> CompatVerdict {
        CompatVerdict { compatible: true, witness: None }
    }
}

/// All trace-window entries of a system, one row of per-index values for
/// each (closed point, kernel element, Frobenius power).
#[derive(Clone, Debug)]
pub struct TraceTable {
    pub entries: Vec<(usize, usize, i64, Vec<CycloElem>)>,
}

pub fn trace_table(s: &CompatSystem) -> Result<TraceTable, CompatError> {
    let mut entries = Vec::new();
    let points = s.objects[0].points().to_vec();
    for (pt, pd) in points.iter().enumerate() {
        let w = s.objects.iter().map(|v| v.dim_at(pt)).max().unwrap_or(0);
        let w = (2 * w).max(1) as i64;
        for k in pd.group.kernel.elements() {
            for j in -w..=w {
                let row = s
                    .objects
                    .iter()
                    .map(|v| v.trace(pt, (k, j)))
                    .collect::<Result<Vec<_>, _>>()?;
                entries.push((pt, k, j, row));
            }
        }
    }
    Ok(TraceTable { entries })
}

/// Scan order for Frobenius powers: small absolute value first, positive
/// before negative.
fn power_scan(w: i64) -> impl Iterator<Item = i64> {
    (0..=w).flat_map(|j| if j == 0 { vec![0] } else { vec![j, -j] })
}

fn compare_untwisted(
    s: &CompatSystem,
    powers: impl Fn(i64) -> Vec<i64>,
) -> Result<CompatVerdict, CompatError> {
    if s.objects.len() <= 1 {
        return Ok(CompatVerdict::ok());
    }
    let inv: Vec<FieldAut> = s.sigmas.iter().map(|a| a.inverse()).collect();
    let points = s.objects[0].points().to_vec();
    for (pt, pd) in points.iter().enumerate() {
        for i in 1..s.objects.len() {
            let w = (s.objects[0].dim_at(pt) + s.objects[i].dim_at(pt)).max(1) as i64;
            for k in pd.group.kernel.elements() {
                for j in powers(w) {
                    let left = inv[0].apply(&s.objects[0].trace(pt, (k, j))?)?;
                    let right = inv[i].apply(&s.objects[i].trace(pt, (k, j))?)?;
                    if left != right {
                        return Ok(CompatVerdict {
                            compatible: false,
                            witness: Some(CompatWitness {
                                point: pt,
                                k,
                                j,
                                lambda: (0, i),
                                left,
                                right,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(CompatVerdict::ok())
}

/// The untwisted-equality criterion over the full character window: the
/// family is compatible exactly when all inverse-embedded traces agree.
pub fn check_compatibility(s: &CompatSystem) -> Result<CompatVerdict, CompatError> {
    compare_untwisted(s, |w| power_scan(w).collect())
}

/// The same criterion using only Frobenius powers j ≥ N; a window of
/// length one past the recurrence order suffices because the trace
/// sequences solve backward through the invertible Frobenius.
pub fn check_compatibility_truncated(s: &CompatSystem, n: i64) -> Result<CompatVerdict, CompatError> {
    compare_untwisted(s, |w| (n..=n + w).collect())
}

/// The local variant: traces range over the full kernel including the
/// inertia part. Rejects finite bases.
pub fn check_compatibility_local(s: &CompatSystem) -> Result<CompatVerdict, CompatError> {
    if s.base()?.base.kind != FieldKind::Local {
        return Err(CompatError::LocalBaseRequired);
    }
    check_compatibility(s)
}

pub fn class_map<F>(v: &VirtualClass, new_base: GaloisGSet, f: F) -> Result<VirtualClass, CompatError>
where
    F: Fn(&EquivariantSheaf) -> Result<EquivariantSheaf, SheafError>,
{
    let plus = v.plus.iter().map(&f).collect::<Result<Vec<_>, _>>()?;
    let minus = v.minus.iter().map(&f).collect::<Result<Vec<_>, _>>()?;
    Ok(VirtualClass::new(new_base, v.conductor, plus, minus)?)
}

pub fn class_tensor(a: &VirtualClass, b: &VirtualClass) -> Result<VirtualClass, CompatError> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for p in &a.plus {
        for q in &b.plus {
            plus.push(tensor(p, q)?);
        }
        for q in &b.minus {
            minus.push(tensor(p, q)?);
        }
    }
    for m in &a.minus {
        for q in &b.plus {
            minus.push(tensor(m, q)?);
        }
        for q in &b.minus {
            plus.push(tensor(m, q)?);
        }
    }
    Ok(VirtualClass::new(a.base.clone(), a.conductor, plus, minus)?)
}

pub fn class_dual(a: &VirtualClass) -> Result<VirtualClass, CompatError> {
    class_map(a, a.base.clone(), dual)
}

pub fn class_hom(a: &VirtualClass, b: &VirtualClass) -> Result<VirtualClass, CompatError> {
    class_tensor(&class_dual(a)?, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassOp {
    Add,
    Sub,
}

/// Formal class arithmetic; trace tables add and subtract entrywise.
pub fn class_arithmetic(
    a: &VirtualClass,
    b: &VirtualClass,
    op: ClassOp,
) -> Result<VirtualClass, CompatError> {
    Ok(match op {
        ClassOp::Add => a.add(b)?,
        ClassOp::Sub => a.sub(b)?,
    })
}

/// One of the operation closures the compatibility predicate must survive.
pub enum ClosureOp<'a> {
    Tensor,
    InternalHom,
    Dual,
    TateTwist(i64),
    Pullback(&'a Morphism),
    Pushforward(&'a Morphism),
    ExtendByZero(&'a Morphism),
    InertiaInvariants,
    NearbyCycles { w1: &'a WeilLevelGroup, incl: &'a SplitHom },
    Untwist { m: i64, g: usize },
}

/// Apply the operation to every object and re-check compatibility: by the
/// stability theorems the verdict must remain compatible, so a failure
/// here is an implementation bug.
pub fn closure_harness(s: &CompatSystem, op: &ClosureOp<'_>) -> Result<CompatVerdict, CompatError> {
    let transformed: Vec<VirtualClass> = match op {
        ClosureOp::Tensor => s
            .objects
            .iter()
            .map(class_self_tensor)
            .collect::<Result<_, _>>()?,
        ClosureOp::InternalHom => s
            .objects
            .iter()
            .map(|v| class_hom(v, v))
            .collect::<Result<_, _>>()?,
        ClosureOp::Dual => s.objects.iter().map(class_dual).collect::<Result<_, _>>()?,
        ClosureOp::TateTwist(n) => s
            .objects
            .iter()
            .map(|v| class_map(v, v.base.clone(), |sh| tate_twist(sh, *n)))
            .collect::<Result<_, _>>()?,
        ClosureOp::Pullback(f) => s
            .objects
            .iter()
            .map(|v| class_map(v, f.source.clone(), |sh| pullback(f, sh)))
            .collect::<Result<_, _>>()?,
        ClosureOp::Pushforward(f) => s
            .objects
            .iter()
            .map(|v| class_map(v, f.target.clone(), |sh| pushforward(f, sh)))
            .collect::<Result<_, _>>()?,
        ClosureOp::ExtendByZero(f) => s
            .objects
            .iter()
            .map(|v| class_map(v, f.target.clone(), |sh| extend_by_zero(f, sh)))
            .collect::<Result<_, _>>()?,
        ClosureOp::InertiaInvariants => s
            .objects
            .iter()
            .map(|v| Ok(inertia_invariants_class(v)?))
            .collect::<Result<_, CompatError>>()?,
        ClosureOp::NearbyCycles { w1, incl } => {
            return nearby_cycles_compat(s, w1, incl);
        }
        ClosureOp::Untwist { m, g } => {
            let base = s.base()?;
            let datum = crate::descent::build_descent(&base, *m, *g).map_err(Box::new)?;
            s.objects
                .iter()
                .map(|v| {
                    class_map(v, datum.target.clone(), |sh| {
                        crate::descent::untwist(&datum, sh).map_err(|e| match e {
                            crate::descent::DescentError::Sheaf(inner) => inner,
                            _ => SheafError::BaseSetMismatch,
                        })
                    })
                })
                .collect::<Result<_, _>>()?
        }
    };
    check_compatibility(&CompatSystem::new(s.sigmas.clone(), transformed)?)
}

fn class_self_tensor(v: &VirtualClass) -> Result<VirtualClass, CompatError> {
    class_tensor(v, v)
}

/// The nearby-cycles closure is checked at the stalk level: every stalk
/// is transported through the same inclusion and the untwisted virtual
/// traces of the results are compared over the common window.
fn nearby_cycles_compat(
    s: &CompatSystem,
    w1: &WeilLevelGroup,
    incl: &SplitHom,
) -> Result<CompatVerdict, CompatError> {
    let mut per_lambda: Vec<(Vec<WeilRep>, Vec<WeilRep>)> = Vec::new();
    let mut w2_group: Option<WeilLevelGroup> = None;
    for v in &s.objects {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (sheaves, out) in [(&v.plus, &mut plus), (&v.minus, &mut minus)] {
            for sh in sheaves.iter() {
                for st in sh.stalks() {
                    let (w2, rep) = nearby_cycles_point(w1, incl, st)?;
                    if let Some(prev) = &w2_group {
                        if *prev != w2 {
                            return Err(CompatError::StalkGroupMismatch);
                        }
                    } else {
                        w2_group = Some(w2);
                    }
                    out.push(rep);
                }
            }
        }
        per_lambda.push((plus, minus));
    }
    let w2 = w2_group.ok_or(CompatError::EmptySystem)?;
    let n = s.conductor();
    let inv: Vec<FieldAut> = s.sigmas.iter().map(|a| a.inverse()).collect();
    let dim_of = |l: &(Vec<WeilRep>, Vec<WeilRep>)| -> usize {
        l.0.iter().map(|r| r.dim).sum::<usize>() + l.1.iter().map(|r| r.dim).sum::<usize>()
    };
    let virt_trace = |l: &(Vec<WeilRep>, Vec<WeilRep>), w: (usize, i64)| -> Result<CycloElem, CompatError> {
        let mut acc = CycloElem::zero(n)?;
        for r in &l.0 {
            acc = acc.checked_add(&r.trace(w)?)?;
        }
        for r in &l.1 {
            acc = acc.checked_sub(&r.trace(w)?)?;
        }
        Ok(acc)
    };
    for i in 1..per_lambda.len() {
        let w = (dim_of(&per_lambda[0]) + dim_of(&per_lambda[i])).max(1) as i64;
        for k in w2.kernel.elements() {
            for j in power_scan(w) {
                let left = inv[0].apply(&virt_trace(&per_lambda[0], (k, j))?)?;
                let right = inv[i].apply(&virt_trace(&per_lambda[i], (k, j))?)?;
                if left != right {
                    return Ok(CompatVerdict {
                        compatible: false,
                        witness: Some(CompatWitness {
                            point: 0,
                            k,
                            j,
                            lambda: (0, i),
                            left,
                            right,
                        }),
                    });
                }
            }
        }
    }
    Ok(CompatVerdict::ok())
}

/// The canonical positive-example generator: embed one object through
/// each automorphism in turn. The resulting system untwists to the
/// original on the nose, so it is compatible by construction.
pub fn sigma_twist_system(
    v: &VirtualClass,
    sigmas: &[FieldAut],
) -> Result<CompatSystem, CompatError> {
    let objects = sigmas
        .iter()
        .map(|a| class_map(v, v.base.clone(), |sh| sh.map_stalks(|st| st.map_aut(a))))
        .collect::<Result<Vec<_>, _>>()?;
    CompatSystem::new(sigmas.to_vec(), objects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{points_of, BaseField, FieldKind, InertiaData};
    use crate::groups::FiniteGroup;

    fn trivial_point(kind: FieldKind, inert: bool) -> GaloisGSet {
        let base = BaseField::new(7, 1, kind).unwrap();
        let inertia = if inert {
            Some(InertiaData {
                group: FiniteGroup::cyclic(3),
                action: vec![vec![0, 0, 0]],
                frob_twist: vec![0, 1, 2],
            })
        } else {
            None
        };
        GaloisGSet::new(FiniteGroup::trivial(), 1, vec![vec![0]], vec![0], inertia, base)
            .unwrap()
    }

    fn scalar_class(x: &GaloisGSet, conductor: u64, frob: &CycloElem) -> VirtualClass {
        let pd = points_of(x).remove(0);
        let n = pd.group.kernel.order();
        let chi = vec![CycloElem::one(conductor).unwrap(); n];
        let st = WeilRep::character(pd.group, conductor, &chi, frob).unwrap();
        VirtualClass::from_sheaf(
            EquivariantSheaf::new(x.clone(), conductor, vec![st]).unwrap(),
        )
    }

    #[test]
    fn singleton_systems_are_always_compatible() {
        let x = trivial_point(FieldKind::Finite, false);
        let v = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 1).unwrap());
        let s = CompatSystem::new(vec![FieldAut::identity(5).unwrap()], vec![v]).unwrap();
        assert!(check_compatibility(&s).unwrap().compatible);
    }

    #[test]
    fn fifth_roots_untwist_to_a_common_value() {
        let x = trivial_point(FieldKind::Finite, false);
        let z1 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 1).unwrap());
        let z2 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 2).unwrap());
        let z3 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 3).unwrap());
        let id = FieldAut::identity(5).unwrap();
        let doubling = FieldAut::new(5, 2).unwrap();
        let good = CompatSystem::new(vec![id.clone(), doubling.clone()], vec![z1.clone(), z2])
            .unwrap();
        assert!(check_compatibility(&good).unwrap().compatible);
        let bad = CompatSystem::new(vec![id, doubling], vec![z1, z3]).unwrap();
        let verdict = check_compatibility(&bad).unwrap();
        assert!(!verdict.compatible);
        let w = verdict.witness.unwrap();
        assert_eq!(w.j, 1);
        assert_eq!(w.left, CycloElem::root_of_unity(5, 1).unwrap());
        assert_eq!(w.right, CycloElem::root_of_unity(5, 4).unwrap());
    }

    #[test]
    fn truncated_check_agrees_with_the_full_check() {
        let x = trivial_point(FieldKind::Finite, false);
        let z1 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 1).unwrap());
        let z2 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 2).unwrap());
        let z3 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 3).unwrap());
        let id = FieldAut::identity(5).unwrap();
        let doubling = FieldAut::new(5, 2).unwrap();
        let good = CompatSystem::new(vec![id.clone(), doubling.clone()], vec![z1.clone(), z2])
            .unwrap();
        let bad = CompatSystem::new(vec![id, doubling], vec![z1, z3]).unwrap();
        for n in [0i64, 1, 3, 5] {
            assert!(check_compatibility_truncated(&good, n).unwrap().compatible);
            let v = check_compatibility_truncated(&bad, n).unwrap();
            assert!(!v.compatible);
            assert!(v.witness.unwrap().j >= n);
        }
    }

    fn inertia_character_class(x: &GaloisGSet, conductor: u64, exp: i64) -> VirtualClass {
        let pd = points_of(x).remove(0);
        let n = pd.group.kernel.order();
        // kernel here is the inertia C3 itself; character ζ₃^exp on a generator
        assert_eq!(n, 3);
        let chi: Vec<CycloElem> = (0..3)
            .map(|k| CycloElem::root_of_unity(conductor, exp * k as i64).unwrap())
            .collect();
        let st = WeilRep::character(pd.group, conductor, &chi, &CycloElem::one(conductor).unwrap())
            .unwrap();
        VirtualClass::from_sheaf(
            EquivariantSheaf::new(x.clone(), conductor, vec![st]).unwrap(),
        )
    }

    #[test]
    fn local_check_sees_inertia_traces() {
        let x = trivial_point(FieldKind::Local, true);
        let a = inertia_character_class(&x, 3, 1);
        let b = inertia_character_class(&x, 3, 2);
        let id = FieldAut::identity(3).unwrap();
        let s = CompatSystem::new(vec![id.clone(), id.clone()], vec![a.clone(), b]).unwrap();
        let verdict = check_compatibility_local(&s).unwrap();
        assert!(!verdict.compatible);
        assert_ne!(verdict.witness.unwrap().k, 0);
        // σ-twist related inertia characters are compatible
        let conj = FieldAut::new(3, 2).unwrap();
        let twisted = sigma_twist_system(&a, &[id, conj]).unwrap();
        assert!(check_compatibility_local(&twisted).unwrap().compatible);
        // a finite base is rejected
        let y = trivial_point(FieldKind::Finite, false);
        let v = scalar_class(&y, 3, &CycloElem::one(3).unwrap());
        let fin = CompatSystem::new(vec![FieldAut::identity(3).unwrap()], vec![v]).unwrap();
        assert_eq!(
            check_compatibility_local(&fin),
            Err(CompatError::LocalBaseRequired)
        );
    }

    #[test]
    fn sigma_twisted_systems_survive_the_closure_operations() {
        let x = trivial_point(FieldKind::Finite, false);
        let v = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 1).unwrap());
        let sigmas = vec![FieldAut::identity(5).unwrap(), FieldAut::new(5, 2).unwrap()];
        let s = sigma_twist_system(&v, &sigmas).unwrap();
        assert!(check_compatibility(&s).unwrap().compatible);
        for op in [
            ClosureOp::Tensor,
            ClosureOp::InternalHom,
            ClosureOp::Dual,
            ClosureOp::TateTwist(1),
            ClosureOp::Untwist { m: 1, g: 0 },
        ] {
            assert!(closure_harness(&s, &op).unwrap().compatible);
        }
        let f = Morphism::identity(&x);
        for op in [
            ClosureOp::Pullback(&f),
            ClosureOp::Pushforward(&f),
            ClosureOp::ExtendByZero(&f),
        ] {
            assert!(closure_harness(&s, &op).unwrap().compatible);
        }
    }

    #[test]
    fn class_arithmetic_cancels_and_adds() {
        let x = trivial_point(FieldKind::Finite, false);
        let v = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 1).unwrap());
        let z = class_arithmetic(&v, &v, ClassOp::Sub).unwrap();
        for j in -2..=2i64 {
            assert!(z.trace(0, (0, j)).unwrap().is_zero());
        }
        let d = class_arithmetic(&v, &v, ClassOp::Add).unwrap();
        let single = v.trace(0, (0, 1)).unwrap();
        assert_eq!(d.trace(0, (0, 1)).unwrap(), single.checked_add(&single).unwrap());
    }

    #[test]
    fn compatibility_reduces_to_two_element_subsystems() {
        let x = trivial_point(FieldKind::Finite, false);
        let z1 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 1).unwrap());
        let z2 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 2).unwrap());
        let z3 = scalar_class(&x, 5, &CycloElem::root_of_unity(5, 3).unwrap());
        let id = FieldAut::identity(5).unwrap();
        let doubling = FieldAut::new(5, 2).unwrap();
        let tripling = FieldAut::new(5, 3).unwrap();
        let s = CompatSystem::new(
            vec![id, doubling, tripling],
            vec![z1, z2, z3],
        )
        .unwrap();
        let full = check_compatibility(&s).unwrap().compatible;
        let mut pairwise = true;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let sub = s.subsystem(&[i, j]).unwrap();
                pairwise &= check_compatibility(&sub).unwrap().compatible;
            }
        }
        assert_eq!(full, pairwise);
        assert!(full); // σ_λ^{-1}(ζ^λ-powers) all untwist to ζ₅
    }
}
