//! Sheaves on a Galois G-set: one stabilizer representation per closed point.

use super::rep::WeilRep;
use super::SheafError;
use crate::arith::{points_of, GaloisGSet, PointData, WElem};
use crate::cyclotomic::CycloElem;

/// A sheaf: the base set, its closed points, and a stalk representation at
/// each closed point's basepoint. Transport paths to the basepoints are
/// stored so traces can be taken at any geometric point.
#[derive(Clone, Debug)]
pub struct EquivariantSheaf {
    base: GaloisGSet,
    conductor: u64,
    points: Vec<PointData>,
    stalks: Vec<WeilRep>,
    point_of: Vec<usize>,
    paths: Vec<(usize, usize, i64)>,
}

impl EquivariantSheaf {
    pub fn new(
        base: GaloisGSet,
        conductor: u64,
        stalks: Vec<WeilRep>,
    ) -> Result<EquivariantSheaf, SheafError> {
        let points = points_of(&base);
        if stalks.len() != points.len() {
            return Err(SheafError::StalkMismatch { point: stalks.len() });
        }
        for (i, (pd, st)) in points.iter().zip(&stalks).enumerate() {
            if st.group != pd.group {
                return Err(SheafError::StalkMismatch { point: i });
            }
            if st.conductor != conductor {
                return Err(SheafError::ConductorMismatch);
            }
        }
        let mut point_of = vec![usize::MAX; base.size()];
        for (i, pd) in points.iter().enumerate() {
            for &p in &pd.points {
                point_of[p] = i;
            }
        }
        let paths = (0..base.size())
            .map(|p| {
                base.connect_path(points[point_of[p]].basepoint, p)
                    .expect("basepoint lies in the same closed point")
            })
            .collect();
        Ok(EquivariantSheaf { base, conductor, points, stalks, point_of, paths })
    }

    /// The rank-1 trivial sheaf.
    pub fn constant_unit(
        base: GaloisGSet,
        conductor: u64,
    ) -> Result<EquivariantSheaf, SheafError> {
        let stalks = points_of(&base)
            .into_iter()
            .map(|pd| WeilRep::unit(pd.group, conductor))
            .collect::<Result<Vec<_>, _>>()?;
        EquivariantSheaf::new(base, conductor, stalks)
    }

    /// The zero sheaf.
    pub fn zero(base: GaloisGSet, conductor: u64) -> Result<EquivariantSheaf, SheafError> {
        let stalks = points_of(&base)
            .into_iter()
            .map(|pd| WeilRep::zero(pd.group, conductor))
            .collect::<Result<Vec<_>, _>>()?;
        EquivariantSheaf::new(base, conductor, stalks)
    }

    pub fn base(&self) -> &GaloisGSet {
        &self.base
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn points(&self) -> &[PointData] {
        &self.points
    }

    pub fn stalks(&self) -> &[WeilRep] {
        &self.stalks
    }

    pub fn stalk(&self, i: usize) -> &WeilRep {
        &self.stalks[i]
    }

    /// Closed-point index containing a geometric point.
    pub fn point_of(&self, p: usize) -> usize {
        self.point_of[p]
    }

    /// Stored path from the closed point's basepoint to the geometric point.
    pub fn path_to(&self, p: usize) -> (usize, usize, i64) {
        self.paths[p]
    }

    /// Trace at a closed point's basepoint, at a split stabilizer element.
    pub fn trace(&self, point: usize, w: WElem) -> Result<CycloElem, SheafError> {
        self.stalks[point].trace(w)
    }

    /// Trace at an arbitrary geometric point p, at a stabilizer triple of p:
    /// the triple is transported along the stored path to the basepoint and
    /// split there.
    pub fn trace_at(
        &self,
        p: usize,
        stab: (usize, usize, i64),
    ) -> Result<CycloElem, SheafError> {
        if !self.base.stabilizes(p, stab.0, stab.1, stab.2) {
            return Err(SheafError::NotInStabilizer);
        }
        let i = self.point_of[p];
        let pd = &self.points[i];
        let at_base = self.base.transport_stab(self.paths[p], stab);
        let w = pd
            .embedding
            .split_of(&self.base, &pd.group, at_base)
            .ok_or(SheafError::NotInStabilizer)?;
        self.stalks[i].trace(w)
    }

    pub fn direct_sum(&self, other: &EquivariantSheaf) -> Result<EquivariantSheaf, SheafError> {
        if self.base != other.base {
            return Err(SheafError::BaseSetMismatch);
        }
        let stalks = self
            .stalks
            .iter()
            .zip(&other.stalks)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<Vec<_>, _>>()?;
        EquivariantSheaf::new(self.base.clone(), self.conductor, stalks)
    }

    /// Apply a rep-level map to every stalk.
    pub fn map_stalks<F>(&self, f: F) -> Result<EquivariantSheaf, SheafError>
    where
        F: Fn(&WeilRep) -> Result<WeilRep, SheafError>,
    {
        let stalks = self.stalks.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        EquivariantSheaf::new(self.base.clone(), self.conductor, stalks)
    }

    pub fn total_dim(&self) -> usize {
        self.stalks.iter().map(|s| s.dim).sum()
    }
}

/// A formal difference of sheaves on a common base.
#[derive(Clone, Debug)]
pub struct VirtualClass {
    pub base: GaloisGSet,
    pub conductor: u64,
    pub plus: Vec<EquivariantSheaf>,
    pub minus: Vec<EquivariantSheaf>,
    points: Vec<PointData>,
}

/// First trace disagreement between two classes.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWitness {
    pub point: usize,
    pub k: usize,
    pub j: i64,
    pub left: CycloElem,
    pub right: CycloElem,
}

impl VirtualClass {
    pub fn new(
        base: GaloisGSet,
        conductor: u64,
        plus: Vec<EquivariantSheaf>,
        minus: Vec<EquivariantSheaf>,
    ) -> Result<VirtualClass, SheafError> {
        for s in plus.iter().chain(&minus) {
            if *s.base() != base {
                return Err(SheafError::BaseSetMismatch);
            }
            if s.conductor() != conductor {
                return Err(SheafError::ConductorMismatch);
            }
        }
        let points = points_of(&base);
        Ok(VirtualClass { base, conductor, plus, minus, points })
    }

    pub fn from_sheaf(s: EquivariantSheaf) -> VirtualClass {
        let base = s.base().clone();
        let conductor = s.conductor();
        VirtualClass::new(base, conductor, vec![s], vec![]).expect("sheaf is self-consistent")
    }

    pub fn zero_class(base: GaloisGSet, conductor: u64) -> VirtualClass {
        VirtualClass::new(base, conductor, vec![], vec![]).expect("empty class")
    }

    pub fn points(&self) -> &[PointData] {
        &self.points
    }

    pub fn add(&self, other: &VirtualClass) -> Result<VirtualClass, SheafError> {
        if self.base != other.base || self.conductor != other.conductor {
            return Err(SheafError::BaseSetMismatch);
        }
        let mut plus = self.plus.clone();
        plus.extend(other.plus.iter().cloned());
        let mut minus = self.minus.clone();
        minus.extend(other.minus.iter().cloned());
        VirtualClass::new(self.base.clone(), self.conductor, plus, minus)
    }

    pub fn neg(&self) -> VirtualClass {
        VirtualClass {
            base: self.base.clone(),
            conductor: self.conductor,
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            points: self.points.clone(),
        }
    }

    pub fn sub(&self, other: &VirtualClass) -> Result<VirtualClass, SheafError> {
        self.add(&other.neg())
    }

    pub fn trace(&self, point: usize, w: WElem) -> Result<CycloElem, SheafError> {
        let mut acc = CycloElem::zero(self.conductor)?;
        for s in &self.plus {
            acc = acc.checked_add(&s.trace(point, w)?)?;
        }
        for s in &self.minus {
            acc = acc.checked_sub(&s.trace(point, w)?)?;
        }
        Ok(acc)
    }

    /// Total stalk dimension entering the class at a closed point.
    pub fn dim_at(&self, point: usize) -> usize {
        self.plus
            .iter()
            .chain(&self.minus)
            .map(|s| s.stalk(point).dim)
            .sum()
    }

    /// Certified comparison window at a closed point (both signs of j are
    /// scanned): the j-trace sequences obey the linear recurrences of the
    /// Frobenius characteristic polynomials, whose extreme coefficients are
    /// invertible, so agreement on the window propagates to all of ℤ.
    pub fn window_at(&self, point: usize, other: &VirtualClass) -> i64 {
        (self.dim_at(point) + other.dim_at(point)).max(1) as i64
    }

    /// All trace-table entries: (point, k, j, value) for j in a window of
    /// the given radius (per point, at least the certified bound).
    pub fn trace_table(
        &self,
        radius: impl Fn(usize) -> i64,
    ) -> Result<Vec<(usize, usize, i64, CycloElem)>, SheafError> {
        let mut out = Vec::new();
        for (i, pd) in self.points.iter().enumerate() {
            let w = radius(i);
            for k in pd.group.kernel.elements() {
                for j in -w..=w {
                    out.push((i, k, j, self.trace(i, (k, j))?));
                }
            }
        }
        Ok(out)
    }
}

/// Decide equality of two classes on a common base by comparing traces on
/// the certified window; returns the first disagreement if any.
pub fn classes_equal(
    a: &VirtualClass,
    b: &VirtualClass,
) -> Result<Option<TraceWitness>, SheafError> {
    if a.base != b.base || a.conductor != b.conductor {
        return Err(SheafError::BaseSetMismatch);
    }
    for (i, pd) in a.points.iter().enumerate() {
        let w = a.window_at(i, b);
        for k in pd.group.kernel.elements() {
            for j in -w..=w {
                let left = a.trace(i, (k, j))?;
                let right = b.trace(i, (k, j))?;
                if left != right {
                    return Ok(Some(TraceWitness { point: i, k, j, left, right }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{BaseField, FieldKind};
    use crate::groups::FiniteGroup;

    fn swap_point() -> GaloisGSet {
        // one closed point of degree 2 with a matching C2 action
        let c2 = FiniteGroup::cyclic(2);
        GaloisGSet::new(
            c2,
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![1, 0],
            None,
            BaseField::new(5, 1, FieldKind::Finite).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn unit_sheaf_traces_are_one() {
        let x = swap_point();
        let u = EquivariantSheaf::constant_unit(x, 12).unwrap();
        assert_eq!(u.points().len(), 1);
        for j in -3..=3 {
            assert_eq!(u.trace(0, (0, j)).unwrap(), CycloElem::one(12).unwrap());
        }
        // geometric-point traces via transport agree at both points
        let base = u.base().clone();
        for p in 0..2 {
            for g in base.group.elements() {
                for m in -3..=3i64 {
                    if base.stabilizes(p, g, 0, m) {
                        assert_eq!(
                            u.trace_at(p, (g, 0, m)).unwrap(),
                            CycloElem::one(12).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn class_arithmetic_and_equality() {
        let x = swap_point();
        let u = EquivariantSheaf::constant_unit(x.clone(), 12).unwrap();
        let z = EquivariantSheaf::zero(x.clone(), 12).unwrap();
        let cu = VirtualClass::from_sheaf(u.clone());
        let cz = VirtualClass::from_sheaf(z);
        let diff = cu.sub(&cu).unwrap();
        let zero = VirtualClass::zero_class(x.clone(), 12);
        assert_eq!(classes_equal(&diff, &zero).unwrap(), None);
        assert_eq!(classes_equal(&cz, &zero).unwrap(), None);
        // [u ⊕ u] = [u] + [u]
        let uu = VirtualClass::from_sheaf(u.direct_sum(&u).unwrap());
        let sum = cu.add(&cu).unwrap();
        assert_eq!(classes_equal(&uu, &sum).unwrap(), None);
        // and differs from [u]
        let w = classes_equal(&uu, &cu).unwrap().unwrap();
        assert_eq!(w.point, 0);
    }

    #[test]
    fn trace_at_rejects_non_stabilizing_triples() {
        let x = swap_point();
        let u = EquivariantSheaf::constant_unit(x, 12).unwrap();
        // g swaps the two points at frobenius degree 0: not a stabilizer of 0
        assert_eq!(
            u.trace_at(0, (1, 0, 0)).unwrap_err(),
            SheafError::NotInStabilizer
        );
    }
}
