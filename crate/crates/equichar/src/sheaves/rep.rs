//! Representations of split arithmetic stabilizers over a cyclotomic field.

use super::SheafError;
use crate::arith::{WeilLevelGroup, WElem};
use crate::cyclotomic::{CycloElem, CycloMatrix, FieldAut, Rat};
use num_bigint::BigInt;
use num_traits::One;

/// A left inverse L of a full-column-rank matrix B, so L·B = I, built from
/// a deterministic choice of pivot rows.
pub fn left_inverse(b: &CycloMatrix) -> Result<CycloMatrix, SheafError> {
    let (d, r) = (b.rows(), b.cols());
    let mut sel: Vec<usize> = Vec::with_capacity(r);
    for i in 0..d {
        if sel.len() == r {
            break;
        }
        let mut cand = sel.clone();
        cand.push(i);
        let mut sub = CycloMatrix::zero(b.conductor(), r, cand.len())?;
        for (t, &row) in cand.iter().enumerate() {
            for j in 0..r {
                sub.set(j, t, b.get(row, j).clone());
            }
        }
        if sub.rank()? == cand.len() {
            sel.push(i);
        }
    }
    if sel.len() != r {
        return Err(SheafError::DependentColumns);
    }
    let mut square = CycloMatrix::zero(b.conductor(), r, r)?;
    for (t, &row) in sel.iter().enumerate() {
        for j in 0..r {
            square.set(t, j, b.get(row, j).clone());
        }
    }
    let inv = square.inverse()?;
    let mut left = CycloMatrix::zero(b.conductor(), r, d)?;
    for i in 0..r {
        for (t, &row) in sel.iter().enumerate() {
            left.set(i, row, inv.get(i, t).clone());
        }
    }
    Ok(left)
}

/// Matrix of `op` on the span of the columns of `basis`, in those
/// coordinates; fails if the span is not op-stable.
pub fn restrict_operator(
    op: &CycloMatrix,
    basis: &CycloMatrix,
    basis_left_inv: &CycloMatrix,
) -> Result<CycloMatrix, SheafError> {
    let r = basis_left_inv.mul(&op.mul(basis)?)?;
    if op.mul(basis)? != basis.mul(&r)? {
        return Err(SheafError::UnstableSubspace);
    }
    Ok(r)
}

/// A finite-dimensional representation of a split stabilizer: matrices for
/// the kernel plus an invertible Frobenius operator intertwining theta.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilRep {
    pub group: WeilLevelGroup,
    pub conductor: u64,
    pub dim: usize,
    rho: Vec<CycloMatrix>,
    frob: CycloMatrix,
}

impl WeilRep {
    pub fn new(
        group: WeilLevelGroup,
        conductor: u64,
        rho: Vec<CycloMatrix>,
        frob: CycloMatrix,
    ) -> Result<WeilRep, SheafError> {
        let n = group.kernel.order();
        if rho.len() != n {
            return Err(SheafError::RepKernelMismatch);
        }
        let dim = frob.rows();
        for m in rho.iter().chain(std::iter::once(&frob)) {
            if m.rows() != dim || m.cols() != dim || m.conductor() != conductor {
                return Err(SheafError::RepDimMismatch);
            }
        }
        if dim > 0 {
            frob.inverse().map_err(|_| SheafError::RepNotIntertwining)?;
        }
        if !rho[group.kernel.identity()].is_identity() {
            return Err(SheafError::RepNotMultiplicative);
        }
        for a in 0..n {
            for b in 0..n {
                if rho[group.kernel.mul(a, b)] != rho[a].mul(&rho[b])? {
                    return Err(SheafError::RepNotMultiplicative);
                }
            }
        }
        for k in 0..n {
            if frob.mul(&rho[k])? != rho[group.theta_pow(k, 1)].mul(&frob)? {
                return Err(SheafError::RepNotIntertwining);
            }
        }
        Ok(WeilRep { group, conductor, dim, rho, frob })
    }

    /// The zero-dimensional representation.
    pub fn zero(group: WeilLevelGroup, conductor: u64) -> Result<WeilRep, SheafError> {
        let n = group.kernel.order();
        let z = CycloMatrix::zero(conductor, 0, 0)?;
        Ok(WeilRep { group, conductor, dim: 0, rho: vec![z.clone(); n], frob: z })
    }

    /// The rank-1 trivial representation (Frobenius acts by 1).
    pub fn unit(group: WeilLevelGroup, conductor: u64) -> Result<WeilRep, SheafError> {
        let n = group.kernel.order();
        let id = CycloMatrix::identity(conductor, 1)?;
        WeilRep::new(group, conductor, vec![id.clone(); n], id)
    }

    /// The regular representation of the kernel, with the Frobenius acting
    /// by theta's permutation scaled by an invertible scalar.
    pub fn regular(
        group: WeilLevelGroup,
        conductor: u64,
        frob_scalar: &CycloElem,
    ) -> Result<WeilRep, SheafError> {
        let n = group.kernel.order();
        let mut rho = Vec::with_capacity(n);
        for k in 0..n {
            let mut m = CycloMatrix::zero(conductor, n, n)?;
            for a in 0..n {
                m.set(group.kernel.mul(k, a), a, CycloElem::one(conductor)?);
            }
            rho.push(m);
        }
        let mut frob = CycloMatrix::zero(conductor, n, n)?;
        for a in 0..n {
            frob.set(group.theta_pow(a, 1), a, frob_scalar.clone());
        }
        WeilRep::new(group, conductor, rho, frob)
    }

    /// A rank-1 representation given by a character of the kernel fixed by
    /// theta, with a declared Frobenius scalar.
    pub fn character(
        group: WeilLevelGroup,
        conductor: u64,
        chi: &[CycloElem],
        frob_scalar: &CycloElem,
    ) -> Result<WeilRep, SheafError> {
        let rho = chi
            .iter()
            .map(|c| CycloMatrix::new(conductor, 1, 1, vec![c.clone()]))
            .collect::<Result<Vec<_>, _>>()?;
        let frob = CycloMatrix::new(conductor, 1, 1, vec![frob_scalar.clone()])?;
        WeilRep::new(group, conductor, rho, frob)
    }

    pub fn rho(&self, k: usize) -> &CycloMatrix {
        &self.rho[k]
    }

    pub fn frob(&self) -> &CycloMatrix {
        &self.frob
    }

    /// Matrix of the split element (k, j): rho(k)·Phi^j.
    pub fn value(&self, w: WElem) -> Result<CycloMatrix, SheafError> {
        Ok(self.rho[w.0].mul(&self.frob.pow(w.1)?)?)
    }

    pub fn trace(&self, w: WElem) -> Result<CycloElem, SheafError> {
        if self.dim == 0 {
            return Ok(CycloElem::zero(self.conductor)?);
        }
        Ok(self.value(w)?.trace()?)
    }

    pub fn direct_sum(&self, other: &WeilRep) -> Result<WeilRep, SheafError> {
        self.compatible(other)?;
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<Vec<_>, _>>()?;
        WeilRep::new(
            self.group.clone(),
            self.conductor,
            rho,
            self.frob.direct_sum(&other.frob)?,
        )
    }

    pub fn tensor(&self, other: &WeilRep) -> Result<WeilRep, SheafError> {
        self.compatible(other)?;
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| a.kronecker(b))
            .collect::<Result<Vec<_>, _>>()?;
        WeilRep::new(
            self.group.clone(),
            self.conductor,
            rho,
            self.frob.kronecker(&other.frob)?,
        )
    }

    /// Contragredient: inverse-transpose on every operator.
    pub fn dual(&self) -> Result<WeilRep, SheafError> {
        if self.dim == 0 {
            return Ok(self.clone());
        }
        let rho = self
            .rho
            .iter()
            .map(|m| Ok(m.inverse()?.transpose()))
            .collect::<Result<Vec<_>, SheafError>>()?;
        WeilRep::new(
            self.group.clone(),
            self.conductor,
            rho,
            self.frob.inverse()?.transpose(),
        )
    }

    /// Apply a field automorphism entrywise.
    pub fn map_aut(&self, aut: &FieldAut) -> Result<WeilRep, SheafError> {
        let rho = self
            .rho
            .iter()
            .map(|m| m.map_aut(aut))
            .collect::<Result<Vec<_>, _>>()?;
        WeilRep::new(self.group.clone(), self.conductor, rho, self.frob.map_aut(aut)?)
    }

    /// Residue cardinality raised to an integer power, as a rational.
    pub fn q_power(&self, e: i64) -> Rat {
        let q = BigInt::from(self.group.base.q());
        let mut num = BigInt::one();
        for _ in 0..e.unsigned_abs() {
            num *= &q;
        }
        if e >= 0 {
            Rat::from_integer(num)
        } else {
            Rat::new(BigInt::one(), num)
        }
    }

    /// Tate twist by n: the Frobenius operator is scaled by q^{-n·n0}.
    pub fn tate_twist(&self, n: i64) -> Result<WeilRep, SheafError> {
        if self.dim == 0 {
            return Ok(self.clone());
        }
        let scale = self.q_power(-n * self.group.frob_step);
        WeilRep::new(
            self.group.clone(),
            self.conductor,
            self.rho.clone(),
            self.frob.scale_rat(&scale),
        )
    }

    /// Invariants under a theta-stable normal subgroup of the kernel,
    /// via the averaging projector: returns the column basis of the fixed
    /// subspace and the restricted representation (of the same group).
    pub fn invariants(&self, sub: &[usize]) -> Result<(CycloMatrix, WeilRep), SheafError> {
        if self.dim == 0 {
            return Ok((CycloMatrix::zero(self.conductor, 0, 0)?, self.clone()));
        }
        let mut acc = CycloMatrix::zero(self.conductor, self.dim, self.dim)?;
        for &n in sub {
            acc = acc.add(&self.rho[n])?;
        }
        let proj = acc.scale_rat(&Rat::new(BigInt::one(), BigInt::from(sub.len() as i64)));
        let basis = proj.column_space_basis()?;
        let linv = left_inverse(&basis)?;
        let rho = self
            .rho
            .iter()
            .map(|m| restrict_operator(m, &basis, &linv))
            .collect::<Result<Vec<_>, _>>()?;
        let frob = restrict_operator(&self.frob, &basis, &linv)?;
        let rep = WeilRep::new(self.group.clone(), self.conductor, rho, frob)?;
        Ok((basis, rep))
    }

    fn compatible(&self, other: &WeilRep) -> Result<(), SheafError> {
        if self.group != other.group {
            return Err(SheafError::BaseSetMismatch);
        }
        if self.conductor != other.conductor {
            return Err(SheafError::ConductorMismatch);
        }
        Ok(())
    }
}

/// Character-window equality of two representations of the same group:
/// traces agree at every (k, j) with |j| bounded by twice the larger rank.
/// The j-trace sequences satisfy the linear recurrence of the Frobenius
/// characteristic polynomial, whose extreme coefficients are invertible,
/// so window equality propagates to all integers j.
pub fn reps_trace_equal(a: &WeilRep, b: &WeilRep) -> Result<bool, SheafError> {
    if a.group != b.group || a.conductor != b.conductor {
        return Ok(false);
    }
    let w = 2 * a.dim.max(b.dim).max(1) as i64;
    for k in a.group.kernel.elements() {
        for j in -w..=w {
            if a.trace((k, j))? != b.trace((k, j))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
