//! Exact linear algebra over a fixed cyclotomic field.

use std::fmt;


use super::elem::{CycloElem, FieldAut};
use super::poly::Rat;
use super::CycloError;

/// A dense matrix with entries in Q(z_N), all sharing one conductor.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloMatrix {
    conductor: u64,
    rows: usize,
    cols: usize,
    entries: Vec<CycloElem>, // row-major
}

impl CycloMatrix {
    pub fn new(
        conductor: u64,
        rows: usize,
        cols: usize,
        entries: Vec<CycloElem>,
    ) -> Result<CycloMatrix, CycloError> {
        if conductor == 0 {
            return Err(CycloError::ZeroConductor);
        }
        if entries.len() != rows * cols {
            return Err(CycloError::DimMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for e in &entries {
            if e.conductor() != conductor {
                return Err(CycloError::ConductorMismatch {
                    left: conductor,
                    right: e.conductor(),
                });
            }
        }
        Ok(CycloMatrix {
            conductor,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(conductor: u64, rows: usize, cols: usize) -> Result<CycloMatrix, CycloError> {
        let z = CycloElem::zero(conductor)?;
        Ok(CycloMatrix {
            conductor,
            rows,
            cols,
            entries: vec![z; rows * cols],
        })
    }

    pub fn identity(conductor: u64, n: usize) -> Result<CycloMatrix, CycloError> {
        let mut m = Self::zero(conductor, n, n)?;
        let one = CycloElem::one(conductor)?;
        for i in 0..n {
            m.entries[i * n + i] = one.clone();
        }
        Ok(m)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    fn check_same_field(&self, other: &CycloMatrix) -> Result<(), CycloError> {
        if self.conductor != other.conductor {
            return Err(CycloError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CycloError::DimMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(CycloMatrix {
            conductor: self.conductor,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.add(&other.scale_elem(&CycloElem::from_integer(other.conductor, -1)?)?)
    }

    pub fn mul(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(CycloError::DimMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = CycloMatrix::zero(self.conductor, self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.checked_mul(b)?;
                    let cur = out.get(i, j).checked_add(&prod)?;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn scale_elem(&self, c: &CycloElem) -> Result<CycloMatrix, CycloError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.checked_mul(c))
            .collect::<Result<_, _>>()?;
        Ok(CycloMatrix {
            conductor: self.conductor,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale_rat(&self, q: &Rat) -> CycloMatrix {
        CycloMatrix {
            conductor: self.conductor,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(q)).collect(),
        }
    }

    pub fn transpose(&self) -> CycloMatrix {
        let mut out = CycloMatrix {
            conductor: self.conductor,
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.clone(),
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Apply a field automorphism entrywise.
    pub fn map_aut(&self, aut: &FieldAut) -> Result<CycloMatrix, CycloError> {
        let entries = self
            .entries
            .iter()
            .map(|e| aut.apply(e))
            .collect::<Result<_, _>>()?;
        Ok(CycloMatrix {
            conductor: self.conductor,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn kronecker(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.check_same_field(other)?;
        let mut out = CycloMatrix::zero(
            self.conductor,
            self.rows * other.rows,
            self.cols * other.cols,
        )?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = a.checked_mul(other.get(k, l))?;
                        out.set(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn direct_sum(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.check_same_field(other)?;
        let mut out = CycloMatrix::zero(
            self.conductor,
            self.rows + other.rows,
            self.cols + other.cols,
        )?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<CycloElem, CycloError> {
        if !self.is_square() {
            return Err(CycloError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut t = CycloElem::zero(self.conductor)?;
        for i in 0..self.rows {
            t = t.checked_add(self.get(i, i))?;
        }
        Ok(t)
    }

    /// Determinant by fraction-free-style Gaussian elimination over the field.
    pub fn det(&self) -> Result<CycloElem, CycloError> {
        if !self.is_square() {
            return Err(CycloError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = CycloElem::one(self.conductor)?;
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m.get(r, col).is_zero());
            let pr = match pivot_row {
                Some(pr) => pr,
                None => return CycloElem::zero(self.conductor),
            };
            if pr != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(col, j, b);
                    m.set(pr, j, a);
                }
                det = det.checked_mul(&CycloElem::from_integer(self.conductor, -1)?)?;
            }
            let pivot = m.get(col, col).clone();
            det = det.checked_mul(&pivot)?;
            let piv_inv = pivot.inv()?;
            for r in (col + 1)..n {
                let factor = m.get(r, col).checked_mul(&piv_inv)?;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = factor.checked_mul(m.get(col, j))?;
                    let v = m.get(r, j).checked_sub(&sub)?;
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse via Gauss–Jordan; errors on singular input.
    pub fn inverse(&self) -> Result<CycloMatrix, CycloError> {
        if !self.is_square() {
            return Err(CycloError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = CycloMatrix::identity(self.conductor, n)?;
        for col in 0..n {
            let pr = (col..n)
                .find(|&r| !m.get(r, col).is_zero())
                .ok_or(CycloError::Singular)?;
            if pr != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j).clone(), m.get(pr, j).clone());
                    m.set(col, j, b);
                    m.set(pr, j, a);
                    let (a, b) = (inv.get(col, j).clone(), inv.get(pr, j).clone());
                    inv.set(col, j, b);
                    inv.set(pr, j, a);
                }
            }
            let piv_inv = m.get(col, col).inv()?;
            for j in 0..n {
                let v = m.get(col, j).checked_mul(&piv_inv)?;
                m.set(col, j, v);
                let v = inv.get(col, j).checked_mul(&piv_inv)?;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in 0..n {
                    let sub = factor.checked_mul(m.get(col, j))?;
                    let v = m.get(r, j).checked_sub(&sub)?;
                    m.set(r, j, v);
                    let sub = factor.checked_mul(inv.get(col, j))?;
                    let v = inv.get(r, j).checked_sub(&sub)?;
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Integer power, negative exponents via the inverse.
    pub fn pow(&self, e: i64) -> Result<CycloMatrix, CycloError> {
        if !self.is_square() {
            return Err(CycloError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = CycloMatrix::identity(self.conductor, self.rows)?;
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            sq = sq.mul(&sq)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Characteristic polynomial det(tI - A), ascending coefficients,
    /// computed by the Faddeev–LeVerrier recurrence (exact arithmetic).
    pub fn char_poly(&self) -> Result<Vec<CycloElem>, CycloError> {
        if !self.is_square() {
            return Err(CycloError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![CycloElem::zero(self.conductor)?; n + 1];
        coeffs[n] = CycloElem::one(self.conductor)?;
        let mut m = CycloMatrix::identity(self.conductor, n)?;
        for k in 1..=n {
            m = self.mul(&m)?;
            let c = m
                .trace()?
                .scale(&Rat::new((-1i64).into(), (k as i64).into()));
            coeffs[n - k] = c.clone();
            for i in 0..n {
                let v = m.get(i, i).checked_add(&c)?;
                m.set(i, i, v);
            }
        }
        Ok(coeffs)
    }

    /// A basis of the column space, as a matrix whose columns are
    /// pivot columns of the reduced form (deterministic).
    pub fn column_space_basis(&self) -> Result<CycloMatrix, CycloError> {
        let mut m = self.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let pr = (row..self.rows).find(|&r| !m.get(r, col).is_zero());
            let pr = match pr {
                Some(pr) => pr,
                None => continue,
            };
            if pr != row {
                for j in 0..self.cols {
                    let (a, b) = (m.get(row, j).clone(), m.get(pr, j).clone());
                    m.set(row, j, b);
                    m.set(pr, j, a);
                }
            }
            let piv_inv = m.get(row, col).inv()?;
            for j in 0..self.cols {
                let v = m.get(row, j).checked_mul(&piv_inv)?;
                m.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in 0..self.cols {
                    let sub = factor.checked_mul(m.get(row, j))?;
                    let v = m.get(r, j).checked_sub(&sub)?;
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut out = CycloMatrix::zero(self.conductor, self.rows, pivots.len())?;
        for (k, &col) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, col).clone());
            }
        }
        Ok(out)
    }

    /// Solve A x = b for x (A square invertible).
    pub fn solve(&self, b: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.inverse()?.mul(b)
    }

    pub fn rank(&self) -> Result<usize, CycloError> {
        Ok(self.column_space_basis()?.cols)
    }
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "CycloMatrix(N={}, {}x{})",
            self.conductor, self.rows, self.cols
        )?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| format!("{}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn from_ints(n: u64, rows: usize, cols: usize, vals: &[i64]) -> CycloMatrix {
        let entries = vals
            .iter()
            .map(|&v| CycloElem::from_integer(n, v).unwrap())
            .collect();
        CycloMatrix::new(n, rows, cols, entries).unwrap()
    }

    #[test]
    fn char_poly_of_identity_two_by_two() {
        let id = CycloMatrix::identity(4, 2).unwrap();
        let cp = id.char_poly().unwrap();
        // (t - 1)^2 = 1 - 2t + t^2
        assert_eq!(cp[0], CycloElem::from_integer(4, 1).unwrap());
        assert_eq!(cp[1], CycloElem::from_integer(4, -2).unwrap());
        assert_eq!(cp[2], CycloElem::from_integer(4, 1).unwrap());
    }

    #[test]
    fn char_poly_of_diagonal_fourth_roots() {
        // diag(i, -i) over Q(z_4): char poly t^2 + 1
        let i = CycloElem::root_of_unity(4, 1).unwrap();
        let mi = CycloElem::root_of_unity(4, 3).unwrap();
        let z = CycloElem::zero(4).unwrap();
        let m = CycloMatrix::new(4, 2, 2, vec![i, z.clone(), z, mi]).unwrap();
        let cp = m.char_poly().unwrap();
        assert_eq!(cp[0], CycloElem::from_integer(4, 1).unwrap());
        assert!(cp[1].is_zero());
        assert_eq!(cp[2], CycloElem::from_integer(4, 1).unwrap());
    }

    #[test]
    fn char_poly_of_companion_matrix() {
        // companion of t^3 - 2
        let m = from_ints(1, 3, 3, &[0, 0, 2, 1, 0, 0, 0, 1, 0]);
        let cp = m.char_poly().unwrap();
        assert_eq!(cp[0], CycloElem::from_integer(1, -2).unwrap());
        assert!(cp[1].is_zero());
        assert!(cp[2].is_zero());
        assert_eq!(cp[3], CycloElem::from_integer(1, 1).unwrap());
    }

    #[test]
    fn inverse_det_and_cayley_hamilton_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &n in &[1u64, 3, 8] {
            for size in 1..=4usize {
                let entries: Vec<CycloElem> = (0..size * size)
                    .map(|_| {
                        let k = rng.gen_range(0..n.max(1)) as i64;
                        let c = rng.gen_range(-3i64..=3);
                        CycloElem::root_of_unity(n, k)
                            .unwrap()
                            .scale(&Rat::from_integer(BigInt::from(c)))
                    })
                    .collect();
                let m = CycloMatrix::new(n, size, size, entries).unwrap();
                let det = m.det().unwrap();
                if !det.is_zero() {
                    let inv = m.inverse().unwrap();
                    assert!(m.mul(&inv).unwrap().is_identity());
                    assert!((&det * &inv.det().unwrap()).is_one());
                    assert!(m.pow(-2).unwrap().mul(&m.pow(2).unwrap()).unwrap().is_identity());
                } else {
                    assert!(m.inverse().is_err());
                }
                // Cayley–Hamilton: p(A) = 0
                let cp = m.char_poly().unwrap();
                let mut acc = CycloMatrix::zero(n, size, size).unwrap();
                for (k, c) in cp.iter().enumerate() {
                    acc = acc.add(&m.pow(k as i64).unwrap().scale_elem(c).unwrap()).unwrap();
                }
                assert!(acc.entries.iter().all(|e| e.is_zero()));
                // det(A) = (-1)^size * cp[0]
                let sign = if size % 2 == 0 { 1 } else { -1 };
                assert_eq!(det, cp[0].scale(&Rat::from_integer(BigInt::from(sign))));
            }
        }
    }

    #[test]
    fn trace_is_conjugation_invariant() {
        let a = from_ints(1, 2, 2, &[1, 2, 3, 4]);
        let p = from_ints(1, 2, 2, &[1, 1, 0, 1]);
        let conj = p.mul(&a).unwrap().mul(&p.inverse().unwrap()).unwrap();
        assert_eq!(a.trace().unwrap(), conj.trace().unwrap());
    }

    #[test]
    fn kronecker_trace_is_product_of_traces() {
        let a = from_ints(4, 2, 2, &[1, 2, 0, 3]);
        let b = from_ints(4, 3, 3, &[2, 0, 1, 0, 1, 0, 1, 0, 2]);
        let k = a.kronecker(&b).unwrap();
        assert_eq!(
            k.trace().unwrap(),
            a.trace().unwrap().checked_mul(&b.trace().unwrap()).unwrap()
        );
        let ds = a.direct_sum(&b).unwrap();
        assert_eq!(
            ds.trace().unwrap(),
            a.trace().unwrap().checked_add(&b.trace().unwrap()).unwrap()
        );
    }

    #[test]
    fn column_space_basis_has_rank_many_columns() {
        let m = from_ints(1, 3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert_eq!(m.rank().unwrap(), 2);
        let b = m.column_space_basis().unwrap();
        assert_eq!(b.cols(), 2);
        assert_eq!(b.rank().unwrap(), 2);
    }
}
