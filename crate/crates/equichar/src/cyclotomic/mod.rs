//! Exact arithmetic in cyclotomic fields Q(zeta_N) and dense linear algebra
//! over them. Every trace, character, and projector in this crate lives here.

mod elem;
mod matrix;
mod poly;

pub use elem::{parse_cyclo, CycloElem, FieldAut};
pub use matrix::CycloMatrix;
pub use poly::Rat;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("conductor must be >= 1")]
    ZeroConductor,
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },
    #[error("automorphism exponent {exponent} is not coprime to conductor {conductor}")]
    BadAutExponent { exponent: u64, conductor: u64 },
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Euler's totient, by trial division. Conductors here are tiny.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_small_values() {
        let vals = [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (8, 4), (12, 4), (60, 16)];
        for (n, phi) in vals {
            assert_eq!(euler_phi(n), phi, "phi({n})");
        }
    }
}
