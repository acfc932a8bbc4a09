//! Elements of the cyclotomic field Q(z_N) in the power basis.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{invert_mod, minimal_polynomial, rem_monic, Rat};
use super::{euler_phi, CycloError};

/// An element of Q(z_N), stored as rational coefficients of
/// 1, z, ..., z^(phi(N)-1) where z is a primitive N-th root of unity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    conductor: u64,
    coeffs: Vec<Rat>,
}

impl CycloElem {
    fn degree(conductor: u64) -> usize {
        euler_phi(conductor) as usize
    }

    /// Reduce raw coefficients (for powers z^0, z^1, ...) into the power basis.
    pub fn from_raw(conductor: u64, raw: &[Rat]) -> Result<CycloElem, CycloError> {
        if conductor == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let n = conductor as usize;
        let d = Self::degree(conductor);
        // fold exponents mod N first, since z^N = 1
        let mut folded = vec![Rat::zero(); n.max(raw.len().min(n))];
        folded.resize(n, Rat::zero());
        for (i, c) in raw.iter().enumerate() {
            folded[i % n] += c;
        }
        let min = minimal_polynomial(conductor);
        let mut reduced = rem_monic(&folded, &min);
        reduced.resize(d, Rat::zero());
        Ok(CycloElem {
            conductor,
            coeffs: reduced,
        })
    }

    pub fn zero(conductor: u64) -> Result<CycloElem, CycloError> {
        if conductor == 0 {
            return Err(CycloError::ZeroConductor);
        }
        Ok(CycloElem {
            conductor,
            coeffs: vec![Rat::zero(); Self::degree(conductor)],
        })
    }

    pub fn one(conductor: u64) -> Result<CycloElem, CycloError> {
        Self::from_rational(conductor, Rat::one())
    }

    pub fn from_rational(conductor: u64, q: Rat) -> Result<CycloElem, CycloError> {
        let mut e = Self::zero(conductor)?;
        e.coeffs[0] = q;
        Ok(e)
    }

    pub fn from_integer(conductor: u64, n: i64) -> Result<CycloElem, CycloError> {
        Self::from_rational(conductor, Rat::from_integer(BigInt::from(n)))
    }

    /// z^k, the k-th power of the primitive N-th root of unity.
    pub fn root_of_unity(conductor: u64, k: i64) -> Result<CycloElem, CycloError> {
        if conductor == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let n = conductor as i64;
        let k = k.rem_euclid(n) as usize;
        let mut raw = vec![Rat::zero(); k + 1];
        raw[k] = Rat::one();
        Self::from_raw(conductor, &raw)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Return the element as a rational if it lies in Q, else None.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_same(&self, other: &CycloElem) -> Result<(), CycloError> {
        if self.conductor != other.conductor {
            Err(CycloError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElem {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElem {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check_same(other)?;
        let d = self.coeffs.len();
        let mut raw = vec![Rat::zero(); 2 * d.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        CycloElem::from_raw(self.conductor, &raw)
    }

    pub fn scale(&self, q: &Rat) -> CycloElem {
        CycloElem {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<CycloElem, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let min = minimal_polynomial(self.conductor);
        let inv =
            invert_mod(&self.coeffs, &min).ok_or(CycloError::DivisionByZero)?;
        let mut coeffs = inv;
        coeffs.resize(self.coeffs.len(), Rat::zero());
        Ok(CycloElem {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn pow(&self, e: i64) -> Result<CycloElem, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = CycloElem::one(self.conductor)?;
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            sq = sq.checked_mul(&sq)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        self.checked_add(rhs).expect("conductor mismatch")
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        self.checked_sub(rhs).expect("conductor mismatch")
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        self.checked_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl AddAssign<&CycloElem> for CycloElem {
    fn add_assign(&mut self, rhs: &CycloElem) {
        *self = self.checked_add(rhs).expect("conductor mismatch");
    }
}

impl SubAssign<&CycloElem> for CycloElem {
    fn sub_assign(&mut self, rhs: &CycloElem) {
        *self = self.checked_sub(rhs).expect("conductor mismatch");
    }
}

impl MulAssign<&CycloElem> for CycloElem {
    fn mul_assign(&mut self, rhs: &CycloElem) {
        *self = self.checked_mul(rhs).expect("conductor mismatch");
    }
}

/// A field automorphism of Q(z_N), determined by z |-> z^k with gcd(k, N) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldAut {
    conductor: u64,
    exponent: u64,
}

impl FieldAut {
    pub fn new(conductor: u64, exponent: u64) -> Result<FieldAut, CycloError> {
        if conductor == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let exponent = exponent % conductor;
        if conductor > 1 && num_integer::gcd(exponent, conductor) != 1 {
            return Err(CycloError::BadAutExponent {
                exponent,
                conductor,
            });
        }
        Ok(FieldAut {
            conductor,
            exponent: if conductor == 1 { 0 } else { exponent },
        })
    }

    pub fn identity(conductor: u64) -> Result<FieldAut, CycloError> {
        FieldAut::new(conductor, 1 % conductor.max(1))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Complex conjugation z |-> z^(-1).
    pub fn conjugation(conductor: u64) -> Result<FieldAut, CycloError> {
        FieldAut::new(conductor, (conductor - 1) % conductor.max(1))
    }

    pub fn compose(&self, other: &FieldAut) -> Result<FieldAut, CycloError> {
        if self.conductor != other.conductor {
            return Err(CycloError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            });
        }
        FieldAut::new(self.conductor, (self.exponent * other.exponent) % self.conductor)
    }

    pub fn inverse(&self) -> FieldAut {
        if self.conductor == 1 {
            return *self;
        }
        // exponent is a unit mod conductor, so some power of it is the inverse
        let mut inv = 1u64;
        let mut cur = self.exponent % self.conductor;
        while cur != 1 {
            inv = (inv * self.exponent) % self.conductor;
            cur = (cur * self.exponent) % self.conductor;
        }
        FieldAut {
            conductor: self.conductor,
            exponent: inv,
        }
    }

    pub fn apply(&self, x: &CycloElem) -> Result<CycloElem, CycloError> {
        if self.conductor != x.conductor {
            return Err(CycloError::ConductorMismatch {
                left: self.conductor,
                right: x.conductor,
            });
        }
        let n = self.conductor as usize;
        let mut raw = vec![Rat::zero(); n.max(1)];
        for (i, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(i * self.exponent as usize) % n.max(1)] += c;
            }
        }
        CycloElem::from_raw(self.conductor, &raw)
    }
}

fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let term = if i == 0 {
                fmt_rat(&mag)
            } else {
                let var = if i == 1 {
                    "z".to_string()
                } else {
                    format!("z^{}", i)
                };
                if mag.is_one() {
                    var
                } else {
                    format!("{}*{}", fmt_rat(&mag), var)
                }
            };
            if parts.is_empty() {
                if c.is_negative() {
                    parts.push(format!("-{}", term));
                } else {
                    parts.push(term);
                }
            } else if c.is_negative() {
                parts.push(format!("- {}", term));
            } else {
                parts.push(format!("+ {}", term));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem(N={}, {})", self.conductor, self)
    }
}

/// Parse an element of Q(z_N) from polynomial syntax in `z`,
/// e.g. `3/2*z^2 - 1` or `-z + 5`.
pub fn parse_cyclo(conductor: u64, input: &str) -> Result<CycloElem, CycloError> {
    if conductor == 0 {
        return Err(CycloError::ZeroConductor);
    }
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CycloError::Parse("empty input".into()));
    }
    let bytes = s.as_bytes();
    let mut raw: Vec<Rat> = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        // sign
        let mut neg = false;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                neg = !neg;
            }
            i += 1;
        }
        if i >= bytes.len() {
            return Err(CycloError::Parse("dangling sign".into()));
        }
        // optional coefficient
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
            i += 1;
        }
        let coeff_str = &s[start..i];
        let mut coeff = if coeff_str.is_empty() {
            Rat::one()
        } else {
            coeff_str
                .parse::<Rat>()
                .map_err(|e| CycloError::Parse(format!("bad coefficient '{}': {}", coeff_str, e)))?
        };
        // optional * and variable
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            if i >= bytes.len() || bytes[i] != b'z' {
                return Err(CycloError::Parse("expected 'z' after '*'".into()));
            }
        }
        if i < bytes.len() && bytes[i] == b'z' {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start_e = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start_e == i {
                    return Err(CycloError::Parse("missing exponent after '^'".into()));
                }
                exp = s[start_e..i]
                    .parse::<usize>()
                    .map_err(|e| CycloError::Parse(format!("bad exponent: {}", e)))?;
            }
        } else if coeff_str.is_empty() {
            return Err(CycloError::Parse(format!(
                "unexpected character '{}'",
                &s[i..].chars().next().unwrap()
            )));
        }
        if neg {
            coeff = -coeff;
        }
        if raw.len() <= exp {
            raw.resize(exp + 1, Rat::zero());
        }
        raw[exp] += coeff;
    }
    CycloElem::from_raw(conductor, &raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(n: u64, k: i64) -> CycloElem {
        CycloElem::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn fifth_root_has_order_five() {
        let z = zeta(5, 1);
        assert!(z.pow(5).unwrap().is_one());
        assert!(!z.pow(1).unwrap().is_one());
        assert!(!z.pow(4).unwrap().is_one());
    }

    #[test]
    fn sum_of_all_fifth_roots_vanishes() {
        let mut s = CycloElem::zero(5).unwrap();
        for k in 0..5 {
            s += &zeta(5, k);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn exponents_fold_modulo_conductor() {
        // z^6 in Q(z_4) is z^2 = -1
        let z6 = zeta(4, 6);
        assert_eq!(z6, CycloElem::from_integer(4, -1).unwrap());
    }

    #[test]
    fn field_axioms_on_sampled_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &n in &[1u64, 3, 4, 5, 8, 12] {
            let d = euler_phi(n) as usize;
            let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
                let coeffs: Vec<Rat> = (0..d)
                    .map(|_| {
                        Rat::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(rng.gen_range(1i64..=3)))
                    })
                    .collect();
                CycloElem::from_raw(n, &coeffs).unwrap()
            };
            for _ in 0..8 {
                let a = sample(&mut rng);
                let b = sample(&mut rng);
                let c = sample(&mut rng);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!((&a * &b).checked_mul(&c).unwrap(), a.checked_mul(&(&b * &c)).unwrap());
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a * &b, &b * &a);
                if !a.is_zero() {
                    let inv = a.inv().unwrap();
                    assert!((&a * &inv).is_one());
                }
            }
        }
    }

    #[test]
    fn galois_orbit_of_primitive_root_has_full_size() {
        for &n in &[5u64, 8, 12] {
            let z = zeta(n, 1);
            let mut orbit = std::collections::HashSet::new();
            for k in 1..n {
                if num_integer::gcd(k, n) == 1 {
                    let aut = FieldAut::new(n, k).unwrap();
                    orbit.insert(format!("{}", aut.apply(&z).unwrap()));
                }
            }
            assert_eq!(orbit.len() as u64, euler_phi(n));
        }
    }

    #[test]
    fn automorphisms_compose_and_invert() {
        let a = FieldAut::new(12, 5).unwrap();
        let b = FieldAut::new(12, 7).unwrap();
        let z = zeta(12, 1);
        let lhs = a.apply(&b.apply(&z).unwrap()).unwrap();
        let rhs = a.compose(&b).unwrap().apply(&z).unwrap();
        assert_eq!(lhs, rhs);
        let ainv = a.inverse();
        assert_eq!(a.compose(&ainv).unwrap(), FieldAut::identity(12).unwrap());
        let x = parse_cyclo(12, "z^3 - 2/3*z + 1").unwrap();
        assert_eq!(ainv.apply(&a.apply(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn parse_round_trips_display() {
        for s in ["3/2*z^2 - 1", "-z + 5", "0", "z", "1/3 + z^3 - 2*z"] {
            let e = parse_cyclo(12, s).unwrap();
            let back = parse_cyclo(12, &format!("{}", e)).unwrap();
            assert_eq!(e, back);
        }
        assert!(parse_cyclo(12, "z^^2").is_err());
        assert!(parse_cyclo(12, "").is_err());
        assert!(parse_cyclo(0, "1").is_err());
    }

    #[test]
    fn bad_automorphism_exponent_rejected() {
        assert!(FieldAut::new(12, 4).is_err());
        assert!(FieldAut::new(12, 6).is_err());
        assert!(FieldAut::new(1, 0).is_ok());
    }
}
