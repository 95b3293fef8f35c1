//! Prime-field arithmetic, additive character indices, and multiplicative
//! subgroups of `F_p^*`.
//!
//! Elements are plain residues wrapped in [`Fe`]; all arithmetic goes through a
//! [`PrimeField`], which is `Copy` and can be shared freely across workers.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A residue in `[0, p)`. The modulus lives in the [`PrimeField`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1u64 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 as u64 + b.0 as u64;
        Fe((s % self.p as u64) as u32)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 as u64 + (self.p - b.0) as u64;
        Fe((s % self.p as u64) as u32)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            a
        } else {
            Fe(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Exponent `a` with `e_p(x) = exp(2πi a / p)`. For prime fields the trace is
    /// the identity, so this is the residue itself.
    #[inline]
    pub fn char_index(&self, x: Fe) -> u32 {
        x.0
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.p).map(Fe)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    pub fn primitive_root(&self) -> Fe {
        if self.p == 2 {
            return Fe::ONE;
        }
        (2..self.p)
            .map(Fe)
            .find(|&g| self.order(g) == Some(self.p - 1))
            .expect("every prime field has a primitive root")
    }

    /// The unique subgroup of `F_p^*` of order `m`.
    pub fn delta_subgroup(&self, m: u32) -> Result<DeltaSubgroup> {
        if m == 0 || !(self.p - 1).is_multiple_of(m) {
            return Err(Error::NotAdmissible(format!(
                "{m} does not divide p-1 = {}",
                self.p - 1
            )));
        }
        let g = self.pow(self.primitive_root(), ((self.p - 1) / m) as u64);
        let mut powers = Vec::with_capacity(m as usize);
        let mut log = vec![None; self.p as usize];
        let mut x = Fe::ONE;
        for k in 0..m {
            powers.push(x);
            log[x.0 as usize] = Some(k);
            x = self.mul(x, g);
        }
        let mut elements = powers.clone();
        elements.sort();
        Ok(DeltaSubgroup {
            field: *self,
            m,
            generator: g,
            elements,
            powers,
            log,
        })
    }
}

/// The order-`m` subgroup Δ of `F_p^*`, with a discrete-log table relative to
/// its generator.
#[derive(Clone, Debug)]
pub struct DeltaSubgroup {
    field: PrimeField,
    m: u32,
    generator: Fe,
    elements: Vec<Fe>,
    powers: Vec<Fe>,
    log: Vec<Option<u32>>,
}

impl DeltaSubgroup {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    /// Elements in increasing residue order.
    pub fn elements(&self) -> &[Fe] {
        &self.elements
    }

    pub fn contains(&self, x: Fe) -> bool {
        self.log[x.0 as usize].is_some()
    }

    /// `k` with `x = g^k`, if `x ∈ Δ`.
    pub fn log(&self, x: Fe) -> Option<u32> {
        self.log[x.0 as usize]
    }

    /// `g^k` for any integer `k`.
    pub fn power(&self, k: i64) -> Fe {
        self.powers[k.rem_euclid(self.m as i64) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.inv(Fe(2)).unwrap(), Fe(3));
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.pow(Fe(3), 6), Fe(1));
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.neg(Fe(1)), Fe(1));
        assert_eq!(f5.inv(Fe(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2147483647).is_ok());
    }

    #[test]
    fn char_index_is_residue() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.char_index(Fe(3)), 3);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.char_index(Fe(0)), 0);
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.char_index(f7.add(Fe(5), Fe(4))), 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in (2..100u64).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                assert_eq!(f.sub(a, a), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn delta_subgroups() {
        let f7 = PrimeField::new(7).unwrap();
        let d = f7.delta_subgroup(3).unwrap();
        // brute force: all x with x^3 = 1
        let brute: Vec<Fe> = f7
            .elements()
            .filter(|&x| !x.is_zero() && f7.pow(x, 3) == Fe::ONE)
            .collect();
        assert_eq!(d.elements(), brute.as_slice());
        assert_eq!(d.elements(), &[Fe(1), Fe(2), Fe(4)]);
        assert_eq!(f7.order(d.generator()), Some(3));

        let f5 = PrimeField::new(5).unwrap();
        let d = f5.delta_subgroup(4).unwrap();
        assert_eq!(d.elements(), &[Fe(1), Fe(2), Fe(3), Fe(4)]);
        assert!(matches!(f5.delta_subgroup(3), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn delta_closed_under_mul_and_inv() {
        for p in [5u64, 7, 13, 31, 37] {
            let f = PrimeField::new(p).unwrap();
            for m in (1..p as u32).filter(|m| (p as u32 - 1).is_multiple_of(*m)) {
                let d = f.delta_subgroup(m).unwrap();
                assert_eq!(d.elements().len(), m as usize);
                for &a in d.elements() {
                    assert!(d.contains(f.inv(a).unwrap()));
                    for &b in d.elements() {
                        assert!(d.contains(f.mul(a, b)));
                    }
                    assert_eq!(d.power(d.log(a).unwrap() as i64), a);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality_precheck() {
        // summing unit vectors at char_index(x) over F_p gives the all-ones histogram
        for p in [2u64, 3, 5, 7, 11] {
            let f = PrimeField::new(p).unwrap();
            let mut hist = vec![0u32; p as usize];
            for x in f.elements() {
                hist[f.char_index(x) as usize] += 1;
            }
            assert!(hist.iter().all(|&c| c == 1));
        }
    }
}
